"""Exact linear algebra over Q, Q(sqrt d, zeta_N) and Z."""

from fractions import Fraction
from math import gcd


def _is_zero(x):
    return x == 0


def row_reduce(rows, ncols):
    """Reduced row echelon form in place; returns pivot column list."""
    pivots = []
    r = 0
    for c in range(ncols):
        if r >= len(rows):
            break
        p = next((i for i in range(r, len(rows)) if not _is_zero(rows[i][c])), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        inv = 1 / rows[r][c] if not isinstance(rows[r][c], int) else Fraction(1, rows[r][c])
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and not _is_zero(rows[i][c]):
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    return pivots


def solve_affine(A, b):
    """Solutions of A x = b as (particular, nullspace basis), or None."""
    n = len(A[0]) if A else 0
    rows = [list(map(_lift, row)) + [_lift(bi)] for row, bi in zip(A, b)]
    piv = row_reduce(rows, n + 1)
    if n in piv:
        return None
    x = [Fraction(0)] * n
    for i, c in enumerate(piv):
        x[c] = rows[i][n]
    free = [c for c in range(n) if c not in piv]
    null = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for i, c in enumerate(piv):
            v[c] = -rows[i][f]
        null.append(v)
    return x, null


def solve(A, b):
    """Unique solution of the square system A x = b."""
    res = solve_affine(A, b)
    if res is None or res[1]:
        raise ValueError("singular system")
    return res[0]


def rank(A):
    if not A:
        return 0
    rows = [list(map(_lift, r)) for r in A]
    return len(row_reduce(rows, len(rows[0])))


def det(M):
    """Determinant by fraction-keeping Gaussian elimination."""
    n = len(M)
    a = [list(map(_lift, r)) for r in M]
    sign = 1
    acc = 1
    for c in range(n):
        p = next((i for i in range(c, n) if not _is_zero(a[i][c])), None)
        if p is None:
            return Fraction(0)
        if p != c:
            a[c], a[p] = a[p], a[c]
            sign = -sign
        piv = a[c][c]
        acc = acc * piv
        inv = 1 / piv
        for i in range(c + 1, n):
            if not _is_zero(a[i][c]):
                f = a[i][c] * inv
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return acc if sign > 0 else -acc


def int_det(M):
    """Bareiss determinant of an integer matrix."""
    n = len(M)
    if n == 0:
        return 1
    a = [list(r) for r in M]
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            p = next((i for i in range(k + 1, n) if a[i][k]), None)
            if p is None:
                return 0
            a[k], a[p] = a[p], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def _lift(x):
    return Fraction(x) if isinstance(x, int) else x


# ---------------------------------------------------------------- lattices

def col_hnf(A):
    """Column echelon form: returns (H, V) with A V = H and V unimodular.

    A is a list of integer rows. Nonzero columns of H come first.
    """
    m = len(A[0]) if A else 0
    H = [list(r) for r in A]
    V = [[int(i == j) for j in range(m)] for i in range(m)]

    def colop(j, k, a, b, c, d):
        # (col_j, col_k) <- (a col_j + b col_k, c col_j + d col_k)
        for M in (H, V):
            for row in M:
                x, y = row[j], row[k]
                row[j], row[k] = a * x + b * y, c * x + d * y

    piv = 0
    for i in range(len(H)):
        if piv >= m:
            break
        for k in range(piv + 1, m):
            if H[i][k] == 0:
                continue
            x, y = H[i][piv], H[i][k]
            g, s, t = _xgcd(x, y)
            colop(piv, k, s, t, -y // g, x // g)
        if H[i][piv] != 0:
            if H[i][piv] < 0:
                for M in (H, V):
                    for row in M:
                        row[piv] = -row[piv]
            p = H[i][piv]
            for k in range(piv):
                q = H[i][k] // p
                if q:
                    for M in (H, V):
                        for row in M:
                            row[k] -= q * row[piv]
            piv += 1
    return H, V, piv


def _xgcd(a, b):
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def int_kernel(A, m=None):
    """Z-basis (list of int vectors) of {x in Z^m : A x = 0}; A has rational rows."""
    if m is None:
        m = len(A[0])
    rows = []
    for r in A:
        den = 1
        for x in r:
            den = den * Fraction(x).denominator // gcd(den, Fraction(x).denominator)
        rows.append([int(Fraction(x) * den) for x in r])
    if not rows:
        return [[int(i == j) for i in range(m)] for j in range(m)]
    H, V, rk = col_hnf(rows)
    return [[V[i][j] for i in range(m)] for j in range(rk, m)]


def inverse_int(U):
    """Inverse of a unimodular integer matrix."""
    n = len(U)
    rows = [[Fraction(x) for x in r] + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(U)]
    row_reduce(rows, 2 * n)
    out = [[r[n + j] for j in range(n)] for r in rows]
    if any(x.denominator != 1 for r in out for x in r):
        raise ValueError("matrix is not unimodular")
    return [[int(x) for x in r] for r in out]
