"""Multiplicative relations among algebraic numbers.

Roots of the form rho * zeta with rho in a quadratic field are handled
exactly: rho^e is torsion iff the norm valuations, the split-prime
valuation differences in each quadratic field and (for real fields) the
regulator coordinate all cancel. Other numbers fall back to a bounded
search.
"""

from fractions import Fraction
from math import gcd, lcm

import mpmath
from sympy.ntheory import sqrt_mod

from .errors import DependenceUndecided, UnsupportedField
from .exactnum import AlgNum, factor
from .linalg import col_hnf, int_det, int_kernel, inverse_int, rank

SEARCH_RADIUS = 12


def _vp(n, p):
    if n == 0:
        return 10 ** 9
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def _int_parts(rho):
    """rho = (a + b*sqrt(d)) / c with integers a, b, c."""
    q = rho.as_quadratic()
    a, b, d = q
    c = a.denominator * b.denominator // gcd(a.denominator, b.denominator)
    return int(a * c), int(b * c), c, d


def _split_root(d, p, K):
    """Canonical p-adic square root of d modulo p**K (p splits in Q(sqrt d))."""
    roots = sqrt_mod(d % p ** K, p ** K, all_roots=True)
    if p == 2:
        roots = [r for r in roots if r % 4 == 1]
        # the two 2-adic roots differ mod 4; keep the lift of the smallest
        base = min(roots, key=lambda r: r % 8)
        return base
    r0 = min(sqrt_mod(d % p, p, all_roots=True))
    return next(r for r in roots if r % p == r0)


def _splits(d, p):
    if p == 2:
        return d % 8 == 1
    if d % p == 0:
        return False
    return pow(d % p, (p - 1) // 2, p) == 1


def _valuation_P(rho_parts, p):
    a, b, c, d = rho_parts
    nrm = a * a - d * b * b
    K = _vp(nrm, p) + 2
    r = _split_root(d, p, K)
    return _vp((a + b * r) % p ** K, p) - _vp(c, p)


class _Invariants:
    """Exact coordinate vectors of rho's in a torsion-free target."""

    def __init__(self, rhos):
        self.rhos = rhos
        self.parts = []
        self.norms = []
        for r in rhos:
            if r.is_rational():
                q = r.to_fraction()
                self.parts.append((q.numerator, 0, q.denominator, 1))
                self.norms.append(q * q)
            else:
                pa = _int_parts(r)
                self.parts.append(pa)
                a, b, c, d = pa
                self.norms.append(Fraction(a * a - d * b * b, c * c))

    def exact_rows(self):
        primes = set()
        for nm in self.norms:
            primes.update(p for p, _ in factor(nm.numerator))
            primes.update(p for p, _ in factor(nm.denominator))
        rows = []
        for p in sorted(primes):
            rows.append([_vp(nm.numerator, p) - _vp(nm.denominator, p) for nm in self.norms])
        fields = sorted({pa[3] for pa in self.parts if pa[3] != 1})
        for d in fields:
            idx = [i for i, pa in enumerate(self.parts) if pa[3] == d]
            fp = set()
            for i in idx:
                nm = self.norms[i]
                fp.update(p for p, _ in factor(nm.numerator) if _splits(d, p))
                fp.update(p for p, _ in factor(nm.denominator) if _splits(d, p))
            for p in sorted(fp):
                row = [0] * len(self.parts)
                for i in idx:
                    vP = _valuation_P(self.parts[i], p)
                    nm = self.norms[i]
                    vN = _vp(nm.numerator, p) - _vp(nm.denominator, p)
                    row[i] = 2 * vP - vN   # v_P - v_P'
                rows.append(row)
        return rows

    def unit_rows(self):
        """Per real quadratic field: log|rho / rho'| (numeric)."""
        out = []
        fields = sorted({pa[3] for pa in self.parts if pa[3] > 1})
        with mpmath.workdps(60):
            for d in fields:
                row = []
                sd = mpmath.sqrt(d)
                for a, b, c, dd in self.parts:
                    if dd != d:
                        row.append(mpmath.mpf(0))
                    else:
                        row.append(mpmath.log(abs((a + b * sd) / (a - b * sd))))
                out.append(row)
        return out


def _field_product(rhos, e):
    """Per-field products y_d = prod rho_i^e_i, as a dict d -> AlgNum."""
    out = {}
    for r, k in zip(rhos, e):
        if k == 0:
            continue
        key = r.d
        out[key] = out.get(key, AlgNum(1)) * r ** k
    return out


def _is_torsion_relation(rhos, e):
    ys = _field_product(rhos, e)
    acc = Fraction(1)
    for y in ys.values():
        y12 = y ** 12
        if not y12.is_rational():
            return False
        acc *= y12.to_fraction()
    return abs(acc) == 1


def _twisted_lattice(alphas):
    rhos = []
    for a in alphas:
        tf = a.twist_form()
        if tf is None:
            return None
        rhos.append(tf[0])
    inv = _Invariants(rhos)
    m = len(rhos)
    rows = inv.exact_rows()
    lat = int_kernel(rows, m) if rows else [[int(i == j) for i in range(m)] for j in range(m)]
    urows = inv.unit_rows()
    if urows and lat:
        with mpmath.workdps(60):
            vals = []
            for ur in urows:
                vals.append([mpmath.fsum(x * l for x, l in zip(lam, ur)) for lam in lat])
            int_rows = []
            for vs in vals:
                nz = [abs(v) for v in vs if abs(v) > mpmath.mpf(10) ** -30]
                if not nz:
                    continue
                ref = min(nz)
                ratios = []
                for v in vs:
                    q = Fraction(mpmath.nstr(v / ref, 40)).limit_denominator(10 ** 6)
                    if abs(v - ref * mpmath.mpf(q.numerator) / q.denominator) > mpmath.mpf(10) ** -30:
                        raise DependenceUndecided("regulator coordinates are not commensurable")
                    ratios.append(q)
                int_rows.append(ratios)
        if int_rows:
            sub = int_kernel(int_rows, len(lat))
            lat = [[sum(c * lam[i] for c, lam in zip(v, lat)) for i in range(m)] for v in sub]
    for e in lat:
        if not _is_torsion_relation(rhos, e):
            raise DependenceUndecided("relation failed exact verification")
    return lat


def _bounded_lattice(alphas, R):
    m = len(alphas)
    rels = []
    for i, a in enumerate(alphas):
        if a.is_root_of_unity() is not None:
            rels.append([int(k == i) for k in range(m)])
    tors = {i for i, a in enumerate(alphas) if a.is_root_of_unity() is not None}
    free = [i for i in range(m) if i not in tors]
    for x in range(len(free)):
        for y in range(x + 1, len(free)):
            i, j = free[x], free[y]
            hit = None
            for r in range(1, R + 1):
                for s in range(-R, R + 1):
                    if s == 0:
                        continue
                    try:
                        t = alphas[i] ** r * alphas[j] ** s
                    except UnsupportedField:
                        continue
                    if t * t.conj() == 1 and t.is_root_of_unity() is not None:
                        hit = (r, s)
                        break
                if hit:
                    break
            if hit is None:
                raise DependenceUndecided(
                    f"no relation between roots {i} and {j} with exponents up to {R}; independence not certified")
            v = [0] * m
            v[i], v[j] = hit
            rels.append(v)
    if not rels:
        return []
    # saturate the found relations
    K = int_kernel(rels, m)
    return int_kernel(K, m) if K else [[int(i == j) for i in range(m)] for j in range(m)]


def relation_lattice(alphas, R=SEARCH_RADIUS):
    """Z-basis of {e : prod alpha_i^e_i is a root of unity} (saturated)."""
    alphas = [a if isinstance(a, AlgNum) else AlgNum(a) for a in alphas]
    lat = _twisted_lattice(alphas)
    if lat is None:
        lat = _bounded_lattice(alphas, R)
    return lat


class Basis:
    """alpha_i = torsion_i * prod_j gamma_j ** E[i][j]."""

    def __init__(self, gammas, E, torsion, M, tors_exp, lattice):
        self.gammas = gammas
        self.E = E
        self.torsion = torsion
        self.M = M
        self.tors_exp = tors_exp
        self.lattice = lattice


def _mono(gens, exps):
    acc = AlgNum(1)
    for g, e in zip(gens, exps):
        if e:
            acc = acc * g ** e
    return acc


def multiplicative_basis(alphas, R=SEARCH_RADIUS, prefer=None):
    alphas = [a if isinstance(a, AlgNum) else AlgNum(a) for a in alphas]
    m = len(alphas)
    lat = relation_lattice(alphas, R)
    s = len(lat)
    r = m - s
    if s:
        H, V, rk = col_hnf(lat)
        if rk != s:
            raise DependenceUndecided("relation lattice is degenerate")
    else:
        V = [[int(i == j) for j in range(m)] for i in range(m)]
    E0 = [[V[i][s + j] for j in range(r)] for i in range(m)]
    Vinv = inverse_int(V)
    order = prefer or sorted(range(m), key=lambda i: _pref_key(alphas[i]))
    try:
        gammas, E = _choose_basis(alphas, E0, Vinv, s, r, order)
        torsion = [alphas[i] / _mono(gammas, E[i]) for i in range(m)]
    except UnsupportedField as ex:
        raise DependenceUndecided(f"basis would mix quadratic fields: {ex}") from ex
    M = 1
    for t in torsion:
        o = t.is_root_of_unity()
        if o is None:
            raise DependenceUndecided("torsion part is not a root of unity")
        M = lcm(M, o)
    zM = AlgNum.zeta(1, M)
    tors_exp = []
    for t in torsion:
        acc, j = AlgNum(1), 0
        while acc != t:
            acc, j = acc * zM, j + 1
        tors_exp.append(j)
    return Basis(gammas, E, torsion, M, tors_exp, lat)


def _pref_key(a):
    try:
        n = abs(a.norm())
    except Exception:
        n = Fraction(10 ** 9)
    z = a.to_complex()
    return (n, -abs(z), -z.real, -z.imag)


def _choose_basis(alphas, E0, Vinv, s, r, order):
    m = len(alphas)
    if r == 0:
        return [], [[] for _ in range(m)]
    sel = []
    for i in order:
        if rank([E0[k] for k in sel + [i]]) == len(sel) + 1:
            sel.append(i)
        if len(sel) == r:
            break
    S = [E0[i] for i in sel]
    if abs(int_det(S)) == 1:
        Sinv = inverse_int(S)
        E = [[sum(E0[i][k] * Sinv[k][j] for k in range(r)) for j in range(r)] for i in range(m)]
        return [alphas[i] for i in sel], E
    # general position: gamma0_j = prod alpha_i ** Vinv[s+j][i], then tidy with a column HNF
    rows = [E0[i] for i in order]
    H, T, _ = col_hnf(rows)
    Tinv = inverse_int(T)
    E = [[sum(E0[i][k] * T[k][j] for k in range(r)) for j in range(r)] for i in range(m)]
    gam0 = [_mono(alphas, Vinv[s + j]) for j in range(r)]
    gammas = [_mono(gam0, Tinv[k]) for k in range(r)]
    return gammas, E
