"""Verification engines for division sequences."""

from fractions import Fraction
from math import comb, factorial, gcd, lcm

import mpmath

from .errors import (InvalidArgument, NonIntegralResult, NotAnLDS,
                     PDividesGamma, PreconditionViolation, RepeatedPoint, UnsupportedField,
                     UnsupportedSplittingField, VerificationFailed)
from .exactnum import AlgNum, UniPoly, factor
from .linalg import det
from .lrs import RecurrenceSpec, recurrence_to_closed_form


def _int_terms(seq, upto, start=1):
    # slot 0 is padding: u_0 plays no part in the division tests
    out = [None] * start
    for n in range(start, upto + 1):
        v = Fraction(seq(n))
        if v.denominator != 1:
            raise NonIntegralResult(f"u_{n} = {v} is not an integer")
        out.append(int(v))
    return out


def _divides(a, b):
    return b == 0 if a == 0 else b % a == 0


# ---------------------------------------------------------------- division checks

class DivisionReport:
    def __init__(self, bound, pairs, holds, witness, strong=None, strong_witness=None):
        self.bound = bound
        self.pairs = pairs
        self.holds = holds
        self.witness = witness
        self.strong = strong
        self.strong_witness = strong_witness

    @property
    def ok(self):
        return self.holds and self.strong is not False

    def recheck(self, seq):
        """Re-verify the stored counterexamples against seq; True if they are genuine."""
        good = True
        if self.witness:
            m, n = self.witness["m"], self.witness["n"]
            um, un = int(seq(m)), int(seq(n))
            good &= n % m == 0 and not _divides(um, un)
        if self.strong_witness:
            m, n = self.strong_witness["m"], self.strong_witness["n"]
            good &= gcd(int(seq(m)), int(seq(n))) != abs(int(seq(gcd(m, n))))
        return good

    def to_json(self):
        out = {"bound": self.bound, "pairs_tested": self.pairs, "division": self.holds,
               "witness": self.witness}
        if self.strong is not None:
            out["strong"] = self.strong
            out["strong_witness"] = self.strong_witness
        return out

    def __repr__(self):
        return f"DivisionReport(bound={self.bound}, division={self.holds}, strong={self.strong})"


def _division_scan(u, bound):
    pairs = 0
    for m in range(1, bound + 1):
        for n in range(m, bound + 1, m):
            pairs += 1
            if not _divides(u[m], u[n]):
                return pairs, {"m": m, "n": n, "u_m": u[m], "u_n": u[n]}
    return pairs, None


def check_division(seq, bound):
    """u_m | u_n for all m | n <= bound."""
    if bound < 2:
        raise InvalidArgument("bound must be >= 2")
    u = _int_terms(seq, bound)
    pairs, wit = _division_scan(u, bound)
    return DivisionReport(bound, pairs, wit is None, wit)


def check_strong(seq, bound):
    """Division and gcd(u_m, u_n) = |u_(m,n)| for all m, n <= bound."""
    if bound < 2:
        raise InvalidArgument("bound must be >= 2")
    u = _int_terms(seq, bound)
    pairs, wit = _division_scan(u, bound)
    swit = None
    for m in range(1, bound + 1):
        for n in range(m + 1, bound + 1):
            pairs += 1
            g = gcd(u[m], u[n])
            if g != abs(u[gcd(m, n)]):
                swit = {"m": m, "n": n, "gcd": g, "u_gcd": u[gcd(m, n)]}
                break
        if swit:
            break
    return DivisionReport(bound, pairs, wit is None, wit, swit is None, swit)


# ---------------------------------------------------------------- zero structure

class ZeroStructure:
    def __init__(self, M, divisors, bound):
        self.M = M
        self.divisors = divisors
        self.bound = bound

    def to_json(self):
        return {"M": self.M, "divisors": self.divisors, "bound": self.bound,
                "positive_zeros": bool(self.divisors)}

    def __repr__(self):
        return f"ZeroStructure(M={self.M}, divisors={self.divisors})"


def zero_structure(seq, bound):
    rep = check_division(seq, bound)
    if not rep.holds:
        raise NotAnLDS(f"division fails at {rep.witness}")
    u = _int_terms(seq, bound)
    ds = []
    for n in range(1, bound + 1):
        if u[n] == 0 and not any(n % d == 0 for d in ds):
            ds.append(n)
    for n in range(1, bound + 1):
        if (u[n] == 0) != any(n % d == 0 for d in ds):
            raise VerificationFailed("zero set is not a union of divisor classes", n)
    M = 1
    for d in ds:
        M = lcm(M, d)
    return ZeroStructure(M, ds, bound)


# ---------------------------------------------------------------- Vandermonde

def vandermonde_matrix(ks, xs):
    """Confluent Vandermonde: entry (i, (j, l)) = i**l * x_j**i / l!."""
    k = sum(ks)
    xs = [x if isinstance(x, AlgNum) else Fraction(x) for x in xs]
    cols = []
    for kj, x in zip(ks, xs):
        for ell in range(kj):
            f = factorial(ell)
            cols.append([Fraction(i ** ell, f) * x ** i for i in range(k)])
    return [[c[i] for c in cols] for i in range(k)]


def _check_points(ks, xs):
    if len(ks) != len(xs) or any(kj < 1 for kj in ks):
        raise InvalidArgument("need one positive multiplicity per point")
    for i, x in enumerate(xs):
        if x == 0:
            raise InvalidArgument("points must be nonzero")
        for y in xs[:i]:
            if x == y:
                raise RepeatedPoint(f"point {x} repeated")


def vandermonde_det(ks, xs):
    _check_points(ks, xs)
    return det(vandermonde_matrix(ks, xs))


def vandermonde_closed_form(ks, xs):
    """prod x_j**C(k_j, 2) * prod_{i<j} (x_i - x_j)**(k_i k_j)."""
    _check_points(ks, xs)
    acc = 1
    for kj, x in zip(ks, xs):
        acc = acc * x ** comb(kj, 2)
    for j in range(len(xs)):
        for i in range(j):
            acc = acc * (xs[i] - xs[j]) ** (ks[i] * ks[j])
    return acc


# ---------------------------------------------------------------- coolio

def coolio_divisor(ep, n):
    """prod (n a_j^(n-1))**C(k_j,2) * prod_{i<j} ((a_i^n - a_j^n)/(a_i - a_j))**(k_i k_j)."""
    roots = ep.roots
    ks = ep.multiplicities()
    acc = AlgNum(1)
    for a, kj in zip(roots, ks):
        c = comb(kj, 2)
        if c:
            acc = acc * (n * a ** (n - 1)) ** c
    pw = [a ** n for a in roots]
    for j in range(len(roots)):
        for i in range(j):
            acc = acc * ((pw[i] - pw[j]) / (roots[i] - roots[j])) ** (ks[i] * ks[j])
    return acc


def _basis_matrix(spec, n):
    k = spec.order
    cols = []
    for ell in range(k):
        b = RecurrenceSpec(spec.coeffs, [int(i == ell) for i in range(k)])
        cols.append([b(i * n) for i in range(k)])
    return [[c[i] for c in cols] for i in range(k)]


def check_coolio(spec, n_max):
    """gcd(x_0, x_n, ..., x_(k-1)n) divides gcd(x_0..x_(k-1)) * D_n for n <= n_max.

    D_n is det of the matrix of basis sequences at 0, n, ..., (k-1)n; when the
    roots lie in a supported field it is cross-checked against the root product.
    """
    if not spec.is_integral():
        raise PreconditionViolation("integer recurrence required")
    k = spec.order
    x = [int(v) for v in spec.initial]
    g0 = 0
    for v in x:
        g0 = gcd(g0, v)
    try:
        # the last basis sequence sees every characteristic root
        ep = recurrence_to_closed_form(RecurrenceSpec(spec.coeffs, [0] * (k - 1) + [1]))
    except (UnsupportedSplittingField, UnsupportedField):
        ep = None
    rows = []
    holds = True
    for n in range(1, n_max + 1):
        D = det(_basis_matrix(spec, n))
        if D.denominator != 1:
            raise VerificationFailed("basis determinant is not an integer", n)
        D = int(D)
        if ep is not None:
            cd = coolio_divisor(ep, n)
            if not cd.is_rational() or abs(cd.to_fraction()) != abs(D):
                raise VerificationFailed(f"root product {cd} differs from determinant {D}", n)
        G = 0
        for i in range(k):
            G = gcd(G, int(spec(i * n)))
        ok = _divides(G, g0 * D)
        holds &= ok
        rows.append({"n": n, "gcd": G, "det": D, "holds": ok})
    return {"order": k, "g0": g0, "root_product_checked": ep is not None, "holds": holds, "rows": rows}


# ---------------------------------------------------------------- p-adic

def _vp(n, p):
    if n == 0:
        raise InvalidArgument("valuation of zero")
    n = abs(n)
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def _rat_mod(g, p, e):
    g = Fraction(g)
    if g.numerator % p == 0 or g.denominator % p == 0:
        raise PDividesGamma(f"{p} divides {g}")
    pe = p ** e
    return g.numerator * pow(g.denominator, -1, pe) % pe


def padic_order(gamma, p, e=1):
    """Multiplicative order g_e of gamma modulo p**e."""
    x = _rat_mod(gamma, p, e)
    pe = p ** e
    acc, k = x, 1
    while acc != 1:
        acc = acc * x % pe
        k += 1
    return k


def padic_valuation_direct(gamma, p, j):
    g = Fraction(gamma)
    if g.numerator % p == 0 or g.denominator % p == 0:
        raise PDividesGamma(f"{p} divides {g}")
    return _vp(g.numerator ** j - g.denominator ** j, p)


def padic_valuation_law(gamma, p, j):
    """v_p(gamma**j - 1) from the order of gamma mod p**e (e = 2 when p = 2)."""
    g = Fraction(gamma)
    if j < 1:
        raise InvalidArgument("j must be >= 1")
    e = 2 if p == 2 else 1
    ge = padic_order(g, p, e)
    if j % ge:
        if p == 2:
            # j odd with gamma = 3 mod 4: gamma**j - 1 = (gamma - 1) * (odd)
            return padic_valuation_direct(g, 2, 1)
        return 0
    return padic_valuation_direct(g, p, ge) + _vp(j // ge, p)


# ---------------------------------------------------------------- rank of apparition

def rank_of_apparition(seq, pe, bound=200):
    """Least D <= bound with pe | u_D; the iff pe | u_n <=> D | n is verified up to bound."""
    if pe < 2:
        raise InvalidArgument("need a prime power >= 2")
    u = _int_terms(seq, bound)
    D = next((n for n in range(1, bound + 1) if u[n] % pe == 0), None)
    if D is None:
        return None
    for n in range(1, bound + 1):
        if (u[n] % pe == 0) != (n % D == 0):
            raise VerificationFailed(f"{pe} | u_n does not match {D} | n", n)
    return D


# ---------------------------------------------------------------- multiplicative dependence

class MultDep:
    """u_i = torsion_i * w**r_i with gcd(r) = 1, or independent."""

    def __init__(self, dependent, w=None, torsion=None, exponents=None):
        self.dependent = dependent
        self.w = w
        self.torsion = torsion
        self.exponents = exponents

    def to_json(self):
        if not self.dependent:
            return {"dependent": False}
        return {"dependent": True, "w": str(self.w), "torsion": [str(t) for t in self.torsion],
                "exponents": self.exponents}

    def __repr__(self):
        if not self.dependent:
            return "MultDep(independent)"
        return f"MultDep(w={self.w}, torsion={[str(t) for t in self.torsion]}, r={self.exponents})"


def _prime_vec(q, primes):
    return [_vp(q.numerator, p) - _vp(q.denominator, p) for p in primes]


def mult_dep_normalize(us, R=None):
    if not us:
        raise InvalidArgument("need at least one number")
    if all(not isinstance(u, AlgNum) or u.is_rational() for u in us):
        qs = [Fraction(u.to_fraction() if isinstance(u, AlgNum) else u) for u in us]
        if any(abs(q) in (0, 1) for q in qs):
            raise PreconditionViolation("numbers must be nonzero and not roots of unity")
        primes = set()
        for q in qs:
            primes.update(p for p, _ in factor(q.numerator))
            primes.update(p for p, _ in factor(q.denominator))
        primes = sorted(primes)
        vecs = [_prime_vec(q, primes) for q in qs]
        base = vecs[0]
        g = 0
        for x in base:
            g = gcd(g, x)
        prim = [x // g for x in base]
        rs = []
        for v in vecs:
            piv = next(i for i, x in enumerate(prim) if x)
            r = Fraction(v[piv], prim[piv])
            if r.denominator != 1 or any(a != r * b for a, b in zip(v, prim)):
                return MultDep(False)
            rs.append(int(r))
        h = 0
        for r in rs:
            h = gcd(h, r)
        if rs[0] < 0:
            h = -h
        rs = [r // h for r in rs]
        w = Fraction(1)
        for p, x in zip(primes, prim):
            w *= Fraction(p) ** (x * h)
        tors = [q / w ** r for q, r in zip(qs, rs)]
        return MultDep(True, w, tors, rs)
    from .multdep import SEARCH_RADIUS, multiplicative_basis
    al = [u if isinstance(u, AlgNum) else AlgNum(u) for u in us]
    if any(a.is_zero() or a.is_root_of_unity() is not None for a in al):
        raise PreconditionViolation("numbers must be nonzero and not roots of unity")
    b = multiplicative_basis(al, R or SEARCH_RADIUS)
    if len(b.gammas) != 1:
        return MultDep(False)
    rs = [e[0] for e in b.E]
    w = b.gammas[0]
    if rs[0] < 0:
        w, rs = w.inv(), [-r for r in rs]
    tors = [a / w ** r for a, r in zip(al, rs)]
    return MultDep(True, w, tors, rs)


def _unit_order(t):
    if isinstance(t, AlgNum):
        return t.is_root_of_unity()
    return 1 if t == 1 else 2


def gcd_collapse_check(us, n_range):
    """Per n: gcd of numerators of u_i**n - 1 against the numerator of w**n - 1 (rationals)."""
    dep = mult_dep_normalize(us)
    if not dep.dependent:
        raise PreconditionViolation("numbers are multiplicatively independent")
    if not isinstance(dep.w, Fraction):
        raise PreconditionViolation("collapse check is implemented over Q")
    qs = [Fraction(u.to_fraction() if isinstance(u, AlgNum) else u) for u in us]
    orders = [_unit_order(t) for t in dep.torsion]
    w = dep.w
    rows = []
    holds = True
    for n in n_range:
        G = 0
        for q in qs:
            G = gcd(G, q.numerator ** n - q.denominator ** n)
        W = abs(w.numerator ** n - w.denominator ** n)
        applicable = all(n % o == 0 for o in orders)
        if not applicable:
            status = "torsion"
        elif G <= 2:
            status = "small"
        else:
            status = "ok" if G == W else "fail"
        holds &= status != "fail"
        rows.append({"n": n, "gcd": G, "w_term": W, "status": status})
    return {"w": str(w), "exponents": dep.exponents, "holds": holds, "rows": rows}


# ---------------------------------------------------------------- monomial count

def monomial_bound_check(hs, poly):
    """Check r >= H + 1 when prod (x**c - 1)**h divides sum delta_j x**a_j.

    hs: list of (c, h); poly: {a_j: delta_j} (exponents may be negative).
    Returns a dict with the premise, r, H and the verdict.
    """
    poly = {int(a): Fraction(d) for a, d in poly.items() if d}
    r = len(poly)
    H = sum(h for _, h in hs)
    if not poly:
        raise InvalidArgument("zero polynomial")
    lo = min(poly)
    P = UniPoly([poly.get(lo + i, 0) for i in range(max(poly) - lo + 1)])
    L = UniPoly([1])
    for c, h in hs:
        if c == 0:
            raise InvalidArgument("c = 0 gives x^0 - 1 = 0")
        L = L * UniPoly([-1] + [0] * (abs(c) - 1) + [1]) ** h
    premise = L.divides(P)
    moments = [sum(d * Fraction(a) ** ell for a, d in poly.items()) for ell in range(H)]
    out = {"premise": premise, "r": r, "H": H, "bound_holds": r >= H + 1,
           "moments_vanish": all(m == 0 for m in moments)}
    out["verdict"] = (not premise) or r >= H + 1
    return out


# ---------------------------------------------------------------- gcd growth

def _exceeds(g, eps, s):
    """log(g) > eps * s, decided with enough working precision."""
    if g <= 1:
        return eps * s < 0
    t = eps * s
    dps = 30
    while True:
        with mpmath.workdps(dps):
            diff = mpmath.log(mpmath.mpf(g)) - mpmath.mpf(t.numerator) / t.denominator
            if abs(diff) > mpmath.mpf(10) ** (-dps // 2):
                return diff > 0
        dps *= 2
        if dps > 4000:
            raise VerificationFailed("threshold comparison did not separate")


def gcd_growth_detect(u, v, n_max, eps):
    """All (m, n), m <= n <= n_max, with gcd(u_m, v_n) > exp(eps*(m+n))."""
    eps = Fraction(eps)
    if eps <= 0:
        raise InvalidArgument("eps must be positive")
    a = _int_terms(u, n_max)
    b = _int_terms(v, n_max)
    out = []
    for m in range(1, n_max + 1):
        for n in range(m, n_max + 1):
            g = gcd(a[m], b[n])
            if _exceeds(g, eps, m + n):
                out.append((m, n, g))
    return out
