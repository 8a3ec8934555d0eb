"""Linear recurrence sequences in recurrence form and in closed form."""

from fractions import Fraction
from functools import reduce
from math import gcd

import mpmath
import sympy

from .errors import InvalidArgument, NoRecurrenceDetected, UnsupportedField, UnsupportedSplittingField
from .exactnum import AlgNum, UniPoly, as_fraction, cyclotomic, squarefree_split, totient
from .linalg import solve, solve_affine

MAX_TWIST = 60


class Sequence:
    """A sequence u_0, u_1, ... of rationals."""

    def __call__(self, n):
        raise NotImplementedError

    def terms(self, count, start=0):
        return [self(n) for n in range(start, start + count)]

    def spec_json(self):
        raise NotImplementedError


class FuncSeq(Sequence):
    def __init__(self, f, name="f"):
        self.f = f
        self.name = name

    def __call__(self, n):
        return self.f(n)

    def __repr__(self):
        return f"FuncSeq({self.name})"


class ListSeq(Sequence):
    def __init__(self, values):
        self.values = [as_fraction(v) for v in values]

    def __call__(self, n):
        return self.values[n]


def as_sequence(s):
    if isinstance(s, Sequence):
        return s
    if callable(s):
        return FuncSeq(s)
    return ListSeq(s)


def values(seq, upto, start=0):
    """Terms start..upto-1 of any sequence-like object."""
    if isinstance(seq, Sequence):
        return seq.terms(upto - start, start)
    if callable(seq):
        return [seq(n) for n in range(start, upto)]
    return list(seq[start:upto])


class ProductSeq(Sequence):
    def __init__(self, *parts):
        self.parts = parts

    def __call__(self, n):
        acc = Fraction(1)
        for p in self.parts:
            acc *= p(n)
        return acc

    def terms(self, count, start=0):
        cols = [p.terms(count, start) for p in self.parts]
        return [reduce(lambda x, y: x * y, vals, Fraction(1)) for vals in zip(*cols)]

    def spec_json(self):
        return {"type": "product", "factors": [p.spec_json() for p in self.parts]}


# ---------------------------------------------------------------- recurrence form

class RecurrenceSpec(Sequence):
    """u_n = c_1 u_{n-1} + ... + c_k u_{n-k} with given u_0..u_{k-1}."""

    def __init__(self, coeffs, initial):
        coeffs = [as_fraction(c) for c in coeffs]
        initial = [as_fraction(u) for u in initial]
        if not coeffs:
            raise InvalidArgument("recurrence needs order k >= 1")
        if coeffs[-1] == 0:
            raise InvalidArgument("c_k must be nonzero")
        if len(initial) != len(coeffs):
            raise InvalidArgument("need exactly k initial terms")
        self.coeffs = tuple(coeffs)
        self.initial = tuple(initial)
        self._cache = list(initial)

    @property
    def order(self):
        return len(self.coeffs)

    def is_integral(self):
        return all(c.denominator == 1 for c in self.coeffs + self.initial)

    def _extend(self, n):
        cache, c, k = self._cache, self.coeffs, len(self.coeffs)
        while len(cache) <= n:
            m = len(cache)
            cache.append(sum(c[i] * cache[m - 1 - i] for i in range(k)))

    def __call__(self, n):
        if n < 0:
            raise InvalidArgument("negative index")
        self._extend(n)
        return self._cache[n]

    def terms(self, count, start=0):
        self._extend(start + count)
        return self._cache[start:start + count]

    def charpoly(self):
        return UniPoly([-c for c in reversed(self.coeffs)] + [1])

    def __eq__(self, other):
        return isinstance(other, RecurrenceSpec) and self.coeffs == other.coeffs and self.initial == other.initial

    def __hash__(self):
        return hash((self.coeffs, self.initial))

    def __repr__(self):
        c = ", ".join(map(str, self.coeffs))
        u = ", ".join(map(str, self.initial))
        return f"RecurrenceSpec(coeffs=[{c}], initial=[{u}])"

    def spec_json(self):
        return {"type": "recurrence", "coeffs": [str(c) for c in self.coeffs],
                "initial": [str(u) for u in self.initial]}


# ---------------------------------------------------------------- closed form

def _field_key(x):
    return x.d if isinstance(x, AlgNum) else 1


def _exact_sum(vals):
    """Sum AlgNums that may live in several quadratic fields; result must be rational."""
    groups = {}
    for v in vals:
        if not isinstance(v, AlgNum):
            v = AlgNum(v)
        groups[v.d] = groups.get(v.d, AlgNum(0)) + v
    total = Fraction(0)
    acc = groups.pop(1, AlgNum(0))
    for key in sorted(groups):
        g = groups[key]
        if g.is_rational():
            total += g.to_fraction()
            continue
        try:
            acc = acc + g
        except UnsupportedField as e:
            raise InvalidArgument("closed form value is not rational") from e
    if not acc.is_rational():
        raise InvalidArgument(f"closed form value is not rational: {acc}")
    return total + acc.to_fraction()


class ExpPoly(Sequence):
    """u_n = sum_i g_i(n) alpha_i**n with polynomial coefficients g_i."""

    def __init__(self, terms):
        merged = {}
        order = []
        for g, a in terms:
            a = a if isinstance(a, AlgNum) else AlgNum(as_fraction(a))
            if a.is_zero():
                raise InvalidArgument("roots must be nonzero")
            g = g if isinstance(g, UniPoly) else UniPoly([g])
            key = next((k for k in order if k == a), None)
            if key is None:
                order.append(a)
                merged[a] = g
            else:
                merged[key] = merged[key] + g
        self.items = [(merged[a], a) for a in order if not merged[a].is_zero()]
        self._pow = {}

    @property
    def roots(self):
        return [a for _, a in self.items]

    def multiplicities(self):
        return [g.degree() + 1 for g, _ in self.items]

    @property
    def order(self):
        return sum(self.multiplicities())

    def _eval_terms(self, n, powers):
        vals = []
        for (g, a), p in zip(self.items, powers):
            c = g(n)
            vals.append(c * p)
        return vals

    def __call__(self, n):
        return _exact_sum(self._eval_terms(n, [a ** n for _, a in self.items]))

    def terms(self, count, start=0):
        powers = [a ** start for _, a in self.items]
        out = []
        for n in range(start, start + count):
            out.append(_exact_sum(self._eval_terms(n, powers)))
            powers = [p * a for p, (_, a) in zip(powers, self.items)]
        return out

    def scale(self, c):
        return ExpPoly([(g * c, a) for g, a in self.items])

    def __repr__(self):
        parts = [f"({g})*({a})^n" for g, a in self.items]
        return "ExpPoly(" + " + ".join(parts) + ")"

    def spec_json(self):
        return {"type": "closed_form",
                "terms": [{"coeffs": [c.to_json() if isinstance(c, AlgNum) else {"rat": str(c)} for c in g.c],
                           "root": a.to_json()} for g, a in self.items]}


def product(a, b):
    """Closed form of the termwise product."""
    terms = []
    for g, x in a.items:
        for h, y in b.items:
            terms.append((g * h, x * y))
    return ExpPoly(terms)


# ---------------------------------------------------------------- conversions

def closed_form_to_recurrence(ep):
    groups = {}
    for g, a in ep.items:
        groups.setdefault(a.d, []).append((a, g.degree() + 1))
    f = UniPoly([1])
    pending = UniPoly([1])
    for key in sorted(groups):
        p = UniPoly([1])
        for a, k in groups[key]:
            p = p * UniPoly([-a, 1]) ** k
        if all(isinstance(c, Fraction) for c in p.c):
            f = f * p
        else:
            pending = pending * p
    if pending.degree() > 0:
        if not all(isinstance(c, Fraction) for c in pending.c):
            raise InvalidArgument("closed form roots are not closed under conjugation")
        f = f * pending
    k = f.degree()
    coeffs = [-f[k - i] for i in range(1, k + 1)]
    return RecurrenceSpec(coeffs, ep.terms(k))


def _recog_rational(x, maxden=10 ** 12, tol=None):
    tol = tol if tol is not None else mpmath.mpf(10) ** (-(mpmath.mp.dps // 2))
    f = Fraction(mpmath.nstr(x, mpmath.mp.dps, strip_zeros=False)).limit_denominator(maxden)
    if abs(x - mpmath.mpf(f.numerator) / f.denominator) < tol:
        return f
    return None


def _quad_from_sum_prod(T, P):
    """Roots of x^2 - T x + P as AlgNums."""
    disc = T * T - 4 * P
    if disc == 0:
        return [AlgNum(T / 2)]
    s, t = squarefree_split(disc.numerator * disc.denominator)
    b = Fraction(t, 2 * disc.denominator)
    return [AlgNum.quad(T / 2, b, s), AlgNum.quad(T / 2, -b, s)]


def factor_rational(f):
    """Irreducible factors of a rational polynomial with multiplicities."""
    x = sympy.Symbol("x")
    expr = sum(sympy.Rational(c.numerator, c.denominator) * x ** i for i, c in enumerate(f.c))
    _, facs = sympy.factor_list(sympy.Poly(expr, x, domain="QQ"))
    out = []
    for p, m in facs:
        cs = [Fraction(int(c.p), int(c.q)) for c in reversed(p.all_coeffs())]
        out.append((UniPoly(cs).monic(), m))
    out.sort(key=lambda t: (t[0].degree(), [str(c) for c in t[0].c]))
    return out


def roots_of_irreducible(h, max_twist=MAX_TWIST):
    """Exact roots of an irreducible rational polynomial, or raise."""
    h = h.monic()
    k = h.degree()
    if k == 1:
        return [AlgNum(-h[0])]
    if k == 2:
        return _quad_from_sum_prod(-h[1], h[0])
    if h.is_integral():
        for m in range(1, 4 * k * k + 10):
            if totient(m) == k and cyclotomic(m) == h:
                return [AlgNum.zeta(j, m) for j in range(1, m) if gcd(j, m) == 1]
    found = _recognize(h, max_twist)
    if found is not None:
        return found
    ell = 0
    for i, c in enumerate(h.c):
        if c != 0:
            ell = gcd(ell, i)
    fallback = None
    if ell > 1:
        fallback = (UniPoly([h[i] for i in range(0, k + 1, ell)]), ell)
    raise UnsupportedSplittingField(f"factor {h} does not split over a supported field", fallback)


def _recognize(h, max_twist):
    k = h.degree()
    with mpmath.workdps(60):
        zs = mpmath.polyroots([mpmath.mpf(c.numerator) / c.denominator for c in reversed(h.c)],
                              maxsteps=400, extraprec=400)
        mods = []
        for w in zs:
            m = abs(w)
            if all(abs(m - u) > mpmath.mpf(10) ** -40 for u in mods):
                mods.append(m)
        z = zs[0]
        for L in range(1, max_twist + 1):
            for j in range(L):
                if gcd(j, L) != 1:
                    continue
                w = z * mpmath.expjpi(-mpmath.mpf(2 * j) / L)
                for rho in _rho_candidates(w, mods):
                    alpha = rho * AlgNum.zeta(j, L)
                    if h(alpha) == 0:
                        roots = alpha.conjugates()
                        if len(roots) == k:
                            return roots
    return None


def _rho_candidates(w, mods):
    eps = mpmath.mpf(10) ** -40
    out = []
    if abs(mpmath.im(w)) < eps:
        x = mpmath.re(w)
        q = _recog_rational(x)
        if q is not None:
            out.append(AlgNum(q))
        for m in mods:
            for other in (m, -m):
                T = _recog_rational(x + other)
                P = _recog_rational(x * other)
                if T is None or P is None:
                    continue
                for r in _quad_from_sum_prod(T, P):
                    if abs(r.to_complex() - complex(x)) < 1e-8 * max(1.0, abs(float(x))):
                        out.append(r)
    else:
        T = _recog_rational(2 * mpmath.re(w))
        P = _recog_rational(abs(w) ** 2)
        if T is not None and P is not None:
            for r in _quad_from_sum_prod(T, P):
                if abs(r.to_complex() - complex(w)) < 1e-8 * max(1.0, float(abs(w))):
                    out.append(r)
    return out


def _partial_fractions(P, factors):
    """Split P / prod(factors) into numerators r_i / factors[i]."""
    if len(factors) == 1:
        return [P % factors[0]]
    A = factors[0]
    B = reduce(lambda x, y: x * y, factors[1:], UniPoly([1]))
    s, t = _bezout(A, B)   # s A + t B = 1
    r_A = (P * t) % A
    rest = (P * s) % B
    return [r_A] + _partial_fractions(rest, factors[1:])


def _bezout(a, b):
    r0, r1 = a, b
    s0, s1 = UniPoly([1]), UniPoly()
    t0, t1 = UniPoly(), UniPoly([1])
    while not r1.is_zero():
        q, r = divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    c = r0.lead()
    return s0 / c, t0 / c


def _reverse(f, k):
    return UniPoly([f[k - i] for i in range(k + 1)])


def _series(num, den, count):
    """First coefficients of num/den as a power series (den[0] != 0)."""
    out = []
    r = list(num.c) + [Fraction(0)] * count
    d0 = den[0]
    for n in range(count):
        c = r[n] / d0 if n < len(r) else Fraction(0)
        out.append(c)
        if c:
            for i, b in enumerate(den.c):
                if n + i < len(r):
                    r[n + i] -= c * b
    return out


def recurrence_to_closed_form(spec, max_twist=MAX_TWIST):
    f = spec.charpoly()
    k = spec.order
    facs = factor_rational(f)
    rootsets = []
    for h, m in facs:
        rootsets.append((h, m, roots_of_irreducible(h, max_twist)))
    # group by quadratic generator so each group's linear algebra stays in one field
    groups = {}
    for h, m, rs in rootsets:
        key = rs[0].d
        groups.setdefault(key, []).append((h, m, rs))
    keys = sorted(groups)
    gpolys = [reduce(lambda a, b: a * b, (h ** m for h, m, _ in groups[key]), UniPoly([1])) for key in keys]
    Q = _reverse(f, k)
    U = UniPoly(spec.terms(k))
    P = UniPoly((Q * U).c[:k])
    revs = [_reverse(g, g.degree()) for g in gpolys]
    nums = _partial_fractions(P, revs)
    terms = []
    for key, g, rev, num in zip(keys, gpolys, revs, nums):
        kg = g.degree()
        seq = _series(num, rev, kg)
        cols = []
        for h, m, rs in groups[key]:
            for a in rs:
                for ell in range(m):
                    cols.append((a, ell))
        A = []
        for n in range(kg):
            row = []
            for a, ell in cols:
                row.append((a ** n) * (n ** ell))
            A.append(row)
        sol = solve(A, seq)
        byroot = {}
        for (a, ell), c in zip(cols, sol):
            byroot.setdefault(a, {})[ell] = c
        for a, cs in byroot.items():
            m = max(cs) + 1
            terms.append((UniPoly([cs.get(i, 0) for i in range(m)]), a))
    return ExpPoly(terms)


# ---------------------------------------------------------------- fitting

def fit_recurrence(terms, k):
    """A recurrence of order k (c_k != 0) fitting every term, or None."""
    L = len(terms)
    if L < 2 * k:
        return None
    A = [[terms[n - 1 - i] for i in range(k)] for n in range(k, L)]
    b = [terms[n] for n in range(k, L)]
    res = solve_affine(A, b) if A else ([Fraction(0)] * k, [])
    if res is None:
        return None
    x, null = res
    if x[-1] == 0:
        v = next((v for v in null if v[-1] != 0), None)
        if v is None:
            return None
        x = [a + b for a, b in zip(x, v)]
    return RecurrenceSpec(x, terms[:k])


def minimal_order(first_terms, k_max=None):
    terms = [as_fraction(t) for t in first_terms]
    if k_max is None:
        k_max = (len(terms) - 2) // 2
    if len(terms) < 2 * k_max + 2:
        raise InvalidArgument(f"need at least {2 * k_max + 2} terms for k_max={k_max}")
    for k in range(1, k_max + 1):
        spec = fit_recurrence(terms, k)
        if spec is not None and spec.terms(len(terms)) == terms:
            return k, spec
    raise NoRecurrenceDetected(f"no recurrence of order <= {k_max} fits {len(terms)} terms")


def quotient_fit(w, u, k_max=8, count=None, start=0, skip_zeros=False):
    """Recurrence for w_n / u_n, verified on all sampled terms, or None."""
    count = count or 2 * k_max + 12
    wv = values(w, start + count, start)
    uv = values(u, start + count, start)
    q = []
    for n, (a, b) in enumerate(zip(wv, uv)):
        if b == 0:
            if skip_zeros:
                if q:
                    return None
                continue
            raise ZeroDivisionError(f"u_{start + n} = 0")
        q.append(Fraction(a) / Fraction(b))
    offset = start + count - len(q)
    try:
        k, spec = minimal_order(q, min(k_max, (len(q) - 2) // 2))
    except NoRecurrenceDetected:
        return None
    return _back_extrapolate(spec, offset) if offset else spec


def _back_extrapolate(spec, offset):
    """Shift a recurrence fitted from index `offset` back to index 0."""
    c, k = spec.coeffs, spec.order
    vals = list(spec.terms(k))
    for _ in range(offset):
        # u_{n} = sum c_i u_{n-i}  =>  u_{n-k} = (u_n - sum_{i<k} c_i u_{n-i}) / c_k
        top = vals[k - 1]
        s = sum(c[i] * vals[k - 2 - i] for i in range(k - 1))
        prev = (top - s) / c[k - 1]
        vals = [prev] + vals[:-1]
    return RecurrenceSpec(c, vals)


# ---------------------------------------------------------------- period

class PeriodStructure:
    """Period M, multiplicative basis and per-residue polynomials U_a."""

    def __init__(self, ep, basis):
        self.ep = ep
        self.M = basis.M
        self.gammas = basis.gammas
        self.exponents = basis.E
        self.torsion_exponents = basis.tors_exp
        self.lattice = basis.lattice

    @property
    def rank(self):
        return len(self.gammas)

    def U(self, a):
        """{exponent vector: polynomial in x} for the class n = a (mod M)."""
        z = AlgNum.zeta(1, self.M)
        out = {}
        for (g, _), e, t in zip(self.ep.items, self.exponents, self.torsion_exponents):
            key = tuple(e)
            c = z ** (t * a % self.M)
            out[key] = out.get(key, UniPoly()) + g * c
        return {k: v for k, v in out.items() if not v.is_zero()}

    def eval_class(self, n):
        a = n % self.M
        vals = []
        for key, poly in self.U(a).items():
            mono = AlgNum(1)
            for gmm, k in zip(self.gammas, key):
                if k:
                    mono = mono * gmm ** (n * k)
            vals.append(poly(n) * mono)
        return _exact_sum(vals)

    def to_json(self):
        return {"M": self.M, "basis": [g.to_json() for g in self.gammas],
                "exponents": self.exponents, "torsion": self.torsion_exponents}


def period_structure(ep, R=None):
    from .multdep import SEARCH_RADIUS, multiplicative_basis
    return PeriodStructure(ep, multiplicative_basis(ep.roots, R or SEARCH_RADIUS))


def period(ep, R=None):
    return period_structure(ep, R).M
