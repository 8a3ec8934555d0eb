"""Divisibility-closed polynomials and LDSs in C[t], via multisets of roots of unity."""

from fractions import Fraction
from math import gcd

from .errors import InvalidArgument, InvariantViolation, MalformedBinomial
from .exactnum import AlgNum, UniPoly, cyclotomic, divisors, totient


def _key(q):
    q = Fraction(q) % 1
    return q


class UnityRootMultiset:
    """scalar * t**power * prod (t - e^{2 pi i q})**mult over fractions q in [0, 1)."""

    __slots__ = ("mult", "scalar", "power")

    def __init__(self, mult=None, scalar=1, power=0):
        m = {}
        for q, k in (mult or {}).items():
            if k < 0:
                raise InvalidArgument("multiplicities must be non-negative")
            if k:
                q = _key(q)
                m[q] = m.get(q, 0) + k
        self.mult = m
        self.scalar = scalar if isinstance(scalar, AlgNum) else AlgNum(scalar)
        self.power = power

    # -- constructors

    @classmethod
    def one(cls):
        return cls()

    @classmethod
    def x_pow_minus_one(cls, n, k=1):
        """Roots of (t**n - 1)**k."""
        return cls({Fraction(i, n): k for i in range(n)})

    @classmethod
    def cyclotomic(cls, m, k=1):
        return cls({Fraction(j, m): k for j in range(m) if gcd(j, m) == 1})

    @classmethod
    def from_orders(cls, exps):
        """prod Phi_m**a_m from {m: a_m}."""
        out = cls()
        for m, a in exps.items():
            out = out * cls.cyclotomic(m, a)
        return out

    @classmethod
    def from_poly(cls, f):
        """Decompose a rational polynomial into cyclotomic factors times c t**k."""
        f = f if isinstance(f, UniPoly) else UniPoly(f)
        if f.is_zero():
            raise InvalidArgument("zero polynomial")
        power = 0
        while f[0] == 0:
            f = UniPoly(f.c[1:])
            power += 1
        mult = {}
        m = 1
        while f.degree() > 0:
            if m > 4 * f.degree() ** 2 + 10:
                raise InvalidArgument(f"{f} has a non-cyclotomic factor")
            if totient(m) <= f.degree():
                ph = cyclotomic(m)
                while True:
                    q, r = divmod(f, ph)
                    if not r.is_zero():
                        break
                    f = q
                    for j in range(m):
                        if gcd(j, m) == 1:
                            k = Fraction(j, m)
                            mult[k] = mult.get(k, 0) + 1
            m += 1
        return cls(mult, scalar=f[0], power=power)

    # -- algebra

    def __eq__(self, other):
        return (isinstance(other, UnityRootMultiset) and self.mult == other.mult
                and self.power == other.power and self.scalar == other.scalar)

    def __hash__(self):
        return hash((frozenset(self.mult.items()), self.power))

    def degree(self):
        return sum(self.mult.values()) + self.power

    def divides(self, other):
        if self.power > other.power:
            return False
        return all(other.mult.get(q, 0) >= k for q, k in self.mult.items())

    def __mul__(self, other):
        m = dict(self.mult)
        for q, k in other.mult.items():
            m[q] = m.get(q, 0) + k
        return UnityRootMultiset(m, self.scalar * other.scalar, self.power + other.power)

    def __pow__(self, k):
        return UnityRootMultiset({q: v * k for q, v in self.mult.items()}, self.scalar ** k, self.power * k)

    def lcm(self, other):
        m = dict(self.mult)
        for q, k in other.mult.items():
            m[q] = max(m.get(q, 0), k)
        return UnityRootMultiset(m, 1, max(self.power, other.power))

    def gcd(self, other):
        m = {q: min(k, other.mult.get(q, 0)) for q, k in self.mult.items()}
        return UnityRootMultiset(m, 1, min(self.power, other.power))

    def quotient(self, other):
        """self / other when other divides self."""
        if not other.divides(self):
            raise InvalidArgument("not divisible")
        m = {q: k - other.mult.get(q, 0) for q, k in self.mult.items()}
        return UnityRootMultiset(m, self.scalar / other.scalar, self.power - other.power)

    def substitute(self, m):
        """Multiset of f(t**m)."""
        out = {}
        for q, k in self.mult.items():
            for i in range(m):
                r = _key((q + i) / m)
                out[r] = out.get(r, 0) + k
        return UnityRootMultiset(out, self.scalar, self.power * m)

    def by_order(self):
        """{order: {fraction: multiplicity}}."""
        out = {}
        for q, k in self.mult.items():
            out.setdefault(q.denominator, {})[q] = k
        return out

    def cyclotomic_exponents(self):
        """{m: a_m} if multiplicities are uniform on each order, else None."""
        out = {}
        for m, roots in self.by_order().items():
            ks = set(roots.values())
            if len(ks) != 1 or len(roots) != totient(m):
                return None
            out[m] = ks.pop()
        return out

    # -- evaluation

    def expand(self):
        """The polynomial, with coefficients in a cyclotomic field."""
        p = UniPoly([self.scalar])
        if self.power:
            p = p * UniPoly.monomial(self.power)
        exps = self.by_order()
        for m, roots in sorted(exps.items()):
            ks = set(roots.values())
            if len(roots) == totient(m) and len(ks) == 1:
                p = p * cyclotomic(m) ** ks.pop()
            else:
                for q, k in sorted(roots.items()):
                    z = AlgNum.zeta(q.numerator, q.denominator)
                    p = p * UniPoly([-z, 1]) ** k
        return p

    def __call__(self, x):
        x = x if isinstance(x, AlgNum) else AlgNum(x)
        acc = self.scalar * x ** self.power
        for m, roots in sorted(self.by_order().items()):
            ks = set(roots.values())
            if len(roots) == totient(m) and len(ks) == 1:
                acc = acc * cyclotomic(m)(x) ** ks.pop()
            else:
                for q, k in sorted(roots.items()):
                    acc = acc * (x - AlgNum.zeta(q.numerator, q.denominator)) ** k
        return acc

    def __repr__(self):
        ce = self.cyclotomic_exponents()
        pre = "" if self.scalar == 1 else f"{self.scalar}*"
        if self.power:
            pre += f"t^{self.power}*"
        if ce is not None:
            body = "*".join(f"Phi{m}" + (f"^{a}" if a > 1 else "") for m, a in sorted(ce.items())) or "1"
        else:
            body = "{" + ", ".join(f"{q}:{k}" for q, k in sorted(self.mult.items())) + "}"
        return f"UnityRootMultiset({pre}{body})"

    def to_json(self):
        return {"roots": {str(q): k for q, k in sorted(self.mult.items())},
                "scalar": self.scalar.to_json(), "power": self.power}


def lcm_multisets(items):
    acc = UnityRootMultiset()
    for s in items:
        acc = acc.lcm(s)
    return acc


def divides(s, t):
    return s.divides(t)


def expand(s):
    return s.expand()


# ---------------------------------------------------------------- one-variable classification

def is_divisibility_closed(f):
    """Whether f(t**m) divides f(t**n) whenever m divides n."""
    return koshkin_form(f) is not None


def koshkin_form(f):
    """Exponents h_m with f = lcm (t**m - 1)**h_m, or None when f is not closed.

    A closed f has the same multiplicity a_k on all roots of order k, and
    a_k <= a_j whenever j divides k. Only orders whose multiplicity exceeds
    that of every proper multiple contribute.
    """
    if isinstance(f, UniPoly):
        f = UnityRootMultiset.from_poly(f)
    a = f.cyclotomic_exponents()
    if a is None:
        return None
    for k, ak in a.items():
        for j in divisors(k):
            if a.get(j, 0) < ak:
                return None
    h = {}
    for m, am in a.items():
        if all(a.get(mm, 0) < am for mm in a if mm != m and mm % m == 0):
            h[m] = am
    return dict(sorted(h.items()))


def from_koshkin(h):
    return lcm_multisets(UnityRootMultiset.x_pow_minus_one(m, k) for m, k in h.items())


def substitution_divides(f, n, m):
    """Whether f(t**m) divides f(t**n); requires m | n."""
    if m < 1 or n % m:
        raise InvalidArgument("substitution_divides needs m | n")
    if isinstance(f, UniPoly):
        f = UnityRootMultiset.from_poly(f)
    return f.substitute(m).divides(f.substitute(n))


# ---------------------------------------------------------------- LDS in C[t]

class CyclotomicLDSSpec:
    """Multiplicity table h[(d, m, j)] for the lcm form of an LDS in C[t]."""

    def __init__(self, M, table):
        self.M = M
        self.h = {}
        for (d, m, j), v in table.items():
            if v:
                self.h[(d, m, j)] = v
        self.validate()

    def validate(self):
        M = self.M
        divs = divisors(M)
        for (d, m, j), v in self.h.items():
            if M % d or m < 1 or not (0 <= j < M // d) or v < 0:
                raise InvariantViolation(f"bad index h[{d},{m},{j}] for M={M}")
        for (d, m, j), v in self.h.items():
            for D in divs:
                if D % d:
                    continue
                jj = j % (M // D)
                if self.h.get((D, m, jj), 0) < v:
                    raise InvariantViolation(
                        f"h[{D},{m},{jj}] < h[{d},{m},{j}] with {d} | {D}")

    def term(self, n):
        return general_lds_in_t(self, n)

    def to_json(self):
        return {"M": self.M, "h": [[d, m, j, v] for (d, m, j), v in sorted(self.h.items())]}


def _factor_roots(M, m, j, n, d):
    """Roots of ((z t^m)^n - 1)/((z t^m)^d - 1), z = zeta_M^j, as fractions."""
    mn = m * n
    shift = Fraction(j * n, M)
    out = set()
    for k in range(mn):
        th = _key((k - shift) / mn)
        # exclude roots of (z t^m)^d = 1
        if ((m * d) * th + Fraction(j * d, M)).denominator == 1:
            continue
        out.add(th)
    return out


def general_lds_in_t(spec, n):
    if n < 1:
        raise InvalidArgument("index must be >= 1")
    M = spec.M
    d = gcd(n, M)
    mult = {}
    for (dd, m, j), h in spec.h.items():
        if dd != d:
            continue
        for th in _factor_roots(M, m, j, n, d):
            mult[th] = max(mult.get(th, 0), h)
    return UnityRootMultiset(mult)


# ---------------------------------------------------------------- binomials

class Binomial:
    """x^{a0} y1^{a1} ... - c * x^{b0} y1^{b1} ..."""

    __slots__ = ("a", "b", "c")

    def __init__(self, a, b, c):
        a, b = tuple(a), tuple(b)
        if len(a) != len(b) or not a:
            raise MalformedBinomial("exponent vectors must have equal nonzero length")
        if any(x < 0 for x in a + b):
            raise MalformedBinomial("negative exponent")
        if any(min(x, y) for x, y in zip(a, b)):
            raise MalformedBinomial("min(a_i, b_i) must be 0")
        c = c if isinstance(c, AlgNum) else AlgNum(c)
        if c.is_zero():
            raise MalformedBinomial("c must be nonzero")
        self.a, self.b, self.c = a, b, c

    def expand(self):
        out = {self.a: AlgNum(1)}
        out[self.b] = out.get(self.b, AlgNum(0)) - self.c
        return {k: v for k, v in out.items() if not v.is_zero()}

    def substitute(self, m):
        """B(x, y1^m, ..., yr^m)."""
        return Binomial((self.a[0],) + tuple(m * e for e in self.a[1:]),
                        (self.b[0],) + tuple(m * e for e in self.b[1:]), self.c)

    def __eq__(self, other):
        return isinstance(other, Binomial) and (self.a, self.b, self.c) == (other.a, other.b, other.c)

    def __repr__(self):
        return f"Binomial({list(self.a)}, {list(self.b)}, {self.c})"

    def to_json(self):
        return {"a": list(self.a), "b": list(self.b), "c": self.c.to_json()}


def poly_mul(p, q):
    out = {}
    for ka, va in p.items():
        for kb, vb in q.items():
            k = tuple(x + y for x, y in zip(ka, kb))
            out[k] = out.get(k, AlgNum(0)) + va * vb
    return {k: v for k, v in out.items() if not v.is_zero()}


def binomial_substitution_factor(B, m):
    """Factor B(x, y^m) into binomials where the explicit rules apply."""
    if m < 1:
        raise MalformedBinomial("m must be >= 1")
    a0, b0 = B.a[0], B.b[0]
    ya, yb = B.a[1:], B.b[1:]
    if a0 == 0 and b0 == 0:
        g = m
        ea, eb = (0,) + ya, (0,) + yb
    else:
        g = gcd(m, a0 if a0 else b0)
        if g == 1:
            return [B.substitute(m)]
        ea = (a0 // g,) + tuple(m // g * e for e in ya)
        eb = (b0 // g,) + tuple(m // g * e for e in yb)
    root = B.c.root(g)
    return [Binomial(ea, eb, root * AlgNum.zeta(j, g)) for j in range(g)]
