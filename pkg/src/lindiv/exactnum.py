"""Exact arithmetic: rational polynomials and algebraic numbers in Q(sqrt(d), zeta_N).

Integers and rationals are Python ``int`` and ``fractions.Fraction``.
"""

import cmath
from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm

import mpmath
from sympy import factorint

from .errors import InvalidArgument, UnsupportedField


# ---------------------------------------------------------------- integers

@lru_cache(maxsize=4096)
def factor(n):
    """Prime factorization of |n| as a sorted tuple of (p, e)."""
    n = abs(n)
    if n < 2:
        return ()
    return tuple(sorted(factorint(n).items()))


def totient(n):
    r = n
    for p, _ in factor(n):
        r = r // p * (p - 1)
    return r


def mobius(n):
    f = factor(n)
    if any(e > 1 for _, e in f):
        return 0
    return -1 if len(f) % 2 else 1


def divisors(n):
    out = [1]
    for p, e in factor(n):
        out = [d * p ** i for d in out for i in range(e + 1)]
    return sorted(out)


def squarefree_split(n):
    """Write n = s * t**2 with s squarefree (sign kept in s)."""
    if n == 0:
        return 0, 0
    s, t = (-1 if n < 0 else 1), 1
    for p, e in factor(n):
        t *= p ** (e // 2)
        if e % 2:
            s *= p
    return s, t


def integer_root(n, m):
    """Exact m-th root of a non-negative int, or None."""
    if n < 0:
        return None
    if n < 2:
        return n
    r = round(n ** (1.0 / m)) if n.bit_length() < 1000 else int(mpmath.root(n, m))
    for c in (r - 1, r, r + 1):
        if c >= 0 and c ** m == n:
            return c
    lo, hi = 0, 1 << (n.bit_length() // m + 1)
    while lo < hi:
        mid = (lo + hi) // 2
        if mid ** m < n:
            lo = mid + 1
        else:
            hi = mid
    return lo if lo ** m == n else None


def rational_root(q, m):
    """Exact m-th root of a rational, or None. Negative q allowed for odd m."""
    q = Fraction(q)
    sign = 1
    if q < 0:
        if m % 2 == 0:
            return None
        sign, q = -1, -q
    a, b = integer_root(q.numerator, m), integer_root(q.denominator, m)
    if a is None or b is None:
        return None
    return sign * Fraction(a, b)


def as_fraction(x):
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, AlgNum):
        return x.to_fraction()
    raise InvalidArgument(f"not a rational: {x!r}")


# ---------------------------------------------------------------- polynomials

def _coef(x):
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, AlgNum) and x.is_rational():
        return x.to_fraction()
    if isinstance(x, str):
        return Fraction(x)
    return x


class UniPoly:
    """Dense univariate polynomial, coefficients stored low degree first.

    Coefficients are Fractions, or AlgNums when an algebraic coefficient is
    needed. The zero polynomial has degree -1.
    """

    __slots__ = ("c",)

    def __init__(self, coeffs=()):
        c = [_coef(x) for x in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self.c = tuple(c)

    @classmethod
    def x(cls):
        return cls((0, 1))

    @classmethod
    def const(cls, a):
        return cls((a,))

    @classmethod
    def from_roots(cls, roots):
        p = cls((1,))
        for r in roots:
            p = p * cls((-r, 1))
        return p

    @classmethod
    def monomial(cls, k, a=1):
        return cls([0] * k + [a])

    def degree(self):
        return len(self.c) - 1

    def is_zero(self):
        return not self.c

    def lead(self):
        return self.c[-1] if self.c else Fraction(0)

    def __getitem__(self, i):
        return self.c[i] if 0 <= i < len(self.c) else Fraction(0)

    def __iter__(self):
        return iter(self.c)

    def __len__(self):
        return len(self.c)

    def __eq__(self, other):
        if not isinstance(other, UniPoly):
            if isinstance(other, (int, Fraction, AlgNum)):
                other = UniPoly((other,))
            else:
                return NotImplemented
        return self.c == other.c

    def __hash__(self):
        return hash(self.c)

    def _lift(self, other):
        if isinstance(other, UniPoly):
            return other
        return UniPoly((other,))

    def __add__(self, other):
        other = self._lift(other)
        n = max(len(self.c), len(other.c))
        return UniPoly([self[i] + other[i] for i in range(n)])

    __radd__ = __add__

    def __neg__(self):
        return UniPoly([-a for a in self.c])

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, UniPoly):
            return UniPoly([a * other for a in self.c])
        if not self.c or not other.c:
            return UniPoly()
        out = [0] * (len(self.c) + len(other.c) - 1)
        for i, a in enumerate(self.c):
            if a == 0:
                continue
            for j, b in enumerate(other.c):
                out[i + j] = out[i + j] + a * b
        return UniPoly(out)

    __rmul__ = __mul__

    def __pow__(self, k):
        if k < 0:
            raise InvalidArgument("negative polynomial power")
        r, b = UniPoly((1,)), self
        while k:
            if k & 1:
                r = r * b
            b = b * b
            k >>= 1
        return r

    def __divmod__(self, other):
        other = self._lift(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        r = list(self.c)
        dq = len(r) - len(other.c)
        if dq < 0:
            return UniPoly(), self
        q = [Fraction(0)] * (dq + 1)
        lc = other.c[-1]
        for k in range(dq, -1, -1):
            t = r[k + len(other.c) - 1]
            if t == 0:
                continue
            t = t / lc
            q[k] = t
            for i, b in enumerate(other.c):
                r[k + i] = r[k + i] - t * b
        return UniPoly(q), UniPoly(r[:len(other.c) - 1])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __truediv__(self, other):
        if isinstance(other, UniPoly):
            q, r = divmod(self, other)
            if not r.is_zero():
                raise InvalidArgument("inexact polynomial division")
            return q
        return UniPoly([a / other for a in self.c])

    def divides(self, other):
        return (other % self).is_zero()

    def monic(self):
        if not self.c:
            return self
        return self / self.c[-1]

    def derivative(self):
        return UniPoly([i * a for i, a in enumerate(self.c)][1:])

    def inflate(self, k):
        """Return p(x**k)."""
        out = [0] * (k * (len(self.c) - 1) + 1) if self.c else []
        for i, a in enumerate(self.c):
            out[i * k] = a
        return UniPoly(out)

    def __call__(self, x):
        acc = 0
        for a in reversed(self.c):
            acc = acc * x + a
        return acc

    def is_integral(self):
        return all(isinstance(a, Fraction) and a.denominator == 1 for a in self.c)

    def int_coeffs(self):
        return [int(a) for a in self.c]

    def __repr__(self):
        if not self.c:
            return "0"
        parts = []
        for i in range(len(self.c) - 1, -1, -1):
            a = self.c[i]
            if a == 0:
                continue
            mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            if isinstance(a, Fraction):
                sgn = "-" if a < 0 else "+"
                a = abs(a)
                s = str(a) if (a != 1 or not mono) else ""
                if s and mono:
                    s += "*"
            else:
                sgn, s = "+", f"({a})" + ("*" if mono else "")
            parts.append(f"{sgn} {s}{mono}")
        out = " ".join(parts)
        return out[2:] if out.startswith("+ ") else "-" + out[2:]


UniPolyQ = UniPoly


def poly_gcd(f, g):
    """Monic gcd; both zero is an error."""
    if f.is_zero() and g.is_zero():
        raise InvalidArgument("gcd of two zero polynomials")
    while not g.is_zero():
        f, g = g, f % g
    return f.monic()


def poly_lcm(f, g):
    if f.is_zero() or g.is_zero():
        raise InvalidArgument("lcm needs nonzero polynomials")
    return (f * g // poly_gcd(f, g)).monic()


@lru_cache(maxsize=None)
def cyclotomic(m):
    """The m-th cyclotomic polynomial."""
    if m < 1:
        raise InvalidArgument("cyclotomic index must be >= 1")
    p = UniPoly([-1] + [0] * (m - 1) + [1])
    for d in divisors(m)[:-1]:
        p = p // cyclotomic(d)
    return p


# ---------------------------------------------------------------- cyclotomic basis

def _comps_of(n):
    """Prime-power components of n, dropping a lone factor 2."""
    return tuple((p, e) for p, e in factor(n) if p ** e != 2)


def _comps_n(comps):
    n = 1
    for p, e in comps:
        n *= p ** e
    return n


@lru_cache(maxsize=None)
def _comp_reduce(p, e):
    """x**k for k < p**e in the basis x**0..x**(phi-1) of Q(zeta_{p^e})."""
    q, h = p ** e, p ** (e - 1)
    out = []
    for k in range(q):
        s, r = divmod(k, h)
        if s < p - 1:
            out.append(((k, 1),))
        else:
            out.append(tuple((h * i + r, -1) for i in range(p - 1)))
    return tuple(out)


class _Basis:
    """Tensor power basis of Q(zeta_N) for a tuple of prime-power components."""

    def __init__(self, comps):
        self.comps = comps
        self.qs = [p ** e for p, e in comps]
        self.dims = [q - q // p for q, (p, e) in zip(self.qs, comps)]
        self.N = _comps_n(comps)
        D = 1
        for d in self.dims:
            D *= d
        self.D = D
        strides, s = [], 1
        for d in reversed(self.dims):
            strides.append(s)
            s *= d
        self.strides = strides[::-1]
        exps = []
        for f in range(D):
            ks, r = [], f
            for st in self.strides:
                k, r = divmod(r, st)
                ks.append(k)
            exps.append(tuple(ks))
        self.exps = exps
        self._mt = None
        self._gal = {}
        self._cvals = None
        self._weights = None

    def flat(self, ks):
        return sum(k * s for k, s in zip(ks, self.strides))

    def expand(self, ks):
        """Arbitrary exponents (mod q_i) -> list of (flat, sign)."""
        acc = [(0, 1)]
        for (p, e), q, st, k in zip(self.comps, self.qs, self.strides, ks):
            red = _comp_reduce(p, e)[k % q]
            acc = [(f + i * st, s * t) for f, s in acc for i, t in red]
        return acc

    def mul_table(self):
        if self._mt is None:
            self._mt = [[self.expand([a + b for a, b in zip(ei, ej)])
                         for ej in self.exps] for ei in self.exps]
        return self._mt

    def galois_table(self, t):
        t %= self.N if self.N > 1 else 1
        tab = self._gal.get(t)
        if tab is None:
            tab = [self.expand([k * t for k in ks]) for ks in self.exps]
            self._gal[t] = tab
        return tab

    def cvals(self):
        if self._cvals is None:
            vals = []
            for ks in self.exps:
                z = 1 + 0j
                for k, q in zip(ks, self.qs):
                    z *= cmath.exp(2j * cmath.pi * k / q)
                vals.append(z)
            self._cvals = vals
        return self._cvals

    def weights(self):
        """Normalized trace of each basis element."""
        if self._weights is None:
            ws = []
            for ks in self.exps:
                w = Fraction(1)
                for k, q in zip(ks, self.qs):
                    m = q // gcd(k, q)
                    w *= Fraction(mobius(m), totient(m))
                ws.append(w)
            self._weights = ws
        return self._weights

    def zeta_index(self, f):
        """Exponent j with basis element f equal to zeta_N**j."""
        j = 0
        for k, q in zip(self.exps[f], self.qs):
            j += k * (self.N // q)
        return j % self.N if self.N > 1 else 0


@lru_cache(maxsize=None)
def _basis(comps):
    return _Basis(comps)


def _mulvec(B, u, v):
    res = [0] * B.D
    if B.D == 1:
        res[0] = u[0] * v[0]
        return res
    mt = B.mul_table()
    nzv = [(j, b) for j, b in enumerate(v) if b]
    for i, a in enumerate(u):
        if not a:
            continue
        row = mt[i]
        for j, b in nzv:
            ab = a * b
            for k, s in row[j]:
                if s > 0:
                    res[k] += ab
                else:
                    res[k] -= ab
    return res


def _galvec(B, t, u):
    if B.D == 1:
        return list(u)
    res = [0] * B.D
    tab = B.galois_table(t)
    for i, a in enumerate(u):
        if a:
            for k, s in tab[i]:
                res[k] += s * a
    return res


@lru_cache(maxsize=None)
def _lift_map(src, dst):
    Bs, Bd = _basis(src), _basis(dst)
    pos = {p: i for i, (p, _) in enumerate(dst)}
    out = []
    for ks in Bs.exps:
        full = [0] * len(dst)
        for (p, e), k in zip(src, ks):
            i = pos[p]
            full[i] = k * p ** (dst[i][1] - e)
        out.append(Bd.flat(full))
    return tuple(out)


def _lift(src, dst, u):
    if src == dst:
        return list(u)
    m = _lift_map(src, dst)
    res = [0] * _basis(dst).D
    for i, a in enumerate(u):
        if a:
            res[m[i]] = a
    return res


def _union(c1, c2):
    if c1 == c2:
        return c1
    d = dict(c1)
    for p, e in c2:
        d[p] = max(d.get(p, 0), e)
    return tuple(sorted(d.items()))


def _descend(comps, vecs):
    while comps:
        B = _basis(comps)
        nz = [f for f in range(B.D) if any(v[f] for v in vecs)]
        done = True
        for ci, (p, e) in enumerate(comps):
            ks = [B.exps[f][ci] for f in nz]
            if e == 1 or (p, e) == (2, 2):
                if any(ks):
                    continue
                new = comps[:ci] + comps[ci + 1:]
                div = None
            else:
                if any(k % p for k in ks):
                    continue
                new = comps[:ci] + ((p, e - 1),) + comps[ci + 1:]
                div = p
            Bn = _basis(new)
            out = []
            for v in vecs:
                w = [0] * Bn.D
                for f in nz:
                    if v[f]:
                        ks_f = list(B.exps[f])
                        if div is None:
                            del ks_f[ci]
                        else:
                            ks_f[ci] //= div
                        w[Bn.flat(ks_f)] = v[f]
                out.append(w)
            comps, vecs, done = new, out, False
            break
        if done:
            break
    return comps, vecs


def conductor(d):
    """Conductor of Q(sqrt(d)) for squarefree d."""
    if d == 1:
        return 1
    return abs(d) if d % 4 == 1 else 4 * abs(d)


# ---------------------------------------------------------------- AlgNum

class AlgNum:
    """Exact element of Q(sqrt(d), zeta_N).

    Value is (A + B*sqrt(d)) / den where A and B are integer vectors in the
    tensor power basis of Q(zeta_N). ``d == 1`` means no square root part.
    """

    __slots__ = ("comps", "d", "a", "b", "den", "_h")

    def __init__(self, value=0):
        q = as_fraction(value) if not isinstance(value, AlgNum) else None
        if q is None:
            self.comps, self.d, self.a, self.b, self.den = value.comps, value.d, value.a, value.b, value.den
        else:
            self.comps, self.d, self.a, self.b, self.den = (), 1, (q.numerator,), None, q.denominator
        self._h = None

    @classmethod
    def _raw(cls, comps, d, a, b, den):
        x = object.__new__(cls)
        x.comps, x.d, x.a, x.b, x.den, x._h = comps, d, tuple(a), (tuple(b) if b is not None else None), den, None
        return x

    @classmethod
    def _make(cls, comps, d, a, b, den):
        if den < 0:
            a = [-x for x in a]
            b = [-x for x in b] if b is not None else None
            den = -den
        if d != 1:
            if not any(b):
                d, b = 1, None
            elif _comps_n(comps) % conductor(d) == 0:
                B = _basis(comps)
                s = _sqrt_vec(d, comps)
                sb = _mulvec(B, b, s)
                a = [x + y for x, y in zip(a, sb)]
                d, b = 1, None
        if comps:
            vecs = [a] if b is None else [a, b]
            comps, vecs = _descend(comps, vecs)
            a = vecs[0]
            b = vecs[1] if b is not None else None
        g = den
        for x in a:
            if g == 1:
                break
            g = gcd(g, x)
        if b is not None:
            for x in b:
                if g == 1:
                    break
                g = gcd(g, x)
        if g > 1:
            a = [x // g for x in a]
            b = [x // g for x in b] if b is not None else None
            den //= g
        return cls._raw(comps, d, a, b, den)

    # -- constructors

    @classmethod
    def rational(cls, q):
        return cls(as_fraction(q))

    @classmethod
    def quad(cls, a, b, d):
        """a + b*sqrt(d) for rationals a, b and a nonzero integer d."""
        a, b, d = as_fraction(a), as_fraction(b), int(d)
        if d == 0:
            raise InvalidArgument("quad needs d != 0")
        s, t = squarefree_split(d)
        b = b * t
        if s == 1 or b == 0:
            return cls(a + (b if s == 1 else 0))
        den = lcm(a.denominator, b.denominator)
        return cls._make((), s, [a.numerator * (den // a.denominator)],
                         [b.numerator * (den // b.denominator)], den)

    @classmethod
    def sqrt(cls, q):
        return cls._sqrt_rat(as_fraction(q))

    @classmethod
    def _sqrt_rat(cls, q):
        if q == 0:
            return cls(0)
        num = q.numerator * q.denominator
        s, t = squarefree_split(num)
        return cls.quad(0, Fraction(t, q.denominator), s)

    @classmethod
    def zeta(cls, j, N):
        if N < 1:
            raise InvalidArgument("root of unity order must be >= 1")
        j %= N
        g = gcd(j, N)
        j, N = j // g, N // g
        sign = 1
        if N % 4 == 2:
            m = N // 2
            sign = -1
            j = ((j + m) // 2) % m if m > 1 else 0
            N = m
        comps = _comps_of(N)
        B = _basis(comps)
        ks = []
        for p, e in comps:
            q = p ** e
            ks.append(j * pow(N // q, -1, q) % q)
        a = [0] * B.D
        for f, s in B.expand(ks):
            a[f] += sign * s
        return cls._make(comps, 1, a, None, 1)

    @classmethod
    def from_json(cls, obj):
        from .errors import SchemaError
        if isinstance(obj, AlgNum):
            return obj
        if isinstance(obj, (int, str)):
            try:
                return cls(Fraction(obj))
            except (ValueError, ZeroDivisionError) as e:
                raise SchemaError(f"bad rational literal {obj!r}") from e
        if not isinstance(obj, dict):
            raise SchemaError(f"bad AlgNum literal {obj!r}")
        if "sum" in obj:
            acc = cls(0)
            for i, t in enumerate(obj["sum"]):
                acc = acc + cls.from_json(t)
            return acc
        val = None
        if "rat" in obj:
            val = cls.from_json(obj["rat"])
        if "quad" in obj:
            q = obj["quad"]
            if not (isinstance(q, list) and len(q) == 3):
                raise SchemaError("quad must be [a, b, d]", "/quad")
            try:
                val = cls.quad(Fraction(q[0]), Fraction(q[1]), int(q[2]))
            except (ValueError, ZeroDivisionError, InvalidArgument) as e:
                raise SchemaError(str(e), "/quad") from e
        if "zeta" in obj:
            z = obj["zeta"]
            if not (isinstance(z, list) and len(z) == 2 and all(isinstance(v, int) for v in z)) or z[1] < 1:
                raise SchemaError("zeta must be [j, N] with N >= 1", "/zeta")
            zz = cls.zeta(z[0], z[1])
            val = zz if val is None else val * zz
        if val is None:
            raise SchemaError(f"bad AlgNum literal {obj!r}")
        return val

    def to_json(self):
        if self.is_rational():
            return {"rat": str(self.to_fraction())}
        if not self.comps:
            return {"quad": [str(Fraction(self.a[0], self.den)), str(Fraction(self.b[0], self.den)), self.d]}
        B = _basis(self.comps)
        terms = []
        for f in range(B.D):
            ca = self.a[f]
            cb = self.b[f] if self.b is not None else 0
            if ca or cb:
                terms.append({"quad": [str(Fraction(ca, self.den)), str(Fraction(cb, self.den)), self.d],
                              "zeta": [B.zeta_index(f), B.N]})
        return {"sum": terms}

    # -- structure

    @property
    def N(self):
        return _comps_n(self.comps)

    def degree(self):
        return _basis(self.comps).D * (2 if self.d != 1 else 1)

    def is_zero(self):
        return not any(self.a) and (self.b is None or not any(self.b))

    def __bool__(self):
        return not self.is_zero()

    def is_rational(self):
        return not self.comps and self.d == 1

    def to_fraction(self):
        if not self.is_rational():
            raise InvalidArgument(f"{self} is not rational")
        return Fraction(self.a[0], self.den)

    def is_integer(self):
        return self.is_rational() and self.den == 1

    # -- arithmetic

    @staticmethod
    def _coerce(x):
        if isinstance(x, AlgNum):
            return x
        if isinstance(x, (int, Fraction)):
            return AlgNum(x)
        return None

    def _parts(self, comps, d):
        B = _basis(comps)
        a = _lift(self.comps, comps, self.a)
        if self.d == 1:
            b = [0] * B.D if d != 1 else None
        elif self.d == d:
            b = _lift(self.comps, comps, self.b)
        else:
            # collapse sqrt(self.d) into the cyclotomic part
            s = _sqrt_vec(self.d, comps)
            sb = _mulvec(B, _lift(self.comps, comps, self.b), s)
            a = [x + y for x, y in zip(a, sb)]
            b = [0] * B.D if d != 1 else None
        return a, b

    @staticmethod
    def _align(x, y):
        comps = _union(x.comps, y.comps)
        n = _comps_n(comps)
        dx = x.d if x.d == 1 or n % conductor(x.d) else 1
        dy = y.d if y.d == 1 or n % conductor(y.d) else 1
        if dx != 1 and dy != 1 and dx != dy:
            raise UnsupportedField(f"cannot mix sqrt({dx}) and sqrt({dy})")
        d = dx if dx != 1 else dy
        return comps, d, x._parts(comps, d), y._parts(comps, d)

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if self.is_rational() and other.is_rational():
            return AlgNum(self.to_fraction() + other.to_fraction())
        comps, d, (ax, bx), (ay, by) = self._align(self, other)
        dx, dy = self.den, other.den
        a = [u * dy + v * dx for u, v in zip(ax, ay)]
        b = [u * dy + v * dx for u, v in zip(bx, by)] if d != 1 else None
        return AlgNum._make(comps, d, a, b, dx * dy)

    __radd__ = __add__

    def __neg__(self):
        return AlgNum._raw(self.comps, self.d, [-x for x in self.a],
                           [-x for x in self.b] if self.b is not None else None, self.den)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            q = Fraction(other)
            if q == 0:
                return AlgNum(0)
            return AlgNum._make(self.comps, self.d, [x * q.numerator for x in self.a],
                                [x * q.numerator for x in self.b] if self.b is not None else None,
                                self.den * q.denominator)
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if self.is_rational() and other.is_rational():
            return AlgNum(self.to_fraction() * other.to_fraction())
        comps, d, (ax, bx), (ay, by) = self._align(self, other)
        B = _basis(comps)
        A = _mulvec(B, ax, ay)
        if d != 1:
            t = _mulvec(B, bx, by)
            A = [u + d * v for u, v in zip(A, t)]
            Bv = [u + v for u, v in zip(_mulvec(B, ax, by), _mulvec(B, bx, ay))]
        else:
            Bv = None
        return AlgNum._make(comps, d, A, Bv, self.den * other.den)

    __rmul__ = __mul__

    def inv(self):
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        if self.is_rational():
            return AlgNum(1 / self.to_fraction())
        if self.d != 1:
            conj = AlgNum._raw(self.comps, self.d, self.a, [-x for x in self.b], self.den)
            B = _basis(self.comps)
            X = [u - self.d * v for u, v in zip(_mulvec(B, self.a, self.a), _mulvec(B, self.b, self.b))]
            X = AlgNum._make(self.comps, 1, X, None, self.den * self.den)
            return conj * X.inv()
        B = _basis(self.comps)
        n = B.N
        P = [1] + [0] * (B.D - 1)
        for t in range(2, n):
            if gcd(t, n) == 1:
                P = _mulvec(B, P, _galvec(B, t, self.a))
        full = _mulvec(B, P, self.a)
        if any(full[1:]):
            raise ArithmeticError("norm computation failed")
        # x * P = full[0] / den**phi  and inverse = P * den**phi / full[0] ... with x = a/den
        # P was built from the numerator vector, so x^{-1} = den * P / full[0]
        return AlgNum._make(self.comps, 1, [x * self.den for x in P], None, full[0])

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if isinstance(other, AlgNum) and other.is_rational():
            q = other.to_fraction()
            if q == 0:
                raise ZeroDivisionError("division by zero")
            return self * (1 / q)
        return self * other.inv()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other * self.inv()

    def __pow__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inv() ** (-k)
        if self.is_rational():
            return AlgNum(self.to_fraction() ** k)
        r, b = AlgNum(1), self
        while k:
            if k & 1:
                r = r * b
            k >>= 1
            if k:
                b = b * b
        return r

    def __eq__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if self.comps == other.comps and self.d == other.d:
            return self.den == other.den and self.a == other.a and self.b == other.b
        try:
            return (self - other).is_zero()
        except UnsupportedField:
            return False

    def __hash__(self):
        if self._h is None:
            w = _basis(self.comps).weights()
            t = sum((x * wi for x, wi in zip(self.a, w) if x), Fraction(0)) / self.den
            self._h = hash(t)
        return self._h

    def _cmp_key(self):
        return self.to_fraction()

    def __lt__(self, other):
        return self._cmp_key() < as_fraction(other)

    def __le__(self, other):
        return self._cmp_key() <= as_fraction(other)

    def __gt__(self, other):
        return self._cmp_key() > as_fraction(other)

    def __ge__(self, other):
        return self._cmp_key() >= as_fraction(other)

    # -- Galois structure

    def galois(self, t, sign=1):
        """Image under zeta_N -> zeta_N**t and sqrt(d) -> sign*sqrt(d)."""
        if not self.comps and self.d == 1:
            return self
        B = _basis(self.comps)
        a = _galvec(B, t, self.a)
        b = None
        if self.b is not None:
            b = [sign * x for x in _galvec(B, t, self.b)]
        return AlgNum._make(self.comps, self.d, a, b, self.den)

    def galois_group(self):
        n = self.N
        ts = [t for t in range(1, max(n, 2)) if gcd(t, n) == 1] if n > 1 else [1]
        signs = (1, -1) if self.d != 1 else (1,)
        return [(t, s) for t in ts for s in signs]

    def conjugates(self):
        seen, out = set(), []
        for t, s in self.galois_group():
            y = self.galois(t, s)
            if y not in seen:
                seen.add(y)
                out.append(y)
        return out

    def conj(self):
        """Complex conjugate."""
        return self.galois(-1, 1 if self.d > 0 else -1)

    def norm(self):
        """Product of all Galois images over the representation field."""
        acc = AlgNum(1)
        for t, s in self.galois_group():
            acc = acc * self.galois(t, s)
        return acc.to_fraction()

    def minpoly(self):
        p = UniPoly.from_roots(self.conjugates())
        return UniPoly([c.to_fraction() if isinstance(c, AlgNum) else c for c in p.c])

    def is_algebraic_integer(self):
        return self.minpoly().is_integral()

    def is_root_of_unity(self):
        """Exact multiplicative order, or None."""
        if self.is_zero():
            raise InvalidArgument("zero is not a unit")
        if self.is_rational():
            q = self.to_fraction()
            return 1 if q == 1 else (2 if q == -1 else None)
        if self * self.conj() != 1:
            return None
        D = self.degree()
        bound = max(m for m in range(1, 2 * D * D + 7) if totient(m) <= D)
        y = self
        for m in range(1, bound + 1):
            if totient(m) <= D and y == 1:
                return m
            y = y * self
        return None

    # -- numerics

    def to_complex(self, dps=None):
        B = _basis(self.comps)
        if dps is None:
            vals = B.cvals()
            sq = cmath.sqrt(self.d) if self.d != 1 else 0
            z = sum(x * v for x, v in zip(self.a, vals) if x)
            if self.b is not None:
                z += sq * sum(x * v for x, v in zip(self.b, vals) if x)
            return complex(z) / self.den
        with mpmath.workdps(dps):
            vals = []
            for ks in B.exps:
                v = mpmath.mpc(1)
                for k, q in zip(ks, B.qs):
                    v *= mpmath.expjpi(mpmath.mpf(2 * k) / q)
                vals.append(v)
            z = mpmath.fsum(x * v for x, v in zip(self.a, vals) if x)
            if self.b is not None:
                sq = mpmath.sqrt(mpmath.mpf(self.d)) if self.d > 0 else 1j * mpmath.sqrt(-self.d)
                z += sq * mpmath.fsum(x * v for x, v in zip(self.b, vals) if x)
            return z / self.den

    def __abs__(self):
        return abs(self.to_complex())

    # -- recognition

    def as_quadratic(self):
        """(a, b, d) with self = a + b*sqrt(d), d squarefree, or None."""
        if self.is_rational():
            return self.to_fraction(), Fraction(0), 1
        if not self.comps:
            return Fraction(self.a[0], self.den), Fraction(self.b[0], self.den), self.d
        cs = self.conjugates()
        if len(cs) != 2:
            return None
        a = (cs[0] + cs[1]) / 2
        if not a.is_rational():
            return None
        delta = self - a
        r = delta * delta
        if not r.is_rational():
            return None
        r = r.to_fraction()
        s, t = squarefree_split(r.numerator * r.denominator)
        b = Fraction(t, r.denominator)
        z = delta.to_complex()
        ref = cmath.sqrt(s) * b
        if abs(z - ref) > abs(z + ref):
            b = -b
        return a.to_fraction(), b, s

    def twist_form(self):
        """(base, j, W) with self = base * zeta_W**j and base in a quadratic field, or None."""
        q = self.as_quadratic() if not self.comps else None
        if q is not None:
            return AlgNum.quad(*q), 0, 1
        W = lcm(2, self.N, conductor(self.d))
        cands = []
        for j in range(W):
            y = self * AlgNum.zeta(-j, W)
            if not y.comps:
                return y, j, W
            cands.append((j, y))
        for j, y in cands:
            q = y.as_quadratic()
            if q is not None:
                return AlgNum.quad(*q), j, W
        return None

    def root(self, m):
        """Some y with y**m == self, when it is easy to find."""
        if m == 1:
            return self
        if self.is_zero():
            return self
        if self.is_rational():
            q = self.to_fraction()
            r = rational_root(abs(q), m)
            if r is not None:
                if q > 0:
                    return AlgNum(r)
                return AlgNum(r) * AlgNum.zeta(1, 2 * m)
            if m == 2:
                return AlgNum._sqrt_rat(q)
            raise UnsupportedField(f"{q}^(1/{m}) is not in a supported field")
        o = self.is_root_of_unity()
        if o is not None:
            for j in range(o):
                if gcd(j, o) == 1 and AlgNum.zeta(j, o) == self:
                    return AlgNum.zeta(j, o * m)
        tf = self.twist_form()
        if tf is not None:
            base, j, W = tf
            tw = AlgNum.zeta(j, W * m)
            if base.is_rational():
                return AlgNum(base).root(m) * tw
            if m == 2:
                qa, qb, qd = base.as_quadratic()
                nrm = qa * qa - qd * qb * qb
                n = rational_root(nrm, 2) if nrm >= 0 else None
                if n is not None:
                    for u2 in ((qa + n) / 2, (qa - n) / 2):
                        u = rational_root(u2, 2) if u2 > 0 else None
                        if u:
                            return AlgNum.quad(u, qb / (2 * u), qd) * tw
        raise UnsupportedField(f"({self})^(1/{m}) is not in a supported field")

    # -- display

    def __str__(self):
        if self.is_rational():
            return str(self.to_fraction())
        if not self.comps:
            a, b = Fraction(self.a[0], self.den), Fraction(self.b[0], self.den)
            s = f"{b}*sqrt({self.d})" if b != 1 else f"sqrt({self.d})"
            if a == 0:
                return s
            return f"({a} + {s})" if b > 0 else f"({a} - {str(-b) + '*' if b != -1 else ''}sqrt({self.d}))"
        B = _basis(self.comps)
        parts = []
        for f in range(B.D):
            ca = Fraction(self.a[f], self.den)
            cb = Fraction(self.b[f], self.den) if self.b is not None else 0
            if not (ca or cb):
                continue
            j = B.zeta_index(f)
            z = "" if j == 0 else f"z{B.N}^{j}"
            c = str(AlgNum.quad(ca, cb, self.d)) if cb else str(ca)
            if z:
                parts.append(z if c == "1" else f"{c}*{z}")
            else:
                parts.append(c)
        return " + ".join(parts)

    def __repr__(self):
        return f"AlgNum({self})"


@lru_cache(maxsize=None)
def _sqrt_cyclo(d):
    """sqrt(d) as an element of Q(zeta_cond(d)), principal branch."""
    n = conductor(d)
    acc = AlgNum(1)
    rest = d
    if rest < 0:
        acc = acc * AlgNum.zeta(1, 4)
        rest = -rest
    if rest % 2 == 0:
        acc = acc * (AlgNum.zeta(1, 8) + AlgNum.zeta(-1, 8))
        rest //= 2
    for p, _ in factor(rest):
        g = AlgNum(0)
        for a in range(1, p):
            leg = pow(a, (p - 1) // 2, p)
            g = g + (AlgNum.zeta(a, p) if leg == 1 else -AlgNum.zeta(a, p))
        # g = sqrt(p*) with p* = (-1)^((p-1)/2) p
        if p % 4 == 3:
            g = g * AlgNum.zeta(-1, 4)  # i * sqrt(-p) ... fixed below by sign check
        acc = acc * g
    ref = cmath.sqrt(d)
    z = acc.to_complex()
    if abs(z - ref) > abs(z + ref):
        acc = -acc
    if abs(acc.to_complex() - ref) > 1e-6 * max(1, abs(ref)):
        raise ArithmeticError(f"sqrt({d}) construction failed")
    return _lift_to(acc, _comps_of(n))


def _lift_to(x, comps):
    return tuple(_lift(x.comps, comps, x.a)), comps


def _sqrt_vec(d, comps):
    vec, src = _sqrt_cyclo(d)
    return _lift(src, comps, list(vec))


def rat(x):
    """Convert an int, Fraction or rational AlgNum to Fraction."""
    return as_fraction(x)


def to_alg(x):
    return x if isinstance(x, AlgNum) else AlgNum(as_fraction(x))
