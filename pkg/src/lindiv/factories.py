"""Constructors for the standard LDS families, and the JSON sequence schema."""

from fractions import Fraction
from math import gcd, isqrt

from .errors import (DegenerateParameters, InvalidArgument, InvariantViolation, LindivError,
                     NonIntegralResult, SchemaError)
from .exactnum import AlgNum, UniPoly, cyclotomic, divisors, squarefree_split, totient
from .lrs import ExpPoly, ProductSeq, RecurrenceSpec, Sequence
from .polylds import CyclotomicLDSSpec, UnityRootMultiset, general_lds_in_t


def _divides(a, b):
    return b == 0 if a == 0 else b % a == 0


def _indicator(M, a):
    """Closed-form terms of 1[n = a mod M] as (coefficient, root) pairs."""
    if M == 1:
        return [(AlgNum(1), AlgNum(1))]
    out = []
    for j in range(M):
        z = AlgNum.zeta(j, M)
        out.append((AlgNum.zeta(-j * a, M) * Fraction(1, M), z))
    return out


# ---------------------------------------------------------------- periodic / power / exponential

class PeriodicLDS(Sequence):
    """u_n = sigma_a * u_{(a, M)} for n = a (mod M)."""

    def __init__(self, M, values, signs):
        self.M = M
        self.values = values
        self.signs = signs

    def __call__(self, n):
        a = n % self.M or self.M
        return self.signs[a] * self.values[gcd(a, self.M)]

    def closed_form(self):
        terms = []
        for a in range(1, self.M + 1):
            c = self.signs[a] * self.values[gcd(a, self.M)]
            if c:
                terms += [(g * c, r) for g, r in _indicator(self.M, a)]
        return ExpPoly(terms)

    def spec_json(self):
        return {"type": "periodic", "M": self.M,
                "values": {str(d): v for d, v in sorted(self.values.items())},
                "signs": {str(a): s for a, s in sorted(self.signs.items())}}

    def __repr__(self):
        return f"PeriodicLDS(M={self.M}, values={self.values})"


def make_periodic(M, values, signs=None):
    if M < 1:
        raise InvalidArgument("M must be >= 1")
    divs = divisors(M)
    values = {int(d): int(v) for d, v in values.items()}
    if sorted(values) != divs:
        raise InvalidArgument(f"values must be given exactly on the divisors {divs} of {M}")
    signs = {a: 1 for a in range(1, M + 1)} | {int(a): int(s) for a, s in (signs or {}).items()}
    if sorted(signs) != list(range(1, M + 1)):
        raise InvalidArgument("signs are indexed by 1..M")
    for a, s in signs.items():
        if s not in (1, -1):
            raise InvariantViolation(f"sigma_{a} = {s} is not +-1")
        if M % a == 0 and s != 1:
            raise InvariantViolation(f"sigma_{a} must be +1 on the divisor {a}")
    for d in divs:
        for D in divs:
            if D % d == 0 and not _divides(values[d], values[D]):
                raise InvariantViolation(f"u_{d} does not divide u_{D} with {d} | {D}")
    return PeriodicLDS(M, values, signs)


class PowerLDS(Sequence):
    """u_n = (n/d)**e_d with d = (n, M)."""

    def __init__(self, M, exps):
        self.M = M
        self.exps = exps

    def __call__(self, n):
        d = gcd(n, self.M) if n else self.M
        return Fraction(n, d) ** self.exps[d]

    def closed_form(self):
        terms = []
        for a in range(1, self.M + 1):
            d = gcd(a, self.M)
            e = self.exps[d]
            g = UniPoly.monomial(e, Fraction(1, d ** e))
            terms += [(g * c, r) for c, r in _indicator(self.M, a)]
        return ExpPoly(terms)

    def spec_json(self):
        return {"type": "power", "M": self.M, "exps": {str(d): e for d, e in sorted(self.exps.items())}}

    def __repr__(self):
        return f"PowerLDS(M={self.M}, exps={self.exps})"


def make_power(M, exps):
    if M < 1:
        raise InvalidArgument("M must be >= 1")
    divs = divisors(M)
    exps = {int(d): int(e) for d, e in exps.items()}
    if sorted(exps) != divs:
        raise InvalidArgument(f"exponents must be given exactly on the divisors {divs} of {M}")
    for d in divs:
        if exps[d] < 0:
            raise InvariantViolation(f"e_{d} < 0")
        for D in divs:
            if D % d == 0 and exps[d] > exps[D]:
                raise InvariantViolation(f"e_{d} > e_{D} with {d} | {D}")
    return PowerLDS(M, exps)


class ExponentialLDS(Sequence):
    """u_{a+kM} = prod p_i**(k*h_{i,a}) for 1 <= a <= M."""

    def __init__(self, M, primes, tables):
        self.M = M
        self.primes = primes
        self.tables = tables

    def __call__(self, n):
        a = n % self.M or self.M
        k = (n - a) // self.M
        acc = Fraction(1)
        for p, h in zip(self.primes, self.tables):
            acc *= Fraction(p) ** (k * h[a])
        return acc

    def closed_form(self):
        """Exact closed form; each h_{i,a} must be a multiple of M."""
        terms = []
        for a in range(1, self.M + 1):
            root, shift = Fraction(1), Fraction(1)
            for p, h in zip(self.primes, self.tables):
                if h[a] % self.M:
                    raise InvalidArgument("closed form needs M | h_{i,a}")
                root *= Fraction(p) ** (h[a] // self.M)
            shift = root ** -a
            terms += [(c * shift, r * root) for c, r in _indicator(self.M, a)]
        return ExpPoly(terms)

    def spec_json(self):
        return {"type": "exponential", "M": self.M, "primes": list(self.primes),
                "tables": [[h[a] for a in range(1, self.M + 1)] for h in self.tables]}

    def __repr__(self):
        return f"ExponentialLDS(M={self.M}, primes={self.primes})"


def make_exponential(M, primes, tables):
    if M < 1:
        raise InvalidArgument("M must be >= 1")
    primes = [int(p) for p in primes]
    if len(primes) != len(tables):
        raise InvalidArgument("one exponent table per prime")
    tabs = []
    for p, h in zip(primes, tables):
        if isinstance(h, dict):
            h = {int(a): int(v) for a, v in h.items()}
        else:
            h = {a + 1: int(v) for a, v in enumerate(h)}
        if sorted(h) != list(range(1, M + 1)):
            raise InvalidArgument("exponent tables are indexed by 1..M")
        for a in range(1, M + 1):
            if h[a] < 0:
                raise InvariantViolation(f"p={p}: h_{a} < 0")
            for r in range(1, M + 1):
                b = r * a % M or M
                if h[a] > r * h[b]:
                    raise InvariantViolation(
                        f"p={p}: h_{a} > {r}*h_{b} with {b} = {r}*{a} (mod {M})")
        tabs.append(h)
    return ExponentialLDS(M, primes, tabs)


# ---------------------------------------------------------------- Lucas and Lehmer

def lucas_sequence(P, Q):
    if P * P - 4 * Q == 0:
        raise DegenerateParameters(f"P^2 - 4Q = 0 for P={P}, Q={Q}")
    if Q == 0:
        raise DegenerateParameters("Q = 0 gives a zero root")
    return RecurrenceSpec([P, -Q], [0, 1])


def lucas(P, Q, n):
    return int(lucas_sequence(P, Q)(n))


def _check_lehmer(r, s):
    for v, name in ((r, "r"), (s, "s")):
        if v == 0 or squarefree_split(abs(v))[1] != 1:
            raise DegenerateParameters(f"{name}={v} is not squarefree")
    if (r - s) % 4:
        raise DegenerateParameters("r - s must be divisible by 4")
    rs = r * s
    if rs >= 0 and isqrt(rs) ** 2 == rs:
        raise DegenerateParameters("r*s is a square")


def lehmer_sequence(r, s):
    """Squared Lehmer sequence ((a^n - b^n)/(a - b))**2, a, b = (sqrt r +- sqrt s)/2."""
    _check_lehmer(r, s)
    d = (r - s) // 4
    # roots a^2, b^2 and ab = d
    t = r - 2 * d
    c1, c2, c3 = t + d, -(d * d + t * d), d ** 3
    return RecurrenceSpec([c1, c2, c3], [0, 1, r])


def lehmer(r, s, n):
    return int(lehmer_sequence(r, s)(n))


def lehmer_direct(r, s, n):
    """Same value by exact evaluation in Q(sqrt r, sqrt s) via the roots a^2, b^2."""
    _check_lehmer(r, s)
    # a^2, b^2 = ((r+s)/2 +- sqrt(rs))/2 live in Q(sqrt rs)
    sq, t = squarefree_split(abs(r * s))
    sgn = 1 if r * s > 0 else -1
    A2 = AlgNum.quad(Fraction(r + s, 4), Fraction(t, 2), sgn * sq)
    B2 = AlgNum.quad(Fraction(r + s, 4), Fraction(-t, 2), sgn * sq)
    ab = Fraction(r - s, 4)
    val = (A2 ** n + B2 ** n - 2 * AlgNum(ab) ** n) / s
    return int(val.to_fraction())


# ---------------------------------------------------------------- polynomially generated

class PolyGenSpec(Sequence):
    """Evaluate a divisibility-closed family f_n at gamma = alpha/beta.

    v_n = sign * prod_{sigma in H} F_n(alpha, beta)^sigma / q**deg(F_n), where F_n is
    the homogenization of f_n. With strip_one the root 1 of f_n is removed
    first; with M the value is further divided by v_{(n, M)}.
    """

    def __init__(self, family, alpha, beta, H="identity", q=None, strip_one=False, M=None,
                 sign=1, label=None):
        if H not in ("identity", "conjugate"):
            raise InvalidArgument("H must be 'identity' or 'conjugate'")
        self.family = family
        self.alpha = alpha if isinstance(alpha, AlgNum) else AlgNum(alpha)
        self.beta = beta if isinstance(beta, AlgNum) else AlgNum(beta)
        if self.alpha.is_zero() or self.beta.is_zero():
            raise DegenerateParameters("alpha and beta must be nonzero")
        g = self.alpha / self.beta
        if g.is_root_of_unity() is not None:
            raise DegenerateParameters("alpha/beta is a root of unity")
        self.H = H
        self.q = Fraction(q) if q is not None else self._auto_q()
        self.strip_one = strip_one
        self.M = M
        self.sign = sign
        self.label = label or {"family": "custom"}
        self._cache = {}

    def _auto_q(self):
        """Content gcd of alpha and beta when that generates their ideal, else 1."""
        if self.alpha.is_rational() and self.beta.is_rational():
            a, b = self.alpha.to_fraction(), self.beta.to_fraction()
            return Fraction(gcd(a.numerator, b.numerator), a.denominator * b.denominator // gcd(a.denominator, b.denominator))
        qa, qb = self.alpha.as_quadratic(), self.beta.as_quadratic()
        if qa is None or qb is None:
            return Fraction(1)
        parts = [x for x in qa[:2] + qb[:2]]
        num = 0
        den = 1
        for x in parts:
            num = gcd(num, x.numerator)
            den = den * x.denominator // gcd(den, x.denominator)
        g = Fraction(num, den) if num else Fraction(1)
        na = (self.alpha / g).norm()
        nb = (self.beta / g).norm()
        if na.denominator == 1 and nb.denominator == 1 and gcd(int(na), int(nb)) == 1:
            return g
        return Fraction(1)

    def _F(self, n, x, y):
        f = self.family(n)
        if self.strip_one:
            f = UnityRootMultiset({k: v for k, v in f.mult.items() if k != 0}, f.scalar, f.power)
        acc = f.scalar * x ** f.power
        for m, roots in sorted(f.by_order().items()):
            ks = set(roots.values())
            if len(roots) == totient(m) and len(ks) == 1:
                c = cyclotomic(m).c
                deg = len(c) - 1
                val = sum((AlgNum(ci) * x ** i * y ** (deg - i) for i, ci in enumerate(c) if ci), AlgNum(0))
                acc = acc * val ** ks.pop()
            else:
                for th, k in sorted(roots.items()):
                    acc = acc * (x - AlgNum.zeta(th.numerator, th.denominator) * y) ** k
        return acc, f.degree()

    def _v(self, n):
        if n in self._cache:
            return self._cache[n]
        val, deg = self._F(n, self.alpha, self.beta)
        if self.H == "conjugate":
            w, _ = self._F(n, self.alpha.galois(1, -1), self.beta.galois(1, -1))
            val = val * w
            deg *= 2
        val = val * self.sign / self.q ** deg
        self._cache[n] = val
        return val

    def __call__(self, n):
        if n < 1:
            raise InvalidArgument("polynomially generated sequences start at n = 1")
        val = self._v(n)
        if self.M:
            val = val / self._v(gcd(n, self.M))
        if not val.is_rational() or val.to_fraction().denominator != 1:
            raise NonIntegralResult(f"v_{n} = {val} is not a rational integer; adjust H or q")
        return int(val.to_fraction())

    def spec_json(self):
        out = {"type": "polygen", "family": self.label, "alpha": self.alpha.to_json(),
               "beta": self.beta.to_json(), "H": self.H, "q": str(self.q),
               "strip_one": self.strip_one, "sign": self.sign}
        if self.M:
            out["M"] = self.M
        return out


def closed_family(f):
    """n -> f(t**n) for a divisibility-closed f (polynomial or multiset)."""
    if isinstance(f, UniPoly):
        f = UnityRootMultiset.from_poly(f)
    return lambda n: f.substitute(n)


def lds_family(spec):
    return lambda n: general_lds_in_t(spec, n)


def lucas_family():
    """n -> (t**n - 1)/(t - 1)."""
    return lambda n: UnityRootMultiset({Fraction(k, n): 1 for k in range(1, n)})


def polygen_eval(spec, n):
    return spec(n)


# ---------------------------------------------------------------- combinators

class CombinedLDS(Sequence):
    """u_n = prod_{d | (M, n)} v^(d)_{n/d}."""

    def __init__(self, M, parts):
        self.M = M
        self.parts = parts

    def __call__(self, n):
        acc = Fraction(1)
        for d, v in self.parts.items():
            if n % d == 0:
                acc *= Fraction(v(n // d))
        return acc

    def spec_json(self):
        return {"type": "combine", "M": self.M,
                "parts": {str(d): v.spec_json() for d, v in sorted(self.parts.items())}}


def combine_by_divisors(M, parts):
    parts = {int(d): v for d, v in parts.items()}
    for d in parts:
        if d < 1 or M % d:
            raise InvalidArgument(f"part key {d} does not divide M={M}")
    return CombinedLDS(M, dict(sorted(parts.items())))


def guy_williams(alpha, beta, gamma, delta):
    """(a^n + d^n - b^n - c^n)/(a + d - b - c) as a closed form; needs a*d = b*c."""
    a, b, c, d = (x if isinstance(x, AlgNum) else AlgNum(x) for x in (alpha, beta, gamma, delta))
    if a * d != b * c:
        raise InvariantViolation("alpha*delta != beta*gamma")
    den = a + d - b - c
    if den.is_zero():
        raise InvariantViolation("alpha + delta - beta - gamma = 0")
    inv = den.inv()
    return ExpPoly([(inv, a), (inv, d), (-inv, b), (-inv, c)])


def guy_williams_rhs(alpha, beta, gamma, n):
    """alpha^-(n-1) * (a^n - b^n)/(a - b) * (a^n - c^n)/(a - c)."""
    a, b, c = (x if isinstance(x, AlgNum) else AlgNum(x) for x in (alpha, beta, gamma))
    an = a ** n
    return a ** (1 - n) * (an - b ** n) / (a - b) * (an - c ** n) / (a - c)


# ---------------------------------------------------------------- JSON schema

SPEC_TYPES = ("recurrence", "closed_form", "periodic", "power", "exponential", "lucas",
              "lehmer", "polygen", "combine", "product")


def _need(obj, key, ptr):
    if key not in obj:
        raise SchemaError(f"missing field {key!r}", ptr)
    return obj[key]


def _alg(obj, ptr):
    try:
        return AlgNum.from_json(obj)
    except SchemaError as e:
        raise SchemaError(str(e).split(": ", 1)[-1], ptr + (e.pointer or "")) from e


def _int(obj, ptr):
    if isinstance(obj, bool) or not isinstance(obj, (int, str)):
        raise SchemaError(f"expected an integer, got {obj!r}", ptr)
    try:
        return int(obj)
    except ValueError as e:
        raise SchemaError(f"expected an integer, got {obj!r}", ptr) from e


def _family(obj, ptr):
    if not isinstance(obj, dict):
        raise SchemaError("family must be an object", ptr)
    if "lucas" in obj:
        return lucas_family()
    if "closed" in obj:
        coeffs = [_int(c, f"{ptr}/closed/{i}") for i, c in enumerate(obj["closed"])]
        try:
            return closed_family(UniPoly(coeffs))
        except InvalidArgument as e:
            raise SchemaError(str(e), ptr + "/closed") from e
    if "lds" in obj:
        lds = obj["lds"]
        M = _int(_need(lds, "M", ptr + "/lds"), ptr + "/lds/M")
        table = {}
        for i, row in enumerate(_need(lds, "h", ptr + "/lds")):
            d, m, j, v = (_int(x, f"{ptr}/lds/h/{i}") for x in row)
            table[(d, m, j)] = v
        try:
            return lds_family(CyclotomicLDSSpec(M, table))
        except InvariantViolation as e:
            raise SchemaError(str(e), ptr + "/lds/h") from e
    raise SchemaError("family needs one of 'lucas', 'closed', 'lds'", ptr)


def sequence_from_json(obj, ptr=""):
    """Build a sequence from the discriminated-union JSON form."""
    if not isinstance(obj, dict):
        raise SchemaError("sequence spec must be an object", ptr)
    kind = _need(obj, "type", ptr)
    if kind not in SPEC_TYPES:
        raise SchemaError(f"unknown type {kind!r}; expected one of {', '.join(SPEC_TYPES)}", ptr + "/type")
    try:
        if kind == "recurrence":
            coeffs = [_alg(c, f"{ptr}/coeffs/{i}") for i, c in enumerate(_need(obj, "coeffs", ptr))]
            init = [_alg(c, f"{ptr}/initial/{i}") for i, c in enumerate(_need(obj, "initial", ptr))]
            for i, c in enumerate(coeffs + init):
                if not c.is_rational():
                    raise SchemaError("recurrence data must be rational", ptr)
            return RecurrenceSpec([c.to_fraction() for c in coeffs], [c.to_fraction() for c in init])
        if kind == "closed_form":
            terms = []
            for i, t in enumerate(_need(obj, "terms", ptr)):
                p = f"{ptr}/terms/{i}"
                if "coeffs" in t:
                    cs = [_alg(c, f"{p}/coeffs/{k}") for k, c in enumerate(t["coeffs"])]
                else:
                    cs = [_alg(_need(t, "coeff", p), p + "/coeff")]
                terms.append((UniPoly(cs), _alg(_need(t, "root", p), p + "/root")))
            return ExpPoly(terms)
        if kind == "periodic":
            M = _int(_need(obj, "M", ptr), ptr + "/M")
            vals = {_int(d, ptr + "/values"): _int(v, f"{ptr}/values/{d}") for d, v in _need(obj, "values", ptr).items()}
            signs = {_int(a, ptr + "/signs"): _int(s, f"{ptr}/signs/{a}") for a, s in obj.get("signs", {}).items()}
            return make_periodic(M, vals, signs)
        if kind == "power":
            M = _int(_need(obj, "M", ptr), ptr + "/M")
            return make_power(M, {_int(d, ptr + "/exps"): _int(e, f"{ptr}/exps/{d}") for d, e in _need(obj, "exps", ptr).items()})
        if kind == "exponential":
            M = _int(_need(obj, "M", ptr), ptr + "/M")
            primes = [_int(p, f"{ptr}/primes/{i}") for i, p in enumerate(_need(obj, "primes", ptr))]
            tabs = _need(obj, "tables", ptr)
            return make_exponential(M, primes, tabs)
        if kind == "lucas":
            return lucas_sequence(_int(_need(obj, "P", ptr), ptr + "/P"), _int(_need(obj, "Q", ptr), ptr + "/Q"))
        if kind == "lehmer":
            return lehmer_sequence(_int(_need(obj, "r", ptr), ptr + "/r"), _int(_need(obj, "s", ptr), ptr + "/s"))
        if kind == "polygen":
            fam = _family(_need(obj, "family", ptr), ptr + "/family")
            q = obj.get("q")
            return PolyGenSpec(fam, _alg(_need(obj, "alpha", ptr), ptr + "/alpha"),
                               _alg(_need(obj, "beta", ptr), ptr + "/beta"),
                               H=obj.get("H", "identity"), q=Fraction(q) if q is not None else None,
                               strip_one=bool(obj.get("strip_one", False)), M=obj.get("M"),
                               sign=_int(obj.get("sign", 1), ptr + "/sign"), label=obj["family"])
        if kind == "combine":
            M = _int(_need(obj, "M", ptr), ptr + "/M")
            parts = {_int(d, ptr + "/parts"): sequence_from_json(v, f"{ptr}/parts/{d}")
                     for d, v in _need(obj, "parts", ptr).items()}
            return combine_by_divisors(M, parts)
        factors = [sequence_from_json(f, f"{ptr}/factors/{i}") for i, f in enumerate(_need(obj, "factors", ptr))]
        return ProductSeq(*factors)
    except SchemaError:
        raise
    except (LindivError, ValueError, TypeError, AttributeError) as e:
        raise SchemaError(str(e), ptr) from e


def load_spec_document(doc):
    """(sequence, metadata, options) from a versioned spec file."""
    if not isinstance(doc, dict):
        raise SchemaError("spec file must be a JSON object")
    version = doc.get("version", 1)
    if version != 1:
        raise SchemaError(f"unsupported version {version!r}", "/version")
    seq = sequence_from_json(_need(doc, "sequence", ""), "/sequence")
    meta = {k: doc[k] for k in ("name", "notes") if k in doc}
    return seq, meta, dict(doc.get("options", {}))
