import random

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from lindiv.errors import InvalidArgument, InvariantViolation, MalformedBinomial
from lindiv.exactnum import AlgNum, UniPoly, cyclotomic, divisors
from lindiv.polylds import (Binomial, CyclotomicLDSSpec, UnityRootMultiset, binomial_substitution_factor,
                            divides, expand, from_koshkin, general_lds_in_t, is_divisibility_closed,
                            koshkin_form, lcm_multisets, poly_mul, substitution_divides)

X = sympy.Symbol("x")


def xm1(n, k=1):
    return UnityRootMultiset.x_pow_minus_one(n, k)


def to_sympy(p):
    return sum(sympy.Rational(str(AlgNum(c).to_fraction())) * X ** i for i, c in enumerate(p.c))


def test_lcm_product_divides():
    s = lcm_multisets([xm1(2), xm1(3)])
    assert expand(s) == UniPoly([1, 1]) * UniPoly([-1, 0, 0, 1])
    assert divides(xm1(1), xm1(6))
    assert not divides(xm1(6), xm1(1))
    assert expand(xm1(1) * xm1(1)) == UniPoly([-1, 1]) ** 2


def test_koshkin():
    f = UniPoly([1, 1]) * UniPoly([-1, 0, 0, 1])
    assert koshkin_form(f) == {2: 1, 3: 1}
    assert koshkin_form(cyclotomic(3)) is None
    assert not is_divisibility_closed(cyclotomic(3))
    assert koshkin_form(UniPoly([-1, 1]) ** 5) == {1: 5}
    assert from_koshkin({2: 1, 3: 1}) == UnityRootMultiset.from_poly(f)


def test_substitution_divides():
    assert substitution_divides(UniPoly([-1, 1]), 6, 3)
    # Phi_3(x) divides Phi_3(x^2) = Phi_3 Phi_6, but not Phi_3(x^3) = Phi_9
    assert substitution_divides(cyclotomic(3), 2, 1)
    assert not substitution_divides(cyclotomic(3), 3, 1)
    with pytest.raises(InvalidArgument):
        substitution_divides(cyclotomic(3), 5, 2)


def test_gcd_six_family_divides():
    def u(n):
        from math import gcd
        d = gcd(n, 6)
        return UnityRootMultiset.x_pow_minus_one(n).quotient(UnityRootMultiset.x_pow_minus_one(d))
    assert u(2).divides(u(6))
    assert u(4).divides(u(12))


def brute_closed(f, limit=12):
    p = to_sympy(expand(f))
    for m in range(1, limit + 1):
        for n in range(2 * m, limit + 1, m):
            if sympy.rem(p.subs(X, X ** n), p.subs(X, X ** m), X) != 0:
                return False
    return True


multisets = st.dictionaries(st.integers(1, 12), st.integers(1, 2), max_size=3)


@settings(max_examples=40, deadline=None)
@given(multisets)
def test_closed_agrees_with_division(orders):
    if sum(orders.values()) == 0:
        return
    f = UnityRootMultiset.from_orders(orders)
    if f.degree() > 14:
        return
    assert is_divisibility_closed(f) == brute_closed(f)


def test_general_lds_m1():
    spec = CyclotomicLDSSpec(1, {(1, 1, 0): 1})
    for n in range(1, 8):
        assert expand(general_lds_in_t(spec, n)) == UniPoly([1] * n)


def test_m5_table():
    spec = CyclotomicLDSSpec(5, {(1, 3, 0): 1, (5, 2, 0): 1, (5, 3, 0): 1})
    for n in range(1, 13):
        for k in range(2 * n, 25, n):
            assert general_lds_in_t(spec, n).divides(general_lds_in_t(spec, k))
    for d in divisors(5):
        assert general_lds_in_t(spec, d).degree() == 0


def test_invalid_table_rejected():
    with pytest.raises(InvariantViolation):
        CyclotomicLDSSpec(2, {(1, 1, 1): 1})


def random_table(rng, M):
    h = {}
    for _ in range(rng.randint(1, 4)):
        d = rng.choice(divisors(M))
        h[(d, rng.randint(1, 4), rng.randrange(M // d))] = rng.randint(1, 2)
    changed = True
    while changed:
        changed = False
        for (d, m, j), v in list(h.items()):
            for D in divisors(M):
                if D % d == 0 and h.get((D, m, j % (M // D)), 0) < v:
                    h[(D, m, j % (M // D))] = v
                    changed = True
    return CyclotomicLDSSpec(M, h)


def test_random_tables_monotone():
    rng = random.Random(7)
    for _ in range(5):
        spec = random_table(rng, rng.choice([2, 3, 4, 6]))
        vs = {n: general_lds_in_t(spec, n) for n in range(1, 25)}
        for n in vs:
            for k in range(2 * n, 25, n):
                assert vs[n].divides(vs[k])


def test_binomials():
    c = AlgNum(5)
    parts = binomial_substitution_factor(Binomial((0, 1), (0, 0), c), 2)
    assert len(parts) == 2
    assert poly_mul(parts[0].expand(), parts[1].expand()) == Binomial((0, 2), (0, 0), c).expand()
    one = binomial_substitution_factor(Binomial((1, 1), (0, 0), 3), 2)
    assert one == [Binomial((1, 2), (0, 0), 3)]
    three = binomial_substitution_factor(Binomial((0, 1, 1), (0, 0, 0), 1), 3)
    acc = {(0, 0, 0): AlgNum(1)}
    for b in three:
        acc = poly_mul(acc, b.expand())
    assert acc == Binomial((0, 3, 3), (0, 0, 0), 1).expand()
    with pytest.raises(MalformedBinomial):
        Binomial((1, 1), (1, 0), 2)
