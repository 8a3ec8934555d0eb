import random
from fractions import Fraction
from math import gcd, log

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from lindiv.analysis import (check_coolio, check_division, check_strong, coolio_divisor, gcd_collapse_check,
                             gcd_growth_detect, monomial_bound_check, mult_dep_normalize, padic_order,
                             padic_valuation_direct, padic_valuation_law, rank_of_apparition,
                             vandermonde_closed_form, vandermonde_det, vandermonde_matrix, zero_structure)
from lindiv.errors import NotAnLDS, PDividesGamma, RepeatedPoint
from lindiv.exactnum import AlgNum
from lindiv.factories import combine_by_divisors, lucas_sequence, make_periodic
from lindiv.lrs import FuncSeq, RecurrenceSpec, recurrence_to_closed_form

FIB = lucas_sequence(1, -1)
MERSENNE = lucas_sequence(3, 2)
IDENT = FuncSeq(lambda n: n)


def test_division_checks():
    r = check_strong(FIB, 60)
    assert r.holds and r.strong and r.ok
    r = check_strong(IDENT, 100)
    assert r.ok
    both = FuncSeq(lambda n: (2 ** n - 1) * (3 ** n - 1) // 2)
    r = check_strong(both, 30)
    assert r.holds and not r.strong
    assert r.recheck(both)
    m, n = r.strong_witness["m"], r.strong_witness["n"]
    assert gcd(both(m), both(n)) != both(gcd(m, n))
    bad = FuncSeq(lambda n: n + 1)
    r = check_division(bad, 10)
    assert not r.holds and r.witness["m"] == 1 and r.recheck(bad)
    assert r.to_json()["division"] is False


def test_zero_structure():
    z = zero_structure(FuncSeq(lambda n: 2 ** n - (-2) ** n), 40)
    assert z.M == 2 and z.divisors == [2]
    assert zero_structure(FIB, 40).divisors == []
    v3 = FuncSeq(lambda n: 0)
    c = combine_by_divisors(3, {1: make_periodic(1, {1: 1}), 3: v3})
    assert zero_structure(c, 30).divisors == [3]
    with pytest.raises(NotAnLDS):
        zero_structure(FuncSeq(lambda n: n + 1), 10)


def test_vandermonde_small():
    assert vandermonde_det([1, 1], [2, 5]) == 3
    assert abs(vandermonde_det([2], [7])) == 7
    ks, xs = [2, 1], [2, 3]
    M = sympy.Matrix(vandermonde_matrix(ks, xs))
    assert abs(M.det()) == abs(vandermonde_closed_form(ks, xs))
    with pytest.raises(RepeatedPoint):
        vandermonde_det([1, 1], [3, 3])


def compositions(k):
    if k == 0:
        yield []
        return
    for first in range(1, k + 1):
        for rest in compositions(k - first):
            yield [first] + rest


@pytest.mark.parametrize("k", range(1, 7))
def test_vandermonde_compositions(k):
    rng = random.Random(k)
    for ks in compositions(k):
        pts = set()
        while len(pts) < len(ks):
            x = Fraction(rng.randint(-9, 9), rng.randint(1, 4))
            if x:
                pts.add(x)
        xs = sorted(pts)
        assert abs(vandermonde_det(ks, xs)) == abs(vandermonde_closed_form(ks, xs))


def test_coolio():
    ep = recurrence_to_closed_form(FIB)
    for n in range(1, 15):
        assert coolio_divisor(ep, n) == AlgNum(FIB(n))
    assert check_coolio(RecurrenceSpec([0, 0, 8], [0, 1, 1]), 30)["holds"]
    rng = random.Random(3)
    spec = RecurrenceSpec([rng.randint(-3, 3) for _ in range(3)] + [1], [rng.randint(-5, 5) for _ in range(4)])
    assert check_coolio(spec, 25)["holds"]


def test_padic_examples():
    assert padic_order(2, 7) == 3
    assert padic_valuation_direct(2, 7, 21) == 2
    assert all(padic_valuation_law(2, 7, 3 * k) == 1 for k in range(1, 30) if k % 7)
    assert padic_valuation_law(3, 2, 2) == 3
    assert all(padic_valuation_law(3, 2, 2 * k) == 3 + sympy.multiplicity(2, k) for k in range(1, 40))
    with pytest.raises(PDividesGamma):
        padic_order(14, 7)


@pytest.mark.parametrize("gamma", [2, 3, 5, 10, -2])
def test_padic_law_sweep(gamma):
    for p in sympy.primerange(2, 50):
        if gamma % p == 0:
            continue
        for j in range(1, 501):
            if gamma ** j == 1:
                continue
            assert padic_valuation_law(gamma, p, j) == padic_valuation_direct(gamma, p, j), (p, j)


def test_rank_of_apparition():
    assert rank_of_apparition(FIB, 7) == 8
    assert rank_of_apparition(MERSENNE, 7) == 3
    assert rank_of_apparition(IDENT, 4) == 4
    for pe in (2, 3, 4, 5, 8, 9, 11, 25):
        rank_of_apparition(FIB, pe, 120)


def test_mult_dep():
    d = mult_dep_normalize([4, 8])
    assert d.w == 2 and d.exponents == [2, 3] and d.torsion == [1, 1]
    d = mult_dep_normalize([-2, 4])
    assert d.w == 2 and d.exponents == [1, 2] and d.torsion == [-1, 1]
    assert not mult_dep_normalize([2, 3]).dependent
    phi = AlgNum.quad(Fraction(1, 2), Fraction(1, 2), 5)
    d = mult_dep_normalize([phi ** 2, -phi ** 3])
    assert d.dependent and d.exponents == [2, 3]


def test_gcd_collapse():
    r = gcd_collapse_check([4, 8], range(1, 41))
    assert r["holds"] and all(row["gcd"] == 2 ** row["n"] - 1 for row in r["rows"])
    assert gcd_collapse_check([5], range(1, 10))["holds"]
    r = gcd_collapse_check([-2, 4], range(1, 21))
    assert all(row["status"] in ("ok", "small") for row in r["rows"] if row["n"] % 2 == 0)


def test_monomial_bound():
    assert monomial_bound_check([(1, 3)], {0: -1, 1: 3, 2: -3, 3: 1})["verdict"]
    r = monomial_bound_check([(1, 1), (2, 1)], {4: 1, 3: -2, 1: 2, 0: -1})
    assert r["premise"] and r["r"] == 4 and r["bound_holds"]
    r = monomial_bound_check([(1, 2)], {0: 1, 1: -1})
    assert not r["premise"] and r["verdict"]


@settings(max_examples=30, deadline=None)
@given(st.lists(st.tuples(st.integers(1, 4), st.integers(1, 2)), min_size=1, max_size=3),
       st.lists(st.integers(-2, 2), min_size=0, max_size=6))
def test_monomial_bound_property(hs, extra):
    # build a multiple of prod (x^c - 1)^h and check r >= H + 1
    x = sympy.Symbol("x")
    L = sympy.prod([(x ** c - 1) ** h for c, h in hs])
    Q = sum(e * x ** i for i, e in enumerate(extra)) or 1
    P = sympy.Poly(sympy.expand(L * Q), x)
    poly = {m[0]: int(c) for m, c in zip(P.monoms(), P.coeffs())}
    r = monomial_bound_check(hs, poly)
    assert r["premise"] and r["bound_holds"] and r["moments_vanish"]


def test_gcd_growth():
    pairs = gcd_growth_detect(MERSENNE, FuncSeq(lambda n: 4 ** n - 1), 30, Fraction(3, 10))
    assert pairs and all(g == 2 ** gcd(m, 2 * n) - 1 for m, n, g in pairs)
    for m, n, g in pairs:
        assert log(g) > 0.3 * (m + n)
    small = gcd_growth_detect(IDENT, IDENT, 80, Fraction(1, 10))
    assert small and max(m + n for m, n, _ in small) < 60
    with pytest.raises(Exception):
        gcd_growth_detect(IDENT, IDENT, 10, 0)
