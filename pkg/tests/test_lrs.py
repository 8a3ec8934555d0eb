from fractions import Fraction
from math import gcd

import pytest
from hypothesis import given, settings, strategies as st

from lindiv.errors import NoRecurrenceDetected, UnsupportedSplittingField
from lindiv.exactnum import AlgNum, UniPoly
from lindiv.lrs import (ExpPoly, RecurrenceSpec, closed_form_to_recurrence, minimal_order, period,
                        period_structure, product, quotient_fit, recurrence_to_closed_form)

FIB = RecurrenceSpec([1, 1], [0, 1])
LUC = RecurrenceSpec([1, 1], [2, 1])
GW = ExpPoly([(Fraction(1, 3), 2), (Fraction(1, 3), 3),
              (Fraction(-1, 3), AlgNum.quad(1, 1, -5)), (Fraction(-1, 3), AlgNum.quad(1, -1, -5))])
W = AlgNum.zeta(1, 3)
OMEGA = ExpPoly([(3, 1), (2, W), (2, W * W)])
FOOT = ExpPoly([(1, 8), (-1, -4), (-1, 2), (1, -1)])


def test_eval():
    assert FIB(10) == 55
    assert GW.terms(4) == [0, 1, 7, 21]
    assert OMEGA(3) == 7 and OMEGA(4) == 1


def test_binet():
    ep = recurrence_to_closed_form(FIB)
    s5 = AlgNum.quad(0, 1, 5)
    coeffs = {a: g.c[0] for g, a in ep.items}
    phi = AlgNum.quad(Fraction(1, 2), Fraction(1, 2), 5)
    assert coeffs[phi] == s5.inv()
    assert ep.terms(20) == FIB.terms(20)


def test_guy_williams_recurrence_round_trip():
    rec = closed_form_to_recurrence(GW)
    assert list(rec.coeffs) == [7, -22, 42, -36]
    back = recurrence_to_closed_form(RecurrenceSpec([7, -22, 42, -36], [0, 1, 7, 21]))
    assert set(back.roots) == set(GW.roots)
    assert back.terms(15) == GW.terms(15)


def test_cube_root_fallback():
    with pytest.raises(UnsupportedSplittingField) as ei:
        recurrence_to_closed_form(RecurrenceSpec([0, 0, 2], [0, 1, 3]))
    g, ell = ei.value.fallback
    assert ell == 3


def test_repeated_roots():
    ep = recurrence_to_closed_form(RecurrenceSpec([3, -3, 1], [0, 1, 4]))
    assert ep.terms(8) == [n * n for n in range(8)]


def test_minimal_order():
    k, spec = minimal_order(FIB.terms(12))
    assert k == 2 and list(spec.coeffs) == [1, 1]
    assert minimal_order(FOOT.terms(14))[0] == 4


def test_gcd_sequence_has_no_recurrence():
    u = [gcd(2 ** n - 1, int(f)) for n, f in enumerate(FIB.terms(200))]
    with pytest.raises(NoRecurrenceDetected):
        minimal_order(u, 8)


def test_period():
    assert period(FOOT) == 2
    assert period(OMEGA) == 3
    assert period(ExpPoly([(1, 7)])) == 1
    # torsion from phi * psi = -1
    assert period(recurrence_to_closed_form(FIB)) == 2
    assert period(recurrence_to_closed_form(RecurrenceSpec([3, -2], [0, 1]))) == 1


def test_period_structure_bases():
    ps = period_structure(ExpPoly([(1, 1), (-1, 2), (-1, 3), (1, 6)]))
    assert ps.M == 1 and set(ps.gammas) == {AlgNum(2), AlgNum(3)}
    got = {a: tuple(e) for (_, a), e in zip(ps.ep.items, ps.exponents)}
    g = [int(x.to_fraction()) for x in ps.gammas]
    for a, e in got.items():
        assert AlgNum(g[0]) ** e[0] * AlgNum(g[1]) ** e[1] == a
    ps = period_structure(ExpPoly([(1, 1), (1, 5), (1, -5)]))
    assert ps.M == 2 and ps.gammas == [AlgNum(5)]
    ps = period_structure(ExpPoly([(1, 9)]))
    assert ps.M == 1 and ps.gammas == [AlgNum(9)]


def test_class_formula_reproduces_terms():
    for ep in (FOOT, OMEGA, GW, recurrence_to_closed_form(FIB)):
        ps = period_structure(ep)
        assert [ps.eval_class(n) for n in range(20)] == ep.terms(20)


def test_product_and_quotient():
    f, l = recurrence_to_closed_form(FIB), recurrence_to_closed_form(LUC)
    assert product(f, l).terms(30) == [FIB(2 * n) for n in range(30)]
    q = quotient_fit(lambda n: FIB(2 * n), FIB, k_max=4, start=1)
    assert q.terms(12, 1) == LUC.terms(12, 1)
    n = ExpPoly([(UniPoly([0, 1]), 1)])
    nn = product(n, n)
    assert nn.order == 3 and nn.terms(6) == [0, 1, 4, 9, 16, 25]


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(-5, 5), min_size=2, max_size=2), st.lists(st.integers(-5, 5), min_size=2, max_size=2))
def test_closed_form_round_trip(c, init):
    if c[1] == 0:
        return
    spec = RecurrenceSpec(c, init)
    try:
        ep = recurrence_to_closed_form(spec)
    except UnsupportedSplittingField:
        return
    assert ep.terms(15) == spec.terms(15)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.integers(-4, 4), min_size=6, max_size=6))
def test_minimal_order_recovers_fitted(seed):
    if seed[2] == 0 or not any(seed[3:]):
        return
    spec = RecurrenceSpec(seed[:3], seed[3:])
    terms = spec.terms(12)
    k, fit = minimal_order(terms, 5)
    assert k <= 3
    assert fit.terms(12) == terms
