from fractions import Fraction

import pytest

from lindiv.analysis import check_division
from lindiv.errors import DegenerateParameters, InvariantViolation, SchemaError
from lindiv.exactnum import AlgNum
from lindiv.factories import (PolyGenSpec, closed_family, combine_by_divisors, guy_williams,
                              guy_williams_rhs, lehmer, lehmer_direct, lucas, lucas_family,
                              lucas_sequence, make_exponential, make_periodic, make_power,
                              load_spec_document, sequence_from_json)
from lindiv.exactnum import UniPoly

FIB = [0, 1, 1, 2, 3, 5, 8, 13, 21, 34, 55, 89]


def test_periodic_power_exponential():
    p = make_periodic(3, {1: 1, 3: 7})
    assert [p(n) for n in range(1, 7)] == [1, 1, 7, 1, 1, 7]
    assert [AlgNum(v) for v in p.closed_form().terms(7)] == [AlgNum(p(n)) for n in range(7)]
    q = make_power(1, {1: 2})
    assert [q(n) for n in range(6)] == [0, 1, 4, 9, 16, 25]
    e = make_exponential(2, [2], [[0, 1]])
    assert [e(n) for n in range(1, 9)] == [1, 1, 1, 2, 1, 4, 1, 8]
    assert check_division(e, 64).holds
    with pytest.raises(InvariantViolation):
        make_periodic(2, {1: 2, 2: 3})


def test_lucas_lehmer():
    assert [lucas(1, -1, n) for n in range(12)] == FIB
    assert [lucas(3, 2, n) for n in range(10)] == [2 ** n - 1 for n in range(10)]
    assert [lehmer(5, 1, n) for n in range(1, 5)] == [1, 5, 16, 45]
    assert all(lehmer(5, 1, n) == lehmer_direct(5, 1, n) for n in range(1, 25))
    with pytest.raises(DegenerateParameters):
        lucas_sequence(2, 1)


def test_polygen():
    phi = AlgNum.quad(Fraction(1, 2), Fraction(1, 2), 5)
    psi = AlgNum.quad(Fraction(1, 2), Fraction(-1, 2), 5)
    fib = PolyGenSpec(lucas_family(), phi, psi)
    assert [fib(n) for n in range(1, 12)] == FIB[1:]
    mers = PolyGenSpec(lucas_family(), AlgNum(2), AlgNum(1))
    assert [mers(n) for n in range(1, 8)] == [2 ** n - 1 for n in range(1, 8)]
    f = closed_family(UniPoly([1, 1]) * UniPoly([-1, 0, 0, 1]))
    bala = PolyGenSpec(f, -psi, -phi, strip_one=True, sign=-1)
    L = [2, 1]
    F3 = [0, 2]
    for _ in range(12):
        L.append(L[-1] + L[-2])
        F3.append(4 * F3[-1] + F3[-2])
    assert [bala(n) for n in range(1, 10)] == [L[n] * F3[n] for n in range(1, 10)]


def test_combine():
    fib = lucas_sequence(1, -1)
    one = make_periodic(1, {1: 1})
    c = combine_by_divisors(2, {1: one, 2: fib})
    assert [c(n) for n in range(1, 9)] == [1, 1, 1, 1, 1, 2, 1, 3]
    assert check_division(c, 60).holds
    assert combine_by_divisors(1, {1: fib})(10) == 55


def test_guy_williams():
    b, g = AlgNum.quad(1, 1, -5), AlgNum.quad(1, -1, -5)
    ep = guy_williams(2, b, g, 3)
    assert ep.terms(4) == [0, 1, 7, 21]
    for n in range(1, 31):
        assert AlgNum(ep(n)) == guy_williams_rhs(3, b, g, n)
    sq = guy_williams(4, 2, 2, 1)
    assert sq.terms(8) == [(2 ** n - 1) ** 2 for n in range(8)]
    with pytest.raises(InvariantViolation):
        guy_williams(4, 2, 3, 1)


def test_schema():
    doc = {"version": 1, "name": "fib", "sequence": {"type": "lucas", "P": 1, "Q": -1}}
    seq, meta, opts = load_spec_document(doc)
    assert seq(10) == 55 and meta["name"] == "fib"
    with pytest.raises(SchemaError) as ei:
        sequence_from_json({"type": "product", "factors": [{"type": "lucas", "P": 1}]})
    assert "/factors/0" in str(ei.value)
    with pytest.raises(SchemaError):
        load_spec_document({"version": 2, "sequence": {}})
    with pytest.raises(SchemaError):
        sequence_from_json({"type": "nope"})
