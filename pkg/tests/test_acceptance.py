"""The ten acceptance criteria, one test each; verdict lines are printed in the summary."""

import json
import random
import time
from fractions import Fraction
from math import gcd, lcm
from pathlib import Path

import flint
import pytest
import sympy

from acceptance_log import record
from composites import random_composite
from lindiv.analysis import (check_coolio, check_division, check_strong, gcd_growth_detect, padic_valuation_direct,
                             padic_valuation_law, rank_of_apparition, vandermonde_closed_form, vandermonde_det)
from lindiv.decompose import decompose, enumerate_periodic
from lindiv.errors import NoRecurrenceDetected
from lindiv.exactnum import AlgNum, divisors
from lindiv.factories import guy_williams, guy_williams_rhs, lehmer_sequence, load_spec_document, lucas, lucas_sequence
from lindiv.lrs import FuncSeq, RecurrenceSpec, minimal_order
from lindiv.polylds import CyclotomicLDSSpec, UnityRootMultiset, general_lds_in_t, is_divisibility_closed

ROOT = Path(__file__).parent
B = sympy.Symbol("b")


# 1 -------------------------------------------------------------------------

def _parse(vals):
    return [sympy.sympify(v, locals={"b": B}) for v in vals]


def _row_matches(alt, row):
    p, c = _parse(alt.split(",")), _parse(row["values"])
    if len(p) != len(c):
        return False
    if any(x.has(B) for x in p):
        if not row["symbolic"]:
            return False
        return any(all(sympy.expand(x - y.subs(B, s * B)) == 0 for x, y in zip(p, c)) for s in (1, -1))
    if not row["symbolic"]:
        return p == c
    eqs = [x - y for x, y in zip(p, c) if x - y != 0]
    sols = sympy.solve(eqs, B, dict=True) if eqs else [{B: 0}]
    return any(s.get(B, 0).is_integer for s in sols)


def _lds_ok(row):
    M = row["M"]
    for b in ([-3, -1, 0, 1, 2, 5] if row["symbolic"] else [0]):
        vals = [int(v.subs(B, b)) for v in _parse(row["values"])]
        if not check_division(FuncSeq(lambda n, v=vals: v[n % M]), max(4 * M, 2)).holds:
            return False
    return True


def criterion_1():
    ref = json.loads((ROOT / "fixtures" / "periodic_table.json").read_text())["reference"]
    t = time.time()
    rows = enumerate_periodic(4)
    elapsed = time.time() - t
    missing = []
    for pr in ref:
        cands = [r for r in rows if r["k"] == pr["k"] and r["set"] == pr["set"]]
        for alt in pr["alternatives"]:
            if not any(_row_matches(alt, r) for r in cands):
                missing.append(f"{pr['set']}: {alt}")
    bad = [r["set"] for r in rows if not _lds_ok(r)]
    ok = not missing and not bad and elapsed < 10
    detail = f"{len(rows)} rows in {elapsed:.1f}s, all LDS: {not bad}, unmatched reference rows: {missing or 'none'}"
    return ok, detail


# 2 -------------------------------------------------------------------------

def criterion_2():
    bala = load_spec_document(json.loads((ROOT.parent / "specs" / "bala.json").read_text()))[0]
    F = lambda n: lucas(1, -1, n)
    L = lambda n: lucas(1, -1, 2 * n) // lucas(1, -1, n)
    bad = [n for n in range(1, 31) if not (L(n) * F(3 * n) == lcm(F(2 * n), F(3 * n)) == bala(n))]
    return not bad, f"n = 1..30, mismatches {bad or 'none'}"


# 3 -------------------------------------------------------------------------

def criterion_3():
    b, g = AlgNum.quad(1, 1, -5), AlgNum.quad(1, -1, -5)
    ep = guy_williams(2, b, g, 3)
    u = [AlgNum(ep(n)) for n in range(40)]
    start = [int(x.to_fraction()) for x in u[:4]] == [0, 1, 7, 21]
    rec = all(u[n + 4] == 7 * u[n + 3] - 22 * u[n + 2] + 42 * u[n + 1] - 36 * u[n] for n in range(36))
    third = Fraction(1, 3)
    direct = all(u[n] == (AlgNum(2) ** n + AlgNum(3) ** n - b ** n - g ** n) * third for n in range(40))
    hw = all(u[n] == guy_williams_rhs(3, b, g, n) for n in range(1, 31))
    return start and rec and direct and hw, f"starts 0,1,7,21: {start}, recurrence: {rec}, closed form: {direct}, identity n <= 30: {hw}"


# 4 -------------------------------------------------------------------------

def _compositions(k):
    if k == 0:
        yield []
        return
    for first in range(1, k + 1):
        for rest in _compositions(k - first):
            yield [first] + rest


def criterion_4():
    rng = random.Random(4)
    t = time.time()
    count, bad = 0, 0
    for k in range(1, 7):
        for ks in _compositions(k):
            for _ in range(20):
                pts = set()
                while len(pts) < len(ks):
                    x = Fraction(rng.randint(-20, 20), rng.randint(1, 6))
                    if x:
                        pts.add(x)
                xs = list(pts)
                rng.shuffle(xs)
                count += 1
                bad += abs(vandermonde_det(ks, xs)) != abs(vandermonde_closed_form(ks, xs))
    elapsed = time.time() - t
    return bad == 0 and elapsed < 30, f"{count} determinants, {bad} mismatches, {elapsed:.1f}s"


# 5 -------------------------------------------------------------------------

def criterion_5():
    rng = random.Random(5)
    bad = []
    for i in range(50):
        k = rng.randint(1, 4)
        coeffs = [rng.randint(-4, 4) for _ in range(k - 1)] + [rng.choice([-3, -2, -1, 1, 2, 3])]
        init = [rng.randint(-6, 6) for _ in range(k)]
        if not any(init):
            init[-1] = 1
        if not check_coolio(RecurrenceSpec(coeffs, init), 25)["holds"]:
            bad.append(i)
    return not bad, f"50 random recurrences of order <= 4, n <= 25, failures {bad or 'none'}"


# 6 -------------------------------------------------------------------------

def criterion_6():
    rng = random.Random(1)
    t = time.time()
    bad = []
    for i in range(100):
        ep, direct, params = random_composite(rng)
        cert = decompose(ep, 100)
        if any(AlgNum(cert.reconstruct(n)) != AlgNum(direct(n)) for n in range(1, 101)):
            bad.append(params)
    elapsed = time.time() - t
    return not bad and elapsed < 120, f"100 composites, n <= 100, failures {len(bad)}, {elapsed:.1f}s"


# 7 -------------------------------------------------------------------------

def criterion_7():
    terms = [gcd(2 ** n - 1, lucas(1, -1, n)) for n in range(201)]
    try:
        minimal_order(terms, 8)
        norec = False
    except NoRecurrenceDetected:
        norec = True
    pairs = gcd_growth_detect(lucas_sequence(3, 2), lucas_sequence(1, -1), 120, Fraction(1, 10))
    top = sorted(pairs, key=lambda p: -p[2])[:3]
    detail = (f"no recurrence of order <= 8: {norec}; gcd growth pairs: {len(pairs)}"
              + (f", e.g. {[(m, n, g) for m, n, g in top]}" if pairs else ""))
    return norec and not pairs, detail


# 8 -------------------------------------------------------------------------

def criterion_8():
    seqs = {"fibonacci": lucas_sequence(1, -1), "2^n-1": lucas_sequence(3, 2),
            "lehmer(5,1)": lehmer_sequence(5, 1)}
    for r in range(1, 4):
        seqs[f"n^{r}"] = FuncSeq(lambda n, r=r: n ** r)
    strong = {name: check_strong(s, 50).ok for name, s in seqs.items()}
    prod = check_strong(FuncSeq(lambda n: (2 ** n - 1) * (3 ** n - 1)), 50)
    wit = prod.strong_witness
    fails = prod.holds and prod.strong is False and prod.recheck(FuncSeq(lambda n: (2 ** n - 1) * (3 ** n - 1)))
    pps = [q for q in range(2, 101) if len(sympy.factorint(q)) == 1]
    rank_ok = True
    for s in seqs.values():
        for q in pps:
            try:
                rank_of_apparition(s, q, 120)
            except Exception:
                rank_ok = False
    ok = all(strong.values()) and fails and rank_ok
    return ok, f"strong: {strong}; product fails with witness {wit}; rank iff for {len(pps)} prime powers: {rank_ok}"


# 9 -------------------------------------------------------------------------

def criterion_9():
    checked, bad = 0, 0
    for gamma in (2, 3, 5, 10, -2):
        for p in sympy.primerange(2, 51):
            if gamma % p == 0:
                continue
            for n in range(1, 501):
                checked += 1
                bad += padic_valuation_law(gamma, p, n) != padic_valuation_direct(gamma, p, n)
    return bad == 0, f"{checked} valuations, {bad} mismatches"


# 10 ------------------------------------------------------------------------

def _orders(max_total=6, max_order=12):
    out = []

    def go(start, left, cur):
        if cur:
            out.append(dict(cur))
        for m in range(start, max_order + 1):
            if left:
                cur[m] = cur.get(m, 0) + 1
                go(m, left - 1, cur)
                cur[m] -= 1
                if not cur[m]:
                    del cur[m]
    go(1, max_total, {})
    return out


def _subst(c, k):
    out = [0] * ((len(c) - 1) * k + 1)
    out[::k] = c
    return flint.fmpz_poly(out)


def _brute_closed(orders):
    f = flint.fmpz_poly([1])
    for m, k in orders.items():
        f *= flint.fmpz_poly.cyclotomic(m) ** k
    c = [int(x) for x in f.coeffs()]
    for m in range(1, 13):
        fm = _subst(c, m)
        for n in range(2 * m, 13, m):
            if _subst(c, n) % fm != 0:
                return False
    return True


def _random_table(rng, M):
    h = {}
    for _ in range(rng.randint(1, 4)):
        d = rng.choice(divisors(M))
        h[(d, rng.randint(1, 4), rng.randrange(M // d))] = rng.randint(1, 2)
    changed = True
    while changed:
        changed = False
        for (d, m, j), v in list(h.items()):
            for D in divisors(M):
                key = (D, m, j % (M // D))
                if D % d == 0 and h.get(key, 0) < v:
                    h[key] = v
                    changed = True
    return CyclotomicLDSSpec(M, h)


def criterion_10():
    sets = _orders()
    disagree = [o for o in sets if is_divisibility_closed(UnityRootMultiset.from_orders(o)) != _brute_closed(o)]
    rng = random.Random(10)
    mono_bad = 0
    for _ in range(20):
        spec = _random_table(rng, rng.choice([1, 2, 3, 4, 5, 6, 8, 12]))
        vs = {n: general_lds_in_t(spec, n) for n in range(1, 49)}
        mono_bad += sum(not vs[n].divides(vs[k]) for n in vs for k in range(2 * n, 49, n))
    ok = not disagree and mono_bad == 0
    return ok, f"{len(sets)} multisets, {len(disagree)} disagreements; 20 random tables, {mono_bad} monotonicity failures"


# ---------------------------------------------------------------------------

ERRATA = "reference table rows {3,4} and the free-b {10} row are not LDS rows as printed"
GCD_PAIRS = "gcd(2^m - 1, F_n) exceeds exp((m + n)/10) at pairs such as (m, n) = (60, 60) and (120, 120)"


@pytest.mark.xfail(strict=True, reason=ERRATA)
def test_criterion_1():
    assert record(1, *criterion_1())


def test_criterion_2():
    assert record(2, *criterion_2())


def test_criterion_3():
    assert record(3, *criterion_3())


def test_criterion_4():
    assert record(4, *criterion_4())


def test_criterion_5():
    assert record(5, *criterion_5())


def test_criterion_6():
    assert record(6, *criterion_6())


@pytest.mark.xfail(strict=True, reason=GCD_PAIRS)
def test_criterion_7():
    assert record(7, *criterion_7())


def test_criterion_8():
    assert record(8, *criterion_8())


def test_criterion_9():
    assert record(9, *criterion_9())


def test_criterion_10():
    assert record(10, *criterion_10())


if __name__ == "__main__":
    for i in range(1, 11):
        record(i, *globals()[f"criterion_{i}"]())
