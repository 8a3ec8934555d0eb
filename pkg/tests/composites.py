"""Random products of periodic, power, exponential and Lucas-power parts."""

from fractions import Fraction

from lindiv.exactnum import UniPoly, divisors, factor
from lindiv.factories import lucas_sequence, make_periodic
from lindiv.lrs import ExpPoly, product, recurrence_to_closed_form


def random_periodic(rng):
    M = rng.choice([1, 2, 3, 4, 6])
    w = {p: rng.randint(1, 3) for p in (2, 3)}
    vals = {}
    for d in divisors(M):
        v = 1
        for p, e in factor(d):
            v *= w[p] ** e
        vals[d] = v
    signs = {a: (1 if M % a == 0 else rng.choice([1, -1])) for a in range(1, M + 1)}
    return make_periodic(M, vals, signs)


def random_lucas(rng):
    while True:
        P, Q = rng.randint(1, 10), rng.randint(-10, 10)
        if Q and P * P != 4 * Q and Fraction(P * P, Q) not in (1, 2, 3):
            return P, Q


def random_composite(rng):
    """(closed form, list of component evaluators)."""
    per = random_periodic(rng)
    e = rng.randint(0, 2)
    a = rng.randint(1, 10)
    P, Q = random_lucas(rng)
    k = rng.randint(1, 2)
    luc = lucas_sequence(P, Q)
    lcf = recurrence_to_closed_form(luc)
    ep = per.closed_form()
    ep = product(ep, ExpPoly([(UniPoly.monomial(e, Fraction(1, a)), a)]))
    for _ in range(k):
        ep = product(ep, lcf)

    def direct(n):
        return per(n) * Fraction(n) ** e * Fraction(a) ** (n - 1) * Fraction(luc(n)) ** k
    return ep, direct, {"M": per.M, "e": e, "a": a, "P": P, "Q": Q, "k": k}
