import random

import pytest

from bmcycles.groebner import Ideal
from bmcycles.poly import Ring, parse_ring

VARS = ("x", "y", "z", "w")


def random_monomial_exps(rng: random.Random, n: int, k: int, maxdeg: int = 4) -> list[tuple]:
    out = []
    for _ in range(k):
        d = rng.randint(1, maxdeg)
        e = [0] * n
        for _ in range(d):
            e[rng.randrange(n)] += 1
        out.append(tuple(e))
    return out


def monomial_ideal(ring: Ring, exps) -> Ideal:
    return Ideal(ring, [ring.monomial(e) for e in exps])


def random_chain(rng: random.Random, maxvars: int = 4, maxdeg: int = 4):
    """Monomial ideals I <= J in a random ring with at most maxvars variables."""
    n = rng.randint(1, maxvars)
    ring = parse_ring(f"Q[{','.join(VARS[:n])}]")
    gi = random_monomial_exps(rng, n, rng.randint(1, 3), maxdeg)
    extra = random_monomial_exps(rng, n, rng.randint(0, 2), maxdeg)
    # J gets the generators of I divided down a little plus some extras
    gj = []
    for e in gi:
        e = list(e)
        i = rng.randrange(n)
        if e[i] and sum(e) > 1 and rng.random() < 0.5:
            e[i] -= 1
        gj.append(tuple(e))
    return ring, monomial_ideal(ring, gi), monomial_ideal(ring, gj + extra)


@pytest.fixture
def rng():
    return random.Random(20240611)
