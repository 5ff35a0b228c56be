import itertools
import random

import pytest

from bmcycles.errors import NotMonomial, Unsplittable
from bmcycles.groebner import Ideal
from bmcycles.poly import Polynomial, parse_ring
from bmcycles.primes import (
    IRREDUCIBLE, LINEAR, MONOMIAL, PrimeCertificate, certify_irreducible,
    is_irreducible_univariate, minimal_primes, minimal_primes_monomial, minimal_primes_split,
    verify_candidates,
)
from bmcycles.arith import PrimeField, RationalField

from conftest import monomial_ideal, random_monomial_exps


def gens_of(dec):
    return sorted(tuple(str(g) for g in P.generators) for P in dec.components)


def test_monomial_examples():
    R = parse_ring("Q[x,y,z]")
    assert gens_of(minimal_primes_monomial(Ideal.parse(R, "x*y"))) == [("x",), ("y",)]
    assert gens_of(minimal_primes_monomial(Ideal.parse(R, "x*y, x*z"))) == [("x",), ("y", "z")]
    assert gens_of(minimal_primes_monomial(Ideal.parse(R, "x^2"))) == [("x",)]
    with pytest.raises(NotMonomial):
        minimal_primes_monomial(Ideal.parse(R, "x + y"))


def _brute_hitting_sets(supports, n):
    hits = [frozenset(c) for k in range(n + 1) for c in itertools.combinations(range(n), k)
            if all(set(c) & s for s in supports)]
    return {h for h in hits if not any(o < h for o in hits)}


def test_hitting_set_oracle(rng):
    R = parse_ring("Q[x,y,z,w]")
    for _ in range(30):
        exps = random_monomial_exps(rng, 4, rng.randint(1, 4))
        dec = minimal_primes_monomial(monomial_ideal(R, exps))
        got = {frozenset(next(i for i, x in enumerate(g.lead_monomial()) if x)
                         for g in P.generators) for P in dec.components}
        supports = [frozenset(i for i, x in enumerate(e) if x) for e in exps]
        assert got == _brute_hitting_sets(supports, 4)
        assert all(P.form == MONOMIAL for P in dec.components)


def test_split_examples():
    R = parse_ring("Q[x,y]")
    dec = minimal_primes_split(Ideal.parse(R, "x*(x+y)"))
    assert gens_of(dec) == [("x",), ("x + y",)]
    assert {P.form for P in dec.components} <= {MONOMIAL, LINEAR}
    R5 = parse_ring("F5[U,V,W,X,Y]")
    assert gens_of(minimal_primes_split(Ideal.parse(R5, "X*Y"))) == [("X",), ("Y",)]
    R3 = parse_ring("F5[x,y,z]")
    dec = minimal_primes_split(Ideal.parse(R3, "(x+y)*z, z*x"))
    assert gens_of(dec) == [("x", "y"), ("z",)]


def test_split_matches_monomial(rng):
    R = parse_ring("Q[x,y,z]")
    for _ in range(20):
        I = monomial_ideal(R, random_monomial_exps(rng, 3, rng.randint(1, 3)))
        assert minimal_primes_split(I).components == minimal_primes_monomial(I).components


def test_factored_hints():
    R = parse_ring("Q[x,y]")
    I = Ideal.parse(R, "x^2 + x*y")
    dec = minimal_primes_split(I, [[R.parse("x"), R.parse("x + y")]])
    assert len(dec.components) == 2
    with pytest.raises(ValueError):
        minimal_primes_split(I, [[R.parse("x"), R.parse("x - y")]])


def test_irreducible_certificates():
    R = parse_ring("F3[x,y]")
    dec = minimal_primes(Ideal.parse(R, "x^2 + y^2"))
    assert [P.form for P in dec.components] == [IRREDUCIBLE]
    assert dec.components[0].check()
    assert is_irreducible_univariate([1, 0, 1], PrimeField(3))
    assert not is_irreducible_univariate([1, 0, 1], PrimeField(5))
    Q = RationalField()
    assert is_irreducible_univariate([1, 0, 0, 0, 1], Q)       # x^4 + 1
    assert not is_irreducible_univariate([4, 0, 0, 0, 1], Q)   # x^4 + 4 = two quadratics
    S = parse_ring("Q[x,y]")
    assert certify_irreducible(S.parse("x^2 - 2*y^2"))
    assert not certify_irreducible(S.parse("x^2 - y^2"))


def test_unsplittable():
    R = parse_ring("Q[x,y,z]")
    with pytest.raises(Unsplittable):
        minimal_primes_split(Ideal.parse(R, "x^2 + y^2 + z^2"))


def test_verify_candidates_examples():
    R = parse_ring("Q[x,y,z]")
    x = PrimeCertificate.variables(R, [0])
    yz = PrimeCertificate.variables(R, [1, 2])
    assert verify_candidates(Ideal.parse(R, "x^2"), [x]).verified
    bad = verify_candidates(Ideal.parse(R, "x*y"), [x])
    assert not bad.verified and bad.failure["clause"] == "c"
    assert verify_candidates(Ideal.parse(R, "x*y, x*z"), [x, yz]).verified
    assert verify_candidates(Ideal.parse(R, "x*y"), [x, PrimeCertificate.variables(R, [0, 1])]
                             ).failure["clause"] == "b"
    assert verify_candidates(Ideal.parse(R, "y"), [x]).failure["clause"] == "a"


def _points(p, n):
    return itertools.product(range(p), repeat=n)


def _vanish(gens, pt):
    return all(g.evaluate(pt) == 0 for g in gens)


def _random_linear(rng, R, p):
    while True:
        c = [rng.randrange(p) for _ in range(R.nvars)]
        if any(c):
            return Polynomial(R, {tuple(int(i == j) for j in range(R.nvars)): c[i]
                                  for i in range(R.nvars)})


@pytest.mark.parametrize("p", [3, 5, 7])
def test_point_enumeration_oracle(p):
    rng = random.Random(p)
    R = parse_ring(f"F{p}[x,y,z]")
    for _ in range(8):
        gens = []
        for _ in range(rng.randint(1, 3)):
            g = R.one()
            for _ in range(rng.randint(1, 2)):
                g = g * _random_linear(rng, R, p)
            gens.append(g)
        I = Ideal(R, gens)
        dec = minimal_primes(I)
        assert verify_candidates(I, dec.components).verified
        for pt in _points(p, 3):
            assert _vanish(gens, pt) == any(_vanish(P.generators, pt) for P in dec.components)


def test_certificate_json():
    R = parse_ring("F5[x,y]")
    P = PrimeCertificate.from_parts(R, [R.parse("x + 2*y")])
    assert P.to_json() == {"prime": ["x + 2*y"], "form": LINEAR}
    assert P.check() and P.dimension == 1
