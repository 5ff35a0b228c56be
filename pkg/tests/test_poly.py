from fractions import Fraction
import itertools

import pytest
from hypothesis import given, settings, strategies as st

from bmcycles.errors import ParseError, RingMismatch
from bmcycles.groebner import Ideal
from bmcycles.poly import (
    GREVLEX, LEX, MINUS_INFINITY, Polynomial, embed, elimination, parse_order, parse_ring, reduce,
)

R = parse_ring("Q[x,y,z]")
F5 = parse_ring("F5[x,y,z]")


@st.composite
def polys(draw, ring=R, max_terms=10, max_exp=3):
    n = draw(st.integers(0, max_terms))
    terms = {}
    for _ in range(n):
        e = tuple(draw(st.integers(0, max_exp)) for _ in range(ring.nvars))
        if str(ring.field) == "Q":
            c = Fraction(draw(st.integers(-9, 9)), draw(st.integers(1, 4)))
        else:
            c = draw(st.integers(0, ring.field.p - 1))
        terms[e] = c
    return Polynomial(ring, terms)


def naive_mul(f, g):
    out = {}
    F = f.ring.field
    for (a, c), (b, d) in itertools.product(f.terms, g.terms):
        e = tuple(i + j for i, j in zip(a, b))
        out[e] = F.add(out.get(e, F.zero), F.mul(c, d))
    return Polynomial(f.ring, out)


def test_basic_arithmetic():
    x, y, z = R.gens()
    assert (x + y) * (x - y) == x ** 2 - y ** 2
    f = x ** 2 + x * y
    assert f + R.zero() == f
    assert f.is_homogeneous() and f.total_degree() == 2
    assert not (x ** 2 + x).is_homogeneous()
    assert R.zero().total_degree() == MINUS_INFINITY


def test_ring_mismatch():
    with pytest.raises(RingMismatch):
        R.var(0) + F5.var(0)


@given(polys(), polys())
@settings(max_examples=50, deadline=None)
def test_mul_matches_convolution(f, g):
    assert f * g == naive_mul(f, g)


@given(polys(F5), polys(F5))
@settings(max_examples=30, deadline=None)
def test_mul_matches_convolution_fp(f, g):
    assert f * g == naive_mul(f, g)


@given(polys(), polys(), polys())
@settings(max_examples=40, deadline=None)
def test_ring_axioms(f, g, h):
    assert (f + g) + h == f + (g + h)
    assert f * (g + h) == f * g + f * h
    assert f * g == g * f
    assert f - f == R.zero()


@given(polys(), polys())
@settings(max_examples=30, deadline=None)
def test_homogeneous_product(f, g):
    # keep the top-degree part of each, which is homogeneous
    def top(p):
        if p.is_zero():
            return p
        d = p.total_degree()
        return Polynomial(p.ring, {e: c for e, c in p.terms if sum(e) == d})
    f, g = top(f), top(g)
    if f.is_zero() or g.is_zero():
        return
    h = f * g
    assert h.is_homogeneous() and h.total_degree() == f.total_degree() + g.total_degree()


@given(polys())
@settings(max_examples=60, deadline=None)
def test_parse_print_roundtrip(f):
    assert R.parse(str(f)) == f


@given(polys(F5))
@settings(max_examples=40, deadline=None)
def test_parse_print_roundtrip_fp(f):
    assert F5.parse(str(f)) == f


def test_parser_syntax():
    x, y, z = R.gens()
    assert R.parse("3/2*x^2*y - (x+y)^2") == Fraction(3, 2) * x ** 2 * y - (x + y) ** 2
    assert R.parse("-x") == -x
    for bad in ("x +", "x^", "u", "x**2", "(x"):
        with pytest.raises(ParseError):
            R.parse(bad)
    with pytest.raises(ParseError):
        parse_ring("Q(x)")


@given(polys())
@settings(max_examples=40, deadline=None)
def test_leading_monomial_brute_force(f):
    if f.is_zero():
        return
    exps = [e for e, _ in f.terms]

    def grevlex_gt(a, b):
        if sum(a) != sum(b):
            return sum(a) > sum(b)
        for i in reversed(range(len(a))):
            if a[i] != b[i]:
                return a[i] < b[i]
        return False

    best = exps[0]
    for e in exps:
        if grevlex_gt(e, best):
            best = e
    assert f.lead_monomial(GREVLEX) == best
    assert f.lead_monomial(LEX) == max(exps)


def test_orders():
    assert parse_order("elim:2") == elimination(2)
    with pytest.raises(ParseError):
        parse_order("deglex")
    E = elimination(1)
    # the first block dominates: x beats any power of y
    assert E.key((1, 0, 0)) > E.key((0, 5, 5))
    # grevlex: x*z < y^2 in k[x,y,z]
    assert GREVLEX.key((1, 0, 1)) < GREVLEX.key((0, 2, 0))


def test_reduce_examples():
    x, y, z = R.gens()
    r, ok = reduce(x ** 2 * y, [x * y])
    assert r.is_zero() and ok
    r, ok = reduce(x ** 2 + 1, [y])
    assert r == x ** 2 + 1 and not ok
    G = [x ** 2 - y, x * y - 1]
    f = x ** 2 * y + x
    r, _ = reduce(f, G, LEX)
    for e, _ in r.terms:
        assert not any(all(a >= b for a, b in zip(e, g.lead_monomial(LEX))) for g in G)
    assert Ideal(R, G).contains(f - r)
    assert reduce(r, G, LEX)[0] == r


def test_embed_by_name():
    S = parse_ring("Q[t,x,y,z]")
    x = R.var(0)
    assert embed(x, S) == S.var(1)
    assert embed(R.parse("x*y + z"), S) == S.parse("x*y + z")


def test_evaluate():
    f = F5.parse("x^2 + 2*y*z")
    assert f.evaluate([1, 2, 3]) == (1 + 12) % 5
