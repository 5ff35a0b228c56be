"""Buchberger's algorithm and the ideal toolbox built on it."""

from __future__ import annotations

import heapq
import os
import threading
from typing import Iterable, Sequence

from .errors import ResourceLimit, RingMismatch
from .poly import (
    GREVLEX, MonomialOrder, Polynomial, Ring, _reduce_dict, divides, elimination, embed,
    mono_div, mono_lcm,
)

DEFAULT_SPAIR_LIMIT = 200_000


def spair_limit() -> int:
    value = os.environ.get("BMC_SPAIR_LIMIT")
    return int(value) if value else DEFAULT_SPAIR_LIMIT


class Ideal:
    """An ideal given by generators, with a per-order cache of reduced Gröbner bases."""

    def __init__(self, ring: Ring, generators: Iterable[Polynomial] = ()):
        gens = []
        for g in generators:
            if not isinstance(g, Polynomial):
                g = ring.constant(g)
            if g.ring != ring:
                raise RingMismatch(f"generator over {g.ring}, ideal over {ring}")
            if not g.is_zero() and g not in gens:
                gens.append(g)
        self.ring = ring
        self.generators: tuple[Polynomial, ...] = tuple(gens)
        self._cache: dict[MonomialOrder, tuple[Polynomial, ...]] = {}
        self._lock = threading.Lock()

    @classmethod
    def parse(cls, ring: Ring, text: str) -> "Ideal":
        """Comma-separated generators; ``0`` or an empty string is the zero ideal."""
        parts = [t for t in (s.strip() for s in text.split(",")) if t]
        return cls(ring, [ring.parse(t) for t in parts])

    def __repr__(self) -> str:
        return f"Ideal({self.ring}, [{', '.join(map(str, self.generators))}])"

    def basis(self, order: MonomialOrder | None = None,
              limit: int | None = None) -> tuple[Polynomial, ...]:
        order = order or GREVLEX
        with self._lock:
            cached = self._cache.get(order)
            if cached is None:
                cached = _reduced_basis(self.ring, self.generators, order, limit)
                self._cache[order] = cached
        return cached

    def _seed(self, order: MonomialOrder, basis: Sequence[Polynomial]) -> "Ideal":
        self._cache[order] = tuple(basis)
        return self

    # -- predicates --

    def is_zero(self) -> bool:
        return not self.generators

    def is_unit(self) -> bool:
        return any(g.is_constant() for g in self.basis())

    def is_monomial(self) -> bool:
        return all(g.is_monomial() for g in self.generators)

    def is_homogeneous(self) -> bool:
        return all(g.is_homogeneous() for g in self.generators)

    def contains(self, f: Polynomial) -> bool:
        return contains(self, f)

    def contains_ideal(self, other: "Ideal") -> bool:
        return all(contains(self, g) for g in other.generators)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Ideal):
            return NotImplemented
        return self.ring == other.ring and self.basis() == other.basis()

    def __hash__(self):
        return hash((self.ring, self.basis()))

    # -- constructions --

    def __add__(self, other: "Ideal") -> "Ideal":
        _same_ring(self, other)
        return Ideal(self.ring, self.generators + other.generators)

    def __mul__(self, other: "Ideal") -> "Ideal":
        _same_ring(self, other)
        return Ideal(self.ring, [f * g for f in self.generators for g in other.generators])

    def __pow__(self, k: int) -> "Ideal":
        result = unit_ideal(self.ring)
        for _ in range(k):
            result = result * self
            result = Ideal(self.ring, result.basis())
        return result

    def add(self, *polys: Polynomial) -> "Ideal":
        return Ideal(self.ring, self.generators + tuple(polys))

    def scaled(self, f: Polynomial) -> "Ideal":
        return Ideal(self.ring, [f * g for g in self.generators])

    def leading_ideal(self, order: MonomialOrder | None = None) -> "Ideal":
        order = order or GREVLEX
        return Ideal(self.ring, [self.ring.monomial(g.lead_monomial(order))
                                 for g in self.basis(order)])


def unit_ideal(ring: Ring) -> Ideal:
    return Ideal(ring, [ring.one()])


def _same_ring(I: Ideal, J: Ideal):
    if I.ring != J.ring:
        raise RingMismatch(f"{I.ring} vs {J.ring}")


# -- Buchberger --

def _minimal_monomials(exps: Iterable[tuple]) -> list[tuple]:
    out: list[tuple] = []
    for e in sorted(set(exps), key=sum):
        if not any(divides(m, e) for m in out):
            out.append(e)
    return out


def _reduced_basis(ring: Ring, gens: Sequence[Polynomial], order: MonomialOrder,
                   limit: int | None) -> tuple[Polynomial, ...]:
    if not gens:
        return ()
    key = order.key
    if all(g.is_monomial() for g in gens):
        mins = _minimal_monomials(next(iter(g._d)) for g in gens)
        return tuple(sorted((ring.monomial(e) for e in mins),
                            key=lambda g: key(g.lead_monomial(order)), reverse=True))
    polys = [g._d for g in gens]
    basis = buchberger(ring.field, polys, key, limit if limit is not None else spair_limit())
    out = [Polynomial._raw(ring, d) for d in basis]
    return tuple(sorted(out, key=lambda g: key(g.lead_monomial(order)), reverse=True))


def _lead(d: dict, key):
    m = max(d, key=key)
    return m, d[m]


def buchberger(F, polys: Sequence[dict], key, limit: int) -> list[dict]:
    """Reduced Gröbner basis of the polynomials (given as exponent->coefficient dicts).

    Uses the coprime-leading-term and chain criteria with normal-strategy pair
    selection ordered by (lcm degree, lcm exponent).
    """
    G: list[tuple] = []  # (lead monomial, lead coeff, dict)
    pairs: list = []
    pending: set = set()
    reductions = 0

    def normal_form(h):
        return _reduce_dict(F, dict(h), [(m, c, _Wrap(d)) for m, c, d in G], key)

    def add(h):
        m, c = _lead(h, key)
        inv = F.inv(c)
        h = {e: F.mul(inv, v) for e, v in h.items()}
        idx = len(G)
        G.append((m, F.one, h))
        for i, (mi, _, _) in enumerate(G[:-1]):
            lcm = mono_lcm(mi, m)
            heapq.heappush(pairs, (sum(lcm), lcm, i, idx))
            pending.add((i, idx))

    for p in polys:
        h = normal_form(p)
        if h:
            add(h)
            if not any(G[-1][0]):
                return [{G[-1][0]: F.one}]

    while pairs:
        _, lcm, i, j = heapq.heappop(pairs)
        pending.discard((i, j))
        mi, _, fi = G[i]
        mj, _, fj = G[j]
        if all(a == 0 or b == 0 for a, b in zip(mi, mj)):
            continue
        if _chain_skip(G, pending, i, j, lcm):
            continue
        reductions += 1
        if reductions > limit:
            raise ResourceLimit(f"S-pair budget of {limit} reductions exceeded")
        s = _spoly(F, mi, fi, mj, fj, lcm)
        h = normal_form(s)
        if h:
            add(h)
            if not any(G[-1][0]):
                return [{G[-1][0]: F.one}]

    # minimize and interreduce
    leads = [m for m, _, _ in G]
    keep = []
    for idx, (m, c, d) in enumerate(G):
        dominated = any(
            divides(leads[k], m) and (leads[k] != m or k < idx)
            for k in range(len(G)) if k != idx
        )
        if not dominated:
            keep.append((m, c, d))
    out = []
    for idx, (m, c, d) in enumerate(keep):
        others = [(mk, ck, _Wrap(dk)) for k, (mk, ck, dk) in enumerate(keep) if k != idx]
        tail = dict(d)
        del tail[m]
        red = _reduce_dict(F, tail, others, key)
        red[m] = F.one
        out.append(red)
    return out


class _Wrap:
    __slots__ = ("_d",)

    def __init__(self, d):
        self._d = d


def _chain_skip(G, pending, i, j, lcm) -> bool:
    for k, (mk, _, dk) in enumerate(G):
        if k == i or k == j:
            continue
        if not divides(mk, lcm):
            continue
        if (min(i, k), max(i, k)) in pending or (min(j, k), max(j, k)) in pending:
            continue
        return True
    return False


def _spoly(F, mi, fi, mj, fj, lcm) -> dict:
    qi = mono_div(lcm, mi)
    qj = mono_div(lcm, mj)
    out: dict = {}
    for e, v in fi.items():
        out[tuple(a + b for a, b in zip(e, qi))] = v
    for e, v in fj.items():
        e2 = tuple(a + b for a, b in zip(e, qj))
        s = F.sub(out.get(e2, F.zero), v)
        if F.is_zero(s):
            out.pop(e2, None)
        else:
            out[e2] = s
    return out


def groebner_basis(I: Ideal, order: MonomialOrder | None = None,
                   limit: int | None = None) -> tuple[Polynomial, ...]:
    """Reduced, monic Gröbner basis sorted by descending leading monomial."""
    if limit is not None:
        return _reduced_basis(I.ring, I.generators, order or GREVLEX, limit)
    return I.basis(order)


def s_polynomial(f: Polynomial, g: Polynomial, order: MonomialOrder | None = None) -> Polynomial:
    order = order or f.ring.order
    F = f.ring.field
    mf, mg = f.lead_monomial(order), g.lead_monomial(order)
    fi = f.monic(order)._d
    gj = g.monic(order)._d
    return Polynomial._raw(f.ring, _spoly(F, mf, fi, mg, gj, mono_lcm(mf, mg)))


def is_groebner(basis: Sequence[Polynomial], order: MonomialOrder | None = None) -> bool:
    """Buchberger's criterion: every S-polynomial reduces to zero."""
    from .poly import reduce

    basis = [b for b in basis if not b.is_zero()]
    for a in range(len(basis)):
        for b in range(a + 1, len(basis)):
            r, _ = reduce(s_polynomial(basis[a], basis[b], order), basis, order)
            if not r.is_zero():
                return False
    return True


def normal_form(I: Ideal, f: Polynomial, order: MonomialOrder | None = None) -> Polynomial:
    from .poly import reduce

    if f.ring != I.ring:
        raise RingMismatch(f"{f.ring} vs {I.ring}")
    basis = I.basis(order)
    if not basis:
        return f
    return reduce(f, basis, order or GREVLEX)[0]


def contains(I: Ideal, f: Polynomial) -> bool:
    return normal_form(I, f).is_zero()


_AUX = "_t"


def _aux_ring(ring: Ring) -> Ring:
    name = _AUX
    while name in ring.variables:
        name += "_"
    return ring.extend([name], front=True)


def eliminate(I: Ideal, k: int, limit: int | None = None) -> Ideal:
    """I intersected with the subring of the last n-k variables (an ideal of that ring)."""
    n = I.ring.nvars
    if not 0 <= k < n:
        raise ValueError("need 0 <= k < number of variables")
    if k == 0:
        return I
    order = elimination(k)
    basis = groebner_basis(I, order, limit)
    sub = Ring(I.ring.field, I.ring.variables[k:], I.ring.order)
    kept = []
    for g in basis:
        if all(not any(e[:k]) for e in g._d):
            kept.append(Polynomial._raw(sub, {e[k:]: c for e, c in g._d.items()}))
    J = Ideal(sub, kept)
    return J._seed(GREVLEX, sorted(kept, key=lambda g: GREVLEX.key(g.lead_monomial(GREVLEX)),
                                   reverse=True))


def intersect(I: Ideal, J: Ideal, limit: int | None = None) -> Ideal:
    _same_ring(I, J)
    ring = I.ring
    if I.is_zero() or J.is_zero():
        return Ideal(ring, [])
    if I.is_monomial() and J.is_monomial():
        gens = [ring.monomial(mono_lcm(f.lead_monomial(), g.lead_monomial()))
                for f in I.basis() for g in J.basis()]
        return Ideal(ring, gens)
    big = _aux_ring(ring)
    t = big.var(0)
    gens = [t * embed(f, big) for f in I.generators]
    gens += [(big.one() - t) * embed(g, big) for g in J.generators]
    elim = eliminate(Ideal(big, gens), 1, limit)
    basis = [embed(g, ring, list(range(ring.nvars))) for g in elim.generators]
    return Ideal(ring, basis)._seed(GREVLEX, sorted(
        basis, key=lambda g: GREVLEX.key(g.lead_monomial(GREVLEX)), reverse=True))


def exact_divide(g: Polynomial, f: Polynomial) -> Polynomial:
    """Return q with g = q*f; raises ValueError if f does not divide g."""
    F = g.ring.field
    order = g.ring.order
    lm, lc = f.lead_monomial(order), f.lead_coefficient(order)
    h = dict(g._d)
    q: dict = {}
    while h:
        m = max(h, key=order.key)
        if not divides(lm, m):
            raise ValueError("polynomial does not divide")
        e = mono_div(m, lm)
        c = F.div(h[m], lc)
        q[e] = c
        for e2, v in f._d.items():
            e3 = tuple(a + b for a, b in zip(e2, e))
            s = F.sub(h.get(e3, F.zero), F.mul(c, v))
            if F.is_zero(s):
                h.pop(e3, None)
            else:
                h[e3] = s
    return Polynomial._raw(g.ring, q)


def quotient(I: Ideal, f: Polynomial, limit: int | None = None) -> Ideal:
    """The colon ideal (I : f) = {g : g*f in I}."""
    if f.ring != I.ring:
        raise RingMismatch(f"{f.ring} vs {I.ring}")
    if f.is_zero():
        raise ValueError("colon by the zero polynomial")
    ring = I.ring
    if I.is_zero():
        return Ideal(ring, [])
    if I.is_monomial() and f.is_monomial():
        m = f.lead_monomial()
        gens = [ring.monomial(tuple(max(a - b, 0) for a, b in zip(g.lead_monomial(), m)))
                for g in I.basis()]
        return Ideal(ring, gens)
    meet = intersect(I, Ideal(ring, [f]), limit)
    return Ideal(ring, [exact_divide(g, f) for g in meet.basis()])


def quotient_ideal(I: Ideal, J: Ideal, limit: int | None = None) -> Ideal:
    """(I : J) as the intersection of (I : g) over generators g of J."""
    _same_ring(I, J)
    result = None
    for g in J.generators:
        Q = quotient(I, g, limit)
        result = Q if result is None else intersect(result, Q, limit)
    if result is None:
        return unit_ideal(I.ring)
    return result


def in_radical(I: Ideal, f: Polynomial, limit: int | None = None) -> bool:
    """Rabinowitsch test: f lies in the radical of I iff 1 is in I + (1 - t*f)."""
    if f.ring != I.ring:
        raise RingMismatch(f"{f.ring} vs {I.ring}")
    if f.is_zero():
        return True
    ring = I.ring
    if I.is_monomial() and f.is_monomial():
        support = {i for i, x in enumerate(f.lead_monomial()) if x}
        return any({i for i, x in enumerate(g.lead_monomial()) if x} <= support
                   for g in I.basis())
    big = _aux_ring(ring)
    t = big.var(0)
    gens = [embed(g, big) for g in I.generators] + [big.one() - t * embed(f, big)]
    basis = groebner_basis(Ideal(big, gens), GREVLEX, limit)
    return any(g.is_constant() for g in basis)
