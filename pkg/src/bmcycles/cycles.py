"""Cycles of graded modules J/I: Z_d(M), multiplicity along components, and
the additivity, associativity, cutting and product identities."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable

from .errors import (
    DimensionExceeded, FieldMismatch, NonIntegralRank, NotCyclic, NotHomogeneous, NotRegular,
    NotTorsionFree, Unsplittable,
)
from .groebner import Ideal, intersect, quotient, quotient_ideal
from .hilbert import SubquotientModule, hilbert_series, multiplicity, quotient_series
from .poly import Polynomial, Ring, embed
from .primes import PrimeCertificate, minimal_primes

MAX_LAYERS = 10_000


@lru_cache(maxsize=4096)
def prime_data(P: PrimeCertificate) -> tuple[int, int]:
    """(dimension, multiplicity) of A/P read from its Hilbert series."""
    hs = quotient_series(P.ideal())
    if hs.dimension is None:
        raise ValueError(f"{P} is the unit ideal")
    return hs.dimension, hs.multiplicity


@dataclass(frozen=True)
class Cycle:
    """Formal integer combination of d-dimensional certified primes."""

    ring: Ring
    d: int
    terms: tuple[tuple[PrimeCertificate, int], ...] = ()

    def __post_init__(self):
        merged: dict[PrimeCertificate, int] = {}
        for P, n in self.terms:
            if P.ring != self.ring:
                raise ValueError("component over a different ring")
            merged[P] = merged.get(P, 0) + n
        for P in merged:
            if prime_data(P)[0] != self.d:
                raise ValueError(f"component {P} does not have dimension {self.d}")
        terms = tuple(sorted(((P, n) for P, n in merged.items() if n),
                             key=lambda t: t[0].sort_key()))
        object.__setattr__(self, "terms", terms)

    @classmethod
    def zero(cls, ring: Ring, d: int) -> "Cycle":
        return cls(ring, d, ())

    def _check(self, other: "Cycle"):
        if self.ring != other.ring or self.d != other.d:
            raise ValueError("cycles of different rings or dimensions")

    def __add__(self, other: "Cycle") -> "Cycle":
        self._check(other)
        return Cycle(self.ring, self.d, self.terms + other.terms)

    def __neg__(self) -> "Cycle":
        return Cycle(self.ring, self.d, tuple((P, -n) for P, n in self.terms))

    def __sub__(self, other: "Cycle") -> "Cycle":
        return self + (-other)

    def scale(self, k: int) -> "Cycle":
        return Cycle(self.ring, self.d, tuple((P, k * n) for P, n in self.terms))

    def is_zero(self) -> bool:
        return not self.terms

    def is_effective(self) -> bool:
        """Z >= 0: every coefficient is nonnegative."""
        return all(n >= 0 for _, n in self.terms)

    def multiplicity_of(self, P: PrimeCertificate) -> int:
        return dict(self.terms).get(P, 0)

    def to_json(self) -> dict:
        return {
            "dim": self.d,
            "terms": [dict(P.to_json(), mult=n) for P, n in self.terms],
        }

    def __repr__(self) -> str:
        if not self.terms:
            return f"Cycle[{self.d}](0)"
        return f"Cycle[{self.d}](" + " + ".join(f"{n}*{P!r}" for P, n in self.terms) + ")"


@dataclass
class Report:
    name: str
    ok: bool
    details: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"check": self.name, "ok": self.ok, **self.details}


def support_ideal(M: SubquotientModule) -> Ideal:
    """Annihilator (I : J) of M = J/I, whose zero set is the support."""
    if M.is_cyclic:
        return M.inner
    return quotient_ideal(M.inner, M.outer)


def multiplicity_along(M: SubquotientModule, P: PrimeCertificate) -> int:
    """Length of M localized at a minimal prime P of its support.

    Sums the generic ranks of the P-adic layers (P^k J + I)/(P^(k+1) J + I),
    each read as a multiplicity ratio against A/P, stopping at the first zero.
    """
    if not all(g.is_homogeneous() for g in P.generators):
        raise NotHomogeneous(f"{P} is not homogeneous")
    d, e_prime = prime_data(P)
    ring = M.ring
    Pideal = P.ideal()
    upper = M.outer + M.inner
    power = M.outer
    total = 0
    for _ in range(MAX_LAYERS):
        power = Ideal(ring, (Pideal * power).basis())
        lower = power + M.inner
        layer = multiplicity(SubquotientModule(ring, lower, upper), d)
        rank, rem = divmod(layer, e_prime)
        if rem or rank < 0:
            raise NonIntegralRank(f"layer multiplicity {layer} not divisible by {e_prime}")
        if rank == 0:
            return total
        total += rank
        upper = lower
    raise RuntimeError("layer sequence did not terminate")


def cycle_of(M: SubquotientModule, d: int) -> Cycle:
    """Z_d(M): dimension-d minimal primes of the support with their lengths."""
    dim = hilbert_series(M).dimension
    if dim is None or dim < d:
        return Cycle.zero(M.ring, d)
    if dim > d:
        raise DimensionExceeded(f"support has dimension {dim} > {d}")
    decomposition = minimal_primes(support_ideal(M))
    terms = []
    for P in decomposition.components:
        if prime_data(P)[0] == d:
            terms.append((P, multiplicity_along(M, P)))
    return Cycle(M.ring, d, tuple(terms))


def eval_at_closed_point(Z: Cycle) -> int:
    """e(Z, closed point) = sum of n_x * e(A/P_x)."""
    return sum(n * prime_data(P)[1] for P, n in Z.terms)


def check_associativity(M: SubquotientModule) -> Report:
    hs = hilbert_series(M)
    d = hs.dimension
    if d is None:
        return Report("associativity", True, {"dim": "empty", "lhs": 0, "rhs": 0})
    Z = cycle_of(M, d)
    lhs = hs.multiplicity
    rhs = eval_at_closed_point(Z)
    return Report("associativity", lhs == rhs,
                  {"dim": d, "lhs": lhs, "rhs": rhs, "cycle": Z.to_json()})


def check_additivity(I: Ideal, J: Ideal, d: int) -> Report:
    """Z_d(A/I) = Z_d(J/I) + Z_d(A/J) for I inside J."""
    whole = cycle_of(SubquotientModule.quotient(I), d)
    sub = cycle_of(SubquotientModule(I.ring, I, J), d)
    quo = cycle_of(SubquotientModule.quotient(J), d)
    ok = whole == sub + quo
    return Report("additivity", ok, {
        "dim": d,
        "whole": whole.to_json(),
        "sub": sub.to_json(),
        "quotient": quo.to_json(),
    })


def _scheme_cycle(ring: Ring, gens: Iterable[Polynomial], d: int) -> Cycle:
    return cycle_of(SubquotientModule.quotient(Ideal(ring, gens)), d)


def cut_by_regular(M: SubquotientModule, f: Polynomial, d: int) -> tuple[Cycle, Report]:
    """Z_{d-1}(M/fM) for f regular on A/I and M f-torsion free, with the
    component-sum and null-case identities checked in the report."""
    if not f.is_homogeneous() or f.is_zero() or f.total_degree() < 1:
        raise NotHomogeneous("f must be homogeneous of positive degree")
    I, J = M.inner, M.outer
    colon = quotient(I, f)
    if colon != I:
        raise NotRegular(f"{f} is a zero divisor modulo {I}")
    if not I.contains_ideal(intersect(colon, J)):
        raise NotTorsionFree(f"module has {f}-torsion")
    Z = cycle_of(M, d)
    cut = SubquotientModule(M.ring, I + J.scaled(f), J)
    result = cycle_of(cut, d - 1)
    expected = Cycle.zero(M.ring, d - 1)
    for P, n in Z.terms:
        expected = expected + _scheme_cycle(M.ring, P.generators + (f,), d - 1).scale(n)
    details = {
        "dim": d,
        "cycle": Z.to_json(),
        "cut": result.to_json(),
        "component_sum": expected.to_json(),
    }
    ok = result == expected
    if Z.is_zero():
        details["null_case"] = True
        ok = ok and result.is_zero()
    return result, Report("cutting", ok, details)


def product_prime(ring: Ring, P: PrimeCertificate, Q: PrimeCertificate) -> PrimeCertificate:
    """Certificate for P + Q in the concatenated ring."""
    lin = [embed(g, ring) for g in P.linear_part] + [embed(g, ring) for g in Q.linear_part]
    irr = [g for g in (P.irreducible_part, Q.irreducible_part) if g is not None]
    if len(irr) > 1:
        raise Unsplittable("product of two irreducible components has no certificate")
    return PrimeCertificate.from_parts(ring, lin, embed(irr[0], ring) if irr else None)


def product_ring(A: Ring, B: Ring) -> Ring:
    if A.field != B.field:
        raise FieldMismatch(f"{A.field} vs {B.field}")
    if set(A.variables) & set(B.variables):
        raise ValueError("variable names of the two rings must be disjoint")
    return Ring(A.field, A.variables + B.variables, A.order)


def product_cycle(MA: SubquotientModule, MB: SubquotientModule, dA: int, dB: int
                  ) -> tuple[Cycle, Report]:
    """Z_{dA+dB} of (A/I) (x) (B/J) compared with the formal product of cycles."""
    if not (MA.is_cyclic and MB.is_cyclic):
        raise NotCyclic("product_cycle needs quotients A/I and B/J")
    ring = product_ring(MA.ring, MB.ring)
    gens = [embed(g, ring) for g in MA.inner.generators]
    gens += [embed(g, ring) for g in MB.inner.generators]
    Z = _scheme_cycle(ring, gens, dA + dB)
    ZA = cycle_of(MA, dA)
    ZB = cycle_of(MB, dB)
    formal = Cycle(ring, dA + dB, tuple(
        (product_prime(ring, P, Q), m * n) for P, m in ZA.terms for Q, n in ZB.terms))
    eA, eB = multiplicity(MA, dA), multiplicity(MB, dB)
    e = multiplicity(SubquotientModule.quotient(Ideal(ring, gens)), dA + dB)
    ok = Z == formal and e == eA * eB and eval_at_closed_point(Z) == e
    return Z, Report("product", ok, {
        "dim": dA + dB,
        "cycle": Z.to_json(),
        "formal_product": formal.to_json(),
        "e": e,
        "e_factors": [eA, eB],
    })
