"""Hilbert series, dimension and multiplicity of graded subquotients J/I."""

from __future__ import annotations

from dataclasses import dataclass
from math import comb
from typing import Iterable, Sequence

from .errors import ContainmentViolated, DimensionExceeded, NotHomogeneous, NotMonomial
from .groebner import Ideal, unit_ideal
from .poly import GREVLEX, MonomialOrder, Ring, divides

IntPoly = tuple[int, ...]


def _trim(c: list[int]) -> list[int]:
    while c and c[-1] == 0:
        c.pop()
    return c


def _add(a: Sequence[int], b: Sequence[int], shift: int = 0) -> list[int]:
    out = list(a) + [0] * max(0, len(b) + shift - len(a))
    for i, x in enumerate(b):
        out[i + shift] += x
    return _trim(out)


def _mul(a: Sequence[int], b: Sequence[int]) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def _divide_one_minus_t(c: Sequence[int]) -> list[int]:
    """Exact division by (1 - t); caller guarantees c(1) == 0."""
    q = []
    acc = 0
    for x in c[:-1]:
        acc += x
        q.append(acc)
    return _trim(q)


@dataclass(frozen=True)
class HilbertSeries:
    """``numerator / (1-t)^ambient_vars``, also kept in lowest terms.

    ``dimension`` is the pole order after cancelling every (1-t) factor and is
    ``None`` for the zero module.
    """

    numerator: IntPoly
    ambient_vars: int
    reduced_numerator: IntPoly
    dimension: int | None

    @classmethod
    def from_numerator(cls, numerator: Iterable[int], n: int) -> "HilbertSeries":
        num = _trim(list(numerator))
        if not num:
            return cls((), n, (), None)
        red, d = list(num), n
        while d > 0 and sum(red) == 0:
            red = _divide_one_minus_t(red)
            d -= 1
        if sum(red) == 0:
            raise ValueError("numerator vanishes at t=1 beyond the pole order")
        return cls(tuple(num), n, tuple(red), d)

    @property
    def is_zero(self) -> bool:
        return self.dimension is None

    @property
    def multiplicity(self) -> int:
        """Value of the reduced numerator at t = 1 (0 for the zero module)."""
        return sum(self.reduced_numerator)

    def coefficient(self, k: int) -> int:
        """Dimension of the degree-k graded piece."""
        n = self.ambient_vars
        total = 0
        for i, c in enumerate(self.numerator):
            if k - i < 0:
                break
            total += c * (comb(k - i + n - 1, n - 1) if n else int(k == i))
        return total

    def hilbert_polynomial(self) -> list:
        """Coefficients (in k, lowest first) of the Hilbert polynomial, as Fractions."""
        from fractions import Fraction

        d = self.dimension
        if d is None or d == 0:
            return []
        # sum_i N_i * binom(k - i + d - 1, d - 1) expanded in powers of k
        out = [Fraction(0)] * d
        for i, c in enumerate(self.reduced_numerator):
            poly = [Fraction(1)]
            for j in range(1, d):
                # multiply by (k - i + j) / j
                shift = Fraction(j - i, j)
                nxt = [Fraction(0)] * (len(poly) + 1)
                for a, v in enumerate(poly):
                    nxt[a] += v * shift
                    nxt[a + 1] += v / j
                poly = nxt
            for a, v in enumerate(poly):
                out[a] += c * v
        return out

    def __sub__(self, other: "HilbertSeries") -> "HilbertSeries":
        if self.ambient_vars != other.ambient_vars:
            raise ValueError("series over different ambient rings")
        num = _add(self.numerator, [-x for x in other.numerator])
        return HilbertSeries.from_numerator(num, self.ambient_vars)

    def __add__(self, other: "HilbertSeries") -> "HilbertSeries":
        if self.ambient_vars != other.ambient_vars:
            raise ValueError("series over different ambient rings")
        return HilbertSeries.from_numerator(_add(self.numerator, other.numerator),
                                            self.ambient_vars)

    def to_json(self) -> dict:
        return {
            "numerator": list(self.numerator),
            "ambient_vars": self.ambient_vars,
            "reduced_numerator": list(self.reduced_numerator),
            "dim": "empty" if self.dimension is None else self.dimension,
            "e": self.multiplicity,
        }


def _minimalize(gens: Iterable[tuple]) -> list[tuple]:
    out: list[tuple] = []
    for g in sorted(set(gens), key=sum):
        if not any(divides(m, g) for m in out):
            out.append(g)
    return out


def monomial_numerator(gens: Iterable[tuple], n: int) -> list[int]:
    """Numerator of HS(A/I) over (1-t)^n for the monomial ideal with these exponents."""
    return _pivot(_minimalize(gens), n)


def _pivot(gens: list[tuple], n: int) -> list[int]:
    if any(sum(g) == 0 for g in gens):
        return []
    if not gens:
        return [1]
    counts = [0] * n
    for g in gens:
        for i, x in enumerate(g):
            if x:
                counts[i] += 1
    if max(counts) <= 1:
        out = [1]
        for g in gens:
            d = sum(g)
            out = _mul(out, [1] + [0] * (d - 1) + [-1])
        return _trim(out)
    best = max(range(n), key=lambda i: (counts[i], -i))
    unit = tuple(1 if i == best else 0 for i in range(n))
    plus = _minimalize([g for g in gens if not g[best]] + [unit])
    colon = _minimalize([tuple(x - 1 if i == best and x else x for i, x in enumerate(g))
                         for g in gens])
    return _add(_pivot(plus, n), _pivot(colon, n), shift=1)


def hilbert_series_monomial(I: Ideal) -> HilbertSeries:
    """Exact Hilbert series of A/I for a monomial ideal via pivot recursion."""
    if not I.is_monomial():
        raise NotMonomial("hilbert_series_monomial needs monomial generators")
    gens = [g.lead_monomial() for g in I.generators]
    return HilbertSeries.from_numerator(monomial_numerator(gens, I.ring.nvars), I.ring.nvars)


@dataclass(frozen=True, eq=False)
class SubquotientModule:
    """The graded module J/I with I contained in J (J is the unit ideal for A/I)."""

    ring: Ring
    inner: Ideal
    outer: Ideal

    def __post_init__(self):
        for I in (self.inner, self.outer):
            if I.ring != self.ring:
                raise ValueError("ideal over a different ring")
            if not I.is_homogeneous():
                raise NotHomogeneous(f"{I} is not homogeneous")
        if not self.outer.contains_ideal(self.inner):
            raise ContainmentViolated("inner ideal is not contained in outer ideal")

    @classmethod
    def quotient(cls, I: Ideal) -> "SubquotientModule":
        return cls(I.ring, I, unit_ideal(I.ring))

    @property
    def is_cyclic(self) -> bool:
        return self.outer.is_unit()

    def __repr__(self) -> str:
        if self.is_cyclic:
            return f"A/{self.inner}"
        return f"({self.outer})/({self.inner})"


def quotient_series(I: Ideal, order: MonomialOrder | None = None) -> HilbertSeries:
    """HS(A/I) through the leading-term ideal of a Gröbner basis."""
    if not I.is_homogeneous():
        raise NotHomogeneous(f"{I} is not homogeneous")
    lead = I.leading_ideal(order or GREVLEX)
    return hilbert_series_monomial(lead)


def hilbert_series(M: SubquotientModule, order: MonomialOrder | None = None) -> HilbertSeries:
    """HS(J/I) = HS(A/I) - HS(A/J)."""
    return quotient_series(M.inner, order) - quotient_series(M.outer, order)


def dimension(M: SubquotientModule) -> int | None:
    return hilbert_series(M).dimension


def multiplicity(M: SubquotientModule, d: int) -> int:
    """Hilbert-Samuel multiplicity in dimension d (0 when the support is smaller)."""
    hs = hilbert_series(M)
    if hs.dimension is None or hs.dimension < d:
        return 0
    if hs.dimension > d:
        raise DimensionExceeded(f"support has dimension {hs.dimension} > {d}")
    return hs.multiplicity
