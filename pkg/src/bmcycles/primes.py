"""Minimal primes with structural certificates.

Primality is never decided by a general algorithm.  Every prime carries one of
three auditable forms:

``monomial-prime``
    generated by variables;
``linear-prime``
    generated by linearly independent linear forms;
``variables-plus-one-irreducible``
    linear forms plus one polynomial, in the remaining variables, whose
    irreducibility is certified by exhaustive search (univariate, or a binary
    form through its dehomogenization).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt
from typing import Sequence

from .arith import PrimeField, RationalField
from .errors import NotMonomial, Unsplittable
from .groebner import Ideal, exact_divide, in_radical, intersect
from .poly import GREVLEX, Polynomial, Ring, reduce

MONOMIAL = "monomial-prime"
LINEAR = "linear-prime"
IRREDUCIBLE = "variables-plus-one-irreducible"
FORMS = (MONOMIAL, LINEAR, IRREDUCIBLE)

MAX_RATIONAL_DEGREE = 4


# -- univariate irreducibility --

def _upoly(f: Polynomial, var: int) -> list:
    """Dense coefficients (lowest first) of a polynomial in the single variable ``var``."""
    deg = max(e[var] for e in f._d)
    out = [f.ring.field.zero] * (deg + 1)
    for e, c in f._d.items():
        out[e[var]] = c
    return out


def _fp_divides(div: list[int], f: list[int], p: int) -> bool:
    f = list(f)
    inv = pow(div[-1], -1, p)
    dd = len(div) - 1
    for k in range(len(f) - 1, dd - 1, -1):
        c = f[k] * inv % p
        if c:
            for i, v in enumerate(div):
                f[k - dd + i] = (f[k - dd + i] - c * v) % p
    return not any(f[:dd])


def is_irreducible_univariate(coeffs: Sequence, field) -> bool:
    """Irreducibility of a univariate polynomial (coefficients lowest first).

    Over F_p every monic candidate factor up to half the degree is tried.  Over Q
    the degree is capped at 4 and factors are searched with bounded height.
    """
    coeffs = list(coeffs)
    while coeffs and field.is_zero(coeffs[-1]):
        coeffs.pop()
    deg = len(coeffs) - 1
    if deg < 1:
        return False
    if deg == 1:
        return True
    if isinstance(field, PrimeField):
        p = field.p
        f = [int(c) % p for c in coeffs]
        for d in range(1, deg // 2 + 1):
            for tail in itertools.product(range(p), repeat=d):
                if _fp_divides(list(tail) + [1], f, p):
                    return False
        return True
    if isinstance(field, RationalField):
        if deg > MAX_RATIONAL_DEGREE:
            raise Unsplittable(f"irreducibility over Q only certified up to degree "
                               f"{MAX_RATIONAL_DEGREE}")
        ints = _primitive_integer(coeffs)
        if _rational_roots(ints):
            return False
        if deg == 4 and _has_quadratic_factor(ints):
            return False
        return True
    raise Unsplittable(f"no irreducibility certificate over {field}")


def _primitive_integer(coeffs: Sequence) -> list[int]:
    from math import gcd, lcm

    den = 1
    for c in coeffs:
        den = lcm(den, Fraction(c).denominator)
    ints = [int(Fraction(c) * den) for c in coeffs]
    g = 0
    for c in ints:
        g = gcd(g, c)
    return [c // g for c in ints]


def _int_divisors(n: int) -> list[int]:
    n = abs(n)
    return [d for d in range(1, n + 1) if n % d == 0]


def _eval_int(ints: Sequence[int], x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(ints):
        acc = acc * x + c
    return acc


def _rational_roots(ints: Sequence[int]) -> list[Fraction]:
    if ints[0] == 0:
        return [Fraction(0)]
    roots = set()
    for a in _int_divisors(ints[0]):
        for b in _int_divisors(ints[-1]):
            for s in (1, -1):
                x = Fraction(s * a, b)
                if _eval_int(ints, x) == 0:
                    roots.add(x)
    return sorted(roots)


def _has_quadratic_factor(f: Sequence[int]) -> bool:
    """Search integer factorizations (a x^2 + b x + c)(d x^2 + e x + g) of a quartic."""
    f0, f1, f2, f3, f4 = f
    bound = 2 * isqrt(sum(c * c for c in f)) + 2
    for a in _int_divisors(f4):
        d = f4 // a
        for c0 in _int_divisors(f0):
            for c in (c0, -c0):
                g = f0 // c
                for b in range(-bound, bound + 1):
                    num = f3 - b * d
                    if num % a:
                        continue
                    e = num // a
                    if a * g + b * e + c * d == f2 and b * g + c * e == f1:
                        return True
    return False


def roots_in_field(coeffs: Sequence, field) -> list:
    """All roots in the coefficient field of a univariate polynomial."""
    if isinstance(field, PrimeField):
        p = field.p
        ints = [int(c) % p for c in coeffs]
        out = []
        for x in range(p):
            acc = 0
            for c in reversed(ints):
                acc = (acc * x + c) % p
            if acc == 0:
                out.append(x)
        return out
    if isinstance(field, RationalField):
        return _rational_roots(_primitive_integer(coeffs))
    return []


def certify_irreducible(g: Polynomial) -> bool:
    """True when g is certified irreducible (univariate, or a binary form)."""
    support = sorted(g.support_variables())
    F = g.ring.field
    if len(support) == 1:
        return is_irreducible_univariate(_upoly(g, support[0]), F)
    if len(support) == 2 and g.is_homogeneous():
        u, v = support
        deg = g.total_degree()
        # v must not divide g, and the dehomogenization must keep full degree
        dehom = [F.zero] * (deg + 1)
        for e, c in g._d.items():
            dehom[e[u]] = F.add(dehom[e[u]], c)
        if F.is_zero(dehom[deg]) or F.is_zero(dehom[0]):
            return False
        return is_irreducible_univariate(dehom, F)
    return False


# -- certificates --

def _rref_linear(ring: Ring, forms: Sequence[Polynomial]) -> list[Polynomial]:
    return list(Ideal(ring, forms).basis(GREVLEX)) if forms else []


@dataclass(frozen=True, eq=False)
class PrimeCertificate:
    """A prime ideal with a structural proof of primality."""

    ring: Ring
    generators: tuple[Polynomial, ...]
    form: str

    def __post_init__(self):
        if self.form not in FORMS:
            raise ValueError(f"unknown certificate form {self.form!r}")

    @classmethod
    def from_parts(cls, ring: Ring, linear: Sequence[Polynomial],
                   irreducible: Polynomial | None = None) -> "PrimeCertificate":
        """Canonical certificate for (linear forms) + (optional irreducible)."""
        lin = _rref_linear(ring, linear)
        if irreducible is None:
            form = MONOMIAL if all(g.is_monomial() for g in lin) else LINEAR
            return cls(ring, tuple(lin), form)
        if lin:
            irreducible = reduce(irreducible, lin, GREVLEX)[0]
        irreducible = irreducible.monic(GREVLEX)
        return cls(ring, tuple(lin) + (irreducible,), IRREDUCIBLE)

    @classmethod
    def variables(cls, ring: Ring, indices) -> "PrimeCertificate":
        return cls.from_parts(ring, [ring.var(i) for i in sorted(set(indices))])

    @property
    def linear_part(self) -> tuple[Polynomial, ...]:
        return tuple(g for g in self.generators if g.total_degree() == 1)

    @property
    def irreducible_part(self) -> Polynomial | None:
        rest = [g for g in self.generators if g.total_degree() != 1]
        return rest[0] if rest else None

    @property
    def codimension(self) -> int:
        return len(self.generators)

    @property
    def dimension(self) -> int:
        return self.ring.nvars - len(self.generators)

    def ideal(self) -> Ideal:
        return Ideal(self.ring, self.generators)

    def check(self) -> bool:
        """Re-verify the structural proof of primality."""
        gens = self.generators
        if self.form == MONOMIAL:
            return all(g.is_monomial() and g.total_degree() == 1 and g.lead_coefficient() == 1
                       for g in gens)
        lin = [g for g in gens if g.total_degree() == 1]
        rest = [g for g in gens if g.total_degree() != 1]
        basis = _rref_linear(self.ring, lin)
        if len(basis) != len(lin) or any(b.is_constant() for b in basis):
            return False
        if self.form == LINEAR:
            return not rest
        if len(rest) != 1:
            return False
        g = rest[0]
        if basis:
            g = reduce(g, basis, GREVLEX)[0]
            lead_vars = set()
            for b in basis:
                lead_vars |= {k for k, x in enumerate(b.lead_monomial(GREVLEX)) if x}
            if g.support_variables() & lead_vars:
                return False
        try:
            return certify_irreducible(g)
        except Unsplittable:
            return False

    def sort_key(self) -> tuple:
        return (len(self.generators), tuple(str(g) for g in self.generators))

    def __eq__(self, other) -> bool:
        if not isinstance(other, PrimeCertificate):
            return NotImplemented
        return self.ring == other.ring and self.generators == other.generators

    def __hash__(self) -> int:
        return hash((self.ring, self.generators))

    def __repr__(self) -> str:
        return f"({', '.join(map(str, self.generators))})"

    def to_json(self) -> dict:
        return {"prime": [str(g) for g in self.generators], "form": self.form}


@dataclass
class Decomposition:
    input: Ideal
    components: list[PrimeCertificate]
    verified: bool
    failure: dict | None = field(default=None)

    def to_json(self) -> dict:
        out = {
            "components": [c.to_json() for c in self.components],
            "verified": self.verified,
        }
        if self.failure is not None:
            out["failure"] = self.failure
        return out


def _canonical(components) -> list[PrimeCertificate]:
    uniq = {c: None for c in components}
    return sorted(uniq, key=PrimeCertificate.sort_key)


# -- monomial ideals --

def _minimal_hitting_sets(supports: list[frozenset]) -> list[frozenset]:
    found: set[frozenset] = set()

    def go(chosen: frozenset, remaining: list[frozenset]):
        remaining = [s for s in remaining if not (s & chosen)]
        if not remaining:
            found.add(chosen)
            return
        smallest = min(remaining, key=lambda s: (len(s), sorted(s)))
        for v in sorted(smallest):
            go(chosen | {v}, remaining)

    go(frozenset(), supports)
    return [s for s in found if not any(t < s for t in found)]


def minimal_primes_monomial(I: Ideal) -> Decomposition:
    if not I.is_monomial():
        raise NotMonomial("minimal_primes_monomial needs monomial generators")
    basis = I.basis()
    supports = [frozenset(i for i, x in enumerate(g.lead_monomial()) if x) for g in basis]
    if any(not s for s in supports):
        return Decomposition(I, [], True)
    comps = [PrimeCertificate.variables(I.ring, s) for s in _minimal_hitting_sets(supports)]
    return Decomposition(I, _canonical(comps), True)


# -- structural splitting --

def _monomial_content(f: Polynomial) -> tuple[list[int], Polynomial]:
    n = f.ring.nvars
    low = [min(e[i] for e in f._d) for i in range(n)]
    if not any(low):
        return [], f
    rest = Polynomial._raw(f.ring, {tuple(a - b for a, b in zip(e, low)): c
                                    for e, c in f._d.items()})
    return [i for i, k in enumerate(low) if k], rest


def _binary_linear_factors(f: Polynomial) -> list[Polynomial]:
    """Linear factors of a binary form found through roots of its dehomogenization."""
    support = sorted(f.support_variables())
    if len(support) != 2 or not f.is_homogeneous():
        return []
    u, v = support
    F = f.ring.field
    deg = f.total_degree()
    dehom = [F.zero] * (deg + 1)
    for e, c in f._d.items():
        dehom[e[u]] = c
    ring = f.ring
    return [ring.var(u) - ring.var(v).scale(r) for r in roots_in_field(dehom, F)]


def _fp_linear_candidates(f: Polynomial) -> list[Polynomial]:
    F = f.ring.field
    support = sorted(f.support_variables())
    if not isinstance(F, PrimeField) or len(support) > 3:
        return []
    ring = f.ring
    out = []
    for lead in range(len(support)):
        for tail in itertools.product(range(F.p), repeat=len(support) - lead - 1):
            form = ring.var(support[lead])
            for c, i in zip(tail, support[lead + 1:]):
                form = form + ring.var(i).scale(c)
            out.append(form)
    return out


def split_factors(f: Polynomial) -> list[Polynomial]:
    """Distinct factors (up to units) whose zero sets cover V(f).

    Detects monomial content, linear forms, linear factors of binary forms and,
    over small prime fields, linear factors in at most three variables.  The
    returned factors multiply (with multiplicity) back to f up to a unit; any
    part that cannot be split is returned whole.
    """
    ring = f.ring
    factors: list[Polynomial] = []
    vars_, rest = _monomial_content(f)
    factors.extend(ring.var(i) for i in vars_)
    if rest.is_constant():
        return factors
    if rest.total_degree() == 1:
        return factors + [rest.monic(GREVLEX)]
    candidates = _binary_linear_factors(rest) or _fp_linear_candidates(rest)
    for lin in candidates:
        while rest.total_degree() > 1:
            try:
                rest = exact_divide(rest, lin)
            except ValueError:
                break
            if lin.monic(GREVLEX) not in factors:
                factors.append(lin.monic(GREVLEX))
        if rest.total_degree() == 1:
            break
    if not rest.is_constant():
        rest = rest.monic(GREVLEX)
        if rest not in factors:
            factors.append(rest)
    return factors


def minimal_primes_split(I: Ideal, factored_hints: Sequence[Sequence[Polynomial]] | None = None
                         ) -> Decomposition:
    """Minimal primes by recursive branching on factored generators.

    Raises :class:`Unsplittable` when a branch reaches an ideal that has no
    supported certificate.
    """
    ring = I.ring
    if factored_hints is not None:
        if len(factored_hints) != len(I.generators):
            raise ValueError("one factor list per generator required")
        gens = [list(h) for h in factored_hints]
        for g, h in zip(I.generators, gens):
            prod = ring.one()
            for q in h:
                prod = prod * q
            if not Ideal(ring, [g]).contains(prod) or not Ideal(ring, [prod]).contains(g):
                # the hint must agree with the generator up to a unit
                raise ValueError(f"factor hint does not multiply to {g}")
    else:
        gens = [[g] for g in I.generators]
    leaves: list[PrimeCertificate] = []
    _branch(ring, [], gens, leaves, factored_hints is None)
    minimal = []
    for c in _canonical(leaves):
        if any(d != c and c.ideal().contains_ideal(d.ideal()) for d in leaves):
            continue
        minimal.append(c)
    return Decomposition(I, _canonical(minimal), True)


def _branch(ring: Ring, linear: list[Polynomial], gens: list[list[Polynomial]],
            leaves: list[PrimeCertificate], detect: bool) -> None:
    lin = _rref_linear(ring, linear)
    if any(g.is_constant() for g in lin):
        return
    pending: list[list[Polynomial]] = []
    for factors in gens:
        reduced = []
        dead = False
        for q in factors:
            r = reduce(q, lin, GREVLEX)[0] if lin else q
            if r.is_zero():
                dead = True
                break
            if not r.is_constant():
                reduced.append(r)
        if dead:
            continue
        if not reduced:
            return  # a unit: empty branch
        if detect or len(reduced) == 1:
            expanded = []
            for r in reduced:
                expanded.extend(split_factors(r))
            reduced = expanded
        uniq = []
        for r in reduced:
            r = r.monic(GREVLEX)
            if r not in uniq:
                uniq.append(r)
        pending.append(uniq)
    if not pending:
        leaves.append(PrimeCertificate.from_parts(ring, lin))
        return
    pending.sort(key=lambda fs: (not any(q.total_degree() == 1 for q in fs), len(fs),
                                 [str(q) for q in fs]))
    choice = next((fs for fs in pending
                   if len(fs) > 1 or fs[0].total_degree() == 1), None)
    if choice is None:
        if len(pending) == 1:
            g = pending[0][0]
            if certify_irreducible(g):
                leaves.append(PrimeCertificate.from_parts(ring, lin, g))
                return
        raise Unsplittable(
            f"no certificate for branch ({', '.join(map(str, lin + [fs[0] for fs in pending]))})")
    rest = [fs for fs in pending if fs is not choice]
    for q in choice:
        if q.total_degree() == 1:
            _branch(ring, linear + [q], rest, leaves, detect)
        else:
            _branch(ring, linear, rest + [[q]], leaves, detect)


def verify_candidates(I: Ideal, candidates: Sequence[PrimeCertificate]) -> Decomposition:
    """Check that candidates are exactly the minimal primes of I.

    (a) I lies in every candidate, (b) candidates are pairwise incomparable,
    (c) every generator of their intersection lies in the radical of I.
    """
    comps = list(candidates)
    for P in comps:
        if not P.check():
            return Decomposition(I, comps, False, {"clause": "certificate", "prime": repr(P)})
    for P in comps:
        J = P.ideal()
        for g in I.generators:
            if not J.contains(g):
                return Decomposition(I, comps, False,
                                     {"clause": "a", "prime": repr(P), "generator": str(g)})
    for P, Q in itertools.combinations(comps, 2):
        if P.ideal().contains_ideal(Q.ideal()) or Q.ideal().contains_ideal(P.ideal()):
            return Decomposition(I, comps, False,
                                 {"clause": "b", "primes": [repr(P), repr(Q)]})
    if comps:
        meet = comps[0].ideal()
        for P in comps[1:]:
            meet = intersect(meet, P.ideal())
        witnesses = meet.basis()
    else:
        witnesses = (I.ring.one(),)
    for g in witnesses:
        if not in_radical(I, g):
            return Decomposition(I, comps, False, {"clause": "c", "generator": str(g)})
    return Decomposition(I, _canonical(comps), True)


def minimal_primes(I: Ideal) -> Decomposition:
    """Monomial algorithm when possible, structural splitting otherwise."""
    if I.is_monomial():
        return minimal_primes_monomial(I)
    return minimal_primes_split(I)
