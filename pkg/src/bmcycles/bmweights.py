"""Serre-weight combinatorics, the triangular multiplicity ledger, and a checker
for tabulated Breuil-Mézard identities between formal cycle combinations."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Hashable, Iterable, Mapping, Sequence

from .errors import AlphabetMismatch, NonIntegerSolution, NotUnitriangular, OutOfRange, RankMismatch
from .modrep import SerreWeightGL2, WeightMultiset, character_sym, decompose, type_character

GL2_CASES = (
    "irreducible",
    "nonsplit_peu_ramifiee",
    "nonsplit_tres_ramifiee",
    "nonsplit_generic",
    "split",
    "split_scalar_ss",
)
_TWO_PARAM = {"irreducible", "nonsplit_generic", "split"}
FALLBACK_CASES = {"nonsplit_tres_ramifiee", "split_scalar_ss"}


@dataclass(frozen=True)
class GL2ResidualDescriptor:
    """Shape of rbar restricted to inertia, as needed to read off W(rbar).

    ``cyclotomic_twist`` says whether rbar itself (not only its inertial
    restriction) is a twist of an extension of 1 by the cyclotomic character;
    it only matters for the peu ramifiée and split n=0 cases.
    """

    p: int
    case: str
    m: int
    n: int = 0
    cyclotomic_twist: bool = True

    def __post_init__(self):
        if self.case not in GL2_CASES:
            raise OutOfRange(f"unknown case {self.case!r}")
        p = self.p
        if not 0 <= self.m <= p - 2:
            raise OutOfRange(f"m={self.m} outside [0, {p - 2}]")
        if self.case in _TWO_PARAM:
            hi = {"irreducible": p - 1, "nonsplit_generic": p - 2, "split": p - 2}[self.case]
            lo = 1 if self.case == "nonsplit_generic" else 0
            if not lo <= self.n <= hi:
                raise OutOfRange(f"n={self.n} outside [{lo}, {hi}] for {self.case}")
        elif self.n != 0:
            raise OutOfRange(f"{self.case} takes no n parameter")

    @property
    def is_fallback(self) -> bool:
        return self.case in FALLBACK_CASES

    def to_json(self) -> dict:
        out = {"p": self.p, "case": self.case, "m": self.m}
        if self.case in _TWO_PARAM:
            out["n"] = self.n
        if self.case in ("nonsplit_peu_ramifiee", "split"):
            out["cyclotomic_twist"] = self.cyclotomic_twist
        return out


def _w(m: int, n: int, p: int) -> SerreWeightGL2:
    return SerreWeightGL2.normalized(m, n, p)


def weight_set_gl2(D: GL2ResidualDescriptor) -> frozenset[SerreWeightGL2]:
    p, m, n = D.p, D.m, D.n
    if D.case == "irreducible":
        return frozenset({_w(m, n, p), _w(m + n, p - 1 - n, p)})
    if D.case == "nonsplit_peu_ramifiee":
        return frozenset({_w(m, 0, p), _w(m, p - 1, p)})
    if D.case == "nonsplit_tres_ramifiee":
        return frozenset({_w(m, p - 1, p)})
    if D.case == "split_scalar_ss":
        return frozenset({_w(m, p - 2, p)})
    if D.case == "split":
        if p == 3 and n == 0:
            return frozenset({_w(m, 0, p), _w(m, 2, p), _w(m + 1, 0, p), _w(m + 1, 2, p)})
        if n == 0 and p > 3:
            # omega^(m+1) + omega^m is the n = p-3 case with the characters swapped
            m, n = m + 1, p - 3
        if 0 < n < p - 3:
            return frozenset({_w(m, n, p), _w(m + n + 1, p - 3 - n, p)})
        if n == p - 3 and p > 3:
            return frozenset({_w(m, p - 3, p), _w(m - 1, 0, p), _w(m - 1, p - 1, p)})
    return frozenset({_w(m, n, p)})


# -- GL_n weights --

@dataclass(frozen=True)
class SerreWeightGLn:
    """Per-embedding integer n-tuples; validity is checked by :func:`is_serre_weight`."""

    p: int
    n: int
    embeddings: tuple[str, ...]
    a: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "embeddings", tuple(self.embeddings))
        object.__setattr__(self, "a", tuple(tuple(t) for t in self.a))
        if len(self.a) != len(self.embeddings):
            raise RankMismatch("one tuple per embedding required")
        if any(len(t) != self.n for t in self.a):
            raise RankMismatch(f"tuples must have length {self.n}")

    def component(self, sigma: str) -> tuple[int, ...]:
        return self.a[self.embeddings.index(sigma)]

    def to_json(self) -> dict:
        return {"p": self.p, "n": self.n, "a": {s: list(t) for s, t in zip(self.embeddings, self.a)}}


def is_serre_weight(w: SerreWeightGLn) -> bool:
    p = w.p
    for t in w.a:
        if any(t[i] < t[i + 1] for i in range(len(t) - 1)):
            return False
        if any(t[i] - t[i + 1] > p - 1 for i in range(len(t) - 1)):
            return False
        if not 0 <= t[-1] <= p - 1:
            return False
    return not all(t[-1] == p - 1 for t in w.a)


def _same_shape(a: SerreWeightGLn, b: SerreWeightGLn):
    if a.n != b.n or a.embeddings != b.embeddings:
        raise RankMismatch("weights with different rank or embeddings")


def leq(b: SerreWeightGLn, a: SerreWeightGLn) -> bool:
    """b <= a iff a - b is a nonnegative sum of simple roots in every embedding."""
    _same_shape(a, b)
    for ta, tb in zip(a.a, b.a):
        partial = list(itertools.accumulate(x - y for x, y in zip(ta, tb)))
        if partial[-1] != 0 or any(s < 0 for s in partial):
            return False
    return True


@dataclass(frozen=True)
class HodgeTypeGLn:
    """Weakly decreasing tuple lambda_tau for every p-adic embedding tau."""

    lambdas: tuple[tuple[str, tuple[int, ...]], ...]

    def __post_init__(self):
        items = tuple(sorted((t, tuple(v)) for t, v in self.lambdas))
        for t, v in items:
            if any(v[i] < v[i + 1] for i in range(len(v) - 1)):
                raise ValueError(f"lambda_{t} is not weakly decreasing")
        object.__setattr__(self, "lambdas", items)

    def as_dict(self) -> dict[str, tuple[int, ...]]:
        return dict(self.lambdas)

    def to_json(self) -> dict:
        return {t: list(v) for t, v in self.lambdas}


def lifts(a: SerreWeightGLn, above: Mapping[str, Sequence[str]]) -> list[HodgeTypeGLn]:
    """Lifts of a: one tau above each sigma carries a_sigma, the others carry 0.

    ``above`` maps each residue embedding sigma to the p-adic embeddings over it.
    """
    if set(above) != set(a.embeddings):
        raise RankMismatch("K-data does not cover exactly the residue embeddings")
    zero = (0,) * a.n
    choices = [list(above[s]) for s in a.embeddings]
    if any(not c for c in choices):
        raise RankMismatch("every residue embedding needs a p-adic embedding above it")
    out = []
    for pick in itertools.product(*choices):
        lam = []
        for s, chosen in zip(a.embeddings, pick):
            for tau in above[s]:
                lam.append((tau, a.component(s) if tau == chosen else zero))
        out.append(HodgeTypeGLn(tuple(lam)))
    return out


# -- formal combinations --

class FormalCycleCombo:
    """Finite integer combination of opaque component labels."""

    __slots__ = ("_d",)

    def __init__(self, entries: Mapping[str, int] | None = None):
        d: dict[str, int] = {}
        for k, v in (entries or {}).items():
            if not isinstance(v, int) or isinstance(v, bool):
                raise TypeError(f"coefficient of {k!r} must be an integer")
            if v:
                d[str(k)] = d.get(str(k), 0) + v
        self._d = {k: v for k, v in sorted(d.items()) if v}

    @classmethod
    def single(cls, label: str, k: int = 1) -> "FormalCycleCombo":
        return cls({label: k})

    @property
    def entries(self) -> dict[str, int]:
        return dict(self._d)

    @property
    def labels(self) -> frozenset[str]:
        return frozenset(self._d)

    def __add__(self, other: "FormalCycleCombo") -> "FormalCycleCombo":
        d = dict(self._d)
        for k, v in other._d.items():
            d[k] = d.get(k, 0) + v
        return FormalCycleCombo(d)

    def __neg__(self) -> "FormalCycleCombo":
        return FormalCycleCombo({k: -v for k, v in self._d.items()})

    def __sub__(self, other: "FormalCycleCombo") -> "FormalCycleCombo":
        return self + (-other)

    def scale(self, k: int) -> "FormalCycleCombo":
        return FormalCycleCombo({lab: k * v for lab, v in self._d.items()})

    def __rmul__(self, k: int) -> "FormalCycleCombo":
        return self.scale(k)

    def product(self, other: "FormalCycleCombo") -> "FormalCycleCombo":
        """Bilinear product with labels joined as 'a*b'."""
        d: dict[str, int] = {}
        for a, x in self._d.items():
            for b, y in other._d.items():
                key = f"{a}*{b}"
                d[key] = d.get(key, 0) + x * y
        return FormalCycleCombo(d)

    def is_zero(self) -> bool:
        return not self._d

    def is_effective(self) -> bool:
        return all(v > 0 for v in self._d.values())

    def total(self) -> int:
        return sum(self._d.values())

    def __eq__(self, other) -> bool:
        return isinstance(other, FormalCycleCombo) and self._d == other._d

    def __hash__(self):
        return hash(tuple(self._d.items()))

    def to_json(self) -> dict[str, int]:
        return dict(self._d)

    def __repr__(self) -> str:
        if not self._d:
            return "0"
        return " + ".join(f"{v}*{k}" for k, v in self._d.items())


# -- ledger --

def ledger_solve(weights: Sequence[Any], m: Sequence[Sequence[Any]], e: Sequence[Any]) -> list:
    """Solve m . mu = e for upper unitriangular m by back-substitution.

    m[i][j] may be nonzero for i != j only when weights[i] <= weights[j]; the
    right-hand side may be integers or :class:`FormalCycleCombo` values.
    """
    k = len(weights)
    if len(m) != k or any(len(row) != k for row in m) or len(e) != k:
        raise RankMismatch("matrix, weights and right-hand side sizes differ")
    for i in range(k):
        if m[i][i] != 1:
            raise NotUnitriangular(f"diagonal entry {i} is {m[i][i]}")
        for j in range(k):
            if i == j or m[i][j] == 0:
                continue
            if j < i:
                raise NotUnitriangular(f"entry ({i},{j}) below the diagonal is nonzero")
            wi, wj = weights[i], weights[j]
            if isinstance(wi, SerreWeightGLn) and isinstance(wj, SerreWeightGLn) and not leq(wi, wj):
                raise NotUnitriangular(f"entry ({i},{j}) nonzero but weights are not ordered")
    formal = any(isinstance(x, FormalCycleCombo) for x in e)
    mu: list = [None] * k
    for i in reversed(range(k)):
        if formal:
            acc = e[i]
            for j in range(i + 1, k):
                if m[i][j]:
                    c = Fraction(m[i][j])
                    if c.denominator != 1:
                        raise NonIntegerSolution(f"entry ({i},{j}) is not an integer")
                    acc = acc - mu[j].scale(int(c))
            mu[i] = acc
        else:
            acc = Fraction(e[i]) - sum((Fraction(m[i][j]) * mu[j] for j in range(i + 1, k)),
                                       Fraction(0))
            mu[i] = acc
    if formal:
        return mu
    out = []
    for i, x in enumerate(mu):
        if x.denominator != 1:
            raise NonIntegerSolution(f"mu[{i}] = {x} is not an integer")
        out.append(int(x))
    return out


# -- tables and the verifier --

@dataclass(frozen=True, order=True)
class TableKey:
    """Row of a table: Hodge type lambda and inertial type (kind, params)."""

    lam: tuple[int, ...]
    kind: str = "trivial"
    params: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "lam", tuple(self.lam))
        object.__setattr__(self, "params", tuple(self.params))

    @property
    def name(self) -> str:
        t = self.kind + (f"({','.join(map(str, self.params))})" if self.params else "")
        return f"lambda=[{','.join(map(str, self.lam))}] type={t}"

    def to_json(self) -> dict:
        out: dict = {"lambda": list(self.lam), "type": {"kind": self.kind}}
        if self.params:
            out["type"]["params"] = list(self.params)
        return out


def gl2_a_data(key: TableKey, p: int) -> WeightMultiset:
    """JH multiplicities of (det^lam2 Sym^(lam1-lam2)) (x) sigma(tau) mod p."""
    if len(key.lam) != 2 or key.lam[0] < key.lam[1]:
        raise ValueError("GL2 Hodge type must be a decreasing pair")
    chi = character_sym(key.lam[1], key.lam[0] - key.lam[1], p)
    return decompose(chi * type_character(key.kind, key.params, p))


def gl2_lowest_key(w: SerreWeightGL2) -> TableKey:
    """The crystalline trivial-type row whose reduction is exactly w."""
    return TableKey((w.m + w.n, w.m), "trivial")


@dataclass
class VerifyReport:
    ok: bool
    mode: str
    rows: list = field(default_factory=list)
    low_weight: list = field(default_factory=list)
    fallback: bool = False

    @property
    def violations(self) -> list[str]:
        bad = [r["row"] for r in self.rows + self.low_weight if not r["ok"]]
        return list(dict.fromkeys(bad))

    def to_json(self) -> dict:
        out = {
            "ok": self.ok,
            "mode": self.mode,
            "rows": self.rows,
            "low_weight": self.low_weight,
            "violations": self.violations,
        }
        if self.fallback:
            out["fallback"] = True
        return out


def _weights_of(data) -> dict:
    if isinstance(data, WeightMultiset):
        return data.as_dict()
    return dict(data)


def _label(w) -> str:
    return w.label if isinstance(w, SerreWeightGL2) else str(w)


def bm_verify(table: Mapping[Hashable, Any], a_data: Mapping[Hashable, Any],
              C: Mapping[Hashable, Any], numerical: bool = False) -> VerifyReport:
    """Check Z(row) = sum_a n_a C_a for every row (or e = sum n_a mu_a when numerical).

    Weights absent from ``C`` contribute zero.  A trivial-type row whose
    reduction is a single weight with multiplicity one must equal that C_a.
    """
    kind = int if numerical else FormalCycleCombo
    for v in list(table.values()) + list(C.values()):
        if not isinstance(v, kind) or isinstance(v, bool):
            raise AlphabetMismatch(f"expected {kind.__name__} values, got {type(v).__name__}")
    if not numerical:
        alphabet = frozenset().union(*(c.labels for c in C.values()))
        for key, z in table.items():
            extra = z.labels - alphabet
            if extra:
                raise AlphabetMismatch(f"row {_row_name(key)} uses unknown labels {sorted(extra)}")
    zero = 0 if numerical else FormalCycleCombo()
    rows, low = [], []
    for key in sorted(table, key=_row_name):
        if key not in a_data:
            raise AlphabetMismatch(f"no reduction data for row {_row_name(key)}")
        n = _weights_of(a_data[key])
        predicted = zero
        for w, k in n.items():
            predicted = predicted + k * C.get(w, zero)
        residual = table[key] - predicted
        ok = residual == zero
        rows.append({
            "row": _row_name(key),
            "ok": ok,
            "a": {_label(w): k for w, k in sorted(n.items(), key=lambda t: _label(t[0]))},
            "residual": residual if numerical else residual.to_json(),
        })
        if getattr(key, "kind", None) == "trivial" and len(n) == 1:
            (w, k), = n.items()
            if k == 1:
                low_ok = C.get(w, zero) == table[key]
                low.append({"row": _row_name(key), "weight": _label(w), "ok": low_ok})
    ok = all(r["ok"] for r in rows) and all(r["ok"] for r in low)
    return VerifyReport(ok, "numerical" if numerical else "formal", rows, low)


def _row_name(key) -> str:
    return key.name if isinstance(key, TableKey) else str(key)


# -- structure of the C_{m,n} --

def _expected_shape(D: GL2ResidualDescriptor, w: SerreWeightGL2) -> tuple[str, int | None, bool]:
    """(claim, number of labels, whether each label must have coefficient 1)."""
    p = D.p
    if D.case == "irreducible":
        return "single component, multiplicity one", 1, True
    if w.n == p - 1:
        twisted = D.case in ("nonsplit_peu_ramifiee", "split") and D.cyclotomic_twist
        if twisted:
            return "two components, each multiplicity one", 2, True
        return "single component, multiplicity one", 1, True
    if w.n == p - 2:
        if D.case == "split":
            return "two components, each multiplicity one", 2, True
        if D.case == "split_scalar_ss":
            return "single component", 1, False
    return "single component, multiplicity one", 1, True


def component_report_gl2(D: GL2ResidualDescriptor, C: Mapping[SerreWeightGL2, FormalCycleCombo]
                         ) -> dict:
    W = sorted(weight_set_gl2(D))
    checks = []
    for w in W:
        combo = C.get(w)
        claim, count, mult_one = _expected_shape(D, w)
        if combo is None:
            checks.append({"claim": claim, "weights": [w.label], "ok": False, "detail": "missing C"})
            continue
        ok = len(combo.labels) == count and combo.is_effective()
        if mult_one:
            ok = ok and all(v == 1 for v in combo.entries.values())
        checks.append({"claim": claim, "weights": [w.label], "ok": ok, "C": combo.to_json()})
    p = D.p
    for w1, w2 in itertools.combinations(W, 2):
        c1, c2 = C.get(w1), C.get(w2)
        if c1 is None or c2 is None:
            continue
        pair = sorted((w1, w2), key=lambda w: w.n)
        if pair[0].m == pair[1].m and pair[0].n == 0 and pair[1].n == p - 1:
            low, high = C[pair[0]], C[pair[1]]
            twisted = D.case in ("nonsplit_peu_ramifiee", "split") and D.cyclotomic_twist
            if twisted:
                extra = high - low
                ok = extra.is_effective() and len(extra.labels) == 1 and extra.total() == 1
                claim = "C_{m,p-1} = C_{m,0} + one further component"
            else:
                ok = low == high
                claim = "C_{m,0} = C_{m,p-1}"
        else:
            ok = not (c1.labels & c2.labels)
            claim = "disjoint support"
        checks.append({"claim": claim, "weights": [w1.label, w2.label], "ok": ok})
    report = {
        "descriptor": D.to_json(),
        "weights": [w.label for w in W],
        "checks": checks,
        "conforms": all(c["ok"] for c in checks),
    }
    if D.is_fallback:
        report["fallback"] = True
    return report
