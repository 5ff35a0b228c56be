"""Mod-p representations of GL_2(F_p) through exact Brauer characters.

Eigenvalues of p-regular elements are Teichmüller-lifted to powers of
zeta = zeta_{p^2-1}; F_p^x sits inside as the powers of zeta^(p+1).  A Brauer
character is stored per class as a group-ring element sum c_k zeta^k, which maps
to an exact :class:`~bmcycles.arith.CyclotomicNumber`.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterable, Mapping

import numpy as np

from .arith import CyclotomicField, CyclotomicNumber, is_prime, prime_factors, solve_linear_system
from .errors import EqualCharacters, NotARepresentation, SingularMatrix, SizeLimit


def _check_prime(p: int):
    if not is_prime(p) or p == 2:
        raise ValueError(f"p must be an odd prime, got {p}")


@dataclass(frozen=True, order=True)
class SerreWeightGL2:
    """sigma_{m,n} = det^m (x) Sym^n F_p^2 with 0 <= m <= p-2, 0 <= n <= p-1."""

    m: int
    n: int
    p: int

    def __post_init__(self):
        _check_prime(self.p)
        if not (0 <= self.m <= self.p - 2 and 0 <= self.n <= self.p - 1):
            raise ValueError(f"sigma[{self.m},{self.n}] out of range for p={self.p}")

    @classmethod
    def normalized(cls, m: int, n: int, p: int) -> "SerreWeightGL2":
        """Build sigma_{m,n} reducing the twist m modulo p-1."""
        return cls(m % (p - 1), n, p)

    @property
    def dimension(self) -> int:
        return self.n + 1

    @property
    def label(self) -> str:
        return f"sigma[{self.m},{self.n}]"

    def __str__(self) -> str:
        return self.label


def parse_weight_label(label: str, p: int) -> SerreWeightGL2:
    inner = label.strip()
    if not (inner.startswith("sigma[") and inner.endswith("]")):
        raise ValueError(f"bad weight label {label!r}")
    m, n = (int(x) for x in inner[6:-1].split(","))
    return SerreWeightGL2(m, n, p)


@dataclass(frozen=True)
class PRegularClass:
    """Semisimple class of GL_2(F_p): central(a), split(a, b) or nonsplit(j)."""

    kind: str
    params: tuple[int, ...]
    p: int

    @property
    def eigen_exponents(self) -> tuple[int, int]:
        """Exponents of zeta_{p^2-1} of the Teichmüller-lifted eigenvalues."""
        p = self.p
        N = p * p - 1
        if self.kind == "central":
            e = (p + 1) * self.params[0]
            return e, e
        if self.kind == "split":
            a, b = self.params
            return (p + 1) * a, (p + 1) * b
        j = self.params[0]
        return j, p * j % N


@lru_cache(maxsize=None)
def p_regular_classes(p: int) -> tuple[PRegularClass, ...]:
    """Canonical class list: central, then split, then nonsplit; p(p-1) entries."""
    _check_prime(p)
    N = p * p - 1
    out = [PRegularClass("central", (a,), p) for a in range(p - 1)]
    out += [PRegularClass("split", (a, b), p) for a in range(p - 1) for b in range(a + 1, p - 1)]
    seen = set()
    for j in range(1, N):
        if j % (p + 1) == 0:
            continue
        rep = min(j, p * j % N)
        if rep not in seen:
            seen.add(rep)
            out.append(PRegularClass("nonsplit", (rep,), p))
    assert len(out) == p * (p - 1)
    return tuple(out)


GroupRingElt = Mapping[int, int]


def _gr_mul(a: GroupRingElt, b: GroupRingElt, N: int) -> dict[int, int]:
    out: dict[int, int] = {}
    for k1, c1 in a.items():
        for k2, c2 in b.items():
            k = (k1 + k2) % N
            out[k] = out.get(k, 0) + c1 * c2
    return {k: c for k, c in out.items() if c}


def _gr_add(a: GroupRingElt, b: GroupRingElt, sign: int = 1) -> dict[int, int]:
    out = dict(a)
    for k, c in b.items():
        out[k] = out.get(k, 0) + sign * c
    return {k: c for k, c in out.items() if c}


class BrauerCharacter:
    """Class function on the p-regular classes with values in Q(zeta_{p^2-1})."""

    def __init__(self, p: int, counts: Iterable[GroupRingElt]):
        self.p = p
        self.N = p * p - 1
        reduced = []
        for d in counts:
            r: dict[int, int] = {}
            for k, c in d.items():
                r[k % self.N] = r.get(k % self.N, 0) + c
            reduced.append({k: c for k, c in r.items() if c})
        self.counts = tuple(reduced)
        if len(self.counts) != p * (p - 1):
            raise ValueError("one value per p-regular class required")

    @cached_property
    def values(self) -> tuple[CyclotomicNumber, ...]:
        return tuple(CyclotomicNumber.from_exponent_counts(self.N, d) for d in self.counts)

    @property
    def degree(self) -> int:
        v = self.values[0].rational_value()
        assert v is not None and v.denominator == 1
        return int(v)

    def __add__(self, other: "BrauerCharacter") -> "BrauerCharacter":
        self._check(other)
        return BrauerCharacter(self.p, [_gr_add(a, b) for a, b in zip(self.counts, other.counts)])

    def __sub__(self, other: "BrauerCharacter") -> "BrauerCharacter":
        self._check(other)
        return BrauerCharacter(self.p, [_gr_add(a, b, -1) for a, b in
                                        zip(self.counts, other.counts)])

    def __mul__(self, other):
        if isinstance(other, int):
            return BrauerCharacter(self.p, [{k: other * c for k, c in d.items()}
                                            for d in self.counts])
        self._check(other)
        return BrauerCharacter(self.p, [_gr_mul(a, b, self.N) for a, b in
                                        zip(self.counts, other.counts)])

    __rmul__ = __mul__

    def twist(self, m: int) -> "BrauerCharacter":
        """Multiply by det^m, i.e. by (alpha*beta)^m."""
        return self * character_sym(m, 0, self.p)

    def _check(self, other):
        if not isinstance(other, BrauerCharacter) or other.p != self.p:
            raise ValueError("characters for different primes")

    def __eq__(self, other) -> bool:
        if not isinstance(other, BrauerCharacter):
            return NotImplemented
        return self.p == other.p and self.values == other.values

    def __hash__(self):
        return hash((self.p, self.values))

    def reduce_mod(self, ell: int, root: int) -> list[int]:
        """Image of each value under zeta -> root in F_ell."""
        out = []
        for d in self.counts:
            out.append(sum(c * pow(root, k, ell) for k, c in d.items()) % ell)
        return out


def character_sym(a: int, b: int, p: int) -> BrauerCharacter:
    """Brauer character of det^a (x) Sym^b."""
    _check_prime(p)
    if b < 0:
        raise ValueError("b must be nonnegative")
    counts = []
    for cls in p_regular_classes(p):
        e1, e2 = cls.eigen_exponents
        base = a * (e1 + e2)
        d: dict[int, int] = {}
        for i in range(b + 1):
            k = base + i * e1 + (b - i) * e2
            d[k % (p * p - 1)] = d.get(k % (p * p - 1), 0) + 1
        counts.append(d)
    return BrauerCharacter(p, counts)


def character_weight(w: SerreWeightGL2) -> BrauerCharacter:
    return character_sym(w.m, w.n, w.p)


def _induced(i: int, j: int, p: int) -> BrauerCharacter:
    counts = []
    for cls in p_regular_classes(p):
        e1, e2 = cls.eigen_exponents
        if cls.kind == "central":
            counts.append({(i + j) * e1: p + 1})
        elif cls.kind == "split":
            counts.append(_gr_add({i * e1 + j * e2: 1}, {i * e2 + j * e1: 1}))
        else:
            counts.append({})
    return BrauerCharacter(p, counts)


def character_principal_series(i: int, j: int, p: int) -> BrauerCharacter:
    """Induction from the Borel of chi_i (x) chi_j (Teichmüller powers), i != j mod p-1."""
    _check_prime(p)
    if (i - j) % (p - 1) == 0:
        raise EqualCharacters(f"chi_{i} = chi_{j}: principal series is reducible")
    return _induced(i, j, p)


def character_steinberg(p: int) -> BrauerCharacter:
    _check_prime(p)
    return _induced(0, 0, p) - character_sym(0, 0, p)


def character_trivial(p: int) -> BrauerCharacter:
    return character_sym(0, 0, p)


def type_character(kind: str, params: Iterable[int], p: int) -> BrauerCharacter:
    """sigma(tau) for the supported inertial types: trivial, steinberg or ps(i, j)."""
    params = list(params)
    if kind == "trivial":
        return character_trivial(p)
    if kind == "steinberg":
        return character_steinberg(p)
    if kind == "ps":
        if len(params) != 2:
            raise ValueError("principal series type needs params [i, j]")
        return character_principal_series(params[0], params[1], p)
    raise ValueError(f"unsupported type {kind!r}")


@dataclass(frozen=True)
class WeightMultiset:
    entries: tuple[tuple[SerreWeightGL2, int], ...]

    @classmethod
    def from_mapping(cls, mapping: Mapping[SerreWeightGL2, int]) -> "WeightMultiset":
        items = []
        for w, k in mapping.items():
            if k < 0:
                raise ValueError("multiplicities must be nonnegative")
            if k:
                items.append((w, int(k)))
        return cls(tuple(sorted(items)))

    def as_dict(self) -> dict[SerreWeightGL2, int]:
        return dict(self.entries)

    def __getitem__(self, w: SerreWeightGL2) -> int:
        return self.as_dict().get(w, 0)

    @property
    def dimension(self) -> int:
        return sum(k * w.dimension for w, k in self.entries)

    def to_json(self) -> dict[str, int]:
        return {w.label: k for w, k in self.entries}

    def __repr__(self) -> str:
        return "{" + ", ".join(f"{w.label}: {k}" for w, k in self.entries) + "}"


@lru_cache(maxsize=None)
def weights(p: int) -> tuple[SerreWeightGL2, ...]:
    return tuple(SerreWeightGL2(m, n, p) for m in range(p - 1) for n in range(p))


@lru_cache(maxsize=None)
def weight_characters(p: int) -> tuple[BrauerCharacter, ...]:
    return tuple(character_weight(w) for w in weights(p))


# -- modular solve with exact verification --

def _primitive_root_mod(ell: int, N: int) -> int:
    qs = prime_factors(N)
    for x in range(2, ell):
        r = pow(x, (ell - 1) // N, ell)
        if all(pow(r, N // q, ell) != 1 for q in qs):
            return r
    raise ValueError("no primitive root found")


def _modular_primes(N: int, start: int = 1 << 30):
    k = start // N + 1
    while True:
        ell = k * N + 1
        if ell < (1 << 31) and is_prime(ell):
            yield ell
        k += 1


def _inverse_mod(A: np.ndarray, ell: int) -> np.ndarray:
    n = A.shape[0]
    M = np.concatenate([A % ell, np.eye(n, dtype=np.int64)], axis=1)
    for col in range(n):
        nz = np.nonzero(M[col:, col])[0]
        if nz.size == 0:
            raise SingularMatrix(f"singular modulo {ell}")
        piv = col + nz[0]
        if piv != col:
            M[[col, piv]] = M[[piv, col]]
        inv = pow(int(M[col, col]), -1, ell)
        M[col] = (M[col] * inv) % ell
        factors = M[:, col].copy()
        factors[col] = 0
        rows = np.nonzero(factors)[0]
        if rows.size:
            M[rows] = (M[rows] - (factors[rows, None] * M[col]) % ell) % ell
    return M[:, n:]


@lru_cache(maxsize=None)
def _modular_solver(p: int):
    """(ell, root, inverse of the transposed weight-character matrix mod ell)."""
    N = p * p - 1
    chars = weight_characters(p)
    for ell in _modular_primes(N):
        root = _primitive_root_mod(ell, N)
        A = np.array([c.reduce_mod(ell, root) for c in chars], dtype=np.int64).T
        try:
            return ell, root, _inverse_mod(A, ell)
        except SingularMatrix:
            continue


def _solve_exact(chi: BrauerCharacter) -> list:
    p = chi.p
    K = CyclotomicField(chi.N)
    chars = weight_characters(p)
    n = len(chars)
    matrix = [[chars[w].values[c] for w in range(n)] for c in range(n)]
    return solve_linear_system(matrix, list(chi.values), K)


def decompose(chi: BrauerCharacter, method: str = "modular") -> WeightMultiset:
    """Jordan-Hölder multiplicities of the Serre weights in a Brauer character.

    ``method="exact"`` solves the square system over Q(zeta_{p^2-1}) directly.
    ``method="modular"`` solves it modulo a prime ell = 1 mod p^2-1 above the
    dimension bound, lifts to integers and then checks the identity
    sum mult * chi_w == chi exactly in Q(zeta); linear independence of the
    weight characters makes the verified solution the unique one.
    """
    p = chi.p
    basis = weights(p)
    if method == "exact":
        sol = _solve_exact(chi)
        mults = []
        for v in sol:
            r = v.rational_value()
            if r is None or r.denominator != 1 or r < 0:
                raise NotARepresentation(f"non-integral or negative multiplicity {v!r}")
            mults.append(int(r))
    elif method == "modular":
        ell, root, inv = _modular_solver(p)
        rhs = np.array(chi.reduce_mod(ell, root), dtype=np.int64)
        sol = [int(x) for x in _matvec_mod(inv, rhs, ell)]
        mults = [x if x <= ell // 2 else x - ell for x in sol]
        if any(x < 0 for x in mults):
            raise NotARepresentation("negative multiplicity")
        chars = weight_characters(p)
        combo = [dict() for _ in range(p * (p - 1))]
        for k, c in zip(mults, chars):
            if k:
                combo = [_gr_add(a, {e: k * v for e, v in b.items()})
                         for a, b in zip(combo, c.counts)]
        if BrauerCharacter(p, combo) != chi:
            raise NotARepresentation("character is not an integral combination of weights")
    else:
        raise ValueError(f"unknown method {method!r}")
    result = WeightMultiset.from_mapping(dict(zip(basis, mults)))
    if result.dimension != chi.degree:
        raise NotARepresentation("dimension bookkeeping failed")
    return result


def _matvec_mod(A: np.ndarray, v: np.ndarray, ell: int) -> np.ndarray:
    # products stay below 2^62 because every entry is below 2^31
    out = np.zeros(A.shape[0], dtype=np.int64)
    for j in range(A.shape[1]):
        if v[j]:
            out = (out + (A[:, j] * int(v[j])) % ell) % ell
    return out


# -- explicit-matrix oracle --

class _Fp:
    """Small dense linear algebra over F_p on lists of lists."""

    def __init__(self, p: int):
        self.p = p

    def matmul(self, A, B):
        p = self.p
        Bt = list(zip(*B))
        return [[sum(a * b for a, b in zip(row, col)) % p for col in Bt] for row in A]

    def matvec(self, A, v):
        p = self.p
        return [sum(a * b for a, b in zip(row, v)) % p for row in A]

    def nullspace(self, A, ncols: int):
        """Basis of {x : A x = 0}."""
        p = self.p
        M = [list(r) for r in A]
        pivots = []
        row = 0
        for col in range(ncols):
            piv = next((r for r in range(row, len(M)) if M[r][col] % p), None)
            if piv is None:
                continue
            M[row], M[piv] = M[piv], M[row]
            inv = pow(M[row][col], -1, p)
            M[row] = [x * inv % p for x in M[row]]
            for r in range(len(M)):
                if r != row and M[r][col] % p:
                    f = M[r][col]
                    M[r] = [(x - f * y) % p for x, y in zip(M[r], M[row])]
            pivots.append(col)
            row += 1
        free = [c for c in range(ncols) if c not in pivots]
        basis = []
        for fcol in free:
            v = [0] * ncols
            v[fcol] = 1
            for r, pc in enumerate(pivots):
                v[pc] = -M[r][fcol] % p
            basis.append(v)
        return basis

    def echelon_insert(self, basis: list, v) -> bool:
        """Add v to an echelon basis (list of (pivot, vector)); False if dependent."""
        p = self.p
        v = list(v)
        for piv, b in basis:
            if v[piv]:
                f = v[piv]
                v = [(x - f * y) % p for x, y in zip(v, b)]
        nz = next((i for i, x in enumerate(v) if x), None)
        if nz is None:
            return False
        inv = pow(v[nz], -1, p)
        v = [x * inv % p for x in v]
        for k, (piv, b) in enumerate(basis):
            if b[nz]:
                f = b[nz]
                basis[k] = (piv, [(x - f * y) % p for x, y in zip(b, v)])
        basis.append((nz, v))
        return True

    def inverse(self, A):
        p = self.p
        n = len(A)
        M = [list(r) + [int(i == j) for j in range(n)] for i, r in enumerate(A)]
        for col in range(n):
            piv = next(r for r in range(col, n) if M[r][col] % p)
            M[col], M[piv] = M[piv], M[col]
            inv = pow(M[col][col], -1, p)
            M[col] = [x * inv % p for x in M[col]]
            for r in range(n):
                if r != col and M[r][col]:
                    f = M[r][col]
                    M[r] = [(x - f * y) % p for x, y in zip(M[r], M[col])]
        return [r[n:] for r in M]


def _least_primitive_root(p: int) -> int:
    qs = prime_factors(p - 1)
    return next(g for g in range(2, p) if all(pow(g, (p - 1) // q, p) != 1 for q in qs))


def _binom_expand(p: int, lin1, lin2, e1: int, e2: int, b: int) -> list[int]:
    """Coefficients on X^(b-i) Y^i of (lin1)^e1 (lin2)^e2 with lin = (cX, cY)."""
    poly = {0: 1}  # keyed by power of Y
    for lin, e in ((lin1, e1), (lin2, e2)):
        for _ in range(e):
            nxt: dict[int, int] = {}
            for k, c in poly.items():
                nxt[k] = (nxt.get(k, 0) + c * lin[0]) % p
                nxt[k + 1] = (nxt.get(k + 1, 0) + c * lin[1]) % p
            poly = nxt
    return [poly.get(i, 0) % p for i in range(b + 1)]


def sym_matrix(g, a: int, b: int, p: int) -> list[list[int]]:
    """Matrix of g = [[al, be], [ga, de]] on det^a (x) Sym^b, basis X^(b-i) Y^i."""
    (al, be), (ga, de) = g
    det = pow((al * de - be * ga) % p, a % (p - 1), p)
    cols = []
    for i in range(b + 1):
        # X -> al X + ga Y, Y -> be X + de Y
        col = _binom_expand(p, (al, ga), (be, de), b - i, i, b)
        cols.append([c * det % p for c in col])
    return [list(r) for r in zip(*cols)]


def gl2_generators(p: int):
    """Standard generators of GL_2(F_p): diag(g, 1) and [[-1, 1], [-1, 0]]."""
    g = _least_primitive_root(p)
    return ((g, 0), (0, 1)), ((p - 1, 1), (p - 1, 0))


def composition_factors_explicit(a: int, b: int, p: int) -> WeightMultiset:
    """Jordan-Hölder factors of det^a (x) Sym^b over F_p by submodule spinning.

    Independent of the Brauer-character route; intended as an oracle.
    """
    _check_prime(p)
    if p > 7 or b + 1 > 40:
        raise SizeLimit("explicit oracle limited to p <= 7 and dimension <= 40")
    g = _least_primitive_root(p)
    s1, s2 = gl2_generators(p)
    u = ((1, 1), (0, 1))
    t1 = ((g, 0), (0, 1))
    t2 = ((1, 0), (0, g))
    mats = [sym_matrix(x, a, b, p) for x in (s1, s2, u, t1, t2)]
    found: dict[SerreWeightGL2, int] = {}
    for w in _factors(_Fp(p), mats, g):
        found[w] = found.get(w, 0) + 1
    return WeightMultiset.from_mapping(found)


def _spin(lin: _Fp, gens, v) -> list:
    basis: list = []
    lin.echelon_insert(basis, v)
    queue = [basis[-1][1]]
    while queue:
        x = queue.pop()
        for A in gens:
            y = lin.matvec(A, x)
            if lin.echelon_insert(basis, y):
                queue.append(basis[-1][1])
    return [b for _, b in basis]


def _projective_points(p: int, basis: list):
    k = len(basis)
    for lead in range(k):
        for tail in _product(range(p), k - lead - 1):
            coeffs = [0] * lead + [1] + list(tail)
            yield [sum(c * b[i] for c, b in zip(coeffs, basis)) % p
                   for i in range(len(basis[0]))]


def _product(values, r):
    import itertools

    return itertools.product(values, repeat=r)


def _factors(lin: _Fp, mats, g: int) -> list[SerreWeightGL2]:
    p = lin.p
    d = len(mats[0])
    if d == 0:
        return []
    s1, s2, u, t1, t2 = mats
    ident = [[int(i == j) for j in range(d)] for i in range(d)]

    def minus(A, lam):
        return [[(A[i][j] - lam * ident[i][j]) % p for j in range(d)] for i in range(d)]

    fixed_rows = minus(u, 1)
    for e1 in range(p - 1):
        for e2 in range(p - 1):
            rows = fixed_rows + minus(t1, pow(g, e1, p)) + minus(t2, pow(g, e2, p))
            eig = lin.nullspace(rows, d)
            if not eig:
                continue
            for v in _projective_points(p, eig):
                span = _spin(lin, (s1, s2), v)
                if len(span) < d:
                    sub, quo = _split(lin, mats, span)
                    return _factors(lin, sub, g) + _factors(lin, quo, g)
    # irreducible: identify by the torus weight of the unipotent-fixed line
    fixed = lin.nullspace(fixed_rows, d)
    assert len(fixed) == 1, "irreducible module must have a one-dimensional U-fixed space"
    v = fixed[0]
    e1 = _eigen_exponent(lin, t1, v, g)
    e2 = _eigen_exponent(lin, t2, v, g)
    n = d - 1
    assert (e1 - e2 - n) % (p - 1) == 0
    return [SerreWeightGL2(e2 % (p - 1), n, p)]


def _eigen_exponent(lin: _Fp, A, v, g: int) -> int:
    p = lin.p
    w = lin.matvec(A, v)
    i = next(k for k, x in enumerate(v) if x)
    lam = w[i] * pow(v[i], -1, p) % p
    return next(e for e in range(p - 1) if pow(g, e, p) == lam)


def _split(lin: _Fp, mats, span):
    """Matrices on a submodule and on the quotient after a change of basis."""
    p = lin.p
    d = len(mats[0])
    k = len(span)
    basis: list = []
    for v in span:
        lin.echelon_insert(basis, v)
    cols = list(span)
    for i in range(d):
        e = [int(i == j) for j in range(d)]
        if lin.echelon_insert(basis, e):
            cols.append(e)
    B = [list(r) for r in zip(*cols)]
    Binv = lin.inverse(B)
    sub, quo = [], []
    for A in mats:
        C = lin.matmul(Binv, lin.matmul(A, B))
        sub.append([row[:k] for row in C[:k]])
        quo.append([row[k:] for row in C[k:]])
    return sub, quo
