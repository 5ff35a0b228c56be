"""Exact coefficient arithmetic: prime fields, the rationals and cyclotomic fields.

Field objects are small immutable descriptors exposing the arithmetic used by
the polynomial kernels (``add``, ``mul``, ``inv`` ...).  Elements of ``F_p``
are plain Python ints in ``[0, p)``, rationals are :class:`fractions.Fraction`
and cyclotomic elements are :class:`CyclotomicNumber`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .errors import FieldMismatch, ParseError, SingularMatrix


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def divisors(n: int) -> list[int]:
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def euler_phi(n: int) -> int:
    result = n
    for q in prime_factors(n):
        result -= result // q
    return result


# -- dense univariate helpers over Q (coefficient lists, lowest degree first) --

def _trim(c: list) -> list:
    while c and c[-1] == 0:
        c.pop()
    return c


def _upoly_divmod(a: Sequence[Fraction], b: Sequence[Fraction]) -> tuple[list, list]:
    a = [Fraction(x) for x in a]
    b = _trim([Fraction(x) for x in b])
    if not b:
        raise ZeroDivisionError("division by zero polynomial")
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 1)
    lead = b[-1]
    while len(_trim(a)) >= len(b):
        shift = len(a) - len(b)
        c = a[-1] / lead
        q[shift] = c
        for i, bi in enumerate(b):
            a[shift + i] -= c * bi
        _trim(a)
    return _trim(q), a


def _upoly_mul(a: Sequence, b: Sequence) -> list:
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim(out)


@lru_cache(maxsize=None)
def cyclotomic_coefficients(n: int) -> tuple[int, ...]:
    """Integer coefficients of the n-th cyclotomic polynomial, lowest degree first."""
    if n < 1:
        raise ValueError("n must be positive")
    num = [Fraction(-1)] + [Fraction(0)] * (n - 1) + [Fraction(1)]
    den = [Fraction(1)]
    for d in divisors(n)[:-1]:
        den = _upoly_mul(den, [Fraction(c) for c in cyclotomic_coefficients(d)])
    q, r = _upoly_divmod(num, den)
    assert not r
    assert all(c.denominator == 1 for c in q)
    return tuple(int(c) for c in q)


def cyclotomic_polynomial(n: int):
    """Return the n-th cyclotomic polynomial as a univariate polynomial over Q."""
    from .poly import Polynomial, Ring

    ring = Ring(RationalField(), ("x",))
    coeffs = cyclotomic_coefficients(n)
    return Polynomial(ring, {(k,): Fraction(c) for k, c in enumerate(coeffs) if c})


# -- fields --

@dataclass(frozen=True)
class PrimeField:
    p: int

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")

    @property
    def zero(self):
        return 0

    @property
    def one(self):
        return 1

    @property
    def characteristic(self) -> int:
        return self.p

    def __call__(self, x) -> int:
        if isinstance(x, Fraction):
            return x.numerator * pow(x.denominator, -1, self.p) % self.p
        return int(x) % self.p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def neg(self, a):
        return -a % self.p

    def mul(self, a, b):
        return a * b % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, -1, self.p)

    def div(self, a, b):
        return a * self.inv(b) % self.p

    def is_zero(self, a) -> bool:
        return a % self.p == 0

    def to_string(self, a) -> str:
        return str(a)

    def __str__(self) -> str:
        return f"F{self.p}"


@dataclass(frozen=True)
class RationalField:
    @property
    def zero(self):
        return Fraction(0)

    @property
    def one(self):
        return Fraction(1)

    @property
    def characteristic(self) -> int:
        return 0

    def __call__(self, x) -> Fraction:
        return Fraction(x)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return 1 / Fraction(a)

    def div(self, a, b):
        return Fraction(a) / b

    def is_zero(self, a) -> bool:
        return a == 0

    def to_string(self, a) -> str:
        return str(a)

    def __str__(self) -> str:
        return "Q"


@lru_cache(maxsize=None)
def _power_table(n: int) -> tuple[tuple[Fraction, ...], ...]:
    """Reductions of x^k modulo Phi_n for 0 <= k < n."""
    phi = cyclotomic_coefficients(n)
    deg = len(phi) - 1
    rows = []
    cur = [Fraction(0)] * deg
    cur[0] = Fraction(1)
    for _ in range(n):
        rows.append(tuple(cur))
        # multiply by x and reduce with the monic relation x^deg = -sum phi_i x^i
        top = cur[-1]
        cur = [Fraction(0)] + cur[:-1]
        if top:
            cur = [c - top * phi[i] for i, c in enumerate(cur)]
    return tuple(rows)


@dataclass(frozen=True)
class CyclotomicNumber:
    """An element of Q(zeta_N) stored as coefficients of 1, zeta, ..., zeta^(phi(N)-1)."""

    N: int
    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.coeffs) != euler_phi(self.N):
            raise ValueError("coefficient vector must have length phi(N)")

    @classmethod
    def from_int(cls, N: int, c) -> "CyclotomicNumber":
        v = [Fraction(0)] * euler_phi(N)
        v[0] = Fraction(c)
        return cls(N, tuple(v))

    @classmethod
    def zeta(cls, N: int, k: int = 1) -> "CyclotomicNumber":
        return cls(N, _power_table(N)[k % N])

    @classmethod
    def from_exponent_counts(cls, N: int, counts) -> "CyclotomicNumber":
        """Sum of c_k * zeta^k for a mapping or sequence of integer counts c_k."""
        items = counts.items() if hasattr(counts, "items") else enumerate(counts)
        table = _power_table(N)
        acc = [Fraction(0)] * euler_phi(N)
        for k, c in items:
            if c:
                row = table[k % N]
                for i, r in enumerate(row):
                    if r:
                        acc[i] += c * r
        return cls(N, tuple(acc))

    def _check(self, other) -> "CyclotomicNumber":
        if not isinstance(other, CyclotomicNumber):
            return CyclotomicNumber.from_int(self.N, other)
        if other.N != self.N:
            raise FieldMismatch(f"Q(zeta_{self.N}) vs Q(zeta_{other.N})")
        return other

    def __add__(self, other):
        other = self._check(other)
        return CyclotomicNumber(self.N, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return CyclotomicNumber(self.N, tuple(-a for a in self.coeffs))

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return self._check(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return CyclotomicNumber(self.N, tuple(a * other for a in self.coeffs))
        other = self._check(other)
        prod = _upoly_mul(list(self.coeffs), list(other.coeffs))
        return CyclotomicNumber(self.N, _reduce_mod_phi(self.N, prod))

    __rmul__ = __mul__

    def inverse(self) -> "CyclotomicNumber":
        a = _trim(list(self.coeffs))
        if not a:
            raise ZeroDivisionError("inverse of zero")
        m = [Fraction(c) for c in cyclotomic_coefficients(self.N)]
        # extended Euclid: track s with s*a = r (mod m)
        r0, r1 = m, a
        s0, s1 = [], [Fraction(1)]
        while len(r1) > 1:
            q, r = _upoly_divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, _upoly_sub(s0, _upoly_mul(q, s1))
        c = r1[0]
        inv = [x / c for x in s1]
        return CyclotomicNumber(self.N, _reduce_mod_phi(self.N, inv))

    def __truediv__(self, other):
        other = self._check(other)
        return self * other.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = CyclotomicNumber.from_int(self.N, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = CyclotomicNumber.from_int(self.N, other)
        if not isinstance(other, CyclotomicNumber):
            return NotImplemented
        return self.N == other.N and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.N, self.coeffs))

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def rational_value(self) -> Fraction | None:
        """The value as a rational number, or None when it is irrational."""
        if any(self.coeffs[1:]):
            return None
        return self.coeffs[0]

    def __repr__(self):
        terms = [f"{c}*z^{k}" for k, c in enumerate(self.coeffs) if c]
        return f"CyclotomicNumber({self.N}, {' + '.join(terms) or '0'})"


def _upoly_sub(a, b):
    n = max(len(a), len(b))
    out = [Fraction(0)] * n
    for i, x in enumerate(a):
        out[i] += x
    for i, x in enumerate(b):
        out[i] -= x
    return _trim(out)


def _reduce_mod_phi(N: int, c: Sequence[Fraction]) -> tuple[Fraction, ...]:
    phi = cyclotomic_coefficients(N)
    deg = len(phi) - 1
    c = list(c) + [Fraction(0)] * max(0, deg - len(c))
    for k in range(len(c) - 1, deg - 1, -1):
        top = c[k]
        if top:
            c[k] = Fraction(0)
            for i in range(deg):
                if phi[i]:
                    c[k - deg + i] -= top * phi[i]
    return tuple(Fraction(x) for x in c[:deg])


@dataclass(frozen=True)
class CyclotomicField:
    N: int

    def __post_init__(self):
        if self.N < 1:
            raise ValueError("N must be positive")

    @property
    def degree(self) -> int:
        return euler_phi(self.N)

    @property
    def zero(self):
        return CyclotomicNumber.from_int(self.N, 0)

    @property
    def one(self):
        return CyclotomicNumber.from_int(self.N, 1)

    @property
    def characteristic(self) -> int:
        return 0

    def zeta(self, k: int = 1) -> CyclotomicNumber:
        return CyclotomicNumber.zeta(self.N, k)

    def __call__(self, x) -> CyclotomicNumber:
        if isinstance(x, CyclotomicNumber):
            if x.N != self.N:
                raise FieldMismatch(f"element of Q(zeta_{x.N}) in Q(zeta_{self.N})")
            return x
        return CyclotomicNumber.from_int(self.N, x)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def inv(self, a):
        return a.inverse()

    def div(self, a, b):
        return a / b

    def is_zero(self, a) -> bool:
        return a.is_zero()

    def to_string(self, a) -> str:
        return repr(a)

    def __str__(self) -> str:
        return f"Q(zeta_{self.N})"


Field = PrimeField | RationalField | CyclotomicField


def parse_field(text: str) -> Field:
    """Parse ``Q``, ``F<p>`` or ``Qzeta<N>`` into a field descriptor."""
    text = text.strip()
    if text == "Q":
        return RationalField()
    if text.startswith("F") and text[1:].isdigit():
        if not is_prime(int(text[1:])):
            raise ParseError(f"F{text[1:]}: characteristic must be prime")
        return PrimeField(int(text[1:]))
    if text.startswith("Qzeta") and text[5:].isdigit() and int(text[5:]) >= 1:
        return CyclotomicField(int(text[5:]))
    raise ParseError(f"unknown field {text!r}")


def solve_linear_system(matrix, rhs, field: Field | None = None) -> list:
    """Solve ``matrix @ x = rhs`` exactly by Gaussian elimination.

    Works over any of the field descriptors; with ``field=None`` the entries are
    treated as rationals.  Raises :class:`SingularMatrix` for rank-deficient input.
    """
    field = field or RationalField()
    n = len(matrix)
    if any(len(row) != n for row in matrix) or len(rhs) != n:
        raise ValueError("matrix must be square and match rhs")
    aug = [[field(x) for x in row] + [field(b)] for row, b in zip(matrix, rhs)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if not field.is_zero(aug[r][col])), None)
        if pivot is None:
            raise SingularMatrix(f"no pivot in column {col}")
        aug[col], aug[pivot] = aug[pivot], aug[col]
        inv = field.inv(aug[col][col])
        row = [field.mul(inv, x) for x in aug[col]]
        aug[col] = row
        for r in range(n):
            if r != col and not field.is_zero(aug[r][col]):
                f = aug[r][col]
                aug[r] = [field.sub(x, field.mul(f, y)) for x, y in zip(aug[r], row)]
    return [aug[r][n] for r in range(n)]
