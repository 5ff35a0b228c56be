"""Sparse multivariate polynomials with pluggable monomial orders."""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .arith import Field, PrimeField, RationalField, parse_field
from .errors import ParseError, RingMismatch

Monomial = tuple[int, ...]

MINUS_INFINITY = float("-inf")


@dataclass(frozen=True)
class MonomialOrder:
    """``lex``, ``grevlex`` or ``elim`` (block order, first ``block`` variables dominate)."""

    kind: str = "grevlex"
    block: int = 0

    def __post_init__(self):
        if self.kind not in ("lex", "grevlex", "elim"):
            raise ValueError(f"unknown monomial order {self.kind!r}")
        if self.kind == "elim" and self.block < 1:
            raise ValueError("elimination order needs a positive block size")

    def key(self, exp: Monomial) -> tuple:
        if self.kind == "lex":
            return exp
        if self.kind == "grevlex":
            return _grevlex_key(exp)
        k = self.block
        return _grevlex_key(exp[:k]) + _grevlex_key(exp[k:])

    def __str__(self) -> str:
        return f"elim:{self.block}" if self.kind == "elim" else self.kind


def _grevlex_key(exp: Sequence[int]) -> tuple:
    return (sum(exp),) + tuple(-e for e in reversed(exp))


LEX = MonomialOrder("lex")
GREVLEX = MonomialOrder("grevlex")


def elimination(block: int) -> MonomialOrder:
    return MonomialOrder("elim", block)


def parse_order(text: str) -> MonomialOrder:
    if text in ("lex", "grevlex"):
        return MonomialOrder(text)
    m = re.fullmatch(r"elim:(\d+)", text)
    if m:
        return elimination(int(m.group(1)))
    raise ParseError(f"unknown monomial order {text!r}")


@dataclass(frozen=True)
class Ring:
    """Polynomial ring descriptor: coefficient field, variable names, default order."""

    field: Field
    variables: tuple[str, ...]
    order: MonomialOrder = GREVLEX

    def __post_init__(self):
        if len(set(self.variables)) != len(self.variables):
            raise ValueError("duplicate variable names")

    @property
    def nvars(self) -> int:
        return len(self.variables)

    def __str__(self) -> str:
        return f"{self.field}[{','.join(self.variables)}]"

    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    def one(self) -> "Polynomial":
        return self.constant(1)

    def constant(self, c) -> "Polynomial":
        return Polynomial(self, {(0,) * self.nvars: c})

    def gens(self) -> list["Polynomial"]:
        return [self.var(i) for i in range(self.nvars)]

    def var(self, i: int) -> "Polynomial":
        exp = [0] * self.nvars
        exp[i] = 1
        return Polynomial(self, {tuple(exp): 1})

    def monomial(self, exp: Monomial, c=1) -> "Polynomial":
        return Polynomial(self, {tuple(exp): c})

    def with_order(self, order: MonomialOrder) -> "Ring":
        return Ring(self.field, self.variables, order)

    def extend(self, names: Sequence[str], front: bool = True) -> "Ring":
        """A new ring with extra variables; use :func:`embed` to move polynomials over."""
        clash = set(names) & set(self.variables)
        if clash:
            raise ValueError(f"variables already present: {sorted(clash)}")
        names = tuple(names)
        variables = names + self.variables if front else self.variables + names
        return Ring(self.field, variables, self.order)

    def parse(self, text: str) -> "Polynomial":
        return parse_polynomial(text, self)


def parse_ring(text: str) -> Ring:
    """Parse ``<Field>[v1,...,vk]`` such as ``F5[U,V,W,X,Y]`` or ``Q[x,y]``."""
    m = re.fullmatch(r"\s*([A-Za-z0-9]+)\s*\[([^\]]*)\]\s*", text)
    if not m:
        raise ParseError(f"bad ring syntax {text!r}")
    field = parse_field(m.group(1))
    names = tuple(v.strip() for v in m.group(2).split(",") if v.strip())
    for v in names:
        if not re.fullmatch(r"[A-Za-z_][A-Za-z_0-9]*", v):
            raise ParseError(f"bad variable name {v!r}")
    return Ring(field, names)


def divides(a: Monomial, b: Monomial) -> bool:
    return all(x <= y for x, y in zip(a, b))


def mono_lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(max(x, y) for x, y in zip(a, b))


def mono_div(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x - y for x, y in zip(a, b))


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


class Polynomial:
    """Immutable sparse polynomial.

    ``terms`` lists ``(exponent tuple, coefficient)`` pairs strictly descending
    in the ring's default order; no zero coefficients are stored.
    """

    __slots__ = ("ring", "_d", "_terms", "_hash")

    def __init__(self, ring: Ring, terms: Mapping[Monomial, object] | Iterable = ()):
        F = ring.field
        d: dict[Monomial, object] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        n = ring.nvars
        for exp, c in items:
            exp = tuple(exp)
            if len(exp) != n:
                raise RingMismatch(f"monomial {exp} has wrong length for {ring}")
            c = F(c)
            if exp in d:
                c = F.add(d[exp], c)
            if F.is_zero(c):
                d.pop(exp, None)
            else:
                d[exp] = c
        self.ring = ring
        self._d = d
        self._terms = None
        self._hash = None

    @classmethod
    def _raw(cls, ring: Ring, d: dict) -> "Polynomial":
        obj = cls.__new__(cls)
        obj.ring = ring
        obj._d = d
        obj._terms = None
        obj._hash = None
        return obj

    # -- access --

    @property
    def terms(self) -> tuple[tuple[Monomial, object], ...]:
        if self._terms is None:
            key = self.ring.order.key
            self._terms = tuple(sorted(self._d.items(), key=lambda t: key(t[0]), reverse=True))
        return self._terms

    def terms_in(self, order: MonomialOrder) -> list[tuple[Monomial, object]]:
        return sorted(self._d.items(), key=lambda t: order.key(t[0]), reverse=True)

    def as_dict(self) -> dict[Monomial, object]:
        return dict(self._d)

    def coefficient(self, exp: Monomial):
        return self._d.get(tuple(exp), self.ring.field.zero)

    def __len__(self) -> int:
        return len(self._d)

    def is_zero(self) -> bool:
        return not self._d

    def __bool__(self) -> bool:
        return bool(self._d)

    def lead_monomial(self, order: MonomialOrder | None = None) -> Monomial:
        if not self._d:
            raise ValueError("zero polynomial has no leading monomial")
        order = order or self.ring.order
        return max(self._d, key=order.key)

    def lead_coefficient(self, order: MonomialOrder | None = None):
        return self._d[self.lead_monomial(order)]

    def total_degree(self):
        """Maximum total degree; ``MINUS_INFINITY`` for the zero polynomial."""
        if not self._d:
            return MINUS_INFINITY
        return max(sum(e) for e in self._d)

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self._d}) <= 1

    def is_monomial(self) -> bool:
        return len(self._d) == 1

    def is_constant(self) -> bool:
        return all(not any(e) for e in self._d)

    def is_linear_form(self) -> bool:
        return bool(self._d) and all(sum(e) == 1 for e in self._d)

    def support_variables(self) -> set[int]:
        return {i for e in self._d for i, x in enumerate(e) if x}

    # -- arithmetic --

    def _check(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.ring != self.ring:
                raise RingMismatch(f"{self.ring} vs {other.ring}")
            return other
        return self.ring.constant(other)

    def __add__(self, other):
        other = self._check(other)
        F = self.ring.field
        d = dict(self._d)
        for e, c in other._d.items():
            if e in d:
                s = F.add(d[e], c)
                if F.is_zero(s):
                    del d[e]
                else:
                    d[e] = s
            else:
                d[e] = c
        return Polynomial._raw(self.ring, d)

    __radd__ = __add__

    def __neg__(self):
        F = self.ring.field
        return Polynomial._raw(self.ring, {e: F.neg(c) for e, c in self._d.items()})

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return self._check(other) - self

    def __mul__(self, other):
        other = self._check(other)
        F = self.ring.field
        d: dict = {}
        for e1, c1 in self._d.items():
            for e2, c2 in other._d.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                c = F.mul(c1, c2)
                if e in d:
                    s = F.add(d[e], c)
                    if F.is_zero(s):
                        del d[e]
                    else:
                        d[e] = s
                else:
                    d[e] = c
        return Polynomial._raw(self.ring, d)

    __rmul__ = __mul__

    def scale(self, c) -> "Polynomial":
        F = self.ring.field
        c = F(c)
        if F.is_zero(c):
            return self.ring.zero()
        return Polynomial._raw(self.ring, {e: F.mul(c, v) for e, v in self._d.items()})

    def mul_term(self, exp: Monomial, c) -> "Polynomial":
        F = self.ring.field
        if F.is_zero(c):
            return self.ring.zero()
        return Polynomial._raw(
            self.ring, {mono_mul(e, exp): F.mul(c, v) for e, v in self._d.items()}
        )

    def __pow__(self, k: int) -> "Polynomial":
        if k < 0:
            raise ValueError("negative power")
        result = self.ring.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def monic(self, order: MonomialOrder | None = None) -> "Polynomial":
        if not self._d:
            return self
        return self.scale(self.ring.field.inv(self.lead_coefficient(order)))

    def __eq__(self, other) -> bool:
        if isinstance(other, Polynomial):
            return self.ring == other.ring and self._d == other._d
        if isinstance(other, (int, Fraction)):
            return self == self.ring.constant(other)
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self._d.items())))
        return self._hash

    def evaluate(self, point: Sequence) -> object:
        F = self.ring.field
        acc = F.zero
        for e, c in self._d.items():
            v = c
            for x, k in zip(point, e):
                if k:
                    v = F.mul(v, _fpow(F, F(x), k))
            acc = F.add(acc, v)
        return acc

    def to_string(self) -> str:
        return format_polynomial(self)

    def __str__(self) -> str:
        return format_polynomial(self)

    def __repr__(self) -> str:
        return f"Polynomial({self.ring}, {format_polynomial(self)!r})"


def _fpow(F, x, k):
    r = F.one
    for _ in range(k):
        r = F.mul(r, x)
    return r


def embed(f: Polynomial, target: Ring, positions: Sequence[int] | None = None) -> Polynomial:
    """Map ``f`` into ``target`` sending variable i to ``positions[i]``.

    By default variables are matched by name.
    """
    if f.ring.field != target.field:
        raise RingMismatch("embedding across coefficient fields")
    if positions is None:
        idx = {v: i for i, v in enumerate(target.variables)}
        try:
            positions = [idx[v] for v in f.ring.variables]
        except KeyError as exc:
            raise RingMismatch(f"variable {exc} missing from {target}") from None
    n = target.nvars
    d = {}
    for e, c in f._d.items():
        new = [0] * n
        for i, k in enumerate(e):
            new[positions[i]] += k
        d[tuple(new)] = c
    return Polynomial._raw(target, d)


def reduce(f: Polynomial, G: Sequence[Polynomial], order: MonomialOrder | None = None
           ) -> tuple[Polynomial, bool]:
    """Multivariate division of ``f`` by ``G``.

    Returns ``(remainder, expressed)`` where no term of the remainder is divisible
    by a leading monomial of ``G`` and ``expressed`` says the remainder is zero.
    """
    ring = f.ring
    for g in G:
        if g.ring != ring:
            raise RingMismatch(f"{g.ring} vs {ring}")
        if g.is_zero():
            raise ValueError("cannot divide by the zero polynomial")
    order = order or ring.order
    leads = [(g.lead_monomial(order), g.lead_coefficient(order), g) for g in G]
    rem = _reduce_dict(ring.field, dict(f._d), leads, order.key)
    r = Polynomial._raw(ring, rem)
    return r, r.is_zero()


def _reduce_dict(F, h: dict, leads, key) -> dict:
    rem = {}
    keys: dict = {}

    def k(e):
        v = keys.get(e)
        if v is None:
            v = keys[e] = key(e)
        return v

    while h:
        m = max(h, key=k)
        c = h[m]
        for lm, lc, g in leads:
            if all(a <= b for a, b in zip(lm, m)):
                q = tuple(b - a for a, b in zip(lm, m))
                coef = F.div(c, lc)
                for e, v in g._d.items():
                    e2 = tuple(x + y for x, y in zip(e, q))
                    s = F.sub(h.get(e2, F.zero), F.mul(coef, v))
                    if F.is_zero(s):
                        h.pop(e2, None)
                    else:
                        h[e2] = s
                break
        else:
            rem[m] = h.pop(m)
    return rem


# -- text syntax --

def format_coefficient(F, c) -> tuple[str, bool]:
    """Return (absolute value text, negative?) for a coefficient."""
    if isinstance(F, PrimeField):
        c = int(c) % F.p
        if c > F.p // 2:
            return str(F.p - c), True
        return str(c), False
    if isinstance(F, RationalField):
        c = Fraction(c)
        return str(abs(c)), c < 0
    return f"({F.to_string(c)})", False


def format_monomial(exp: Monomial, names: Sequence[str]) -> str:
    parts = []
    for name, k in zip(names, exp):
        if k == 1:
            parts.append(name)
        elif k > 1:
            parts.append(f"{name}^{k}")
    return "*".join(parts)


def format_polynomial(f: Polynomial) -> str:
    if f.is_zero():
        return "0"
    F = f.ring.field
    out = []
    for i, (exp, c) in enumerate(f.terms):
        text, neg = format_coefficient(F, c)
        mono = format_monomial(exp, f.ring.variables)
        if mono:
            body = mono if text == "1" else f"{text}*{mono}"
        else:
            body = text
        if i == 0:
            out.append(f"-{body}" if neg else body)
        else:
            out.append(f" - {body}" if neg else f" + {body}")
    return "".join(out)


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(.))")


class _Parser:
    def __init__(self, text: str, ring: Ring):
        self.ring = ring
        self.index = {v: i for i, v in enumerate(ring.variables)}
        self.toks = []
        pos = 0
        text = text.strip()
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if not m or m.end() == pos:
                break
            num, name, sym = m.groups()
            if num is not None:
                self.toks.append(("num", int(num)))
            elif name is not None:
                self.toks.append(("var", name))
            elif sym.strip():
                if sym not in "+-*^/()":
                    raise ParseError(f"unexpected character {sym!r}")
                self.toks.append(("sym", sym))
            pos = m.end()
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def expect(self, sym):
        tok = self.take()
        if tok != ("sym", sym):
            raise ParseError(f"expected {sym!r}, got {tok[1]!r}")

    def parse(self) -> Polynomial:
        if not self.toks:
            raise ParseError("empty polynomial")
        f = self.expr()
        if self.i != len(self.toks):
            raise ParseError(f"trailing input at token {self.peek()[1]!r}")
        return f

    def expr(self) -> Polynomial:
        sign = 1
        if self.peek() in (("sym", "-"), ("sym", "+")):
            sign = -1 if self.take()[1] == "-" else 1
        acc = self.term()
        if sign < 0:
            acc = -acc
        while self.peek() in (("sym", "+"), ("sym", "-")):
            op = self.take()[1]
            t = self.term()
            acc = acc + t if op == "+" else acc - t
        return acc

    def term(self) -> Polynomial:
        acc = self.factor()
        while self.peek() == ("sym", "*"):
            self.take()
            acc = acc * self.factor()
        return acc

    def factor(self) -> Polynomial:
        base = self.base()
        if self.peek() == ("sym", "^"):
            self.take()
            kind, val = self.take()
            if kind != "num":
                raise ParseError("exponent must be a nonnegative integer")
            base = base ** val
        return base

    def base(self) -> Polynomial:
        kind, val = self.take()
        if kind == "num":
            if self.peek() == ("sym", "/"):
                self.take()
                k2, den = self.take()
                if k2 != "num" or den == 0:
                    raise ParseError("bad rational coefficient")
                return self.ring.constant(Fraction(val, den))
            return self.ring.constant(val)
        if kind == "var":
            if val not in self.index:
                raise ParseError(f"unknown variable {val!r} for {self.ring}")
            return self.ring.var(self.index[val])
        if (kind, val) == ("sym", "("):
            f = self.expr()
            self.expect(")")
            return f
        if (kind, val) == ("sym", "-"):
            return -self.factor()
        raise ParseError(f"unexpected token {val!r}")


def parse_polynomial(text: str, ring: Ring) -> Polynomial:
    try:
        return _Parser(text, ring).parse()
    except ZeroDivisionError:
        raise ParseError("coefficient denominator vanishes in the field") from None
