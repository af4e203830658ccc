"""Exact arithmetic over F_p: fields, monomials, term orders, sparse polynomials.

Monomials are exponent tuples, one entry per ring variable. A polynomial is a
map from monomials to nonzero residues in [0, p); two equal polynomials always
have equal maps, so equality and hashing are structural.
"""

import logging
import re
from dataclasses import dataclass, replace
from functools import cached_property
from typing import Callable, Dict, Iterable, List, NamedTuple, Tuple, Union

from config import DEFAULT_CAPS, MAX_EXPONENT, ResourceCaps
from errors import (
    DimensionMismatchError,
    ExponentOverflowError,
    FieldDivisionError,
    NotPrimeError,
    PolynomialSyntaxError,
    RingMismatchError,
    UnknownVariableError,
    ValidationError,
)

logger = logging.getLogger(__name__)

Monomial = Tuple[int, ...]

MAX_PRIME = 2**31 - 1
MAX_VARIABLES = 64

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
_NAME_PATTERN = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for every n below 3.1e23"""
    if n < 2:
        return False
    for small in _SMALL_PRIMES:
        if n % small == 0:
            return n == small
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _SMALL_PRIMES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def field_inv(a: int, p: int) -> int:
    """Inverse of a modulo p"""
    a %= p
    if a == 0:
        raise FieldDivisionError(f"0 has no inverse in F_{p}")
    return pow(a, -1, p)


def power_exponent(q: int, p: int) -> int:
    """Return e with q = p^e, or raise ValidationError"""
    if q < 1:
        raise ValidationError(f"{q} is not a power of {p}")
    e = 0
    while q % p == 0:
        q //= p
        e += 1
    if q != 1:
        raise ValidationError(f"{q * p**e} is not a power of {p}")
    return e


@dataclass(frozen=True)
class PrimeField:
    p: int

    def __post_init__(self):
        if not isinstance(self.p, int) or not 2 <= self.p <= MAX_PRIME or not is_prime(self.p):
            raise NotPrimeError(f"characteristic must be a prime in [2, 2^31-1], got {self.p}")

    def __call__(self, a: int) -> int:
        return a % self.p

    def inv(self, a: int) -> int:
        return field_inv(a, self.p)

    def __str__(self):
        return f"F_{self.p}"


# Term orders

def _grevlex_key(m: Monomial) -> tuple:
    return (sum(m),) + tuple(-e for e in reversed(m))


def _lex_key(m: Monomial) -> tuple:
    return m


@dataclass(frozen=True)
class TermOrder:
    """lex, graded reverse lex, or a block order eliminating the first `block` variables.

    The elimination order compares the first block by grevlex and breaks ties
    with grevlex on the remaining variables.
    """

    kind: str = "grevlex"
    block: int = 0

    def __post_init__(self):
        if self.kind not in ("lex", "grevlex", "elim"):
            raise ValidationError(f"unknown term order {self.kind!r}")
        if self.kind == "elim" and self.block < 1:
            raise ValidationError("an elimination order needs a block of at least one variable")

    @cached_property
    def key(self) -> Callable[[Monomial], tuple]:
        """Sort key: larger key means larger monomial"""
        if self.kind == "lex":
            return _lex_key
        if self.kind == "grevlex":
            return _grevlex_key
        k = self.block

        def _elim_key(m):
            return _grevlex_key(m[:k]) + _grevlex_key(m[k:])

        return _elim_key

    def __str__(self):
        return f"elim({self.block})" if self.kind == "elim" else self.kind


GREVLEX = TermOrder("grevlex")
LEX = TermOrder("lex")


def elimination_order(block: int) -> TermOrder:
    return TermOrder("elim", block)


def order_from_name(name: str) -> TermOrder:
    if name not in ("grevlex", "lex"):
        raise ValidationError(f"unknown term order {name!r}")
    return TermOrder(name)


def compare(m1: Monomial, m2: Monomial, order: TermOrder = GREVLEX) -> int:
    """Return -1, 0 or 1 as m1 is smaller than, equal to or greater than m2"""
    if len(m1) != len(m2):
        raise DimensionMismatchError(f"monomials of length {len(m1)} and {len(m2)}")
    k1, k2 = order.key(m1), order.key(m2)
    return (k1 > k2) - (k1 < k2)


def monomial_divides(a: Monomial, b: Monomial) -> bool:
    return all(x <= y for x, y in zip(a, b))


def monomial_lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(max(x, y) for x, y in zip(a, b))


def monomial_quotient(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x - y for x, y in zip(a, b))


def monomial_product(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


# Rings and polynomials

@dataclass(frozen=True)
class PolynomialRing:
    """The ambient ring S = F_p[x_1, ..., x_n]"""

    field: PrimeField
    variables: Tuple[str, ...]

    def __post_init__(self):
        if not 1 <= len(self.variables) <= MAX_VARIABLES:
            raise ValidationError(f"between 1 and {MAX_VARIABLES} variables are supported")
        if len(set(self.variables)) != len(self.variables):
            raise ValidationError(f"duplicate variable names in {self.variables}")
        for name in self.variables:
            if not _NAME_PATTERN.match(name):
                raise ValidationError(f"invalid variable name {name!r}")

    @classmethod
    def create(cls, p: int, variables: Iterable[str]) -> "PolynomialRing":
        return cls(PrimeField(p), tuple(variables))

    @property
    def p(self) -> int:
        return self.field.p

    @property
    def nvars(self) -> int:
        return len(self.variables)

    def variable_index(self, name: str) -> int:
        try:
            return self.variables.index(name)
        except ValueError:
            raise UnknownVariableError(name) from None

    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    def one(self) -> "Polynomial":
        return self.constant(1)

    def constant(self, c: int) -> "Polynomial":
        c %= self.p
        return Polynomial(self, {(0,) * self.nvars: c} if c else {})

    def monomial(self, exponents: Iterable[int], coeff: int = 1) -> "Polynomial":
        exponents = tuple(exponents)
        if len(exponents) != self.nvars:
            raise DimensionMismatchError(f"expected {self.nvars} exponents, got {len(exponents)}")
        if any(e < 0 for e in exponents):
            raise ValidationError("exponents must be non-negative")
        coeff %= self.p
        return Polynomial(self, {exponents: coeff} if coeff else {})

    def gen(self, which: Union[int, str]) -> "Polynomial":
        index = self.variable_index(which) if isinstance(which, str) else which
        exponents = [0] * self.nvars
        exponents[index] = 1
        return self.monomial(exponents)

    @property
    def gens(self) -> Tuple["Polynomial", ...]:
        return tuple(self.gen(i) for i in range(self.nvars))

    def from_terms(self, terms: Dict[Monomial, int]) -> "Polynomial":
        p = self.p
        cleaned = {}
        for m, c in terms.items():
            if len(m) != self.nvars:
                raise DimensionMismatchError(f"expected {self.nvars} exponents, got {len(m)}")
            c %= p
            if c:
                cleaned[tuple(m)] = c
        return Polynomial(self, cleaned)

    def parse(self, text: str) -> "Polynomial":
        return parse_polynomial(text, self)

    def extended(self, names: Iterable[str]) -> "PolynomialRing":
        """A ring with `names` prepended to the variable list"""
        return PolynomialRing(self.field, tuple(names) + self.variables)

    def __str__(self):
        return f"F_{self.p}[{', '.join(self.variables)}]"


class Polynomial:
    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: PolynomialRing, terms: Dict[Monomial, int]):
        # terms must already be reduced mod p with no zero coefficients
        self.ring = ring
        self.terms = terms
        self._hash = None

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.ring != self.ring:
                raise RingMismatchError(f"{self.ring} vs {other.ring}")
            return other
        if isinstance(other, int):
            return self.ring.constant(other)
        return NotImplemented

    # arithmetic

    def _combine(self, other: "Polynomial", sign: int) -> "Polynomial":
        p = self.ring.p
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = (out.get(m, 0) + sign * c) % p
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return Polynomial(self.ring, out)

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self._combine(other, 1)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self._combine(other, -1)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other._combine(self, -1)

    def __neg__(self):
        p = self.ring.p
        return Polynomial(self.ring, {m: p - c for m, c in self.terms.items()})

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not self.terms or not other.terms:
            return self.ring.zero()
        p = self.ring.p
        a, b = self.terms, other.terms
        if len(a) < len(b):
            a, b = b, a
        out: Dict[Monomial, int] = {}
        for mb, cb in b.items():
            for ma, ca in a.items():
                m = tuple(x + y for x, y in zip(ma, mb))
                out[m] = (out.get(m, 0) + ca * cb) % p
        return Polynomial(self.ring, {m: c for m, c in out.items() if c})

    __rmul__ = __mul__

    def scale(self, c: int) -> "Polynomial":
        p = self.ring.p
        c %= p
        if not c:
            return self.ring.zero()
        return Polynomial(self.ring, {m: v * c % p for m, v in self.terms.items()})

    def mul_term(self, monomial: Monomial, c: int = 1) -> "Polynomial":
        p = self.ring.p
        c %= p
        if not c:
            return self.ring.zero()
        return Polynomial(
            self.ring,
            {tuple(x + y for x, y in zip(m, monomial)): v * c % p for m, v in self.terms.items()},
        )

    def _check_exponent(self, n: int):
        if self.max_exponent() * n > MAX_EXPONENT:
            raise ExponentOverflowError(
                f"raising {self} to the power {n} exceeds the exponent limit {MAX_EXPONENT}"
            )

    def __pow__(self, n: int) -> "Polynomial":
        if not isinstance(n, int) or n < 0:
            raise ValueError(f"exponent must be a non-negative integer, got {n!r}")
        if n == 0:
            return self.ring.one()
        if not self.terms:
            return self
        self._check_exponent(n)
        p = self.ring.p
        if len(self.terms) == 1:
            (m, c), = self.terms.items()
            return Polynomial(self.ring, {tuple(e * n for e in m): pow(c, n, p)})
        # split off the largest power of p and apply it term-wise
        frob = 1
        while n % p == 0:
            n //= p
            frob *= p
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result.frobenius(frob) if frob > 1 else result

    def frobenius(self, q: int) -> "Polynomial":
        """Term-wise q-th power, equal to self**q when q is a power of p"""
        power_exponent(q, self.ring.p)
        if q == 1:
            return self
        self._check_exponent(q)
        # c^q = c for c in F_p
        return Polynomial(self.ring, {tuple(e * q for e in m): c for m, c in self.terms.items()})

    # inspection

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and not any(next(iter(self.terms))))

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def total_degree(self) -> int:
        return max((sum(m) for m in self.terms), default=-1)

    def max_exponent(self) -> int:
        return max((max(m) for m in self.terms), default=0)

    def is_homogeneous(self) -> bool:
        return len({sum(m) for m in self.terms}) <= 1

    def leading_monomial(self, order: TermOrder = GREVLEX) -> Monomial:
        if not self.terms:
            raise ValidationError("the zero polynomial has no leading monomial")
        return max(self.terms, key=order.key)

    def leading_coefficient(self, order: TermOrder = GREVLEX) -> int:
        return self.terms[self.leading_monomial(order)]

    def monic(self, order: TermOrder = GREVLEX) -> "Polynomial":
        if not self.terms:
            return self
        return self.scale(field_inv(self.leading_coefficient(order), self.ring.p))

    def sorted_terms(self, order: TermOrder = GREVLEX) -> List[Tuple[Monomial, int]]:
        """Terms in descending order"""
        key = order.key
        return sorted(self.terms.items(), key=lambda item: key(item[0]), reverse=True)

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.ring.constant(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring.variables, frozenset(self.terms.items())))
        return self._hash

    def __str__(self):
        if not self.terms:
            return "0"
        names = self.ring.variables
        pieces = []
        for m, c in self.sorted_terms(GREVLEX):
            mono = "*".join(
                name if e == 1 else f"{name}^{e}" for name, e in zip(names, m) if e
            )
            if not mono:
                pieces.append(str(c))
            elif c == 1:
                pieces.append(mono)
            else:
                pieces.append(f"{c}*{mono}")
        return " + ".join(pieces)

    def __repr__(self):
        return f"Polynomial({self}, {self.ring})"


@dataclass(frozen=True)
class RingPresentation:
    """R = F_p[x]/P, taken local at the ideal of all variables.

    Caps and the working term order ride along so that every ideal computed
    over this ring inherits them. Coefficients are in F_p, so alpha(R) = 0.
    """

    ambient: PolynomialRing
    relations: Tuple[Polynomial, ...] = ()
    label: str = ""
    caps: ResourceCaps = DEFAULT_CAPS
    order: TermOrder = GREVLEX
    alpha: int = 0

    def __post_init__(self):
        for f in self.relations:
            if f.ring != self.ambient:
                raise RingMismatchError(f"relation {f} is not in {self.ambient}")
        object.__setattr__(self, "relations", tuple(f for f in self.relations if f))

    @classmethod
    def from_strings(cls, p: int, variables: Iterable[str], relations: Iterable[str] = (),
                     label: str = "") -> "RingPresentation":
        ambient = PolynomialRing.create(p, variables)
        return cls(ambient, tuple(parse_polynomial(text, ambient) for text in relations), label)

    @property
    def p(self) -> int:
        return self.ambient.p

    @property
    def variables(self) -> Tuple[str, ...]:
        return self.ambient.variables

    @property
    def nvars(self) -> int:
        return self.ambient.nvars

    def parse(self, text: str) -> Polynomial:
        return parse_polynomial(text, self.ambient)

    def with_settings(self, caps: ResourceCaps = None, order: TermOrder = None) -> "RingPresentation":
        return replace(self, caps=caps or self.caps, order=order or self.order)

    def __str__(self):
        if not self.relations:
            return str(self.ambient)
        return f"{self.ambient}/({', '.join(str(f) for f in self.relations)})"


# Parser

class _Token(NamedTuple):
    kind: str  # "num", "name", "op" or "end"
    text: str
    pos: int


_TOKEN_PATTERN = re.compile(r"(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(\*\*|[-+*^()]))")


def _tokenize(text: str) -> List[_Token]:
    tokens = []
    pos = 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        match = _TOKEN_PATTERN.match(text, pos)
        if not match:
            raise PolynomialSyntaxError(f"unexpected character {text[pos]!r}", position=pos)
        number, name, op = match.groups()
        start = pos
        if number:
            tokens.append(_Token("num", number, start))
        elif name:
            tokens.append(_Token("name", name, start))
        else:
            tokens.append(_Token("op", "^" if op == "**" else op, start))
        pos = match.end()
    tokens.append(_Token("end", "", len(text)))
    return tokens


class _PolynomialParser:
    """Recursive descent over: expr := term (('+'|'-') term)*,
    term := unary ('*' unary)*, unary := ('-'|'+') unary | power,
    power := atom ('^' integer)?, atom := integer | name | '(' expr ')'
    """

    def __init__(self, text: str, ring: PolynomialRing):
        self.ring = ring
        self.tokens = _tokenize(text)
        self.index = 0

    def peek(self) -> _Token:
        return self.tokens[self.index]

    def advance(self) -> _Token:
        token = self.tokens[self.index]
        if token.kind != "end":
            self.index += 1
        return token

    def at_op(self, *ops) -> bool:
        token = self.peek()
        return token.kind == "op" and token.text in ops

    def parse(self) -> Polynomial:
        result = self.expression()
        token = self.peek()
        if token.kind != "end":
            raise PolynomialSyntaxError(f"unexpected {token.text!r}", position=token.pos)
        return result

    def expression(self) -> Polynomial:
        left = self.term()
        while self.at_op("+", "-"):
            op = self.advance()
            right = self.term()
            left = left + right if op.text == "+" else left - right
        return left

    def term(self) -> Polynomial:
        left = self.unary()
        while self.at_op("*"):
            self.advance()
            left = left * self.unary()
        return left

    def unary(self) -> Polynomial:
        if self.at_op("-"):
            self.advance()
            return -self.unary()
        if self.at_op("+"):
            self.advance()
            return self.unary()
        return self.power()

    def power(self) -> Polynomial:
        base = self.atom()
        if self.at_op("^"):
            self.advance()
            token = self.advance()
            if token.kind != "num":
                raise PolynomialSyntaxError(
                    "exponent must be a non-negative integer literal", position=token.pos
                )
            exponent = int(token.text)
            if exponent > MAX_EXPONENT:
                raise ExponentOverflowError(
                    f"exponent {exponent} at position {token.pos} exceeds {MAX_EXPONENT}"
                )
            return base ** exponent
        return base

    def atom(self) -> Polynomial:
        token = self.advance()
        if token.kind == "num":
            return self.ring.constant(int(token.text))
        if token.kind == "name":
            if token.text not in self.ring.variables:
                raise UnknownVariableError(token.text, position=token.pos)
            return self.ring.gen(token.text)
        if token.kind == "op" and token.text == "(":
            inner = self.expression()
            closing = self.advance()
            if closing.kind != "op" or closing.text != ")":
                raise PolynomialSyntaxError("expected ')'", position=closing.pos)
            return inner
        if token.kind == "end":
            raise PolynomialSyntaxError("unexpected end of input", position=token.pos)
        raise PolynomialSyntaxError(f"unexpected {token.text!r}", position=token.pos)


def parse_polynomial(text: str, ring: Union[PolynomialRing, RingPresentation]) -> Polynomial:
    """Parse integers, variables, + - * ^ and parentheses; coefficients reduce mod p"""
    ambient = ring.ambient if isinstance(ring, RingPresentation) else ring
    return _PolynomialParser(text, ambient).parse()


def parse_polynomial_list(text: str, ring: Union[PolynomialRing, RingPresentation]) -> List[Polynomial]:
    """Comma-separated polynomial strings; parentheses may not span commas"""
    pieces = [piece for piece in text.split(",") if piece.strip()]
    return [parse_polynomial(piece, ring) for piece in pieces]
