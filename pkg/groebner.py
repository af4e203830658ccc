"""Buchberger's algorithm and the ideal operations built on it.

An ideal of R = S/P is always handled through its preimage in S, i.e. its
generators together with the relations P. One Groebner engine therefore
serves membership, equality, sums, intersections, colons and saturation.
"""

import hashlib
import heapq
import itertools
import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from config import DEFAULT_CAPS, ResourceCaps
from errors import (
    ColonCertificateError,
    ResourceLimitError,
    RingMismatchError,
    ZeroDivisorArgumentError,
)
from polyring import (
    GREVLEX,
    Monomial,
    Polynomial,
    PolynomialRing,
    RingPresentation,
    TermOrder,
    elimination_order,
    field_inv,
    monomial_divides,
    monomial_lcm,
    parse_polynomial,
)

logger = logging.getLogger(__name__)

Terms = Dict[Monomial, int]

AUXILIARY_VARIABLE = "_w"


# Raw term-dictionary kernels

def _negated(key: tuple) -> tuple:
    return tuple(-x for x in key)


def _reduce_terms(terms: Terms, divisors: Sequence[Tuple[Monomial, Terms]], key, p: int) -> Terms:
    """Full remainder of `terms` on division by monic polynomials given as (lead, terms)"""
    f = dict(terms)
    heap = [(_negated(key(m)), m) for m in f]
    heapq.heapify(heap)
    remainder: Terms = {}
    while heap:
        _, m = heapq.heappop(heap)
        c = f.pop(m, None)
        if c is None:
            continue
        for lead, g in divisors:
            if all(a <= b for a, b in zip(lead, m)):
                break
        else:
            remainder[m] = c
            continue
        shift = tuple(b - a for a, b in zip(lead, m))
        for gm, gc in g.items():
            if gm == lead:
                continue
            nm = tuple(x + y for x, y in zip(gm, shift))
            old = f.get(nm)
            v = ((old or 0) - c * gc) % p
            if v:
                if old is None:
                    heapq.heappush(heap, (_negated(key(nm)), nm))
                f[nm] = v
            elif old is not None:
                del f[nm]
    return remainder


def _spoly(lf: Monomial, f: Terms, lg: Monomial, g: Terms, p: int) -> Terms:
    lcm = monomial_lcm(lf, lg)
    sf = tuple(a - b for a, b in zip(lcm, lf))
    sg = tuple(a - b for a, b in zip(lcm, lg))
    out = {tuple(x + y for x, y in zip(m, sf)): c for m, c in f.items()}
    for m, c in g.items():
        nm = tuple(x + y for x, y in zip(m, sg))
        v = (out.get(nm, 0) - c) % p
        if v:
            out[nm] = v
        else:
            out.pop(nm, None)
    return out


def _monic(terms: Terms, lead: Monomial, p: int) -> Terms:
    inv = field_inv(terms[lead], p)
    if inv == 1:
        return terms
    return {m: c * inv % p for m, c in terms.items()}


def _interreduce(basis: List[Tuple[Monomial, Terms]], key, p: int) -> List[Terms]:
    # a divisor of a lead monomial never sorts above it
    ascending = sorted(basis, key=lambda item: key(item[0]))
    minimal: List[Tuple[Monomial, Terms]] = []
    for lead, terms in ascending:
        if any(monomial_divides(other, lead) for other, _ in minimal):
            continue
        minimal.append((lead, terms))
    reduced = []
    for index, (lead, terms) in enumerate(minimal):
        others = minimal[:index] + minimal[index + 1:]
        reduced.append((lead, _reduce_terms(terms, others, key, p)))
    reduced.sort(key=lambda item: key(item[0]), reverse=True)
    return [terms for _, terms in reduced]


def _buchberger(polys: Iterable[Terms], order: TermOrder, p: int, caps: ResourceCaps) -> List[Terms]:
    """Reduced Groebner basis: normal selection, product and chain criteria"""
    key = order.key
    basis: List[Tuple[Monomial, Terms]] = []
    pairs: list = []
    pending = set()

    def add(terms: Terms):
        if len(basis) >= caps.max_basis:
            raise ResourceLimitError(f"Groebner basis exceeds {caps.max_basis} elements")
        degree = max(sum(m) for m in terms)
        if degree > caps.max_degree:
            raise ResourceLimitError(f"Groebner basis element of degree {degree} exceeds {caps.max_degree}")
        lead = max(terms, key=key)
        terms = _monic(terms, lead, p)
        n = len(basis)
        for i, (other, _) in enumerate(basis):
            heapq.heappush(pairs, (key(monomial_lcm(other, lead)), i, n))
            pending.add((i, n))
        basis.append((lead, terms))

    for terms in polys:
        remainder = _reduce_terms(terms, basis, key, p)
        if remainder:
            add(remainder)

    treated = 0
    while pairs:
        _, i, j = heapq.heappop(pairs)
        pending.discard((i, j))
        li, fi = basis[i]
        lj, fj = basis[j]
        lcm = monomial_lcm(li, lj)
        # product criterion
        if all(a == 0 or b == 0 for a, b in zip(li, lj)):
            continue
        # chain criterion
        if any(
            k != i and k != j
            and monomial_divides(lk, lcm)
            and (min(i, k), max(i, k)) not in pending
            and (min(j, k), max(j, k)) not in pending
            for k, (lk, _) in enumerate(basis)
        ):
            continue
        treated += 1
        remainder = _reduce_terms(_spoly(li, fi, lj, fj, p), basis, key, p)
        if remainder:
            add(remainder)

    logger.debug("buchberger(%s): %d elements before reduction, %d pairs reduced",
                 order, len(basis), treated)
    return _interreduce(basis, key, p)


# Groebner bases

@dataclass(frozen=True)
class GroebnerBasis:
    """A reduced Groebner basis: monic elements, sorted by descending lead monomial"""

    ring: PolynomialRing
    order: TermOrder
    elements: Tuple[Polynomial, ...]

    @cached_property
    def _divisors(self) -> List[Tuple[Monomial, Terms]]:
        return [(g.leading_monomial(self.order), g.terms) for g in self.elements]

    def leading_monomials(self) -> List[Monomial]:
        return [lead for lead, _ in self._divisors]

    def reduce(self, f: Polynomial) -> Polynomial:
        if f.ring != self.ring:
            raise RingMismatchError(f"{f.ring} vs {self.ring}")
        return Polynomial(self.ring, _reduce_terms(f.terms, self._divisors, self.order.key, self.ring.p))

    def is_unit(self) -> bool:
        return len(self.elements) == 1 and self.elements[0].is_constant()

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)


def groebner_basis(polys: Iterable[Polynomial], ring: PolynomialRing, order: TermOrder = GREVLEX,
                   caps: ResourceCaps = DEFAULT_CAPS) -> GroebnerBasis:
    polys = list(polys)
    for f in polys:
        if f.ring != ring:
            raise RingMismatchError(f"{f.ring} vs {ring}")
    reduced = _buchberger((f.terms for f in polys if f), order, ring.p, caps)
    return GroebnerBasis(ring, order, tuple(Polynomial(ring, terms) for terms in reduced))


def normal_form(f: Polynomial, G: GroebnerBasis) -> Polynomial:
    return G.reduce(f)


# Ideals of R = S/P

class IdealHandle:
    """A finitely generated ideal of R, stored as generators in S plus the relations of R.

    Groebner bases are cached per term order. The cache is filled by
    computing first and publishing afterwards, so concurrent callers at worst
    duplicate work.
    """

    def __init__(self, ring: RingPresentation, generators: Iterable[Polynomial] = (),
                 label: str = "", notes: Iterable[str] = ()):
        gens = []
        seen = set()
        for g in generators:
            if g.ring != ring.ambient:
                raise RingMismatchError(f"generator {g} is not in {ring.ambient}")
            if g and g not in seen:
                seen.add(g)
                gens.append(g)
        self.ring = ring
        self.generators: Tuple[Polynomial, ...] = tuple(gens)
        self.label = label
        self.notes: Tuple[str, ...] = tuple(notes)
        self._bases: Dict[TermOrder, GroebnerBasis] = {}

    @classmethod
    def from_strings(cls, ring: RingPresentation, texts: Iterable[str], label: str = "") -> "IdealHandle":
        return cls(ring, [parse_polynomial(text, ring) for text in texts], label)

    @classmethod
    def unit(cls, ring: RingPresentation) -> "IdealHandle":
        return cls(ring, [ring.ambient.one()], "(1)")

    @classmethod
    def zero(cls, ring: RingPresentation) -> "IdealHandle":
        return cls(ring, [], "(0)")

    @classmethod
    def maximal(cls, ring: RingPresentation) -> "IdealHandle":
        return cls(ring, ring.ambient.gens, "m")

    @property
    def all_generators(self) -> Tuple[Polynomial, ...]:
        return self.generators + self.ring.relations

    def groebner_basis(self, order: Optional[TermOrder] = None) -> GroebnerBasis:
        order = order or self.ring.order
        cached = self._bases.get(order)
        if cached is not None:
            return cached
        basis = groebner_basis(self.all_generators, self.ring.ambient, order, self.ring.caps)
        return self._bases.setdefault(order, basis)

    def reduce(self, f: Polynomial) -> Polynomial:
        return self.groebner_basis().reduce(f)

    def is_unit(self) -> bool:
        return self.groebner_basis().is_unit()

    def is_monomial(self) -> bool:
        """True when the preimage in S is generated by monomials"""
        return not self.ring.relations and all(g.is_monomial() for g in self.generators)

    def is_homogeneous(self) -> bool:
        return all(g.is_homogeneous() for g in self.all_generators)

    def with_label(self, label: str, notes: Iterable[str] = ()) -> "IdealHandle":
        twin = IdealHandle(self.ring, self.generators, label, self.notes + tuple(notes))
        twin._bases = dict(self._bases)
        return twin

    def __contains__(self, f: Polynomial) -> bool:
        return ideal_member(f, self)

    def __str__(self):
        return "(" + ", ".join(str(g) for g in self.generators) + ")" if self.generators else "(0)"

    def __repr__(self):
        name = f"{self.label} = " if self.label else ""
        return f"IdealHandle({name}{self}, {self.ring})"


def buchberger(I: IdealHandle, order: Optional[TermOrder] = None) -> GroebnerBasis:
    """Reduced Groebner basis of I + P"""
    return I.groebner_basis(order)


def _check_same_ring(I: IdealHandle, J: IdealHandle):
    if I.ring != J.ring:
        raise RingMismatchError(f"{I.ring} vs {J.ring}")


def ideal_member(f: Polynomial, I: IdealHandle) -> bool:
    if f.ring != I.ring.ambient:
        raise RingMismatchError(f"{f.ring} vs {I.ring.ambient}")
    return I.reduce(f).is_zero()


def ideal_contains(I: IdealHandle, J: IdealHandle) -> bool:
    """True when J is contained in I"""
    _check_same_ring(I, J)
    return all(ideal_member(g, I) for g in J.generators)


def ideal_equal(I: IdealHandle, J: IdealHandle) -> bool:
    _check_same_ring(I, J)
    return I.groebner_basis(GREVLEX).elements == J.groebner_basis(GREVLEX).elements


def ideal_sum(I: IdealHandle, J: IdealHandle) -> IdealHandle:
    _check_same_ring(I, J)
    return IdealHandle(I.ring, I.generators + J.generators)


def ideal_product(I: IdealHandle, J: IdealHandle) -> IdealHandle:
    _check_same_ring(I, J)
    return IdealHandle(I.ring, [f * g for f in I.generators for g in J.generators])


def ideal_power(I: IdealHandle, n: int) -> IdealHandle:
    if n == 0:
        return IdealHandle.unit(I.ring)
    products = []
    for combo in itertools.combinations_with_replacement(I.generators, n):
        f = I.ring.ambient.one()
        for g in combo:
            f = f * g
        products.append(f)
    return IdealHandle(I.ring, products, f"{I.label}^{n}" if I.label else "")


def fingerprint(I: IdealHandle) -> str:
    """sha256 of the canonical reduced grevlex basis"""
    basis = I.groebner_basis(GREVLEX)
    text = f"{I.ring.p}|{','.join(I.ring.variables)}|" + ";".join(str(g) for g in basis)
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


# Elimination, intersection, colon

def _auxiliary_name(ring: PolynomialRing) -> str:
    name = AUXILIARY_VARIABLE
    while name in ring.variables:
        name = "_" + name
    return name


def _lift(f: Polynomial, target: PolynomialRing, k: int) -> Polynomial:
    pad = (0,) * k
    return Polynomial(target, {pad + m: c for m, c in f.terms.items()})


def _minimal_monomials(monomials: Iterable[Monomial]) -> List[Monomial]:
    kept: List[Monomial] = []
    for m in sorted(set(monomials), key=lambda m: (sum(m), m)):
        if not any(monomial_divides(k, m) for k in kept):
            kept.append(m)
    return kept


def _intersect_in_ambient(F: Sequence[Polynomial], G: Sequence[Polynomial],
                          ring: RingPresentation) -> List[Polynomial]:
    """Generators of (F) ∩ (G) in S: eliminate w from w*F + (1 - w)*G"""
    S = ring.ambient
    F = [f for f in F if f]
    G = [g for g in G if g]
    if not F or not G:
        return []
    T = S.extended((_auxiliary_name(S),))
    w = T.gen(0)
    gens = [w * _lift(f, T, 1) for f in F] + [(1 - w) * _lift(g, T, 1) for g in G]
    basis = groebner_basis(gens, T, elimination_order(1), ring.caps)
    return [
        Polynomial(S, {m[1:]: c for m, c in g.terms.items()})
        for g in basis
        if all(m[0] == 0 for m in g.terms)
    ]


def elimination_ideal(I: IdealHandle, names: Iterable[str]) -> Tuple[Polynomial, ...]:
    """Generators of (I + P) ∩ F_p[remaining variables], as polynomials of S"""
    S = I.ring.ambient
    eliminated = [S.variable_index(name) for name in names]
    perm = eliminated + [i for i in range(S.nvars) if i not in eliminated]
    T = PolynomialRing(S.field, tuple(S.variables[i] for i in perm))
    mapped = [
        Polynomial(T, {tuple(m[i] for i in perm): c for m, c in f.terms.items()})
        for f in I.all_generators
    ]
    basis = groebner_basis(mapped, T, elimination_order(len(eliminated)), I.ring.caps)
    k = len(eliminated)
    result = []
    for g in basis:
        if any(any(m[:k]) for m in g.terms):
            continue
        terms = {}
        for m, c in g.terms.items():
            original = [0] * S.nvars
            for position, index in enumerate(perm):
                original[index] = m[position]
            terms[tuple(original)] = c
        result.append(Polynomial(S, terms))
    return tuple(result)


def ideal_intersection(I: IdealHandle, J: IdealHandle) -> IdealHandle:
    _check_same_ring(I, J)
    if I.is_unit():
        return J
    if J.is_unit():
        return I
    S = I.ring.ambient
    if I.is_monomial() and J.is_monomial():
        lcms = [
            monomial_lcm(f.leading_monomial(), g.leading_monomial())
            for f in I.generators for g in J.generators
        ]
        return IdealHandle(I.ring, [S.monomial(m) for m in _minimal_monomials(lcms)])
    return IdealHandle(I.ring, _intersect_in_ambient(I.all_generators, J.all_generators, I.ring))


def divide_exact(g: Polynomial, f: Polynomial, order: TermOrder = GREVLEX) -> Polynomial:
    """h with g = f*h in S; raises ColonCertificateError when f does not divide g"""
    S = f.ring
    p = S.p
    key = order.key
    lead = f.leading_monomial(order)
    inv = field_inv(f.terms[lead], p)
    rest = dict(g.terms)
    heap = [(_negated(key(m)), m) for m in rest]
    heapq.heapify(heap)
    quotient: Terms = {}
    while heap:
        _, m = heapq.heappop(heap)
        c = rest.pop(m, None)
        if c is None:
            continue
        if not monomial_divides(lead, m):
            raise ColonCertificateError(f"{f} does not divide {g}")
        shift = tuple(b - a for a, b in zip(lead, m))
        qc = c * inv % p
        quotient[shift] = qc
        for fm, fc in f.terms.items():
            if fm == lead:
                continue
            nm = tuple(x + y for x, y in zip(fm, shift))
            old = rest.get(nm)
            v = ((old or 0) - qc * fc) % p
            if v:
                if old is None:
                    heapq.heappush(heap, (_negated(key(nm)), nm))
                rest[nm] = v
            elif old is not None:
                del rest[nm]
    return Polynomial(S, quotient)


def colon(I: IdealHandle, f: Polynomial) -> IdealHandle:
    """(I : f) in R, computed in S as ((I + P) ∩ fS) / f"""
    ring = I.ring
    if f.ring != ring.ambient:
        raise RingMismatchError(f"{f.ring} vs {ring.ambient}")
    if ideal_member(f, IdealHandle.zero(ring)):
        raise ZeroDivisorArgumentError(f"cannot take a colon by {f}, which is zero in R")
    # (I : f) only depends on f modulo I
    f = I.reduce(f)
    if f.is_zero():
        return IdealHandle.unit(ring)
    if f.is_constant():
        return I
    S = ring.ambient
    if I.is_monomial() and f.is_monomial():
        (fm,) = f.terms
        quotients = [
            tuple(max(a - b, 0) for a, b in zip(g.leading_monomial(), fm)) for g in I.generators
        ]
        return IdealHandle(ring, [S.monomial(m) for m in _minimal_monomials(quotients)])
    products = _intersect_in_ambient(I.all_generators, [f], ring)
    quotients = [divide_exact(g, f) for g in products]
    for h in quotients:
        if not ideal_member(h * f, I):
            raise ColonCertificateError(f"colon generator {h} fails the check {h}*({f}) in I")
    logger.debug("colon by %s: %d generators", f, len(quotients))
    return IdealHandle(ring, quotients)


def colon_ideal(I: IdealHandle, J: IdealHandle) -> IdealHandle:
    """(I : J), the intersection of (I : g) over the generators g of J"""
    _check_same_ring(I, J)
    zero = IdealHandle.zero(I.ring)
    result = None
    for g in J.generators:
        if ideal_member(g, zero):
            continue
        part = colon(I, g)
        result = part if result is None else ideal_intersection(result, part)
    return result if result is not None else IdealHandle.unit(I.ring)


def saturation(I: IdealHandle, f: Polynomial) -> Tuple[IdealHandle, int]:
    """(I : f^∞) and the least n with (I : f^n) = (I : f^(n+1))"""
    current = I
    n = 0
    while True:
        following = colon(current, f)
        # current ⊆ following always holds
        if ideal_contains(current, following):
            return current, n
        current = following
        n += 1
