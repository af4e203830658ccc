"""Lengths, dimension and socles of quotients R/I."""

import itertools
import logging
import math
import random
from collections import deque
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from errors import CapTooSmallError, NotArtinianError
from groebner import IdealHandle
from polyring import Monomial, Polynomial, PolynomialRing, RingPresentation, TermOrder

logger = logging.getLogger(__name__)

INFINITE = math.inf

Length = Union[int, float]


@dataclass(frozen=True)
class StandardMonomialBasis:
    """Monomials outside the leading-term ideal, in descending term order"""

    ring: PolynomialRing
    order: TermOrder
    monomials: Tuple[Monomial, ...]

    @cached_property
    def index(self) -> Dict[Monomial, int]:
        return {m: i for i, m in enumerate(self.monomials)}

    def __len__(self):
        return len(self.monomials)

    def __iter__(self):
        return iter(self.monomials)

    def polynomials(self) -> List[Polynomial]:
        return [self.ring.monomial(m) for m in self.monomials]


def _has_all_pure_powers(leads: Sequence[Monomial], nvars: int) -> bool:
    found = set()
    for lead in leads:
        support = [i for i, a in enumerate(lead) if a]
        if len(support) == 1:
            found.add(support[0])
        elif not support:
            return True
    return len(found) == nvars


def standard_monomials(I: IdealHandle, order: Optional[TermOrder] = None) -> StandardMonomialBasis:
    """Enumerate the staircase of I + P; raises NotArtinianError when it is infinite"""
    basis = I.groebner_basis(order)
    S = I.ring.ambient
    leads = basis.leading_monomials()
    if not _has_all_pure_powers(leads, S.nvars):
        raise NotArtinianError(f"R/I is not Artinian for I = {I}")

    def is_standard(m):
        return not any(all(a <= b for a, b in zip(lead, m)) for lead in leads)

    origin = (0,) * S.nvars
    seen = set()
    queue = deque()
    if is_standard(origin):
        seen.add(origin)
        queue.append(origin)
    while queue:
        m = queue.popleft()
        for i in range(S.nvars):
            up = m[:i] + (m[i] + 1,) + m[i + 1:]
            if up not in seen and is_standard(up):
                seen.add(up)
                queue.append(up)
    key = basis.order.key
    monomials = tuple(sorted(seen, key=key, reverse=True))
    return StandardMonomialBasis(S, basis.order, monomials)


def length(I: IdealHandle, order: Optional[TermOrder] = None) -> Length:
    """λ(R/I) as the number of standard monomials, INFINITE when R/I is not Artinian"""
    try:
        count = len(standard_monomials(I, order))
    except NotArtinianError:
        return INFINITE
    logger.debug("length(%s) = %d", I.label or I, count)
    return count


def krull_dimension(I: IdealHandle) -> int:
    """dim S/(I + P): the largest set of variables containing no leading monomial's support"""
    leads = I.groebner_basis().leading_monomials()
    n = I.ring.nvars
    supports = [frozenset(i for i, a in enumerate(lead) if a) for lead in leads]
    if any(not s for s in supports):
        return -1
    for size in range(n, -1, -1):
        for subset in itertools.combinations(range(n), size):
            chosen = set(subset)
            if not any(s <= chosen for s in supports):
                return size
    return 0


@lru_cache(maxsize=None)
def ring_dimension(ring: RingPresentation) -> int:
    return krull_dimension(IdealHandle.zero(ring))


def is_m_primary(I: IdealHandle) -> bool:
    """I is primary to the ideal of all variables"""
    lam = length(I)
    if lam == INFINITE or lam == 0:
        return False
    if I.is_homogeneous():
        return True
    # every variable must be nilpotent modulo I
    return all(I.reduce(x ** lam).is_zero() for x in I.ring.ambient.gens)


# Dense linear algebra over F_p

def _row_reduce(matrix: np.ndarray, p: int) -> Tuple[np.ndarray, List[int]]:
    """Reduced row echelon form mod p and its pivot columns"""
    A = np.array(matrix, dtype=np.int64) % p
    rows, cols = A.shape
    pivots = []
    rank = 0
    for col in range(cols):
        if rank == rows:
            break
        nonzero = np.nonzero(A[rank:, col])[0]
        if nonzero.size == 0:
            continue
        pivot = rank + int(nonzero[0])
        if pivot != rank:
            A[[rank, pivot]] = A[[pivot, rank]]
        A[rank] = (A[rank] * pow(int(A[rank, col]), -1, p)) % p
        others = np.nonzero(A[:, col])[0]
        others = others[others != rank]
        if others.size:
            A[others] = (A[others] - np.outer(A[others, col], A[rank])) % p
        pivots.append(col)
        rank += 1
    return A[:rank], pivots


def rank_mod_p(matrix: np.ndarray, p: int) -> int:
    if matrix.size == 0:
        return 0
    return len(_row_reduce(matrix, p)[1])


def null_space_mod_p(matrix: np.ndarray, p: int) -> List[np.ndarray]:
    """Basis of {v : matrix @ v = 0} over F_p, one vector per free column"""
    cols = matrix.shape[1]
    if matrix.shape[0] == 0:
        reduced, pivots = np.zeros((0, cols), dtype=np.int64), []
    else:
        reduced, pivots = _row_reduce(matrix, p)
    free = [c for c in range(cols) if c not in set(pivots)]
    vectors = []
    for f in free:
        v = np.zeros(cols, dtype=np.int64)
        v[f] = 1
        for r, c in enumerate(pivots):
            v[c] = (-reduced[r, f]) % p
        vectors.append(v)
    return vectors


def _monomials_of_degree(nvars: int, degree: int) -> List[Monomial]:
    out = []
    for combo in itertools.combinations_with_replacement(range(nvars), degree):
        exps = [0] * nvars
        for i in combo:
            exps[i] += 1
        out.append(tuple(exps))
    return out


def _product_rows(gens: Sequence[Polynomial], nvars: int, degrees: range,
                  position: Dict[Monomial, int], width: int) -> List[np.ndarray]:
    """Rows m*g for each generator g and monomial m with deg(m*g) in degrees"""
    rows = []
    for g in gens:
        dg = g.total_degree()
        for k in degrees:
            if dg > k:
                continue
            for m in _monomials_of_degree(nvars, k - dg):
                row = np.zeros(width, dtype=np.int64)
                for gm, c in g.terms.items():
                    row[position[tuple(a + b for a, b in zip(gm, m))]] = c
                rows.append(row)
    return rows


def _graded_oracle(gens: Sequence[Polynomial], nvars: int, p: int, degree_cap: int) -> Optional[int]:
    total = 0
    for k in range(degree_cap + 1):
        columns = _monomials_of_degree(nvars, k)
        position = {m: i for i, m in enumerate(columns)}
        rows = _product_rows(gens, nvars, range(k, k + 1), position, len(columns))
        rank = rank_mod_p(np.array(rows), p) if rows else 0
        surviving = len(columns) - rank
        if surviving == 0:
            return total
        total += surviving
    return None


def _truncated_count(gens: Sequence[Polynomial], nvars: int, p: int, bound: int) -> Tuple[int, bool]:
    """Colength of the products of degree < bound inside all polynomials of degree < bound.

    The flag says whether every monomial of degree bound - 1 lies in that span.
    """
    columns = [m for k in range(bound) for m in _monomials_of_degree(nvars, k)]
    position = {m: i for i, m in enumerate(columns)}
    rows = _product_rows(gens, nvars, range(bound), position, len(columns))
    rank = rank_mod_p(np.array(rows), p) if rows else 0
    top = []
    for m in _monomials_of_degree(nvars, bound - 1):
        unit = np.zeros(len(columns), dtype=np.int64)
        unit[position[m]] = 1
        top.append(unit)
    covered = rank_mod_p(np.array(rows + top), p) == rank
    return len(columns) - rank, covered


def _filtered_oracle(gens: Sequence[Polynomial], nvars: int, p: int, degree_cap: int) -> Optional[int]:
    # certified once two consecutive bounds cover their top degree and agree
    previous = None
    for bound in range(1, degree_cap + 1):
        count, covered = _truncated_count(gens, nvars, p, bound)
        if not covered:
            previous = None
            continue
        if previous == count:
            return count
        previous = count
    return None


def length_dense_oracle(I: IdealHandle, degree_cap: int) -> int:
    """λ(R/I) by Gaussian elimination on products of generators with monomials.

    Homogeneous I + P is counted degree by degree and is certified once some
    degree k <= degree_cap has no surviving monomials. Otherwise the count
    runs over the polynomials of degree < D for D = 1 .. degree_cap and is
    certified when two consecutive D agree with every monomial of degree
    D - 1 in the span of the products.
    """
    S = I.ring.ambient
    gens = [g for g in I.all_generators if g]
    if I.is_homogeneous():
        count = _graded_oracle(gens, S.nvars, S.p, degree_cap)
    else:
        count = _filtered_oracle(gens, S.nvars, S.p, degree_cap)
    if count is None:
        raise CapTooSmallError(f"degree cap {degree_cap} too small to certify the length of {I}")
    return count


def random_monomial_ideal(rng: random.Random, ring: RingPresentation) -> IdealHandle:
    """Pure powers of every variable plus a few random monomials"""
    n = ring.nvars
    S = ring.ambient
    gens = []
    for i in range(n):
        exps = [0] * n
        exps[i] = rng.randint(1, 4 if n <= 2 else 3)
        gens.append(S.monomial(exps))
    for _ in range(rng.randint(0, 3)):
        gens.append(S.monomial([rng.randint(0, 2) for _ in range(n)]))
    return IdealHandle(ring, gens)


# Socles

def socle(I: IdealHandle) -> List[Polynomial]:
    """F_p-basis of (I : m)/I, as combinations of standard monomials"""
    try:
        basis = standard_monomials(I)
    except NotArtinianError as err:
        raise NotArtinianError(f"socle needs an Artinian quotient: {err}") from err
    S = I.ring.ambient
    p = S.p
    size = len(basis)
    if size == 0:
        return []
    blocks = []
    for x in S.gens:
        block = np.zeros((size, size), dtype=np.int64)
        for j, m in enumerate(basis):
            image = I.reduce(x.mul_term(m))
            for mono, c in image.terms.items():
                block[basis.index[mono], j] = c
        blocks.append(block)
    vectors = null_space_mod_p(np.vstack(blocks), p)
    elements = [
        S.from_terms({basis.monomials[i]: int(c) for i, c in enumerate(v) if c})
        for v in vectors
    ]
    logger.debug("socle of %s has dimension %d", I.label or I, len(elements))
    return elements


def is_irreducible(I: IdealHandle) -> bool:
    return len(socle(I)) == 1
