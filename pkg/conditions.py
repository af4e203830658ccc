"""Ideal towers, the stabilization conditions on their Frobenius colons, and the
Q-Gorenstein tower with its colon-saturation identity."""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from tqdm import tqdm

from artinian import is_m_primary, length, ring_dimension, socle
from errors import ContainmentError, TowerValidationError, ValidationError
from frobenius import splitting_colon
from groebner import (
    IdealHandle,
    colon,
    fingerprint,
    ideal_contains,
    ideal_equal,
    ideal_member,
    ideal_power,
    saturation,
)
from polyring import Polynomial, RingPresentation

logger = logging.getLogger(__name__)

VALIDATION_LEVELS = (1, 2, 3)

NOT_STABLE = "NOT_STABLE"

SYMBOLIC_POWER_NOTE = (
    "symbolic power computed by saturation; correct only if the saturating element "
    "lies in every embedded prime of J^n and in no minimal prime of J"
)


# Towers

@dataclass(frozen=True)
class IdealTower:
    """I_t = (head^(t-1) * head_generators, powers^t) with socle u_t = (x_1...x_d)^(t-1) * u_1.

    A parameter tower has no head and powers x_1..x_d. The Q-Gorenstein tower
    has head x_1, head generators those of J and powers x_2..x_d.
    """

    ring: RingPresentation
    head: Optional[Polynomial]
    head_generators: Tuple[Polynomial, ...]
    powers: Tuple[Polynomial, ...]
    base_socle: Polynomial
    label: str = ""
    _ideals: Dict[int, IdealHandle] = field(default_factory=dict, compare=False, hash=False, repr=False)

    @property
    def parameters(self) -> Tuple[Polynomial, ...]:
        return ((self.head,) if self.head is not None else ()) + self.powers

    @property
    def parameter_product(self) -> Polynomial:
        product = self.ring.ambient.one()
        for x in self.parameters:
            product = product * x
        return product

    def ideal(self, t: int) -> IdealHandle:
        if t < 1:
            raise ValidationError(f"tower index must be at least 1, got {t}")
        cached = self._ideals.get(t)
        if cached is not None:
            return cached
        gens = []
        if self.head is not None:
            lead = self.head ** (t - 1)
            gens.extend(lead * g for g in self.head_generators)
        gens.extend(x ** t for x in self.powers)
        return self._ideals.setdefault(t, IdealHandle(self.ring, gens, f"I_{t}"))

    def socle_element(self, t: int) -> Polynomial:
        return self.parameter_product ** (t - 1) * self.base_socle


def validate_tower(tower: IdealTower, t_values: Sequence[int] = VALIDATION_LEVELS):
    """Check m-primary, irreducible, socle and nesting at each t; raises TowerValidationError"""
    ring = tower.ring
    if len(tower.parameters) != ring_dimension(ring):
        logger.warning("tower %s uses %d parameters in a ring of dimension %d",
                       tower.label, len(tower.parameters), ring_dimension(ring))
    for t in t_values:
        I = tower.ideal(t)
        u = tower.socle_element(t)
        if not is_m_primary(I):
            raise TowerValidationError(f"I_{t} = {I} is not m-primary", t)
        basis = socle(I)
        if len(basis) != 1:
            raise TowerValidationError(
                f"I_{t} = {I} is not irreducible: socle spanned by {', '.join(map(str, basis))}", t)
        if ideal_member(u, I):
            raise TowerValidationError(f"u_{t} = {u} lies in I_{t}", t)
        for x in ring.ambient.gens:
            if not ideal_member(x * u, I):
                raise TowerValidationError(f"{x}*u_{t} is not in I_{t}", t)
        if t + 1 in t_values and not ideal_contains(I, tower.ideal(t + 1)):
            raise TowerValidationError(f"I_{t + 1} is not contained in I_{t}", t)
    logger.debug("tower %s valid at t = %s", tower.label, list(t_values))


def build_parameter_tower(ring: RingPresentation, parameters: Sequence[Polynomial],
                          base_socle: Optional[Polynomial] = None, label: str = "") -> IdealTower:
    """Tower (x_1^t, ..., x_d^t); u_1 defaults to the socle generator of (x_1, ..., x_d)"""
    parameters = tuple(parameters)
    if not parameters:
        raise ValidationError("a parameter tower needs at least one parameter")
    if base_socle is None:
        first = IdealHandle(ring, parameters)
        if not is_m_primary(first):
            raise TowerValidationError(f"{first} is not m-primary", 1)
        basis = socle(first)
        if len(basis) != 1:
            raise TowerValidationError(
                f"{first} is not irreducible: socle spanned by {', '.join(map(str, basis))}", 1)
        base_socle = basis[0]
    tower = IdealTower(ring, None, (), parameters, base_socle,
                       label or "(" + ", ".join(map(str, parameters)) + ")")
    validate_tower(tower)
    return tower


def tower_cofinality_degrees(tower: IdealTower, t_max: int) -> List[int]:
    """Smallest generator degree of I_t for t = 1..t_max"""
    return [min(g.total_degree() for g in tower.ideal(t).generators) for t in range(1, t_max + 1)]


def is_cofinal(degrees: Sequence[int]) -> bool:
    return all(a <= b for a, b in zip(degrees, degrees[1:])) and degrees[-1] > degrees[0]


# Q-Gorenstein data

@dataclass(frozen=True)
class QGorensteinData:
    ring: RingPresentation
    J: IdealHandle
    h: int
    a: Polynomial
    x1: Polynomial
    x2: Polynomial
    # pairs (a_i, x_i) for i >= 3
    higher: Tuple[Tuple[Polynomial, Polynomial], ...]
    saturating: Polynomial
    label: str = ""

    @property
    def parameters(self) -> Tuple[Polynomial, ...]:
        return (self.x1, self.x2) + tuple(x for _, x in self.higher)


def symbolic_power(J: IdealHandle, n: int, c: Polynomial) -> IdealHandle:
    """J^(n) as (J^n : c^∞)"""
    if n < 1:
        raise ValidationError(f"symbolic power exponent must be positive, got {n}")
    saturated, steps = saturation(ideal_power(J, n), c)
    logger.warning("J^(%d) from saturation by %s (%d steps): %s", n, c, steps, SYMBOLIC_POWER_NOTE)
    name = f"{J.label}^({n})" if J.label else f"J^({n})"
    return saturated.with_label(name, notes=[SYMBOLIC_POWER_NOTE])


def validate_qgorenstein(data: QGorensteinData) -> List[str]:
    """Every checkable containment of the construction; returns the ones verified"""
    ring = data.ring
    verified = []
    if data.h < 1:
        raise ValidationError(f"h must be at least 1, got {data.h}")
    if data.J.ring != ring:
        raise ValidationError("J is not an ideal of the given ring")
    if not ideal_member(data.x1, data.J):
        raise ContainmentError("x_1 ∈ J", f"x_1 = {data.x1}")
    verified.append("x_1 ∈ J")
    aR = IdealHandle(ring, [data.a])
    for g in data.J.generators:
        if not ideal_member(data.x2 * g, aR):
            raise ContainmentError("x_2 J ⊆ aR", f"x_2*({g}) is not in ({data.a})")
    verified.append("x_2 J ⊆ aR")
    if data.higher:
        Jh = symbolic_power(data.J, data.h, data.saturating)
        for index, (ai, xi) in enumerate(data.higher, start=3):
            target = IdealHandle(ring, [ai])
            for g in Jh.generators:
                if not ideal_member(xi * g, target):
                    raise ContainmentError(f"x_{index} J^(h) ⊆ a_{index}R",
                                           f"x_{index}*({g}) is not in ({ai})")
            verified.append(f"x_{index} J^(h) ⊆ a_{index}R")
    if not is_m_primary(IdealHandle(ring, data.parameters)):
        raise ContainmentError("(x_1, ..., x_d) m-primary",
                               "the elements are not a system of parameters")
    verified.append("(x_1, ..., x_d) m-primary")
    if len(data.parameters) != ring_dimension(ring):
        raise ValidationError(
            f"{len(data.parameters)} parameters given for a ring of dimension {ring_dimension(ring)}")
    return verified


def build_qgorenstein_tower(data: QGorensteinData) -> IdealTower:
    """Tower I_t = (x_1^(t-1) J, x_2^t, ..., x_d^t) with u_1 the socle of I_1"""
    validate_qgorenstein(data)
    rest = data.parameters[1:]
    first = IdealHandle(data.ring, data.J.generators + rest)
    if not is_m_primary(first):
        raise TowerValidationError(f"I_1 = {first} is not m-primary", 1)
    basis = socle(first)
    if len(basis) != 1:
        raise TowerValidationError(
            f"I_1 = {first} is not irreducible: socle spanned by {', '.join(map(str, basis))}", 1)
    tower = IdealTower(data.ring, data.x1, data.J.generators, rest, basis[0],
                       data.label or "Q-Gorenstein tower")
    validate_tower(tower)
    return tower


# Stabilization of the Frobenius colons

@dataclass(frozen=True)
class StabilizationRow:
    e: int
    q: int
    fingerprints: Tuple[str, ...]
    lengths: Tuple[int, ...]
    t0: Optional[int]
    chain_ascending: bool
    colons: Tuple[IdealHandle, ...] = field(default=(), compare=False, repr=False)

    @property
    def stable(self) -> bool:
        return self.t0 is not None

    @property
    def kernel_length(self) -> Optional[int]:
        return self.lengths[self.t0 - 1] if self.stable else None


@dataclass
class StabilizationReport:
    tower_label: str
    e_max: int
    t_max: int
    rows: List[StabilizationRow] = field(default_factory=list)

    @property
    def uniform_t0(self) -> Optional[int]:
        if not self.rows or not all(row.stable for row in self.rows):
            return None
        return max(row.t0 for row in self.rows)

    @property
    def chain_ascending(self) -> bool:
        return all(row.chain_ascending for row in self.rows)

    @property
    def verdict(self):
        t0 = self.uniform_t0
        return {"STABLE_AT": t0} if t0 is not None else NOT_STABLE

    @property
    def scope(self) -> str:
        return f"verified up to (e_max={self.e_max}, t_max={self.t_max})"


def check_ascending_chain(ideals: Sequence[IdealHandle]) -> bool:
    """Each ideal contains its predecessor, tested on generators"""
    return all(ideal_contains(later, earlier) for earlier, later in zip(ideals, ideals[1:]))


def _plateau_start(fingerprints: Sequence[str]) -> Optional[int]:
    """1-based start of the run of equal fingerprints reaching the end, when it has length >= 2"""
    start = len(fingerprints)
    while start > 1 and fingerprints[start - 2] == fingerprints[-1]:
        start -= 1
    return start if len(fingerprints) - start + 1 >= 2 else None


def condition_a_check(tower: IdealTower, e_max: int, t_max: int,
                      progress: bool = False) -> StabilizationReport:
    """(I_t^[q] : u_t^q) for t = 1..t_max and e = 1..e_max, with plateau detection"""
    if e_max < 1 or t_max < 2:
        raise ValidationError("condition A needs e_max >= 1 and t_max >= 2")
    report = StabilizationReport(tower.label, e_max, t_max)
    p = tower.ring.p
    for e in tqdm(range(1, e_max + 1), desc=f"condition A {tower.label}", disable=not progress):
        q = p ** e
        colons = tuple(
            splitting_colon(tower.ideal(t), tower.socle_element(t), q) for t in range(1, t_max + 1)
        )
        prints = tuple(fingerprint(C) for C in colons)
        ascending = check_ascending_chain(colons)
        if not ascending:
            logger.warning("e = %d: colon chain of %s is not ascending", e, tower.label)
        t0 = _plateau_start(prints)
        if t0 is not None and not ideal_equal(colons[t0 - 1], colons[-1]):
            t0 = None
        lengths = tuple(length(C) for C in colons)
        logger.debug("e = %d: lengths %s, plateau from %s", e, lengths, t0)
        report.rows.append(StabilizationRow(e, q, prints, lengths, t0, ascending, colons))
    return report


@dataclass(frozen=True)
class KernelLevel:
    e: int
    q: int
    length: int
    stable_t: Optional[int]
    ideal: IdealHandle = field(compare=False, repr=False)

    @property
    def stable(self) -> bool:
        return self.stable_t is not None


def condition_b_level(tower: IdealTower, e: int, t_max: int) -> KernelLevel:
    """Colength of the union of the ascending colons, found at the first repeat"""
    q = tower.ring.p ** e
    current = splitting_colon(tower.ideal(1), tower.socle_element(1), q)
    for t in range(1, t_max):
        following = splitting_colon(tower.ideal(t + 1), tower.socle_element(t + 1), q)
        if ideal_equal(current, following):
            return KernelLevel(e, q, length(current), t, current)
        current = following
    logger.warning("e = %d: colons of %s still growing at t = %d", e, tower.label, t_max)
    return KernelLevel(e, q, length(current), None, current)


@dataclass(frozen=True)
class EquivalenceRow:
    e: int
    q: int
    t0: Optional[int]
    t_b: Optional[int]
    same_ideal: bool
    discrepancy: str = ""

    @property
    def holds(self) -> bool:
        return not self.discrepancy


@dataclass
class EquivalenceReport:
    tower_label: str
    e_max: int
    t_max: int
    rows: List[EquivalenceRow] = field(default_factory=list)

    @property
    def holds(self) -> bool:
        return all(row.holds for row in self.rows)


def condition_equivalence_check(tower: IdealTower, e_max: int, t_max: int,
                                progress: bool = False) -> EquivalenceReport:
    """Compare the first repeat of the colon chain with the plateau found by condition_a_check"""
    stabilization = condition_a_check(tower, e_max, t_max, progress)
    report = EquivalenceReport(tower.label, e_max, t_max)
    for row in stabilization.rows:
        level = condition_b_level(tower, row.e, t_max)
        problems = []
        same = False
        if not row.stable:
            problems.append(NOT_STABLE + " (condition A)")
        if not level.stable:
            problems.append(NOT_STABLE + " (condition B)")
        if row.stable and level.stable:
            if level.stable_t > row.t0:
                problems.append(f"condition B stabilizes at t = {level.stable_t} after t_0 = {row.t0}")
            same = ideal_equal(level.ideal, row.colons[row.t0 - 1])
            if not same:
                problems.append("stabilized ideals differ")
        report.rows.append(EquivalenceRow(row.e, row.q, row.t0, level.stable_t, same, "; ".join(problems)))
    return report


# Colon-saturation identity

@dataclass(frozen=True)
class IdentityResult:
    holds: bool
    witness: Optional[Polynomial]
    saturation_exponent: int
    n: int
    N: int
    i: int
    notes: Tuple[str, ...] = ()


def verify_colon_saturation_identity(data: QGorensteinData, n: int, N: int, i: int) -> IdentityResult:
    """(J^(nh), x_j^N : j != i) : x_i^∞ against the same ideal : x_i^n"""
    params = data.parameters
    d = len(params)
    if not 2 <= i <= d:
        raise ValidationError(f"i must lie in 2..{d}, got {i}")
    if n < 1 or N < 1:
        raise ValidationError("n and N must be positive")
    Jnh = symbolic_power(data.J, n * data.h, data.saturating)
    others = [params[j - 1] ** N for j in range(2, d + 1) if j != i]
    K = IdealHandle(data.ring, Jnh.generators + tuple(others), "K")
    xi = params[i - 1]
    saturated, exponent = saturation(K, xi)
    bounded = colon(K, xi ** n)
    # bounded is always contained in saturated
    witness = next((g for g in saturated.generators if not ideal_member(g, bounded)), None)
    return IdentityResult(witness is None, witness, exponent, n, N, i, Jnh.notes)
