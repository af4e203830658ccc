"""Frobenius bracket powers, splitting numbers, Hilbert-Kunz and F-signature rows."""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import TYPE_CHECKING, List, Optional, Sequence, Tuple

import numpy as np
import statsmodels.api as sm
from tqdm import tqdm

from artinian import INFINITE, is_irreducible, is_m_primary, length, ring_dimension, socle
from errors import ExtrapolationError, NotArtinianError, ResourceLimitError, ValidationError
from groebner import IdealHandle, colon, ideal_member, ideal_sum
from polyring import Polynomial, power_exponent

if TYPE_CHECKING:
    from conditions import IdealTower

logger = logging.getLogger(__name__)

# rows used by the L + c/q fit
FIT_WINDOW = 3


@dataclass(frozen=True)
class HKRow:
    e: int
    q: int
    length: int
    normalized: Fraction


@dataclass(frozen=True)
class SignatureRow:
    e: int
    q: int
    length: int
    normalized: Fraction
    stable_t: Optional[int] = None
    stable: bool = True


@dataclass(frozen=True)
class Extrapolation:
    """Fit of normalized rows to L + c/q"""

    limit: Fraction
    slope: Fraction
    residual: Fraction
    points: int
    method: str = "least-squares L + c/q"
    intercept_stderr: Optional[float] = None


@dataclass
class HKEstimate:
    label: str
    dimension: int
    rows: List[HKRow] = field(default_factory=list)
    extrapolation: Optional[Extrapolation] = None
    truncated: bool = False


@dataclass
class SignatureEstimate:
    label: str
    dimension: int
    method: str
    rows: List[SignatureRow] = field(default_factory=list)
    extrapolation: Optional[Extrapolation] = None
    truncated: bool = False

    @property
    def all_stable(self) -> bool:
        return all(row.stable for row in self.rows)


def bracket_power(I: IdealHandle, q: int) -> IdealHandle:
    """I^[q], generated by the q-th powers of the generators of I"""
    power_exponent(q, I.ring.p)
    label = f"{I.label}^[{q}]" if I.label else ""
    return IdealHandle(I.ring, [g.frobenius(q) for g in I.generators], label)


def splitting_colon(I: IdealHandle, u: Polynomial, q: int) -> IdealHandle:
    """(I^[q] : u^q)"""
    return colon(bracket_power(I, q), u.frobenius(q))


def validate_socle_pair(I: IdealHandle, u: Polynomial):
    """I must be m-primary and irreducible with u spanning its socle"""
    if not is_m_primary(I):
        raise NotArtinianError(f"{I} is not primary to the maximal ideal")
    if not is_irreducible(I):
        raise ValidationError(f"{I} is not irreducible: socle {socle(I)}")
    if ideal_member(u, I):
        raise ValidationError(f"socle representative {u} lies in {I}")
    for x in I.ring.ambient.gens:
        if not ideal_member(x * u, I):
            raise ValidationError(f"{x}*({u}) is not in {I}, so {u} is not a socle element")


def splitting_number(I: IdealHandle, u: Polynomial, q: int, validate: bool = True) -> int:
    """λ(R/(I^[q] : u^q))"""
    if validate:
        validate_socle_pair(I, u)
    return length(splitting_colon(I, u, q))


def _normalizer(I: IdealHandle) -> int:
    return ring_dimension(I.ring)


def _require_finite_length(I: IdealHandle):
    if length(I) == INFINITE:
        raise NotArtinianError(f"R/I has infinite length for I = {I}")
    if not I.is_unit() and not is_m_primary(I):
        raise NotArtinianError(f"{I} is not primary to the maximal ideal")


def hk_sequence(I: IdealHandle, e_max: int, progress: bool = False) -> HKEstimate:
    """Rows (e, q, λ(R/I^[q]), λ/q^d) for e = 1..e_max"""
    if e_max < 1:
        raise ValidationError(f"e_max must be at least 1, got {e_max}")
    _require_finite_length(I)
    d = _normalizer(I)
    p = I.ring.p
    estimate = HKEstimate(I.label or str(I), d)
    for e in tqdm(range(1, e_max + 1), desc=f"e_HK {estimate.label}", disable=not progress):
        q = p ** e
        try:
            lam = length(bracket_power(I, q))
        except ResourceLimitError as err:
            logger.warning("hk_sequence stopped at e = %d: %s", e, err)
            estimate.truncated = True
            break
        estimate.rows.append(HKRow(e, q, lam, Fraction(lam, q ** d)))
    if len(estimate.rows) >= 2:
        estimate.extrapolation = extrapolate_limit(estimate.rows)
    return estimate


def _points(rows) -> List[Tuple[int, Fraction]]:
    points = []
    for row in rows:
        if isinstance(row, tuple):
            q, value = row
        else:
            q, value = row.q, row.normalized
        points.append((q, Fraction(value)))
    return points


def extrapolate_limit(rows: Sequence) -> Extrapolation:
    """Exact least-squares fit of value = L + c/q on the last rows.

    Accepts HKRow/SignatureRow objects or (q, value) pairs.
    """
    points = _points(rows)
    if len(points) < 2:
        raise ExtrapolationError(f"need at least 2 rows to extrapolate, got {len(points)}")
    points = points[-FIT_WINDOW:]
    n = len(points)
    ys = [y for _, y in points]
    if all(y == ys[0] for y in ys):
        return Extrapolation(ys[0], Fraction(0), Fraction(0), n, intercept_stderr=0.0 if n >= 3 else None)
    xs = [Fraction(1, q) for q, _ in points]
    sx, sy = sum(xs), sum(ys)
    sxx = sum(x * x for x in xs)
    sxy = sum(x * y for x, y in zip(xs, ys))
    denom = n * sxx - sx * sx
    if denom == 0:
        raise ExtrapolationError("rows must have distinct q")
    slope = (n * sxy - sx * sy) / denom
    limit = (sy - slope * sx) / n
    residual = max(abs(y - limit - slope * x) for x, y in zip(xs, ys))
    stderr = None
    if n >= 3:
        design = sm.add_constant(np.array([float(x) for x in xs]))
        fit = sm.OLS(np.array([float(y) for y in ys]), design).fit()
        stderr = float(fit.bse[0])
    return Extrapolation(limit, slope, residual, n, intercept_stderr=stderr)


def signature_sequence(tower: "IdealTower", e_max: int, t_max: int, progress: bool = False) -> SignatureEstimate:
    """Splitting rows from a validated tower, walking t until two consecutive lengths agree"""
    if e_max < 1:
        raise ValidationError(f"e_max must be at least 1, got {e_max}")
    d = ring_dimension(tower.ring)
    p = tower.ring.p
    estimate = SignatureEstimate(tower.label, d, "tower")
    for e in tqdm(range(1, e_max + 1), desc=f"s({tower.label})", disable=not progress):
        q = p ** e
        previous = None
        row = None
        try:
            for t in range(1, t_max + 1):
                lam = length(splitting_colon(tower.ideal(t), tower.socle_element(t), q))
                # the colons ascend in t, so equal lengths mean equal ideals
                if previous is not None and lam == previous:
                    row = SignatureRow(e, q, lam, Fraction(lam, q ** d), stable_t=t - 1)
                    break
                previous = lam
        except ResourceLimitError as err:
            logger.warning("signature_sequence stopped at e = %d: %s", e, err)
            estimate.truncated = True
            break
        if row is None:
            logger.warning("e = %d: no plateau in t up to %d", e, t_max)
            row = SignatureRow(e, q, previous, Fraction(previous, q ** d), stable=False)
        estimate.rows.append(row)
    if len(estimate.rows) >= 2:
        estimate.extrapolation = extrapolate_limit(estimate.rows)
    return estimate


def signature_via_hk_difference(I: IdealHandle, u: Polynomial, e_max: int,
                                progress: bool = False) -> SignatureEstimate:
    """Rows λ(R/I^[q]) - λ(R/(I + uR)^[q])"""
    validate_socle_pair(I, u)
    enlarged = ideal_sum(I, IdealHandle(I.ring, [u]))
    first = hk_sequence(I, e_max, progress)
    second = hk_sequence(enlarged, e_max, progress)
    d = first.dimension
    estimate = SignatureEstimate(I.label or str(I), d, "hk-difference",
                                 truncated=first.truncated or second.truncated)
    for a, b in zip(first.rows, second.rows):
        lam = a.length - b.length
        estimate.rows.append(SignatureRow(a.e, a.q, lam, Fraction(lam, a.q ** d)))
    if len(estimate.rows) >= 2:
        estimate.extrapolation = extrapolate_limit(estimate.rows)
    return estimate


@dataclass(frozen=True)
class SplittingIdentityRow:
    e: int
    q: int
    colon_length: int
    bracket_length: int
    enlarged_length: int

    @property
    def holds(self) -> bool:
        return self.colon_length == self.bracket_length - self.enlarged_length


def check_splitting_identity(I: IdealHandle, u: Polynomial, e_max: int) -> List[SplittingIdentityRow]:
    """λ(R/(I^[q] : u^q)) against λ(R/I^[q]) - λ(R/(I + uR)^[q]) for each q"""
    validate_socle_pair(I, u)
    enlarged = ideal_sum(I, IdealHandle(I.ring, [u]))
    rows = []
    for e in range(1, e_max + 1):
        q = I.ring.p ** e
        bracket = bracket_power(I, q)
        colon_ideal = colon(bracket, u.frobenius(q))
        rows.append(SplittingIdentityRow(
            e, q,
            length(colon_ideal),
            length(bracket),
            length(bracket_power(enlarged, q)),
        ))
    return rows
