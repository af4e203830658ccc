"""Defaults, resource caps and run configuration."""

from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from errors import ValidationError

# Define constants
MAX_EXPONENT = 2**20  # largest single exponent a bracket power may produce
DEFAULT_MAX_BASIS = 20000
DEFAULT_MAX_DEGREE = 2**20
DEFAULT_E_MAX = 3
DEFAULT_T_MAX = 5
DEFAULT_SEED = 20240601
DEFAULT_FORMAT = "json"
DEFAULT_ORDER = "grevlex"

OUTPUT_FORMATS = ("json", "csv")
ORDER_NAMES = ("grevlex", "lex")


@dataclass(frozen=True)
class ResourceCaps:
    """Limits on Groebner computations; exceeding one is an error"""

    max_basis: int = DEFAULT_MAX_BASIS
    max_degree: int = DEFAULT_MAX_DEGREE

    def __post_init__(self):
        if self.max_basis <= 0 or self.max_degree <= 0:
            raise ValidationError("resource caps must be positive")


DEFAULT_CAPS = ResourceCaps()


@dataclass(frozen=True)
class RunConfig:
    e_max: int = DEFAULT_E_MAX
    t_max: int = DEFAULT_T_MAX
    order: str = DEFAULT_ORDER
    caps: ResourceCaps = DEFAULT_CAPS
    output_format: str = DEFAULT_FORMAT
    output_path: Optional[Path] = None
    seed: int = DEFAULT_SEED

    def __post_init__(self):
        if self.e_max < 1:
            raise ValidationError(f"e_max must be at least 1, got {self.e_max}")
        # towers are validated at t = 1, 2, 3
        if self.t_max < 3:
            raise ValidationError(f"t_max must be at least 3, got {self.t_max}")
        if self.output_format not in OUTPUT_FORMATS:
            raise ValidationError(f"unknown output format {self.output_format!r}")
        if self.order not in ORDER_NAMES:
            raise ValidationError(f"unknown term order {self.order!r}")
