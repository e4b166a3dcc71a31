"""Decision thresholds shared by the measures and the verdict."""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass

from .errors import DataError


@dataclass(frozen=True)
class ThresholdConfig:
    """Cutoffs for every measure; all overridable.

    ``corr`` defaults to sqrt(0.9). ``cv`` is the CV below which a
    regressor is too close to constant; ``dummy_proportion`` is the share of
    ones at which a dummy is judged collinear with the intercept
    (its closed-form condition number is about 8.96).
    """

    cn_problematic: float = 30.0
    cn_moderate: float = 20.0
    vif: float = 10.0
    corr: float = math.sqrt(0.9)
    vdp: float = 0.5
    cv: float = 0.1002506
    dummy_proportion: float = 0.95

    def __post_init__(self):
        for name, value in asdict(self).items():
            if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0):
                raise DataError(f"threshold {name} must be a positive number, got {value!r}")
        if self.cn_moderate > self.cn_problematic:
            raise DataError("cn_moderate must not exceed cn_problematic")
        for name in ("corr", "vdp"):
            if getattr(self, name) > 1:
                raise DataError(f"threshold {name} must lie in (0, 1]")
        if self.dummy_proportion >= 1:
            raise DataError("dummy_proportion must lie in (0, 1)")

    def as_dict(self) -> dict[str, float]:
        return {k: float(v) for k, v in asdict(self).items()}
