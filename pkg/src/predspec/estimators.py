"""A small shared vocabulary for naming periodogram estimators.

Experiment runners, integrated statistics, and the CLI all need to say
"the tapered completed periodogram with AIC-selected order" as data; this
module holds that description and evaluates it on a series.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .arfit import ArModel
from .complete import AutoAIC, Explicit, ModelSource, complete_periodogram
from .core import FrequencyGrid, PeriodogramEstimate, Taper, TimeSeries, raw_periodogram, tukey_taper
from .exceptions import DomainError

__all__ = ["ESTIMATOR_KINDS", "EstimatorSpec", "evaluate_estimator", "default_rise"]

ESTIMATOR_KINDS = (
    "regular",
    "tapered",
    "complete-true",
    "complete",
    "tapered-complete",
)


def default_rise(n: int) -> int:
    """Taper rise length used when none is given: ceil(n/10)."""
    return max(1, math.ceil(n / 10))


@dataclass(frozen=True)
class EstimatorSpec:
    """Which periodogram to compute.

    kind "complete-true" plugs in a known model supplied at evaluation time;
    "complete" and "tapered-complete" estimate one per series (`source`,
    defaulting to AIC order selection).  `taper_d` is the cosine-bell rise
    length for the tapered kinds, defaulting to ceil(n/10).
    """

    kind: str
    source: ModelSource | None = None
    taper_d: int | None = None

    def __post_init__(self):
        if self.kind not in ESTIMATOR_KINDS:
            raise DomainError(f"unknown estimator kind {self.kind!r}")

    def taper_for(self, n: int) -> Taper:
        return tukey_taper(n, self.taper_d if self.taper_d is not None else default_rise(n))


def evaluate_estimator(
    ts: TimeSeries,
    spec: EstimatorSpec,
    grid: FrequencyGrid,
    true_model: ArModel | None = None,
) -> PeriodogramEstimate:
    """Evaluate the described estimator on a series over a grid."""
    kind = spec.kind
    if kind == "regular":
        return raw_periodogram(ts, grid)
    if kind == "tapered":
        return raw_periodogram(ts, grid, spec.taper_for(ts.n))
    if kind == "complete-true":
        if true_model is None:
            raise DomainError("complete-true estimator needs the generating AR model")
        return complete_periodogram(ts, Explicit(true_model), grid)
    source = spec.source if spec.source is not None else AutoAIC()
    if kind == "complete":
        return complete_periodogram(ts, source, grid)
    # tapered-complete
    return complete_periodogram(ts, source, grid, taper=spec.taper_for(ts.n))
