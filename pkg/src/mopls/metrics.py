"""Run-quality metrics: hypervolume coverage and parallel speed-up."""

from __future__ import annotations

import numpy as np

from mopls.errors import MetricUndefinedError
from mopls.hypervolume import hv_exact


def coverage_from_values(hv_p: float, hv_init: float, hv_star: float) -> float:
    """(H_v(P) - H_v(P_init)) / (H_v(P*) - H_v(P_init))."""
    denom = hv_star - hv_init
    if denom <= 0:
        raise MetricUndefinedError(
            "initial design already attains the ideal hypervolume"
        )
    return (hv_p - hv_init) / denom


def hypervolume_coverage(P, P_init, P_star, ref) -> float:
    """Fraction of attainable hypervolume achieved beyond the initial design.

    1 when ``P`` matches the ideal front's hypervolume, 0 when it adds
    nothing over the initial design.
    """
    return coverage_from_values(
        hv_exact(P, ref), hv_exact(P_init, ref), hv_exact(P_star, ref)
    )


def speedup(baseline_serial_time: float, target_time: float) -> float:
    """Serial baseline time divided by the target algorithm's time, both
    measured to the same target coverage."""
    if baseline_serial_time <= 0 or target_time <= 0:
        raise ValueError("times must be positive")
    return baseline_serial_time / target_time


def iterations_to_target(hc_series, alpha: float) -> int | None:
    """First 1-based iteration at which coverage reaches ``alpha``.

    None when the target is never reached within the series.
    """
    for i, hc in enumerate(hc_series, start=1):
        if hc is not None and hc >= alpha:
            return i
    return None
