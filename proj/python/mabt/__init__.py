"""Lower confidence bounds for selected prediction models.

Bootstrap tilting with a maxT multiplicity adjustment, plus classical
baseline intervals (Wald, Wilson, Clopper-Pearson, DeLong, Hanley-McNeil)
and a Sidak level adjustment.
"""

from ._core import (
    compute_bounds,
    cp_lower,
    delong_components,
    delong_lower,
    draw_resample_counts,
    hm_lower,
    influence_scores,
    kfold_indices,
    normal_quantile,
    sidak_adjust,
    simultaneous_bounds,
    tilt_weights,
    wald_lower,
    weighted_accuracy,
    weighted_auc,
    wilson_lower,
)

__all__ = [
    "compute_bounds",
    "cp_lower",
    "delong_components",
    "delong_lower",
    "draw_resample_counts",
    "hm_lower",
    "influence_scores",
    "kfold_indices",
    "normal_quantile",
    "sidak_adjust",
    "simultaneous_bounds",
    "tilt_weights",
    "wald_lower",
    "weighted_accuracy",
    "weighted_auc",
    "wilson_lower",
]

__version__ = "0.1.0"
