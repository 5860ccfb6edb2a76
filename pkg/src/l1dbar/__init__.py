"""Numerical and symbolic toolkit for the dbar equation on l1 balls."""

from .acceptance import CriterionResult, run_all
from .bootstrap import (
    BootstrapChain,
    bootstrap_solve,
    central_projection,
    correction_form,
    slice_form,
)
from .canonical import (
    CanonicalSolution,
    canonical_solve,
    lemma51_check,
    node_point,
    restriction_consistency,
    truncation_tower,
)
from .counterexample import (
    CxConfig,
    divergence_scan,
    form_eval,
    homogeneous_projection,
    lambda_fn,
    phi_fn,
    smoothness_probe,
)
from .delta import (
    DeltaEnclosure,
    Point,
    cap_for_width,
    corollary43_measure,
    delta_enclose,
)
from .forms_core import PolyForm, PolyFunction, QC, ball_samples
from .monomial import (
    MonomialSeries,
    bracket_norm,
    coeff_bound,
    entire_split,
    eval_series,
    extract,
    series_sub,
)
from .multiindex import MultiIndex
from .torus_fourier import (
    SignedIndex,
    cesaro_mean,
    extract_components,
    fejer_coeff,
    fejer_mean_samples,
    fourier_component,
)

__version__ = "0.1.0"

__all__ = [
    "BootstrapChain",
    "CanonicalSolution",
    "CriterionResult",
    "CxConfig",
    "DeltaEnclosure",
    "MonomialSeries",
    "MultiIndex",
    "Point",
    "PolyForm",
    "PolyFunction",
    "QC",
    "SignedIndex",
    "ball_samples",
    "bootstrap_solve",
    "bracket_norm",
    "canonical_solve",
    "cap_for_width",
    "central_projection",
    "cesaro_mean",
    "coeff_bound",
    "corollary43_measure",
    "correction_form",
    "delta_enclose",
    "divergence_scan",
    "entire_split",
    "eval_series",
    "extract",
    "extract_components",
    "fejer_coeff",
    "fejer_mean_samples",
    "form_eval",
    "fourier_component",
    "homogeneous_projection",
    "lambda_fn",
    "lemma51_check",
    "node_point",
    "phi_fn",
    "restriction_consistency",
    "run_all",
    "series_sub",
    "slice_form",
    "smoothness_probe",
    "truncation_tower",
]
