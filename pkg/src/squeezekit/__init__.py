"""Toolkit for zero-mean Gaussian squeezed states of light.

Closed-form classification (physical, P-representable, separable or
entangled), second-order interference visibilities, witness operators, and
a truncated Fock-space brute force that independently verifies every
closed form.
"""

from .states import (
    EPS_CLS,
    EPS_PHYS,
    Classification,
    GaussianMixture,
    LadderToken,
    Mode,
    NonPhysicalStateError,
    NotPRepresentableError,
    OneModeGaussian,
    OperatorWord,
    PFunctionParams,
    TwoModeGaussian,
    WordOrderError,
    g2,
    is_p_representable,
    is_physical_one_mode,
    p_function_params,
    purity_one_mode,
    quadrature_variances,
    weyl_characteristic,
    wick_moment,
)
from .transforms import (
    AmplifierGains,
    UnsupportedPhaseError,
    amplifier_output,
    beam_splitter,
    beam_splitter_inverse,
    is_classical_threshold,
    mode_rotation,
    phase_shift,
    rotated_quadrature_variance,
    werner_mix,
)
from .witnesses import (
    Verdict,
    WitnessKind,
    WitnessReport,
    w2_expectation,
    whbt_closed_form_epr,
    whbt_closed_form_uncorrelated,
    whbt_closed_form_werner,
    whbt_expectation,
)
from .separability import (
    InconclusiveError,
    bs_output_is_separable,
    epr_is_entangled,
    general_is_separable,
    is_physical_two_mode,
    werner_hbt_threshold,
    werner_ppt_threshold,
)
from .interference import (
    ClassicalInequalityReport,
    FitModel,
    FitResult,
    FringeSample,
    IllConditionedError,
    InequalityContext,
    VisibilityRecord,
    classical_inequality_report,
    fit_visibilities,
    fringe_prefactor,
    fringe_value,
    hbt_correlation,
    visibilities_bs_output,
    visibilities_general,
    visibilities_uncorrelated,
    visibility_epr,
    visibility_werner,
)
from . import fock

__version__ = "0.1.0"

__all__ = [
    "AmplifierGains",
    "Classification",
    "ClassicalInequalityReport",
    "EPS_CLS",
    "EPS_PHYS",
    "FitModel",
    "FitResult",
    "FringeSample",
    "GaussianMixture",
    "IllConditionedError",
    "InconclusiveError",
    "InequalityContext",
    "LadderToken",
    "Mode",
    "NonPhysicalStateError",
    "NotPRepresentableError",
    "OneModeGaussian",
    "OperatorWord",
    "PFunctionParams",
    "TwoModeGaussian",
    "UnsupportedPhaseError",
    "Verdict",
    "VisibilityRecord",
    "WitnessKind",
    "WitnessReport",
    "WordOrderError",
    "amplifier_output",
    "beam_splitter",
    "beam_splitter_inverse",
    "bs_output_is_separable",
    "classical_inequality_report",
    "epr_is_entangled",
    "fit_visibilities",
    "fock",
    "fringe_prefactor",
    "fringe_value",
    "g2",
    "general_is_separable",
    "hbt_correlation",
    "is_classical_threshold",
    "is_p_representable",
    "is_physical_one_mode",
    "is_physical_two_mode",
    "mode_rotation",
    "p_function_params",
    "phase_shift",
    "purity_one_mode",
    "quadrature_variances",
    "rotated_quadrature_variance",
    "visibilities_bs_output",
    "visibilities_general",
    "visibilities_uncorrelated",
    "visibility_epr",
    "visibility_werner",
    "w2_expectation",
    "werner_hbt_threshold",
    "werner_mix",
    "werner_ppt_threshold",
    "weyl_characteristic",
    "whbt_closed_form_epr",
    "whbt_closed_form_uncorrelated",
    "whbt_closed_form_werner",
    "whbt_expectation",
    "wick_moment",
]
