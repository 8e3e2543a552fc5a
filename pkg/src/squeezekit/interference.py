"""Second-order (intensity) interference: correlation functions, closed-form
fringe visibilities for each state family, classical bounds, and recovery of
visibilities from sampled fringes.

Detectors see the mode combinations (a + b e^{iφᵢ})/√2, so the normally
ordered intensity correlation decomposes into a constant, an in-phase term
cos(φ₁−φ₂), an out-of-phase term cos(φ₁+φ₂+offset), and, for states with
both squeezing and cross correlation, four single-phase cosines.
``hbt_correlation`` returns the raw (unnormalized) correlation so it can be
compared against the Fock oracle exactly; the visibility records hold the
normalized fringe decomposition and ``fringe_prefactor`` exposes the
normalization separately.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import separability
from .states import (
    EPS_PHYS,
    NonPhysicalStateError,
    OperatorWord,
    TwoModeGaussian,
    wick_moment,
)
from .witnesses import intensity_square_moment

_VIS_TOL = 1e-9
_COND_LIMIT = 1e6

_W_CROSS = OperatorWord.from_counts(1, 1, 1, 1)
_W_BDAD_AA = OperatorWord.from_counts(create_a=1, create_b=1, annihilate_a=2)
_W_BDBD_AB = OperatorWord.from_counts(create_b=2, annihilate_a=1, annihilate_b=1)
_W_SQ_UP = OperatorWord.from_counts(create_a=2, annihilate_b=2)


class IllConditionedError(ValueError):
    """Fringe-sample design is rank deficient or badly conditioned."""


class InequalityContext(enum.Enum):
    """Selects the classical upper bound for the in-phase visibility."""

    UNCORRELATED_PAIR = "uncorrelated-pair"      # v_minus <= 1/3
    BEAM_SPLITTER_OUTPUT = "beam-splitter-output"  # v_minus <= 1/2


@dataclass(frozen=True)
class VisibilityRecord:
    """Fringe amplitudes (v₋, v₊, v_m) plus the out-of-phase offset.

    v_minus multiplies cos(φ₁−φ₂), v_plus multiplies
    cos(φ₁+φ₂+phase_offset_plus), and v_m multiplies the four single-phase
    cosines present only for correlated squeezed states.
    """

    v_minus: float
    v_plus: float
    v_m: float = 0.0
    phase_offset_plus: float = 0.0

    def __post_init__(self):
        for name in ("v_minus", "v_plus"):
            v = float(getattr(self, name))
            object.__setattr__(self, name, v)
            if not (-_VIS_TOL <= v <= 1.0 + _VIS_TOL):
                raise ValueError(f"{name} = {v} outside [0, 1]")
        vm = float(self.v_m)
        object.__setattr__(self, "v_m", vm)
        if abs(vm) > 1.0 + _VIS_TOL:
            raise ValueError(f"v_m = {vm} outside [-1, 1]")
        object.__setattr__(self, "phase_offset_plus", float(self.phase_offset_plus))

    @property
    def total(self) -> float:
        return self.v_minus + self.v_plus


@dataclass(frozen=True)
class FringeSample:
    """One sampled point of the intensity correlation at phases (φ₁, φ₂)."""

    phi1: float
    phi2: float
    value: float


def _require_two_mode_physical(state):
    if not separability.is_physical_two_mode(state):
        raise NonPhysicalStateError("second moments do not describe a physical state")


def hbt_correlation(state, phi1: float, phi2: float) -> float:
    """Unnormalized correlation ⟨:I(φ₁)I(φ₂):⟩ of the two detector intensities.

    Evaluated through the Wick engine term group by term group; mixtures
    average by weight automatically.  The value is real and nonnegative for
    physical states.
    """
    _require_two_mode_physical(state)
    i2 = intensity_square_moment(state)
    cross = wick_moment(state, _W_CROSS).real
    # ⟨a†:(I_a+I_b):b⟩; its partner group is the complex conjugate.
    t_up = wick_moment(state, _W_BDAD_AA.conjugate()) + wick_moment(state, _W_BDBD_AB.conjugate())
    sq_up = wick_moment(state, _W_SQ_UP)
    esum = cmath.exp(1j * phi1) + cmath.exp(1j * phi2)
    value = (
        i2
        + 2.0 * cross * math.cos(phi1 - phi2)
        + 2.0 * (esum * t_up).real
        + 2.0 * (cmath.exp(1j * (phi1 + phi2)) * sq_up).real
    )
    return 0.25 * value


def fringe_prefactor(state) -> float:
    """Constant part ¼⟨:(I_a+I_b)²:⟩ of the correlation; the visibility
    records are the fringe divided by this value."""
    return 0.25 * intensity_square_moment(state)


def fringe_value(record: VisibilityRecord, phi1: float, phi2: float,
                 lam1: float = 0.0, lam2: float = 0.0) -> float:
    """Normalized fringe pattern described by a visibility record.

    λ₁ and λ₂ only matter when the record carries a nonzero mixed
    visibility; they place the four single-phase cosines.
    """
    value = (
        1.0
        + record.v_minus * math.cos(phi1 - phi2)
        + record.v_plus * math.cos(phi1 + phi2 + record.phase_offset_plus)
    )
    if record.v_m != 0.0:
        value += record.v_m * (
            math.cos(phi1 - lam1)
            + math.cos(phi2 + lam2)
            + math.cos(phi1 + lam2)
            + math.cos(phi2 - lam1)
        )
    return value


# --- closed-form visibilities -------------------------------------------------

def visibilities_uncorrelated(n: float, m_abs: float, lam: float = 0.0) -> VisibilityRecord:
    """Two independent equally populated modes whose squeezing moments differ
    by the phase λ (⟨bb⟩ = −m e^{iλ}).

    v₋ = n²/(3n²+|m|²) and v₊ = |m|²/(3n²+|m|²); the out-of-phase fringe
    sits at cos(φ₁+φ₂+λ).
    """
    if n == 0.0 and m_abs == 0.0:
        raise ValueError("vacuum produces no fringes; visibilities are undefined")
    denom = 3.0 * n ** 2 + m_abs ** 2
    return VisibilityRecord(n ** 2 / denom, m_abs ** 2 / denom, 0.0, lam)


def visibility_epr(n: float, mc_abs: float) -> VisibilityRecord:
    """Cross-correlated pair without single-mode squeezing.

    v₋ = (n² + |m_c|²)/(3n² + |m_c|²); there is no out-of-phase fringe.
    Values above ½ occur exactly for entangled parameters |m_c| > n.
    """
    if mc_abs ** 2 > n * (n + 1.0) + EPS_PHYS:
        raise NonPhysicalStateError(
            f"|m_c|^2 = {mc_abs ** 2:.6g} exceeds n(n+1) = {n * (n + 1):.6g}"
        )
    if n == 0.0 and mc_abs == 0.0:
        raise ValueError("vacuum produces no fringes; visibilities are undefined")
    denom = 3.0 * n ** 2 + mc_abs ** 2
    return VisibilityRecord((n ** 2 + mc_abs ** 2) / denom, 0.0, 0.0, 0.0)


def visibility_werner(n: float, mc_abs: float, p: float) -> VisibilityRecord:
    """Thermal-diluted correlated pair: v₋ = (n² + p|m_c|²)/(3n² + p|m_c|²)."""
    if not (0.0 <= p <= 1.0):
        raise ValueError(f"mixing probability must lie in [0, 1], got {p}")
    if mc_abs ** 2 > n * (n + 1.0) + EPS_PHYS:
        raise NonPhysicalStateError(
            f"|m_c|^2 = {mc_abs ** 2:.6g} exceeds n(n+1) = {n * (n + 1):.6g}"
        )
    if n == 0.0 and (p == 0.0 or mc_abs == 0.0):
        raise ValueError("vacuum produces no fringes; visibilities are undefined")
    denom = 3.0 * n ** 2 + p * mc_abs ** 2
    return VisibilityRecord((n ** 2 + p * mc_abs ** 2) / denom, 0.0, 0.0, 0.0)


def visibilities_bs_output(n: float, m_abs: float, lam: float) -> VisibilityRecord:
    """Beam-splitter output of two equally squeezed inputs with phase λ.

    v₋ = (n² + ½(1−cos 2λ)|m|²)/(3n²+|m|²) and
    v₊ = ½(1+cos 2λ)|m|²/(3n²+|m|²).  The formulas are evaluated for any
    parameter pair, physical or not; callers flag nonphysical inputs.
    """
    if n == 0.0 and m_abs == 0.0:
        raise ValueError("vacuum produces no fringes; visibilities are undefined")
    denom = 3.0 * n ** 2 + m_abs ** 2
    c2 = math.cos(2.0 * lam)
    v_minus = (n ** 2 + 0.5 * (1.0 - c2) * m_abs ** 2) / denom
    v_plus = 0.5 * (1.0 + c2) * m_abs ** 2 / denom
    return VisibilityRecord(v_minus, v_plus, 0.0, 0.0)


def visibilities_general(n: float, m: float, m_c: float,
                         lam1: float, lam2: float) -> VisibilityRecord:
    """Equal-magnitude squeezing with phases λ₁, λ₂ and a real cross moment.

    All three fringe amplitudes are populated:
    v₋ = (n²+m_c²)/D, v₊ = m²/D, v_m = m·m_c/D with D = 3n²+m²+m_c²,
    the out-of-phase cosine sits at φ₁+φ₂−λ₁+λ₂ and the four single-phase
    cosines at φ₁−λ₁, φ₂+λ₂, φ₁+λ₂, φ₂−λ₁.  Physicality of the parameter
    set is certified by the Fock oracle before evaluation.
    """
    state = TwoModeGaussian(
        n,
        m * cmath.exp(1j * lam1),
        m * cmath.exp(1j * lam2),
        complex(m_c),
        0j,
    )
    _require_two_mode_physical(state)
    denom = 3.0 * n ** 2 + m ** 2 + m_c ** 2
    if denom == 0.0:
        raise ValueError("vacuum produces no fringes; visibilities are undefined")
    return VisibilityRecord(
        (n ** 2 + m_c ** 2) / denom,
        m ** 2 / denom,
        m * m_c / denom,
        lam2 - lam1,
    )


# --- classical bounds -----------------------------------------------------------

@dataclass(frozen=True)
class ClassicalInequalityReport:
    """Per-bound outcomes of the classical fringe inequalities.

    For uncorrelated pairs the classical window is ¼ ≤ v₋ ≤ ⅓; for
    beam-splitter outputs the upper bound relaxes to ½.  Both share
    0 ≤ v₊ ≤ ¼ and v₋ + v₊ ≤ ½.
    """

    context: InequalityContext
    v_minus_lower_ok: bool
    v_minus_upper_ok: bool
    v_plus_lower_ok: bool
    v_plus_upper_ok: bool
    sum_ok: bool

    @property
    def classical(self) -> bool:
        return (
            self.v_minus_lower_ok
            and self.v_minus_upper_ok
            and self.v_plus_lower_ok
            and self.v_plus_upper_ok
            and self.sum_ok
        )

    def violated(self) -> tuple[str, ...]:
        names = (
            ("v_minus_lower", self.v_minus_lower_ok),
            ("v_minus_upper", self.v_minus_upper_ok),
            ("v_plus_lower", self.v_plus_lower_ok),
            ("v_plus_upper", self.v_plus_upper_ok),
            ("sum", self.sum_ok),
        )
        return tuple(name for name, ok in names if not ok)


def classical_inequality_report(v: VisibilityRecord,
                                context: InequalityContext) -> ClassicalInequalityReport:
    """Check a visibility record against the classical fringe bounds."""
    tol = 1e-12
    upper = 0.5 if context is InequalityContext.BEAM_SPLITTER_OUTPUT else 1.0 / 3.0
    return ClassicalInequalityReport(
        context=context,
        v_minus_lower_ok=v.v_minus >= 0.25 - tol,
        v_minus_upper_ok=v.v_minus <= upper + tol,
        v_plus_lower_ok=v.v_plus >= -tol,
        v_plus_upper_ok=v.v_plus <= 0.25 + tol,
        sum_ok=v.v_minus + v.v_plus <= 0.5 + tol,
    )


# --- visibility recovery from sampled fringes -----------------------------------

class FitModel(enum.Enum):
    IN_PHASE_ONLY = "in-phase-only"
    IN_OUT = "in-out"
    GENERAL = "general"


_MODEL_COLUMNS = {
    FitModel.IN_PHASE_ONLY: 3,
    FitModel.IN_OUT: 5,
    FitModel.GENERAL: 9,
}


@dataclass(frozen=True)
class FitResult:
    """Least-squares visibility estimates from sampled fringes."""

    record: VisibilityRecord
    amplitude: float
    residual: float
    condition_number: float


def _design_matrix(phi1: np.ndarray, phi2: np.ndarray, model: FitModel) -> np.ndarray:
    cols = [np.ones_like(phi1), np.cos(phi1 - phi2), np.sin(phi1 - phi2)]
    if model in (FitModel.IN_OUT, FitModel.GENERAL):
        cols += [np.cos(phi1 + phi2), np.sin(phi1 + phi2)]
    if model is FitModel.GENERAL:
        cols += [np.cos(phi1), np.sin(phi1), np.cos(phi2), np.sin(phi2)]
    return np.column_stack(cols)


def fit_visibilities(samples: Sequence[FringeSample], model: FitModel, *,
                     known_phases: tuple[float, float] | None = None) -> FitResult:
    """Recover fringe visibilities from samples by ordinary least squares.

    The fit runs on the cosine/sine basis of the fringe decomposition and
    folds each quadrature pair back into an amplitude and a phase offset,
    so it is linear, deterministic, and needs no initial guess.  The
    general model additionally needs the known squeezing phases (λ₁, λ₂)
    to convert the single-phase fringe amplitude into the mixed
    visibility; at λ₁+λ₂ = π those fringes vanish identically and v_m is
    not identifiable, which is reported as ill conditioning.
    """
    n_params = _MODEL_COLUMNS[model]
    if len(samples) < 2 * n_params:
        raise ValueError(
            f"need at least {2 * n_params} samples for a {n_params}-parameter model, "
            f"got {len(samples)}"
        )
    if model is FitModel.GENERAL and known_phases is None:
        raise ValueError("the general model needs known_phases=(lam1, lam2)")
    phi1 = np.array([s.phi1 for s in samples], dtype=float)
    phi2 = np.array([s.phi2 for s in samples], dtype=float)
    y = np.array([s.value for s in samples], dtype=float)
    design = _design_matrix(phi1, phi2, model)
    cond = float(np.linalg.cond(design))
    if not math.isfinite(cond) or cond > _COND_LIMIT:
        raise IllConditionedError(
            f"phase design condition number {cond:.3g} exceeds {_COND_LIMIT:.0e}"
        )
    coeffs, _, _, _ = np.linalg.lstsq(design, y, rcond=None)
    amplitude = float(coeffs[0])
    if amplitude <= 0.0:
        raise IllConditionedError("fitted fringe amplitude is not positive")
    residual = float(np.sqrt(np.mean((design @ coeffs - y) ** 2)))

    v_minus = float(np.hypot(coeffs[1], coeffs[2])) / amplitude
    v_plus = 0.0
    offset = 0.0
    v_m = 0.0
    if model in (FitModel.IN_OUT, FitModel.GENERAL):
        mag = float(np.hypot(coeffs[3], coeffs[4])) / amplitude
        if mag > 1e-12:
            v_plus = mag
            offset = math.atan2(-coeffs[4], coeffs[3])
    if model is FitModel.GENERAL:
        lam1, lam2 = known_phases
        direction = np.array([math.cos(lam1) + math.cos(lam2),
                              math.sin(lam1) - math.sin(lam2)])
        norm_sq = float(direction @ direction)  # = 4 cos²((λ₁+λ₂)/2)
        if norm_sq < 1e-12:
            raise IllConditionedError(
                "single-phase fringes vanish at lam1 + lam2 = pi; "
                "v_m is not identifiable, use the in/out model"
            )
        proj1 = float(coeffs[5:7] @ direction) / norm_sq
        proj2 = float(coeffs[7:9] @ direction) / norm_sq
        v_m = 0.5 * (proj1 + proj2) / amplitude
        if abs(v_m) < 1e-14:
            v_m = 0.0
    record = VisibilityRecord(v_minus, v_plus, v_m, offset)
    return FitResult(record, amplitude, residual, cond)
