"""Analytic separability and classicality criteria for two-mode families,
threshold curves for the thermal-diluted comparison, and the oracle-backed
physicality check for general states.

Boundary cases count as separable throughout: the analytic entanglement
statements are strict inequalities, so thresholds sit on the separable side.
"""

from __future__ import annotations

import functools
import math

from . import fock
from .states import (
    EPS_CLS,
    EPS_PHYS,
    GaussianMixture,
    NonPhysicalStateError,
    TwoModeGaussian,
)


class InconclusiveError(RuntimeError):
    """Oracle could not certify physicality within the cutoff schedule."""


def epr_is_entangled(n: float, mc_abs: float) -> bool:
    """Cross-correlated family: entangled exactly when |m_c| > n."""
    if mc_abs ** 2 > n * (n + 1.0) + EPS_PHYS:
        raise NonPhysicalStateError(
            f"|m_c|^2 = {mc_abs ** 2:.6g} exceeds n(n+1) = {n * (n + 1):.6g}"
        )
    return mc_abs > n + EPS_CLS


def bs_output_is_separable(n: float, m_abs: float, lam: float) -> bool:
    """Beam-splitter output of two equally squeezed inputs with phase λ.

    Separable exactly when |m|² + √((1−cos 2λ)/2)·|m| ≤ n(n+1); the
    boundary counts as separable.  At λ = 0 this is the physicality bound
    itself, so physical inputs can never entangle there; at λ = π/2 it
    tightens to |m|² + |m| ≤ n(n+1).
    """
    coefficient = math.sqrt(max(0.0, (1.0 - math.cos(2.0 * lam)) / 2.0))
    return m_abs ** 2 + coefficient * m_abs <= n * (n + 1.0) + EPS_PHYS


def general_is_separable(n: float, m: float, m_c: float, lam1: float, lam2: float) -> bool:
    """Equal-magnitude squeezing with phases λ₁, λ₂ plus a real cross moment.

    Separable exactly when
    m² + m_c² + |m_c| √(1 + 2(1 + cos(λ₁+λ₂)) m²) ≤ n(n+1).
    With λ₁+λ₂ = π this reduces to the beam-splitter-output criterion on
    the overlapping sub-family.
    """
    lhs = (
        m ** 2
        + m_c ** 2
        + abs(m_c) * math.sqrt(1.0 + 2.0 * (1.0 + math.cos(lam1 + lam2)) * m ** 2)
    )
    return lhs <= n * (n + 1.0) + EPS_PHYS


def werner_hbt_threshold(n: float) -> float:
    """Mixing probability above which the intensity witness turns negative
    for a maximally correlated component: p > n/(n+1)."""
    if n <= 0:
        raise ValueError("threshold defined for n > 0")
    return n / (n + 1.0)


def werner_ppt_threshold(n: float) -> float:
    """Mixing probability above which the partial transpose gains a negative
    eigenvalue for a maximally correlated component:
    p > (1 + √((1+n)/n) · (1+2n²)² / (n(1+2n)(1+n²)))⁻¹."""
    if n <= 0:
        raise ValueError("threshold defined for n > 0")
    factor = math.sqrt((1.0 + n) / n) * (1.0 + 2.0 * n ** 2) ** 2 / (n * (1.0 + 2.0 * n) * (1.0 + n ** 2))
    return 1.0 / (1.0 + factor)


def _provably_nonphysical(state: TwoModeGaussian) -> bool:
    """Cheap certificates: any state obeys |⟨aa⟩|² ≤ n(n+1), |⟨ab⟩|² ≤ n(n+1)
    and |⟨a†b⟩| ≤ n (Cauchy-Schwarz on the respective operator pairs)."""
    margin = 1e-6
    bound = state.n * (state.n + 1.0) + margin
    if abs(state.m_a) ** 2 > bound or abs(state.m_b) ** 2 > bound:
        return True
    if abs(state.m_c) ** 2 > bound:
        return True
    if abs(state.m_x) > state.n + margin:
        return True
    return False


@functools.lru_cache(maxsize=4096)
def _oracle_physicality(state: TwoModeGaussian, cutoffs: tuple, eps_eig: float, eps_tr: float) -> bool:
    if _provably_nonphysical(state):
        return False
    last_deficit = None
    for cutoff in cutoffs:
        summary = fock.physicality_summary(state, cutoff)
        if summary is None:
            return False
        min_eig, deficit = summary
        # Negative weights persist at every cutoff; the verdict needs no
        # converged trace because truncation only drops tail entries of the
        # exact spectrum.
        if min_eig < -eps_eig:
            return False
        if abs(deficit) < eps_tr:
            return True
        last_deficit = deficit
    raise InconclusiveError(
        f"trace deficit {last_deficit:.3g} still above {eps_tr:.3g} at cutoff {cutoffs[-1]}"
    )


def is_physical_two_mode(state, *, cutoffs=fock.CUTOFF_SCHEDULE,
                         eps_eig: float = fock.EPS_EIG,
                         eps_tr: float = fock.EPS_TR) -> bool:
    """Physicality via the Fock-space candidate at an adaptive cutoff.

    The state is physical iff the oracle's candidate density has minimum
    eigenvalue ≥ −eps_eig with a converged trace (deficit below eps_tr)
    somewhere on the cutoff schedule.  A mixture is accepted when all of
    its components are.  Results are memoized; the cache is populated once
    per distinct value and safe for concurrent readers.
    """
    if isinstance(state, GaussianMixture):
        return all(
            is_physical_two_mode(comp, cutoffs=cutoffs, eps_eig=eps_eig, eps_tr=eps_tr)
            for _, comp in state.components
        )
    if not isinstance(state, TwoModeGaussian):
        raise TypeError(f"unsupported state type {type(state).__name__}")
    return _oracle_physicality(state, tuple(cutoffs), eps_eig, eps_tr)
