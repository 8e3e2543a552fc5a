"""Truncated Fock-basis brute force for Gaussian states.

Densities are assembled constructively: a (quasi-)thermal diagonal is
conjugated by exactly unitary truncated squeeze, two-mode squeeze, beam
splitter and phase operators, all obtained by exponentiating the truncated
anti-Hermitian generators through a dense Hermitian eigendecomposition.
Correctness is defined by moment matching against the stored second
moments, not by matching any normally ordered operator expansion entrywise.

Every constructor works in an enlarged space of twice the requested cutoff
and projects the result down.  The beam splitter conserves total photon
number and the two-mode squeezer the photon-number difference, so with the
doubled working space no truncation junk can reach the retained block: the
returned entries are those of the untruncated state up to the (tiny)
weight beyond the working space, and the trace deficit measures the genuine
photon-number tail of the state.

None of the routines here consults the Wick engine, so moments, purities,
witness expectations and partial-transpose spectra computed from these
matrices are independent checks of every closed form in the package.

Thermal occupations n̄ slightly below zero are admitted internally: they
produce Hermitian, trace-one constructions with alternating-sign weights
whose negative eigenvalues certify that the requested second moments do
not belong to a physical state.  Public constructors reject such inputs.
"""

from __future__ import annotations

import cmath
import functools
import math
import struct
from dataclasses import dataclass

import numpy as np

from .states import (
    GaussianMixture,
    NonPhysicalStateError,
    OneModeGaussian,
    OperatorWord,
    TwoModeGaussian,
)
from .witnesses import WitnessKind

EPS_EIG = 1e-8
EPS_TR = 1e-6
CUTOFF_SCHEDULE = (15, 25, 40)

_HERMITICITY_TOL = 1e-12
_MIN_RADICAND = 1e-12
_WEIGHT_FLOOR = 1e-18
_DUMP_HEADER = struct.Struct("<IIII")


class ConvergenceError(RuntimeError):
    """Truncated trace has not converged at the requested cutoff."""

    def __init__(self, message: str, deficit: float):
        super().__init__(message)
        self.deficit = deficit


class UnsupportedStateError(ValueError):
    """Second-moment pattern outside the families this oracle can assemble."""


# --- ladder matrices and exact-unitary exponentials --------------------------

def annihilation(cutoff: int) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(1, cutoff, dtype=float)), k=1).astype(complex)


def creation(cutoff: int) -> np.ndarray:
    return annihilation(cutoff).conj().T


def _expm_antihermitian(g: np.ndarray) -> np.ndarray:
    """exp(g) for anti-Hermitian g, exactly unitary up to round-off."""
    h = 1j * g
    asym = np.max(np.abs(h - h.conj().T))
    if asym > 1e-10:
        raise ValueError(f"generator is not anti-Hermitian (deviation {asym:.3g})")
    w, v = np.linalg.eigh((h + h.conj().T) / 2.0)
    return (v * np.exp(-1j * w)) @ v.conj().T


def squeeze_unitary(cutoff: int, r: float, phi: float) -> np.ndarray:
    """exp(½(ξ* a² − ξ a†²)) with ξ = r e^{iφ}, truncated."""
    a = annihilation(cutoff)
    xi = r * cmath.exp(1j * phi)
    g = 0.5 * (np.conj(xi) * (a @ a) - xi * (a.conj().T @ a.conj().T))
    return _expm_antihermitian(g)


def displacement_unitary(cutoff: int, alpha: complex) -> np.ndarray:
    """exp(α a† − α* a), truncated."""
    a = annihilation(cutoff)
    g = alpha * a.conj().T - np.conj(alpha) * a
    return _expm_antihermitian(g)


@dataclass(frozen=True)
class BlockUnitary:
    """Unitary that is block diagonal after sorting the basis by a grading.

    Quadratic two-mode generators conserve a grading of the Fock basis
    (total photon number for the beam splitter, photon-number difference
    for the two-mode squeezer), so their exponentials split into small
    dense blocks and matrix application costs far less than a dense
    product.
    """

    dim: int
    order: np.ndarray      # sorted position -> original basis index
    inverse: np.ndarray    # original basis index -> sorted position
    slices: tuple
    blocks: tuple

    def dense(self) -> np.ndarray:
        u = np.zeros((self.dim, self.dim), dtype=complex)
        for sl, blk in zip(self.slices, self.blocks):
            u[sl, sl] = blk
        return u[np.ix_(self.inverse, self.inverse)]

    def apply_columns(self, mat: np.ndarray) -> np.ndarray:
        """U @ mat for a stack of column vectors in the original basis."""
        m_s = mat[self.order, :]
        out = np.empty_like(m_s)
        for sl, blk in zip(self.slices, self.blocks):
            out[sl, :] = blk @ m_s[sl, :]
        return out[self.inverse, :]

    def conjugate(self, rho: np.ndarray) -> np.ndarray:
        """U ρ U† without forming the dense product."""
        rho_s = rho[np.ix_(self.order, self.order)]
        tmp = np.empty_like(rho_s)
        for sl, blk in zip(self.slices, self.blocks):
            tmp[sl, :] = blk @ rho_s[sl, :]
        out = np.empty_like(rho_s)
        for sl, blk in zip(self.slices, self.blocks):
            out[:, sl] = tmp[:, sl] @ blk.conj().T
        return out[np.ix_(self.inverse, self.inverse)]

    def column(self, index: int) -> np.ndarray:
        """Single column of the dense unitary (cheap: one block column)."""
        pos = int(self.inverse[index])
        for sl, blk in zip(self.slices, self.blocks):
            if sl.start <= pos < sl.stop:
                col = np.zeros(self.dim, dtype=complex)
                col[self.order[sl]] = blk[:, pos - sl.start]
                return col
        raise IndexError(index)


def _assemble_block_unitary(dim: int, sectors) -> BlockUnitary:
    """Build a BlockUnitary from (flat_indices, block_generator) sectors."""
    order_parts = []
    slices = []
    blocks = []
    start = 0
    for flat, gen in sectors:
        order_parts.append(flat)
        stop = start + flat.size
        slices.append(slice(start, stop))
        blocks.append(_expm_antihermitian(gen))
        start = stop
    order = np.concatenate(order_parts)
    inverse = np.empty(dim, dtype=np.intp)
    inverse[order] = np.arange(dim)
    return BlockUnitary(dim, order, inverse, tuple(slices), tuple(blocks))


@functools.lru_cache(maxsize=8)
def beam_splitter_unitary(cutoff: int, lam: float) -> BlockUnitary:
    """Unitary V with V†aV = (a + b e^{iλ})/√2 and V†bV = (a − b e^{iλ})/√2.

    Built sector by sector: the 50/50 mixer conserves the total photon
    number N, and within a sector the generator is tridiagonal in the
    photon imbalance.  A final phase rotation b → −b e^{iλ} fixes the sign
    convention of the second output port.
    """
    kappa = math.pi / 4.0
    phase = cmath.exp(1j * lam)
    sectors = []
    for total in range(2 * cutoff - 1):
        j_lo = max(0, total - cutoff + 1)
        j_hi = min(total, cutoff - 1)
        js = np.arange(j_lo, j_hi + 1)
        flat = js * cutoff + (total - js)
        size = js.size
        gen = np.zeros((size, size), dtype=complex)
        if size > 1:
            # a†b couples |j, N−j⟩ to |j+1, N−j−1⟩ with amplitude √((j+1)(N−j)).
            amp = kappa * np.sqrt((js[:-1] + 1.0) * (total - js[:-1]))
            gen[np.arange(1, size), np.arange(size - 1)] = phase * amp
            gen[np.arange(size - 1), np.arange(1, size)] = -np.conj(phase) * amp
        sectors.append((flat, gen))
    mixer = _assemble_block_unitary(cutoff * cutoff, sectors)
    nb = np.tile(np.arange(cutoff), cutoff)
    rot_s = np.exp(1j * (lam + math.pi) * nb)[mixer.order]
    blocks = tuple(rot_s[sl][:, None] * blk for sl, blk in zip(mixer.slices, mixer.blocks))
    return BlockUnitary(mixer.dim, mixer.order, mixer.inverse, mixer.slices, blocks)


def two_mode_squeeze_unitary(cutoff: int, r: float, phi: float) -> BlockUnitary:
    """exp(ξ* ab − ξ a†b†) with ξ = r e^{iφ}, truncated.

    Conserves the photon-number difference d = n_a − n_b; within a sector
    the generator is tridiagonal in the pair count.
    """
    xi = r * cmath.exp(1j * phi)
    sectors = []
    for d in range(-(cutoff - 1), cutoff):
        js = np.arange(max(0, d), cutoff + min(0, d))
        ks = js - d
        flat = js * cutoff + ks
        size = js.size
        gen = np.zeros((size, size), dtype=complex)
        if size > 1:
            # a†b† couples |j, j−d⟩ to |j+1, j−d+1⟩ with amplitude √((j+1)(j−d+1)).
            amp = np.sqrt((js[:-1] + 1.0) * (ks[:-1] + 1.0))
            gen[np.arange(1, size), np.arange(size - 1)] = -xi * amp
            gen[np.arange(size - 1), np.arange(1, size)] = np.conj(xi) * amp
        sectors.append((flat, gen))
    return _assemble_block_unitary(cutoff * cutoff, sectors)


def rotation_phases(cutoff: int, theta_a: float, theta_b: float) -> np.ndarray:
    """Diagonal of exp(i(θ_a a†a + θ_b b†b)) on the two-mode basis."""
    na = np.repeat(np.arange(cutoff), cutoff)
    nb = np.tile(np.arange(cutoff), cutoff)
    return np.exp(1j * (theta_a * na + theta_b * nb))


# --- squeezed-thermal decompositions -----------------------------------------

@dataclass(frozen=True)
class _SqueezedThermal:
    """Factorization ρ = S(r, φ) ρ_thermal(n̄) S†; n̄ < 0 marks a quasi state."""

    nbar: float
    r: float
    phi: float


def _solve_squeezed_thermal(n: float, m: complex):
    """Solve (n̄, r, φ) from n + ½ = (n̄+½) cosh 2r and m = e^{iφ}(n̄+½) sinh 2r.

    Returns None when (n+½)² ≤ |m|², in which case no (even quasi-thermal)
    decomposition exists; such moments violate the Cauchy-Schwarz bound
    |⟨aa⟩|² ≤ n(n+1) by a wide margin and never describe a state.
    """
    radicand = (n + 0.5) ** 2 - abs(m) ** 2
    if radicand <= _MIN_RADICAND:
        return None
    half_width = math.sqrt(radicand)
    r = 0.5 * math.asinh(abs(m) / half_width)
    phi = cmath.phase(m) if abs(m) > 0.0 else 0.0
    return _SqueezedThermal(half_width - 0.5, r, phi)


def _thermal_weights(nbar: float, cutoff: int) -> np.ndarray:
    q = nbar / (nbar + 1.0)
    return (1.0 - q) * q ** np.arange(cutoff)


def _working_cutoff(cutoff: int) -> int:
    return 2 * cutoff


def _one_mode_matrix(st: _SqueezedThermal, cutoff: int) -> np.ndarray:
    """Restricted matrix of the squeezed thermal state, assembled at twice
    the cutoff so the retained block carries no truncation junk."""
    cw = _working_cutoff(cutoff)
    w = _thermal_weights(st.nbar, cw)
    if st.r == 0.0:
        rho = np.diag(w).astype(complex)
    else:
        s = squeeze_unitary(cw, st.r, st.phi)
        rho = (s * w) @ s.conj().T
    rho = rho[:cutoff, :cutoff]
    return (rho + rho.conj().T) / 2.0


def _factor_columns(st: _SqueezedThermal, cw: int):
    """Scaled eigenvector columns of the factor density at the working cutoff."""
    w = _thermal_weights(st.nbar, cw)
    keep = np.flatnonzero(np.abs(w) > _WEIGHT_FLOOR)
    if st.r == 0.0:
        vectors = np.zeros((cw, keep.size), dtype=complex)
        vectors[keep, np.arange(keep.size)] = 1.0
    else:
        vectors = squeeze_unitary(cw, st.r, st.phi)[:, keep]
    return vectors, w[keep]


def _restricted_flat_indices(cutoff: int, cw: int) -> np.ndarray:
    ia = np.repeat(np.arange(cutoff), cutoff)
    ib = np.tile(np.arange(cutoff), cutoff)
    return ia * cw + ib


def _accumulate_outer(rho: np.ndarray, columns: np.ndarray, weights: np.ndarray) -> None:
    """rho += Σ_k weights[k] · columns[:,k] columns[:,k]†, sign-aware."""
    pos = weights > 0.0
    if pos.any():
        c = columns[:, pos] * np.sqrt(weights[pos])
        rho += c @ c.conj().T
    neg = ~pos
    if neg.any():
        c = columns[:, neg] * np.sqrt(-weights[neg])
        rho -= c @ c.conj().T


def _mix_on_beam_splitter(f1: _SqueezedThermal, f2: _SqueezedThermal, lam: float,
                          theta_c: float, theta_d: float, cutoff: int) -> np.ndarray:
    """Restricted density of R(θc, θd) · V_λ (ρ₁ ⊗ ρ₂) V_λ† · R†.

    Works rank by rank at the doubled cutoff: the mixer conserves total
    photon number, so dropping working-space components can only remove
    sectors that the restriction discards anyway.
    """
    cw = _working_cutoff(cutoff)
    v1, w1 = _factor_columns(f1, cw)
    v2, w2 = _factor_columns(f2, cw)
    mixer = beam_splitter_unitary(cw, lam)
    restrict = _restricted_flat_indices(cutoff, cw)
    dim = cutoff * cutoff
    col_parts = []
    weight_parts = []
    for j in range(v1.shape[1]):
        keep = np.flatnonzero(np.abs(w1[j] * w2) > _WEIGHT_FLOOR)
        if keep.size == 0:
            continue
        chunk = np.einsum("a,bk->abk", v1[:, j], v2[:, keep]).reshape(cw * cw, keep.size)
        col_parts.append(mixer.apply_columns(chunk)[restrict, :])
        weight_parts.append(w1[j] * w2[keep])
    rho = np.zeros((dim, dim), dtype=complex)
    if col_parts:
        _accumulate_outer(rho, np.hstack(col_parts), np.concatenate(weight_parts))
    if theta_c != 0.0 or theta_d != 0.0:
        d = rotation_phases(cutoff, theta_c, theta_d)
        rho = d[:, None] * rho * d.conj()[None, :]
    return rho


def _two_mode_squeezed_thermal(nbar: float, r: float, phi: float, cutoff: int) -> np.ndarray:
    """Restricted density of S₂(r, φ) (ρ_th ⊗ ρ_th) S₂†, assembled columnwise."""
    cw = _working_cutoff(cutoff)
    w = _thermal_weights(nbar, cw)
    keep = np.flatnonzero(np.abs(w) > _WEIGHT_FLOOR)
    u = two_mode_squeeze_unitary(cw, r, phi)
    restrict = _restricted_flat_indices(cutoff, cw)
    dim = cutoff * cutoff
    columns = []
    weights = []
    for j in keep:
        for k in keep:
            weight = w[j] * w[k]
            if abs(weight) <= _WEIGHT_FLOOR:
                continue
            columns.append(u.column(int(j) * cw + int(k))[restrict])
            weights.append(weight)
    rho = np.zeros((dim, dim), dtype=complex)
    if columns:
        _accumulate_outer(rho, np.column_stack(columns), np.asarray(weights))
    return rho


# --- density container --------------------------------------------------------

@dataclass(frozen=True)
class FockDensity:
    """Truncated Fock-basis density matrix with cutoff metadata.

    ``trace_deficit`` is 1 − Tr ρ, the photon-number weight of the state
    beyond the cutoff.  The matrix is stored read-only; treat the value as
    immutable.
    """

    modes: int
    cutoff: int
    matrix: np.ndarray
    trace_deficit: float

    def __post_init__(self):
        if self.modes not in (1, 2):
            raise ValueError("only one- or two-mode densities are supported")
        if self.cutoff < 2:
            raise ValueError("cutoff must be at least 2")
        dim = self.cutoff ** self.modes
        mat = np.asarray(self.matrix, dtype=complex)
        if mat.shape != (dim, dim):
            raise ValueError(f"matrix shape {mat.shape} does not match cutoff^modes = {dim}")
        herm = np.max(np.abs(mat - mat.conj().T))
        if herm > _HERMITICITY_TOL:
            raise ValueError(f"matrix is not Hermitian (deviation {herm:.3g})")
        mat = mat.copy()
        mat.flags.writeable = False
        object.__setattr__(self, "matrix", mat)
        object.__setattr__(self, "trace_deficit", float(self.trace_deficit))

    @property
    def dim(self) -> int:
        return self.cutoff ** self.modes

    def trace(self) -> float:
        return float(np.trace(self.matrix).real)

    def renormalized(self) -> np.ndarray:
        return self.matrix / self.trace()

    def purity(self) -> float:
        """Tr ρ² of the trace-renormalized matrix."""
        rho = self.renormalized()
        return float(np.sum(np.abs(rho) ** 2))

    def min_eigenvalue(self) -> float:
        """Smallest eigenvalue of the trace-renormalized matrix."""
        return float(np.linalg.eigvalsh(self.renormalized())[0])

    def diagonal(self) -> np.ndarray:
        return self.matrix.diagonal().real.copy()


def _finish(modes: int, cutoff: int, mat: np.ndarray, eps_tr: float) -> FockDensity:
    mat = (mat + mat.conj().T) / 2.0
    deficit = 1.0 - float(np.trace(mat).real)
    if abs(deficit) >= eps_tr:
        raise ConvergenceError(
            f"trace deficit {deficit:.3g} at cutoff {cutoff} exceeds {eps_tr:.3g}",
            deficit,
        )
    return FockDensity(modes, cutoff, mat, deficit)


# --- constructors -------------------------------------------------------------

def one_mode_density(s: OneModeGaussian, cutoff: int, *, eps_tr: float = EPS_TR) -> FockDensity:
    """Assemble a one-mode state as a squeeze-conjugated thermal diagonal.

    The second moments of the result match (n, m) up to the cutoff tail,
    and the trace deficit reports exactly that tail.
    """
    if cutoff < 2:
        raise ValueError("cutoff must be at least 2")
    if not s.is_physical():
        raise NonPhysicalStateError(
            f"|m|^2 = {abs(s.m) ** 2:.6g} exceeds n(n+1) = {s.n * (s.n + 1):.6g}"
        )
    st = _solve_squeezed_thermal(s.n, s.m)
    if st is None or st.nbar < -1e-12:
        raise NonPhysicalStateError("no squeezed-thermal decomposition exists")
    return _finish(1, cutoff, _one_mode_matrix(st, cutoff), eps_tr)


def bs_output_density(sa: OneModeGaussian, sb: OneModeGaussian, lam: float,
                      cutoff: int, *, eps_tr: float = EPS_TR) -> FockDensity:
    """Tensor the two input states and conjugate by the beam splitter."""
    for s in (sa, sb):
        if not s.is_physical():
            raise NonPhysicalStateError(
                f"|m|^2 = {abs(s.m) ** 2:.6g} exceeds n(n+1) = {s.n * (s.n + 1):.6g}"
            )
    f1 = _solve_squeezed_thermal(sa.n, sa.m)
    f2 = _solve_squeezed_thermal(sb.n, sb.m)
    if f1 is None or f2 is None or f1.nbar < -1e-12 or f2.nbar < -1e-12:
        raise NonPhysicalStateError("no squeezed-thermal decomposition exists")
    mat = _mix_on_beam_splitter(f1, f2, lam, 0.0, 0.0, cutoff)
    return _finish(2, cutoff, mat, eps_tr)


@dataclass(frozen=True)
class _TwoModePlan:
    """Constructive recipe whose unitary part leaves the spectrum alone.

    route ``tensor``:  kron of the two factors.
    route ``tms``:     thermal ⊗ thermal conjugated by a two-mode squeezer.
    route ``bs``:      factors mixed on a 50/50 splitter, then local rotations.
    """

    route: str
    factor1: _SqueezedThermal
    factor2: _SqueezedThermal
    tms_r: float = 0.0
    tms_phi: float = 0.0
    theta_c: float = 0.0
    theta_d: float = 0.0


def _plan_two_mode(state: TwoModeGaussian):
    """Pick a constructive route for the state's moment pattern.

    Returns None when the moments provably belong to no state (no formal
    decomposition exists).  Raises UnsupportedStateError for patterns
    outside the supported families: unequal |⟨aa⟩| and |⟨bb⟩| alongside
    cross correlations, or a cross moment ⟨a†b⟩ whose phase is
    incompatible with the per-mode squeezing phases.
    """
    scale = 1.0 + state.n + abs(state.m_a) + abs(state.m_b) + abs(state.m_c) + abs(state.m_x)
    tol = 1e-12 * scale
    if abs(state.m_c) <= tol and abs(state.m_x) <= tol:
        f1 = _solve_squeezed_thermal(state.n, state.m_a)
        f2 = _solve_squeezed_thermal(state.n, state.m_b)
        if f1 is None or f2 is None:
            return None
        return _TwoModePlan("tensor", f1, f2)
    if abs(state.m_a) <= tol and abs(state.m_b) <= tol and abs(state.m_x) <= tol:
        st = _solve_squeezed_thermal(state.n, state.m_c)
        if st is None:
            return None
        thermal = _SqueezedThermal(st.nbar, 0.0, 0.0)
        return _TwoModePlan("tms", thermal, thermal, tms_r=st.r, tms_phi=st.phi)
    fa, fb = abs(state.m_a), abs(state.m_b)
    if abs(fa - fb) > 1e-9 * max(1.0, fa, fb):
        raise UnsupportedStateError(
            "general construction needs equal per-mode squeezing magnitudes"
        )
    f = 0.5 * (fa + fb)
    theta_c = 0.5 * cmath.phase(state.m_a) if fa > tol else 0.0
    theta_d = 0.5 * cmath.phase(state.m_b) if fb > tol else 0.0
    z = state.m_c * cmath.exp(-1j * (theta_c + theta_d))
    x = state.m_x * cmath.exp(-1j * (theta_d - theta_c))
    if abs(x.imag) > 1e-9 * max(1.0, abs(x)):
        raise UnsupportedStateError(
            "cross moment ⟨a†b⟩ phase is incompatible with the squeezing phases"
        )
    nu1 = state.n + x.real
    nu2 = state.n - x.real
    if nu1 < 0.0 or nu2 < 0.0:
        return None
    f1 = _solve_squeezed_thermal(nu1, f + z)
    f2 = _solve_squeezed_thermal(nu2, f - z)
    if f1 is None or f2 is None:
        return None
    return _TwoModePlan("bs", f1, f2, theta_c=theta_c, theta_d=theta_d)


def _assemble_two_mode(plan: _TwoModePlan, cutoff: int) -> np.ndarray:
    if plan.route == "tensor":
        return np.kron(_one_mode_matrix(plan.factor1, cutoff),
                       _one_mode_matrix(plan.factor2, cutoff))
    if plan.route == "tms":
        return _two_mode_squeezed_thermal(plan.factor1.nbar, plan.tms_r, plan.tms_phi, cutoff)
    return _mix_on_beam_splitter(plan.factor1, plan.factor2, 0.0,
                                 plan.theta_c, plan.theta_d, cutoff)


def two_mode_density(state, cutoff: int, *, eps_tr: float = EPS_TR) -> FockDensity:
    """Assemble a two-mode state or mixture in the truncated Fock basis.

    Dispatches on the moment pattern: product states are tensored,
    cross-correlated unsqueezed states go through the two-mode squeezer,
    and states with both per-mode squeezing and cross correlations are
    realized as a rotated beam-splitter image of two factor states (every
    such state with equal per-mode squeezing magnitudes is one).  Mixtures
    are weighted sums.
    """
    if isinstance(state, GaussianMixture):
        mat = None
        for w, comp in state.components:
            part = two_mode_density(comp, cutoff, eps_tr=eps_tr).matrix
            mat = w * part if mat is None else mat + w * part
        return _finish(2, cutoff, mat, eps_tr)
    if not isinstance(state, TwoModeGaussian):
        raise TypeError(f"unsupported state type {type(state).__name__}")
    plan = _plan_two_mode(state)
    if plan is None or plan.factor1.nbar < -1e-12 or plan.factor2.nbar < -1e-12:
        raise NonPhysicalStateError("second moments do not describe a physical state")
    return _finish(2, cutoff, _assemble_two_mode(plan, cutoff), eps_tr)


def physicality_summary(state: TwoModeGaussian, cutoff: int):
    """(min eigenvalue, trace deficit) of the two-mode candidate at cutoff.

    The candidate is the working-space construction before projection: a
    diagonal of products of (quasi-)thermal weights conjugated by exactly
    unitary factors.  Its spectrum therefore equals that diagonal and its
    trace is the product of the factor traces, both available without
    assembling a matrix.  A negative weight certifies nonphysical moments
    at any cutoff, since truncation only drops tail entries of the exact
    spectrum.  Returns None when no candidate exists at all, which also
    certifies nonphysical moments because every state obeys
    |⟨aa⟩| < n + ½ and |⟨ab⟩| < n + ½.
    """
    plan = _plan_two_mode(state)
    if plan is None:
        return None
    w1 = _thermal_weights(plan.factor1.nbar, cutoff)
    w2 = _thermal_weights(plan.factor2.nbar, cutoff)
    extremes1 = (w1.min(), w1.max())
    extremes2 = (w2.min(), w2.max())
    min_eig = min(e1 * e2 for e1 in extremes1 for e2 in extremes2)
    deficit = 1.0 - float(w1.sum() * w2.sum())
    return float(min_eig), deficit


# --- measurements -------------------------------------------------------------

@functools.lru_cache(maxsize=512)
def _ladder_power_product(cutoff: int, n_create: int, n_annihilate: int) -> np.ndarray:
    ad = creation(cutoff)
    a = annihilation(cutoff)
    out = np.linalg.matrix_power(ad, n_create) @ np.linalg.matrix_power(a, n_annihilate)
    out.flags.writeable = False
    return out


def moment(rho: FockDensity, word: OperatorWord) -> complex:
    """Tr{ρ · a†^i b†^j a^k b^l} by explicit ladder-matrix products."""
    if len(word) > rho.cutoff // 2:
        raise ValueError(
            f"word of length {len(word)} is truncation-unsafe at cutoff {rho.cutoff}"
        )
    ca, cb, aa, ab = word.counts()
    if rho.modes == 1:
        if cb or ab:
            raise ValueError("one-mode density cannot take words containing mode b")
        k = _ladder_power_product(rho.cutoff, ca, aa)
        return complex(np.einsum("ij,ji->", rho.matrix, k))
    c = rho.cutoff
    ka = _ladder_power_product(c, ca, aa)
    kb = _ladder_power_product(c, cb, ab)
    rho4 = rho.matrix.reshape(c, c, c, c)
    partial = np.tensordot(rho4, ka, axes=([0, 2], [1, 0]))
    return complex(np.tensordot(partial, kb, axes=([0, 1], [1, 0])))


def moment_table(rho: FockDensity, max_len: int) -> dict:
    """All normally ordered ladder moments with total length 1 .. max_len.

    Keys are exponent tuples (i, j, k, l) for a†^i b†^j a^k b^l (j = l = 0
    on one-mode densities).  The two-mode density is reshaped once so that
    each distinct mode-a factor costs a single matrix-vector product and
    each word a vector dot, which keeps the full table about as cheap as a
    handful of single moments.
    """
    if max_len > rho.cutoff // 2:
        raise ValueError(
            f"words of length {max_len} are truncation-unsafe at cutoff {rho.cutoff}"
        )
    c = rho.cutoff
    if rho.modes == 1:
        out = {}
        for i in range(max_len + 1):
            for k in range(max_len + 1 - i):
                if i + k >= 1:
                    op = _ladder_power_product(c, i, k)
                    out[(i, 0, k, 0)] = complex(np.einsum("ij,ji->", rho.matrix, op))
        return out
    # R[(ib,jb), (ja,ia)] = rho[(ia,ib), (ja,jb)]; one zgemm gives every
    # mode-a partial trace at once.
    r_flat = np.ascontiguousarray(
        rho.matrix.reshape(c, c, c, c).transpose(1, 3, 2, 0).reshape(c * c, c * c)
    )
    a_pairs = [(i, k) for i in range(max_len + 1) for k in range(max_len + 1 - i)]
    ka_stack = np.column_stack(
        [_ladder_power_product(c, i, k).ravel() for i, k in a_pairs]
    )
    partials = r_flat @ ka_stack
    out = {}
    for col, (i, k) in enumerate(a_pairs):
        partial = partials[:, col]
        for j in range(max_len + 1 - i - k):
            for l in range(max_len + 1 - i - k - j):
                if i + j + k + l >= 1:
                    kb_vec = _ladder_power_product(c, j, l).T.ravel()
                    out[(i, j, k, l)] = complex(partial @ kb_vec)
    return out


def ppt_min_eigenvalue(rho: FockDensity) -> float:
    """Smallest eigenvalue after transposing the second mode's indices.

    Nonnegative (up to truncation noise) for separable states; strictly
    negative values certify entanglement.
    """
    if rho.modes != 2:
        raise ValueError("partial transpose needs a two-mode density")
    c = rho.cutoff
    pt = rho.renormalized().reshape(c, c, c, c).transpose(0, 3, 2, 1).reshape(c * c, c * c)
    pt = (pt + pt.conj().T) / 2.0
    return float(np.linalg.eigvalsh(pt)[0])


def expectation_of_witness(rho: FockDensity, kind: WitnessKind) -> float:
    """Witness expectation from ladder-matrix moments of this density alone."""
    if kind is WitnessKind.W2:
        if rho.modes != 1:
            raise ValueError("single-mode witness needs a one-mode density")
        n1 = moment(rho, OperatorWord.from_counts(create_a=1, annihilate_a=1)).real
        if abs(n1) < 1e-12:
            raise ZeroDivisionError("witness normalization vanishes (vacuum)")
        n2 = moment(rho, OperatorWord.from_counts(create_a=2, annihilate_a=2)).real
        return 3.0 - n2 / n1 ** 2
    if kind is WitnessKind.WHBT:
        if rho.modes != 2:
            raise ValueError("intensity witness needs a two-mode density")
        cross = moment(rho, OperatorWord.from_counts(1, 1, 1, 1)).real
        sq_ba = moment(rho, OperatorWord.from_counts(create_b=2, annihilate_a=2))
        sq_ab = moment(rho, OperatorWord.from_counts(create_a=2, annihilate_b=2))
        i2a = moment(rho, OperatorWord.from_counts(create_a=2, annihilate_a=2)).real
        i2b = moment(rho, OperatorWord.from_counts(create_b=2, annihilate_b=2)).real
        denominator = i2a + i2b + 2.0 * cross
        if abs(denominator) < 1e-12:
            raise ZeroDivisionError("witness normalization vanishes (vacuum)")
        numerator = 2.0 * cross + (sq_ba + sq_ab).real
        return 0.5 - numerator / denominator
    raise ValueError(f"unknown witness kind {kind!r}")


# --- debug dump ---------------------------------------------------------------

def save_density(rho: FockDensity, path) -> None:
    """Binary dump: 16-byte header (modes, cutoff, two reserved words, each a
    little-endian uint32) followed by the matrix row-major as little-endian
    float64 (re, im) pairs."""
    with open(path, "wb") as fh:
        fh.write(_DUMP_HEADER.pack(rho.modes, rho.cutoff, 0, 0))
        fh.write(np.ascontiguousarray(rho.matrix).astype("<c16").tobytes())


def load_density(path) -> FockDensity:
    """Read a dump written by ``save_density``; the deficit is recomputed."""
    with open(path, "rb") as fh:
        modes, cutoff, _, _ = _DUMP_HEADER.unpack(fh.read(_DUMP_HEADER.size))
        dim = cutoff ** modes
        raw = fh.read(dim * dim * 16)
    mat = np.frombuffer(raw, dtype="<c16").reshape(dim, dim).astype(complex)
    deficit = 1.0 - float(np.trace(mat).real)
    return FockDensity(modes, cutoff, mat, deficit)
