"""Cross-module concordance suite: every closed form against the Fock-space
brute force.

The suite draws random physical states, assembles their truncated densities,
and compares ladder-matrix moments, witness expectations and purity against
the Wick-engine closed forms, then brackets the partial-transpose sign flip
of the cross-correlated family around its analytic boundary.

Sampling stays within the oracle's truncation envelope.  The photon-number
tail of a squeezed thermal state decays like ((2V−1)/(2V+1))^k with
V = n + ½ + |m| the variance of the hottest quadrature, and length-six
moments weight that tail by k³, so meeting 10⁻⁴ at cutoff 40 requires
V ≲ 2.2.  The samplers therefore draw n up to 1.5 but cap squeezing and
cross-correlation magnitudes at V = 2.1, additionally staying below 90%
of the positivity boundary; boundary-pure states are covered by dedicated
lower-order and entrywise checks in the test suite instead.
"""

from __future__ import annotations

import cmath
import math
import time
from dataclasses import dataclass

import numpy as np

from . import fock
from .states import (
    OneModeGaussian,
    OperatorWord,
    TwoModeGaussian,
    purity_one_mode,
    wick_moment,
)
from .transforms import beam_splitter, mode_rotation, werner_mix
from .witnesses import WitnessKind, w2_expectation, whbt_expectation

DEFAULT_SEED = 20240117
MOMENT_RTOL = 1e-4
PPT_WINDOW = 0.02
VARIANCE_CAP = 2.1  # hottest-quadrature variance the cutoff-40 oracle resolves
BOUNDARY_FRACTION = 0.9


def relative_error(oracle_value, reference) -> float:
    """|oracle − reference| / (1 + |reference|)."""
    return abs(oracle_value - reference) / (1.0 + abs(reference))


def _magnitude_cap(n: float) -> float:
    return min(BOUNDARY_FRACTION * math.sqrt(n * (n + 1.0)), VARIANCE_CAP - n - 0.5)


@dataclass(frozen=True)
class CheckRecord:
    name: str
    ok: bool
    worst: float
    tolerance: float
    detail: str = ""


@dataclass(frozen=True)
class SuiteReport:
    checks: tuple[CheckRecord, ...]
    elapsed_seconds: float
    cutoff: int
    n_states: int
    seed: int

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def failures(self) -> tuple[CheckRecord, ...]:
        return tuple(c for c in self.checks if not c.ok)


def random_one_mode(rng: np.random.Generator, n_max: float = 1.5) -> OneModeGaussian:
    """Random physical one-mode state inside the truncation envelope."""
    n = float(rng.uniform(0.05, n_max))
    m_abs = float(rng.uniform(0.0, 1.0)) * _magnitude_cap(n)
    phase = float(rng.uniform(0.0, 2.0 * math.pi))
    return OneModeGaussian(n, m_abs * cmath.exp(1j * phase))


def random_two_mode(rng: np.random.Generator, n_max: float = 1.5):
    """Random physical two-mode state, cycling through the state families.

    Families: product pairs with a relative squeezing phase, cross-correlated
    unsqueezed pairs, their thermal-diluted mixtures, and locally rotated
    beam-splitter images of (possibly unequal) one-mode inputs.
    """
    family = rng.integers(0, 4)
    if family == 0:
        s = random_one_mode(rng, n_max)
        return TwoModeGaussian.pair_with_phase(s, float(rng.uniform(0.0, 2.0 * math.pi)))
    if family == 1:
        n = float(rng.uniform(0.05, n_max))
        mc_abs = float(rng.uniform(0.0, 1.0)) * _magnitude_cap(n)
        phase = float(rng.uniform(0.0, 2.0 * math.pi))
        return TwoModeGaussian.epr(n, mc_abs * cmath.exp(1j * phase))
    if family == 2:
        n = float(rng.uniform(0.05, n_max))
        mc_abs = float(rng.uniform(0.1, 1.0)) * _magnitude_cap(n)
        p = float(rng.uniform(0.05, 0.95))
        return werner_mix(TwoModeGaussian.epr(n, complex(mc_abs)), p)
    sa = random_one_mode(rng, n_max)
    sb = random_one_mode(rng, n_max)
    out = beam_splitter(sa, sb, float(rng.uniform(0.0, 2.0 * math.pi)))
    return mode_rotation(
        out,
        float(rng.uniform(0.0, math.pi)),
        float(rng.uniform(0.0, math.pi)),
    )


def _word_counts(max_len: int, two_mode: bool):
    for i in range(max_len + 1):
        for k in range(max_len + 1 - i):
            if not two_mode:
                if i + k >= 1:
                    yield (i, 0, k, 0)
                continue
            for j in range(max_len + 1 - i - k):
                for l in range(max_len + 1 - i - k - j):
                    if i + j + k + l >= 1:
                        yield (i, j, k, l)


@dataclass
class _Worst:
    err: float = 0.0
    detail: str = ""

    def update(self, err: float, detail: str):
        if err > self.err:
            self.err = err
            self.detail = detail


def run_concordance_suite(n_states: int = 50, cutoff: int = 40, max_word_len: int = 6,
                          seed: int = DEFAULT_SEED, rtol: float = MOMENT_RTOL,
                          n_max: float = 1.5, ppt_cutoff: int = 30,
                          include_ppt: bool = True) -> SuiteReport:
    """Run the full closed-form vs oracle comparison.

    Half the states are one-mode (moments, purity, single-mode witness) and
    half are two-mode across all families (moments, intensity witness); the
    partial-transpose check brackets the entanglement boundary of the
    cross-correlated family at ±0.02 around m_c = n.
    """
    start = time.perf_counter()
    rng = np.random.default_rng(seed)
    n_one = n_states // 2
    n_two = n_states - n_one

    mom1 = _Worst()
    purity_worst = _Worst()
    w2_worst = _Worst()
    for _ in range(n_one):
        s = random_one_mode(rng, n_max)
        rho = fock.one_mode_density(s, cutoff)
        table = fock.moment_table(rho, max_word_len)
        for counts, oracle_val in table.items():
            word = OperatorWord.from_counts(counts[0], counts[1], counts[2], counts[3])
            err = relative_error(oracle_val, wick_moment(s, word))
            mom1.update(err, f"word a†^{counts[0]}a^{counts[2]} on n={s.n:.4f}, m={s.m:.4f}")
        purity_err = relative_error(rho.purity(), purity_one_mode(s))
        purity_worst.update(purity_err, f"n={s.n:.4f}, |m|={abs(s.m):.4f}")
        w2_err = relative_error(
            fock.expectation_of_witness(rho, WitnessKind.W2), w2_expectation(s).value
        )
        w2_worst.update(w2_err, f"n={s.n:.4f}, |m|={abs(s.m):.4f}")

    mom2 = _Worst()
    whbt_worst = _Worst()
    for _ in range(n_two):
        state = random_two_mode(rng, n_max)
        rho = fock.two_mode_density(state, cutoff)
        table = fock.moment_table(rho, max_word_len)
        for counts, oracle_val in table.items():
            word = OperatorWord.from_counts(counts[0], counts[1], counts[2], counts[3])
            err = relative_error(oracle_val, wick_moment(state, word))
            mom2.update(err, f"word {counts} on {state}")
        whbt_err = relative_error(
            fock.expectation_of_witness(rho, WitnessKind.WHBT), whbt_expectation(state).value
        )
        whbt_worst.update(whbt_err, f"{state}")

    checks = [
        CheckRecord("one-mode moments", mom1.err < rtol, mom1.err, rtol, mom1.detail),
        CheckRecord("one-mode purity", purity_worst.err < rtol, purity_worst.err, rtol,
                    purity_worst.detail),
        CheckRecord("single-mode witness", w2_worst.err < rtol, w2_worst.err, rtol,
                    w2_worst.detail),
        CheckRecord("two-mode moments", mom2.err < rtol, mom2.err, rtol, mom2.detail),
        CheckRecord("intensity witness", whbt_worst.err < rtol, whbt_worst.err, rtol,
                    whbt_worst.detail),
    ]

    if include_ppt:
        n_ref = 1.0
        below = fock.two_mode_density(TwoModeGaussian.epr(n_ref, n_ref - PPT_WINDOW), ppt_cutoff)
        above = fock.two_mode_density(TwoModeGaussian.epr(n_ref, n_ref + PPT_WINDOW), ppt_cutoff)
        eig_below = fock.ppt_min_eigenvalue(below)
        eig_above = fock.ppt_min_eigenvalue(above)
        ok = eig_below >= -1e-6 and eig_above < -1e-6
        checks.append(CheckRecord(
            "partial-transpose boundary",
            ok,
            max(abs(min(eig_below, 0.0)), 0.0),
            1e-6,
            f"min eig at m_c = n∓{PPT_WINDOW}: {eig_below:.3g} / {eig_above:.3g}",
        ))

    elapsed = time.perf_counter() - start
    return SuiteReport(tuple(checks), elapsed, cutoff, n_states, seed)
