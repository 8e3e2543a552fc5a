"""Zero-mean Gaussian state values and their normally ordered moment algebra.

A zero-mean Gaussian state of one bosonic mode is fixed by the pair (n, m)
with ⟨a†a⟩ = n and ⟨aa⟩ = −m.  Two modes add a second squeezing moment and
the cross correlations ⟨ab⟩ = −m_c and ⟨a†b⟩ = m_x.  Every higher normally
ordered moment of such a state factorizes into a sum over perfect pairings
of these second moments (``wick_moment``), which is what makes closed-form
fourth-order interference quantities possible.

All values are immutable after construction and all operations are pure
functions, so everything in this module is safe to share between threads.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass

EPS_PHYS = 1e-9  # absolute tolerance on |m|^2 - n(n+1)
EPS_CLS = 1e-9   # absolute tolerance on n - |m|

_WORD_TOKEN_LIMIT = 16
_WEIGHT_SUM_TOL = 1e-9


class NonPhysicalStateError(ValueError):
    """Second moments that violate positivity of the density operator."""


class NotPRepresentableError(ValueError):
    """Requested a Glauber P density for a state that has none."""


class WordOrderError(ValueError):
    """Operator word is not normally ordered."""


class Classification(enum.Enum):
    """P-representability verdict for a one-mode state.

    CLASSICAL states admit a regular P density, QUANTUM states do not, and
    BOUNDARY marks the line n = |m| where the two readings of the border
    (inclusive vs strict) differ.  The boundary is reported distinctly
    instead of being folded into either side.
    """

    CLASSICAL = "classical"
    BOUNDARY = "boundary"
    QUANTUM = "quantum"


def _finite_real(x: float, name: str) -> float:
    x = float(x)
    if not math.isfinite(x):
        raise ValueError(f"{name} must be finite, got {x!r}")
    return x


def _finite_complex(z: complex, name: str) -> complex:
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ValueError(f"{name} must be finite, got {z!r}")
    return z


@dataclass(frozen=True)
class OneModeGaussian:
    """One-mode zero-mean Gaussian state with ⟨a†a⟩ = n and ⟨aa⟩ = −m.

    Construction only enforces n ≥ 0 and finiteness; physicality
    (|m|² ≤ n(n+1)) is a predicate because several formulas are also
    evaluated, flagged, for nonphysical parameter pairs.
    """

    n: float
    m: complex = 0j

    def __post_init__(self):
        object.__setattr__(self, "n", _finite_real(self.n, "n"))
        object.__setattr__(self, "m", _finite_complex(self.m, "m"))
        if self.n < 0:
            raise ValueError(f"mean photon number must be >= 0, got {self.n}")

    @classmethod
    def vacuum(cls) -> "OneModeGaussian":
        return cls(0.0, 0j)

    @classmethod
    def thermal(cls, n: float) -> "OneModeGaussian":
        return cls(n, 0j)

    def is_physical(self, tol: float = EPS_PHYS) -> bool:
        return abs(self.m) ** 2 <= self.n * (self.n + 1.0) + tol

    def is_pure(self, tol: float = EPS_PHYS) -> bool:
        return abs(abs(self.m) ** 2 - self.n * (self.n + 1.0)) <= tol


@dataclass(frozen=True)
class TwoModeGaussian:
    """Two-mode zero-mean Gaussian state with equal mean photon number.

    Moment conventions: ⟨a†a⟩ = ⟨b†b⟩ = n, ⟨aa⟩ = −m_a, ⟨bb⟩ = −m_b,
    ⟨ab⟩ = −m_c and ⟨a†b⟩ = m_x.  The beam splitter keeps per-mode photon
    numbers equal for any inputs, so a single n suffices; m_x is carried
    because unequal-photon-number inputs generate it.
    """

    n: float
    m_a: complex = 0j
    m_b: complex = 0j
    m_c: complex = 0j
    m_x: complex = 0j

    def __post_init__(self):
        object.__setattr__(self, "n", _finite_real(self.n, "n"))
        for name in ("m_a", "m_b", "m_c", "m_x"):
            object.__setattr__(self, name, _finite_complex(getattr(self, name), name))
        if self.n < 0:
            raise ValueError(f"mean photon number must be >= 0, got {self.n}")

    @classmethod
    def uncorrelated_pair(cls, sa: OneModeGaussian, sb: OneModeGaussian) -> "TwoModeGaussian":
        """Product state ρ(a) ⊗ ρ(b); the two modes must share the same n."""
        if abs(sa.n - sb.n) > EPS_CLS:
            raise ValueError("uncorrelated pair requires equal mean photon numbers")
        return cls(sa.n, sa.m, sb.m, 0j, 0j)

    @classmethod
    def pair_with_phase(cls, s: OneModeGaussian, lam: float) -> "TwoModeGaussian":
        """Two copies of s whose squeezing moments differ by ⟨bb⟩ = −m e^{iλ}."""
        return cls(s.n, s.m, s.m * cmath.exp(1j * lam), 0j, 0j)

    @classmethod
    def epr(cls, n: float, m_c: complex) -> "TwoModeGaussian":
        """Cross-correlated state without single-mode squeezing."""
        return cls(n, 0j, 0j, complex(m_c), 0j)

    @classmethod
    def thermal_pair(cls, n: float) -> "TwoModeGaussian":
        return cls(n, 0j, 0j, 0j, 0j)

    def marginal_a(self) -> OneModeGaussian:
        return OneModeGaussian(self.n, self.m_a)

    def marginal_b(self) -> OneModeGaussian:
        return OneModeGaussian(self.n, self.m_b)

    def is_uncorrelated(self, tol: float = EPS_CLS) -> bool:
        return abs(self.m_c) <= tol and abs(self.m_x) <= tol


@dataclass(frozen=True)
class GaussianMixture:
    """Finite convex combination of two-mode Gaussian states.

    Weights must lie in (0, 1] and sum to one.  Moment queries on a mixture
    are the weight-averages of the component moments.
    """

    components: tuple[tuple[float, TwoModeGaussian], ...]

    def __post_init__(self):
        comps = tuple((float(w), s) for w, s in self.components)
        if not comps:
            raise ValueError("mixture needs at least one component")
        total = 0.0
        for w, s in comps:
            if not (0.0 < w <= 1.0):
                raise ValueError(f"mixture weight {w} outside (0, 1]")
            if not isinstance(s, TwoModeGaussian):
                raise TypeError("mixture components must be TwoModeGaussian values")
            total += w
        if abs(total - 1.0) > _WEIGHT_SUM_TOL:
            raise ValueError(f"mixture weights sum to {total}, expected 1")
        object.__setattr__(self, "components", comps)


class Mode(enum.Enum):
    A = "a"
    B = "b"


@dataclass(frozen=True)
class LadderToken:
    mode: Mode
    daggered: bool

    def conjugate(self) -> "LadderToken":
        return LadderToken(self.mode, not self.daggered)

    def __str__(self) -> str:
        return self.mode.value + ("†" if self.daggered else "")


@dataclass(frozen=True)
class OperatorWord:
    """Normally ordered product of ladder operators, e.g. a†a†ab.

    Tokens are read left to right; every daggered token must precede every
    undaggered one, otherwise the word is rejected.  The moment of a word is
    well defined by its multiset of tokens because operators of different
    modes commute and equal-mode daggered (or undaggered) operators commute
    among themselves.
    """

    tokens: tuple[LadderToken, ...]

    def __post_init__(self):
        tokens = tuple(self.tokens)
        object.__setattr__(self, "tokens", tokens)
        if len(tokens) > _WORD_TOKEN_LIMIT:
            raise ValueError(f"word length {len(tokens)} exceeds limit {_WORD_TOKEN_LIMIT}")
        seen_undaggered = False
        for t in tokens:
            if not isinstance(t, LadderToken):
                raise TypeError("word tokens must be LadderToken values")
            if t.daggered and seen_undaggered:
                raise WordOrderError(f"word '{self._render(tokens)}' is not normally ordered")
            if not t.daggered:
                seen_undaggered = True

    @staticmethod
    def _render(tokens) -> str:
        return " ".join(str(t) for t in tokens)

    @classmethod
    def from_counts(cls, create_a: int = 0, create_b: int = 0,
                    annihilate_a: int = 0, annihilate_b: int = 0) -> "OperatorWord":
        """Word ``a†^i b†^j a^k b^l`` from nonnegative exponent counts."""
        for c in (create_a, create_b, annihilate_a, annihilate_b):
            if c < 0:
                raise ValueError("exponents must be nonnegative")
        tokens = (
            [LadderToken(Mode.A, True)] * create_a
            + [LadderToken(Mode.B, True)] * create_b
            + [LadderToken(Mode.A, False)] * annihilate_a
            + [LadderToken(Mode.B, False)] * annihilate_b
        )
        return cls(tuple(tokens))

    @classmethod
    def parse(cls, text: str) -> "OperatorWord":
        """Parse a whitespace-separated word, e.g. ``"ad ad a b"`` or ``"a† b"``."""
        tokens = []
        for raw in text.split():
            name = raw.lower()
            daggered = name.endswith("†") or name.endswith("d")
            if daggered:
                name = name[:-1]
            if name == "a":
                mode = Mode.A
            elif name == "b":
                mode = Mode.B
            else:
                raise ValueError(f"unknown ladder token {raw!r}")
            tokens.append(LadderToken(mode, daggered))
        return cls(tuple(tokens))

    def conjugate(self) -> "OperatorWord":
        """Hermitian conjugate word; reversal keeps it normally ordered."""
        return OperatorWord(tuple(t.conjugate() for t in reversed(self.tokens)))

    def counts(self) -> tuple[int, int, int, int]:
        """(create_a, create_b, annihilate_a, annihilate_b) token counts."""
        ca = sum(1 for t in self.tokens if t.daggered and t.mode is Mode.A)
        cb = sum(1 for t in self.tokens if t.daggered and t.mode is Mode.B)
        aa = sum(1 for t in self.tokens if not t.daggered and t.mode is Mode.A)
        ab = sum(1 for t in self.tokens if not t.daggered and t.mode is Mode.B)
        return ca, cb, aa, ab

    def uses_mode_b(self) -> bool:
        return any(t.mode is Mode.B for t in self.tokens)

    def __len__(self) -> int:
        return len(self.tokens)

    def __str__(self) -> str:
        return self._render(self.tokens)


# --- one-mode operations ----------------------------------------------------

def is_physical_one_mode(s: OneModeGaussian, tol: float = EPS_PHYS) -> bool:
    """Positivity of the density operator: |m|² ≤ n(n+1) within tolerance."""
    return s.is_physical(tol)


def _require_physical(s: OneModeGaussian):
    if not s.is_physical():
        raise NonPhysicalStateError(
            f"|m|^2 = {abs(s.m) ** 2:.6g} exceeds n(n+1) = {s.n * (s.n + 1):.6g}"
        )


def is_p_representable(s: OneModeGaussian, tol: float = EPS_CLS) -> Classification:
    """Classify against the classicality line n = |m|.

    Strictly above the line the state has a regular P density (CLASSICAL),
    strictly below it does not (QUANTUM); within ±tol of the line the
    verdict is BOUNDARY.
    """
    _require_physical(s)
    gap = s.n - abs(s.m)
    if gap > tol:
        return Classification.CLASSICAL
    if gap < -tol:
        return Classification.QUANTUM
    return Classification.BOUNDARY


@dataclass(frozen=True)
class PFunctionParams:
    """Gaussian P density P(α) = exp(coeff_nn·|α|² + 2 Re(coeff_sq·α*²)) / (π√d)."""

    d: float
    coeff_nn: float
    coeff_sq: complex

    def density(self, alpha: complex) -> float:
        alpha = complex(alpha)
        quad = self.coeff_nn * abs(alpha) ** 2 + 2.0 * (self.coeff_sq * alpha.conjugate() ** 2).real
        return math.exp(quad) / (math.pi * math.sqrt(self.d))


def p_function_params(s: OneModeGaussian) -> PFunctionParams:
    """Parameters of the Glauber P density of a classical state.

    Only classical states (n > |m|) have a regular Gaussian P density, with
    width parameter d = n² − |m|².
    """
    if is_p_representable(s) is not Classification.CLASSICAL:
        raise NotPRepresentableError(
            f"state with n = {s.n:.6g}, |m| = {abs(s.m):.6g} has no regular P density"
        )
    d = s.n ** 2 - abs(s.m) ** 2
    return PFunctionParams(d=d, coeff_nn=-s.n / d, coeff_sq=-s.m / (2.0 * d))


def weyl_characteristic(s: OneModeGaussian, alpha: complex) -> complex:
    """Symmetric-order characteristic function Tr{ρ D(α)}.

    Equals exp(−(n+½)|α|² − Re(m α*²)); exactly 1 at α = 0.
    """
    _require_physical(s)
    alpha = complex(alpha)
    quad = (s.n + 0.5) * abs(alpha) ** 2 + (s.m * alpha.conjugate() ** 2).real
    return cmath.exp(-quad)


def quadrature_variances(s: OneModeGaussian) -> tuple[float, float]:
    """Variances of X₁ = (a+a†)/√2 and X₂ = (a−a†)/(√2 i).

    A squeezing moment with Re m > 0 pushes the X₁ variance below the
    thermal value n + ½, reaching below the vacuum level ½ only for states
    that are not P-representable.
    """
    return (s.n + 0.5 - s.m.real, s.n + 0.5 + s.m.real)


def g2(s: OneModeGaussian) -> float:
    """Normalized second-order degree of coherence ⟨a†a†aa⟩ / ⟨a†a⟩².

    Equals 2 + |m|²/n²; 2 for thermal states, above 3 exactly for states
    that are not P-representable.
    """
    if s.n == 0:
        raise ZeroDivisionError("g2 undefined at zero mean photon number")
    return 2.0 + (abs(s.m) / s.n) ** 2


def purity_one_mode(s: OneModeGaussian) -> float:
    """Tr ρ² = 1 / (2 √((n+½)² − |m|²)); equals 1 exactly for pure states."""
    _require_physical(s)
    return 1.0 / (2.0 * math.sqrt((s.n + 0.5) ** 2 - abs(s.m) ** 2))


# --- Wick moment engine -----------------------------------------------------

def _pair_value_two_mode(state: TwoModeGaussian, t1: LadderToken, t2: LadderToken) -> complex:
    """Second moment ⟨t1 t2⟩ for tokens in written (normally ordered) order."""
    same = t1.mode is t2.mode
    if t1.daggered and t2.daggered:
        if same:
            m = state.m_a if t1.mode is Mode.A else state.m_b
        else:
            m = state.m_c
        return -m.conjugate()
    if not t1.daggered and not t2.daggered:
        if same:
            m = state.m_a if t1.mode is Mode.A else state.m_b
        else:
            m = state.m_c
        return -m
    # Mixed pair; the daggered token comes first in a normally ordered word.
    if same:
        return complex(state.n)
    if t1.mode is Mode.A:
        return state.m_x
    return state.m_x.conjugate()


def _pairings_sum(tokens: tuple[LadderToken, ...], state: TwoModeGaussian) -> complex:
    if not tokens:
        return 1.0 + 0j
    first = tokens[0]
    rest = tokens[1:]
    total = 0j
    for idx, other in enumerate(rest):
        v = _pair_value_two_mode(state, first, other)
        if v != 0:
            total += v * _pairings_sum(rest[:idx] + rest[idx + 1:], state)
    return total


def wick_moment(state, word: OperatorWord) -> complex:
    """Normally ordered expectation of a ladder word on a Gaussian state.

    Sums over all perfect pairings of the word's tokens, each pair
    contributing its stored second moment.  Words of odd length vanish
    because the states are zero-mean.  Mixtures average component moments
    by weight.
    """
    if isinstance(state, GaussianMixture):
        return sum(w * wick_moment(s, word) for w, s in state.components)
    if isinstance(state, OneModeGaussian):
        if word.uses_mode_b():
            raise ValueError("one-mode state cannot take words containing mode b")
        state = TwoModeGaussian(state.n, state.m, 0j, 0j, 0j)
    if not isinstance(state, TwoModeGaussian):
        raise TypeError(f"unsupported state type {type(state).__name__}")
    if len(word) % 2 == 1:
        return 0j
    return _pairings_sum(word.tokens, state)
