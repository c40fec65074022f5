"""Second-order channel statistics and the operator maps they induce.

A wide-sense stationary uncorrelated-scattering channel on C^L is a random
superposition ``H = sum_mu Sigma(mu) S_mu`` of cyclic time-frequency shifts
whose coefficients are uncorrelated across shifts with mean powers given by
a normalized scattering function ``C(mu)``.  Averaging the channel's action
on rank-one transmit projectors yields the completely positive map

    A(X) = sum_mu C(mu) S_mu X S_mu*,

which is unital, trace preserving, hermiticity preserving and spectrum
flattening (its output is majorized by its input).  This module holds the
scattering-function container, the map ``A`` and its adjoint, the averaged
interference map for a multiplexing scheme, the mean gain ("channel
fidelity") and SINR functionals, per-realization sampling, and a property
checker for the map's structural identities.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import linalg
from .errors import (
    DimensionMismatchError,
    InvalidDensityOperatorError,
    InvalidSchemeError,
    InvalidWeightsError,
    NonHermitianError,
)
from .heisenberg import PAULI_SHIFTS, all_shifts, shift_operator

WEIGHT_SUM_TOL = 1e-9
DENSITY_TRACE_TOL = 1e-10
DENSITY_EIG_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class ScatteringFunction:
    """Nonnegative mean powers C(mu) on the L x L grid of shift indices.

    ``weights[mu1, mu2]`` is the power the channel scatters onto the shift
    ``S_(mu1, mu2)``.  The total is one: there is no overall path loss, so
    the statistics describe only how power spreads over delay and Doppler.

    Attributes:
        L: dimension of the signal space.
        weights: (L, L) array of nonnegative reals summing to 1 within 1e-9.
    """

    L: int
    weights: np.ndarray

    def __post_init__(self) -> None:
        if self.L < 1:
            raise InvalidWeightsError(f"dimension must be >= 1, got {self.L}")
        w = np.array(self.weights, dtype=float)
        if w.shape != (self.L, self.L):
            raise InvalidWeightsError(
                f"weights must have shape ({self.L}, {self.L}), got {w.shape}"
            )
        if np.any(w < 0.0):
            raise InvalidWeightsError("weights must be nonnegative")
        total = float(w.sum())
        if abs(total - 1.0) > WEIGHT_SUM_TOL:
            raise InvalidWeightsError(f"weights must sum to 1 within 1e-9, got {total!r}")
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)

    @classmethod
    def renormalized(cls, weights) -> "ScatteringFunction":
        """Build from nonnegative weights, rescaling so they sum to one.

        Convenience for hand-entered decimals that miss the normalization
        by more than the 1e-9 construction tolerance.
        """
        w = np.array(weights, dtype=float)
        if w.ndim != 2 or w.shape[0] != w.shape[1]:
            raise InvalidWeightsError(f"weights must be square, got shape {w.shape}")
        if np.any(w < 0.0):
            raise InvalidWeightsError("weights must be nonnegative")
        total = float(w.sum())
        if total <= 0.0:
            raise InvalidWeightsError("weights must have positive total")
        return cls(w.shape[0], w / total)

    @classmethod
    def from_quad(cls, p0: float, p1: float, p2: float, p3: float) -> "ScatteringFunction":
        """L=2 scattering function from the four per-shift powers.

        The arguments follow Pauli order: p0 at (0,0), p1 at (1,0),
        p2 at (1,1), p3 at (0,1).
        """
        w = np.zeros((2, 2))
        for p, (m, n) in zip((p0, p1, p2, p3), PAULI_SHIFTS):
            w[m, n] = p
        return cls(2, w)

    @classmethod
    def uniform(cls, L: int) -> "ScatteringFunction":
        """Maximally spread statistics: equal power on all L*L shifts."""
        return cls(L, np.full((L, L), 1.0 / (L * L)))

    @classmethod
    def concentrated(cls, L: int, mu: tuple[int, int]) -> "ScatteringFunction":
        """All power on the single shift mu."""
        w = np.zeros((L, L))
        w[mu[0] % L, mu[1] % L] = 1.0
        return cls(L, w)

    def as_quad(self) -> tuple[float, float, float, float]:
        """The (p0, p1, p2, p3) view of an L=2 scattering function."""
        if self.L != 2:
            raise DimensionMismatchError(f"quad view requires L=2, got L={self.L}")
        return tuple(float(self.weights[m, n]) for m, n in PAULI_SHIFTS)

    def nonzero_terms(self) -> tuple[tuple[tuple[int, int], float], ...]:
        """(shift, weight) pairs with strictly positive weight, row-major order."""
        return tuple(
            (mu, float(self.weights[mu]))
            for mu in all_shifts(self.L)
            if self.weights[mu] > 0.0
        )

    def kraus_operators(self) -> tuple[np.ndarray, np.ndarray]:
        """Stacked (weights, shift operators) over the nonzero-weight shifts."""
        cached = getattr(self, "_kraus_cache", None)
        if cached is None:
            terms = self.nonzero_terms()
            w = np.array([t[1] for t in terms])
            ops = np.stack([shift_operator(self.L, t[0]) for t in terms])
            cached = (w, ops)
            object.__setattr__(self, "_kraus_cache", cached)
        return cached


@dataclass(frozen=True, eq=False)
class ChannelRealization:
    """One draw of the random spreading coefficients Sigma(mu).

    ``coeffs[mu1, mu2]`` multiplies the shift ``S_(mu1, mu2)`` in the
    channel matrix; entries are exactly zero wherever the generating
    scattering function carries no power.
    """

    L: int
    coeffs: np.ndarray

    def __post_init__(self) -> None:
        c = np.array(self.coeffs, dtype=complex)
        if c.shape != (self.L, self.L):
            raise DimensionMismatchError(
                f"coeffs must have shape ({self.L}, {self.L}), got {c.shape}"
            )
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)


@dataclass(frozen=True)
class CpPropertyReport:
    """Worst observed violations of the averaged map's structural identities.

    All violation fields are max-abs deviations over the sampled density
    operators; ``majorization_margin`` is the smallest partial-sum gap
    between the sorted spectra of input and output (nonnegative up to
    roundoff when the output is majorized by the input).
    """

    samples: int
    seed: int
    unital_violation: float
    trace_violation: float
    hermiticity_violation: float
    majorization_margin: float


def _require_operand(X, L: int) -> np.ndarray:
    A = linalg.require_square(X, "operand")
    if A.shape != (L, L):
        raise DimensionMismatchError(f"operand shape {A.shape} does not match L={L}")
    return A


def coerce_scheme_shifts(scheme, L: int) -> tuple[tuple[int, int], ...]:
    """Normalize a scheme (or iterable of shift pairs) to distinct shifts mod L.

    The origin (0, 0) must be present: it is the slot whose gain is being
    optimized, and interference is summed over the remaining slots.
    """
    scheme_L = getattr(scheme, "L", None)
    if scheme_L is not None and scheme_L != L:
        raise DimensionMismatchError(f"scheme dimension {scheme_L} does not match L={L}")
    shifts = getattr(scheme, "shifts", scheme)
    reduced = tuple((int(m) % L, int(n) % L) for m, n in shifts)
    if len(set(reduced)) != len(reduced):
        raise InvalidSchemeError(f"scheme shifts must be distinct mod {L}: {reduced}")
    if (0, 0) not in reduced:
        raise InvalidSchemeError("scheme must contain the origin shift (0, 0)")
    return reduced


def validate_density_operator(M, L: int | None = None, rank_one: bool = False) -> np.ndarray:
    """Check trace one, hermiticity and positive semidefiniteness of M.

    With ``rank_one=True`` additionally requires Tr(M^2) = 1, i.e. M is an
    orthogonal projector onto a single pulse.
    """
    try:
        A = linalg.require_hermitian(M, name="density operator")
    except (DimensionMismatchError, NonHermitianError) as exc:
        raise InvalidDensityOperatorError(str(exc)) from None
    if L is not None and A.shape != (L, L):
        raise InvalidDensityOperatorError(f"density operator shape {A.shape}, expected L={L}")
    trace = complex(np.trace(A)).real
    if abs(trace - 1.0) > DENSITY_TRACE_TOL:
        raise InvalidDensityOperatorError(f"trace must be 1 within 1e-10, got {trace!r}")
    if np.linalg.eigvalsh(A)[0] < -DENSITY_EIG_TOL:
        raise InvalidDensityOperatorError("density operator must be positive semidefinite")
    if rank_one:
        purity = complex(np.trace(A @ A)).real
        if abs(purity - 1.0) > DENSITY_TRACE_TOL:
            raise InvalidDensityOperatorError(f"Tr(M^2) must be 1 for rank one, got {purity!r}")
    return A


def apply_A(C: ScatteringFunction, X) -> np.ndarray:
    """Averaged channel action  sum_mu C(mu) S_mu X S_mu*.

    Hermitian inputs give hermitian outputs and the trace is preserved;
    applied to a transmit projector this is the mean received operator
    before equalization.
    """
    A = _require_operand(X, C.L)
    w, ops = C.kraus_operators()
    out = np.zeros_like(A)
    for wk, S in zip(w, ops):
        out += wk * (S @ A @ S.conj().T)
    return out


def apply_adjoint_A(C: ScatteringFunction, Y) -> np.ndarray:
    """Adjoint map  sum_mu C(mu) S_mu* Y S_mu.

    Satisfies the pairing Tr(A(X) Y) = Tr(X A*(Y)), which turns the
    receiver-side view of the mean gain into a transmitter-side one.
    """
    A = _require_operand(Y, C.L)
    w, ops = C.kraus_operators()
    out = np.zeros_like(A)
    for wk, S in zip(w, ops):
        out += wk * (S.conj().T @ A @ S)
    return out


def apply_interference(C: ScatteringFunction, X, scheme) -> np.ndarray:
    """Averaged interference operator  sum_{mu in scheme, mu != 0} S_mu A(X) S_mu*.

    Each occupied slot of the multiplexing scheme other than the origin
    contributes a shifted copy of the averaged channel output.
    """
    shifts = coerce_scheme_shifts(scheme, C.L)
    AX = apply_A(C, X)
    out = np.zeros_like(AX)
    for mu in shifts:
        if mu == (0, 0):
            continue
        S = shift_operator(C.L, mu)
        out += S @ AX @ S.conj().T
    return out


def channel_fidelity(C: ScatteringFunction, gamma_proj, g_proj) -> float:
    """Mean channel gain Tr(A(Gamma) G) for transmit/receive operators in M1.

    For rank-one Gamma = gamma gamma* and G = g g* this equals
    ``sum_mu C(mu) |<g, S_mu gamma>|^2``, a value in [0, 1]; the result is
    clipped to that interval against roundoff.
    """
    gamma_op = validate_density_operator(gamma_proj, C.L)
    g_op = validate_density_operator(g_proj, C.L)
    value = complex(np.trace(apply_A(C, gamma_op) @ g_op)).real
    return float(min(1.0, max(0.0, value)))


def sinr(C: ScatteringFunction, gamma_proj, g_proj, scheme, sigma2: float) -> float:
    """Long-term SINR  Tr(A(Gamma) G) / (sigma2 + Tr(C_scheme(Gamma) G)).

    Noise enters as a fixed power ``sigma2 >= 0``.  When the denominator is
    zero (noiseless transmission with no averaged interference) the value
    is reported as ``math.inf`` rather than raising: that case legitimately
    arises for a single noiseless stream.
    """
    if sigma2 < 0.0:
        raise InvalidWeightsError(f"noise power must be >= 0, got {sigma2}")
    gamma_op = validate_density_operator(gamma_proj, C.L)
    g_op = validate_density_operator(g_proj, C.L)
    gain = complex(np.trace(apply_A(C, gamma_op) @ g_op)).real
    interference = complex(np.trace(apply_interference(C, gamma_op, scheme) @ g_op)).real
    denom = sigma2 + interference
    if denom <= 0.0:
        return math.inf
    return float(gain / denom)


def random_unit_vector(rng: np.random.Generator, L: int) -> np.ndarray:
    """Unit vector uniform on the complex sphere in C^L."""
    z = rng.standard_normal((L, 2))
    v = z[:, 0] + 1j * z[:, 1]
    return v / np.linalg.norm(v)


def random_density_operator(rng: np.random.Generator, L: int) -> np.ndarray:
    """Random trace-one positive semidefinite matrix (normalized Wishart)."""
    z = rng.standard_normal((L, L, 2))
    G = z[..., 0] + 1j * z[..., 1]
    W = G @ G.conj().T
    W = (W + W.conj().T) / 2.0  # BLAS products are not bitwise symmetric
    return W / np.trace(W).real


def verify_cp_properties(C: ScatteringFunction, samples: int, seed: int = 0) -> CpPropertyReport:
    """Measure the map's unitality, trace/hermiticity preservation and flattening.

    Applies A to ``samples`` random density operators and records the worst
    deviation for each identity.  A correct implementation keeps the three
    violation fields at roundoff level and the majorization margin above
    -1e-10.
    """
    if samples < 1:
        raise InvalidWeightsError(f"samples must be >= 1, got {samples}")
    rng = np.random.default_rng(seed)
    eye = np.eye(C.L, dtype=complex)
    unital = float(np.max(np.abs(apply_A(C, eye) - eye)))
    trace_violation = 0.0
    herm_violation = 0.0
    margin = math.inf
    for _ in range(samples):
        X = random_density_operator(rng, C.L)
        AX = apply_A(C, X)
        trace_violation = max(
            trace_violation, abs(complex(np.trace(AX) - np.trace(X)).real)
        )
        herm_violation = max(herm_violation, float(np.max(np.abs(AX - AX.conj().T))))
        eigs_in = np.sort(np.linalg.eigvalsh(X))[::-1]
        eigs_out = np.sort(np.linalg.eigvalsh((AX + AX.conj().T) / 2.0))[::-1]
        gaps = np.cumsum(eigs_in) - np.cumsum(eigs_out)
        margin = min(margin, float(np.min(gaps)))
    return CpPropertyReport(
        samples=samples,
        seed=seed,
        unital_violation=unital,
        trace_violation=trace_violation,
        hermiticity_violation=herm_violation,
        majorization_margin=margin,
    )


def sample_realization(C: ScatteringFunction, rng) -> ChannelRealization:
    """Draw spreading coefficients with E|Sigma(mu)|^2 = C(mu).

    Each nonzero-weight tap is an independent circularly symmetric complex
    Gaussian (the classical Rayleigh assumption; the statistics fix only
    the second moments).  Zero-weight taps stay exactly zero.  ``rng`` is
    an explicit ``numpy.random.Generator`` (or a seed for one), so the
    draw is deterministic given the state passed in.
    """
    gen = rng if isinstance(rng, np.random.Generator) else np.random.default_rng(rng)
    coeffs = np.zeros((C.L, C.L), dtype=complex)
    terms = C.nonzero_terms()
    if terms:
        z = gen.standard_normal((len(terms), 2))
        taps = (z[:, 0] + 1j * z[:, 1]) / np.sqrt(2.0)
        for (mu, weight), tap in zip(terms, taps):
            coeffs[mu] = np.sqrt(weight) * tap
    return ChannelRealization(C.L, coeffs)


def realize_channel_matrix(realization: ChannelRealization) -> np.ndarray:
    """Channel matrix H = sum_mu Sigma(mu) S_mu of one realization."""
    H = np.zeros((realization.L, realization.L), dtype=complex)
    for mu in all_shifts(realization.L):
        c = realization.coeffs[mu]
        if c != 0:
            H += c * shift_operator(realization.L, mu)
    return H
