"""Second-stream multiplexing at unit spectral density.

With one pulse per signal-space dimension (determinant-one lattice), adding
a second data stream at L=2 means occupying exactly one more shift slot.
The three optimal pulses each have zero self-crosstalk under the two shifts
whose Pauli index differs from their own axis, so those slots carry a
second stream with no further orthogonalization: the shifted pair is an
orthonormal basis and the single-stream mean gain carries over unchanged.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bloch import optimal_precoder_vector
from .errors import (
    DimensionMismatchError,
    InvalidSchemeError,
    InvalidWeightsError,
    NotUnitNormError,
)
from .heisenberg import PAULI_SHIFTS, shift_operator
from .wssus import (
    ScatteringFunction,
    apply_A,
    coerce_scheme_shifts,
    validate_density_operator,
)

CROSSTALK_TOL = 1e-12


@dataclass(frozen=True)
class Scheme:
    """Set of time-frequency slots carrying parallel streams.

    Always contains the origin (the reference stream); shifts are stored
    reduced mod L and must be distinct.
    """

    L: int
    shifts: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        if self.L < 1:
            raise InvalidSchemeError(f"dimension must be >= 1, got {self.L}")
        reduced = tuple((int(m) % self.L, int(n) % self.L) for m, n in self.shifts)
        if len(set(reduced)) != len(reduced):
            raise InvalidSchemeError(f"shifts must be distinct mod {self.L}: {reduced}")
        if (0, 0) not in reduced:
            raise InvalidSchemeError("scheme must contain the origin shift (0, 0)")
        object.__setattr__(self, "shifts", reduced)

    def __iter__(self):
        return iter(self.shifts)

    def __len__(self) -> int:
        return len(self.shifts)

    @property
    def nonzero_shifts(self) -> tuple[tuple[int, int], ...]:
        return tuple(mu for mu in self.shifts if mu != (0, 0))


def crosstalk(x, mu: tuple[int, int]) -> complex:
    """Self-interference coefficient <x, S_mu x> of a unit pulse.

    The full complex value is returned, not just its magnitude: the
    double-shift relation for the circular pulse carries a phase ``i``
    that matters for equalization.
    """
    v = np.asarray(x, dtype=complex).reshape(-1)
    norm = np.linalg.norm(v)
    if abs(norm - 1.0) > 1e-12:
        raise NotUnitNormError(f"pulse norm {norm!r} is not 1 within 1e-12")
    S = shift_operator(v.shape[0], mu)
    return complex(np.vdot(v, S @ v))


def frame_bounds(vectors) -> tuple[float, float]:
    """Extremal eigenvalues of the frame operator sum_i v_i v_i*.

    A family of L vectors in C^L is an orthonormal basis exactly when both
    bounds equal one.
    """
    vecs = [np.asarray(v, dtype=complex).reshape(-1) for v in vectors]
    if not vecs:
        raise DimensionMismatchError("frame_bounds requires at least one vector")
    dim = vecs[0].shape[0]
    if any(v.shape[0] != dim for v in vecs):
        raise DimensionMismatchError("all vectors must share one dimension")
    frame_op = np.zeros((dim, dim), dtype=complex)
    for v in vecs:
        frame_op += np.outer(v, v.conj())
    w = np.linalg.eigvalsh(frame_op)
    return float(w[0]), float(w[-1])


def select_schemes(n: int) -> list[Scheme]:
    """Two-slot schemes with zero transmitter-side crosstalk for pulse n.

    Probes the three nonzero shifts against the axis-n pulse and keeps
    those with vanishing self-interference; these are exactly the two
    shifts whose Pauli index differs from n.  For the frequency-flat pulse
    (n=1) this selects the frequency shift, i.e. frequency-division
    multiplexing; for the time-localized pulse (n=3) the time shift.
    Results are ordered lexicographically by shift.
    """
    if n not in (1, 2, 3):
        raise ValueError(f"axis index must be in 1..3, got {n}")
    x = optimal_precoder_vector(n)
    candidates = sorted(PAULI_SHIFTS[1:])
    return [
        Scheme(2, ((0, 0), mu))
        for mu in candidates
        if abs(crosstalk(x, mu)) <= CROSSTALK_TOL
    ]


def best_scheme(C: ScatteringFunction, gamma_proj, g_proj, n: int) -> Scheme:
    """The zero-crosstalk scheme for pulse n with least averaged interference.

    Ties within 1e-12 fall back to the lexicographically smaller shift.
    """
    candidates = select_schemes(n)
    if not candidates:
        raise InvalidSchemeError(f"no crosstalk-free scheme exists for axis {n}")
    gamma_op = validate_density_operator(gamma_proj, C.L)
    g_op = validate_density_operator(g_proj, C.L)
    mean_out = apply_A(C, gamma_op)
    levels = []
    for scheme in candidates:
        (mu,) = scheme.nonzero_shifts
        S = shift_operator(C.L, mu)
        levels.append(complex(np.trace(S @ mean_out @ S.conj().T @ g_op)).real)
    best = min(levels)
    for scheme, level in zip(candidates, levels):
        if level - best <= 1e-12:
            return scheme
    return candidates[0]


def two_stream_sinr(
    C: ScatteringFunction, gamma_proj, g_proj, scheme, sigma2: float
) -> float:
    """SINR of either stream of a two-slot scheme.

    Computes Tr(A(Gamma) G) / (sigma2 + Tr(S_mu A(Gamma) S_mu* G)) for the
    scheme's nonzero shift mu.  The two streams see each other through
    opposite relative shifts; both interference terms are evaluated and
    must agree within 1e-12 (guaranteed at L=2, where mu and -mu coincide),
    so the returned value applies to either stream.  A zero denominator is
    reported as ``math.inf``.
    """
    if sigma2 < 0.0:
        raise InvalidWeightsError(f"noise power must be >= 0, got {sigma2}")
    shifts = coerce_scheme_shifts(scheme, C.L)
    if len(shifts) != 2:
        raise InvalidSchemeError(f"expected exactly two slots, got {len(shifts)}")
    (mu,) = [s for s in shifts if s != (0, 0)]
    gamma_op = validate_density_operator(gamma_proj, C.L)
    g_op = validate_density_operator(g_proj, C.L)
    mean_out = apply_A(C, gamma_op)
    gain = complex(np.trace(mean_out @ g_op)).real
    S = shift_operator(C.L, mu)
    interf_first = complex(np.trace(S @ mean_out @ S.conj().T @ g_op)).real
    interf_second = complex(np.trace(S.conj().T @ mean_out @ S @ g_op)).real
    if abs(interf_first - interf_second) > 1e-12 * max(1.0, abs(interf_first)):
        raise InvalidSchemeError(
            "streams see unequal interference "
            f"({interf_first!r} vs {interf_second!r}); scheme is not stream-symmetric"
        )
    denom = sigma2 + interf_first
    if denom <= 0.0:
        return math.inf
    return float(gain / denom)
