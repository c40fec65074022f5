"""Numerical optimizers and brute-force oracles.

Everything here works at general L and serves two purposes: producing
SINR-optimal receivers (a generalized eigenproblem), and independently
validating the L=2 closed form through alternating maximization, sphere
sampling in Bloch coordinates, and random-precoder lower-bound searches.
All stochastic routines derive their randomness from an explicit seed and
produce bit-identical results for identical (seed, sample count) inputs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg
from .bloch import ScatteringQuad, map_matrix_rep
from .errors import InvalidWeightsError
from .wssus import (
    ScatteringFunction,
    apply_A,
    apply_interference,
    random_unit_vector,
    validate_density_operator,
)

_BATCH = 1 << 14


@dataclass(frozen=True)
class OptimizerConfig:
    """Settings for the alternating mean-gain maximizer."""

    max_iters: int = 500
    tol: float = 1e-12
    restarts: int = 32
    seed: int = 0

    def __post_init__(self) -> None:
        if self.max_iters < 1:
            raise InvalidWeightsError(f"max_iters must be >= 1, got {self.max_iters}")
        if not self.tol > 0.0:
            raise InvalidWeightsError(f"tol must be positive, got {self.tol}")
        if self.restarts < 1:
            raise InvalidWeightsError(f"restarts must be >= 1, got {self.restarts}")


@dataclass(frozen=True, eq=False)
class OptimizationTrace:
    """Outcome of an alternating maximization run.

    ``objective_history`` is the best restart's per-half-step objective
    sequence (nondecreasing: each half step solves its subproblem exactly);
    ``restart_values`` records every restart's final objective.
    """

    objective_history: tuple[float, ...]
    converged: bool
    best_value: float
    best_pair: tuple[np.ndarray, np.ndarray]
    restart_values: tuple[float, ...]


def _conjugation_batch(
    vectors: np.ndarray, weights: np.ndarray, ops: np.ndarray, adjoint: bool = False
) -> np.ndarray:
    """Apply X -> sum_k w_k T_k X T_k* to a batch of rank-one projectors.

    ``vectors`` has shape (R, L); T_k is S_k, or S_k* when ``adjoint``.
    Returns the stacked (R, L, L) outputs.
    """
    R, L = vectors.shape
    out = np.zeros((R, L, L), dtype=complex)
    for wk, S in zip(weights, ops):
        T = S.conj().T if adjoint else S
        shifted = vectors @ T.T  # row r is (T v_r)^T
        out += wk * np.einsum("ri,rj->rij", shifted, shifted.conj())
    return out


def optimal_receiver(
    C: ScatteringFunction, gamma_proj, scheme, sigma2: float
) -> tuple[np.ndarray, float]:
    """SINR-optimal receive pulse for a fixed transmit projector.

    The best receiver is the top generalized eigenvector of the pair
    (A(Gamma), C_scheme(Gamma) + sigma2 I); the eigenvalue is the SINR it
    achieves, an upper bound over all unit receive pulses.
    """
    if sigma2 < 0.0:
        raise InvalidWeightsError(f"noise power must be >= 0, got {sigma2}")
    gamma_op = validate_density_operator(gamma_proj, C.L)
    num = apply_A(C, gamma_op)
    den = apply_interference(C, gamma_op, scheme) + sigma2 * np.eye(C.L)
    lam, g = linalg.max_generalized_eigenpair(
        (num + num.conj().T) / 2.0, (den + den.conj().T) / 2.0
    )
    return g, lam


def alternating_fidelity_max(
    C: ScatteringFunction, L: int, cfg: OptimizerConfig
) -> OptimizationTrace:
    """Maximize the mean gain Tr(A(Gamma) G) by exact alternating eigensteps.

    Each half step globally solves its subproblem: the receive pulse is the
    top eigenvector of A(Gamma), the transmit pulse the top eigenvector of
    the adjoint map applied to G.  The objective is therefore nondecreasing,
    but the joint problem is nonconvex, so multiple restarts (independent
    per-restart substreams of the master seed) are run in lockstep and the
    best is returned.  A restart counts as converged once its full-cycle
    objective increment drops to ``cfg.tol`` or below.
    """
    if L != C.L:
        raise InvalidWeightsError(f"L={L} does not match scattering function L={C.L}")
    weights, ops = C.kraus_operators()
    children = np.random.SeedSequence(cfg.seed).spawn(cfg.restarts)
    gammas = np.stack(
        [random_unit_vector(np.random.default_rng(s), L) for s in children]
    )

    history: list[np.ndarray] = []
    receivers = np.zeros_like(gammas)
    prev = np.full(cfg.restarts, -np.inf)
    converged = np.zeros(cfg.restarts, dtype=bool)
    for _ in range(cfg.max_iters):
        lam, vecs = np.linalg.eigh(_conjugation_batch(gammas, weights, ops))
        receivers = vecs[..., -1]
        obj = lam[..., -1]
        history.append(obj)
        converged |= obj - prev <= cfg.tol
        if converged.all():
            break
        prev = obj
        lam_t, vecs_t = np.linalg.eigh(
            _conjugation_batch(receivers, weights, ops, adjoint=True)
        )
        gammas = vecs_t[..., -1]
        history.append(lam_t[..., -1])
    if len(history) % 2 == 0:
        # Ended on a transmit half-step: refresh receivers so the returned
        # pair is mutually consistent.
        lam, vecs = np.linalg.eigh(_conjugation_batch(gammas, weights, ops))
        receivers = vecs[..., -1]
        history.append(lam[..., -1])

    finals = history[-1]
    best = int(np.argmax(finals))
    return OptimizationTrace(
        objective_history=tuple(float(h[best]) for h in history),
        converged=bool(converged[best]),
        best_value=float(finals[best]),
        best_pair=(gammas[best].copy(), receivers[best].copy()),
        restart_values=tuple(float(v) for v in finals),
    )


def brute_force_bloch_oracle(
    p, n_samples: int, include_axes: bool = True, seed: int = 0
) -> float:
    """Sampled maximum of the L=2 mean-gain objective in Bloch coordinates.

    Draws transmit directions uniformly on the sphere (normalized 3-d
    Gaussians); for each, the receive direction is maximized analytically
    (Cauchy-Schwarz: align with the diagonally scaled transmit direction),
    giving 1/2 + |(b_1 x_1, b_2 x_2, b_3 x_3)|.  The result never exceeds
    the closed form and equals it when ``include_axes`` injects the three
    coordinate axes, where the optima sit.
    """
    if n_samples < 1:
        raise InvalidWeightsError(f"n_samples must be >= 1, got {n_samples}")
    quad = ScatteringQuad.coerce(p)
    b = np.diag(map_matrix_rep(quad))[1:]
    rng = np.random.default_rng(seed)
    best = 0.0
    if include_axes:
        best = float(np.max(np.abs(b)))
    remaining = n_samples
    while remaining > 0:
        m = min(remaining, _BATCH)
        x = rng.standard_normal((m, 3))
        norms = np.linalg.norm(x, axis=1)
        norms[norms == 0.0] = 1.0
        x /= norms[:, None]
        best = max(best, float(np.max(np.sqrt((x * x) @ (b * b)))))
        remaining -= m
    return 0.5 + best


def fidelity_lower_bound_search(
    C: ScatteringFunction, L: int, n_samples: int, seed: int = 0
) -> float:
    """Best mean gain over randomly drawn transmit pulses.

    Samples unit precoders uniformly on the complex sphere and records the
    largest top eigenvalue of A applied to their projectors; a valid lower
    bound on the gain supremum (and at most 1, since the map is unital and
    trace preserving).
    """
    if n_samples < 1:
        raise InvalidWeightsError(f"n_samples must be >= 1, got {n_samples}")
    if L != C.L:
        raise InvalidWeightsError(f"L={L} does not match scattering function L={C.L}")
    weights, ops = C.kraus_operators()
    rng = np.random.default_rng(seed)
    best = -np.inf
    remaining = n_samples
    while remaining > 0:
        m = min(remaining, _BATCH)
        z = rng.standard_normal((m, L, 2))
        vecs = z[..., 0] + 1j * z[..., 1]
        vecs /= np.linalg.norm(vecs, axis=1)[:, None]
        outputs = _conjugation_batch(vecs, weights, ops)
        lam = np.linalg.eigvalsh(outputs)[:, -1]
        best = max(best, float(np.max(lam)))
        remaining -= m
    return best
