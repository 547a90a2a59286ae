"""Seeded random instance generation with prescribed (beta, L) targets."""
from __future__ import annotations

import numpy as np
from scipy.optimize import brentq

from .basis import Basis, orthonormalize
from .operators import AffineOperator, lipschitz_constant, monotone_modulus

__all__ = ["GenerationError", "generate_instance"]

_ATTEMPTS = 100


class GenerationError(Exception):
    """Could not hit the requested (beta, L) targets."""


def generate_instance(n: int, k: int, beta_target: float, L_target: float,
                      seed: int) -> tuple[AffineOperator, Basis]:
    """Random strongly monotone instance with a random basis.

    M = beta*I + c*A + s*S with A a normalized Gaussian Gram matrix and S a
    normalized skew part, so the monotone modulus is beta + c*lambda_min(A)
    >= beta by construction; c is tuned so the spectral norm lands within
    5% of L_target. The same seed reproduces the instance bit for bit
    within one build of this library.
    """
    if n < 1 or k < 1 or k > n:
        raise ValueError(f"need 1 <= k <= n, got n={n}, k={k}")
    if not (0.0 < beta_target < L_target):
        raise ValueError(f"need 0 < beta_target < L_target, got {beta_target}, {L_target}")

    rng = np.random.default_rng(seed)
    M = None
    for _ in range(_ATTEMPTS):
        G = rng.standard_normal((n, n))
        A = G.T @ G
        A /= lipschitz_constant(A)
        G2 = rng.standard_normal((n, n))
        S = 0.5 * (G2 - G2.T)
        norm_S = lipschitz_constant(S)
        if norm_S > 0:
            S /= norm_S
        s_amp = 0.25 * (L_target - beta_target)

        def norm_at(c: float) -> float:
            return lipschitz_constant(beta_target * np.eye(n) + c * A + s_amp * S)

        lo, hi = 0.0, L_target - beta_target
        if norm_at(lo) >= L_target:
            continue
        while norm_at(hi) < L_target:
            hi *= 2.0
            if hi > 1e6 * L_target:
                break
        else:
            c = brentq(lambda c: norm_at(c) - L_target, lo, hi, xtol=1e-4 * L_target)
            cand = beta_target * np.eye(n) + c * A + s_amp * S
            beta = monotone_modulus(cand)
            lip = lipschitz_constant(cand)
            if beta >= beta_target * (1 - 1e-6) and abs(lip - L_target) <= 0.05 * L_target:
                M = cand
                break
    if M is None:
        raise GenerationError(
            f"no admissible instance for beta={beta_target}, L={L_target} "
            f"after {_ATTEMPTS} attempts")

    q = rng.standard_normal(n)
    basis = orthonormalize(rng.standard_normal((n, k)))
    return AffineOperator(M, q), basis
