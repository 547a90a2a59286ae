"""Fixed-point solvers: exact projection, intersection-Galerkin, and
two-projection Galerkin, plus error bounds and optimality certificates.

All three iterations share the update direction x - alpha*F(x) and differ
only in where a projection is inserted:

  exact:      x <- P_C(x - alpha F(x))
  Bertsekas:  x <- P_{C & span}(x - alpha F(x))
  Galerkin:   x <- P_C(z);  z <- P_span(x - alpha F(x))

For strongly monotone F with alpha = beta/L**2 every update contracts with
factor gamma = sqrt(1 - beta**2/L**2), which yields the a-priori error
bounds reported by bound_report.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .basis import Basis
from .cones import SeparableCone
from .operators import NotStronglyMonotone, Operator, iteration_bound

__all__ = [
    "IntersectionProjectionFailed",
    "SolveConfig",
    "OptimalityCertificate",
    "SolveReport",
    "BoundComparison",
    "solve_exact",
    "solve_bertsekas",
    "solve_galerkin",
    "project_intersection",
    "certify",
    "bound_report",
]


class IntersectionProjectionFailed(Exception):
    """Dykstra's iteration did not settle; C and span(Phi) may meet badly."""


@dataclass
class SolveConfig:
    """Knobs shared by the fixed-point solvers.

    alpha_override runs an explicit step size without the strong-monotonicity
    guarantee; tol is the fixed-point step-norm stopping threshold. max_iter
    defaults to 100x the certified iteration bound when a contraction factor
    is available, else 10000.
    """

    alpha_override: float | None = None
    tol: float = 1e-10
    max_iter: int | None = None
    dykstra_tol: float = 1e-12
    dykstra_max_iter: int = 10000
    cert_tol: float = 1e-8
    x0: np.ndarray | None = None
    z0: np.ndarray | None = None
    trace: bool = False

    def __post_init__(self) -> None:
        if self.alpha_override is not None and self.alpha_override <= 0:
            raise ValueError("alpha_override must be positive")
        if self.tol <= 0 or self.dykstra_tol <= 0 or self.cert_tol <= 0:
            raise ValueError("tolerances must be positive")
        if self.max_iter is not None and self.max_iter < 1:
            raise ValueError("max_iter must be >= 1")
        if self.dykstra_max_iter < 1:
            raise ValueError("dykstra_max_iter must be >= 1")


@dataclass
class OptimalityCertificate:
    """Residual-based certificate for a two-projection Galerkin fixed point.

    epsilon is the residual that shifts -F(x_bar) into the normal cone;
    a valid certificate has epsilon (numerically) in null(Phi^T) and the
    shifted direction passing the normal-cone test.
    """

    epsilon: np.ndarray
    normal_cone_ok: bool
    null_space_violation: float
    complementarity_gap: float
    cert_tol: float

    @property
    def valid(self) -> bool:
        bound = self.cert_tol * (1.0 + float(np.linalg.norm(self.epsilon)))
        return self.normal_cone_ok and self.null_space_violation <= bound


@dataclass
class SolveReport:
    """Outcome of one solve: iterate(s), convergence data, and certificates."""

    x: np.ndarray
    iterations: int
    final_step_norm: float
    gamma: float
    alpha: float
    converged: bool
    guaranteed: bool
    z: np.ndarray | None = None
    apriori_bound: float | None = None
    certificate: OptimalityCertificate | None = None
    mu: float | None = None
    feasibility: float | None = None
    step_norms: list[float] = field(default_factory=list)
    iterates: list[np.ndarray] | None = None

    def distances_to_final(self) -> np.ndarray:
        """||x_t - x_T|| for every logged iterate; needs trace=True."""
        if not self.iterates:
            raise ValueError("no iterates were logged; solve with trace=True")
        last = self.iterates[-1]
        return np.array([float(np.linalg.norm(it - last)) for it in self.iterates])

    def trace_rows(self) -> list[tuple[int, float, float]]:
        """(t, step_norm, distance_to_final) per iteration, for t >= 1."""
        dists = self.distances_to_final()
        return [(t + 1, self.step_norms[t], float(dists[t + 1])) for t in range(len(self.step_norms))]


def _step_params(op: Operator, cfg: SolveConfig) -> tuple[float, float, bool]:
    """Resolve (alpha, gamma, guaranteed) from the operator's parameters.

    gamma is the certified Lipschitz constant of I - alpha*F,
    sqrt(1 - 2*alpha*beta + alpha**2 * L**2); with the natural step it
    collapses to sqrt(1 - beta**2/L**2).
    """
    beta = float(op.beta)
    lip = float(op.lipschitz)
    if cfg.alpha_override is None:
        if beta <= 0.0 or lip <= 0.0:
            raise NotStronglyMonotone(beta)
        alpha = beta / lip**2
    else:
        alpha = float(cfg.alpha_override)
    gamma = math.sqrt(max(1.0 - 2.0 * alpha * beta + (alpha * lip) ** 2, 0.0))
    return alpha, gamma, gamma < 1.0


def _max_iter(cfg: SolveConfig, gamma: float) -> int:
    if cfg.max_iter is not None:
        return cfg.max_iter
    if 0.0 < gamma < 1.0:
        return 100 * iteration_bound(gamma, 1e-10)
    if gamma == 0.0:
        return 100
    return 10000


def _check_dims(op: Operator, cone: SeparableCone) -> None:
    if op.dim != cone.dim:
        raise ValueError(f"operator dimension {op.dim} != cone dimension {cone.dim}")


def _start_x(cone: SeparableCone, cfg: SolveConfig) -> np.ndarray:
    if cfg.x0 is not None:
        return cone.project(cfg.x0)
    return cone.project(np.zeros(cone.dim))


def solve_exact(op: Operator, cone: SeparableCone, cfg: SolveConfig | None = None) -> SolveReport:
    """Projection method: iterate x <- P_C(x - alpha F(x)) to the unique solution.

    Starts from P_C(0) and stops when the fixed-point step norm falls below
    cfg.tol. Non-convergence is reported (converged=False), not raised.
    """
    cfg = cfg or SolveConfig()
    _check_dims(op, cone)
    alpha, gamma, guaranteed = _step_params(op, cfg)
    x = _start_x(cone, cfg)

    step_norms: list[float] = []
    iterates = [x.copy()] if cfg.trace else None
    step = math.inf
    iters = 0
    for t in range(1, _max_iter(cfg, gamma) + 1):
        x_new = cone.project(x - alpha * op(x))
        step = float(np.linalg.norm(x_new - x))
        step_norms.append(step)
        if iterates is not None:
            iterates.append(x_new.copy())
        x = x_new
        iters = t
        if step <= cfg.tol:
            break

    return SolveReport(
        x=x,
        iterations=iters,
        final_step_norm=step,
        gamma=gamma,
        alpha=alpha,
        converged=step <= cfg.tol,
        guaranteed=guaranteed,
        step_norms=step_norms,
        iterates=iterates,
    )


def project_intersection(cone: SeparableCone, basis: Basis, z,
                         dykstra_tol: float = 1e-12,
                         dykstra_max_iter: int = 10000) -> np.ndarray:
    """Euclidean projection onto C & span(Phi) by Dykstra's alternating scheme.

    Alternates cone and subspace projections with correction terms; both
    iterate tracks converge to the exact projection. Returns the cone-side
    iterate, so the result is feasible in C exactly and in span(Phi) within
    dykstra_tol. Raises IntersectionProjectionFailed when the cycle
    displacement has not dropped below dykstra_tol after dykstra_max_iter
    cycles.
    """
    z = cone._check_vec(z)
    if basis.n != cone.dim:
        raise ValueError(f"basis dimension {basis.n} != cone dimension {cone.dim}")

    x = z.copy()
    p = np.zeros_like(z)
    q = np.zeros_like(z)
    y_prev = None
    for _ in range(dykstra_max_iter):
        y = cone.project(x + p)
        p = x + p - y
        x_new = basis.project_span(y + q)
        q = y + q - x_new
        if y_prev is not None:
            delta = max(float(np.linalg.norm(y - y_prev)), float(np.linalg.norm(x_new - x)))
            if delta <= dykstra_tol:
                return y
        y_prev = y
        x = x_new
    raise IntersectionProjectionFailed(
        f"Dykstra did not converge in {dykstra_max_iter} iterations "
        "(the intersection may be badly conditioned)"
    )


def solve_bertsekas(op: Operator, cone: SeparableCone, basis: Basis,
                    cfg: SolveConfig | None = None,
                    x_ref: np.ndarray | None = None) -> SolveReport:
    """Intersection-Galerkin method: project onto C & span(Phi) each step.

    When a reference solution x_ref is supplied, the report carries the
    a-priori bound ||P_{C&span}(x_ref) - x_ref|| / (1 - gamma).
    """
    cfg = cfg or SolveConfig()
    _check_dims(op, cone)
    if basis.n != cone.dim:
        raise ValueError(f"basis dimension {basis.n} != cone dimension {cone.dim}")
    alpha, gamma, guaranteed = _step_params(op, cfg)

    def proj(w: np.ndarray) -> np.ndarray:
        return project_intersection(cone, basis, w, cfg.dykstra_tol, cfg.dykstra_max_iter)

    x = _start_x(cone, cfg)
    step_norms: list[float] = []
    iterates = [x.copy()] if cfg.trace else None
    step = math.inf
    iters = 0
    for t in range(1, _max_iter(cfg, gamma) + 1):
        x_new = proj(x - alpha * op(x))
        step = float(np.linalg.norm(x_new - x))
        step_norms.append(step)
        if iterates is not None:
            iterates.append(x_new.copy())
        x = x_new
        iters = t
        if step <= cfg.tol:
            break

    bound = None
    if x_ref is not None and gamma < 1.0:
        x_ref = cone._check_vec(np.asarray(x_ref, dtype=float), "x_ref")
        bound = float(np.linalg.norm(proj(x_ref) - x_ref)) / (1.0 - gamma)

    return SolveReport(
        x=x,
        iterations=iters,
        final_step_norm=step,
        gamma=gamma,
        alpha=alpha,
        converged=step <= cfg.tol,
        guaranteed=guaranteed,
        apriori_bound=bound,
        step_norms=step_norms,
        iterates=iterates,
    )


def solve_galerkin(op: Operator, cone: SeparableCone, basis: Basis,
                   cfg: SolveConfig | None = None) -> SolveReport:
    """Two-projection Galerkin method.

    Iterates x <- P_C(z), z <- P_span(x - alpha F(x)) from z = 0, stopping on
    the z step norm. Returns both the feasible solution x_bar = P_C(z_bar)
    and z_bar, with an optimality certificate attached.
    """
    cfg = cfg or SolveConfig()
    _check_dims(op, cone)
    if basis.n != cone.dim:
        raise ValueError(f"basis dimension {basis.n} != cone dimension {cone.dim}")
    alpha, gamma, guaranteed = _step_params(op, cfg)

    z = np.zeros(cone.dim) if cfg.z0 is None else cone._check_vec(cfg.z0, "z0").copy()
    step_norms: list[float] = []
    iterates: list[np.ndarray] | None = [cone.project(z)] if cfg.trace else None
    step = math.inf
    iters = 0
    for t in range(1, _max_iter(cfg, gamma) + 1):
        x = cone.project(z)
        z_new = basis.project_span(x - alpha * op(x))
        step = float(np.linalg.norm(z_new - z))
        step_norms.append(step)
        z = z_new
        if iterates is not None:
            iterates.append(cone.project(z))
        iters = t
        if step <= cfg.tol:
            break

    x_bar = cone.project(z)
    cert = certify(op, cone, basis, x_bar, z, alpha, cfg.cert_tol)
    return SolveReport(
        x=x_bar,
        z=z,
        iterations=iters,
        final_step_norm=step,
        gamma=gamma,
        alpha=alpha,
        converged=step <= cfg.tol,
        guaranteed=guaranteed,
        certificate=cert,
        step_norms=step_norms,
        iterates=iterates,
    )


def certify(op: Operator, cone: SeparableCone, basis: Basis,
            x_bar: np.ndarray, z_bar: np.ndarray, alpha: float,
            cert_tol: float = 1e-8) -> OptimalityCertificate:
    """Optimality certificate for an (approximate) Galerkin fixed point.

    Computes the residual eps = (z_bar - x_bar + alpha*F(x_bar)) / alpha and
    checks that eps lies in null(Phi^T) and that z_bar - x_bar is in the
    normal cone at x_bar. Violations are reported, never raised.
    """
    x_bar = cone._check_vec(np.asarray(x_bar, dtype=float), "x_bar")
    z_bar = cone._check_vec(np.asarray(z_bar, dtype=float), "z_bar")
    fx = op(x_bar)
    eps_prime = z_bar - (x_bar - alpha * fx)
    eps = eps_prime / alpha
    violation = float(np.linalg.norm(basis.ortho.T @ eps))
    try:
        normal_ok = cone.in_normal_cone(x_bar, z_bar - x_bar, cert_tol)
    except ValueError:
        normal_ok = False
    gap = abs(float(x_bar @ (fx - eps)))
    return OptimalityCertificate(
        epsilon=eps,
        normal_cone_ok=normal_ok,
        null_space_violation=violation,
        complementarity_gap=gap,
        cert_tol=cert_tol,
    )


@dataclass
class BoundComparison:
    """Both a-priori error bounds next to the errors actually achieved."""

    gamma: float
    x_star: np.ndarray
    z_star: np.ndarray
    x_bar: np.ndarray
    z_bar: np.ndarray
    bound_new: float
    err_new_x: float
    err_new_z: float
    new_ok: bool
    exact_iterations: int = 0
    x_hat: np.ndarray | None = None
    bound_bertsekas: float | None = None
    err_bertsekas: float | None = None
    bertsekas_ok: bool | None = None
    bertsekas_skipped: bool = False
    exact_converged: bool = True
    bertsekas_converged: bool | None = None
    galerkin_converged: bool = True


def bound_report(op: Operator, cone: SeparableCone, basis: Basis,
                 cfg: SolveConfig | None = None, slack: float = 1e-8) -> BoundComparison:
    """Solve with all three methods and compare errors against their bounds.

    The intersection method's bound uses ||P_{C&span}(x*) - x*|| / (1-gamma);
    the two-projection method's bound uses ||z* - P_span(z*)|| / (1-gamma)
    and covers both the z and x errors. Solver failures are reported as
    flags, not exceptions.
    """
    cfg = cfg or SolveConfig()
    rep_exact = solve_exact(op, cone, cfg)
    if not (rep_exact.gamma < 1.0):
        raise NotStronglyMonotone(op.beta)
    gamma = rep_exact.gamma
    x_star = rep_exact.x
    z_star = x_star - rep_exact.alpha * op(x_star)

    rep_gal = solve_galerkin(op, cone, basis, cfg)
    bound_new = basis.representation_error(z_star) / (1.0 - gamma)
    err_new_x = float(np.linalg.norm(rep_gal.x - x_star))
    err_new_z = float(np.linalg.norm(rep_gal.z - z_star))

    result = BoundComparison(
        gamma=gamma,
        x_star=x_star,
        z_star=z_star,
        x_bar=rep_gal.x,
        z_bar=rep_gal.z,
        bound_new=bound_new,
        err_new_x=err_new_x,
        err_new_z=err_new_z,
        new_ok=err_new_x <= bound_new + slack and err_new_z <= bound_new + slack,
        exact_iterations=rep_exact.iterations,
        exact_converged=rep_exact.converged,
        galerkin_converged=rep_gal.converged,
    )

    try:
        proj_star = project_intersection(cone, basis, x_star, cfg.dykstra_tol, cfg.dykstra_max_iter)
        rep_b = solve_bertsekas(op, cone, basis, cfg)
    except IntersectionProjectionFailed:
        result.bertsekas_skipped = True
        return result

    result.x_hat = rep_b.x
    result.bound_bertsekas = float(np.linalg.norm(proj_star - x_star)) / (1.0 - gamma)
    result.err_bertsekas = float(np.linalg.norm(rep_b.x - x_star))
    result.bertsekas_ok = result.err_bertsekas <= result.bound_bertsekas + slack
    result.bertsekas_converged = rep_b.converged
    return result
