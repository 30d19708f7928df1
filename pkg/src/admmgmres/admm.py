"""Fixed-parameter ADMM on the saddle-point KKT system.

For a fixed penalty beta > 0 the three update steps are linear, so the
sweep is an affine fixed-point map u -> G(beta) u + b(beta).  The two
sub-solves reuse Cholesky factorizations of D + beta A'A and B'B that are
computed once per (problem, beta) pair; varying beta mid-run is
deliberately unsupported.
"""

from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from .core import Iterate, NumericalError, kkt_residual

__all__ = [
    "AdmmEngine",
    "IterationTrace",
    "make_engine",
    "admm_step",
    "affine_offset",
    "admm_solve",
    "convergence_threshold",
]


@dataclass
class AdmmEngine:
    """Per-beta state: the problem, beta, and the two Cholesky factors.

    ``local_factor`` is the lower Cholesky factor of D + beta A'A,
    ``global_factor`` the one of B'B.  Immutable once built; one engine can
    serve any number of steps and concurrent solves.
    """

    problem: object
    beta: float
    local_factor: np.ndarray
    global_factor: np.ndarray


@dataclass
class IterationTrace:
    """KKT residual history of one solve.

    ``residuals[k]`` is the true residual norm ||M u_k - r|| at iterate k,
    starting with the initial point, so its length is ``iterations + 1``.
    ``converged`` records the relative-to-initial residual test at the
    tolerance ``epsilon`` (see :func:`convergence_threshold`).
    """

    residuals: np.ndarray
    iterations: int
    converged: bool
    epsilon: float
    method_tag: str
    beta: float


def make_engine(problem, beta):
    """Factor the two sub-solve operators for a fixed beta > 0."""
    beta = float(beta)
    if not beta > 0:
        raise ValueError(f"beta must be positive, got {beta}")
    A, B, D = problem.A, problem.B, problem.D
    try:
        local = np.linalg.cholesky(D + beta * (A.T @ A))
    except np.linalg.LinAlgError as exc:
        raise NumericalError(
            f"Cholesky factorization of the local block D + beta A'A failed "
            f"at beta={beta}"
        ) from exc
    try:
        glob = np.linalg.cholesky(B.T @ B)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(
            "Cholesky factorization of the global block B'B failed"
        ) from exc
    return AdmmEngine(problem, beta, local, glob)


def _chol_solve(L, b):
    return sla.cho_solve((L, True), b)


def admm_step(engine, u):
    """One ADMM sweep: local solve, global solve, multiplier update."""
    p, beta = engine.problem, engine.beta
    A, B = p.A, p.B
    x, z, y = u.x, u.z, u.y

    w = B @ z - p.r_y + y / beta
    x_new = _chol_solve(engine.local_factor, p.r_x - beta * (A.T @ w))
    v = A @ x_new - p.r_y + y / beta
    z_new = _chol_solve(engine.global_factor, p.r_z / beta - B.T @ v)
    y_new = y + beta * (A @ x_new + B @ z_new - p.r_y)
    return Iterate(x_new, z_new, y_new)


def affine_offset(engine):
    """Constant part b(beta) of the affine update, i.e. one step from zero."""
    return admm_step(engine, engine.problem.zero_iterate())


def convergence_threshold(initial_residual, epsilon, rhs_norm):
    """Residual level that counts as converged.

    The test is relative to the initial residual, with an absolute floor of
    epsilon * ||r|| so that a warm start at (or numerically at) the solution
    terminates immediately instead of chasing roundoff.  For the standard
    zero initial iterate both references coincide (||M*0 - r|| = ||r||).
    """
    return epsilon * max(initial_residual, rhs_norm)


def admm_solve(engine, u0=None, epsilon=1e-6, max_iter=100_000):
    """Iterate ADMM until the KKT residual drops by epsilon, or max_iter.

    The true residual ||M u_k - r|| is recorded at every iterate including
    u0; at desk scale this costs a few extra mat-vecs per sweep.
    """
    if not 0 < epsilon < 1:
        raise ValueError(f"epsilon must lie in (0, 1), got {epsilon}")
    if max_iter < 1:
        raise ValueError(f"max_iter must be at least 1, got {max_iter}")
    problem = engine.problem
    u = problem.zero_iterate() if u0 is None else u0.copy()

    rhs_norm = float(np.linalg.norm(problem.rhs()))
    res = kkt_residual(problem, u)
    threshold = convergence_threshold(res, epsilon, rhs_norm)
    residuals = [res]
    converged = res <= threshold
    k = 0
    while not converged and k < max_iter:
        u = admm_step(engine, u)
        res = kkt_residual(problem, u)
        if not np.isfinite(res):
            raise NumericalError(
                f"non-finite KKT residual at iteration {k + 1}; "
                f"last finite iteration was {k} with residual {residuals[-1]:.3e}"
            )
        residuals.append(res)
        k += 1
        converged = res <= threshold
    return IterationTrace(
        residuals=np.asarray(residuals),
        iterations=k,
        converged=bool(converged),
        epsilon=epsilon,
        method_tag="admm",
        beta=engine.beta,
    )
