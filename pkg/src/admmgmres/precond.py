"""The ADMM preconditioner P(beta) and its matrix-free inverse.

P(beta) factors as a unit upper-triangular augmentation times the block
lower-triangular sweep operator,

    P = [I  0  -beta A']   [D + beta A'A      0          0    ]
        [0  I  -beta B'] * [beta B'A      beta B'B       0    ]
        [0  0      I   ]   [A                 B      -(1/beta) I]

so applying P^{-1} is exactly one augmentation plus one ADMM sweep and
reuses the engine's Cholesky factors.  The ADMM iteration matrix satisfies
G = I - P^{-1} M.  Explicit assembly is provided for verification only and
is guarded to small dimensions; the production path is matrix-free.
"""

import numpy as np
import scipy.linalg as sla

__all__ = [
    "PrecondOperator",
    "apply_inverse",
    "apply_forward",
    "assemble_precond",
    "augmentation_factor",
    "block_lower_factor",
]

_DENSE_GUARD = 400


class PrecondOperator:
    """Matrix-free preconditioner bound to one :class:`AdmmEngine`."""

    def __init__(self, engine):
        self.engine = engine
        self._explicit = None

    @property
    def dim(self):
        return self.engine.problem.dim


def _split(problem, v):
    v = np.asarray(v, dtype=float)
    if v.shape != (problem.dim,):
        raise ValueError(f"vector must have length {problem.dim}, got shape {v.shape}")
    nx, nz = problem.nx, problem.nz
    return v[:nx], v[nx : nx + nz], v[nx + nz :]


def apply_inverse(op, v):
    """Compute P(beta)^{-1} v factor by factor.

    First the augmentation factor is inverted (adds +beta A' v3 to the x
    block and +beta B' v3 to the z block), then the block lower factor is
    forward-solved with the engine's factorizations.
    """
    engine = op.engine
    p, beta = engine.problem, engine.beta
    A, B = p.A, p.B
    v1, v2, v3 = _split(p, v)

    w1 = v1 + beta * (A.T @ v3)
    w2 = v2 + beta * (B.T @ v3)

    x = sla.cho_solve((engine.local_factor, True), w1)
    z = sla.cho_solve((engine.global_factor, True), w2 / beta - B.T @ (A @ x))
    y = beta * (A @ x + B @ z - v3)
    return np.concatenate([x, z, y])


def apply_forward(op, v):
    """Compute P(beta) v via the two factors, without assembling P."""
    engine = op.engine
    p, beta = engine.problem, engine.beta
    A, B, D = p.A, p.B, p.D
    v1, v2, v3 = _split(p, v)

    # Block lower factor first, then the augmentation factor.
    t1 = D @ v1 + beta * (A.T @ (A @ v1))
    t2 = beta * (B.T @ (A @ v1)) + beta * (B.T @ (B @ v2))
    t3 = A @ v1 + B @ v2 - v3 / beta
    return np.concatenate([t1 - beta * (A.T @ t3), t2 - beta * (B.T @ t3), t3])


def _check_guard(problem):
    if problem.dim > _DENSE_GUARD:
        raise ValueError(
            f"explicit assembly is limited to total dimension {_DENSE_GUARD}, "
            f"got {problem.dim}"
        )


def assemble_precond(op):
    """Explicit dense P(beta); cached, and guarded to small dimensions."""
    if op._explicit is not None:
        return op._explicit
    p, beta = op.engine.problem, op.engine.beta
    _check_guard(p)
    A, B, D = p.A, p.B, p.D
    nx, nz, ny = p.nx, p.nz, p.ny
    P = np.block(
        [
            [D, -beta * (A.T @ B), A.T],
            [np.zeros((nz, nx)), np.zeros((nz, nz)), B.T],
            [A, B, -(1.0 / beta) * np.eye(ny)],
        ]
    )
    op._explicit = P
    return P


def augmentation_factor(op):
    """Explicit unit upper-triangular augmentation factor of P(beta)."""
    p, beta = op.engine.problem, op.engine.beta
    _check_guard(p)
    nx, nz, ny = p.nx, p.nz, p.ny
    U = np.eye(p.dim)
    U[:nx, nx + nz :] = -beta * p.A.T
    U[nx : nx + nz, nx + nz :] = -beta * p.B.T
    return U


def block_lower_factor(op):
    """Explicit block lower-triangular sweep factor of P(beta)."""
    p, beta = op.engine.problem, op.engine.beta
    _check_guard(p)
    A, B, D = p.A, p.B, p.D
    nx, nz, ny = p.nx, p.nz, p.ny
    return np.block(
        [
            [D + beta * (A.T @ A), np.zeros((nx, nz)), np.zeros((nx, ny))],
            [beta * (B.T @ A), beta * (B.T @ B), np.zeros((nz, ny))],
            [A, B, -(1.0 / beta) * np.eye(ny)],
        ]
    )
