"""Dense saddle-point problem container, KKT assembly, residuals, direct solve.

The central object is :class:`SaddleProblem`, holding the blocks of the
symmetric indefinite system

    [D   0   A'] [x]   [r_x]
    [0   0   B'] [z] = [r_z]
    [A   B   0 ] [y]   [r_y]

with D symmetric positive definite, A A' invertible and B'B invertible.
Everything in this package is dense and sized for desk-scale experiments
(total dimension up to a few hundred).
"""

import json
import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

__all__ = [
    "NumericalError",
    "SaddleProblem",
    "Iterate",
    "KktSystem",
    "assemble_kkt",
    "kkt_matvec",
    "kkt_residual",
    "direct_solve",
    "problem_to_dict",
    "problem_from_dict",
    "save_problem",
    "load_problem",
]

# Singular blocks are rejected relative to the largest singular value.
_SINGULARITY_RTOL = 1e-12


class NumericalError(RuntimeError):
    """A factorization or solve failed numerically (singular or non-finite)."""


def _as_matrix(name, value, rows, cols):
    m = np.array(value, dtype=float)
    if m.ndim != 2 or m.shape != (rows, cols):
        raise ValueError(f"block {name} must be {rows} x {cols}, got shape {m.shape}")
    return m


def _as_vector(name, value, n):
    v = np.array(value, dtype=float)
    if v.ndim != 1 or v.shape != (n,):
        raise ValueError(f"block {name} must be a vector of length {n}, got shape {v.shape}")
    return v


class SaddleProblem:
    """Immutable data of one saddle-point system.

    Parameters
    ----------
    A : (ny, nx) array, with ny <= nx and A A' invertible.
    B : (ny, nz) array, 1 <= nz <= ny, with B'B invertible.
    D : (nx, nx) array, symmetric positive definite.  D is symmetrized on
        input; a warning is emitted if the asymmetry exceeds 1e-12 relative
        (round-trips through text formats lose symmetry in the last digits).
    r_x, r_z, r_y : right-hand side blocks of lengths nx, nz, ny.

    Notes
    -----
    The quadratic block D lives in the x slot and is therefore nx x nx;
    conventions that size it by ny only cover the square case nx == ny.
    Instances are frozen after construction (the arrays are marked
    read-only) and safe to share across threads.
    """

    def __init__(self, A, B, D, r_x, r_z, r_y):
        A = np.array(A, dtype=float)
        if A.ndim != 2:
            raise ValueError(f"block A must be a matrix, got ndim={A.ndim}")
        ny, nx = A.shape
        if nx < 1 or ny < 1:
            raise ValueError(f"block A must be at least 1 x 1, got {ny} x {nx}")
        if ny > nx:
            raise ValueError(
                f"need ny <= nx for A A' to be invertible, got ny={ny} > nx={nx}"
            )
        B = np.array(B, dtype=float)
        if B.ndim != 2 or B.shape[0] != ny:
            raise ValueError(f"block B must have {ny} rows, got shape {B.shape}")
        nz = B.shape[1]
        if not 1 <= nz <= ny:
            raise ValueError(f"need 1 <= nz <= ny, got nz={nz}, ny={ny}")
        D = _as_matrix("D", D, nx, nx)

        # Symmetrize D; warn only when the deviation is above roundoff scale.
        dev = np.max(np.abs(D - D.T))
        scale = max(np.max(np.abs(D)), np.finfo(float).tiny)
        if dev > 1e-12 * scale:
            warnings.warn(
                f"block D deviates from symmetry by {dev / scale:.2e} relative; "
                "symmetrizing",
                stacklevel=2,
            )
        D = 0.5 * (D + D.T)

        sa = np.linalg.svd(A, compute_uv=False)
        if sa[-1] ** 2 <= _SINGULARITY_RTOL * sa[0] ** 2:
            raise ValueError(
                f"A A' is numerically singular: smallest singular value "
                f"{sa[-1]**2:.3e} vs largest {sa[0]**2:.3e}"
            )
        sb = np.linalg.svd(B, compute_uv=False)
        if sb[-1] ** 2 <= _SINGULARITY_RTOL * sb[0] ** 2:
            raise ValueError(
                f"B'B is numerically singular: smallest singular value "
                f"{sb[-1]**2:.3e} vs largest {sb[0]**2:.3e}"
            )
        wd = np.linalg.eigvalsh(D)
        if wd[0] <= _SINGULARITY_RTOL * abs(wd[-1]):
            raise ValueError(
                f"D is not positive definite: smallest eigenvalue {wd[0]:.3e} "
                f"vs largest {wd[-1]:.3e}"
            )

        self.A = A
        self.B = B
        self.D = D
        self.r_x = _as_vector("r_x", r_x, nx)
        self.r_z = _as_vector("r_z", r_z, nz)
        self.r_y = _as_vector("r_y", r_y, ny)
        for arr in (self.A, self.B, self.D, self.r_x, self.r_z, self.r_y):
            arr.setflags(write=False)

    @property
    def nx(self):
        return self.A.shape[1]

    @property
    def ny(self):
        return self.A.shape[0]

    @property
    def nz(self):
        return self.B.shape[1]

    @property
    def dim(self):
        """Total dimension nx + nz + ny of the stacked system."""
        return self.nx + self.nz + self.ny

    def rhs(self):
        """Stacked right-hand side [r_x; r_z; r_y]."""
        return np.concatenate([self.r_x, self.r_z, self.r_y])

    def zero_iterate(self):
        return Iterate(np.zeros(self.nx), np.zeros(self.nz), np.zeros(self.ny))

    def split_vector(self, u):
        """Split a stacked vector into an Iterate, checking the length."""
        u = np.asarray(u, dtype=float)
        if u.shape != (self.dim,):
            raise ValueError(
                f"stacked iterate must have length {self.dim}, got shape {u.shape}"
            )
        nx, nz = self.nx, self.nz
        return Iterate(u[:nx].copy(), u[nx : nx + nz].copy(), u[nx + nz :].copy())

    def __repr__(self):
        return f"SaddleProblem(nx={self.nx}, ny={self.ny}, nz={self.nz})"


@dataclass
class Iterate:
    """One point (x, z, y), stacked as [x; z; y] wherever a vector is needed."""

    x: np.ndarray
    z: np.ndarray
    y: np.ndarray

    def vector(self):
        return np.concatenate([self.x, self.z, self.y])

    def copy(self):
        return Iterate(self.x.copy(), self.z.copy(), self.y.copy())


@dataclass
class KktSystem:
    """Assembled dense KKT matrix and stacked right-hand side."""

    M: np.ndarray
    r: np.ndarray


def assemble_kkt(problem):
    """Assemble the dense symmetric KKT matrix M and right-hand side r.

    Zero blocks are exact zeros, so M == M' holds exactly.
    """
    A, B, D = problem.A, problem.B, problem.D
    ny, nz = problem.ny, problem.nz
    M = np.block(
        [
            [D, np.zeros((problem.nx, nz)), A.T],
            [np.zeros((nz, problem.nx)), np.zeros((nz, nz)), B.T],
            [A, B, np.zeros((ny, ny))],
        ]
    )
    return KktSystem(M, problem.rhs())


def _iterate_parts(problem, u):
    """Blocks (x, z, y) of an Iterate or stacked vector, with checked sizes."""
    if isinstance(u, Iterate):
        for name, part, n in (
            ("x", u.x, problem.nx),
            ("z", u.z, problem.nz),
            ("y", u.y, problem.ny),
        ):
            if np.shape(part) != (n,):
                raise ValueError(
                    f"iterate block {name} must have length {n}, "
                    f"got shape {np.shape(part)}"
                )
        return u.x, u.z, u.y
    it = problem.split_vector(u)
    return it.x, it.z, it.y


def kkt_matvec(problem, u):
    """Product M u computed blockwise, without assembling M."""
    x, z, y = _iterate_parts(problem, u)
    A, B, D = problem.A, problem.B, problem.D
    return np.concatenate([D @ x + A.T @ y, B.T @ y, A @ x + B @ z])


def kkt_residual(problem, u):
    """Euclidean norm of the KKT residual M u - r."""
    return float(np.linalg.norm(kkt_matvec(problem, u) - problem.rhs()))


def direct_solve(problem):
    """Solve the KKT system with a pivoted dense LU factorization.

    One step of iterative refinement is always applied.  Raises
    :class:`NumericalError`, carrying a condition estimate, if the refined
    residual still exceeds 1e-10 * max(1, ||r||).
    """
    system = assemble_kkt(problem)
    M, r = system.M, system.r
    try:
        lu, piv = sla.lu_factor(M)
        u = sla.lu_solve((lu, piv), r)
        u += sla.lu_solve((lu, piv), r - M @ u)
    except (sla.LinAlgError, ValueError) as exc:
        raise NumericalError(
            f"LU factorization of the KKT matrix failed "
            f"(condition estimate {np.linalg.cond(M):.3e}): {exc}"
        ) from exc
    res = np.linalg.norm(M @ u - r)
    if not np.isfinite(res) or res > 1e-10 * max(1.0, np.linalg.norm(r)):
        raise NumericalError(
            f"KKT matrix is numerically singular: direct-solve residual "
            f"{res:.3e}, condition estimate {np.linalg.cond(M):.3e}"
        )
    return problem.split_vector(u)


# ---------------------------------------------------------------------------
# Problem file format: a flat JSON object with dimensions and row-major
# arrays, doubling as the import path for externally exported KKT triples.
# ---------------------------------------------------------------------------

def problem_to_dict(problem):
    return {
        "nx": problem.nx,
        "ny": problem.ny,
        "nz": problem.nz,
        "A": problem.A.ravel(order="C").tolist(),
        "B": problem.B.ravel(order="C").tolist(),
        "D": problem.D.ravel(order="C").tolist(),
        "rx": problem.r_x.tolist(),
        "rz": problem.r_z.tolist(),
        "ry": problem.r_y.tolist(),
    }


def problem_from_dict(data):
    try:
        nx, ny, nz = int(data["nx"]), int(data["ny"]), int(data["nz"])
        A = np.asarray(data["A"], dtype=float).reshape(ny, nx)
        B = np.asarray(data["B"], dtype=float).reshape(ny, nz)
        D = np.asarray(data["D"], dtype=float).reshape(nx, nx)
        r_x = np.asarray(data["rx"], dtype=float)
        r_z = np.asarray(data["rz"], dtype=float)
        r_y = np.asarray(data["ry"], dtype=float)
    except KeyError as exc:
        raise ValueError(f"problem file is missing field {exc}") from exc
    return SaddleProblem(A, B, D, r_x, r_z, r_y)


def save_problem(problem, path, provenance=None):
    """Write a problem to a JSON file; output is byte-deterministic."""
    data = problem_to_dict(problem)
    if provenance is not None:
        data["provenance"] = provenance
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(data, fh, indent=1, sort_keys=True)
        fh.write("\n")


def load_problem(path):
    with open(path, "r", encoding="utf-8") as fh:
        return problem_from_dict(json.load(fh))
