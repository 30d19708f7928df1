"""Explicit spectral analysis of the ADMM iteration.

Provides the dense iteration matrix G(beta), its block-Schur pieces, the
ny x ny inner kernel K(beta) whose eigenvalues drive both ADMM and
ADMM-GMRES, eigenvalue-enclosure verification by parameter regime, and the
conditioning factors (c1, kappa_P, kappa_X, kappa_M) used by the
convergence-bound evaluators.

Everything here is dense and intended for verification at desk scale; the
explicit constructions are guarded to total dimension 400.
"""

import json
from dataclasses import dataclass
from typing import Optional

import numpy as np
import scipy.linalg as sla

from .admm import make_engine
from .core import assemble_kkt
from .precond import PrecondOperator, assemble_precond

__all__ = [
    "SchurPieces",
    "KernelBlocks",
    "SpectralReport",
    "dtilde_extremes",
    "schur_pieces",
    "build_iteration_matrix",
    "build_k_matrix",
    "classify_and_verify",
    "conditioning_factors",
    "complex_disk_radius",
    "eigvec_condition",
]

_DENSE_GUARD = 400

# Eigenvalues are treated as purely real below this imaginary-part level;
# dense nonsymmetric eigensolvers return imaginary dust of roughly this size.
_IM_RTOL = 1e-8

# Absolute slack for enclosure membership; interval endpoints suffer
# subtractive cancellation at large condition numbers.
_ENCLOSURE_SLACK = 1e-7


def _dtilde_eig(problem):
    """Eigen-decomposition of the symmetrized A D^{-1} A' (W = D-tilde^{-1})."""
    A, D = problem.A, problem.D
    L = np.linalg.cholesky(D)
    W = A @ sla.cho_solve((L, True), A.T)
    W = 0.5 * (W + W.T)
    w, V = np.linalg.eigh(W)
    return w, V


def dtilde_extremes(problem):
    """Extreme eigenvalues (m, ell) and condition number of (A D^{-1} A')^{-1}.

    m = 1 / lambda_max(A D^{-1} A'), ell = 1 / lambda_min(A D^{-1} A'),
    kappa = ell / m.
    """
    w, _ = _dtilde_eig(problem)
    m = 1.0 / w[-1]
    ell = 1.0 / w[0]
    return m, ell, ell / m


@dataclass
class SchurPieces:
    """Orthogonal and scaling factors of the block-Schur form of G(beta).

    Q (ny x nz) and R (nz x nz, upper triangular with nonnegative diagonal)
    are the QR factors of B; P (ny x (ny - nz)) is the orthogonal
    complement, taken from the trailing columns of the full QR factor.
    U is orthogonal of full dimension and S is the invertible block
    scaling such that S (U' G U) S^{-1} is block upper triangular with
    zero leading nx x nx and trailing nz x nz diagonal blocks.
    """

    Q: np.ndarray
    P: np.ndarray
    R: np.ndarray
    U: np.ndarray
    S: np.ndarray


def _qr_complement(B):
    Qfull, Rfull = np.linalg.qr(B, mode="complete")
    nz = B.shape[1]
    signs = np.sign(np.diag(Rfull[:nz, :]))
    signs[signs == 0] = 1.0
    Qfull = Qfull.copy()
    Qfull[:, :nz] *= signs
    R = Rfull[:nz, :] * signs[:, None]
    return Qfull[:, :nz], Qfull[:, nz:], R


def schur_pieces(problem, beta):
    beta = float(beta)
    if not beta > 0:
        raise ValueError(f"beta must be positive, got {beta}")
    nx, nz, ny = problem.nx, problem.nz, problem.ny
    Q, P, R = _qr_complement(problem.B)
    dim = problem.dim

    U = np.zeros((dim, dim))
    U[:nx, :nx] = np.eye(nx)
    U[nx : nx + nz, nx : nx + nz] = np.eye(nz)
    U[nx + nz :, nx + nz : nx + nz + (ny - nz)] = P
    U[nx + nz :, nx + nz + (ny - nz) :] = Q

    S = np.zeros((dim, dim))
    S[:nx, :nx] = beta * np.eye(nx)
    S[nx : nx + nz, nx : nx + nz] = beta * R
    S[nx + nz :, nx + nz :] = np.eye(ny)
    return SchurPieces(Q=Q, P=P, R=R, U=U, S=S)


def build_iteration_matrix(problem, beta):
    """Explicit dense ADMM iteration matrix G(beta), for verification.

    One sweep maps u to G u + b with
    G = L^{-1} N, where L is the block lower sweep factor and N collects
    the lagged couplings; computed with a single dense solve.
    """
    beta = float(beta)
    if not beta > 0:
        raise ValueError(f"beta must be positive, got {beta}")
    if problem.dim > _DENSE_GUARD:
        raise ValueError(
            f"explicit iteration matrix is limited to total dimension "
            f"{_DENSE_GUARD}, got {problem.dim}"
        )
    A, B, D = problem.A, problem.B, problem.D
    nx, nz, ny = problem.nx, problem.nz, problem.ny
    L = np.block(
        [
            [D + beta * (A.T @ A), np.zeros((nx, nz)), np.zeros((nx, ny))],
            [beta * (B.T @ A), beta * (B.T @ B), np.zeros((nz, ny))],
            [A, B, -(1.0 / beta) * np.eye(ny)],
        ]
    )
    N = np.block(
        [
            [np.zeros((nx, nx)), -beta * (A.T @ B), -A.T],
            [np.zeros((nz, nx)), np.zeros((nz, nz)), -B.T],
            [np.zeros((ny, nx)), np.zeros((ny, nz)), -(1.0 / beta) * np.eye(ny)],
        ]
    )
    return np.linalg.solve(L, N)


@dataclass
class KernelBlocks:
    """The inner kernel K(beta) and its J-symmetric blocks.

    K = [[X, Z], [-Z', Y]] with X (nz x nz), Y ((ny-nz) x (ny-nz)) and
    Z (nz x (ny-nz)); J K is symmetric for J = blkdiag(I, -I).
    """

    K: np.ndarray
    X: np.ndarray
    Y: np.ndarray
    Z: np.ndarray


def build_k_matrix(problem, beta):
    """Assemble the ny x ny kernel K(beta) from the QR pieces of B.

    K = [Q'; -P'] Kt [Q P] where Kt is the symmetric contrast
    (beta^{-1} Dt + I)^{-1} - (beta Dt^{-1} + I)^{-1} of Dt = (A D^{-1} A')^{-1},
    evaluated through the eigendecomposition of A D^{-1} A'.
    """
    beta = float(beta)
    if not beta > 0:
        raise ValueError(f"beta must be positive, got {beta}")
    w, V = _dtilde_eig(problem)
    # Eigenvalues of Kt are (beta*w - 1)/(beta*w + 1) for w = 1/d.
    f = (beta * w - 1.0) / (beta * w + 1.0)
    Kt = (V * f) @ V.T
    Kt = 0.5 * (Kt + Kt.T)

    Q, P, _ = _qr_complement(problem.B)
    left = np.vstack([Q.T, -P.T])
    right = np.hstack([Q, P])
    K = left @ Kt @ right
    X = Q.T @ Kt @ Q
    Z = Q.T @ Kt @ P
    Y = -(P.T @ Kt @ P)
    return KernelBlocks(K=K, X=X, Y=Y, Z=Z)


def _j_diag(nz, ny):
    return np.concatenate([np.ones(nz), -np.ones(ny - nz)])


def complex_disk_radius(K, nz, grid_step=1e-3, refine_iters=60):
    """min over real eta of ||K + eta J||, J = blkdiag(I_nz, -I).

    Evaluated on a grid over [-1, 1] followed by golden-section refinement;
    the objective is convex in eta, so the refinement is safe.  Complex
    eigenvalues of K lie inside the disk of this radius.
    """
    ny = K.shape[0]
    Jd = _j_diag(nz, ny)

    def objective(eta):
        return np.linalg.norm(K + np.diag(eta * Jd), 2)

    etas = np.arange(-1.0, 1.0 + grid_step / 2, grid_step)
    values = [objective(e) for e in etas]
    i = int(np.argmin(values))
    best = values[i]

    lo = etas[max(i - 1, 0)]
    hi = etas[min(i + 1, len(etas) - 1)]
    phi = (np.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - phi * (b - a)
    d = a + phi * (b - a)
    fc, fd = objective(c), objective(d)
    for _ in range(refine_iters):
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - phi * (b - a)
            fc = objective(c)
        else:
            a, c, fc = c, d, fd
            d = a + phi * (b - a)
            fd = objective(d)
    return min(best, fc, fd)


def eigvec_condition(K, nz=None, cutoff=1e12):
    """Condition number of an eigenvector matrix of K, or None.

    The value depends on the column scaling of the eigenvector matrix, so
    the best of several canonical scalings is reported: the unit-column
    basis from the dense eigensolver, a norm-balanced rescaling of it, and,
    when J K (or -J K) is positive definite, the similarity construction
    that symmetrizes K and is provably well conditioned in that regime.
    Returns None when every candidate exceeds ``cutoff``.
    """
    _, X = np.linalg.eig(K)
    candidates = []
    try:
        Xi = np.linalg.inv(X)
    except np.linalg.LinAlgError:
        Xi = None
    if Xi is not None:
        candidates.append(np.linalg.cond(X))
        scale = np.sqrt(np.linalg.norm(Xi, axis=1))
        good = np.isfinite(scale) & (scale > 0)
        if np.all(good):
            candidates.append(np.linalg.cond(X * scale[None, :]))

    if nz is not None and 0 < nz <= K.shape[0]:
        J = np.diag(_j_diag(nz, K.shape[0]))
        H = J @ K
        H = 0.5 * (H + H.T)
        for sign in (1.0, -1.0):
            hw, hV = np.linalg.eigh(sign * H)
            if hw[0] > 0:
                # W = (sign*H)^{1/2}; W K W^{-1} is symmetric, its orthogonal
                # eigenbasis pulls back to X = W^{-1} V with cond(X) =
                # sqrt(cond(H)).
                W = (hV * np.sqrt(hw)) @ hV.T
                Winv = (hV / np.sqrt(hw)) @ hV.T
                T = W @ K @ Winv
                T = 0.5 * (T + T.T)
                _, Vt = np.linalg.eigh(T)
                candidates.append(np.linalg.cond(Winv @ Vt))
                break

    finite = [c for c in candidates if np.isfinite(c)]
    if not finite:
        return None
    best = min(finite)
    return None if best > cutoff else float(best)


@dataclass
class SpectralReport:
    """Spectral summary of K(beta) for one (problem, beta) pair.

    ``regime`` is one of ``disk_and_interval`` (gamma in [sqrt(kappa),
    kappa]), ``single_interval`` (gamma in (kappa, 2 kappa]) and
    ``two_intervals`` (gamma > 2 kappa); ``enclosure_ok`` records whether
    every computed eigenvalue lies in the advertised region for that
    regime.  ``kappa_X`` is None when no acceptably conditioned eigenvector
    matrix was found.
    """

    m: float
    ell: float
    kappa: float
    gamma: float
    k_norm: float
    eigenvalues: np.ndarray
    regime: str
    enclosure_ok: bool
    c1: float
    kappa_P: float
    kappa_X: Optional[float]
    kappa_M: float

    def to_dict(self):
        return {
            "m": self.m,
            "ell": self.ell,
            "kappa": self.kappa,
            "gamma": self.gamma,
            "k_norm": self.k_norm,
            "eigenvalues": [[float(v.real), float(v.imag)] for v in self.eigenvalues],
            "regime": self.regime,
            "enclosure_ok": self.enclosure_ok,
            "c1": self.c1,
            "kappa_P": self.kappa_P,
            "kappa_X": self.kappa_X,
            "kappa_M": self.kappa_M,
        }

    def to_json(self):
        return json.dumps(self.to_dict(), indent=1, sort_keys=True)


def classify_regime(gamma, kappa):
    if gamma <= kappa * (1.0 + 1e-12):
        return "disk_and_interval"
    if gamma <= 2.0 * kappa * (1.0 + 1e-12):
        return "single_interval"
    return "two_intervals"


def _enclosure_ok(eigs, regime, gamma, kappa, k_norm, nz, ny):
    slack = _ENCLOSURE_SLACK
    im_tol = _IM_RTOL * max(1.0, k_norm)
    is_real = np.abs(eigs.imag) <= im_tol
    hi = (gamma - 1.0) / (gamma + 1.0)

    if regime == "disk_and_interval":
        disk = kappa / (gamma + kappa) - 1.0 / (gamma + 1.0)
        on_interval = is_real & (np.abs(eigs.real) <= k_norm + slack)
        in_disk = np.abs(eigs) <= disk + slack
        return bool(np.all(on_interval | in_disk))

    if regime == "single_interval":
        return bool(np.all(is_real) and np.all(np.abs(eigs) <= hi + slack))

    lo = (gamma - 2.0 * kappa) / (gamma + kappa)
    moduli = np.abs(eigs)
    ok = (
        np.all(is_real)
        and np.all(moduli <= hi + slack)
        and np.all(moduli >= lo - slack)
    )
    if ok and 0 < nz < ny:
        ok = bool(np.any(eigs.real > 0) and np.any(eigs.real < 0))
    return bool(ok)


def classify_and_verify(problem, beta):
    """Full spectral report: extremes, regime, eigenvalue enclosure, factors."""
    beta = float(beta)
    m, ell, kappa = dtilde_extremes(problem)
    gamma = max(beta / m, ell / beta)
    blocks = build_k_matrix(problem, beta)
    k_norm = float(np.linalg.norm(blocks.K, 2))
    eigs = np.linalg.eigvals(blocks.K)
    regime = classify_regime(gamma, kappa)
    enclosure = _enclosure_ok(eigs, regime, gamma, kappa, k_norm, problem.nz, problem.ny)
    c1, kappa_P, kappa_X, kappa_M = conditioning_factors(problem, beta)
    return SpectralReport(
        m=m,
        ell=ell,
        kappa=kappa,
        gamma=gamma,
        k_norm=k_norm,
        eigenvalues=eigs,
        regime=regime,
        enclosure_ok=enclosure,
        c1=c1,
        kappa_P=kappa_P,
        kappa_X=kappa_X,
        kappa_M=kappa_M,
    )


def conditioning_factors(problem, beta):
    """The factors (c1, kappa_P, kappa_X, kappa_M) entering the bounds.

    c1 = ||S|| ||S^{-1}|| ||G||^2 from the block-Schur scaling, kappa_P the
    spectral condition number of the explicit preconditioner, kappa_X the
    eigenvector conditioning of K (None if numerically singular), kappa_M
    that of the KKT matrix.  Guarded to total dimension 400.
    """
    if problem.dim > _DENSE_GUARD:
        raise ValueError(
            f"conditioning factors are limited to total dimension "
            f"{_DENSE_GUARD}, got {problem.dim}"
        )
    beta = float(beta)
    pieces = schur_pieces(problem, beta)
    G = build_iteration_matrix(problem, beta)
    g_norm = np.linalg.norm(G, 2)
    c1 = float(np.linalg.norm(pieces.S, 2) * np.linalg.norm(np.linalg.inv(pieces.S), 2) * g_norm**2)

    P = assemble_precond(PrecondOperator(make_engine(problem, beta)))
    kappa_P = float(np.linalg.cond(P, 2))

    blocks = build_k_matrix(problem, beta)
    kappa_X = eigvec_condition(blocks.K, problem.nz)

    M = assemble_kkt(problem).M
    kappa_M = float(np.linalg.cond(M, 2))
    return c1, kappa_P, kappa_X, kappa_M
