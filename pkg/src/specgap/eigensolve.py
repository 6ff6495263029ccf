"""Symmetric eigensolvers backing the rest of the package.

Two routes: a dense solver for full spectra of small matrices (LAPACK via
numpy behind the contract below) and an in-house Lanczos iteration with full
reorthogonalization for the smallest eigenpairs of large sparse operators.
The two routes are deliberately independent so each can serve as the other's
cross-check in the test suite.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
import scipy.sparse as sp

from .errors import InputError

DENSE_DIM_CAP = 4096
DENSE_FALLBACK_DIM = 2048
SYMMETRY_DEFECT_REL = 1e-12


@dataclass
class EigResult:
    """Ascending eigenvalues with optional orthonormal eigenvectors.

    residuals[i] = ||A v_i - w_i v_i|| when vectors were requested.
    ``converged`` is False for a partial iterative result.
    """

    eigenvalues: np.ndarray
    eigenvectors: Optional[np.ndarray]
    residuals: Optional[np.ndarray]
    method: str
    converged: bool = True
    iterations: int = 0


def _as_array(M):
    if sp.issparse(M):
        return M
    return np.asarray(M)


def _matnorm(M) -> float:
    """Max-abs entry norm, cheap for both dense and sparse."""
    if sp.issparse(M):
        return float(np.abs(M.data).max()) if M.nnz else 0.0
    return float(np.abs(M).max()) if M.size else 0.0


def _symmetry_defect(M) -> float:
    if sp.issparse(M):
        d = M - M.conj().T if np.iscomplexobj(M.data if hasattr(M, "data") else M) else M - M.T
        return float(np.abs(d.data).max()) if d.nnz else 0.0
    return float(np.abs(M - M.conj().T).max()) if M.size else 0.0


def dense_symmetric_eig(M, want_vectors: bool = True) -> EigResult:
    """Full spectrum of a symmetric or Hermitian matrix, ascending.

    Rejects matrices with symmetry defect above 1e-12 * max|M| and dimensions
    above 4096.
    """
    M = _as_array(M)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise InputError(f"need a square matrix, got shape {M.shape}")
    dim = M.shape[0]
    if dim > DENSE_DIM_CAP:
        raise InputError(f"dimension {dim} exceeds the dense cap {DENSE_DIM_CAP}")
    norm = _matnorm(M)
    if _symmetry_defect(M) > SYMMETRY_DEFECT_REL * max(norm, 1e-300):
        raise InputError("matrix is not symmetric/Hermitian within 1e-12 * max|M|")
    Md = M.toarray() if sp.issparse(M) else M
    if want_vectors:
        w, V = np.linalg.eigh(Md)
        R = Md @ V - V * w[None, :]
        res = np.linalg.norm(R, axis=0)
        return EigResult(w, V, res, "dense")
    w = np.linalg.eigvalsh(Md)
    return EigResult(w, None, None, "dense")


def _lanczos_smallest(A, m: int, tol: float, max_iter: int, seed: int) -> EigResult:
    """Block Krylov iteration with full reorthogonalization.

    The block size equals m so eigenvalue multiplicities up to m are resolved
    (single-vector Lanczos cannot see repeated eigenvalues).  Each sweep
    appends A times the newest block, reorthogonalized twice against the full
    basis, then Rayleigh-Ritz extracts the m smallest pairs; convergence is
    declared when every exact residual ||A v - theta v|| falls below
    tol * (spectral scale of the Ritz values).
    """
    dim = A.shape[0]
    rng = np.random.default_rng(seed)
    block = min(max(2, m), dim)
    max_basis = min(dim, max(max_iter, m + 2))

    Q, _ = np.linalg.qr(rng.standard_normal((dim, block)))
    AQ = A @ Q
    iterations = block
    converged = False
    theta = V = res = None

    while True:
        T = Q.T @ AQ
        T = (T + T.T) / 2.0
        theta, S = np.linalg.eigh(T)
        mm = min(m, theta.size)
        V = Q @ S[:, :mm]
        AV = AQ @ S[:, :mm]
        res = np.linalg.norm(AV - V * theta[:mm][None, :], axis=0)
        scale = max(abs(float(theta[0])), abs(float(theta[-1])), 1e-300)
        if theta.size >= m and np.all(res <= tol * scale):
            converged = True
            break
        if Q.shape[1] >= max_basis:
            converged = Q.shape[1] >= dim
            break

        W = AQ[:, -block:].copy()
        pre_norms = np.linalg.norm(W, axis=0)
        W -= Q @ (Q.T @ W)
        W -= Q @ (Q.T @ W)
        cols = []
        for idx in range(W.shape[1]):
            w = W[:, idx]
            for c in cols:
                w = w - c * (c @ w)
            nw = np.linalg.norm(w)
            if nw > 1e-10 * max(pre_norms[idx], 1e-300):
                cols.append(w / nw)
            else:
                # direction already spanned: inject a fresh random vector
                r = rng.standard_normal(dim)
                r -= Q @ (Q.T @ r)
                for c in cols:
                    r = r - c * (c @ r)
                nr = np.linalg.norm(r)
                if nr > 1e-8:
                    cols.append(r / nr)
        room = max_basis - Q.shape[1]
        cols = cols[:room]
        if not cols:
            converged = Q.shape[1] >= dim
            break
        Wnew = np.column_stack(cols)
        Q = np.hstack([Q, Wnew])
        AQ = np.hstack([AQ, A @ Wnew])
        iterations += Wnew.shape[1]

    return EigResult(theta[: len(res)], V, res, "lanczos", converged=converged, iterations=iterations)


def smallest_eigs(
    op,
    m: int,
    tol: float = 1e-10,
    max_iter: int = 100000,
    method: str = "auto",
    seed: int = 20240901,
) -> EigResult:
    """The m smallest eigenpairs of a symmetric PSD operator.

    ``op`` may be a DiscreteOperator (its ``matrix`` is used), a scipy sparse
    matrix, or a dense array.  ``method`` is "auto" (dense below dimension
    2048, Lanczos otherwise), "dense", or "lanczos".  Non-convergence returns
    a partial result flagged converged=False.
    """
    M = getattr(op, "matrix", op)
    M = _as_array(M)
    dim = M.shape[0]
    if not 1 <= m <= dim // 4:
        raise InputError(f"need 1 <= m <= dim/4 = {dim // 4}, got m = {m}")
    norm = _matnorm(M)
    if _symmetry_defect(M) > SYMMETRY_DEFECT_REL * max(norm, 1e-300):
        raise InputError("operator is not symmetric within 1e-12 * max|M|")
    if method not in ("auto", "dense", "lanczos"):
        raise InputError(f"unknown method {method!r}")
    if method == "auto":
        method = "dense" if dim < DENSE_FALLBACK_DIM else "lanczos"

    if method == "dense":
        full = dense_symmetric_eig(M, want_vectors=True)
        return EigResult(
            full.eigenvalues[:m],
            full.eigenvectors[:, :m],
            full.residuals[:m],
            "dense-fallback",
        )
    A = M.tocsr() if sp.issparse(M) else M
    cap = min(max_iter, dim)
    return _lanczos_smallest(A, m, tol, cap, seed)
