"""Lowest eigenpairs of symmetric sparse operators.

Lanczos with full reorthogonalisation and locking.  A single Krylov sequence
sees only one direction of each eigenspace, so converged Ritz pairs are
locked and the iteration restarts from a fresh random vector orthogonal to
them; rounds continue until a restart produces nothing below the current
``k``-th value.  This recovers exact degeneracies such as the 2- and 3-fold
levels of the 2-d oscillator.

Small problems (``dim <= 1000``) go to a dense ``eigh`` by default.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp

from .exceptions import ContractError, ConvergenceError, InputError
from .operators import is_symmetric

logger = logging.getLogger(__name__)

__all__ = ["EigenResult", "lowest_eigenpairs", "lanczos_lowest", "dense_lowest", "fix_signs"]

DENSE_LIMIT = 1000


@dataclass(frozen=True, eq=False)
class EigenResult:
    """``values`` ascending, ``vectors[:, i]`` the matching orthonormal eigenvector."""

    values: np.ndarray
    vectors: np.ndarray
    residuals: np.ndarray
    method: str
    iterations: int
    converged: bool = True

    def __len__(self):
        return self.values.size


def fix_signs(vectors):
    """Flip columns so the largest-magnitude component is positive."""
    vectors = np.array(vectors, dtype=float, copy=True)
    idx = np.argmax(np.abs(vectors), axis=0)
    signs = np.sign(vectors[idx, np.arange(vectors.shape[1])])
    signs[signs == 0] = 1.0
    return vectors * signs


def _residuals(A, values, vectors):
    return np.linalg.norm(A @ vectors - vectors * values, axis=0)


def dense_lowest(A, k) -> EigenResult:
    """Dense reference solve of the ``k`` lowest eigenpairs."""
    M = A.toarray() if sp.issparse(A) else np.asarray(A, dtype=float)
    vals, vecs = sla.eigh(M, subset_by_index=[0, k - 1])
    vecs = fix_signs(vecs)
    return EigenResult(vals, vecs, _residuals(M, vals, vecs), "dense", 0)


def _orthogonalize(w, *bases):
    # two passes of classical Gram-Schmidt ("twice is enough")
    for _ in range(2):
        for B in bases:
            if B is not None and B.shape[1]:
                w = w - B @ (B.T @ w)
    return w


def lanczos_lowest(A, k, tol=1e-9, seed=0, max_matvec=None, check_every=10) -> EigenResult:
    """``k`` lowest eigenpairs of symmetric ``A`` by locked, restarted Lanczos.

    A Ritz pair is accepted once ``||A v - theta v|| <= tol * scale`` where
    ``scale`` is the largest Ritz value magnitude seen (an estimate of
    ``||A||``).  At most ``max_matvec`` (default ``5 * dim``) products with
    ``A`` are spent.
    """
    n = A.shape[0]
    max_matvec = 5 * n if max_matvec is None else int(max_matvec)
    rng = np.random.default_rng(seed)
    locked_vecs = np.zeros((n, 0))
    locked_vals = np.zeros(0)
    matvecs = 0
    scale = 0.0
    tiny = np.finfo(float).eps

    def kth_locked():
        return np.sort(locked_vals)[k - 1] if locked_vals.size >= k else np.inf

    while True:
        free = n - locked_vals.size
        if free <= 0:
            break
        wanted = max(1, k - locked_vals.size + 1)
        q = _orthogonalize(rng.standard_normal(n), locked_vecs)
        q /= np.linalg.norm(q)
        m_max = free
        Q = np.zeros((n, min(m_max, 64)))
        alphas, betas = [], []
        found_vals, found_vecs = None, None
        exhausted = False
        j = 0
        while True:
            if j == Q.shape[1]:
                Q = np.hstack([Q, np.zeros((n, min(Q.shape[1], m_max - Q.shape[1])))])
            Q[:, j] = q
            w = A @ q
            matvecs += 1
            alpha = float(q @ w)
            w = w - alpha * q - (betas[-1] * Q[:, j - 1] if j else 0.0)
            w = _orthogonalize(w, locked_vecs, Q[:, : j + 1])
            beta = float(np.linalg.norm(w))
            alphas.append(alpha)
            j += 1
            exhausted = j >= m_max or beta <= tiny * max(scale, abs(alpha), 1e-300) * 10
            if exhausted or j % check_every == 0 or matvecs >= max_matvec:
                T = np.diag(alphas) + np.diag(betas, 1) + np.diag(betas, -1)
                theta, S = np.linalg.eigh(T)
                scale = max(scale, float(np.max(np.abs(theta))))
                est = np.abs(beta * S[-1, :]) if not exhausted else np.zeros(j)
                nw = min(wanted, j)
                # keep only pairs that could still belong to the k lowest
                conv = est[:nw] <= tol * scale
                if exhausted or np.all(conv):
                    take = np.arange(j) if exhausted else np.arange(nw)
                    found_vals = theta[take]
                    found_vecs = Q[:, :j] @ S[:, take]
                    break
                if matvecs >= max_matvec:
                    ok = np.nonzero(conv)[0]
                    partial_vals = np.concatenate([locked_vals, theta[ok]])
                    partial_vecs = np.hstack([locked_vecs, Q[:, :j] @ S[:, ok]])
                    order = np.argsort(partial_vals)[:k]
                    partial = EigenResult(
                        partial_vals[order], fix_signs(partial_vecs[:, order]),
                        _residuals(A, partial_vals[order], partial_vecs[:, order]),
                        "lanczos", matvecs, converged=False,
                    )
                    res = float(np.max(est[:nw]))
                    raise ConvergenceError(
                        f"Lanczos used {matvecs} matvecs without converging (residual {res:.3g})",
                        residual=res, partial=partial,
                    )
            betas.append(beta)
            q = w / beta

        # refine the found vectors against the lock set and normalise
        found_vecs = _orthogonalize(found_vecs, locked_vecs)
        found_vecs, _ = np.linalg.qr(found_vecs)
        # Rayleigh-Ritz in the small space keeps values and vectors consistent
        small = found_vecs.T @ (A @ found_vecs)
        matvecs += found_vecs.shape[1]
        tvals, tvecs = np.linalg.eigh(0.5 * (small + small.T))
        found_vecs = found_vecs @ tvecs
        found_vals = tvals

        previous_kth = kth_locked()
        new_low = float(found_vals[0])
        locked_vals = np.concatenate([locked_vals, found_vals])
        locked_vecs = np.hstack([locked_vecs, found_vecs])
        logger.debug("lanczos round: locked %d values, lowest new %.12g", locked_vals.size, new_low)
        if locked_vals.size >= k and new_low >= previous_kth - tol * scale:
            break
        if matvecs >= max_matvec:
            raise ConvergenceError("Lanczos exceeded its matvec budget while locking", residual=None)

    order = np.argsort(locked_vals, kind="stable")[:k]
    vals = locked_vals[order]
    vecs = fix_signs(locked_vecs[:, order])
    return EigenResult(vals, vecs, _residuals(A, vals, vecs), "lanczos", matvecs)


def lowest_eigenpairs(A, k, tol=1e-9, method="auto", seed=0, max_matvec=None) -> EigenResult:
    """``k`` lowest eigenpairs of the symmetric operator ``A``.

    Parameters
    ----------
    A : sparse matrix or ndarray
        Must satisfy ``max |A - A^T| <= 1e-12 max |A|``.
    k : int
        ``1 <= k <= dim - 2``.
    tol : float
        Residual tolerance relative to the spectral scale.
    method : {"auto", "lanczos", "dense"}
        ``auto`` uses dense ``eigh`` up to dimension 1000.
    seed : int
        Seed of the Lanczos start vectors.
    """
    if sp.issparse(A):
        A = sp.csr_matrix(A)
    else:
        A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise InputError(f"matrix must be square, got shape {A.shape}")
    n = A.shape[0]
    if isinstance(k, bool) or int(k) != k or not (1 <= k <= n - 2):
        raise InputError(f"k must satisfy 1 <= k <= dim - 2 = {n - 2}, got {k!r}")
    k = int(k)
    if not is_symmetric(A):
        raise ContractError("lowest_eigenpairs needs a symmetric matrix")
    if method == "auto":
        method = "dense" if n <= DENSE_LIMIT else "lanczos"
    if method == "dense":
        return dense_lowest(A, k)
    if method == "lanczos":
        return lanczos_lowest(A, k, tol=tol, seed=seed, max_matvec=max_matvec)
    raise InputError(f"unknown method {method!r}")
