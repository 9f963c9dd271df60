"""Smallest eigenvalues of symmetric positive semi-definite sparse matrices.

Small problems go to a dense LAPACK solver. Larger ones use a block Lanczos
iteration on the shift-inverted operator ``(L + sI)^{-1}`` with full
reorthogonalization, locking of converged Ritz pairs and restarts. Block
restarts from fresh random vectors are what recover eigenvalues whose
multiplicity exceeds the block size, which is common on the highly symmetric
graphs used here (hypercubes, butterflies).
"""

from __future__ import annotations

import math
import os
import time
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp
from scipy.sparse.linalg import splu

from .exceptions import ConvergenceFailure
from .graph import SparseLaplacian

DENSE_THRESHOLD = 2048
DEFAULT_TOL = 1e-8
CLAMP_RTOL = 1e-9
ENV_DENSE_THRESHOLD = "IOBOUND_DENSE_THRESHOLD"


def dense_threshold() -> int:
    """Dense/iterative cutoff, overridable through ``IOBOUND_DENSE_THRESHOLD``."""
    raw = os.environ.get(ENV_DENSE_THRESHOLD)
    if raw is None or raw.strip() == "":
        return DENSE_THRESHOLD
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"{ENV_DENSE_THRESHOLD} must be an integer, got {raw!r}") from None
    if value < 0:
        raise ValueError(f"{ENV_DENSE_THRESHOLD} must be nonnegative")
    return value


@dataclass(frozen=True)
class Spectrum:
    """Ascending eigenvalues plus how they were obtained.

    ``residual`` is the largest achieved ``||L v - lambda v||`` over the
    returned pairs for the iterative path; for the dense path it is the
    backward-error estimate ``n * eps * ||L||``.
    """

    eigenvalues: np.ndarray
    method: str
    tolerance: float
    residual: float
    seconds: float = 0.0
    info: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.eigenvalues)

    def __getitem__(self, i):
        return self.eigenvalues[i]


def clamp_eigenvalues(values: np.ndarray, max_diagonal: float) -> np.ndarray:
    """Map values in ``(-1e-9 * max_diagonal, 0)`` to exactly 0."""
    values = np.array(values, dtype=float)
    tol = CLAMP_RTOL * max(max_diagonal, 0.0)
    values[(values < 0) & (values > -tol)] = 0.0
    return values


def smallest_eigenvalues(lap, h: int, tol: float = DEFAULT_TOL, method: str = "auto",
                         threshold: int | None = None, seed: int = 0,
                         block_size: int | None = None, max_cycles: int = 200) -> Spectrum:
    """The ``h`` smallest eigenvalues of a symmetric Laplacian, ascending.

    Parameters
    ----------
    lap : SparseLaplacian or scipy sparse matrix
    h : int
        Number of eigenvalues; clamped to the matrix order.
    tol : float
        Relative residual target for the iterative path; each returned value
        lies within ``tol * ||L||`` of a true eigenvalue.
    method : {"auto", "dense", "iterative"}
        ``auto`` picks dense when ``n <= threshold``.
    threshold : int, optional
        Dense cutoff; defaults to :func:`dense_threshold`.
    seed : int
        Seed for the random Lanczos start blocks.

    Raises
    ------
    ConvergenceFailure
        The iterative path ran out of restarts; carries the achieved residual.
    """
    mat = lap.matrix if isinstance(lap, SparseLaplacian) else sp.csr_matrix(lap)
    n = mat.shape[0]
    if h < 1:
        raise ValueError(f"h must be >= 1, got {h}")
    h = min(int(h), n)
    if n == 0:
        return Spectrum(np.zeros(0), "dense", tol, 0.0)
    if threshold is None:
        threshold = dense_threshold()
    if method == "auto":
        method = "dense" if n <= threshold else "iterative"
    if method not in ("dense", "iterative"):
        raise ValueError(f"unknown eigensolver method {method!r}")

    max_diag = float(mat.diagonal().max())
    norm = float(abs(mat).sum(axis=1).max())
    start = time.perf_counter()
    if method == "dense":
        values = sla.eigh(mat.toarray(), eigvals_only=True, subset_by_index=[0, h - 1],
                          driver="evr")
        residual = n * np.finfo(float).eps * norm
        info = {}
    else:
        values, residual, info = _block_lanczos(mat, h, tol, norm, seed, block_size, max_cycles)
    values = clamp_eigenvalues(np.sort(values), max_diag)
    # below the backward-error level a value is indistinguishable from zero
    values[np.abs(values) <= n * np.finfo(float).eps * norm] = 0.0
    values.setflags(write=False)
    return Spectrum(values, method, tol, float(residual), time.perf_counter() - start, info)


def _orthonormalize(W, bases, drop_tol):
    """Project ``W`` off every basis (twice) and orthonormalize what remains.

    Columns whose remaining norm is below ``drop_tol`` are dropped.
    """
    for _ in range(2):
        for B in bases:
            if B.shape[1]:
                W = W - B @ (B.T @ W)
    if W.shape[1] == 0:
        return W
    Q, R, _ = sla.qr(W, mode="economic", pivoting=True)
    keep = np.abs(np.diag(R)) > drop_tol
    return Q[:, keep]


def _block_lanczos(A, h, tol, norm, seed, block_size, max_cycles):
    n = A.shape[0]
    rng = np.random.default_rng(seed)
    shift = max(1e-3 * norm, 1e-12)
    lu = splu(sp.csc_matrix(A + shift * sp.identity(n, format="csc")),
              permc_spec="MMD_AT_PLUS_A", options={"SymmetricMode": True})
    b = block_size or min(h, 32)
    b = max(1, min(b, n))
    target = tol * norm

    locked = np.zeros((n, 0))
    locked_vals = np.zeros(0)
    locked_res = np.zeros(0)
    carry = np.zeros((n, 0))
    best_residual = math.inf
    cycles = 0
    matvecs = 0
    verified = False

    while cycles < max_cycles:
        cycles += 1
        free = n - locked.shape[1]
        if free <= 0:
            verified = True
            break
        want = max(h - locked.shape[1], 1)
        dim_cap = min(free, max(2 * want + b, 4 * b))

        start = np.hstack((carry, rng.standard_normal((n, max(b - carry.shape[1], 1)))))
        X = _orthonormalize(start, [locked], 1e-10 * np.sqrt(n))
        blocks = []
        basis = np.zeros((n, 0))
        while X.shape[1] and basis.shape[1] < dim_cap:
            X = X[:, : dim_cap - basis.shape[1]]
            blocks.append(X)
            basis = np.hstack(blocks)
            if basis.shape[1] >= dim_cap:
                break
            W = lu.solve(X)
            matvecs += X.shape[1]
            scale = float(np.abs(W).max()) or 1.0
            X = _orthonormalize(W, [locked, basis], 1e-10 * scale)
        if basis.shape[1] == 0:
            verified = True
            break

        AQ = A @ basis
        H = basis.T @ AQ
        theta, Y = sla.eigh((H + H.T) / 2)
        V = basis @ Y
        R = AQ @ Y - V * theta
        res = np.linalg.norm(R, axis=0)
        conv = res <= target
        if conv.any():
            best_residual = min(best_residual, float(res[~conv].min()) if (~conv).any() else 0.0)
        elif len(res):
            best_residual = min(best_residual, float(res.min()))

        prior_hth = locked_vals[h - 1] if len(locked_vals) >= h else math.inf
        new_below = conv & (theta < prior_hth - target)
        if conv.any():
            locked = np.hstack((locked, V[:, conv]))
            # keep the locked block orthonormal against rounding drift
            locked, _ = np.linalg.qr(locked)
            locked_vals = np.concatenate((locked_vals, theta[conv]))
            locked_res = np.concatenate((locked_res, res[conv]))
            order = np.argsort(locked_vals, kind="stable")
            locked_vals, locked_res = locked_vals[order], locked_res[order]
            locked = locked[:, order]
        unconv = np.flatnonzero(~conv)
        carry = V[:, unconv[:b]] if len(unconv) else np.zeros((n, 0))

        if len(locked_vals) >= h and not new_below.any():
            # nothing in this cycle's subspace, orthogonal to the locked
            # vectors, lies below the current h-th value: done
            smallest_free = theta[unconv].min() if len(unconv) else math.inf
            if smallest_free >= locked_vals[h - 1] - target:
                verified = True
                break

    info = {"cycles": cycles, "solves": matvecs, "shift": shift, "block_size": b,
            "locked": int(len(locked_vals))}
    if len(locked_vals) < h or not verified:
        achieved = best_residual / norm if norm else best_residual
        raise ConvergenceFailure(
            f"block Lanczos converged {len(locked_vals)} of {h} eigenpairs in {cycles} cycles "
            f"(best unconverged relative residual {achieved:.3g}, target {tol:.3g})",
            residual=achieved, converged=int(len(locked_vals)))
    return locked_vals[:h], float(locked_res[:h].max()) if h else 0.0, info
