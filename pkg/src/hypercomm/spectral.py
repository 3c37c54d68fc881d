"""Spectral bisection: second eigenvector of the pair matrix or its
normalized Laplacian-like operator, computed densely (cyclic Jacobi) for
small matrices and by deflated power iteration for large ones.

Sign convention everywhere: sign(0) = +1.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, DegenerateGraphError, SizeLimitError
from .metrics import PartitionResult
from .model import Hypergraph, contract

log = logging.getLogger("hypercomm.spectral")

DENSE_LIMIT = 2000
DENSE_CUTOFF = 64  # detectors go dense at or below this size


@dataclass
class EigenPair:
    """One eigenvalue/eigenvector estimate.

    residual is ||A v - value v|| for dense solves; for the deflated power
    method it is the same quantity with the deflated operator in place of
    A, the measure the stopping tolerance governs.  negative_dominant marks
    power runs that locked onto a negative dominant eigenvalue (iterates
    flip sign each step).
    """

    value: float
    vector: np.ndarray
    residual: float
    iterations: int
    negative_dominant: bool = False


def _check_square_symmetric(A: np.ndarray) -> np.ndarray:
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"matrix must be square, got shape {A.shape}")
    if not np.allclose(A, A.T, atol=1e-12 * max(1.0, float(np.abs(A).max(initial=0.0)))):
        raise ValueError("matrix must be symmetric")
    return A


def jacobi_eigh(
    A: np.ndarray, rel_tol: float = 1e-12, max_sweeps: int = 60
) -> tuple[np.ndarray, np.ndarray]:
    """Full eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.

    Sweeps rotate away every off-diagonal entry above a threshold tied to
    rel_tol * ||A||_F; terminates when a sweep applies no rotation, which
    bounds the remaining off-diagonal mass by rel_tol * ||A||_F.  Returns
    (values, vectors) with values descending and vectors as columns.
    """
    A = _check_square_symmetric(A).copy()
    n = A.shape[0]
    V = np.eye(n)
    fro = float(np.linalg.norm(A))
    if fro == 0.0 or n == 1:
        order = np.argsort(-np.diag(A), kind="stable")
        return np.diag(A)[order], V[:, order]
    # Entrywise skip threshold: if every |A_pq| is below it, the total
    # off-diagonal mass is below rel_tol * fro.
    skip = rel_tol * fro / n
    for sweep in range(1, max_sweeps + 1):
        rotated = False
        for p in range(n - 1):
            row_p = A[p]
            for q in range(p + 1, n - 0):
                apq = row_p[q]
                if abs(apq) <= skip:
                    continue
                rotated = True
                theta = (A[q, q] - A[p, p]) / (2.0 * apq)
                t = math.copysign(1.0, theta) / (abs(theta) + math.hypot(theta, 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                colp = A[:, p].copy()
                colq = A[:, q].copy()
                A[:, p] = c * colp - s * colq
                A[:, q] = s * colp + c * colq
                rowp = A[p, :].copy()
                rowq = A[q, :].copy()
                A[p, :] = c * rowp - s * rowq
                A[q, :] = s * rowp + c * rowq
                A[p, q] = A[q, p] = 0.0
                vp = V[:, p].copy()
                vq = V[:, q].copy()
                V[:, p] = c * vp - s * vq
                V[:, q] = s * vp + c * vq
        if not rotated:
            break
    else:
        off = float(np.linalg.norm(A - np.diag(np.diag(A))))
        raise ConvergenceError(
            f"Jacobi did not settle in {max_sweeps} sweeps", residual=off, iterations=max_sweeps
        )
    order = np.argsort(-np.diag(A), kind="stable")
    return np.diag(A)[order], V[:, order]


def dense_second_eigenpair(A: np.ndarray) -> EigenPair:
    """Second-largest eigenvalue (by value) and its eigenvector, densely.

    Guards n <= 2000; ties between equal eigenvalues are broken by the
    rotation history, i.e. arbitrarily.
    """
    A = _check_square_symmetric(A)
    n = A.shape[0]
    if n > DENSE_LIMIT:
        raise SizeLimitError(f"dense eigensolver capped at n={DENSE_LIMIT}, got {n}")
    if n < 2:
        raise ValueError("second eigenpair needs n >= 2")
    values, vectors = jacobi_eigh(A)
    value = float(values[1])
    vector = vectors[:, 1]
    residual = float(np.linalg.norm(A @ vector - value * vector))
    return EigenPair(value=value, vector=vector, residual=residual, iterations=0)


def power_second_eigenpair(
    A: np.ndarray,
    tol: float = 1e-10,
    max_iter: int = 10_000,
    rng: np.random.Generator | None = None,
    reproject_every: int = 100,
) -> EigenPair:
    """Community eigenpair of A by power iteration on the deflated operator
    P = A - (dbar/n) * ones*ones' restricted to the complement of the
    all-ones direction, applied matrix-free (dbar = mean row sum).

    Each application mean-centers its output, which on that complement is
    exactly P (the rank-one term vanishes there); without the centering,
    row-sum fluctuations leak the iterate back toward ones and the
    iteration cycles instead of converging.  Starts from a random unit
    vector orthogonal to ones, declares convergence when successive unit
    iterates differ by at most tol up to sign (sign flips mark a negative
    dominant eigenvalue), and fully re-normalizes every reproject_every
    steps to stop floating-point drift.  The reported value is the
    Rayleigh quotient of A after a final re-orthogonalization against
    ones.

    Raises ConvergenceError (carrying the last residual) when max_iter is
    exhausted.
    """
    A = _check_square_symmetric(A)
    n = A.shape[0]
    if n < 2:
        raise ValueError("second eigenpair needs n >= 2")
    if rng is None:
        rng = np.random.default_rng(0)
    shift = float(A.sum()) / n / n

    def matvec(u: np.ndarray) -> np.ndarray:
        v = A @ u - shift * u.sum()
        return v - v.mean()

    u = rng.standard_normal(n)
    u -= u.mean()
    norm = np.linalg.norm(u)
    while norm < 1e-12:  # astronomically unlikely; redraw
        u = rng.standard_normal(n)
        u -= u.mean()
        norm = np.linalg.norm(u)
    u /= norm

    diff = math.inf
    flipped = False
    iterations = 0
    converged = False
    for it in range(1, max_iter + 1):
        iterations = it
        v = matvec(u)
        nv = float(np.linalg.norm(v))
        if nv < 1e-300:
            # u is (numerically) annihilated: eigenvalue 0, u already unit.
            diff = 0.0
            flipped = False
            converged = True
            break
        v /= nv
        if reproject_every and it % reproject_every == 0:
            v = v - v.mean()
            v /= np.linalg.norm(v)
        d_plus = float(np.linalg.norm(v - u))
        d_minus = float(np.linalg.norm(v + u))
        diff = min(d_plus, d_minus)
        flipped = d_minus < d_plus
        u = v
        if diff <= tol:
            converged = True
            break
    if not converged:
        raise ConvergenceError(
            f"power iteration did not converge in {max_iter} iterations"
            f" (last residual {diff:.3e}, tol {tol:.1e})",
            residual=diff,
            iterations=max_iter,
        )
    u = u - u.mean()
    nu = float(np.linalg.norm(u))
    if nu > 0:
        u /= nu
    value = float(u @ (A @ u))
    pu = matvec(u)
    residual = float(np.linalg.norm(pu - (u @ pu) * u))
    if flipped:
        log.info("power iteration locked a negative dominant eigenvalue")
    return EigenPair(
        value=value,
        vector=u,
        residual=residual,
        iterations=iterations,
        negative_dominant=flipped,
    )


def signs(vector: np.ndarray) -> np.ndarray:
    """Entrywise +/-1 with sign(0) = +1."""
    return np.where(np.asarray(vector) >= 0, 1, -1).astype(np.int64)


def _as_pair_matrix(graph_or_matrix) -> np.ndarray:
    if isinstance(graph_or_matrix, Hypergraph):
        return contract(graph_or_matrix).astype(float)
    return _check_square_symmetric(graph_or_matrix)


def algorithm1_adjacency(
    graph_or_matrix,
    tol: float = 1e-10,
    max_iter: int = 10_000,
    rng: np.random.Generator | None = None,
    dense_cutoff: int = DENSE_CUTOFF,
    truth: np.ndarray | None = None,
) -> PartitionResult:
    """Bisection by the sign pattern of the pair matrix's community eigenvector.

    Dense solve at or below dense_cutoff vertices, deflated power iteration
    above it.
    """
    A = _as_pair_matrix(graph_or_matrix)
    if A.shape[0] <= dense_cutoff:
        pair = dense_second_eigenpair(A)
    else:
        pair = power_second_eigenpair(A, tol=tol, max_iter=max_iter, rng=rng)
    result = PartitionResult(labels=signs(pair.vector), algorithm="adjacency", eigen=pair)
    if truth is not None:
        result.score_against(truth)
    return result


def _normalized_operator(A: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Degree-normalized operator D^{-1/2} A D^{-1/2} with zero rows for
    isolated vertices (pseudo-inverse convention), plus the degree vector."""
    deg = A.sum(axis=1)
    if not np.any(deg > 0):
        raise DegenerateGraphError("every vertex is isolated: normalized operator is zero")
    inv_sqrt = np.zeros_like(deg, dtype=float)
    pos = deg > 0
    inv_sqrt[pos] = 1.0 / np.sqrt(deg[pos])
    L = inv_sqrt[:, None] * A * inv_sqrt[None, :]
    return L, deg


def algorithm2_laplacian(
    graph_or_matrix,
    tol: float = 1e-10,
    max_iter: int = 10_000,
    rng: np.random.Generator | None = None,
    dense_cutoff: int = DENSE_CUTOFF,
    truth: np.ndarray | None = None,
) -> PartitionResult:
    """Bisection by the second eigenvector of the degree-normalized operator.

    The top eigenpair of D^{-1/2} A D^{-1/2} is exactly (1, D^{1/2} ones)
    on the support of the graph, so the power path deflates that direction
    analytically instead of the all-ones one.  Isolated vertices get
    eigenvector entry 0 and hence label +1.
    """
    A = _as_pair_matrix(graph_or_matrix)
    L, deg = _normalized_operator(A)
    n = A.shape[0]
    if n <= dense_cutoff:
        pair = dense_second_eigenpair(L)
    else:
        w = np.sqrt(deg)
        w /= np.linalg.norm(w)
        lam1 = float(w @ (L @ w))  # equals 1 whenever the graph is non-trivial

        if rng is None:
            rng = np.random.default_rng(0)
        u = rng.standard_normal(n)
        u -= (w @ u) * w
        norm = np.linalg.norm(u)
        while norm < 1e-12:
            u = rng.standard_normal(n)
            u -= (w @ u) * w
            norm = np.linalg.norm(u)
        u /= norm

        diff = math.inf
        flipped = False
        converged = False
        iterations = 0
        for it in range(1, max_iter + 1):
            iterations = it
            v = L @ u - lam1 * (w @ u) * w
            nv = float(np.linalg.norm(v))
            if nv < 1e-300:
                diff = 0.0
                converged = True
                break
            v /= nv
            if it % 100 == 0:
                v = v - (w @ v) * w
                v /= np.linalg.norm(v)
            d_plus = float(np.linalg.norm(v - u))
            d_minus = float(np.linalg.norm(v + u))
            diff = min(d_plus, d_minus)
            flipped = d_minus < d_plus
            u = v
            if diff <= tol:
                converged = True
                break
        if not converged:
            raise ConvergenceError(
                f"normalized-operator power iteration did not converge in {max_iter}"
                f" iterations (last residual {diff:.3e})",
                residual=diff,
                iterations=max_iter,
            )
        u = u - (w @ u) * w
        nu = float(np.linalg.norm(u))
        if nu > 0:
            u /= nu
        value = float(u @ (L @ u))
        lu = L @ u - lam1 * (w @ u) * w
        residual = float(np.linalg.norm(lu - (u @ lu) * u))
        pair = EigenPair(
            value=value,
            vector=u,
            residual=residual,
            iterations=iterations,
            negative_dominant=flipped,
        )
    result = PartitionResult(labels=signs(pair.vector), algorithm="laplacian", eigen=pair)
    if truth is not None:
        result.score_against(truth)
    return result
