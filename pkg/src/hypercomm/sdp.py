"""Semidefinite relaxation of balanced min-bisection, solved by ADMM.

The relaxation maximizes <A, X> over unit-diagonal PSD matrices that are
orthogonal to the all-ones matrix; the planted split sigma*sigma' is always
feasible.  Splitting puts the affine constraints (diag = 1, <X, J> = 0) on
one block and the PSD cone on the other; both projections are exact, so
ADMM alternates two cheap steps plus a dual update.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .errors import SizeLimitError
from .metrics import PartitionResult
from .model import Hypergraph, contract
from .spectral import _check_square_symmetric, signs

log = logging.getLogger("hypercomm.sdp")

SDP_LIMIT = 500
BRUTE_LIMIT = 16


@dataclass
class SdpSolution:
    """Solver output: the affine-feasible iterate and convergence data.

    X satisfies diag(X) = 1 and <X, J> = 0 exactly; its distance from the
    PSD cone is bounded by the primal residual ||X - Z||_F where Z is the
    PSD-feasible iterate.  converged=False only means the residual target
    was not met within the iteration budget.
    """

    X: np.ndarray
    objective: float
    primal_residual: float
    dual_residual: float
    iterations: int
    converged: bool


def _affine_project(Y: np.ndarray) -> np.ndarray:
    """Exact projection onto {X symmetric: diag(X) = 1, <X, J> = 0}.

    The constraints decouple: the diagonal is forced to ones, and the
    off-diagonal part only needs its total shifted to -n (making the full
    sum zero), which a uniform off-diagonal shift achieves exactly.
    """
    n = Y.shape[0]
    X = (Y + Y.T) / 2.0
    off_sum = float(X.sum() - np.trace(X))
    shift = (-n - off_sum) / (n * n - n)
    X = X + shift
    np.fill_diagonal(X, 1.0)
    return X


def _psd_project(Y: np.ndarray) -> np.ndarray:
    Y = (Y + Y.T) / 2.0
    # numpy's symmetric eigensolver; plumbing, not one of the detectors.
    w, V = np.linalg.eigh(Y)
    if w[0] >= 0:
        return Y
    pos = w > 0
    Z = (V[:, pos] * w[pos]) @ V[:, pos].T
    return (Z + Z.T) / 2.0


def solve_sdp(
    A: np.ndarray,
    tol: float = 1e-6,
    max_iter: int = 50_000,
    penalty: float = 1.0,
    adapt_every: int = 100,
    adapt_until: int = 5_000,
) -> SdpSolution:
    """ADMM for max <A, X> s.t. X PSD, diag(X) = 1, <X, J> = 0.

    Stops when max(primal, dual) residual falls to tol, where primal is
    ||X - Z||_F and dual is penalty * ||Z - Z_prev||_F.  The penalty
    rebalances by factors of 2 when the residuals drift more than 10x
    apart (rescaling the scaled dual variable accordingly), checked every
    adapt_every iterations and frozen after adapt_until: every feasible
    point here is singular (the ones direction is forced into the kernel),
    the tail of the iteration is fragile, and perpetual rebalancing sends
    it into a limit cycle instead of the optimum.  Guards n <= 500.
    Hitting max_iter is reported via converged=False, not an exception.
    """
    A = _check_square_symmetric(A)
    n = A.shape[0]
    if n > SDP_LIMIT:
        raise SizeLimitError(f"SDP solver capped at n={SDP_LIMIT}, got {n}")
    rho = float(penalty)
    if rho <= 0:
        raise ValueError("penalty must be positive")
    X = np.zeros((n, n))
    np.fill_diagonal(X, 1.0)
    Z = X.copy()
    U = np.zeros((n, n))
    primal = dual = math.inf
    iterations = 0
    converged = False
    for it in range(1, max_iter + 1):
        iterations = it
        X = _affine_project(Z - U + A / rho)
        Z_new = _psd_project(X + U)
        primal = float(np.linalg.norm(X - Z_new))
        dual = rho * float(np.linalg.norm(Z_new - Z))
        Z = Z_new
        U = U + X - Z
        if max(primal, dual) <= tol:
            converged = True
            break
        if it % adapt_every == 0 and it <= adapt_until:
            if primal > 10.0 * dual:
                rho *= 2.0
                U /= 2.0
            elif dual > 10.0 * primal:
                rho /= 2.0
                U *= 2.0
    if not converged:
        log.warning(
            "SDP solver hit max_iter=%d with residuals primal=%.3e dual=%.3e",
            max_iter,
            primal,
            dual,
        )
    objective = float(np.tensordot(A, X))
    return SdpSolution(
        X=X,
        objective=objective,
        primal_residual=primal,
        dual_residual=dual,
        iterations=iterations,
        converged=converged,
    )


def algorithm3_sdp(
    graph_or_matrix,
    tol: float = 1e-6,
    max_iter: int = 50_000,
    truth: np.ndarray | None = None,
) -> PartitionResult:
    """Bisection by the sign pattern of the top eigenvector of the SDP solution."""
    if isinstance(graph_or_matrix, Hypergraph):
        A = contract(graph_or_matrix).astype(float)
    else:
        A = _check_square_symmetric(graph_or_matrix)
    sol = solve_sdp(A, tol=tol, max_iter=max_iter)
    w, V = np.linalg.eigh(sol.X)
    labels = signs(V[:, -1])
    result = PartitionResult(
        labels=labels,
        algorithm="sdp",
        objective=sol.objective,
        converged=sol.converged,
    )
    if truth is not None:
        result.score_against(truth)
    return result


@dataclass
class CertificateResult:
    """Dual-certificate check for optimality of a candidate split.

    S = diag(sigma (A sigma)) - A + nu * J always kills sigma; the
    candidate is certified as the unique SDP optimum when the rest of the
    spectrum of S is strictly positive.
    """

    nu: float
    second_smallest_eig: float
    sigma_in_kernel: bool
    certified: bool


def certificate_check(
    A: np.ndarray,
    labels: np.ndarray,
    nu: float | None = None,
    kernel_tol: float = 1e-9,
    eig_tol: float = 1e-9,
) -> CertificateResult:
    """Check the dual certificate for a candidate +/-1 split.

    nu defaults to the midpoint of the empirical within-group and
    cross-group mean pair weights, the natural scale for the ones-direction
    penalty.
    """
    A = _check_square_symmetric(A)
    sigma = np.asarray(labels, dtype=float)
    n = A.shape[0]
    if sigma.shape != (n,):
        raise ValueError("labels length must match matrix size")
    if not np.all(np.abs(sigma) == 1):
        raise ValueError("labels must be +/-1")
    if nu is None:
        same = np.equal.outer(sigma, sigma)
        np.fill_diagonal(same, False)
        cross = ~np.eye(n, dtype=bool) & ~same
        p_hat = float(A[same].mean()) if same.any() else 0.0
        q_hat = float(A[cross].mean()) if cross.any() else 0.0
        nu = (p_hat + q_hat) / 2.0
    d = (A @ sigma) * sigma
    S = np.diag(d) - A + nu
    ker = float(np.linalg.norm(S @ sigma))
    in_kernel = ker <= kernel_tol
    w = np.linalg.eigvalsh(S)
    second_smallest = float(w[1])
    return CertificateResult(
        nu=float(nu),
        second_smallest_eig=second_smallest,
        sigma_in_kernel=in_kernel,
        certified=bool(in_kernel and second_smallest > eig_tol),
    )


def min_bisection_brute(A: np.ndarray) -> PartitionResult:
    """Exact balanced min-bisection by enumeration (n <= 16, n even).

    Maximizes g(x) = sum_{i<j} x_i A_ij x_j over balanced +/-1 vectors with
    x_0 = +1; ties go to the lexicographically smallest vector and are
    flagged.  The attained g is returned as the objective.
    """
    A = _check_square_symmetric(A)
    n = A.shape[0]
    if n > BRUTE_LIMIT:
        raise SizeLimitError(f"brute-force bisection capped at n={BRUTE_LIMIT}, got {n}")
    if n < 2 or n % 2 != 0:
        raise ValueError("balanced bisection needs even n >= 2")
    candidates = []
    for rest in combinations(range(1, n), n // 2 - 1):
        x = np.full(n, -1, dtype=np.int64)
        x[0] = 1
        x[list(rest)] = 1
        candidates.append(x)
    X = np.array(candidates)
    # g(x) = x'Ax / 2 for hollow A; diagonal terms cancel in the tie anyway.
    g = 0.5 * np.einsum("ki,ij,kj->k", X, A, X) - 0.5 * float(np.trace(A))
    best = g.max()
    tied_idx = np.flatnonzero(g == best)
    winner = min(tuple(X[i]) for i in tied_idx)
    return PartitionResult(
        labels=np.array(winner, dtype=np.int64),
        algorithm="min-bisection",
        objective=float(best),
        tied=len(tied_idx) > 1,
    )
