"""RBF kernel principal component analysis with a self-contained eigensolver.

Fitting double-centers the train kernel matrix, eigendecomposes it, and keeps
the fewest components whose positive eigenvalues explain the requested share
of kernel variance. Fitted models are immutable and safe to share across the
tuner's worker pool.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class EigenConvergenceError(RuntimeError):
    """Jacobi sweeps exhausted before the off-diagonal norm vanished."""


@dataclass
class KpcaModel:
    """Fitted kernel-PCA projector.

    ``alphas`` holds one column per positive eigenvalue, scaled so that the
    projection of a centered kernel row is simply ``k_centered @ alphas``;
    ``transform`` restricts to the first ``n_components`` columns.
    """

    train_rows: np.ndarray
    gamma: float
    eigenvalues: np.ndarray
    alphas: np.ndarray
    k_row_means: np.ndarray
    k_grand_mean: float
    n_components: int
    variance_target: float = 0.95

    def explained_variance_ratios(self) -> np.ndarray:
        positive = self.eigenvalues[self.eigenvalues > 0]
        return positive / positive.sum()


def rbf_kernel(x: np.ndarray, y: np.ndarray, gamma: float) -> float:
    """exp(-gamma * ||x - y||^2) for two vectors of equal length."""
    x = np.asarray(x, dtype=float).ravel()
    y = np.asarray(y, dtype=float).ravel()
    if x.shape != y.shape:
        raise ValueError(f"dimension mismatch: {x.shape} vs {y.shape}")
    if gamma <= 0:
        raise ValueError("gamma must be positive")
    diff = x - y
    return float(np.exp(-gamma * np.dot(diff, diff)))


def _pairwise_sq_dists(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """||a_i - b_j||^2 for all row pairs, clamped at 0 against cancellation."""
    aa = np.sum(A * A, axis=1)[:, None]
    bb = np.sum(B * B, axis=1)[None, :]
    sq = aa + bb - 2.0 * (A @ B.T)
    return np.maximum(sq, 0.0)


def _round_robin_pairs(m: int):
    """Brent-Luk tournament schedule: m-1 rounds of disjoint index pairs."""
    players = list(range(m))
    for _ in range(m - 1):
        yield [(min(players[i], players[m - 1 - i]), max(players[i], players[m - 1 - i]))
               for i in range(m // 2)]
        players = [players[0], players[-1]] + players[1:-1]


def symmetric_eig(
    M: np.ndarray, max_sweeps: int = 100, tol: float = 1e-11
) -> tuple[np.ndarray, np.ndarray]:
    """Full eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.

    Uses the round-robin ordering so each sweep applies n/2 mutually disjoint
    rotations at a time, which keeps the inner loop vectorized. Returns
    eigenvalues in descending order and the matching eigenvector columns.
    Raises EigenConvergenceError if ``max_sweeps`` sweeps do not push the
    off-diagonal Frobenius norm below ``tol`` (relative to ||M||).
    """
    A = np.array(M, dtype=float, copy=True)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError("matrix must be square")
    n = A.shape[0]
    sym_tol = 1e-9 * max(1.0, float(np.abs(A).max()) if n else 1.0)
    if n and float(np.abs(A - A.T).max()) > sym_tol:
        raise ValueError("matrix is not symmetric within 1e-9")
    A = (A + A.T) / 2.0
    V = np.eye(n)
    if n < 2:
        return np.diag(A).copy(), V

    base = max(float(np.linalg.norm(A)), np.finfo(float).tiny)

    def off_norm() -> float:
        B = A.copy()
        np.fill_diagonal(B, 0.0)
        return float(np.linalg.norm(B))

    m = n + (n % 2)
    for _ in range(max_sweeps):
        if off_norm() <= tol * base:
            break
        _jacobi_sweep(A, V, m, n)
    else:
        if off_norm() > tol * base:
            raise EigenConvergenceError(
                f"Jacobi did not converge in {max_sweeps} sweeps "
                f"(off-diagonal norm {off_norm():.3e})"
            )

    eigenvalues = np.diag(A).copy()
    order = np.argsort(-eigenvalues, kind="stable")
    return eigenvalues[order], V[:, order]


def _jacobi_sweep(A: np.ndarray, V: np.ndarray, m: int, n: int) -> None:
    """One full round-robin sweep of simultaneous disjoint rotations, in place."""
    for pairs in _round_robin_pairs(m):
        pairs = [(p, q) for p, q in pairs if q < n]
        P = np.fromiter((p for p, _ in pairs), dtype=int)
        Q = np.fromiter((q for _, q in pairs), dtype=int)
        apq = A[P, Q]
        active = apq != 0.0
        if not active.any():
            continue
        P, Q, apq = P[active], Q[active], apq[active]
        app = A[P, P]
        aqq = A[Q, Q]
        with np.errstate(over="ignore"):
            tau = (aqq - app) / (2.0 * apq)
            t = np.sign(tau) / (np.abs(tau) + np.sqrt(1.0 + np.minimum(tau * tau, 1e290)))
        t = np.where(tau == 0.0, 1.0, t)
        c = 1.0 / np.sqrt(1.0 + t * t)
        s = t * c
        cc, ss = c[:, None], s[:, None]
        rows_p, rows_q = A[P, :].copy(), A[Q, :].copy()
        A[P, :] = cc * rows_p - ss * rows_q
        A[Q, :] = ss * rows_p + cc * rows_q
        cols_p, cols_q = A[:, P].copy(), A[:, Q].copy()
        A[:, P] = cols_p * c - cols_q * s
        A[:, Q] = cols_p * s + cols_q * c
        vec_p, vec_q = V[:, P].copy(), V[:, Q].copy()
        V[:, P] = vec_p * c - vec_q * s
        V[:, Q] = vec_p * s + vec_q * c


def fit_kpca(X: np.ndarray, gamma: float, variance_target: float = 0.95) -> KpcaModel:
    """Fit RBF kernel PCA, keeping the fewest components that explain at
    least ``variance_target`` of the positive kernel-eigenvalue mass."""
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.shape[0] < 2:
        raise ValueError("X must be a matrix with at least 2 rows")
    if not np.isfinite(X).all():
        raise ValueError("X contains non-finite entries")
    if gamma <= 0:
        raise ValueError("gamma must be positive")
    if not 0.0 < variance_target <= 1.0:
        raise ValueError("variance_target must be in (0, 1]")

    n = X.shape[0]
    K = np.exp(-gamma * _pairwise_sq_dists(X, X))
    k_row_means = K.mean(axis=1)
    k_grand_mean = float(K.mean())
    K_centered = K - k_row_means[None, :] - k_row_means[:, None] + k_grand_mean

    eigenvalues, vectors = symmetric_eig(K_centered)
    eigenvalues = np.maximum(eigenvalues, 0.0)

    top = eigenvalues[0] if n else 0.0
    if top <= 1e-10:
        raise ValueError("no variance to explain: centered kernel is degenerate")
    positive = eigenvalues > 1e-10 * top
    pos_values = eigenvalues[positive]
    alphas = vectors[:, positive] / np.sqrt(pos_values)[None, :]

    ratios = pos_values / pos_values.sum()
    cumulative = np.cumsum(ratios)
    n_components = int(np.searchsorted(cumulative, variance_target, side="left")) + 1
    n_components = min(n_components, pos_values.size)

    return KpcaModel(
        train_rows=X.copy(),
        gamma=float(gamma),
        eigenvalues=eigenvalues,
        alphas=alphas,
        k_row_means=k_row_means,
        k_grand_mean=k_grand_mean,
        n_components=n_components,
        variance_target=float(variance_target),
    )


def transform(model: KpcaModel, X: np.ndarray) -> np.ndarray:
    """Project rows of X onto the model's leading kernel principal components."""
    X = np.asarray(X, dtype=float)
    if X.ndim != 2:
        raise ValueError("X must be a matrix")
    if X.shape[1] != model.train_rows.shape[1]:
        raise ValueError(
            f"dimension mismatch: model expects {model.train_rows.shape[1]} "
            f"features, got {X.shape[1]}"
        )
    K = np.exp(-model.gamma * _pairwise_sq_dists(X, model.train_rows))
    K_centered = (
        K
        - model.k_row_means[None, :]
        - K.mean(axis=1, keepdims=True)
        + model.k_grand_mean
    )
    return K_centered @ model.alphas[:, : model.n_components]
