"""Independent oracle implementations shared by unit and acceptance tests.

Everything here is deliberately written against the mathematical definition
rather than the library code paths it checks.
"""

import numpy as np


def batch_loss(model, X, y):
    """Mean cross-entropy computed independently of the training loop."""
    a = X
    last = len(model.weights) - 1
    for i, (W, b) in enumerate(zip(model.weights, model.biases)):
        z = a @ W + b
        if i < last:
            if model.activation == "relu":
                a = np.maximum(z, 0.0)
            elif model.activation == "tanh":
                a = np.tanh(z)
            else:
                a = 1.0 / (1.0 + np.exp(-z))
        else:
            a = z
    shifted = a - a.max(axis=1, keepdims=True)
    logp = shifted - np.log(np.exp(shifted).sum(axis=1, keepdims=True))
    return -logp[np.arange(len(y)), y].mean()


def finite_difference_grads(model, X, y, h=1e-5):
    """Central finite differences over every parameter coordinate."""
    w_grads = [np.zeros_like(W) for W in model.weights]
    b_grads = [np.zeros_like(b) for b in model.biases]
    for store, params in ((w_grads, model.weights), (b_grads, model.biases)):
        for g, p in zip(store, params):
            it = np.nditer(p, flags=["multi_index"])
            for _ in it:
                idx = it.multi_index
                orig = p[idx]
                p[idx] = orig + h
                up = batch_loss(model, X, y)
                p[idx] = orig - h
                down = batch_loss(model, X, y)
                p[idx] = orig
                g[idx] = (up - down) / (2 * h)
    return w_grads, b_grads


def max_relative_error(got, ref):
    worst = 0.0
    for g, r in zip(got, ref):
        denom = np.maximum(np.abs(r), 1e-8)
        worst = max(worst, float((np.abs(g - r) / denom).max()))
    return worst


def dense_kpca(X, gamma, variance_target=0.95):
    """Independent KPCA route: explicit centering matrices + LAPACK eigh."""
    X = np.asarray(X, dtype=float)
    n = X.shape[0]
    sq = ((X[:, None, :] - X[None, :, :]) ** 2).sum(axis=2)
    K = np.exp(-gamma * sq)
    J = np.ones((n, n)) / n
    Kc = K - J @ K - K @ J + J @ K @ J
    w, V = np.linalg.eigh(Kc)
    order = np.argsort(w)[::-1]
    w, V = w[order], V[:, order]
    w = np.maximum(w, 0.0)
    positive = w > 1e-10 * w[0]
    ratios = w[positive] / w[positive].sum()
    m = int(np.searchsorted(np.cumsum(ratios), variance_target)) + 1
    m = min(m, int(positive.sum()))
    alphas = V[:, positive] / np.sqrt(w[positive])
    return w, Kc @ alphas[:, :m], m


def columns_match_up_to_sign(A, B, atol):
    if A.shape != B.shape:
        return False
    for j in range(A.shape[1]):
        if not (
            np.allclose(A[:, j], B[:, j], atol=atol)
            or np.allclose(A[:, j], -B[:, j], atol=atol)
        ):
            return False
    return True
