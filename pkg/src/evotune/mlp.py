"""Feed-forward multilayer perceptron trained from scratch with numpy.

Hidden layers use a configurable activation; the output layer is softmax
with mean cross-entropy loss. Training runs a fixed number of epochs of
seeded mini-batch updates under either adam or momentum SGD, and raises
TrainingDiverged instead of returning non-finite parameters (the tuner maps
that outcome to fitness 0).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

ACTIVATIONS = ("relu", "tanh", "logistic")
SOLVERS = ("adam", "sgd")

ADAM_BETA1 = 0.9
ADAM_BETA2 = 0.999
ADAM_EPS = 1e-8
SGD_MOMENTUM = 0.9


class TrainingDiverged(RuntimeError):
    """Loss or parameters became non-finite during training."""

    def __init__(self, epoch: int):
        super().__init__(f"training diverged at epoch {epoch}")
        self.epoch = epoch


@dataclass(frozen=True)
class MlpConfig:
    hidden_layers: tuple[int, ...]
    activation: str = "relu"
    learning_rate_init: float = 0.001
    solver: str = "adam"
    max_iter: int = 500
    batch_size: int | None = None  # None: min(200, n_train)
    seed: int = 0

    def __post_init__(self):
        if not self.hidden_layers or any(h < 1 for h in self.hidden_layers):
            raise ValueError("hidden_layers must be a non-empty tuple of positive sizes")
        if self.activation not in ACTIVATIONS:
            raise ValueError(f"unknown activation {self.activation!r}")
        if self.solver not in SOLVERS:
            raise ValueError(f"unknown solver {self.solver!r}")
        if self.learning_rate_init <= 0:
            raise ValueError("learning_rate_init must be positive")
        if self.max_iter < 1:
            raise ValueError("max_iter must be >= 1")


@dataclass
class MlpModel:
    weights: list[np.ndarray]
    biases: list[np.ndarray]
    activation: str
    class_count: int
    train_loss_curve: list[float] = field(default_factory=list)

    @property
    def input_dim(self) -> int:
        return self.weights[0].shape[0]


def _activate(name: str, z: np.ndarray) -> np.ndarray:
    if name == "relu":
        return np.maximum(z, 0.0)
    if name == "tanh":
        return np.tanh(z)
    # logistic, computed stably for large |z|
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def _activation_grad(name: str, z: np.ndarray, a: np.ndarray) -> np.ndarray:
    if name == "relu":
        return (z > 0.0).astype(float)
    if name == "tanh":
        return 1.0 - a * a
    return a * (1.0 - a)


def init_weights(
    config: MlpConfig,
    input_dim: int,
    class_count: int,
    rng: np.random.Generator | None = None,
) -> MlpModel:
    """Glorot-uniform weights, zero biases; deterministic for a fixed seed."""
    if input_dim < 1:
        raise ValueError("input_dim must be >= 1")
    if class_count < 2:
        raise ValueError("class_count must be >= 2")
    if rng is None:
        rng = np.random.default_rng(config.seed)
    dims = [input_dim, *config.hidden_layers, class_count]
    weights, biases = [], []
    for fan_in, fan_out in zip(dims, dims[1:]):
        limit = np.sqrt(6.0 / (fan_in + fan_out))
        weights.append(rng.uniform(-limit, limit, size=(fan_in, fan_out)))
        biases.append(np.zeros(fan_out))
    return MlpModel(
        weights=weights,
        biases=biases,
        activation=config.activation,
        class_count=class_count,
    )


def _forward_pass(model: MlpModel, X: np.ndarray):
    """Return (pre-activations, activations) for a batch; last entry is logits."""
    zs, acts = [], [X]
    a = X
    last = len(model.weights) - 1
    for i, (W, b) in enumerate(zip(model.weights, model.biases)):
        z = a @ W + b
        zs.append(z)
        a = _activate(model.activation, z) if i < last else z
        acts.append(a)
    return zs, acts


def _softmax(logits: np.ndarray) -> np.ndarray:
    shifted = logits - logits.max(axis=1, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=1, keepdims=True)


def _log_softmax(logits: np.ndarray) -> np.ndarray:
    shifted = logits - logits.max(axis=1, keepdims=True)
    return shifted - np.log(np.exp(shifted).sum(axis=1, keepdims=True))


def forward(model: MlpModel, x: np.ndarray) -> np.ndarray:
    """Class probabilities for a single input vector (softmax output)."""
    x = np.asarray(x, dtype=float).ravel()
    if x.size != model.input_dim:
        raise ValueError(f"expected {model.input_dim} features, got {x.size}")
    if not np.isfinite(x).all():
        raise ValueError("input contains non-finite values")
    _, acts = _forward_pass(model, x[None, :])
    return _softmax(acts[-1])[0]


def predict_proba(model: MlpModel, X: np.ndarray) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.shape[1] != model.input_dim:
        raise ValueError(f"expected matrix with {model.input_dim} columns")
    _, acts = _forward_pass(model, X)
    return _softmax(acts[-1])


def predict(model: MlpModel, X: np.ndarray) -> np.ndarray:
    """Argmax class per row; ties resolve to the lowest class index."""
    return np.argmax(predict_proba(model, X), axis=1)


def backprop_grads(
    model: MlpModel, batch_X: np.ndarray, batch_y: np.ndarray
) -> tuple[list[np.ndarray], list[np.ndarray]]:
    """Gradients of mean cross-entropy w.r.t. every weight matrix and bias."""
    X = np.asarray(batch_X, dtype=float)
    y = np.asarray(batch_y, dtype=int)
    if X.ndim != 2 or X.shape[0] == 0:
        raise ValueError("batch must be a non-empty matrix")
    zs, acts = _forward_pass(model, X)
    probs = _softmax(acts[-1])
    Y = np.eye(model.class_count)[y]
    delta = (probs - Y) / X.shape[0]

    weight_grads: list[np.ndarray | None] = [None] * len(model.weights)
    bias_grads: list[np.ndarray | None] = [None] * len(model.biases)
    for i in range(len(model.weights) - 1, -1, -1):
        weight_grads[i] = acts[i].T @ delta
        bias_grads[i] = delta.sum(axis=0)
        if i > 0:
            delta = (delta @ model.weights[i].T) * _activation_grad(
                model.activation, zs[i - 1], acts[i]
            )
    return weight_grads, bias_grads


def _batch_loss(model: MlpModel, X: np.ndarray, y: np.ndarray) -> float:
    logp = _log_softmax(_forward_pass(model, X)[1][-1])
    return float(-logp[np.arange(len(y)), y].mean())


def train(
    config: MlpConfig,
    X_train: np.ndarray,
    y_train: np.ndarray,
    class_count: int | None = None,
) -> MlpModel:
    """Run exactly ``config.max_iter`` epochs of seeded mini-batch updates.

    No early stopping. adam uses beta1=0.9, beta2=0.999, eps=1e-8; sgd uses
    momentum 0.9 at a constant learning rate. The per-epoch mean training
    loss is recorded on the returned model.
    """
    X = np.asarray(X_train, dtype=float)
    y = np.asarray(y_train, dtype=int)
    if X.ndim != 2 or X.shape[0] != y.shape[0]:
        raise ValueError("X_train and y_train must have matching rows")
    present = np.unique(y)
    if present.size < 2:
        raise ValueError("y_train must contain at least 2 classes")
    if class_count is None:
        class_count = int(y.max()) + 1

    rng = np.random.default_rng(config.seed)
    model = init_weights(config, X.shape[1], class_count, rng)
    params = model.weights + model.biases

    n = X.shape[0]
    batch_size = config.batch_size or min(200, n)
    lr = config.learning_rate_init

    if config.solver == "adam":
        m1 = [np.zeros_like(p) for p in params]
        m2 = [np.zeros_like(p) for p in params]
        step = 0
    else:
        velocity = [np.zeros_like(p) for p in params]

    losses = model.train_loss_curve
    # overflow inside the loop is a defined outcome (detected and raised)
    with np.errstate(over="ignore", invalid="ignore"):
        for epoch in range(config.max_iter):
            order = rng.permutation(n)
            epoch_loss = 0.0
            for start in range(0, n, batch_size):
                idx = order[start : start + batch_size]
                bX, by = X[idx], y[idx]

                zs, acts = _forward_pass(model, bX)
                logp = _log_softmax(acts[-1])
                loss = float(-logp[np.arange(len(by)), by].mean())
                if not np.isfinite(loss):
                    raise TrainingDiverged(epoch)
                epoch_loss += loss * len(by)

                probs = np.exp(logp)
                delta = (probs - np.eye(class_count)[by]) / len(by)
                grads: list[np.ndarray] = [None] * len(params)  # type: ignore[list-item]
                k = len(model.weights)
                for i in range(k - 1, -1, -1):
                    grads[i] = acts[i].T @ delta
                    grads[k + i] = delta.sum(axis=0)
                    if i > 0:
                        delta = (delta @ model.weights[i].T) * _activation_grad(
                            model.activation, zs[i - 1], acts[i]
                        )

                if config.solver == "adam":
                    step += 1
                    bc1 = 1.0 - ADAM_BETA1**step
                    bc2 = 1.0 - ADAM_BETA2**step
                    for j, (p, g) in enumerate(zip(params, grads)):
                        m1[j] = ADAM_BETA1 * m1[j] + (1.0 - ADAM_BETA1) * g
                        m2[j] = ADAM_BETA2 * m2[j] + (1.0 - ADAM_BETA2) * (g * g)
                        p -= lr * (m1[j] / bc1) / (np.sqrt(m2[j] / bc2) + ADAM_EPS)
                else:
                    for j, (p, g) in enumerate(zip(params, grads)):
                        velocity[j] = SGD_MOMENTUM * velocity[j] - lr * g
                        p += velocity[j]
            losses.append(epoch_loss / n)

    if not all(np.isfinite(p).all() for p in params):
        raise TrainingDiverged(config.max_iter - 1)
    return model
