"""Tiny fully connected network with exact backprop, RMSProp, and replay.

The network maps a length-M context to one value per transmission pattern
(2**M outputs), with rectifier hidden layers and an identity output layer.
Training regresses the value of the action actually taken onto its observed
reward:

    J(w) = (1/B) * sum_j (r_j - V[j, a_j])**2

so gradients flow only through taken-action outputs. Updates are RMSProp
steps on the globally norm-clipped gradient.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass

import numpy as np

Batch = tuple[np.ndarray, np.ndarray, np.ndarray]  # contexts (B, M), actions (B,), rewards (B,)


@dataclass
class Mlp:
    weights: list[np.ndarray]  # per layer, shape (fan_out, fan_in)
    biases: list[np.ndarray]  # per layer, shape (fan_out,)

    @property
    def layer_sizes(self) -> list[int]:
        return [self.weights[0].shape[1]] + [w.shape[0] for w in self.weights]

    @property
    def param_count(self) -> int:
        return sum(w.size + b.size for w, b in zip(self.weights, self.biases))

    @property
    def madd_count(self) -> int:
        """Multiply-add count of one forward pass: sum of l_out * (2*l_in + 1)."""
        return sum(w.shape[0] * (2 * w.shape[1] + 1) for w in self.weights)


def init_mlp(layer_sizes: list[int], rng: np.random.Generator) -> Mlp:
    """Uniform init in [-1/sqrt(fan_in), 1/sqrt(fan_in)] per layer."""
    if len(layer_sizes) < 2:
        raise ValueError("need at least input and output layers")
    weights, biases = [], []
    for fan_in, fan_out in zip(layer_sizes[:-1], layer_sizes[1:]):
        bound = 1.0 / np.sqrt(fan_in)
        weights.append(rng.uniform(-bound, bound, size=(fan_out, fan_in)))
        biases.append(rng.uniform(-bound, bound, size=fan_out))
    return Mlp(weights=weights, biases=biases)


def _forward_cached(model: Mlp, x: np.ndarray) -> list[np.ndarray]:
    """Activations per layer for a batch (B, M); last entry is the output."""
    acts = [x]
    h = x
    last = len(model.weights) - 1
    for i, (w, b) in enumerate(zip(model.weights, model.biases)):
        z = h @ w.T + b
        h = z if i == last else np.maximum(z, 0.0)
        acts.append(h)
    return acts


def forward(model: Mlp, context: np.ndarray) -> np.ndarray:
    """Action values for one context (M,) -> (2**M,)."""
    x = np.asarray(context, dtype=float)
    if not np.all(np.isfinite(x)):
        raise ValueError("context must be finite")
    return _forward_cached(model, x[None, :])[-1][0]


def forward_batch(model: Mlp, contexts: np.ndarray) -> np.ndarray:
    return _forward_cached(model, np.asarray(contexts, dtype=float))[-1]


def loss(model: Mlp, batch: Batch) -> float:
    contexts, actions, rewards = batch
    if len(rewards) == 0:
        raise ValueError("empty minibatch")
    values = forward_batch(model, contexts)
    taken = values[np.arange(len(rewards)), np.asarray(actions, dtype=int)]
    return float(np.mean((np.asarray(rewards, dtype=float) - taken) ** 2))


Grads = list[tuple[np.ndarray, np.ndarray]]


def backward(model: Mlp, batch: Batch) -> tuple[Grads, float]:
    """Exact gradient of the taken-action squared loss; returns (grads, loss)."""
    contexts, actions, rewards = batch
    if len(rewards) == 0:
        raise ValueError("empty minibatch")
    contexts = np.asarray(contexts, dtype=float)
    actions = np.asarray(actions, dtype=int)
    rewards = np.asarray(rewards, dtype=float)
    acts = _forward_cached(model, contexts)
    values = acts[-1]
    b_size = len(rewards)
    rows = np.arange(b_size)
    residual = values[rows, actions] - rewards

    delta = np.zeros_like(values)
    delta[rows, actions] = 2.0 * residual / b_size

    grads: list[tuple[np.ndarray, np.ndarray]] = [None] * len(model.weights)  # type: ignore[list-item]
    for i in range(len(model.weights) - 1, -1, -1):
        grads[i] = (delta.T @ acts[i], delta.sum(axis=0))
        if i > 0:
            delta = (delta @ model.weights[i]) * (acts[i] > 0.0)
    flat_loss = float(np.mean(residual**2))
    return grads, flat_loss


def grad_norm(grads: Grads) -> float:
    total = 0.0
    for gw, gb in grads:
        total += float((gw**2).sum() + (gb**2).sum())
    return float(np.sqrt(total))


def clip_gradient(grads: Grads, beta0: float) -> Grads:
    """Global norm clipping: g * beta0 / max(||g||, beta0)."""
    if beta0 <= 0:
        raise ValueError("beta0 must be > 0")
    scale = beta0 / max(grad_norm(grads), beta0)
    if scale == 1.0:
        return grads
    return [(gw * scale, gb * scale) for gw, gb in grads]


@dataclass
class RmsPropState:
    sq_weights: list[np.ndarray]
    sq_biases: list[np.ndarray]
    decay: float = 0.9
    smoothing: float = 1e-8
    lr: float = 0.01

    @classmethod
    def for_model(cls, model: Mlp, decay: float = 0.9, smoothing: float = 1e-8, lr: float = 0.01) -> "RmsPropState":
        return cls(
            sq_weights=[np.zeros_like(w) for w in model.weights],
            sq_biases=[np.zeros_like(b) for b in model.biases],
            decay=decay,
            smoothing=smoothing,
            lr=lr,
        )


def rmsprop_step(model: Mlp, state: RmsPropState, grads: Grads) -> None:
    """s <- decay*s + (1-decay)*g^2; w <- w - lr * g / (sqrt(s) + eps). In place."""
    g, eps, lr = state.decay, state.smoothing, state.lr
    for i, (gw, gb) in enumerate(grads):
        state.sq_weights[i] = g * state.sq_weights[i] + (1.0 - g) * gw**2
        state.sq_biases[i] = g * state.sq_biases[i] + (1.0 - g) * gb**2
        model.weights[i] -= lr * gw / (np.sqrt(state.sq_weights[i]) + eps)
        model.biases[i] -= lr * gb / (np.sqrt(state.sq_biases[i]) + eps)


class ReplayMemory:
    """Bounded FIFO of (context, action, reward) tuples; oldest evicted first."""

    def __init__(self, capacity: int, n_channels: int):
        if capacity < 1:
            raise ValueError("capacity must be >= 1")
        self.capacity = capacity
        self._contexts = np.zeros((capacity, n_channels))
        self._actions = np.zeros(capacity, dtype=np.int64)
        self._rewards = np.zeros(capacity)
        self._next = 0
        self._size = 0

    def __len__(self) -> int:
        return self._size

    def push(self, context: np.ndarray, action: int, reward: float) -> None:
        self._contexts[self._next] = context
        self._actions[self._next] = action
        self._rewards[self._next] = reward
        self._next = (self._next + 1) % self.capacity
        self._size = min(self._size + 1, self.capacity)

    def contents(self) -> Batch:
        """Stored tuples, oldest first."""
        if self._size < self.capacity:
            idx = np.arange(self._size)
        else:
            idx = np.roll(np.arange(self.capacity), -self._next)
        return self._contexts[idx], self._actions[idx], self._rewards[idx]

    def sample(self, batch_size: int, rng: np.random.Generator) -> Batch:
        """Uniform minibatch; with replacement only while size < batch_size."""
        if self._size == 0:
            raise ValueError("cannot sample from empty memory")
        replace = self._size < batch_size
        idx = rng.choice(self._size, size=batch_size, replace=replace)
        return self._contexts[idx], self._actions[idx], self._rewards[idx]


def params_to_vector(model: Mlp) -> np.ndarray:
    parts = []
    for w, b in zip(model.weights, model.biases):
        parts.append(w.ravel())
        parts.append(b.ravel())
    return np.concatenate(parts)


def vector_to_params(model: Mlp, vec: np.ndarray) -> None:
    pos = 0
    for i, (w, b) in enumerate(zip(model.weights, model.biases)):
        model.weights[i] = vec[pos : pos + w.size].reshape(w.shape).copy()
        pos += w.size
        model.biases[i] = vec[pos : pos + b.size].copy()
        pos += b.size
    if pos != vec.size:
        raise ValueError("vector length does not match model")


def grads_to_vector(grads: Grads) -> np.ndarray:
    parts = []
    for gw, gb in grads:
        parts.append(gw.ravel())
        parts.append(gb.ravel())
    return np.concatenate(parts)


_MAGIC = b"TMLP"
_VERSION = 1


def save_weights(model: Mlp, path: str, update_count: int = 0) -> None:
    """Flat little-endian snapshot: header (layer sizes, counter) + float64 params."""
    sizes = model.layer_sizes
    with open(path, "wb") as fh:
        fh.write(_MAGIC)
        fh.write(struct.pack("<HH", _VERSION, len(sizes)))
        fh.write(struct.pack(f"<{len(sizes)}I", *sizes))
        fh.write(struct.pack("<Q", update_count))
        fh.write(params_to_vector(model).astype("<f8").tobytes())


def load_weights(path: str) -> tuple[Mlp, int]:
    with open(path, "rb") as fh:
        if fh.read(4) != _MAGIC:
            raise ValueError("not a weight snapshot")
        version, n_sizes = struct.unpack("<HH", fh.read(4))
        if version != _VERSION:
            raise ValueError(f"unsupported snapshot version {version}")
        sizes = list(struct.unpack(f"<{n_sizes}I", fh.read(4 * n_sizes)))
        (update_count,) = struct.unpack("<Q", fh.read(8))
        flat = np.frombuffer(fh.read(), dtype="<f8")
    model = Mlp(
        weights=[np.zeros((o, i)) for i, o in zip(sizes[:-1], sizes[1:])],
        biases=[np.zeros(o) for o in sizes[1:]],
    )
    vector_to_params(model, flat.astype(float))
    return model, update_count
