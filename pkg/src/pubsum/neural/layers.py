"""Dense layer, ReLU, inverted dropout and softmax cross-entropy.

Layers operate on single 1-D activation vectors; batching happens by
gradient accumulation in the training loop, which sidesteps padding and
masking for variable-length sentences.  forward() caches what backward()
needs, so the call order per instance is forward -> (loss) -> backward.
"""

from __future__ import annotations

import numpy as np


class ShapeError(ValueError):
    pass


def sigmoid(x: np.ndarray) -> np.ndarray:
    # Split by sign to stay stable for large |x|.
    out = np.empty_like(x, dtype=np.float64)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    ex = np.exp(x[~pos])
    out[~pos] = ex / (1.0 + ex)
    return out


def softmax(logits: np.ndarray) -> np.ndarray:
    shifted = logits - logits.max()
    ex = np.exp(shifted)
    return ex / ex.sum()


def softmax_cross_entropy(logits: np.ndarray, label: int) -> tuple[float, np.ndarray]:
    """Loss and gradient w.r.t. the logits for one 2-class instance."""
    if logits.ndim != 1:
        raise ShapeError(f"softmax_cross_entropy: expected 1-D logits, got shape {logits.shape}")
    if not 0 <= label < logits.shape[0]:
        raise ShapeError(f"softmax_cross_entropy: label {label} out of range for {logits.shape[0]} classes")
    probs = softmax(logits)
    loss = -float(np.log(max(probs[label], 1e-300)))
    grad = probs.copy()
    grad[label] -= 1.0
    return loss, grad


class Parameter:
    """A named weight array with an accumulated gradient of the same shape."""

    __slots__ = ("name", "value", "grad")

    def __init__(self, name: str, value: np.ndarray):
        self.name = name
        self.value = np.asarray(value, dtype=np.float64)
        self.grad = np.zeros_like(self.value)

    def zero_grad(self) -> None:
        self.grad[...] = 0.0


class Dense:
    """Affine map y = W x + b with gradient accumulation on backward."""

    def __init__(self, name: str, in_dim: int, out_dim: int, rng: np.random.Generator):
        bound = np.sqrt(6.0 / (in_dim + out_dim))
        self.weights = Parameter(f"{name}.weights", rng.uniform(-bound, bound, size=(out_dim, in_dim)))
        self.bias = Parameter(f"{name}.bias", np.zeros(out_dim))
        self.name = name
        self._x: np.ndarray | None = None

    @property
    def in_dim(self) -> int:
        return self.weights.value.shape[1]

    @property
    def out_dim(self) -> int:
        return self.weights.value.shape[0]

    def parameters(self) -> list[Parameter]:
        return [self.weights, self.bias]

    def forward(self, x: np.ndarray) -> np.ndarray:
        if x.shape != (self.in_dim,):
            raise ShapeError(f"dense {self.name!r} forward: expected input shape ({self.in_dim},), got {x.shape}")
        self._x = x
        return self.weights.value @ x + self.bias.value

    def backward(self, grad_out: np.ndarray) -> np.ndarray:
        if grad_out.shape != (self.out_dim,):
            raise ShapeError(f"dense {self.name!r} backward: expected grad shape ({self.out_dim},), got {grad_out.shape}")
        if self._x is None:
            raise RuntimeError(f"dense {self.name!r}: backward before forward")
        self.weights.grad += np.outer(grad_out, self._x)
        self.bias.grad += grad_out
        return self.weights.value.T @ grad_out


class Relu:
    def __init__(self):
        self._mask: np.ndarray | None = None

    def forward(self, x: np.ndarray) -> np.ndarray:
        self._mask = x > 0
        return np.where(self._mask, x, 0.0)

    def backward(self, grad_out: np.ndarray) -> np.ndarray:
        if self._mask is None:
            raise RuntimeError("relu: backward before forward")
        return np.where(self._mask, grad_out, 0.0)


class Dropout:
    """Inverted dropout: scaling happens at train time, evaluation is a no-op."""

    def __init__(self, keep_prob: float):
        if not 0 < keep_prob <= 1:
            raise ValueError(f"keep_prob must be in (0, 1], got {keep_prob}")
        self.keep_prob = keep_prob
        self._mask: np.ndarray | None = None

    def forward(self, x: np.ndarray, train: bool, rng: np.random.Generator | None = None) -> np.ndarray:
        if not train or self.keep_prob == 1.0:
            self._mask = None
            return x
        if rng is None:
            raise ValueError("dropout in train mode needs an rng")
        self._mask = (rng.random(x.shape) < self.keep_prob) / self.keep_prob
        return x * self._mask

    def backward(self, grad_out: np.ndarray) -> np.ndarray:
        if self._mask is None:
            return grad_out
        return grad_out * self._mask
