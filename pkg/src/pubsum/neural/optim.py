"""Plain SGD and adaptive-moment gradient descent over Parameter lists."""

from __future__ import annotations

import numpy as np

from .layers import Parameter


class Sgd:
    def __init__(self, learning_rate: float):
        self.learning_rate = learning_rate

    def step(self, params: list[Parameter]) -> None:
        for p in params:
            p.value -= self.learning_rate * p.grad


class Adam:
    def __init__(self, learning_rate: float = 1e-3, beta1: float = 0.9, beta2: float = 0.999, eps: float = 1e-8):
        self.learning_rate = learning_rate
        self.beta1 = beta1
        self.beta2 = beta2
        self.eps = eps
        self._m: dict[int, np.ndarray] = {}
        self._v: dict[int, np.ndarray] = {}
        self._t = 0

    def step(self, params: list[Parameter]) -> None:
        self._t += 1
        b1, b2 = self.beta1, self.beta2
        for p in params:
            key = id(p)
            m = self._m.setdefault(key, np.zeros_like(p.value))
            v = self._v.setdefault(key, np.zeros_like(p.value))
            m *= b1
            m += (1 - b1) * p.grad
            v *= b2
            v += (1 - b2) * p.grad * p.grad
            m_hat = m / (1 - b1**self._t)
            v_hat = v / (1 - b2**self._t)
            p.value -= self.learning_rate * m_hat / (np.sqrt(v_hat) + self.eps)


def make_optimizer(kind: str, learning_rate: float):
    if kind == "adam":
        return Adam(learning_rate)
    if kind == "sgd":
        return Sgd(learning_rate)
    raise ValueError(f"unknown optimizer {kind!r}; expected 'adam' or 'sgd'")
