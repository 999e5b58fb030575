"""LSTM cell and bidirectional encoder with full backpropagation through time.

Standard formulation: sigmoid input/forget/output gates, tanh candidate and
output squash, no peepholes, forget-gate bias initialised to 1.  The four
gate blocks share one fused weight matrix over [x; h] for speed.
"""

from __future__ import annotations

import numpy as np

from .layers import Parameter, ShapeError, sigmoid


class LstmCell:
    """Single-direction LSTM over a sequence; only the final hidden state is
    exposed, so backward seeds the gradient at the last step."""

    def __init__(self, name: str, input_dim: int, hidden_size: int, rng: np.random.Generator):
        self.input_dim = input_dim
        self.hidden_size = hidden_size
        bound = np.sqrt(6.0 / (input_dim + 2 * hidden_size))
        self.w = Parameter(f"{name}.w", rng.uniform(-bound, bound, size=(4 * hidden_size, input_dim + hidden_size)))
        bias = np.zeros(4 * hidden_size)
        bias[hidden_size : 2 * hidden_size] = 1.0  # forget gate open at init
        self.b = Parameter(f"{name}.b", bias)
        self.name = name
        self._cache: list[tuple] | None = None

    def parameters(self) -> list[Parameter]:
        return [self.w, self.b]

    def forward(self, xs: np.ndarray) -> np.ndarray:
        """Run the whole sequence (T, input_dim); returns the final hidden state."""
        if xs.ndim != 2 or xs.shape[1] != self.input_dim:
            raise ShapeError(f"lstm {self.name!r} forward: expected (T, {self.input_dim}), got {xs.shape}")
        if xs.shape[0] == 0:
            raise ShapeError(f"lstm {self.name!r} forward: empty sequence")
        hs = self.hidden_size
        h = np.zeros(hs)
        c = np.zeros(hs)
        cache = []
        for x in xs:
            xh = np.concatenate([x, h])
            z = self.w.value @ xh + self.b.value
            i = sigmoid(z[:hs])
            f = sigmoid(z[hs : 2 * hs])
            g = np.tanh(z[2 * hs : 3 * hs])
            o = sigmoid(z[3 * hs :])
            c_next = f * c + i * g
            tanh_c = np.tanh(c_next)
            h_next = o * tanh_c
            cache.append((xh, i, f, g, o, c, tanh_c))
            h, c = h_next, c_next
        self._cache = cache
        return h

    def backward(self, grad_h_final: np.ndarray) -> np.ndarray:
        """BPTT from the final hidden state; returns gradients w.r.t. inputs (T, input_dim)."""
        if self._cache is None:
            raise RuntimeError(f"lstm {self.name!r}: backward before forward")
        hs = self.hidden_size
        dh = grad_h_final.astype(np.float64)
        dc = np.zeros(hs)
        dxs = np.empty((len(self._cache), self.input_dim))
        for t in range(len(self._cache) - 1, -1, -1):
            xh, i, f, g, o, c_prev, tanh_c = self._cache[t]
            do = dh * tanh_c
            dc = dc + dh * o * (1.0 - tanh_c * tanh_c)
            di = dc * g
            df = dc * c_prev
            dg = dc * i
            dz = np.concatenate(
                [
                    di * i * (1.0 - i),
                    df * f * (1.0 - f),
                    dg * (1.0 - g * g),
                    do * o * (1.0 - o),
                ]
            )
            self.w.grad += np.outer(dz, xh)
            self.b.grad += dz
            dxh = self.w.value.T @ dz
            dxs[t] = dxh[: self.input_dim]
            dh = dxh[self.input_dim :]
            dc = dc * f
        self._cache = None
        return dxs


class BiLstm:
    """Forward and backward LSTM passes; final hidden states concatenated."""

    def __init__(self, name: str, input_dim: int, hidden_size: int, rng: np.random.Generator):
        self.fwd = LstmCell(f"{name}.fwd", input_dim, hidden_size, rng)
        self.bwd = LstmCell(f"{name}.bwd", input_dim, hidden_size, rng)
        self.hidden_size = hidden_size

    @property
    def out_dim(self) -> int:
        return 2 * self.hidden_size

    def parameters(self) -> list[Parameter]:
        return self.fwd.parameters() + self.bwd.parameters()

    def forward(self, xs: np.ndarray) -> np.ndarray:
        h_fwd = self.fwd.forward(xs)
        h_bwd = self.bwd.forward(xs[::-1])
        return np.concatenate([h_fwd, h_bwd])

    def backward(self, grad_out: np.ndarray) -> np.ndarray:
        if grad_out.shape != (self.out_dim,):
            raise ShapeError(f"bilstm backward: expected grad shape ({self.out_dim},), got {grad_out.shape}")
        hs = self.hidden_size
        dx_fwd = self.fwd.backward(grad_out[:hs])
        dx_bwd = self.bwd.backward(grad_out[hs:])
        return dx_fwd + dx_bwd[::-1]
