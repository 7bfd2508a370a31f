"""Gradient-step rules on flat parameter arrays."""

from __future__ import annotations

import numpy as np

__all__ = ["AdamState", "sgd_step"]


class AdamState:
    """Adaptive per-parameter steps from bias-corrected moment estimates."""

    def __init__(self, size: int, lr: float = 1e-2, beta1: float = 0.9,
                 beta2: float = 0.999, eps: float = 1e-8):
        if lr <= 0:
            raise ValueError("lr must be positive")
        self.lr = lr
        self.beta1 = beta1
        self.beta2 = beta2
        self.eps = eps
        self.m = np.zeros(size)
        self.v = np.zeros(size)
        self.t = 0

    def step(self, values: np.ndarray, grads: np.ndarray, maximize: bool = False) -> None:
        """Update ``values`` in place along (or against) ``grads``."""
        g = grads if not maximize else -grads
        self.t += 1
        self.m = self.beta1 * self.m + (1.0 - self.beta1) * g
        self.v = self.beta2 * self.v + (1.0 - self.beta2) * g * g
        m_hat = self.m / (1.0 - self.beta1 ** self.t)
        v_hat = self.v / (1.0 - self.beta2 ** self.t)
        values -= self.lr * m_hat / (np.sqrt(v_hat) + self.eps)


def sgd_step(values: np.ndarray, grads: np.ndarray, lr: float, maximize: bool = False) -> None:
    if maximize:
        values += lr * grads
    else:
        values -= lr * grads
