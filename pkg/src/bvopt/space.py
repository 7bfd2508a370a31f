"""Discrete search spaces: dimensions, per-dimension cardinalities, encodings.

Points are integer category assignments; the surrogate consumes their
one-hot encodings (binary variables use a 2-wide block, so binary and
categorical spaces share one layout).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["SearchSpace"]


@dataclass(frozen=True)
class SearchSpace:
    """Product of finite categorical variables."""

    cardinalities: tuple[int, ...]

    def __post_init__(self):
        cards = tuple(int(k) for k in self.cardinalities)
        object.__setattr__(self, "cardinalities", cards)
        if len(cards) < 1:
            raise ValueError("search space needs at least one dimension")
        if any(k < 2 for k in cards):
            raise ValueError("every dimension needs at least two categories")

    @classmethod
    def binary(cls, dims: int) -> "SearchSpace":
        return cls((2,) * dims)

    @classmethod
    def categorical(cls, dims: int, categories: int) -> "SearchSpace":
        return cls((categories,) * dims)

    @property
    def dims(self) -> int:
        return len(self.cardinalities)

    @property
    def one_hot_dim(self) -> int:
        return sum(self.cardinalities)

    @property
    def offsets(self) -> np.ndarray:
        """Start index of each dimension's one-hot block."""
        return np.concatenate([[0], np.cumsum(self.cardinalities)])[:-1]

    def n_points(self) -> int:
        total = 1
        for k in self.cardinalities:
            total *= k
        return total

    def contains(self, x) -> bool:
        x = np.asarray(x)
        if x.shape != (self.dims,):
            return False
        return all(0 <= int(v) < k for v, k in zip(x, self.cardinalities))

    def check_point(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=np.int64)
        if not self.contains(x):
            raise ValueError(f"{x!r} is not a point of this space")
        return x

    def encode(self, x) -> np.ndarray:
        """One-hot encode a point into a float vector of length one_hot_dim."""
        x = self.check_point(x)
        out = np.zeros(self.one_hot_dim)
        out[self.offsets + x] = 1.0
        return out

    def encode_batch(self, xs) -> np.ndarray:
        """One-hot encode points into a (n, one_hot_dim) matrix."""
        xs = np.asarray(xs, dtype=np.int64)
        if xs.ndim != 2 or xs.shape[1] != self.dims:
            raise ValueError(f"expected (n, {self.dims}) points, got {xs.shape}")
        out = np.zeros((xs.shape[0], self.one_hot_dim))
        rows = np.arange(xs.shape[0])[:, None]
        out[rows, self.offsets[None, :] + xs] = 1.0
        return out

    def random_point(self, rng: np.random.Generator) -> np.ndarray:
        return np.array([rng.integers(k) for k in self.cardinalities], dtype=np.int64)

    def iter_points(self):
        """Yield every point; callers guard on n_points() themselves."""
        x = np.zeros(self.dims, dtype=np.int64)
        while True:
            yield x.copy()
            for i in range(self.dims - 1, -1, -1):
                x[i] += 1
                if x[i] < self.cardinalities[i]:
                    break
                x[i] = 0
            else:
                return
