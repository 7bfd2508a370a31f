"""Reverse-mode automatic differentiation on a tape of dense numpy buffers.

The tape records primitive ops (add, mul, matmul, sum, exp, log, tanh,
relu, sigmoid, softmax, max-with-constant, concat-rows) in topological
order. Values are computed eagerly when an op is pushed;
``Tape.forward`` re-executes the recorded program with fresh leaf
values, which is what the finite difference checker relies on. A tape
is single-threaded; independent tapes share no state and may run
concurrently.

All buffers are float64. Matmul accepts a vector or a matrix of column
vectors on the right; elementwise ops follow numpy broadcasting, with
adjoints summed back over broadcast axes.
"""

from __future__ import annotations

from typing import Callable, Sequence

import numpy as np

__all__ = [
    "Tape",
    "Var",
    "ParamVector",
    "NumericError",
    "ShapeMismatchError",
    "grad_check",
    "softplus",
]


class ShapeMismatchError(ValueError):
    """Raised when op input shapes are structurally incompatible."""


class NumericError(ArithmeticError):
    """Raised when a non-finite value shows up in a computation.

    ``node`` carries the index of the offending tape node when known.
    """

    def __init__(self, message: str, node: int | None = None):
        super().__init__(message)
        self.node = node


class _Node:
    __slots__ = ("op", "args", "aux", "value", "adjoint")

    def __init__(self, op: str, args: tuple[int, ...], aux, value: np.ndarray):
        self.op = op
        self.args = args
        self.aux = aux
        self.value = value
        self.adjoint = None


class Var:
    """Handle to one node of a tape."""

    __slots__ = ("tape", "idx")

    def __init__(self, tape: "Tape", idx: int):
        self.tape = tape
        self.idx = idx

    @property
    def value(self) -> np.ndarray:
        return self.tape.nodes[self.idx].value

    @property
    def shape(self) -> tuple[int, ...]:
        return self.value.shape

    def _coerce(self, other) -> "Var":
        if isinstance(other, Var):
            if other.tape is not self.tape:
                raise ShapeMismatchError("operands live on different tapes")
            return other
        return self.tape.constant(other)

    def __add__(self, other):
        return self.tape.add(self, self._coerce(other))

    __radd__ = __add__

    def __mul__(self, other):
        return self.tape.mul(self, self._coerce(other))

    __rmul__ = __mul__

    def __neg__(self):
        return self.tape.mul(self, self.tape.constant(-1.0))

    def __sub__(self, other):
        return self.tape.add(self, -self._coerce(other))

    def __rsub__(self, other):
        return self.tape.add(self._coerce(other), -self)


def _as_buffer(value) -> np.ndarray:
    out = np.asarray(value, dtype=np.float64)
    return out


def _unbroadcast(adj: np.ndarray, shape: tuple[int, ...]) -> np.ndarray:
    """Sum an adjoint over axes that numpy broadcasting introduced."""
    if adj.shape == shape:
        return adj
    while adj.ndim > len(shape):
        adj = adj.sum(axis=0)
    for axis, n in enumerate(shape):
        if n == 1 and adj.shape[axis] != 1:
            adj = adj.sum(axis=axis, keepdims=True)
    return adj


class Tape:
    """Computation graph in topological order (inputs precede users).

    With ``validate=True`` every pushed value is checked for finiteness;
    the replaying ``forward`` always checks, since it exists to probe
    perturbed inputs.
    """

    def __init__(self, validate: bool = False):
        self.nodes: list[_Node] = []
        self.leaf_ids: list[int] = []
        self.validate = validate

    # -- construction ---------------------------------------------------

    def _push(self, op: str, args: tuple[int, ...], aux, value: np.ndarray) -> Var:
        if self.validate and not np.all(np.isfinite(value)):
            raise NumericError(f"non-finite value from op '{op}'", node=len(self.nodes))
        self.nodes.append(_Node(op, args, aux, value))
        return Var(self, len(self.nodes) - 1)

    def leaf(self, value) -> Var:
        value = _as_buffer(value)
        var = self._push("leaf", (), None, value)
        self.leaf_ids.append(var.idx)
        return var

    def constant(self, value) -> Var:
        return self._push("const", (), None, _as_buffer(value))

    def add(self, a: Var, b: Var) -> Var:
        return self._push("add", (a.idx, b.idx), None, a.value + b.value)

    def mul(self, a: Var, b: Var) -> Var:
        return self._push("mul", (a.idx, b.idx), None, a.value * b.value)

    def matmul(self, a: Var, b: Var) -> Var:
        av, bv = a.value, b.value
        if av.ndim != 2 or bv.ndim not in (1, 2) or av.shape[1] != bv.shape[0]:
            raise ShapeMismatchError(
                f"matmul expects (m,n) @ (n,) or (n,b), got {av.shape} @ {bv.shape}"
            )
        return self._push("matmul", (a.idx, b.idx), None, av @ bv)

    def sum(self, a: Var) -> Var:
        return self._push("sum", (a.idx,), None, np.asarray(a.value.sum()))

    def exp(self, a: Var) -> Var:
        return self._push("exp", (a.idx,), None, np.exp(a.value))

    def log(self, a: Var) -> Var:
        return self._push("log", (a.idx,), None, np.log(a.value))

    def tanh(self, a: Var) -> Var:
        return self._push("tanh", (a.idx,), None, np.tanh(a.value))

    def sigmoid(self, a: Var) -> Var:
        v = a.value
        out = np.empty_like(v)
        pos = v >= 0
        out[pos] = 1.0 / (1.0 + np.exp(-v[pos]))
        ev = np.exp(v[~pos])
        out[~pos] = ev / (1.0 + ev)
        return self._push("sigmoid", (a.idx,), None, out)

    def maximum(self, a: Var, const: float) -> Var:
        # Subgradient at value == const is 0 (fixed convention; finite
        # difference checks must avoid the kink).
        return self._push("maximum", (a.idx,), float(const), np.maximum(a.value, const))

    def relu(self, a: Var) -> Var:
        return self.maximum(a, 0.0)

    def softmax(self, a: Var) -> Var:
        # Along axis 0, stabilized by max subtraction.
        v = a.value
        shifted = v - v.max(axis=0, keepdims=True)
        e = np.exp(shifted)
        out = e / e.sum(axis=0, keepdims=True)
        return self._push("softmax", (a.idx,), None, out)

    def concat_rows(self, parts: Sequence[Var]) -> Var:
        """Stack 2d blocks along axis 0; backward splits the adjoint.

        Keeps stacked-block assembly linear in the number of blocks
        (selection matmuls would cost another factor of the total
        height).
        """
        parts = list(parts)
        if not parts:
            raise ShapeMismatchError("concat_rows needs at least one block")
        values = [p.value for p in parts]
        if any(v.ndim != 2 for v in values):
            raise ShapeMismatchError("concat_rows expects 2d blocks")
        heights = tuple(v.shape[0] for v in values)
        return self._push("concat_rows", tuple(p.idx for p in parts), heights,
                          np.concatenate(values, axis=0))

    # -- execution ------------------------------------------------------

    def _compute(self, node: _Node) -> np.ndarray:
        op = node.op
        vals = [self.nodes[i].value for i in node.args]
        if op == "add":
            return vals[0] + vals[1]
        if op == "mul":
            return vals[0] * vals[1]
        if op == "matmul":
            return vals[0] @ vals[1]
        if op == "sum":
            return np.asarray(vals[0].sum())
        if op == "exp":
            return np.exp(vals[0])
        if op == "log":
            return np.log(vals[0])
        if op == "tanh":
            return np.tanh(vals[0])
        if op == "sigmoid":
            v = vals[0]
            out = np.empty_like(v)
            pos = v >= 0
            out[pos] = 1.0 / (1.0 + np.exp(-v[pos]))
            ev = np.exp(v[~pos])
            out[~pos] = ev / (1.0 + ev)
            return out
        if op == "maximum":
            return np.maximum(vals[0], node.aux)
        if op == "softmax":
            shifted = vals[0] - vals[0].max(axis=0, keepdims=True)
            e = np.exp(shifted)
            return e / e.sum(axis=0, keepdims=True)
        if op == "concat_rows":
            return np.concatenate(vals, axis=0)
        raise ValueError(f"unknown op '{op}'")

    def forward(self, leaf_values: Sequence[np.ndarray] | None = None,
                output: Var | None = None) -> np.ndarray:
        """Re-execute the recorded program, optionally with new leaf values."""
        if leaf_values is not None:
            if len(leaf_values) != len(self.leaf_ids):
                raise ShapeMismatchError(
                    f"expected {len(self.leaf_ids)} leaf values, got {len(leaf_values)}"
                )
            for idx, val in zip(self.leaf_ids, leaf_values):
                val = _as_buffer(val)
                if val.shape != self.nodes[idx].value.shape:
                    raise ShapeMismatchError(
                        f"leaf {idx} expects shape {self.nodes[idx].value.shape}, "
                        f"got {val.shape}"
                    )
                self.nodes[idx].value = val
        with np.errstate(all="ignore"):
            for i, node in enumerate(self.nodes):
                if node.op in ("leaf", "const"):
                    continue
                node.value = self._compute(node)
                if not np.all(np.isfinite(node.value)):
                    raise NumericError(f"non-finite value from op '{node.op}'", node=i)
        out_node = self.nodes[output.idx if output is not None else -1]
        return out_node.value

    def backward(self, output: Var) -> list[np.ndarray]:
        """Populate adjoints from a scalar output; return per-leaf gradients.

        Node values are left untouched. Adjoints of nodes the output does
        not depend on are exactly zero. Accumulation is lazy (None until
        the first contribution) and never in place, because a first
        contribution may alias a parent's adjoint.
        """
        out = self.nodes[output.idx]
        if out.value.size != 1:
            raise ValueError(f"backward needs a scalar output, got shape {out.value.shape}")
        for node in self.nodes:
            node.adjoint = None
        out.adjoint = np.ones_like(out.value)

        def acc(target: _Node, value: np.ndarray) -> None:
            target.adjoint = value if target.adjoint is None else target.adjoint + value

        for i in range(output.idx, -1, -1):
            node = self.nodes[i]
            adj = node.adjoint
            if adj is None or node.op in ("leaf", "const"):
                continue
            a = self.nodes[node.args[0]]
            if node.op == "add":
                b = self.nodes[node.args[1]]
                acc(a, _unbroadcast(adj, a.value.shape))
                acc(b, _unbroadcast(adj, b.value.shape))
            elif node.op == "mul":
                b = self.nodes[node.args[1]]
                acc(a, _unbroadcast(adj * b.value, a.value.shape))
                acc(b, _unbroadcast(adj * a.value, b.value.shape))
            elif node.op == "matmul":
                b = self.nodes[node.args[1]]
                if b.value.ndim == 1:
                    acc(a, np.outer(adj, b.value))
                    acc(b, a.value.T @ adj)
                else:
                    acc(a, adj @ b.value.T)
                    acc(b, a.value.T @ adj)
            elif node.op == "sum":
                acc(a, np.broadcast_to(adj, a.value.shape))
            elif node.op == "exp":
                acc(a, adj * node.value)
            elif node.op == "log":
                acc(a, adj / a.value)
            elif node.op == "tanh":
                acc(a, adj * (1.0 - node.value * node.value))
            elif node.op == "sigmoid":
                acc(a, adj * node.value * (1.0 - node.value))
            elif node.op == "maximum":
                acc(a, adj * (a.value > node.aux))
            elif node.op == "softmax":
                y = node.value
                acc(a, y * (adj - (adj * y).sum(axis=0, keepdims=True)))
            elif node.op == "concat_rows":
                offset = 0
                for arg, height in zip(node.args, node.aux):
                    acc(self.nodes[arg], adj[offset:offset + height])
                    offset += height
            else:
                raise ValueError(f"unknown op '{node.op}'")
        for node in self.nodes:
            if node.adjoint is None:
                node.adjoint = np.zeros_like(node.value)
        return [self.nodes[i].adjoint.copy() for i in self.leaf_ids]


def softplus(v: Var) -> Var:
    """log(1 + exp(v)) composed from primitives, stable for large |v|.

    Uses max(v, 0) + log(1 + exp(-|v|)); the derivative is sigmoid(v)
    away from v = 0.
    """
    tape = v.tape
    neg_abs = -(tape.relu(v) + tape.relu(-v))
    return tape.relu(v) + tape.log(tape.exp(neg_abs) + 1.0)


class ParamVector:
    """Flat float64 parameter values with a same-length gradient buffer.

    ``shapes`` partitions the flat storage into tensors; ``view`` exposes
    a reshaped numpy view, so in-place updates to ``values`` are seen by
    every view.
    """

    def __init__(self, values: np.ndarray, shapes: Sequence[tuple[int, ...]] | None = None):
        self.values = np.ascontiguousarray(values, dtype=np.float64)
        if self.values.ndim != 1:
            raise ShapeMismatchError("ParamVector values must be one-dimensional")
        self.grads = np.zeros_like(self.values)
        self.shapes = [tuple(s) for s in shapes] if shapes is not None else [(self.values.size,)]
        self._offsets = np.concatenate(
            [[0], np.cumsum([int(np.prod(s)) for s in self.shapes])]
        )
        if self._offsets[-1] != self.values.size:
            raise ShapeMismatchError(
                f"shapes cover {self._offsets[-1]} entries, storage has {self.values.size}"
            )

    @property
    def size(self) -> int:
        return self.values.size

    def view(self, i: int) -> np.ndarray:
        lo, hi = self._offsets[i], self._offsets[i + 1]
        return self.values[lo:hi].reshape(self.shapes[i])

    def grad_view(self, i: int) -> np.ndarray:
        lo, hi = self._offsets[i], self._offsets[i + 1]
        return self.grads[lo:hi].reshape(self.shapes[i])

    def views(self) -> list[np.ndarray]:
        return [self.view(i) for i in range(len(self.shapes))]

    def zero_grads(self) -> None:
        self.grads[:] = 0.0

    def set_grads(self, tensors: Sequence[np.ndarray]) -> None:
        if len(tensors) != len(self.shapes):
            raise ShapeMismatchError(
                f"expected {len(self.shapes)} gradient tensors, got {len(tensors)}"
            )
        for i, g in enumerate(tensors):
            self.grad_view(i)[...] = g
        if not np.all(np.isfinite(self.grads)):
            raise NumericError("non-finite gradient written to ParamVector")


def grad_check(fn: Callable[[Tape, Var], Var], point: np.ndarray, eps: float = 1e-6) -> float:
    """Max relative error between tape gradients and central differences.

    ``fn`` builds a scalar output from a tape and a single leaf holding
    ``point``. Relative error per coordinate is
    |analytic - fd| / (|analytic| + 1e-8).
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    point = _as_buffer(point)
    tape = Tape(validate=True)
    x = tape.leaf(point.copy())
    out = fn(tape, x)
    if out.value.size != 1:
        raise ValueError("grad_check needs a scalar-valued function")
    analytic = tape.backward(out)[0]
    fd = np.zeros_like(point)
    flat = point.ravel()
    fd_flat = fd.ravel()
    for j in range(flat.size):
        bump = np.zeros_like(flat)
        bump[j] = eps
        hi = tape.forward([(flat + bump).reshape(point.shape)], output=out)
        lo = tape.forward([(flat - bump).reshape(point.shape)], output=out)
        fd_flat[j] = (float(hi) - float(lo)) / (2.0 * eps)
    tape.forward([point], output=out)
    rel = np.abs(analytic - fd) / (np.abs(analytic) + 1e-8)
    return float(rel.max())
