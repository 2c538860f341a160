"""Minimal dense-tensor arithmetic with reverse-mode automatic differentiation.

Tensors wrap numpy arrays (float32 for training, float64 for verification)
and record the operations applied to them. Calling :func:`backward` on a
scalar result walks the recorded graph in reverse topological order and
accumulates gradients into every leaf that requires them. A central
finite-difference harness (:func:`finite_diff_check`) verifies any scalar
function of a set of parameter tensors against the autodiff gradients.
"""

from __future__ import annotations

import contextlib
import threading
from typing import Callable, Iterable, Sequence

import numpy as np

DEFAULT_DTYPE = np.float32


class _GradMode(threading.local):
    # per-thread, so concurrent inference threads cannot race each other
    enabled = True


_grad_mode = _GradMode()


@contextlib.contextmanager
def no_grad():
    """Disable graph recording inside the block (inference sharing)."""
    prev = _grad_mode.enabled
    _grad_mode.enabled = False
    try:
        yield
    finally:
        _grad_mode.enabled = prev


class ShapeMismatchError(ValueError):
    pass


def _as_array(values, dtype) -> np.ndarray:
    arr = np.asarray(values, dtype=dtype)
    return arr


def _unbroadcast(grad: np.ndarray, shape: tuple) -> np.ndarray:
    """Sum `grad` down to `shape`, undoing numpy broadcasting."""
    if grad.shape == shape:
        return grad
    extra = grad.ndim - len(shape)
    if extra > 0:
        grad = grad.sum(axis=tuple(range(extra)))
    axes = tuple(i for i, n in enumerate(shape) if n == 1 and grad.shape[i] != 1)
    if axes:
        grad = grad.sum(axis=axes, keepdims=True)
    return grad.reshape(shape)


class Tensor:
    """Dense array node in a reverse-mode computation graph.

    `grad` is allocated lazily on the first backward pass and has the same
    shape as `data` whenever present.
    """

    __slots__ = ("data", "requires_grad", "grad", "_parents", "_backward", "_done")

    def __init__(self, values, requires_grad: bool = False, dtype=None):
        self.data = _as_array(values, dtype or DEFAULT_DTYPE)
        self.requires_grad = bool(requires_grad)
        self.grad: np.ndarray | None = None
        self._parents: tuple[Tensor, ...] = ()
        self._backward: Callable[[np.ndarray], None] | None = None
        self._done = False

    @property
    def shape(self) -> tuple:
        return self.data.shape

    @property
    def dtype(self):
        return self.data.dtype

    def __repr__(self):
        return f"Tensor(shape={self.shape}, requires_grad={self.requires_grad})"

    def zero_grad(self):
        self.grad = None
        self._done = False

    def item(self) -> float:
        return float(self.data.reshape(-1)[0])

    # -- graph construction -------------------------------------------------

    @staticmethod
    def _result(data, parents: tuple["Tensor", ...], backward) -> "Tensor":
        out = Tensor.__new__(Tensor)
        out.data = data
        out.grad = None
        out._done = False
        if _grad_mode.enabled and any(p.requires_grad for p in parents):
            out.requires_grad = True
            out._parents = parents
            out._backward = backward
        else:
            out.requires_grad = False
            out._parents = ()
            out._backward = None
        return out

    def _accumulate(self, grad: np.ndarray):
        if self.grad is None:
            self.grad = np.array(grad, dtype=self.data.dtype, copy=True)
        else:
            self.grad += grad

    # -- arithmetic ---------------------------------------------------------

    def _coerce(self, other) -> "Tensor":
        if isinstance(other, Tensor):
            return other
        return Tensor(other, dtype=self.dtype)

    def __add__(self, other):
        return add(self, self._coerce(other))

    __radd__ = __add__

    def __sub__(self, other):
        return add(self, neg(self._coerce(other)))

    def __rsub__(self, other):
        return add(self._coerce(other), neg(self))

    def __mul__(self, other):
        return mul(self, self._coerce(other))

    __rmul__ = __mul__

    def __neg__(self):
        return neg(self)

    def __matmul__(self, other):
        return matmul(self, other)


def add(a: Tensor, b: Tensor) -> Tensor:
    data = a.data + b.data

    def bw(g):
        if a.requires_grad:
            a._accumulate(_unbroadcast(g, a.shape))
        if b.requires_grad:
            b._accumulate(_unbroadcast(g, b.shape))

    return Tensor._result(data, (a, b), bw)


def neg(a: Tensor) -> Tensor:
    def bw(g):
        if a.requires_grad:
            a._accumulate(-g)

    return Tensor._result(-a.data, (a,), bw)


def mul(a: Tensor, b: Tensor) -> Tensor:
    data = a.data * b.data

    def bw(g):
        if a.requires_grad:
            a._accumulate(_unbroadcast(g * b.data, a.shape))
        if b.requires_grad:
            b._accumulate(_unbroadcast(g * a.data, b.shape))

    return Tensor._result(data, (a, b), bw)


def scale(a: Tensor, k: float) -> Tensor:
    k = a.data.dtype.type(k)

    def bw(g):
        if a.requires_grad:
            a._accumulate(g * k)

    return Tensor._result(a.data * k, (a,), bw)


def _mm(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    # float32 goes through BLAS; wider dtypes accumulate in k order so the
    # result is bit-identical to a naive triple-loop product (verification).
    if a.dtype == np.float32 and b.dtype == np.float32:
        return a @ b
    out = np.zeros((a.shape[0], b.shape[1]), dtype=np.result_type(a, b))
    for k in range(a.shape[1]):
        out += a[:, k, None] * b[None, k, :].reshape(1, -1)
    return out


def matmul(a: Tensor, b: Tensor) -> Tensor:
    if a.data.ndim != 2 or b.data.ndim != 2 or a.shape[1] != b.shape[0]:
        raise ShapeMismatchError(
            f"matmul shape mismatch: {a.shape} x {b.shape}"
        )
    data = _mm(a.data, b.data)

    def bw(g):
        if a.requires_grad:
            a._accumulate(_mm(g, b.data.T))
        if b.requires_grad:
            b._accumulate(_mm(a.data.T, g))

    return Tensor._result(data, (a, b), bw)


def tanh(a: Tensor) -> Tensor:
    out_data = np.tanh(a.data)

    def bw(g):
        if a.requires_grad:
            a._accumulate(g * (1.0 - out_data * out_data))

    return Tensor._result(out_data, (a,), bw)


def sigmoid(a: Tensor) -> Tensor:
    out_data = 1.0 / (1.0 + np.exp(-a.data))

    def bw(g):
        if a.requires_grad:
            a._accumulate(g * out_data * (1.0 - out_data))

    return Tensor._result(out_data, (a,), bw)


def tensor_sum(a: Tensor) -> Tensor:
    data = a.data.sum(dtype=a.data.dtype).reshape(())

    def bw(g):
        if a.requires_grad:
            a._accumulate(np.broadcast_to(g, a.shape))

    return Tensor._result(data, (a,), bw)


def concat(tensors: Sequence[Tensor], axis: int = 0) -> Tensor:
    data = np.concatenate([t.data for t in tensors], axis=axis)
    sizes = [t.shape[axis] for t in tensors]
    offsets = np.cumsum([0] + sizes)

    def bw(g):
        for t, lo, hi in zip(tensors, offsets[:-1], offsets[1:]):
            if t.requires_grad:
                idx = [slice(None)] * g.ndim
                idx[axis] = slice(lo, hi)
                t._accumulate(g[tuple(idx)])

    return Tensor._result(data, tuple(tensors), bw)


def take_row(a: Tensor, index: int) -> Tensor:
    """Row `index` of a 2-D tensor as a column vector (embedding lookup)."""
    if not 0 <= index < a.shape[0]:
        raise IndexError(f"row {index} out of range for shape {a.shape}")
    data = a.data[index].reshape(-1, 1).copy()

    def bw(g):
        if a.requires_grad:
            if a.grad is None:
                a.grad = np.zeros_like(a.data)
            a.grad[index] += g.reshape(-1)

    return Tensor._result(data, (a,), bw)


def rows_slice(a: Tensor, start: int, stop: int) -> Tensor:
    """Contiguous row slice of a 2-D tensor."""
    data = a.data[start:stop].copy()

    def bw(g):
        if a.requires_grad:
            if a.grad is None:
                a.grad = np.zeros_like(a.data)
            a.grad[start:stop] += g

    return Tensor._result(data, (a,), bw)


def softmax(v: Tensor) -> Tensor:
    """Numerically stable softmax over all entries of a vector.

    Accepts shape (n,) or (n, 1); max-subtraction keeps exp in range.
    """
    if v.data.size == 0:
        raise ValueError("softmax of empty tensor")
    if not np.all(np.isfinite(v.data)):
        raise ValueError("softmax input contains non-finite entries")
    shifted = v.data - v.data.max()
    exps = np.exp(shifted)
    out_data = exps / exps.sum()

    def bw(g):
        if v.requires_grad:
            dot = (g * out_data).sum()
            v._accumulate(out_data * (g - dot))

    return Tensor._result(out_data, (v,), bw)


def log_softmax(v: Tensor) -> Tensor:
    """Log-probabilities via the log-sum-exp trick, over all entries."""
    if v.data.size == 0:
        raise ValueError("log_softmax of empty tensor")
    shifted = v.data - v.data.max()
    lse = np.log(np.exp(shifted).sum())
    out_data = shifted - lse
    probs = np.exp(out_data)

    def bw(g):
        if v.requires_grad:
            v._accumulate(g - probs * g.sum())

    return Tensor._result(out_data, (v,), bw)


def pick(a: Tensor, index: int) -> Tensor:
    """Scalar entry of a vector (flat index), kept in the graph."""
    flat = a.data.reshape(-1)
    if not 0 <= index < flat.size:
        raise IndexError(f"index {index} out of range for size {flat.size}")
    data = flat[index].reshape(())

    def bw(g):
        if a.requires_grad:
            buf = np.zeros_like(a.data)
            buf.reshape(-1)[index] = g
            a._accumulate(buf)

    return Tensor._result(data, (a,), bw)


def backward(loss: Tensor):
    """Accumulate d(loss)/d(leaf) into every requires_grad leaf.

    The graph is replayed once in reverse topological order; each tensor
    consumed twice receives the sum of both contributions.
    """
    if loss.data.shape != ():
        raise ValueError(f"backward needs a scalar loss, got shape {loss.data.shape}")
    if loss._done:
        raise RuntimeError("backward called twice on the same graph without reset")
    loss._done = True
    if not loss.requires_grad:
        return

    order: list[Tensor] = []
    seen: set[int] = set()
    stack: list[tuple[Tensor, bool]] = [(loss, False)]
    while stack:
        node, expanded = stack.pop()
        if expanded:
            order.append(node)
            continue
        if id(node) in seen:
            continue
        seen.add(id(node))
        stack.append((node, True))
        for p in node._parents:
            if id(p) not in seen:
                stack.append((p, False))

    loss._accumulate(np.ones((), dtype=loss.data.dtype))
    for node in reversed(order):
        if node._backward is None or node.grad is None:
            continue
        node._backward(node.grad)
        if node is not loss:
            node.grad = None  # free interior accumulators; leaves keep theirs


def parameters_flat(params: Iterable[Tensor]) -> list[Tensor]:
    return [p for p in params if p.requires_grad]


def zero_grads(params: Iterable[Tensor]):
    for p in params:
        p.zero_grad()


def finite_diff_check(
    f: Callable[[], Tensor],
    params: Sequence[Tensor],
    eps: float = 1e-5,
) -> float:
    """Worst relative error between autodiff and central finite differences.

    `f` must be a deterministic scalar function of `params`, evaluated in
    float64. Every parameter entry is perturbed by ±eps.
    """
    if not 1e-7 <= eps <= 1e-4:
        raise ValueError(f"eps {eps} outside [1e-7, 1e-4]")
    zero_grads(params)
    loss = f()
    backward(loss)
    analytic = [
        np.zeros_like(p.data) if p.grad is None else p.grad.copy() for p in params
    ]

    worst = 0.0
    for p, a_grad in zip(params, analytic):
        flat = p.data.reshape(-1)
        for i in range(flat.size):
            orig = flat[i]
            flat[i] = orig + eps
            f_plus = f().data.reshape(-1)[0]  # keep native precision
            flat[i] = orig - eps
            f_minus = f().data.reshape(-1)[0]
            flat[i] = orig
            if not (np.isfinite(f_plus) and np.isfinite(f_minus)):
                raise FloatingPointError(
                    f"non-finite objective when perturbing parameter entry {i} "
                    f"of tensor with shape {p.shape}"
                )
            numeric = (f_plus - f_minus) / (2.0 * eps)
            a = a_grad.reshape(-1)[i]
            denom = max(abs(a), abs(numeric), 1e-8)
            worst = max(worst, abs(a - numeric) / denom)
    return worst
