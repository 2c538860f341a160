"""Reverse-mode autodiff in miniature.

Builds a tiny expression graph, runs the backward sweep, and then verifies
every gradient entry against central finite differences — the same check
the test suite applies to the full translation model.
"""

import numpy as np

from snmt import autodiff as ad
from snmt.autodiff import Tensor

rng = np.random.default_rng(0)
W = Tensor(rng.standard_normal((3, 4)), requires_grad=True, dtype=np.float64)
x = Tensor(rng.standard_normal((4, 1)), requires_grad=True, dtype=np.float64)
b = Tensor(np.zeros((3, 1)), requires_grad=True, dtype=np.float64)


def loss():
    h = ad.tanh(ad.matmul(W, x) + b)
    return ad.tensor_sum(h * h)


value = loss()
ad.backward(value)
print(f"loss value          : {value.item():.6f}")
print(f"dL/dW (first row)   : {np.round(W.grad[0], 4)}")
print(f"dL/dx (transposed)  : {np.round(x.grad.ravel(), 4)}")

ad.zero_grads([W, x, b])
err = ad.finite_diff_check(loss, [W, x, b], eps=1e-5)
print(f"max relative error vs finite differences: {err:.2e}")
