"""Compiled inner loops for the iterative generating-function expansion."""

import numpy as np
from numba import njit


@njit(cache=True)
def bernoulli_expand(probs, length):
    """Multiply out prod(p*x + 1 - p) keeping only exponents below ``length``.

    Each step updates the buffer in place from the top exponent down, so
    coefficient i of the new polynomial reads coefficients i and i-1 of the
    previous one.  A truncated run performs exactly the same floating point
    operations on the retained prefix as a full run.
    """
    buf = np.zeros(length)
    buf[0] = 1.0
    degree = 0
    for p in probs:
        q = 1.0 - p
        top = min(degree + 1, length - 1)
        for i in range(top, 0, -1):
            buf[i] = buf[i] * q + buf[i - 1] * p
        buf[0] = buf[0] * q
        degree += 1
    return buf


def warmup():
    bernoulli_expand(np.array([0.5]), 2)
