"""
The Airy function Ai and its derivatives on the real line
"""

from typing import Any, Union

import numpy as np
from scipy import special

from .errors import InvalidArgumentError

ArrayLike = Union[float, np.ndarray]


def _out(value: np.ndarray) -> Any:
    if np.ndim(value) == 0:
        return float(value)
    return value


def airy_pair(x: ArrayLike):
    """(Ai(x), Ai'(x)) as arrays"""
    ai, aip, _bi, _bip = special.airy(np.asarray(x, dtype=float))
    return ai, aip


def airy_ai(x: ArrayLike) -> Any:
    return _out(airy_pair(x)[0])


def airy_ai_prime(x: ArrayLike) -> Any:
    return _out(airy_pair(x)[1])


def airy_derivatives(n_max: int, x: ArrayLike) -> np.ndarray:
    """Ai^(n)(x) for n = 0..n_max stacked along the first axis.

    Orders above one follow from Ai'' = x Ai by
    Ai^(n) = (n - 2) Ai^(n-3) + x Ai^(n-2).
    """
    if int(n_max) != n_max or n_max < 0:
        raise InvalidArgumentError(
            f"derivative order must be >= 0, got {n_max}"
        )
    n_max = int(n_max)
    x = np.asarray(x, dtype=float)
    ai, aip = airy_pair(x)
    out = np.empty((max(n_max, 1) + 1,) + x.shape)
    out[0] = ai
    out[1] = aip
    for n in range(2, n_max + 1):
        out[n] = x * out[n - 2]
        if n >= 3:
            out[n] += (n - 2) * out[n - 3]
    return out[: n_max + 1]


def airy_derivative(n: int, x: ArrayLike) -> Any:
    """Ai^(n)(x)"""
    return _out(airy_derivatives(n, x)[n])
