"""
Independent reference computations used only by the tests
"""

import math
from typing import Callable, List, Sequence

from scipy import integrate
from scipy.special import gamma

AI_0 = 1.0 / (3.0 ** (2.0 / 3.0) * gamma(2.0 / 3.0))
AI_PRIME_0 = -1.0 / (3.0 ** (1.0 / 3.0) * gamma(1.0 / 3.0))
SERIES_TERMS = 160


def _maclaurin() -> List[float]:
    a = [0.0] * SERIES_TERMS
    a[0] = AI_0
    a[1] = AI_PRIME_0
    for m in range(SERIES_TERMS - 3):
        a[m + 3] = a[m] / ((m + 3) * (m + 2))
    return a


_COEFFS = _maclaurin()


def airy_series(x: float, n: int = 0) -> float:
    """Ai^(n)(x) from the Maclaurin series differentiated term by term.

    Good to about 1e-13 for |x| <= 5.
    """
    terms = []
    for m in range(n, SERIES_TERMS):
        falling = math.perm(m, n)
        terms.append(_COEFFS[m] * falling * x ** (m - n))
    return math.fsum(terms)


def cofactor_determinant(m: Sequence[Sequence[float]]) -> float:
    """det by Laplace expansion along the first row"""
    rows = [list(r) for r in m]
    if len(rows) == 1:
        return rows[0][0]
    total = []
    for j, entry in enumerate(rows[0]):
        minor = [r[:j] + r[j + 1 :] for r in rows[1:]]
        total.append((-1) ** j * entry * cofactor_determinant(minor))
    return math.fsum(total)


def central_difference(f: Callable[[float], float], s: float, h: float):
    """Fourth order central difference of f at s"""
    return (
        f(s - 2 * h) - 8 * f(s - h) + 8 * f(s + h) - f(s + 2 * h)
    ) / (12 * h)


def adaptive_integral(
    f: Callable[[float], float], a: float, b: float, tol: float = 1e-13
) -> float:
    value, _err = integrate.quad(f, a, b, epsabs=tol, epsrel=tol, limit=500)
    return value
