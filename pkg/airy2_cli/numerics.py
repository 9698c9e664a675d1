"""
Quadrature, dense linear algebra and interpolation on gridded data
"""

import warnings
from dataclasses import dataclass, field
from typing import Any, Tuple, Union

import numpy as np
import scipy.linalg
from scipy.interpolate import BarycentricInterpolator

from .errors import (
    InvalidArgumentError,
    NoConvergenceError,
    OutOfDomainError,
    SingularMatrixError,
)

ArrayLike = Union[float, np.ndarray]

NEWTON_TOL = 1e-15
NEWTON_MAX_ITER = 100
PIVOT_TOL = 1e-14


def _frozen(a: Any) -> np.ndarray:
    arr = np.array(a, dtype=float)
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class QuadratureRule:
    """Nodes and weights of an interpolatory rule on (a, b)"""

    nodes: np.ndarray
    weights: np.ndarray
    interval: Tuple[float, float]
    order: int

    def integrate(self, values: np.ndarray, axis: int = -1) -> Any:
        """Apply the rule along one axis of sampled values"""
        return np.tensordot(
            np.moveaxis(np.asarray(values, dtype=float), axis, -1),
            self.weights,
            axes=([-1], [0]),
        )


def _legendre(n: int, x: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """P_n(x) and P_n'(x) by the three-term recurrence"""
    p_prev = np.ones_like(x)
    p = x.copy()
    for j in range(2, n + 1):
        p_prev, p = p, ((2 * j - 1) * x * p - (j - 1) * p_prev) / j
    if n == 1:
        return p, np.ones_like(x)
    return p, n * (x * p - p_prev) / (x * x - 1.0)


def gauss_legendre(n: int, a: float, b: float) -> QuadratureRule:
    """The n-point Gauss-Legendre rule on (a, b).

    Nodes are roots of P_n found by Newton iteration from the
    asymptotic initial guess.

    >>> rule = gauss_legendre(2, -1.0, 1.0)
    >>> [round(float(x), 12) for x in rule.nodes]
    [-0.57735026919, 0.57735026919]
    >>> [round(float(w), 12) for w in rule.weights]
    [1.0, 1.0]
    """
    if int(n) != n or n < 1:
        raise InvalidArgumentError(f"n must be a positive integer, got {n}")
    if not a < b:
        raise InvalidArgumentError(f"need a < b, got a={a}, b={b}")
    n = int(n)

    k = np.arange(1, n + 1)
    x = np.cos(np.pi * (k - 0.25) / (n + 0.5))
    for _ in range(NEWTON_MAX_ITER):
        p, dp = _legendre(n, x)
        dx = p / dp
        x = x - dx
        if np.max(np.abs(dx)) <= NEWTON_TOL:
            break
    else:
        raise NoConvergenceError(
            f"Legendre roots for n={n} did not converge"
        )

    # symmetric about the midpoint, ascending
    x = np.sort(x)
    x = 0.5 * (x - x[::-1])
    _p, dp = _legendre(n, x)
    w = 2.0 / ((1.0 - x * x) * dp * dp)

    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    return QuadratureRule(
        nodes=_frozen(mid + half * x),
        weights=_frozen(half * w),
        interval=(float(a), float(b)),
        order=n,
    )


def composite_gauss_legendre(
    a: float, b: float, panel: float, n: int
) -> QuadratureRule:
    """n-point rules on ceil((b - a) / panel) equal panels of (a, b)"""
    if not a < b:
        raise InvalidArgumentError(f"need a < b, got a={a}, b={b}")
    if panel <= 0:
        raise InvalidArgumentError(f"panel must be positive, got {panel}")
    m = max(1, int(np.ceil((b - a) / panel - 1e-12)))
    edges = np.linspace(a, b, m + 1)
    base = gauss_legendre(n, -1.0, 1.0)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[:-1] + edges[1:])
    nodes = (mid[:, None] + half[:, None] * base.nodes[None, :]).ravel()
    weights = (half[:, None] * base.weights[None, :]).ravel()
    return QuadratureRule(
        nodes=_frozen(nodes),
        weights=_frozen(weights),
        interval=(float(a), float(b)),
        order=n * m,
    )


def _square(m: Any) -> np.ndarray:
    arr = np.asarray(m, dtype=float)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] == 0:
        raise InvalidArgumentError(
            f"expected a non-empty square matrix, got shape {arr.shape}"
        )
    return arr


def _lu(arr: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        return scipy.linalg.lu_factor(arr, check_finite=True)


def _swap_parity(piv: np.ndarray) -> int:
    return int(np.count_nonzero(piv != np.arange(piv.size)) % 2)


def determinant(m: Any) -> float:
    """det(m) by LU with partial pivoting"""
    lu, piv = _lu(_square(m))
    sign = -1.0 if _swap_parity(piv) else 1.0
    return float(sign * np.prod(np.diag(lu)))


def log_determinant(m: Any) -> Tuple[float, float]:
    """(sign, log|det m|); sign is 0 and the log -inf for singular m"""
    lu, piv = _lu(_square(m))
    diag = np.diag(lu)
    if np.any(diag == 0):
        return 0.0, -np.inf
    sign = -1.0 if _swap_parity(piv) else 1.0
    sign *= float(np.prod(np.sign(diag)))
    return sign, float(np.sum(np.log(np.abs(diag))))


def solve_linear(m: Any, rhs: Any) -> np.ndarray:
    """Solve m x = rhs; rhs may hold several right-hand sides as columns"""
    arr = _square(m)
    b = np.asarray(rhs, dtype=float)
    if b.shape[0] != arr.shape[0]:
        raise InvalidArgumentError(
            f"rhs has {b.shape[0]} rows, matrix has {arr.shape[0]}"
        )
    lu, piv = _lu(arr)

    perm = np.arange(arr.shape[0])
    for i, p in enumerate(piv):
        perm[i], perm[p] = perm[p], perm[i]
    row_scale = np.max(np.abs(arr), axis=1)[perm]
    small = np.abs(np.diag(lu)) <= PIVOT_TOL * row_scale
    if np.any(small):
        raise SingularMatrixError(
            f"pivot {int(np.argmax(small))} is below {PIVOT_TOL:g} of its "
            "row scale"
        )
    return scipy.linalg.lu_solve((lu, piv), b, check_finite=False)


def chebyshev_points(n: int, a: float, b: float) -> np.ndarray:
    """The n + 1 Chebyshev extreme points of [a, b], ascending"""
    if n < 1 or not a < b:
        raise InvalidArgumentError(f"bad Chebyshev grid: n={n}, [{a}, {b}]")
    j = np.arange(n + 1)
    x = np.sin(np.pi * (2 * j - n) / (2 * n))
    return 0.5 * (a + b) + 0.5 * (b - a) * x


def chebyshev_diff_matrix(
    n: int, a: float, b: float
) -> Tuple[np.ndarray, np.ndarray]:
    """Chebyshev points of [a, b] and the first-derivative matrix on them"""
    x = chebyshev_points(n, a, b)
    j = np.arange(n + 1)
    theta = np.pi * j / n
    c = np.ones(n + 1)
    c[0] = c[-1] = 2.0
    c = c * (-1.0) ** j

    # x_i - x_j on [-1, 1] without cancellation
    ti, tj = np.meshgrid(theta, theta, indexing="ij")
    dx = 2.0 * np.sin(0.5 * (ti + tj)) * np.sin(0.5 * (ti - tj))
    d = np.outer(c, 1.0 / c) / (dx + np.eye(n + 1))
    d = d - np.diag(np.sum(d, axis=1))
    return x, d * (2.0 / (b - a))


@dataclass(frozen=True)
class GridFunction:
    """Samples of an analytic function with barycentric interpolation"""

    grid: np.ndarray
    values: np.ndarray
    representation: str = "barycentric"
    _interpolator: Any = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        grid = _frozen(self.grid)
        values = _frozen(self.values)
        if grid.ndim != 1 or grid.shape != values.shape:
            raise InvalidArgumentError(
                f"grid {grid.shape} and values {values.shape} disagree"
            )
        if grid.size < 4:
            raise InvalidArgumentError("a GridFunction needs >= 4 points")
        if np.any(np.diff(grid) <= 0):
            raise InvalidArgumentError("grid must be strictly increasing")
        if self.representation != "barycentric":
            raise InvalidArgumentError(
                f"unknown representation '{self.representation}'"
            )
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "values", values)
        object.__setattr__(
            self,
            "_interpolator",
            BarycentricInterpolator(grid.copy(), values.copy()),
        )

    @property
    def domain(self) -> Tuple[float, float]:
        return float(self.grid[0]), float(self.grid[-1])

    def __call__(self, s: ArrayLike) -> Any:
        x = np.asarray(s, dtype=float)
        lo, hi = self.domain
        if np.any(x < lo) or np.any(x > hi) or np.any(np.isnan(x)):
            raise OutOfDomainError(f"{s} is outside [{lo}, {hi}]")
        out = self._interpolator(x)
        if np.ndim(out) == 0:
            return float(out)
        return out


def interp_eval(f: GridFunction, s: float) -> float:
    """Interpolated value of f at s"""
    return float(f(s))
