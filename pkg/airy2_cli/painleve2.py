"""
The Hastings-McLeod solution of Painleve II, q'' = s q + 2 q^3 with
q(s) ~ Ai(s) as s -> +inf, by Chebyshev collocation and damped Newton
"""

import time
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Optional, Tuple

import numpy as np
from scipy.special import expit

from .airy import airy_ai
from .config import SolverConfig
from .errors import (
    InvalidArgumentError,
    NoConvergenceError,
    SingularMatrixError,
)
from .logging import get_logger
from .numerics import GridFunction, chebyshev_diff_matrix, solve_linear
from .util import load_cached, store_cached

logger = get_logger(__name__)

MAX_NEWTON = 50
MAX_HALVINGS = 10
NOISE_FACTOR = 1e3
LEFT_TERMS = 5


@dataclass(frozen=True)
class HMSolution:
    """q and q' tabulated on a Chebyshev grid"""

    domain: Tuple[float, float]
    q: GridFunction
    q_prime: GridFunction
    tolerance: float

    @property
    def grid(self) -> np.ndarray:
        return self.q.grid

    @property
    def order(self) -> int:
        return self.q.grid.size - 1

    def residual(self) -> np.ndarray:
        """Scaled residual of q'' - s q - 2 q^3 at the interior nodes"""
        _x, d = chebyshev_diff_matrix(self.order, *self.domain)
        return scaled_residual(self.grid, self.q.values, d @ d)[1:-1]

    def arrays(self) -> Dict[str, np.ndarray]:
        return {
            "grid": self.grid,
            "q": self.q.values,
            "q_prime": self.q_prime.values,
            "tolerance": np.array(self.tolerance),
        }

    @classmethod
    def from_arrays(cls, arrays: Dict[str, np.ndarray]) -> "HMSolution":
        grid = arrays["grid"]
        return cls(
            domain=(float(grid[0]), float(grid[-1])),
            q=GridFunction(grid, arrays["q"]),
            q_prime=GridFunction(grid, arrays["q_prime"]),
            tolerance=float(arrays["tolerance"]),
        )


def left_asymptotic_coefficients(n_terms: int) -> List[Fraction]:
    """a_k in q(s) ~ sqrt(-s/2) (1 + sum_k a_k s^(-3k)) as s -> -inf.

    With x = -s and q = sqrt(x/2) (1 + eps), matching powers of x^(-3k)
    gives 2 b_k + [3 eps^2 + eps^3]_k = (9 (k-1)^2 - 1/4) b_(k-1) for
    eps = sum b_k x^(-3k); then a_k = (-1)^k b_k.

    >>> [str(a) for a in left_asymptotic_coefficients(3)]
    ['1', '1/8', '-73/128']
    """
    b: List[Fraction] = [Fraction(1)]
    for k in range(1, n_terms):
        eps = [Fraction(0)] + b[1:k] + [Fraction(0)]
        sq = _cauchy(eps, eps, k)
        cube = _cauchy(sq, eps, k)
        rhs = (9 * (k - 1) ** 2 - Fraction(1, 4)) * b[k - 1]
        b.append((rhs - 3 * sq[k] - cube[k]) / 2)
    return [bk * (-1) ** k for k, bk in enumerate(b)]


def _cauchy(u: List[Fraction], v: List[Fraction], k: int) -> List[Fraction]:
    return [sum(u[i] * v[m - i] for i in range(m + 1)) for m in range(k + 1)]


@lru_cache(maxsize=None)
def _left_coefficients() -> Tuple[float, ...]:
    return tuple(float(a) for a in left_asymptotic_coefficients(LEFT_TERMS))


def left_log_derivative(s: float) -> float:
    """psi'/psi for the truncated left asymptotic series psi"""
    a = _left_coefficients()
    series = sum(ak * s ** (-3 * k) for k, ak in enumerate(a))
    d_series = sum(-3 * k * ak * s ** (-3 * k - 1) for k, ak in enumerate(a))
    return 0.5 / s + d_series / series


def initial_guess(s: np.ndarray) -> np.ndarray:
    """Ai on the right glued to sqrt(-s/2) on the left"""
    w = expit(-2.0 * s)
    left = np.sqrt(np.logaddexp(0.0, -s) / 2.0)
    return w * left + (1.0 - w) * airy_ai(s)


def scaled_residual(
    s: np.ndarray, q: np.ndarray, d2: np.ndarray
) -> np.ndarray:
    """|q'' - s q - 2 q^3| relative to the size of the terms"""
    r = d2 @ q - s * q - 2.0 * q**3
    return np.abs(r) / (1.0 + np.abs(s * q) + 2.0 * np.abs(q) ** 3)


def _system(
    q: np.ndarray,
    s: np.ndarray,
    d: np.ndarray,
    d2: np.ndarray,
    rho: float,
    q_right: float,
) -> Tuple[np.ndarray, np.ndarray]:
    f = d2 @ q - s * q - 2.0 * q**3
    jac = d2 - np.diag(s + 6.0 * q**2)
    f[0] = d[0] @ q - rho * q[0]
    jac[0] = d[0]
    jac[0, 0] -= rho
    f[-1] = q[-1] - q_right
    jac[-1] = 0.0
    jac[-1, -1] = 1.0
    return f, jac


def solve_hastings_mcleod(
    s_min: float = -10.0,
    s_max: float = 10.0,
    tol: float = 1e-10,
    order: int = 200,
) -> HMSolution:
    """Solve for q on [s_min, s_max] on order + 1 Chebyshev points.

    The left end uses the Robin closure q'/q = psi'/psi from the left
    asymptotic series; the right end pins q(s_max) = Ai(s_max).
    """
    if not s_min < -6:
        raise InvalidArgumentError(f"s_min must be < -6, got {s_min}")
    if not s_max > 6:
        raise InvalidArgumentError(f"s_max must be > 6, got {s_max}")
    if not 1e-13 <= tol <= 1e-6:
        raise InvalidArgumentError(
            f"tol must lie in [1e-13, 1e-6], got {tol}"
        )
    if order < 16:
        raise InvalidArgumentError(f"order must be >= 16, got {order}")

    logger.info(
        "running: Hastings-McLeod solve on [%s, %s] with %d points",
        s_min,
        s_max,
        order + 1,
    )
    t0 = time.time()
    s, d = chebyshev_diff_matrix(order, s_min, s_max)
    d2 = d @ d
    rho = left_log_derivative(s_min)
    q_right = airy_ai(s_max)

    q = initial_guess(s)
    f, jac = _system(q, s, d, d2, rho, q_right)
    norm_f = np.max(np.abs(f))
    converged = False
    for it in range(1, MAX_NEWTON + 1):
        try:
            step = solve_linear(jac, -f)
        except SingularMatrixError as err:
            raise NoConvergenceError(
                f"Newton iteration {it} hit a singular Jacobian: {err}"
            ) from err
        norm_step = np.max(np.abs(step))
        scale = max(1.0, float(np.max(np.abs(q))))
        logger.debug(
            "newton %d: |F| = %.3e, |dq| = %.3e", it, norm_f, norm_step
        )
        if norm_step <= tol * scale:
            q = q + step
            converged = True
            break

        lam = 1.0
        for _ in range(MAX_HALVINGS):
            q_new = q + lam * step
            f_new, jac_new = _system(q_new, s, d, d2, rho, q_right)
            if np.max(np.abs(f_new)) <= norm_f:
                break
            lam *= 0.5
        else:
            if norm_step <= NOISE_FACTOR * tol * scale:
                # residual is at its rounding floor
                q = q + step
                converged = True
                break
        q, f, jac = q_new, f_new, jac_new
        norm_f = np.max(np.abs(f))

    if not converged:
        raise NoConvergenceError(
            f"Newton iteration did not reach tol={tol} in {MAX_NEWTON} steps"
        )
    if np.any(q <= 0):
        raise NoConvergenceError(
            "Newton iteration converged to a solution that is not positive"
        )

    achieved = float(np.max(scaled_residual(s, q, d2)[1:-1]))
    logger.info(
        "finished in: %s seconds, residual %.2e",
        f"{time.time() - t0:.1f}",
        achieved,
    )
    return HMSolution(
        domain=(float(s[0]), float(s[-1])),
        q=GridFunction(s, q),
        q_prime=GridFunction(s, d @ q),
        tolerance=achieved,
    )


def cached_solution(
    cfg: Optional[SolverConfig] = None, use_cache: bool = True
) -> HMSolution:
    """solve_hastings_mcleod backed by the on-disk cache"""
    cfg = cfg or SolverConfig()
    key = cfg.cache_key()
    if use_cache:
        arrays = load_cached(key)
        if arrays is not None:
            return HMSolution.from_arrays(arrays)
    sol = solve_hastings_mcleod(cfg.s_min, cfg.s_max, cfg.tol, cfg.order)
    if use_cache:
        store_cached(key, sol.arrays())
    return sol


def q_eval(sol: HMSolution, s: float) -> float:
    return float(sol.q(s))


def qp_eval(sol: HMSolution, s: float) -> float:
    return float(sol.q_prime(s))
