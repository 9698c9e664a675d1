"""
Tracy-Widom F_2, its density and derivatives, the u_{j,k} table and
the moments of f_2
"""

import time
from dataclasses import dataclass
from functools import lru_cache
from typing import Any, Callable, Dict, List, Tuple

import numpy as np
import sympy
from scipy.integrate import solve_ivp
from scipy.optimize import brentq

from . import identities
from .errors import InvalidArgumentError, NoConvergenceError
from .identities import IdentityId
from .logging import get_logger
from .numerics import GridFunction, gauss_legendre
from .painleve2 import HMSolution
from .util import reference_data

logger = get_logger(__name__)

MAX_DERIVATIVE = 8
MAX_ORDER = 8
ODE_RTOL = 1e-12
ODE_ATOL = 1e-14
IDENTITY_WINDOW = (-6.0, 4.0)
IDENTITY_TOL = 1e-6
MOMENT_ORDER = 200

# (j, k) with j >= k and j + k <= 8
U_KEYS: Tuple[Tuple[int, int], ...] = tuple(
    (j, k)
    for total in range(MAX_ORDER + 1)
    for j in range(total, -1, -1)
    for k in [total - j]
    if j >= k
)
_U_INDEX = {key: i for i, key in enumerate(U_KEYS)}


@dataclass(frozen=True)
class TWProfile:
    """F_2 and f_2^(k), k = 0..8, on the grid of a Painleve solution"""

    grid: np.ndarray
    F2: GridFunction
    f2_derivs: Tuple[GridFunction, ...]
    u00: GridFunction
    solution: HMSolution

    @property
    def domain(self) -> Tuple[float, float]:
        return self.F2.domain

    def f2(self, k: int, s: Any) -> Any:
        """f_2^(k)(s) by interpolation"""
        if not 0 <= k < len(self.f2_derivs):
            raise InvalidArgumentError(
                f"derivative order {k} is not tabulated"
            )
        return self.f2_derivs[k](s)

    def derivatives_at(self, s: Any, k_max: int) -> np.ndarray:
        """f_2^(k)(s) for k = 0..k_max stacked along the first axis"""
        return np.array([self.f2(k, s) for k in range(k_max + 1)])


@dataclass(frozen=True)
class UTable:
    """u_{j,k} for j + k <= 8 and the companion q_n for n <= 8"""

    grid: np.ndarray
    entries: Dict[Tuple[int, int], GridFunction]
    q_n: Tuple[GridFunction, ...]

    def u(self, j: int, k: int) -> GridFunction:
        key = (max(j, k), min(j, k))
        try:
            return self.entries[key]
        except KeyError:
            raise InvalidArgumentError(
                f"u_{{{j},{k}}} is not tabulated (need j + k <= {MAX_ORDER})"
            ) from None

    def values(self, j: int, k: int) -> np.ndarray:
        return self.u(j, k).values


@dataclass(frozen=True)
class MomentSet:
    """mu_0..mu_n of the Tracy-Widom density"""

    mu: Tuple[float, ...]
    variance: float

    @classmethod
    def from_values(cls, mu: List[float]) -> "MomentSet":
        values = tuple(float(m) for m in mu)
        return cls(mu=values, variance=values[2] - values[1] ** 2)

    @classmethod
    def reference(cls) -> "MomentSet":
        """The published high precision moments"""
        ref = reference_data()["moments"]
        return cls.from_values([ref[f"mu_{n}"] for n in range(5)])


def _clipped(f: GridFunction) -> Callable[[float], float]:
    lo, hi = f.domain
    return lambda s: f(min(max(s, lo), hi))


def _integrate_down(
    sol: HMSolution,
    rhs: Callable[[float, np.ndarray], np.ndarray],
    size: int,
    label: str,
) -> np.ndarray:
    """Integrate y' = rhs from y(s_max) = 0 down to s_min on the grid"""
    grid = sol.grid
    t0 = time.time()
    res = solve_ivp(
        rhs,
        (grid[-1], grid[0]),
        np.zeros(size),
        method="DOP853",
        t_eval=grid[::-1],
        rtol=ODE_RTOL,
        atol=ODE_ATOL,
    )
    if not res.success:
        raise NoConvergenceError(
            f"{label} integration failed: {res.message}"
        )
    logger.info(
        "finished %s in: %s seconds (%d evaluations)",
        label,
        f"{time.time() - t0:.1f}",
        res.nfev,
    )
    return res.y[:, ::-1]


def _tails(sol: HMSolution) -> Tuple[np.ndarray, np.ndarray]:
    """u_00 = int_s^inf q^2 and log F_2 = -int_s^inf u_00 on the grid"""
    q = _clipped(sol.q)

    def rhs(s: float, y: np.ndarray) -> np.ndarray:
        qs = q(s)
        return np.array([-qs * qs, y[0]])

    y = _integrate_down(sol, rhs, 2, "F2")
    return y[0], y[1]


def build_F2(sol: HMSolution) -> GridFunction:
    """F_2(s) = exp(-int_s^inf (x - s) q(x)^2 dx) on the solution grid"""
    _u00, log_f = _tails(sol)
    return GridFunction(sol.grid, np.exp(log_f))


@lru_cache(maxsize=None)
def derivative_polynomials(k_max: int = MAX_DERIVATIVE) -> Tuple[Any, ...]:
    """P_k(s, q, p, u) with f_2^(k) = P_k F_2, p = q' and u = u_00.

    P_0 = u and
    P_(k+1) = dP/ds + p dP/dq + (s q + 2 q^3) dP/dp - q^2 dP/du + u P.
    """
    s, q, p, u = sympy.symbols("s q p u")
    polys = [u]
    for _ in range(k_max):
        prev = polys[-1]
        polys.append(
            sympy.expand(
                sympy.diff(prev, s)
                + p * sympy.diff(prev, q)
                + (s * q + 2 * q**3) * sympy.diff(prev, p)
                - q**2 * sympy.diff(prev, u)
                + u * prev
            )
        )
    return tuple(polys)


@lru_cache(maxsize=None)
def _polynomial_functions(k_max: int) -> Tuple[Callable[..., Any], ...]:
    s, q, p, u = sympy.symbols("s q p u")
    return tuple(
        sympy.lambdify((s, q, p, u), poly, "numpy")
        for poly in derivative_polynomials(k_max)
    )


def f2_derivative_chain(
    sol: HMSolution,
    F2: GridFunction,
    u00: GridFunction,
    k_max: int = MAX_DERIVATIVE,
) -> List[GridFunction]:
    """f_2^(k) = P_k(s, q, q', u_00) F_2 for k = 0..k_max"""
    if not 0 <= k_max <= MAX_DERIVATIVE:
        raise InvalidArgumentError(
            f"k_max must lie in [0, {MAX_DERIVATIVE}], got {k_max}"
        )
    s = sol.grid
    args = (s, sol.q.values, sol.q_prime.values, u00.values)
    chain = []
    for func in _polynomial_functions(k_max):
        values = np.broadcast_to(func(*args), s.shape) * F2.values
        chain.append(GridFunction(s, values))
    return chain


def build_profile(sol: HMSolution, k_max: int = MAX_DERIVATIVE) -> TWProfile:
    u00, log_f = _tails(sol)
    F2 = GridFunction(sol.grid, np.exp(log_f))
    u00_fn = GridFunction(sol.grid, u00)
    return TWProfile(
        grid=sol.grid,
        F2=F2,
        f2_derivs=tuple(f2_derivative_chain(sol, F2, u00_fn, k_max)),
        u00=u00_fn,
        solution=sol,
    )


def q_hierarchy(
    s: Any, q: Any, qp: Any, u: Callable[[int, int], Any]
) -> List[Any]:
    """q_0..q_8 from q, q' and the u_{j,k} via the Airy recursion"""
    qs = [q, qp + u(0, 0) * q]
    qs.append(s * q - u(1, 0) * q + u(0, 0) * qs[1])
    for n in range(3, MAX_ORDER + 1):
        qs.append(
            (n - 2) * qs[n - 3]
            + s * qs[n - 2]
            - u(n - 2, 1) * q
            + u(n - 2, 0) * qs[1]
        )
    return qs


def _accessor(values: Any) -> Callable[[int, int], Any]:
    def u(j: int, k: int) -> Any:
        return values[_U_INDEX[(max(j, k), min(j, k))]]

    return u


def build_u_table(sol: HMSolution) -> UTable:
    """Co-integrate u_{k,j}' = -q_k q_j downward from zero at s_max"""
    q = _clipped(sol.q)
    qp = _clipped(sol.q_prime)
    left = np.array([j for j, _k in U_KEYS])
    right = np.array([k for _j, k in U_KEYS])

    def rhs(s: float, y: np.ndarray) -> np.ndarray:
        qs = np.array(q_hierarchy(s, q(s), qp(s), _accessor(y)))
        return -qs[left] * qs[right]

    y = _integrate_down(sol, rhs, len(U_KEYS), "u-table")
    grid = sol.grid
    entries = {key: GridFunction(grid, y[i]) for i, key in enumerate(U_KEYS)}
    qs = q_hierarchy(
        grid, sol.q.values, sol.q_prime.values, _accessor(y)
    )
    return UTable(
        grid=grid,
        entries=entries,
        q_n=tuple(GridFunction(grid, v) for v in qs),
    )


def identity_sides(
    profile: TWProfile,
    utable: UTable,
    ident: IdentityId,
    window: Tuple[float, float] = IDENTITY_WINDOW,
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(s, left, right) of one identity at the grid nodes inside window"""
    if not np.array_equal(profile.grid, utable.grid):
        raise InvalidArgumentError("profile and u-table grids differ")
    grid = profile.grid
    mask = (grid >= window[0]) & (grid <= window[1])
    s = grid[mask]

    left = identities.left_side(
        ident, lambda j, k: utable.values(j, k)[mask]
    )
    left = left * profile.F2.values[mask]
    weights = identities.coefficient_weights(ident, s)
    right = sum(
        w * profile.f2_derivs[m].values[mask] for m, w in enumerate(weights)
    )
    return s, left, right


def verify_identity(
    profile: TWProfile, utable: UTable, ident: IdentityId
) -> float:
    """Max absolute residual of one identity on the test window"""
    _s, left, right = identity_sides(profile, utable, ident)
    return float(np.max(np.abs(left - right)))


def verify_all(
    profile: TWProfile, utable: UTable, tol: float = IDENTITY_TOL
) -> List[Tuple[str, float, bool]]:
    results = []
    for ident in identities.identity_ids():
        residual = verify_identity(profile, utable, ident)
        name = identities.format_id(ident)
        passed = bool(residual <= tol)
        if passed:
            logger.debug("identity %s: residual %.2e", name, residual)
        else:
            logger.warning(
                "identity %s: residual %.2e exceeds %g", name, residual, tol
            )
        results.append((name, residual, passed))
    return results


def moments(
    profile: TWProfile, n_max: int = 4, order: int = MOMENT_ORDER
) -> MomentSet:
    """mu_n = int s^n f_2(s) ds by Gauss-Legendre quadrature"""
    if not 0 <= n_max <= 4:
        raise InvalidArgumentError(f"n_max must lie in [0, 4], got {n_max}")
    rule = gauss_legendre(order, *profile.domain)
    f2 = profile.f2(0, rule.nodes)
    mu = [
        float(rule.integrate(rule.nodes**n * f2))
        for n in range(max(n_max, 2) + 1)
    ]
    return MomentSet(mu=tuple(mu[: n_max + 1]), variance=mu[2] - mu[1] ** 2)


def quantile(profile: TWProfile, p: float) -> float:
    """s with F_2(s) = p"""
    if not 0.0 < p < 1.0:
        raise InvalidArgumentError(f"p must lie in (0, 1), got {p}")
    lo, hi = profile.domain
    return float(brentq(lambda s: profile.F2(s) - p, lo, hi, xtol=1e-14))


def median(profile: TWProfile) -> float:
    return quantile(profile, 0.5)
