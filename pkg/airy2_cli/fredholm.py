"""
Nystrom evaluation of the two-time extended Airy kernel determinant:
joint distribution, covariance and resolvent quantities of the Airy_2
process
"""

import math
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from .airy import airy_derivatives, airy_pair
from .config import (
    SMALL_T_CAP,
    CovarianceConfig,
    FredholmConfig,
    default_z_cutoff,
    warn_small_t,
)
from .errors import InvalidArgumentError, OutOfDomainError
from .logging import get_logger
from .numerics import (
    QuadratureRule,
    composite_gauss_legendre,
    determinant,
    gauss_legendre,
    solve_linear,
)
from .runner import run_parallel
from .util import load_cached, param_hash, store_cached

logger = get_logger(__name__)

CONFLUENT_GAP = 1e-6
# Ai(x + z)^2 is below 1e-30 once x + z exceeds this
AIRY_REACH = 18.0
POSITIVE_PANEL = 2.0
NEGATIVE_PANEL = 1.0
PANEL_NODES = 20
GAUSSIAN_ROUTE_T = 1.0
NODES_PER_WIDTH = 3.0
REFERENCE_LENGTH = 10.0
NEGLIGIBLE_F2 = 1e-14
PROBABILITY_SLACK = 1e-10


def _out(value: np.ndarray) -> Any:
    if np.ndim(value) == 0:
        return float(value)
    return value


def _kernel(
    x: np.ndarray,
    ax: np.ndarray,
    apx: np.ndarray,
    y: np.ndarray,
    ay: np.ndarray,
    apy: np.ndarray,
) -> np.ndarray:
    diff = np.asarray(x - y)
    close = np.abs(diff) < CONFLUENT_GAP
    out = np.asarray((ax * apy - apx * ay) / np.where(close, 1.0, diff))
    if np.any(close):
        mid = np.asarray(0.5 * (x + y))[close]
        am, apm = airy_pair(mid)
        out[close] = apm * apm - mid * am * am
    return out


def airy_kernel(x: Any, y: Any) -> Any:
    """K_Ai(x, y) = int_0^inf Ai(x + z) Ai(y + z) dz in closed form"""
    x, y = np.broadcast_arrays(
        np.asarray(x, dtype=float), np.asarray(y, dtype=float)
    )
    ax, apx = airy_pair(x)
    ay, apy = airy_pair(y)
    return _out(_kernel(x, ax, apx, y, ay, apy))


def gaussian_kernel(x: Any, y: Any, t: float) -> Any:
    """int over the real line of e^(z t) Ai(x + z) Ai(y + z) dz, t > 0"""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    expo = t**3 / 12.0 - 0.5 * (x + y) * t - (x - y) ** 2 / (4.0 * t)
    return _out(np.exp(expo) / math.sqrt(4.0 * math.pi * t))


@dataclass(frozen=True)
class ZRules:
    """Quadrature for the z-integrals of the off-diagonal blocks"""

    positive: QuadratureRule
    negative: Optional[QuadratureRule]

    @property
    def gaussian(self) -> bool:
        """True when the negative half-line comes from the full-line form"""
        return self.negative is None


def z_rules(t: float, s_lo: float, z_cutoff: float) -> ZRules:
    reach = max(AIRY_REACH - s_lo, POSITIVE_PANEL)
    if 0 < t < GAUSSIAN_ROUTE_T:
        positive = composite_gauss_legendre(
            0.0, reach, POSITIVE_PANEL, PANEL_NODES
        )
        return ZRules(positive=positive, negative=None)
    top = min(reach, z_cutoff) if t > 0 else reach
    positive = composite_gauss_legendre(0.0, top, POSITIVE_PANEL, PANEL_NODES)
    negative = composite_gauss_legendre(
        -z_cutoff, 0.0, NEGATIVE_PANEL, PANEL_NODES
    )
    return ZRules(positive=positive, negative=negative)


def node_count(s: float, cutoff: float, quad_order: int, t: float) -> int:
    """Nystrom nodes for [s, cutoff]"""
    length = cutoff - s
    n = max(quad_order, math.ceil(quad_order * length / REFERENCE_LENGTH))
    if 0 < t < GAUSSIAN_ROUTE_T:
        n = max(n, math.ceil(NODES_PER_WIDTH * length / math.sqrt(t)))
    return n


@dataclass(frozen=True)
class Discretization:
    """Nystrom data of one threshold s on [s, cutoff].

    Arrays are weighted by the square roots of the quadrature weights.
    """

    s: float
    nodes: np.ndarray
    root_w: np.ndarray
    kernel: np.ndarray
    positive: Optional[np.ndarray]
    negative: Optional[np.ndarray]

    @property
    def size(self) -> int:
        return self.nodes.size

    def one_point(self) -> float:
        """det(I - K_Ai) on [s, cutoff]"""
        return determinant(np.eye(self.size) - self.kernel)


def discretize(
    s: float, cutoff: float, n: int, rules: Optional[ZRules] = None
) -> Discretization:
    rule = gauss_legendre(n, s, cutoff)
    x = rule.nodes
    r = np.sqrt(rule.weights)
    ax, apx = airy_pair(x)
    kernel = _kernel(
        x[:, None],
        ax[:, None],
        apx[:, None],
        x[None, :],
        ax[None, :],
        apx[None, :],
    )
    positive = negative = None
    if rules is not None:
        positive = r[:, None] * airy_pair(x[:, None] + rules.positive.nodes)[0]
        if rules.negative is not None:
            negative = (
                r[:, None] * airy_pair(x[:, None] + rules.negative.nodes)[0]
            )
    return Discretization(
        s=float(s),
        nodes=x,
        root_w=r,
        kernel=r[:, None] * kernel * r[None, :],
        positive=positive,
        negative=negative,
    )


def off_diagonal_blocks(
    d1: Discretization, d2: Discretization, t: float, rules: ZRules
) -> Tuple[np.ndarray, np.ndarray]:
    """Weighted blocks (1,2) on set 1 x set 2 and (2,1) on set 2 x set 1"""
    zp = rules.positive.nodes
    wp = rules.positive.weights
    assert d1.positive is not None and d2.positive is not None
    b12 = (d1.positive * (wp * np.exp(-zp * t))) @ d2.positive.T
    if rules.gaussian:
        full = gaussian_kernel(d2.nodes[:, None], d1.nodes[None, :], t)
        full = d2.root_w[:, None] * full * d1.root_w[None, :]
        upper = (d2.positive * (wp * np.exp(zp * t))) @ d1.positive.T
        b21 = -(full - upper)
    else:
        assert rules.negative is not None
        assert d1.negative is not None and d2.negative is not None
        zn = rules.negative.nodes
        wn = rules.negative.weights
        b21 = -(d2.negative * (wn * np.exp(zn * t))) @ d1.negative.T
    return b12, b21


def _pair_determinant(
    d1: Discretization,
    d2: Discretization,
    t: float,
    rules: ZRules,
    method: str = "direct",
) -> float:
    b12, b21 = off_diagonal_blocks(d1, d2, t, rules)
    n1 = d1.size
    n2 = d2.size
    i1 = np.eye(n1) - d1.kernel
    i2 = np.eye(n2) - d2.kernel
    if method == "direct":
        m = np.block([[i1, -b12], [-b21, i2]])
        return determinant(m)
    if method == "split":
        x12 = solve_linear(i1, b12)
        x21 = solve_linear(i2, b21)
        m = np.block([[np.eye(n1), -x12], [-x21, np.eye(n2)]])
        return determinant(i1) * determinant(i2) * determinant(m)
    raise InvalidArgumentError(f"unknown assembly method '{method}'")


def extended_entry(
    i: int,
    j: int,
    x: float,
    y: float,
    t: float,
    cfg: Optional[FredholmConfig] = None,
) -> float:
    """Entry (i, j) of the extended Airy kernel for times 0 and t"""
    if i not in (1, 2) or j not in (1, 2):
        raise InvalidArgumentError(f"block ({i}, {j}) does not exist")
    if not t >= 0:
        raise InvalidArgumentError(f"t must be >= 0, got {t}")
    if 0 < t < SMALL_T_CAP:
        warn_small_t(t)
    if i == j:
        return float(airy_kernel(x, y))
    if cfg is None:
        cfg = FredholmConfig(t, x, y)
    rules = z_rules(t, min(x, y, cfg.s1, cfg.s2), cfg.z_cutoff)

    zp = rules.positive.nodes
    wp = rules.positive.weights
    ax = airy_pair(x + zp)[0]
    ay = airy_pair(y + zp)[0]
    if (i, j) == (1, 2):
        return float(np.sum(wp * np.exp(-zp * t) * ax * ay))
    if rules.negative is None:
        upper = float(np.sum(wp * np.exp(zp * t) * ax * ay))
        return -(float(gaussian_kernel(x, y, t)) - upper)
    zn = rules.negative.nodes
    wn = rules.negative.weights
    ax = airy_pair(x + zn)[0]
    ay = airy_pair(y + zn)[0]
    return -float(np.sum(wn * np.exp(zn * t) * ax * ay))


def _check_probability(value: float, what: str) -> float:
    if not -PROBABILITY_SLACK <= value <= 1.0 + PROBABILITY_SLACK:
        logger.warning(
            "%s = %.3e lies outside [0, 1]; raise quad_order or cutoff",
            what,
            value,
        )
    return value


def one_point(s: float, cfg: Optional[FredholmConfig] = None) -> float:
    """F_2(s) as det(I - K_Ai) on [s, cutoff]"""
    cfg = cfg or FredholmConfig(0.0, s, s)
    if not s < cfg.cutoff:
        raise OutOfDomainError(f"s={s} is not below cutoff {cfg.cutoff}")
    n = node_count(s, cfg.cutoff, cfg.quad_order, 0.0)
    d = discretize(s, cfg.cutoff, n)
    return _check_probability(d.one_point(), f"F2({s})")


def joint_distribution(cfg: FredholmConfig, method: str = "direct") -> float:
    """P(A(0) <= s1, A(t) <= s2) by the Nystrom determinant.

    method "split" factors out det(I - K_Ai) of each threshold and
    solves for the coupling, the "direct" method factors the full
    block matrix.
    """
    s_lo = min(cfg.s1, cfg.s2)
    if cfg.t == 0:
        return one_point(s_lo, cfg)

    rules = z_rules(cfg.t, s_lo, cfg.z_cutoff)
    d1 = discretize(
        cfg.s1,
        cfg.cutoff,
        node_count(cfg.s1, cfg.cutoff, cfg.quad_order, cfg.t),
        rules,
    )
    d2 = discretize(
        cfg.s2,
        cfg.cutoff,
        node_count(cfg.s2, cfg.cutoff, cfg.quad_order, cfg.t),
        rules,
    )
    value = _pair_determinant(d1, d2, cfg.t, rules, method)
    logger.debug(
        "joint(t=%s, s1=%s, s2=%s) = %.15g with %d + %d nodes",
        cfg.t,
        cfg.s1,
        cfg.s2,
        value,
        d1.size,
        d2.size,
    )
    return _check_probability(value, "joint distribution")


# per-process state of the covariance sweep
_WORKER: Dict[str, Any] = {}


def _init_worker(
    t: float, nodes: np.ndarray, cutoff: float, quad_order: int
) -> None:
    _WORKER.clear()
    _WORKER.update(
        t=t,
        nodes=nodes,
        cutoff=cutoff,
        quad_order=quad_order,
        rules=z_rules(t, float(nodes[0]), default_z_cutoff(t)),
        cache={},
    )


def _worker_discretization(i: int) -> Tuple[Discretization, float]:
    cache = _WORKER["cache"]
    if i not in cache:
        s = float(_WORKER["nodes"][i])
        cutoff = _WORKER["cutoff"]
        n = node_count(s, cutoff, _WORKER["quad_order"], _WORKER["t"])
        d = discretize(s, cutoff, n, _WORKER["rules"])
        cache[i] = (d, d.one_point())
    return cache[i]


def _covariance_row(i: int) -> np.ndarray:
    """joint - product for grid pairs (i, j), j >= i"""
    nodes = _WORKER["nodes"]
    row = np.zeros(nodes.size - i)
    d1, f1 = _worker_discretization(i)
    if f1 < NEGLIGIBLE_F2:
        return row
    for j in range(i, nodes.size):
        d2, f2 = _worker_discretization(j)
        joint = _pair_determinant(d1, d2, _WORKER["t"], _WORKER["rules"])
        row[j - i] = joint - f1 * f2
    logger.debug("covariance row %d (s=%.4f) done", i, d1.s)
    return row


def covariance_grid(
    t: float,
    template: Optional[CovarianceConfig] = None,
    cores: int = 1,
    use_cache: bool = False,
) -> Tuple[QuadratureRule, np.ndarray]:
    """Tensor rule and the matrix of joint - product on its nodes"""
    if not t > 0:
        raise InvalidArgumentError(f"t must be positive, got {t}")
    template = template or CovarianceConfig()
    if t < SMALL_T_CAP:
        warn_small_t(t)
    rule = gauss_legendre(template.grid_order, template.lower, template.upper)
    key = param_hash("covariance_grid", {"t": t, **template.params()})
    if use_cache:
        arrays = load_cached(key)
        if arrays is not None:
            return rule, arrays["hoeffding"]

    rows: List[np.ndarray] = run_parallel(
        _covariance_row,
        range(rule.order),
        cores=cores,
        initializer=_init_worker,
        initargs=(t, rule.nodes, template.cutoff, template.quad_order),
        label=f"covariance grid t={t}",
    )
    n = rule.order
    grid = np.zeros((n, n))
    for i, row in enumerate(rows):
        grid[i, i:] = row
        grid[i:, i] = row
    if use_cache:
        store_cached(key, {"hoeffding": grid})
    return rule, grid


def covariance_exact(
    t: float,
    template: Optional[CovarianceConfig] = None,
    cores: int = 1,
    use_cache: bool = False,
) -> float:
    """cov(A(0), A(t)) as the integral of joint - product over the square"""
    rule, grid = covariance_grid(t, template, cores, use_cache)
    return float(rule.weights @ grid @ rule.weights)


def _resolvent_system(
    s: float, cfg: Optional[FredholmConfig]
) -> Tuple[Discretization, np.ndarray]:
    cfg = cfg or FredholmConfig(0.0, s, s)
    if not s < cfg.cutoff:
        raise OutOfDomainError(f"s={s} is not below cutoff {cfg.cutoff}")
    n = node_count(s, cfg.cutoff, cfg.quad_order, 0.0)
    d = discretize(s, cfg.cutoff, n)
    return d, np.eye(n) - d.kernel


def resolvent_u(
    j: int, k: int, s: float, cfg: Optional[FredholmConfig] = None
) -> float:
    """u_{j,k}(s) = <(I - K_Ai)^-1 chi Ai^(j), chi Ai^(k)> on [s, cutoff]"""
    if j < 0 or k < 0 or j + k > 4:
        raise InvalidArgumentError(
            f"need j, k >= 0 and j + k <= 4, got ({j}, {k})"
        )
    d, system = _resolvent_system(s, cfg)
    derivs = airy_derivatives(max(j, k), d.nodes) * d.root_w
    y = solve_linear(system, derivs[j])
    return float(derivs[k] @ y)


def resolvent_q(
    j: int, s: float, cfg: Optional[FredholmConfig] = None
) -> float:
    """q_j(s) = ((I - K_Ai)^-1 chi Ai^(j))(s)"""
    if not 0 <= j <= 8:
        raise InvalidArgumentError(f"j must lie in [0, 8], got {j}")
    d, system = _resolvent_system(s, cfg)
    derivs = airy_derivatives(j, np.append(d.nodes, s))
    y = solve_linear(system, derivs[j][:-1] * d.root_w)
    row = airy_kernel(s, d.nodes) * d.root_w
    return float(derivs[j][-1] + row @ y)
