"""
Large-t expansion of the two-point function and of the covariance
"""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from .errors import InvalidArgumentError
from .logging import get_logger
from .numerics import gauss_legendre
from .tw_core import MomentSet, TWProfile
from .util import reference_data

logger = get_logger(__name__)

COV_ORDERS = (2, 4, 6, 8, 10)
CN_ORDERS = (0, 2, 4, 6, 8)
INTEGRATION_SQUARE = (-10.0, 6.0)
INTEGRATION_ORDER = 200
# highest f_2 derivative appearing in c_n
CN_DERIVATIVES = {0: 0, 2: 0, 4: 1, 6: 2, 8: 3}


@dataclass(frozen=True)
class CovCoefficients:
    """C_1..C_10 of cov(t) ~ sum C_n / t^n"""

    C: Tuple[float, ...]
    moments: Optional[MomentSet] = None

    def __getitem__(self, n: int) -> float:
        if not 1 <= n <= len(self.C):
            raise InvalidArgumentError(f"no coefficient C_{n}")
        return self.C[n - 1]

    def as_dict(self) -> Dict[int, float]:
        return {n: self[n] for n in range(1, len(self.C) + 1)}

    @classmethod
    def reference(cls) -> "CovCoefficients":
        """The published C_4..C_10"""
        ref = reference_data()["coefficients"]
        c = [0.0] * 10
        c[1] = 1.0
        for n in (4, 6, 8, 10):
            c[n - 1] = float(ref[f"C_{n}"])
        return cls(C=tuple(c), moments=MomentSet.reference())


def reference_covariance(t: float) -> float:
    """Tabulated exact covariance at t = 5, 10, 15, 20 or 25"""
    table = reference_data()["covariance_table"]
    for row in table:
        if float(row["t"]) == float(t):
            return float(row["cov_B"])
    known = ", ".join(str(row["t"]) for row in table)
    raise InvalidArgumentError(
        f"no reference covariance at t={t}; tabulated t: {known}"
    )


def cov_coefficients(m: MomentSet) -> CovCoefficients:
    """C_n from the moments of f_2; odd C_n vanish and C_2 = 1"""
    if len(m.mu) < 5:
        raise InvalidArgumentError("moments through mu_4 are required")
    mu1, mu2, mu3, mu4 = m.mu[1:5]
    c = [0.0] * 10
    c[1] = 1.0
    c[3] = 2.0 * mu1
    c[5] = 2.0 * mu2 + 10.0 / 3.0 * mu1**2
    c[7] = 2.0 * mu3 + 14.0 * mu2 * mu1 + 13.0 / 2.0
    c[9] = 2.0 * mu4 + 24.0 * mu3 * mu1 + 126.0 / 5.0 * mu2**2 + 116.0 * mu1
    return CovCoefficients(C=tuple(c), moments=m)


def cov_asymptotic(c: CovCoefficients, t: float, N: int) -> float:
    """cov_{2,N}(t) = sum_{n <= N} C_n / t^n"""
    if N not in COV_ORDERS:
        raise InvalidArgumentError(f"N must be one of {COV_ORDERS}, got {N}")
    if not t > 0:
        raise InvalidArgumentError(f"t must be positive, got {t}")
    return float(sum(c[n] / t**n for n in range(1, N + 1)))


def error_columns(
    reference: float, c: CovCoefficients, t: float
) -> Dict[int, float]:
    """reference - cov_{2,N}(t) for N = 6, 8, 10"""
    return {
        n: reference - cov_asymptotic(c, t, n) for n in (6, 8, 10)
    }


def _check_n(n: int) -> None:
    if n not in CN_ORDERS:
        raise InvalidArgumentError(
            f"c_n is available for n in {CN_ORDERS}, got {n}"
        )


def cn_from_derivatives(
    n: int, s1: Any, d1: np.ndarray, s2: Any, d2: np.ndarray
) -> Any:
    """c_n from f_2^(k) samples d1[k] at s1 and d2[k] at s2.

    For n = 0 the rows hold F_2 rather than f_2.
    """
    _check_n(n)
    if n in (0, 2):
        return d1[0] * d2[0]
    if n == 4:
        return (s1 + s2) * d1[0] * d2[0] + 0.5 * d1[1] * d2[1]
    if n == 6:
        return (
            (3 * s1 + s2) * (3 * s2 + s1) / 3.0 * d1[0] * d2[0]
            + 3.0 * (d1[1] * d2[0] + d1[0] * d2[1])
            + (s1 + s2) * d1[1] * d2[1]
            + d1[2] * d2[2] / 6.0
        )
    return (
        (
            149.0 / 6.0
            + s1**3
            + 7.0 * s1 * s2**2
            + 7.0 * s1**2 * s2
            + s2**3
        )
        * d1[0]
        * d2[0]
        + (15.0 * s1 + 34.0 / 3.0 * s2) * d1[0] * d2[1]
        + (15.0 * s2 + 34.0 / 3.0 * s1) * d2[0] * d1[1]
        + (1.5 * s1**2 + 13.0 / 3.0 * s1 * s2 + 1.5 * s2**2) * d1[1] * d2[1]
        + 3.0 * (d1[2] * d2[1] + d2[2] * d1[1])
        + 0.5 * (s1 + s2) * d1[2] * d2[2]
        + d1[3] * d2[3] / 24.0
    )


def _samples(profile: TWProfile, n: int, s: Any) -> np.ndarray:
    if n == 0:
        return np.array([profile.F2(s)])
    return profile.derivatives_at(s, CN_DERIVATIVES[n])


def c_n(profile: TWProfile, n: int, s1: float, s2: float) -> float:
    """Coefficient of t^-n in the two-point expansion"""
    _check_n(n)
    d1 = _samples(profile, n, s1)
    d2 = _samples(profile, n, s2)
    return float(cn_from_derivatives(n, s1, d1, s2, d2))


def integrate_cn(
    profile: TWProfile, n: int, order: int = INTEGRATION_ORDER
) -> float:
    """C_n as the integral of c_n over the plane"""
    if n not in (2, 4, 6, 8):
        raise InvalidArgumentError(f"n must be one of 2, 4, 6, 8, got {n}")
    lo = max(INTEGRATION_SQUARE[0], profile.domain[0])
    hi = min(INTEGRATION_SQUARE[1], profile.domain[1])
    rule = gauss_legendre(order, lo, hi)
    s = rule.nodes
    d = _samples(profile, n, s)
    values = cn_from_derivatives(
        n, s[:, None], d[:, :, None], s[None, :], d[:, None, :]
    )
    return float(rule.weights @ values @ rule.weights)


def tenth_order_pair_term(profile: TWProfile, s1: float, s2: float) -> float:
    """2 A F_2 (s1) B F_2 (s2) + 2 A F_2 (s2) B F_2 (s1) + 2 C F_2 C F_2
    with A F_2, B F_2 and C F_2 written through f_2 derivatives"""

    def abc(s: float) -> Tuple[float, float, float]:
        f = profile.derivatives_at(s, 4)
        a = -f[0] / 6.0 + s * f[1] / 3.0 - f[3] / 12.0
        b = -s * f[0] / 3.0 + 2.0 * s**2 * f[1] / 3.0 - s * f[3] / 6.0
        c = f[1] / 12.0 + s * f[2] / 6.0 - f[4] / 24.0
        return a, b, c

    a1, b1, c1 = abc(s1)
    a2, b2, c2 = abc(s2)
    return float(2.0 * a1 * b2 + 2.0 * a2 * b1 + 2.0 * c1 * c2)


@dataclass
class TwoPointApprox:
    """Truncated large-t expansion of P(A(0) <= s1, A(t) <= s2)"""

    profile: TWProfile
    order: int = 8
    _cache: Dict[Tuple[int, float, float], float] = field(
        default_factory=dict, repr=False
    )

    def __post_init__(self):
        if self.order not in CN_ORDERS:
            raise InvalidArgumentError(
                f"order must be one of {CN_ORDERS}, got {self.order}"
            )

    def coefficient(self, n: int, s1: float, s2: float) -> float:
        if n % 2:
            return 0.0
        key = (n, float(s1), float(s2))
        if key not in self._cache:
            self._cache[key] = c_n(self.profile, n, s1, s2)
        return self._cache[key]

    def terms(self, t: float, s1: float, s2: float) -> List[float]:
        """c_n / t^n for n = 0, 2, .., order"""
        if not t > 0:
            raise InvalidArgumentError(f"t must be positive, got {t}")
        return [
            self.coefficient(n, s1, s2) / t**n
            for n in range(0, self.order + 1, 2)
        ]

    def raw(self, t: float, s1: float, s2: float) -> float:
        return float(sum(self.terms(t, s1, s2)))

    def clamped(self, t: float, s1: float, s2: float) -> float:
        value = self.raw(t, s1, s2)
        if not 0.0 <= value <= 1.0:
            logger.warning(
                "asymptotic value %.3e at t=%s, s=(%s, %s) clamped to [0, 1]",
                value,
                t,
                s1,
                s2,
            )
        return min(1.0, max(0.0, value))


def joint_asymptotic(
    profile: TWProfile, t: float, s1: float, s2: float, N: int = 8
) -> float:
    """F_2(s1) F_2(s2) + sum_{n <= N} c_n / t^n, unclamped"""
    return TwoPointApprox(profile, N).raw(t, s1, s2)
