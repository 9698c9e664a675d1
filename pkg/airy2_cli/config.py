"""
Parameter objects for the solvers and the command line
"""

import math
import warnings
from typing import Any, Dict, List, Optional

from .errors import AccuracyWarning, InvalidArgumentError
from .logging import get_logger
from .util import __version__, param_hash

logger = get_logger(__name__)

SMALL_T_CAP = 0.05
Z_CUTOFF_MAX = 40.0
Z_TAIL = 1e-15
OUTPUT_FORMATS: List[str] = ["csv", "json"]


class BaseConfig:
    """A base class for parameter records"""

    name = "BaseConfig"

    def params(self) -> Dict[str, Any]:
        """The parameter record, skipping unset values"""
        record: Dict[str, Any] = {}
        for k, v in self.__dict__.items():
            if k.startswith("_") or v is None:
                continue
            elif isinstance(v, (list, tuple)):
                record[k] = list(v)
            else:
                record[k] = v
        return record

    def cache_key(self) -> str:
        return param_hash(self.name, self.params())

    def __repr__(self) -> str:
        args = ", ".join(f"{k}={v!r}" for k, v in self.params().items())
        return f"{type(self).__name__}({args})"


class SolverConfig(BaseConfig):
    """Discretization of the Painleve II boundary-value problem"""

    name = "hastings_mcleod"

    def __init__(
        self,
        s_min: float = -10.0,
        s_max: float = 10.0,
        tol: float = 1e-10,
        order: int = 200,
    ):
        self.s_min = float(s_min)
        self.s_max = float(s_max)
        self.tol = float(tol)
        self.order = int(order)


class FredholmConfig(BaseConfig):
    """Discretization of the two-time extended Airy kernel determinant"""

    name = "fredholm"

    def __init__(
        self,
        t: float,
        s1: float,
        s2: float,
        cutoff: Optional[float] = None,
        quad_order: int = 60,
        z_cutoff: Optional[float] = None,
    ):
        t = float(t)
        s1 = float(s1)
        s2 = float(s2)
        if not math.isfinite(t) or t < 0:
            raise InvalidArgumentError(f"t must be >= 0, got {t}")
        if quad_order < 30:
            raise InvalidArgumentError(
                f"quad_order must be >= 30, got {quad_order}"
            )
        top = max(s1, s2)
        if cutoff is None:
            cutoff = max(top + 10.0, 12.0)
        elif cutoff < top + 8.0:
            raise InvalidArgumentError(
                f"cutoff {cutoff} must be >= max(s1, s2) + 8 = {top + 8.0}"
            )
        if z_cutoff is None:
            z_cutoff = default_z_cutoff(t)
        elif z_cutoff <= 0:
            raise InvalidArgumentError(
                f"z_cutoff must be positive, got {z_cutoff}"
            )

        self.t = t
        self.s1 = s1
        self.s2 = s2
        self.cutoff = float(cutoff)
        self.quad_order = int(quad_order)
        self.z_cutoff = float(z_cutoff)
        self._accuracy_warning = 0 < t < SMALL_T_CAP
        if self._accuracy_warning:
            warn_small_t(t)

    @property
    def accuracy_warning(self) -> bool:
        return self._accuracy_warning


class CovarianceConfig(BaseConfig):
    """Tensor grid for the covariance integral"""

    name = "covariance"

    def __init__(
        self,
        lower: float = -10.0,
        upper: float = 6.0,
        grid_order: int = 80,
        quad_order: int = 60,
        cutoff: Optional[float] = None,
    ):
        if not lower < upper:
            raise InvalidArgumentError(
                f"lower must be < upper, got [{lower}, {upper}]"
            )
        if grid_order < 4:
            raise InvalidArgumentError(
                f"grid_order must be >= 4, got {grid_order}"
            )
        if quad_order < 30:
            raise InvalidArgumentError(
                f"quad_order must be >= 30, got {quad_order}"
            )
        if cutoff is None:
            cutoff = upper + 10.0
        elif cutoff < upper + 8.0:
            raise InvalidArgumentError(
                f"cutoff {cutoff} must be >= upper + 8 = {upper + 8.0}"
            )
        self.lower = float(lower)
        self.upper = float(upper)
        self.grid_order = int(grid_order)
        self.quad_order = int(quad_order)
        self.cutoff = float(cutoff)


class RunConfig(BaseConfig):
    """One command line invocation"""

    name = "run"

    def __init__(
        self,
        command: str,
        params: Dict[str, Any],
        output_format: str = "csv",
        output: Optional[str] = None,
    ):
        if output_format not in OUTPUT_FORMATS:
            raise InvalidArgumentError(
                f"output format must be one of {OUTPUT_FORMATS}, got "
                f"'{output_format}'"
            )
        self.command = command
        self.values = dict(params)
        self.output_format = output_format
        self.output = output

    def metadata(self) -> Dict[str, Any]:
        return {
            "version": __version__,
            "command": self.command,
            "params": self.values,
        }


def default_z_cutoff(t: float) -> float:
    """Truncation of the off-diagonal z-integrals for time separation t"""
    if t <= 0:
        return Z_CUTOFF_MAX
    return min(Z_CUTOFF_MAX, -math.log(Z_TAIL) / t)


def warn_small_t(t: float) -> None:
    msg = (
        f"t={t} is below {SMALL_T_CAP}; the off-diagonal kernel is "
        "under-resolved and results carry reduced accuracy"
    )
    logger.warning(msg)
    warnings.warn(msg, AccuracyWarning, stacklevel=3)
