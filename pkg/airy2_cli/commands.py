"""
Command line entry points producing CSV or JSON tables
"""

import multiprocessing as mp
import pathlib
import sys
from typing import Any, Callable, Dict, List, Optional, Tuple

import numpy as np
from argh import arg

from . import asymptotics, fredholm, tw_core
from .asymptotics import COV_ORDERS, CN_ORDERS, CovCoefficients
from .config import (
    OUTPUT_FORMATS,
    CovarianceConfig,
    FredholmConfig,
    RunConfig,
    SolverConfig,
)
from .errors import InvalidArgumentError
from .logging import get_logger, set_level
from .output import display_error, write_table
from .painleve2 import HMSolution, cached_solution
from .runner import run_parallel
from .util import __version__, path_arg

logger = get_logger(__name__)

COV_METHODS = ["asymptotic", "fredholm", "reference"]
JOINT_METHODS = ["fredholm", "split", "asymptotic"]
COMPARE_METHODS = ["fredholm", "reference"]
COEFF_SOURCES = ["computed", "reference"]
COMPARE_TIMES = [5.0, 10.0, 15.0, 20.0, 25.0]
COMPARE_COLUMNS = [
    "t",
    "cov_fredholm",
    "cov_2_6",
    "error_6",
    "cov_2_8",
    "error_8",
    "cov_2_10",
    "error_10",
    "error_6_display",
    "error_8_display",
    "error_10_display",
]

# not part of the output metadata
RUNTIME_ONLY = ("no_cache", "cores", "kwargs")


def output_args(func: Callable[..., Any]) -> Callable[..., Any]:
    """Attach -o/--output, --output-format and --no-cache"""
    for decorator in (
        arg(
            "--no-cache",
            help="Recompute instead of reading the on-disk cache",
            action="store_true",
        ),
        arg(
            "--output-format",
            help="Table format. %(default)s",
            choices=OUTPUT_FORMATS,
        ),
        arg(
            "-o",
            "--output",
            help="Output file (default: standard output)",
            type=path_arg(is_dir=False),
        ),
    ):
        func = decorator(func)
    return func


def run_config(
    command: str,
    output_format: str = "csv",
    output: Optional[pathlib.Path] = None,
    **params: Any,
) -> RunConfig:
    """The RunConfig of a command from its arguments"""
    record = {k: v for k, v in params.items() if k not in RUNTIME_ONLY}
    return RunConfig(
        command,
        record,
        output_format=output_format,
        output=None if output is None else str(output),
    )


def load_solution(no_cache: bool = False, **_kwargs: Any) -> HMSolution:
    return cached_solution(SolverConfig(), use_cache=not no_cache)


def load_profile(no_cache: bool = False, **_kwargs: Any) -> tw_core.TWProfile:
    """F_2 and its derivatives from the default Painleve solution"""
    return tw_core.build_profile(load_solution(no_cache))


def coefficients(
    source: str = "computed", no_cache: bool = False, **_kwargs: Any
) -> CovCoefficients:
    if source == "reference":
        return CovCoefficients.reference()
    profile = load_profile(no_cache)
    return asymptotics.cov_coefficients(tw_core.moments(profile))


def exact_covariance(
    t: float,
    method: str = "fredholm",
    grid_order: int = 80,
    quad_order: int = 60,
    cores: int = 1,
    no_cache: bool = False,
    **_kwargs: Any,
) -> float:
    """cov(t) by the Fredholm grid or from the reference table"""
    if method == "reference":
        return asymptotics.reference_covariance(t)
    template = CovarianceConfig(grid_order=grid_order, quad_order=quad_order)
    return fredholm.covariance_exact(
        t, template, cores=cores, use_cache=not no_cache
    )


def _times(t: Optional[List[float]]) -> List[float]:
    times = list(t) if t else list(COMPARE_TIMES)
    for ti in times:
        if not ti > 0:
            raise InvalidArgumentError(f"t must be positive, got {ti}")
    return times


def _joint_fredholm(job: Tuple[FredholmConfig, str]) -> float:
    cfg, method = job
    return fredholm.joint_distribution(cfg, method)


@output_args
@arg("--s-min", help="Left end of the collocation interval")
@arg("--s-max", help="Right end of the collocation interval")
@arg("--tol", help="Newton tolerance. %(default)s")
@arg("--order", help="Chebyshev order. %(default)s")
def solve(
    s_min: float = -10.0,
    s_max: float = 10.0,
    tol: float = 1e-10,
    order: int = 200,
    output: Optional[pathlib.Path] = None,  # pylint: disable=W0613
    output_format: str = "csv",  # pylint: disable=W0613
    no_cache: bool = False,
    **kwargs: Any,
):
    """
    Tabulate the Hastings-McLeod solution q and q' on its grid
    """
    set_level(kwargs["loglevel"])
    run = run_config("solve", **locals())
    cfg = SolverConfig(s_min, s_max, tol, order)
    sol = cached_solution(cfg, use_cache=not no_cache)
    logger.info("max scaled residual %.2e", sol.tolerance)
    rows = [
        {"s": float(s), "q": float(q), "q_prime": float(qp)}
        for s, q, qp in zip(sol.grid, sol.q.values, sol.q_prime.values)
    ]
    write_table(rows, ["s", "q", "q_prime"], run)


@output_args
@arg("--k-max", help="Highest derivative of f_2 to emit. %(default)s")
@arg("--lower", help="First sample point")
@arg("--upper", help="Last sample point")
@arg("--points", help="Number of equispaced samples. %(default)s")
def tw(
    k_max: int = 3,
    lower: float = -8.0,
    upper: float = 6.0,
    points: int = 141,
    output: Optional[pathlib.Path] = None,  # pylint: disable=W0613
    output_format: str = "csv",  # pylint: disable=W0613
    no_cache: bool = False,  # pylint: disable=W0613
    **kwargs: Any,
):
    """
    Tabulate F_2, f_2 and the derivatives of f_2
    """
    set_level(kwargs["loglevel"])
    run = run_config("tw", **locals())
    if not 0 <= k_max <= tw_core.MAX_DERIVATIVE:
        raise InvalidArgumentError(
            f"k-max must lie in [0, {tw_core.MAX_DERIVATIVE}], got {k_max}"
        )
    if points < 2 or not lower < upper:
        raise InvalidArgumentError(
            f"need points >= 2 and lower < upper, got {points} on "
            f"[{lower}, {upper}]"
        )
    profile = load_profile(**locals())
    s = np.linspace(lower, upper, points)
    columns = ["s", "F2"] + [
        "f2" if k == 0 else f"f2_d{k}" for k in range(k_max + 1)
    ]
    values = [s, profile.F2(s)] + [profile.f2(k, s) for k in range(k_max + 1)]
    rows = [
        {col: float(v[i]) for col, v in zip(columns, values)}
        for i in range(points)
    ]
    write_table(rows, columns, run)


@output_args
@arg("--n-max", help="Highest moment. %(default)s")
def moments(
    n_max: int = 4,
    output: Optional[pathlib.Path] = None,  # pylint: disable=W0613
    output_format: str = "csv",  # pylint: disable=W0613
    no_cache: bool = False,  # pylint: disable=W0613
    **kwargs: Any,
):
    """
    Moments, variance and median of the Tracy-Widom GUE distribution
    """
    set_level(kwargs["loglevel"])
    run = run_config("moments", **locals())
    profile = load_profile(**locals())
    computed = tw_core.moments(profile, n_max)
    ref = tw_core.MomentSet.reference()

    rows: List[Dict[str, Any]] = []
    for n, mu in enumerate(computed.mu):
        rows.append(
            {
                "quantity": f"mu_{n}",
                "value": mu,
                "reference": ref.mu[n],
                "difference": mu - ref.mu[n],
            }
        )
    rows.append(
        {
            "quantity": "variance",
            "value": computed.variance,
            "reference": ref.variance,
            "difference": computed.variance - ref.variance,
        }
    )
    rows.append({"quantity": "median", "value": tw_core.median(profile)})
    write_table(
        rows, ["quantity", "value", "reference", "difference"], run
    )


@output_args
@arg("--source", help="Coefficients from", choices=COEFF_SOURCES)
def coeffs(
    source: str = "computed",
    output: Optional[pathlib.Path] = None,  # pylint: disable=W0613
    output_format: str = "csv",  # pylint: disable=W0613
    no_cache: bool = False,  # pylint: disable=W0613
    **kwargs: Any,
):
    """
    Coefficients C_1..C_10 of the large-t covariance expansion
    """
    set_level(kwargs["loglevel"])
    run = run_config("coeffs", **locals())
    c = coefficients(**locals())
    rows = [{"n": n, "C": value} for n, value in c.as_dict().items()]
    write_table(rows, ["n", "C"], run)


@output_args
@arg("-t", "--t", nargs="+", type=float, help="Time separations")
@arg("--method", help="Covariance from", choices=COV_METHODS)
@arg(
    "--order",
    help="Truncation order N of the expansion. %(default)s",
    type=int,
    choices=COV_ORDERS,
)
@arg("--source", help="Coefficients from", choices=COEFF_SOURCES)
@arg("--grid-order", help="Tensor grid points per axis. %(default)s")
@arg("--quad-order", help="Nystrom nodes per unit of ten. %(default)s")
@arg("-j", "--cores", help="Number of processes to use. %(default)s")
def cov(
    t: Optional[List[float]] = None,
    method: str = "asymptotic",
    order: int = 10,
    source: str = "computed",
    grid_order: int = 80,
    quad_order: int = 60,
    cores: int = mp.cpu_count(),  # pylint: disable=W0613
    output: Optional[pathlib.Path] = None,  # pylint: disable=W0613
    output_format: str = "csv",  # pylint: disable=W0613
    no_cache: bool = False,  # pylint: disable=W0613
    **kwargs: Any,
):
    """
    Covariance of the Airy_2 process at times 0 and t
    """
    set_level(kwargs["loglevel"])
    run = run_config("cov", **locals())
    times = _times(t)
    rows = []
    if method == "asymptotic":
        c = coefficients(**locals())
        for ti in times:
            value = asymptotics.cov_asymptotic(c, ti, order)
            rows.append({"t": ti, "cov": value})
    else:
        for ti in times:
            value = exact_covariance(
                ti, method, grid_order, quad_order, cores, no_cache
            )
            rows.append({"t": ti, "cov": value})
    write_table(rows, ["t", "cov"], run)


@output_args
@arg("-t", "--t", nargs="+", type=float, help="Time separations")
@arg("--s1", help="Threshold at time 0")
@arg("--s2", help="Threshold at time t")
@arg("--method", help="Evaluation route", choices=JOINT_METHODS)
@arg(
    "--order",
    help="Truncation order of the asymptotic expansion. %(default)s",
    type=int,
    choices=CN_ORDERS,
)
@arg("--quad-order", help="Nystrom nodes per unit of ten. %(default)s")
@arg("--cutoff", help="Upper truncation of [s, inf)", type=float)
@arg("-j", "--cores", help="Number of processes to use. %(default)s")
def joint(
    t: Optional[List[float]] = None,
    s1: float = 0.0,
    s2: float = 0.0,
    method: str = "fredholm",
    order: int = 8,
    quad_order: int = 60,
    cutoff: Optional[float] = None,
    cores: int = mp.cpu_count(),
    output: Optional[pathlib.Path] = None,  # pylint: disable=W0613
    output_format: str = "csv",  # pylint: disable=W0613
    no_cache: bool = False,  # pylint: disable=W0613
    **kwargs: Any,
):
    """
    Joint distribution P(A(0) <= s1, A(t) <= s2)
    """
    set_level(kwargs["loglevel"])
    run = run_config("joint", **locals())
    times = list(t) if t else list(COMPARE_TIMES)
    if method == "asymptotic":
        approx = asymptotics.TwoPointApprox(load_profile(**locals()), order)
        values = [approx.raw(ti, s1, s2) for ti in times]
        clamped = [approx.clamped(ti, s1, s2) for ti in times]
    else:
        jobs = [
            (
                FredholmConfig(
                    ti, s1, s2, cutoff=cutoff, quad_order=quad_order
                ),
                "split" if method == "split" else "direct",
            )
            for ti in times
        ]
        values = run_parallel(
            _joint_fredholm, jobs, cores=cores, label="joint distribution"
        )
        clamped = [min(1.0, max(0.0, v)) for v in values]
    rows = [
        {"t": ti, "s1": s1, "s2": s2, "joint": v, "probability": p}
        for ti, v, p in zip(times, values, clamped)
    ]
    write_table(rows, ["t", "s1", "s2", "joint", "probability"], run)


@output_args
@arg("--tol", help="Largest accepted residual. %(default)s")
def verify(
    tol: float = tw_core.IDENTITY_TOL,
    output: Optional[pathlib.Path] = None,  # pylint: disable=W0613
    output_format: str = "csv",  # pylint: disable=W0613
    no_cache: bool = False,
    **kwargs: Any,
):
    """
    Check every u_{j,k} identity against the f_2 derivatives.
    Exits with status 2 when a residual exceeds the tolerance.
    """
    set_level(kwargs["loglevel"])
    run = run_config("verify", **locals())
    sol = load_solution(no_cache)
    profile = tw_core.build_profile(sol)
    utable = tw_core.build_u_table(sol)
    results = tw_core.verify_all(profile, utable, tol)
    rows = [
        {"identity": name, "residual": residual, "passed": passed}
        for name, residual, passed in results
    ]
    write_table(rows, ["identity", "residual", "passed"], run)

    failed = [name for name, _residual, passed in results if not passed]
    if failed:
        logger.error(
            "%d identities exceed tol=%g: %s",
            len(failed),
            tol,
            " ".join(failed),
        )
        sys.exit(2)
    logger.info(
        "all %d identities hold (airy2-cli %s)", len(rows), __version__
    )


@output_args
@arg("-t", "--t", nargs="+", type=float, help="Time separations")
@arg("--method", help="Exact covariance from", choices=COMPARE_METHODS)
@arg("--source", help="Coefficients from", choices=COEFF_SOURCES)
@arg("--grid-order", help="Tensor grid points per axis. %(default)s")
@arg("--quad-order", help="Nystrom nodes per unit of ten. %(default)s")
@arg("-j", "--cores", help="Number of processes to use. %(default)s")
def compare(
    t: Optional[List[float]] = None,
    method: str = "fredholm",
    source: str = "computed",
    grid_order: int = 80,
    quad_order: int = 60,
    cores: int = mp.cpu_count(),  # pylint: disable=W0613
    output: Optional[pathlib.Path] = None,  # pylint: disable=W0613
    output_format: str = "csv",  # pylint: disable=W0613
    no_cache: bool = False,  # pylint: disable=W0613
    **kwargs: Any,
):
    """
    Exact covariance against the truncated expansions cov_{2,N}
    """
    set_level(kwargs["loglevel"])
    run = run_config("compare", **locals())
    times = _times(t)
    c = coefficients(**locals())
    rows = []
    for ti in times:
        exact = exact_covariance(
            ti, method, grid_order, quad_order, cores, no_cache
        )
        errors = asymptotics.error_columns(exact, c, ti)
        row: Dict[str, Any] = {"t": ti, "cov_fredholm": exact}
        for n, error in errors.items():
            row[f"cov_2_{n}"] = asymptotics.cov_asymptotic(c, ti, n)
            row[f"error_{n}"] = error
            row[f"error_{n}_display"] = display_error(error)
        rows.append(row)
    write_table(rows, COMPARE_COLUMNS, run)
