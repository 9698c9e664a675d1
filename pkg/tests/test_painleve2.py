from fractions import Fraction

import numpy as np
import pytest

from oracles import central_difference

from airy2_cli.airy import airy_ai
from airy2_cli.config import SolverConfig
from airy2_cli.errors import InvalidArgumentError, OutOfDomainError
from airy2_cli.painleve2 import (
    cached_solution,
    initial_guess,
    left_asymptotic_coefficients,
    left_log_derivative,
    q_eval,
    qp_eval,
    solve_hastings_mcleod,
)

Q_AT_ZERO = 0.3670615515480784


def test_right_boundary(hm_solution):
    s_max = hm_solution.domain[1]
    ratio = q_eval(hm_solution, s_max) / airy_ai(s_max)
    assert abs(ratio - 1.0) <= 1e-6


def test_value_at_zero(hm_solution):
    assert q_eval(hm_solution, 0.0) == pytest.approx(Q_AT_ZERO, abs=1e-9)


def test_residual(hm_solution):
    residual = hm_solution.residual()
    assert residual.size == hm_solution.order - 1
    assert np.max(residual) <= 1e-9
    assert hm_solution.tolerance == pytest.approx(np.max(residual))


def test_positive_and_decaying(hm_solution):
    assert np.all(hm_solution.q.values > 0)
    right = hm_solution.grid >= 0
    assert np.all(np.diff(hm_solution.q.values[right]) < 0)


def test_left_asymptotics(hm_solution):
    s = -9.0
    assert q_eval(hm_solution, s) == pytest.approx(
        np.sqrt(-s / 2) * (1 + 1 / (8 * s**3)), rel=1e-4
    )


def test_q_eval_at_node(hm_solution):
    node = hm_solution.grid[57]
    assert q_eval(hm_solution, node) == hm_solution.q.values[57]


@pytest.mark.parametrize("s", [-5.0, -1.0, 0.0, 2.0])
def test_q_prime_by_difference(hm_solution, s):
    fd = central_difference(lambda x: q_eval(hm_solution, x), s, 1e-4)
    assert qp_eval(hm_solution, s) == pytest.approx(fd, abs=1e-7)


def test_airy_regime(hm_solution):
    assert q_eval(hm_solution, 5.0) == pytest.approx(airy_ai(5.0), abs=1e-7)


def test_out_of_domain(hm_solution):
    with pytest.raises(OutOfDomainError):
        q_eval(hm_solution, 10.5)


def test_grid_doubling(hm_solution):
    fine = solve_hastings_mcleod(order=2 * hm_solution.order)
    assert abs(q_eval(fine, 0.0) - q_eval(hm_solution, 0.0)) < 1e-9


def test_left_coefficients():
    assert left_asymptotic_coefficients(5) == [
        Fraction(1),
        Fraction(1, 8),
        Fraction(-73, 128),
        Fraction(10657, 1024),
        Fraction(-13912277, 32768),
    ]


def test_left_log_derivative():
    s = -10.0
    psi = lambda x: np.sqrt(-x / 2) * (  # noqa: E731
        1
        + 1 / (8 * x**3)
        - 73 / (128 * x**6)
        + 10657 / (1024 * x**9)
        - 13912277 / (32768 * x**12)
    )
    fd = central_difference(psi, s, 1e-3) / psi(s)
    assert left_log_derivative(s) == pytest.approx(fd, rel=1e-8)


def test_initial_guess_shape():
    s = np.linspace(-10.0, 10.0, 21)
    guess = initial_guess(s)
    assert np.all(guess > 0)
    assert guess[0] == pytest.approx(np.sqrt(5.0), rel=1e-4)
    assert guess[-1] < 1e-9


@pytest.mark.parametrize(
    "kwargs",
    [
        {"s_min": -5.0},
        {"s_max": 4.0},
        {"tol": 1e-3},
        {"tol": 1e-15},
        {"order": 8},
    ],
)
def test_invalid_arguments(kwargs):
    with pytest.raises(InvalidArgumentError):
        solve_hastings_mcleod(**kwargs)


def test_cached_solution(cache_dir):
    cfg = SolverConfig(s_min=-8.0, s_max=8.0, order=120)
    first = cached_solution(cfg)
    assert len(list(cache_dir.glob("*.npz"))) == 1
    second = cached_solution(cfg)
    assert np.array_equal(first.q.values, second.q.values)
    assert np.array_equal(first.q_prime.values, second.q_prime.values)
    assert second.domain == (-8.0, 8.0)
    assert second.tolerance == first.tolerance


def test_cache_bypass(cache_dir):
    cfg = SolverConfig(s_min=-8.0, s_max=8.0, order=120)
    cached_solution(cfg, use_cache=False)
    assert not cache_dir.exists() or not list(cache_dir.glob("*.npz"))
