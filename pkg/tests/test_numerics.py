import numpy as np
import pytest

from oracles import cofactor_determinant

from airy2_cli.errors import (
    InvalidArgumentError,
    OutOfDomainError,
    SingularMatrixError,
)
from airy2_cli.numerics import (
    GridFunction,
    chebyshev_diff_matrix,
    chebyshev_points,
    composite_gauss_legendre,
    determinant,
    gauss_legendre,
    interp_eval,
    log_determinant,
    solve_linear,
)


def test_one_point_rule():
    rule = gauss_legendre(1, -1.0, 1.0)
    assert rule.nodes.tolist() == [0.0]
    assert rule.weights[0] == pytest.approx(2.0, abs=1e-15)


def test_two_point_rule():
    rule = gauss_legendre(2, -1.0, 1.0)
    assert rule.nodes == pytest.approx(
        [-1 / np.sqrt(3), 1 / np.sqrt(3)], abs=1e-15
    )
    assert rule.weights == pytest.approx([1.0, 1.0], abs=1e-15)


def test_polynomial_exactness():
    rule = gauss_legendre(5, 0.0, 1.0)
    assert rule.integrate(rule.nodes**8) == pytest.approx(1 / 9, abs=1e-14)


@pytest.mark.parametrize("n", [3, 20, 64, 200])
def test_rule_invariants(n):
    a, b = -10.0, 6.0
    rule = gauss_legendre(n, a, b)
    assert rule.order == n
    assert rule.interval == (a, b)
    assert np.all(np.diff(rule.nodes) > 0)
    assert rule.nodes[0] > a and rule.nodes[-1] < b
    assert np.all(rule.weights > 0)
    assert rule.weights.sum() == pytest.approx(b - a, rel=1e-13)


@pytest.mark.parametrize("n", [10, 40, 100])
def test_rule_matches_numpy(n):
    nodes, weights = np.polynomial.legendre.leggauss(n)
    rule = gauss_legendre(n, -1.0, 1.0)
    assert np.max(np.abs(rule.nodes - nodes)) < 1e-14
    assert np.max(np.abs(rule.weights - weights)) < 1e-14


def test_rule_is_read_only():
    rule = gauss_legendre(4, 0.0, 1.0)
    with pytest.raises(ValueError):
        rule.nodes[0] = 0.5


@pytest.mark.parametrize("n, a, b", [(0, -1.0, 1.0), (3, 1.0, 1.0)])
def test_rule_rejects_bad_arguments(n, a, b):
    with pytest.raises(InvalidArgumentError):
        gauss_legendre(n, a, b)


def test_quadrature_convergence():
    """Doubling the order on a mapped tail integrand gains many digits"""
    exact = 1.0 - np.exp(-30.0)

    def error(n):
        rule = gauss_legendre(n, 0.0, 30.0)
        return abs(rule.integrate(np.exp(-rule.nodes)) - exact)

    assert error(20) < 1e-3
    assert error(40) < 1e-12


def test_composite_rule():
    rule = composite_gauss_legendre(0.0, 28.0, 2.0, 20)
    assert rule.order == 14 * 20
    assert rule.integrate(np.exp(-rule.nodes)) == pytest.approx(
        1.0 - np.exp(-28.0), abs=1e-14
    )


def test_determinant_examples():
    assert determinant(np.eye(4)) == pytest.approx(1.0, abs=1e-15)
    assert determinant([[2.0, 3.0], [1.0, 4.0]]) == pytest.approx(5.0)


def test_determinant_matches_cofactor():
    rng = np.random.default_rng(7)
    m = rng.uniform(-1.0, 1.0, size=(6, 6))
    expected = cofactor_determinant(m.tolist())
    assert determinant(m) == pytest.approx(expected, rel=1e-12, abs=1e-15)


def test_determinant_is_multiplicative():
    rng = np.random.default_rng(11)
    for _ in range(5):
        a = rng.uniform(-1.0, 1.0, size=(5, 5))
        b = rng.uniform(-1.0, 1.0, size=(5, 5))
        assert determinant(a @ b) == pytest.approx(
            determinant(a) * determinant(b), rel=1e-10
        )


def test_log_determinant():
    m = np.diag([2.0, -3.0, 0.5])
    sign, logabs = log_determinant(m)
    assert sign == -1.0
    assert logabs == pytest.approx(np.log(3.0))
    assert log_determinant(np.zeros((2, 2))) == (0.0, -np.inf)


def test_determinant_rejects_non_square():
    with pytest.raises(InvalidArgumentError):
        determinant(np.ones((2, 3)))


def test_solve_examples():
    rhs = np.array([1.0, -2.0, 3.0])
    assert solve_linear(np.eye(3), rhs) == pytest.approx(rhs)
    assert solve_linear(np.diag([2.0, 4.0]), [2.0, 8.0]) == pytest.approx(
        [1.0, 2.0]
    )


def test_solve_residual():
    rng = np.random.default_rng(3)
    m = rng.uniform(-1.0, 1.0, size=(8, 8)) + 8.0 * np.eye(8)
    rhs = rng.uniform(-1.0, 1.0, size=8)
    x = solve_linear(m, rhs)
    assert np.max(np.abs(m @ x - rhs)) <= 1e-10 * np.max(np.abs(rhs))


def test_solve_several_right_hand_sides():
    m = np.array([[4.0, 1.0], [1.0, 3.0]])
    rhs = np.eye(2)
    assert solve_linear(m, rhs) @ m == pytest.approx(np.eye(2))


def test_solve_singular():
    m = np.array([[1.0, 2.0], [2.0, 4.0]])
    with pytest.raises(SingularMatrixError):
        solve_linear(m, [1.0, 1.0])


def test_solve_shape_mismatch():
    with pytest.raises(InvalidArgumentError):
        solve_linear(np.eye(3), [1.0, 2.0])


def test_chebyshev_derivative():
    x, d = chebyshev_diff_matrix(40, 0.0, 3.0)
    assert x[0] == pytest.approx(0.0) and x[-1] == pytest.approx(3.0)
    assert np.max(np.abs(d @ np.sin(x) - np.cos(x))) < 1e-10


def test_grid_function_nodes():
    x = chebyshev_points(20, -1.0, 2.0)
    f = GridFunction(x, np.cos(x))
    for node, value in zip(x, np.cos(x)):
        assert interp_eval(f, node) == value


def test_grid_function_polynomial():
    x = chebyshev_points(29, 0.0, 1.0)
    f = GridFunction(x, x**2)
    assert interp_eval(f, 0.37) == pytest.approx(0.1369, abs=1e-10)


def test_grid_function_exp():
    x = chebyshev_points(39, 0.0, 1.0)
    f = GridFunction(x, np.exp(x))
    assert interp_eval(f, 0.5) == pytest.approx(np.exp(0.5), abs=1e-9)
    assert f(np.array([0.25, 0.75])) == pytest.approx(
        np.exp([0.25, 0.75]), abs=1e-9
    )


def test_grid_function_domain():
    x = chebyshev_points(10, 0.0, 1.0)
    f = GridFunction(x, x)
    assert f.domain == (0.0, 1.0)
    with pytest.raises(OutOfDomainError):
        f(1.5)
    with pytest.raises(OutOfDomainError):
        interp_eval(f, float("nan"))


def test_grid_function_validation():
    with pytest.raises(InvalidArgumentError):
        GridFunction(np.arange(3.0), np.arange(3.0))
    with pytest.raises(InvalidArgumentError):
        GridFunction(np.array([0.0, 2.0, 1.0, 3.0]), np.zeros(4))
    with pytest.raises(InvalidArgumentError):
        GridFunction(np.arange(5.0), np.zeros(4))
