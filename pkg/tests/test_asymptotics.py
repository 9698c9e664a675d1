import numpy as np
import pytest

from airy2_cli import identities
from airy2_cli.asymptotics import (
    CovCoefficients,
    TwoPointApprox,
    c_n,
    cov_asymptotic,
    cov_coefficients,
    error_columns,
    integrate_cn,
    joint_asymptotic,
    reference_covariance,
    tenth_order_pair_term,
)
from airy2_cli.errors import InvalidArgumentError
from airy2_cli.tw_core import MomentSet
from airy2_cli.util import reference_data

TABLE = reference_data()["covariance_table"]
REFERENCE_C = {
    int(k[2:]): float(v)
    for k, v in reference_data()["coefficients"].items()
}


def test_reference_coefficients():
    c = CovCoefficients.reference()
    assert c[2] == 1.0
    assert c[4] == pytest.approx(-3.542173614823203252, abs=1e-15)
    assert c[10] == pytest.approx(652.588990733866004, abs=1e-12)
    for n in (1, 3, 5, 7, 9):
        assert c[n] == 0.0
    assert sorted(c.as_dict()) == list(range(1, 11))
    with pytest.raises(InvalidArgumentError):
        c[11]


def test_coefficients_from_reference_moments():
    c = cov_coefficients(MomentSet.reference())
    for n, tol in ((4, 1e-14), (6, 1e-12), (8, 1e-10), (10, 1e-9)):
        assert c[n] == pytest.approx(REFERENCE_C[n], abs=tol)


def test_coefficients_from_computed_moments(moment_set):
    c = cov_coefficients(moment_set)
    assert c[2] == 1.0
    for n, tol in ((4, 1e-7), (6, 1e-6), (8, 1e-5), (10, 1e-4)):
        assert c[n] == pytest.approx(REFERENCE_C[n], abs=tol)
    assert all(c[n] == 0.0 for n in (1, 3, 5, 7, 9))


def test_coefficients_need_four_moments():
    with pytest.raises(InvalidArgumentError):
        cov_coefficients(MomentSet.from_values([1.0, -1.7, 3.9]))


@pytest.mark.parametrize("row", TABLE, ids=lambda row: f"t={row['t']}")
def test_truncated_covariance_table(row):
    c = CovCoefficients.reference()
    for n in (6, 8, 10):
        expected = float(row[f"cov_2_{n}"])
        assert cov_asymptotic(c, row["t"], n) == pytest.approx(
            expected, abs=1e-9
        )


def test_truncations_telescope():
    c = CovCoefficients.reference()
    t = 7.5
    assert cov_asymptotic(c, t, 2) == pytest.approx(1 / t**2)
    step = cov_asymptotic(c, t, 10) - cov_asymptotic(c, t, 8)
    assert step == pytest.approx(c[10] / t**10, rel=1e-12)


@pytest.mark.parametrize("t, n", [(0.0, 6), (-1.0, 6), (5.0, 3), (5.0, 12)])
def test_truncation_rejects_bad_arguments(t, n):
    with pytest.raises(InvalidArgumentError):
        cov_asymptotic(CovCoefficients.reference(), t, n)


@pytest.mark.parametrize("row", TABLE, ids=lambda row: f"t={row['t']}")
def test_error_columns(row):
    c = CovCoefficients.reference()
    errors = error_columns(float(row["cov_B"]), c, row["t"])
    assert sorted(errors) == [6, 8, 10]
    assert errors[6] < 0 < errors[8]
    assert errors[10] < 0
    for n, error in errors.items():
        printed = float(row[f"error_{n}"])
        assert 0.5 < error / printed < 2.0


def test_reference_covariance():
    assert reference_covariance(10) == pytest.approx(0.00966309240)
    assert reference_covariance(25.0) == pytest.approx(0.0015910065)
    with pytest.raises(InvalidArgumentError, match="tabulated"):
        reference_covariance(7)


def test_cn_symmetry(profile):
    for n in (0, 2, 4, 6, 8):
        assert c_n(profile, n, -2.0, 0.5) == pytest.approx(
            c_n(profile, n, 0.5, -2.0), rel=1e-10, abs=1e-14
        )


def test_leading_coefficients(profile):
    s1, s2 = -1.5, 0.3
    f1, f2 = profile.f2(0, s1), profile.f2(0, s2)
    assert c_n(profile, 0, s1, s2) == pytest.approx(
        profile.F2(s1) * profile.F2(s2)
    )
    assert c_n(profile, 2, s1, s2) == pytest.approx(f1 * f2)
    expected = (s1 + s2) * f1 * f2 + 0.5 * profile.f2(1, s1) * profile.f2(
        1, s2
    )
    assert c_n(profile, 4, s1, s2) == pytest.approx(expected, rel=1e-12)


def test_cn_order_limit(profile):
    with pytest.raises(InvalidArgumentError):
        c_n(profile, 10, 0.0, 0.0)
    with pytest.raises(InvalidArgumentError):
        c_n(profile, 3, 0.0, 0.0)


@pytest.mark.parametrize(
    "n, expected, tol",
    [
        (2, 1.0, 1e-8),
        (4, 2.0 * -1.771086807411601626, 1e-6),
        (6, 18.355714809065487, 1e-6),
        (8, -110.863383378407421, 1e-4),
    ],
)
def test_integrated_cn(profile, n, expected, tol):
    assert integrate_cn(profile, n) == pytest.approx(expected, abs=tol)


def test_integrated_cn_rejects_zeroth_order(profile):
    with pytest.raises(InvalidArgumentError):
        integrate_cn(profile, 0)


def test_large_t_joint(profile):
    s1, s2 = -2.0, 0.0
    product = profile.F2(s1) * profile.F2(s2)
    assert joint_asymptotic(profile, 1e3, s1, s2) == pytest.approx(
        product, abs=1e-6
    )
    assert joint_asymptotic(profile, 20.0, s1, s2, N=0) == pytest.approx(
        product
    )


def test_two_point_terms(profile):
    approx = TwoPointApprox(profile, order=6)
    terms = approx.terms(10.0, -1.0, 0.5)
    assert len(terms) == 4
    assert terms[0] == pytest.approx(profile.F2(-1.0) * profile.F2(0.5))
    assert terms[1] == pytest.approx(
        profile.f2(0, -1.0) * profile.f2(0, 0.5) / 100.0
    )
    assert approx.raw(10.0, -1.0, 0.5) == pytest.approx(sum(terms))
    assert approx.coefficient(3, -1.0, 0.5) == 0.0
    with pytest.raises(InvalidArgumentError):
        approx.terms(0.0, -1.0, 0.5)


def test_two_point_order_validation(profile):
    with pytest.raises(InvalidArgumentError):
        TwoPointApprox(profile, order=5)
    with pytest.raises(InvalidArgumentError):
        TwoPointApprox(profile, order=10)


def test_clamped(profile):
    approx = TwoPointApprox(profile)
    for t in (0.3, 1.0, 5.0):
        value = approx.clamped(t, -1.8, -1.8)
        assert 0.0 <= value <= 1.0
    assert approx.clamped(30.0, -1.0, 0.0) == approx.raw(30.0, -1.0, 0.0)


def test_tenth_order_pair_term(profile):
    forward = tenth_order_pair_term(profile, -2.0, 1.0)
    backward = tenth_order_pair_term(profile, 1.0, -2.0)
    assert forward == pytest.approx(backward, rel=1e-13)
    assert np.isfinite(forward)


@pytest.mark.parametrize("s1, s2", [(-2.0, 1.0), (-3.5, -1.0), (0.0, 0.5)])
def test_tenth_order_pair_term_matches_utable(profile, utable, s1, s2):
    def abc(s):
        def u(j, k):
            return float(utable.u(j, k)(s))

        F2 = float(profile.F2(s))
        return (
            identities._a(u) * F2,
            identities._b(u) * F2,
            identities._c(u) * F2,
        )

    a1, b1, c1 = abc(s1)
    a2, b2, c2 = abc(s2)
    expected = 2.0 * a1 * b2 + 2.0 * a2 * b1 + 2.0 * c1 * c2
    value = tenth_order_pair_term(profile, s1, s2)
    assert value == pytest.approx(expected, abs=1e-9)
