"""
Test the six Randers-changed families against hand values and the jet oracles
"""
import numpy as np
import pytest

from services.base_metrics import MetricField, OneFormField, base_bundle
from services.errors import DomainViolation, InputError
from services.randers_change import (FamilyName, FamilySelector, cartan_bar, changed_angular_metric,
                                     domain_check, fbar, fbar_field, fbar_y_gradient, gbar, phi_spec,
                                     rho_coefficients)
from services.tensor_core import gradient, hessian_half_square, max_abs, third_deriv_quarter
from tests.conftest import ALL_FAMILIES, SWEEP_COUNT, admissible_points, family_id

KROPINA = FamilySelector(FamilyName.KROPINA)
SQUARE = FamilySelector(FamilyName.SQUARE)
MATSUMOTO = FamilySelector(FamilyName.MATSUMOTO)
EXPONENTIAL = FamilySelector(FamilyName.EXPONENTIAL)


def kropina_bundle():
    return base_bundle(MetricField.constant(np.eye(2)), OneFormField.constant([0.1, 0.0]), [0.0, 0.0], [1.0, 0.0])


@pytest.mark.parametrize(
    "family, F, beta, expected",
    [
        (KROPINA, 1.0, 0.1, 10.1),
        (EXPONENTIAL, 2.0, 0.0, 2.0),
        (MATSUMOTO, 1.0, 0.5, 2.5),
        (SQUARE, 1.0, -0.1, 0.71),
    ]
)
def test_fbar_values(family, F, beta, expected):
    assert fbar(family, F, beta) == pytest.approx(expected)


@pytest.mark.parametrize(
    "family, F, beta, condition",
    [
        (KROPINA, 1.0, 0.0, "β = 0"),
        (KROPINA, 1.0, -0.2, "β < 0"),
        (MATSUMOTO, 1.0, 1.0, "F = β"),
        (FamilySelector(FamilyName.INFINITE_SERIES), 1.0, 1.0, "β = F"),
    ]
)
def test_domain_violations(family, F, beta, condition):
    check = domain_check(family, F, beta)
    assert not check.ok
    assert check.condition == condition
    with pytest.raises(DomainViolation) as info:
        fbar(family, F, beta)
    assert info.value.condition == condition


def test_square_negative_beta_is_admissible():
    assert domain_check(SQUARE, 1.0, -0.1).ok


def test_kropina_gradient_example():
    bundle = kropina_bundle()
    grad = fbar_y_gradient(KROPINA, bundle, bundle.b)
    np.testing.assert_allclose(grad, [10.1, 0.0], rtol=1e-14)
    assert grad @ bundle.y == pytest.approx(10.1)


def test_kropina_rho_and_gbar_example():
    bundle = kropina_bundle()
    rho = rho_coefficients(KROPINA, bundle.F, bundle.beta)
    np.testing.assert_allclose(rho.as_tuple(), (202.0, -4000.0, 400.0, 30001.0), rtol=1e-12)
    g = gbar(KROPINA, bundle, bundle.b)
    assert g[0, 0] == pytest.approx(102.01, rel=1e-12)
    assert g[0, 0] == pytest.approx(10.1 ** 2, rel=1e-12)


@pytest.mark.parametrize(
    "family, F, beta, expected",
    [
        (KROPINA, 1.0, 1.0, (4.0, -4.0, 4.0, 4.0)),
        (SQUARE, 1.0, 0.0, (1.0, 3.0, 0.0, 11.0)),
    ]
)
def test_rho_values(family, F, beta, expected):
    np.testing.assert_allclose(rho_coefficients(family, F, beta).as_tuple(), expected, atol=1e-14)


@pytest.mark.parametrize("m", [0.5, 2.0, 3.0])
def test_generalized_kropina_rho_at_unit_ratio(m):
    rho = rho_coefficients(FamilySelector(FamilyName.GENERALIZED_KROPINA, m), 1.0, 1.0)
    assert rho.rho0 == pytest.approx(2.0 * (m + 1.0))
    assert rho.rho1 == pytest.approx(-(m + 1.0) * (3.0 * m - 1.0))


def test_rho_m_override():
    family = FamilySelector(FamilyName.GENERALIZED_KROPINA, 2.0)
    np.testing.assert_allclose(rho_coefficients(family, 1.0, 0.5, m=1.0).as_tuple(),
                               rho_coefficients(KROPINA, 1.0, 0.5).as_tuple(), rtol=1e-12)


@pytest.mark.parametrize("m", [0.0, -1.0])
def test_generalized_kropina_rejects_degenerate_m(m):
    with pytest.raises(InputError):
        FamilySelector(FamilyName.GENERALIZED_KROPINA, m)


def test_unknown_family():
    with pytest.raises(InputError):
        FamilySelector.parse("randers")


@pytest.mark.parametrize("family", [SQUARE, EXPONENTIAL], ids=family_id)
def test_vanishing_one_form_reduces_to_base(family, rng):
    q = rng.standard_normal((3, 3))
    a = q @ q.T + np.eye(3)
    bundle = base_bundle(MetricField.constant(a), OneFormField.constant(np.zeros(3)), np.zeros(3),
                         rng.standard_normal(3))
    np.testing.assert_allclose(gbar(family, bundle, bundle.b), a, rtol=1e-12, atol=1e-12)
    np.testing.assert_allclose(fbar_y_gradient(family, bundle, bundle.b), bundle.ell, rtol=1e-12, atol=1e-14)
    assert max_abs(cartan_bar(family, bundle, bundle.b)) <= 1e-12


@pytest.mark.parametrize("n", [2, 3, 4])
@pytest.mark.parametrize("family", ALL_FAMILIES, ids=family_id)
def test_closed_forms_match_oracles(family, n):
    a, b, points = admissible_points(family, n, count=SWEEP_COUNT)
    field_ = fbar_field(family, a, b)
    for x, y in points:
        bundle = base_bundle(a, b, x, y)
        g_closed = gbar(family, bundle, bundle.b)
        c_closed = cartan_bar(family, bundle, bundle.b)
        grad = fbar_y_gradient(family, bundle, bundle.b)

        g_oracle = hessian_half_square(field_, x, y)
        c_oracle = third_deriv_quarter(field_, x, y)
        assert max_abs(grad - gradient(field_, x, y)) <= 1e-10 * (1.0 + max_abs(grad))
        assert max_abs(g_closed - g_oracle) <= 1e-8 * (1.0 + max_abs(g_oracle))
        assert max_abs(c_closed - c_oracle) <= 1e-7 * (1.0 + max_abs(c_oracle))

        # Euler relations and the y-annihilation of the Cartan tensor
        value = fbar(family, bundle.F, bundle.beta)
        assert y @ g_closed @ y == pytest.approx(value ** 2, rel=1e-10)
        assert grad @ y == pytest.approx(value, rel=1e-12)
        assert max_abs(np.einsum("ijk,k->ij", c_closed, y)) <= 1e-9 * (1.0 + max_abs(c_closed)) * max(1.0, max_abs(y))
        np.testing.assert_allclose(changed_angular_metric(family, bundle, bundle.b) @ y, 0.0,
                                   atol=1e-9 * (1.0 + max_abs(g_closed)) * max(1.0, max_abs(y)))


@pytest.mark.parametrize("family", ALL_FAMILIES, ids=family_id)
def test_gbar_is_zero_homogeneous(family):
    a, b, points = admissible_points(family, 3, count=2)
    for x, y in points:
        one = base_bundle(a, b, x, y)
        two = base_bundle(a, b, x, 2.5 * y)
        g_one = gbar(family, one, one.b)
        np.testing.assert_allclose(gbar(family, two, two.b), g_one, rtol=1e-10, atol=1e-10 * max_abs(g_one))


@pytest.mark.parametrize("family", ALL_FAMILIES, ids=family_id)
def test_phi_shape_reproduces_fbar(family):
    a, b, points = admissible_points(family, 2, count=2)
    phi = phi_spec(family)
    for x, y in points:
        bundle = base_bundle(a, b, x, y)
        assert bundle.F * phi.phi(bundle.s) == pytest.approx(fbar(family, bundle.F, bundle.beta), rel=1e-12)


def test_generalized_kropina_with_unit_exponent_is_kropina():
    family = FamilySelector(FamilyName.GENERALIZED_KROPINA, 1.0)
    a, b, points = admissible_points(KROPINA, 3)
    for x, y in points:
        bundle = base_bundle(a, b, x, y)
        np.testing.assert_allclose(gbar(family, bundle, bundle.b), gbar(KROPINA, bundle, bundle.b), rtol=1e-12)
        np.testing.assert_allclose(cartan_bar(family, bundle, bundle.b), cartan_bar(KROPINA, bundle, bundle.b),
                                   rtol=1e-12, atol=1e-14)


def test_exponential_cartan_coefficients_at_zero_beta():
    F = 2.0
    coeffs = EXPONENTIAL.change().cartan_coefficients(F, 0.0)
    assert coeffs.hm == pytest.approx(1.0 / F)
    assert coeffs.mmm == pytest.approx(7.0 / (2.0 * F))


def test_exponential_cartan_matches_oracle_at_zero_beta():
    a, b = MetricField.constant(np.eye(2)), OneFormField.constant([0.0, 0.4])
    x, y = [0.0, 0.0], [1.5, 0.0]
    bundle = base_bundle(a, b, x, y)
    assert bundle.beta == 0.0
    oracle = third_deriv_quarter(fbar_field(EXPONENTIAL, a, b), x, y)
    np.testing.assert_allclose(cartan_bar(EXPONENTIAL, bundle, bundle.b), oracle, atol=1e-9)


def test_cartan_vanishes_when_one_form_is_parallel():
    # b proportional to y_lower gives m = 0, and the base Cartan tensor is zero
    bundle = base_bundle(MetricField.constant(np.eye(2)), OneFormField.constant([0.4, 0.2]), [0.0, 0.0], [2.0, 1.0])
    np.testing.assert_allclose(bundle.m, 0.0, atol=1e-15)
    for family in (KROPINA, SQUARE, MATSUMOTO, EXPONENTIAL):
        assert max_abs(cartan_bar(family, bundle, bundle.b)) < 1e-12


def test_fbar_field_checks_domain():
    field_ = fbar_field(KROPINA, MetricField.constant(np.eye(2)), OneFormField.constant([0.0, 1.0]))
    with pytest.raises(DomainViolation):
        field_.value([0.0, 0.0], [1.0, 0.0])
