"""
Test the differentiation oracles and tensor helpers
"""
import numpy as np
import pytest

from services.base_metrics import MetricField, OneFormField, alpha_field, beta_field, quadratic_field
from services.errors import DomainViolation
from services.polynomial import Polynomial
from services.taylor import sqrt
from services.tensor_core import (ScalarField, cyclic_product, flatness_pair, gradient, hessian_half_square,
                                  homogeneity_residual, max_abs, symmetric_tensor3, third_deriv_quarter,
                                  triple_product)


def euclidean() -> ScalarField:
    def evaluate(xs, ys):
        total = 0.0
        for v in ys:
            total = total + v * v
        return sqrt(total)
    return ScalarField(evaluate, name="euclidean")


def test_euclidean_hessian_is_identity():
    g = hessian_half_square(euclidean(), [0.0, 0.0], [1.0, 0.0])
    np.testing.assert_allclose(g, np.eye(2), atol=1e-12)


def test_euclidean_gradient():
    np.testing.assert_allclose(gradient(euclidean(), [0.0, 0.0], [3.0, 4.0]), [0.6, 0.8], rtol=1e-14)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_riemannian_tensors(rng, n):
    q = rng.standard_normal((n, n))
    a = q @ q.T + n * np.eye(n)
    field_ = alpha_field(MetricField.constant(a))
    x, y = np.zeros(n), rng.standard_normal(n)
    np.testing.assert_allclose(hessian_half_square(field_, x, y), a, rtol=1e-12, atol=1e-12)
    assert max_abs(third_deriv_quarter(field_, x, y)) < 1e-11


def test_third_derivative_is_symmetric_and_annihilates_y(rng):
    # quartic-root norm: not Riemannian, so its Cartan tensor does not vanish
    def evaluate(xs, ys):
        total = 0.0
        for v in ys:
            total = total + v ** 4
        return sqrt(sqrt(total))
    field_ = ScalarField(evaluate, name="l4")
    y = np.array([1.0, 0.5, -0.3])
    c = third_deriv_quarter(field_, np.zeros(3), y)
    assert max_abs(c) > 1e-3
    np.testing.assert_allclose(c, np.transpose(c, (1, 0, 2)), atol=1e-14)
    np.testing.assert_allclose(c, np.transpose(c, (2, 1, 0)), atol=1e-14)
    assert max_abs(np.einsum("ijk,k->ij", c, y)) < 1e-12


def test_flatness_pair_linear_one_form():
    # beta = x1 y1
    b = OneFormField.from_polynomials([Polynomial({(1, 0): 1.0}, 2), Polynomial.constant(0.0, 2)])
    f_x, mixed = flatness_pair(beta_field(b), [0.0, 0.0], [1.0, 1.0])
    np.testing.assert_allclose(f_x, [1.0, 0.0], atol=1e-14)
    np.testing.assert_allclose(mixed, [1.0, 0.0], atol=1e-14)


def test_flatness_pair_finite_difference_agrees():
    a = MetricField.from_polynomials([
        [Polynomial({(0, 0): 1.0, (2, 0): 0.3}, 2), Polynomial({(1, 1): 0.1}, 2)],
        [Polynomial({(1, 1): 0.1}, 2), Polynomial({(0, 0): 2.0, (0, 1): 0.2}, 2)],
    ])
    exact = quadratic_field(a)
    fallback = ScalarField(exact.evaluate, exact_x=False, name="A-fd")
    x, y = [0.4, -0.2], [1.0, 0.7]
    for got, want in zip(flatness_pair(fallback, x, y), flatness_pair(exact, x, y)):
        np.testing.assert_allclose(got, want, rtol=1e-6, atol=1e-8)


def test_flatness_pair_vanishes_without_x_dependence():
    f_x, mixed = flatness_pair(quadratic_field(MetricField.constant(np.diag([2.0, 3.0]))), [0.5, 0.5], [1.0, 2.0])
    assert max_abs(f_x) < 1e-14
    assert max_abs(mixed) < 1e-14


def test_homogeneity():
    assert homogeneity_residual(euclidean(), [0.0, 0.0], [3.0, 4.0], 2.0) == pytest.approx(0.0, abs=1e-14)
    with pytest.raises(DomainViolation):
        homogeneity_residual(euclidean(), [0.0, 0.0], [3.0, 4.0], 0.0)


def test_zero_tangent_rejected():
    with pytest.raises(DomainViolation) as info:
        gradient(euclidean(), [0.0, 0.0], [0.0, 0.0])
    assert info.value.condition == "y = 0"


def test_cyclic_and_triple_products_are_symmetric(rng):
    q = rng.standard_normal((3, 3))
    h = q + q.T
    m = rng.standard_normal(3)
    for tensor in (cyclic_product(h, m), triple_product(m)):
        np.testing.assert_allclose(tensor, np.transpose(tensor, (1, 0, 2)), atol=1e-14)
        np.testing.assert_allclose(tensor, np.transpose(tensor, (0, 2, 1)), atol=1e-14)


def test_symmetric_tensor3_copies_sorted_component():
    t = np.arange(8, dtype=float).reshape(2, 2, 2)
    s = symmetric_tensor3(t)
    assert s[1, 0, 0] == s[0, 1, 0] == s[0, 0, 1] == t[0, 0, 1]
    assert s[1, 1, 0] == t[0, 1, 1]


def test_max_abs():
    assert max_abs([]) == 0.0
    assert max_abs([[-3.0, 2.0]]) == 3.0
