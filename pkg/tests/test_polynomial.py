"""
Test multivariate polynomials and their exact partials
"""
import pytest

from services.polynomial import Polynomial
from services.taylor import Jet


@pytest.fixture
def cubic():
    # 3 x1^2 x2 + x2
    return Polynomial({(2, 1): 3.0, (0, 1): 1.0}, 2)


def test_evaluate(cubic):
    assert cubic([2.0, 3.0]) == pytest.approx(39.0)
    assert not cubic.is_constant


def test_partials(cubic):
    assert cubic.partial(0) == Polynomial({(1, 1): 6.0}, 2)
    assert cubic.partial(1) == Polynomial({(2, 0): 3.0, (0, 0): 1.0}, 2)
    assert cubic.partial(0).partial(0).partial(0) == Polynomial({}, 2)


def test_from_terms_merges_and_drops_zeros():
    p = Polynomial.from_terms([((1, 0), 2.0), ((1, 0), 1.0), ((0, 1), 0.0)], 2)
    assert p.terms == {(1, 0): 3.0}
    q = Polynomial.from_terms([((1, 0), 1.0), ((1, 0), -1.0)], 2)
    assert q.terms == {}
    assert q.is_constant and q([3.0, -2.0]) == 0.0


def test_constant():
    p = Polynomial.constant(2.5, 3)
    assert p.is_constant
    assert p([7.0, -1.0, 4.0]) == 2.5
    assert p.partial(1).terms == {}


def test_equality_and_hash():
    p = Polynomial({(1, 0): 1.0, (0, 1): 2.0}, 2)
    q = Polynomial.from_terms([((0, 1), 2.0), ((1, 0), 1.0)], 2)
    assert p == q
    assert hash(p) == hash(q)
    assert p != Polynomial({(1, 0): 1.0}, 2)


@pytest.mark.parametrize("terms", [{(1,): 1.0}, {(1, -1): 1.0}])
def test_rejects_bad_exponents(terms):
    with pytest.raises(ValueError):
        Polynomial(terms, 2)


def test_jet_evaluation_gives_directional_derivative(cubic):
    # d/dt p(2 + t, 3) = 6 x1 x2 = 36
    x = [Jet.variable(2.0, 1.0), 3.0]
    result = cubic(x)
    assert result.value == pytest.approx(39.0)
    assert result.derivative(1) == pytest.approx(36.0)
    assert result.derivative(2) == pytest.approx(18.0)
