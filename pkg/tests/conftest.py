"""
Shared fixtures: families, field builders and seeded admissible samples
"""

from itertools import combinations_with_replacement

import numpy as np
import pytest

from services.base_metrics import MetricField, OneFormField
from services.polynomial import Polynomial
from services.randers_change import FamilyName, FamilySelector
from services.sampling import sample_admissible

ALL_FAMILIES = [
    FamilySelector(FamilyName.KROPINA),
    FamilySelector(FamilyName.GENERALIZED_KROPINA, 2.0),
    FamilySelector(FamilyName.GENERALIZED_KROPINA, 0.5),
    FamilySelector(FamilyName.SQUARE),
    FamilySelector(FamilyName.MATSUMOTO),
    FamilySelector(FamilyName.EXPONENTIAL),
    FamilySelector(FamilyName.INFINITE_SERIES),
]

# a-norm of b that lets the family's sampling window be reached
B_NORMS = {
    FamilyName.KROPINA: 0.6,
    FamilyName.GENERALIZED_KROPINA: 0.6,
    FamilyName.SQUARE: 0.5,
    FamilyName.MATSUMOTO: 0.5,
    FamilyName.EXPONENTIAL: 0.5,
    FamilyName.INFINITE_SERIES: 2.5,
}

SWEEP_COUNT = 200
FIELD_SWEEP_COUNT = 100


def family_id(family: FamilySelector) -> str:
    return family.label


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_constant_fields(rng, n: int, family: FamilySelector):
    """Constant positive-definite a and a constant b of family-suited a-norm"""
    q = rng.standard_normal((n, n))
    a = q @ q.T / n + np.eye(n)
    b = rng.standard_normal(n)
    b *= B_NORMS[family.name] / np.sqrt(b @ np.linalg.solve(a, b))
    return MetricField.constant(a), OneFormField.constant(b)


def admissible_points(family: FamilySelector, n: int, count: int = 3, seed: int = 11):
    rng = np.random.default_rng(seed + n)
    a, b = random_constant_fields(rng, n, family)
    return a, b, sample_admissible(family, a, b, count, seed)


def _random_quadratic(rng, n: int, constant: float, scale: float) -> Polynomial:
    """constant plus random terms of degree one and two"""
    terms = {(0,) * n: constant}
    for degree in (1, 2):
        for combo in combinations_with_replacement(range(n), degree):
            exponents = [0] * n
            for i in combo:
                exponents[i] += 1
            terms[tuple(exponents)] = scale * rng.uniform(-1.0, 1.0)
    return Polynomial(terms, n)


def random_polynomial_fields(rng, n: int, family: FamilySelector, scale: float = 0.05):
    """x-dependent fields of degree two around a random constant pair; positive-definite on [-0.5, 0.5]^n"""
    a0, b0 = random_constant_fields(rng, n, family)
    g = a0.matrix(np.zeros(n))
    b = b0.vector(np.zeros(n))
    entries = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            entries[i][j] = entries[j][i] = _random_quadratic(rng, n, g[i, j], scale)
    one_form = [_random_quadratic(rng, n, b[i], scale) for i in range(n)]
    return MetricField.from_polynomials(entries), OneFormField.from_polynomials(one_form)


def polynomial_fields(n: int = 2, scale: float = 0.1):
    """a = diag(1, 1 + scale x1 x2), b = (scale x1, 0): x-dependent, degree two"""
    one = Polynomial.constant(1.0, n)
    zero = Polynomial.constant(0.0, n)
    mixed = Polynomial({(0,) * n: 1.0, (1, 1) + (0,) * (n - 2): scale}, n)
    entries = [[one if i == j else zero for j in range(n)] for i in range(n)]
    entries[1][1] = mixed
    b_entries = [Polynomial({(1,) + (0,) * (n - 1): scale}, n)] + [zero] * (n - 1)
    return MetricField.from_polynomials(entries), OneFormField.from_polynomials(b_entries)
