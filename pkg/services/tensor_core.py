"""
Tensor Core - Differentiation oracles and symmetric tensor helpers

y-derivatives (to third order) are propagated exactly with Taylor jets and
assembled into full tensors by polarization; x-derivatives are exact for
fields that accept jets in x and central differences otherwise.
"""

from dataclasses import dataclass
from itertools import combinations, combinations_with_replacement, permutations
from math import factorial
from typing import Any, Callable, Optional, Sequence, Tuple

import numpy as np

from services.errors import DomainViolation, NumericError
from services.taylor import ORDER, Jet

Covector = np.ndarray
SymMatrix = np.ndarray
Sym3Tensor = np.ndarray

FD_STEP_SCALE = np.cbrt(np.finfo(float).eps)


@dataclass(frozen=True)
class ScalarField:
    """A real function f(x, y) evaluable on floats or Taylor jets"""

    evaluate: Callable[[Sequence[Any], Sequence[Any]], Any]
    exact_x: bool = True
    name: str = "field"

    def __call__(self, x: Sequence[Any], y: Sequence[Any]) -> Any:
        return self.evaluate(x, y)

    def value(self, x, y) -> float:
        result = self.evaluate([float(v) for v in x], [float(v) for v in y])
        if isinstance(result, Jet):
            result = result.value
        result = float(result)
        if not np.isfinite(result):
            raise NumericError(f"{self.name} is not finite at the requested point")
        return result


def as_vector(values, name: str = "vector") -> np.ndarray:
    vector = np.asarray(values, dtype=float).reshape(-1)
    if not np.all(np.isfinite(vector)):
        raise NumericError(f"{name} has non-finite components")
    return vector


def check_tangent(y: np.ndarray) -> None:
    if not np.any(y):
        raise DomainViolation("slit tangent bundle violated", condition="y = 0")


def _along(f: ScalarField, x: np.ndarray, y: np.ndarray,
           dx: Optional[np.ndarray], dy: Optional[np.ndarray]) -> np.ndarray:
    """Taylor coefficients of t -> f(x + t dx, y + t dy) for a batch of directions.

    dx and dy have shape (n, K); returns an array of shape (ORDER + 1, K).
    """
    batch = (dx if dx is not None else dy).shape[1]
    if dx is None:
        xs = [float(v) for v in x]
    else:
        xs = [Jet.variable(x[i], dx[i]) for i in range(len(x))]
    if dy is None:
        ys = [Jet.variable(y[i], np.zeros(batch)) for i in range(len(y))]
    else:
        ys = [Jet.variable(y[i], dy[i]) for i in range(len(y))]
    result = f(xs, ys)
    if not isinstance(result, Jet):
        result = Jet.constant(float(result), ORDER, (batch,))
    if not result.is_finite():
        raise NumericError(f"non-finite derivative while differentiating {f.name}")
    return np.array(np.broadcast_to(result.coeffs, (ORDER + 1, batch)))


def _symmetric_derivative(f: ScalarField, x: np.ndarray, y: np.ndarray, order: int) -> np.ndarray:
    """Full symmetric tensor of order-th y-derivatives via polarization.

    T(e_i1, ..., e_ik) = (1/k!) sum over non-empty position subsets S of
    (-1)^(k - |S|) D^k(sum_{p in S} e_ip).
    """
    n = len(y)
    indices = list(combinations_with_replacement(range(n), order))
    directions = sorted({
        tuple(sorted(idx[p] for p in positions))
        for idx in indices
        for size in range(1, order + 1)
        for positions in combinations(range(order), size)
    })
    dy = np.zeros((n, len(directions)))
    for column, direction in enumerate(directions):
        for i in direction:
            dy[i, column] += 1.0
    derivs = _along(f, x, y, None, dy)[order] * factorial(order)
    lookup = {direction: derivs[column] for column, direction in enumerate(directions)}

    out = np.empty((n,) * order)
    for idx in indices:
        total = 0.0
        for size in range(1, order + 1):
            sign = -1.0 if (order - size) % 2 else 1.0
            for positions in combinations(range(order), size):
                total += sign * lookup[tuple(sorted(idx[p] for p in positions))]
        value = total / factorial(order)
        for perm in set(permutations(idx)):
            out[perm] = value
    return out


def _squared(f: ScalarField, scale: float, name: str) -> ScalarField:
    def evaluate(xs, ys):
        v = f(xs, ys)
        return scale * (v * v)
    return ScalarField(evaluate, exact_x=f.exact_x, name=name)


def gradient(f: ScalarField, x, y) -> Covector:
    """Exact y-gradient f_{y^i}"""
    x, y = as_vector(x, "x"), as_vector(y, "y")
    check_tangent(y)
    return _along(f, x, y, None, np.eye(len(y)))[1]


def hessian_half_square(f: ScalarField, x, y) -> SymMatrix:
    """g_ij = (f^2 / 2)_{y^i y^j}"""
    x, y = as_vector(x, "x"), as_vector(y, "y")
    check_tangent(y)
    return _symmetric_derivative(_squared(f, 0.5, f"{f.name}^2/2"), x, y, 2)


def third_deriv_quarter(f: ScalarField, x, y) -> Sym3Tensor:
    """C_ijk = (f^2)_{y^i y^j y^k} / 4"""
    x, y = as_vector(x, "x"), as_vector(y, "y")
    check_tangent(y)
    return _symmetric_derivative(_squared(f, 0.25, f"{f.name}^2/4"), x, y, 3)


def flatness_pair(f: ScalarField, x, y) -> Tuple[Covector, Covector]:
    """Return (f_{x^l}, f_{x^k y^l} y^k)"""
    x, y = as_vector(x, "x"), as_vector(y, "y")
    check_tangent(y)
    n = len(y)
    if f.exact_x:
        identity = np.eye(n)
        zeros = np.zeros((n, n))
        f_x = _along(f, x, y, identity, zeros)[1]

        # t -> f(x + t y, y + t e_l): second coefficient holds y^k f_{x^k y^l}
        # plus the pure xx and yy parts, which the other two groups cancel.
        dx = np.hstack([np.tile(y[:, None], (1, n)), y[:, None], zeros])
        dy = np.hstack([identity, np.zeros((n, 1)), identity])
        c2 = _along(f, x, y, dx, dy)[2]
        mixed = c2[:n] - c2[n] - c2[n + 1:]
    else:
        f_x = np.empty(n)
        grads_plus, grads_minus, steps = [], [], []
        for k in range(n):
            h = FD_STEP_SCALE * max(1.0, abs(x[k]))
            shift = np.zeros(n)
            shift[k] = h
            f_x[k] = (f.value(x + shift, y) - f.value(x - shift, y)) / (2.0 * h)
            grads_plus.append(gradient(f, x + shift, y))
            grads_minus.append(gradient(f, x - shift, y))
            steps.append(h)
        mixed = np.zeros(n)
        for k in range(n):
            mixed = mixed + y[k] * (grads_plus[k] - grads_minus[k]) / (2.0 * steps[k])
    if not (np.all(np.isfinite(f_x)) and np.all(np.isfinite(mixed))):
        raise NumericError(f"non-finite x-derivative of {f.name}")
    return f_x, mixed


def homogeneity_residual(f: ScalarField, x, y, lam: float) -> float:
    """|f(x, lam y) - lam f(x, y)|"""
    if not lam > 0:
        raise DomainViolation(f"homogeneity factor must be positive, got {lam}", condition="lambda <= 0")
    x, y = as_vector(x, "x"), as_vector(y, "y")
    check_tangent(y)
    return abs(f.value(x, lam * y) - lam * f.value(x, y))


def cyclic_product(h: SymMatrix, m: Covector) -> Sym3Tensor:
    """h_ij m_k + h_jk m_i + h_ki m_j"""
    return (np.einsum("ij,k->ijk", h, m)
            + np.einsum("jk,i->ijk", h, m)
            + np.einsum("ki,j->ijk", h, m))


def triple_product(m: Covector) -> Sym3Tensor:
    return np.einsum("i,j,k->ijk", m, m, m)


def symmetric_tensor3(tensor: np.ndarray) -> Sym3Tensor:
    """Fill every permutation of (i, j, k) from the sorted-index component"""
    n = tensor.shape[0]
    out = np.empty_like(tensor)
    for idx in combinations_with_replacement(range(n), 3):
        value = tensor[idx]
        for perm in set(permutations(idx)):
            out[perm] = value
    return out


def max_abs(values) -> float:
    values = np.asarray(values, dtype=float)
    return float(np.max(np.abs(values))) if values.size else 0.0
