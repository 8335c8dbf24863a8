"""
Taylor Jets - Truncated univariate Taylor arithmetic for exact directional derivatives

A Jet holds the coefficients c_0..c_k of g(t) = g(0) + c_1 t + ... + c_k t^k for a
batch of directions at once: ``coeffs`` has shape ``(order + 1, *batch)``.
Propagating jets through a formula yields its derivatives along each direction
exactly, up to rounding; D^k g = k! c_k.
"""

from math import factorial
from numbers import Real
from typing import Union

import numpy as np

ORDER = 3

JetLike = Union["Jet", float]


class Jet:
    """Truncated Taylor series with batched coefficients"""

    # Keep numpy from broadcasting over Jet operands on the right-hand side.
    __array_ufunc__ = None
    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        self.coeffs = np.asarray(coeffs, dtype=float)

    @classmethod
    def variable(cls, value, direction, order: int = ORDER) -> "Jet":
        """Jet of t -> value + t * direction"""
        value, direction = np.broadcast_arrays(
            np.asarray(value, dtype=float), np.asarray(direction, dtype=float)
        )
        coeffs = np.zeros((order + 1,) + value.shape)
        coeffs[0] = value
        if order >= 1:
            coeffs[1] = direction
        return cls(coeffs)

    @classmethod
    def constant(cls, value, order: int = ORDER, shape: tuple = ()) -> "Jet":
        coeffs = np.zeros((order + 1,) + tuple(shape))
        coeffs[0] = value
        return cls(coeffs)

    @property
    def order(self) -> int:
        return self.coeffs.shape[0] - 1

    @property
    def value(self) -> np.ndarray:
        return self.coeffs[0]

    def derivative(self, k: int) -> np.ndarray:
        """k-th derivative along the direction at t = 0"""
        return self.coeffs[k] * factorial(k)

    # arithmetic

    def __add__(self, other):
        if isinstance(other, Jet):
            return Jet(self.coeffs + other.coeffs)
        if isinstance(other, Real):
            coeffs = self.coeffs.copy()
            coeffs[0] = coeffs[0] + other
            return Jet(coeffs)
        return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        return Jet(-self.coeffs)

    def __pos__(self):
        return self

    def __sub__(self, other):
        if isinstance(other, (Jet, Real)):
            return self + (-other)
        return NotImplemented

    def __rsub__(self, other):
        if isinstance(other, Real):
            return (-self) + other
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, Real):
            return Jet(self.coeffs * other)
        if not isinstance(other, Jet):
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        shape = np.broadcast_shapes(a.shape[1:], b.shape[1:])
        out = np.zeros((a.shape[0],) + shape)
        for k in range(a.shape[0]):
            for i in range(k + 1):
                out[k] = out[k] + a[i] * b[k - i]
        return Jet(out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Real):
            return Jet(self.coeffs / other)
        if not isinstance(other, Jet):
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        shape = np.broadcast_shapes(a.shape[1:], b.shape[1:])
        q = np.zeros((a.shape[0],) + shape)
        for k in range(a.shape[0]):
            acc = a[k]
            for i in range(1, k + 1):
                acc = acc - b[i] * q[k - i]
            q[k] = acc / b[0]
        return Jet(q)

    def __rtruediv__(self, other):
        if isinstance(other, Real):
            return Jet.constant(other, self.order, self.coeffs.shape[1:]) / self
        return NotImplemented

    def __pow__(self, exponent):
        if not isinstance(exponent, Real):
            return NotImplemented
        if float(exponent).is_integer():
            power = int(exponent)
            if power < 0:
                return 1.0 / (self ** (-power))
            result = Jet.constant(1.0, self.order, self.coeffs.shape[1:])
            base = self
            # square-and-multiply
            while power:
                if power & 1:
                    result = result * base
                power >>= 1
                if power:
                    base = base * base
            return result
        return self._real_power(float(exponent))

    def _real_power(self, p: float) -> "Jet":
        a = self.coeffs
        r = np.zeros_like(a)
        r[0] = a[0] ** p
        for k in range(1, a.shape[0]):
            acc = np.zeros_like(a[0])
            for j in range(1, k + 1):
                acc = acc + ((p + 1.0) * j - k) * a[j] * r[k - j]
            r[k] = acc / (k * a[0])
        return Jet(r)

    def exp(self) -> "Jet":
        a = self.coeffs
        e = np.zeros_like(a)
        e[0] = np.exp(a[0])
        for k in range(1, a.shape[0]):
            acc = np.zeros_like(a[0])
            for j in range(1, k + 1):
                acc = acc + j * a[j] * e[k - j]
            e[k] = acc / k
        return Jet(e)

    def sqrt(self) -> "Jet":
        return self._real_power(0.5)

    def is_finite(self) -> bool:
        return bool(np.all(np.isfinite(self.coeffs)))

    def __repr__(self) -> str:
        return f"Jet(order={self.order}, batch={self.coeffs.shape[1:]})"


def exp(value: JetLike) -> JetLike:
    if isinstance(value, Jet):
        return value.exp()
    return float(np.exp(value))


def sqrt(value: JetLike) -> JetLike:
    if isinstance(value, Jet):
        return value.sqrt()
    return float(np.sqrt(value))


def value_of(value: JetLike) -> np.ndarray:
    """Zeroth coefficient of a jet, or the float itself"""
    if isinstance(value, Jet):
        return value.value
    return np.asarray(value, dtype=float)
