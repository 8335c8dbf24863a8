"""
Randers Change - The six Randers-changed metrics and their closed-form tensors

Each family writes F_bar = f(F, beta) + beta and supplies, as closed forms in
(F, beta):
  - the y-gradient coefficients (p, q) with F_bar_{y^i} = p l_i + q b_i,
  - rho_0..rho_3 with g_bar = rho_0 g + rho_1 (b l + l b) + rho_2 l l + rho_3 b b,
  - Cartan coefficients with C_bar = c_base C + c_hm (h m + cyc) + c_mmm m m m.
The closed forms are kept in their printed grouping, not re-simplified.
"""

import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass
from enum import Enum
from typing import Dict, Optional, Tuple

import numpy as np

from services.base_metrics import BaseBundle, MetricField, OneFormField, PhiSpec
from services.errors import DomainViolation, InputError
from services.taylor import exp, sqrt, value_of
from services.tensor_core import ScalarField, cyclic_product, symmetric_tensor3, triple_product

logger = logging.getLogger(__name__)

DOMAIN_EPS = 1e-12


class FamilyName(str, Enum):
    KROPINA = "kropina"
    GENERALIZED_KROPINA = "generalized-kropina"
    SQUARE = "square"
    MATSUMOTO = "matsumoto"
    EXPONENTIAL = "exponential"
    INFINITE_SERIES = "infinite-series"


@dataclass(frozen=True)
class FamilySelector:
    """One of the six families; m only matters for the generalized Kropina family"""

    name: FamilyName
    m: float = 2.0

    def __post_init__(self):
        object.__setattr__(self, "name", FamilyName(self.name))
        if self.name is FamilyName.GENERALIZED_KROPINA and self.m in (0.0, -1.0):
            raise InputError(f"generalized Kropina needs m not in {{0, -1}}, got m = {self.m}")

    @classmethod
    def parse(cls, name: str, m: Optional[float] = None) -> "FamilySelector":
        try:
            family = FamilyName(name)
        except ValueError:
            known = ", ".join(f.value for f in FamilyName)
            raise InputError(f"unknown family '{name}' (expected one of: {known})")
        return cls(family, 2.0 if m is None else float(m))

    @property
    def label(self) -> str:
        if self.name is FamilyName.GENERALIZED_KROPINA:
            return f"{self.name.value}(m={self.m:g})"
        return self.name.value

    def change(self) -> "RandersChange":
        if self.name is FamilyName.GENERALIZED_KROPINA:
            return GeneralizedKropinaChange(self.m)
        return _CHANGES[self.name]


@dataclass(frozen=True)
class DomainCheck:
    ok: bool
    condition: Optional[str] = None


@dataclass(frozen=True)
class Rho:
    rho0: float
    rho1: float
    rho2: float
    rho3: float

    def as_tuple(self) -> Tuple[float, float, float, float]:
        return (self.rho0, self.rho1, self.rho2, self.rho3)


@dataclass(frozen=True)
class CartanCoefficients:
    base: float
    hm: float
    mmm: float


class RandersChange(ABC):
    """Closed forms of one Randers-changed family"""

    name: FamilyName

    @abstractmethod
    def fbar(self, F, beta):
        """Value of the changed metric; accepts floats or Taylor jets"""

    @abstractmethod
    def gradient_coefficients(self, F: float, beta: float) -> Tuple[float, float]:
        """(p, q) with F_bar_{y^i} = p l_i + q b_i"""

    @abstractmethod
    def rho(self, F: float, beta: float) -> Rho:
        pass

    @abstractmethod
    def cartan_coefficients(self, F: float, beta: float) -> CartanCoefficients:
        pass

    @abstractmethod
    def phi_spec(self) -> PhiSpec:
        pass

    def _singular(self, F: float, beta: float) -> Optional[str]:
        """Name of the vanishing denominator, if any"""
        return None

    def domain_check(self, F: float, beta: float) -> DomainCheck:
        if not (np.isfinite(F) and np.isfinite(beta)) or F <= 0.0:
            return DomainCheck(False, "F <= 0")
        condition = self._singular(F, beta)
        if condition:
            return DomainCheck(False, condition)
        with np.errstate(all="ignore"):
            value = float(self.fbar(F, beta))
        if not np.isfinite(value) or value <= DOMAIN_EPS * F:
            return DomainCheck(False, "F_bar <= 0")
        return DomainCheck(True)


class KropinaChange(RandersChange):
    name = FamilyName.KROPINA

    def _singular(self, F, beta):
        if abs(beta) <= DOMAIN_EPS * F:
            return "β = 0"
        if beta < 0.0:
            return "β < 0"
        return None

    def fbar(self, F, beta):
        return F * F / beta + beta

    def gradient_coefficients(self, F, beta):
        return 2.0 * F / beta, -(F ** 2 - beta ** 2) / beta ** 2

    def rho(self, F, beta):
        return Rho(
            2.0 * (F ** 2 + beta ** 2) / beta ** 2,
            -4.0 * F ** 3 / beta ** 3,
            4.0 * F ** 2 / beta ** 2,
            3.0 * F ** 4 / beta ** 4 + 1.0,
        )

    def cartan_coefficients(self, F, beta):
        return CartanCoefficients(
            self.rho(F, beta).rho0,
            -2.0 * F ** 2 / beta ** 3,
            -6.0 * F ** 4 / beta ** 5,
        )

    def phi_spec(self):
        return PhiSpec(lambda s: 1.0 / s + s, lambda s: 1.0 - 1.0 / s ** 2, lambda s: 2.0 / s ** 3,
                       name=self.name.value)


class GeneralizedKropinaChange(RandersChange):
    name = FamilyName.GENERALIZED_KROPINA

    def __init__(self, m: float):
        self.m = float(m)

    def _singular(self, F, beta):
        if abs(beta) <= DOMAIN_EPS * F:
            return "β = 0"
        if beta < 0.0:
            return "β < 0"
        return None

    def fbar(self, F, beta):
        m = self.m
        return F ** (m + 1.0) / beta ** m + beta

    def gradient_coefficients(self, F, beta):
        m, t = self.m, F / beta
        return (m + 1.0) * t ** m, 1.0 - m * t ** (m + 1.0)

    def rho(self, F, beta):
        m, t = self.m, F / beta
        return Rho(
            (m + 1.0) * (t ** (2.0 * m) + t ** (m - 1.0)),
            -(m + 1.0) * (2.0 * m * t ** (2.0 * m + 1.0) + (m - 1.0) * t ** m),
            (m + 1.0) * (2.0 * m * t ** (2.0 * m) + (m - 1.0) * t ** (m - 1.0)),
            1.0 + m * (2.0 * m + 1.0) * t ** (2.0 * m + 2.0) + m * (m - 1.0) * t ** (m + 1.0),
        )

    def cartan_coefficients(self, F, beta):
        m, t = self.m, F / beta
        hm = -((m + 1.0) / 2.0) * (F ** (m - 1.0) / beta ** m) * (2.0 * m * t ** (m + 1.0) + (m - 1.0))
        mmm = -(m / 2.0) * (F ** (m + 1.0) / beta ** (m + 2.0)) * (
            (2.0 * m + 1.0) * (2.0 * m + 2.0) * t ** (m + 1.0) + m * m - 1.0)
        return CartanCoefficients(self.rho(F, beta).rho0, hm, mmm)

    def phi_spec(self):
        m = self.m
        return PhiSpec(
            lambda s: s ** (-m) + s,
            lambda s: 1.0 - m * s ** (-m - 1.0),
            lambda s: m * (m + 1.0) * s ** (-m - 2.0),
            name=f"{self.name.value}(m={m:g})",
        )


class SquareChange(RandersChange):
    name = FamilyName.SQUARE

    def fbar(self, F, beta):
        return (F + beta) ** 2 / F + beta

    def gradient_coefficients(self, F, beta):
        return 1.0 - beta ** 2 / F ** 2, 2.0 * beta / F + 3.0

    def rho(self, F, beta):
        s = beta / F
        return Rho(
            1.0 + 3.0 * s - 3.0 * s ** 3 - s ** 4,
            3.0 - 9.0 * s ** 2 - 4.0 * s ** 3,
            -3.0 * s + 9.0 * s ** 3 + 4.0 * s ** 4,
            11.0 + 18.0 * s + 6.0 * s ** 2,
        )

    def cartan_coefficients(self, F, beta):
        hm = 0.5 * (3.0 / F - 9.0 * beta ** 2 / F ** 3 - 4.0 * beta ** 3 / F ** 4)
        mmm = 9.0 / F + 6.0 * beta / F ** 2
        return CartanCoefficients(self.rho(F, beta).rho0, hm, mmm)

    def phi_spec(self):
        return PhiSpec(lambda s: (1.0 + s) ** 2 + s, lambda s: 2.0 * (1.0 + s) + 1.0, lambda s: 2.0,
                       name=self.name.value)


class MatsumotoChange(RandersChange):
    name = FamilyName.MATSUMOTO

    def _singular(self, F, beta):
        if abs(F - beta) <= DOMAIN_EPS * F:
            return "F = β"
        return None

    def fbar(self, F, beta):
        return F * F / (F - beta) + beta

    def gradient_coefficients(self, F, beta):
        d = F - beta
        return (F ** 2 - 2.0 * beta * F) / d ** 2, F ** 2 / d ** 2 + 1.0

    def rho(self, F, beta):
        d4 = (F - beta) ** 4
        b = beta
        return Rho(
            (F ** 4 - 2.0 * b * F ** 3 - 2.0 * b ** 2 * F ** 2 + 5.0 * b ** 3 * F - 2.0 * b ** 4) / d4,
            (2.0 * F ** 4 - 8.0 * b * F ** 3 + 3.0 * b ** 2 * F ** 2) / d4,
            (-2.0 * b * F ** 3 + 8.0 * b ** 2 * F ** 2 - 3.0 * b ** 3 * F) / d4,
            (6.0 * F ** 4 - 6.0 * b * F ** 3 + 6.0 * b ** 2 * F ** 2 - 4.0 * b ** 3 * F + b ** 4) / d4,
        )

    def cartan_coefficients(self, F, beta):
        d = F - beta
        hm = (2.0 * F ** 3 - 8.0 * beta * F ** 2 + 3.0 * beta ** 2 * F) / (2.0 * d ** 4)
        mmm = (9.0 * F ** 4 - 3.0 * beta * F ** 3) / d ** 5
        return CartanCoefficients(self.rho(F, beta).rho0, hm, mmm)

    def phi_spec(self):
        return PhiSpec(lambda s: 1.0 / (1.0 - s) + s, lambda s: 1.0 / (1.0 - s) ** 2 + 1.0,
                       lambda s: 2.0 / (1.0 - s) ** 3, name=self.name.value)


class ExponentialChange(RandersChange):
    name = FamilyName.EXPONENTIAL

    def fbar(self, F, beta):
        return F * exp(beta / F) + beta

    def gradient_coefficients(self, F, beta):
        s = beta / F
        E = float(np.exp(s))
        return (1.0 - s) * E, 1.0 + E

    def rho(self, F, beta):
        s = beta / F
        E = float(np.exp(s))
        bracket = -1.0 + s + s ** 2 + (-1.0 + 2.0 * s) * E
        return Rho(
            (E + s) * E * (1.0 - s),
            -E * bracket,
            s * E * bracket,
            1.0 + 2.0 * E ** 2 + (2.0 + s) * E,
        )

    def cartan_coefficients(self, F, beta):
        s = beta / F
        E = float(np.exp(s))
        hm = (E / (2.0 * F)) * (1.0 - s - s ** 2 + (1.0 - 2.0 * s) * E)
        mmm = (E / (2.0 * F)) * (3.0 + s + 4.0 * E)
        return CartanCoefficients(self.rho(F, beta).rho0, hm, mmm)

    def phi_spec(self):
        return PhiSpec(lambda s: np.exp(s) + s, lambda s: np.exp(s) + 1.0, np.exp, name=self.name.value)


class InfiniteSeriesChange(RandersChange):
    name = FamilyName.INFINITE_SERIES

    def _singular(self, F, beta):
        if abs(beta - F) <= DOMAIN_EPS * F:
            return "β = F"
        return None

    def fbar(self, F, beta):
        return beta * beta / (beta - F) + beta

    def gradient_coefficients(self, F, beta):
        d2 = (beta - F) ** 2
        # b-coefficient: (beta^2 - 2 beta F) / (beta - F)^2 from the series part, plus 1
        return beta ** 2 / d2, (beta ** 2 - 2.0 * beta * F) / d2 + 1.0

    def rho(self, F, beta):
        b = beta
        d4 = (b - F) ** 4
        return Rho(
            b ** 3 * (2.0 * b - F) * (b - F) / F / d4,
            (2.0 * b ** 4 - 8.0 * b ** 3 * F + 3.0 * b ** 2 * F ** 2) / d4,
            (-2.0 * b ** 5 / F + 8.0 * b ** 4 - 3.0 * b ** 3 * F) / d4,
            (4.0 * b ** 4 - 16.0 * b ** 3 * F + 24.0 * b ** 2 * F ** 2 - 10.0 * b * F ** 3 + F ** 4) / d4,
        )

    def cartan_coefficients(self, F, beta):
        b = beta
        d = b - F
        base = b ** 3 * (2.0 * b - F) / (F * d ** 3)
        hm = (2.0 * b ** 4 - 8.0 * b ** 3 * F + 3.0 * b ** 2 * F ** 2) / (2.0 * F * d ** 4)
        mmm = 3.0 * F ** 3 * (F - 3.0 * b) / d ** 5
        return CartanCoefficients(base, hm, mmm)

    def phi_spec(self):
        return PhiSpec(
            lambda s: s * s / (s - 1.0) + s,
            lambda s: (s * s - 2.0 * s) / (s - 1.0) ** 2 + 1.0,
            lambda s: 2.0 / (s - 1.0) ** 3,
            name=self.name.value,
        )


_CHANGES: Dict[FamilyName, RandersChange] = {
    FamilyName.KROPINA: KropinaChange(),
    FamilyName.SQUARE: SquareChange(),
    FamilyName.MATSUMOTO: MatsumotoChange(),
    FamilyName.EXPONENTIAL: ExponentialChange(),
    FamilyName.INFINITE_SERIES: InfiniteSeriesChange(),
}


def _require_domain(change: RandersChange, F: float, beta: float) -> None:
    check = change.domain_check(F, beta)
    if not check.ok:
        logger.debug("%s domain check failed: %s", change.name.value, check.condition)
        raise DomainViolation(f"{change.name.value} metric undefined at F={F:.6g}, β={beta:.6g}: {check.condition}",
                              condition=check.condition)


def domain_check(family: FamilySelector, F: float, beta: float) -> DomainCheck:
    return family.change().domain_check(float(F), float(beta))


def fbar(family: FamilySelector, F: float, beta: float) -> float:
    change = family.change()
    _require_domain(change, F, beta)
    return float(change.fbar(float(F), float(beta)))


def fbar_y_gradient(family: FamilySelector, bundle: BaseBundle, b: np.ndarray) -> np.ndarray:
    change = family.change()
    _require_domain(change, bundle.F, bundle.beta)
    p, q = change.gradient_coefficients(bundle.F, bundle.beta)
    return p * bundle.ell + q * np.asarray(b, dtype=float)


def rho_coefficients(family: FamilySelector, F: float, beta: float, m: Optional[float] = None) -> Rho:
    if m is not None and family.name is FamilyName.GENERALIZED_KROPINA:
        family = FamilySelector(family.name, m)
    change = family.change()
    _require_domain(change, F, beta)
    return change.rho(float(F), float(beta))


def gbar(family: FamilySelector, bundle: BaseBundle, b: np.ndarray) -> np.ndarray:
    rho = rho_coefficients(family, bundle.F, bundle.beta)
    b = np.asarray(b, dtype=float)
    ell = bundle.ell
    return (rho.rho0 * bundle.g
            + rho.rho1 * (np.outer(b, ell) + np.outer(ell, b))
            + rho.rho2 * np.outer(ell, ell)
            + rho.rho3 * np.outer(b, b))


def cartan_bar(family: FamilySelector, bundle: BaseBundle, b: np.ndarray) -> np.ndarray:
    change = family.change()
    _require_domain(change, bundle.F, bundle.beta)
    coeffs = change.cartan_coefficients(bundle.F, bundle.beta)
    m = np.asarray(b, dtype=float) - (bundle.beta / bundle.F ** 2) * bundle.y_lower
    tensor = (coeffs.base * bundle.cartan
              + coeffs.hm * cyclic_product(bundle.h, m)
              + coeffs.mmm * triple_product(m))
    return symmetric_tensor3(tensor)


def changed_angular_metric(family: FamilySelector, bundle: BaseBundle, b: np.ndarray) -> np.ndarray:
    """h_bar_ij = g_bar_ij - l_bar_i l_bar_j with l_bar = F_bar_y"""
    ell_bar = fbar_y_gradient(family, bundle, b)
    return gbar(family, bundle, b) - np.outer(ell_bar, ell_bar)


def phi_spec(family: FamilySelector) -> PhiSpec:
    return family.change().phi_spec()


def fbar_field(family: FamilySelector, a: MetricField, b: OneFormField) -> ScalarField:
    """F_bar(x, y) as a jet-aware scalar field, the oracle input for tensor-core"""
    change = family.change()

    def evaluate(xs, ys):
        F = sqrt(a.quadratic(xs, ys))
        beta = b.pairing(xs, ys)
        F0 = float(np.ravel(value_of(F))[0])
        beta0 = float(np.ravel(value_of(beta))[0])
        _require_domain(change, F0, beta0)
        return change.fbar(F, beta)

    return ScalarField(evaluate, exact_x=a.exact and b.exact, name=f"F_bar[{family.label}]")
