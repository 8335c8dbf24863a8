"""
Flatness - Projective and dual flatness condition systems, direct residuals and identities

Condition systems are evaluated as the final theorem statements list them.
Each family also carries one assembled bracket per mode: a combination of the
jet atoms that must equal prefactor x direct residual, where the direct
residual is

  projective:  F_bar_{x^k y^l} y^k - F_bar_{x^l}
  dual:        L_{x^k y^l} y^k - 2 L_{x^l},   L = F_bar^2

computed from the tensor-core oracle.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np

from services.base_metrics import JetData, MetricField, OneFormField, jet_data
from services.randers_change import FamilyName, FamilySelector, fbar_field
from services.tensor_core import ScalarField, as_vector, flatness_pair, max_abs

logger = logging.getLogger(__name__)

TOL_COND_SCALE = 1e-10
TOL_DIRECT_EXACT = 1e-9
TOL_DIRECT_FINITE_DIFFERENCE = 1e-6
IDENTITY_TOLERANCE = 1e-8
NOT_FLAT_FACTOR = 10.0


class FlatnessMode(str, Enum):
    PROJECTIVE = "projective"
    DUAL = "dual"


class Verdict(str, Enum):
    FLAT = "flat"
    NOT_FLAT = "not-flat"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class Atoms:
    """Jet combinations the condition systems are written in"""

    dA: np.ndarray      # A_0l - A_xl
    dB: np.ndarray      # beta_0l - beta_xl
    dA2: np.ndarray     # A_0l - 2 A_xl
    dB2: np.ndarray     # beta_0l - 2 beta_xl
    AA: np.ndarray      # A_0 A_l
    BB: np.ndarray      # beta_0 beta_l
    AB: np.ndarray      # A_l beta_0 + A_0 beta_l

    @classmethod
    def from_jets(cls, jet: JetData) -> "Atoms":
        return cls(
            dA=jet.A_0l - jet.A_xl,
            dB=jet.beta_0l - jet.beta_xl,
            dA2=jet.A_0l - 2.0 * jet.A_xl,
            dB2=jet.beta_0l - 2.0 * jet.beta_xl,
            AA=jet.A_0 * jet.A_l,
            BB=jet.beta_0 * jet.beta_l,
            AB=jet.A_l * jet.beta_0 + jet.A_0 * jet.beta_l,
        )


@dataclass
class ConditionReport:
    """Residuals of one family's condition system, plus the direct oracle when evaluated"""

    family: str
    mode: FlatnessMode
    residuals: Dict[str, np.ndarray]
    direct_residual: Optional[np.ndarray] = None
    identity_delta: Optional[float] = None
    tol_cond: Optional[float] = None
    tol_direct: Optional[float] = None
    verdict: Optional[Verdict] = None
    dispatched_to: Optional[str] = None
    projective_factor: Optional[float] = None
    spray: Optional[np.ndarray] = field(default=None)

    def residual_norms(self) -> Dict[str, float]:
        return {key: max_abs(value) for key, value in self.residuals.items()}

    @property
    def direct_max(self) -> Optional[float]:
        if self.direct_residual is None:
            return None
        return max_abs(self.direct_residual)


@dataclass(frozen=True)
class ProjectiveFactor:
    P: float


# condition systems

ConditionSystem = Callable[[Atoms, JetData, float, float], Dict[str, np.ndarray]]


def _kropina_projective(at, jet, b, m):
    return {
        "PF1.1": 2.0 * at.BB + b * (jet.beta_xl - jet.beta_0l),
        "PF1.2": b ** 3 * (jet.beta_0l - jet.beta_xl) + b ** 2 * (jet.A_0l - jet.A_xl) - b * at.AB,
    }


def _generalized_kropina_projective(at, jet, b, m):
    return {
        "PF2.2": b ** 2 * at.dA - m * b * at.AB,
        "PF2.4": jet.beta_0l - jet.beta_xl,
        "PF2.5": at.AA,
        "PF2.6": at.BB,
    }


def _square_projective(at, jet, b, m):
    return {
        "PF3.1": at.AA,
        "PF3.2": b ** 2 * (jet.A_xl - jet.A_0l) - 2.0 * b * at.AB - at.AA,
        "PF3.3": 4.0 * b * at.dB + at.dA + 4.0 * at.BB,
        "PF3.4": at.dB,
    }


def _matsumoto_projective(at, jet, b, m):
    return {
        "PF4.5": at.AA,
        "PF4.6": jet.A_0l - jet.A_xl,
        "PF4.7": at.BB,
        "PF4.1": jet.beta_0l - jet.beta_xl,
        "PF4.8": at.AB,
    }


def _exponential_projective(at, jet, b, m):
    return {
        "PF5.5": at.AA,
        "PF5.3": at.dA,
        "PF5.b0bl": at.BB,
        "PF5.1": at.dB,
        "PF5.Alb0+A0bl": at.AB,
    }


def _infinite_series_projective(at, jet, b, m):
    return {
        "PF6.5": at.AA,
        "PF6.4": at.dA,
        "PF6.6": at.BB,
        "PF6.1": at.dB,
        "PF6.7": at.AB,
    }


def _kropina_dual(at, jet, b, m):
    return {
        "LDF1.1": 3.0 * at.BB - b * jet.beta_0l + 2.0 * b * jet.beta_xl,
        "LDF1.2": b ** 2 * at.dA2 - 2.0 * b * (jet.beta_l * jet.A_0 - jet.A_l * jet.beta_0),
        "LDF1.3": b ** 5 * at.dB2 + b ** 4 * (at.dA2 + at.BB) + b ** 2 * at.AA,
    }


def _generalized_kropina_dual(at, jet, b, m):
    return {
        "LDF2.3": at.AA,
        "LDF2.A0l-2Axl": at.dA2,
        "LDF2.b0bl": at.BB,
        "LDF2.b0l-2bxl": at.dB2,
    }


def _square_dual(at, jet, b, m):
    return {
        "LDF3.3": at.AA,
        "LDF3.10": at.dA2,
        "LDF3.9": at.BB,
        "LDF3.4": at.dB2,
        "LDF3.11": at.AB,
    }


def _matsumoto_dual(at, jet, b, m):
    return {
        "LDF4.7": at.AA,
        "LDF4.A0l-2Axl": at.dA2,
        "LDF4.b0bl": at.BB,
        "LDF4.b0l": jet.beta_0l,
        "LDF4.2bxl": 2.0 * jet.beta_xl,
        "LDF4.Alb0+A0bl": at.AB,
    }


def _exponential_dual(at, jet, b, m):
    return {
        "LDF5.6": at.AA,
        "LDF5.9": at.dA2,
        "LDF5.10": at.BB,
        "LDF5.1": at.dB2,
        "LDF5.8": at.AB,
    }


def _infinite_series_dual(at, jet, b, m):
    return {
        "LDF6.6": at.AA,
        "LDF6.9": at.dA2,
        "LDF6.8": at.BB,
        "LDF6.7": at.dB2,
        "LDF6.10": at.AB,
    }


_SYSTEMS: Dict[Tuple[FamilyName, FlatnessMode], ConditionSystem] = {
    (FamilyName.KROPINA, FlatnessMode.PROJECTIVE): _kropina_projective,
    (FamilyName.GENERALIZED_KROPINA, FlatnessMode.PROJECTIVE): _generalized_kropina_projective,
    (FamilyName.SQUARE, FlatnessMode.PROJECTIVE): _square_projective,
    (FamilyName.MATSUMOTO, FlatnessMode.PROJECTIVE): _matsumoto_projective,
    (FamilyName.EXPONENTIAL, FlatnessMode.PROJECTIVE): _exponential_projective,
    (FamilyName.INFINITE_SERIES, FlatnessMode.PROJECTIVE): _infinite_series_projective,
    (FamilyName.KROPINA, FlatnessMode.DUAL): _kropina_dual,
    (FamilyName.GENERALIZED_KROPINA, FlatnessMode.DUAL): _generalized_kropina_dual,
    (FamilyName.SQUARE, FlatnessMode.DUAL): _square_dual,
    (FamilyName.MATSUMOTO, FlatnessMode.DUAL): _matsumoto_dual,
    (FamilyName.EXPONENTIAL, FlatnessMode.DUAL): _exponential_dual,
    (FamilyName.INFINITE_SERIES, FlatnessMode.DUAL): _infinite_series_dual,
}


# assembled brackets: prefactor(A, beta, m) and the list of bracket groups

Bracket = Tuple[Callable[[float, float, float], float],
                Callable[[Atoms, float, float, float], List[np.ndarray]]]


def _kropina_projective_bracket(at, A, b, m):
    return [A * (2.0 * at.BB - b * at.dB),
            b ** 3 * at.dB + b ** 2 * at.dA - b * at.AB]


def _generalized_kropina_projective_bracket(at, A, b, m):
    return [
        ((m - 1.0) / 2.0) * b ** 2 * at.AA,
        A * (b ** 2 * at.dA - m * b * at.AB),
        2.0 * m * A ** 2 * (-(b / (m + 1.0)) * at.dB + at.BB),
        (2.0 / (m + 1.0)) * b ** (m + 2.0) * A ** ((3.0 - m) / 2.0) * at.dB,
    ]


def _square_projective_bracket(at, A, b, m):
    return [
        3.0 * b ** 2 * at.AA,
        2.0 * A * (-b ** 2 * at.dA - 2.0 * b * at.AB) - A * at.AA,
        2.0 * A ** 2 * (at.dA + 4.0 * at.BB + 4.0 * b * at.dB),
        12.0 * A ** 2.5 * at.dB,
    ]


def _matsumoto_projective_bracket(at, A, b, m):
    r = np.sqrt(A)
    return [
        8.0 * A ** 2 * at.dB,
        2.0 * A ** 1.5 * (at.dA + 4.0 * at.BB - 8.0 * b * at.dB),
        6.0 * A * (2.0 * b ** 2 * at.dB - b * at.dA),
        r * (-4.0 * b ** 3 * at.dB + 4.0 * b ** 2 * at.dA - 4.0 * b * at.AB - at.AA),
        3.0 * b * at.AA,
    ]


def _exponential_projective_bracket(at, A, b, m):
    r = np.sqrt(A)
    E = np.exp(b / r)
    return [
        4.0 * A ** 2.5 * (E + 1.0) * at.dB,
        2.0 * A ** 2 * E * (2.0 * at.BB + at.dA),
        -2.0 * b * A ** 1.5 * E * at.dA,
        -A * E * (at.AA + 2.0 * b * at.AB),
        r * b * E * at.AA,
        b ** 2 * E * at.AA,
    ]


def _infinite_series_projective_bracket(at, A, b, m):
    r = np.sqrt(A)
    return [
        -4.0 * A ** 3 * at.dB,
        4.0 * A ** 2.5 * (5.0 * b * at.dB + 2.0 * at.BB),
        -24.0 * A ** 2 * b ** 2 * at.dB,
        2.0 * A ** 1.5 * (4.0 * b ** 3 * at.dB - b ** 2 * at.dA - 2.0 * b * at.AB),
        2.0 * A * b ** 3 * at.dA,
        3.0 * r * b ** 2 * at.AA,
        -b ** 3 * at.AA,
    ]


def _kropina_dual_bracket(at, A, b, m):
    return [
        A ** 2 * (3.0 * at.BB - b * at.dB2),
        A * (b ** 2 * at.dA2 - 2.0 * b * at.AB),
        b ** 5 * at.dB2 + b ** 4 * (at.dA2 + at.BB) + b ** 2 * at.AA,
    ]


def _generalized_kropina_dual_bracket(at, A, b, m):
    return [
        (A ** (m - 1.0) / b ** (2.0 * m + 2.0)) * (
            2.0 * m * A ** 2 * (-b * at.dB2 + (2.0 * m + 1.0) * at.BB)
            + (m + 1.0) * A * (b ** 2 * at.dA2 - 2.0 * m * b * at.AB)
            + m * (m + 1.0) * b ** 2 * at.AA),
        (A ** ((m - 3.0) / 2.0) / b ** (m + 1.0)) * (
            2.0 * (m - 1.0) * A ** 2 * (-b * at.dB2 + m * at.BB)
            + (m + 1.0) * A * (b ** 2 * at.dA2 - (m - 1.0) * b * at.AB)
            + ((m * m - 1.0) / 2.0) * b ** 2 * at.AA),
        2.0 * b * at.dB2 + 2.0 * at.BB,
    ]


def _square_dual_bracket(at, A, b, m):
    return [
        (1.0 / A ** 3) * (
            4.0 * A ** 2 * (b ** 3 * at.dB2 + 3.0 * b ** 2 * at.BB)
            + A * (-b ** 4 * at.dA2 - 4.0 * b ** 3 * at.AB)
            + 2.0 * b ** 4 * at.AA),
        (3.0 / (2.0 * A ** 2.5)) * (
            4.0 * A ** 3 * at.dB2
            + 2.0 * A ** 2 * (6.0 * b ** 2 * at.dB2 + b * (at.dA2 + 12.0 * at.BB) + at.AB)
            + A * (-2.0 * b ** 3 * at.dA2 - 6.0 * b ** 2 * at.AB - b * at.AA)
            + 3.0 * b ** 3 * at.AA),
        at.dA2 + 22.0 * at.BB + 22.0 * b * at.dB2,
    ]


def _matsumoto_dual_bracket(at, A, b, m):
    r = np.sqrt(A)
    return [
        8.0 * A ** 3 * at.dB2,
        2.0 * A ** 2.5 * (at.dA2 + 12.0 * at.BB - 4.0 * b * at.dB2),
        4.0 * A ** 2 * (at.AB - b * (at.dA2 + 6.0 * at.BB) - 3.0 * b ** 2 * at.dB2),
        -4.0 * A ** 1.5 * (4.0 * b * at.AB + b ** 2 * (at.dA2 - 6.0 * at.BB) - 6.0 * b ** 3 * at.dB2),
        -2.0 * A * (b * at.AA - 3.0 * b ** 2 * at.AB - b ** 3 * (5.0 * at.dA2 - 8.0 * at.BB)
                    + 8.0 * b ** 4 * at.dB2),
        4.0 * r * (2.0 * b ** 2 * at.AA + b ** 4 * (at.BB - at.dA2) + b ** 5 * at.dB2),
        -3.0 * b ** 3 * at.AA,
    ]


def _exponential_dual_bracket(at, A, b, m):
    r = np.sqrt(A)
    E = np.exp(b / r)
    return [
        4.0 * A ** 3 * E * (E + 1.0) * at.dB2,
        2.0 * A ** 2.5 * (2.0 * b * (E + 1.0) * at.dB2 + E ** 2 * at.dA2
                          + 4.0 * E * (E + 1.0) * at.BB + 2.0 * at.BB),
        2.0 * E * A ** 2 * (b * ((1.0 - E) * at.dA2 + 2.0 * at.BB) + (E + 1.0) * at.AB),
        -2.0 * E * A ** 1.5 * (b ** 2 * at.dA2 + b * (2.0 * E + 1.0) * at.AB),
        -E * A * (2.0 * b ** 2 * at.AB + b * (E + 1.0) * at.AA),
        b ** 2 * E * (2.0 * E + 1.0) * r * at.AA,
        b ** 3 * E * at.AA,
    ]


def _infinite_series_dual_bracket(at, A, b, m):
    r = np.sqrt(A)
    return [
        4.0 * A ** 3.5 * (b * at.dB2 + at.BB),
        -4.0 * A ** 3 * b * (7.0 * b * at.dB2 + 10.0 * at.BB),
        8.0 * A ** 2.5 * b ** 2 * (8.0 * b * at.dB2 + 12.0 * at.BB),
        2.0 * A ** 2 * b ** 2 * (-28.0 * b ** 2 * at.dB2 - 32.0 * b * at.BB + b * at.dA2 + 3.0 * at.AB),
        2.0 * A ** 1.5 * b ** 3 * (8.0 * b ** 2 * at.dB2 + 8.0 * b * at.BB - 3.0 * b * at.dA2 - 8.0 * at.AB),
        A * b ** 3 * (4.0 * b ** 2 * at.dA2 + 4.0 * b * at.AB - 3.0 * at.AA),
        8.0 * b ** 4 * r * at.AA,
        -2.0 * b ** 5 * at.AA,
    ]


_BRACKETS: Dict[Tuple[FamilyName, FlatnessMode], Bracket] = {
    (FamilyName.KROPINA, FlatnessMode.PROJECTIVE):
        (lambda A, b, m: b ** 3, _kropina_projective_bracket),
    (FamilyName.GENERALIZED_KROPINA, FlatnessMode.PROJECTIVE):
        (lambda A, b, m: 2.0 * b ** (m + 2.0) * A ** ((3.0 - m) / 2.0) / (m + 1.0),
         _generalized_kropina_projective_bracket),
    (FamilyName.SQUARE, FlatnessMode.PROJECTIVE):
        (lambda A, b, m: 4.0 * A ** 2.5, _square_projective_bracket),
    (FamilyName.MATSUMOTO, FlatnessMode.PROJECTIVE):
        (lambda A, b, m: 4.0 * np.sqrt(A) * (np.sqrt(A) - b) ** 3, _matsumoto_projective_bracket),
    (FamilyName.EXPONENTIAL, FlatnessMode.PROJECTIVE):
        (lambda A, b, m: 4.0 * A ** 2.5, _exponential_projective_bracket),
    (FamilyName.INFINITE_SERIES, FlatnessMode.PROJECTIVE):
        (lambda A, b, m: 4.0 * A ** 1.5 * (b - np.sqrt(A)) ** 3, _infinite_series_projective_bracket),
    (FamilyName.KROPINA, FlatnessMode.DUAL):
        (lambda A, b, m: b ** 4 / 2.0, _kropina_dual_bracket),
    (FamilyName.GENERALIZED_KROPINA, FlatnessMode.DUAL):
        (lambda A, b, m: 1.0, _generalized_kropina_dual_bracket),
    (FamilyName.SQUARE, FlatnessMode.DUAL):
        (lambda A, b, m: 1.0, _square_dual_bracket),
    (FamilyName.MATSUMOTO, FlatnessMode.DUAL):
        (lambda A, b, m: 2.0 * np.sqrt(A) * (np.sqrt(A) - b) ** 4, _matsumoto_dual_bracket),
    (FamilyName.EXPONENTIAL, FlatnessMode.DUAL):
        (lambda A, b, m: 2.0 * A ** 2.5, _exponential_dual_bracket),
    (FamilyName.INFINITE_SERIES, FlatnessMode.DUAL):
        (lambda A, b, m: 2.0 * A ** 1.5 * (b - np.sqrt(A)) ** 4, _infinite_series_dual_bracket),
}


def system_family(family: FamilySelector) -> FamilySelector:
    """Generalized Kropina with m = 1 is the Kropina metric; its systems are Kropina's"""
    if family.name is FamilyName.GENERALIZED_KROPINA and family.m == 1.0:
        return FamilySelector(FamilyName.KROPINA)
    return family


def _conditions(family: FamilySelector, mode: FlatnessMode, jet: JetData,
                beta: Optional[float]) -> ConditionReport:
    target = system_family(family)
    beta = jet.beta if beta is None else float(beta)
    residuals = _SYSTEMS[(target.name, mode)](Atoms.from_jets(jet), jet, beta, target.m)
    return ConditionReport(
        family=family.label,
        mode=mode,
        residuals={key: np.asarray(value, dtype=float) for key, value in residuals.items()},
        dispatched_to=target.label if target is not family else None,
    )


def projective_conditions(family: FamilySelector, jet: JetData, beta: Optional[float] = None) -> ConditionReport:
    return _conditions(family, FlatnessMode.PROJECTIVE, jet, beta)


def dual_conditions(family: FamilySelector, jet: JetData, beta: Optional[float] = None) -> ConditionReport:
    return _conditions(family, FlatnessMode.DUAL, jet, beta)


def _metric_field(family: FamilySelector, a: MetricField, b: OneFormField,
                  mode: FlatnessMode, finite_difference: bool) -> ScalarField:
    base = fbar_field(family, a, b)
    exact = base.exact_x and not finite_difference
    if mode is FlatnessMode.PROJECTIVE:
        return ScalarField(base.evaluate, exact_x=exact, name=base.name)

    def squared(xs, ys):
        value = base(xs, ys)
        return value * value

    return ScalarField(squared, exact_x=exact, name=f"L[{family.label}]")


def projective_direct(family: FamilySelector, a: MetricField, b: OneFormField, x, y,
                      finite_difference: bool = False) -> np.ndarray:
    """F_bar_{x^k y^l} y^k - F_bar_{x^l}"""
    f_x, mixed = flatness_pair(_metric_field(family, a, b, FlatnessMode.PROJECTIVE, finite_difference), x, y)
    return mixed - f_x


def dual_direct(family: FamilySelector, a: MetricField, b: OneFormField, x, y,
                finite_difference: bool = False) -> np.ndarray:
    """L_{x^k y^l} y^k - 2 L_{x^l} with L = F_bar^2"""
    f_x, mixed = flatness_pair(_metric_field(family, a, b, FlatnessMode.DUAL, finite_difference), x, y)
    return mixed - 2.0 * f_x


def projective_factor(a: MetricField, b: OneFormField, family: FamilySelector, x, y,
                      finite_difference: bool = False) -> ProjectiveFactor:
    """P = F_bar_{x^k} y^k / (2 F_bar)"""
    field_ = _metric_field(family, a, b, FlatnessMode.PROJECTIVE, finite_difference)
    y = as_vector(y, "y")
    f_x, _ = flatness_pair(field_, x, y)
    return ProjectiveFactor(float(f_x @ y) / (2.0 * field_.value(x, y)))


def spray_coefficients(a: MetricField, b: OneFormField, family: FamilySelector, x, y,
                       finite_difference: bool = False) -> np.ndarray:
    """G^i = P y^i"""
    P = projective_factor(a, b, family, x, y, finite_difference).P
    return P * as_vector(y, "y")


def identity_assembly(family: FamilySelector, mode: FlatnessMode, jet: JetData,
                      direct: np.ndarray) -> float:
    """Relative gap between prefactor x direct residual and the assembled bracket"""
    target = system_family(family)
    prefactor, groups = _BRACKETS[(target.name, mode)]
    A, beta = jet.A, jet.beta
    terms = groups(Atoms.from_jets(jet), A, beta, target.m)
    bracket = np.sum(terms, axis=0)
    lhs = prefactor(A, beta, target.m) * np.asarray(direct, dtype=float)
    scale = max(max_abs(lhs), sum(max_abs(term) for term in terms))
    gap = max_abs(lhs - bracket)
    return gap / scale if scale > 0.0 else gap


def default_tolerances(jet: JetData, exact: bool) -> Tuple[float, float]:
    tol_cond = TOL_COND_SCALE * (1.0 + jet.A ** 2 + jet.beta ** 2)
    tol_direct = TOL_DIRECT_EXACT if exact else TOL_DIRECT_FINITE_DIFFERENCE
    return tol_cond, tol_direct


def classify(norms: Dict[str, float], direct_max: float, tol_cond: float, tol_direct: float) -> Verdict:
    if all(v <= tol_cond for v in norms.values()) and direct_max <= tol_direct:
        return Verdict.FLAT
    if direct_max > NOT_FLAT_FACTOR * tol_direct:
        return Verdict.NOT_FLAT
    return Verdict.INCONCLUSIVE


def evaluate_flatness(family: FamilySelector, a: MetricField, b: OneFormField, x, y,
                      mode: FlatnessMode, tol_cond: Optional[float] = None,
                      tol_direct: Optional[float] = None,
                      finite_difference: bool = False) -> ConditionReport:
    """Condition residuals, direct residual, identity gap and verdict at one sample"""
    mode = FlatnessMode(mode)
    exact = a.exact and b.exact and not finite_difference
    jet = jet_data(a, b, x, y, force_finite_difference=finite_difference)
    report = _conditions(family, mode, jet, None)
    if mode is FlatnessMode.PROJECTIVE:
        report.direct_residual = projective_direct(family, a, b, x, y, finite_difference)
        factor = projective_factor(a, b, family, x, y, finite_difference)
        report.projective_factor = factor.P
        report.spray = factor.P * as_vector(y, "y")
    else:
        report.direct_residual = dual_direct(family, a, b, x, y, finite_difference)

    default_cond, default_direct = default_tolerances(jet, exact)
    report.tol_cond = default_cond if tol_cond is None else float(tol_cond)
    report.tol_direct = default_direct if tol_direct is None else float(tol_direct)
    report.identity_delta = identity_assembly(family, mode, jet, report.direct_residual)
    report.verdict = classify(report.residual_norms(), report.direct_max, report.tol_cond, report.tol_direct)
    logger.debug("%s %s flatness: verdict=%s direct=%.3e identity=%.3e", family.label, mode.value,
                 report.verdict.value, report.direct_max, report.identity_delta)
    return report
