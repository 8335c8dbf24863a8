"""
Inverse Metric - The rho cascade: two rank-one updates and a final correction

g_bar = rho0 [g + lam c c + mu l l + nu b b] with c = b + l, so

  M^-1 = g^-1 - (lam / X) c c,              X = 1 + lam c^2
  N^-1 = M^-1 - (mu / Y) d d,               d = M^-1 l,  Y = 1 + mu d^2
  g_bar^-1 = (N^-1 - nu / (1 + nu bt^2) e e) / rho0,   e = N^-1 b
"""

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from services.base_metrics import BaseBundle
from services.errors import NumericError, SingularCascadeError
from services.randers_change import FamilySelector, Rho, rho_coefficients
from services.tensor_core import max_abs

logger = logging.getLogger(__name__)

SINGULAR_THRESHOLD = 1e-12
B_EXPANSION_TOLERANCE = 1e-9


@dataclass(frozen=True)
class MixingParams:
    """Scalars of the inverse cascade at one sample"""

    rho: Rho
    lam: float
    mu: float
    nu: float
    c_sq: float
    X: float
    kappa: Optional[float] = None
    d_sq: Optional[float] = None
    Y: Optional[float] = None
    b_tilde_sq: Optional[float] = None

    @property
    def final_scalar(self) -> Optional[float]:
        if self.b_tilde_sq is None:
            return None
        return 1.0 + self.nu * self.b_tilde_sq

    def conditioning(self) -> float:
        """min(|rho0|, |X|, |Y|, |1 + nu bt^2|)"""
        scalars = [self.rho.rho0, self.X, self.Y, self.final_scalar]
        return min(abs(v) for v in scalars if v is not None)


@dataclass(frozen=True)
class InverseResult:
    matrix: np.ndarray
    params: MixingParams
    determinant_ratio: float


def mixing_params(rho: Rho, bundle: BaseBundle, cascade: bool = True) -> MixingParams:
    """lam, mu, nu, c^2, X and, when cascade is set, kappa, d^2, Y and bt^2"""
    if abs(rho.rho0) < SINGULAR_THRESHOLD:
        raise SingularCascadeError("rho0", rho.rho0)
    lam = rho.rho1 / rho.rho0
    mu = (rho.rho2 - rho.rho1) / rho.rho0
    nu = (rho.rho3 - rho.rho1) / rho.rho0
    F, beta, b_sq = bundle.F, bundle.beta, bundle.b_sq
    c_sq = b_sq + 2.0 * beta / F + 1.0
    X = 1.0 + lam * c_sq
    if not cascade:
        return MixingParams(rho, lam, mu, nu, c_sq, X)

    if abs(X) < SINGULAR_THRESHOLD:
        raise SingularCascadeError("X", X)
    s = beta / F
    kappa = (lam / X) * (1.0 + s)
    d_sq = 1.0 - (lam / X) * (1.0 + s) ** 2
    Y = 1.0 + mu * d_sq
    if abs(Y) < SINGULAR_THRESHOLD:
        raise SingularCascadeError("Y", Y)
    d_dot_b = s * (1.0 - kappa) - kappa * b_sq
    b_tilde_sq = b_sq - (lam / X) * (b_sq + s) ** 2 - (mu / Y) * d_dot_b ** 2
    return MixingParams(rho, lam, mu, nu, c_sq, X, kappa, d_sq, Y, b_tilde_sq)


def _expanded_b_matrix(params: MixingParams, bundle: BaseBundle) -> np.ndarray:
    """B^ij expanded in y y / F^2, (y b + b y) / F and b b"""
    kappa = params.kappa
    y_over_F = bundle.y / bundle.F
    b_up = bundle.b_up
    return ((1.0 - kappa) ** 2 * np.outer(y_over_F, y_over_F)
            + (-kappa + kappa ** 2) * (np.outer(y_over_F, b_up) + np.outer(b_up, y_over_F))
            + kappa ** 2 * np.outer(b_up, b_up))


def determinant_ratio(params: MixingParams, n: int) -> float:
    """det g_bar / det g = rho0^n (1 + nu bt^2) Y X"""
    return params.rho.rho0 ** n * params.final_scalar * params.Y * params.X


def inverse_cascade(family: FamilySelector, bundle: BaseBundle, b: np.ndarray,
                    a_inv: Optional[np.ndarray] = None) -> InverseResult:
    a_inv = bundle.g_inv if a_inv is None else np.asarray(a_inv, dtype=float)
    b = np.asarray(b, dtype=float)
    b_up = a_inv @ b
    F = bundle.F
    rho = rho_coefficients(family, F, bundle.beta)
    params = mixing_params(rho, bundle)
    if abs(params.final_scalar) < SINGULAR_THRESHOLD:
        raise SingularCascadeError("1+nu*b_tilde^2", params.final_scalar)

    lam_X = params.lam / params.X
    c_up = b_up + bundle.y / F
    d_up = (1.0 - params.kappa) * bundle.y / F - params.kappa * b_up

    B = np.outer(d_up, d_up)
    expansion_gap = max_abs(_expanded_b_matrix(params, bundle) - B)
    if expansion_gap > B_EXPANSION_TOLERANCE * (1.0 + max_abs(B)):
        raise NumericError(f"expanded B^ij disagrees with d^i d^j by {expansion_gap:.3e}")

    m_inv_b = b_up - lam_X * c_up * (bundle.b_sq + bundle.beta / F)
    e_up = m_inv_b - (params.mu / params.Y) * d_up * (d_up @ b)

    matrix = (a_inv
              - lam_X * np.outer(c_up, c_up)
              - (params.mu / params.Y) * B
              - (params.nu / params.final_scalar) * np.outer(e_up, e_up)) / rho.rho0
    matrix = 0.5 * (matrix + matrix.T)
    ratio = determinant_ratio(params, bundle.n)
    logger.debug("inverse cascade %s: X=%.3e Y=%.3e 1+nu bt^2=%.3e",
                 family.label, params.X, params.Y, params.final_scalar)
    return InverseResult(matrix, params, ratio)


def inverse_metric(family: FamilySelector, bundle: BaseBundle, b: np.ndarray,
                   a_inv: Optional[np.ndarray] = None) -> np.ndarray:
    return inverse_cascade(family, bundle, b, a_inv).matrix
