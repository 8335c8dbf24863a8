"""
Tensor Agent - Closed-form F_bar tensors checked against the differentiation oracles
"""

import logging
from typing import List, Tuple

import numpy as np

from agents.context import ScenarioContext
from models.schemas import CheckDelta, TensorBlock
from services.base_metrics import base_bundle
from services.randers_change import (cartan_bar, changed_angular_metric, fbar, fbar_field,
                                     fbar_y_gradient, gbar, rho_coefficients)
from services.tensor_core import (gradient, hessian_half_square, homogeneity_residual, max_abs,
                                  third_deriv_quarter)

logger = logging.getLogger(__name__)


def relative_gap(closed: np.ndarray, oracle: np.ndarray) -> float:
    return max_abs(closed - oracle) / (1.0 + max_abs(oracle))


class TensorAgent:
    """Agent producing g_bar, C_bar and their oracle deltas at one sample"""

    HOMOGENEITY_FACTORS = (0.5, 2.0, 7.0)

    def evaluate(self, context: ScenarioContext, x: np.ndarray, y: np.ndarray) -> Tuple[TensorBlock, List[CheckDelta]]:
        family, tol = context.family, context.tolerances
        bundle = base_bundle(context.metric, context.one_form, x, y)
        field_ = fbar_field(family, context.metric, context.one_form)

        value = fbar(family, bundle.F, bundle.beta)
        grad = fbar_y_gradient(family, bundle, bundle.b)
        g_closed = gbar(family, bundle, bundle.b)
        c_closed = cartan_bar(family, bundle, bundle.b)

        g_oracle = hessian_half_square(field_, x, y)
        c_oracle = third_deriv_quarter(field_, x, y)
        grad_oracle = gradient(field_, x, y)

        deltas = [
            self._delta("gradient_vs_oracle", relative_gap(grad, grad_oracle), tol.gradient),
            self._delta("gbar_vs_oracle", relative_gap(g_closed, g_oracle), tol.gbar),
            self._delta("cartan_vs_oracle", relative_gap(c_closed, c_oracle), tol.cartan),
            self._delta("cartan_y_contraction", self._contraction(c_closed, y), tol.cartan_contraction),
            self._delta("euler_gbar", abs(y @ g_closed @ y - value ** 2) / value ** 2, tol.euler),
            self._delta("homogeneity", self._homogeneity(field_, x, y, value), tol.homogeneity),
            self._delta("gbar_zero_homogeneity", self._zero_homogeneity(context, x, y, g_closed), tol.euler),
        ]

        logger.debug("tensors %s at s=%.4f: gbar gap %.2e, cartan gap %.2e",
                     family.label, bundle.s, deltas[1].value, deltas[2].value)
        rho = rho_coefficients(family, bundle.F, bundle.beta)
        block = TensorBlock(
            fbar=value,
            gradient=grad.tolist(),
            rho=list(rho.as_tuple()),
            gbar=g_closed.tolist(),
            angular=changed_angular_metric(family, bundle, bundle.b).tolist(),
            cartan=c_closed.tolist(),
        )
        return block, deltas

    def _delta(self, name: str, value: float, tolerance: float) -> CheckDelta:
        return CheckDelta(name=name, value=float(value), tolerance=tolerance, passed=bool(value <= tolerance))

    def _contraction(self, cartan: np.ndarray, y: np.ndarray) -> float:
        contracted = np.einsum("ijk,k->ij", cartan, y)
        return max_abs(contracted) / ((1.0 + max_abs(cartan)) * max(1.0, max_abs(y)))

    def _homogeneity(self, field_, x, y, value: float) -> float:
        return max(homogeneity_residual(field_, x, y, lam) / (lam * abs(value))
                   for lam in self.HOMOGENEITY_FACTORS)

    def _zero_homogeneity(self, context: ScenarioContext, x, y, g_closed: np.ndarray) -> float:
        scaled = base_bundle(context.metric, context.one_form, x, 2.0 * y)
        return relative_gap(gbar(context.family, scaled, scaled.b), g_closed)
