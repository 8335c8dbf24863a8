"""
Minkowski Agent - Grid check of the Minkowski-norm inequalities for a shape function
"""

import math

import numpy as np

from agents.context import ScenarioContext
from models.schemas import MinkowskiResult, MinkowskiSpec
from services.base_metrics import PhiSpec, minkowski_check
from services.randers_change import phi_spec


class MinkowskiAgent:
    """Agent running the phi(s) inequality grid for the scenario family or a reference shape"""

    def evaluate(self, context: ScenarioContext) -> MinkowskiResult:
        spec = context.scenario.minkowski or MinkowskiSpec()
        if spec.shape == "randers":
            phi = PhiSpec.randers()
        elif spec.shape == "exponential":
            phi = PhiSpec.exponential()
        else:
            phi = phi_spec(context.family)
        grid = spec.grid if spec.grid is not None else np.linspace(-spec.b, spec.b, spec.points).tolist()

        report = minkowski_check(phi, spec.b, grid)
        return MinkowskiResult(
            shape=phi.name,
            b=report.b,
            s_grid=report.s_grid,
            positive=report.positive,
            strong_convexity=report.strong_convexity,
            regularity=report.regularity,
            min_positive=_finite(report.min_positive),
            min_strong_convexity=_finite(report.min_strong_convexity),
            min_regularity=_finite(report.min_regularity),
            holds=report.holds,
        )


def _finite(value: float):
    return value if math.isfinite(value) else None
