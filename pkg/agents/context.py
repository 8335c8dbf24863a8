"""
Scenario Context - Library objects built once from a validated scenario document
"""

from dataclasses import dataclass
from typing import List, Tuple

import numpy as np

from models.schemas import FieldEntry, Scenario, Tolerances
from services.base_metrics import MetricField, OneFormField
from services.polynomial import Polynomial
from services.randers_change import FamilySelector
from services.sampling import sample_admissible


@dataclass(frozen=True)
class ScenarioContext:
    """Fields, family and tolerances shared by every agent during one run"""
    scenario: Scenario
    family: FamilySelector
    metric: MetricField
    one_form: OneFormField
    tolerances: Tolerances
    finite_difference: bool

    @property
    def exact(self) -> bool:
        return self.metric.exact and self.one_form.exact and not self.finite_difference


def _polynomial(entry: FieldEntry, n: int) -> Polynomial:
    if isinstance(entry, list):
        return Polynomial.from_terms(((term.exponents, term.coeff) for term in entry), n)
    return Polynomial.constant(float(entry), n)


def build_context(scenario: Scenario) -> ScenarioContext:
    n = scenario.n
    metric = MetricField.from_polynomials(
        [[_polynomial(entry, n) for entry in row] for row in scenario.metric_field.entries])
    one_form = OneFormField.from_polynomials([_polynomial(entry, n) for entry in scenario.one_form_field.entries])
    family = FamilySelector.parse(scenario.family.name, scenario.family.m)
    return ScenarioContext(
        scenario=scenario,
        family=family,
        metric=metric,
        one_form=one_form,
        tolerances=scenario.tolerances,
        finite_difference=scenario.x_derivatives == "finite-difference",
    )


def resolve_samples(context: ScenarioContext) -> List[Tuple[np.ndarray, np.ndarray]]:
    """Explicit samples first, then the seeded random ones"""
    scenario = context.scenario
    points = [(np.asarray(p.x, dtype=float), np.asarray(p.y, dtype=float)) for p in scenario.samples]
    spec = scenario.random_samples
    if spec is not None:
        points.extend(sample_admissible(context.family, context.metric, context.one_form,
                                        spec.count, spec.seed, spec.box, spec.strategy))
    return points
