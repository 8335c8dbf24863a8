"""
Sampling - Seeded admissible (x, y) samples by rejection against the family domain
"""

import logging
from typing import Dict, List, Tuple

import numpy as np

from services.base_metrics import MetricField, OneFormField, base_bundle
from services.errors import DomainViolation, InputError, NumericError
from services.randers_change import FamilyName, FamilySelector, domain_check

logger = logging.getLogger(__name__)

MAX_ATTEMPTS = 10_000

# s = beta / alpha windows that keep denominators bounded and F_bar positive
FAMILY_WINDOWS: Dict[FamilyName, Tuple[float, float]] = {
    FamilyName.KROPINA: (0.2, 0.9),
    FamilyName.GENERALIZED_KROPINA: (0.2, 0.9),
    FamilyName.SQUARE: (-0.3, 0.3),
    FamilyName.MATSUMOTO: (-0.3, 0.3),
    FamilyName.EXPONENTIAL: (-0.3, 0.3),
    FamilyName.INFINITE_SERIES: (1.5, np.inf),
}

STRATEGIES = ("family-window", "domain-only")


def describe_window(family: FamilySelector) -> str:
    low, high = FAMILY_WINDOWS[family.name]
    if np.isinf(high):
        return f"β >= {low:g}α"
    if low < 0.0:
        return f"|s| <= {high:g}"
    return f"β in [{low:g}α, {high:g}α]"


def sample_admissible(family: FamilySelector, a: MetricField, b: OneFormField, count: int,
                      seed: int, box: float = 0.5, strategy: str = "family-window",
                      max_attempts: int = MAX_ATTEMPTS) -> List[Tuple[np.ndarray, np.ndarray]]:
    """Draw count samples x in [-box, box]^n, y standard normal, accepted per strategy"""
    if strategy not in STRATEGIES:
        raise InputError(f"unknown sampling strategy '{strategy}'")
    rng = np.random.default_rng(seed)
    low, high = FAMILY_WINDOWS[family.name]
    samples = []
    for index in range(count):
        for _ in range(max_attempts):
            x = rng.uniform(-box, box, a.n)
            y = rng.standard_normal(a.n)
            try:
                bundle = base_bundle(a, b, x, y)
            except (DomainViolation, NumericError):
                continue
            if not domain_check(family, bundle.F, bundle.beta).ok:
                continue
            if strategy == "family-window" and not (low <= bundle.s <= high):
                continue
            samples.append((x, y))
            break
        else:
            raise InputError(
                f"no admissible sample #{index} for {family.label} after {max_attempts} attempts; "
                f"the family bound {describe_window(family)} is likely unreachable for these fields"
            )
    logger.debug("drew %d admissible samples for %s (seed=%d)", count, family.label, seed)
    return samples
