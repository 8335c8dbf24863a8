"""
Error Types - Structured failures raised by the verification kernels
"""

from typing import Optional


class FinslerError(Exception):
    """Base class for every error raised while evaluating a scenario"""

    error_type = "finsler"


class DomainViolation(FinslerError):
    """A point lies outside the domain of a metric or operation"""

    error_type = "domain"

    def __init__(self, message: str, condition: Optional[str] = None):
        super().__init__(message)
        self.condition = condition or message


class NumericError(FinslerError):
    """A computation produced a non-finite intermediate"""

    error_type = "numeric"


class SingularCascadeError(FinslerError):
    """One of the scalars of the inverse-metric cascade vanishes"""

    error_type = "singular-cascade"

    def __init__(self, scalar: str, value: float):
        super().__init__(f"singular inverse cascade: |{scalar}| = {abs(value):.3e} below threshold")
        self.scalar = scalar
        self.value = value


class InputError(FinslerError):
    """Caller-supplied input is inconsistent (grids, sampler bounds, scenario semantics)"""

    error_type = "input"
