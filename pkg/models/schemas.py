"""
Data Models and Schemas for scenario documents and verification reports
"""

from typing import Dict, List, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

REPORT_VERSION = "1.0.0"

FAMILY_NAMES = ("kropina", "generalized-kropina", "square", "matsumoto", "exponential", "infinite-series")


class ScenarioModel(BaseModel):
    """Scenario documents reject unknown keys"""
    model_config = ConfigDict(extra="forbid")


class PolynomialTerm(ScenarioModel):
    """One monomial coeff * x_1^e_1 ... x_n^e_n"""
    exponents: List[int] = Field(..., description="Exponent of each coordinate, length n")
    coeff: float = Field(..., description="Real coefficient")

    @field_validator("exponents")
    @classmethod
    def _non_negative(cls, value: List[int]) -> List[int]:
        if any(e < 0 for e in value):
            raise ValueError("exponents must be non-negative")
        return value


FieldEntry = Union[float, List[PolynomialTerm]]


class MetricFieldSpec(ScenarioModel):
    """Riemannian metric a_ij(x); each entry is a constant or a list of polynomial terms"""
    entries: List[List[FieldEntry]] = Field(..., description="n x n symmetric matrix of entries")

    class Config:
        json_schema_extra = {
            "example": {"entries": [[1.0, 0.0], [0.0, [{"exponents": [0, 0], "coeff": 1.0},
                                                      {"exponents": [2, 0], "coeff": 0.1}]]]}
        }


class OneFormFieldSpec(ScenarioModel):
    """1-form b_i(x); each entry is a constant or a list of polynomial terms"""
    entries: List[FieldEntry] = Field(..., description="n entries")


class FamilySpec(ScenarioModel):
    """Randers-change family and its parameter"""
    name: Literal["kropina", "generalized-kropina", "square", "matsumoto", "exponential", "infinite-series"] = Field(
        ..., description="Canonical family name")
    m: float = Field(2.0, description="Exponent of the generalized Kropina family, m not in {0, -1}")

    @model_validator(mode="after")
    def _check_m(self) -> "FamilySpec":
        if self.name == "generalized-kropina" and self.m in (0.0, -1.0):
            raise ValueError("generalized-kropina requires m not in {0, -1}")
        return self


class SamplePoint(ScenarioModel):
    """Explicit sample (x, y) on the slit tangent bundle"""
    x: List[float] = Field(..., description="Point in R^n")
    y: List[float] = Field(..., description="Tangent vector in R^n minus the origin")


class RandomSampling(ScenarioModel):
    """Seeded admissible random samples"""
    count: int = Field(..., ge=1, description="Number of samples")
    seed: int = Field(0, description="Seed of numpy.random.default_rng")
    box: float = Field(0.5, gt=0.0, description="x is drawn uniformly from [-box, box]^n")
    strategy: Literal["family-window", "domain-only"] = Field(
        "family-window", description="Accept on the family's s-window or only on its domain check")


class Tolerances(ScenarioModel):
    """Optional tolerance overrides; unset values use the scale-aware defaults"""
    tol_cond: Optional[float] = Field(None, gt=0.0, description="Condition residual tolerance")
    tol_direct: Optional[float] = Field(None, gt=0.0, description="Direct residual tolerance")
    gbar: float = Field(1e-8, gt=0.0, description="Relative tolerance of g_bar against the Hessian oracle")
    cartan: float = Field(1e-7, gt=0.0, description="Relative tolerance of C_bar against the third-derivative oracle")
    cartan_contraction: float = Field(1e-9, gt=0.0, description="Tolerance of C_bar_ijk y^k")
    gradient: float = Field(1e-10, gt=0.0, description="Relative tolerance of F_bar_y against the oracle")
    euler: float = Field(1e-10, gt=0.0, description="Relative tolerance of g_bar(y, y) = F_bar^2")
    homogeneity: float = Field(1e-12, gt=0.0, description="Relative tolerance of F_bar(x, ly) = l F_bar(x, y)")
    inverse: float = Field(1e-8, gt=0.0, description="Tolerance of g_bar^-1 g_bar - I")
    determinant: float = Field(1e-8, gt=0.0, description="Relative tolerance of the determinant relation")
    identity: float = Field(1e-8, gt=0.0, description="Relative tolerance of the flatness identity assembly")
    cascade_floor: float = Field(1e-6, gt=0.0, description="Inverse checks are skipped below this cascade scalar")


class MinkowskiSpec(ScenarioModel):
    """Grid check of the Minkowski-norm inequalities"""
    b: float = Field(0.3, gt=0.0, description="Norm bound b of the 1-form")
    grid: Optional[List[float]] = Field(None, description="Explicit s grid; defaults to `points` values on [-b, b]")
    points: int = Field(41, ge=2, description="Grid size when no explicit grid is given")
    shape: Literal["family", "randers", "exponential"] = Field(
        "family", description="phi of the scenario family, or a reference shape")


class Scenario(ScenarioModel):
    """A verification scenario: fields, family, samples and tolerances"""
    n: int = Field(..., ge=2, le=8, description="Manifold dimension")
    metric_field: MetricFieldSpec
    one_form_field: OneFormFieldSpec
    family: FamilySpec
    samples: List[SamplePoint] = Field(default_factory=list, description="Explicit samples")
    random_samples: Optional[RandomSampling] = Field(None, description="Seeded random samples")
    tolerances: Tolerances = Field(default_factory=Tolerances)
    max_degree: int = Field(4, ge=0, description="Largest total degree allowed in polynomial entries")
    x_derivatives: Literal["exact", "finite-difference"] = Field(
        "exact", description="Exact polynomial x-derivatives or the central-difference fallback")
    minkowski: Optional[MinkowskiSpec] = None

    class Config:
        json_schema_extra = {
            "example": {
                "n": 2,
                "metric_field": {"entries": [[1.0, 0.0], [0.0, 1.0]]},
                "one_form_field": {"entries": [0.5, 0.0]},
                "family": {"name": "kropina"},
                "samples": [{"x": [0.0, 0.0], "y": [1.0, 0.2]}],
            }
        }

    @model_validator(mode="after")
    def _check_shapes(self) -> "Scenario":
        n = self.n
        rows = self.metric_field.entries
        if len(rows) != n or any(len(row) != n for row in rows):
            raise ValueError(f"metric_field.entries must be {n}x{n}")
        if len(self.one_form_field.entries) != n:
            raise ValueError(f"one_form_field.entries must have {n} entries")
        entries = [("metric_field", (i, j), rows[i][j]) for i in range(n) for j in range(n)]
        entries += [("one_form_field", (i,), e) for i, e in enumerate(self.one_form_field.entries)]
        for owner, index, entry in entries:
            if isinstance(entry, list):
                for term in entry:
                    if len(term.exponents) != n:
                        raise ValueError(f"{owner}.entries{list(index)}: exponents need length {n}")
                    if sum(term.exponents) > self.max_degree:
                        raise ValueError(f"{owner}.entries{list(index)}: degree exceeds max_degree={self.max_degree}")
        for i in range(n):
            for j in range(i + 1, n):
                if _canonical(rows[i][j], n) != _canonical(rows[j][i], n):
                    raise ValueError(f"metric_field.entries not symmetric at ({i}, {j})")
        for k, sample in enumerate(self.samples):
            if len(sample.x) != n or len(sample.y) != n:
                raise ValueError(f"samples[{k}] must have x and y of length {n}")
        if not self.samples and self.random_samples is None:
            raise ValueError("provide explicit samples, random_samples, or both")
        return self


def _canonical(entry: FieldEntry, n: int) -> Dict:
    if isinstance(entry, list):
        collected: Dict = {}
        for term in entry:
            key = tuple(term.exponents)
            collected[key] = collected.get(key, 0.0) + term.coeff
        return {k: v for k, v in collected.items() if v != 0.0}
    return {(0,) * n: float(entry)} if float(entry) != 0.0 else {}


# report models

class CheckDelta(BaseModel):
    """One oracle comparison and the tolerance it was judged against"""
    name: str = Field(..., description="Check identifier")
    value: Optional[float] = Field(None, description="Measured discrepancy")
    tolerance: float = Field(..., description="Tolerance used")
    passed: bool = Field(..., description="value <= tolerance, or skipped")
    skipped: bool = Field(False, description="Check not applicable at this sample")
    note: Optional[str] = Field(None, description="Reason for skipping")


class TensorBlock(BaseModel):
    """Closed-form tensors of the changed metric at one sample"""
    fbar: float
    gradient: List[float]
    rho: List[float] = Field(..., description="rho_0..rho_3")
    gbar: List[List[float]]
    angular: List[List[float]] = Field(..., description="h_bar_ij = g_bar_ij - l_bar_i l_bar_j")
    cartan: List[List[List[float]]]


class InverseBlock(BaseModel):
    """Cascade scalars and the inverse metric at one sample"""
    gbar_inverse: Optional[List[List[float]]] = None
    mixing: Dict[str, float] = Field(default_factory=dict, description="lam, mu, nu, c_sq, X, kappa, d_sq, Y, b_tilde_sq")
    determinant_ratio: Optional[float] = None


class ConditionResult(BaseModel):
    """A flatness condition system evaluated at one sample"""
    mode: Literal["projective", "dual"]
    family: str
    dispatched_to: Optional[str] = None
    residuals: Dict[str, float] = Field(..., description="Max-abs residual per condition key")
    residual_vectors: Dict[str, List[float]]
    direct_residual: List[float]
    direct_max: float
    identity_delta: float
    tol_cond: float
    tol_direct: float
    verdict: Literal["flat", "not-flat", "inconclusive"]
    projective_factor: Optional[float] = None
    spray: Optional[List[float]] = None


class SampleResult(BaseModel):
    """Everything computed at one sample"""
    index: int
    x: List[float]
    y: List[float]
    status: Literal["ok", "failed", "error"]
    error: Optional[str] = None
    error_type: Optional[str] = None
    tensors: Optional[TensorBlock] = None
    inverse: Optional[InverseBlock] = None
    conditions: List[ConditionResult] = Field(default_factory=list)
    deltas: List[CheckDelta] = Field(default_factory=list)


class MinkowskiResult(BaseModel):
    """Grid report of the Minkowski-norm inequalities"""
    shape: str
    b: float
    s_grid: List[float]
    positive: List[bool]
    strong_convexity: List[bool]
    regularity: List[bool]
    min_positive: Optional[float]
    min_strong_convexity: Optional[float]
    min_regularity: Optional[float]
    holds: bool
    note: str = "b0 for the changed families is not given by theory; grid result only"


class ReportSummary(BaseModel):
    samples: int
    errors: int
    failed_checks: int
    verdicts: Dict[str, Dict[str, int]] = Field(default_factory=dict)
    all_passed: bool


class Report(BaseModel):
    """Machine-readable result of one frl command"""
    version: str = REPORT_VERSION
    command: str
    generated_at: Optional[str] = None
    scenario: Dict
    samples: List[SampleResult] = Field(default_factory=list)
    minkowski: Optional[MinkowskiResult] = None
    summary: ReportSummary

    class Config:
        json_schema_extra = {
            "example": {
                "version": REPORT_VERSION,
                "command": "flatness",
                "scenario": {"n": 2, "family": {"name": "kropina", "m": 2.0}},
                "samples": [],
                "summary": {"samples": 1, "errors": 0, "failed_checks": 0,
                            "verdicts": {"projective": {"flat": 1}}, "all_passed": True},
            }
        }
