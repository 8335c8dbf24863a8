"""
Base Metrics - Riemannian data a_ij(x), the 1-form b_i(x), the base bundle and jet quantities
"""

import logging
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
from scipy.linalg import LinAlgError, cho_factor, cho_solve

from services.errors import DomainViolation, InputError, NumericError
from services.polynomial import Polynomial
from services.taylor import sqrt
from services.tensor_core import ScalarField, as_vector, check_tangent, flatness_pair

logger = logging.getLogger(__name__)

PD_PIVOT_RATIO = 1e-12


@dataclass(frozen=True)
class MetricField:
    """Symmetric a_ij(x): polynomial entries, or a callable for the finite-difference fallback"""

    n: int
    entries: Optional[Tuple[Tuple[Polynomial, ...], ...]] = None
    function: Optional[Callable[[np.ndarray], np.ndarray]] = None

    def __post_init__(self):
        if (self.entries is None) == (self.function is None):
            raise InputError("a metric field needs exactly one of polynomial entries or a callable")
        if self.entries is not None:
            if len(self.entries) != self.n or any(len(row) != self.n for row in self.entries):
                raise InputError(f"metric field entries must be {self.n}x{self.n}")
            for i in range(self.n):
                for j in range(i + 1, self.n):
                    if self.entries[i][j] != self.entries[j][i]:
                        raise InputError(f"metric field is not symmetric at entry ({i}, {j})")

    @classmethod
    def constant(cls, matrix) -> "MetricField":
        matrix = np.asarray(matrix, dtype=float)
        n = matrix.shape[0]
        return cls(n, tuple(tuple(Polynomial.constant(matrix[i, j], n) for j in range(n)) for i in range(n)))

    @classmethod
    def from_polynomials(cls, entries: Sequence[Sequence[Polynomial]]) -> "MetricField":
        return cls(len(entries), tuple(tuple(row) for row in entries))

    @classmethod
    def from_callable(cls, function: Callable[[np.ndarray], np.ndarray], n: int) -> "MetricField":
        return cls(n, function=function)

    @property
    def exact(self) -> bool:
        return self.entries is not None

    @property
    def is_constant(self) -> bool:
        return self.exact and all(p.is_constant for row in self.entries for p in row)

    def components(self, xs: Sequence) -> List[List]:
        """Entries at x; x components may be Taylor jets for polynomial fields"""
        if self.exact:
            return [[p(xs) for p in row] for row in self.entries]
        matrix = np.asarray(self.function(np.array([float(v) for v in xs])), dtype=float)
        return matrix.tolist()

    def matrix(self, x) -> np.ndarray:
        matrix = np.array(self.components(as_vector(x, "x")), dtype=float)
        if matrix.shape != (self.n, self.n):
            raise NumericError(f"metric field returned shape {matrix.shape}, expected {(self.n, self.n)}")
        if not np.all(np.isfinite(matrix)):
            raise NumericError("metric field is not finite at x")
        return matrix

    def partial(self, k: int) -> "MetricField":
        if not self.exact:
            raise InputError("exact partial derivatives need polynomial entries")
        return MetricField(self.n, tuple(tuple(p.partial(k) for p in row) for row in self.entries))

    def quadratic(self, xs: Sequence, ys: Sequence):
        """A = a_ij(x) y^i y^j"""
        a = self.components(xs)
        total = 0.0
        for i in range(self.n):
            row = 0.0
            for j in range(self.n):
                row = row + a[i][j] * ys[j]
            total = total + row * ys[i]
        return total


@dataclass(frozen=True)
class OneFormField:
    """Covector b_i(x): polynomial entries, or a callable for the finite-difference fallback"""

    n: int
    entries: Optional[Tuple[Polynomial, ...]] = None
    function: Optional[Callable[[np.ndarray], np.ndarray]] = None

    def __post_init__(self):
        if (self.entries is None) == (self.function is None):
            raise InputError("a 1-form field needs exactly one of polynomial entries or a callable")
        if self.entries is not None and len(self.entries) != self.n:
            raise InputError(f"1-form field needs {self.n} entries, got {len(self.entries)}")

    @classmethod
    def constant(cls, vector) -> "OneFormField":
        vector = np.asarray(vector, dtype=float)
        n = vector.shape[0]
        return cls(n, tuple(Polynomial.constant(v, n) for v in vector))

    @classmethod
    def from_polynomials(cls, entries: Sequence[Polynomial]) -> "OneFormField":
        return cls(len(entries), tuple(entries))

    @classmethod
    def from_callable(cls, function: Callable[[np.ndarray], np.ndarray], n: int) -> "OneFormField":
        return cls(n, function=function)

    @property
    def exact(self) -> bool:
        return self.entries is not None

    @property
    def is_constant(self) -> bool:
        return self.exact and all(p.is_constant for p in self.entries)

    def components(self, xs: Sequence) -> List:
        if self.exact:
            return [p(xs) for p in self.entries]
        return np.asarray(self.function(np.array([float(v) for v in xs])), dtype=float).tolist()

    def vector(self, x) -> np.ndarray:
        vector = np.array(self.components(as_vector(x, "x")), dtype=float)
        if vector.shape != (self.n,) or not np.all(np.isfinite(vector)):
            raise NumericError("1-form field is not finite at x")
        return vector

    def partial(self, k: int) -> "OneFormField":
        if not self.exact:
            raise InputError("exact partial derivatives need polynomial entries")
        return OneFormField(self.n, tuple(p.partial(k) for p in self.entries))

    def pairing(self, xs: Sequence, ys: Sequence):
        """beta = b_i(x) y^i"""
        b = self.components(xs)
        total = 0.0
        for i in range(self.n):
            total = total + b[i] * ys[i]
        return total


@dataclass(frozen=True)
class BaseBundle:
    """Base square-root metric quantities at (x, y)"""

    x: np.ndarray
    y: np.ndarray
    F: float
    beta: float
    b_sq: float
    s: float
    g: np.ndarray
    g_inv: np.ndarray
    ell: np.ndarray
    y_lower: np.ndarray
    h: np.ndarray
    m: np.ndarray
    cartan: np.ndarray
    b: np.ndarray
    b_up: np.ndarray

    @property
    def n(self) -> int:
        return len(self.y)


@dataclass(frozen=True)
class JetData:
    """First x-derivative jets of A and beta contracted with y"""

    A: float
    A_l: np.ndarray
    A_0: float
    A_0l: np.ndarray
    A_xl: np.ndarray
    beta: float
    beta_l: np.ndarray
    beta_0: float
    beta_0l: np.ndarray
    beta_xl: np.ndarray


@dataclass(frozen=True)
class PhiSpec:
    """Shape function phi(s) of an (alpha, beta)-metric F = alpha * phi(beta / alpha)"""

    phi: Callable[[float], float]
    dphi: Callable[[float], float]
    ddphi: Callable[[float], float]
    b0: Optional[float] = None
    name: str = "phi"

    @classmethod
    def randers(cls) -> "PhiSpec":
        return cls(lambda s: 1.0 + s, lambda s: 1.0, lambda s: 0.0, b0=1.0, name="randers")

    @classmethod
    def exponential(cls) -> "PhiSpec":
        return cls(np.exp, np.exp, np.exp, name="exponential")


@dataclass(frozen=True)
class MinkowskiReport:
    """Per-grid-point truth of the three Minkowski-norm inequalities"""

    b: float
    s_grid: List[float]
    positive: List[bool]
    strong_convexity: List[bool]
    regularity: List[bool]
    min_positive: float
    min_strong_convexity: float
    min_regularity: float

    @property
    def holds(self) -> bool:
        return all(self.positive) and all(self.strong_convexity) and all(self.regularity)


def positive_definite_factor(a: np.ndarray):
    """Cholesky factor of a, rejecting matrices whose smallest pivot is tiny"""
    n = a.shape[0]
    try:
        factor = cho_factor(a, lower=True, check_finite=True)
    except (LinAlgError, ValueError):
        raise DomainViolation("metric not positive-definite at x", condition="a(x) not PD")
    pivots = np.diag(factor[0]) ** 2
    if pivots.min() <= PD_PIVOT_RATIO * np.trace(a) / n:
        raise DomainViolation("metric not positive-definite at x", condition="a(x) not PD")
    return factor


def eval_alpha(a: MetricField, x, y) -> float:
    x, y = as_vector(x, "x"), as_vector(y, "y")
    check_tangent(y)
    matrix = a.matrix(x)
    positive_definite_factor(matrix)
    return float(np.sqrt(y @ matrix @ y))


def eval_beta(b: OneFormField, x, y) -> float:
    x, y = as_vector(x, "x"), as_vector(y, "y")
    return float(b.vector(x) @ y)


def base_bundle(a: MetricField, b: OneFormField, x, y) -> BaseBundle:
    x, y = as_vector(x, "x"), as_vector(y, "y")
    check_tangent(y)
    g = a.matrix(x)
    factor = positive_definite_factor(g)
    g_inv = cho_solve(factor, np.eye(a.n))
    g_inv = 0.5 * (g_inv + g_inv.T)

    y_lower = g @ y
    F = float(np.sqrt(y_lower @ y))
    ell = y_lower / F
    b_vec = b.vector(x)
    beta = float(b_vec @ y)
    b_up = g_inv @ b_vec
    return BaseBundle(
        x=x,
        y=y,
        F=F,
        beta=beta,
        b_sq=float(b_vec @ b_up),
        s=beta / F,
        g=g,
        g_inv=g_inv,
        ell=ell,
        y_lower=y_lower,
        h=g - np.outer(ell, ell),
        m=b_vec - (beta / F ** 2) * y_lower,
        cartan=np.zeros((a.n,) * 3),
        b=b_vec,
        b_up=b_up,
    )


def quadratic_field(a: MetricField) -> ScalarField:
    """A(x, y) = a_ij(x) y^i y^j"""
    return ScalarField(a.quadratic, exact_x=a.exact, name="A")


def alpha_field(a: MetricField) -> ScalarField:
    return ScalarField(lambda xs, ys: sqrt(a.quadratic(xs, ys)), exact_x=a.exact, name="alpha")


def beta_field(b: OneFormField) -> ScalarField:
    return ScalarField(b.pairing, exact_x=b.exact, name="beta")


def jet_data(a: MetricField, b: OneFormField, x, y, force_finite_difference: bool = False) -> JetData:
    x, y = as_vector(x, "x"), as_vector(y, "y")
    check_tangent(y)
    n = len(y)
    g = a.matrix(x)
    b_vec = b.vector(x)

    if a.exact and b.exact and not force_finite_difference:
        A_xl = np.empty(n)
        A_0l = np.zeros(n)
        beta_xl = np.empty(n)
        beta_0l = np.zeros(n)
        for k in range(n):
            da = a.partial(k).matrix(x)
            db = b.partial(k).vector(x)
            A_xl[k] = y @ da @ y
            A_0l = A_0l + 2.0 * y[k] * (da @ y)
            beta_xl[k] = db @ y
            beta_0l = beta_0l + y[k] * db
    else:
        A_xl, A_0l = flatness_pair(_without_exact_x(quadratic_field(a)), x, y)
        beta_xl, beta_0l = flatness_pair(_without_exact_x(beta_field(b)), x, y)

    jets = JetData(
        A=float(y @ g @ y),
        A_l=2.0 * (g @ y),
        A_0=float(A_xl @ y),
        A_0l=A_0l,
        A_xl=A_xl,
        beta=float(b_vec @ y),
        beta_l=b_vec,
        beta_0=float(beta_xl @ y),
        beta_0l=beta_0l,
        beta_xl=beta_xl,
    )
    for name in ("A_0l", "A_xl", "beta_0l", "beta_xl"):
        if not np.all(np.isfinite(getattr(jets, name))):
            raise NumericError(f"jet {name} is not finite")
    return jets


def _without_exact_x(field: ScalarField) -> ScalarField:
    return ScalarField(field.evaluate, exact_x=False, name=field.name)


def minkowski_check(phi: PhiSpec, b: float, s_grid: Sequence[float]) -> MinkowskiReport:
    """Grid check of phi > 0, phi - s phi' > 0 and phi - s phi' + (b^2 - s^2) phi'' > 0"""
    if phi.b0 is not None and not b < phi.b0:
        raise InputError(f"b = {b} must stay below the admissibility bound b0 = {phi.b0}")
    grid = [float(s) for s in s_grid]
    for s in grid:
        if abs(s) > b:
            raise InputError(f"grid point s = {s} lies outside |s| <= b = {b}")

    first, second, third = [], [], []
    with np.errstate(all="ignore"):
        for s in grid:
            point = np.float64(s)
            value, slope, curvature = phi.phi(point), phi.dphi(point), phi.ddphi(point)
            first.append(float(value))
            third.append(float(value - s * slope))
            second.append(float(value - s * slope + (b * b - s * s) * curvature))

    def holds(margins):
        return [bool(np.isfinite(v) and v > 0.0) for v in margins]

    def minimum(margins):
        finite = [v for v in margins if np.isfinite(v)]
        if len(finite) < len(margins) or not finite:
            return float("-inf")
        return min(finite)

    report = MinkowskiReport(
        b=float(b),
        s_grid=grid,
        positive=holds(first),
        strong_convexity=holds(second),
        regularity=holds(third),
        min_positive=minimum(first),
        min_strong_convexity=minimum(second),
        min_regularity=minimum(third),
    )
    logger.debug("minkowski check %s on %d points: holds=%s", phi.name, len(grid), report.holds)
    return report
