"""
Pydantic models shared across walker modules
Configuration specs for the numeric engines and their result records
"""
from __future__ import annotations

from enum import Enum
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field, computed_field, model_validator

# =============================================================================
# ENUMS & TYPES
# =============================================================================

class ConstBasis(str, Enum):
    """Named constant bases for exact linear combinations"""
    ONE = "one"            # {1}
    W3 = "w3"              # {A, 1/(pi^2 A)}
    W4 = "w4"              # {A4, B4}
    R5 = "r5"              # {r50, 1/(pi^4 r50)}
    CLAUSEN = "clausen"    # {1, sqrt3/pi, Cl(pi/3)/pi}
    ZETA3 = "zeta3"        # {1, 1/pi^2, zeta(3)/pi^2}

BASIS_LABELS: Dict[str, List[str]] = {
    ConstBasis.ONE.value: ["1"],
    ConstBasis.W3.value: ["A", "1/(pi^2 A)"],
    ConstBasis.W4.value: ["A4", "B4"],
    ConstBasis.R5.value: ["r50", "1/(pi^4 r50)"],
    ConstBasis.CLAUSEN.value: ["1", "sqrt3/pi", "Cl(pi/3)/pi"],
    ConstBasis.ZETA3.value: ["1", "1/pi^2", "zeta(3)/pi^2"],
}

class Parity(str, Enum):
    """Symmetry of a piecewise function stored on x >= 0"""
    EVEN = "even"
    NONE = "none"

class Representation(str, Enum):
    """How a density is evaluated"""
    PIECEWISE = "piecewise-exact"
    HYPERGEOMETRIC = "hypergeometric"
    TAYLOR = "taylor-at-0"
    CHI = "asymptotic-chi"
    QUADRATURE = "quadrature"

class DensityMethod(str, Enum):
    """Evaluation path requested by callers"""
    AUTO = "auto"
    EXACT = "exact"
    CLOSED = "closed"
    QUADRATURE = "quad"

class OutputFormat(str, Enum):
    CSV = "csv"
    JSON = "json"

class GFKind(str, Enum):
    """Generating functions checked against moment series"""
    W2 = "w2"
    W3 = "w3"
    W4DIM4 = "w4dim4"
    W4DIM2 = "w4dim2"

class KSReference(str, Enum):
    CLOSED = "closed"
    QUAD = "quad"
    NONE = "none"

# =============================================================================
# NUMERIC ENGINE SPECS
# =============================================================================

class HypSeriesSpec(BaseModel):
    """Parameters of a generalized hypergeometric series pFq"""
    upper: List[Any] = Field(default_factory=list, description="Upper parameters a_1..a_p")
    lower: List[Any] = Field(default_factory=list, description="Lower parameters b_1..b_q")
    argument: Any = Field(..., description="Series argument z")
    max_terms: int = Field(100_000, ge=1, description="Hard cap on summed terms")
    tol: Optional[Any] = Field(None, description="Relative stopping tolerance; default 10^-dps")

    model_config = ConfigDict(arbitrary_types_allowed=True)

    @computed_field
    @property
    def terminating_index(self) -> Optional[int]:
        """Index m at which an upper parameter -m stops the series"""
        stops = [-int(a) for a in self.upper if _is_nonpositive_integer(a)]
        return min(stops) if stops else None

    @model_validator(mode="after")
    def _lower_parameters_defined(self):
        stop = self.terminating_index
        for b in self.lower:
            if _is_nonpositive_integer(b):
                if stop is None or stop > -int(b):
                    raise ValueError(f"lower parameter {b} is a pole of the series")
        return self


class QuadSpec(BaseModel):
    """Configuration of the oscillatory Bessel-integral oracle"""
    boost_k: Optional[int] = Field(None, ge=0, description="Derivative boost order; None picks the default rule")
    tol: float = Field(1e-10, gt=0, lt=1e-2, description="Target absolute tolerance")
    max_zones: int = Field(10_000, ge=8, description="Largest number of kernel zones summed")
    dps: Optional[int] = Field(None, ge=15, le=200, description="Working digits; None uses settings.quad_dps")
    nodes: int = Field(20, ge=8, le=80, description="Gauss-Legendre nodes per panel")
    extra_zones: int = Field(5, ge=3, le=40, description="Zones past the cutoff used for averaging")


class QuadResult(BaseModel):
    """Value of a Bessel integral with its error estimate"""
    value: Any = Field(..., description="Integral value (mpf)")
    error: Any = Field(..., description="Estimated absolute error (mpf)")
    boost_k: int = Field(0, description="Boost order actually used")
    zones: int = Field(0, description="Zones summed before the analytic tail")
    cutoff: float = Field(0.0, description="Cutoff T where the analytic tail starts")
    regularized: bool = Field(False, description="True when the tail was continued analytically")

    model_config = ConfigDict(arbitrary_types_allowed=True)

    def __float__(self) -> float:
        return float(self.value)


class MomentPoint(BaseModel):
    """One evaluated moment W_n(nu; s)"""
    n_steps: int = Field(..., ge=1)
    nu: str
    s: Any = Field(..., description="Order, exact when given as a rational")
    value: Any = Field(..., description="mpf value")
    exact: Optional[Any] = Field(None, description="Fraction when the moment is rational")
    combo: Optional[Any] = Field(None, description="ConstCombo for odd moments over a constant basis")
    method: str = Field(..., description="Path that produced the value")
    est_error: Optional[Any] = None

    model_config = ConfigDict(arbitrary_types_allowed=True)


class DensityPoint(BaseModel):
    """One evaluated density or CDF value"""
    x: Any = Field(..., description="Evaluation point, exact when given as a rational")
    value: Any = Field(..., description="Fraction on exact paths, mpf otherwise")
    method: Representation = Field(..., description="Path that produced the value")
    est_error: Optional[Any] = Field(None, description="Error estimate of numeric paths")

    model_config = ConfigDict(arbitrary_types_allowed=True)

class GFCheck(BaseModel):
    """Closed generating function against its truncated moment series"""
    kind: GFKind
    nu: str = Field(..., description="Dimension parameter as a rational string")
    x: float
    kmax: int = Field(..., ge=0)
    closed: Any = Field(..., description="Closed-form side (mpf)")
    series: Any = Field(..., description="Truncated moment series (mpf)")
    truncation_bound: float = Field(..., description="Bound on the dropped series terms")

    model_config = ConfigDict(arbitrary_types_allowed=True)

    @computed_field
    @property
    def residual(self) -> float:
        return float(abs(self.closed - self.series))

# =============================================================================
# MONTE CARLO RECORDS
# =============================================================================

class Estimate(BaseModel):
    """Sample mean with its standard error"""
    mean: float
    stderr: float

    def within(self, target: float, sigmas: float = 4.0) -> bool:
        return abs(self.mean - target) <= sigmas * max(self.stderr, 1e-300)


class KSResult(BaseModel):
    """Kolmogorov-Smirnov comparison against a reference CDF"""
    statistic: float
    critical: float
    pvalue: float
    samples: int
    seed: int

    @computed_field
    @property
    def passed(self) -> bool:
        return self.statistic < self.critical


class WalkStats(BaseModel):
    """Monte Carlo summary of final distances"""
    n_steps: int = Field(..., ge=1)
    dim: int = Field(..., ge=2)
    samples: int = Field(..., ge=2)
    seed: int = Field(..., ge=0)
    rng_algorithm: str = Field("Philox", description="numpy bit generator used for every chunk")
    moment_estimates: Dict[str, Estimate] = Field(default_factory=dict, description="s -> E[d^s]")
    cdf_estimates: Dict[str, Estimate] = Field(default_factory=dict, description="x -> P(d <= x)")
    ks: Optional[KSResult] = None
    ks_rerun: Optional[KSResult] = None

    @computed_field
    @property
    def ks_statistic(self) -> Optional[float]:
        return self.ks.statistic if self.ks is not None else None

# =============================================================================
# VERIFICATION RECORDS
# =============================================================================

class CheckResult(BaseModel):
    """One acceptance check"""
    name: str
    passed: bool
    detail: str = ""


class SuiteReport(BaseModel):
    """Outcome of a verification suite"""
    suite: str
    checks: List[CheckResult] = Field(default_factory=list)

    @computed_field
    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, name: str, passed: bool, detail: str = "") -> None:
        self.checks.append(CheckResult(name=name, passed=bool(passed), detail=detail))

# =============================================================================
# HELPER FUNCTIONS
# =============================================================================

def _is_nonpositive_integer(value: Any) -> bool:
    try:
        if hasattr(value, "denominator") and value.denominator != 1:
            return False
        return value <= 0 and int(value) == value
    except (TypeError, ValueError):
        return False
