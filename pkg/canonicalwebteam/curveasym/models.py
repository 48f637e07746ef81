# Standard library
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import NamedTuple, Optional, Tuple

# Local
from canonicalwebteam.curveasym.exceptions import InputError


class Point2(NamedTuple):
    x: float
    y: float


Vec2 = Point2


class Verdict(str, Enum):
    HOLDS = "holds"
    VIOLATED = "violated"
    INCONCLUSIVE = "inconclusive"
    UNRESOLVED = "unresolved"


class Trend(str, Enum):
    RISING = "rising"
    FALLING = "falling"
    FLAT = "flat"


@dataclass(frozen=True)
class Domain:
    """
    Parameter interval [a, b) of a curve; `a` may be -inf, `b` +inf
    """

    a: float
    b: float

    def __post_init__(self):
        if math.isnan(self.a) or math.isnan(self.b) or not self.a < self.b:
            raise InputError(f"Domain needs a < b, got [{self.a}, {self.b})")

    @property
    def finite_start(self):
        return math.isfinite(self.a)

    def contains(self, t):
        return self.a < t < self.b

    def check(self, t, allow_start=False):
        if allow_start and self.finite_start and t == self.a:
            return
        if not self.contains(t):
            raise InputError(
                f"t={t} lies outside the domain ({self.a}, {self.b})"
            )


@dataclass(frozen=True)
class MarkedPoint:
    """
    A parameter in S(t) or T(t).

    `log_ratio` is ln(D(tau)/D(t)); for polar curves it comes from the
    log-radius increment so it stays exact where D underflows.
    """

    tau: float
    kind: str
    d_tau: float
    residual: float
    bracket: Tuple[float, float]
    log_ratio: float


@dataclass(frozen=True)
class ChordReport:
    t: float
    d_t: float
    points: Tuple[MarkedPoint, ...]
    ds: Optional[float] = None
    dt_sup: Optional[float] = None
    degenerate: bool = False
    a_eff: float = -math.inf
    n_grid: int = 0
    ratio_support: Optional[float] = None
    ratio_tangent: Optional[float] = None
    truncation_bound: float = 0.0

    @property
    def taus(self):
        return [point.tau for point in self.points]


@dataclass(frozen=True)
class SequenceSpec:
    """
    How t approaches a: `geometric_to_finite` gives
    t_k = a + (start - a) * ratio**k, `exponential_to_minus_inf`
    gives t_k = -start * ratio**k. Without `a` the start of the domain
    is 0 for the first and -inf for the second.
    """

    mode: str
    start: float
    ratio: float
    count: int
    a: Optional[float] = None
    b: float = math.inf

    def __post_init__(self):
        if self.a is None:
            a = -math.inf if self.mode == "exponential_to_minus_inf" else 0.0
            object.__setattr__(self, "a", a)


@dataclass(frozen=True)
class RatioSample:
    t: float
    d: float = math.nan
    ds: float = math.nan
    dt: float = math.nan
    ratio_support: float = math.nan
    ratio_tangent: float = math.nan
    unbounded: bool = False
    truncation_bound: float = 0.0
    failed: bool = False
    error: Optional[str] = None


@dataclass
class RatioTrace:
    samples: list = field(default_factory=list)

    @property
    def completed(self):
        return [sample for sample in self.samples if not sample.failed]

    @property
    def failures(self):
        return [
            f"t={sample.t!r}: {sample.error}"
            for sample in self.samples
            if sample.failed
        ]

    def ratios(self, key="ratio_support"):
        return [
            math.inf if sample.unbounded else getattr(sample, key)
            for sample in self.completed
        ]

    def running_max(self, key="ratio_support"):
        running = []
        best = -math.inf

        for value in self.ratios(key):
            if not math.isnan(value):
                best = max(best, value)
            running.append(best)

        return running


@dataclass(frozen=True)
class LimsupEstimate:
    value: float
    window: int
    trend: Trend
    all_samples_max: float
    unbounded: bool = False


@dataclass(frozen=True)
class MeanValueResult:
    x: float
    tau: float
    residual: float
    ratio_h: float
    ratio_t: float
    kind: str
    note: Optional[str] = None


@dataclass(frozen=True)
class CEstimate:
    """
    Sampled surrogate of the essential upper limit: valid only when
    the quotient is piecewise continuous, which `caveat` says.
    """

    value: float
    samples_used: int
    sup_grid: Tuple[Tuple[float, float], ...]
    caveat: str = (
        "sampled tail max; equals the essential upper limit only for "
        "piecewise continuous quotients"
    )
    warnings: Tuple[str, ...] = ()


@dataclass(frozen=True)
class BoundCheck:
    """
    A tail estimate of `statistic` held against `bound`; `direction`
    says whether the bound is from below ("lower") or above ("upper")
    """

    statistic: str
    estimate: LimsupEstimate
    bound: float
    verdict: Verdict
    direction: str = "lower"
    samples: Tuple[Tuple[float, float], ...] = ()


@dataclass
class MeanValueTrace:
    results: list = field(default_factory=list)
    failures: list = field(default_factory=list)
    checks: list = field(default_factory=list)

    def column(self, key):
        return [getattr(result, key) for result in self.results]


@dataclass(frozen=True)
class ArcSample:
    """
    Arc-length analogue of RatioSample: L(t) and the largest L(tau)
    over the support (LS) and tangent (LT) points
    """

    t: float
    length: float = math.nan
    ls: float = math.nan
    lt: float = math.nan
    ratio_ls: float = math.nan
    ratio_lt: float = math.nan
    unbounded: bool = False
    failed: bool = False
    error: Optional[str] = None


@dataclass(frozen=True)
class LengthSample:
    t: float
    length: float
    d: float
    ratio: float


@dataclass(frozen=True)
class Eq6Report:
    """
    L(t)/D(t) along a sequence; `verdict` holds when the tail stays
    within `band` of 1
    """

    samples: Tuple[LengthSample, ...]
    band: float
    deviation: float
    verdict: Verdict


@dataclass(frozen=True)
class ConjectureReport:
    trace: RatioTrace
    estimates: Tuple[Tuple[str, LimsupEstimate], ...]
    verdict: Verdict
    n_grid: int
    attempts: int
