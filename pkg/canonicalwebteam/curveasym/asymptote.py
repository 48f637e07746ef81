# Standard library
import logging
import math
from concurrent.futures import ThreadPoolExecutor

# Packages
import numpy as np

# Local
from canonicalwebteam.curveasym.exceptions import (
    CurveAsymError,
    InputError,
    NumericalError,
)
from canonicalwebteam.curveasym.models import (
    LimsupEstimate,
    RatioSample,
    RatioTrace,
    SequenceSpec,
    Trend,
    Verdict,
)
from canonicalwebteam.curveasym.support import SupportConfig, support_report


logger = logging.getLogger(__name__)

INVERSE_E = math.exp(-1.0)
WINDOW = 8
EPSILON = 1e-3

SEQUENCE_MODES = ("geometric_to_finite", "exponential_to_minus_inf")


def make_sequence(spec):
    """
    The parameters t_k of a sequence approaching the domain start.

    geometric_to_finite: t_k = a + (start - a) * ratio**k, 0 < ratio < 1
    exponential_to_minus_inf: t_k = -start * ratio**k, ratio > 1
    """

    if spec.mode not in SEQUENCE_MODES:
        raise InputError(f"Unknown sequence mode {spec.mode!r}")

    if (
        not math.isfinite(spec.count)
        or int(spec.count) != spec.count
        or spec.count < 1
    ):
        raise InputError(f"count must be a positive integer, got {spec.count}")

    powers = np.arange(int(spec.count), dtype=float)

    if spec.mode == "geometric_to_finite":
        if not math.isfinite(spec.a):
            raise InputError("geometric_to_finite needs a finite a")
        if not 0 < spec.ratio < 1:
            raise InputError(f"ratio must lie in (0, 1), got {spec.ratio}")
        if not spec.a < spec.start < spec.b:
            raise InputError(
                f"start={spec.start} lies outside ({spec.a}, {spec.b})"
            )

        values = spec.a + (spec.start - spec.a) * spec.ratio**powers
    else:
        if spec.a != -math.inf:
            raise InputError("exponential_to_minus_inf needs a = -inf")
        if not spec.ratio > 1:
            raise InputError(f"ratio must exceed 1, got {spec.ratio}")
        if not (spec.start > 0 and -spec.start < spec.b):
            raise InputError(
                f"-start={-spec.start} lies outside (-inf, {spec.b})"
            )

        values = -spec.start * spec.ratio**powers

    steps = np.diff(values)

    if not (np.all(np.isfinite(values)) and np.all(steps < 0)):
        raise InputError(
            "Sequence collapses in floating point; use fewer samples"
        )

    if spec.mode == "geometric_to_finite" and not values[-1] > spec.a:
        raise InputError("Sequence reaches a; use fewer samples")

    return [float(value) for value in values]


def _sample(curve, t, config):
    try:
        report = support_report(curve, t, config)
    except CurveAsymError as error:
        logger.warning("Sample t=%r failed: %s", t, error)
        return RatioSample(t=t, failed=True, error=str(error))

    if report.degenerate:
        return RatioSample(
            t=t,
            d=0.0,
            ds=math.inf,
            dt=math.inf,
            ratio_support=math.inf,
            ratio_tangent=math.inf,
            unbounded=True,
        )

    def known(value):
        return math.nan if value is None else value

    return RatioSample(
        t=t,
        d=report.d_t,
        ds=known(report.ds),
        dt=known(report.dt_sup),
        ratio_support=known(report.ratio_support),
        ratio_tangent=known(report.ratio_tangent),
        truncation_bound=report.truncation_bound,
    )


def check_sequence(curve, seq):
    seq = [float(t) for t in seq]

    for t in seq:
        curve.domain.check(t)

    steps = np.diff(seq)

    if len(seq) > 1 and not (np.all(steps < 0) or np.all(steps > 0)):
        raise InputError("Sequence must be strictly monotone")

    return seq


def ratio_trace(curve, seq, support_cfg=None, workers=1):
    """
    DS/D and DT/D at every t of `seq`.

    A sample whose computation fails is kept, marked `failed`, and the
    trace carries on. With workers > 1 samples run on a thread pool;
    the trace is always in sequence order.

    :param curve: The curve
    :param seq: Parameters approaching a
    :param support_cfg: SupportConfig for the scans
    :param workers: Threads to spread samples over
    """

    seq = check_sequence(curve, seq)
    config = support_cfg or SupportConfig()

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            samples = list(
                executor.map(lambda t: _sample(curve, t, config), seq)
            )
    else:
        samples = [_sample(curve, t, config) for t in seq]

    trace = RatioTrace(samples=samples)

    if trace.failures:
        logger.warning(
            "%d of %d samples failed for %s",
            len(trace.failures),
            len(samples),
            curve.name,
        )

    return trace


def tail_estimate(values, window=WINDOW):
    """
    Tail-window max of a sequence of ratios with a trend read off the
    max of the window's first half against the max of its second half
    """

    if window < 3:
        raise InputError(f"window must be at least 3, got {window}")

    values = [float(value) for value in values]

    if len(values) < window:
        raise InputError(
            f"Need at least {window} samples for the estimate, "
            f"got {len(values)}"
        )

    tail = [value for value in values[-window:] if not math.isnan(value)]
    every = [value for value in values if not math.isnan(value)]

    if not tail:
        raise InputError("No ratio values in the tail window")

    if any(value == math.inf for value in tail):
        return LimsupEstimate(
            value=math.inf,
            window=window,
            trend=Trend.FLAT,
            all_samples_max=math.inf,
            unbounded=True,
        )

    value = max(tail)
    half = len(tail) // 2
    early, late = max(tail[: max(half, 1)]), max(tail[max(half, 1) :] or tail)
    flat = 1e-8 * max(1.0, abs(value))

    if late - early > flat:
        trend = Trend.RISING
    elif early - late > flat:
        trend = Trend.FALLING
    else:
        trend = Trend.FLAT

    return LimsupEstimate(
        value=value,
        window=window,
        trend=trend,
        all_samples_max=max(every),
    )


def limsup_estimate(trace, window=WINDOW, key="ratio_support"):
    """
    Numerical surrogate of lim sup_{t->a} of a ratio: the max over the
    last `window` completed samples, and whether that tail is still
    rising. Only the tail matters, so prepending samples never
    changes the value.
    """

    completed = len(trace.completed)

    if trace.failures and completed < window:
        raise NumericalError(
            f"{len(trace.failures)} of {len(trace.samples)} samples failed, "
            f"{completed} left for a window of {window}; first: "
            f"{trace.failures[0]}"
        )

    return tail_estimate(trace.ratios(key), window)


def check_bound(est, bound, epsilon=EPSILON):
    """
    Compare a tail estimate with a lower bound.

    holds: value >= bound - epsilon (an unbounded estimate holds).
    violated: below, with a flat or falling tail. This points at a
    resolution problem, not at a counterexample.
    inconclusive: below, but still rising.
    """

    if est.unbounded or est.value >= bound - epsilon:
        return Verdict.HOLDS

    if est.trend in (Trend.FLAT, Trend.FALLING):
        logger.warning(
            "Tail max %r below bound %r: refine the grid or sequence",
            est.value,
            bound,
        )
        return Verdict.VIOLATED

    return Verdict.INCONCLUSIVE


def check_universal_bound(est, epsilon=EPSILON):
    """
    check_bound against 1/e
    """

    return check_bound(est, INVERSE_E, epsilon)


def _arccot(alpha):
    return math.pi / 2.0 - math.atan(alpha)


# name: (formula, parameter check, limits as the parameter -> 0 and -> inf)
CLOSED_FORMS = {
    "ex1": (
        lambda alpha: math.exp(-alpha * _arccot(alpha)),
        lambda alpha: alpha > 0,
        (1.0, INVERSE_E),
    ),
    "ex2": (
        lambda alpha: (1.0 + 1.0 / alpha) ** -alpha,
        lambda alpha: alpha > 0,
        (1.0, INVERSE_E),
    ),
    "ex3": (
        lambda alpha: INVERSE_E,
        lambda alpha: alpha > 1,
        (INVERSE_E, INVERSE_E),
    ),
    "remark41": (
        lambda alpha: (1.0 / (1.0 + alpha)) ** (1.0 / alpha),
        lambda alpha: alpha > 0,
        (INVERSE_E, 1.0),
    ),
    "powerweight": (
        lambda beta: (beta + 1.0) / (beta + 2.0),
        lambda beta: beta > -1,
        (0.5, 1.0),
    ),
}


def closed_form_ratio(example, alpha):
    """
    The limiting ratio printed for a built-in family: ex1 (log spiral,
    e^(-alpha arccot alpha)), ex2 (rho = t^alpha, (1 + 1/alpha)^-alpha),
    ex3 (rho = exp(-(-t)^l), e^-1), remark41 ((1/(1 + alpha))^(1/alpha))
    and powerweight ((beta + 1)/(beta + 2), beta passed as alpha)
    """

    if example not in CLOSED_FORMS:
        raise InputError(f"No closed form for {example!r}")

    formula, valid, limits = CLOSED_FORMS[example]

    if not valid(alpha):
        raise InputError(f"Invalid parameter {alpha} for {example}")

    return formula(alpha)


def closed_form_limit(example, towards="inf"):
    """
    Limit of closed_form_ratio as the parameter goes to 0 or to inf
    """

    if example not in CLOSED_FORMS:
        raise InputError(f"No closed form for {example!r}")

    if towards not in ("0", "inf"):
        raise InputError(f"towards must be '0' or 'inf', got {towards!r}")

    return CLOSED_FORMS[example][2][0 if towards == "0" else 1]
