# Standard library
import logging
import math
from concurrent.futures import ThreadPoolExecutor

# Local
from canonicalwebteam.curveasym.asymptote import (
    EPSILON,
    INVERSE_E,
    WINDOW,
    check_sequence,
    limsup_estimate,
    tail_estimate,
)
from canonicalwebteam.curveasym.curve import arc_length
from canonicalwebteam.curveasym.exceptions import (
    AccuracyError,
    CurveAsymError,
    InputError,
)
from canonicalwebteam.curveasym.models import (
    ArcSample,
    ConjectureReport,
    Eq6Report,
    LengthSample,
    RatioTrace,
    Trend,
    Verdict,
)
from canonicalwebteam.curveasym.support import (
    CUTOFF,
    SupportConfig,
    find_support_set,
    find_tangent_set,
)


logger = logging.getLogger(__name__)

ARC_TOL = 1e-9
# Start of the integration, as a fraction of t - a, past a finite a
START_OFFSET = 1e-9
EQ6_BAND = 1e-4
BUDGET = 3


class ArcLength:
    """
    L(tau) for tau in [a_eff, t]: the arc from a_eff (or just past a
    finite a, closed off by the chord to gamma(a)) up to tau.

    Lengths for several tau of one chord are measured back from L(t)
    so they share a single integral over the window.
    """

    def __init__(self, curve, t, a_eff, rel_tol=ARC_TOL):
        self.curve = curve
        self.t = t
        d_t = float(curve.distances(t))
        self.tol = rel_tol * (d_t if d_t > 0 else 1.0)

        if curve.domain.finite_start:
            start = a_eff + START_OFFSET * (t - a_eff)
        else:
            start = a_eff

        # The piece before `start` is closed off by its chord
        head = float(curve.distances(start))
        self.total = arc_length(curve, start, t, self.tol) + head

    def __call__(self, tau):
        if tau >= self.t:
            return self.total

        return max(
            0.0, self.total - arc_length(self.curve, tau, self.t, self.tol)
        )


def _largest_length(lengths, report):
    best = 0.0

    for point in report.points:
        taus = [point.tau]

        if point.kind == "plateau":
            taus.append(point.bracket[1])

        best = max(best, *(lengths(tau) for tau in taus))

    return best


def _arc_sample(curve, t, config, tol):
    options = dict(
        n_grid=config.n_grid,
        refine_tol=config.refine_tol,
        cutoff=config.cutoff,
        plateau_eps=config.plateau_eps,
    )

    try:
        support = find_support_set(curve, t, **options)

        if support.degenerate:
            return ArcSample(
                t=t,
                ratio_ls=math.inf,
                ratio_lt=math.inf,
                unbounded=True,
            )

        lengths = ArcLength(curve, t, support.a_eff, tol)
        ls = _largest_length(lengths, support)
        lt = math.nan

        if curve.differentiable:
            lt = _largest_length(
                lengths, find_tangent_set(curve, t, **options)
            )
    except CurveAsymError as error:
        logger.warning("Sample t=%r failed: %s", t, error)
        return ArcSample(t=t, failed=True, error=str(error))

    return ArcSample(
        t=t,
        length=lengths.total,
        ls=ls,
        lt=lt,
        ratio_ls=ls / lengths.total,
        ratio_lt=lt / lengths.total,
    )


def arc_ratio_trace(curve, seq, support_cfg=None, tol=ARC_TOL, workers=1):
    """
    sup L(tau) over S(t) and over T(t), each divided by L(t), along
    `seq`. Point sets come from the support module; L is integrated
    from a_eff.

    :param tol: Arc length tolerance relative to D(t)
    """

    seq = check_sequence(curve, seq)
    config = support_cfg or SupportConfig()

    def sample(t):
        return _arc_sample(curve, t, config, tol)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            samples = list(executor.map(sample, seq))
    else:
        samples = [sample(t) for t in seq]

    return RatioTrace(samples=samples)


def eq6_check(curve, seq, band=EQ6_BAND, window=WINDOW, support_cfg=None):
    """
    Whether L(t) ~ D(t) as t -> a: holds when the last `window`
    values of L/D all lie within `band` of 1. A tail that is still
    closing in on 1 is inconclusive; otherwise the relation fails.
    """

    seq = check_sequence(curve, seq)
    config = support_cfg or SupportConfig()
    samples = []

    for t in seq:
        if curve.domain.finite_start:
            a_eff = curve.domain.a
        else:
            a_eff = t - (config.cutoff or CUTOFF)

        d = float(curve.distances(t))

        if not d > 0:
            logger.warning("D(%r) = 0, sample skipped", t)
            continue

        length = ArcLength(curve, t, a_eff).total
        samples.append(LengthSample(t=t, length=length, d=d, ratio=length / d))

    if not samples:
        raise InputError("No sample with D(t) > 0")

    window = max(3, min(window, len(samples)))
    deviations = [abs(sample.ratio - 1.0) for sample in samples]

    if len(deviations) < window:
        raise InputError(f"eq6_check needs at least {window} samples")

    deviation = max(deviations[-window:])

    if deviation <= band:
        verdict = Verdict.HOLDS
    elif tail_estimate(deviations, window).trend == Trend.FALLING:
        verdict = Verdict.INCONCLUSIVE
    else:
        verdict = Verdict.VIOLATED

    return Eq6Report(
        samples=tuple(samples),
        band=band,
        deviation=deviation,
        verdict=verdict,
    )


def explore_conjecture(
    curve,
    seq,
    support_cfg=None,
    window=WINDOW,
    epsilon=EPSILON,
    budget=BUDGET,
    assume_rectifiable=False,
    workers=1,
):
    """
    Hold the arc-length ratios against 1/e. A tail max below the bound
    doubles n_grid and tries again, at most `budget` times; what still
    falls short is reported unresolved, never as a counterexample.

    :param assume_rectifiable: Skip the up-front check that the arc
        over the first window has a finite, computable length
    """

    seq = check_sequence(curve, seq)
    config = support_cfg or SupportConfig()

    if not assume_rectifiable:
        _check_rectifiable(curve, seq[0], config)

    keys = ["ratio_ls"] + (["ratio_lt"] if curve.differentiable else [])

    for attempt in range(budget + 1):
        trace = arc_ratio_trace(curve, seq, config, workers=workers)
        estimates = tuple(
            (key, limsup_estimate(trace, window, key)) for key in keys
        )

        if all(
            estimate.unbounded or estimate.value >= INVERSE_E - epsilon
            for _, estimate in estimates
        ):
            return ConjectureReport(
                trace=trace,
                estimates=estimates,
                verdict=Verdict.HOLDS,
                n_grid=config.n_grid,
                attempts=attempt + 1,
            )

        if attempt < budget:
            logger.info(
                "Arc ratio tail below 1/e at n_grid=%d, refining",
                config.n_grid,
            )
            config = config.with_grid(config.n_grid * 2)

    return ConjectureReport(
        trace=trace,
        estimates=estimates,
        verdict=Verdict.UNRESOLVED,
        n_grid=config.n_grid,
        attempts=budget + 1,
    )


def _check_rectifiable(curve, t, config):
    if curve.domain.finite_start:
        a_eff = curve.domain.a
    else:
        a_eff = t - (config.cutoff or CUTOFF)

    try:
        length = ArcLength(curve, t, a_eff).total
    except AccuracyError as error:
        raise InputError(
            f"Arc length of {curve.name} up to t={t} did not converge "
            f"(best estimate {error.best_estimate!r}); pass "
            "assume_rectifiable to skip this check"
        )

    if not math.isfinite(length):
        raise InputError(f"{curve.name} has no finite arc length up to {t}")
