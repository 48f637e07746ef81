"""
CSV and JSON output for traces, and the acceptance report the `verify`
command and the /verify.txt view render
"""

# Standard library
import csv
import io
import json
import logging
import math
import time
from dataclasses import dataclass
from datetime import timedelta

# Packages
import humanize
import numpy as np
from jinja2 import Template

# Local
from canonicalwebteam.curveasym.arclength import (
    arc_ratio_trace,
    eq6_check,
    explore_conjecture,
)
from canonicalwebteam.curveasym.asymptote import (
    EPSILON,
    INVERSE_E,
    WINDOW,
    check_universal_bound,
    closed_form_ratio,
    limsup_estimate,
    make_sequence,
    ratio_trace,
)
from canonicalwebteam.curveasym.catalog import CURVES, build
from canonicalwebteam.curveasym.exceptions import CurveAsymError
from canonicalwebteam.curveasym.meanvalue import (
    TOL,
    estimate_C_weight,
    meanvalue_trace,
)
from canonicalwebteam.curveasym.models import SequenceSpec, Verdict
from canonicalwebteam.curveasym.support import N_GRID


logger = logging.getLogger(__name__)

TRACE_COLUMNS = (
    "t",
    "D",
    "DS",
    "DT",
    "ratio_support",
    "ratio_tangent",
    "unbounded",
    "truncation_bound",
)
MEANVALUE_COLUMNS = ("x", "tau", "ratio_h", "ratio_t", "residual")
ARC_COLUMNS = ("t", "L", "LS", "LT", "ratio_Ls", "ratio_Lt")


def _cell(value):
    if isinstance(value, bool):
        return "true" if value else "false"

    if isinstance(value, (float, np.floating)):
        return repr(float(value))

    return str(value)


def _csv(columns, rows):
    output = io.StringIO()
    writer = csv.writer(output, lineterminator="\n")
    writer.writerow(columns)

    for row in rows:
        writer.writerow([_cell(value) for value in row])

    return output.getvalue()


def trace_csv(trace):
    """
    One row per completed sample of a RatioTrace; failed samples are
    left out and listed in the summary instead
    """

    return _csv(
        TRACE_COLUMNS,
        (
            (
                sample.t,
                sample.d,
                sample.ds,
                sample.dt,
                sample.ratio_support,
                sample.ratio_tangent,
                sample.unbounded,
                sample.truncation_bound,
            )
            for sample in trace.completed
        ),
    )


def meanvalue_csv(trace):
    return _csv(
        MEANVALUE_COLUMNS,
        (
            (
                result.x,
                result.tau,
                result.ratio_h,
                result.ratio_t,
                result.residual,
            )
            for result in trace.results
        ),
    )


def arc_csv(trace):
    return _csv(
        ARC_COLUMNS,
        (
            (
                sample.t,
                sample.length,
                sample.ls,
                sample.lt,
                sample.ratio_ls,
                sample.ratio_lt,
            )
            for sample in trace.completed
        ),
    )


def _json_number(value):
    if value is None or math.isnan(value):
        return None

    if math.isinf(value):
        return "inf" if value > 0 else "-inf"

    return float(value)


def summary(estimate, bound, verdict, failures=(), **extra):
    """
    The verdict record: {estimate, bound, verdict, window}, plus the
    failed samples and anything passed in `extra`
    """

    record = {
        "estimate": _json_number(estimate.value),
        "bound": _json_number(bound),
        "verdict": Verdict(verdict).value,
        "window": estimate.window,
        "trend": estimate.trend.value,
        "failures": list(failures),
    }
    record.update(extra)

    return record


def summary_json(record):
    return json.dumps(record, indent=2, sort_keys=True) + "\n"


def write_text(path, text):
    with open(path, "w", encoding="utf-8", newline="") as output:
        output.write(text)


# Runs
# ===

# Least to most severe
SEVERITY = (
    Verdict.HOLDS,
    Verdict.INCONCLUSIVE,
    Verdict.UNRESOLVED,
    Verdict.VIOLATED,
)


def worst_verdict(verdicts):
    return max(verdicts, key=SEVERITY.index, default=Verdict.HOLDS)


def _estimate_record(estimate, bound, verdict):
    return {
        "estimate": _json_number(estimate.value),
        "bound": _json_number(bound),
        "verdict": Verdict(verdict).value,
        "trend": estimate.trend.value,
    }


def curve_run(
    curve,
    seq,
    support_cfg=None,
    window=WINDOW,
    epsilon=EPSILON,
    workers=1,
    closed_form=None,
):
    """
    Trace DS/D and DT/D along `seq` and hold the tail against 1/e.

    Returns (csv text, summary record). The record's verdict is the
    worse of the support and tangent verdicts.
    """

    trace = ratio_trace(curve, seq, support_cfg, workers)
    keys = ["ratio_support"]

    if curve.differentiable:
        keys.append("ratio_tangent")

    checks = {}

    for key in keys:
        estimate = limsup_estimate(trace, window, key)
        checks[key] = (
            estimate,
            check_universal_bound(estimate, epsilon),
        )

    estimate, _ = checks["ratio_support"]
    record = summary(
        estimate,
        INVERSE_E,
        worst_verdict(verdict for _, verdict in checks.values()),
        trace.failures,
        curve=curve.name,
        samples=len(trace.completed),
        ratios={
            key: _estimate_record(estimate, INVERSE_E, verdict)
            for key, (estimate, verdict) in checks.items()
        },
    )

    if closed_form is not None:
        record["closed_form"] = closed_form

    return trace_csv(trace), record


def meanvalue_run(
    problem,
    xs,
    window=WINDOW,
    epsilon=EPSILON,
    n_grid=N_GRID,
    tol=TOL,
    closed_form=None,
):
    """
    Solve a MeanValueProblem along `xs`. The record carries the
    ratio_h check against 1/e and, where C could be estimated, the
    ratio_t check against e^-C.
    """

    trace = meanvalue_trace(problem, xs, window, epsilon, n_grid, tol)

    if not trace.checks:
        record = {
            "estimate": None,
            "bound": INVERSE_E,
            "verdict": Verdict.INCONCLUSIVE.value,
            "window": len(trace.results),
            "failures": list(trace.failures),
        }
    else:
        record = summary(
            trace.checks[0].estimate,
            trace.checks[0].bound,
            worst_verdict(check.verdict for check in trace.checks),
            trace.failures,
        )
        record["checks"] = {
            check.statistic: _estimate_record(
                check.estimate, check.bound, check.verdict
            )
            for check in trace.checks
        }

    record["problem"] = problem.name
    record["kind"] = problem.kind

    if closed_form is not None:
        record["closed_form"] = closed_form

    return meanvalue_csv(trace), record


def arc_run(
    curve,
    seq,
    support_cfg=None,
    window=WINDOW,
    epsilon=EPSILON,
    workers=1,
    assume_rectifiable=False,
):
    """
    explore_conjecture on `curve`, with the L(t) ~ D(t) check added to
    the record for information only
    """

    report = explore_conjecture(
        curve,
        seq,
        support_cfg,
        window=window,
        epsilon=epsilon,
        assume_rectifiable=assume_rectifiable,
        workers=workers,
    )
    estimates = dict(report.estimates)
    record = summary(
        estimates["ratio_ls"],
        INVERSE_E,
        report.verdict,
        report.trace.failures,
        curve=curve.name,
        n_grid=report.n_grid,
        attempts=report.attempts,
    )

    try:
        eq6 = eq6_check(curve, seq, window=window, support_cfg=support_cfg)
        record["eq6"] = {
            "deviation": _json_number(eq6.deviation),
            "band": eq6.band,
            "verdict": eq6.verdict.value,
        }
    except CurveAsymError as error:
        record["eq6"] = {"error": str(error)}

    return arc_csv(report.trace), record


# Acceptance checks
# ===


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0


def _log_spiral_check():
    worst = 0.0

    for alpha in (0.5, 1.0, 2.0, 5.0):
        curve, spec, _ = build("ex1", alpha)
        expected = closed_form_ratio("ex1", alpha)
        trace = ratio_trace(curve, make_sequence(spec))

        if trace.failures:
            return False, f"alpha={alpha}: {trace.failures[0]}"

        for key in ("ratio_support", "ratio_tangent"):
            for value in trace.ratios(key):
                worst = max(worst, abs(value - expected))

    return worst <= 1e-5, f"largest deviation {worst:.2e}"


def _power_spiral_check():
    details = []
    passed = True

    for alpha in (1.0, 2.0):
        curve, spec, _ = build("ex2", alpha)
        estimate = limsup_estimate(ratio_trace(curve, make_sequence(spec)))
        expected = closed_form_ratio("ex2", alpha)
        passed &= abs(estimate.value - expected) <= 1e-3
        details.append(
            f"alpha={alpha}: {estimate.value:.6f} vs {expected:.6f}"
        )

    return passed, "; ".join(details)


def _gaussian_spiral_check():
    curve, spec, _ = build("ex3", 2.0)
    ratios = ratio_trace(curve, make_sequence(spec)).ratios()
    last = ratios[-10:]
    falling = all(later <= earlier for earlier, later in zip(last, last[1:]))
    distance = abs(ratios[-1] - INVERSE_E)

    return (
        falling and distance < 0.05,
        f"last ratio {ratios[-1]:.6f}, "
        f"{'decreasing' if falling else 'not decreasing'} over the last 10",
    )


def _universal_bound_check():
    failing = []

    for entry in CURVES:
        curve, spec, _ = build(entry.name)
        trace = ratio_trace(curve, make_sequence(spec))
        keys = ["ratio_support"]

        if curve.differentiable:
            keys.append("ratio_tangent")

        for key in keys:
            verdict = check_universal_bound(limsup_estimate(trace, key=key))

            if verdict != Verdict.HOLDS:
                failing.append(f"{entry.name} {key}: {verdict.value}")

    detail = ", ".join(failing) or f"{len(CURVES)} curve families"

    return not failing, detail


def _remark_check():
    worst = 0.0

    for alpha in (1.0, 3.0):
        problem, spec, _ = build("remark41", alpha)
        spec = SequenceSpec(spec.mode, 1.0, 0.5, 4, a=0.0)
        trace = meanvalue_trace(problem, make_sequence(spec))
        expected = closed_form_ratio("remark41", alpha)

        for value in trace.column("ratio_h"):
            worst = max(worst, abs(value - expected))

    return worst <= 1e-9, f"largest deviation {worst:.2e}"


def _extremal_check():
    problem, spec, _ = build("lagrange-extremal")
    trace = meanvalue_trace(problem, make_sequence(spec))
    ratios = trace.column("ratio_t")

    if trace.failures or not ratios:
        return False, "; ".join(trace.failures) or "no points solved"

    x_min = trace.results[-1].x
    falling = all(
        later < earlier for earlier, later in zip(ratios, ratios[1:])
    )
    close = abs(ratios[-1] - INVERSE_E) <= 2.0 / abs(math.log(x_min))
    above = min(ratios) >= INVERSE_E - 1e-6

    return (
        falling and close and above,
        f"final ratio {ratios[-1]:.6f} at x={x_min:g}",
    )


def _power_weight_check():
    worst = 0.0
    passed = True

    for beta in (0.0, 1.0, 2.0):
        problem, spec, _ = build("powerweight", beta)
        xs = make_sequence(SequenceSpec(spec.mode, 1.0, 0.5, 4, a=0.0))
        trace = meanvalue_trace(problem, xs)
        expected = closed_form_ratio("powerweight", beta)

        for value in trace.column("ratio_t"):
            worst = max(worst, abs(value - expected))

        constant = estimate_C_weight(problem.w, 0.0, xs).value
        worst = max(worst, abs(constant - 1.0 / (beta + 1.0)))
        passed &= expected >= math.exp(-1.0 / (beta + 1.0))

    return passed and worst <= 1e-9, f"largest deviation {worst:.2e}"


def _arc_check():
    details = []
    passed = True

    for name in ("parabola", "exp", "circle"):
        curve, spec, _ = build(name)
        report = eq6_check(curve, make_sequence(spec))
        passed &= report.verdict == Verdict.HOLDS
        details.append(f"{name}: {report.deviation:.1e}")

    curve, spec, _ = build("ex1", 1.0)
    shorter = SequenceSpec(spec.mode, 1.0, 1.5, 12, a=spec.a)
    spiral = eq6_check(curve, make_sequence(shorter))
    worst = max(
        abs(sample.ratio - math.sqrt(2.0)) for sample in spiral.samples
    )
    passed &= worst <= 1e-6
    details.append(f"ex1 L/D - sqrt 2: {worst:.1e}")

    return passed, "; ".join(details)


def _arc_bound_check():
    curve, spec, _ = build("parabola")
    trace = arc_ratio_trace(curve, make_sequence(spec))
    estimate = limsup_estimate(trace, key="ratio_ls")
    verdict = check_universal_bound(estimate)

    return verdict == Verdict.HOLDS, f"tail max {estimate.value:.6f}"


ACCEPTANCE_CHECKS = (
    ("log spiral ratio", _log_spiral_check),
    ("power spiral tail", _power_spiral_check),
    ("exp(-(-t)^2) spiral limit", _gaussian_spiral_check),
    ("universal bound sweep", _universal_bound_check),
    ("Cauchy point of t^(1+alpha)", _remark_check),
    ("Lagrange equality case", _extremal_check),
    ("weighted integral mean", _power_weight_check),
    ("L(t) ~ D(t)", _arc_check),
    ("arc length ratio bound", _arc_bound_check),
)


def run_acceptance(names=None):
    """
    Run the acceptance checks (all, or those named); a check that
    raises counts as failed with the error as its detail
    """

    results = []

    for name, check in ACCEPTANCE_CHECKS:
        if names and name not in names:
            continue

        started = time.perf_counter()

        try:
            passed, detail = check()
        except CurveAsymError as error:
            logger.warning("Check %r raised: %s", name, error)
            passed, detail = False, str(error)

        results.append(
            CheckResult(
                name=name,
                passed=bool(passed),
                detail=detail,
                seconds=time.perf_counter() - started,
            )
        )

    return results


REPORT_TEMPLATE = Template(
    "{% for result in results %}"
    "[{{ 'PASS' if result.passed else 'FAIL' }}] {{ result.name }}: "
    "{{ result.detail }} ({{ durations[loop.index0] }})\n"
    "{% endfor %}"
    "{{ passed }} of {{ total }} checks passed in {{ elapsed }}\n",
    keep_trailing_newline=True,
)


def verify_report(results):
    durations = [
        humanize.precisedelta(
            timedelta(seconds=result.seconds), minimum_unit="milliseconds"
        )
        for result in results
    ]

    return REPORT_TEMPLATE.render(
        results=results,
        durations=durations,
        passed=humanize.intcomma(sum(result.passed for result in results)),
        total=humanize.intcomma(len(results)),
        elapsed=humanize.naturaldelta(
            timedelta(seconds=sum(result.seconds for result in results))
        ),
    )
