"""
Largest mean-value points of pairs of functions on [a, b) and the
ratios that locate them inside [a, x], as x approaches a.

mu(x): largest local extremum of (g(x)-g(a)) h(t) - (h(x)-h(a)) g(t)
xi(x): largest Cauchy point, g'(t)(h(x)-h(a)) = h'(t)(g(x)-g(a))
eta(x): largest point with f(t) equal to the w-weighted mean of f
"""

# Standard library
import logging
import math
from dataclasses import dataclass
from typing import Callable, Optional

# Packages
import numpy as np

# Local
from canonicalwebteam.curveasym.asymptote import (
    EPSILON,
    INVERSE_E,
    WINDOW,
    check_bound,
    tail_estimate,
)
from canonicalwebteam.curveasym.curve import Curve, evaluate
from canonicalwebteam.curveasym.exceptions import (
    CapabilityError,
    CurveAsymError,
    DomainEvaluationError,
    InputError,
    ResolutionError,
)
from canonicalwebteam.curveasym.models import (
    BoundCheck,
    CEstimate,
    MeanValueResult,
    MeanValueTrace,
    Trend,
    Verdict,
)
from canonicalwebteam.curveasym.quadrature import integrate
from canonicalwebteam.curveasym.scanning import polish_root, sign_changes
from canonicalwebteam.curveasym.support import N_GRID, find_support_set


logger = logging.getLogger(__name__)

TOL = 1e-10
QUAD_TOL = 1e-12
NOISE = 64 * np.finfo(float).eps
TINY = np.finfo(float).tiny

# Decades the limit quotient is sampled over, below x
LIMIT_DECADES = 6
LIMIT_DRIFT = 1e-3
# Converging quotients shrink their steps by at least this factor
LIMIT_SHRINK = 0.95


class IntegralFunction:
    """
    x -> the integral of `integrand` from `lower` to x.

    Arrays are integrated piece by piece between sorted points, so a
    whole grid costs about as much as one integral.
    """

    def __init__(self, integrand, lower, rel_tol=QUAD_TOL):
        self.integrand = integrand
        self.lower = float(lower)
        self.rel_tol = rel_tol

    def _integrand(self, t):
        return float(self.integrand(t))

    def _piece(self, lower, upper):
        return integrate(self._integrand, lower, upper, self.rel_tol)

    def __call__(self, x):
        values = np.asarray(x, dtype=float)

        if values.ndim == 0:
            return self._piece(self.lower, float(values))

        flat = values.ravel()
        order = np.argsort(flat)
        totals = np.empty(len(flat))
        total, previous = 0.0, self.lower

        for position, index in enumerate(order):
            point = float(flat[index])
            total += self._piece(previous, point)
            totals[position] = total
            previous = point

        result = np.empty(len(flat))
        result[order] = totals

        return result.reshape(values.shape)


class FunctionPair:
    """
    Two functions g, h on [a, b) with h increasing, plus optional
    derivatives. Checks run on every solve and collect their findings
    in `warnings`.
    """

    def __init__(self, g, h, a, dg=None, dh=None, b=math.inf, name=None):
        if not math.isfinite(a) or not a < b:
            raise InputError(f"A function pair needs a finite a < b, got {a}")

        self.g = g
        self.h = h
        self.a = float(a)
        self.b = float(b)
        self.dg = dg
        self.dh = dh
        self.name = name or "pair"
        self.warnings = []

        self.g_a = float(evaluate(g, self.a))
        self.h_a = float(evaluate(h, self.a))

    def __repr__(self):
        return f"FunctionPair({self.name!r}, a={self.a})"

    @property
    def differentiable(self):
        return self.dg is not None and self.dh is not None

    def _warn(self, message):
        if message not in self.warnings:
            logger.warning("%s: %s", self.name, message)
            self.warnings.append(message)

    def check(self, x, n_grid=N_GRID):
        """
        Validate x, that h increases over [a, x], and that the quotient
        (g(t) - g(a))/(h(t) - h(a)) settles as t -> a
        """

        if not self.a < x < self.b:
            raise InputError(f"x={x} lies outside ({self.a}, {self.b})")

        grid = np.linspace(self.a, x, n_grid + 1)
        hs = np.empty(len(grid))
        hs[0] = self.h_a
        hs[1:] = evaluate(self.h, grid[1:])
        scale = float(np.max(np.abs(hs)))

        if np.any(np.diff(hs) <= -1e-14 * scale) or not hs[-1] > hs[0]:
            raise InputError(f"h of {self.name} is not increasing on [a, {x}]")

        decades = np.arange(1, LIMIT_DECADES + 1)
        near = self.a + (x - self.a) * 10.0**-decades

        with np.errstate(all="ignore"):
            quotients = (evaluate(self.g, near) - self.g_a) / (
                evaluate(self.h, near) - self.h_a
            )

        last = quotients[-4:]

        if not np.all(np.isfinite(last)):
            self._warn("the quotient (g - g(a))/(h - h(a)) is not finite at a")
            return

        # Slow convergence, like 1/|ln t|, still shrinks its steps
        steps = np.abs(np.diff(last))
        moving = steps[-1] > LIMIT_DRIFT * max(1.0, np.max(np.abs(last)))

        if moving and steps[-1] >= LIMIT_SHRINK * steps[-2]:
            self._warn("the quotient (g - g(a))/(h - h(a)) diverges near a")

    def curve(self):
        """
        t -> (g(t), h(t)), whose support points for the chord from
        (g(a), h(a)) are the local extrema behind mu(x)
        """

        return Curve.cartesian(
            self.g,
            self.h,
            (self.a, self.b),
            start_point=(self.g_a, self.h_a),
            dx=self.dg if self.differentiable else None,
            dy=self.dh if self.differentiable else None,
            name=self.name,
        )

    def result(self, x, tau, residual, kind, note=None):
        h_x = float(evaluate(self.h, x))
        h_tau = float(evaluate(self.h, tau))

        return MeanValueResult(
            x=float(x),
            tau=float(tau),
            residual=float(residual),
            ratio_h=(h_tau - self.h_a) / (h_x - self.h_a),
            ratio_t=(tau - self.a) / (x - self.a),
            kind=kind,
            note=note,
        )


def integral_mean_function(f, w, a, b=math.inf, name=None):
    """
    The pair g(x) = int_a^x w f, h(x) = int_a^x w, through which the
    weighted integral mean value runs on the Cauchy machinery
    """

    def weighted(t):
        return evaluate(w, t) * evaluate(f, t)

    return FunctionPair(
        IntegralFunction(weighted, a),
        IntegralFunction(w, a),
        a,
        dg=weighted,
        dh=w,
        b=b,
        name=name or "integral mean",
    )


def _largest_root(x, taus, values, floors, equation, xtol, n_grid):
    """
    Largest root of a sampled equation: the last sign change or zero
    run scanning left from x, refined with Brent's method. An isolated
    zero at x itself is not a solution inside (a, x).

    Returns (tau, note).
    """

    features = sign_changes(taus, values, floors)
    end = len(taus) - 1

    if features and features[-1].kind == "root" and features[-1].first == end:
        features.pop()

    if not features:
        raise ResolutionError(
            n_grid, message=f"No solution resolved in (a, {x}]"
        )

    last = features[-1]

    if last.kind == "plateau":
        if last.last == end:
            return float(x), "plateau reaching x"
        return float(last.hi), "plateau"

    if last.lo == last.hi:
        return float(last.lo), None

    root = polish_root(equation, last.lo, last.hi, xtol)

    if root is None:
        return (last.lo + last.hi) / 2.0, "unrefined bracket"

    return float(root), None


def mu_point(pair, x, n_grid=N_GRID, tol=None):
    """
    mu(x): the largest local extremum on (a, x] of
    Psi(t) = (g(x) - g(a)) h(t) - (h(x) - h(a)) g(t).

    Psi differs by a constant from the chord determinant of the curve
    t -> (g(t), h(t)), so the support scan finds its extrema.

    :param tol: Refinement width, 1e-10 (x - a) when None
    """

    pair.check(x, n_grid)

    report = find_support_set(pair.curve(), x, n_grid=n_grid, refine_tol=tol)

    def right_end(point):
        return point.bracket[1] if point.kind == "plateau" else point.tau

    point = max(report.points, key=right_end)
    note = "plateau" if point.kind == "plateau" else None

    return pair.result(x, right_end(point), point.residual, "mu", note)


def xi_cauchy(pair, x, tol=TOL, n_grid=N_GRID):
    """
    xi(x): the largest tau in (a, x) with
    g'(tau)(h(x) - h(a)) = h'(tau)(g(x) - g(a)).

    The residual is scanned leftward from x for the first sign change
    and refined to tol * (x - a). `residual` in the result is the
    equation's value scaled by the size of its two terms.
    """

    if not pair.differentiable:
        raise CapabilityError("derivative")

    pair.check(x, n_grid)

    delta_g = float(evaluate(pair.g, x)) - pair.g_a
    delta_h = float(evaluate(pair.h, x)) - pair.h_a
    taus = np.linspace(pair.a, x, n_grid + 1)[1:]
    slopes_g = evaluate(pair.dg, taus)
    slopes_h = evaluate(pair.dh, taus)

    values = slopes_g * delta_h - slopes_h * delta_g
    scale = np.abs(slopes_g) * abs(delta_h) + np.abs(slopes_h) * abs(delta_g)

    if not np.all(np.isfinite(values)):
        bad = taus[~np.isfinite(values)][0]
        raise DomainEvaluationError(f"{pair.name}'", float(bad))

    def equation(tau):
        return (
            float(evaluate(pair.dg, tau)) * delta_h
            - float(evaluate(pair.dh, tau)) * delta_g
        )

    tau, note = _largest_root(
        x,
        taus,
        values,
        NOISE * scale + TINY,
        equation,
        tol * (x - pair.a),
        n_grid,
    )

    size = abs(float(evaluate(pair.dg, tau))) * abs(delta_h) + abs(
        float(evaluate(pair.dh, tau))
    ) * abs(delta_g)
    residual = abs(equation(tau)) / size if size > 0 else 0.0

    return pair.result(x, tau, residual, "xi", note)


def xi_lagrange(g, dg, a, x, tol=TOL, n_grid=N_GRID):
    """
    xi(x) for Lagrange's theorem: the largest tau in (a, x) with
    g'(tau)(x - a) = g(x) - g(a)
    """

    pair = FunctionPair(
        g, lambda t: t, a, dg=dg, dh=lambda t: 1.0, name="lagrange"
    )

    return xi_cauchy(pair, x, tol=tol, n_grid=n_grid)


def eta_integral(
    f, w, x, quad_tol=QUAD_TOL, tol=TOL, a=0.0, n_grid=N_GRID
):
    """
    eta(x): the largest tau in (a, x] with f(tau) = M, where M is the
    mean of f weighted by w over [a, x]

    :param f: Continuous function
    :param w: Nonnegative integrable weight with a positive integral
    :param quad_tol: Relative quadrature tolerance
    :param tol: Refinement width relative to x - a
    """

    if not a < x:
        raise InputError(f"x={x} must exceed a={a}")

    weight = IntegralFunction(w, a, quad_tol)
    total = weight(x)

    if not total > 0:
        raise InputError(f"The weight has no mass on [{a}, {x}]")

    mean = (
        integrate(
            lambda t: float(evaluate(w, t)) * float(evaluate(f, t)),
            a,
            x,
            quad_tol,
        )
        / total
    )

    taus = np.linspace(a, x, n_grid + 1)[1:]
    fs = evaluate(f, taus)
    values = fs - mean
    floors = (NOISE + quad_tol) * (np.abs(fs) + abs(mean)) + TINY

    def equation(tau):
        return float(evaluate(f, tau)) - mean

    tau, note = _largest_root(
        x, taus, values, floors, equation, tol * (x - a), n_grid
    )

    size = max(abs(mean), abs(float(evaluate(f, tau))), TINY)

    return MeanValueResult(
        x=float(x),
        tau=float(tau),
        residual=abs(equation(tau)) / size,
        ratio_h=float(weight(tau)) / total,
        ratio_t=(tau - a) / (x - a),
        kind="eta",
        note=note,
    )


def estimate_C(h, dh, a, seq, window=WINDOW):
    """
    The constant C: tail max along `seq` of the quotient
    (h(x) - h(a)) / ((x - a) h'(x)).

    This is the essential upper limit only when the quotient is
    piecewise continuous. Samples where h' vanishes are skipped with
    a warning.
    """

    h_a = float(evaluate(h, a))
    grid = []
    warnings = []

    for x in seq:
        slope = float(evaluate(dh, x))

        if slope == 0 or not math.isfinite(slope):
            message = f"h'({x!r}) = {slope}, sample skipped"
            logger.warning(message)
            warnings.append(message)
            continue

        quotient = (float(evaluate(h, x)) - h_a) / ((x - a) * slope)
        grid.append((float(x), quotient))

    if not grid:
        raise InputError("No usable sample for the C estimate")

    tail = [quotient for _, quotient in grid[-window:]]

    return CEstimate(
        value=max(tail),
        samples_used=len(tail),
        sup_grid=tuple(grid),
        warnings=tuple(warnings),
    )


def estimate_C_weight(w, a, seq, window=WINDOW):
    """
    estimate_C for a weight: the quotient int_a^x w / ((x - a) w(x))
    """

    return estimate_C(IntegralFunction(w, a), w, a, seq, window)


def quantile_ratio_trace(h, a, seq, q, c, epsilon=EPSILON, window=WINDOW):
    """
    (h(a + q(x - a)) - h(a)) / (h(x) - h(a)) along `seq`, held against
    the upper bound q^(1/C)
    """

    if not 0 < q < 1:
        raise InputError(f"q must lie in (0, 1), got {q}")

    if not c > 0:
        raise InputError(f"C must be positive, got {c}")

    h_a = float(evaluate(h, a))
    samples = []

    for x in seq:
        inner = float(evaluate(h, a + q * (x - a))) - h_a
        samples.append((float(x), inner / (float(evaluate(h, x)) - h_a)))

    estimate = tail_estimate(
        [value for _, value in samples], max(3, min(window, len(samples)))
    )
    bound = q ** (1.0 / c)

    if estimate.value <= bound + epsilon:
        verdict = Verdict.HOLDS
    elif estimate.trend in (Trend.FLAT, Trend.RISING):
        verdict = Verdict.VIOLATED
    else:
        verdict = Verdict.INCONCLUSIVE

    return BoundCheck(
        statistic="quantile_ratio",
        estimate=estimate,
        bound=bound,
        verdict=verdict,
        direction="upper",
        samples=tuple(samples),
    )


@dataclass
class MeanValueProblem:
    """
    What meanvalue_trace solves at each x: `kind` "mu" or "xi" on
    `pair`, or "eta" on the function `f` with weight `w` from `a`
    """

    kind: str
    pair: Optional[FunctionPair] = None
    f: Optional[Callable] = None
    w: Optional[Callable] = None
    a: float = 0.0
    name: str = "problem"

    def __post_init__(self):
        if self.kind not in ("mu", "xi", "eta"):
            raise InputError(f"Unknown mean value kind {self.kind!r}")

        if self.kind == "eta" and (self.f is None or self.w is None):
            raise InputError("An eta problem needs f and w")

        if self.kind != "eta" and self.pair is None:
            raise InputError(f"A {self.kind} problem needs a function pair")

    @property
    def start(self):
        return self.a if self.kind == "eta" else self.pair.a

    def solve(self, x, n_grid=N_GRID, tol=TOL):
        if self.kind == "mu":
            return mu_point(self.pair, x, n_grid=n_grid)

        if self.kind == "xi":
            return xi_cauchy(self.pair, x, tol=tol, n_grid=n_grid)

        return eta_integral(
            self.f, self.w, x, tol=tol, a=self.a, n_grid=n_grid
        )

    def constant(self, xs, window=WINDOW):
        """
        C for the ratio_t bound, or None without a usable h'
        """

        if self.kind == "eta":
            return estimate_C_weight(self.w, self.a, xs, window)

        if self.pair.dh is None:
            return None

        return estimate_C(self.pair.h, self.pair.dh, self.pair.a, xs, window)


def _lower_check(statistic, values, bound, window, epsilon):
    estimate = tail_estimate(values, window)

    return BoundCheck(
        statistic=statistic,
        estimate=estimate,
        bound=bound,
        verdict=check_bound(estimate, bound, epsilon),
    )


def meanvalue_trace(
    problem, seq, window=WINDOW, epsilon=EPSILON, n_grid=N_GRID, tol=TOL
):
    """
    Solve `problem` at every x of `seq` and hold the tail of ratio_h
    against 1/e and the tail of ratio_t against e^-C.

    Failed points are listed in `failures` and skipped. The window
    shrinks to the number of solved points (at least 3 are needed
    for any check).
    """

    trace = MeanValueTrace()

    for x in seq:
        try:
            trace.results.append(problem.solve(x, n_grid=n_grid, tol=tol))
        except CurveAsymError as error:
            logger.warning("%s failed at x=%r: %s", problem.name, x, error)
            trace.failures.append(f"x={x!r}: {error}")

    if len(trace.results) < 3:
        return trace

    window = min(window, len(trace.results))
    xs = trace.column("x")

    trace.checks.append(
        _lower_check(
            "ratio_h", trace.column("ratio_h"), INVERSE_E, window, epsilon
        )
    )

    estimate = problem.constant(xs, window)

    if estimate is not None:
        trace.checks.append(
            _lower_check(
                "ratio_t",
                trace.column("ratio_t"),
                math.exp(-estimate.value),
                window,
                epsilon,
            )
        )

    return trace
