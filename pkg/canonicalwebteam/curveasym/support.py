"""
Support points and tangent points of a curve for the chord from its
start point gamma(a) to gamma(t).

The general path samples the chord determinant

    Phi(tau) = (gamma(t) - gamma(a)) x (gamma(tau) - gamma(a))

on a uniform grid over [a_eff, t], reads local extrema off the sign
pattern of successive differences and refines them. Polar curves with
a positive radius go through the offset s = t - tau instead, where
|Phi| = rho(t)^2 exp(phi(t - s) - phi(t)) |sin s| with phi = ln rho,
so radii far below the float range still give exact ratios.
"""

# Standard library
import logging
import math
from dataclasses import dataclass, replace
from typing import Optional

# Packages
import numpy as np

# Local
from canonicalwebteam.curveasym.curve import eval_point
from canonicalwebteam.curveasym.exceptions import (
    CapabilityError,
    DomainEvaluationError,
    InputError,
    NumericalError,
    ResolutionError,
    UnderflowError,
)
from canonicalwebteam.curveasym.models import ChordReport, MarkedPoint
from canonicalwebteam.curveasym.scanning import (
    Feature,
    golden_section,
    local_extrema,
    polish_root,
    sign_changes,
    step_signs,
)


logger = logging.getLogger(__name__)

N_GRID = 4096
PLATEAU_EPS = 1e-12
CUTOFF = 8 * math.pi

EPS = np.finfo(float).eps
TINY = np.finfo(float).tiny
ROUNDING = 8 * EPS
ANALYTIC_NOISE = 64 * EPS
NUMERIC_NOISE = 1e-7


@dataclass(frozen=True)
class SupportConfig:
    """
    Scan settings shared by the support and tangent searches.

    :param n_grid: Grid intervals over [a_eff, t]
    :param refine_tol: Bracket width refinement stops at,
        1e-10 * (t - a_eff) when None
    :param cutoff: Width t - a_eff of the scanned window when the
        domain starts at -inf, 8 pi when None
    :param plateau_eps: Relative change below which successive
        samples count as equal
    """

    n_grid: int = N_GRID
    refine_tol: Optional[float] = None
    cutoff: Optional[float] = None
    plateau_eps: float = PLATEAU_EPS

    def __post_init__(self):
        if int(self.n_grid) != self.n_grid or self.n_grid < 16:
            raise InputError(
                f"n_grid must be an integer >= 16, got {self.n_grid}"
            )

        if self.refine_tol is not None and not self.refine_tol > 0:
            raise InputError(
                f"refine_tol must be positive, got {self.refine_tol}"
            )

        if self.cutoff is not None and not (
            self.cutoff > 0 and math.isfinite(self.cutoff)
        ):
            raise InputError(
                f"cutoff must be a positive width, got {self.cutoff}"
            )

        if not 0 <= self.plateau_eps < 1:
            raise InputError(
                f"plateau_eps must lie in [0, 1), got {self.plateau_eps}"
            )

    def with_grid(self, n_grid):
        return replace(self, n_grid=n_grid)


class Chord:
    """
    What the scans for one chord parameter t share: the window
    [a_eff, t], its grid step, the refinement tolerance, and which
    path (polar or cartesian) the curve can take
    """

    def __init__(self, curve, t, config):
        curve.domain.check(t)

        self.curve = curve
        self.t = float(t)
        self.config = config
        self.n_grid = int(config.n_grid)

        if curve.domain.finite_start:
            self.a_eff = curve.domain.a
        else:
            self.a_eff = self.t - (config.cutoff or CUTOFF)

        self.width = self.t - self.a_eff
        self.step = self.width / self.n_grid
        self.tol = config.refine_tol or 1e-10 * self.width
        self.room_past_t = curve.domain.contains(self.t + self.step)
        self.d_t = float(curve.distances(self.t))

        self.polar = False
        underflow = False

        if curve.kind == "polar" and self.d_t < TINY:
            underflow = self._radius_underflows()

        self.degenerate = self.d_t == 0 and not underflow

        if (
            curve.kind == "polar"
            and curve.differentiable
            and not self.degenerate
        ):
            self._check_polar()

        # Phi ~ D(t) D(tau) leaves the float range near tau = t
        if not (self.polar or self.degenerate) and self.d_t**2 < TINY:
            raise UnderflowError(self.t, self.d_t)

        logger.debug(
            "Chord t=%r on [%r, %r], n_grid=%d, %s path",
            self.t,
            self.a_eff,
            self.t,
            self.n_grid,
            "polar" if self.polar else "cartesian",
        )

    def _check_polar(self):
        curve = self.curve

        try:
            log_t = float(curve.log_radius(self.t))
            offsets = self.offsets()
            increments = curve.log_radius_increment(self.t, offsets[1:])
            slopes = curve.log_radius_slope(self.t - offsets)
        except NumericalError:
            return

        self.polar = (
            math.isfinite(log_t)
            and bool(np.all(np.isfinite(increments)))
            and bool(np.all(np.isfinite(slopes)))
        )

    def _radius_underflows(self):
        """
        Whether a radius below the normal float range at t stands for a
        positive one. A log-radius evaluator decides; without one, an
        exact zero only counts as a real zero when the radius next to
        it is representable.
        """

        curve = self.curve

        if curve.log_rho is not None:
            return math.isfinite(float(curve.log_radius(self.t)))

        if self.d_t > 0:
            return True

        neighbours = [self.t - self.step]

        if self.room_past_t:
            neighbours.append(self.t + self.step)

        radii = curve.distances(np.array(neighbours))

        return bool(np.all(radii < TINY))

    def offsets(self):
        """
        s = t - tau over [0, t - a_eff)
        """

        return np.linspace(0.0, self.width, self.n_grid + 1)[:-1]

    def truncation_bound(self):
        """
        D(a_eff)/D(t): largest ratio a point beyond the cutoff of a
        spiral-like curve could add. Zero for a finite start.
        """

        if self.curve.domain.finite_start:
            return 0.0

        if self.polar:
            increment = self.curve.log_radius_increment(self.t, self.width)
            return math.exp(increment)

        d_cut = float(self.curve.distances(self.a_eff))
        return d_cut / self.d_t


def _chord(curve, t, n_grid, refine_tol, cutoff, plateau_eps):
    config = SupportConfig(
        n_grid=n_grid,
        refine_tol=refine_tol,
        cutoff=cutoff,
        plateau_eps=plateau_eps,
    )

    return Chord(curve, t, config)


def _point(chord, tau, kind, residual, bracket, log_ratio=None):
    d_tau = float(chord.curve.distances(tau))

    if log_ratio is None:
        if d_tau > 0 and chord.d_t > 0:
            log_ratio = math.log(d_tau / chord.d_t)
        else:
            log_ratio = -math.inf

    return MarkedPoint(
        tau=float(tau),
        kind=kind,
        d_tau=d_tau,
        residual=float(residual),
        bracket=(float(bracket[0]), float(bracket[1])),
        log_ratio=float(log_ratio),
    )


def _report(chord, points, field):
    if not points:
        raise ResolutionError(
            chord.n_grid,
            message=f"No {field} point resolved for the chord at t={chord.t}",
        )

    points = tuple(sorted(points, key=lambda point: point.tau))
    best = max(points, key=lambda point: point.log_ratio)

    if chord.polar or not (chord.d_t > 0):
        ratio = math.exp(best.log_ratio)
    else:
        ratio = best.d_tau / chord.d_t

    values = dict(
        t=chord.t,
        d_t=chord.d_t,
        points=points,
        a_eff=chord.a_eff,
        n_grid=chord.n_grid,
        truncation_bound=chord.truncation_bound(),
    )

    if field == "support":
        return ChordReport(ds=best.d_tau, ratio_support=ratio, **values)

    return ChordReport(dt_sup=best.d_tau, ratio_tangent=ratio, **values)


def _degenerate_report(chord):
    return ChordReport(
        t=chord.t,
        d_t=0.0,
        points=(),
        ds=math.inf,
        dt_sup=math.inf,
        degenerate=True,
        a_eff=chord.a_eff,
        n_grid=chord.n_grid,
        ratio_support=math.inf,
        ratio_tangent=math.inf,
    )


def phi_value(curve, t, tau):
    """
    The chord determinant (gamma(t) - gamma(a)) x (gamma(tau) - gamma(a))
    """

    curve.domain.check(t)
    curve.domain.check(tau, allow_start=True)

    if tau > t:
        raise InputError(f"phi_value needs tau <= t, got {tau} > {t}")

    sx, sy = curve.start_point
    x_t, y_t = eval_point(curve, t)
    x_tau, y_tau = eval_point(curve, tau)

    return (x_t - sx) * (y_tau - sy) - (y_t - sy) * (x_tau - sx)


# Cartesian path
# ===


def _cartesian_samples(chord):
    curve = chord.curve
    taus = np.linspace(chord.a_eff, chord.t, chord.n_grid + 1)

    if chord.room_past_t:
        taus = np.append(taus, chord.t + chord.step)

    xs = np.empty_like(taus)
    ys = np.empty_like(taus)
    first = 1 if curve.domain.finite_start else 0
    xs[first:], ys[first:] = curve.positions(taus[first:])

    if first:
        xs[0], ys[0] = curve.start_point

    finite = np.isfinite(xs) & np.isfinite(ys)

    if not np.all(finite):
        raise DomainEvaluationError(curve.name, float(taus[~finite][0]))

    return taus, xs, ys


def _plateau_point(chord, taus, feature, log_ratios=None):
    span = taus[feature.first : feature.last + 1]

    if log_ratios is not None:
        best = int(np.argmax(log_ratios[feature.first : feature.last + 1]))
        log_ratio = float(log_ratios[feature.first + best])
    else:
        best = int(np.argmax(chord.curve.distances(span)))
        log_ratio = None

    return _point(
        chord,
        span[best],
        "plateau",
        0.0,
        (min(span[0], span[-1]), max(span[0], span[-1])),
        log_ratio,
    )


def _refine_extremum(chord, feature, phi_at, turn_rate):
    """
    Tangency root of the turn rate inside the grid bracket when the
    curve is differentiable, golden section on Phi otherwise
    """

    lo, hi = feature.lo, feature.hi

    if turn_rate is not None:
        xtol = chord.tol / 2.0

        try:
            root = polish_root(turn_rate, lo, hi, xtol)
        except (NumericalError, ValueError, RuntimeError):
            root = None

        if root is not None and lo < root < hi:
            return root, xtol + 4 * EPS * abs(root)

    return golden_section(
        phi_at, lo, hi, chord.tol, maximize=feature.kind == "max"
    )


def _cartesian_support(chord):
    curve = chord.curve
    n = chord.n_grid
    taus, xs, ys = _cartesian_samples(chord)

    sx, sy = curve.start_point
    cx, cy = xs[n] - sx, ys[n] - sy
    phi = cx * (ys - sy) - cy * (xs - sx)

    magnitude = np.hypot(xs, ys) + math.hypot(sx, sy)
    floors = chord.config.plateau_eps * np.maximum(
        np.abs(phi[:-1]), np.abs(phi[1:])
    ) + ROUNDING * math.hypot(cx, cy) * np.maximum(
        magnitude[:-1], magnitude[1:]
    )

    features = local_extrema(taus, phi, floors, 1, n)

    # Without room past t, t counts as a one-sided extremum
    if not chord.room_past_t and not any(f.last >= n for f in features):
        (last_sign,) = step_signs(phi[n - 1 :], floors[n - 1 :])

        if last_sign:
            kind = "max" if last_sign > 0 else "min"
            features.append(Feature(kind, n, n, taus[n], taus[n]))

    def phi_at(tau):
        x, y = curve.positions(tau)
        return cx * (y - sy) - cy * (x - sx)

    def turn_rate(tau):
        dx, dy = curve.derivatives(tau)
        return cx * dy - cy * dx

    points = []

    for feature in features:
        if feature.kind == "plateau":
            points.append(_plateau_point(chord, taus, feature))
            continue

        kind = "support_max" if feature.kind == "max" else "support_min"

        if feature.first >= n:
            points.append(_point(chord, chord.t, kind, 0.0, (chord.t,) * 2))
            continue

        tau, residual = _refine_extremum(
            chord,
            feature,
            phi_at,
            turn_rate if curve.differentiable else None,
        )
        tau = min(tau, chord.t)
        points.append(
            _point(chord, tau, kind, residual, (feature.lo, feature.hi))
        )

    logger.debug("%d support point(s) at t=%r", len(points), chord.t)

    return _report(chord, points, "support")


def _cartesian_tangent(chord):
    curve = chord.curve
    taus = np.linspace(chord.a_eff, chord.t, chord.n_grid + 1)[1:]

    sx, sy = curve.start_point
    x_t, y_t = curve.positions(chord.t)
    cx, cy = x_t - sx, y_t - sy

    dxs, dys = curve.derivatives(taus)
    rates = cx * dys - cy * dxs

    if not np.all(np.isfinite(rates)):
        bad = taus[~np.isfinite(rates)][0]
        raise DomainEvaluationError(f"{curve.name}'", float(bad))

    noise = ANALYTIC_NOISE if curve.has_derivative else NUMERIC_NOISE
    floors = noise * math.hypot(cx, cy) * np.hypot(dxs, dys)

    def turn_rate(tau):
        dx, dy = curve.derivatives(tau)
        return cx * dy - cy * dx

    points = []

    for feature in sign_changes(taus, rates, floors):
        if feature.kind == "plateau":
            points.append(_plateau_point(chord, taus, feature))
            continue

        tau, residual = feature.hi, 0.0

        if feature.lo < feature.hi:
            root = polish_root(
                turn_rate, feature.lo, feature.hi, chord.tol / 2
            )

            if root is None:
                tau = (feature.lo + feature.hi) / 2.0
                residual = feature.hi - feature.lo
            else:
                tau = root
                residual = chord.tol / 2 + 4 * EPS * abs(root)

        points.append(
            _point(
                chord, tau, "tangent_root", residual, (feature.lo, feature.hi)
            )
        )

    return _report(chord, points, "tangent")


# Polar path
# ===


def _polar_equation(curve, t):
    """
    cos s - phi'(t - s) sin s: the tangency condition
    rho cos(t - tau) - rho' sin(t - tau) = 0 divided by rho(tau)
    """

    def equation(s):
        slope = float(curve.log_radius_slope(t - s))
        return math.cos(s) - slope * math.sin(s)

    return equation


def _polar_roots(chord):
    """
    Roots of the tangency equation over offsets in [0, t - a_eff), as
    (feature, s, residual, left_sign, right_sign); plateaus have s None
    """

    curve, t = chord.curve, chord.t
    offsets = chord.offsets()
    slopes = curve.log_radius_slope(t - offsets)
    lever = slopes * np.sin(offsets)
    values = np.cos(offsets) - lever

    analytic = curve.dlog_rho is not None or curve.drho is not None
    noise = ANALYTIC_NOISE if analytic else NUMERIC_NOISE
    floors = ANALYTIC_NOISE + noise * np.abs(lever)
    signs = np.where(np.abs(values) <= floors, 0, np.sign(values))

    equation = _polar_equation(curve, t)
    roots = []

    for feature in sign_changes(offsets, values, floors):
        if feature.kind == "plateau":
            roots.append((feature, None, 0.0, 0, 0))
            continue

        if signs[feature.first] != 0:
            left, right = signs[feature.first], signs[feature.last]
        else:
            left = signs[feature.first - 1] if feature.first > 0 else 0
            right = (
                signs[feature.last + 1]
                if feature.last + 1 < len(offsets)
                else 0
            )

        s, residual = feature.lo, 0.0

        if feature.lo < feature.hi:
            root = polish_root(equation, feature.lo, feature.hi, 0.0)

            if root is None:
                s = (feature.lo + feature.hi) / 2.0
                residual = feature.hi - feature.lo
            else:
                s = root
                residual = 4 * EPS * abs(root) + np.finfo(float).tiny

        roots.append((feature, s, residual, int(left), int(right)))

    return offsets, roots


def _polar_point(chord, s, kind, residual, feature):
    log_ratio = (
        float(chord.curve.log_radius_increment(chord.t, s)) if s > 0 else 0.0
    )

    return _point(
        chord,
        chord.t - s,
        kind,
        residual,
        (chord.t - feature.hi, chord.t - feature.lo),
        log_ratio,
    )


def _polar_plateau(chord, offsets, feature):
    increments = np.zeros(len(offsets))
    increments[1:] = chord.curve.log_radius_increment(chord.t, offsets[1:])

    return _plateau_point(chord, chord.t - offsets, feature, increments)


def _polar_support(chord):
    offsets, roots = _polar_roots(chord)
    points = []

    for feature, s, residual, left, right in roots:
        if s is None:
            points.append(_polar_plateau(chord, offsets, feature))
            continue

        # Touching roots are not extrema of |Phi|
        if left * right >= 0:
            continue

        # psi = ln|Phi| rises into s iff e / sin s > 0 on the left,
        # and Phi = -rho(t) rho(tau) sin s
        sine = math.sin(s)
        abs_max = left * sine > 0
        kind = "support_max" if abs_max == (sine < 0) else "support_min"
        points.append(_polar_point(chord, s, kind, residual, feature))

    if not chord.room_past_t:
        end = Feature("max", 0, 0, 0.0, 0.0)
        points.append(_polar_point(chord, 0.0, "support_max", 0.0, end))

    return _report(chord, points, "support")


def _polar_tangent(chord):
    offsets, roots = _polar_roots(chord)
    points = []

    for feature, s, residual, left, right in roots:
        if s is None:
            points.append(_polar_plateau(chord, offsets, feature))
        else:
            points.append(
                _polar_point(chord, s, "tangent_root", residual, feature)
            )

    return _report(chord, points, "tangent")


# Public operations
# ===


def find_support_set(
    curve,
    t,
    n_grid=N_GRID,
    refine_tol=None,
    cutoff=None,
    plateau_eps=PLATEAU_EPS,
):
    """
    S(t): parameters tau in (a_eff, t] where gamma(tau) is a support
    point for the chord [gamma(a), gamma(t)], and DS(t) as the largest
    D(tau) among them.

    Strict extrema are refined to `refine_tol`; runs of equal
    determinant values come back as one "plateau" point (the one with
    the largest D). A chord of length zero gives a degenerate report.

    :param n_grid: Grid intervals over [a_eff, t] (>= 16)
    :param refine_tol: Refinement bracket width
    :param cutoff: Window width t - a_eff when a = -inf
    :param plateau_eps: Relative flatness threshold
    """

    chord = _chord(curve, t, n_grid, refine_tol, cutoff, plateau_eps)

    if chord.degenerate:
        return _degenerate_report(chord)

    if chord.polar:
        return _polar_support(chord)

    return _cartesian_support(chord)


def find_tangent_set(
    curve,
    t,
    n_grid=N_GRID,
    refine_tol=None,
    cutoff=None,
    plateau_eps=PLATEAU_EPS,
):
    """
    T(t): parameters tau in (a_eff, t] where gamma'(tau) is collinear
    with the chord, and DT(t) as the largest D(tau) among them.

    Roots are bracketed by sign changes of the turn rate
    (gamma(t) - gamma(a)) x gamma'(tau) and refined with Brent's
    method. Roots of even multiplicity are only found when they land
    on a grid point.
    """

    if not curve.differentiable:
        raise CapabilityError("derivative")

    chord = _chord(curve, t, n_grid, refine_tol, cutoff, plateau_eps)

    if chord.degenerate:
        return _degenerate_report(chord)

    if chord.polar:
        return _polar_tangent(chord)

    return _cartesian_tangent(chord)


def tangent_set_polar(
    curve,
    t,
    n_max=64,
    n_grid=N_GRID,
    refine_tol=None,
    cutoff=None,
):
    """
    Solutions tau in (a_eff, t] of rho(tau) cos(t - tau) -
    rho'(tau) sin(t - tau) = 0, largest first, at most `n_max`
    """

    if curve.kind != "polar":
        raise InputError(f"{curve.name} is not a polar curve")

    if n_max < 1:
        raise InputError(f"n_max must be at least 1, got {n_max}")

    report = find_tangent_set(
        curve, t, n_grid=n_grid, refine_tol=refine_tol, cutoff=cutoff
    )

    return sorted(report.taus, reverse=True)[:n_max]


def support_report(curve, t, config=None):
    """
    Support and (for differentiable curves) tangent sets for one chord,
    merged into a single report carrying both ratios
    """

    config = config or SupportConfig()
    options = dict(
        n_grid=config.n_grid,
        refine_tol=config.refine_tol,
        cutoff=config.cutoff,
        plateau_eps=config.plateau_eps,
    )
    support = find_support_set(curve, t, **options)

    if support.degenerate or not curve.differentiable:
        return support

    tangent = find_tangent_set(curve, t, **options)

    return replace(
        support, dt_sup=tangent.dt_sup, ratio_tangent=tangent.ratio_tangent
    )
