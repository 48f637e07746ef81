# Standard library
import logging
import math

# Packages
import numpy as np

# Local
from canonicalwebteam.curveasym.exceptions import InputError, StencilError
from canonicalwebteam.curveasym.models import Domain, Point2, Vec2
from canonicalwebteam.curveasym.quadrature import adaptive_simpson


logger = logging.getLogger(__name__)

KINDS = ("cartesian", "polar", "graph")

# Room a difference stencil needs, in units of |t|
STENCIL_FLOOR = 64 * np.finfo(float).eps


def evaluate(function, t):
    """
    Call an evaluator at a float or over an array. Evaluators written
    with `math` only take floats, so arrays fall back to a loop.
    """

    values = np.asarray(t, dtype=float)

    if values.ndim == 0:
        return float(function(float(values)))

    try:
        with np.errstate(all="ignore"):
            result = np.asarray(function(values), dtype=float)
    except (TypeError, ValueError):
        result = None

    if result is not None and result.ndim == 0:
        return np.full(values.shape, float(result))

    if result is None or result.shape != values.shape:
        result = np.array([function(float(value)) for value in values])

    return result


def default_step(t):
    return max(1e-6, 1e-6 * abs(t))


class Curve:
    """
    An immutable planar parametric curve on the half-open domain [a, b).

    Build one with `Curve.cartesian`, `Curve.polar` or `Curve.graph`.
    Polar curves use the polar angle as parameter with the pole at the
    start point (the origin). They may also carry log-radius
    evaluators: `log_rho` (ln rho), `dlog_rho` (rho'/rho) and
    `log_rho_increment(t, s)` = ln rho(t - s) - ln rho(t), which the
    support scan uses so that tiny radii don't underflow.

    `differentiable=False` marks curves (e.g. polygons) for which the
    tangent set is not defined; their derivative evaluators, if given,
    are only used for arc length.
    """

    def __init__(
        self,
        kind,
        domain,
        start_point,
        x=None,
        y=None,
        dx=None,
        dy=None,
        rho=None,
        drho=None,
        log_rho=None,
        dlog_rho=None,
        log_rho_increment=None,
        differentiable=True,
        name=None,
    ):
        if kind not in KINDS:
            raise InputError(f"Unknown curve kind {kind!r}")

        if not isinstance(domain, Domain):
            domain = Domain(*domain)

        if start_point is None:
            raise InputError(
                "A start point is required when the domain starts at -inf"
            )

        start_point = Point2(float(start_point[0]), float(start_point[1]))

        if not all(math.isfinite(value) for value in start_point):
            raise InputError(f"Start point {start_point} is not finite")

        values = dict(
            kind=kind,
            domain=domain,
            start_point=start_point,
            x=x,
            y=y,
            dx=dx,
            dy=dy,
            rho=rho,
            drho=drho,
            log_rho=log_rho,
            dlog_rho=dlog_rho,
            log_rho_increment=log_rho_increment,
            differentiable=differentiable,
            name=name or kind,
        )

        for key, value in values.items():
            object.__setattr__(self, key, value)

    def __setattr__(self, key, value):
        raise AttributeError("Curve is immutable")

    def __repr__(self):
        return (
            f"Curve({self.name!r}, kind={self.kind!r}, "
            f"domain=[{self.domain.a}, {self.domain.b}))"
        )

    @classmethod
    def cartesian(
        cls,
        x,
        y,
        domain,
        start_point=None,
        dx=None,
        dy=None,
        differentiable=True,
        name=None,
    ):
        if (dx is None) != (dy is None):
            raise InputError("dx and dy must be given together")

        if not isinstance(domain, Domain):
            domain = Domain(*domain)

        if start_point is None and domain.finite_start:
            start_point = (
                evaluate(x, domain.a),
                evaluate(y, domain.a),
            )

        return cls(
            "cartesian",
            domain,
            start_point,
            x=x,
            y=y,
            dx=dx,
            dy=dy,
            differentiable=differentiable,
            name=name,
        )

    @classmethod
    def polar(
        cls,
        rho,
        domain,
        drho=None,
        log_rho=None,
        dlog_rho=None,
        log_rho_increment=None,
        differentiable=True,
        name=None,
    ):
        if not isinstance(domain, Domain):
            domain = Domain(*domain)

        if domain.finite_start:
            at_start = evaluate(rho, domain.a)

            if abs(at_start) > 1e-12:
                raise InputError(
                    f"A polar curve starts at the pole: rho(a) = {at_start}"
                )

        return cls(
            "polar",
            domain,
            (0.0, 0.0),
            rho=rho,
            drho=drho,
            log_rho=log_rho,
            dlog_rho=dlog_rho,
            log_rho_increment=log_rho_increment,
            differentiable=differentiable,
            name=name,
        )

    @classmethod
    def graph(cls, f, domain, df=None, start_point=None, name=None):
        if not isinstance(domain, Domain):
            domain = Domain(*domain)

        if start_point is None and domain.finite_start:
            start_point = (domain.a, evaluate(f, domain.a))

        return cls("graph", domain, start_point, x=None, y=f, dy=df, name=name)

    @property
    def has_derivative(self):
        """
        Whether an analytic derivative is available
        """

        if self.kind == "cartesian":
            return self.dx is not None and self.dy is not None
        if self.kind == "polar":
            return self.drho is not None or (
                self.log_rho is not None and self.dlog_rho is not None
            )

        return self.dy is not None

    def positions(self, t):
        """
        (xs, ys) at a float or an array of parameters
        """

        if self.kind == "cartesian":
            return evaluate(self.x, t), evaluate(self.y, t)

        if self.kind == "polar":
            rho = evaluate(self.rho, t)
            return rho * np.cos(t), rho * np.sin(t)

        return np.asarray(t, dtype=float) + 0.0, evaluate(self.y, t)

    def _analytic_derivatives(self, t):
        if self.kind == "cartesian":
            return evaluate(self.dx, t), evaluate(self.dy, t)

        if self.kind == "polar":
            rho = evaluate(self.rho, t)

            if self.drho is not None:
                drho = evaluate(self.drho, t)
            else:
                drho = rho * evaluate(self.dlog_rho, t)

            cos, sin = np.cos(t), np.sin(t)
            return drho * cos - rho * sin, drho * sin + rho * cos

        dy = evaluate(self.dy, t)
        return np.ones_like(np.asarray(dy, dtype=float)) + 0.0, dy

    def _stencil_steps(self, t, h):
        t = np.asarray(t, dtype=float)
        steps = np.full(t.shape, 0.0) + (
            np.maximum(1e-6, 1e-6 * np.abs(t)) if h is None else h
        )
        room = np.minimum(t - self.domain.a, self.domain.b - t)
        steps = np.where(steps >= room, room / 2.0, steps)
        floor = STENCIL_FLOOR * np.maximum(1.0, np.abs(t))

        if np.any(steps <= floor):
            index = np.flatnonzero(steps.ravel() <= floor)[0]
            raise StencilError(
                float(t.ravel()[index]), float(steps.ravel()[index])
            )

        return steps

    def derivatives(self, t, h=None):
        """
        (dxs, dys) at a float or an array of parameters: analytic when
        available, otherwise central differences with clipped steps
        """

        if self.has_derivative:
            return self._analytic_derivatives(t)

        t = np.asarray(t, dtype=float)
        steps = self._stencil_steps(t, h)
        x_plus, y_plus = self.positions(t + steps)
        x_minus, y_minus = self.positions(t - steps)
        dx = (x_plus - x_minus) / (2.0 * steps)
        dy = (y_plus - y_minus) / (2.0 * steps)

        if t.ndim == 0:
            return float(dx), float(dy)

        return dx, dy

    def distances(self, t):
        """
        D at a float or an array of parameters
        """

        if self.kind == "polar":
            return np.abs(evaluate(self.rho, t))

        xs, ys = self.positions(t)
        return np.hypot(xs - self.start_point.x, ys - self.start_point.y)

    def log_radius(self, t):
        """
        ln rho for polar curves; -inf or nan where rho <= 0
        """

        if self.log_rho is not None:
            return evaluate(self.log_rho, t)

        with np.errstate(all="ignore"):
            return np.log(evaluate(self.rho, t))

    def log_radius_slope(self, t):
        """
        rho'/rho for polar curves
        """

        if self.dlog_rho is not None:
            return evaluate(self.dlog_rho, t)

        if self.drho is not None:
            with np.errstate(all="ignore"):
                return evaluate(self.drho, t) / evaluate(self.rho, t)

        t = np.asarray(t, dtype=float)
        steps = self._stencil_steps(t, None)

        with np.errstate(all="ignore"):
            upper = self.log_radius(t + steps)
            lower = self.log_radius(t - steps)
            return (upper - lower) / (2.0 * steps)

    def log_radius_increment(self, t, s):
        """
        ln rho(t - s) - ln rho(t), with s the offset back from t
        """

        if self.log_rho_increment is not None:
            s = np.asarray(s, dtype=float)

            if s.ndim == 0:
                return float(self.log_rho_increment(t, float(s)))

            try:
                result = np.asarray(self.log_rho_increment(t, s), dtype=float)
            except (TypeError, ValueError):
                result = None

            if result is None or result.shape != s.shape:
                result = np.array(
                    [self.log_rho_increment(t, float(value)) for value in s]
                )

            return result

        with np.errstate(all="ignore"):
            return self.log_radius(t - np.asarray(s, dtype=float)) - (
                self.log_radius(t)
            )


def eval_point(curve, t):
    """
    Position of the curve at t (t = a allowed for a finite start)
    """

    curve.domain.check(t, allow_start=True)

    if curve.domain.finite_start and t == curve.domain.a:
        return curve.start_point

    x, y = curve.positions(float(t))
    return Point2(float(x), float(y))


def eval_derivative(curve, t, h=None):
    """
    Derivative vector at t. Without an analytic derivative this is
    the central difference (gamma(t+h) - gamma(t-h)) / 2h, with h
    defaulting to max(1e-6, 1e-6|t|) and clipped to stay inside (a, b).
    """

    curve.domain.check(t)
    dx, dy = curve.derivatives(float(t), h)

    return Vec2(float(dx), float(dy))


def distance_from_start(curve, t):
    """
    D(t): distance between gamma(a) and gamma(t)
    """

    curve.domain.check(t, allow_start=True)

    if curve.domain.finite_start and t == curve.domain.a:
        return 0.0

    return float(curve.distances(float(t)))


def arc_length(curve, t0, t1, tol=1e-9):
    """
    Length of the arc between parameters t0 <= t1 by adaptive Simpson
    quadrature of |gamma'|, to absolute error `tol`
    """

    curve.domain.check(t0)
    curve.domain.check(t1)

    if t1 < t0:
        raise InputError(f"arc_length needs t0 <= t1, got {t0} > {t1}")

    def speed(t):
        dx, dy = curve.derivatives(t)
        return math.hypot(dx, dy)

    return adaptive_simpson(speed, t0, t1, tol=tol)


def transformed(curve, rotation=0.0, translation=(0.0, 0.0), scale=1.0):
    """
    The curve moved rigidly and scaled about its start point:
    start + translation + scale * R(rotation) (gamma - start)
    """

    if scale <= 0:
        raise InputError(f"Scale must be positive, got {scale}")

    cos, sin = math.cos(rotation), math.sin(rotation)
    sx, sy = curve.start_point
    tx, ty = translation

    def x(t):
        xs, ys = curve.positions(t)
        return sx + tx + scale * (cos * (xs - sx) - sin * (ys - sy))

    def y(t):
        xs, ys = curve.positions(t)
        return sy + ty + scale * (sin * (xs - sx) + cos * (ys - sy))

    def dx(t):
        dxs, dys = curve.derivatives(t)
        return scale * (cos * dxs - sin * dys)

    def dy(t):
        dxs, dys = curve.derivatives(t)
        return scale * (sin * dxs + cos * dys)

    analytic = curve.has_derivative

    return Curve.cartesian(
        x,
        y,
        curve.domain,
        start_point=(sx + tx, sy + ty),
        dx=dx if analytic else None,
        dy=dy if analytic else None,
        differentiable=curve.differentiable,
        name=f"{curve.name} (moved)",
    )


def reparameterized(curve, g, dg, domain):
    """
    gamma(g(u)) for an increasing bijection g from `domain` onto the
    curve's domain; `dg` > 0 is its derivative
    """

    if not isinstance(domain, Domain):
        domain = Domain(*domain)

    def x(u):
        return curve.positions(evaluate(g, u))[0]

    def y(u):
        return curve.positions(evaluate(g, u))[1]

    def dx(u):
        return curve.derivatives(evaluate(g, u))[0] * evaluate(dg, u)

    def dy(u):
        return curve.derivatives(evaluate(g, u))[1] * evaluate(dg, u)

    return Curve.cartesian(
        x,
        y,
        domain,
        start_point=curve.start_point,
        dx=dx if curve.has_derivative else None,
        dy=dy if curve.has_derivative else None,
        differentiable=curve.differentiable,
        name=f"{curve.name} (reparameterized)",
    )
