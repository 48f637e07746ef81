"""
Built-in curve families and mean value problems, each with the
constants and sequence its acceptance run uses
"""

# Standard library
import math
from dataclasses import dataclass
from typing import Callable, Optional

# Packages
import numpy as np
from scipy.special import expi

# Local
from canonicalwebteam.curveasym.curve import Curve
from canonicalwebteam.curveasym.exceptions import InputError
from canonicalwebteam.curveasym.meanvalue import FunctionPair, MeanValueProblem
from canonicalwebteam.curveasym.models import SequenceSpec


INF = math.inf


def to_zero(start=1.0, ratio=0.7, count=48, a=0.0, b=INF):
    return SequenceSpec(
        "geometric_to_finite", start, ratio, count, a=a, b=b
    )


def to_minus_inf(start=1.0, ratio=1.5, count=32, b=INF):
    return SequenceSpec(
        "exponential_to_minus_inf", start, ratio, count, a=-INF, b=b
    )


@dataclass(frozen=True)
class CatalogEntry:
    """
    `build(value)` makes the Curve (group "curve") or the
    MeanValueProblem (group "meanvalue") for a parameter value;
    `sequence(value)` the SequenceSpec it is sampled along
    """

    name: str
    group: str
    description: str
    build: Callable
    sequence: Callable
    parameter: Optional[str] = None
    default: Optional[float] = None
    closed_form: Optional[str] = None

    def value(self, given=None):
        if given is None:
            return self.default

        if self.parameter is None:
            raise InputError(f"{self.name} takes no parameter")

        return float(given)

    def as_dict(self):
        return {
            "name": self.name,
            "group": self.group,
            "description": self.description,
            "parameter": self.parameter,
            "default": self.default,
        }


# Curves
# ===


def log_spiral(alpha):
    if not alpha > 0:
        raise InputError(f"alpha must be positive, got {alpha}")

    return Curve.polar(
        lambda t: np.exp(alpha * np.asarray(t, dtype=float)),
        (-INF, INF),
        log_rho=lambda t: alpha * np.asarray(t, dtype=float),
        dlog_rho=lambda t: alpha + 0.0 * np.asarray(t, dtype=float),
        log_rho_increment=lambda t, s: -alpha * np.asarray(s, dtype=float),
        name=f"ex1 (alpha={alpha})",
    )


def power_spiral(alpha):
    if not alpha > 0:
        raise InputError(f"alpha must be positive, got {alpha}")

    def log_rho(t):
        with np.errstate(divide="ignore"):
            return alpha * np.log(t)

    return Curve.polar(
        lambda t: np.power(t, alpha),
        (0.0, INF),
        log_rho=log_rho,
        dlog_rho=lambda t: alpha / np.asarray(t, dtype=float),
        log_rho_increment=lambda t, s: alpha * np.log1p(-np.asarray(s) / t),
        name=f"ex2 (alpha={alpha})",
    )


def gaussian_spiral(power):
    """
    rho = exp(-(-t)^l) on (-inf, 0), whose radius underflows long
    before the ratio settles: the increment is exact in s
    """

    if not power > 1:
        raise InputError(f"l must exceed 1, got {power}")

    def increment(t, s):
        depth = -t
        growth = power * np.log1p(np.asarray(s, dtype=float) / depth)
        return -(depth**power) * np.expm1(growth)

    return Curve.polar(
        lambda t: np.exp(-np.power(-np.asarray(t, dtype=float), power)),
        (-INF, 0.0),
        log_rho=lambda t: -np.power(-np.asarray(t, dtype=float), power),
        dlog_rho=lambda t: power
        * np.power(-np.asarray(t, dtype=float), power - 1),
        log_rho_increment=increment,
        name=f"ex3 (l={power})",
    )


def wobbly_spiral(amplitude=0.1, frequency=5.0):
    """
    rho = e^t (1 + amplitude sin(frequency t))
    """

    def wobble(t):
        t = np.asarray(t, dtype=float)
        return np.log1p(amplitude * np.sin(frequency * t))

    def slope(t):
        t = np.asarray(t, dtype=float)
        return 1.0 + amplitude * frequency * np.cos(frequency * t) / (
            1.0 + amplitude * np.sin(frequency * t)
        )

    return Curve.polar(
        lambda t: np.exp(t) * (1.0 + amplitude * np.sin(frequency * t)),
        (-INF, INF),
        log_rho=lambda t: np.asarray(t, dtype=float) + wobble(t),
        dlog_rho=slope,
        log_rho_increment=lambda t, s: -np.asarray(s, dtype=float)
        + wobble(t - np.asarray(s, dtype=float))
        - wobble(t),
        name="oscillating polar",
    )


def polygonal_spiral(alpha=1.0, step=math.pi / 8):
    """
    Polygon through the points of the spiral e^(alpha theta) at angles
    k * step, run through linearly in t: continuous, with corners
    """

    def vertices(t):
        t = np.asarray(t, dtype=float)
        index = np.floor(t / step)
        weight = t / step - index
        angles = index * step
        near = np.exp(alpha * angles)
        far = np.exp(alpha * (angles + step))
        return angles, weight, near, far

    def x(t):
        angles, weight, near, far = vertices(t)
        return (1 - weight) * near * np.cos(angles) + weight * far * np.cos(
            angles + step
        )

    def y(t):
        angles, weight, near, far = vertices(t)
        return (1 - weight) * near * np.sin(angles) + weight * far * np.sin(
            angles + step
        )

    def dx(t):
        angles, weight, near, far = vertices(t)
        return (far * np.cos(angles + step) - near * np.cos(angles)) / step

    def dy(t):
        angles, weight, near, far = vertices(t)
        return (far * np.sin(angles + step) - near * np.sin(angles)) / step

    return Curve.cartesian(
        x,
        y,
        (-INF, INF),
        start_point=(0.0, 0.0),
        dx=dx,
        dy=dy,
        differentiable=False,
        name="polygonal spiral",
    )


def _graph(f, df, name):
    return Curve.graph(f, (0.0, INF), df=df, name=name)


def _plane(x, y, dx, dy, name, b=INF):
    return Curve.cartesian(x, y, (0.0, b), dx=dx, dy=dy, name=name)


def _ones(t):
    return np.ones_like(np.asarray(t, dtype=float))


CURVES = (
    CatalogEntry(
        "ex1",
        "curve",
        "logarithmic spiral rho = exp(alpha t) from -inf",
        log_spiral,
        lambda alpha: to_minus_inf(count=32),
        parameter="alpha",
        default=1.0,
        closed_form="ex1",
    ),
    CatalogEntry(
        "ex2",
        "curve",
        "power spiral rho = t^alpha from 0",
        power_spiral,
        lambda alpha: to_zero(count=48),
        parameter="alpha",
        default=1.0,
        closed_form="ex2",
    ),
    CatalogEntry(
        "ex3",
        "curve",
        "spiral rho = exp(-(-t)^l) from -inf",
        gaussian_spiral,
        lambda power: to_minus_inf(start=5.0, count=20, b=0.0),
        parameter="l",
        default=2.0,
        closed_form="ex3",
    ),
    CatalogEntry(
        "parabola",
        "curve",
        "graph of t^2 from 0",
        lambda value: _graph(
            lambda t: np.square(t), lambda t: 2.0 * np.asarray(t), "parabola"
        ),
        lambda value: to_zero(),
    ),
    CatalogEntry(
        "cubic",
        "curve",
        "x = t, y = t^3 - t from 0",
        lambda value: _plane(
            lambda t: np.asarray(t, dtype=float),
            lambda t: np.power(t, 3) - t,
            _ones,
            lambda t: 3.0 * np.square(t) - 1.0,
            "cubic",
        ),
        lambda value: to_zero(count=24),
    ),
    CatalogEntry(
        "circle",
        "curve",
        "unit circle through the origin, (sin t, 1 - cos t)",
        lambda value: _plane(
            np.sin,
            lambda t: 2.0 * np.square(np.sin(np.asarray(t) / 2.0)),
            np.cos,
            np.sin,
            "circle",
            b=2 * math.pi,
        ),
        lambda value: to_zero(b=2 * math.pi),
    ),
    CatalogEntry(
        "power",
        "curve",
        "graph of t^1.5 from 0",
        lambda value: _graph(
            lambda t: np.power(t, 1.5),
            lambda t: 1.5 * np.sqrt(t),
            "power graph",
        ),
        lambda value: to_zero(),
    ),
    CatalogEntry(
        "cusp",
        "curve",
        "semicubical parabola (t^2, t^3) from its cusp",
        lambda value: _plane(
            lambda t: np.square(t),
            lambda t: np.power(t, 3),
            lambda t: 2.0 * np.asarray(t),
            lambda t: 3.0 * np.square(t),
            "cusp",
        ),
        lambda value: to_zero(count=24),
    ),
    CatalogEntry(
        "exp",
        "curve",
        "graph of e^t - 1 from 0",
        lambda value: _graph(np.expm1, np.exp, "exp graph"),
        lambda value: to_zero(),
    ),
    CatalogEntry(
        "wobble",
        "curve",
        "oscillating polar profile rho = e^t (1 + 0.1 sin 5t)",
        lambda value: wobbly_spiral(),
        lambda value: to_minus_inf(count=24),
    ),
    CatalogEntry(
        "polygon",
        "curve",
        "polygon inscribed in the spiral e^t, corners every pi/8",
        lambda value: polygonal_spiral(),
        # Corners underflow past t = -700
        lambda value: to_minus_inf(count=14),
    ),
)


# Mean value problems
# ===


def extremal_g(x):
    """
    g(x) = -int_0^x dt / ln t = -Ei(ln x), continued by g(0) = 0
    """

    x = np.asarray(x, dtype=float)

    with np.errstate(divide="ignore"):
        values = np.where(x > 0, -expi(np.log(np.where(x > 0, x, 1.0))), 0.0)

    return values if values.ndim else float(values)


def extremal_dg(x):
    x = np.asarray(x, dtype=float)

    with np.errstate(divide="ignore"):
        values = np.where(x > 0, -1.0 / np.log(np.where(x > 0, x, 0.5)), 0.0)

    return values if values.ndim else float(values)


def remark_pair(alpha):
    if not alpha > 0:
        raise InputError(f"alpha must be positive, got {alpha}")

    return MeanValueProblem(
        "xi",
        pair=FunctionPair(
            lambda t: np.power(t, 1.0 + alpha),
            lambda t: np.asarray(t, dtype=float),
            0.0,
            dg=lambda t: (1.0 + alpha) * np.power(t, alpha),
            dh=_ones,
            name=f"remark41 (alpha={alpha})",
        ),
        name="remark41",
    )


def lagrange_extremal(value=None):
    return MeanValueProblem(
        "xi",
        pair=FunctionPair(
            extremal_g,
            lambda t: np.asarray(t, dtype=float),
            0.0,
            dg=extremal_dg,
            dh=_ones,
            b=1.0,
            name="lagrange-extremal",
        ),
        name="lagrange-extremal",
    )


def power_weight(beta):
    if not beta > -1:
        raise InputError(f"beta must exceed -1, got {beta}")

    return MeanValueProblem(
        "eta",
        f=lambda t: np.asarray(t, dtype=float),
        w=lambda t: np.power(t, beta),
        a=0.0,
        name=f"powerweight (beta={beta})",
    )


def cauchy_sine(value=None):
    return MeanValueProblem(
        "xi",
        pair=FunctionPair(
            np.sin,
            lambda t: np.asarray(t, dtype=float),
            0.0,
            dg=np.cos,
            dh=_ones,
            name="cauchy-sine",
        ),
        name="cauchy-sine",
    )


MEAN_VALUES = (
    CatalogEntry(
        "remark41",
        "meanvalue",
        "xi for g = t^(1+alpha), h = t: ratio_h = (1/(1+alpha))^(1/alpha)",
        remark_pair,
        lambda alpha: to_zero(ratio=0.5, count=24),
        parameter="alpha",
        default=1.0,
        closed_form="remark41",
    ),
    CatalogEntry(
        "lagrange-extremal",
        "meanvalue",
        "Lagrange xi for g = -int_0^x dt/ln t, the case of equality",
        lagrange_extremal,
        lambda value: to_zero(start=1e-4, ratio=0.1, count=7, b=1.0),
    ),
    CatalogEntry(
        "powerweight",
        "meanvalue",
        "eta for f = t with weight t^beta: eta/x = (beta+1)/(beta+2)",
        power_weight,
        lambda beta: to_zero(ratio=0.5, count=16),
        parameter="beta",
        default=1.0,
        closed_form="powerweight",
    ),
    CatalogEntry(
        "cauchy-sine",
        "meanvalue",
        "Cauchy xi for g = sin t, h = t",
        cauchy_sine,
        lambda value: to_zero(start=2.0, ratio=0.5, count=16),
    ),
)

CATALOG = {entry.name: entry for entry in CURVES + MEAN_VALUES}


def get_entry(name, group=None):
    entry = CATALOG.get(name)

    if entry is None or (group and entry.group != group):
        known = sorted(
            key
            for key, value in CATALOG.items()
            if not group or value.group == group
        )
        raise InputError(f"Unknown catalog entry {name!r}; known: {known}")

    return entry


def build(name, value=None, group=None):
    """
    (object, SequenceSpec, parameter value) for a catalog entry
    """

    entry = get_entry(name, group)
    value = entry.value(value)

    return entry.build(value), entry.sequence(value), value


def catalog_list(group=None):
    return [
        entry.as_dict()
        for entry in CATALOG.values()
        if group is None or entry.group == group
    ]
