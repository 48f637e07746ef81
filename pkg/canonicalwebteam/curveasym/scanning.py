"""
Grid scans shared by the support set and mean value solvers:
sign patterns of successive differences, sign-change brackets,
and the two refinements applied to what they find.
"""

# Standard library
import math
from dataclasses import dataclass

# Packages
import numpy as np
from scipy.optimize import brentq


GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class Feature:
    """
    Something found on a grid: a strict extremum ("max"/"min"),
    a plateau, or a root. `first`/`last` are the grid indices it
    spans, `lo`/`hi` the bracket handed to refinement.
    """

    kind: str
    first: int
    last: int
    lo: float
    hi: float


def step_signs(values, floors):
    """
    Sign of each successive difference, zero where the difference
    is within the noise floor of its step
    """

    with np.errstate(invalid="ignore"):
        steps = np.diff(values)

    # -inf - -inf is nan: two equal sentinels make a flat step
    undefined = np.isnan(steps)
    steps = np.where(undefined, 0.0, steps)
    floors = np.where(np.isfinite(floors), floors, 0.0)
    flat = undefined | (np.abs(steps) <= floors)

    return np.where(flat, 0, np.sign(steps)).astype(int)


def _runs(signs):
    runs = []
    start = 0

    for index in range(1, len(signs) + 1):
        if index == len(signs) or signs[index] != signs[start]:
            runs.append((int(signs[start]), start, index - 1))
            start = index

    return runs


def local_extrema(xs, values, floors, first_reportable, last_reportable):
    """
    Locate local extrema of sampled values.

    Grid points outside [first_reportable, last_reportable] only serve
    as neighbours. A run of three or more equal points is a plateau;
    a run of two equal points between opposite slopes is a strict
    extremum whose vertex fell between them.

    :param xs: Grid coordinates
    :param values: Sampled values
    :param floors: Per-step noise floor (len(xs) - 1)
    """

    signs = step_signs(values, floors)
    runs = _runs(signs)
    last_index = len(xs) - 1
    features = []

    def bracket(first, last):
        return xs[max(first - 1, 0)], xs[min(last + 1, last_index)]

    for position, (sign, start, end) in enumerate(runs):
        before = runs[position - 1][0] if position > 0 else None
        after = runs[position + 1][0] if position + 1 < len(runs) else None

        if sign == 0:
            first, last = start, end + 1

            if last - first >= 2:
                first = max(first, first_reportable)
                last = min(last, last_reportable)

                if first <= last:
                    features.append(
                        Feature("plateau", first, last, xs[first], xs[last])
                    )
            elif before and after and before != after:
                if first_reportable <= first <= last_reportable:
                    kind = "max" if before > 0 else "min"
                    lo, hi = bracket(first, last)
                    features.append(Feature(kind, first, last, lo, hi))

            continue

        # Strict turn at the point where this run hands over
        if after is not None and after != 0 and after != sign:
            point = end + 1

            if first_reportable <= point <= last_reportable:
                kind = "max" if sign > 0 else "min"
                lo, hi = bracket(point, point)
                features.append(Feature(kind, point, point, lo, hi))

    return sorted(features, key=lambda feature: feature.first)


def sign_changes(xs, values, floors):
    """
    Locate roots of sampled values: brackets where the sign flips,
    runs of one or two grid points that are zero within their floor,
    and plateaus of three or more zero points.

    :param floors: Per-point noise floor (len(xs))
    """

    zero = np.abs(values) <= floors
    signs = np.where(zero, 0, np.sign(values)).astype(int)
    features = []
    index = 0

    while index < len(xs):
        if signs[index] == 0:
            last = index

            while last + 1 < len(xs) and signs[last + 1] == 0:
                last += 1

            kind = "plateau" if last - index >= 2 else "root"
            features.append(Feature(kind, index, last, xs[index], xs[last]))
            index = last + 1
            continue

        if index + 1 < len(xs) and signs[index + 1] == -signs[index]:
            features.append(
                Feature("root", index, index + 1, xs[index], xs[index + 1])
            )

        index += 1

    return features


def golden_section(f, lo, hi, tol, maximize=True):
    """
    Shrink [lo, hi] around an extremum of a unimodal f until it is
    at most `tol` wide. Returns the midpoint and the final width.
    """

    sign = 1.0 if maximize else -1.0
    c = hi - GOLDEN * (hi - lo)
    d = lo + GOLDEN * (hi - lo)
    fc = sign * f(c)
    fd = sign * f(d)

    while hi - lo > tol:
        if fc >= fd:
            hi, d, fd = d, c, fc
            c = hi - GOLDEN * (hi - lo)
            fc = sign * f(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + GOLDEN * (hi - lo)
            fd = sign * f(d)

        if not lo < c < d < hi:
            break

    return (lo + hi) / 2.0, hi - lo


def polish_root(f, lo, hi, xtol):
    """
    Bracketed root of f in [lo, hi] to within `xtol`, or None
    when f has no sign change over the bracket
    """

    f_lo = f(lo)
    f_hi = f(hi)

    if not (math.isfinite(f_lo) and math.isfinite(f_hi)):
        return None

    if f_lo == 0:
        return lo
    if f_hi == 0:
        return hi
    if np.sign(f_lo) == np.sign(f_hi):
        return None

    return brentq(
        f,
        lo,
        hi,
        xtol=max(xtol, np.finfo(float).tiny),
        rtol=4 * np.finfo(float).eps,
    )
