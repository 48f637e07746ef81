# Standard library
import logging

# Packages
import numpy as np

# Local
from canonicalwebteam.curveasym.exceptions import AccuracyError


logger = logging.getLogger(__name__)

MAX_LEVELS = 60
ROUNDING = 64 * np.finfo(float).eps
COARSE_POINTS = 33


def _simpson(fa, fm, fb, width):
    return width / 6.0 * (fa + 4.0 * fm + fb)


def adaptive_simpson(f, lower, upper, tol=1e-12, max_levels=MAX_LEVELS):
    """
    Integrate a real function over [lower, upper] with adaptive
    Simpson's rule and interval bisection.

    Each interval is accepted once its Richardson error estimate is
    below its share of `tol` (absolute) or below rounding noise.
    Intervals that reach `max_levels` bisections without converging
    make the call raise AccuracyError, carrying the best estimate,
    when their summed error estimate exceeds `tol`.

    :param f: Callable float -> float
    :param lower: Lower limit
    :param upper: Upper limit
    :param tol: Absolute error target
    :param max_levels: Bisection depth cap
    """

    if lower == upper:
        return 0.0

    if lower > upper:
        return -adaptive_simpson(f, upper, lower, tol, max_levels)

    fa = f(lower)
    fb = f(upper)
    fm = f((lower + upper) / 2.0)
    whole = _simpson(fa, fm, fb, upper - lower)

    total = 0.0
    error = 0.0
    unconverged = 0

    # (a, b, fa, fm, fb, whole, tol, level)
    stack = [(lower, upper, fa, fm, fb, whole, tol, 0)]

    while stack:
        a, b, fa, fm, fb, whole, local_tol, level = stack.pop()
        m = (a + b) / 2.0
        flm = f((a + m) / 2.0)
        frm = f((m + b) / 2.0)
        left = _simpson(fa, flm, fm, m - a)
        right = _simpson(fm, frm, fb, b - m)
        delta = (left + right - whole) / 15.0

        collapsed = not (a < (a + m) / 2.0 < m < (m + b) / 2.0 < b)

        # Below rounding noise more bisection can't help
        accepted = max(local_tol, ROUNDING * abs(left + right))

        if abs(delta) <= accepted or level >= max_levels or collapsed:
            if abs(delta) > accepted:
                unconverged += 1

            total += left + right + delta
            error += abs(delta)
            continue

        stack.append((m, b, fm, frm, fb, right, local_tol / 2.0, level + 1))
        stack.append((a, m, fa, flm, fm, left, local_tol / 2.0, level + 1))

    if unconverged:
        logger.debug(
            "%d interval(s) stopped early on [%r, %r], error %r",
            unconverged,
            lower,
            upper,
            error,
        )

        # Kinks stall the bisection without hurting the total
        if error > tol:
            raise AccuracyError(total, error)

    return total


def integrate(f, lower, upper, rel_tol=1e-12, max_levels=MAX_LEVELS):
    """
    adaptive_simpson with a tolerance relative to the size of the
    integral, estimated from |f| on a coarse uniform grid
    """

    if lower == upper:
        return 0.0

    nodes = np.linspace(lower, upper, COARSE_POINTS)
    magnitude = np.mean(np.abs([f(float(node)) for node in nodes]))
    scale = magnitude * abs(upper - lower)

    if not scale > 0:
        scale = abs(upper - lower)

    return adaptive_simpson(f, lower, upper, rel_tol * scale, max_levels)
