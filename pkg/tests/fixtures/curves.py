# Packages
import numpy as np
from scipy.signal import argrelextrema

# Local
from canonicalwebteam.curveasym import Curve


# Oracle grid: 10^6 intervals over [0, 1]
ORACLE_POINTS = 1_000_000
# Extrema closer than this to 0 or t are redrawn
MARGIN = 3.0 / 4096


def cubic_curve(c1, c2, c3):
    """
    x = tau, y = c1 tau + c2 tau^2 + c3 tau^3 from the origin
    """

    return Curve.cartesian(
        lambda tau: tau,
        lambda tau: c1 * tau + c2 * tau**2 + c3 * tau**3,
        (0.0, np.inf),
        dx=lambda tau: np.ones_like(np.asarray(tau, dtype=float)),
        dy=lambda tau: c1 + 2 * c2 * tau + 3 * c3 * tau**2,
        name=f"cubic ({c1:.3f}, {c2:.3f}, {c3:.3f})",
    )


def trig_curve(amplitude, omega, phase):
    """
    x = tau, y = A (sin(omega tau + phase) - sin(phase)) from the origin
    """

    return Curve.cartesian(
        lambda tau: tau,
        lambda tau: amplitude * (np.sin(omega * tau + phase) - np.sin(phase)),
        (0.0, np.inf),
        dx=lambda tau: np.ones_like(np.asarray(tau, dtype=float)),
        dy=lambda tau: amplitude * omega * np.cos(omega * tau + phase),
        name=f"trig ({amplitude:.3f}, {omega:.3f}, {phase:.3f})",
    )


def oracle_extrema(curve, t=1.0):
    """
    Local extrema of the chord determinant on a 10^6 point grid
    """

    taus = np.linspace(0.0, t, ORACLE_POINTS + 1)
    xs, ys = curve.positions(taus)
    x_t, y_t = curve.positions(t)
    phi = x_t * ys - y_t * xs

    maxima = argrelextrema(phi, np.greater)[0]
    minima = argrelextrema(phi, np.less)[0]

    return np.sort(taus[np.concatenate([maxima, minima])])


def random_curves(count=20, seed=20240601):
    """
    Half cubic, half trig curves on [0, inf), each paired with the
    oracle extrema of its chord at t = 1
    """

    rng = np.random.default_rng(seed)
    curves = []

    while len(curves) < count:
        if len(curves) % 2 == 0:
            sign = rng.choice([-1.0, 1.0])
            curve = cubic_curve(
                rng.uniform(-2.0, 2.0),
                sign * rng.uniform(0.2, 2.0),
                sign * rng.uniform(0.2, 2.0),
            )
        else:
            curve = trig_curve(
                rng.uniform(0.5, 2.0),
                rng.uniform(6.0, 14.0),
                rng.uniform(0.0, 2 * np.pi),
            )

        extrema = oracle_extrema(curve)

        if len(extrema) == 0:
            continue

        if extrema[0] < MARGIN or extrema[-1] > 1.0 - MARGIN:
            continue

        curves.append((curve, extrema))

    return curves
