"""Convexity and additivity analysis of the concurrence-to-measure map.

Everything here is a scalar analysis of h(theta) = gwc_from_concurrence:
its second derivative in closed form (finite-difference-verified), the
theta -> 1 limit of that derivative whose sign change locates the convexity
threshold, the gradient factors ruling out interior stationary points, and
grid certificates for subadditivity of h / superadditivity of h^2 on the
unit quarter disk.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .measures import Omega, gwc_from_concurrence

__all__ = [
    "RootResult",
    "GridCert",
    "second_derivative",
    "second_derivative_limit_at_one",
    "find_convexity_threshold",
    "gradient_factor_pair",
    "subadditivity_gap",
    "squared_superadditivity_gap",
    "subadditivity_boundary",
    "superadditivity_sq_boundary",
    "find_monogamy_threshold",
    "certify_subadditive",
    "certify_superadditive_sq",
]

# Below this distance of theta^2 from 1, the closed-form second derivative
# loses digits to cancellation and evaluation switches to the exact limit.
_LIMIT_SWITCH = 1e-8


@dataclass(frozen=True)
class RootResult:
    root: float
    bracket: tuple[float, float]
    residual: float
    iterations: int


@dataclass(frozen=True)
class GridCert:
    """Outcome of checking an inequality on a closed parameter grid."""

    region: str
    step: float
    worst_violation: float
    passed: bool


def second_derivative(theta, omega):
    """d^2/dtheta^2 of the concurrence-to-measure map, closed form.

    Positive where the map is convex in theta.  Requires theta strictly
    inside (0, 1); within 1e-8 of theta^2 = 1 the evaluation switches to
    the exact theta -> 1 limit.  Verified against finite differences of
    gwc_from_concurrence in the test suite.
    """
    w = float(Omega(omega))
    th = np.asarray(theta, dtype=float)
    if np.any(th <= 0.0) or np.any(th >= 1.0):
        raise ValueError("theta must lie strictly inside (0, 1)")
    if w == 1.0:  # map is identically zero at the degenerate endpoint
        out = np.zeros_like(th)
        return float(out) if np.ndim(theta) == 0 else out
    near_one = (1.0 - th**2) < _LIMIT_SWITCH
    t = np.where(near_one, 0.5, th)  # placeholder value, masked out below
    s = np.sqrt(1.0 - t**2)
    b = ((1.0 + s) / 2.0) ** w + ((1.0 - s) / 2.0) ** w - 1.0
    a1 = w**2 / 2.0**w * b ** (w - 2.0)
    a2 = w * (w - 1.0) / 2.0**w * (t * ((1.0 - s) ** (w - 1.0) - (1.0 + s) ** (w - 1.0)) / s) ** 2
    a4 = (1.0 - s) ** (w - 2.0) / (1.0 - t**2) * ((1.0 - s) / s + t**2 * (w - 1.0))
    a5 = (1.0 + s) ** (w - 2.0) / (1.0 - t**2) * ((1.0 + s) / s - t**2 * (w - 1.0))
    out = a1 * (a2 + b * (a4 - a5))
    out = np.where(near_one, second_derivative_limit_at_one(w), out)
    return float(out) if np.ndim(theta) == 0 else out


def second_derivative_limit_at_one(omega):
    """Limit of second_derivative as theta -> 1, in closed form.

    Its unique sign change on (0, 1) locates the convexity threshold; the
    value is 0 exactly at omega = 1 (degenerate endpoint).
    """
    w = np.asarray(omega, dtype=float)
    if np.any(w <= 0.0) or np.any(w > 1.0):
        raise ValueError("omega must lie in (0, 1]")
    wl = np.where(w == 1.0, 0.5, w)  # placeholder, masked below
    base = 2.0 ** (1.0 - wl) - 1.0
    bracket = 12.0 * wl * (wl - 1.0) ** 3 - 2.0 * (2.0**wl - 2.0) * (wl - 1.0) * (
        wl**2 - 5.0 * wl + 3.0
    )
    out = wl**2 / (3.0 * 2.0 ** (2.0 * wl)) * base ** (wl - 2.0) * bracket
    out = np.where(w == 1.0, 0.0, out)
    return float(out) if np.ndim(omega) == 0 else out


def _bisect(fn, lo: float, hi: float, max_iter: int = 200) -> tuple[float, int]:
    flo, fhi = fn(lo), fn(hi)
    if flo == 0.0:
        return lo, 0
    if fhi == 0.0:
        return hi, 0
    if np.sign(flo) == np.sign(fhi):
        raise ValueError(f"bracket [{lo}, {hi}] does not straddle a sign change")
    it = 0
    for it in range(1, max_iter + 1):
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:  # interval collapsed to machine precision
            break
        fm = fn(mid)
        if fm == 0.0:
            return mid, it
        if np.sign(fm) == np.sign(flo):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi), it


def find_convexity_threshold() -> RootResult:
    """Order below which the concurrence-to-measure map stops being convex.

    Bisection of second_derivative_limit_at_one on the sign-definite
    bracket [0.8, 0.95]; approximately 0.85798.
    """
    lo, hi = 0.8, 0.95
    root, it = _bisect(second_derivative_limit_at_one, lo, hi)
    return RootResult(root, (lo, hi), abs(second_derivative_limit_at_one(root)), it)


def gradient_factor_pair(n, omega):
    """The scalar factor common to both partial gradients of the pair
    deficit along the constraint arc, and its derivative in n.

    The factor is h'(n) / n up to a positive constant; its strict
    monotonicity (negative derivative) rules out interior stationary
    points, pushing extrema of the pair deficit to the region boundary.
    Returns (factor, derivative); n strictly inside (0, 1).
    """
    w = float(Omega(omega))
    nn = np.asarray(n, dtype=float)
    if np.any(nn <= 0.0) or np.any(nn >= 1.0):
        raise ValueError("n must lie strictly inside (0, 1)")
    if w == 1.0:  # identically flat map: factor and derivative both vanish
        zero = np.zeros_like(nn)
        if np.ndim(n) == 0:
            return 0.0, 0.0
        return zero, zero.copy()
    s = np.sqrt(1.0 - nn**2)
    b = ((1.0 + s) / 2.0) ** w + ((1.0 - s) / 2.0) ** w - 1.0
    d = (1.0 - s) ** (w - 1.0) - (1.0 + s) ** (w - 1.0)
    f = b ** (w - 1.0) * d / s
    g = (
        nn * w * (w - 1.0) / 2.0**w * (d / s) ** 2 * b ** (w - 2.0)
        + (
            (w - 1.0) * nn * ((1.0 - s) ** (w - 2.0) + (1.0 + s) ** (w - 2.0)) / (1.0 - nn**2)
            + nn * d / (1.0 - nn**2) ** 1.5
        )
        * b ** (w - 1.0)
    )
    if np.ndim(n) == 0:
        return float(f), float(g)
    return f, g


def subadditivity_gap(theta1, theta2, omega):
    """h(sqrt(t1^2 + t2^2)) - h(t1) - h(t2); nonpositive when h is subadditive."""
    t1 = np.asarray(theta1, dtype=float)
    t2 = np.asarray(theta2, dtype=float)
    rad = np.sqrt(t1**2 + t2**2)
    if np.any(rad > 1.0 + 1e-12):
        raise ValueError("need theta1^2 + theta2^2 <= 1")
    h = gwc_from_concurrence
    return h(np.minimum(rad, 1.0), omega) - h(t1, omega) - h(t2, omega)


def squared_superadditivity_gap(theta1, theta2, omega):
    """h^2(sqrt(t1^2 + t2^2)) - h^2(t1) - h^2(t2); nonnegative when h^2 is
    superadditive."""
    t1 = np.asarray(theta1, dtype=float)
    t2 = np.asarray(theta2, dtype=float)
    rad = np.sqrt(t1**2 + t2**2)
    if np.any(rad > 1.0 + 1e-12):
        raise ValueError("need theta1^2 + theta2^2 <= 1")
    h = gwc_from_concurrence
    return (
        h(np.minimum(rad, 1.0), omega) ** 2 - h(t1, omega) ** 2 - h(t2, omega) ** 2
    )


def subadditivity_boundary(theta1, omega):
    """The subadditivity gap restricted to the unit-circle arc
    theta2 = sqrt(1 - theta1^2); the candidate worst case of the region."""
    t1 = np.asarray(theta1, dtype=float)
    if np.any(t1 < 0.0) or np.any(t1 > 1.0):
        raise ValueError("theta1 must lie in [0, 1]")
    h = gwc_from_concurrence
    out = h(1.0, omega) - h(t1, omega) - h(np.sqrt(1.0 - t1**2), omega)
    return float(out) if np.ndim(theta1) == 0 else out


def superadditivity_sq_boundary(theta1, omega):
    """The squared-map gap restricted to the unit-circle arc."""
    t1 = np.asarray(theta1, dtype=float)
    if np.any(t1 < 0.0) or np.any(t1 > 1.0):
        raise ValueError("theta1 must lie in [0, 1]")
    h = gwc_from_concurrence
    out = (
        h(1.0, omega) ** 2
        - h(t1, omega) ** 2
        - h(np.sqrt(1.0 - t1**2), omega) ** 2
    )
    return float(out) if np.ndim(theta1) == 0 else out


def find_monogamy_threshold() -> RootResult:
    """Order above which the squared map is superadditive on the disk.

    Bisection in omega of the arc gap at theta1 = 1/sqrt(2) (the symmetric
    worst case) on the sign-definite bracket [0.6, 0.8]; about 0.7962.
    """
    lo, hi = 0.6, 0.8
    fn = lambda w: superadditivity_sq_boundary(1.0 / np.sqrt(2.0), w)
    root, it = _bisect(fn, lo, hi)
    return RootResult(root, (lo, hi), abs(fn(root)), it)


def _quarter_disk(step: float):
    t = np.arange(0.0, 1.0 + step / 2.0, step)
    t = np.minimum(t, 1.0)
    t1, t2 = np.meshgrid(t, t, indexing="ij")
    inside = t1**2 + t2**2 <= 1.0 + 1e-12
    return t[t <= 1.0], t1[inside], t2[inside]


def certify_subadditive(omega, step: float = 5e-3, tol: float = 1e-9) -> GridCert:
    """Check the subadditivity gap <= tol on a closed quarter-disk grid
    (interior grid plus the exact boundary arc).

    Certification is supported for omega in [0.05, 1]; the map's behavior
    is numerically ill-conditioned below that.
    """
    w = Omega(omega)
    if float(w) < 0.05:
        raise ValueError("subadditivity certification covers omega in [0.05, 1]")
    axis, t1, t2 = _quarter_disk(step)
    worst = float(np.max(subadditivity_gap(t1, t2, w)))
    worst = max(worst, float(np.max(subadditivity_boundary(axis, w))))
    return GridCert(
        region=f"quarter disk incl. arc, claim: gap <= 0, omega={float(w)}",
        step=step,
        worst_violation=worst,
        passed=bool(worst <= tol),
    )


def certify_superadditive_sq(omega, step: float = 5e-3, tol: float = 1e-9) -> GridCert:
    """Check the squared-map gap >= -tol on the same closed grid."""
    w = Omega(omega)
    axis, t1, t2 = _quarter_disk(step)
    worst = float(np.min(squared_superadditivity_gap(t1, t2, w)))
    worst = min(worst, float(np.min(superadditivity_sq_boundary(axis, w))))
    return GridCert(
        region=f"quarter disk incl. arc, claim: squared gap >= 0, omega={float(w)}",
        step=step,
        worst_violation=worst,
        passed=bool(worst >= -tol),
    )
