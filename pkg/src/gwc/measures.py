"""Entanglement measures built on ordered Schmidt/eigenvalue spectra.

The central quantity is an order-parameterized concurrence: for a pure
state with squared Schmidt coefficients ``chi_i`` and order ``omega`` in
(0, 1] it is ``(sum_i chi_i**omega - 1) ** omega``.  At ``omega == 1`` the
measure is identically zero (degenerate endpoint), and the package returns
an exact 0.0 there.

For two-qubit mixed states the convex-roof extension has a closed form in
terms of the Wootters concurrence, certified for ``omega`` at or above
``CLOSED_FORM_OMEGA_MIN``; below that threshold results carry an
``unverified`` flag rather than failing.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .states import (
    DensityOperator,
    DimensionError,
    PureState,
    _SY2,
    _check_cut,
    _split_matrix,
    psd_eigh,
    schmidt_spectrum,
    spin_flip,
)

__all__ = [
    "CLOSED_FORM_OMEGA_MIN",
    "SQUARED_SUPERADDITIVE_OMEGA_MIN",
    "Omega",
    "MeasureValue",
    "gwc_of_spectrum",
    "gwc_pure",
    "concurrence_pure",
    "concurrence_mixed",
    "wootters_coefficients",
    "gwc_from_concurrence",
    "gwc_mixed_two_qubit",
    "concurrence_of_assistance",
    "gwcoa_bound",
    "batch_gwc",
    "batch_concurrence",
]

# Smallest order for which the concurrence-to-measure map is convex, so the
# two-qubit closed form (and the squared monogamy relations built on it)
# is certified.  The precise root is recoverable via
# analysis.find_convexity_threshold().
CLOSED_FORM_OMEGA_MIN = 0.85798

# Smallest order for which the squared map is superadditive on the unit
# disk; see analysis.find_monogamy_threshold().
SQUARED_SUPERADDITIVE_OMEGA_MIN = 0.7962


class Omega(float):
    """Measure order, valid on (0, 1].  The endpoint 1.0 is degenerate."""

    def __new__(cls, value):
        v = float(value)
        if not 0.0 < v <= 1.0:
            raise ValueError(f"omega must lie in (0, 1], got {value!r}")
        return super().__new__(cls, v)

    @property
    def degenerate(self) -> bool:
        """True at omega == 1, where the measure vanishes identically."""
        return float(self) == 1.0

    @property
    def closed_form_certified(self) -> bool:
        """True where the two-qubit mixed-state closed form is certified."""
        return float(self) >= CLOSED_FORM_OMEGA_MIN


@dataclass(frozen=True)
class MeasureValue:
    """A measure evaluation plus the context needed to interpret it."""

    value: float
    measure: str  # one of: gwc, concurrence, coa, gwcoa
    omega: float | None = None
    unverified: bool = False

    def __float__(self) -> float:
        return self.value


def gwc_of_spectrum(chis, omega) -> float:
    """Measure value from a squared-Schmidt (or eigenvalue) spectrum.

    ``chis`` must be nonnegative and sum to 1 within 1e-10.  Roundoff that
    drives ``sum(chis**omega) - 1`` into [-1e-12, 0) is clamped to 0;
    larger negativity indicates a non-spectrum and raises.
    """
    w = Omega(omega)
    chis = np.asarray(getattr(chis, "chis", chis), dtype=float).reshape(-1)
    if np.any(chis < -1e-12):
        raise ValueError("spectrum entries must be nonnegative")
    if abs(chis.sum() - 1.0) > 1e-10:
        raise ValueError("spectrum must sum to 1 within 1e-10")
    if w.degenerate:
        return 0.0
    b = float(np.sum(np.clip(chis, 0.0, None) ** float(w)) - 1.0)
    if b < -1e-12:
        raise ValueError(f"sum(chi**omega) - 1 = {b:.3e} is negative beyond roundoff")
    return float(max(b, 0.0) ** float(w))


def gwc_pure(psi: PureState, cut, omega) -> MeasureValue:
    """Order-``omega`` concurrence of a pure state across ``cut`` | rest."""
    w = Omega(omega)
    val = gwc_of_spectrum(schmidt_spectrum(psi, cut).chis, w)
    return MeasureValue(val, "gwc", omega=float(w))


def concurrence_pure(psi: PureState, cut) -> MeasureValue:
    """Concurrence sqrt(2 (1 - tr rho_cut^2)) of a pure state, any dims."""
    m, _, _ = _split_matrix(psi, cut)
    chis = np.linalg.svd(m, compute_uv=False) ** 2
    purity = float(np.sum(chis**2))
    return MeasureValue(float(np.sqrt(max(0.0, 2.0 * (1.0 - purity)))), "concurrence")


def wootters_coefficients(rho: DensityOperator) -> np.ndarray:
    """Square roots of the eigenvalues of rho * spin_flip(rho), nonincreasing.

    Computed as the singular values of the complex-symmetric matrix
    W^T (sigma_y x sigma_y) W, where the columns of W are the eigenvectors
    of rho scaled by the square roots of its eigenvalues.  The SVD route is
    numerically exact where the non-Hermitian product eigenproblem loses
    half the digits near zero.
    """
    if rho.dims != (2, 2):
        raise DimensionError(
            f"Wootters coefficients need a two-qubit state, got dims {rho.dims}"
        )
    vals, vecs = psd_eigh(rho.mat)
    w = vecs * np.sqrt(vals)
    tau = w.T @ _SY2 @ w
    mus = np.linalg.svd(tau, compute_uv=False)
    return np.sort(mus)[::-1]


def concurrence_mixed(rho: DensityOperator) -> MeasureValue:
    """Wootters concurrence max(0, mu1 - mu2 - mu3 - mu4) of a two-qubit state."""
    mus = wootters_coefficients(rho)
    return MeasureValue(float(max(0.0, mus[0] - mus[1] - mus[2] - mus[3])), "concurrence")


def concurrence_of_assistance(rho: DensityOperator) -> MeasureValue:
    """Roof maximum of the concurrence, mu1 + mu2 + mu3 + mu4 in closed form."""
    mus = wootters_coefficients(rho)
    return MeasureValue(float(np.sum(mus)), "coa")


def gwc_from_concurrence(theta, omega):
    """Measure value of a pure state with exactly two squared Schmidt
    coefficients ``(1 +- sqrt(1 - theta**2)) / 2``, i.e. concurrence theta.

    Accepts scalars or arrays; theta must lie in [0, 1].
    """
    w = Omega(omega)
    th = np.asarray(theta, dtype=float)
    if np.any(th < -1e-12) or np.any(th > 1.0 + 1e-12):
        raise ValueError("concurrence argument must lie in [0, 1]")
    th = np.clip(th, 0.0, 1.0)
    if w.degenerate:
        out = np.zeros_like(th)
    else:
        s = np.sqrt(1.0 - th**2)
        b = ((1.0 + s) / 2.0) ** float(w) + ((1.0 - s) / 2.0) ** float(w) - 1.0
        out = np.maximum(b, 0.0) ** float(w)
    return float(out) if np.ndim(theta) == 0 else out


def gwc_mixed_two_qubit(rho: DensityOperator, omega) -> MeasureValue:
    """Closed-form roof minimum for a two-qubit mixed state.

    Equals the convex-roof extension for omega >= CLOSED_FORM_OMEGA_MIN;
    below that the value is still computed but flagged ``unverified``.
    """
    w = Omega(omega)
    c = concurrence_mixed(rho).value
    return MeasureValue(
        gwc_from_concurrence(c, w),
        "gwc",
        omega=float(w),
        unverified=not w.closed_form_certified,
    )


def gwcoa_bound(rho: DensityOperator, omega) -> MeasureValue:
    """Concurrence-of-assistance bound for the roof maximum of the measure.

    Returns the concurrence-to-measure map evaluated at the closed-form
    concurrence of assistance.  Used as the pairwise right-hand side of the
    polygamy relation.
    """
    w = Omega(omega)
    coa = concurrence_of_assistance(rho).value
    return MeasureValue(
        gwc_from_concurrence(min(coa, 1.0), w),
        "gwcoa",
        omega=float(w),
        unverified=not w.closed_form_certified,
    )


# ---------------------------------------------------------------------------
# vectorized functionals for the roof optimizer
# ---------------------------------------------------------------------------

def _batch_chis(dims, cut):
    """Return a function mapping (m, dim) state rows to squared Schmidt rows."""
    dims = tuple(int(d) for d in dims)
    cut = _check_cut(dims, cut)
    rest = tuple(k for k in range(len(dims)) if k not in cut)
    perm = (0,) + tuple(1 + k for k in cut) + tuple(1 + k for k in rest)
    da = int(np.prod([dims[k] for k in cut]))

    def chis_of(amps2d: np.ndarray) -> np.ndarray:
        m = np.asarray(amps2d, dtype=complex)
        t = m.reshape((m.shape[0],) + dims).transpose(perm).reshape(m.shape[0], da, -1)
        return np.linalg.svd(t, compute_uv=False) ** 2

    return chis_of


def batch_gwc(dims, cut, omega):
    """Vectorized pure-state measure over rows of normalized amplitudes."""
    w = Omega(omega)
    chis_of = _batch_chis(dims, cut)

    def fn(amps2d: np.ndarray) -> np.ndarray:
        chis = chis_of(amps2d)
        if w.degenerate:
            return np.zeros(chis.shape[0])
        b = np.sum(chis ** float(w), axis=1) - 1.0
        return np.maximum(b, 0.0) ** float(w)

    return fn


def batch_concurrence(dims, cut):
    """Vectorized pure-state concurrence over rows of normalized amplitudes."""
    chis_of = _batch_chis(dims, cut)

    def fn(amps2d: np.ndarray) -> np.ndarray:
        chis = chis_of(amps2d)
        return np.sqrt(np.maximum(0.0, 2.0 * (1.0 - np.sum(chis**2, axis=1))))

    return fn
