"""Figure-grid sweeps exported as CSV.

Each sweep id (fig1 .. fig15) evaluates one deterministic closed-form grid:

  fig1   curvature of the concurrence-to-measure map over (theta, omega)
  fig2   its theta -> 1 limit over omega (sign change at the convexity root)
  fig3   gradient-factor derivative over (n, omega) (interior-extremum bar)
  fig4   subadditivity arc gap at theta1 = 1/sqrt(2) over omega
  fig5   polygamy lhs/rhs surfaces for the W-class example over (alpha, omega)
  fig6   polygamy slack surface for the same example
  fig7   fig5 restricted to omega = 0.9
  fig8   squared-map arc gap at 1/sqrt(2) over omega (root near 0.7962)
  fig9   the same gap on omega in [0.7962, 1] (nonnegative branch)
  fig10  monogamy lhs/rhs surfaces for the Schmidt example over (beta, omega)
  fig11  monogamy slack surface for the same example
  fig12  fig10 restricted to omega = 0.9
  fig13  indicator of the N-qubit W state, N in {3, 5, 10}, over omega
  fig14  indicator of the GHZ/W superposition over d at three omegas
  fig15  4x2x2 residuals over (gamma, omega)

All grids are seed-independent; rerunning a sweep writes byte-identical
CSV (12 significant digits per value).
"""
from __future__ import annotations

import numpy as np

from .analysis import (
    second_derivative,
    second_derivative_limit_at_one,
    gradient_factor_pair,
    subadditivity_boundary,
    superadditivity_sq_boundary,
)
from .multiqubit import monogamy_residual, polygamy_residual, residual_422_grid
from .states import StateFormatError, preset
from .util import write_csv

__all__ = ["FIGURE_IDS", "sweep_rows", "write_sweep", "canonical_name"]

_INV_SQRT2 = 1.0 / np.sqrt(2.0)


def _fig1():
    thetas = np.arange(0.02, 0.981, 0.02)
    omegas = np.arange(0.02, 1.001, 0.02)
    rows = []
    for w in omegas:
        vals = second_derivative(thetas, w)
        rows.extend((t, w, v) for t, v in zip(thetas, vals))
    return ["theta1", "omega", "value"], rows


def _fig2():
    omegas = np.arange(0.85798, 1.0 + 1e-12, 1e-3)
    vals = second_derivative_limit_at_one(omegas)
    return ["omega", "value"], list(zip(omegas, vals))


def _fig3():
    ns = np.arange(0.02, 0.981, 0.02)
    omegas = np.arange(0.02, 1.001, 0.02)
    rows = []
    for w in omegas:
        _, g = gradient_factor_pair(ns, w)
        rows.extend((n, w, v) for n, v in zip(ns, g))
    return ["n", "omega", "value"], rows


def _arc_gap_rows(fn, omegas):
    return [(w, fn(_INV_SQRT2, w)) for w in omegas]


def _fig4():
    omegas = np.arange(0.005, 1.0 + 1e-12, 0.005)
    return ["omega", "value"], _arc_gap_rows(subadditivity_boundary, omegas)


def _residual_rows(state, focus, kind, powers, omegas, power_name):
    rows = []
    for p in powers:
        for w in omegas:
            if kind == "polygamy":
                rep = polygamy_residual(state, focus, w, alpha=p)
            else:
                rep = monogamy_residual(state, focus, w, beta=p)
            rows.append((p, w, rep.lhs, sum(rep.rhs_terms), rep.slack))
    return [power_name, "omega", "lhs", "rhs_sum", "slack"], rows


_EX2_PARAMS = dict(
    l0=1.0 / np.sqrt(5.0),
    l2=np.sqrt(2.0 / 5.0),
    l3=1.0 / np.sqrt(5.0),
    l4=1.0 / np.sqrt(5.0),
)


def _fig5(omegas=None):
    state = preset("wclass3")
    alphas = np.arange(0.02, 1.0 + 1e-12, 0.02)
    if omegas is None:
        omegas = np.linspace(0.85798, 1.0, 50)
    return _residual_rows(state, 0, "polygamy", alphas, omegas, "alpha")


def _fig6():
    header, rows = _fig5()
    return ["alpha", "omega", "value"], [(a, w, s) for a, w, _, _, s in rows]


def _fig7():
    return _fig5(omegas=[0.9])


def _fig8():
    omegas = np.arange(0.005, 1.0 + 1e-12, 0.005)
    return ["omega", "value"], _arc_gap_rows(superadditivity_sq_boundary, omegas)


def _fig9():
    omegas = np.arange(0.7962, 1.0 + 1e-12, 1e-3)
    return ["omega", "value"], _arc_gap_rows(superadditivity_sq_boundary, omegas)


def _fig10(omegas=None):
    state = preset("gschmidt", **_EX2_PARAMS)
    betas = np.arange(2.0, 5.0 + 1e-12, 0.06)
    if omegas is None:
        omegas = np.linspace(0.85798, 1.0, 50)
    return _residual_rows(state, 0, "monogamy", betas, omegas, "beta")


def _fig11():
    header, rows = _fig10()
    return ["beta", "omega", "value"], [(b, w, s) for b, w, _, _, s in rows]


def _fig12():
    return _fig10(omegas=[0.9])


def _fig13():
    omegas = np.arange(0.85798, 1.0 + 1e-12, 1e-3)
    rows = []
    for n in (3, 5, 10):
        state = preset("wN", N=n)
        for w in omegas:
            rep = monogamy_residual(state, 0, w, beta=2.0)
            rows.append((n, w, rep.lhs, sum(rep.rhs_terms), rep.slack))
    return ["n_qubits", "omega", "lhs", "rhs_sum", "slack"], rows


def _fig14():
    ds = np.arange(0.0, 1.0 + 1e-12, 0.005)
    rows = []
    for w in (0.90, 0.93, 0.96):
        for d in ds:
            rep = monogamy_residual(preset("ghzw", d=d), 0, w, beta=2.0)
            rows.append((d, w, rep.lhs, sum(rep.rhs_terms), rep.slack))
    return ["d", "omega", "lhs", "rhs_sum", "slack"], rows


def _fig15(exponent="omega"):
    gammas = np.arange(0.0, np.pi / 2.0 + 1e-12, np.pi / 200.0)
    omegas = np.arange(0.85798, 1.0 + 1e-12, 1e-3)
    r_c, r_w, lhs_sq, rhs_sum = residual_422_grid(gammas, omegas, exponent)
    rows = [
        (g, w, lhs_sq[i, j], rhs_sum[i, j], r_w[i, j], r_c[i, j])
        for i, g in enumerate(gammas)
        for j, w in enumerate(omegas)
    ]
    return ["gamma", "omega", "lhs", "rhs_sum", "slack", "r_c"], rows


_FIGURES = {
    "fig1": _fig1,
    "fig2": _fig2,
    "fig3": _fig3,
    "fig4": _fig4,
    "fig5": _fig5,
    "fig6": _fig6,
    "fig7": _fig7,
    "fig8": _fig8,
    "fig9": _fig9,
    "fig10": _fig10,
    "fig11": _fig11,
    "fig12": _fig12,
    "fig13": _fig13,
    "fig14": _fig14,
    "fig15": _fig15,
}

FIGURE_IDS = tuple(_FIGURES)


def _normalize_id(fig_id: str) -> str:
    key = str(fig_id).strip().lower()
    if key.startswith("fig"):
        suffix = key[3:].lstrip("0") or "0"
        key = "fig" + suffix
    if key not in _FIGURES:
        raise StateFormatError(
            f"unknown figure id {fig_id!r}; expected fig1 .. fig15"
        )
    return key


def canonical_name(fig_id: str) -> str:
    """CSV file name for a figure id: fig1 -> fig01.csv."""
    key = _normalize_id(fig_id)
    return f"fig{int(key[3:]):02d}.csv"


def sweep_rows(fig_id: str, exponent="omega"):
    """Grid data for one figure: (header, list of numeric rows)."""
    key = _normalize_id(fig_id)
    if key == "fig15":
        return _fig15(exponent=exponent)
    return _FIGURES[key]()


def write_sweep(fig_id: str, out_path, exponent="omega") -> str:
    """Evaluate one figure grid and write it as CSV; returns the path."""
    header, rows = sweep_rows(fig_id, exponent=exponent)
    write_csv(out_path, header, rows)
    return str(out_path)
