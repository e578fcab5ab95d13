"""Render sweep grids to PNG files for the report command.

Headless by construction (Agg backend); every renderer takes the
(header, rows) pair produced by sweeps.sweep_rows so the pictures always
show exactly what the CSV contains.
"""
from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

__all__ = ["render_figure"]


def _columns(header, rows):
    arr = np.array([[float(x) for x in row] for row in rows])
    return {name: arr[:, k] for k, name in enumerate(header)}


def _line(ax, x, y, xlabel):
    ax.plot(x, y)
    ax.axhline(0.0, color="gray", lw=0.8, ls=":")
    ax.set_xlabel(xlabel)
    ax.set_ylabel("value")


def _heat(ax, x, y, z, xlabel, ylabel, fig, label="value"):
    xs, ys = np.unique(x), np.unique(y)
    grid = np.full((ys.size, xs.size), np.nan)
    ix = np.searchsorted(xs, x)
    iy = np.searchsorted(ys, y)
    grid[iy, ix] = z
    mesh = ax.pcolormesh(xs, ys, grid, shading="nearest")
    fig.colorbar(mesh, ax=ax, label=label)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)


def _grouped_lines(ax, group, x, y, group_label, xlabel, ylabel):
    for gval in np.unique(group):
        sel = group == gval
        ax.plot(x[sel], y[sel], label=f"{group_label}={gval:g}")
    ax.axhline(0.0, color="gray", lw=0.8, ls=":")
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.legend(fontsize=8)


def render_figure(fig_id, header, rows, out_path) -> str:
    """Draw one sweep grid and save it; returns the written path."""
    cols = _columns(header, rows)
    fig, ax = plt.subplots(figsize=(6.0, 4.2), layout="constrained")
    ax.set_title(fig_id)

    if header == ["omega", "value"]:
        _line(ax, cols["omega"], cols["value"], "omega")
    elif header[-1] == "value" and len(header) == 3:
        _heat(ax, cols[header[0]], cols["omega"], cols["value"],
              header[0], "omega", fig)
    elif header[-1] == "r_c":
        _heat(ax, cols["gamma"], cols["omega"], cols["slack"],
              "gamma", "omega", fig, label="slack")
    else:  # residual tables: (param, omega, lhs, rhs_sum, slack)
        param = header[0]
        n_param = np.unique(cols[param]).size
        n_omega = np.unique(cols["omega"]).size
        if n_omega == 1:
            ax.plot(cols[param], cols["lhs"], label="lhs")
            ax.plot(cols[param], cols["rhs_sum"], label="rhs sum")
            ax.set_xlabel(param)
            ax.set_ylabel("value")
            ax.legend(fontsize=8)
        elif min(n_param, n_omega) <= 6:
            if n_param <= n_omega:
                _grouped_lines(ax, cols[param], cols["omega"], cols["slack"],
                               param, "omega", "slack")
            else:
                _grouped_lines(ax, cols["omega"], cols[param], cols["slack"],
                               "omega", param, "slack")
        else:
            _heat(ax, cols[param], cols["omega"], cols["slack"],
                  param, "omega", fig, label="slack")

    fig.savefig(out_path, dpi=150)
    plt.close(fig)
    return str(out_path)
