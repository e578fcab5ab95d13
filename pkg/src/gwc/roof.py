"""Convex-roof extremization over finite pure-state decompositions.

Every decomposition of a rank-r mixed state into m >= r pure states is
generated by an m x r matrix with orthonormal columns applied to the
subnormalized eigenvectors of the state.  The extremizer random-restarts a
derivative-free pattern descent over that matrix: repeated sweeps over all
row pairs, each solving a two-parameter planar-rotation subproblem on a
progressively zoomed candidate grid (all candidates evaluated in one
vectorized functional call).

Results are deterministic for a fixed budget: starts are drawn from a
seeded generator in a fixed order and reduced sequentially.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .states import DensityOperator, DimensionError, PureState, psd_eigh

__all__ = [
    "MAX_ROOF_DIM",
    "MAX_ROOF_RANK",
    "OptimizerBudget",
    "Decomposition",
    "RoofResult",
    "enumerate_decomposition",
    "roof_extremize",
    "coa_oracle",
    "per_state",
]

MAX_ROOF_DIM = 16
MAX_ROOF_RANK = 4

# Eigenvalues above this count toward the rank of the optimized state.
RANK_TOL = 1e-10

# An ensemble member below this weight is dropped from the reported
# decomposition (it contributes nothing to the average).
WEIGHT_FLOOR = 1e-14

# Incumbent improvements larger than this reset the convergence window.
IMPROVEMENT_TOL = 1e-6


@dataclass(frozen=True)
class OptimizerBudget:
    """Search effort knobs; identical budgets reproduce identical results.

    restarts counts local searches per ensemble size (the first uses the
    eigenbasis start, the rest are random); max_iters caps pair sweeps per
    local search; m_max caps the ensemble-size span r..r^2.
    """

    restarts: int = 64
    max_iters: int = 40
    seed: int = 0
    m_max: int = 16

    def __post_init__(self):
        if self.restarts < 1:
            raise ValueError("budget needs at least one restart")
        if self.max_iters < 1:
            raise ValueError("budget needs at least one pair sweep")


@dataclass(frozen=True)
class Decomposition:
    """A finite pure-state ensemble averaging to ``source``."""

    probs: np.ndarray
    states: tuple[PureState, ...]
    source: DensityOperator

    def __post_init__(self):
        probs = np.asarray(self.probs, dtype=float).reshape(-1)
        if probs.size != len(self.states) or probs.size == 0:
            raise ValueError("need one positive weight per ensemble state")
        if np.any(probs <= 0.0):
            raise ValueError("ensemble weights must be positive")
        if abs(probs.sum() - 1.0) > 1e-10:
            raise ValueError("ensemble weights must sum to 1 within 1e-10")
        if any(s.dims != self.source.dims for s in self.states):
            raise ValueError("ensemble states must share the source dims")
        probs.flags.writeable = False
        object.__setattr__(self, "probs", probs)
        object.__setattr__(self, "states", tuple(self.states))

    def reconstruction_error(self) -> float:
        acc = np.zeros_like(self.source.mat)
        for p, s in zip(self.probs, self.states):
            acc = acc + p * np.outer(s.amps, s.amps.conj())
        return float(np.linalg.norm(acc - self.source.mat))

    def average(self, functional) -> float:
        rows = np.array([s.amps for s in self.states])
        return float(self.probs @ np.asarray(functional(rows), dtype=float))


@dataclass(frozen=True)
class RoofResult:
    value: float
    decomposition: Decomposition
    direction: str
    restarts_used: int
    converged: bool


def _support(rho: DensityOperator):
    vals, vecs = psd_eigh(rho.mat)
    keep = vals > RANK_TOL
    return vals[keep], vecs[:, keep]


def enumerate_decomposition(rho: DensityOperator, isometry) -> Decomposition:
    """Decomposition induced by an (m x r) matrix with orthonormal columns.

    r is the rank of ``rho``; member j is the normalization of
    sum_i isometry[j, i] * sqrt(lambda_i) |u_i>.
    """
    lam, u = _support(rho)
    r = lam.size
    v = np.asarray(isometry, dtype=complex)
    if v.ndim != 2 or v.shape[1] != r:
        raise ValueError(
            f"isometry must have shape (m, rank={r}), got {getattr(v, 'shape', None)}"
        )
    m = v.shape[0]
    if m < r or m > MAX_ROOF_DIM:
        raise ValueError(f"ensemble size must satisfy {r} <= m <= {MAX_ROOF_DIM}, got {m}")
    if np.max(np.abs(v.conj().T @ v - np.eye(r))) > 1e-10:
        raise ValueError("isometry columns must be orthonormal within 1e-10")
    ens = v @ (u * np.sqrt(lam)).T
    probs = np.einsum("ij,ij->i", ens, ens.conj()).real
    live = probs > WEIGHT_FLOOR
    states = tuple(
        PureState(rho.dims, row / math.sqrt(p))
        for row, p in zip(ens[live], probs[live])
    )
    dec = Decomposition(probs[live] / probs[live].sum(), states, rho)
    err = dec.reconstruction_error()
    if err > 1e-8:
        raise ValueError(f"decomposition reconstructs source to {err:.3e} > 1e-8")
    return dec


def per_state(fn, dims):
    """Adapt a single-PureState measure callback to the batch interface."""
    dims = tuple(dims)

    def batch(rows: np.ndarray) -> np.ndarray:
        return np.array([float(fn(PureState(dims, row))) for row in rows], dtype=float)

    return batch


# ---------------------------------------------------------------------------
# pairwise-rotation local search
# ---------------------------------------------------------------------------

# Zoom schedule for the (theta, phi) pair subproblem: (half-range scale,
# points per axis).  Level 0 spans the whole fundamental domain.
_ZOOM_LEVELS = ((1.0, 9, 12), (0.14, 7, 7), (0.025, 7, 7), (0.0045, 7, 7))


def _pair_grid(level: int, center):
    scale, n_t, n_p = _ZOOM_LEVELS[level]
    if level == 0:
        thetas = np.linspace(0.0, np.pi / 2.0, n_t)
        phis = np.linspace(0.0, 2.0 * np.pi, n_p, endpoint=False)
    else:
        thetas = center[0] + np.linspace(-scale, scale, n_t) * (np.pi / 2.0)
        phis = center[1] + np.linspace(-scale, scale, n_p) * (2.0 * np.pi)
    tt, pp = np.meshgrid(thetas, phis, indexing="ij")
    return tt.ravel(), pp.ravel()


class _EnsembleSearch:
    """Tracks an isometry plus its ensemble and per-row functional values."""

    def __init__(self, v, wm, functional, sign):
        self.v = np.array(v, dtype=complex)
        self.wm = wm
        self.functional = functional
        self.sign = sign
        self.ens = self.v @ wm
        self.p = np.einsum("ij,ij->i", self.ens, self.ens.conj()).real
        self.f = self._values(self.ens, self.p)

    def _values(self, rows, p):
        out = np.zeros(rows.shape[0])
        live = p > WEIGHT_FLOOR
        if np.any(live):
            vals = np.asarray(
                self.functional(rows[live] / np.sqrt(p[live])[:, None]), dtype=float
            )
            out[live] = vals
        return out

    def total(self) -> float:
        return self.sign * float(self.p @ self.f)

    def _pair_objective(self, i, j, thetas, phis):
        """Signed objective contribution of rows i, j after rotation."""
        c = np.cos(thetas)[:, None]
        s = np.sin(thetas)[:, None]
        e = np.exp(1j * phis)[:, None]
        a, b = self.ens[i], self.ens[j]
        ra = c * a + s * e * b
        rb = -s * e.conj() * a + c * b
        rows = np.concatenate([ra, rb], axis=0)
        p = np.einsum("ij,ij->i", rows, rows.conj()).real
        f = self._values(rows, p)
        k = thetas.size
        contrib = p[:k] * f[:k] + p[k:] * f[k:]
        return self.sign * contrib, rows, p, f

    def sweep(self) -> float:
        """One pass over all row pairs; returns the total improvement."""
        m = self.v.shape[0]
        gained = 0.0
        for i in range(m - 1):
            for j in range(i + 1, m):
                base = self.sign * (self.p[i] * self.f[i] + self.p[j] * self.f[j])
                best_val, best = base, None
                center = (0.0, 0.0)
                for level in range(len(_ZOOM_LEVELS)):
                    thetas, phis = _pair_grid(level, center)
                    contrib, rows, p, f = self._pair_objective(i, j, thetas, phis)
                    k = int(np.argmin(contrib))
                    if contrib[k] < best_val:
                        n = thetas.size
                        best_val = contrib[k]
                        best = (
                            thetas[k],
                            phis[k],
                            rows[k],
                            rows[n + k],
                            p[k],
                            p[n + k],
                            f[k],
                            f[n + k],
                        )
                        center = (thetas[k], phis[k])
                if best is None or base - best_val <= 1e-13:
                    continue
                th, ph, row_i, row_j, p_i, p_j, f_i, f_j = best
                cth, sth, eph = np.cos(th), np.sin(th), np.exp(1j * ph)
                rot = np.array([[cth, sth * eph], [-sth * np.conj(eph), cth]])
                self.v[[i, j]] = rot @ self.v[[i, j]]
                self.ens[i], self.ens[j] = row_i, row_j
                self.p[i], self.p[j] = p_i, p_j
                self.f[i], self.f[j] = f_i, f_j
                gained += base - best_val
        return gained

    def run(self, max_sweeps: int):
        for _ in range(max_sweeps):
            if self.sweep() < 1e-11:
                break
        return self.total(), self.v


def _random_isometry(m, r, rng):
    g = rng.standard_normal((m, r)) + 1j * rng.standard_normal((m, r))
    q, rr = np.linalg.qr(g)
    d = np.diagonal(rr)
    ph = np.where(np.abs(d) > 0, d, 1.0)
    return q * (ph / np.abs(ph))


def _check_roof_scope(rho: DensityOperator) -> int:
    if rho.dim > MAX_ROOF_DIM:
        raise DimensionError(
            f"roof optimization supports total dimension <= {MAX_ROOF_DIM}, got {rho.dim}"
        )
    r = int(np.sum(psd_eigh(rho.mat)[0] > RANK_TOL))
    if r > MAX_ROOF_RANK:
        raise DimensionError(
            f"roof optimization supports rank <= {MAX_ROOF_RANK}, got rank {r}"
        )
    return r


def roof_extremize(
    rho: DensityOperator,
    functional,
    direction: str = "min",
    budget: OptimizerBudget | None = None,
) -> RoofResult:
    """Extremize the ensemble average of a pure-state functional over all
    decompositions of ``rho``.

    ``functional`` maps an (m, dim) array of normalized amplitude rows to m
    values (see measures.batch_gwc / measures.batch_concurrence, or wrap a
    scalar callback with ``per_state``).  ``direction`` is "min" or "max".
    """
    if direction not in ("min", "max"):
        raise ValueError(f'direction must be "min" or "max", got {direction!r}')
    budget = budget if budget is not None else OptimizerBudget()
    r = _check_roof_scope(rho)
    lam, u = _support(rho)
    wm = (u * np.sqrt(lam)).T  # rows are subnormalized eigenvectors

    if r == 1:
        dec = enumerate_decomposition(rho, np.eye(1))
        return RoofResult(dec.average(functional), dec, direction, 0, True)

    sign = 1.0 if direction == "min" else -1.0
    m_hi = min(r * r, budget.m_max, MAX_ROOF_DIM)
    m_values = list(range(r, m_hi + 1)) if m_hi >= r else [r]

    rng = np.random.default_rng(budget.seed)
    starts = []
    for m in m_values:
        eye = np.zeros((m, r), dtype=complex)
        eye[:r, :r] = np.eye(r)
        starts.append((m, eye))
        for _ in range(budget.restarts - 1):
            starts.append((m, _random_isometry(m, r, rng)))

    best_val = math.inf
    best_v = None
    last_improvement = -1
    for idx, (m, v0) in enumerate(starts):
        search = _EnsembleSearch(v0, wm, functional, sign)
        val, v = search.run(budget.max_iters)
        if val < best_val:
            if best_v is not None and best_val - val > IMPROVEMENT_TOL:
                last_improvement = idx
            best_val, best_v = val, v

    dec = enumerate_decomposition(rho, best_v)
    value = dec.average(functional)
    converged = last_improvement < math.floor(0.75 * len(starts))
    return RoofResult(value, dec, direction, len(starts), converged)


def coa_oracle(rho: DensityOperator, budget: OptimizerBudget | None = None) -> RoofResult:
    """Brute-force roof maximum of the concurrence for a two-qubit state."""
    from .measures import batch_concurrence

    if rho.dims != (2, 2):
        raise DimensionError(f"coa_oracle needs a two-qubit state, got dims {rho.dims}")
    return roof_extremize(rho, batch_concurrence(rho.dims, (0,)), "max", budget)
