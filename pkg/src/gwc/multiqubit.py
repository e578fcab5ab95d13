"""Monogamy and polygamy diagnostics for multiqubit pure and mixed states.

The monogamy side compares the squared measure across the focus|rest cut
against the sum of squared pairwise mixed-state values; the polygamy side
bounds the assisted measure of the cut by the summed pairwise assistance
budgets.  Both are exposed as ResidualReport records whose ``slack`` is
nonnegative exactly when the corresponding inequality holds.

Also here: the entanglement indicator (squared-measure residual, roof
minimized for mixed inputs), the three-qubit tangle it is compared
against, and the 4x2x2 case study where the squared concurrence is
polygamous while the squared order-parameterized measure stays monogamous.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .measures import (
    CLOSED_FORM_OMEGA_MIN,
    Omega,
    batch_gwc,
    concurrence_mixed,
    concurrence_pure,
    gwc_from_concurrence,
    gwc_mixed_two_qubit,
    gwc_pure,
    gwcoa_bound,
)
from .roof import OptimizerBudget, roof_extremize
from .states import (
    DensityOperator,
    DimensionError,
    PureState,
    _SY2,
    preset,
    psd_eigh,
    reduced_density,
)

__all__ = [
    "ResidualReport",
    "IndicatorValue",
    "monogamy_residual",
    "polygamy_residual",
    "indicator_tau",
    "indicator_tau_mixed",
    "three_tangle_pure3q",
    "residual_422",
    "residual_422_grid",
]


@dataclass(frozen=True)
class ResidualReport:
    """One monogamy or polygamy inequality instance.

    ``slack`` is lhs - sum(rhs_terms) for monogamy and sum(rhs_terms) - lhs
    for polygamy, so the inequality holds iff slack >= 0.  ``unverified``
    marks orders below the closed-form certification threshold, where the
    pairwise terms are no longer certified roof values.
    """

    lhs: float
    rhs_terms: tuple
    slack: float
    omega: float
    power: float
    kind: str
    unverified: bool = False

    def __post_init__(self):
        if self.kind not in ("monogamy", "polygamy"):
            raise ValueError(f"unknown residual kind {self.kind!r}")
        total = sum(self.rhs_terms)
        want = self.lhs - total if self.kind == "monogamy" else total - self.lhs
        if abs(self.slack - want) > 1e-12:
            raise ValueError("slack is inconsistent with lhs and rhs_terms")

    @property
    def satisfied(self) -> bool:
        return self.slack >= 0.0


@dataclass(frozen=True)
class IndicatorValue:
    """Entanglement-indicator evaluation; exact=True means no optimizer
    was involved (pure input)."""

    value: float
    focus: int
    omega: float
    exact: bool


def _check_qubits(dims, focus):
    if any(d != 2 for d in dims):
        raise DimensionError(
            "pairwise residuals need qubit subsystems; for the 4x2x2 case "
            "study use residual_422"
        )
    n = len(dims)
    focus = int(focus)
    if not 0 <= focus < n:
        raise DimensionError(f"focus must be in 0..{n - 1}, got {focus}")
    return focus


def _pair_reductions(psi, focus):
    others = [j for j in range(len(psi.dims)) if j != focus]
    return [reduced_density(psi, (focus, j)) for j in others]


def monogamy_residual(psi: PureState, focus, omega, beta=2.0) -> ResidualReport:
    """Squared-measure monogamy residual of a pure multiqubit state.

    lhs is the measure across focus|rest to the beta-th power; rhs_terms
    are the pairwise two-qubit mixed values to the same power.  The
    inequality slack >= 0 is certified for beta >= 2 and omega in
    [0.85798, 1]; smaller omega is computed anyway and flagged unverified.
    """
    focus = _check_qubits(psi.dims, focus)
    if len(psi.dims) < 3:
        raise DimensionError("monogamy residuals need at least three qubits")
    beta = float(beta)
    if beta < 2.0:
        raise ValueError(f"power must be >= 2, got {beta}")
    w = Omega(omega)
    lhs = float(gwc_pure(psi, (focus,), w)) ** beta
    rhs = tuple(
        float(gwc_mixed_two_qubit(r, w)) ** beta for r in _pair_reductions(psi, focus)
    )
    return ResidualReport(
        lhs=lhs,
        rhs_terms=rhs,
        slack=lhs - sum(rhs),
        omega=float(w),
        power=beta,
        kind="monogamy",
        unverified=not w.closed_form_certified,
    )


def polygamy_residual(psi: PureState, focus, omega, alpha=1.0) -> ResidualReport:
    """Assisted-measure polygamy residual of a pure multiqubit state.

    For a pure input the assisted measure of the cut equals the plain
    measure, so lhs needs no optimizer.  Each rhs term is the closed-form
    pairwise assistance budget (concurrence of assistance pushed through
    the concurrence-to-measure map), raised to the alpha-th power.  The
    slack is conservative: the budgets lower-bound the true pairwise
    assisted values in the certified window.
    """
    focus = _check_qubits(psi.dims, focus)
    alpha = float(alpha)
    if not 0.0 < alpha <= 1.0:
        raise ValueError(f"power must lie in (0, 1], got {alpha}")
    w = Omega(omega)
    lhs = float(gwc_pure(psi, (focus,), w)) ** alpha
    terms = [gwcoa_bound(r, w) for r in _pair_reductions(psi, focus)]
    rhs = tuple(float(t) ** alpha for t in terms)
    return ResidualReport(
        lhs=lhs,
        rhs_terms=rhs,
        slack=sum(rhs) - lhs,
        omega=float(w),
        power=alpha,
        kind="polygamy",
        unverified=any(t.unverified for t in terms),
    )


def _check_indicator_omega(omega) -> Omega:
    w = Omega(omega)
    if not w.closed_form_certified:
        raise ValueError(
            "the indicator is defined for omega in [0.85798, 1], got "
            f"{float(w)}"
        )
    return w


def indicator_tau(psi: PureState, focus, omega) -> IndicatorValue:
    """Squared-measure monogamy residual used as an entanglement indicator.

    Exact for pure inputs: measure of focus|rest squared, minus the squared
    pairwise two-qubit values.  Positive on every genuinely entangled pure
    state in the certified window, including ones the three-tangle misses.
    """
    focus = _check_qubits(psi.dims, focus)
    w = _check_indicator_omega(omega)
    rep = monogamy_residual(psi, focus, w, beta=2.0)
    return IndicatorValue(value=rep.slack, focus=focus, omega=float(w), exact=True)


def _batch_indicator(dims, focus, omega):
    """Vectorized per-ensemble indicator: rows of ``batch`` are unnormalized
    state vectors; returns their indicator values."""
    n = len(dims)
    others = [j for j in range(n) if j != focus]
    cut_gwc = batch_gwc(dims, (focus,), omega)

    def fn(batch):
        m = batch.shape[0]
        out = cut_gwc(batch) ** 2
        t = batch.reshape((m,) + tuple(dims))
        for j in others:
            sub1 = [0] + [k + 1 for k in range(n)]
            sub2 = [0] + [
                k + 1 + n if k in (focus, j) else k + 1 for k in range(n)
            ]
            sub_out = [0, focus + 1, j + 1, focus + 1 + n, j + 1 + n]
            rhos = np.einsum(t, sub1, t.conj(), sub2, sub_out).reshape(m, 4, 4)
            vals, vecs = np.linalg.eigh(rhos)
            vals = np.clip(vals, 0.0, None)
            wmat = vecs * np.sqrt(vals)[:, None, :]
            taus = np.einsum("mia,ij,mjb->mab", wmat, _SY2, wmat)
            mus = np.linalg.svd(taus, compute_uv=False)
            conc = np.clip(2.0 * mus[:, 0] - mus.sum(axis=1), 0.0, 1.0)
            out = out - gwc_from_concurrence(conc, omega) ** 2
        return out

    return fn


def indicator_tau_mixed(
    rho: DensityOperator, focus, omega, budget: OptimizerBudget | None = None
) -> IndicatorValue:
    """Roof-minimized indicator for mixed multiqubit states (rank <= 4).

    The reported value is the best decomposition average found, hence an
    upper bound on the true infimum; it vanishes (to optimizer tolerance)
    exactly on biseparable three-qubit states in the certified window.
    """
    focus = _check_qubits(rho.dims, focus)
    w = _check_indicator_omega(omega)
    if rho.rank() == 1:
        vals, vecs = np.linalg.eigh(rho.mat)
        psi = PureState(rho.dims, vecs[:, int(np.argmax(vals))])
        return indicator_tau(psi, focus, w)
    if budget is None:
        budget = OptimizerBudget(restarts=3, max_iters=25, m_max=8)
    fn = _batch_indicator(rho.dims, focus, float(w))
    res = roof_extremize(rho, fn, direction="min", budget=budget)
    return IndicatorValue(value=res.value, focus=focus, omega=float(w), exact=False)


def three_tangle_pure3q(psi: PureState) -> float:
    """Signed three-qubit tangle: squared concurrence of the first-qubit
    cut minus both squared pairwise concurrences.

    Zero on product and W-class states; callers wanting the traditional
    nonnegative tangle take the absolute value.
    """
    if tuple(psi.dims) != (2, 2, 2):
        raise DimensionError(f"three qubits required, got dims {psi.dims}")
    c_cut = float(concurrence_pure(psi, (0,)))
    c_ab = float(concurrence_mixed(reduced_density(psi, (0, 1))))
    c_ac = float(concurrence_mixed(reduced_density(psi, (0, 2))))
    return c_cut**2 - c_ab**2 - c_ac**2


def _component_blocks(mat, da, db, tol=1e-10):
    """Connected components of the first subsystem's coupling graph."""
    t = mat.reshape(da, db, da, db)
    linked = np.max(np.abs(t), axis=(1, 3)) > tol
    seen = [False] * da
    blocks = []
    for start in range(da):
        if seen[start]:
            continue
        stack, comp = [start], []
        seen[start] = True
        while stack:
            i = stack.pop()
            comp.append(i)
            for j in range(da):
                if not seen[j] and (linked[i, j] or linked[j, i]):
                    seen[j] = True
                    stack.append(j)
        blocks.append(sorted(comp))
    return blocks


def _blockwise_concurrence(rho: DensityOperator) -> float:
    """Concurrence of a qudit-qubit state that is block diagonal over
    sectors of the first subsystem, each sector at most two-dimensional.

    Within each sector the state is effectively two-qubit and Wootters
    applies; sector weights combine linearly.  Used for the 4x2x2 family,
    whose reductions carry exactly this flagged structure.
    """
    da, db = rho.dims
    if db != 2:
        raise DimensionError("second subsystem must be a qubit")
    total = 0.0
    for comp in _component_blocks(rho.mat, da, db):
        idx = [a * db + b for a in comp for b in range(db)]
        sub = rho.mat[np.ix_(idx, idx)]
        weight = float(np.real(np.trace(sub)))
        if weight <= 1e-14:
            continue
        if len(comp) == 1:
            continue  # single flag level: separable, contributes nothing
        if len(comp) > 2:
            raise DimensionError(
                "coupled sector larger than two levels; blockwise concurrence "
                "does not apply"
            )
        block = DensityOperator((2, 2), sub / weight)
        total += weight * float(concurrence_mixed(block))
    return total


def _r422_closed(gamma, omega, exponent):
    a2 = np.cos(gamma) ** 2
    b2 = np.sin(gamma) ** 2
    w = np.asarray(omega, dtype=float)
    r_c = -2.0 * a2 * b2 * np.ones_like(w)
    s = 2.0 * (a2 / 2.0) ** w + 2.0 * (b2 / 2.0) ** w - 1.0
    lhs_sq = s ** (2.0 * w) if exponent == "omega" else s**2
    pair_ab = (a2**w + b2**w - 1.0) ** w
    pair_ac = (2.0 ** (1.0 - w) - 1.0) ** w
    return r_c, lhs_sq, pair_ab**2 + pair_ac**2


def _r422_crosscheck(gamma, r_c_closed):
    psi = preset("p422", gamma=float(gamma))
    c_cut = float(concurrence_pure(psi, (0,)))
    c_ab = _blockwise_concurrence(reduced_density(psi, (0, 1)))
    c_ac = _blockwise_concurrence(reduced_density(psi, (0, 2)))
    r_c_num = c_cut**2 - c_ab**2 - c_ac**2
    if abs(r_c_num - r_c_closed) > 1e-9:
        raise RuntimeError(
            f"squared-concurrence residual cross-check failed at gamma={gamma}: "
            f"closed form {r_c_closed}, state-based {r_c_num}"
        )


def residual_422(gamma, omega, exponent="omega"):
    """Monogamy residuals of the 4x2x2 family at mixing angle gamma.

    Returns (r_c, r_omega): the squared-concurrence residual (equal to
    -2 cos^2(gamma) sin^2(gamma), always polygamous) and the squared-measure
    residual.  ``exponent`` picks the outer exponent of the cut term:
    "omega" composes the definitional measure (the default), "two" squares
    the order-omega sum once, matching an alternative printed convention.
    The concurrence residual is recomputed from the state itself
    (partial traces plus blockwise Wootters) and must agree with the closed
    form to 1e-9.
    """
    gamma = float(gamma)
    if not 0.0 <= gamma <= np.pi / 2.0 + 1e-12:
        raise ValueError(f"gamma must lie in [0, pi/2], got {gamma}")
    if exponent not in ("omega", "two"):
        raise ValueError(f"exponent must be 'omega' or 'two', got {exponent!r}")
    w = Omega(omega)
    r_c, lhs_sq, pair_sum = _r422_closed(gamma, float(w), exponent)
    r_c, r_w = float(r_c), float(lhs_sq - pair_sum)
    _r422_crosscheck(gamma, r_c)
    return r_c, r_w


def residual_422_grid(gammas, omegas, exponent="omega"):
    """Vectorized residual_422 over a (gamma, omega) grid.

    Returns (r_c, r_omega, lhs_sq, rhs_sum) arrays of shape
    (len(gammas), len(omegas)); r_c is constant across omega.  The
    state-based concurrence cross-check runs once per gamma.
    """
    if exponent not in ("omega", "two"):
        raise ValueError(f"exponent must be 'omega' or 'two', got {exponent!r}")
    gammas = np.asarray(gammas, dtype=float)
    omegas = np.asarray(omegas, dtype=float)
    for w in omegas:
        Omega(w)
    g = gammas[:, None]
    r_c, lhs_sq, rhs_sum = _r422_closed(g, omegas[None, :], exponent)
    shape = (gammas.size, omegas.size)
    r_c = np.broadcast_to(r_c, shape).copy()
    lhs_sq = np.broadcast_to(lhs_sq, shape).copy()
    rhs_sum = np.broadcast_to(rhs_sum, shape).copy()
    for i, gamma in enumerate(gammas):
        _r422_crosscheck(float(gamma), float(r_c[i, 0]))
    return r_c, lhs_sq - rhs_sum, lhs_sq, rhs_sum
