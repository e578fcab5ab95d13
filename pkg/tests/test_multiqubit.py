import math

import numpy as np
import pytest

from gwc.multiqubit import (
    IndicatorValue,
    ResidualReport,
    indicator_tau,
    indicator_tau_mixed,
    monogamy_residual,
    polygamy_residual,
    residual_422,
    residual_422_grid,
    three_tangle_pure3q,
)
from gwc.roof import OptimizerBudget
from gwc.states import DensityOperator, DimensionError, PureState, preset, random_pure_state

EX2 = dict(
    l0=1 / math.sqrt(5), l2=math.sqrt(2 / 5), l3=1 / math.sqrt(5), l4=1 / math.sqrt(5)
)


# -- report plumbing ----------------------------------------------------------

def test_residual_report_rejects_inconsistent_slack():
    with pytest.raises(ValueError):
        ResidualReport(
            lhs=1.0, rhs_terms=(0.2, 0.3), slack=0.0, omega=0.9, power=2.0,
            kind="monogamy",
        )
    with pytest.raises(ValueError):
        ResidualReport(
            lhs=1.0, rhs_terms=(0.5,), slack=0.5, omega=0.9, power=2.0,
            kind="sideways",
        )


def test_residual_report_satisfied_property():
    rep = ResidualReport(
        lhs=1.0, rhs_terms=(0.2, 0.3), slack=0.5, omega=0.9, power=2.0,
        kind="monogamy",
    )
    assert rep.satisfied
    rep = ResidualReport(
        lhs=1.0, rhs_terms=(0.2,), slack=-0.8, omega=0.9, power=2.0,
        kind="polygamy",
    )
    assert not rep.satisfied


# -- monogamy -----------------------------------------------------------------

def test_monogamy_frozen_on_schmidt_preset():
    rep = monogamy_residual(preset("gschmidt", **EX2), 0, 0.9, beta=2.0)
    assert rep.lhs == pytest.approx(0.005050583203442916, rel=1e-12)
    assert rep.rhs_terms[0] == pytest.approx(0.0008512458592413255, rel=1e-12)
    assert rep.rhs_terms[1] == pytest.approx(0.0021048342627679015, rel=1e-12)
    assert rep.slack == pytest.approx(0.002094503081433689, rel=1e-12)
    assert rep.kind == "monogamy"
    assert rep.satisfied
    assert not rep.unverified


def test_monogamy_rejects_small_power():
    with pytest.raises(ValueError):
        monogamy_residual(preset("wN", N=3), 0, 0.9, beta=1.5)


def test_monogamy_requires_three_qubits():
    psi = PureState((2, 2), np.array([1, 0, 0, 1], dtype=complex))
    with pytest.raises(DimensionError):
        monogamy_residual(psi, 0, 0.9)


def test_monogamy_rejects_qudit_subsystems():
    with pytest.raises(DimensionError):
        monogamy_residual(preset("p422"), 0, 0.9)


def test_monogamy_flags_uncertified_order():
    rep = monogamy_residual(preset("wN", N=3), 0, 0.5, beta=2.0)
    assert rep.unverified


def test_monogamy_degenerate_order_slack_zero():
    rep = monogamy_residual(preset("wN", N=3), 0, 1.0, beta=2.0)
    assert rep.lhs == 0.0
    assert rep.slack == 0.0


def test_monogamy_focus_out_of_range():
    with pytest.raises(DimensionError):
        monogamy_residual(preset("wN", N=3), 5, 0.9)


def test_monogamy_slack_grows_with_power():
    # raising the power only relaxes the inequality once the base terms
    # are below one
    psi = preset("gschmidt", **EX2)
    s2 = monogamy_residual(psi, 0, 0.9, beta=2.0).slack
    s4 = monogamy_residual(psi, 0, 0.9, beta=4.0).slack
    lhs2 = monogamy_residual(psi, 0, 0.9, beta=2.0).lhs
    lhs4 = monogamy_residual(psi, 0, 0.9, beta=4.0).lhs
    assert s2 >= 0 and s4 >= 0
    assert s4 / max(lhs4, 1e-300) >= s2 / lhs2 - 1e-12


# -- polygamy -----------------------------------------------------------------

def test_polygamy_frozen_on_wclass_preset():
    rep = polygamy_residual(preset("wclass3"), 0, 0.9, alpha=1.0)
    assert rep.lhs == pytest.approx(0.07837746299754748, rel=1e-12)
    assert rep.rhs_terms[0] == pytest.approx(0.039112500147865305, rel=1e-12)
    assert rep.rhs_terms[1] == pytest.approx(0.06092033787396782, rel=1e-12)
    assert rep.slack == pytest.approx(0.021655375024285647, rel=1e-12)
    assert rep.kind == "polygamy"
    assert rep.satisfied


@pytest.mark.parametrize("alpha", [0.0, -0.3, 1.2])
def test_polygamy_rejects_power_outside_unit_interval(alpha):
    with pytest.raises(ValueError):
        polygamy_residual(preset("wclass3"), 0, 0.9, alpha=alpha)


def test_polygamy_slack_nonnegative_on_random_three_qubit():
    rng = np.random.default_rng(33)
    for _ in range(20):
        psi = random_pure_state((2, 2, 2), rng)
        rep = polygamy_residual(psi, 0, 0.9, alpha=1.0)
        assert rep.slack >= -1e-10


# -- indicator ----------------------------------------------------------------

@pytest.mark.parametrize(
    "n,expected",
    [
        (3, 0.0011636392106513021),
        (5, 0.0016455997664776515),
        (10, 0.0012890929135566723),
    ],
)
def test_indicator_w_states_frozen(n, expected):
    val = indicator_tau(preset("wN", N=n), 0, 0.9)
    assert isinstance(val, IndicatorValue)
    assert val.value == pytest.approx(expected, rel=1e-10)
    assert val.exact


@pytest.mark.parametrize(
    "omega,expected",
    [
        (0.90, 0.0010905377459211009),
        (0.93, 0.0005830603021206131),
        (0.96, 0.0001924752147422639),
    ],
)
def test_indicator_ghzw_frozen(omega, expected):
    val = indicator_tau(preset("ghzw", d=0.627), 0, omega)
    assert val.value == pytest.approx(expected, rel=1e-10)


def test_indicator_rejects_uncertified_order():
    with pytest.raises(ValueError):
        indicator_tau(preset("wN", N=3), 0, 0.7)


def test_indicator_equals_monogamy_slack_at_square():
    psi = preset("wN", N=4)
    val = indicator_tau(psi, 1, 0.9).value
    rep = monogamy_residual(psi, 1, 0.9, beta=2.0)
    assert val == pytest.approx(rep.slack, abs=1e-15)


def test_indicator_mixed_pure_shortcut_is_exact():
    psi = preset("wclass3")
    mixed = indicator_tau_mixed(psi.density(), 0, 0.9)
    assert mixed.exact
    assert mixed.value == pytest.approx(indicator_tau(psi, 0, 0.9).value, abs=1e-14)


def test_indicator_mixed_biseparable_is_zero():
    bell = np.array([1, 0, 0, 1], dtype=complex) / math.sqrt(2)
    flip = np.array([0, 1, -1, 0], dtype=complex) / math.sqrt(2)
    v0 = np.kron(np.array([1, 0], dtype=complex), bell)
    v1 = np.kron(np.array([0, 1], dtype=complex), flip)
    rho = DensityOperator(
        (2, 2, 2), 0.5 * np.outer(v0, v0.conj()) + 0.5 * np.outer(v1, v1.conj())
    )
    budget = OptimizerBudget(restarts=2, max_iters=20, m_max=4)
    val = indicator_tau_mixed(rho, 0, 0.9, budget=budget)
    assert not val.exact
    assert abs(val.value) <= 1e-9


def test_indicator_mixed_is_deterministic():
    bell = np.array([1, 0, 0, 1], dtype=complex) / math.sqrt(2)
    v0 = np.kron(np.array([1, 0], dtype=complex), bell)
    psi = preset("ghzw", d=0.4)
    rho = DensityOperator(
        (2, 2, 2),
        0.7 * psi.density().mat + 0.3 * np.outer(v0, v0.conj()),
    )
    budget = OptimizerBudget(restarts=2, max_iters=15, m_max=4)
    a = indicator_tau_mixed(rho, 0, 0.9, budget=budget).value
    b = indicator_tau_mixed(rho, 0, 0.9, budget=budget).value
    assert a == b


# -- three-tangle ----------------------------------------------------------------

def test_three_tangle_landmarks():
    assert three_tangle_pure3q(preset("ghzw", d=1.0)) == pytest.approx(1.0, abs=1e-12)
    assert three_tangle_pure3q(preset("wN", N=3)) == pytest.approx(0.0, abs=1e-10)
    assert three_tangle_pure3q(preset("ghzw", d=0.627)) == pytest.approx(
        0.00037544849416693005, abs=1e-12
    )


def test_three_tangle_requires_three_qubits():
    with pytest.raises(DimensionError):
        three_tangle_pure3q(preset("wN", N=4))
    with pytest.raises(DimensionError):
        three_tangle_pure3q(preset("p422"))


def test_three_tangle_invariant_under_focus_relabeling():
    # the residual is permutation invariant for these symmetric states
    psi = preset("ghzw", d=0.3)
    base = three_tangle_pure3q(psi)
    perm = np.transpose(psi.amps.reshape(2, 2, 2), (1, 2, 0)).reshape(-1)
    assert three_tangle_pure3q(PureState((2, 2, 2), perm)) == pytest.approx(
        base, abs=1e-12
    )


# -- qudit-qubit-qubit residual -----------------------------------------------

def test_residual_422_frozen_at_balanced_angle():
    r_c, r_w = residual_422(math.pi / 4, 0.9)
    assert r_c == pytest.approx(-0.5, abs=1e-12)
    assert r_w == pytest.approx(0.014921847984987243, rel=1e-10)


def test_residual_422_frozen_off_angle():
    r_c, r_w = residual_422(0.3, 0.93)
    assert r_c == pytest.approx(-0.15941056138083157, rel=1e-12)
    assert r_w == pytest.approx(0.0030765141321831106, rel=1e-10)


def test_residual_422_exponent_variants_differ():
    _, r_def = residual_422(math.pi / 4, 0.9, exponent="omega")
    _, r_two = residual_422(math.pi / 4, 0.9, exponent="two")
    assert r_def == pytest.approx(0.014921847984987243, rel=1e-10)
    assert r_two == pytest.approx(0.004662422968186662, rel=1e-10)


def test_residual_422_rejects_bad_inputs():
    with pytest.raises(ValueError):
        residual_422(-0.1, 0.9)
    with pytest.raises(ValueError):
        residual_422(2.0, 0.9)
    with pytest.raises(ValueError):
        residual_422(0.5, 0.9, exponent="cubed")


def test_residual_422_grid_shapes_and_scalar_agreement():
    gammas = np.array([0.2, 0.7, 1.1])
    omegas = np.array([0.88, 0.95])
    r_c, r_w, lhs, rhs = residual_422_grid(gammas, omegas)
    assert r_c.shape == r_w.shape == lhs.shape == rhs.shape == (3, 2)
    for i, g in enumerate(gammas):
        for j, w in enumerate(omegas):
            sc, sw = residual_422(float(g), float(w))
            assert r_c[i, j] == pytest.approx(sc, rel=1e-12)
            assert r_w[i, j] == pytest.approx(sw, rel=1e-12)


def test_residual_422_concurrence_term_is_closed_form():
    gammas = np.linspace(0.0, math.pi / 2, 13)
    r_c, _, _, _ = residual_422_grid(gammas, np.array([0.9]))
    want = -2 * (np.cos(gammas) * np.sin(gammas)) ** 2
    assert np.allclose(r_c[:, 0], want, atol=1e-12)
