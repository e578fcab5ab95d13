import math

import numpy as np
import pytest

from gwc.analysis import (
    certify_subadditive,
    certify_superadditive_sq,
    find_convexity_threshold,
    find_monogamy_threshold,
    gradient_factor_pair,
    second_derivative,
    second_derivative_limit_at_one,
    squared_superadditivity_gap,
    subadditivity_boundary,
    subadditivity_gap,
    superadditivity_sq_boundary,
)
from gwc.measures import gwc_from_concurrence

INV_SQRT2 = 1.0 / math.sqrt(2.0)


# -- curvature ----------------------------------------------------------------

@pytest.mark.parametrize(
    "theta,omega,expected",
    [
        (0.5, 0.9, 0.042109461512590526),
        (0.9, 0.87, 0.007035567014899084),
    ],
)
def test_second_derivative_frozen(theta, omega, expected):
    assert float(second_derivative(theta, omega)) == pytest.approx(expected, rel=1e-12)


def test_second_derivative_matches_finite_difference():
    # h balances truncation against roundoff in the second difference
    h = 1e-4
    for theta in (0.2, 0.5, 0.8):
        for w in (0.3, 0.6, 0.9):
            fd = (
                gwc_from_concurrence(theta + h, w)
                - 2 * gwc_from_concurrence(theta, w)
                + gwc_from_concurrence(theta - h, w)
            ) / h**2
            assert float(second_derivative(theta, w)) == pytest.approx(fd, rel=1e-5)


def test_second_derivative_degenerate_order_is_zero():
    assert float(second_derivative(0.5, 1.0)) == 0.0
    assert float(second_derivative_limit_at_one(1.0)) == 0.0


@pytest.mark.parametrize("theta", [0.0, 1.0, -0.2, 1.3])
def test_second_derivative_rejects_endpoint_theta(theta):
    with pytest.raises(ValueError):
        second_derivative(theta, 0.9)


@pytest.mark.parametrize(
    "omega,expected",
    [(0.9, 0.010801258109917281), (0.86, 0.0007123950573239137)],
)
def test_limit_at_one_frozen(omega, expected):
    assert float(second_derivative_limit_at_one(omega)) == pytest.approx(
        expected, rel=1e-12
    )


def test_second_derivative_approaches_its_limit():
    for w in (0.87, 0.9, 0.95):
        lim = float(second_derivative_limit_at_one(w))
        near = float(second_derivative(1.0 - 1e-6, w))
        assert near == pytest.approx(lim, rel=1e-4)


def test_limit_vectorized_matches_scalar():
    ws = np.array([0.86, 0.9, 0.95, 1.0])
    vec = second_derivative_limit_at_one(ws)
    assert vec.shape == ws.shape
    for i, w in enumerate(ws):
        assert vec[i] == float(second_derivative_limit_at_one(float(w)))


def test_curvature_sign_splits_at_threshold():
    # convex above the threshold (nonnegative curvature near theta = 1),
    # concave dip below it
    assert float(second_derivative_limit_at_one(0.87)) > 0
    assert float(second_derivative_limit_at_one(0.84)) < 0


# -- roots ---------------------------------------------------------------------

def test_convexity_threshold_frozen():
    res = find_convexity_threshold()
    assert res.root == pytest.approx(0.857978784596432, abs=1e-12)
    assert abs(res.residual) < 1e-12
    assert res.bracket[0] < res.root < res.bracket[1]
    assert res.iterations >= 40


def test_monogamy_threshold_frozen():
    res = find_monogamy_threshold()
    assert res.root == pytest.approx(0.7961489468853957, abs=1e-12)
    assert abs(res.residual) < 1e-12


def test_roots_bracket_published_digits():
    assert abs(find_convexity_threshold().root - 0.85798) <= 5e-5
    assert abs(find_monogamy_threshold().root - 0.7962) <= 5e-4


# -- pair gradient factors ------------------------------------------------------

def test_gradient_factor_pair_frozen():
    f, g = gradient_factor_pair(0.5, 0.9)
    assert float(f) == pytest.approx(0.4686388561875079, rel=1e-12)
    assert float(g) == pytest.approx(-0.7432554069572574, rel=1e-12)


def test_gradient_factor_matches_finite_difference():
    # g is the derivative of f with respect to the argument
    h = 1e-6
    for n in (0.3, 0.5, 0.7):
        for w in (0.4, 0.9):
            f_hi, _ = gradient_factor_pair(n + h, w)
            f_lo, _ = gradient_factor_pair(n - h, w)
            _, g = gradient_factor_pair(n, w)
            assert float(g) == pytest.approx(
                (float(f_hi) - float(f_lo)) / (2 * h), rel=1e-5
            )


def test_gradient_factor_is_positive_decreasing():
    ns = np.linspace(0.05, 0.95, 19)
    f, g = gradient_factor_pair(ns, 0.9)
    assert np.all(f > 0)
    assert np.all(g < 0)


def test_gradient_factor_degenerate_order_is_zero():
    f, g = gradient_factor_pair(0.5, 1.0)
    assert float(f) == 0.0
    assert float(g) == 0.0


# -- additivity gaps ---------------------------------------------------------

def test_subadditivity_gap_frozen():
    assert float(subadditivity_gap(0.6, 0.5, 0.9)) == pytest.approx(
        -0.019606177098602594, rel=1e-12
    )


def test_subadditivity_gap_nonpositive_on_samples():
    rng = np.random.default_rng(17)
    for _ in range(200):
        t1, t2 = rng.uniform(0.0, 1.0, 2)
        if t1**2 + t2**2 > 1.0:
            continue
        for w in (0.2, 0.5, 0.9):
            assert float(subadditivity_gap(t1, t2, w)) <= 1e-12


@pytest.mark.parametrize(
    "omega,expected",
    [(0.9, 0.0013018137719619772), (0.7, -0.019305848096711403)],
)
def test_squared_gap_sign_flip_frozen(omega, expected):
    gap = squared_superadditivity_gap(INV_SQRT2, INV_SQRT2, omega)
    assert float(gap) == pytest.approx(expected, rel=1e-12)


def test_gap_rejects_hypotenuse_overflow():
    with pytest.raises(ValueError):
        subadditivity_gap(0.9, 0.9, 0.9)


def test_boundary_curves_match_gaps_on_the_arc():
    for t1 in (0.3, INV_SQRT2, 0.9):
        t2 = math.sqrt(1.0 - t1 * t1)
        assert float(subadditivity_boundary(t1, 0.9)) == pytest.approx(
            float(subadditivity_gap(t1, t2, 0.9)), abs=1e-14
        )
        assert float(superadditivity_sq_boundary(t1, 0.9)) == pytest.approx(
            float(squared_superadditivity_gap(t1, t2, 0.9)), abs=1e-14
        )


# -- grid certificates ---------------------------------------------------------

@pytest.mark.parametrize("omega", [0.1, 0.5, 0.9])
def test_certify_subadditive_passes(omega):
    cert = certify_subadditive(omega, step=2e-2, tol=1e-9)
    assert cert.passed
    assert cert.worst_violation <= 1e-9


@pytest.mark.parametrize("omega", [0.80, 0.90, 0.99])
def test_certify_superadditive_sq_passes(omega):
    cert = certify_superadditive_sq(omega, step=2e-2, tol=1e-9)
    assert cert.passed


def test_certify_superadditive_sq_fails_below_threshold():
    cert = certify_superadditive_sq(0.70, step=2e-2, tol=1e-9)
    assert not cert.passed
    assert cert.worst_violation < -1e-3


def test_certify_subadditive_rejects_tiny_order():
    with pytest.raises(ValueError):
        certify_subadditive(0.01)
