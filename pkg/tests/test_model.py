import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pu_oscillator.model import (
    DecoupledState,
    DegenerateFrequencies,
    DisorderedFrequencies,
    KinematicState,
    NonFiniteParameter,
    NonPositiveFrequency,
    NonPositiveGamma,
    PUParams,
    r_from_w,
    transform_matrices,
    validate_params,
    w_from_r,
)

component = st.floats(-10, 10, allow_nan=False)
states4 = st.tuples(component, component, component, component)


def test_valid_params():
    p = validate_params(1, 2, 1)
    assert (p.gamma, p.omega1, p.omega2) == (1.0, 2.0, 1.0)
    assert p.ground_energy == 1.5


@pytest.mark.parametrize(
    "args, exc, fragment",
    [
        ((1, 1, 1), DegenerateFrequencies, "degenerate frequencies"),
        ((1, 1, 2), DisorderedFrequencies, "disordered frequencies"),
        ((1, 2, 0), NonPositiveFrequency, "omega2"),
        ((1, 2, -1), NonPositiveFrequency, "omega2"),
        ((0, 2, 1), NonPositiveGamma, "gamma"),
        ((-1, 2, 1), NonPositiveGamma, "gamma"),
        ((1, float("nan"), 1), NonFiniteParameter, "omega1"),
        ((1, 2, float("inf")), NonFiniteParameter, "omega2"),
        ((float("inf"), 2, 1), NonFiniteParameter, "gamma"),
    ],
)
def test_invalid_params(args, exc, fragment):
    with pytest.raises(exc, match=fragment):
        validate_params(*args)


def test_direct_construction_validates():
    with pytest.raises(DisorderedFrequencies):
        PUParams(1.0, 1.0, 2.0)


def test_w_from_r_examples(p):
    assert w_from_r(DecoupledState(1, 0, 0, 0), p) == KinematicState(1, 0, -4, 0)
    # w4 = -Omega1**2 * 1 + Omega2**2 * (-1) = -5 by direct substitution
    assert w_from_r(DecoupledState(0, 1, 0, -1), p) == KinematicState(0, 2, 0, -5)
    assert w_from_r(DecoupledState(0, 0, 0, 0), p) == KinematicState(0, 0, 0, 0)


def test_r_from_w_examples(p):
    assert r_from_w(KinematicState(1, 0, -4, 0), p) == DecoupledState(1, 0, 0, 0)
    assert r_from_w(KinematicState(0, 0, 0, 0), p).as_array().tolist() == [0, 0, 0, 0]


def test_round_trip_random(p, rng):
    for row in rng.uniform(-10, 10, size=(100, 4)):
        s = DecoupledState(*row)
        back = r_from_w(w_from_r(s, p), p).as_array()
        assert np.max(np.abs(back - row)) <= 1e-12


@settings(max_examples=200, deadline=None)
@given(states4, st.floats(1.01, 5.0), st.floats(0.1, 0.99))
def test_round_trip_both_directions(s, ratio, omega2):
    p = validate_params(1.0, omega2 * ratio, omega2)
    r = DecoupledState(*s)
    w = KinematicState(*s)
    assert np.allclose(r_from_w(w_from_r(r, p), p).as_array(), s, rtol=0, atol=1e-12 * max(1, 1 / (ratio - 1)))
    assert np.allclose(w_from_r(r_from_w(w, p), p).as_array(), s, rtol=0, atol=1e-12 * max(1, 1 / (ratio - 1)))


@settings(max_examples=100, deadline=None)
@given(states4, states4, st.floats(-3, 3), st.floats(-3, 3))
def test_linearity(s, s2, a, b):
    p = validate_params(1.0, 2.0, 1.0)
    for fwd, cls in ((w_from_r, DecoupledState), (r_from_w, KinematicState)):
        x, y = cls(*s), cls(*s2)
        combo = cls(*(a * np.array(s) + b * np.array(s2)))
        lhs = fwd(combo, p).as_array()
        rhs = a * fwd(x, p).as_array() + b * fwd(y, p).as_array()
        assert np.max(np.abs(lhs - rhs)) <= 1e-12 * max(1.0, np.max(np.abs(rhs)))


def test_transform_matrices_match_functions(p, rng):
    T, T_inv = transform_matrices(p)
    assert np.allclose(T @ T_inv, np.eye(4), atol=1e-15)
    for row in rng.uniform(-1, 1, size=(10, 4)):
        assert np.allclose(T @ row, w_from_r(DecoupledState(*row), p).as_array(), atol=1e-15)
        assert np.allclose(T_inv @ row, r_from_w(KinematicState(*row), p).as_array(), atol=1e-15)
