import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quadshift import (Diverged, Overflow, Params, Point3, apply_T, apply_T_n,
                       as_point, h1d, h1d_n, jacobian_T, orbit)


def test_single_step_shifts_and_kicks():
    p = apply_T(Point3(1.0, 2.0, 3.0), Params(-1.0))
    assert (p.x, p.y, p.z) == (2.0, 3.0, 0.0)


def test_point_protocol():
    p = Point3(1.0, -2.0, 0.5)
    assert tuple(p) == (1.0, -2.0, 0.5)
    assert p.max_abs() == 2.0
    assert as_point([1, 2, 3]) == Point3(1.0, 2.0, 3.0)


def test_params_must_be_finite():
    with pytest.raises(ValueError):
        Params(float("nan"))


def test_scalar_kick_agrees_with_full_map():
    params = Params(-0.9)
    assert h1d(0.25, params) == 0.25 * 0.25 - 0.9
    assert h1d_n(0.25, params, 3) == h1d(h1d(h1d(0.25, params), params), params)


def test_three_steps_act_coordinatewise_exactly():
    # the cube of the map is H applied to each coordinate separately, and the
    # float operations are literally identical, so equality is exact
    rng = np.random.default_rng(7)
    params = Params(-1.7)
    for _ in range(300):
        p0 = Point3(*rng.uniform(-1.5, 1.5, size=3))
        k = int(rng.integers(1, 11))
        p = p0
        for _ in range(3 * k):
            p = apply_T(p, params)
        assert p.x == h1d_n(p0.x, params, k)
        assert p.y == h1d_n(p0.y, params, k)
        assert p.z == h1d_n(p0.z, params, k)


def test_fast_iteration_path_matches_stepping():
    rng = np.random.default_rng(11)
    params = Params(-1.3)
    for _ in range(100):
        p0 = Point3(*rng.uniform(-1.2, 1.2, size=3))
        n = int(rng.integers(1, 20))
        assert apply_T_n(p0, params, n, fast=True) == \
            apply_T_n(p0, params, n, fast=False)


@settings(max_examples=200, deadline=None)
@given(st.floats(-50, 50), st.floats(-50, 50), st.floats(-50, 50))
def test_jacobian_structure_and_determinant(x, y, z):
    J = jacobian_T(Point3(x, y, z))
    expect = np.array([[0.0, 1.0, 0.0], [0.0, 0.0, 1.0], [2.0 * x, 0.0, 0.0]])
    assert np.array_equal(J, expect)
    with np.errstate(divide="ignore"):    # x = 0 makes J exactly singular
        det = np.linalg.det(J)
    assert det == pytest.approx(2.0 * x, rel=1e-12, abs=1e-12)


def test_chain_rule_over_three_steps_is_exactly_diagonal():
    rng = np.random.default_rng(3)
    params = Params(-1.6)
    for _ in range(50):
        p0 = Point3(*rng.uniform(-1.4, 1.4, size=3))
        p1 = apply_T(p0, params)
        p2 = apply_T(p1, params)
        M = jacobian_T(p2) @ jacobian_T(p1) @ jacobian_T(p0)
        assert np.array_equal(M, np.diag([2 * p0.x, 2 * p0.y, 2 * p0.z]))


def test_orbit_transient_is_a_pure_offset():
    params = Params(-1.1)
    p0 = Point3(0.2, -0.3, 0.4)
    full = orbit(p0, params, 10)
    assert orbit(p0, params, 6, transient=4) == full[4:10]
    assert len(full) == 10
    assert full[0] == p0


def test_orbit_reports_absolute_divergence_step():
    with pytest.raises(Diverged) as exc:
        orbit(Point3(3.0, 3.0, 3.0), Params(-1.0), 50)
    assert exc.value.step == 1          # (3,3,3) -> (3,3,8) leaves the ball
    with pytest.raises(Diverged) as exc:
        orbit(Point3(9.0, 0.0, 0.0), Params(-1.0), 5)
    assert exc.value.step == 0          # the start itself is already out


def test_overflow_on_nonfinite_image():
    with pytest.raises(Overflow):
        apply_T(Point3(1e200, 0.0, 0.0), Params(0.0))
