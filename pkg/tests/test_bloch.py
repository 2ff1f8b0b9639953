import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

from pulsebloch.bloch import (
    BlochVector,
    CoherentStateAngles,
    Exponential,
    Rectangular,
    SinSquared,
    axis_angle_matrix,
    d_initial_bloch,
    evolution_matrix,
    evolve_resonant,
    initial_bloch,
    rect_rotation_exact,
    rect_rotation_paper,
    resonant_angle_exponential,
    resonant_angle_sin2,
)
from pulsebloch.oracle import OdeSettings, integrate

R2 = math.sqrt(2) / 2

thetas = st.floats(0, math.pi)
phis = st.floats(0, 2 * math.pi)
deltas = st.floats(-3, 3)
taus = st.floats(0, 30)


def unit_vectors():
    return st.tuples(thetas, phis).map(lambda tp: initial_bloch(CoherentStateAngles(*tp)))


# -- domain types ------------------------------------------------------------


@pytest.mark.parametrize("theta, phi", [(-0.1, 0), (math.pi + 1e-9, 0), (0, -1e-9), (0, 2 * math.pi + 1e-6)])
def test_angles_reject_out_of_range(theta, phi):
    with pytest.raises(ValueError):
        CoherentStateAngles(theta, phi)


def test_angles_accept_closed_interval():
    CoherentStateAngles(0.0, 0.0)
    CoherentStateAngles(math.pi, 2 * math.pi)


@pytest.mark.parametrize(
    "factory",
    [
        lambda: Rectangular(float("nan")),
        lambda: Exponential(0.0),
        lambda: Exponential(-1.0),
        lambda: SinSquared(0.0, 1),
        lambda: SinSquared(1.0, 0),
        lambda: SinSquared(1.0, 1.5),
    ],
)
def test_pulse_validation(factory):
    with pytest.raises(ValueError):
        factory()


# -- initial state -----------------------------------------------------------


@pytest.mark.parametrize(
    "theta, phi, expected",
    [
        (0.0, 0.0, (0.0, 0.0, -1.0)),
        (math.pi / 2, 0.0, (1.0, 0.0, 0.0)),
        (math.pi / 4, math.pi, (-R2, 0.0, -R2)),
    ],
)
def test_initial_bloch(theta, phi, expected):
    s = initial_bloch(CoherentStateAngles(theta, phi))
    np.testing.assert_allclose(s.as_array(), expected, atol=1e-15)


@given(thetas, phis)
def test_initial_bloch_unit_norm(theta, phi):
    assert abs(initial_bloch(CoherentStateAngles(theta, phi)).norm - 1) <= 1e-15


@pytest.mark.parametrize(
    "theta, phi, which, expected",
    [
        (0.0, 0.0, "theta", (1.0, 0.0, 0.0)),
        (math.pi / 2, 0.0, "phi", (0.0, 1.0, 0.0)),
        (math.pi / 4, math.pi / 2, "theta", (0.0, R2, R2)),
    ],
)
def test_d_initial_bloch(theta, phi, which, expected):
    d = d_initial_bloch(CoherentStateAngles(theta, phi), which)
    np.testing.assert_allclose(d, expected, atol=1e-15)


def _central(theta, phi, which, h=1e-6):
    def s(t, p):
        return np.array([math.sin(t) * math.cos(p), math.sin(t) * math.sin(p), -math.cos(t)])

    if which == "theta":
        return (s(theta + h, phi) - s(theta - h, phi)) / (2 * h)
    return (s(theta, phi + h) - s(theta, phi - h)) / (2 * h)


@given(st.floats(0.01, math.pi - 0.01), st.floats(0.01, 2 * math.pi - 0.01), st.sampled_from(["theta", "phi"]))
def test_d_initial_bloch_matches_finite_difference(theta, phi, which):
    d = d_initial_bloch(CoherentStateAngles(theta, phi), which)
    np.testing.assert_allclose(d, _central(theta, phi, which), atol=1e-9)


# -- rectangular pulse ---------------------------------------------------------


@given(unit_vectors())
def test_rect_pi_rotation_at_resonance(s0):
    out = rect_rotation_exact(0.0, math.pi) @ s0.as_array()
    np.testing.assert_allclose(out, [s0.sx, -s0.sy, -s0.sz], atol=1e-15)


@given(deltas)
def test_rect_full_period_is_identity(delta):
    m = rect_rotation_exact(delta, 2 * math.pi / math.sqrt(1 + delta**2))
    np.testing.assert_allclose(m, np.eye(3), atol=1e-12)


def test_rect_matches_rk4_oracle():
    s0 = BlochVector(0.0, 0.0, -1.0)
    closed = rect_rotation_exact(1.0, 1.0) @ s0.as_array()
    numeric = integrate(s0, Rectangular(1.0), OdeSettings(t_end=1.0, step=1e-3)).as_array()
    np.testing.assert_allclose(closed, numeric, atol=1e-8)


def test_rect_rejects_negative_tau():
    with pytest.raises(ValueError):
        rect_rotation_exact(0.1, -1.0)
    with pytest.raises(ValueError):
        rect_rotation_paper(0.1, -1.0)


@given(deltas, taus)
def test_rect_exact_is_proper_rotation(delta, tau):
    m = rect_rotation_exact(delta, tau)
    np.testing.assert_allclose(m.T @ m, np.eye(3), atol=1e-12)
    assert abs(np.linalg.det(m) - 1) <= 1e-12


@given(deltas, st.floats(0, 15), st.floats(0, 15))
def test_rect_composition(delta, t1, t2):
    lhs = rect_rotation_exact(delta, t1 + t2)
    rhs = rect_rotation_exact(delta, t2) @ rect_rotation_exact(delta, t1)
    np.testing.assert_allclose(lhs, rhs, atol=1e-12)


@pytest.mark.parametrize("k", range(1, 11))
@pytest.mark.parametrize("delta", [0.0, 0.3, 1.0, 2.5])
def test_rect_periodicity(delta, k):
    m = rect_rotation_exact(delta, 2 * math.pi * k / math.sqrt(1 + delta**2))
    np.testing.assert_allclose(m, np.eye(3), atol=1e-10)


def test_rect_axis_is_fixed():
    delta = 0.7
    axis = np.array([1.0, 0.0, delta]) / math.sqrt(1 + delta**2)
    np.testing.assert_allclose(rect_rotation_exact(delta, 2.3) @ axis, axis, atol=1e-15)


def test_axis_angle_matrix_quarter_turn_about_z():
    np.testing.assert_allclose(axis_angle_matrix((0, 0, 1), math.pi / 2) @ [1, 0, 0], [0, 1, 0], atol=1e-15)


# -- verbatim matrix ------------------------------------------------------------


def test_paper_matrix_sz_row_at_origin():
    m = rect_rotation_paper(0.0, 0.0)
    np.testing.assert_allclose(m[2], [0.0, 0.0, 1.0], atol=0)


def test_paper_matrix_not_orthogonal():
    m = rect_rotation_paper(0.3, 1.0)
    assert np.linalg.norm(m.T @ m - np.eye(3)) > 1e-6


@given(deltas, taus)
def test_paper_matrix_entry_31(delta, tau):
    eta = 1 + delta**2
    expected = delta / eta * (1 - math.cos(tau * math.sqrt(eta)))
    assert rect_rotation_paper(delta, tau)[2, 0] == pytest.approx(expected, abs=1e-15)


@given(deltas, taus)
def test_paper_matrix_sz_row_agrees_with_exact(delta, tau):
    # only the printed s_z row survives as a rotation row
    np.testing.assert_allclose(rect_rotation_paper(delta, tau)[2], rect_rotation_exact(delta, tau)[2], atol=1e-12)


# -- resonant pulses ---------------------------------------------------------


def test_exponential_angle_values():
    assert resonant_angle_exponential(0.0, 2.0) == 0.0
    assert resonant_angle_exponential(50.0, 2.0) == pytest.approx(2.0, rel=1e-15)
    expected, _ = quad(lambda s: 2.0 * math.exp(-s), 0, 1)
    assert resonant_angle_exponential(1.0, 2.0) == pytest.approx(expected, abs=1e-14)
    assert resonant_angle_exponential(1.0, 2.0) == pytest.approx(1.2642411176571153, abs=1e-15)


def test_exponential_angle_with_explicit_rate():
    # Omega0 = 4, gamma_p = 2, t = 0.5
    expected, _ = quad(lambda s: 4.0 * math.exp(-2.0 * s), 0, 0.5)
    assert resonant_angle_exponential(0.5, 2.0, gamma_p=2.0) == pytest.approx(expected, abs=1e-14)


@given(st.floats(0.01, 10), st.floats(0, 40), st.floats(0, 40))
def test_exponential_angle_monotone_and_bounded(ratio, t1, t2):
    a, b = sorted((t1, t2))
    wa, wb = resonant_angle_exponential(a, ratio), resonant_angle_exponential(b, ratio)
    assert wa <= wb <= ratio


def test_sin2_angle_values():
    assert resonant_angle_sin2(0.0, 1.0, 1) == 0.0
    assert resonant_angle_sin2(math.pi, 1.0, 1) == pytest.approx(math.pi / 2, abs=1e-15)
    expected, _ = quad(lambda s: 0.5 * math.sin(2 * s) ** 2, 0, 0.7, epsabs=1e-14)
    assert resonant_angle_sin2(0.7, 0.5, 2) == pytest.approx(expected, abs=1e-10)


@given(st.floats(0.01, 5), st.integers(1, 6), st.floats(0, 30), st.floats(0, 30))
def test_sin2_angle_monotone(omega_prime, n, t1, t2):
    a, b = sorted((t1, t2))
    assert resonant_angle_sin2(a, omega_prime, n) <= resonant_angle_sin2(b, omega_prime, n) + 1e-15


def test_evolve_resonant_examples():
    s0 = BlochVector(0.3, -0.4, 0.5)
    assert evolve_resonant(s0, 0.0) == s0
    out = evolve_resonant(BlochVector(0.0, 1.0, 0.0), math.pi / 2)
    np.testing.assert_allclose(out.as_array(), [0, 0, 1], atol=1e-15)


def test_evolve_resonant_matches_rect_at_resonance():
    s0 = BlochVector(0.6, 0.8, 0.0)
    out = evolve_resonant(s0, 1.0).as_array()
    np.testing.assert_allclose(out, rect_rotation_exact(0.0, 1.0) @ s0.as_array(), atol=1e-12)


@given(unit_vectors(), taus)
def test_resonant_limit(s0, tau):
    np.testing.assert_allclose(
        evolve_resonant(s0, tau).as_array(), rect_rotation_exact(0.0, tau) @ s0.as_array(), atol=1e-12
    )


@given(unit_vectors(), st.floats(-50, 50))
def test_evolve_resonant_preserves_norm(s0, angle):
    out = evolve_resonant(s0, angle)
    assert out.sx == s0.sx
    assert abs(out.norm - s0.norm) <= 1e-15


@settings(max_examples=200)
@given(
    unit_vectors(),
    st.one_of(
        st.builds(Rectangular, deltas),
        st.builds(Exponential, st.floats(0.01, 10)),
        st.builds(SinSquared, st.floats(0.01, 5), st.integers(1, 4)),
    ),
    taus,
)
def test_exact_evolution_preserves_norm(s0, pulse, tau):
    out = evolution_matrix(pulse, tau) @ s0.as_array()
    assert abs(np.linalg.norm(out) - 1) <= 1e-12


def test_evolution_matrix_rejects_bad_mode():
    with pytest.raises(ValueError):
        evolution_matrix(Rectangular(0.1), 1.0, "verbatim")


def test_paper_mode_leaves_resonant_pulses_alone():
    p = SinSquared(0.5, 2)
    np.testing.assert_array_equal(evolution_matrix(p, 1.3, "paper"), evolution_matrix(p, 1.3, "exact"))
