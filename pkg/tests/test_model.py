import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from apfripple.model import (
    BeamParameters,
    FilmParameters,
    apf_tensor,
    infer_eta_fA_from_stress,
    rotation_y,
    steady_state,
    stress_magnitude_at_normal,
    surface_tension_number,
)

angles = st.floats(0.0, math.pi / 2)


def test_rotation_identity_and_quarter_turn():
    assert np.array_equal(rotation_y(0.0), np.eye(3))
    np.testing.assert_allclose(
        rotation_y(math.pi / 2), [[0, 0, -1], [0, 1, 0], [1, 0, 0]], atol=1e-16
    )


def test_rotation_orthogonal():
    np.testing.assert_allclose(rotation_y(-0.3) @ rotation_y(0.3), np.eye(3), atol=1e-14)


def test_apf_tensor_normal_incidence():
    np.testing.assert_array_equal(apf_tensor(0.0), np.diag([1.0, 1.0, -2.0]))


def test_apf_tensor_grazing():
    np.testing.assert_allclose(apf_tensor(math.pi / 2), np.diag([-2.0, 1.0, 1.0]), atol=1e-15)


def test_apf_tensor_45_degrees():
    # closed form at 2θ = π/2: xx = -1/2, xz = 3/2, zz = -1/2
    expected = [[-0.5, 0, 1.5], [0, 1, 0], [1.5, 0, -0.5]]
    np.testing.assert_allclose(apf_tensor(math.pi / 4), expected, atol=1e-15)


@given(angles)
def test_apf_tensor_matches_closed_form(theta):
    c2, s2 = math.cos(2 * theta), math.sin(2 * theta)
    expected = [[1.5 * c2 - 0.5, 0, 1.5 * s2], [0, 1, 0], [1.5 * s2, 0, -1.5 * c2 - 0.5]]
    np.testing.assert_allclose(apf_tensor(theta), expected, atol=1e-14)


@given(angles)
def test_apf_tensor_trace_free_and_symmetric(theta):
    D = apf_tensor(theta)
    assert abs(np.trace(D)) < 1e-14
    np.testing.assert_allclose(D, D.T, atol=1e-14)


@pytest.fixture
def unit_film():
    return FilmParameters(viscosity=2.0, surface_energy=1.0, thickness=1.0)


def test_steady_normal_incidence(unit_film):
    b = BeamParameters(0.5, 3.0, 0.0)  # fA = 1.5
    st_ = steady_state(b, unit_film)
    etafA = 2.0 * 1.5
    assert st_.p0 == 4 * etafA
    assert st_.shear_coefficient == 0
    np.testing.assert_array_equal(st_.T0, -6 * etafA * np.diag([1.0, 1.0, 0.0]))


def test_steady_45_and_90(unit_film):
    b = BeamParameters(1.0, 1.0, math.pi / 4)
    assert steady_state(b, unit_film).shear_coefficient == 3.0
    st90 = steady_state(b.with_theta(math.pi / 2), unit_film)
    assert st90.p0 == -2 * 2.0
    assert st90.shear_coefficient == pytest.approx(0.0, abs=1e-15)
    np.testing.assert_allclose(st90.T0, np.diag([6 * 2.0, 0.0, 0.0]), atol=1e-14)


@given(angles)
def test_steady_stress_has_no_vertical_part(theta):
    T0 = steady_state(BeamParameters(1.0, 2.0, theta), FilmParameters(3.0, 1.0, 1.0)).T0
    assert np.all(T0[2, :] == 0) and np.all(T0[:, 2] == 0)
    np.testing.assert_array_equal(T0, T0.T)
    assert T0[0, 1] == 0


def test_steady_state_from_stress_balance(unit_film):
    # T0 rebuilt from the constitutive law must leave the free surface traction-free
    for theta in np.linspace(0, math.pi / 2, 7):
        b = BeamParameters(1.0, 1.3, theta)
        s = steady_state(b, unit_film)
        grad = np.zeros((3, 3))
        grad[0, 2] = s.shear_coefficient
        T = -s.p0 * np.eye(3) + unit_film.viscosity * (grad + grad.T) - 2 * unit_film.viscosity * b.fA * apf_tensor(theta)
        np.testing.assert_allclose(T, s.T0, atol=1e-13)


def test_pressure_decreasing_shear_peaked(unit_film):
    th = np.linspace(0, math.pi / 2, 91)
    p = [steady_state(BeamParameters(1, 1, t), unit_film).p0 for t in th]
    c = [steady_state(BeamParameters(1, 1, t), unit_film).shear_coefficient for t in th]
    assert np.all(np.diff(p) < 0)
    assert th[int(np.argmax(c))] == pytest.approx(math.pi / 4)
    assert c[0] == 0 and abs(c[-1]) < 1e-15


def test_stress_magnitude_roundtrip():
    film = FilmParameters(viscosity=0.25e9, surface_energy=1.0, thickness=1.0)
    b = BeamParameters(1.0, 1.0)
    assert stress_magnitude_at_normal(b, film) == pytest.approx(1.5e9, rel=1e-15)
    assert stress_magnitude_at_normal(BeamParameters(0.0, 1.0), film) == 0
    etafA = infer_eta_fA_from_stress(stress_magnitude_at_normal(b, film))
    assert etafA == pytest.approx(0.25e9, rel=1e-15)


def test_infer_eta_fA():
    assert infer_eta_fA_from_stress(1.5e9) == pytest.approx(0.25e9, rel=1e-15)
    assert infer_eta_fA_from_stress(0.0) == 0
    assert infer_eta_fA_from_stress(1.4e9) == pytest.approx(1.4e9 / 6, rel=1e-15)
    with pytest.raises(ValueError):
        infer_eta_fA_from_stress(-1.0)


def test_surface_tension_number(film):
    b = BeamParameters(1.0, 1.0)
    S = surface_tension_number(b, film).S
    assert S == pytest.approx(6 * 1.36 / (1.5e9 * 3e-9), rel=1e-14)
    assert S == pytest.approx(1.813, abs=5e-4)
    assert surface_tension_number(BeamParameters(2.0, 1.0), film).S == pytest.approx(S / 2)
    zero_g = FilmParameters(film.viscosity, 0.0, film.thickness)
    assert surface_tension_number(b, zero_g).S == 0
    with pytest.raises(ZeroDivisionError):
        surface_tension_number(BeamParameters(0.0, 1.0), film)


@pytest.mark.parametrize(
    "kwargs",
    [dict(flux=-1, strain_per_ion=1), dict(flux=1, strain_per_ion=-1), dict(flux=1, strain_per_ion=1, theta=2.0)],
)
def test_beam_invariants(kwargs):
    with pytest.raises(ValueError):
        BeamParameters(**kwargs)


@pytest.mark.parametrize("args", [(0, 1, 1), (1, -1, 1), (1, 1, 0)])
def test_film_invariants(args):
    with pytest.raises(ValueError):
        FilmParameters(*args)
