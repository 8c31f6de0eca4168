import math

import pytest
import yaml
from hypothesis import given, settings
from hypothesis import strategies as st

from apfripple.config import (
    DEFAULT_CONFIG_TEXT,
    ConfigError,
    RunConfig,
    default_config,
    parse_config,
    serialize,
)
from apfripple.model import surface_tension_number, steady_state


def test_minimal_config():
    cfg = parse_config(DEFAULT_CONFIG_TEXT)
    S = surface_tension_number(cfg.beam, cfg.film).S
    assert S == pytest.approx(1.36 / (3e-9 * 1.5e9 / 6), rel=1e-12)
    assert S == pytest.approx(1.813, abs=5e-4)
    assert cfg.fA == 1.0
    st0 = steady_state(cfg.beam, cfg.film)
    assert abs(st0.T0[0, 0]) == pytest.approx(1.5e9, rel=1e-14)


def test_flux_and_strain():
    cfg = parse_config(DEFAULT_CONFIG_TEXT + """\
  beam:
    flux_per_nm2_s: 2.0
    strain_per_ion_nm2: 0.25
    theta_deg: 60
""")
    assert cfg.fA == pytest.approx(0.5)
    assert cfg.beam.fA == pytest.approx(0.5)
    assert cfg.beam.theta == pytest.approx(math.radians(60))
    assert 6 * cfg.viscosity * cfg.fA == pytest.approx(1.5e9)


def test_viscosity_and_stress_set_rate():
    cfg = parse_config("""\
parameters:
  film: {thickness_nm: 3, surface_energy_J_m2: 1.36, viscosity_Pa_s: 1.0e8, stress_normal_GPa: 1.2}
""")
    assert cfg.fA == pytest.approx(2.0)


@pytest.mark.parametrize("text, field", [
    (DEFAULT_CONFIG_TEXT + "  beam: {theta_deg: 95}\n", "parameters.beam.theta_deg"),
    ("", "parameters"),
    ("parameters:\n  film: {thickness_nm: 3}\n", "parameters.film.surface_energy_J_m2"),
    ("parameters:\n  film: {thickness_nm: -3, surface_energy_J_m2: 1, stress_normal_GPa: 1}\n",
     "parameters.film.thickness_nm"),
    ("parameters:\n  film: {thickness_nm: 3, surface_energy_J_m2: 1}\n", "parameters.film.viscosity_Pa_s"),
    (DEFAULT_CONFIG_TEXT + "colour: red\n", "colour"),
    (DEFAULT_CONFIG_TEXT + "  beam: {flux_per_nm2_s: 1}\n", "parameters.beam.strain_per_ion_nm2"),
    (DEFAULT_CONFIG_TEXT + "mode: fast\n", "mode"),
    (DEFAULT_CONFIG_TEXT + "oracle: {nodes: 4}\n", "oracle.nodes"),
    (DEFAULT_CONFIG_TEXT + "sweep: {theta_deg: [10, abc]}\n", "sweep.theta_deg"),
    (DEFAULT_CONFIG_TEXT + "sweep: {q: [0.0]}\n", "sweep.q"),
    ("[1, 2", ""),
])
def test_validation_names_field(text, field):
    with pytest.raises(ConfigError) as info:
        parse_config(text)
    assert str(info.value).startswith(field)


def test_roundtrip_default():
    cfg = default_config()
    assert parse_config(serialize(cfg)) == cfg


def test_roundtrip_full():
    cfg = RunConfig(
        thickness_nm=2.7, surface_energy_J_m2=0.9, viscosity_Pa_s=3.3e8,
        flux_per_nm2_s=0.1, strain_per_ion_nm2=0.07, theta_deg=61.5,
        sweep_theta_deg=(46.0, 55.5), sweep_q=(0.2, 0.4), mode="full",
        oracle_nodes=32, oracle_tolerance=1e-9, sweep_csv="out.csv",
    )
    text = serialize(cfg)
    assert parse_config(text) == cfg
    assert yaml.safe_load(text)["parameters"]["beam"]["theta_deg"] == 61.5


@settings(max_examples=60, deadline=None)
@given(
    h=st.floats(0.1, 100), g=st.floats(0, 5), s=st.floats(0.01, 10),
    th=st.floats(0, 90), thetas=st.lists(st.floats(0, 90), min_size=1, max_size=5),
)
def test_roundtrip_property(h, g, s, th, thetas):
    cfg = RunConfig(thickness_nm=h, surface_energy_J_m2=g, stress_normal_GPa=s,
                    theta_deg=th, sweep_theta_deg=tuple(thetas))
    assert parse_config(serialize(cfg)) == cfg
