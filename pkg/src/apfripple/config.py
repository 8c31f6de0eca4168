"""Run configuration: YAML text in human units, SI objects out."""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Optional

import yaml

from .model import BeamParameters, FilmParameters

NM = 1e-9
GPA = 1e9
MODES = ("full", "longwave", "both")
# fA used when the config leaves flux and strain-per-ion out; rates are then per unit fA
DEFAULT_FA = 1.0

DEFAULT_THETAS = (50.0, 60.0, 70.0, 80.0)
DEFAULT_Q = (0.1, 0.3, 0.5, 0.8, 1.0, 1.5, 2.0, 3.0)

SCHEMA = {
    "parameters": {
        "beam": {"flux_per_nm2_s", "strain_per_ion_nm2", "theta_deg"},
        "film": {"thickness_nm", "surface_energy_J_m2", "viscosity_Pa_s", "stress_normal_GPa"},
    },
    "sweep": {"theta_deg", "q"},
    "mode": None,
    "oracle": {"nodes", "tolerance"},
    "output": {"sweep_csv"},
}


class ConfigError(ValueError):
    """Invalid configuration; the message starts with the offending field path."""


@dataclass(frozen=True)
class RunConfig:
    thickness_nm: float
    surface_energy_J_m2: float
    viscosity_Pa_s: Optional[float] = None
    stress_normal_GPa: Optional[float] = None
    flux_per_nm2_s: Optional[float] = None
    strain_per_ion_nm2: Optional[float] = None
    theta_deg: float = 0.0
    sweep_theta_deg: tuple = DEFAULT_THETAS
    sweep_q: tuple = DEFAULT_Q
    mode: str = "both"
    oracle_nodes: int = 48
    oracle_tolerance: float = 1e-8
    sweep_csv: Optional[str] = None

    @property
    def fA(self) -> float:
        if self.flux_per_nm2_s is not None:
            return self.flux_per_nm2_s * self.strain_per_ion_nm2
        if self.viscosity_Pa_s is not None and self.stress_normal_GPa is not None:
            return self.stress_normal_GPa * GPA / (6.0 * self.viscosity_Pa_s)
        return DEFAULT_FA

    @property
    def viscosity(self) -> float:
        if self.viscosity_Pa_s is not None:
            return self.viscosity_Pa_s
        return self.stress_normal_GPa * GPA / (6.0 * self.fA)

    @property
    def beam(self) -> BeamParameters:
        # split fA as (fA per m^2 per s) x (1 m^2); only the product matters
        if self.flux_per_nm2_s is not None:
            return BeamParameters(self.flux_per_nm2_s / NM**2, self.strain_per_ion_nm2 * NM**2,
                                  math.radians(self.theta_deg))
        return BeamParameters(self.fA, 1.0, math.radians(self.theta_deg))

    @property
    def film(self) -> FilmParameters:
        return FilmParameters(self.viscosity, self.surface_energy_J_m2, self.thickness_nm * NM)

    @property
    def thetas(self) -> list:
        return [math.radians(t) for t in self.sweep_theta_deg]

    def to_dict(self) -> dict:
        d = asdict(self)
        beam = {k: d[k] for k in ("flux_per_nm2_s", "strain_per_ion_nm2") if d[k] is not None}
        beam["theta_deg"] = d["theta_deg"]
        film = {k: d[k] for k in ("thickness_nm", "surface_energy_J_m2", "viscosity_Pa_s",
                                  "stress_normal_GPa") if d[k] is not None}
        out = {
            "parameters": {"beam": beam, "film": film},
            "sweep": {"theta_deg": list(self.sweep_theta_deg), "q": list(self.sweep_q)},
            "mode": self.mode,
            "oracle": {"nodes": self.oracle_nodes, "tolerance": self.oracle_tolerance},
        }
        if self.sweep_csv is not None:
            out["output"] = {"sweep_csv": self.sweep_csv}
        return out


def serialize(config: RunConfig) -> str:
    return yaml.safe_dump(config.to_dict(), sort_keys=False)


def _check_keys(data, schema, path):
    if not isinstance(data, dict):
        raise ConfigError(f"{path or '<root>'}: expected a mapping, got {type(data).__name__}")
    for key, value in data.items():
        where = f"{path}.{key}" if path else str(key)
        if key not in schema:
            raise ConfigError(f"{where}: unknown key")
        sub = schema[key] if isinstance(schema, dict) else None
        if isinstance(sub, dict):
            _check_keys(value, sub, where)
        elif isinstance(sub, set):
            if not isinstance(value, dict):
                raise ConfigError(f"{where}: expected a mapping")
            for k in value:
                if k not in sub:
                    raise ConfigError(f"{where}.{k}: unknown key")


def _number(value, path, lo=None, hi=None, lo_open=False):
    # YAML 1.1 loads exponents without a sign (``1.0e8``) as strings
    if isinstance(value, str):
        try:
            value = float(value)
        except ValueError:
            pass
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{path}: expected a number, got {value!r}")
    x = float(value)
    if not math.isfinite(x):
        raise ConfigError(f"{path}: must be finite")
    if lo is not None and (x < lo or (lo_open and x == lo)):
        raise ConfigError(f"{path}: {x} out of range (must be {'>' if lo_open else '>='} {lo})")
    if hi is not None and x > hi:
        raise ConfigError(f"{path}: {x} out of range (must be <= {hi})")
    return x


def _grid(value, path, **bounds):
    if not isinstance(value, list) or not value:
        raise ConfigError(f"{path}: expected a nonempty list")
    return tuple(_number(v, f"{path}[{i}]", **bounds) for i, v in enumerate(value))


def parse_config(text: str) -> RunConfig:
    """Parse and validate YAML configuration text."""
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError(f"<root>: not valid YAML ({exc})") from exc
    if data is None:
        raise ConfigError("parameters: missing required section")
    _check_keys(data, SCHEMA, "")
    params = data.get("parameters")
    if params is None:
        raise ConfigError("parameters: missing required section")
    film = params.get("film")
    if film is None:
        raise ConfigError("parameters.film: missing required section")
    beam = params.get("beam") or {}

    kw = {}
    for key in ("thickness_nm", "surface_energy_J_m2"):
        if key not in film:
            raise ConfigError(f"parameters.film.{key}: missing required field")
    kw["thickness_nm"] = _number(film["thickness_nm"], "parameters.film.thickness_nm", lo=0, lo_open=True)
    kw["surface_energy_J_m2"] = _number(film["surface_energy_J_m2"], "parameters.film.surface_energy_J_m2", lo=0)
    if "viscosity_Pa_s" in film:
        kw["viscosity_Pa_s"] = _number(film["viscosity_Pa_s"], "parameters.film.viscosity_Pa_s", lo=0, lo_open=True)
    if "stress_normal_GPa" in film:
        kw["stress_normal_GPa"] = _number(film["stress_normal_GPa"], "parameters.film.stress_normal_GPa",
                                          lo=0, lo_open=True)

    has_flux = "flux_per_nm2_s" in beam
    if has_flux != ("strain_per_ion_nm2" in beam):
        missing = "strain_per_ion_nm2" if has_flux else "flux_per_nm2_s"
        raise ConfigError(f"parameters.beam.{missing}: flux and strain per ion must be given together")
    if has_flux:
        kw["flux_per_nm2_s"] = _number(beam["flux_per_nm2_s"], "parameters.beam.flux_per_nm2_s", lo=0)
        kw["strain_per_ion_nm2"] = _number(beam["strain_per_ion_nm2"], "parameters.beam.strain_per_ion_nm2", lo=0)
    if "theta_deg" in beam:
        kw["theta_deg"] = _number(beam["theta_deg"], "parameters.beam.theta_deg", lo=0, hi=90)

    have_eta = "viscosity_Pa_s" in kw
    have_stress = "stress_normal_GPa" in kw
    if not (have_eta or have_stress):
        raise ConfigError("parameters.film.viscosity_Pa_s: give viscosity_Pa_s or stress_normal_GPa")
    if has_flux and have_eta and have_stress:
        raise ConfigError("parameters.film.stress_normal_GPa: overdetermined; with flux and strain "
                          "per ion give only one of viscosity_Pa_s, stress_normal_GPa")
    if has_flux and not have_eta and kw["flux_per_nm2_s"] * kw["strain_per_ion_nm2"] == 0:
        raise ConfigError("parameters.beam.flux_per_nm2_s: zero beam rate cannot set the viscosity from stress")

    sweep = data.get("sweep") or {}
    if "theta_deg" in sweep:
        kw["sweep_theta_deg"] = _grid(sweep["theta_deg"], "sweep.theta_deg", lo=0, hi=90)
    if "q" in sweep:
        kw["sweep_q"] = _grid(sweep["q"], "sweep.q", lo=0, lo_open=True)

    if "mode" in data:
        if data["mode"] not in MODES:
            raise ConfigError(f"mode: must be one of {', '.join(MODES)}, got {data['mode']!r}")
        kw["mode"] = data["mode"]

    oracle = data.get("oracle") or {}
    if "nodes" in oracle:
        n = oracle["nodes"]
        if isinstance(n, bool) or not isinstance(n, int) or n < 8:
            raise ConfigError(f"oracle.nodes: must be an integer >= 8, got {n!r}")
        kw["oracle_nodes"] = n
    if "tolerance" in oracle:
        kw["oracle_tolerance"] = _number(oracle["tolerance"], "oracle.tolerance", lo=0, lo_open=True)

    output = data.get("output") or {}
    if output.get("sweep_csv") is not None:
        if not isinstance(output["sweep_csv"], str):
            raise ConfigError("output.sweep_csv: expected a path string")
        kw["sweep_csv"] = output["sweep_csv"]
    return RunConfig(**kw)


DEFAULT_CONFIG_TEXT = """\
parameters:
  film:
    thickness_nm: 3.0
    surface_energy_J_m2: 1.36
    stress_normal_GPa: 1.5
"""


def default_config() -> RunConfig:
    return parse_config(DEFAULT_CONFIG_TEXT)
