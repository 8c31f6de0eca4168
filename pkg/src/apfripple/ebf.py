"""Effective-body-force (EBF) model formulas, for side-by-side comparison.

The EBF picture puts the free surface at z = 0 and the amorphous/crystalline
interface at z = -d. Its extra stress ``T^S`` has no defining formula and is
left out (recorded as ``TS_TERM`` in outputs).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .dispersion import Wavevector, phase_velocity
from .model import BeamParameters, FilmParameters, steady_state

TS_TERM = "omitted"
# 1 kg/(nm s)^2 expressed in N/m^3
KG_PER_NM2_S2 = 1e18


@dataclass(frozen=True)
class EBFParameters:
    """Body-force magnitude f_E (N/m^3), depth d (m), viscosity η (Pa s), Ψ."""

    f_E: float
    d: float
    eta: float
    psi_form: Callable[[float], float] = math.cos

    def __post_init__(self):
        if not self.d > 0:
            raise ValueError(f"d must be > 0, got {self.d}")
        if not self.eta > 0:
            raise ValueError(f"eta must be > 0, got {self.eta}")


def ebf_steady_stress(z: float, theta: float, params: EBFParameters) -> np.ndarray:
    """Viscous part of the EBF steady stress in the (x, z) plane."""
    if not -params.d <= z <= 0:
        raise ValueError(f"z={z} lies outside the film [-{params.d}, 0]")
    c, s = math.cos(theta), math.sin(theta)
    return params.f_E * params.psi_form(theta) * z * np.array([[c, -s], [-s, c]])


def ebf_ripple_velocity(theta: float, Q: float, params: EBFParameters) -> float:
    """Ripple speed ``d^2 f_E sin 2θ (1 - 3Q^2/8) / (2η)``."""
    return params.d**2 * params.f_E * math.sin(2 * theta) * (1 - 0.375 * Q**2) / (2 * params.eta)


def rescale_body_force(fE_old: float, stress_old: float, stress_new: float) -> float:
    """Rescale f_E assuming it is proportional to the steady stress."""
    if not stress_old > 0:
        raise ValueError(f"old stress must be > 0, got {stress_old}")
    return fE_old * stress_new / stress_old


@dataclass(frozen=True)
class ComparisonRow:
    theta: float
    Q: float
    V_apf: float
    V_ebf: float
    T_apf_norm: float
    T_ebf_norm: float
    apf_vertical_stress: float
    ebf_vertical_stress: float
    ts_term: str = TS_TERM

    @property
    def apf_stationary_at_longwave(self) -> bool:
        return abs(self.V_apf) <= 1e-12 * max(abs(self.V_ebf), 1e-300)

    @property
    def ebf_moves_at_longwave(self) -> bool:
        return self.V_ebf != 0.0


def comparison_table(
    theta_grid: Sequence[float],
    Q: float,
    beam: BeamParameters,
    film: FilmParameters,
    ebf: EBFParameters,
) -> list:
    """Per-angle ripple speeds and interface stress magnitudes of both models.

    The APF speed at ``Q == 0`` is taken as its limit, zero. Stress norms are
    Frobenius norms; the vertical stress is the magnitude of the traction on
    a horizontal plane at the interface.
    """
    rows = []
    for th in theta_grid:
        b = beam.with_theta(float(th))
        if Q > 0:
            V_apf = phase_velocity(Wavevector.from_Q(Q, film.thickness), b, film)
        else:
            V_apf = 0.0
        T_apf = steady_state(b, film).T0
        T_ebf = ebf_steady_stress(-ebf.d, float(th), ebf)
        rows.append(
            ComparisonRow(
                theta=float(th),
                Q=float(Q),
                V_apf=V_apf,
                V_ebf=ebf_ripple_velocity(float(th), Q, ebf),
                T_apf_norm=float(np.linalg.norm(T_apf)),
                T_ebf_norm=float(np.linalg.norm(T_ebf)),
                apf_vertical_stress=float(np.linalg.norm(T_apf[:, 2])),
                ebf_vertical_stress=float(np.linalg.norm(T_ebf[:, 1])),
            )
        )
    return rows
