"""Physical parameters, the beam strain tensor and the flat-film steady state.

All quantities are SI. The beam enters only through the product ``f * A``
(an inverse time) and the incidence angle, measured from the surface
normal with the beam arriving from the negative x side.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

D_NORMAL = np.diag([1.0, 1.0, -2.0])


@dataclass(frozen=True)
class BeamParameters:
    """Ion beam drive.

    Parameters
    ----------
    flux : float
        Ion flux, ions per m^2 per s.
    strain_per_ion : float
        Strain magnitude per ion, m^2 per ion, so ``flux * strain_per_ion``
        is an inverse time.
    theta : float
        Incidence angle in radians, within [0, pi/2].
    """

    flux: float
    strain_per_ion: float
    theta: float = 0.0

    def __post_init__(self):
        if not self.flux >= 0:
            raise ValueError(f"flux must be >= 0, got {self.flux}")
        if not self.strain_per_ion >= 0:
            raise ValueError(f"strain_per_ion must be >= 0, got {self.strain_per_ion}")
        if not 0.0 <= self.theta <= math.pi / 2 + 1e-15:
            raise ValueError(f"theta must lie in [0, pi/2] rad, got {self.theta}")

    @property
    def fA(self) -> float:
        """Beam strain rate ``f * A`` in 1/s."""
        return self.flux * self.strain_per_ion

    def with_theta(self, theta: float) -> "BeamParameters":
        return BeamParameters(self.flux, self.strain_per_ion, theta)


@dataclass(frozen=True)
class FilmParameters:
    """Amorphous film: viscosity (Pa s), surface energy (J/m^2), thickness (m)."""

    viscosity: float
    surface_energy: float
    thickness: float

    def __post_init__(self):
        if not self.viscosity > 0:
            raise ValueError(f"viscosity must be > 0, got {self.viscosity}")
        if not self.surface_energy >= 0:
            raise ValueError(f"surface_energy must be >= 0, got {self.surface_energy}")
        if not self.thickness > 0:
            raise ValueError(f"thickness must be > 0, got {self.thickness}")


@dataclass(frozen=True)
class DimensionlessGroups:
    S: float
    theta: float


@dataclass(frozen=True)
class SteadyState:
    """Flat-film base state: uniform pressure, linear shear ``u0 = c z``, stress."""

    p0: float
    shear_coefficient: float
    T0: np.ndarray

    def u0(self, z):
        return self.shear_coefficient * z


def rotation_y(theta: float) -> np.ndarray:
    """Rotation matrix about the y-axis."""
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, 0.0, -s], [0.0, 1.0, 0.0], [s, 0.0, c]])


def apf_tensor(theta: float) -> np.ndarray:
    """Angle-dependent shape of the ion-induced strain rate.

    Obtained by rotating the normal-incidence tensor diag(1, 1, -2) so that
    its symmetry axis follows the beam, which gives
    ``D_xx = 3/2 cos 2θ - 1/2``, ``D_xz = 3/2 sin 2θ``, ``D_zz = -3/2 cos 2θ - 1/2``.
    The product order is R(θ) D(0) R(-θ); the reverse order flips the sign
    of the shear entry.
    """
    return rotation_y(theta) @ D_NORMAL @ rotation_y(-theta)


def steady_state(beam: BeamParameters, film: FilmParameters) -> SteadyState:
    th, fA, eta = beam.theta, beam.fA, film.viscosity
    p0 = eta * fA * (3.0 * math.cos(2 * th) + 1.0)
    c = 3.0 * fA * math.sin(2 * th)
    T0 = -6.0 * eta * fA * np.diag([math.cos(2 * th), math.cos(th) ** 2, 0.0])
    # diag() leaves -0.0 in the z slot; normalise so the zero row is clean
    T0 = T0 + 0.0
    return SteadyState(p0=p0, shear_coefficient=c, T0=T0)


def stress_magnitude_at_normal(beam: BeamParameters, film: FilmParameters) -> float:
    """In-plane compressive stress magnitude at normal incidence, ``6 η f A``."""
    return 6.0 * film.viscosity * beam.fA


def infer_eta_fA_from_stress(T0_normal: float) -> float:
    """Invert :func:`stress_magnitude_at_normal`: returns ``η f A`` in Pa."""
    if T0_normal < 0:
        raise ValueError(f"stress magnitude must be >= 0, got {T0_normal}")
    return T0_normal / 6.0


def surface_tension_number(beam: BeamParameters, film: FilmParameters) -> DimensionlessGroups:
    """Collapse γ, η, f, A, h0 into ``S = γ / (η f A h0)``."""
    denom = film.viscosity * beam.fA * film.thickness
    if denom <= 0:
        raise ZeroDivisionError("surface tension number needs eta * f * A * h0 > 0")
    return DimensionlessGroups(S=film.surface_energy / denom, theta=beam.theta)
