"""Normal-mode solution of the linearised film problem, step by step.

The bulk Stokes equations have a closed-form general solution with six
integration constants C..H. Three are fixed by no-slip at the displaced
bottom boundary, three by the stress balance at the free surface, and the
kinematic condition then yields σ. This is an independent route to the
closed-form dispersion relation in :mod:`apfripple.dispersion`.

The perturbation amplitude ``h1`` is a length; everything is linear in it.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .dispersion import ComplexGrowthRate, Wavevector
from .model import BeamParameters, FilmParameters, SteadyState, steady_state

# below this Q the kinematic evaluation cancels O(1) terms to an O(Q^2) result
Q_ILL_CONDITIONED = 1e-6
COND_LIMIT = 1e12


class SingularSystemError(np.linalg.LinAlgError):
    pass


class IllConditionedWarning(RuntimeWarning):
    pass


@dataclass(frozen=True)
class ModeCoefficients:
    C: complex
    D: complex
    E: complex
    F: complex
    G: complex
    H: complex


@dataclass(frozen=True)
class BoundaryRHS:
    """Free-surface forcing split into its three physical sources (Pa)."""

    surface_tension: np.ndarray
    beam_stress: np.ndarray
    nonplanar_bottom: np.ndarray

    @property
    def total(self) -> np.ndarray:
        return self.surface_tension + self.beam_stress + self.nonplanar_bottom

    @property
    def alpha_bar(self) -> complex:
        return complex(self.total[0])

    @property
    def beta_bar(self) -> complex:
        return complex(self.total[1])

    @property
    def gamma_bar(self) -> complex:
        return complex(self.total[2])


def _geometry(k: Wavevector, h0: float):
    R = k.magnitude
    if R == 0:
        raise ValueError("the boundary system is degenerate at Q = 0")
    Q = h0 * R
    return R, Q, math.cosh(Q), math.sinh(Q)


def bottom_constants(theta: float, fA: float, h1: float, flat_bottom: bool = False):
    """Constants (C, E, G) from no-slip at the bottom boundary.

    The bottom boundary is displaced by ``h1`` along with the surface, so the
    base shear evaluated there must be cancelled. ``flat_bottom=True`` keeps the
    bottom at z = 0 instead (diagnostic only).
    """
    if flat_bottom:
        return 0.0, 0.0, 0.0
    return -3.0 * fA * math.sin(2 * theta) * h1, 0.0, 0.0


def boundary_matrix(k: Wavevector, h0: float) -> np.ndarray:
    """Coefficient matrix of the free-surface stress balance in (D, F, H)."""
    R, Q, Cb, Sb = _geometry(k, h0)
    k1, k2 = k.k1, k.k2
    a = Cb + 2 * Q * Sb
    return np.array(
        [
            [R * Cb + k1**2 / R * a, k1 * k2 / R * a, -2j * k1 * Q * Cb],
            [k1 * k2 / R * a, R * Cb + k2**2 / R * a, -2j * k2 * Q * Cb],
            [-2j * k1 * Q * Cb, -2j * k2 * Q * Cb, 2 * R * (Cb - Q * Sb)],
        ],
        dtype=complex,
    )


def boundary_determinant(k: Wavevector, h0: float) -> float:
    R, Q, Cb, _ = _geometry(k, h0)
    return 2 * R**3 * Cb * (1 + 2 * Q**2 + math.cosh(2 * Q))


def boundary_rhs(k, theta, eta, fA, gamma, h0, h1=1.0, flat_bottom=False) -> BoundaryRHS:
    """Right-hand side of ``eta * M @ (D, F, H) = rhs``.

    The beam-stress column is ``-T0 . n1``: the base in-plane stress acting on
    the tilted surface normal ``n1 = (-i k1 h1, -i k2 h1, 0)``.
    """
    R, Q, Cb, Sb = _geometry(k, h0)
    k1, k2 = k.k1, k.k2
    surface = -gamma * h1 * np.array([0.0, 0.0, R**2], dtype=complex)
    beam = -6 * eta * fA * h1 * np.array(
        [1j * k1 * math.cos(2 * theta), 1j * k2 * math.cos(theta) ** 2, 0.0]
    )
    C, _, _ = bottom_constants(theta, fA, h1, flat_bottom)
    b = Sb + 2 * Q * Cb
    bottom = -eta * C * np.array(
        [R * Sb + k1**2 / R * b, k1 * k2 / R * b, -2j * k1 * Q * Sb], dtype=complex
    )
    return BoundaryRHS(surface, beam.astype(complex), bottom)


def solve_coefficients_closed(k: Wavevector, h0: float, rhs) -> tuple:
    """(D, F, H) by Cramer's rule, for ``M @ x = rhs``."""
    R, Q, Cb, Sb = _geometry(k, h0)
    k1, k2 = k.k1, k.k2
    a, b, g = (complex(v) for v in rhs)
    delta = boundary_determinant(k, h0)
    cc = Cb * Cb
    cross = a * k2 - b * k1
    plus = cc + Q * Sb * Cb + 2 * Q**2
    D = (2 * a * R**2 * (cc - Q * Sb * Cb) + 2 * k2 * cross * plus + 2j * g * k1 * R * Q * cc) / delta
    F = (2 * b * R**2 * (cc - Q * Sb * Cb) - 2 * k1 * cross * plus + 2j * g * k2 * R * Q * cc) / delta
    H = (2j * R * (a * k1 + b * k2) * Q * cc + 2 * g * R**2 * (cc + Q * Sb * Cb)) / delta
    return D, F, H


def solve_coefficients_direct(matrix, rhs) -> tuple:
    """Dense LU solve with partial pivoting; warns on a poor condition number."""
    M = np.asarray(matrix, dtype=complex)
    b = np.asarray(rhs, dtype=complex)
    try:
        x = np.linalg.solve(M, b)
    except np.linalg.LinAlgError as exc:
        raise SingularSystemError(f"boundary system is singular: {exc}") from exc
    cond = np.linalg.cond(M)
    if not np.isfinite(cond) or cond > COND_LIMIT:
        warnings.warn(f"boundary system ill-conditioned (cond={cond:.3e})", IllConditionedWarning)
    return tuple(complex(v) for v in x)


def solve_mode(
    k: Wavevector,
    beam: BeamParameters,
    film: FilmParameters,
    h1: float = 1.0,
    method: str = "direct",
    flat_bottom: bool = False,
) -> ModeCoefficients:
    h0, eta = film.thickness, film.viscosity
    if k.magnitude * h0 < Q_ILL_CONDITIONED:
        warnings.warn(
            f"Q={k.magnitude * h0:.3e} is too close to 0 for the pipeline", IllConditionedWarning
        )
    C, E, G = bottom_constants(beam.theta, beam.fA, h1, flat_bottom)
    rhs = boundary_rhs(k, beam.theta, eta, beam.fA, film.surface_energy, h0, h1, flat_bottom).total / eta
    if method == "closed":
        D, F, H = solve_coefficients_closed(k, h0, rhs)
    elif method == "direct":
        D, F, H = solve_coefficients_direct(boundary_matrix(k, h0), rhs)
    else:
        raise ValueError(f"unknown method {method!r}")
    return ModeCoefficients(C, D, E, F, G, H)


class FieldProfiles:
    """Perturbation pressure and velocity as functions of height z in [0, h0]."""

    def __init__(self, coeffs: ModeCoefficients, k: Wavevector, eta: float, h0: float):
        self.coeffs = coeffs
        self.k = k
        self.eta = eta
        self.h0 = h0
        c = coeffs
        k1, k2, R = k.k1, k.k2, k.magnitude
        self.R = R
        self._X = R * c.G + 1j * k1 * c.D + 1j * k2 * c.F
        self._Y = R * c.H + 1j * k1 * c.C + 1j * k2 * c.E

    def __call__(self, z):
        z = np.asarray(z, dtype=float)
        c, X, Y, R = self.coeffs, self._X, self._Y, self.R
        k1, k2 = self.k.k1, self.k.k2
        ch, sh = np.cosh(R * z), np.sinh(R * z)
        p = -2 * self.eta * (Y * ch + X * sh)
        lateral = X * z * ch + Y * z * sh
        u = c.C * ch + c.D * sh - 1j * k1 / R * lateral
        v = c.E * ch + c.F * sh - 1j * k2 / R * lateral
        w = c.G * ch + c.H * sh - (X * z * sh + Y * z * ch)
        return p, u, v, w


def evaluate_fields(coeffs: ModeCoefficients, k: Wavevector, eta: float, h0: float) -> FieldProfiles:
    return FieldProfiles(coeffs, k, eta, h0)


def sigma_from_kinematic(
    profiles: FieldProfiles, steady: SteadyState, k: Wavevector, h0: float, h1: float = 1.0
) -> ComplexGrowthRate:
    """σ = w1(h0)/h1 - u0(h0) i k1 (no base flow along y)."""
    _, _, _, w = profiles(h0)
    u0 = steady.u0(h0)
    v0 = 0.0
    sigma = complex(w) / h1 - u0 * 1j * k.k1 - v0 * 1j * k.k2
    return ComplexGrowthRate(sigma)


def sigma_pipeline(
    k: Wavevector,
    beam: BeamParameters,
    film: FilmParameters,
    h1: float = 1.0,
    method: str = "direct",
    flat_bottom: bool = False,
) -> ComplexGrowthRate:
    """σ from bulk solution, boundary conditions and kinematic condition."""
    if k.magnitude == 0:
        return ComplexGrowthRate(0j)
    coeffs = solve_mode(k, beam, film, h1, method, flat_bottom)
    prof = evaluate_fields(coeffs, k, film.viscosity, film.thickness)
    return sigma_from_kinematic(prof, steady_state(beam, film), k, film.thickness, h1)
