"""Dispersion relations, unstable band and most-unstable mode selection."""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy.optimize import bisect

from .model import (
    BeamParameters,
    FilmParameters,
    stress_magnitude_at_normal,
)
from .optimize import scan_then_golden

# above this Q the hyperbolic ratios are evaluated in exp(-2Q)-scaled form
Q_SCALED = 30.0
Q_SCAN = np.logspace(-4, 1, 2000)


@dataclass(frozen=True)
class Wavevector:
    k1: float
    k2: float = 0.0

    @property
    def magnitude(self) -> float:
        return math.hypot(self.k1, self.k2)

    def Q(self, h0: float) -> float:
        return h0 * self.magnitude

    @classmethod
    def from_Q(cls, Q: float, h0: float, orientation: str = "parallel") -> "Wavevector":
        k = Q / h0
        if orientation == "parallel":
            return cls(k, 0.0)
        if orientation == "perpendicular":
            return cls(0.0, k)
        raise ValueError(f"orientation must be 'parallel' or 'perpendicular', got {orientation!r}")


@dataclass(frozen=True)
class ComplexGrowthRate:
    sigma: complex

    @property
    def r(self) -> float:
        return self.sigma.real

    @property
    def omega(self) -> float:
        return -self.sigma.imag


@dataclass(frozen=True)
class ModeSelection:
    stable_flag: bool
    Q_star: Optional[float]
    orientation: Optional[str]
    lambda_star: Optional[float]
    r_star: float


@dataclass(frozen=True)
class SweepRow:
    theta: float
    lambda_full: Optional[float]
    lambda_longwave: Optional[float]
    Q_star: Optional[float]
    r_star: float
    V: Optional[float]
    stable_flag: bool


def _sinh2x_minus_2x(Q):
    x = 2.0 * Q
    series = x**3 / 6 + x**5 / 120 + x**7 / 5040 + x**9 / 362880
    with np.errstate(over="ignore"):
        direct = np.sinh(x) - x
    return np.where(x < 0.1, series, direct)


def envelopes(Q):
    """Q-dependent factors of the full dispersion relation.

    Returns ``(bulk, shift, level)`` with

    * ``bulk  = 2 / (1 + 2Q^2 + cosh 2Q)``
    * ``shift = 1 - 2 cosh Q / (1 + 2Q^2 + cosh 2Q)``
    * ``level = Q (sinh 2Q - 2Q) / (1 + 2Q^2 + cosh 2Q)``

    ``shift`` is computed as ``2(Q^2 + cosh Q (cosh Q - 1)) / den`` which
    avoids cancellation at small Q.
    """
    Q = np.asarray(Q, dtype=float)
    small = np.minimum(Q, Q_SCALED)
    den = 1.0 + 2.0 * small**2 + np.cosh(2.0 * small)
    ch = np.cosh(small)
    bulk = 2.0 / den
    shift = 2.0 * (small**2 + ch * 2.0 * np.sinh(0.5 * small) ** 2) / den
    level = small * _sinh2x_minus_2x(small) / den

    big = np.maximum(Q, Q_SCALED)
    e = np.exp(-2.0 * big)
    den_s = 1.0 + e * e + 2.0 * e * (1.0 + 2.0 * big**2)
    bulk_s = 4.0 * e / den_s
    shift_s = (4.0 * big**2 * e + (1.0 + e) * (1.0 - np.sqrt(e)) ** 2) / den_s
    level_s = big * (1.0 - e * e - 4.0 * big * e) / den_s

    use = Q > Q_SCALED
    return (
        np.where(use, bulk_s, bulk),
        np.where(use, shift_s, shift),
        np.where(use, level_s, level),
    )


def bottom_bracket(Q):
    """Unexpanded second-line factor: ``2 cosh Q (Q^2 + sinh^2 Q)/den - cosh Q``."""
    Q = np.asarray(Q, dtype=float)
    den = 1.0 + 2.0 * Q**2 + np.cosh(2.0 * Q)
    return 2.0 * np.cosh(Q) * (Q**2 + np.sinh(Q) ** 2) / den - np.cosh(Q)


def sigma_components(q1, q2, theta, fA, level_rate):
    """Full dispersion relation on dimensionless wavenumbers ``q = k h0``.

    ``fA`` is the beam strain rate and ``level_rate = γ/(η h0)``; both in 1/s.
    Setting ``fA = 1`` and ``level_rate = S`` gives σ/(f A).
    Vectorised over ``q1``, ``q2``.
    """
    q1 = np.asarray(q1, dtype=float)
    q2 = np.asarray(q2, dtype=float)
    Q = np.hypot(q1, q2)
    bulk, shift, level = envelopes(Q)
    c2 = math.cos(2 * theta)
    s2 = math.sin(2 * theta)
    cth2 = math.cos(theta) ** 2
    real = -3.0 * fA * (c2 * q1**2 + cth2 * q2**2) * bulk - 0.5 * level_rate * level
    # first-line shear translation plus the nonplanar-bottom term, combined
    imag = -3.0 * fA * s2 * q1 * shift
    return real + 1j * imag


def sigma_longwave_components(q1, q2, theta, fA, level_rate):
    q1 = np.asarray(q1, dtype=float)
    q2 = np.asarray(q2, dtype=float)
    Q2 = q1**2 + q2**2
    real = -3.0 * fA * (math.cos(2 * theta) * q1**2 + math.cos(theta) ** 2 * q2**2) - level_rate / 3.0 * Q2**2
    imag = -4.5 * fA * math.sin(2 * theta) * q1 * Q2
    return real + 1j * imag


def _rates(beam: BeamParameters, film: FilmParameters):
    return beam.fA, film.surface_energy / (film.viscosity * film.thickness)


def sigma_full(k: Wavevector, beam: BeamParameters, film: FilmParameters) -> ComplexGrowthRate:
    """Complex growth rate σ(k1, k2) of the full relation, in 1/s."""
    fA, lr = _rates(beam, film)
    h0 = film.thickness
    s = sigma_components(k.k1 * h0, k.k2 * h0, beam.theta, fA, lr)
    return ComplexGrowthRate(complex(s))


def sigma_longwave(k: Wavevector, beam: BeamParameters, film: FilmParameters) -> ComplexGrowthRate:
    """Leading-order small-Q form of :func:`sigma_full`."""
    fA, lr = _rates(beam, film)
    h0 = film.thickness
    s = sigma_longwave_components(k.k1 * h0, k.k2 * h0, beam.theta, fA, lr)
    return ComplexGrowthRate(complex(s))


def phase_velocity(k: Wavevector, beam: BeamParameters, film: FilmParameters) -> float:
    """Lab-frame ripple speed ``ω / k1`` (m/s), positive means down-beam."""
    if k.k1 == 0:
        raise ValueError("phase velocity needs k1 != 0")
    return sigma_full(k, beam, film).omega / k.k1


def phase_velocity_longwave(k: Wavevector, beam: BeamParameters, film: FilmParameters) -> float:
    if k.k1 == 0:
        raise ValueError("phase velocity needs k1 != 0")
    return sigma_longwave(k, beam, film).omega / k.k1


def _growth_parallel(theta, S):
    def f(Q):
        return float(sigma_components(Q, 0.0, theta, 1.0, S).real)

    return f


def unstable_band(theta: float, S: float, xtol: float = 1e-10):
    """Interval ``(0, Q_hi)`` of growing parallel modes, or ``None`` if empty.

    Growth is measured on σ/(f A), which depends on θ and S only.
    """
    if S < 0:
        raise ValueError(f"S must be >= 0, got {S}")
    if S == 0 and math.cos(2 * theta) < 0:
        # without leveling every parallel mode grows (the envelope only underflows)
        return (0.0, math.inf)
    f = _growth_parallel(theta, S)
    # small-Q expansion: growth ~ 3|cos2θ| Q^2 - (S/3) Q^4, so the edge sits near this
    guess = math.sqrt(9.0 * abs(math.cos(2 * theta)) / S) if S > 0 else 1e3
    grid = np.concatenate([Q_SCAN, np.geomspace(10.0, max(20.0, 4 * guess), 200)[1:]])
    vals = sigma_components(grid, 0.0, theta, 1.0, S).real
    pos = vals > 0
    if not pos.any():
        return None
    i = int(np.argmax(pos))
    neg_after = np.nonzero(~pos[i:])[0]
    if neg_after.size == 0:
        return (0.0, math.inf)
    j = i + int(neg_after[0])
    q_hi = bisect(f, grid[j - 1], grid[j], xtol=xtol * grid[j], rtol=4 * np.finfo(float).eps)
    return (0.0, q_hi)


def _maximise(growth):
    return scan_then_golden(growth, list(Q_SCAN))


def most_unstable_mode(
    beam: BeamParameters, film: FilmParameters, relation: str = "full"
) -> ModeSelection:
    """Maximise Re σ over the two axis orientations.

    ``relation`` selects the ``"full"`` or ``"longwave"`` dispersion relation.
    """
    fA, lr = _rates(beam, film)
    comp = {"full": sigma_components, "longwave": sigma_longwave_components}[relation]
    th = beam.theta
    best = None
    for orient in ("parallel", "perpendicular"):
        if orient == "parallel":
            g = lambda Q: float(comp(Q, 0.0, th, fA, lr).real)  # noqa: E731
        else:
            g = lambda Q: float(comp(0.0, Q, th, fA, lr).real)  # noqa: E731
        Q, r = _maximise(g)
        if best is None or r > best[1]:
            best = (Q, r, orient)
    Q, r, orient = best
    if not r > 0:
        return ModeSelection(True, None, None, None, float(r))
    Q, r = float(Q), float(r)
    return ModeSelection(False, Q, orient, 2 * math.pi * film.thickness / Q, r)


def wavelength_longwave(theta: float, film: FilmParameters, T0_normal: float) -> float:
    """Closed-form most-unstable wavelength of the longwave relation (m).

    Uses ``|cos 2θ|``; only defined above the 45 degree bifurcation.
    """
    c2 = math.cos(2 * theta)
    if theta <= math.pi / 4 or c2 >= 0:
        raise ValueError("no unstable mode for theta <= 45 degrees")
    if T0_normal <= 0:
        raise ValueError("normal-incidence stress must be > 0")
    return 2 * math.pi * math.sqrt(4 * film.surface_energy * film.thickness / (3 * T0_normal * abs(c2)))


def check_axis_dominance(theta: float, S: float, n: int = 41) -> bool:
    """True when no mixed (k1, k2) beats the better axis on a coarse grid."""
    q = np.linspace(0.0, 5.0, n)
    Q1, Q2 = np.meshgrid(q, q, indexing="ij")
    r = sigma_components(Q1, Q2, theta, 1.0, S).real
    Q = np.hypot(Q1, Q2)
    # compare each mixed point with the axis modes at the same |Q|
    r_par = sigma_components(Q, 0.0, theta, 1.0, S).real
    r_perp = sigma_components(0.0, Q, theta, 1.0, S).real
    axis_best = np.maximum(r_par, r_perp)
    return bool(np.all(r <= axis_best + 1e-12 * (1 + np.abs(axis_best))))


def _sweep_row(beam: BeamParameters, film: FilmParameters, theta: float) -> SweepRow:
    b = beam.with_theta(theta)
    sel = most_unstable_mode(b, film)
    lam_lw = None
    stress = stress_magnitude_at_normal(b, film)
    if theta > math.pi / 4 and stress > 0:
        lam_lw = wavelength_longwave(theta, film, stress)
    V = None
    if not sel.stable_flag and sel.orientation == "parallel":
        V = phase_velocity(Wavevector.from_Q(sel.Q_star, film.thickness), b, film)
    return SweepRow(theta, sel.lambda_star, lam_lw, sel.Q_star, sel.r_star, V, sel.stable_flag)


def angle_sweep(
    beam: BeamParameters,
    film: FilmParameters,
    theta_grid: Sequence[float],
    workers: Optional[int] = None,
) -> list:
    """Most-unstable-mode table over incidence angles (radians).

    With ``workers`` the angles are evaluated on a thread pool; output order
    and values are identical to the sequential run.
    """
    thetas = [float(t) for t in theta_grid]
    if not thetas:
        return []
    if beam.fA > 0:
        S = film.surface_energy / (film.viscosity * beam.fA * film.thickness)
        for th in thetas:
            if not check_axis_dominance(th, S):
                raise RuntimeError(f"mixed orientation beats both axes at theta={th}")
    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(lambda t: _sweep_row(beam, film, t), thetas))
    return [_sweep_row(beam, film, t) for t in thetas]
