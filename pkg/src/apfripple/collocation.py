"""Chebyshev collocation solver for the linearised film problem.

Solves for (u1, v1, w1, p1) on [0, h0] directly from the perturbed Stokes
equations and boundary conditions, then reads σ off the kinematic condition.
Nothing here uses the closed-form bulk solution, so agreement with
:func:`apfripple.dispersion.sigma_full` is a genuine check of it.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .dispersion import Wavevector
from .model import BeamParameters, FilmParameters, steady_state

COND_LIMIT = 1e14


class OracleError(np.linalg.LinAlgError):
    pass


@dataclass(frozen=True)
class CollocationConfig:
    node_count: int = 48

    def __post_init__(self):
        if self.node_count < 8:
            raise ValueError(f"node_count must be >= 8, got {self.node_count}")


@dataclass(frozen=True)
class OracleResult:
    sigma: complex
    residual_norm: float
    N_used: int
    condition: float = float("nan")
    # max |i k.u + w'| over all nodes, relative to the largest velocity
    continuity_residual: float = float("nan")
    fields: dict = field(default_factory=dict, repr=False, compare=False)


def cheb(N):
    """Chebyshev-Gauss-Lobatto nodes on [-1, 1] (descending) and the
    first-derivative matrix, N points."""
    n = N - 1
    x = np.cos(np.pi * np.arange(N) / n)
    c = np.ones(N)
    c[0] = c[-1] = 2.0
    c *= (-1.0) ** np.arange(N)
    X = np.tile(x, (N, 1)).T
    dX = X - X.T
    D = np.outer(c, 1.0 / c) / (dX + np.eye(N))
    D -= np.diag(D.sum(axis=1))
    return x, D


def sigma_collocation(
    k: Wavevector,
    beam: BeamParameters,
    film: FilmParameters,
    config: CollocationConfig = CollocationConfig(),
    h1: float = 1.0,
    flat_bottom: bool = False,
) -> OracleResult:
    """Growth rate σ (1/s) from a spectral solve of the perturbation problem.

    Lengths are scaled by h0, rates by ``tau = fA + γ/(η h0)``, velocities by
    ``tau h0`` and pressure by ``η tau``.
    """
    N = config.node_count
    h0, eta, gamma = film.thickness, film.viscosity, film.surface_energy
    Q = k.magnitude * h0
    if not Q > 0:
        raise ValueError("the collocation oracle needs Q > 0")
    fA = beam.fA
    tau = fA + gamma / (eta * h0)
    if tau == 0:
        return OracleResult(0j, 0.0, N, 1.0, 0.0)

    x, Dx = cheb(N)
    zeta = 0.5 * (x + 1.0)  # zeta[0] = 1 is the free surface, zeta[-1] = 0 the bottom
    D = 2.0 * Dx
    D2 = D @ D
    I = np.eye(N)
    Z = np.zeros((N, N))
    k1, k2 = k.k1 * h0, k.k2 * h0
    L = D2 - Q**2 * I
    hhat = h1 / h0

    # unknown ordering: u, v, w, p
    A = np.block(
        [
            [L, Z, Z, -1j * k1 * I],
            [Z, L, Z, -1j * k2 * I],
            [Z, Z, L, -D],
            [1j * k1 * I, 1j * k2 * I, D, Z],
        ]
    ).astype(complex)
    b = np.zeros(4 * N, dtype=complex)

    base = steady_state(beam, film)
    top, bot = 0, N - 1
    ux, uy, uz, pc = (slice(i * N, (i + 1) * N) for i in range(4))

    def row(block, node):
        return block * N + node

    # no-slip on the displaced bottom: u1 + u0'(0) g1 = 0
    g1 = 0.0 if flat_bottom else hhat
    for blk, val in ((0, -base.shear_coefficient / tau * g1), (1, 0.0), (2, 0.0)):
        r = row(blk, bot)
        A[r, :] = 0.0
        A[r, blk * N + bot] = 1.0
        b[r] = val

    # stress balance T1.n0 + T0.n1 = -gamma kappa1 n0 at the free surface, kappa1 = R^2 h1
    n1 = np.array([-1j * k1 * hhat, -1j * k2 * hhat, 0.0])
    forcing = -(base.T0 @ n1) / (eta * tau)
    forcing[2] += -gamma * Q**2 * hhat / (eta * h0 * tau)
    e_top = I[top]
    Dtop = D[top]
    r = row(0, top)
    A[r, :] = 0.0
    A[r, ux] = Dtop
    A[r, uz] = 1j * k1 * e_top
    b[r] = forcing[0]
    r = row(1, top)
    A[r, :] = 0.0
    A[r, uy] = Dtop
    A[r, uz] = 1j * k2 * e_top
    b[r] = forcing[1]
    r = row(2, top)
    A[r, :] = 0.0
    A[r, pc] = -e_top
    A[r, uz] = 2.0 * Dtop
    b[r] = forcing[2]

    cond = np.linalg.cond(A)
    if not np.isfinite(cond) or cond > COND_LIMIT:
        raise OracleError(f"collocation system ill-conditioned (cond={cond:.3e}, N={N})")
    sol = np.linalg.solve(A, b)
    # normwise backward error of the dense solve
    residual = np.linalg.norm(A @ sol - b, np.inf) / (
        np.linalg.norm(A, np.inf) * np.linalg.norm(sol, np.inf) + np.linalg.norm(b, np.inf)
    )
    u, v, w, p = sol[ux], sol[uy], sol[uz], sol[pc]
    scale = max(np.abs(sol[: 3 * N]).max(), np.finfo(float).tiny)
    cont = np.max(np.abs(1j * k1 * u + 1j * k2 * v + D @ w)) / scale

    sigma = tau * w[top] / hhat - 1j * base.shear_coefficient * k1
    fields = {"zeta": zeta, "u": u, "v": v, "w": w, "p": p, "D": D}
    return OracleResult(complex(sigma), float(residual), N, float(cond), float(cont), fields)


def convergence_study(k: Wavevector, beam: BeamParameters, film: FilmParameters, N_list):
    """Rows of ``(N, |σ_N - σ_ref|)`` with the largest N as reference."""
    N_list = list(N_list)
    if any(b <= a for a, b in zip(N_list, N_list[1:])):
        raise ValueError("N_list must be strictly ascending")
    sig = [sigma_collocation(k, beam, film, CollocationConfig(N)).sigma for N in N_list]
    ref = sig[-1]
    return [(N, abs(s - ref)) for N, s in zip(N_list, sig)]
