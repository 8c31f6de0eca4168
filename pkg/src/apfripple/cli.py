"""Command-line entry point.

Exit codes: 0 success, 1 validation error, 2 verification failure, 3 IO error.
"""
from __future__ import annotations

import argparse
import math
import os
import sys

from .config import NM, ConfigError, RunConfig, default_config, parse_config
from .dispersion import Wavevector, phase_velocity, phase_velocity_longwave, sigma_full, sigma_longwave
from .ebf import KG_PER_NM2_S2, EBFParameters
from .model import stress_magnitude_at_normal, steady_state, surface_tension_number
from .tables import (
    COMPARE_COLUMNS,
    RESIDUAL_COLUMNS,
    SWEEP_COLUMNS,
    IngestError,
    compare_csv,
    fmt,
    ingest_experiment,
    read_sweep_csv,
    residual_csv,
    run_sweep,
    to_csv,
)
from .verify import verify

EXIT_OK, EXIT_VALIDATION, EXIT_VERIFY, EXIT_IO = 0, 1, 2, 3

STEADY_COLUMNS = (
    "theta_deg",
    "p0_Pa",
    "shear_coefficient_per_s",
    "T0_xx_Pa",
    "T0_yy_Pa",
    "T0_zz_Pa",
    "stress_normal_Pa",
    "S",
)

EPILOG = f"""\
CSV column order:
  steady       {','.join(STEADY_COLUMNS)}
  sweep        {','.join(SWEEP_COLUMNS)}
  compare-ebf  {','.join(COMPARE_COLUMNS)}
  ingest       {','.join(RESIDUAL_COLUMNS)}
Empty fields mark quantities that do not exist (e.g. wavelength of a stable angle).
"""


def _load_config(path) -> RunConfig:
    if path is None:
        return default_config()
    with open(path) as fh:
        return parse_config(fh.read())


def _emit(text, out=None):
    if out:
        with open(out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_steady(args):
    cfg = _load_config(args.config)
    beam, film = cfg.beam, cfg.film
    theta_deg = cfg.theta_deg if args.theta_deg is None else args.theta_deg
    if not 0 <= theta_deg <= 90:
        raise ConfigError(f"--theta-deg: {theta_deg} out of range [0, 90]")
    beam = beam.with_theta(math.radians(theta_deg))
    st = steady_state(beam, film)
    S = surface_tension_number(beam, film).S
    row = (theta_deg, st.p0, st.shear_coefficient, st.T0[0, 0], st.T0[1, 1], st.T0[2, 2],
           stress_magnitude_at_normal(beam, film), S)
    _emit(to_csv(STEADY_COLUMNS, [row]), args.out)
    return EXIT_OK


def cmd_dispersion(args):
    cfg = _load_config(args.config)
    if not 0 <= args.theta_deg <= 90:
        raise ConfigError(f"--theta-deg: {args.theta_deg} out of range [0, 90]")
    if args.q < 0:
        raise ConfigError(f"--q: must be >= 0, got {args.q}")
    beam = cfg.beam.with_theta(math.radians(args.theta_deg))
    film = cfg.film
    k = Wavevector.from_Q(args.q, film.thickness, args.orientation)
    sig = (sigma_longwave if args.longwave else sigma_full)(k, beam, film)
    vel = phase_velocity_longwave if args.longwave else phase_velocity
    V = vel(k, beam, film) / NM if k.k1 != 0 else None
    parts = [
        f"relation={'longwave' if args.longwave else 'full'}",
        f"theta_deg={fmt(args.theta_deg)}",
        f"Q={fmt(args.q)}",
        f"orientation={args.orientation}",
        f"growth_rate_per_s={fmt(sig.r)}",
        f"omega_per_s={fmt(sig.omega)}",
        f"V_nm_per_s={fmt(V) if V is not None else 'NA'}",
    ]
    print(" ".join(parts))
    return EXIT_OK


def cmd_sweep(args):
    cfg = _load_config(args.config)
    text = run_sweep(cfg, workers=args.workers)
    _emit(text, args.out or cfg.sweep_csv)
    return EXIT_OK


def cmd_compare(args):
    cfg = _load_config(args.config)
    eta = args.eta_pa_s if args.eta_pa_s is not None else cfg.viscosity
    try:
        ebf = EBFParameters(f_E=args.fe * KG_PER_NM2_S2, d=args.d * NM, eta=eta)
    except ValueError as exc:
        raise ConfigError(f"--d/--eta-pa-s: {exc}") from exc
    if args.q < 0:
        raise ConfigError(f"--q: must be >= 0, got {args.q}")
    _emit(compare_csv(cfg, ebf, args.q), args.out)
    return EXIT_OK


def cmd_verify(args):
    cfg = _load_config(args.config)
    report = verify(cfg, oracle=args.oracle, grid=args.grid, nodes=args.nodes)
    color = sys.stdout.isatty() and "NO_COLOR" not in os.environ
    for line in report.lines(color=color):
        print(line)
    return EXIT_OK if report.passed else EXIT_VERIFY


def cmd_ingest(args):
    records = ingest_experiment(args.data)
    sweep = read_sweep_csv(args.sweep) if args.sweep else None
    _emit(residual_csv(records, sweep), args.out)
    return EXIT_OK


def build_parser():
    p = argparse.ArgumentParser(
        prog="apfripple",
        description="Linear stability of ion-irradiated films under anisotropic plastic flow.",
        epilog=EPILOG,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, func, help_):
        sp = sub.add_parser(name, help=help_, description=help_, epilog=EPILOG,
                            formatter_class=argparse.RawDescriptionHelpFormatter)
        sp.set_defaults(func=func)
        return sp

    sp = add("steady", cmd_steady, "flat-film steady state (CSV, one row)")
    sp.add_argument("--config")
    sp.add_argument("--theta-deg", type=float)
    sp.add_argument("--out")

    sp = add("dispersion", cmd_dispersion, "growth rate and ripple speed of one mode (single line)")
    sp.add_argument("--theta-deg", type=float, required=True)
    sp.add_argument("--q", type=float, required=True, help="dimensionless wavenumber h0*|k|")
    sp.add_argument("--orientation", choices=("parallel", "perpendicular"), default="parallel")
    sp.add_argument("--longwave", action="store_true")
    sp.add_argument("--config")

    sp = add("sweep", cmd_sweep, "most-unstable mode over the configured angle grid (CSV)")
    sp.add_argument("--config", required=True)
    sp.add_argument("--out")
    sp.add_argument("--workers", type=int)

    sp = add("compare-ebf", cmd_compare, "side-by-side predictions of the EBF model (CSV)")
    sp.add_argument("--config", required=True)
    sp.add_argument("--fe", type=float, required=True, help="body-force magnitude in kg/(nm s)^2")
    sp.add_argument("--d", type=float, required=True, help="EBF film depth in nm")
    sp.add_argument("--q", type=float, default=0.0, help="dimensionless wavenumber (default 0)")
    sp.add_argument("--eta-pa-s", type=float, help="EBF viscosity; defaults to the config film")
    sp.add_argument("--out")

    sp = add("verify", cmd_verify, "closed form vs pipeline (and oracle) on a grid")
    sp.add_argument("--oracle", action="store_true")
    sp.add_argument("--grid", choices=("coarse", "full"), default="full")
    sp.add_argument("--nodes", type=int, help="collocation nodes (default from config, 48)")
    sp.add_argument("--config")

    sp = add("ingest", cmd_ingest, "validate measured wavelengths, residuals against a sweep (CSV)")
    sp.add_argument("--data", required=True)
    sp.add_argument("--sweep")
    sp.add_argument("--out")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except IngestError as exc:
        for problem in exc.problems:
            print(f"error: {problem}", file=sys.stderr)
        return EXIT_VALIDATION
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
