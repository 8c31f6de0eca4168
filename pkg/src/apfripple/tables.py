"""CSV output for sweeps and comparisons, and ingestion of measured wavelengths."""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .config import NM, RunConfig
from .dispersion import Wavevector, angle_sweep, most_unstable_mode, phase_velocity_longwave
from .ebf import comparison_table

SWEEP_COLUMNS = (
    "theta_deg",
    "lambda_full_nm",
    "lambda_longwave_nm",
    "Q_star",
    "r_star_per_s",
    "V_nm_per_s",
    "stable_flag",
)
COMPARE_COLUMNS = (
    "theta_deg",
    "Q",
    "V_apf_nm_per_s",
    "V_ebf_nm_per_s",
    "T_apf_norm_Pa",
    "T_ebf_interface_norm_Pa",
    "apf_vertical_stress_Pa",
    "ebf_vertical_stress_Pa",
    "ebf_TS_term",
)
EXPERIMENT_COLUMNS = ("angle_deg", "wavelength_nm", "mode", "source")
RESIDUAL_COLUMNS = (
    "angle_deg",
    "wavelength_nm",
    "mode",
    "source",
    "lambda_model_nm",
    "residual_nm",
    "comparable",
)


def fmt(x) -> str:
    """12 significant digits; ``None`` becomes an empty field."""
    if x is None:
        return ""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, str):
        return x
    return f"{float(x):.12g}"


def to_csv(columns, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([fmt(v) for v in r])
    return buf.getvalue()


def run_sweep(config: RunConfig, workers: Optional[int] = None) -> str:
    """Most-unstable-mode sweep over the configured angles, as CSV text."""
    beam, film = config.beam, config.film
    table = angle_sweep(beam, film, config.thetas, workers=workers)
    rows = []
    for deg, row in zip(config.sweep_theta_deg, table):
        lam_full = row.lambda_full
        lam_lw = row.lambda_longwave
        Q, r, V, stable = row.Q_star, row.r_star, row.V, row.stable_flag
        if config.mode == "longwave":
            sel = most_unstable_mode(beam.with_theta(row.theta), film, relation="longwave")
            Q, r, stable, lam_full = sel.Q_star, sel.r_star, sel.stable_flag, None
            V = None
            if not stable and sel.orientation == "parallel":
                V = phase_velocity_longwave(Wavevector.from_Q(Q, film.thickness), beam.with_theta(row.theta), film)
        elif config.mode == "full":
            lam_lw = None
        rows.append((
            deg,
            None if lam_full is None else lam_full / NM,
            None if lam_lw is None else lam_lw / NM,
            Q,
            r,
            None if V is None else V / NM,
            stable,
        ))
    return to_csv(SWEEP_COLUMNS, rows)


def compare_csv(config: RunConfig, ebf, Q: float = 0.0) -> str:
    table = comparison_table(config.thetas, Q, config.beam, config.film, ebf)
    rows = [
        (deg, r.Q, r.V_apf / NM, r.V_ebf / NM, r.T_apf_norm, r.T_ebf_norm,
         r.apf_vertical_stress, r.ebf_vertical_stress, r.ts_term)
        for deg, r in zip(config.sweep_theta_deg, table)
    ]
    return to_csv(COMPARE_COLUMNS, rows)


class IngestError(ValueError):
    def __init__(self, problems):
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))


@dataclass(frozen=True)
class ExperimentRecord:
    angle: float
    wavelength: float
    mode_label: str
    source: str

    @property
    def comparable(self) -> bool:
        # the model has no ripple rotation, so only parallel-mode data is in scope
        return self.mode_label == "parallel"


def ingest_experiment(path) -> list:
    """Read measured wavelengths (``angle_deg,wavelength_nm,mode,source``).

    All malformed rows are collected and reported together with their line
    numbers.
    """
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or tuple(h.strip() for h in header) != EXPERIMENT_COLUMNS:
            raise IngestError([f"line 1: header must be {','.join(EXPERIMENT_COLUMNS)}"])
        records, problems = [], []
        for lineno, row in enumerate(reader, start=2):
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != 4:
                problems.append(f"line {lineno}: expected 4 fields, got {len(row)}")
                continue
            a, lam, mode, src = (c.strip() for c in row)
            try:
                angle = float(a)
                wl = float(lam)
            except ValueError:
                problems.append(f"line {lineno}: non-numeric angle or wavelength")
                continue
            if not 0 <= angle <= 90:
                problems.append(f"line {lineno}: angle {angle} outside [0, 90]")
                continue
            if not wl > 0:
                problems.append(f"line {lineno}: wavelength must be > 0, got {wl}")
                continue
            if mode not in ("parallel", "perpendicular"):
                problems.append(f"line {lineno}: mode must be parallel or perpendicular, got {mode!r}")
                continue
            records.append(ExperimentRecord(angle, wl, mode, src))
    if problems:
        raise IngestError(problems)
    return records


def read_sweep_csv(path):
    """``(theta_deg, lambda_full_nm)`` arrays for the unstable rows of a sweep CSV."""
    th, lam = [], []
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            if row.get("lambda_full_nm"):
                th.append(float(row["theta_deg"]))
                lam.append(float(row["lambda_full_nm"]))
    order = np.argsort(th)
    return np.asarray(th)[order], np.asarray(lam)[order]


def residual_rows(records, sweep=None):
    """Residual table rows ``λ_model - λ_data``; the model is interpolated linearly
    in angle and left blank outside the swept range or for perpendicular data."""
    rows = []
    for rec in records:
        lam_model = None
        if sweep is not None and rec.comparable and len(sweep[0]):
            th, lam = sweep
            if th[0] <= rec.angle <= th[-1]:
                lam_model = float(np.interp(rec.angle, th, lam))
        resid = None if lam_model is None else lam_model - rec.wavelength
        rows.append((rec.angle, rec.wavelength, rec.mode_label, rec.source, lam_model, resid, rec.comparable))
    return rows


def residual_csv(records, sweep=None) -> str:
    return to_csv(RESIDUAL_COLUMNS, residual_rows(records, sweep))


