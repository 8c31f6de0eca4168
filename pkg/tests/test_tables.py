import csv
import io
import math

import pytest

from apfripple.config import DEFAULT_CONFIG_TEXT, parse_config
from apfripple.ebf import KG_PER_NM2_S2, EBFParameters
from apfripple.tables import (
    COMPARE_COLUMNS,
    RESIDUAL_COLUMNS,
    SWEEP_COLUMNS,
    IngestError,
    compare_csv,
    fmt,
    ingest_experiment,
    read_sweep_csv,
    residual_rows,
    run_sweep,
)

UNIT_SUFFIXES = ("_deg", "_nm", "_per_s", "_Pa", "_nm_per_s")
DIMENSIONLESS = {"Q", "Q_star", "stable_flag", "mode", "source", "comparable", "ebf_TS_term", "S"}


def _rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def _cfg(thetas, mode="both"):
    return parse_config(DEFAULT_CONFIG_TEXT + f"sweep: {{theta_deg: {list(thetas)}}}\nmode: {mode}\n")


def test_fmt():
    assert fmt(None) == "" and fmt(True) == "true" and fmt("x") == "x"
    assert fmt(1 / 3) == "0.333333333333"
    assert fmt(24.95e0) == "24.95"


def test_sweep_unstable_angles():
    text = run_sweep(_cfg([50, 60, 70, 80]))
    rows = _rows(text)
    assert text.splitlines()[0] == ",".join(SWEEP_COLUMNS)
    assert [float(r["theta_deg"]) for r in rows] == [50, 60, 70, 80]
    lam = [float(r["lambda_full_nm"]) for r in rows]
    lw = [float(r["lambda_longwave_nm"]) for r in rows]
    assert all(a > b for a, b in zip(lam, lam[1:]))
    assert all(a > b for a, b in zip(lw, lw[1:]))
    assert all(r["stable_flag"] == "false" for r in rows)
    assert all(float(r["V_nm_per_s"]) > 0 for r in rows)
    assert float(rows[1]["lambda_longwave_nm"]) == pytest.approx(16.92, abs=0.01)


def test_sweep_stable_angles():
    rows = _rows(run_sweep(_cfg([10, 20, 30])))
    assert len(rows) == 3
    for r in rows:
        assert r["stable_flag"] == "true"
        assert r["lambda_full_nm"] == "" and r["lambda_longwave_nm"] == ""


def test_sweep_deterministic():
    cfg = _cfg([46, 55, 65, 75, 85])
    a = run_sweep(cfg)
    assert run_sweep(cfg) == a
    assert run_sweep(cfg, workers=4) == a


def test_sweep_modes():
    full = _rows(run_sweep(_cfg([60], "full")))[0]
    lw = _rows(run_sweep(_cfg([60], "longwave")))[0]
    both = _rows(run_sweep(_cfg([60])))[0]
    assert full["lambda_longwave_nm"] == "" and full["lambda_full_nm"] == both["lambda_full_nm"]
    assert lw["lambda_full_nm"] == "" and lw["lambda_longwave_nm"] == both["lambda_longwave_nm"]
    assert float(lw["Q_star"]) > float(full["Q_star"])


def test_headers_carry_units():
    for cols in (SWEEP_COLUMNS, COMPARE_COLUMNS, RESIDUAL_COLUMNS):
        for c in cols:
            assert c in DIMENSIONLESS or c.endswith(UNIT_SUFFIXES), c


def test_compare_csv():
    ebf = EBFParameters(0.424 * KG_PER_NM2_S2, 3e-9, 2.5e8)
    cfg = _cfg([45, 60])
    rows = _rows(compare_csv(cfg, ebf, 0.0))
    assert float(rows[0]["V_apf_nm_per_s"]) == 0
    assert float(rows[0]["V_ebf_nm_per_s"]) > 0
    assert all(r["ebf_TS_term"] == "omitted" for r in rows)
    assert all(float(r["apf_vertical_stress_Pa"]) == 0 for r in rows)


def _write(tmp_path, body, name="data.csv"):
    p = tmp_path / name
    p.write_text(body)
    return p


def test_ingest_valid(tmp_path):
    p = _write(tmp_path, "angle_deg,wavelength_nm,mode,source\n"
               "55,40,parallel,lab A\n65,30,parallel,lab A\n85,50,perpendicular,lab B\n")
    recs = ingest_experiment(p)
    assert len(recs) == 3
    assert [r.comparable for r in recs] == [True, True, False]


def test_ingest_reports_line_numbers(tmp_path):
    p = _write(tmp_path, "angle_deg,wavelength_nm,mode,source\n"
               "55,40,parallel,a\n60,-3,parallel,a\n100,3,parallel,a\n60,3,diagonal,a\n60,x,parallel,a\n")
    with pytest.raises(IngestError) as info:
        ingest_experiment(p)
    probs = info.value.problems
    assert len(probs) == 4
    assert probs[0].startswith("line 3:") and "wavelength" in probs[0]
    assert [q.split(":")[0] for q in probs] == ["line 3", "line 4", "line 5", "line 6"]


def test_ingest_bad_header(tmp_path):
    with pytest.raises(IngestError, match="line 1"):
        ingest_experiment(_write(tmp_path, "angle,lambda\n1,2\n"))


def test_residuals(tmp_path):
    sweep_path = _write(tmp_path, run_sweep(_cfg([50, 60, 70, 80])), "sweep.csv")
    sweep = read_sweep_csv(sweep_path)
    data = _write(tmp_path, "angle_deg,wavelength_nm,mode,source\n"
                  "60,20,parallel,a\n65,20,parallel,a\n85,50,perpendicular,b\n30,10,parallel,c\n")
    rows = residual_rows(ingest_experiment(data), sweep)
    lam60 = sweep[1][list(sweep[0]).index(60.0)]
    assert rows[0][4] == pytest.approx(lam60) and rows[0][5] == pytest.approx(lam60 - 20)
    assert sweep[1][2] < rows[1][4] < sweep[1][1]
    assert rows[2][4] is None and rows[2][6] is False
    assert rows[3][4] is None and rows[3][6] is True
    assert [r[4] for r in residual_rows(ingest_experiment(data))] == [None] * 4
