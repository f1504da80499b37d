import json
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ltaqfi.cli import fmt, main
from ltaqfi.config import ConfigError, RunConfig, load_config, parse_config
from ltaqfi.experiments import COLUMNS, error_scaling_from_table, loglog_fit, run_single, run_sweep


def write(tmp_path, text, name="run.cfg"):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


def read_table(path):
    lines = open(path).read().splitlines()
    assert lines[0].startswith("# schema: ltaqfi.")
    header = lines[1].split(",")
    return [dict(zip(header, ln.split(","))) for ln in lines[2:]]


SMALL = """
model = static-bec   # comment
N = 40
c = 1.0
q = 0.3
rho0_init = 0.6
steps = 300
dt = 2.0
"""


def test_parse_config_aliases_and_types():
    cfg = parse_config(SMALL)
    assert (cfg.model, cfg.N, cfg.q, cfg.rho0, cfg.steps) == ("static-bec", 40, 0.3, 0.6, 300)
    cfg = parse_config("model = driven-bec\nN = 20\nG0 = 2\nGj = 1\nrho0 = 0.8")
    assert cfg.eta == 0.5
    cfg = parse_config("model = lmg\nN = 21\nchi = 5\nz_init = 0.6\nstore_pbar = yes")
    assert cfg.z0 == 0.6 and cfg.store_pbar is True


@pytest.mark.parametrize(
    "text",
    [
        "model = potts\nq = 1",
        "model = static-bec\nq = 1\nN = 41",
        "model = static-bec",
        "model = static-bec\nq = 1\nbogus = 3",
        "model = static-bec\nq = one",
        "model = static-bec\nq = 1\nN = 4.5",
        "model = static-bec\nq = nan",
        "model = static-bec\nq = 1\nrho0 = 1.5",
        "model = static-bec\nsweep = eta\nsweep_min = 0\nsweep_max = 1",
        "model = static-bec\nsweep = q\nsweep_min = 1",
        "model = lmg\nchi = 1\nestimator = magic",
        "just some words",
        "model = static-bec\nq = 1\nstore_pbar = maybe",
    ],
)
def test_config_errors(text):
    with pytest.raises(ConfigError):
        parse_config(text)


def test_missing_file():
    with pytest.raises(ConfigError):
        load_config("/nonexistent/run.cfg")


def test_cli_config_error_exit_code(tmp_path):
    assert main(["single", "--config", write(tmp_path, "model = potts")]) == 2
    assert main(["single"]) == 2
    assert main(["sweep", "--config", write(tmp_path, SMALL)]) == 2  # no sweep axis


def test_sweep_values():
    cfg = RunConfig(model="lmg", sweep="m", sweep_min=0.2, sweep_max=1.0, sweep_points=5)
    assert np.allclose(cfg.validate().sweep_values(), [0.2, 0.4, 0.6, 0.8, 1.0])


def test_single_run_deterministic(tmp_path):
    cfg = write(tmp_path, SMALL)
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(["single", "--config", cfg, "--out", str(a)]) == 0
    assert main(["single", "--config", cfg, "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    (row,) = read_table(a)
    assert list(row) == COLUMNS
    assert float(row["fq_exact"]) > 0 and row["status"] == "ok"
    assert float(row["norm_error"]) < 1e-12 and float(row["energy_drift"]) < 1e-10


def test_timing_column(tmp_path):
    out = tmp_path / "t.csv"
    assert main(["single", "--config", write(tmp_path, SMALL), "--out", str(out), "--timing"]) == 0
    assert "wall_time" in read_table(out)[0]


SWEEP = """
model = lmg
N = 30
z0 = 0.6
steps = 200
dt = 1.0
sweep = m
sweep_min = 0.5
sweep_max = 2.0
sweep_points = 4
store_pbar = true
"""


def test_sweep_parallel_matches_serial(tmp_path):
    cfg = write(tmp_path, SWEEP)
    a, b = tmp_path / "serial.csv", tmp_path / "parallel.csv"
    assert main(["sweep", "--config", cfg, "--out", str(a)]) == 0
    assert main(["sweep", "--config", cfg, "--out", str(b), "--jobs", "2"]) == 0
    assert a.read_bytes() == b.read_bytes()
    rows = read_table(a)
    assert [float(r["value"]) for r in rows] == pytest.approx([0.5, 1.0, 1.5, 2.0])
    assert [float(r["m"]) for r in rows] == pytest.approx([0.5, 1.0, 1.5, 2.0])
    assert (tmp_path / "parallel.csv.pbar.csv").exists()


def test_degenerate_driven_record():
    cfg = RunConfig(model="driven-bec", N=20, eta=0.5, rho0=0.5, steps=50, dt=1.0).validate()
    rec = run_single(cfg)
    assert rec.status == "degenerate"
    assert math.isnan(rec.fq_exact_x0_scaled) and np.isfinite(rec.fq_exact)


def test_semiclassical_only(tmp_path):
    cfg = write(tmp_path, SWEEP.replace("sweep_points = 4", "sweep_points = 3"))
    out = tmp_path / "sc.csv"
    assert main(["semiclassical", "--config", cfg, "--out", str(out)]) == 0
    rows = read_table(out)
    assert [r["phase"] for r in rows] == ["untrapped", "trapped", "trapped"]
    assert float(rows[0]["fq_semiclassical_x0_scaled"]) == pytest.approx(1.7, abs=0.2)


def test_failed_row_is_recorded():
    # an unphysical Omega makes the semiclassical stage fail while the
    # quantum part still runs; the row keeps its error status
    cfg = RunConfig(model="lmg", N=10, chi=3.0, Omega=2.0, steps=20, dt=1.0).validate()
    rec = run_sweep(cfg)[0]
    assert rec.status.startswith("error:semiclassics")
    assert np.isfinite(rec.fq_exact)


def test_loglog_fit_constant_and_power():
    N = [100, 200, 400, 800]
    slope, _, resid = loglog_fit(N, [0.3] * 4)
    assert slope == pytest.approx(0.0, abs=1e-12) and np.allclose(resid, 0)
    slope, intercept, _, jack = error_scaling_from_table(N, [2.0 * n**-0.5 for n in N])
    assert slope == pytest.approx(-0.5) and jack == pytest.approx(-0.5)
    assert math.exp(intercept) == pytest.approx(2.0)
    with pytest.raises(ValueError):
        error_scaling_from_table([100, 200], [0.1, 0.2])
    with pytest.raises(ValueError):
        error_scaling_from_table([300, 200, 100], [0.1, 0.2, 0.3])


def test_error_scaling_cli(tmp_path, capsys):
    out = tmp_path / "scal.csv"
    rc = main(["error-scaling", "--N", "20", "30", "40", "--steps", "500", "--out", str(out)])
    assert rc == 0
    summary = json.loads(capsys.readouterr().out)
    assert {"slope", "slope_without_largest_N", "diagonal_mean_largest_N"} <= set(summary)
    assert len(read_table(out)) == 3
    assert (tmp_path / "scal.csv.matrix.csv").exists()
    assert main(["error-scaling", "--N", "20", "30"]) == 2


def test_figure_1_small_grid(tmp_path):
    out = tmp_path / "fig1.csv"
    assert main(["figure", "1", "--steps", "20", "--out", str(out)]) == 0
    rows = read_table(out)
    assert {r["panel"] for r in rows} == {"c", "d"}
    assert len(rows) == 2 * 501
    for panel in "cd":
        total = sum(float(r["pbar"]) for r in rows if r["panel"] == panel)
        assert total == pytest.approx(1.0, abs=1e-10)


@given(st.floats(allow_nan=True, allow_infinity=False))
def test_fmt_round_trips(x):
    s = fmt(x)
    assert (math.isnan(x) and s == "nan") or float(s) == x


def test_fmt_types():
    assert fmt(True) == "1" and fmt(np.int64(3)) == "3" and fmt("ok") == "ok"
