import math

import numpy as np
import pytest
from scipy.stats import poisson

from squeezejc.cli import emit_csv, format_value, main, parse_config


def read_csv(path):
    lines = path.read_text(encoding="utf-8").splitlines()
    return lines[0].split(","), [[float(x) for x in ln.split(",")] for ln in lines[1:]]


@pytest.mark.parametrize("x,text", [
    (1.0, "1e0"), (0.5, "5e-1"), (-2.25, "-2.25e0"), (1e-300, "1e-300"),
    (0.1, "1e-1"), (123456.789, "1.23456789e5"), (0.0, "0e0"), (7, "7"), (math.nan, "nan"),
])
def test_format_value(x, text):
    assert format_value(x) == text


def test_format_round_trips():
    rng = np.random.default_rng(0)
    for x in rng.standard_normal(200) * 10.0 ** rng.integers(-20, 20, 200):
        assert float(format_value(float(x))) == float(x)


def test_emit_csv_simple(tmp_path):
    p = emit_csv(tmp_path / "a.csv", ("n", "P"), [(0, 1.0)])
    assert p.read_bytes() == b"n,P\n0,1e0\n"


def test_emit_csv_header_only(tmp_path):
    p = emit_csv(tmp_path / "a.csv", ("x", "y"), [])
    assert p.read_bytes() == b"x,y\n"


def test_emit_csv_rejects_ragged(tmp_path):
    with pytest.raises(ValueError):
        emit_csv(tmp_path / "a.csv", ("x", "y"), [(1,)])


def test_emit_csv_io_error_names_path(tmp_path):
    with pytest.raises(OSError, match="nope"):
        emit_csv(tmp_path / "nope" / "a.csv", ("x",), [])


def test_dist_paper_set(tmp_path):
    assert main(["dist", "--nc", "49", "--ns", "0,1,2,5,10", "--out", str(tmp_path)]) == 0
    files = sorted(p.name for p in tmp_path.iterdir())
    assert files == [f"dist_nc49_ns{k}.csv" for k in ("0", "1", "10", "2", "5")]
    header, rows = read_csv(tmp_path / "dist_nc49_ns0.csv")
    assert header == ["n", "P"]
    n = np.array([r[0] for r in rows])
    np.testing.assert_allclose([r[1] for r in rows], poisson.pmf(n, 49), rtol=1e-11)
    text = (tmp_path / "dist_nc49_ns1.csv").read_text()
    assert "\r" not in text and not any(ln != ln.rstrip() for ln in text.splitlines())


@pytest.mark.parametrize("argv,flag", [
    (["dist", "--nc", "-1"], "--nc"),
    (["dist", "--ns", "1,-2"], "--ns"),
    (["dist", "--ns", ""], "--ns"),
    (["inversion", "--step", "0"], "--step"),
    (["entropy", "--stop", "nan"], "--stop"),
    (["mean-entropy", "--step", "0.2"], "--step"),
    (["mean-entropy", "--lambda-T", "-5"], "--lambda-T"),
    (["dist", "--tail-tol", "1.5"], "--tail-tol"),
    (["optimal", "--nc-min", "0"], "--nc-min"),
    (["optimal", "--nc-min", "5", "--nc-max", "3"], "--nc-max"),
])
def test_validation_exit_2(argv, flag, capsys, tmp_path):
    with pytest.raises(SystemExit) as exc:
        main(argv + ["--out", str(tmp_path)])
    assert exc.value.code == 2
    assert flag in capsys.readouterr().err
    assert list(tmp_path.iterdir()) == []


def test_inversion_and_entropy_outputs(tmp_path):
    assert main(["inversion", "--nc", "49", "--ns", "0", "--stop", "10", "--out", str(tmp_path)]) == 0
    assert main(["entropy", "--nc", "49", "--ns", "1", "--stop", "10", "--out", str(tmp_path)]) == 0
    h, rows = read_csv(tmp_path / "inversion_nc49_ns0.csv")
    assert h == ["lambda_t", "W"] and len(rows) == 501
    assert rows[0][0] == 0.0 and rows[0][1] == pytest.approx(-0.5, abs=1e-15) and rows[-1][0] == pytest.approx(10.0)
    h, rows = read_csv(tmp_path / "entropy_nc49_ns1.csv")
    assert h == ["lambda_t", "L"] and rows[0][1] == 0.0


def test_mean_entropy_and_stats(tmp_path):
    assert main(["mean-entropy", "--nc", "9", "--ns", "0,1", "--lambda-T", "50",
                 "--out", str(tmp_path)]) == 0
    h, rows = read_csv(tmp_path / "mean_entropy_nc9.csv")
    assert h == ["N_S", "Lbar"] and [r[0] for r in rows] == [0.0, 1.0]
    assert main(["stats", "--nc", "49", "--ns", "0,1", "--out", str(tmp_path)]) == 0
    h, rows = read_csv(tmp_path / "stats_nc49.csv")
    assert h == ["N_S", "variance", "Q"]
    assert rows[0] == [0.0, 49.0, 0.0]
    assert rows[1][2] == pytest.approx(-0.7519, abs=1e-4)


def test_optimal_output(tmp_path):
    assert main(["optimal", "--nc-min", "48", "--nc-max", "50", "--out", str(tmp_path)]) == 0
    h, rows = read_csv(tmp_path / "optimal_nc48-50.csv")
    assert h == ["N_C", "NS_minVar", "NS_minQ_direct", "NS_eq13_root", "res_eq14", "res_eq13"]
    assert [r[0] for r in rows] == [48, 49, 50]


def test_solver_failure_exit_3_and_rollback(tmp_path, monkeypatch, capsys):
    import squeezejc.optimality as opt
    from squeezejc.numerics import SolverError

    def boom(n_c, tol=opt.DEFAULT_TOL):
        raise SolverError("no sign change", {"lo": 0.0, "hi": n_c})

    monkeypatch.setattr(opt, "solve_min_variance", boom)
    code = main(["figures", "--all", "--out", str(tmp_path)])
    assert code == 3
    err = capsys.readouterr().err
    assert "lo = 0.0" in err
    assert list(tmp_path.iterdir()) == []


def test_plot_script_emitted(tmp_path):
    assert main(["stats", "--nc", "49", "--ns", "0,1", "--format", "csv+plot-script",
                 "--out", str(tmp_path)]) == 0
    gp = (tmp_path / "stats_nc49.gp").read_text()
    assert "stats_nc49.csv" in gp and "separator ','" in gp


def test_workers_env(monkeypatch, tmp_path):
    monkeypatch.setenv("SQUEEZEJC_WORKERS", "3")
    assert parse_config(["dist", "--out", str(tmp_path)]).workers == 3
    assert parse_config(["dist", "--workers", "2", "--out", str(tmp_path)]).workers == 2
