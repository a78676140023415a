"""Command-line runner that writes every computed quantity as CSV.

    squeezejc dist --nc 49 --ns 0,1,2,5,10 --out results/
    squeezejc mean-entropy --nc 49 --ns 0,0.5,1,1.5,2,5,10 --lambda-T 1000
    squeezejc figures --all --out figures/

Exit codes: 0 success, 2 invalid flags, 3 solver failure. Files written by
a failing run are removed.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from . import dynamics, fields, optimality
from .fields import TruncationError
from .numerics import DomainError, SolverError

WORKERS_ENV = "SQUEEZEJC_WORKERS"

PAPER_NC = (49.0, 100.0)
PAPER_NS = (0.0, 1.0, 2.0, 5.0, 10.0)
MEAN_ENTROPY_NS = (0.0, 0.5, 1.0, 1.5, 2.0, 5.0, 10.0)
SERIES_STOP = 120.0
LONG_STOP = 1000.0


@dataclass
class RunConfig:
    subcommand: str
    out: Path
    n_c: float = 49.0
    n_s: list = field(default_factory=lambda: list(PAPER_NS))
    stop: float = SERIES_STOP
    step: float = dynamics.SERIES_STEP
    tail_tol: float = fields.DEFAULT_TAIL_TOL
    lambda_T: float = 1000.0
    avg_step: float = dynamics.AVERAGE_STEP
    nc_min: int = 1
    nc_max: int = 100
    tol: float = optimality.DEFAULT_TOL
    fmt: str = "csv"
    workers: int = 1


# -- CSV ----------------------------------------------------------------------


def format_value(x) -> str:
    """Integers verbatim; floats as the shortest round-trip digits in scientific form."""
    if isinstance(x, (bool, np.bool_)):
        return str(int(x))
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if x is None:
        return "nan"
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    s = np.format_float_scientific(x, unique=True, trim="-", exp_digits=1)
    return s.replace("e+", "e")


def emit_csv(path: Path, header: Sequence[str], rows: Iterable[Sequence]) -> Path:
    """Write a header line and rows, LF-terminated, UTF-8."""
    path = Path(path)
    width = len(header)
    lines = [",".join(header)]
    for row in rows:
        if len(row) != width:
            raise ValueError(f"{path}: row of length {len(row)} under a {width}-column header")
        lines.append(",".join(format_value(v) for v in row))
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("\n".join(lines) + "\n")
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc}") from exc
    return path


def _label(x: float) -> str:
    return f"{x:g}"


class _Outputs:
    def __init__(self, config: RunConfig):
        self.config = config
        self.written: list[Path] = []

    def csv(self, name: str, header, rows, xlabel=None, ylabel=None):
        path = emit_csv(self.config.out / name, header, rows)
        self.written.append(path)
        if self.config.fmt == "csv+plot-script":
            self.written.append(_plot_script(path, header, xlabel, ylabel))
        return path

    def rollback(self):
        for p in reversed(self.written):
            try:
                p.unlink()
            except FileNotFoundError:
                pass


def _plot_script(csv_path: Path, header, xlabel, ylabel) -> Path:
    gp = csv_path.with_suffix(".gp")
    ycols = range(2, len(header) + 1)
    plots = ", ".join(f"'{csv_path.name}' using 1:{k} with lines title '{header[k - 1]}'" for k in ycols)
    text = (
        "set datafile separator ','\n"
        f"set key autotitle columnhead\n"
        f"set xlabel '{xlabel or header[0]}'\n"
        f"set ylabel '{ylabel or ''}'\n"
        f"plot {plots}\n"
    )
    with open(gp, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
    return gp


# -- computations -------------------------------------------------------------


def _pmap(fn, items, workers: int):
    items = list(items)
    if workers > 1 and len(items) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(fn, items))
    return [fn(x) for x in items]


def _amps(cfg: RunConfig, n_c: float, n_s: float):
    return fields.amplitudes(fields.params_from_means(n_c, n_s), cfg.tail_tol)


def run_dist(cfg: RunConfig, out: _Outputs, n_c=None):
    n_c = cfg.n_c if n_c is None else n_c
    dists = _pmap(lambda ns: fields.photon_distribution(_amps(cfg, n_c, ns)), cfg.n_s, cfg.workers)
    for ns, P in zip(cfg.n_s, dists):
        out.csv(f"dist_nc{_label(n_c)}_ns{_label(ns)}.csv", ("n", "P"),
                ((n, p) for n, p in enumerate(P)), ylabel="P(n)")


def _series_rows(ts: dynamics.TimeSeries):
    return zip(ts.grid, ts.values)


def run_inversion(cfg: RunConfig, out: _Outputs, n_c=None):
    n_c = cfg.n_c if n_c is None else n_c

    def one(ns):
        P = fields.photon_distribution(_amps(cfg, n_c, ns))
        return dynamics.inversion(P, 0.0, cfg.step, stop=cfg.stop, workers=cfg.workers)

    for ns, ts in zip(cfg.n_s, _pmap(one, cfg.n_s, cfg.workers)):
        out.csv(f"inversion_nc{_label(n_c)}_ns{_label(ns)}.csv", ("lambda_t", "W"),
                _series_rows(ts), ylabel="W")


def run_entropy(cfg: RunConfig, out: _Outputs, n_c=None, prefix="entropy"):
    n_c = cfg.n_c if n_c is None else n_c

    def one(ns):
        return dynamics.entropy_series(_amps(cfg, n_c, ns), 0.0, cfg.step, stop=cfg.stop,
                                       workers=cfg.workers)

    for ns, ts in zip(cfg.n_s, _pmap(one, cfg.n_s, cfg.workers)):
        out.csv(f"{prefix}_nc{_label(n_c)}_ns{_label(ns)}.csv", ("lambda_t", "L"),
                _series_rows(ts), ylabel="L")


def run_mean_entropy(cfg: RunConfig, out: _Outputs, n_c=None):
    n_c = cfg.n_c if n_c is None else n_c
    values = _pmap(
        lambda ns: dynamics.mean_linear_entropy(_amps(cfg, n_c, ns), cfg.lambda_T, cfg.avg_step,
                                                workers=cfg.workers),
        cfg.n_s, cfg.workers,
    )
    out.csv(f"mean_entropy_nc{_label(n_c)}.csv", ("N_S", "Lbar"), zip(cfg.n_s, values),
            ylabel="mean linear entropy")


def run_stats(cfg: RunConfig, out: _Outputs, n_c=None):
    n_c = cfg.n_c if n_c is None else n_c
    rows = [(ns, fields.photon_variance(n_c, ns), fields.mandel_q(n_c, ns)) for ns in cfg.n_s]
    out.csv(f"stats_nc{_label(n_c)}.csv", ("N_S", "variance", "Q"), rows)


def run_optimal(cfg: RunConfig, out: _Outputs):
    reports = optimality.scan_optimal(cfg.nc_min, cfg.nc_max, cfg.tol, workers=cfg.workers)
    failed = [r for r in reports if not r.ok]
    if failed:
        r = failed[0]
        raise SolverError(f"optimal scan failed at N_C={r.n_c}: {r.error}", r.diagnostics)
    rows = [
        (int(r.n_c), r.ns_min_variance, r.ns_min_q_direct, r.ns_eq13_root, r.res_eq14, r.res_eq13)
        for r in reports
    ]
    out.csv(
        f"optimal_nc{cfg.nc_min}-{cfg.nc_max}.csv",
        ("N_C", "NS_minVar", "NS_minQ_direct", "NS_eq13_root", "res_eq14", "res_eq13"),
        rows, ylabel="optimal N_S",
    )


def run_figures(cfg: RunConfig, out: _Outputs):
    base = dict(vars(cfg))
    for n_c in PAPER_NC:
        series = RunConfig(**{**base, "n_c": n_c, "n_s": list(PAPER_NS),
                              "stop": SERIES_STOP, "step": dynamics.SERIES_STEP})
        run_dist(series, out)
        run_inversion(series, out)
        run_entropy(series, out)
        avg = RunConfig(**{**base, "n_c": n_c, "n_s": list(MEAN_ENTROPY_NS),
                           "lambda_T": 1000.0, "avg_step": dynamics.AVERAGE_STEP})
        run_mean_entropy(avg, out)
        stats = RunConfig(**{**base, "n_c": n_c,
                             "n_s": [round(0.1 * k, 10) for k in range(101)]})
        run_stats(stats, out)
    long = RunConfig(**{**base, "n_c": 49.0, "n_s": list(PAPER_NS), "stop": LONG_STOP,
                        "step": dynamics.AVERAGE_STEP})
    run_entropy(long, out, prefix="entropy_long")
    run_optimal(RunConfig(**{**base, "nc_min": 1, "nc_max": 100}), out)


RUNNERS = {
    "dist": run_dist,
    "inversion": run_inversion,
    "entropy": run_entropy,
    "mean-entropy": run_mean_entropy,
    "stats": run_stats,
    "optimal": run_optimal,
    "figures": run_figures,
}


# -- argument parsing ---------------------------------------------------------


def _finite(text: str) -> float:
    try:
        x = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not math.isfinite(x):
        raise argparse.ArgumentTypeError(f"must be finite, got {text!r}")
    return x


def _nonneg(text: str) -> float:
    x = _finite(text)
    if x < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {text!r}")
    return x


def _positive(text: str) -> float:
    x = _finite(text)
    if not x > 0:
        raise argparse.ArgumentTypeError(f"must be > 0, got {text!r}")
    return x


def _unit_open(text: str) -> float:
    x = _finite(text)
    if not 0 < x < 1:
        raise argparse.ArgumentTypeError(f"must lie in (0, 1), got {text!r}")
    return x


def _avg_step(text: str) -> float:
    x = _positive(text)
    if x > dynamics.MAX_AVERAGE_STEP:
        raise argparse.ArgumentTypeError(
            f"must be <= {dynamics.MAX_AVERAGE_STEP} to resolve the Rabi frequencies, got {text!r}"
        )
    return x


def _ns_list(text: str) -> list:
    parts = [p for p in text.split(",") if p.strip()]
    if not parts:
        raise argparse.ArgumentTypeError("needs at least one value")
    return [_nonneg(p.strip()) for p in parts]


def _pos_int(text: str) -> int:
    try:
        k = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if k < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {text!r}")
    return k


def _default_workers() -> int:
    raw = os.environ.get(WORKERS_ENV, "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="squeezejc",
        description="Jaynes-Cummings dynamics with squeezed coherent light; results as CSV.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", type=Path, default=Path("."), help="output directory")
    common.add_argument("--tail-tol", type=_unit_open, default=fields.DEFAULT_TAIL_TOL,
                        help="discarded photon-number probability (default 1e-12)")
    common.add_argument("--format", dest="fmt", choices=("csv", "csv+plot-script"), default="csv")
    common.add_argument("--workers", type=_pos_int, default=None,
                        help=f"worker threads (default ${WORKERS_ENV} or 1)")

    field_args = argparse.ArgumentParser(add_help=False)
    field_args.add_argument("--nc", dest="n_c", type=_nonneg, default=49.0,
                            help="mean coherent photon number")
    field_args.add_argument("--ns", dest="n_s", type=_ns_list, default=list(PAPER_NS),
                            help="comma-separated mean squeezed photon numbers")

    series = argparse.ArgumentParser(add_help=False)
    series.add_argument("--stop", type=_positive, default=SERIES_STOP, help="final lambda*t")
    series.add_argument("--step", type=_positive, default=dynamics.SERIES_STEP,
                        help="lambda*t grid spacing")

    sub = parser.add_subparsers(dest="subcommand", required=True)
    sub.add_parser("dist", parents=[common, field_args], help="photon-number distributions")
    sub.add_parser("inversion", parents=[common, field_args, series], help="atomic inversion W")
    sub.add_parser("entropy", parents=[common, field_args, series], help="linear entropy L")
    p = sub.add_parser("mean-entropy", parents=[common, field_args],
                       help="time-averaged linear entropy per N_S")
    p.add_argument("--lambda-T", dest="lambda_T", type=_positive, default=1000.0)
    p.add_argument("--step", dest="avg_step", type=_avg_step, default=dynamics.AVERAGE_STEP)
    sub.add_parser("stats", parents=[common, field_args], help="variance and Mandel Q per N_S")
    p = sub.add_parser("optimal", parents=[common], help="minimum-variance / minimum-Q scan")
    p.add_argument("--nc-min", type=_pos_int, default=1)
    p.add_argument("--nc-max", type=_pos_int, default=100)
    p.add_argument("--tol", type=_positive, default=optimality.DEFAULT_TOL)
    p = sub.add_parser("figures", parents=[common], help="all outputs with the standard parameter sets")
    p.add_argument("--all", action="store_true", required=True)
    return parser


def parse_config(argv=None) -> RunConfig:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.subcommand == "optimal" and args.nc_min > args.nc_max:
        parser.error(f"argument --nc-max: must be >= --nc-min ({args.nc_min}), got {args.nc_max}")
    values = {k: v for k, v in vars(args).items() if k in RunConfig.__dataclass_fields__}
    values.pop("all", None)
    if values.get("workers") is None:
        values["workers"] = _default_workers()
    return RunConfig(**values)


def run(cfg: RunConfig) -> int:
    try:
        cfg.out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        print(f"squeezejc: cannot create output directory {cfg.out}: {exc}", file=sys.stderr)
        return 2
    out = _Outputs(cfg)
    try:
        RUNNERS[cfg.subcommand](cfg, out)
    except (SolverError, TruncationError) as exc:
        out.rollback()
        print(f"squeezejc: solver failure: {exc}", file=sys.stderr)
        diag = getattr(exc, "diagnostics", None)
        if diag:
            for k, v in diag.items():
                if k != "scan":
                    print(f"  {k} = {v}", file=sys.stderr)
        return 3
    except (DomainError, ArithmeticError) as exc:
        out.rollback()
        print(f"squeezejc: {exc}", file=sys.stderr)
        return 2
    except BaseException:
        out.rollback()
        raise
    return 0


def main(argv=None) -> int:
    cfg = parse_config(argv)
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
