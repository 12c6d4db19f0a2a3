"""Command-line entry point: data ingestion, orchestration, and reports.

Commands: evaluate, sweep, yearend, srgm-fit, dist-rank, adf, gen.

CSV interchange schema: UTF-8, first column ``index`` (consecutive integer
periods), remaining columns non-negative numeric counts, ``#``-prefixed
comment lines ignored; LF or CRLF accepted, LF emitted.

Exit codes: 0 success, 1 validation error (bad flags, missing or malformed
input), 2 runtime error (backend or computation failure).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from .bridge import BridgeClient, default_stub_command
from .errors import (
    InsufficientHistory,
    MissingFile,
    NegativeCount,
    SchemaViolation,
    SpikecastError,
    UnsupportedFormat,
)
from .harness import SplitSpec, lag_sweep, rolling_eval, year_end_table
from .models import ExogenousSpec, ForecasterConfig, ModelKind
from .series import TimeSeries
from .srgm import MEAN_VALUE_KINDS, PARAM_NAMES, SrgmKind, srgm_compare
from .statfit import DistKind, adf_test, cdf_samples, rank_distributions
from .statfit.distributions import ALL_KINDS as ALL_DIST_KINDS
from .synthgen import PatternKind, PatternSpec, SuiteSpec, generate, generate_suite

FM_CMD_ENV = "SPIKECAST_FM_CMD"
FORMATS = ("text", "csv", "json")


@dataclass
class RunConfig:
    """Validated invocation: one command plus its inputs and flags."""

    command: str
    input_path: str | None = None
    output_path: str | None = None
    output_format: str = "text"
    column: str | None = None
    model: str = "pv"
    lag: int = 1
    lags: tuple[int, int] = (1, 12)
    models: tuple[str, ...] = ("pv", "ma", "ar")
    use_log1p: bool = False
    use_floor0: bool = False
    exog_month: bool = False
    freeze_month: int | None = None
    fm_cmd: str | None = None
    fm_addr: str | None = None
    fm_freq: int = 0
    split: tuple[int, int, int] | None = None
    seed: int = 0
    length: int = 84
    pattern: str | None = None
    max_lag: int | None = None
    kinds: tuple[str, ...] | None = None


@dataclass(frozen=True)
class Report:
    """A format-agnostic table: title, columns, rows, and metadata."""

    title: str
    columns: tuple[str, ...]
    rows: tuple[tuple, ...]
    meta: dict = field(default_factory=dict)


# --- CSV ingestion ---------------------------------------------------------


def parse_series_csv(path: str | Path) -> list[TimeSeries]:
    """Read the interchange CSV into one series per value column."""
    path = Path(path)
    if not path.is_file():
        raise MissingFile(f"input file does not exist: {path}")
    with path.open("r", encoding="utf-8", newline="") as handle:
        raw_rows = [
            (lineno, row)
            for lineno, row in enumerate(csv.reader(handle), start=1)
            if row and not row[0].lstrip().startswith("#")
        ]
    if not raw_rows:
        raise SchemaViolation(f"{path}: no header row found")
    header_line, header = raw_rows[0]
    header = [cell.strip() for cell in header]
    if not header or header[0] != "index":
        raise SchemaViolation(
            f"{path}:{header_line}: first column must be named 'index'"
        )
    if len(header) < 2:
        raise SchemaViolation(f"{path}:{header_line}: no value columns")
    labels = header[1:]
    columns: list[list[float]] = [[] for _ in labels]
    expected_index: int | None = None
    start_index = 0
    for lineno, row in raw_rows[1:]:
        if len(row) != len(header):
            raise SchemaViolation(
                f"{path}:{lineno}: expected {len(header)} columns, got {len(row)}"
            )
        try:
            idx = int(row[0].strip())
        except ValueError:
            raise SchemaViolation(
                f"{path}:{lineno}: index column must be an integer, got {row[0]!r}"
            ) from None
        if expected_index is None:
            start_index = idx
        elif idx != expected_index:
            raise SchemaViolation(
                f"{path}:{lineno}: index {idx} is not consecutive "
                f"(expected {expected_index})"
            )
        expected_index = idx + 1
        for col, cell in enumerate(row[1:], start=1):
            try:
                value = float(cell.strip())
            except ValueError:
                raise SchemaViolation(
                    f"{path}:{lineno}: column {header[col]!r} has non-numeric "
                    f"value {cell!r}"
                ) from None
            if value < 0:
                raise NegativeCount(
                    f"{path}:{lineno}: column {header[col]!r} has negative "
                    f"count {value}"
                )
            columns[col - 1].append(value)
    if not columns[0]:
        raise SchemaViolation(f"{path}: no data rows")
    return [
        TimeSeries(values=tuple(col), start_index=start_index, label=label)
        for label, col in zip(labels, columns)
    ]


def select_series(series_list: list[TimeSeries], column: str | None) -> TimeSeries:
    if column is None:
        return series_list[0]
    for series in series_list:
        if series.label == column:
            return series
    available = ", ".join(s.label for s in series_list)
    raise SchemaViolation(f"no column named {column!r}; available: {available}")


# --- rendering ---------------------------------------------------------------


def _cell_text(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _cell_display(value) -> str:
    if value is None:
        return "-"
    if isinstance(value, float):
        return format(value, ".6g")
    return str(value)


def render_report(report: Report, output_format: str) -> str:
    """Render deterministically as aligned text, RFC-4180 CSV, or JSON."""
    if output_format == "text":
        return _render_text(report)
    if output_format == "csv":
        return _render_csv(report)
    if output_format == "json":
        return _render_json(report)
    raise UnsupportedFormat(f"unsupported report format {output_format!r}")


def _render_text(report: Report) -> str:
    lines = [f"# {report.title}"]
    for key, value in report.meta.items():
        lines.append(f"# {key}: {_cell_display(value)}")
    table = [list(report.columns)] + [
        [_cell_display(v) for v in row] for row in report.rows
    ]
    widths = [
        max(len(table_row[c]) for table_row in table) for c in range(len(report.columns))
    ]
    for table_row in table:
        lines.append("  ".join(cell.ljust(w) for cell, w in zip(table_row, widths)).rstrip())
    return "\n".join(lines) + "\n"


def _render_csv(report: Report) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(report.columns)
    for row in report.rows:
        writer.writerow([_cell_text(v) for v in row])
    return buffer.getvalue()


def _render_json(report: Report) -> str:
    payload = {
        "title": report.title,
        "columns": list(report.columns),
        "rows": [list(row) for row in report.rows],
        "meta": report.meta,
    }
    return json.dumps(payload, indent=2, allow_nan=False) + "\n"


def report_from_json(text: str) -> Report:
    """Parse a JSON rendering back into a structurally equal report."""
    payload = json.loads(text)
    return Report(
        title=payload["title"],
        columns=tuple(payload["columns"]),
        rows=tuple(tuple(row) for row in payload["rows"]),
        meta=payload["meta"],
    )


# --- command implementations -------------------------------------------------


def _forecaster_config(config: RunConfig) -> ForecasterConfig:
    exog = None
    if config.exog_month or config.freeze_month is not None:
        exog = ExogenousSpec(
            month_of_year=config.exog_month,
            code_freeze_month=config.freeze_month,
        )
    return ForecasterConfig(
        kind=ModelKind(config.model),
        lag=config.lag,
        use_log1p=config.use_log1p,
        use_floor0=config.use_floor0,
        exogenous=exog,
        fm_freq=config.fm_freq,
    )


def _split_for(config: RunConfig, length: int, min_train: int = 12) -> SplitSpec:
    """Default split: first year for training, everything after it for test."""
    try:
        if config.split is not None:
            split = SplitSpec(*config.split)
        else:
            train_end = min(max(12, min_train), max(1, length - 1))
            split = SplitSpec(
                train_end=train_end, validation_end=train_end, test_end=length
            )
        split.check(length)
    except ValueError as exc:
        raise SchemaViolation(f"unusable split for a series of length {length}: {exc}")
    return split


def _needs_backend(config: RunConfig) -> bool:
    if config.command in ("evaluate", "yearend"):
        return config.model == "fm"
    if config.command == "sweep":
        return "fm" in config.models
    return False


def _open_backend(config: RunConfig) -> BridgeClient | None:
    if not _needs_backend(config):
        return None
    if config.fm_addr:
        return BridgeClient.connect(config.fm_addr)
    command = config.fm_cmd or os.environ.get(FM_CMD_ENV) or default_stub_command()
    return BridgeClient.spawn(command)


def _cmd_evaluate(config: RunConfig, backend: BridgeClient | None) -> Report:
    series = select_series(parse_series_csv(config.input_path), config.column)
    fc = _forecaster_config(config)
    split = _split_for(config, len(series))
    result = rolling_eval(series, fc, split, backend)
    rows = tuple(
        (step.index, step.actual, step.predicted) for step in result.per_step
    )
    meta = {
        "label": series.label,
        "model": config.model,
        "lag": fc.lag,
        "nmae": result.metrics.mae,
        "nmse": result.metrics.mse,
        "nrmse": result.metrics.rmse,
        "mape": result.metrics.mape,
        "sum_error_pct": result.metrics.sum_error_pct,
    }
    return Report(
        title="rolling one-step evaluation",
        columns=("index", "actual", "predicted"),
        rows=rows,
        meta=meta,
    )


def _cmd_sweep(config: RunConfig, backend: BridgeClient | None) -> Report:
    series = select_series(parse_series_csv(config.input_path), config.column)
    lo, hi = config.lags
    # an AR cell with the largest lag needs 2*lag+1 observations of history
    min_train = (2 * hi + 1) if "ar" in config.models else hi
    split = _split_for(config, len(series), min_train=min_train)
    kinds = [ModelKind(name) for name in config.models]
    report = lag_sweep(
        series,
        kinds,
        range(lo, hi + 1),
        split,
        fm_backend=backend,
        use_log1p=config.use_log1p,
        use_floor0=config.use_floor0,
        fm_freq=config.fm_freq,
    )
    rows = tuple(
        (row.kind.value, row.lag, row.mae, row.mse, row.rmse) for row in report.rows
    )
    meta = {"label": series.label}
    for metric, (kind, lag) in report.best.items():
        meta[f"best_{metric}"] = f"{kind.value}({lag})"
    for i, notice in enumerate(report.notices):
        meta[f"notice_{i}"] = notice
    return Report(
        title="normalized prediction errors by model and lag",
        columns=("model", "lag", "nmae", "nmse", "nrmse"),
        rows=rows,
        meta=meta,
    )


def _format_error_pct(error_pct: float) -> str:
    return f"{round(error_pct * 100)}%"


def _cmd_yearend(config: RunConfig, backend: BridgeClient | None) -> Report:
    series = select_series(parse_series_csv(config.input_path), config.column)
    fc = _forecaster_config(config)
    if len(series) < 13:
        raise InsufficientHistory(
            f"year-end estimation needs at least 13 observations "
            f"(12-month window plus history), got {len(series)}"
        )
    window = range(len(series) - 12, len(series))
    table = year_end_table(series, fc, window, backend)
    month_cols = tuple(str(b) for b in range(1, 13))
    rows = [
        ("0", *table.actual_values, table.actual_total, "0%"),
    ]
    for row in table.rows:
        rows.append(
            (
                str(row.months_ahead),
                *row.values,
                row.total,
                _format_error_pct(row.error_pct),
            )
        )
    return Report(
        title=f"year-end estimation with {config.model}({fc.lag})",
        columns=("A", *month_cols, "sum", "error_pct"),
        rows=tuple(rows),
        meta={"label": series.label, "model": config.model, "lag": fc.lag},
    )


def _cmd_srgm_fit(config: RunConfig) -> Report:
    series = select_series(parse_series_csv(config.input_path), config.column)
    cumulative = []
    total = 0.0
    for offset, value in enumerate(series.values):
        total += value
        cumulative.append((float(offset + 1), total))
    if config.kinds is None:
        kinds = list(MEAN_VALUE_KINDS)
    else:
        kinds = [SrgmKind(name) for name in config.kinds]
    results = srgm_compare(cumulative, kinds)
    rows = tuple(
        (
            result.kind.value,
            "; ".join(
                f"{name}={value:.6g}"
                for name, value in zip(PARAM_NAMES[result.kind], result.params.values)
            ),
            result.sse,
            result.iterations,
            result.converged,
        )
        for result in results
    )
    return Report(
        title="reliability growth model fits (ascending SSE)",
        columns=("kind", "parameters", "sse", "iterations", "converged"),
        rows=rows,
        meta={"label": series.label, "points": len(cumulative)},
    )


def _cmd_dist_rank(config: RunConfig) -> Report:
    series = select_series(parse_series_csv(config.input_path), config.column)
    samples = cdf_samples(series)
    if config.kinds is None:
        kinds = list(ALL_DIST_KINDS)
    else:
        kinds = [DistKind(name) for name in config.kinds]
    ranking = rank_distributions(samples, kinds)
    rows = tuple(
        (
            entry.kind.value,
            entry.ks.p_value,
            entry.ks.d_stat,
            ", ".join(f"{v:.6g}" for v in entry.params.flat())
            if entry.params is not None
            else None,
            entry.note,
        )
        for entry in ranking.entries
    )
    return Report(
        title="distribution fits ranked by K-S p-value",
        columns=("distribution", "p_value", "d_stat", "parameters", "note"),
        rows=rows,
        meta={"label": series.label, "samples": len(samples)},
    )


def _cmd_adf(config: RunConfig) -> Report:
    series = select_series(parse_series_csv(config.input_path), config.column)
    result = adf_test(series.values, max_lag=config.max_lag)
    verdict = "stationary" if result.p_value < 0.05 else "non-stationary"
    rows = (
        (
            series.label,
            result.statistic,
            result.p_value,
            result.lags_used,
            result.n_obs,
            verdict,
        ),
    )
    return Report(
        title="augmented Dickey-Fuller unit root test",
        columns=("label", "statistic", "p_value", "lags_used", "n_obs", "verdict"),
        rows=rows,
        meta={},
    )


def _cmd_gen(config: RunConfig) -> str:
    """Generate synthetic data and return it as interchange CSV text."""
    if config.pattern is not None:
        spec = PatternSpec(
            kind=PatternKind(config.pattern),
            length=config.length,
            seed=config.seed,
        )
        suite = {spec.kind.value: generate(spec)}
    else:
        suite = generate_suite(SuiteSpec(seed=config.seed, length=config.length))
        total = [
            sum(series.values[i] for series in suite.values())
            for i in range(config.length)
        ]
        suite["total"] = TimeSeries(values=tuple(total), label="total")
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    labels = list(suite)
    writer.writerow(["index"] + labels)
    for i in range(config.length):
        writer.writerow([i] + [_cell_text(suite[label].values[i]) for label in labels])
    return buffer.getvalue()


# --- dispatch ---------------------------------------------------------------


def run(config: RunConfig) -> tuple[int, str]:
    """Execute one command; returns (exit_code, rendered_output)."""
    try:
        if config.command == "gen":
            return 0, _cmd_gen(config)
        backend = _open_backend(config)
        try:
            if config.command == "evaluate":
                report = _cmd_evaluate(config, backend)
            elif config.command == "sweep":
                report = _cmd_sweep(config, backend)
            elif config.command == "yearend":
                report = _cmd_yearend(config, backend)
            elif config.command == "srgm-fit":
                report = _cmd_srgm_fit(config)
            elif config.command == "dist-rank":
                report = _cmd_dist_rank(config)
            elif config.command == "adf":
                report = _cmd_adf(config)
            else:
                raise ValueError(f"unknown command {config.command!r}")
        finally:
            if backend is not None:
                backend.close()
        return 0, render_report(report, config.output_format)
    except SpikecastError as exc:
        return exc.exit_code, f"error: {exc}\n"
    except (ValueError, OSError) as exc:
        return 2, f"error: {exc}\n"


# --- argument parsing ---------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    """argparse with the CLI's validation exit code (1 instead of 2)."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _parse_lags(text: str) -> tuple[int, int]:
    try:
        lo_text, hi_text = text.split("..", 1)
        lo, hi = int(lo_text), int(hi_text)
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"--lags must look like A..B, got {text!r}"
        ) from None
    if not 1 <= lo <= hi:
        raise argparse.ArgumentTypeError(f"--lags range is empty or invalid: {text}")
    return lo, hi


def _parse_split(text: str) -> tuple[int, int, int]:
    parts = text.split(",")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(
            f"--split must be TRAIN,VAL,TEST exclusive end indices, got {text!r}"
        )
    try:
        return tuple(int(p) for p in parts)  # type: ignore[return-value]
    except ValueError:
        raise argparse.ArgumentTypeError(f"--split entries must be integers: {text}") from None


def _parse_csv_list(text: str) -> tuple[str, ...]:
    return tuple(part.strip() for part in text.split(",") if part.strip())


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="spikecast",
        description="Forecasting and reliability analysis for sporadic outage count series.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_io(p: argparse.ArgumentParser, needs_input: bool = True):
        if needs_input:
            p.add_argument("input", metavar="INPUT.csv", help="interchange CSV file")
            p.add_argument("--column", help="value column label (default: first column)")
        p.add_argument("--out", dest="output_path", help="output file (default: stdout)")
        p.add_argument(
            "--format",
            dest="output_format",
            choices=FORMATS,
            default="text",
            help="report format",
        )

    def add_model(p: argparse.ArgumentParser):
        p.add_argument("--model", choices=[k.value for k in ModelKind], default="pv")
        p.add_argument("--lag", type=int, default=1)
        p.add_argument("--log1p", dest="use_log1p", action="store_true")
        p.add_argument("--floor0", dest="use_floor0", action="store_true")
        p.add_argument("--exog-month", dest="exog_month", action="store_true")
        p.add_argument("--freeze-month", dest="freeze_month", type=int, metavar="M")
        add_fm(p)

    def add_fm(p: argparse.ArgumentParser):
        p.add_argument("--fm-cmd", dest="fm_cmd", metavar="CMD")
        p.add_argument("--fm-addr", dest="fm_addr", metavar="HOST:PORT")
        p.add_argument("--fm-freq", dest="fm_freq", type=int, choices=(0, 1), default=0)

    p_eval = sub.add_parser("evaluate", help="rolling one-step backtest of one model")
    add_io(p_eval)
    add_model(p_eval)
    p_eval.add_argument("--split", type=_parse_split, metavar="TRAIN,VAL,TEST")

    p_sweep = sub.add_parser("sweep", help="model-by-lag error table")
    add_io(p_sweep)
    p_sweep.add_argument(
        "--models",
        type=_parse_csv_list,
        default=("pv", "ma", "ar"),
        metavar="pv,ma,ar[,fm]",
    )
    p_sweep.add_argument("--lags", type=_parse_lags, default=(1, 12), metavar="A..B")
    p_sweep.add_argument("--log1p", dest="use_log1p", action="store_true")
    p_sweep.add_argument("--floor0", dest="use_floor0", action="store_true")
    p_sweep.add_argument("--split", type=_parse_split, metavar="TRAIN,VAL,TEST")
    add_fm(p_sweep)

    p_year = sub.add_parser("yearend", help="fiscal-year-end estimation table")
    add_io(p_year)
    add_model(p_year)

    p_srgm = sub.add_parser("srgm-fit", help="fit reliability growth models")
    add_io(p_srgm)
    p_srgm.add_argument(
        "--kinds",
        type=_parse_csv_list,
        metavar=",".join(k.value for k in MEAN_VALUE_KINDS[:2]) + ",...",
    )

    p_dist = sub.add_parser("dist-rank", help="rank distribution fits by K-S p-value")
    add_io(p_dist)
    p_dist.add_argument("--kinds", type=_parse_csv_list, metavar="beta,uniform,...")

    p_adf = sub.add_parser("adf", help="augmented Dickey-Fuller stationarity test")
    add_io(p_adf)
    p_adf.add_argument("--max-lag", dest="max_lag", type=int)

    p_gen = sub.add_parser("gen", help="generate the synthetic root-cause suite (CSV)")
    add_io(p_gen, needs_input=False)
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("--length", type=int, default=84)
    p_gen.add_argument(
        "--pattern",
        choices=[k.value for k in PatternKind],
        help="emit a single pattern instead of the eight-category suite",
    )
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    config = RunConfig(command=args.command)
    for name in vars(config):
        if name == "command":
            continue
        if hasattr(args, name):
            setattr(config, name, getattr(args, name))
    if hasattr(args, "input"):
        config.input_path = args.input
    if config.freeze_month is not None and not 1 <= config.freeze_month <= 12:
        raise SchemaViolation(f"--freeze-month must be in 1..12, got {config.freeze_month}")
    return config


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = config_from_args(args)
    except SpikecastError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    code, text = run(config)
    if code != 0:
        sys.stderr.write(text)
        return code
    if config.output_path:
        Path(config.output_path).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
