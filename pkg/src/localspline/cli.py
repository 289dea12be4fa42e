"""Command-line front end.

Reads ``y,f`` samples as CSV and writes CSV.  ``--emit`` selects what is
written: interpolated values (optionally with derivative columns), the
molecule coefficient tables, mesh statistics with per-interval error bounds,
or a convergence table for a built-in test function.

``--mode stream`` reads samples incrementally and writes each sampling
interval's rows once enough samples beyond it are known.  The interpolant
only depends on nearby samples, so each block of rows is computed from a
sliding window of the data and matches batch output bit for bit.
"""

from __future__ import annotations

import argparse
import contextlib
import csv
import io
import math
import os
import sys
from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, TextIO, Tuple

import numpy as np

from . import __version__
from .blend import BlendedSpline, apply_blend, build_blend
from .bounds import interval_bounds, mesh_stats
from .data import HermiteData, divided_difference_derivs
from .errors import InvalidGridError, OrderTooSmallError, SplineError
from .grid import MIN_ORDER, SamplingGrid

EXIT_OK = 0
EXIT_NUMERICAL = 1
EXIT_INPUT = 2

STREAM_BLOCK = 64

TEST_FUNCTIONS = {
    "sin": lambda x, n: np.sin(x + n * np.pi / 2),
    "cos": lambda x, n: np.cos(x + n * np.pi / 2),
    "exp": lambda x, n: np.exp(x),
}


class InputError(Exception):
    """Unreadable or malformed input; maps to exit code 2."""


def fmt(v: float) -> str:
    return "%.17g" % v


@dataclass
class RunConfig:
    order: int = 4
    input: str = "-"
    output: str = "-"
    eval_count: Optional[int] = None
    eval_at: Optional[List[float]] = None
    per_interval: Optional[int] = None
    derivs: str = "auto"
    deriv_columns: int = 0
    mode: str = "batch"
    emit: str = "values"
    function: str = "sin"
    interval: Tuple[float, float] = (0.0, 2 * math.pi)
    sizes: Tuple[int, ...] = (16, 32, 64, 128)


def _parse_row(row: Sequence[str], lineno: int) -> Tuple[float, float]:
    if len(row) != 2:
        raise InputError(f"line {lineno}: expected 2 fields 'y,f', got {len(row)}")
    try:
        y, f = float(row[0]), float(row[1])
    except ValueError:
        raise InputError(f"line {lineno}: non-numeric field in {','.join(row)!r}") from None
    if not (math.isfinite(y) and math.isfinite(f)):
        raise InputError(f"line {lineno}: non-finite value")
    return y, f


def _check_header(row: Sequence[str]) -> None:
    if [c.strip() for c in row] != ["y", "f"]:
        raise InputError(f"line 1: expected header 'y,f', got {','.join(row)!r}")


def parse_samples(text: str) -> Tuple[SamplingGrid, np.ndarray]:
    """Parse ``y,f`` CSV text; rows are sorted by ``y``, duplicates rejected."""
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise InputError("empty input") from None
    _check_header(header)
    rows = []
    for lineno, row in enumerate(reader, start=2):
        if not row or all(not c.strip() for c in row):
            continue
        rows.append((*_parse_row(row, lineno), lineno))
    if len(rows) < 2:
        raise InputError("at least two samples are required")
    rows.sort(key=lambda r: r[0])
    for prev, cur in zip(rows, rows[1:]):
        if cur[0] == prev[0]:
            raise InputError(f"line {max(prev[2], cur[2])}: duplicate y={cur[0]!r}")
    y = np.array([r[0] for r in rows])
    f = np.array([r[1] for r in rows])
    return SamplingGrid(y), f


def parse_derivs(text: str, m: int) -> Tuple[np.ndarray, np.ndarray]:
    """Endpoint derivatives from CSV rows ``end,order,value`` (``end`` is a or b)."""
    reader = csv.reader(io.StringIO(text))
    got = {}
    for lineno, row in enumerate(reader, start=1):
        if not row or [c.strip() for c in row] == ["end", "order", "value"]:
            continue
        if len(row) != 3 or row[0].strip() not in ("a", "b"):
            raise InputError(f"derivatives line {lineno}: expected 'a|b,order,value'")
        try:
            order, value = int(row[1]), float(row[2])
        except ValueError:
            raise InputError(f"derivatives line {lineno}: malformed number") from None
        got[(row[0].strip(), order)] = value
    missing = [f"{e}{l}" for e in "ab" for l in range(1, m) if (e, l) not in got]
    if missing:
        raise InputError(f"derivatives file lacks orders {', '.join(missing)}")
    da = np.array([got[("a", l)] for l in range(1, m)])
    db = np.array([got[("b", l)] for l in range(1, m)])
    return da, db


def _read(path: str) -> str:
    try:
        if path == "-":
            return sys.stdin.read()
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def per_interval_points(y: np.ndarray, i: int, K: int) -> np.ndarray:
    """``K`` equispaced points of ``[y_i, y_{i+1})``."""
    h = y[i + 1] - y[i]
    return np.array([y[i] + h * (k / K) for k in range(K)])


def _value_rows(s: BlendedSpline, xs: np.ndarray, ncols: int) -> List[str]:
    cols = [s(xs)] + [s.derivative(xs, n) for n in range(1, ncols + 1)]
    return [",".join(fmt(v) for v in (x, *(c[p] for c in cols))) for p, x in enumerate(xs)]


def _value_header(ncols: int) -> str:
    return ",".join(["x", "value"] + [f"d{n}" for n in range(1, ncols + 1)])


def _hermite(grid: SamplingGrid, values: np.ndarray, m: int, derivs) -> HermiteData:
    if derivs is None:
        return HermiteData.from_samples(grid, values, m)
    return HermiteData(values, derivs[0], derivs[1])


def _eval_points(cfg: RunConfig, grid: SamplingGrid) -> np.ndarray:
    if cfg.eval_at is not None:
        xs = np.array(cfg.eval_at, dtype=float)
        if np.any((xs < grid.a) | (xs > grid.b)):
            raise InputError(f"--eval-at points must lie in [{grid.a!r}, {grid.b!r}]")
        return xs
    if cfg.eval_count is not None:
        return np.linspace(grid.a, grid.b, cfg.eval_count)
    K = cfg.per_interval or 10
    y = grid.points
    pts = [per_interval_points(y, i, K) for i in range(grid.N)]
    return np.concatenate(pts + [y[-1:]])


def run_values(cfg: RunConfig, grid, values, derivs, out: TextIO) -> None:
    op = build_blend(grid, cfg.order)
    s = apply_blend(op, _hermite(grid, values, cfg.order, derivs))
    out.write(_value_header(cfg.deriv_columns) + "\n")
    for line in _value_rows(s, _eval_points(cfg, grid), cfg.deriv_columns):
        out.write(line + "\n")


def run_coeffs(cfg: RunConfig, grid, out: TextIO) -> None:
    op = build_blend(grid, cfg.order)
    out.write("operator,i,j,basis_index,case,coefficient\n")
    for item, mol in op.quasi.molecules.items():
        first_j = item - grid.N if item > grid.N else 0
        for s, c in enumerate(mol.coefficients):
            out.write(f"Q,{item},{first_j + s},{mol.basis_offset + s},{mol.cases[s]},{fmt(c)}\n")
    for item, mol in op.local.molecules.items():
        for s, c in enumerate(mol.coefficients):
            out.write(f"R,{item},{s},{mol.basis_offset + s},{mol.cases[s]},{fmt(c)}\n")


def run_bounds(cfg: RunConfig, grid, out: TextIO) -> None:
    op = build_blend(grid, cfg.order)
    stats = mesh_stats(grid, op.quasi.x, op.local.refined, cfg.order)
    for key, value in stats.as_dict().items():
        out.write(f"# {key}={fmt(value) if isinstance(value, float) else value}\n")
    out.write("# bound is per unit max|f^(m)| on the interval\n")
    out.write("i,x_left,x_right,case,bound\n")
    for i, lo, hi, region, bound in interval_bounds(stats, op.quasi.x):
        out.write(f"{i},{fmt(lo)},{fmt(hi)},{region},{fmt(bound)}\n")


def convergence_table(cfg: RunConfig) -> List[Tuple[int, float, float, float, float]]:
    """Rows ``(N, epsilon, interior_error, global_error, order)`` for uniform grids."""
    fn = TEST_FUNCTIONS[cfg.function]
    m = cfg.order
    a, b = cfg.interval
    rows = []
    prev = None
    for N in cfg.sizes:
        y = np.linspace(a, b, N + 1)
        data = HermiteData(fn(y, 0), [fn(a, l) for l in range(1, m)], [fn(b, l) for l in range(1, m)])
        op = build_blend(y, m)
        s = apply_blend(op, data)
        x = op.quasi.x
        interior = 0.0
        overall = 0.0
        for i in range(N + 1):
            xs = np.linspace(x[i], x[i + 1], 33)
            e = float(np.max(np.abs(fn(xs, 0) - s(xs))))
            overall = max(overall, e)
            if 2 <= i <= N - m + 1:
                interior = max(interior, e)
        stats = mesh_stats(y, x, op.local.refined, m)
        order = math.nan if prev is None or interior == 0 else math.log(prev[1] / interior) / math.log(prev[0] / stats.epsilon)
        rows.append((N, stats.epsilon, interior, overall, order))
        prev = (stats.epsilon, interior)
    return rows


def run_convergence(cfg: RunConfig, out: TextIO) -> None:
    out.write("N,epsilon,interior_error,global_error,order\n")
    for N, eps, ie, ge, order in convergence_table(cfg):
        out.write(f"{N},{fmt(eps)},{fmt(ie)},{fmt(ge)},{fmt(order)}\n")


def _stream_lines(lines: Iterable[str]):
    """Yield ``(y, f)`` from a ``y,f`` CSV stream, enforcing increasing ``y``."""
    it = iter(lines)
    try:
        first = next(it)
    except StopIteration:
        raise InputError("empty input") from None
    _check_header(next(csv.reader([first])))
    last = None
    for lineno, line in enumerate(it, start=2):
        if not line.strip():
            continue
        y, f = _parse_row(next(csv.reader([line])), lineno)
        if last is not None and y <= last:
            raise InputError(f"line {lineno}: stream input must be strictly increasing in y")
        last = y
        yield y, f


def _window_data(y, f, s, e, m, derivs, is_start, is_end):
    """Data for samples ``s..e``; artificial ends get divided differences."""
    grid = SamplingGrid(y[s : e + 1])
    vals = f[s : e + 1]
    da, db = divided_difference_derivs(grid, vals, m)
    if derivs is not None:
        if is_start:
            da = derivs[0]
        if is_end:
            db = derivs[1]
    return grid, HermiteData(vals, da, db)


def run_stream(cfg: RunConfig, lines: Iterable[str], out: TextIO, derivs=None, block: int = STREAM_BLOCK) -> None:
    """Sliding-window evaluation; writes the same rows as batch ``--per-interval``.

    Interval ``i`` is written once ``y_{i+1+2m}`` has arrived, from a window
    starting at least ``2m`` samples before it.  Window starts are kept at
    even sample indices so the refined knots line up with the full grid.
    """
    m = cfg.order
    K = cfg.per_interval or 10
    margin = 2 * m
    ys: List[float] = []
    fs: List[float] = []
    base = 0  # global index of ys[0]
    done = 0  # sampling intervals already written
    out.write(_value_header(cfg.deriv_columns) + "\n")

    def flush(upto: int, is_end: bool) -> None:
        nonlocal done, base, ys, fs
        y = np.array(ys)
        f = np.array(fs)
        s = max(0, done - margin)
        s -= s % 2
        grid, data = _window_data(y, f, s - base, len(ys) - 1, m, derivs, s == 0, is_end)
        spline = apply_blend(build_blend(grid, m), data)
        for i in range(done, upto):
            for line in _value_rows(spline, per_interval_points(y, i - base, K), cfg.deriv_columns):
                out.write(line + "\n")
        if is_end:
            for line in _value_rows(spline, y[-1:], cfg.deriv_columns):
                out.write(line + "\n")
        out.flush()
        done = upto
        keep = max(0, done - margin)
        keep -= keep % 2
        ys, fs = ys[keep - base :], fs[keep - base :]
        base = keep

    for yv, fv in _stream_lines(lines):
        ys.append(yv)
        fs.append(fv)
        upto = base + len(ys) - 1 - margin  # intervals i < upto have y_{i+1+2m}
        if upto - done >= block:
            flush(upto, False)
    if base + len(ys) < 2:
        raise InputError("at least two samples are required")
    flush(base + len(ys) - 1, True)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="localspline",
        description="Local blended spline interpolation of sampled data.",
    )
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("--order", "-m", type=int, default=4, help="spline order m >= 3 (degree m-1), default 4")
    p.add_argument("--in", dest="input", default="-", help="input CSV with header y,f ('-' for stdin)")
    p.add_argument("--out", dest="output", default="-", help="output CSV path ('-' for stdout)")
    ev = p.add_mutually_exclusive_group()
    ev.add_argument("--eval-count", type=int, help="evaluate at this many equispaced points on [a,b]")
    ev.add_argument("--eval-at", help="comma-separated evaluation points")
    ev.add_argument("--per-interval", type=int, help="points per sampling interval (default 10)")
    p.add_argument("--derivs", default="auto", help="'auto' (divided differences) or a CSV file end,order,value")
    p.add_argument("--deriv-columns", type=int, default=0, help="also write derivatives d1..dK")
    p.add_argument("--mode", choices=("batch", "stream"), default="batch")
    p.add_argument("--emit", choices=("values", "coeffs", "bounds", "convergence"), default="values")
    p.add_argument("--function", choices=sorted(TEST_FUNCTIONS), default="sin", help="convergence test function")
    p.add_argument("--interval", default="0,6.283185307179586", help="convergence interval 'a,b'")
    p.add_argument("--sizes", default="16,32,64,128", help="convergence grid sizes N")
    return p


def _floats(text: str, what: str) -> List[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise InputError(f"{what}: expected comma-separated numbers, got {text!r}") from None


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    cfg = RunConfig(
        order=ns.order,
        input=ns.input,
        output=ns.output,
        eval_count=ns.eval_count,
        per_interval=ns.per_interval,
        derivs=ns.derivs,
        deriv_columns=ns.deriv_columns,
        mode=ns.mode,
        emit=ns.emit,
        function=ns.function,
    )
    if ns.eval_at is not None:
        cfg.eval_at = _floats(ns.eval_at, "--eval-at")
        if not cfg.eval_at:
            raise InputError("--eval-at needs at least one point")
    interval = _floats(ns.interval, "--interval")
    if len(interval) != 2 or not interval[0] < interval[1]:
        raise InputError("--interval must be 'a,b' with a < b")
    cfg.interval = (interval[0], interval[1])
    cfg.sizes = tuple(int(v) for v in _floats(ns.sizes, "--sizes"))
    if cfg.order < MIN_ORDER:
        raise OrderTooSmallError(f"order m={cfg.order} is too small: requires m >= {MIN_ORDER}")
    if cfg.eval_count is not None and cfg.eval_count < 1:
        raise InputError("--eval-count must be positive")
    if cfg.per_interval is not None and cfg.per_interval < 1:
        raise InputError("--per-interval must be positive")
    if not 0 <= cfg.deriv_columns <= cfg.order - 1:
        raise InputError(f"--deriv-columns must lie in 0..{cfg.order - 1}")
    if cfg.mode == "stream" and (cfg.emit != "values" or cfg.eval_count is not None or cfg.eval_at is not None):
        raise InputError("stream mode writes values at --per-interval points only")
    return cfg


def run(cfg: RunConfig, stdin: TextIO = None, stdout: TextIO = None) -> None:
    stdin = stdin or sys.stdin
    stdout = stdout or sys.stdout
    derivs = None
    if cfg.derivs != "auto" and cfg.emit == "values":
        derivs = parse_derivs(_read(cfg.derivs), cfg.order)
    if cfg.mode == "stream":
        with _sink(cfg.output, stdout) as out, _source(cfg.input, stdin) as src:
            run_stream(cfg, src, out, derivs)
        return
    buf = io.StringIO()
    if cfg.emit == "convergence":
        run_convergence(cfg, buf)
    else:
        grid, values = parse_samples(_read(cfg.input) if cfg.input != "-" else stdin.read())
        if cfg.emit == "values":
            run_values(cfg, grid, values, derivs, buf)
        elif cfg.emit == "coeffs":
            run_coeffs(cfg, grid, buf)
        else:
            run_bounds(cfg, grid, buf)
    with _sink(cfg.output, stdout) as out:
        out.write(buf.getvalue())


@contextlib.contextmanager
def _source(path: str, stdin: TextIO):
    if path == "-":
        yield stdin
        return
    try:
        fh = open(path, encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    with fh:
        yield fh


@contextlib.contextmanager
def _sink(path: str, stdout: TextIO):
    if path == "-":
        yield stdout
        return
    try:
        fh = open(path, "w", encoding="utf-8", newline="\n")
    except OSError as exc:
        raise InputError(f"cannot write {path}: {exc.strerror}") from None
    with fh:
        yield fh


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        cfg = config_from_args(ns)
        run(cfg)
        sys.stdout.flush()
    except (InputError, InvalidGridError, OrderTooSmallError) as exc:
        print(f"localspline: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except SplineError as exc:
        print(f"localspline: error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except BrokenPipeError:
        # reader went away (e.g. piped into head); silence the final flush
        sys.stdout = open(os.devnull, "w")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
