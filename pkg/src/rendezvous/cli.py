"""Command-line interface.

Data goes to stdout as a table, CSV (header row first) or a single JSON
array; diagnostics go to stderr. Floats are printed with 12 significant
digits. Wall-clock times are only emitted with ``--timing`` so that a
repeated command with the same seed produces byte-identical output.

Exit status: 0 on success, 2 for usage or input errors, 1 when a
computation fails.
"""

from __future__ import annotations

import csv
import io
import json
import math
import time
from contextlib import contextmanager
from dataclasses import asdict, dataclass, field
from pathlib import Path

import click
import numpy as np

from .analysis import (
    conjecture1_experiment,
    conjecture2_check,
    proposition1_pipeline,
    ratio_spread,
    scaling_study,
)
from .graphs import (
    GraphError,
    GraphGenerationError,
    RegularGraph,
    build_circle,
    build_complete,
    build_torus,
    random_regular,
    read_graph,
)
from .linalg import LinAlgError
from .meeting import (
    MeetingError,
    absorbing_meeting_time,
    circle_spectral_meeting_time,
    relative_meeting_time,
    spectral_meeting_time,
    torus_spectral_meeting_time,
)
from .montecarlo import DEFAULT_MAX_STEPS, McConfig, simulate_meeting
from .walks import (
    CircleWalk,
    SimpleWalk,
    TorusWalk,
    WalkError,
    describe_walk,
    laplacian,
    relative_chain_for,
    transition_matrix,
)

SEED_ENV = "RENDEZVOUS_SEED"
RECORD_COLUMNS = ["method", "graph", "walk", "value", "max_pairwise_discrepancy",
                  "seed", "wall_time", "diagnostics"]
SCALING_COLUMNS = ["N", "e_tau", "normalizer", "ratio", "wall_time"]
CONJ1_COLUMNS = ["n", "d", "index", "graph_seed", "mc_seed", "spectral", "exact",
                 "discrepancy", "mc_mean", "mc_half_width", "mc_stderr", "mc_covered",
                 "truncated", "error"]
CONJ2_COLUMNS = ["graph", "status", "a", "b", "c", "d", "e", "spectral", "exact",
                 "basis_sum", "pair_system_residual", "witness"]


@dataclass
class OutputRecord:
    method: str
    graph: str
    walk: str
    value: float
    diagnostics: dict = field(default_factory=dict)
    seed: int | None = None
    wall_time: float | None = None
    max_pairwise_discrepancy: float | None = None


# --------------------------------------------------------------------------
# formatting
# --------------------------------------------------------------------------


def _clean(value):
    """Round floats to 12 significant digits and make everything JSON-native."""
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if not math.isfinite(value):
            return None
        return float(f"{value:.12g}")
    if isinstance(value, dict):
        return {str(k): _clean(v) for k, v in sorted(value.items())}
    if isinstance(value, (list, tuple, np.ndarray)):
        return [_clean(v) for v in value]
    return value


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.12g}"
    if isinstance(value, (dict, list)):
        return json.dumps(value, sort_keys=True, separators=(",", ":"))
    return str(value)


def render(rows: list[dict], columns: list[str], fmt: str) -> str:
    rows = [{c: _clean(r.get(c)) for c in columns} for r in rows]
    if fmt == "json":
        return json.dumps(rows, indent=2) + "\n"
    cells = [[_cell(r[c]) for c in columns] for r in rows]
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(columns)
        writer.writerows(cells)
        return buf.getvalue()
    widths = [max([len(c)] + [len(row[k]) for row in cells]) for k, c in enumerate(columns)]
    lines = ["  ".join(c.ljust(w) for c, w in zip(columns, widths)).rstrip()]
    lines.append("  ".join("-" * w for w in widths))
    lines.extend("  ".join(v.ljust(w) for v, w in zip(row, widths)).rstrip() for row in cells)
    return "\n".join(lines) + "\n"


def _emit(rows: list[dict], columns: list[str], fmt: str) -> None:
    click.echo(render(rows, columns, fmt), nl=False)


@contextmanager
def _computation():
    try:
        yield
    except (MeetingError, LinAlgError, GraphGenerationError, ArithmeticError) as exc:
        raise click.ClickException(str(exc)) from exc


# --------------------------------------------------------------------------
# shared options
# --------------------------------------------------------------------------

METHOD_CHOICES = ["spectral", "absorbing", "relative", "mc", "all"]


def _int_list(ctx, param, value):
    if value is None:
        return None
    try:
        return [int(v) for v in str(value).split(",") if v.strip()]
    except ValueError:
        raise click.BadParameter(f"expected comma-separated integers, got {value!r}") from None


format_option = click.option("--format", "fmt", type=click.Choice(["table", "csv", "json"]),
                             default="table", show_default=True)


def output_options(f):
    f = click.option("--timing", is_flag=True,
                     help="Include wall-clock seconds (breaks byte-identical output).")(f)
    return format_option(f)


def run_options(f):
    f = click.option("--max-steps", type=click.IntRange(min=1), default=DEFAULT_MAX_STEPS,
                     show_default=True, help="Per-trial step cap for --method mc.")(f)
    f = click.option("--seed", type=click.IntRange(0, 2**64 - 1), envvar=SEED_ENV, default=0,
                     show_default=True, help=f"Seed; falls back to ${SEED_ENV}.")(f)
    f = click.option("--trials", type=click.IntRange(min=1), default=10_000, show_default=True)(f)
    f = click.option("--method", type=click.Choice(METHOD_CHOICES), default="spectral",
                     show_default=True)(f)
    return f


def _circle_walk(p1, p2, p3) -> CircleWalk:
    try:
        return CircleWalk(p1, p2, p3)
    except WalkError as exc:
        raise click.UsageError(str(exc)) from None


def _torus_walk(probs: str | None) -> TorusWalk:
    if probs is None:
        return TorusWalk.simple()
    try:
        values = [float(v) for v in probs.split(",")]
    except ValueError:
        raise click.BadParameter(f"expected five numbers, got {probs!r}", param_hint="--probs") from None
    if len(values) != 5:
        raise click.BadParameter(f"expected five numbers, got {len(values)}", param_hint="--probs")
    try:
        return TorusWalk(*values)
    except WalkError as exc:
        raise click.UsageError(str(exc)) from None


def _load_graph_file(path: str) -> RegularGraph:
    try:
        return read_graph(Path(path).read_text(encoding="utf-8"))
    except GraphError as exc:
        raise click.UsageError(f"{path}: {exc}") from None


def _random_graph(n, d, seed) -> RegularGraph:
    if n is None or d is None:
        raise click.UsageError("give --n and --d, or --graph-file")
    if (n * d) % 2:
        raise click.UsageError(f"n*d must be even for a d-regular graph (n={n}, d={d})")
    if not 1 <= d < n:
        raise click.UsageError(f"need 1 <= d < n (n={n}, d={d})")
    try:
        return random_regular(n, d, seed)
    except GraphGenerationError:
        raise
    except GraphError as exc:
        raise click.UsageError(str(exc)) from None


# --------------------------------------------------------------------------
# meeting-time estimates
# --------------------------------------------------------------------------


def _estimate_records(g: RegularGraph, walk, methods: list[str], *, trials: int, seed: int,
                      max_steps: int, timing: bool, dense: bool,
                      record_seed: int | None = None) -> list[dict]:
    records = []
    for method in methods:
        start = time.perf_counter()
        record_seed_here = record_seed
        if method == "spectral":
            if dense or g.family not in ("circle", "torus"):
                est = spectral_meeting_time(laplacian(transition_matrix(g, walk)))
            elif g.family == "circle":
                est = circle_spectral_meeting_time(walk, g.side)
            else:
                est = torus_spectral_meeting_time(walk, g.side)
            value, diag = est.value, est.diagnostics
        elif method == "absorbing":
            est = absorbing_meeting_time(g, walk)
            value, diag = est.value, est.diagnostics
        elif method == "relative":
            est = relative_meeting_time(relative_chain_for(g, walk))
            value, diag = est.value, est.diagnostics
        else:
            mc = simulate_meeting(g, walk, McConfig(trials, seed, max_steps))
            value = mc.mean
            diag = {"half_width": mc.half_width, "stddev": mc.stddev, "trials": mc.trials,
                    "truncated": mc.truncated}
            record_seed_here = seed
            method = "montecarlo"
        records.append(OutputRecord(
            method=method, graph=g.describe(), walk=describe_walk(walk), value=value,
            diagnostics=diag, seed=record_seed_here,
            wall_time=time.perf_counter() - start if timing else None,
        ))
    if len(records) > 1:
        values = [r.value for r in records]
        spread = max(values) - min(values)
        for r in records:
            r.max_pairwise_discrepancy = spread
    return [asdict(r) for r in records]


def _methods(method: str, allow_relative: bool) -> list[str]:
    if method == "all":
        base = ["spectral", "absorbing", "relative", "mc"]
        return base if allow_relative else [m for m in base if m != "relative"]
    if method == "relative" and not allow_relative:
        raise click.UsageError("--method relative needs a vertex-transitive circle or torus")
    return [method]


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
def main():
    """Expected meeting time of two independent random walks on regular graphs.

    \b
    Estimate columns (csv/table/json keys, in order):
      method, graph, walk, value, max_pairwise_discrepancy, seed, wall_time, diagnostics
    """


@main.command()
@click.option("--n", "N", type=click.IntRange(min=3), required=True, help="Circle size.")
@click.option("--p1", type=float, default=1 / 3, help="Probability of stepping to i-1.")
@click.option("--p2", type=float, default=1 / 3, help="Probability of stepping to i+1.")
@click.option("--p3", type=float, default=1 / 3, help="Probability of staying.")
@click.option("--dense", is_flag=True, help="Spectral method via dense Jacobi instead of the circulant closed form.")
@run_options
@output_options
def circle(N, p1, p2, p3, dense, method, trials, seed, max_steps, fmt, timing):
    """Meeting time on the N-circle."""
    walk = _circle_walk(p1, p2, p3)
    g = build_circle(N)
    with _computation():
        rows = _estimate_records(g, walk, _methods(method, True), trials=trials, seed=seed,
                                 max_steps=max_steps, timing=timing, dense=dense)
    _emit(rows, RECORD_COLUMNS, fmt)


@main.command()
@click.option("--n", "N", type=click.IntRange(min=3), required=True, help="Torus side.")
@click.option("--probs", default=None,
              help="x-1,x+1,y-1,y+1,stay probabilities (default 0.2 each).")
@click.option("--dense", is_flag=True, help="Spectral method via dense Jacobi instead of the block-circulant closed form.")
@run_options
@output_options
def torus(N, probs, dense, method, trials, seed, max_steps, fmt, timing):
    """Meeting time on the N x N torus."""
    walk = _torus_walk(probs)
    g = build_torus(N)
    with _computation():
        rows = _estimate_records(g, walk, _methods(method, True), trials=trials, seed=seed,
                                 max_steps=max_steps, timing=timing, dense=dense)
    _emit(rows, RECORD_COLUMNS, fmt)


@main.command()
@click.option("--n", type=int, default=None, help="Vertex count of the random graph.")
@click.option("--d", type=int, default=None, help="Degree of the random graph.")
@click.option("--graph-file", type=click.Path(exists=True, dir_okay=False), default=None,
              help="Edge-list file ('n d' header, one 'u v' per line).")
@run_options
@output_options
def regular(n, d, graph_file, method, trials, seed, max_steps, fmt, timing):
    """Simple random walks on a d-regular graph (random or from a file).

    The same --seed drives graph generation and the simulation.
    """
    if graph_file is not None:
        g = _load_graph_file(graph_file)
        graph_seed = None
    else:
        with _computation():
            g = _random_graph(n, d, seed)
        graph_seed = seed
    if not g.is_connected():
        raise click.UsageError("graph is not connected")
    with _computation():
        rows = _estimate_records(g, SimpleWalk(), _methods(method, False), trials=trials,
                                 seed=seed, max_steps=max_steps, timing=timing, dense=True,
                                 record_seed=graph_seed)
    _emit(rows, RECORD_COLUMNS, fmt)


@main.command()
@click.option("--family", type=click.Choice(["circle", "torus"]), required=True)
@click.option("--n", "N_list", callback=_int_list, required=True,
              help="Comma-separated sizes, e.g. 16,32,64.")
@click.option("--p1", type=float, default=1 / 3)
@click.option("--p2", type=float, default=1 / 3)
@click.option("--p3", type=float, default=1 / 3)
@click.option("--probs", default=None, help="Torus walk probabilities x-1,x+1,y-1,y+1,stay.")
@output_options
def scaling(family, N_list, p1, p2, p3, probs, fmt, timing):
    """E[tau]/N^2 (circle) or E[tau]/(N^2 ln N) (torus) over a range of sizes.

    Columns: N, e_tau, normalizer, ratio, wall_time.
    """
    if not N_list or min(N_list) < 3:
        raise click.BadParameter("sizes must be >= 3", param_hint="--n")
    walk = _circle_walk(p1, p2, p3) if family == "circle" else _torus_walk(probs)
    with _computation():
        try:
            rows = scaling_study(family, N_list, walk)
        except ValueError as exc:
            raise click.UsageError(str(exc)) from None
    click.echo(f"ratio max/min = {ratio_spread(rows):.6g}", err=True)
    out = [asdict(r) for r in sorted(rows, key=lambda r: r.N)]
    if not timing:
        for r in out:
            r["wall_time"] = None
    _emit(out, SCALING_COLUMNS, fmt)


@main.command()
@click.option("--n", "n_list", callback=_int_list, required=True, help="Vertex counts, comma-separated.")
@click.option("--d", "d_list", callback=_int_list, required=True, help="Degrees, comma-separated.")
@click.option("--graphs", type=click.IntRange(min=1), default=1, show_default=True,
              help="Random graphs per (n, d) cell.")
@click.option("--trials", type=click.IntRange(min=0), default=10_000, show_default=True,
              help="Simulation trials per graph (0 skips simulation).")
@click.option("--seed", type=click.IntRange(0, 2**64 - 1), envvar=SEED_ENV, default=0,
              show_default=True)
@click.option("--z", type=float, default=3.9, show_default=True,
              help="Coverage multiplier on the simulation standard error.")
@format_option
def conjecture1(n_list, d_list, graphs, trials, seed, z, fmt):
    """Spectral value vs exact value vs simulation on random regular graphs.

    Columns: n, d, index, graph_seed, mc_seed, spectral, exact, discrepancy,
    mc_mean, mc_half_width, mc_stderr, mc_covered, truncated, error.
    """
    with _computation():
        rows = conjecture1_experiment(n_list, d_list, graphs, trials, seed, z=z)
    worst = max((r.discrepancy for r in rows if r.discrepancy is not None), default=float("nan"))
    click.echo(f"max relative spectral/exact discrepancy = {worst:.6g}", err=True)
    _emit([asdict(r) for r in rows], CONJ1_COLUMNS, fmt)


@main.command()
@click.option("--family", type=click.Choice(["regular", "circle", "torus", "complete"]),
              default="regular", show_default=True)
@click.option("--n", type=int, default=None, help="Vertex count (regular/complete) or side (circle/torus).")
@click.option("--d", type=int, default=None)
@click.option("--seed", type=click.IntRange(0, 2**64 - 1), envvar=SEED_ENV, default=0,
              show_default=True)
@click.option("--graph-file", type=click.Path(exists=True, dir_okay=False), default=None)
@format_option
def conjecture2(family, n, d, seed, graph_file, fmt):
    """Search for the adjacency eigenbasis with properties (a)-(e).

    Columns: graph, status, a, b, c, d, e, spectral, exact, basis_sum,
    pair_system_residual, witness.
    """
    try:
        if graph_file is not None:
            g = _load_graph_file(graph_file)
        elif family == "regular":
            with _computation():
                g = _random_graph(n, d, seed)
        elif n is None:
            raise click.UsageError("--n is required")
        elif family == "circle":
            g = build_circle(n)
        elif family == "torus":
            g = build_torus(n)
        else:
            g = build_complete(n)
    except GraphError as exc:
        if isinstance(exc, GraphGenerationError):
            raise click.ClickException(str(exc)) from None
        raise click.UsageError(str(exc)) from None
    if not g.is_connected():
        raise click.UsageError("graph is not connected")
    with _computation():
        report = conjecture2_check(g)
        pipeline = proposition1_pipeline(g, report)
    row = {"graph": g.describe(), "status": report.status, **report.properties,
           "spectral": pipeline["spectral"], "exact": pipeline["exact"],
           "basis_sum": pipeline["basis_sum"],
           "pair_system_residual": pipeline["pair_system_residual"],
           "witness": {"failures": report.witness["failures"],
                       "unsearched": report.witness["unsearched"]}}
    _emit([row], CONJ2_COLUMNS, fmt)


if __name__ == "__main__":
    main()
