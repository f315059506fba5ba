# app/main.py

import argparse
import logging
import sys
from pathlib import Path

import pandas as pd
from pydantic import ValidationError

from app.config import DEFAULT_CONSTANTS, configure_logging, get_settings, load_experiment_file
from app.errors import ConfigurationError, NoisyRadioError, NotStaticError, ParameterError, ScheduleMismatchError

# --------------------------------------------------
# SIMULATION
# --------------------------------------------------
from app.analysis.sweeps import run_cells, simulate_cell
from app.core.graphs import make_graph
from app.schemas.run import RunConfig

# --------------------------------------------------
# EXPERIMENTS / ACCEPTANCE
# --------------------------------------------------
from app.analysis.acceptance import AcceptanceContext, run_acceptance
from app.analysis.experiments import run_experiment
from app.schemas.experiment import ExperimentSpec

# --------------------------------------------------
# INPUT / OUTPUT
# --------------------------------------------------
from app.normalizers.spec_parser import (
    parse_constants,
    parse_graph_spec,
    parse_list,
    parse_protocol_spec,
    parse_simulator,
)
from app.repositories.gnuplot import emit_gnuplot
from app.repositories.graph_repo import write_edge_list
from app.repositories.report_repo import write_csv
from app.repositories.transcript_repo import history_records, write_jsonl
from app.utils import parse_seed_range

logger = logging.getLogger("app")

EXIT_OK, EXIT_FAILED, EXIT_USAGE = 0, 1, 2
USAGE_ERRORS = (ConfigurationError, ParameterError, NotStaticError, ScheduleMismatchError, ValidationError)


# --------------------------------------------------
# ARGUMENTS
# --------------------------------------------------
def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="python -m app", description="Noisy radio network simulator")
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="run one simulator on one instance per seed")
    sim.add_argument("--config", help="INI file with an [experiment] section; flags win")
    sim.add_argument("--graph")
    sim.add_argument("--protocol")
    sim.add_argument("--sim")
    sim.add_argument("--p", type=float)
    sim.add_argument("--T", type=int)
    seeds = sim.add_mutually_exclusive_group()
    seeds.add_argument("--seed", type=int)
    seeds.add_argument("--seeds")
    sim.add_argument("--const", action="append", default=[], metavar="K=V")
    sim.add_argument("--oracle-mode", action="store_true")
    sim.add_argument("--out")
    sim.add_argument("--transcripts", help="write claimed histories as JSON lines")
    sim.add_argument("--emit-gnuplot", action="store_true")
    sim.add_argument("--no-timestamp", action="store_true")

    exp = sub.add_parser("experiment", help="run an experiment described by an INI file")
    exp.add_argument("spec")
    exp.add_argument("--out")
    exp.add_argument("--const", action="append", default=[], metavar="K=V")
    exp.add_argument("--emit-gnuplot", action="store_true")
    exp.add_argument("--no-timestamp", action="store_true")

    acc = sub.add_parser("accept", help="run the acceptance suite")
    acc.add_argument("--quick", action="store_true", help="fewer seeds and trials")
    acc.add_argument("--const", action="append", default=[], metavar="K=V")
    acc.add_argument("--p", type=float, help="force every noisy criterion to this p")
    acc.add_argument("--only", help="comma-separated criterion ids")

    graph = sub.add_parser("graph", help="write a generated network as an edge list")
    graph.add_argument("--graph", required=True)
    graph.add_argument("--seed", type=int, default=0)
    graph.add_argument("--out", required=True)
    return parser


def _constants(pairs: list[str], base: dict | None = None):
    return DEFAULT_CONSTANTS.override(**{**(base or {}), **parse_constants(pairs)})


# --------------------------------------------------
# SIMULATE
# --------------------------------------------------
def build_run_config(args) -> RunConfig:
    file = load_experiment_file(args.config) if args.config else {}

    def pick(flag, key, cast=str):
        if flag is not None:
            return flag
        return cast(file[key]) if key in file else None

    graph_text = pick(args.graph, "graph")
    protocol_text = pick(args.protocol, "protocol")
    if not graph_text or not protocol_text:
        raise ConfigurationError("simulate needs --graph and --protocol")

    length = pick(args.T, "t", int)
    if args.seed is not None:
        seeds = [args.seed]
    else:
        seeds = parse_seed_range(pick(args.seeds, "seeds") or "0")

    return RunConfig(
        graph=parse_graph_spec(graph_text),
        protocol=parse_protocol_spec(protocol_text, length),
        sim=parse_simulator(pick(args.sim, "sim") or "progress"),
        p=pick(args.p, "p", float) or 0.0,
        seeds=seeds,
        constants=_constants(args.const, file.get("constants")),
        oracle_mode=args.oracle_mode,
        out=pick(args.out, "out"),
        transcripts=args.transcripts,
        emit_gnuplot=args.emit_gnuplot,
        timestamp=not args.no_timestamp,
    )


def _transcript_path(path: str, seed: int, single: bool) -> str:
    """One JSON-lines file per seed; a single-seed run writes `path` itself."""
    if single:
        return path
    target = Path(path)
    return str(target.with_name(f"{target.stem}_seed{seed}{target.suffix}"))


def cmd_simulate(args) -> int:
    config = build_run_config(args)
    if config.graph.directed:
        raise ConfigurationError(f"simulators reject directed networks ({config.graph.label})")

    if config.emit_gnuplot and not config.out:
        raise ConfigurationError("--emit-gnuplot needs --out: the script plots the CSV file")

    cells = config.cells()
    if config.transcripts:
        rows = []
        for cell in cells:
            row, report = simulate_cell(cell)
            rows.append(row)
            write_jsonl(history_records(report.histories), _transcript_path(config.transcripts, cell.seed, len(cells) == 1))
    else:
        rows = run_cells(cells, get_settings().threads)

    frame = pd.DataFrame(rows)
    write_csv(frame, config.out, timestamp=config.timestamp)
    if config.emit_gnuplot:
        y = "max_completion_round" if config.sim == "progress" else "total_rounds"
        emit_gnuplot(config.out, "seed", y)

    verified = int(frame["verified"].sum())
    logger.info("%d/%d runs verified", verified, len(frame))
    return EXIT_OK if verified == len(frame) else EXIT_FAILED


# --------------------------------------------------
# EXPERIMENT
# --------------------------------------------------
def build_experiment_spec(path: str, const: list[str], out: str | None) -> ExperimentSpec:
    raw = load_experiment_file(path)
    length_grid = parse_list(raw.get("t", raw.get("T", "")), int)
    fields = {
        "kind": raw.get("kind") or raw.get("name"),
        "seeds": parse_seed_range(raw.get("seeds", "1")),
        "constants": _constants(const, raw.get("constants")),
        "out": out or raw.get("out"),
        "T": length_grid,
    }
    if "graphs" in raw or "graph" in raw:
        fields["graphs"] = [parse_graph_spec(g) for g in parse_list(raw.get("graphs", raw.get("graph")))]
    if "protocol" in raw:
        fields["protocol"] = parse_protocol_spec(raw["protocol"])
    if "p" in raw:
        fields["p"] = parse_list(raw["p"], float)
    if "sims" in raw or "sim" in raw:
        fields["sims"] = [parse_simulator(s) for s in parse_list(raw.get("sims", raw.get("sim")))]
    if "delta" in raw:
        fields["delta"] = parse_list(raw["delta"], int)
    if "samples" in raw:
        fields["samples"] = int(raw["samples"])
    if "t_grid" in raw:
        fields["t_grid"] = parse_list(raw["t_grid"], float)
    if "c" in raw:
        fields["C"] = float(raw["c"])
    if "q" in raw:
        fields["q"] = float(raw["q"])
    return ExperimentSpec(**fields)


def _report_path(out: str | None, name: str, single: bool) -> str | None:
    if out is None:
        return None
    out_path = Path(out)
    if single and out_path.suffix == ".csv":
        return str(out_path)
    if out_path.suffix == ".csv":
        return str(out_path.with_name(f"{out_path.stem}_{name}.csv"))
    return str(out_path / f"{name}.csv")


def cmd_experiment(args) -> int:
    spec = build_experiment_spec(args.spec, args.const, args.out)
    if args.emit_gnuplot and spec.out is None:
        raise ConfigurationError("--emit-gnuplot needs --out or an out key: the scripts plot the CSV files")
    outcome = run_experiment(spec, get_settings().threads)
    single = len(outcome.reports) == 1
    for name, frame in outcome.reports.items():
        path = _report_path(spec.out, name, single)
        write_csv(frame, path, timestamp=not args.no_timestamp)
        if args.emit_gnuplot:
            x = "Δ" if "Δ" in frame.columns else ("t" if "t" in frame.columns else "seed")
            y = next((c for c in ("mean_rounds", "empirical", "total_rounds", "longest_chain") if c in frame.columns), frame.columns[-1])
            emit_gnuplot(path, x, y, title=f"{spec.kind}: {name}")
    for line in outcome.summary:
        print(line)
    return EXIT_OK if outcome.passed else EXIT_FAILED


# --------------------------------------------------
# ACCEPTANCE
# --------------------------------------------------
def cmd_accept(args) -> int:
    if args.p is not None and not 0.0 <= args.p < 1.0:
        raise ParameterError(f"--p must lie in [0, 1), got {args.p}")
    ctx = AcceptanceContext(
        constants=_constants(args.const),
        p_override=args.p,
        quick=args.quick,
        workers=get_settings().threads,
    )
    only = {int(x) for x in parse_list(args.only)} if args.only else None
    results = run_acceptance(ctx, only)
    for result in results:
        print(result.verdict)

    failed = [r.ident for r in results if not r.passed]
    if failed:
        print(f"FAILED criteria: {', '.join(map(str, failed))}")
        return EXIT_FAILED
    print("all criteria passed")
    return EXIT_OK


# --------------------------------------------------
# GRAPH
# --------------------------------------------------
def cmd_graph(args) -> int:
    spec = parse_graph_spec(args.graph).with_seed(args.seed)
    network = make_graph(spec)
    write_edge_list(network, args.out)
    print(f"wrote {network.name}: n={network.n}, {len(network.edges())} edges -> {args.out}")
    return EXIT_OK


COMMANDS = {
    "simulate": cmd_simulate,
    "experiment": cmd_experiment,
    "accept": cmd_accept,
    "graph": cmd_graph,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    level = {0: None, 1: "INFO"}.get(args.verbose, "DEBUG")
    configure_logging(level)

    try:
        return COMMANDS[args.command](args)
    except USAGE_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NoisyRadioError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILED
