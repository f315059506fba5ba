# app/analysis/sweeps.py

import logging
import math
from concurrent.futures import ProcessPoolExecutor

import numpy as np
import pandas as pd
from sklearn.linear_model import LinearRegression

from app.analysis.blaming import measure_blaming_chains
from app.config import get_settings
from app.core.graphs import make_graph
from app.core.noise import NoiseModel
from app.errors import EngineInvariantError
from app.protocols.library import make_protocol
from app.schemas.experiment import ExperimentSpec
from app.schemas.reports import ROW_SCHEMAS
from app.schemas.run import RunCell
from app.schemas.specs import GraphSpec, ProtocolSpec
from app.simulators.progress import service_bounds, simulate_with_progress_detection
from app.simulators.runner import run_simulation
from app.utils import ceil_ln, clog2, decay_lengths, learn_delays_iterations, window_size

logger = logging.getLogger(__name__)


# --------------------------------------------------
# SINGLE CELLS
# --------------------------------------------------
def simulate_cell(cell: RunCell):
    """Runs one cell; returns its CSV row and the full SimulationReport."""
    network = make_graph(cell.graph)
    protocol = make_protocol(cell.protocol, network, seed=cell.seed)
    noise = NoiseModel(cell.p, cell.seed)
    report = run_simulation(cell.sim, protocol, network, noise, constants=cell.constants, oracle_mode=cell.oracle_mode)

    c = cell.constants
    row = {
        "graph": cell.graph.label,
        "delta": network.max_degree,
        "n": network.n,
        "T": protocol.length,
        "p": cell.p,
        "seed": cell.seed,
        "verified": report.all_verified,
    }
    if cell.sim == "progress":
        row["max_completion_round"] = report.max_completion_round or report.rounds
    else:
        row["total_rounds"] = report.rounds
    if cell.sim == "static":
        row.update(c1=c.c1, c3=c.c3, cQ=c.cQ, max_window_spread=report.extras["max_window_spread"])
    elif cell.sim == "general":
        row.update(c4=c.c4, c5=c.c5)
    elif cell.sim == "repeat":
        row.update(c_rep=c.c_rep)

    return ROW_SCHEMAS[cell.sim](**row).model_dump(by_alias=True), report


def run_cell(cell: RunCell) -> dict:
    """The CSV row of one cell (column names as written)."""
    return simulate_cell(cell)[0]


def run_cells(cells: list[RunCell], workers: int | None = None) -> list[dict]:
    """Rows in the order of `cells`, whatever order workers finish in."""
    workers = min(workers or get_settings().threads, max(1, len(cells)))
    if workers <= 1:
        return [run_cell(cell) for cell in cells]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(run_cell, cells, chunksize=max(1, len(cells) // (4 * workers))))


def rounds_of(row: dict) -> int:
    return row.get("total_rounds", row.get("max_completion_round"))


# --------------------------------------------------
# OVERHEAD SWEEP
# --------------------------------------------------
def sweep_cells(spec: ExperimentSpec) -> list[RunCell]:
    cells = []
    for sim in spec.sims:
        for graph in spec.graphs:
            for length in spec.lengths():
                for p in spec.p:
                    for seed in spec.seeds:
                        cells.append(RunCell(
                            sim=sim,
                            graph=graph.with_seed(seed),
                            protocol=spec.protocol.with_length(length),
                            p=p,
                            seed=seed,
                            constants=spec.constants,
                        ))
    return cells


def summarise(cells: list[RunCell], rows: list[dict]) -> pd.DataFrame:
    frame = pd.DataFrame([
        {
            "sim": cell.sim,
            "graph": cell.graph.label,
            "Δ": row["Δ"],
            "n": row["n"],
            "T": row["T"],
            "p": cell.p,
            "rounds": rounds_of(row),
            "verified": row["verified"],
        }
        for cell, row in zip(cells, rows)
    ])
    keys = ["sim", "graph", "Δ", "n", "T", "p"]
    summary = (
        frame.groupby(keys, sort=False)
        .agg(
            seeds=("rounds", "size"),
            mean_rounds=("rounds", "mean"),
            p50_rounds=("rounds", lambda s: float(np.percentile(s, 50))),
            p95_rounds=("rounds", lambda s: float(np.percentile(s, 95))),
            verified_rate=("verified", "mean"),
        )
        .reset_index()
    )
    summary["mean_rounds_per_T"] = summary["mean_rounds"] / summary["T"]
    return summary


def run_overhead_sweep(spec: ExperimentSpec, workers: int | None = None) -> pd.DataFrame:
    """Mean, p50 and p95 of rounds per grid point plus the verification rate."""
    cells = sweep_cells(spec)
    rows = run_cells(cells, workers)

    for cell, row in zip(cells, rows):
        if cell.p == 0.0 and not row["verified"]:
            raise EngineInvariantError(
                f"{cell.sim} on {cell.graph.label} with {cell.protocol.label}, seed {cell.seed}: "
                "faultless run did not verify"
            )
    return summarise(cells, rows)


def shape_term(sim: str, delta: int, n: int, length: int, c3: int = 4, c_q: int = 8) -> float:
    """The round count each simulator is expected to scale with."""
    log_delta = clog2(delta)
    if sim == "progress":
        return length * log_delta + ceil_ln(n)
    if sim == "general":
        return (length + ceil_ln(n)) * delta * log_delta
    if sim == "static":
        outer, inner = decay_lengths(delta, n, c3)
        return (length + window_size(n, c_q)) * log_delta * outer * inner * learn_delays_iterations(window_size(n, c_q))
    return length * max(1, ceil_ln(n))


def fit_overhead(summary: pd.DataFrame, sim: str) -> dict:
    """Least-squares fit mean_rounds ≈ a·shape + b for one simulator."""
    rows = summary[summary["sim"] == sim]
    if rows.empty:
        raise ValueError(f"no rows for simulator {sim!r}")
    x = np.array([[shape_term(sim, r["Δ"], r["n"], r["T"])] for _, r in rows.iterrows()])
    y = rows["mean_rounds"].to_numpy()
    model = LinearRegression().fit(x, y)
    return {
        "sim": sim,
        "slope": float(model.coef_[0]),
        "intercept": float(model.intercept_),
        "r2": float(model.score(x, y)) if len(rows) > 1 else 1.0,
    }


# --------------------------------------------------
# HARD INSTANCE
# --------------------------------------------------
def hard_instance_experiment(
    n: int, delta: int, p: float, seeds, sims=("progress", "static", "general"), workers: int | None = None
) -> pd.DataFrame:
    """Every simulator on bipartite_hard with its round-robin plan; overhead only."""
    spec = ExperimentSpec(
        kind="hard-instance",
        graphs=[GraphSpec(kind="bipartite_hard", n=n, delta=delta)],
        protocol=ProtocolSpec(kind="roundrobin"),
        p=[p],
        seeds=list(seeds),
        sims=list(sims),
    )
    cells = sweep_cells(spec)
    summary = summarise(cells, run_cells(cells, workers))
    summary["overhead"] = summary["mean_rounds"] / summary["T"]
    return summary


# --------------------------------------------------
# BLAMING CHAINS
# --------------------------------------------------
def blaming_experiment(graph: GraphSpec, protocol: ProtocolSpec, p: float, seeds) -> pd.DataFrame:
    """Per seed: longest chain, largest increment and recurrence violations."""
    rows = []
    for seed in seeds:
        network = make_graph(graph.with_seed(seed))
        proto = make_protocol(protocol, network, seed=seed)
        noise = NoiseModel(p, seed)
        report = simulate_with_progress_detection(proto, network, noise)
        if not report.all_completed:
            logger.warning("seed %d did not complete; skipped", seed)
            continue
        chains = measure_blaming_chains(
            report.extras["completion_table"], network, service_bounds(report, network, noise)
        )
        rows.append({
            "graph": graph.with_seed(seed).label,
            "T": proto.length,
            "p": p,
            "seed": seed,
            "longest_chain": chains.longest,
            "max_increment": chains.max_increment,
            "violations": len(chains.violations),
            "bound_shape": proto.length * clog2(network.max_degree) + math.ceil(math.log(max(network.n, 2))),
        })
    return pd.DataFrame(rows)
