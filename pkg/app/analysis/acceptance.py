# app/analysis/acceptance.py

import logging
import time
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
import pandas as pd

from app.analysis import lower_bounds, oracles
from app.analysis.sweeps import run_cells
from app.analysis.tail_bounds import calibrate_tail_constant, tail_bound_check
from app.config import DEFAULT_CONSTANTS, SimulationConstants
from app.core.engine import Channel
from app.core.graphs import random_bounded, star
from app.core.noise import NoiseModel
from app.repositories.hashing import generate_text_hash
from app.repositories.report_repo import render_csv
from app.schemas.run import RunCell
from app.schemas.specs import GraphSpec, ProtocolSpec
from app.simulators.general import share_knowledge
from app.simulators.primitives import PrimitiveKit, learn_delays
from app.utils import window_size

logger = logging.getLogger(__name__)

SIMULATORS = ("progress", "static", "general")
ACCEPTANCE_GRAPHS = (
    GraphSpec(kind="star", delta=8),
    GraphSpec(kind="path", n=16),
    GraphSpec(kind="cycle", n=16),
    GraphSpec(kind="random_bounded", n=32, delta=4),
    GraphSpec(kind="bipartite_hard", n=16, delta=4),
)


@dataclass
class CriterionResult:
    ident: int
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0

    @property
    def verdict(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.ident} {self.name}: {self.detail} ({self.seconds:.1f}s)"


@dataclass
class AcceptanceContext:
    constants: SimulationConstants = DEFAULT_CONSTANTS
    p_override: float | None = None
    quick: bool = False
    workers: int | None = None
    shared: dict = field(default_factory=dict)

    def p(self, default: float) -> float:
        return default if self.p_override is None else self.p_override

    def seeds(self, full: int, quick: int) -> list[int]:
        return list(range(1, (quick if self.quick else full) + 1))


def _flood_or_decay(graph: GraphSpec, length: int) -> ProtocolSpec:
    return ProtocolSpec(kind="flood" if graph.kind == "star" else "decay", T=length)


def _cells(ctx: AcceptanceContext, protocols: Callable, p: float, seeds: list[int]) -> list[RunCell]:
    return [
        RunCell(sim=sim, graph=graph.with_seed(seed), protocol=protocol, p=p, seed=seed, constants=ctx.constants)
        for sim in SIMULATORS
        for graph in ACCEPTANCE_GRAPHS
        for protocol in protocols(graph)
        for seed in seeds
    ]


# --------------------------------------------------
# CRITERIA
# --------------------------------------------------
def zero_noise_equivalence(ctx: AcceptanceContext) -> tuple[bool, str]:
    length = 16
    cells = _cells(
        ctx,
        lambda g: [_flood_or_decay(g, length), ProtocolSpec(kind="silent", T=length), ProtocolSpec(kind="roundrobin")],
        0.0,
        ctx.seeds(5, 2),
    )
    rows = run_cells(cells, ctx.workers)
    bad = [f"{c.sim}/{c.graph.label}/{c.protocol.label}/{c.seed}" for c, r in zip(cells, rows) if not r["verified"]]
    return not bad, f"{len(rows) - len(bad)}/{len(rows)} verified" + (f"; first failure {bad[0]}" if bad else "")


def _noisy_grid(ctx: AcceptanceContext) -> tuple[list[RunCell], list[dict]]:
    if "noisy_grid" not in ctx.shared:
        cells = _cells(ctx, lambda g: [_flood_or_decay(g, 64)], ctx.p(0.3), ctx.seeds(100, 10))
        ctx.shared["noisy_grid"] = (cells, run_cells(cells, ctx.workers))
    return ctx.shared["noisy_grid"]


def _grid_csv(cells: list[RunCell], rows: list[dict]) -> str:
    frame = pd.DataFrame([{"sim": c.sim, **r} for c, r in zip(cells, rows)])
    return render_csv(frame, timestamp=False)


def noisy_correctness(ctx: AcceptanceContext) -> tuple[bool, str]:
    cells, rows = _noisy_grid(ctx)
    seeds = len(ctx.seeds(100, 10))
    floors = {"progress": 0.99, "general": 0.99, "static": 0.95}
    worst, details = True, []
    for sim in SIMULATORS:
        for graph in ACCEPTANCE_GRAPHS:
            ok = sum(r["verified"] for c, r in zip(cells, rows) if c.sim == sim and c.graph.kind == graph.kind)
            if ok < floors[sim] * seeds:
                worst = False
                details.append(f"{sim}/{graph.label} {ok}/{seeds}")
    return worst, "all grid points above their floor" if worst else "; ".join(details)


def progress_overhead_shape(ctx: AcceptanceContext) -> tuple[bool, str]:
    deltas = (16, 256) if ctx.quick else (16, 64, 256)
    seeds = ctx.seeds(50, 5)
    cells = [
        RunCell(sim="progress", graph=GraphSpec(kind="star", delta=d), protocol=ProtocolSpec(kind="flood", T=256),
                p=ctx.p(0.5), seed=s, constants=ctx.constants)
        for d in deltas for s in seeds
    ]
    rows = run_cells(cells, ctx.workers)
    per_t = {d: np.mean([r["max_completion_round"] / 256 for c, r in zip(cells, rows) if c.graph.delta == d]) for d in deltas}
    ratio = per_t[256] / per_t[16]
    return 1.0 <= ratio <= 2.5, f"rounds/T {', '.join(f'Δ={d}: {v:.2f}' for d, v in per_t.items())}; ratio {ratio:.2f}"


def general_overhead_shape(ctx: AcceptanceContext) -> tuple[bool, str]:
    deltas = (8, 16) if ctx.quick else (8, 16, 32)
    seeds = ctx.seeds(25, 3)
    cells = [
        RunCell(sim="general", graph=GraphSpec(kind="star", delta=d), protocol=ProtocolSpec(kind="flood", T=64),
                p=ctx.p(0.3), seed=s, constants=ctx.constants)
        for d in deltas for s in seeds
    ]
    rows = run_cells(cells, ctx.workers)
    means = {d: np.mean([r["total_rounds"] for c, r in zip(cells, rows) if c.graph.delta == d]) for d in deltas}
    ratios = [means[b] / means[a] for a, b in zip(deltas, deltas[1:])]
    return min(ratios) >= 1.7, "doubling ratios " + ", ".join(f"{x:.2f}" for x in ratios)


def learn_delays_exactness(ctx: AcceptanceContext) -> tuple[bool, str]:
    rng = np.random.default_rng(2024)
    instances = 200 if not ctx.quick else 50
    failures = 0
    for i in range(instances):
        n, delta = int(rng.integers(4, 33)), int(rng.integers(2, 7))
        network = random_bounded(n, delta, seed=i)
        window = window_size(n, ctx.constants.cQ)
        throttle = window + int(rng.integers(1, 50))
        t = rng.integers(throttle - window, throttle + 1, size=n)
        kit = PrimitiveKit(Channel(network, NoiseModel()), ctx.constants, oracle=True)
        m = learn_delays(kit, t, throttle, window)
        for v in network.nodes:
            if all(t[v] <= t[w] for w in network.ball(v, 2)):
                if any(m[w] != t[v] for w in network.ball(v, 1)):
                    failures += 1
                    break
    return failures == 0, f"{instances - failures}/{instances} instances exact"


def probability_floors(ctx: AcceptanceContext) -> tuple[bool, str]:
    trials = 2_000 if ctx.quick else 10_000
    network = star(32)
    p = ctx.p(0.5)

    kit = PrimitiveKit(Channel(network, NoiseModel(p, 6)), ctx.constants)
    informed = np.zeros(network.n, dtype=bool)
    informed[1:9] = True
    decay_rate = float(np.mean([kit.decay_mask(informed)[0] for _ in range(trials)]))

    channel = Channel(network, NoiseModel(p, 7))
    messages = list(range(network.n))
    hears_all = float(np.mean([
        len(share_knowledge(channel, messages, ctx.constants)[0]) == 32 for _ in range(trials)
    ]))
    share_floor = 0.75 - oracles.SIGMA_BAND * oracles.binomial_sigma(0.75, trials)
    ok = decay_rate >= 0.9 and hears_all >= share_floor
    return ok, f"decay success {decay_rate:.4f} (≥ 0.9), center hears all {hears_all:.4f} (≥ {share_floor:.3f})"


def lower_bound_gap(ctx: AcceptanceContext) -> tuple[bool, str]:
    p = ctx.p(0.5)
    repetition = lower_bounds.star_repetition_rounds(1024, 64, p, ctx.seeds(30, 4))
    coded = lower_bounds.star_coded_rounds(1024, 256, p, ctx.seeds(8, 2))
    oracle = lower_bounds.repetition_oracle(1024, p)
    gap = lower_bounds.lower_bound_gap(repetition, coded)

    rep_per_t = gap["repetition_per_T"]
    ok = (
        rep_per_t >= 5
        and abs(rep_per_t - oracle) <= 0.02 * oracle
        and gap["coded_per_T"] <= 2.5
        and gap["gap_sigmas"] >= 4
        and bool(coded["decoded"].all())
    )
    return ok, (
        f"repetition {rep_per_t:.2f}/T (oracle {oracle:.2f}), coded {gap['coded_per_T']:.2f}/T, "
        f"gap {gap['gap_sigmas']:.1f}σ"
    )


def directed_bipartite_bound(ctx: AcceptanceContext) -> tuple[bool, str]:
    p = ctx.p(0.5)
    frame = lower_bounds.directed_bipartite_experiment(64, p, ctx.seeds(50, 10))
    mean = float(frame["total_rounds"].mean())
    oracle = lower_bounds.directed_bipartite_oracle(64, p)
    ok = mean >= 192 and abs(mean - oracle) <= 0.05 * oracle
    return ok, f"mean {mean:.1f} rounds (≥ 192), oracle {oracle:.1f}"


def tail_bound(ctx: AcceptanceContext) -> tuple[bool, str]:
    samples = 20_000 if ctx.quick else 100_000
    constant = calibrate_tail_constant(samples=samples, seed=9)
    result = tail_bound_check(16, 32, 0.5, samples, (1, 2, 3, 4, 5), constant, seed=10)
    return result.passed, f"C={constant:.1f}" + ("" if result.passed else f", fails at t={result.failing_t}")


def determinism(ctx: AcceptanceContext) -> tuple[bool, str]:
    cells, rows = _noisy_grid(ctx)
    first = generate_text_hash(_grid_csv(cells, rows))
    second = generate_text_hash(_grid_csv(cells, run_cells(cells, ctx.workers)))
    return first == second, f"sha256 {first[:12]} vs {second[:12]}"


CRITERIA: tuple[tuple[int, str, Callable[[AcceptanceContext], tuple[bool, str]]], ...] = (
    (1, "zero-noise equivalence", zero_noise_equivalence),
    (2, "noisy correctness", noisy_correctness),
    (3, "progress overhead shape", progress_overhead_shape),
    (4, "general overhead shape", general_overhead_shape),
    (5, "learn-delays exactness", learn_delays_exactness),
    (6, "broadcast/share floors", probability_floors),
    (7, "repetition vs coding gap", lower_bound_gap),
    (8, "directed bipartite bound", directed_bipartite_bound),
    (9, "sum-of-maxima tail bound", tail_bound),
    (10, "determinism", determinism),
)


def run_acceptance(ctx: AcceptanceContext | None = None, only: set[int] | None = None) -> list[CriterionResult]:
    ctx = ctx or AcceptanceContext()
    results = []
    for ident, name, check in CRITERIA:
        if only and ident not in only:
            continue
        logger.info("criterion %d: %s", ident, name)
        started = time.perf_counter()
        try:
            passed, detail = check(ctx)
        except Exception as exc:  # fails this criterion only
            logger.exception("criterion %d crashed", ident)
            passed, detail = False, f"{type(exc).__name__}: {exc}"
        results.append(CriterionResult(ident, name, passed, detail, time.perf_counter() - started))
    return results
