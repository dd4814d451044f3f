"""Seeded batch experiments, quality metrics, CSV output, and PPM rendering.

A batch run samples, per seed, a uniform random type profile and starting
placement, runs randomized improving-response dynamics to convergence, and
reports five metrics on the final state: the average-distance social cost
(ADGSC), the max-distance social cost (MDGSC), the number of neighboring
agent pairs with type-difference at most one half, the maximum neighbor
type-difference, and the number of improving moves taken.  ADGSC and MDGSC
are always both computed, whatever cost model drove the dynamics.
"""

from __future__ import annotations

import csv
import io
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from . import engine
from .core import (
    ADG,
    CG,
    MDG,
    SWAP,
    GameSpec,
    Graph,
    InstanceError,
    Placement,
    TypeProfile,
    max_edge_cost,
    social_cost,
)

CSV_HEADER = ["model", "seed", "converged", "steps", "adgsc", "mdgsc",
              "pairs_leq_half", "max_d"]


@dataclass(frozen=True)
class ExperimentConfig:
    graph: Graph
    spec: GameSpec
    seeds: tuple[int, ...]
    empty_frac: float = 0.0
    max_steps: int = 10**7
    policy: str = "random"
    out_dir: Optional[str] = None

    def __post_init__(self):
        if not 0.0 <= self.empty_frac < 1.0:
            raise InstanceError("empty fraction must lie in [0, 1)")
        if not self.seeds:
            raise InstanceError("need at least one seed")
        if self.spec.deviation != SWAP and self.n_agents == self.graph.node_count:
            raise InstanceError("jump dynamics needs at least one empty node")

    @property
    def n_agents(self) -> int:
        return self.graph.node_count - int(self.empty_frac * self.graph.node_count)


@dataclass
class MetricsRow:
    model: str
    seed: int
    converged: bool
    steps: int
    adgsc: float
    mdgsc: float
    pairs_leq_half: int
    max_d: float
    max_edge: float = 1.0  # definitional variant: 1 when no two agents adjacent


def compute_metrics(
    graph: Graph,
    types: TypeProfile,
    placement: Placement,
    isolation: str = "uis",
) -> dict:
    """The Table-style quality metrics of a final state.

    max_d is reported as 0 when no two agents are adjacent (an empirical
    maximum over existing pairs); max_edge keeps the definitional value 1 in
    that case.  Both are returned.
    """
    adgsc = social_cost(graph, types, placement, GameSpec(ADG, isolation=isolation))
    mdgsc = social_cost(graph, types, placement, GameSpec(MDG, isolation=isolation))
    t = types.values
    pairs = 0
    seen_pair = False
    worst = 0.0
    for u, v in graph.edges:
        a = placement.agent_of_node[u]
        b = placement.agent_of_node[v]
        if a < 0 or b < 0:
            continue
        seen_pair = True
        d = abs(t[a] - t[b])
        if d <= 0.5:
            pairs += 1
        if d > worst:
            worst = d
    return {
        "adgsc": float(adgsc),
        "mdgsc": float(mdgsc),
        "pairs_leq_half": pairs,
        "max_d": worst if seen_pair else 0.0,
        "max_edge": max_edge_cost(graph, types, placement),
    }


def sample_state(
    graph: Graph, n_agents: int, seed: int
) -> tuple[TypeProfile, Placement]:
    """Uniform random sorted types and a uniform random placement, derived
    from a single integer seed."""
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    types = TypeProfile(np.sort(rng.random(n_agents)))
    nodes = rng.permutation(graph.node_count)[:n_agents]
    return types, Placement(nodes, graph.node_count)


def run_single(config: ExperimentConfig, seed: int) -> MetricsRow:
    """One seeded run: sample, run dynamics, measure the final state."""
    graph = config.graph
    types, placement = sample_state(graph, config.n_agents, seed)
    if config.policy == "random":
        final, steps, converged = engine.run(
            graph, types, placement, config.spec, seed=seed,
            max_steps=config.max_steps,
        )
    else:
        from .dynamics import GameState, run_dynamics

        state = GameState(graph, types, placement, config.spec)
        res = run_dynamics(
            state, policy=config.policy, seed=seed, max_steps=config.max_steps
        )
        final, steps, converged = res.placement, res.steps, res.converged
    metrics = compute_metrics(graph, types, final, config.spec.isolation)
    return MetricsRow(
        model=config.spec.label(),
        seed=seed,
        converged=converged,
        steps=steps,
        **metrics,
    )


def _worker_count() -> int:
    raw = os.environ.get("SCHELLING_THREADS", "")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def run_batch(config: ExperimentConfig) -> tuple[list[MetricsRow], MetricsRow]:
    """All seeds of a configuration, in seed order, plus the mean row.

    Seeds are dispatched to SCHELLING_THREADS worker processes when that
    variable is set above 1; the default is serial.
    """
    workers = _worker_count()
    if workers > 1 and len(config.seeds) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(run_single, [config] * len(config.seeds),
                                 config.seeds))
    else:
        rows = [run_single(config, s) for s in config.seeds]
    return rows, aggregate_rows(rows)


def aggregate_rows(rows: list[MetricsRow]) -> MetricsRow:
    """Arithmetic column means; seed -1, converged iff every row converged."""
    k = len(rows)
    return MetricsRow(
        model=rows[0].model,
        seed=-1,
        converged=all(r.converged for r in rows),
        steps=round(sum(r.steps for r in rows) / k),
        adgsc=sum(r.adgsc for r in rows) / k,
        mdgsc=sum(r.mdgsc for r in rows) / k,
        pairs_leq_half=round(sum(r.pairs_leq_half for r in rows) / k),
        max_d=sum(r.max_d for r in rows) / k,
        max_edge=sum(r.max_edge for r in rows) / k,
    )


def emit_csv(rows: list[MetricsRow], stream) -> None:
    writer = csv.writer(stream)
    writer.writerow(CSV_HEADER)
    for r in rows:
        writer.writerow([
            r.model,
            r.seed,
            int(r.converged),
            r.steps,
            f"{r.adgsc:.6g}",
            f"{r.mdgsc:.6g}",
            r.pairs_leq_half,
            f"{r.max_d:.6g}",
        ])


def parse_csv(stream) -> list[MetricsRow]:
    reader = csv.reader(stream)
    header = next(reader)
    if header != CSV_HEADER:
        raise InstanceError(f"unexpected CSV header {header!r}")
    rows = []
    for rec in reader:
        rows.append(MetricsRow(
            model=rec[0],
            seed=int(rec[1]),
            converged=bool(int(rec[2])),
            steps=int(rec[3]),
            adgsc=float(rec[4]),
            mdgsc=float(rec[5]),
            pairs_leq_half=int(rec[6]),
            max_d=float(rec[7]),
        ))
    return rows


def csv_string(rows: list[MetricsRow]) -> str:
    buf = io.StringIO()
    emit_csv(rows, buf)
    return buf.getvalue()


def render_ppm(
    graph: Graph, types: TypeProfile, placement: Placement, path: str
) -> None:
    """Write the state of a grid graph as a binary PPM image.

    Occupied nodes become gray pixels, round(255 * (1 - t)) on all channels,
    so type 0 is white and type 1 is black; empty nodes become pure green.
    """
    shape = getattr(graph, "grid_shape", None)
    if shape is None:
        raise InstanceError("rendering needs a grid graph with a known shape")
    width, height = shape
    t = types.values
    pixels = bytearray()
    for v in range(graph.node_count):
        a = placement.agent_of_node[v]
        if a < 0:
            pixels += bytes((0, 255, 0))
        else:
            g = round(255 * (1.0 - float(t[a])))
            pixels += bytes((g, g, g))
    with open(path, "wb") as fh:
        fh.write(f"P6\n{width} {height}\n255\n".encode("ascii"))
        fh.write(bytes(pixels))


DEFAULT_SWEEP_LAMBDAS = (0.1, 0.2, 0.3, 0.5)


def sweep_lambda(
    config: ExperimentConfig,
    lambdas: tuple[float, ...] = DEFAULT_SWEEP_LAMBDAS,
) -> list[MetricsRow]:
    """Cutoff-model aggregates per lambda value; writes one image per value
    (first seed's final state) when the config has an output directory."""
    if config.spec.cost_model != CG:
        raise InstanceError("the lambda sweep applies to the cutoff model")
    out = []
    for lam in lambdas:
        cfg = replace(config, spec=replace(config.spec, lam=lam))
        rows, agg = run_batch(cfg)
        out.append(agg)
        if config.out_dir is not None:
            seed = cfg.seeds[0]
            types, placement = sample_state(cfg.graph, cfg.n_agents, seed)
            final, _, _ = engine.run(
                cfg.graph, types, placement, cfg.spec, seed=seed,
                max_steps=cfg.max_steps,
            )
            render_ppm(
                cfg.graph, types, final,
                os.path.join(config.out_dir, f"sweep_lam{lam:g}.ppm"),
            )
    return out
