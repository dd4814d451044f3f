"""Command-line interface.

Subcommands: simulate (one seeded run), batch (multi-seed CSV, including the
standard eight-row torus benchmark), sweep (cutoff-threshold sweep),
construct (closed-form equilibria), verify / optimum / exists / maxedge
(exhaustive checks on instance files), fixtures (bundled worked instances).

A config file of flat key=value lines can preload any flag; explicit flags
win over the file.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import constructors, engine, experiments, oracle
from .core import (
    ADG,
    CG,
    HIS,
    JUMP,
    MDG,
    SWAP,
    UIS,
    GameSpec,
    Graph,
    InstanceError,
    Swap,
    parse_instance,
)
from .graphs import (
    fixture_by_name,
    fixtures,
    make_clique,
    make_path,
    make_ring,
    make_star,
    make_torus,
)


def parse_graph(text: str) -> Graph:
    """Graph descriptors: torus:50x50:r1, path:N, ring:N, clique:N, star:N,
    file:PATH."""
    kind, _, rest = text.partition(":")
    if kind == "torus":
        dims, _, radius = rest.partition(":")
        w, _, h = dims.partition("x")
        r = int(radius.lstrip("r")) if radius else 1
        return make_torus(int(w), int(h), radius=r)
    if kind == "path":
        return make_path(int(rest))
    if kind == "ring":
        return make_ring(int(rest))
    if kind == "clique":
        return make_clique(int(rest))
    if kind == "star":
        return make_star(int(rest))
    if kind == "file":
        with open(rest) as fh:
            return parse_instance(fh.read()).graph
    raise InstanceError(f"unknown graph descriptor {text!r}")


def parse_model(text: str) -> tuple[str, float | None]:
    if text == "mdg":
        return MDG, None
    if text == "adg":
        return ADG, None
    if text.startswith("cg:"):
        return CG, float(text[3:])
    raise InstanceError(f"unknown model {text!r} (mdg | adg | cg:LAMBDA)")


def parse_seeds(text: str) -> tuple[int, ...]:
    """'A..B' is the inclusive range, otherwise a comma list of integers."""
    if ".." in text:
        lo, _, hi = text.partition("..")
        return tuple(range(int(lo), int(hi) + 1))
    return tuple(int(x) for x in text.split(","))


def build_spec(args) -> GameSpec:
    model, lam = parse_model(args.model)
    deviation = SWAP if args.mode == "swap" else JUMP
    return GameSpec(model, deviation=deviation, isolation=args.isolation, lam=lam)


def _add_run_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--graph", default="torus:50x50:r1")
    p.add_argument("--model", default="mdg")
    p.add_argument("--mode", choices=["swap", "jump"], default="swap")
    p.add_argument("--isolation", choices=[UIS, HIS], default=UIS)
    p.add_argument("--empty-frac", type=float, default=0.0)
    p.add_argument("--seeds", default="0..0")
    p.add_argument("--max-steps", type=int, default=10**7)
    p.add_argument("--policy", choices=["random", "first", "best"],
                   default="random")
    p.add_argument("--out", default=None, help="output directory")


def _add_instance_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("instance", help="instance file path")
    p.add_argument("--model", default="mdg")
    p.add_argument("--mode", choices=["swap", "jump"], default="swap")
    p.add_argument("--isolation", choices=[UIS, HIS], default=UIS)


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="schelling",
        description="Schelling games with continuous types: dynamics, "
                    "constructions, exhaustive checks, experiments.",
    )
    parser.add_argument("--config", default=None,
                        help="key=value file preloading any flag")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="one seeded run")
    _add_run_flags(p)
    p.add_argument("--trace", default=None,
                   help="write the move sequence to this file")

    p = sub.add_parser("batch", help="multi-seed runs, CSV output")
    _add_run_flags(p)
    p.add_argument("--table2", action="store_true",
                   help="run the standard eight torus benchmark rows")

    p = sub.add_parser("sweep", help="cutoff-threshold sweep")
    _add_run_flags(p)
    p.add_argument("--lambdas", default="0.1,0.2,0.3,0.5")

    p = sub.add_parser("construct", help="closed-form equilibrium")
    p.add_argument("algorithm",
                   choices=["bfs", "sorted-path", "path-gaps", "k2e",
                            "two-empty"])
    p.add_argument("instance")

    for name, hlp in [("verify", "check a placement for profitable moves"),
                      ("optimum", "exact social optimum"),
                      ("exists", "exhaustive equilibrium search"),
                      ("maxedge", "exact min-max edge cost")]:
        p = sub.add_parser(name, help=hlp)
        _add_instance_flags(p)

    p = sub.add_parser("fixtures", help="bundled worked instances")
    p.add_argument("action", choices=["list", "export"])
    p.add_argument("name", nargs="?", default=None)
    return parser


def load_config(path: str) -> dict:
    out = {}
    with open(path) as fh:
        for ln in fh:
            ln = ln.strip()
            if not ln or ln.startswith("#"):
                continue
            key, _, value = ln.partition("=")
            out[key.strip().replace("-", "_")] = value.strip()
    return out


def _apply_config(parser: argparse.ArgumentParser, argv: list[str]) -> argparse.Namespace:
    # first pass finds --config; its values become defaults, flags still win
    probe = argparse.ArgumentParser(add_help=False)
    probe.add_argument("--config", default=None)
    known, _ = probe.parse_known_args(argv)
    if known.config:
        raw = load_config(known.config)
        typed = {}
        for key, value in raw.items():
            if key in ("max_steps",):
                typed[key] = int(value)
            elif key in ("empty_frac",):
                typed[key] = float(value)
            elif key == "table2":
                typed[key] = value.lower() in ("1", "true", "yes")
            else:
                typed[key] = value
        parser.set_defaults(**typed)
        # subparsers carry their own defaults which would win otherwise
        for action in parser._actions:
            if isinstance(action, argparse._SubParsersAction):
                for sub in action.choices.values():
                    sub.set_defaults(**typed)
    return parser.parse_args(argv)


def _config_from_args(args) -> experiments.ExperimentConfig:
    return experiments.ExperimentConfig(
        graph=parse_graph(args.graph),
        spec=build_spec(args),
        seeds=parse_seeds(args.seeds),
        empty_frac=args.empty_frac,
        max_steps=args.max_steps,
        policy=args.policy,
        out_dir=args.out,
    )


def cmd_simulate(args) -> int:
    cfg = _config_from_args(args)
    seed = cfg.seeds[0]
    if args.trace:
        from .dynamics import GameState, run_dynamics

        graph = cfg.graph
        types, placement = experiments.sample_state(graph, cfg.n_agents, seed)
        state = GameState(graph, types, placement, cfg.spec)
        with open(args.trace, "w") as fh:
            res = run_dynamics(state, policy=args.policy, seed=seed,
                               max_steps=cfg.max_steps, trace_file=fh)
        final, steps, converged = res.placement, res.steps, res.converged
        metrics = experiments.compute_metrics(graph, types, final,
                                              cfg.spec.isolation)
        row = experiments.MetricsRow(model=cfg.spec.label(), seed=seed,
                                     converged=converged, steps=steps,
                                     **metrics)
    else:
        row = experiments.run_single(cfg, seed)
    sys.stdout.write(experiments.csv_string([row]))
    print(f"max_edge_cost,{row.max_edge:.6g}")
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        types, placement = experiments.sample_state(cfg.graph, cfg.n_agents, seed)
        final, _, _ = engine.run(cfg.graph, types, placement, cfg.spec,
                                 seed=seed, max_steps=cfg.max_steps)
        experiments.render_ppm(cfg.graph, types, final,
                               os.path.join(args.out, f"state_seed{seed}.ppm"))
    return 0


_TABLE2_ROWS = [
    ("mdg", "swap", 0.0), ("adg", "swap", 0.0),
    ("cg:0.1", "swap", 0.0), ("cg:0.2", "swap", 0.0),
    ("mdg", "jump", 0.02), ("adg", "jump", 0.02),
    ("cg:0.1", "jump", 0.02), ("cg:0.2", "jump", 0.02),
]


def cmd_batch(args) -> int:
    rows_out = []
    if args.table2:
        for model, mode, frac in _TABLE2_ROWS:
            args.model, args.mode, args.empty_frac = model, mode, frac
            args.isolation = UIS
            cfg = _config_from_args(args)
            rows, agg = experiments.run_batch(cfg)
            rows_out.extend(rows)
            rows_out.append(agg)
    else:
        cfg = _config_from_args(args)
        rows, agg = experiments.run_batch(cfg)
        rows_out = rows + [agg]
    text = experiments.csv_string(rows_out)
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        path = os.path.join(args.out, "results.csv")
        with open(path, "w") as fh:
            fh.write(text)
        print(f"wrote {path}")
    else:
        sys.stdout.write(text)
    return 0


def cmd_sweep(args) -> int:
    if not args.model.startswith("cg:"):
        args.model = "cg:0.1"
    cfg = _config_from_args(args)
    if args.out:
        os.makedirs(args.out, exist_ok=True)
    lambdas = tuple(float(x) for x in args.lambdas.split(","))
    rows = experiments.sweep_lambda(cfg, lambdas)
    for lam, row in zip(lambdas, rows):
        row.model = f"{cfg.spec.label().split('(')[0]}({lam:g})"
    sys.stdout.write(experiments.csv_string(rows))
    return 0


def cmd_construct(args) -> int:
    with open(args.instance) as fh:
        inst = parse_instance(fh.read())
    graph, types = inst.graph, inst.types
    if args.algorithm == "bfs":
        placement = constructors.se_mdg_bfs(graph, types)
    elif args.algorithm == "sorted-path":
        placement = constructors.sorted_path_placement(types)
    elif args.algorithm == "path-gaps":
        placement = constructors.je_his_path(types, graph.node_count)
    elif args.algorithm == "k2e":
        placement = constructors.je_his_k2e(graph, types)
        if placement is None:
            print("no K_{2,e} subgraph found", file=sys.stderr)
            return 1
    else:
        placement = constructors.je_his_two_empty(graph, types)
    print(" ".join(str(int(v)) for v in placement.node_of_agent))
    return 0


def _load_checked(args):
    with open(args.instance) as fh:
        inst = parse_instance(fh.read())
    return inst, build_spec(args)


def cmd_verify(args) -> int:
    inst, spec = _load_checked(args)
    if inst.placement is None:
        print("instance file has no placement line", file=sys.stderr)
        return 1
    verdict = oracle.is_equilibrium(inst.graph, inst.types, inst.placement, spec)
    if verdict.holds:
        print("equilibrium")
        return 0
    w = verdict.witness
    if isinstance(w, Swap):
        print(f"not an equilibrium: profitable swap {w.i} {w.j}")
    else:
        print(f"not an equilibrium: profitable jump {w.agent} -> {w.target}")
    return 1


def cmd_optimum(args) -> int:
    inst, spec = _load_checked(args)
    res = oracle.brute_force_optimum(inst.graph, inst.types, spec)
    print(f"optimum {res.cost:.12g} ({res.enumerated} placements enumerated)")
    print(" ".join(str(int(v)) for v in res.placement.node_of_agent))
    return 0


def cmd_exists(args) -> int:
    inst, spec = _load_checked(args)
    found = oracle.equilibrium_exists(inst.graph, inst.types, spec)
    if found is None:
        print("no equilibrium exists")
        return 1
    print("equilibrium exists")
    print(" ".join(str(int(v)) for v in found.node_of_agent))
    return 0


def cmd_maxedge(args) -> int:
    inst, spec = _load_checked(args)
    res = oracle.min_maxedge(inst.graph, inst.types)
    print(f"min max-edge-cost {res.value:.12g} "
          f"({res.enumerated} placements enumerated)")
    print(" ".join(str(int(v)) for v in res.placement.node_of_agent))
    return 0


def cmd_fixtures(args) -> int:
    from .core import format_instance

    if args.action == "list":
        for fx in fixtures():
            print(f"{fx.name}: {fx.spec.label()}, {fx.claim.kind}")
        return 0
    if not args.name:
        print("export needs a fixture name", file=sys.stderr)
        return 1
    fx = fixture_by_name(args.name)
    sys.stdout.write(format_instance(fx.graph, fx.types, fx.placement))
    return 0


_COMMANDS = {
    "simulate": cmd_simulate,
    "batch": cmd_batch,
    "sweep": cmd_sweep,
    "construct": cmd_construct,
    "verify": cmd_verify,
    "optimum": cmd_optimum,
    "exists": cmd_exists,
    "maxedge": cmd_maxedge,
    "fixtures": cmd_fixtures,
}


def main(argv: list[str] | None = None) -> int:
    parser = make_parser()
    args = _apply_config(parser, sys.argv[1:] if argv is None else argv)
    try:
        return _COMMANDS[args.command](args)
    except (InstanceError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
