"""Command-line front end.

Subcommands: bound, gatecount, dqpt, random, simulate, decompose.  Flags given
on the command line override values from --config (a JSON file mirroring
ExperimentConfig).  Exit codes: 0 success, 2 configuration error, 3
budget/limit failure.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import bounds, models, trotter
from .experiments import (
    BudgetError,
    ConfigError,
    ExperimentConfig,
    build_model,
    build_observable,
    emit,
    run_decompose,
    run_dqpt,
    run_gatecount,
    run_random,
    run_simulate,
)
from .lightcone import build_hypergraph, color_hypergraph


def _parse_params(text: str) -> dict:
    out = {}
    for chunk in text.split(","):
        if not chunk.strip():
            continue
        key, _, value = chunk.partition("=")
        if not _:
            raise ConfigError(f"bad --params entry {chunk!r}, expected key=value")
        out[key.strip()] = float(value)
    return out


def _parse_n(text: str):
    if ":" in text:
        lo, hi = text.split(":")
        return list(range(int(lo), int(hi) + 1))
    if "," in text:
        return [int(v) for v in text.split(",") if v.strip()]
    return int(text)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="paulicone", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("bound", "gatecount", "dqpt", "random", "simulate", "decompose"):
        cmd = sub.add_parser(name)
        cmd.add_argument("--config", help="JSON config file; flags override it")
        cmd.add_argument("--model", choices=["mfi", "tfi", "powerlaw", "nn2d", "file"])
        cmd.add_argument("--params", help="comma list, e.g. J=1,h=0.5,g=1.2,alpha=4")
        cmd.add_argument("--file", help="Pauli-list Hamiltonian (text or JSON)")
        cmd.add_argument("--observable", help="z:<j> | zsum | zzcorr | proj:<k> | pauli:<WORD> | file:<path>")
        cmd.add_argument("--observable-file")
        cmd.add_argument("--n", help="int, comma list, or lo:hi range")
        cmd.add_argument("--t")
        cmd.add_argument("--r", type=int)
        cmd.add_argument("--order", type=int)
        cmd.add_argument("--epsilon", type=float)
        cmd.add_argument("--samples", type=int)
        cmd.add_argument("--seed", type=int)
        cmd.add_argument("--norm-mode", choices=["dense", "one-norm"])
        cmd.add_argument("--no-merge", action="store_true")
        cmd.add_argument("--merge-across-steps", action="store_true")
        cmd.add_argument("--budget", type=int)
        cmd.add_argument("--k", type=int)
        cmd.add_argument("--d0", type=float)
        cmd.add_argument("--t-max", type=float)
        cmd.add_argument("--t-step", type=float)
        cmd.add_argument("--method", choices=["standard", "reduced", "chromatic"])
        cmd.add_argument("--emit-circuit")
        cmd.add_argument("--output")
        cmd.add_argument("--format", choices=["csv", "json"], dest="fmt")
        cmd.add_argument("--no-empirical", action="store_true")
        if name == "bound":
            cmd.add_argument("--bound", required=True,
                             choices=["worst", "thm1", "thm2", "rand2", "rand1", "rand-noobs"])
            cmd.add_argument("--search-r", action="store_true",
                             help="binary-search the smallest r meeting --epsilon")
        if name == "decompose":
            cmd.add_argument("--decompose", choices=["edge-sets", "hypergraph", "cubes"])
            cmd.add_argument("--support", help="comma list of qubits")
    return parser


def _config_from_args(args) -> ExperimentConfig:
    cfg = ExperimentConfig.from_json(args.config) if args.config else ExperimentConfig()
    cfg.experiment = args.command
    if args.model:
        cfg.model = args.model
    if args.params:
        cfg.params = _parse_params(args.params)
    if args.file:
        cfg.file = args.file
    if args.observable:
        cfg.observable = args.observable
    if getattr(args, "observable_file", None):
        cfg.observable_file = args.observable_file
    if args.n:
        cfg.n = _parse_n(args.n)
    if args.t is not None:
        cfg.t = args.t if args.t == "n" else float(args.t)
    if args.r is not None:
        cfg.r = args.r
    if args.order is not None:
        cfg.order = args.order
    if args.epsilon is not None:
        cfg.epsilon = args.epsilon
    if args.samples is not None:
        cfg.samples = args.samples
    if args.seed is not None:
        cfg.seed = args.seed
    if args.norm_mode:
        cfg.norm_mode = args.norm_mode.replace("-", "_")
    if args.no_merge:
        cfg.merge = False
    if args.merge_across_steps:
        cfg.merge_across_steps = True
    if args.budget is not None:
        cfg.budget = args.budget
    if args.k is not None:
        cfg.k = args.k
    if args.d0 is not None:
        cfg.d0 = args.d0
    if args.t_max is not None:
        cfg.t_max = args.t_max
    if args.t_step is not None:
        cfg.t_step = args.t_step
    if args.method:
        cfg.method = args.method
    if args.emit_circuit:
        cfg.emit_circuit = args.emit_circuit
    if args.output:
        cfg.output = args.output
    if args.fmt:
        cfg.fmt = args.fmt
    if args.no_empirical:
        cfg.include_empirical = False
    if getattr(args, "decompose", None):
        cfg.decompose = args.decompose
    if getattr(args, "support", None):
        cfg.support = [int(v) for v in args.support.split(",")]
    return cfg


def _run_bound(cfg: ExperimentConfig, args) -> dict:
    n = cfg.n if isinstance(cfg.n, int) else (cfg.n or [None])[0]
    if n is None:
        raise ConfigError("bound needs --n")
    h = build_model(cfg, n)
    obs, summands = build_observable(cfg.observable, n)
    parts = models.group_commuting(h)
    if cfg.t is None:
        raise ConfigError("bound needs --t")
    t = float(cfg.t)
    norm_mode = cfg.norm_mode or "one_norm"
    from .experiments import _obs_norm

    def at(r: int) -> bounds.BoundReport:
        if args.bound == "worst":
            return bounds.worst_case_p2_bound(parts, _obs_norm(obs, norm_mode, cfg.dense_limit),
                                              t, r, norm_mode, cfg.dense_limit)
        if args.bound == "thm1":
            return bounds.thm1_bound(h, obs.support(), _obs_norm(obs, norm_mode, cfg.dense_limit),
                                     t, r, norm_mode, cfg.dense_limit)
        if args.bound == "thm2":
            graph = build_hypergraph(h)
            coloring = color_hypergraph(graph, "greedy")
            return bounds.thm2_bound(h, summands, coloring, graph, t, r, norm_mode, cfg.dense_limit)
        if args.bound == "rand2":
            return bounds.random_2design_bound(parts, obs, t, r, cfg.order)
        if args.bound == "rand1":
            return bounds.random_1design_bound(parts, obs, t, r)
        if args.bound == "rand-noobs":
            return bounds.random_bound_no_observable(parts, _obs_norm(obs, "dense", cfg.dense_limit), t, r)
        raise ConfigError(f"unknown bound {args.bound!r}")

    if args.search_r:
        if cfg.epsilon is None:
            raise ConfigError("--search-r needs --epsilon")
        r_star = bounds.steps_for_epsilon(lambda r: at(r).value, cfg.epsilon, cfg.r_max)
        if r_star is None:
            raise BudgetError(f"epsilon {cfg.epsilon} unreachable within r_max={cfg.r_max}")
        report = at(r_star)
        payload = report.to_dict()
        payload["r_star"] = r_star
        return payload
    if cfg.r is None:
        raise ConfigError("bound needs --r (or --search-r)")
    return at(cfg.r).to_dict()


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _config_from_args(args)
        if args.command == "bound":
            result = _run_bound(cfg, args)
        elif args.command == "gatecount":
            result = run_gatecount(cfg)
        elif args.command == "dqpt":
            result = run_dqpt(cfg)
            if any(rec["t"] is None for rec in result["guaranteed"]):
                _emit_or_print(result, cfg)
                print("budget too small for any guaranteed time", file=sys.stderr)
                return 3
        elif args.command == "random":
            result = run_random(cfg)
        elif args.command == "simulate":
            result = run_simulate(cfg)
        elif args.command == "decompose":
            result = run_decompose(cfg)
        else:
            raise ConfigError(f"unknown command {args.command!r}")
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except BudgetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    _emit_or_print(result, cfg)
    return 0


def _emit_or_print(result, cfg: ExperimentConfig) -> None:
    if isinstance(result, list):
        if cfg.output:
            emit(result, cfg.fmt, cfg.output, config=cfg.resolved())
        else:
            print(json.dumps(result, indent=1))
    else:
        if cfg.output:
            from pathlib import Path

            Path(cfg.output).write_text(json.dumps(result, indent=1) + "\n")
        else:
            print(json.dumps(result, indent=1))


if __name__ == "__main__":
    sys.exit(main())
