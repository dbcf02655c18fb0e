"""Batch experiment runners: gate-count sweeps, guaranteed-time scans,
random-input comparisons, and machine-readable emission."""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field, asdict
from pathlib import Path

from . import bounds, exactsim, models, trotter
from .lightcone import build_hypergraph, color_hypergraph
from .pauli import DENSE_LIMIT, PauliString, PauliSum


@dataclass
class ExperimentConfig:
    experiment: str = ""
    model: str = "tfi"
    params: dict = field(default_factory=dict)
    file: str | None = None
    observable: str | None = None
    observable_file: str | None = None
    n: object = None                      # int or list[int]
    t: object = None                      # float, or "n" to track system size
    t_max: float = 3.0
    t_step: float = 0.01
    r: int | None = None
    epsilon: float | None = None
    order: int = 2
    norm_mode: str | None = None          # None = per-experiment default
    norm_modes: dict = field(default_factory=dict)   # per-method overrides
    samples: int = 200
    seed: int | None = None
    budget: int | None = None
    k: int = 3
    r_max: int = 1 << 16
    d0: float | None = None
    merge: bool = True
    merge_across_steps: bool = False
    dense_limit: int = DENSE_LIMIT
    include_empirical: bool = True
    output: str | None = None
    fmt: str = "json"
    emit_circuit: str | None = None
    method: str = "standard"
    decompose: str = "edge-sets"
    support: list | None = None

    @classmethod
    def from_json(cls, path) -> "ExperimentConfig":
        payload = json.loads(Path(path).read_text())
        return cls(**payload)

    def resolved(self) -> dict:
        """Full experiment-defining config for provenance echoes.

        Output destinations are excluded so identical experiments written to
        different paths produce byte-identical files.
        """
        out = asdict(self)
        out.pop("output")
        out.pop("emit_circuit")
        return out

    def norm_mode_for(self, method: str, default: str = "one_norm") -> str:
        return self.norm_modes.get(method) or self.norm_mode or default


class ConfigError(ValueError):
    pass


class BudgetError(RuntimeError):
    pass


def build_model(cfg: ExperimentConfig, n: int) -> PauliSum:
    p = cfg.params
    if cfg.model == "mfi":
        return models.build_mfi(n, p.get("J", 1.0), p.get("h", 0.5), p.get("g", 1.2))
    if cfg.model == "tfi":
        return models.build_tfi(n, p.get("J", 0.2), p.get("h", 1.0))
    if cfg.model == "powerlaw":
        return models.build_power_law(n, p.get("J", 1.0), p.get("h", 0.5), p.get("alpha", 4.0))
    if cfg.model == "nn2d":
        lx = int(p.get("Lx", 0)) or int(math.isqrt(n))
        ly = int(p.get("Ly", 0)) or n // lx
        if lx * ly != n:
            raise ConfigError(f"nn2d needs Lx*Ly == n, got {lx}*{ly} != {n}")
        spec = models.LatticeSpec((lx, ly))
        template = PauliSum(2, [(PauliString.from_text("ZZ"), p.get("J", 1.0))])
        h = models.build_nn_lattice(spec, template)
        hx = p.get("h", 0.0)
        if hx:
            h = h + PauliSum(n, [(PauliString(n, 1 << j, 0), hx) for j in range(n)])
        return h
    if cfg.model == "file":
        if not cfg.file:
            raise ConfigError("model 'file' needs --file")
        return models.load_pauli_file(cfg.file)
    raise ConfigError(f"unknown model {cfg.model!r}")


def build_observable(selector: str | None, n: int) -> tuple[PauliSum, list[PauliSum]]:
    """Observable plus its local-summand split, from a CLI selector.

    Selectors: z:<j>, zsum, zzcorr, proj:<k>, pauli:<WORD>, file:<path>.
    """
    selector = selector or "z:0"
    if selector.startswith("z:"):
        j = int(selector[2:])
        obs = PauliSum(n, [(PauliString(n, 0, 1 << j), 1.0)])
        return obs, [obs]
    if selector == "zsum":
        summands = [PauliSum(n, [(PauliString(n, 0, 1 << j), 1.0)]) for j in range(n)]
        return _sum(summands, n), summands
    if selector == "zzcorr":
        w = 1.0 / (n - 1)
        summands = [
            PauliSum(n, [(PauliString(n, 0, (1 << j) | (1 << (j + 1))), w)]) for j in range(n - 1)
        ]
        return _sum(summands, n), summands
    if selector.startswith("proj:"):
        k = int(selector[5:])
        obs = exactsim.zero_projector(n, k)
        return obs, [obs]
    if selector.startswith("pauli:"):
        obs = PauliSum(n, [(PauliString.from_text(selector[6:]), 1.0)])
        return obs, [obs]
    if selector.startswith("file:"):
        obs = models.load_pauli_file(selector[5:])
        return obs, [PauliSum(obs.n, [(w, c)]) for w, c in obs.items()]
    raise ConfigError(f"unknown observable selector {selector!r}")


def _sum(parts: list[PauliSum], n: int) -> PauliSum:
    acc = PauliSum(n)
    for p in parts:
        acc = acc + p
    return acc


def _obs_norm(obs: PauliSum, norm_mode: str, dense_limit: int) -> float:
    mode = "dense" if (norm_mode == "dense" and obs.n <= dense_limit) else "one_norm_upper"
    from .pauli import operator_norm

    return operator_norm(obs, mode=mode, dense_limit=dense_limit)


def _n_list(cfg: ExperimentConfig) -> list[int]:
    if cfg.n is None:
        raise ConfigError("missing --n")
    if isinstance(cfg.n, int):
        return [cfg.n]
    return [int(v) for v in cfg.n]


def _search_r_loose(fn, epsilon: float, r_max: int) -> int | None:
    """Doubling-plus-bisection step search without the monotonicity assert,
    for empirical (slightly noisy) error curves."""
    if fn(1) <= epsilon:
        return 1
    lo, hi = 1, 1
    while fn(hi) > epsilon:
        if hi >= r_max:
            return None
        lo, hi = hi, min(2 * hi, r_max)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if fn(mid) <= epsilon:
            hi = mid
        else:
            lo = mid
    return hi


# -- gate counts (local and summation observables) -------------------------------


def run_gatecount(cfg: ExperimentConfig) -> list[dict]:
    if cfg.epsilon is None or cfg.t is None:
        raise ConfigError("gatecount needs --epsilon and --t")
    t = float(cfg.t)
    rows = []
    for n in _n_list(cfg):
        h = build_model(cfg, n)
        parts = models.group_commuting(h)
        graph = build_hypergraph(h)
        coloring = color_hypergraph(graph, "greedy")
        obs_local, _ = build_observable(cfg.observable or "z:0", n)
        support = obs_local.support()
        _, summands = build_observable("zzcorr", n)

        def count(circuit) -> int:
            return trotter.gate_count(circuit, "pauli_exponentials")

        jobs = {
            "worst_local": (
                lambda r: bounds.worst_case_p2_bound(
                    parts, _obs_norm(obs_local, cfg.norm_mode_for("worst"), cfg.dense_limit), t, r,
                    cfg.norm_mode_for("worst"), cfg.dense_limit).value,
                lambda r: trotter.standard_formula(parts, t, r, 2, cfg.merge, cfg.merge_across_steps),
            ),
            "thm1_local": (
                lambda r: bounds.thm1_bound(h, support, 1.0, t, r, cfg.norm_mode_for("thm1"), cfg.dense_limit).value,
                lambda r: trotter.reduced_formula(h, support, t, r, 2, cfg.merge, cfg.merge_across_steps),
            ),
            "worst_global": (
                lambda r: bounds.worst_case_p2_bound(parts, 1.0, t, r, cfg.norm_mode_for("worst"), cfg.dense_limit).value,
                lambda r: trotter.standard_formula(parts, t, r, 2, cfg.merge, cfg.merge_across_steps),
            ),
            "thm2_global": (
                lambda r: bounds.thm2_bound(h, summands, coloring, graph, t, r,
                                            cfg.norm_mode_for("thm2"), cfg.dense_limit).value,
                lambda r: trotter.chromatic_formula(h, coloring, graph, t, r, 2, cfg.merge, cfg.merge_across_steps),
            ),
        }
        for method, (bound_fn, circuit_fn) in jobs.items():
            r_star = bounds.steps_for_epsilon(bound_fn, cfg.epsilon, cfg.r_max)
            row = {"n": n, "method": method, "bound_r": r_star, "exponential_count": None, "flagged": r_star is None}
            if r_star is not None:
                row["exponential_count"] = count(circuit_fn(r_star))
            rows.append(row)

        if cfg.include_empirical and n <= cfg.dense_limit and n <= 8:
            for method, circuit_fn, obs in (
                ("alg1_empirical", jobs["thm1_local"][1], obs_local),
                ("alg2_empirical", jobs["thm2_global"][1], _sum(summands, n)),
            ):
                r_emp = _search_r_loose(
                    lambda r: exactsim.heisenberg_error(h, obs, circuit_fn(r), t, cfg.dense_limit),
                    cfg.epsilon,
                    min(cfg.r_max, 256),
                )
                row = {"n": n, "method": method, "bound_r": r_emp, "exponential_count": None, "flagged": r_emp is None}
                if r_emp is not None:
                    row["exponential_count"] = count(circuit_fn(r_emp))
                rows.append(row)
    return rows


# -- guaranteed simulation times for the projected-echo experiment ----------------


def run_dqpt(cfg: ExperimentConfig) -> dict:
    if cfg.epsilon is None or cfg.budget is None:
        raise ConfigError("dqpt needs --epsilon and --budget")
    n = _n_list(cfg)[0]
    h = build_model(cfg, n)
    support = frozenset(range(cfg.k))
    parts = models.group_commuting(h)
    grid = [round(cfg.t_step * i, 10) for i in range(1, int(round(cfg.t_max / cfg.t_step)) + 1)]

    # Layer commutators around a local support stay local, so their spectral
    # norms are cheap at any n; the worst-case staircase commutators are
    # extensive and default to the scalable 1-norm relaxation instead.
    thm1_mode = cfg.norm_mode_for("thm1", "dense")
    worst_mode = cfg.norm_mode_for("worst", "one_norm")
    methods = {
        "thm1": (
            lambda t, r: bounds.thm1_bound(h, support, 1.0, t, r, thm1_mode, cfg.dense_limit).value,
            lambda t, r: trotter.reduced_formula(h, support, t, r, 2, cfg.merge, cfg.merge_across_steps),
        ),
        "worst": (
            lambda t, r: bounds.worst_case_p2_bound(parts, 1.0, t, r, worst_mode, cfg.dense_limit).value,
            lambda t, r: trotter.standard_formula(parts, t, r, 2, cfg.merge, cfg.merge_across_steps),
        ),
    }

    guaranteed = []
    for name, (bound_fn, circuit_fn) in methods.items():
        best = None
        for t in reversed(grid):
            r_star = bounds.steps_for_epsilon(lambda r: bound_fn(t, r), cfg.epsilon, cfg.r_max)
            if r_star is None:
                continue
            count = trotter.gate_count(circuit_fn(t, r_star), "pauli_exponentials")
            if count <= cfg.budget:
                best = {"method": name, "t": t, "r": r_star, "dt": t / r_star, "exponential_count": count}
                break
        if best is None:
            best = {"method": name, "t": None, "r": None, "dt": None, "exponential_count": None}
        guaranteed.append(best)

    series = []
    if n <= cfg.dense_limit and cfg.include_empirical:
        for rec in guaranteed:
            if rec["t"] is None:
                continue
            name = rec["method"]
            _, circuit_fn = methods[name]
            ts = [rec["dt"] * j for j in range(1, rec["r"] + 1)]
            for kind, builder in (
                ("exact", None),
                (name, lambda t, _dt=rec["dt"]: methods[name][1](t, max(1, round(t / _dt)))),
            ):
                for pt in exactsim.rate_function(h, cfg.k, ts, builder, cfg.dense_limit):
                    series.append(
                        {"method": kind, "t": pt.t, "lambda_k": pt.value, "singular": pt.singular}
                    )
    return {"config": cfg.resolved(), "guaranteed": guaranteed, "series": series}


# -- random-input comparisons -----------------------------------------------------


def run_random(cfg: ExperimentConfig) -> list[dict]:
    if cfg.file:
        return _run_random_molecular(cfg)
    if cfg.r is None:
        raise ConfigError("random sweep needs --r")
    rows = []
    for n in _n_list(cfg):
        t = float(n) if cfg.t in (None, "n") else float(cfg.t)
        h = build_model(cfg, n)
        parts = models.group_commuting(h)
        obs, _ = build_observable(cfg.observable or "zsum", n)
        worst = bounds.worst_case_p2_bound(
            parts, _obs_norm(obs, cfg.norm_mode_for("worst"), cfg.dense_limit), t, cfg.r,
            cfg.norm_mode_for("worst"), cfg.dense_limit)
        noobs = bounds.random_bound_no_observable(parts, _obs_norm(obs, "dense", cfg.dense_limit), t, cfg.r)
        ours = bounds.random_2design_bound(parts, obs, t, cfg.r)
        row = {
            "x": n,
            "t": t,
            "r": cfg.r,
            "worst_bound": worst.value,
            "noobs_bound": noobs.value,
            "ours_bound": ours.value,
            "empirical_mean": None,
            "empirical_std": None,
            "flagged": False,
        }
        if cfg.include_empirical and n <= cfg.dense_limit and cfg.samples >= 2:
            circuit = trotter.standard_formula(parts, t, cfg.r, 2, cfg.merge, cfg.merge_across_steps)
            emp = exactsim.empirical_average_error(
                h, obs, circuit, t, cfg.samples, cfg.seed or 0, cfg.dense_limit)
            row["empirical_mean"], row["empirical_std"] = emp.mean, emp.std
        else:
            row["flagged"] = True
        rows.append(row)
    return rows


def _run_random_molecular(cfg: ExperimentConfig) -> list[dict]:
    if not cfg.observable_file:
        raise ConfigError("molecular random run needs --observable-file")
    h = models.load_pauli_file(cfg.file)
    obs = models.load_pauli_file(cfg.observable_file)
    if h.n != obs.n:
        raise ConfigError("Hamiltonian and observable qubit counts differ")
    h_parts = models.group_commuting(h)
    o_groups = models.group_commuting(obs)
    if cfg.r is None or cfg.t is None:
        raise ConfigError("molecular run needs --t and --r")
    ts = [float(cfg.t)] if not isinstance(cfg.t, list) else [float(v) for v in cfg.t]
    rows = []
    for t in ts:
        worst = sum(
            bounds.worst_case_p2_bound(
                h_parts, _obs_norm(g, cfg.norm_mode_for("worst"), cfg.dense_limit), t, cfg.r,
                cfg.norm_mode_for("worst"), cfg.dense_limit).value
            for g in o_groups
        )
        noobs = sum(
            bounds.random_bound_no_observable(h_parts, _obs_norm(g, "dense", cfg.dense_limit), t, cfg.r).value
            for g in o_groups
        )
        ours = sum(bounds.random_2design_bound(h_parts, g, t, cfg.r).value for g in o_groups)
        row = {
            "x": t,
            "t": t,
            "r": cfg.r,
            "worst_bound": worst,
            "noobs_bound": noobs,
            "ours_bound": ours,
            "empirical_mean": None,
            "empirical_std": None,
            "flagged": False,
        }
        if cfg.include_empirical and h.n <= cfg.dense_limit and cfg.samples >= 2:
            import numpy as np

            circuit = trotter.standard_formula(h_parts, t, cfg.r, 2, cfg.merge, cfg.merge_across_steps)
            u0 = exactsim.exact_evolution(h, t, cfg.dense_limit)
            uc = exactsim.apply_circuit(circuit, cfg.dense_limit)
            deltas = [
                exactsim.conjugate(u0, exactsim.materialize(g, cfg.dense_limit))
                - exactsim.conjugate(uc, exactsim.materialize(g, cfg.dense_limit))
                for g in o_groups
            ]
            vals = []
            for i in range(cfg.samples):
                psi = exactsim.sample_haar(h.n, (cfg.seed or 0, i), cfg.dense_limit)
                vals.append(float(sum(abs(np.vdot(psi, d @ psi)) for d in deltas)))
            arr = np.asarray(vals)
            row["empirical_mean"], row["empirical_std"] = float(arr.mean()), float(arr.std(ddof=1))
        else:
            row["flagged"] = True
        rows.append(row)
    return rows


# -- single-shot simulate / decompose ---------------------------------------------


def run_simulate(cfg: ExperimentConfig) -> dict:
    n = _n_list(cfg)[0]
    h = build_model(cfg, n)
    if cfg.t is None or cfg.r is None:
        raise ConfigError("simulate needs --t and --r")
    t, r = float(cfg.t), cfg.r
    obs, summands = build_observable(cfg.observable or "z:0", n)
    if cfg.method == "standard":
        circuit = trotter.standard_formula(models.group_commuting(h), t, r, cfg.order, cfg.merge, cfg.merge_across_steps)
    elif cfg.method == "reduced":
        circuit = trotter.reduced_formula(h, obs.support(), t, r, cfg.order, cfg.merge, cfg.merge_across_steps)
    elif cfg.method == "chromatic":
        graph = build_hypergraph(h)
        coloring = color_hypergraph(graph, "greedy")
        circuit = trotter.chromatic_formula(h, coloring, graph, t, r, cfg.order, cfg.merge, cfg.merge_across_steps)
    else:
        raise ConfigError(f"unknown method {cfg.method!r}")
    out = {
        "config": cfg.resolved(),
        "n": n,
        "gates": trotter.gate_count(circuit, "generator_exponentials"),
        "pauli_exponentials": trotter.gate_count(circuit, "pauli_exponentials"),
        "heisenberg_error": None,
    }
    if n <= cfg.dense_limit:
        out["heisenberg_error"] = exactsim.heisenberg_error(h, obs, circuit, t, cfg.dense_limit)
    if cfg.emit_circuit:
        Path(cfg.emit_circuit).write_text(circuit.to_json() + "\n")
    return out


def run_decompose(cfg: ExperimentConfig) -> dict:
    n = _n_list(cfg)[0]
    h = build_model(cfg, n)
    if cfg.decompose == "edge-sets":
        support = frozenset(cfg.support or [0])
        from .lightcone import edge_sets

        decomp = edge_sets(h, support)
        return {
            "config": cfg.resolved(),
            "support": sorted(support),
            "layers": [
                {
                    "k": k,
                    "edge_set": sorted(decomp.edges[k]),
                    "terms": [{"pauli": w.text(), "coeff": c} for w, c in decomp.subs[k].items()],
                }
                for k in range(len(decomp.subs))
            ],
            "tail": [{"pauli": w.text(), "coeff": c} for w, c in decomp.tail.items()],
        }
    if cfg.decompose == "hypergraph":
        graph = build_hypergraph(h)
        coloring = color_hypergraph(graph, "greedy")
        return {
            "config": cfg.resolved(),
            "chi": coloring.chi,
            "hyperedges": [
                {
                    "qubits": sorted(graph.hyperedges[i]),
                    "color": coloring.assignment[i],
                    "terms": [{"pauli": w.text(), "coeff": c} for w, c in graph.subs[i].items()],
                }
                for i in range(graph.num_edges)
            ],
        }
    if cfg.decompose == "cubes":
        if cfg.d0 is None:
            raise ConfigError("cube decomposition needs --d0")
        from .lightcone import cube_regroup

        lattice = models.chain(n)
        graph, coloring = cube_regroup(h, lattice, cfg.d0)
        return {
            "config": cfg.resolved(),
            "chi": coloring.chi,
            "groups": [
                {
                    "qubits": sorted(graph.hyperedges[i]),
                    "color": coloring.assignment[i],
                    "terms": [{"pauli": w.text(), "coeff": c} for w, c in graph.subs[i].items()],
                }
                for i in range(graph.num_edges)
            ],
        }
    raise ConfigError(f"unknown decomposition {cfg.decompose!r}")


# -- emission ---------------------------------------------------------------------


def emit(rows: list[dict], fmt: str, path, config: dict | None = None) -> None:
    """Write rows as CSV or JSON with a stable column order.

    JSON output is an array of objects with identical keys; when a config is
    supplied it is embedded as {"config": ..., "rows": [...]} (JSON) or a
    leading '# config ...' comment line (CSV).
    """
    path = Path(path)
    if rows and any(set(r) != set(rows[0]) for r in rows):
        raise ValueError("rows are not homogeneous")
    if fmt == "json":
        payload = rows if config is None else {"config": config, "rows": rows}
        path.write_text(json.dumps(payload, indent=1) + "\n")
    elif fmt == "csv":
        columns = list(rows[0].keys()) if rows else []
        with path.open("w", newline="", encoding="utf-8") as fh:
            if config is not None:
                fh.write("# config " + json.dumps(config, sort_keys=True) + "\n")
            writer = csv.writer(fh)
            writer.writerow(columns)
            for row in rows:
                writer.writerow([row[c] for c in columns])
    else:
        raise ValueError(f"unknown format {fmt!r}")
