"""Acceptance suite: one test per release criterion, each printing a
PASS/FAIL line with the measured values.  Run with `pytest -s` to see the
lines as they complete."""

import math
import random
import time

import numpy as np
import pytest

import paulicone as pc
from paulicone import bounds as bd
from paulicone import exactsim as xs
from paulicone.experiments import ExperimentConfig, run_dqpt
from paulicone.lightcone import build_hypergraph, color_hypergraph, edge_sets, propagate
from paulicone.pauli import PauliString, PauliSum


def _report(criterion: str, ok: bool, detail: str) -> None:
    print(f"ACCEPTANCE {criterion}: {'PASS' if ok else 'FAIL'} - {detail}")
    assert ok, detail


def zsum(n):
    return PauliSum(n, [(PauliString(n, 0, 1 << j), 1.0) for j in range(n)])


def zzcorr(n):
    w = 1.0 / (n - 1)
    summands = [PauliSum(n, [(PauliString(n, 0, (1 << j) | (1 << (j + 1))), w)]) for j in range(n - 1)]
    total = PauliSum(n)
    for s in summands:
        total = total + s
    return total, summands


MODELS = {
    "tfi_a": lambda n: pc.build_tfi(n, 0.2, 1.0),
    "tfi_b": lambda n: pc.build_tfi(n, 1.0, 1.0),
    "mfi": lambda n: pc.build_mfi(n, 1.0, 0.5, 1.2),
    "powerlaw": lambda n: pc.build_power_law(n, 1.0, 0.5, 4.0),
}


def test_criterion_1_dqpt_guaranteed_times():
    start = time.time()
    cfg = ExperimentConfig(
        experiment="dqpt", model="tfi", params={"J": 0.2, "h": 1.0}, n=12, k=3,
        epsilon=0.05, budget=500, include_empirical=False,
    )
    out = run_dqpt(cfg)
    rec = {r["method"]: r for r in out["guaranteed"]}
    elapsed = time.time() - start
    t1, dt1 = rec["thm1"]["t"], rec["thm1"]["dt"]
    tw, dtw = rec["worst"]["t"], rec["worst"]["dt"]
    ok = (
        abs(t1 - 1.80) <= 0.03
        and abs(tw - 1.15) <= 0.03
        and abs(dt1 - 0.12) <= 0.01 + 1e-9
        and abs(dtw - 0.08) <= 0.01 + 1e-9
        and elapsed <= 300
    )
    _report(
        "1 (guaranteed times)",
        ok,
        f"thm1 t={t1} dt={dt1:.4f}, worst t={tw} dt={dtw:.4f}, "
        f"counts {rec['thm1']['exponential_count']}/{rec['worst']['exponential_count']} <= 500, "
        f"{elapsed:.0f}s",
    )


def test_criterion_2_bound_soundness_suite():
    start = time.time()
    t = 0.6
    instances = 0
    violations = []
    for name, make in MODELS.items():
        for n in (4, 6, 8):
            h = make(n)
            parts = pc.group_commuting(h)
            z0 = PauliSum(n, [(PauliString(n, 0, 1), 1.0)])
            og, summands = zzcorr(n)
            graph = build_hypergraph(h)
            col = color_hypergraph(graph, "greedy")
            zs = zsum(n)
            for r in (1, 4, 16):
                instances += 1
                checks = {
                    "worst": (
                        xs.heisenberg_error(h, z0, pc.standard_formula(parts, t, r, 2), t),
                        bd.worst_case_p2_bound(parts, 1.0, t, r, "dense").value,
                    ),
                    "thm1": (
                        xs.heisenberg_error(h, z0, pc.reduced_formula(h, {0}, t, r, 2), t),
                        bd.thm1_bound(h, {0}, 1.0, t, r, "dense").value,
                    ),
                    "thm2": (
                        xs.heisenberg_error(h, og, pc.chromatic_formula(h, col, graph, t, r, 2), t),
                        bd.thm2_bound(h, summands, col, graph, t, r, "dense").value,
                    ),
                }
                emp = xs.empirical_average_error(
                    h, zs, pc.standard_formula(parts, t, r, 2), t, 200, 42)
                checks["rand2"] = (emp.mean, bd.random_2design_bound(parts, zs, t, r).value)
                checks["rand1"] = (emp.mean, bd.random_1design_bound(parts, zs, t, r).value)
                for kind, (err, bound) in checks.items():
                    if err > bound:
                        violations.append((name, n, r, kind, err, bound))
    elapsed = time.time() - start
    ok = instances >= 30 and not violations and elapsed <= 600
    _report(
        "2 (bound soundness)",
        ok,
        f"{instances} instances x 5 bound kinds, {len(violations)} violations, {elapsed:.0f}s",
    )


def test_criterion_3_support_propagation_property():
    rng = random.Random(2024)
    superset_checks = 0
    while superset_checks < 200:
        n = rng.randint(4, 10)
        h = pc.build_mfi(n, 1.0, 0.5, 1.2)
        q = rng.randrange(n)
        d = edge_sets(h, {q})
        words = list(h.items())
        rng.shuffle(words)
        gamma = rng.randint(1, 5)
        parts = [PauliSum(n, words[i::gamma]) for i in range(gamma)]
        parts = [p for p in parts if not p.is_zero()]
        ups = rng.randint(1, 4)
        seq = []
        for _ in range(ups):
            order = list(range(len(parts)))
            rng.shuffle(order)
            seq += [parts[i].support() for i in order]
        assert propagate(seq, {q}) >= d.reached(ups), "random configuration fell below the edge-set union"
        superset_checks += 1

    equality_checks = 0
    for n in (6, 8, 10):
        h = pc.build_tfi(n, 0.2, 1.0)
        for q in (0, n // 2):
            d = edge_sets(h, {q})
            layers = d.subs
            for ups in (1, 2, 3, 4):
                seq = []
                for stage in range(1, ups + 1):
                    evens = [i for i in range(len(layers)) if i % 2 == 0]
                    odds = [i for i in range(len(layers)) if i % 2 == 1]
                    order = evens + odds if stage % 2 == 1 else odds + evens
                    seq += [layers[i].support() for i in order]
                assert propagate(seq, {q}) == d.reached(ups), "even-odd equality failed"
                equality_checks += 1
    _report(
        "3 (support propagation)",
        True,
        f"{superset_checks} random superset checks, {equality_checks} even-odd equality checks",
    )


def test_criterion_4_reduced_equals_virtual():
    rng = random.Random(7)
    worst = 0.0
    for case in range(20):
        kind = rng.choice(list(MODELS))
        n = rng.randint(5, 8)
        h = MODELS[kind](n)
        s = {rng.randrange(n)}
        r = rng.randint(1, 4)
        t = rng.uniform(0.2, 0.8)
        obs = xs.materialize(PauliSum(n, [(PauliString(n, 0, 1 << min(s)), 1.0)]))
        ur = xs.apply_circuit(pc.reduced_formula(h, s, t, r, 2))
        uv = xs.apply_circuit(pc.virtual_formula(h, s, t, r, 2))
        diff = np.linalg.norm(ur @ obs @ ur.conj().T - uv @ obs @ uv.conj().T, 2)
        worst = max(worst, diff)
    _report("4 (reduced == virtual)", worst <= 1e-10, f"20 cases, max conjugation gap {worst:.2e}")


def test_criterion_5_order_scaling():
    h = pc.build_tfi(6, 1.0, 1.0)
    parts = pc.group_commuting(h)
    z0 = PauliSum(6, [(PauliString(6, 0, 1), 1.0)])
    slopes = {}
    for p, target in ((1, -1.0), (2, -2.0)):
        rs = [4, 8, 16, 32, 64]
        errs = [xs.heisenberg_error(h, z0, pc.standard_formula(parts, 1.0, r, p), 1.0) for r in rs]
        slopes[p] = float(np.polyfit(np.log(rs), np.log(errs), 1)[0])
    ok = abs(slopes[1] + 1.0) <= 0.15 and abs(slopes[2] + 2.0) <= 0.15
    _report("5 (order scaling)", ok, f"slopes p1={slopes[1]:.3f}, p2={slopes[2]:.3f}")


def test_criterion_6_size_independent_counts():
    reduced_counts = []
    standard_counts = []
    ns = [20, 50, 100, 200]
    for n in ns:
        h = pc.build_mfi(n, 1.0, 0.5, 1.2)
        reduced_counts.append(
            pc.gate_count(pc.reduced_formula(h, {0}, 0.1, 4, 2), "pauli_exponentials"))
        standard_counts.append(
            pc.gate_count(pc.standard_formula(pc.group_commuting(h), 0.1, 4, 2, merge_across_steps=False),
                          "pauli_exponentials"))
    flat = len(set(reduced_counts)) == 1
    ratios = [standard_counts[i] / ns[i] for i in range(len(ns))]
    linear = max(ratios) / min(ratios) <= 1.05
    _report(
        "6 (size independence)",
        flat and linear,
        f"reduced counts {reduced_counts} flat; standard counts {standard_counts} ~ {ratios[0]:.1f}*n",
    )


def test_criterion_7_norm_identities():
    rng = np.random.default_rng(77)
    worst2 = worst4 = 0.0
    for _ in range(50):
        n = int(rng.integers(2, 7))
        items = [
            (PauliString(n, int(rng.integers(1 << n)), int(rng.integers(1 << n))), float(rng.normal()))
            for _ in range(int(rng.integers(2, 7)))
        ]
        a = PauliSum(n, items)
        mat = xs.materialize(a)
        d = 1 << n
        ref2 = math.sqrt(abs(np.trace(mat.conj().T @ mat)) / d)
        sq = mat @ mat.conj().T
        ref4 = (abs(np.trace(sq @ sq)) / d) ** 0.25
        worst2 = max(worst2, abs(pc.normalized_two_norm(a) - ref2))
        worst4 = max(worst4, abs(pc.normalized_four_norm(a) - ref4))
    mags = []
    for n in (3, 5, 8, 12):
        mag = PauliSum(n, [(PauliString(n, 0, 1 << j), 1.0 / n) for j in range(n)])
        mags.append(abs(pc.normalized_two_norm(mag) - 1.0 / math.sqrt(n)))
    ok = worst2 <= 1e-10 and worst4 <= 1e-10 and max(mags) <= 1e-14
    _report(
        "7 (norm identities)",
        ok,
        f"max |nu2 - dense| {worst2:.1e}, max |nu4 - dense| {worst4:.1e}, magnetization gap {max(mags):.1e}",
    )


def test_criterion_8_variance_bound_and_reproducibility():
    n, t, r = 6, 1.0, 8
    h = pc.build_power_law(n, 1.0, 0.5, 4.0)
    parts = pc.group_commuting(h)
    obs = zsum(n)
    circuit = pc.standard_formula(parts, t, r, 2)
    emp = xs.empirical_average_error(h, obs, circuit, t, 500, 7)
    var_bound = bd.random_2design_bound(parts, obs, t, r).components["variance_bound"]
    sample_var = float(np.var(emp.values, ddof=1))
    emp_again = xs.empirical_average_error(h, obs, circuit, t, 500, 7)
    emp_other = xs.empirical_average_error(h, obs, circuit, t, 500, 1234)
    band = 4 * emp.std / math.sqrt(500)
    ok = (
        sample_var <= var_bound
        and emp.values == emp_again.values
        and abs(emp.mean - emp_other.mean) <= band
    )
    _report(
        "8 (variance bound)",
        ok,
        f"sample var {sample_var:.2e} <= {var_bound:.2e}, seed drift "
        f"{abs(emp.mean - emp_other.mean):.2e} <= {band:.2e}",
    )


def test_criterion_9_observable_aware_trend():
    ns = list(range(4, 11))
    ratios = []
    for n in ns:
        h = pc.build_power_law(n, 1.0, 0.5, 4.0)
        parts = pc.group_commuting(h)
        obs = zsum(n)
        noobs = bd.random_bound_no_observable(parts, float(n), float(n), 100).value
        ours = bd.random_2design_bound(parts, obs, float(n), 100).value
        ratios.append(noobs / ours)
    x = np.sqrt(ns)
    y = np.asarray(ratios)
    a = float(x @ y) / float(x @ x)
    resid = y - a * x
    r2 = 1.0 - float(resid @ resid) / float(((y - y.mean()) ** 2).sum())
    growing = all(b > a_ for a_, b in zip(ratios, ratios[1:]))
    _report(
        "9 (sqrt-n speed-up trend)",
        r2 >= 0.95 and growing,
        f"ratios {[round(v, 2) for v in ratios]}, R^2={r2:.4f} against a*sqrt(n)",
    )
