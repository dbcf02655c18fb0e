import math

import numpy as np
import pytest

from paulicone import exactsim
from paulicone.lightcone import build_hypergraph, color_hypergraph, edge_sets
from paulicone.models import build_mfi, build_power_law, build_tfi, group_commuting
from paulicone.pauli import PauliString, PauliSum
from paulicone.trotter import (
    Circuit,
    Gate,
    chromatic_formula,
    gate_count,
    reduced_formula,
    standard_formula,
    suzuki_schedule,
    virtual_formula,
)


def psum(n, items):
    return PauliSum(n, [(PauliString.from_text(w), c) for w, c in items])


class TestSchedule:
    def test_orders(self):
        assert suzuki_schedule(1).upsilon == 1
        assert suzuki_schedule(2).upsilon == 2
        assert suzuki_schedule(4).upsilon == 10
        assert suzuki_schedule(6).upsilon == 50

    def test_p2_coefficients(self):
        sched = suzuki_schedule(2)
        assert [s.coefficient for s in sched.stages] == [0.5, 0.5]
        assert [s.forward for s in sched.stages] == [True, False]

    def test_u4_value(self):
        sched = suzuki_schedule(4)
        u4 = 1.0 / (4.0 - 4.0 ** (1.0 / 3.0))
        assert sched.stages[0].coefficient == pytest.approx(u4 / 2)
        assert u4 == pytest.approx(0.4144907717943757, rel=1e-12)

    def test_slot_sums_one(self):
        for p in (1, 2, 4, 6):
            assert suzuki_schedule(p).slot_sum() == pytest.approx(1.0, rel=1e-12)

    def test_palindromic_for_even_orders(self):
        for p in (2, 4, 6):
            coeffs = [s.coefficient for s in suzuki_schedule(p).stages]
            assert coeffs == coeffs[::-1]

    def test_rejects_odd_above_one(self):
        with pytest.raises(ValueError):
            suzuki_schedule(3)


class TestStandardFormula:
    def test_two_parts_merges_to_three_gates(self):
        a = psum(2, [("XI", 1.0)])
        b = psum(2, [("ZZ", 0.5)])
        c = standard_formula([a, b], 1.0, 1, 2)
        assert len(c.gates) == 3
        assert c.gates[0].generator == a and c.gates[0].angle == pytest.approx(0.5)
        assert c.gates[1].generator == b and c.gates[1].angle == pytest.approx(1.0)

    def test_three_parts_two_steps_nine_gates(self):
        parts = [psum(3, [("XII", 1.0)]), psum(3, [("ZZI", 1.0)]), psum(3, [("IIY", 1.0)])]
        assert len(standard_formula(parts, 0.8, 2, 2).gates) == 2 * (2 * 3 - 1) - 1

    def test_first_order_count(self):
        parts = [psum(2, [("XI", 1.0)]), psum(2, [("ZZ", 1.0)])]
        for r in (1, 3, 5):
            assert len(standard_formula(parts, 0.5, r, 1).gates) == 2 * r

    def test_rejects_empty(self):
        with pytest.raises(ValueError):
            standard_formula([], 1.0, 1, 2)

    def test_merge_toggle(self):
        parts = [psum(2, [("XI", 1.0)]), psum(2, [("ZZ", 1.0)])]
        assert len(standard_formula(parts, 1.0, 2, 2, merge=False).gates) == 8
        assert len(standard_formula(parts, 1.0, 2, 2, merge_across_steps=False).gates) == 6
        assert len(standard_formula(parts, 1.0, 2, 2).gates) == 5

    def test_converges_at_order_two(self):
        h = build_tfi(5, 1.0, 0.7)
        parts = group_commuting(h)
        u0 = exactsim.exact_evolution(h, 0.9)
        errs = []
        for r in (4, 16):
            u = exactsim.apply_circuit(standard_formula(parts, 0.9, r, 2))
            errs.append(np.linalg.norm(u - u0, 2))
        assert errs[1] < errs[0] / 12


class TestReducedFormula:
    def test_stage_caps(self):
        h = build_tfi(9, 0.2, 1.0)
        c = reduced_formula(h, {4}, 0.4, 1, 2, merge=False)
        d = edge_sets(h, {4})
        # stage 1 includes layers 0..1, stage 2 layers 0..2 per the index cap
        stage1_support = c.gates[0].generator.support() | c.gates[1].generator.support()
        assert stage1_support == d.edges[0] | d.edges[1]
        full = frozenset().union(*(g.generator.support() for g in c.gates))
        assert full == d.reached(2)

    def test_full_support_collapses_to_standard(self):
        h = build_tfi(4, 1.0, 0.5)
        c = reduced_formula(h, set(range(4)), 0.7, 2, 2, merge_across_steps=True)
        s = standard_formula([h], 0.7, 2, 2, merge_across_steps=True)
        assert [(g.generator, pytest.approx(g.angle)) for g in c.gates] == [
            (g.generator, pytest.approx(g.angle)) for g in s.gates
        ]

    def test_pauli_count_never_exceeds_standard(self):
        rng = np.random.default_rng(21)
        for _ in range(6):
            n = int(rng.integers(5, 9))
            h = build_mfi(n, 1.0, 0.5, 1.2)
            r = int(rng.integers(1, 5))
            red = reduced_formula(h, {int(rng.integers(n))}, 0.3, r, 2)
            std = standard_formula(edge_sets(h, {0}).subs, 0.3, r, 2, merge_across_steps=False)
            assert gate_count(red, "pauli_exponentials") <= gate_count(std, "pauli_exponentials")

    def test_size_independent_counts(self):
        counts = set()
        for n in (20, 50, 100):
            h = build_mfi(n, 1.0, 0.5, 1.2)
            counts.add(gate_count(reduced_formula(h, {0}, 0.1, 4, 2), "pauli_exponentials"))
        assert len(counts) == 1

    def test_matches_virtual_conjugation(self):
        rng = np.random.default_rng(5)
        for model in ("tfi", "mfi", "pl"):
            n = int(rng.integers(5, 9))
            h = {
                "tfi": lambda: build_tfi(n, 0.2, 1.0),
                "mfi": lambda: build_mfi(n, 1.0, 0.5, 1.2),
                "pl": lambda: build_power_law(n, 1.0, 0.5, 4.0),
            }[model]()
            s = {int(rng.integers(n))}
            r = int(rng.integers(1, 4))
            obs = exactsim.materialize(PauliSum(n, [(PauliString(n, 0, 1 << min(s)), 1.0)]))
            ur = exactsim.apply_circuit(reduced_formula(h, s, 0.5, r, 2))
            uv = exactsim.apply_circuit(virtual_formula(h, s, 0.5, r, 2))
            diff = ur @ obs @ ur.conj().T - uv @ obs @ uv.conj().T
            assert np.linalg.norm(diff, 2) <= 1e-10


class TestChromaticFormula:
    def test_tfi_minimal_chain_three_blocks(self):
        h = build_tfi(3, 0.2, 1.0)
        graph = build_hypergraph(h)
        coloring = color_hypergraph(graph, "greedy")
        c = chromatic_formula(h, coloring, graph, 0.6, 1, 2)
        assert len(c.gates) == 3
        assert c.gates[1].angle == pytest.approx(2 * c.gates[0].angle)

    def test_gate_count_per_step_before_merging(self):
        h = build_tfi(6, 0.2, 1.0)
        graph = build_hypergraph(h)
        coloring = color_hypergraph(graph, "greedy")
        c = chromatic_formula(h, coloring, graph, 0.6, 2, 2, merge=False)
        assert len(c.gates) == 2 * 2 * graph.num_edges

    def test_single_color_disjoint_edges(self):
        h = psum(4, [("ZZII", 1.0), ("IIZZ", 0.7)])
        graph = build_hypergraph(h)
        coloring = color_hypergraph(graph, "greedy")
        assert coloring.chi == 1
        c = chromatic_formula(h, coloring, graph, 0.6, 1, 2)
        assert len(c.gates) == 3  # palindromic center pair merges

    def test_approximates_evolution(self):
        h = build_mfi(6, 1.0, 0.5, 1.2)
        graph = build_hypergraph(h)
        coloring = color_hypergraph(graph, "greedy")
        u0 = exactsim.exact_evolution(h, 0.5)
        u = exactsim.apply_circuit(chromatic_formula(h, coloring, graph, 0.5, 16, 2))
        assert np.linalg.norm(u - u0, 2) < 5e-3

    def test_support_growth_within_color_budget(self):
        # color-ordered sweeps add at most one layer per color per stage
        h = build_mfi(10, 1.0, 0.5, 1.2)
        graph = build_hypergraph(h)
        coloring = color_hypergraph(graph, "greedy")
        d = edge_sets(h, {4})
        for r in (1, 2):
            c = chromatic_formula(h, coloring, graph, 0.4, r, 2, merge=False)
            from paulicone.lightcone import propagate

            reached = propagate([g.generator.support() for g in c.gates], {4})
            allowed = d.reached((coloring.chi - 1) * r * 2 + 1)
            assert reached <= allowed

    def test_invalid_coloring_rejected(self):
        h = build_tfi(4, 0.2, 1.0)
        graph = build_hypergraph(h)
        from paulicone.lightcone import Coloring

        with pytest.raises(ValueError):
            chromatic_formula(h, Coloring((1, 1, 1), 1), graph, 0.5, 1, 2)


class TestCircuit:
    def test_gate_count_granularities(self):
        gen2 = psum(2, [("XI", 1.0), ("ZZ", 0.5)])
        c = Circuit(2, [Gate(gen2, 0.1)] * 3)
        assert gate_count(c, "generator_exponentials") == 3
        assert gate_count(c, "pauli_exponentials") == 6
        empty = Circuit(2, [])
        assert gate_count(empty, "generator_exponentials") == 0

    def test_inverse_is_dense_inverse(self):
        h = build_tfi(5, 1.0, 0.8)
        c = standard_formula(group_commuting(h), 0.7, 2, 2)
        u = exactsim.apply_circuit(c)
        ui = exactsim.apply_circuit(c.inverse())
        assert np.linalg.norm(u @ ui - np.eye(32), 2) <= 1e-10

    def test_json_roundtrip(self):
        h = build_tfi(4, 0.2, 1.0)
        c = standard_formula(group_commuting(h), 0.7, 2, 2)
        c2 = Circuit.from_json(c.to_json())
        assert c2.n == c.n
        assert [(g.generator, g.angle) for g in c2.gates] == [(g.generator, g.angle) for g in c.gates]

    def test_rejects_empty_generator(self):
        with pytest.raises(ValueError):
            Circuit(2, [Gate(PauliSum(2), 0.1)])


class TestOrderScaling:
    def test_loglog_slopes(self):
        h = build_tfi(6, 1.0, 1.0)
        parts = group_commuting(h)
        z0 = psum(6, [("ZIIIII", 1.0)])
        for p, target in ((1, -1.0), (2, -2.0)):
            rs = [4, 8, 16, 32, 64]
            errs = [exactsim.heisenberg_error(h, z0, standard_formula(parts, 1.0, r, p), 1.0) for r in rs]
            slope = np.polyfit(np.log(rs), np.log(errs), 1)[0]
            assert abs(slope - target) <= 0.15
