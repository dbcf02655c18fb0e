"""Suzuki-Trotter schedules and circuit constructors.

Circuits are ordered lists of exponential gates exp(i*angle*G) with G a
Hermitian Pauli sum; gates are stored in application order (gates[0] acts
first).  Three constructors are provided: the standard back-and-forth formula
over an explicit decomposition, the light-cone reduced formula driven by an
observable support, and the color-ordered formula driven by a hypergraph
coloring.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .lightcone import Coloring, InteractionHypergraph, edge_sets
from .pauli import PauliString, PauliSum


@dataclass(frozen=True)
class Stage:
    coefficient: float
    forward: bool


@dataclass(frozen=True)
class SuzukiSchedule:
    """Fully expanded stage coefficients of a symmetric Suzuki formula.

    Every slot inside a stage carries the same coefficient, so one scalar per
    stage is stored together with the sweep direction.
    """

    order: int
    stages: tuple[Stage, ...]

    @property
    def upsilon(self) -> int:
        return len(self.stages)

    def slot_sum(self) -> float:
        return sum(s.coefficient for s in self.stages)


def _stage_coefficients(p: int) -> list[float]:
    if p == 2:
        return [0.5, 0.5]
    u = 1.0 / (4.0 - 4.0 ** (1.0 / (p - 1)))
    inner = _stage_coefficients(p - 2)
    wing = [c * u for c in inner]
    middle = [c * (1.0 - 4.0 * u) for c in inner]
    return wing + wing + middle + wing + wing


def suzuki_schedule(p: int) -> SuzukiSchedule:
    """Stage schedule for order p in {1, 2, 4, 6, ...}.

    Order 1 is the single forward sweep; even orders follow the recursive
    symmetric construction, giving 2 * 5**(p/2 - 1) stages that alternate
    forward/backward starting forward.
    """
    if p == 1:
        return SuzukiSchedule(1, (Stage(1.0, True),))
    if p < 1 or p % 2 != 0:
        raise ValueError(f"order must be 1 or a positive even integer, got {p}")
    coeffs = _stage_coefficients(p)
    stages = tuple(Stage(c, i % 2 == 0) for i, c in enumerate(coeffs))
    return SuzukiSchedule(p, stages)


@dataclass(frozen=True)
class Gate:
    generator: PauliSum
    angle: float


class Circuit:
    """Ordered list of exponential gates; gates[0] is applied first."""

    __slots__ = ("n", "gates")

    def __init__(self, n: int, gates=()):
        self.n = n
        self.gates = list(gates)
        for g in self.gates:
            if g.generator.n != n:
                raise ValueError("gate generator qubit count mismatch")
            if g.generator.is_zero():
                raise ValueError("empty gate generator")

    def __len__(self) -> int:
        return len(self.gates)

    def inverse(self) -> "Circuit":
        return Circuit(self.n, [Gate(g.generator, -g.angle) for g in reversed(self.gates)])

    def to_json(self) -> str:
        payload = {
            "n": self.n,
            "gates": [
                {
                    "angle": g.angle,
                    "generator": [{"pauli": w.text(), "coeff": c} for w, c in g.generator.items()],
                }
                for g in self.gates
            ],
        }
        return json.dumps(payload, indent=1)

    @classmethod
    def from_json(cls, text: str) -> "Circuit":
        payload = json.loads(text)
        n = payload["n"]
        gates = []
        for rec in payload["gates"]:
            gen = PauliSum(n, [(PauliString.from_text(t["pauli"]), t["coeff"]) for t in rec["generator"]])
            gates.append(Gate(gen, rec["angle"]))
        return cls(n, gates)


def _merge_adjacent(gates: list[Gate]) -> list[Gate]:
    """Merge runs of adjacent gates with identical generators by angle addition."""
    out: list[Gate] = []
    for g in gates:
        if out and out[-1].generator == g.generator:
            out[-1] = Gate(g.generator, out[-1].angle + g.angle)
        else:
            out.append(g)
    return [g for g in out if abs(g.angle) > 0.0]


def _assemble(n: int, step_gates: list[list[Gate]], merge: bool, merge_across_steps: bool) -> Circuit:
    if not merge:
        return Circuit(n, [g for step in step_gates for g in step])
    if merge_across_steps:
        return Circuit(n, _merge_adjacent([g for step in step_gates for g in step]))
    merged: list[Gate] = []
    for step in step_gates:
        merged.extend(_merge_adjacent(step))
    return Circuit(n, merged)


def standard_formula(
    h_parts: list[PauliSum],
    t: float,
    r: int,
    p: int,
    merge: bool = True,
    merge_across_steps: bool = True,
) -> Circuit:
    """r repetitions of the order-p formula over the given decomposition.

    Each stage sweeps the parts forward or in reverse according to the
    schedule; adjacent gates with identical generators merge by angle
    addition (optionally only within a step, matching the per-step
    exponential-counting convention).
    """
    if not h_parts:
        raise ValueError("empty decomposition")
    if r < 1:
        raise ValueError("need r >= 1")
    n = h_parts[0].n
    sched = suzuki_schedule(p)
    tau = t / r
    steps = []
    for _ in range(r):
        gates = []
        for stage in sched.stages:
            order = h_parts if stage.forward else list(reversed(h_parts))
            gates += [Gate(part, stage.coefficient * tau) for part in order if not part.is_zero()]
        steps.append(gates)
    return _assemble(n, steps, merge, merge_across_steps)


def _even_odd_order(indices: list[int], evens_first: bool) -> list[int]:
    evens = [i for i in indices if i % 2 == 0]
    odds = [i for i in indices if i % 2 == 1]
    return evens + odds if evens_first else odds + evens


def reduced_formula(
    h: PauliSum,
    support,
    t: float,
    r: int,
    p: int,
    merge: bool = True,
    merge_across_steps: bool = False,
) -> Circuit:
    """Light-cone reduced formula for conjugating an observable supported on `support`.

    Builds the interactive decomposition around the support, orders each stage
    by the even-odd permutation, and in stage v of step j includes only
    sub-Hamiltonians with index <= v + (j-1)*Upsilon.  Because same-parity
    layers have pairwise disjoint supports, each parity run is emitted as a
    single block gate; the resulting unitary is gate-for-gate identical to the
    per-layer product.
    """
    if r < 1:
        raise ValueError("need r >= 1")
    decomp = edge_sets(h, support)
    layers = decomp.subs
    top = len(layers) - 1
    sched = suzuki_schedule(p)
    ups = sched.upsilon
    tau = t / r
    steps = []
    for j in range(1, r + 1):
        gates = []
        for v, stage in enumerate(sched.stages, start=1):
            cap = min(v + (j - 1) * ups, top)
            indices = list(range(cap + 1))
            global_stage = (j - 1) * ups + v
            evens_first = global_stage % 2 == 1
            for parity_run in (_run for _run in _parity_runs(indices, evens_first)):
                block = _layer_block(h.n, layers, parity_run)
                if not block.is_zero():
                    gates.append(Gate(block, stage.coefficient * tau))
        steps.append(gates)
    return _assemble(h.n, steps, merge, merge_across_steps)


def _parity_runs(indices: list[int], evens_first: bool) -> list[list[int]]:
    evens = [i for i in indices if i % 2 == 0]
    odds = [i for i in indices if i % 2 == 1]
    runs = [evens, odds] if evens_first else [odds, evens]
    return [run for run in runs if run]


def _layer_block(n: int, layers: list[PauliSum], indices: list[int]) -> PauliSum:
    block = PauliSum(n)
    for i in indices:
        block = block + layers[i]
    return block


def virtual_formula(h: PauliSum, support, t: float, r: int, p: int) -> Circuit:
    """Tail-completed formula whose conjugation equals the reduced circuit's.

    Step j uses the full decomposition H_0..H_{j*Upsilon} plus one explicit
    tail part holding everything else, all swept in even-odd order.  Used as a
    dense-checkable equivalence oracle; never cheaper than the reduced form.
    """
    if r < 1:
        raise ValueError("need r >= 1")
    decomp = edge_sets(h, support)
    layers = decomp.subs
    top = len(layers) - 1
    sched = suzuki_schedule(p)
    ups = sched.upsilon
    tau = t / r
    steps = []
    for j in range(1, r + 1):
        head = min(j * ups, top)
        tail = _layer_block(h.n, layers, list(range(head + 1, top + 1)))
        parts: list[PauliSum] = [layers[i] for i in range(head + 1)]
        if not tail.is_zero():
            parts.append(tail)
        gates = []
        for v, stage in enumerate(sched.stages, start=1):
            global_stage = (j - 1) * ups + v
            order = _even_odd_order(list(range(len(parts))), evens_first=global_stage % 2 == 1)
            gates += [Gate(parts[i], stage.coefficient * tau) for i in order if not parts[i].is_zero()]
        steps.append(gates)
    return _assemble(h.n, steps, merge=True, merge_across_steps=False)


def chromatic_formula(
    h: PauliSum,
    coloring: Coloring,
    graph: InteractionHypergraph,
    t: float,
    r: int,
    p: int,
    merge: bool = True,
    merge_across_steps: bool = False,
) -> Circuit:
    """Color-ordered formula: odd stages sweep colors 1..chi with hyperedges
    ascending, even stages sweep chi..1 descending."""
    if r < 1:
        raise ValueError("need r >= 1")
    coloring.validate(graph)
    sched = suzuki_schedule(p)
    tau = t / r
    by_color: dict[int, list[int]] = {}
    for idx, color in enumerate(coloring.assignment):
        by_color.setdefault(color, []).append(idx)
    colors = sorted(by_color)
    steps = []
    for _ in range(r):
        gates = []
        for stage in sched.stages:
            color_order = colors if stage.forward else list(reversed(colors))
            for c in color_order:
                members = by_color[c] if stage.forward else list(reversed(by_color[c]))
                gates += [
                    Gate(graph.subs[i], stage.coefficient * tau)
                    for i in members
                    if not graph.subs[i].is_zero()
                ]
        steps.append(gates)
    return _assemble(h.n, steps, merge, merge_across_steps)


def gate_count(c: Circuit, granularity: str = "generator_exponentials") -> int:
    """Circuit size, as whole-generator gates or as per-Pauli exponentials."""
    if granularity == "generator_exponentials":
        return len(c.gates)
    if granularity == "pauli_exponentials":
        return sum(g.generator.num_terms for g in c.gates)
    raise ValueError(f"unknown granularity {granularity!r}")
