"""Interaction structure around an observable: edge sets, support propagation,
interaction hypergraphs, colorings, and cube regrouping.

The edge-set partition peels a Hamiltonian into concentric interaction layers
around a support S: layer 0 holds the terms fully inside S, layer k the
not-yet-assigned terms touching the previous layer's new qubits.  Successive
layers overlap only at their shared edge set, which is what makes the
even-odd sweep grow an observable's support by exactly one layer per stage.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .pauli import PauliString, PauliSum


def _as_support(qubits) -> frozenset[int]:
    return qubits if isinstance(qubits, frozenset) else frozenset(qubits)


@dataclass(frozen=True)
class InteractiveDecomposition:
    """Layered split of a Hamiltonian around a base support.

    subs[k] is the layer-k sub-Hamiltonian, edge_sets[k] the layer-k qubit
    shell (edge_sets[0] is the base support).  `tail` collects terms beyond
    max_k, or terms never reached from the support; subs plus tail always sum
    to the source Hamiltonian exactly.
    """

    support: frozenset[int]
    subs: list[PauliSum]
    edges: list[frozenset[int]]
    tail: PauliSum

    def parts(self) -> list[PauliSum]:
        """Layers followed by the tail part when the tail is nonempty."""
        return self.subs + ([self.tail] if not self.tail.is_zero() else [])

    def reached(self, depth: int) -> frozenset[int]:
        """Union of edge sets 0..depth (clipped to the available layers)."""
        out: set[int] = set()
        for shell in self.edges[: depth + 1]:
            out |= shell
        return frozenset(out)


def edge_sets(h: PauliSum, support, max_k: int | None = None) -> InteractiveDecomposition:
    """Peel h into interaction layers around `support`.

    Stops at exhaustion or after layer max_k; anything left over (terms past
    the cap, or disconnected from the support) lands in the explicit tail.
    """
    base = _as_support(support)
    if not base:
        raise ValueError("empty support")
    if any(q < 0 or q >= h.n for q in base):
        raise ValueError("support outside [0, n)")

    remaining = dict(h.items())
    inside = {w: c for w, c in remaining.items() if w.support() <= base}
    for w in inside:
        del remaining[w]
    subs = [PauliSum(h.n, inside)]
    edges = [base]

    k = 0
    while remaining:
        if max_k is not None and k >= max_k:
            break
        shell_prev = edges[-1]
        touched = {w: c for w, c in remaining.items() if w.support() & shell_prev}
        if not touched:
            break
        for w in touched:
            del remaining[w]
        layer = PauliSum(h.n, touched)
        shell = frozenset(layer.support()) - shell_prev
        subs.append(layer)
        edges.append(shell)
        k += 1
    return InteractiveDecomposition(base, subs, edges, PauliSum(h.n, remaining))


def propagate(unitary_supports, support) -> frozenset[int]:
    """Fold the worst-case support growth over an ordered gate sequence.

    Each step grows the running support by the gate's support exactly when
    they intersect; the first listed support is applied first.
    """
    current = set(_as_support(support))
    for s in unitary_supports:
        s = _as_support(s)
        if current & s:
            current |= s
    return frozenset(current)


@dataclass(frozen=True)
class InteractionHypergraph:
    """Qubits as vertices, maximal term supports as hyperedges.

    subs[i] holds every term assigned to hyperedge i; assignment is a
    partition of the source terms.
    """

    n: int
    hyperedges: list[frozenset[int]]
    subs: list[PauliSum]

    @property
    def num_edges(self) -> int:
        return len(self.hyperedges)

    def total(self) -> PauliSum:
        acc = PauliSum(self.n)
        for s in self.subs:
            acc = acc + s
        return acc


def build_hypergraph(h: PauliSum) -> InteractionHypergraph:
    """Hyperedges are the subset-maximal term supports of h.

    Terms whose support is strictly contained in several maximal hyperedges
    are assigned to the lexicographically smallest one (ties are possible and
    this keeps gate orders reproducible).
    """
    supports = {w.support() for w, _ in h.items()}
    maximal = [s for s in supports if not any(s < other for other in supports)]
    maximal.sort(key=lambda s: tuple(sorted(s)))
    collected: list[dict[PauliString, float]] = [{} for _ in maximal]
    for w, c in h.items():
        s = w.support()
        for i, edge in enumerate(maximal):
            if s <= edge:
                collected[i][w] = c
                break
        else:
            raise AssertionError("term not covered by any maximal support")
    return InteractionHypergraph(h.n, maximal, [PauliSum(h.n, terms) for terms in collected])


@dataclass(frozen=True)
class Coloring:
    """Hyperedge -> color assignment with same-color hyperedges pairwise disjoint."""

    assignment: tuple[int, ...]
    chi: int

    def validate(self, graph: InteractionHypergraph) -> None:
        if len(self.assignment) != graph.num_edges:
            raise ValueError("coloring length does not match hyperedge count")
        if any(c < 1 or c > self.chi for c in self.assignment):
            raise ValueError("color outside [1, chi]")
        buckets: dict[int, set[int]] = {}
        for idx, color in enumerate(self.assignment):
            seen = buckets.setdefault(color, set())
            edge = graph.hyperedges[idx]
            if seen & edge:
                raise ValueError(f"color {color} reuses qubits across hyperedges")
            seen |= edge


def color_hypergraph(g: InteractionHypergraph, strategy: str = "greedy", lattice=None) -> Coloring:
    """Color the hypergraph so same-color hyperedges are disjoint.

    strategy="greedy" orders hyperedges by (size descending, lexicographic)
    and gives each the first admissible color.  strategy="lattice_parity"
    requires every hyperedge to be an axis-aligned nearest-neighbor pair of
    the given lattice and labels it by (axis, parity), using exactly 2*D
    colors.
    """
    if strategy == "greedy":
        order = sorted(range(g.num_edges), key=lambda i: (-len(g.hyperedges[i]), tuple(sorted(g.hyperedges[i]))))
        colors = [0] * g.num_edges
        used_qubits: list[set[int]] = []
        for idx in order:
            edge = g.hyperedges[idx]
            for c, qubits in enumerate(used_qubits):
                if not qubits & edge:
                    colors[idx] = c + 1
                    qubits |= edge
                    break
            else:
                used_qubits.append(set(edge))
                colors[idx] = len(used_qubits)
        return Coloring(tuple(colors), len(used_qubits))

    if strategy == "lattice_parity":
        if lattice is None:
            raise ValueError("lattice_parity needs a lattice")
        dim = lattice.dimension
        colors = []
        for edge in g.hyperedges:
            if len(edge) != 2:
                raise ValueError(f"hyperedge {sorted(edge)} is not a lattice pair")
            i, j = sorted(edge)
            ci, cj = lattice.site_coords(i), lattice.site_coords(j)
            diff = [b - a for a, b in zip(ci, cj)]
            axes = [a for a, d in enumerate(diff) if d != 0]
            if len(axes) != 1 or abs(diff[axes[0]]) != 1:
                raise ValueError(f"hyperedge {sorted(edge)} is not an axis-aligned nearest-neighbor pair")
            axis = axes[0]
            parity = min(ci[axis], cj[axis]) % 2
            colors.append(2 * axis + parity + 1)
        return Coloring(tuple(colors), 2 * dim)

    raise ValueError(f"unknown coloring strategy {strategy!r}")


def cube_regroup(h: PauliSum, lattice, d0: float) -> tuple[InteractionHypergraph, Coloring]:
    """Regroup a range-d0 Hamiltonian by side-d0 cube pairs with an offset coloring.

    The lattice is tiled by cubes anchored at the origin (boundary cubes may
    be partial).  Every term must fit inside one cube or a Chebyshev-adjacent
    cube pair; terms with longer reach are rejected by listing them.  Colors
    combine the pair's offset class with a parity along the offset, which
    needs at most 3**D - 1 colors, or a single color when one cube covers the
    lattice.
    """
    if d0 <= 0:
        raise ValueError("d0 must be positive")
    dim = lattice.dimension
    side = int(d0)
    if side < 1:
        raise ValueError("cube side floor(d0) must be at least 1")

    def cube_of(site: int) -> tuple[int, ...]:
        return tuple(c // side for c in lattice.site_coords(site))

    groups: dict[tuple[tuple[int, ...], tuple[int, ...]], dict] = {}
    offenders = []
    for w, c in h.items():
        cubes = sorted({cube_of(q) for q in w.support()})
        if not cubes:
            cubes = [cube_of(0)]
        if len(cubes) > 2:
            offenders.append(w)
            continue
        lo, hi = cubes[0], cubes[-1]
        if any(abs(a - b) > 1 for a, b in zip(lo, hi)):
            offenders.append(w)
            continue
        if lo == hi:
            # intra-cube terms ride along with a neighboring pair's group
            partner = _preferred_partner(lo, lattice, side)
            key = tuple(sorted((lo, partner))) if partner is not None else (lo, lo)
        else:
            key = (lo, hi)
        groups.setdefault(key, {})[w] = c
    if offenders:
        sample = ", ".join(w.text() for w in offenders[:5])
        raise ValueError(f"{len(offenders)} terms exceed the cube range d0={d0}: {sample}")

    keys = sorted(groups)
    hyperedges = []
    subs = []
    colors = []
    for lo, hi in keys:
        sites = frozenset(_cube_sites(lo, lattice, side) | _cube_sites(hi, lattice, side))
        hyperedges.append(sites)
        subs.append(PauliSum(h.n, groups[(lo, hi)]))
        colors.append(_offset_color(lo, hi, dim))
    chi = max(colors) if colors else 1
    return InteractionHypergraph(h.n, hyperedges, subs), Coloring(tuple(colors), chi)


def _preferred_partner(cube: tuple[int, ...], lattice, side: int) -> tuple[int, ...] | None:
    top = tuple((e - 1) // side for e in lattice.extents)
    for axis in range(lattice.dimension):
        if cube[axis] < top[axis]:
            return tuple(c + (1 if a == axis else 0) for a, c in enumerate(cube))
        if cube[axis] > 0:
            return tuple(c - (1 if a == axis else 0) for a, c in enumerate(cube))
    return None


def _cube_sites(cube: tuple[int, ...], lattice, side: int) -> set[int]:
    ranges = [range(c * side, min((c + 1) * side, e)) for c, e in zip(cube, lattice.extents)]
    return {lattice.site_index(coords) for coords in itertools.product(*ranges)}


def _offset_color(lo: tuple[int, ...], hi: tuple[int, ...], dim: int) -> int:
    """(offset class, parity) -> color in [1, 3**D - 1]."""
    delta = tuple(b - a for a, b in zip(lo, hi))
    if all(d == 0 for d in delta):
        return 1
    nonzero = [(d + 1) for d in delta]  # each in {0,1,2}
    code = 0
    for v in nonzero:
        code = code * 3 + v
    neutral = sum(3**k for k in range(dim))  # code of the zero offset
    offset_index = code - neutral - 1  # ranks the (3**D - 1)/2 positive offsets
    axis = next(a for a, d in enumerate(delta) if d != 0)
    parity = lo[axis] % 2
    return 2 * offset_index + parity + 1
