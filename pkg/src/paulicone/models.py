"""Benchmark Hamiltonians, Pauli-list ingestion, commuting grouping, truncation.

All chain builders use open boundary conditions by default (couplings sum
over j = 0..n-2); pass periodic=True for the ring variants.
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass
from pathlib import Path

from .pauli import PauliString, PauliSum


@dataclass(frozen=True)
class LatticeSpec:
    """Integer lattice with per-axis extents and Euclidean distance.

    Sites are indexed in row-major order with axis 0 fastest: index =
    c_0 + extents[0] * (c_1 + extents[1] * (...)).
    """

    extents: tuple[int, ...]

    def __post_init__(self):
        if not self.extents or any(e < 1 for e in self.extents):
            raise ValueError("extents must be positive")

    @property
    def dimension(self) -> int:
        return len(self.extents)

    @property
    def n_sites(self) -> int:
        out = 1
        for e in self.extents:
            out *= e
        return out

    def site_coords(self, index: int) -> tuple[int, ...]:
        coords = []
        for e in self.extents:
            coords.append(index % e)
            index //= e
        return tuple(coords)

    def site_index(self, coords) -> int:
        idx = 0
        for e, c in zip(reversed(self.extents), reversed(tuple(coords))):
            idx = idx * e + c
        return idx

    def distance(self, i: int, j: int) -> float:
        a, b = self.site_coords(i), self.site_coords(j)
        return math.sqrt(sum((x - y) ** 2 for x, y in zip(a, b)))

    def edges(self) -> list[tuple[int, int]]:
        """Nearest-neighbor pairs (i, j) with i < j."""
        out = []
        for i in range(self.n_sites):
            coords = self.site_coords(i)
            for axis, e in enumerate(self.extents):
                if coords[axis] + 1 < e:
                    nb = list(coords)
                    nb[axis] += 1
                    out.append((i, self.site_index(nb)))
        return sorted(out)


def chain(n: int) -> LatticeSpec:
    return LatticeSpec((n,))


def _word(n: int, letters: dict[int, str]) -> PauliString:
    x = z = 0
    masks = {"X": (1, 0), "Y": (1, 1), "Z": (0, 1)}
    for q, axis in letters.items():
        xb, zb = masks[axis]
        x |= xb << q
        z |= zb << q
    return PauliString(n, x, z)


def build_mfi(n: int, J: float, h: float, g: float, periodic: bool = False) -> PauliSum:
    """Mixed-field Ising chain: J sum X_j X_{j+1} + h sum X_j + g sum Y_j."""
    if n < 2:
        raise ValueError("need n >= 2")
    items = []
    bonds = n if periodic else n - 1
    for j in range(bonds):
        items.append((_word(n, {j: "X", (j + 1) % n: "X"}), J))
    for j in range(n):
        items.append((_word(n, {j: "X"}), h))
        items.append((_word(n, {j: "Y"}), g))
    return PauliSum(n, items)


def build_tfi(n: int, J: float, h: float, periodic: bool = False) -> PauliSum:
    """Transverse-field Ising chain: J sum Z_j Z_{j+1} + h sum X_j."""
    if n < 2:
        raise ValueError("need n >= 2")
    items = []
    bonds = n if periodic else n - 1
    for j in range(bonds):
        items.append((_word(n, {j: "Z", (j + 1) % n: "Z"}), J))
    for j in range(n):
        items.append((_word(n, {j: "X"}), h))
    return PauliSum(n, items)


def build_power_law(n: int, J: float, h: float, alpha: float) -> PauliSum:
    """1D power-law Heisenberg couplings J/(j-i)^alpha (XX+YY+ZZ) + h sum X_j.

    alpha <= 2 on a chain breaks the truncation analysis; that is only warned
    about, not rejected.
    """
    if n < 2:
        raise ValueError("need n >= 2")
    if alpha <= 0:
        raise ValueError("need alpha > 0")
    if alpha <= 2:
        warnings.warn(f"alpha={alpha} is not above twice the lattice dimension", stacklevel=2)
    items = []
    for i in range(n):
        for j in range(i + 1, n):
            c = J / (j - i) ** alpha
            items.append((_word(n, {i: "X", j: "X"}), c))
            items.append((_word(n, {i: "Y", j: "Y"}), c))
            items.append((_word(n, {i: "Z", j: "Z"}), c))
    for j in range(n):
        items.append((_word(n, {j: "X"}), h))
    return PauliSum(n, items)


def build_nn_lattice(spec: LatticeSpec, per_edge: PauliSum) -> PauliSum:
    """Instantiate a two-site template on every nearest-neighbor lattice edge.

    The template lives on abstract sites 0 and 1 and must touch both.
    """
    if per_edge.support() != frozenset({0, 1}):
        raise ValueError("per-edge template must act on exactly the two abstract sites 0 and 1")
    n = spec.n_sites
    items = []
    for i, j in spec.edges():
        for w, c in per_edge.items():
            letters = {}
            for site, target in ((0, i), (1, j)):
                xb, zb = (w.x >> site) & 1, (w.z >> site) & 1
                if xb or zb:
                    letters[target] = {(1, 0): "X", (1, 1): "Y", (0, 1): "Z"}[(xb, zb)]
            items.append((_word(n, letters), c))
    return PauliSum(n, items)


# -- ingestion ------------------------------------------------------------------


def loads_pauli(text: str) -> PauliSum:
    """Parse either the line-oriented text format or the JSON form."""
    stripped = text.lstrip()
    if stripped.startswith("{"):
        payload = json.loads(text)
        n = int(payload["n"])
        items = []
        for rec in payload["terms"]:
            word = PauliString.from_text(rec["pauli"])
            if word.n != n:
                raise ValueError(f"term {rec['pauli']!r} has length {word.n}, expected {n}")
            items.append((word, float(rec["coeff"])))
        return PauliSum(n, items)
    return PauliSum.from_text(text)


def load_pauli_file(path) -> PauliSum:
    """Read a Hamiltonian from a text or JSON Pauli list; duplicates merge."""
    return loads_pauli(Path(path).read_text())


def save_pauli_file(h: PauliSum, path, fmt: str = "text") -> None:
    path = Path(path)
    if fmt == "text":
        path.write_text(h.to_text())
    elif fmt == "json":
        payload = {"n": h.n, "terms": [{"pauli": w.text(), "coeff": c} for w, c in h.items()]}
        path.write_text(json.dumps(payload, indent=1) + "\n")
    else:
        raise ValueError(f"unknown format {fmt!r}")


def group_commuting(h: PauliSum) -> list[PauliSum]:
    """Greedy partition of the terms into mutually commuting groups.

    Terms are visited in canonical (x, z) order; each joins the first group
    whose members it commutes with entirely, else opens a new group.
    Deterministic, and the concatenation of the groups re-yields the input.
    """
    groups: list[dict] = []
    group_words: list[list[PauliString]] = []
    for w, c in h.items():
        for gi, words in enumerate(group_words):
            if all(w.commutes_with(other) for other in words):
                groups[gi][w] = c
                words.append(w)
                break
        else:
            groups.append({w: c})
            group_words.append([w])
    return [PauliSum(h.n, g) for g in groups]


def truncate_power_law(
    h: PauliSum,
    lattice: LatticeSpec,
    d0: float,
    inner: tuple | None = None,
) -> tuple[PauliSum, float]:
    """Drop interactions longer than d0, globally or only near an inner region.

    With inner=None every term of support diameter > d0 is removed.  With
    inner=(support, radius) only long terms touching the region
    {j : d(j, support) <= radius} are removed.  Returns the truncated sum and
    the 1-norm of the removed content, which multiplied by t bounds the
    truncation error of the evolution.
    """
    if d0 <= 0:
        raise ValueError("d0 must be positive")
    region: frozenset[int] | None = None
    if inner is not None:
        base, radius = inner
        base = frozenset(base)
        region = frozenset(
            j
            for j in range(lattice.n_sites)
            if min(lattice.distance(j, q) for q in base) <= radius
        )

    kept = {}
    removed_norm = 0.0
    for w, c in h.items():
        supp = sorted(w.support())
        diameter = max(
            (lattice.distance(a, b) for a in supp for b in supp),
            default=0.0,
        )
        long_range = diameter > d0
        touches = region is None or any(q in region for q in supp)
        if long_range and touches:
            removed_norm += abs(c)
        else:
            kept[w] = c
    return PauliSum(h.n, kept), removed_norm
