"""Analytic error bounds computed from sparse Pauli arithmetic.

All second-order bounds share the triangle-style commutator sums

    S1 = sum_g1 || [T_g1, [T_g1, H_g1]] ||,   T_g1 = sum_{g2 > g1} H_g2,
    S2 = sum_g1 || [H_g1, [H_g1, T_g1]] ||,

evaluated in the norm a given bound calls for (spectral, 1-norm relaxation,
normalized Schatten 2- or 4-norm).  The sums are independent of the step
count r, so each (decomposition, norm) pair is evaluated once and reused
across an r-search.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from . import pauli
from .lightcone import Coloring, InteractionHypergraph, edge_sets
from .pauli import DENSE_LIMIT, PauliSum, commutator, normalized_four_norm, normalized_two_norm, one_norm

UPSILON_P2 = 2  # stage count of the second-order formula


@dataclass
class BoundReport:
    """One bound evaluation: identifier, value, inputs, and named sub-terms."""

    name: str
    value: float
    inputs: dict
    components: dict = field(default_factory=dict)
    norm_mode: str | None = None

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "value": self.value,
            "inputs": dict(self.inputs),
            "components": dict(self.components),
            "norm_mode": self.norm_mode,
        }


_NORM_CACHE: dict = {}


def _norm_fn(norm_mode: str, dense_limit: int = DENSE_LIMIT, max_products: int = 4_000_000):
    """Cached operator-size functional for a named norm mode."""
    if norm_mode in ("dense", "one_norm"):

        def fn(a: PauliSum) -> float:
            key = (a, norm_mode)
            hit = _NORM_CACHE.get(key)
            if hit is None:
                mode = "dense" if norm_mode == "dense" else "one_norm_upper"
                hit = pauli.operator_norm(a, mode=mode, dense_limit=dense_limit)
                _NORM_CACHE[key] = hit
            return hit

    elif norm_mode == "nu2":
        fn = normalized_two_norm
    elif norm_mode == "nu4":

        def fn(a: PauliSum) -> float:
            key = (a, "nu4")
            hit = _NORM_CACHE.get(key)
            if hit is None:
                hit = normalized_four_norm(a, max_products=max_products)
                _NORM_CACHE[key] = hit
            return hit

    else:
        raise ValueError(f"unknown norm mode {norm_mode!r}")
    return fn


_SUM_CACHE: dict = {}


def _p2_commutator_sums(parts: tuple[PauliSum, ...], norm_mode: str, dense_limit: int, max_products: int = 4_000_000) -> tuple[float, float]:
    """(S1, S2) over an ordered decomposition; cached per (parts, norm)."""
    key = (parts, norm_mode, dense_limit)
    hit = _SUM_CACHE.get(key)
    if hit is not None:
        return hit
    fn = _norm_fn(norm_mode, dense_limit, max_products)
    n = parts[0].n
    suffix = PauliSum(n)
    for part in reversed(parts):
        suffix = suffix + part
    s1 = s2 = 0.0
    for g1, h_g1 in enumerate(parts[:-1]):
        suffix = suffix - h_g1
        inner = commutator(suffix, h_g1)
        if not inner.is_zero():
            s1 += fn(commutator(suffix, inner))
            s2 += fn(commutator(h_g1, commutator(h_g1, suffix)))
    _SUM_CACHE[key] = (s1, s2)
    return (s1, s2)


def worst_case_p2_bound(
    parts: list[PauliSum],
    O_norm: float,
    t: float,
    r: int,
    norm_mode: str = "dense",
    dense_limit: int = DENSE_LIMIT,
) -> BoundReport:
    """Second-order worst-case additive bound over an ordered decomposition.

    value = (t^3 |O| / 6 r^2) * (S1 + S2/2) with operator norms (dense) or
    the scalable 1-norm relaxation (one_norm).
    """
    if r < 1:
        raise ValueError("need r >= 1")
    s1, s2 = _p2_commutator_sums(tuple(parts), norm_mode, dense_limit)
    value = (t**3) * O_norm / (6.0 * r * r) * (s1 + 0.5 * s2)
    return BoundReport(
        "worst_case_p2",
        value,
        {"t": t, "r": r, "p": 2, "n": parts[0].n, "O_norm": O_norm},
        {"triple_sum": s1, "double_sum": s2},
        norm_mode,
    )


_LC_CACHE: dict = {}


def _lightcone_layer_terms(h: PauliSum, support: frozenset[int], norm_mode: str, dense_limit: int) -> list[float]:
    """Per-layer contributions g(k1) for the light-cone bound, k1 = 0..top.

    g(k1) pairs layer k1 against the full remainder of H; the remainder
    equals the capped decomposition's suffix-plus-tail for every r, so the
    list is r-independent and the r-dependence enters only through how many
    entries are summed.
    """
    key = (h, support, norm_mode, dense_limit)
    hit = _LC_CACHE.get(key)
    if hit is not None:
        return hit
    fn = _norm_fn(norm_mode, dense_limit)
    decomp = edge_sets(h, support)
    layers = decomp.subs
    out = []
    suffix = h
    for h_k1 in layers:
        suffix = suffix - h_k1
        inner = commutator(suffix, h_k1)
        if inner.is_zero():
            out.append(0.0)
            continue
        g = fn(commutator(suffix, inner)) + 0.5 * fn(commutator(h_k1, commutator(h_k1, suffix)))
        out.append(g)
    _LC_CACHE[key] = out
    return out


def thm1_bound(
    h: PauliSum,
    support,
    O_norm: float,
    t: float,
    r: int,
    norm_mode: str = "dense",
    dense_limit: int = DENSE_LIMIT,
) -> BoundReport:
    """Light-cone error bound for the reduced second-order formula.

    Builds the interactive decomposition capped at r*Upsilon layers plus an
    explicit tail and evaluates the explicit second-order staircase sums with
    every layer up to r*Upsilon taken as the outermost commutator argument
    (innermost layer included, as in the worst-case display it descends from).
    """
    if r < 1:
        raise ValueError("need r >= 1")
    support = frozenset(support)
    terms = _lightcone_layer_terms(h, support, norm_mode, dense_limit)
    depth = min(r * UPSILON_P2 + 1, len(terms))
    k = sum(terms[:depth])
    value = (t**3) * O_norm / (6.0 * r * r) * k
    return BoundReport(
        "thm1_lightcone",
        value,
        {"t": t, "r": r, "p": 2, "n": h.n, "O_norm": O_norm, "support": sorted(support)},
        {"commutator_sum": k, "layers_used": depth},
        norm_mode,
    )


def thm2_bound(
    h: PauliSum,
    summands: list[PauliSum],
    coloring: Coloring,
    graph: InteractionHypergraph,
    t: float,
    r: int,
    norm_mode: str = "dense",
    dense_limit: int = DENSE_LIMIT,
) -> BoundReport:
    """Summation-observable bound for the color-ordered second-order formula.

    For each summand the color classes are restricted to hyperedges meeting
    the first r*(chi-1)*Upsilon + 1 edge sets around the summand's support;
    everything else forms the tail part.  The per-summand worst-case sums are
    weighted by the summand norms and added.
    """
    if r < 1:
        raise ValueError("need r >= 1")
    coloring.validate(graph)
    chi = coloring.chi
    depth = r * (chi - 1) * UPSILON_P2 + 1
    total = 0.0
    per_summand = []
    norm_for_obs = "one_norm_upper" if norm_mode == "one_norm" else "dense"
    for obs in summands:
        s_m = obs.support()
        region = edge_sets(h, s_m).reached(depth)
        color_parts = []
        assigned = PauliSum(h.n)
        for c in range(1, chi + 1):
            part = PauliSum(h.n)
            for idx, color in enumerate(coloring.assignment):
                if color == c and graph.hyperedges[idx] & region:
                    part = part + graph.subs[idx]
            color_parts.append(part)
            assigned = assigned + part
        tail = h - assigned
        parts = tuple(p for p in color_parts if not p.is_zero()) + ((tail,) if not tail.is_zero() else ())
        if len(parts) < 2:
            contribution = 0.0
        else:
            s1, s2 = _p2_commutator_sums(parts, norm_mode, dense_limit)
            o_norm = pauli.operator_norm(obs, mode=norm_for_obs, dense_limit=dense_limit)
            contribution = (t**3) * o_norm / (6.0 * r * r) * (s1 + 0.5 * s2)
        per_summand.append(contribution)
        total += contribution
    return BoundReport(
        "thm2_chromatic",
        total,
        {"t": t, "r": r, "p": 2, "n": h.n, "chi": chi, "summands": len(summands)},
        {f"m{j}": v for j, v in enumerate(per_summand)},
        norm_mode,
    )


# -- random-input (average-error) bounds ----------------------------------------


def _nested_norm_sum(parts: list[PauliSum], p: int, norm_mode: str, budget: int, max_products: int) -> float:
    """sum over (p+1)-tuples of the chosen norm of the nested commutator.

    Tuples whose inner commutator vanishes are pruned before deeper nesting;
    the unpruned tuple count Gamma**(p+1) must fit the budget.
    """
    gamma = len(parts)
    projected = gamma ** (p + 1)
    if projected > budget:
        raise ValueError(f"nested enumeration needs {projected} tuples (budget {budget})")
    fn = _norm_fn(norm_mode, DENSE_LIMIT, max_products)

    def descend(current: PauliSum, level: int) -> float:
        if level == p + 1:
            return fn(current)
        total = 0.0
        for part in parts:
            nxt = commutator(part, current)
            if not nxt.is_zero():
                total += descend(nxt, level + 1)
        return total

    total = 0.0
    for g1 in parts:
        for g2 in parts:
            inner = commutator(g2, g1)
            if not inner.is_zero():
                total += descend(inner, 2)
    return total


def random_2design_bound(
    h_parts: list[PauliSum],
    obs: PauliSum,
    t: float,
    r: int,
    p: int = 2,
    style: str = "triangle_p2",
    budget: int = 2_000_000,
) -> BoundReport:
    """Average simulation error over 2-design inputs, with observable knowledge.

    triangle_p2 evaluates the explicit second-order display built from
    normalized 2-norms of the staircase commutators; nested_T2 sums the
    normalized 2-norms of all (p+1)-fold nested commutators.  The matching
    variance bound 2 r^2 |O|_2^2 |M|_2^2 / (d (d+1)) is reported alongside.
    """
    if r < 1:
        raise ValueError("need r >= 1")
    nu_o = normalized_two_norm(obs)
    tau = t / r
    if style == "triangle_p2":
        if p != 2:
            raise ValueError("triangle_p2 style is second order only")
        s1, s2 = _p2_commutator_sums(tuple(h_parts), "nu2", DENSE_LIMIT)
        value = math.sqrt(2.0) * (t**3) * nu_o / (12.0 * r * r) * (s1 + 0.5 * s2)
        nu_m = tau**3 * (s1 / 12.0 + s2 / 24.0)
        components = {"triple_sum": s1, "double_sum": s2}
    elif style == "nested_T2":
        t2 = _nested_norm_sum(h_parts, p, "nu2", budget, 4_000_000)
        value = nu_o * t2 * t ** (p + 1) / r**p
        nu_m = t2 * tau ** (p + 1)
        components = {"T2": t2}
    else:
        raise ValueError(f"unknown style {style!r}")
    d = float(1 << obs.n)
    variance = 2.0 * r * r * nu_o**2 * nu_m**2 * d / (d + 1.0)
    components.update({"variance_bound": variance, "multiplicative_nu2": nu_m, "obs_nu2": nu_o})
    return BoundReport(
        f"random_2design_{style}",
        value,
        {"t": t, "r": r, "p": p, "n": obs.n},
        components,
        "nu2",
    )


def random_bound_no_observable(h_parts: list[PauliSum], O_opnorm: float, t: float, r: int) -> BoundReport:
    """Observable-agnostic random-input bound: operator norm of O times the
    normalized 2-norm staircase sums."""
    if r < 1:
        raise ValueError("need r >= 1")
    s1, s2 = _p2_commutator_sums(tuple(h_parts), "nu2", DENSE_LIMIT)
    value = (t**3) * O_opnorm / (6.0 * r * r) * (s1 + 0.5 * s2)
    return BoundReport(
        "random_no_observable",
        value,
        {"t": t, "r": r, "p": 2, "n": h_parts[0].n, "O_norm": O_opnorm},
        {"triple_sum": s1, "double_sum": s2},
        "nu2",
    )


def random_1design_bound(
    h_parts: list[PauliSum],
    obs: PauliSum,
    t: float,
    r: int,
    max_products: int = 4_000_000,
) -> BoundReport:
    """1-design average-error bound from normalized Schatten 4-norms.

    value = (t^3 |O|_4 / 6 r^2 d^(1/4) ...) via the second-order triangle
    display; the 4-norm variance bound is reported alongside.
    """
    if r < 1:
        raise ValueError("need r >= 1")
    nu_o = normalized_four_norm(obs, max_products=max_products)
    s1, s2 = _p2_commutator_sums(tuple(h_parts), "nu4", DENSE_LIMIT, max_products)
    value = (t**3) * nu_o / (6.0 * r * r) * (s1 + 0.5 * s2)
    tau = t / r
    nu_a = tau**3 * (s1 / 12.0 + s2 / 24.0)
    variance = 4.0 * r * r * nu_a**2 * nu_o**2
    return BoundReport(
        "random_1design",
        value,
        {"t": t, "r": r, "p": 2, "n": obs.n},
        {"triple_sum": s1, "double_sum": s2, "variance_bound": variance, "obs_nu4": nu_o},
        "nu4",
    )


def truncation_bound(
    removed_one_norm: float,
    t: float,
    variant: str = "lc",
    dimension: int = 1,
    alpha: float | None = None,
    d0: float | None = None,
    sum_O_norms: float | None = None,
    constant: float = 1.0,
) -> BoundReport:
    """Interaction-truncation error bounds.

    variant="lc" is the exact unitary-distance bound removed_1norm * t;
    variant="trc" is the observable-weighted shape
    constant * t^(D+1) / d0^(alpha - 2D) * sum_m |O_m|, with the chosen
    constant recorded in the report (it is configuration, not a claim).
    """
    if variant == "lc":
        value = removed_one_norm * t
        return BoundReport("truncation_lc", value, {"t": t}, {"removed_one_norm": removed_one_norm}, "one_norm")
    if variant == "trc":
        if alpha is None or d0 is None or sum_O_norms is None:
            raise ValueError("trc variant needs alpha, d0 and sum_O_norms")
        value = constant * t ** (dimension + 1) / d0 ** (alpha - 2 * dimension) * sum_O_norms
        return BoundReport(
            "truncation_trc",
            value,
            {"t": t, "alpha": alpha, "d0": d0, "dimension": dimension},
            {"constant": constant, "sum_O_norms": sum_O_norms},
            "one_norm",
        )
    raise ValueError(f"unknown variant {variant!r}")


def steps_for_epsilon(bound_fn, epsilon: float, r_max: int = 1 << 20) -> int | None:
    """Smallest r <= r_max with bound_fn(r) <= epsilon, or None if unreachable.

    Exponential bracketing followed by bisection; the bound must be
    non-increasing in r and that is checked at the bracketing points.
    """
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    if r_max < 1:
        raise ValueError("r_max must be at least 1")
    lo, lo_val = 1, bound_fn(1)
    if lo_val <= epsilon:
        return 1
    hi = 1
    hi_val = lo_val
    while hi_val > epsilon:
        if hi >= r_max:
            return None
        nxt = min(2 * hi, r_max)
        nxt_val = bound_fn(nxt)
        if nxt_val > hi_val * (1 + 1e-12):
            raise RuntimeError(f"bound increased from r={hi} ({hi_val}) to r={nxt} ({nxt_val}); search aborted")
        lo, lo_val = hi, hi_val
        hi, hi_val = nxt, nxt_val
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if bound_fn(mid) <= epsilon:
            hi = mid
        else:
            lo = mid
    return hi
