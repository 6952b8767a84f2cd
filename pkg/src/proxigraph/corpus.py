"""Bundled worked instances with frozen expected results.

Each builder returns a bundle holding the space, the maps and gauges it was
designed for, an `expected` table the reproduce command compares against, and
a `notes` dict of derived structural facts.  Builders are deterministic and
self-check their structural claims before returning.

The five stable ids:

  ex22_kappa        two-sided family of constant-slope functions indexed by a
                    value in [0, 1]; the map projects every value onto its
                    reciprocal-bracket representative.  The contraction bound
                    holds along edges but fails when checked edge-free.
  ex33_dyadic_l1    dyadic halving chain in the l1 plane; one best proximity
                    point at the origin.  The finite truncation provably breaks
                    the contraction bound at the deepest level, by exactly
                    2^-(depth+1) per pair; this is reported, not hidden.
  ex35_not_bpo      halving chain on the unit square whose edge relation
                    excludes the endpoints; the chain component contains no
                    best proximity point and orbits escape it.
  ex41_fixed_point  amplitude grid of sampled cosine/sine profiles; two maps
                    halve the amplitude and trade sides; the shared zero
                    profile is the common fixed point.
  ex53_pbvp         periodic problem u' = -e^t u on [0, 1] with alpha = e^2;
                    the zero function is the unique periodic solution.

build(example_id, **params) dispatches on id; the random chain generator used
by the property suites lives here too.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .bpp_solver import enumerate_bpps, x_t2_a_set
from .cyclic_contraction import CyclicMapTable, GaugeSpec, kappa_total
from .errors import ParamOutOfRange
from .fixed_point import PairMaps, PsiGauge
from .metric_graph import (
    FiniteMetricGraph,
    check_property_star,
    components,
    has_property_uc,
    is_g_chebyshev,
    is_sharp_proximal,
    pair_distance,
)
from .pbvp import RhsFunction, TimeGrid, GridFunction

EXAMPLE_IDS = ("ex22_kappa", "ex33_dyadic_l1", "ex35_not_bpo",
               "ex41_fixed_point", "ex53_pbvp")


@dataclass
class CyclicInstance:
    example_id: str
    space: FiniteMetricGraph
    tmap: CyclicMapTable
    phi1: GaugeSpec
    phi2: GaugeSpec
    expected: dict = field(default_factory=dict)
    notes: dict = field(default_factory=dict)


@dataclass
class FixedPointInstance:
    example_id: str
    space: FiniteMetricGraph
    pair: PairMaps
    psi: PsiGauge
    seed: str
    expected: dict = field(default_factory=dict)
    notes: dict = field(default_factory=dict)


@dataclass
class PbvpInstance:
    example_id: str
    f: RhsFunction
    alpha: float
    h_spec: dict
    grid: TimeGrid
    w0: GridFunction
    tol: float
    expected: dict = field(default_factory=dict)
    notes: dict = field(default_factory=dict)


def _require(cond: bool, what: str):
    if not cond:
        raise AssertionError(f"corpus construction invariant broke: {what}")


def _label(v: Fraction) -> str:
    return str(v)


# ----- ex22_kappa -------------------------------------------------------


def build_ex22_kappa(N: int = 8) -> CyclicInstance:
    """Two-sided value family with reciprocal-bracket structure.

    Side A holds points f_v, side B points g_v, for v in {0, 1}, the bracket
    representatives 1/k (k = 2..N), the bracket midpoints, and the probe pair
    49/100, 51/100.  Distances: cross pairs 1 + |a - b|, within A |a - b|,
    within B 1.5 |a - b|.  Edges: (f_a, g_b) whenever a >= b and both values
    share a bracket index, plus loops; no other same-side edges.  The map
    sends every value to its bracket representative on the other side.
    """
    if not 3 <= N <= 64:
        raise ParamOutOfRange(f"ex22_kappa needs 3 <= N <= 64, got {N}")
    values: list[Fraction] = [Fraction(0), Fraction(1),
                              Fraction(49, 100), Fraction(51, 100)]
    for k in range(2, N + 1):
        rep = Fraction(1, k)
        values.append(rep)
        values.append((rep + Fraction(1, k - 1)) / 2)
    values = sorted(set(values))
    lab = {v: _label(v) for v in values}
    kap = {v: kappa_total(float(v)) for v in values}

    def rep_of(v: Fraction) -> Fraction:
        return Fraction(0) if kap[v] == 0 else Fraction(1, kap[v])

    ids, side = [], {}
    for v in values:
        ids.append(f"f_{lab[v]}")
        side[f"f_{lab[v]}"] = "A"
    for v in values:
        ids.append(f"g_{lab[v]}")
        side[f"g_{lab[v]}"] = "B"

    n = len(values)
    table = np.zeros((2 * n, 2 * n))
    fv = np.array([float(v) for v in values])
    gap = np.abs(fv[:, None] - fv[None, :])
    table[:n, :n] = gap
    table[n:, n:] = 1.5 * gap
    table[:n, n:] = 1.0 + gap
    table[n:, :n] = 1.0 + gap

    edges = [(f"f_{lab[a]}", f"g_{lab[b]}")
             for a in values for b in values
             if a >= b and kap[a] == kap[b]]
    space = FiniteMetricGraph.from_table(ids, side, table, edges, auto_loops=True)

    mapping = {}
    for v in values:
        mapping[f"f_{lab[v]}"] = f"g_{lab[rep_of(v)]}"
        mapping[f"g_{lab[v]}"] = f"f_{lab[rep_of(v)]}"
    tmap = CyclicMapTable.for_space(space, mapping)

    phi1 = GaugeSpec("floor_fraction")
    phi2 = GaugeSpec("identity")

    geom = pair_distance(space)
    _require(abs(geom.d_ab - 1.0) < 1e-15, "d(A,B) = 1")
    _require(bool(is_sharp_proximal(space, geom)), "sharp proximal pair")
    _require(bool(has_property_uc(space, geom)), "property UC")
    _require(bool(is_g_chebyshev(space, geom)), "parallel pairs are edges")
    _require(bool(check_property_star(space, within=space.side_a())),
             "edge transitivity within A")
    bpps = enumerate_bpps(space, tmap)
    reps = sorted({rep_of(v) for v in values})
    _require(bpps == frozenset(f"f_{lab[r]}" for r in reps),
             "best proximity set is the representative family")
    _require(x_t2_a_set(space, tmap) == bpps, "X set equals the BPP set")

    return CyclicInstance(
        example_id="ex22_kappa",
        space=space,
        tmap=tmap,
        phi1=phi1,
        phi2=phi2,
        expected={
            "probe_pair": ("f_49/100", "g_51/100"),
            "probe_image_distance": 1.0 + 1.0 / 6.0,
            "probe_distance": 1.02,
            "edge_restricted_holds": True,
            "all_pairs_holds": False,
            "bpp_count": len(reps),
            "component_count": len(reps),
        },
        notes={
            "n_levels": N,
            "values": {lab[v]: float(v) for v in values},
            "bpp_ids": sorted(bpps),
        },
    )


# ----- ex33_dyadic_l1 ---------------------------------------------------


def build_ex33_dyadic_l1(depth: int = 6) -> CyclicInstance:
    """Dyadic halving chain in the l1 plane.

    A sits on the line y = 0, B on y = 1, both at x in {0} and the dyadic
    values 2^-n, n = 0..depth.  The map halves x and crosses sides; the value
    below the truncation floor redirects to 0.  Same-side edges are complete,
    cross edges join equal values only.

    The redirect necessarily breaks the half-rate contraction bound on pairs
    touching the deepest value: each such pair overshoots by exactly
    2^-(depth+1).  The expected table freezes that excess so the verifier's
    honest failure is itself a tested behavior.
    """
    if not 2 <= depth <= 30:
        raise ParamOutOfRange(f"ex33_dyadic_l1 needs 2 <= depth <= 30, got {depth}")
    values = [Fraction(0)] + [Fraction(1, 2 ** n) for n in range(depth + 1)]
    values = sorted(set(values))
    lab = {v: _label(v) for v in values}
    deepest = Fraction(1, 2 ** depth)

    points = []
    for v in values:
        points.append((f"a_{lab[v]}", (float(v), 0.0), "A"))
    for v in values:
        points.append((f"b_{lab[v]}", (float(v), 1.0), "B"))

    a_ids = [p for p, _, s in points if s == "A"]
    b_ids = [p for p, _, s in points if s == "B"]
    edges = [(x, y) for x in a_ids for y in a_ids]
    edges += [(x, y) for x in b_ids for y in b_ids]
    for v in values:
        edges.append((f"a_{lab[v]}", f"b_{lab[v]}"))
        edges.append((f"b_{lab[v]}", f"a_{lab[v]}"))
    space = FiniteMetricGraph.from_coords(points, metric="l1", edges=edges,
                                          auto_loops=True)

    def down(v: Fraction) -> Fraction:
        if v == 0 or v == deepest:
            return Fraction(0)
        return v / 2

    mapping = {}
    for v in values:
        mapping[f"a_{lab[v]}"] = f"b_{lab[down(v)]}"
        mapping[f"b_{lab[v]}"] = f"a_{lab[down(v)]}"
    tmap = CyclicMapTable.for_space(space, mapping)

    geom = pair_distance(space)
    _require(abs(geom.d_ab - 1.0) < 1e-15, "d(A,B) = 1")
    _require(bool(has_property_uc(space, geom)), "property UC")
    _require(bool(is_sharp_proximal(space, geom)), "sharp proximal pair")
    _require(bool(is_g_chebyshev(space, geom)), "parallel pairs are edges")
    _require(bool(check_property_star(space, within=space.side_a())),
             "edge transitivity within A")
    _require(enumerate_bpps(space, tmap) == frozenset({"a_0"}),
             "single best proximity point at the origin")

    return CyclicInstance(
        example_id="ex33_dyadic_l1",
        space=space,
        tmap=tmap,
        phi1=GaugeSpec("linear", {"c": 0.5}),
        phi2=GaugeSpec("identity"),
        expected={
            "bpp_ids": ["a_0"],
            "bpp_coords": (0.0, 0.0),
            "violation_excess": float(deepest) / 2.0,
            "violation_count": 2 * (len(values) - 2),
            "equivalence_clauses": (True, True, True),
        },
        notes={
            "depth": depth,
            "deepest_ids": (f"a_{lab[deepest]}", f"b_{lab[deepest]}"),
            "values": {lab[v]: float(v) for v in values},
        },
    )


# ----- ex35_not_bpo -----------------------------------------------------


def build_ex35_not_bpo(depth: int = 6) -> CyclicInstance:
    """Halving chain on the unit square whose middle component holds no
    best proximity point.

    Values {0, 1} and the dyadic chain 2^-n sit at (0, v) on side A and
    (1, v) on side B under l2.  Cross edges join equal values, and halving
    pairs whose two values both lie strictly inside (0, 1); so the chain
    component reaches neither endpoint.  The map halves interior values
    (deepest redirects to 0) and fixes the endpoints, giving exactly two
    best proximity points, both outside the chain component.  Orbits started
    on the chain converge, but to a point of a different component.
    """
    if not 2 <= depth <= 30:
        raise ParamOutOfRange(f"ex35_not_bpo needs 2 <= depth <= 30, got {depth}")
    values = sorted({Fraction(0), Fraction(1)}
                    | {Fraction(1, 2 ** n) for n in range(1, depth + 1)})
    lab = {v: _label(v) for v in values}
    deepest = Fraction(1, 2 ** depth)

    points = []
    for v in values:
        points.append((f"a_{lab[v]}", (0.0, float(v)), "A"))
    for v in values:
        points.append((f"b_{lab[v]}", (1.0, float(v)), "B"))

    def interior(v: Fraction) -> bool:
        return 0 < v < 1

    edges = []
    for v in values:
        edges.append((f"a_{lab[v]}", f"b_{lab[v]}"))
        edges.append((f"b_{lab[v]}", f"a_{lab[v]}"))
    for v in values:
        w = v / 2
        if interior(v) and interior(w) and w in lab:
            for p, q in ((f"a_{lab[v]}", f"b_{lab[w]}"),
                         (f"b_{lab[w]}", f"a_{lab[v]}"),
                         (f"a_{lab[w]}", f"b_{lab[v]}"),
                         (f"b_{lab[v]}", f"a_{lab[w]}")):
                edges.append((p, q))
    space = FiniteMetricGraph.from_coords(points, metric="l2", edges=edges,
                                          auto_loops=True)

    def step(v: Fraction) -> Fraction:
        if v == 0 or v == 1:
            return v
        if v == deepest:
            return Fraction(0)
        return v / 2

    mapping = {}
    for v in values:
        mapping[f"a_{lab[v]}"] = f"b_{lab[step(v)]}"
        mapping[f"b_{lab[v]}"] = f"a_{lab[step(v)]}"
    tmap = CyclicMapTable.for_space(space, mapping)

    geom = pair_distance(space)
    _require(abs(geom.d_ab - 1.0) < 1e-15, "d(A,B) = 1")
    _require(bool(has_property_uc(space, geom)), "property UC")
    _require(bool(is_g_chebyshev(space, geom)), "parallel pairs are edges")
    _require(enumerate_bpps(space, tmap) == frozenset({"a_0", "a_1"}),
             "best proximity points at both endpoints")
    _require(x_t2_a_set(space, tmap) == frozenset({"a_0", "a_1"}),
             "X set is the endpoint pair")
    _require(not check_property_star(space),
             "edge transitivity fails on the union graph")
    _require(len(components(space)) == 3, "three weak components")

    return CyclicInstance(
        example_id="ex35_not_bpo",
        space=space,
        tmap=tmap,
        phi1=GaugeSpec("linear", {"c": 0.5}),
        phi2=GaugeSpec("identity"),
        expected={
            "bpp_ids": ["a_0", "a_1"],
            "chain_seed": "a_1/2",
            "chain_component_has_bpp": False,
            "component_count": 3,
            "bpp_count": 2,
            "cardinality_equal": False,
            "escape_target": "a_0",
        },
        notes={
            "depth": depth,
            "values": {lab[v]: float(v) for v in values},
        },
    )


# ----- ex41_fixed_point -------------------------------------------------


def build_ex41_fixed_point(depth: int = 6, n_time: int = 64) -> FixedPointInstance:
    """Amplitude family of sampled cosine (side A) and sine (side B) profiles.

    Points are c * cos(2 pi t) and c * sin(2 pi t) sampled on n_time uniform
    nodes, c in {2^-1, ..., 2^-depth}, under the sampled sup norm, plus the
    zero profile carried by both sides.  Amplitudes stop at 1/2 so every
    distance stays below 1 and the edge rule d < 1 yields the complete graph.
    Both maps halve the amplitude and swap the profile shape; the deepest
    amplitude maps to zero.  psi is the constant 1/2.
    """
    if not 2 <= depth <= 20:
        raise ParamOutOfRange(f"ex41_fixed_point needs 2 <= depth <= 20, got {depth}")
    if not 8 <= n_time <= 1024:
        raise ParamOutOfRange(f"ex41_fixed_point needs 8 <= n_time <= 1024, got {n_time}")
    amps = [Fraction(1, 2 ** n) for n in range(1, depth + 1)]
    lab = {c: _label(c) for c in amps}
    t = np.arange(n_time) / n_time
    cos_v = np.cos(2 * np.pi * t)
    sin_v = np.sin(2 * np.pi * t)

    points = [("zero", tuple(0.0 for _ in range(n_time)), "AB")]
    for c in amps:
        points.append((f"f_{lab[c]}", tuple(float(c) * cos_v), "A"))
    for c in amps:
        points.append((f"g_{lab[c]}", tuple(float(c) * sin_v), "B"))

    ids = [p for p, _, _ in points]
    coords = {p: np.array(xy) for p, xy, _ in points}
    edges = [(p, q) for p in ids for q in ids
             if float(np.max(np.abs(coords[p] - coords[q]))) < 1.0]
    space = FiniteMetricGraph.from_coords(points, metric="sup", edges=edges,
                                          auto_loops=True)

    deepest = amps[-1]
    t1 = {"zero": "zero"}
    t2 = {"zero": "zero"}
    for c in amps:
        t1[f"f_{lab[c]}"] = "zero" if c == deepest else f"g_{lab[c / 2]}"
        t2[f"g_{lab[c]}"] = "zero" if c == deepest else f"f_{lab[c / 2]}"
    pair = PairMaps.for_space(space, t1, t2)
    psi = PsiGauge.constant(0.5)

    _require(len(space.edges) == len(ids) * len(ids),
             "amplitude cap keeps the graph complete")
    _require(bool(check_property_star(space)), "edge transitivity on the union")
    _require(abs(pair_distance(space).d_ab) < 1e-15, "sides meet at the zero profile")

    return FixedPointInstance(
        example_id="ex41_fixed_point",
        space=space,
        pair=pair,
        psi=psi,
        seed="f_1/2",
        expected={
            "fixed_point": "zero",
            "psi_verified": True,
            "psi_verified_strengthened": True,
            "residual_cap": 1e-8,
            "uniqueness_regime": {"weakly_connected": True, "weak_friendship": True},
        },
        notes={
            "depth": depth,
            "n_time": n_time,
            "amplitudes": {lab[c]: float(c) for c in amps},
        },
    )


# ----- ex53_pbvp --------------------------------------------------------


E_SQUARED = float(np.exp(2.0))


def build_ex53_pbvp(n_nodes: int = 201) -> PbvpInstance:
    """Periodic problem u' = -e^t u on [0, 1] with weight alpha = e^2.

    The comparison function is h(t) = e^2 - e^t, so the contraction factor is
    beta = (e^2 - 1)/e^2.  The constant -1 is a lower solution and the unique
    periodic solution is the zero function, which the discrete operator fixes
    exactly.
    """
    if not 11 <= n_nodes <= 20001:
        raise ParamOutOfRange(f"ex53_pbvp needs 11 <= n_nodes <= 20001, got {n_nodes}")
    grid = TimeGrid(period=1.0, n=n_nodes)
    f = RhsFunction("exp_linear", {"c": -1.0})
    w0 = GridFunction.constant(grid, -1.0)
    beta = (E_SQUARED - 1.0) / E_SQUARED
    return PbvpInstance(
        example_id="ex53_pbvp",
        f=f,
        alpha=E_SQUARED,
        h_spec={"kind": "exp_gap"},
        grid=grid,
        w0=w0,
        tol=1e-10,
        expected={
            "sup_norm_cap": 1e-6,
            "periodicity_cap": 1e-9,
            "beta": beta,
            "ratio_cap": beta + 1e-6,
            "lower_solution_minus_one": True,
            "lower_solution_plus_one": False,
        },
        notes={"n_nodes": n_nodes, "period": 1.0},
    )


# ----- random hypothesis-passing instances ------------------------------


def build_random_chain(seed: int, max_extra_levels: int = 3) -> CyclicInstance:
    """Random instance guaranteed to pass every solver hypothesis.

    One to three components, each a geometric chain of levels above a ground
    level: the value below each level is at most a quarter of it, so the
    level map contracts gaps by at least a factor 3 and the half-rate bound
    holds with room.  Components are complete subgraphs placed far enough
    apart (l1 offsets) that no cross-component pair is ever proximal.  Each
    component ends in a ground two-cycle: exactly one best proximity point
    per component, and every point of A carries its squared-map edge.
    """
    rng = np.random.default_rng(seed)
    n_comp = int(rng.integers(1, 4))
    sizes = [1] * n_comp
    for _ in range(6 - n_comp):
        if rng.random() < 0.75:
            sizes[int(rng.integers(0, n_comp))] += 1
    modes = ["shift" if rng.random() < 0.5 else "collapse" for _ in range(n_comp)]

    points = []
    edges = []
    mapping = {}
    bpp_ids = []
    y = 0.0
    for c, (size, mode) in enumerate(zip(sizes, modes)):
        levels = [0.0]
        if size > 1:
            top = float(rng.uniform(0.5, 1.0))
            vals = [top]
            for _ in range(size - 2):
                vals.append(vals[-1] * float(rng.uniform(0.1, 0.25)))
            levels += sorted(vals)
        comp_ids = []
        for ell, v in enumerate(levels):
            a, b = f"a{c}_{ell}", f"b{c}_{ell}"
            points.append((a, (0.0, y + v), "A"))
            points.append((b, (1.0, y + v), "B"))
            comp_ids += [a, b]
            down = 0 if mode == "collapse" else max(ell - 1, 0)
            mapping[a] = f"b{c}_{down}"
            mapping[b] = f"a{c}_{down}"
        edges += [(p, q) for p in comp_ids for q in comp_ids]
        bpp_ids.append(f"a{c}_0")
        y += 3.0 + float(rng.uniform(0.0, 2.0))

    space = FiniteMetricGraph.from_coords(points, metric="l1", edges=edges,
                                          auto_loops=True)
    tmap = CyclicMapTable.for_space(space, mapping)
    return CyclicInstance(
        example_id=f"random_chain_{seed}",
        space=space,
        tmap=tmap,
        phi1=GaugeSpec("linear", {"c": 0.5}),
        phi2=GaugeSpec("identity"),
        expected={
            "bpp_ids": sorted(bpp_ids),
            "component_count": n_comp,
        },
        notes={"seed": seed, "sizes": sizes, "modes": modes},
    )


# ----- dispatch ---------------------------------------------------------


_BUILDERS = {
    "ex22_kappa": build_ex22_kappa,
    "ex33_dyadic_l1": build_ex33_dyadic_l1,
    "ex35_not_bpo": build_ex35_not_bpo,
    "ex41_fixed_point": build_ex41_fixed_point,
    "ex53_pbvp": build_ex53_pbvp,
}


def build(example_id: str, **params):
    """Build a corpus instance by id; unknown ids and bad params raise
    ParamOutOfRange."""
    if example_id not in _BUILDERS:
        raise ParamOutOfRange(
            f"unknown example id {example_id!r}; known: {', '.join(EXAMPLE_IDS)}")
    try:
        return _BUILDERS[example_id](**params)
    except TypeError as exc:
        raise ParamOutOfRange(f"bad parameters for {example_id}: {exc}") from None
