"""Gauges, the reciprocal-bracket index, and the contraction verifier."""
from __future__ import annotations

import json
import math

import numpy as np
import pytest

from proxigraph import (
    CyclicMapTable,
    FiniteMetricGraph,
    GaugeClassViolation,
    GaugeSpec,
    InstanceFormatError,
    OutOfDomain,
    SideMismatch,
    build,
    contraction_rhs,
    eligible_pair,
    eval_gauge,
    kappa,
    kappa_total,
    m_value,
    pair_distance,
    verify_g_cyclic_contraction,
    verify_gauge_classes,
    verify_t2_preserves_edges,
)
from proxigraph.cyclic_contraction import check_pair, load_gauge_pair, load_map


# ----- kappa ------------------------------------------------------------


def test_kappa_frozen_values():
    # hand arithmetic: kappa(z) = n with 1/n <= z < 1/(n-1)
    assert kappa(0.49) == 3      # 1/3 <= 0.49 < 1/2
    assert kappa(0.51) == 2      # 1/2 <= 0.51 < 1
    assert kappa(0.5) == 2       # left bracket endpoint belongs to its index
    assert kappa(0.02) == 50
    assert kappa(1.0 / 3.0) == 3
    assert kappa(0.4) == 3       # 1/3 <= 0.4 < 1/2
    assert kappa(0.75) == 2
    assert kappa(0.999) == 2


def test_kappa_snap_against_float_noise():
    # the float just below 0.02 has reciprocal 50.0000...07; without the snap
    # it would land in bracket 51
    below = np.nextafter(0.02, 0.0)
    assert 1.0 / below > 50.0
    assert kappa(float(below)) == 50
    # the difference 0.51 - 0.49 lands just above 0.02 and must still index 50
    assert kappa(0.51 - 0.49) == 50


def test_kappa_domain():
    for bad in (0.0, -0.5, 1.0, 1.5):
        with pytest.raises(OutOfDomain):
            kappa(bad)


def test_kappa_total_conventions():
    assert kappa_total(0.0) == 0
    assert kappa_total(1.0) == 1
    assert kappa_total(0.5) == 2
    assert kappa_total(1e-15) == 0   # inside the snap width of 0


# ----- gauges -----------------------------------------------------------


def test_floor_fraction_frozen_values():
    g = GaugeSpec("floor_fraction")
    assert eval_gauge(g, 1.02) == pytest.approx(1.0004, abs=1e-15)
    assert eval_gauge(g, 0.49) == pytest.approx(0.49 / 3.0, abs=1e-15)
    assert eval_gauge(g, 0.75) == pytest.approx(0.375, abs=1e-15)
    assert eval_gauge(g, 2.0) == 2.0
    assert eval_gauge(g, 0.0) == 0.0


def test_floor_fraction_jumps_up_at_bracket_edges():
    g = GaugeSpec("floor_fraction")
    # just below 1/3 the index is 4, at 1/3 it is 3; the value jumps upward
    below = 1.0 / 3.0 - 1e-9
    assert eval_gauge(g, below) < eval_gauge(g, 1.0 / 3.0)


def test_gauge_kinds_and_validation():
    assert eval_gauge(GaugeSpec("linear", {"c": 0.5}), 3.0) == 1.5
    assert eval_gauge(GaugeSpec("affine_shift", {"c": 0.25}), 3.0) == 3.25
    assert eval_gauge(GaugeSpec("identity"), 3.0) == 3.0
    table = GaugeSpec("table", {"knots": [(0.0, 0.0), (1.0, 0.5), (2.0, 1.5)]})
    assert eval_gauge(table, 0.5) == 0.25
    assert eval_gauge(table, 1.5) == 1.0
    assert eval_gauge(table, 3.0) == 2.5    # linear extension past the last knot
    with pytest.raises(OutOfDomain):
        eval_gauge(table, -0.1)
    with pytest.raises(InstanceFormatError):
        GaugeSpec("linear", {"c": 0.0})
    with pytest.raises(InstanceFormatError):
        GaugeSpec("linear", {"c": 1.2})
    with pytest.raises(InstanceFormatError):
        GaugeSpec("affine_shift", {"c": -1.0})
    with pytest.raises(InstanceFormatError):
        GaugeSpec("table", {"knots": [(1.0, 0.0), (0.0, 1.0)]})
    with pytest.raises(InstanceFormatError):
        GaugeSpec("cubic")


def test_gauge_class_check():
    phi1 = GaugeSpec("linear", {"c": 0.5})
    phi2 = GaugeSpec("affine_shift", {"c": 0.25})
    assert bool(verify_gauge_classes(phi1, phi2, [0.0, 0.5, 1.0, 2.0]))
    flat = GaugeSpec("table", {"knots": [(0.0, 1.0), (1.0, 1.0)]})
    res = verify_gauge_classes(flat, phi2, [0.0, 0.5, 1.0])
    assert not res and res.witness[0] == "phi1 not increasing"
    shrinking = GaugeSpec("table", {"knots": [(0.0, 1.0), (10.0, 2.0)]})
    res = verify_gauge_classes(phi1, shrinking, [0.0, 5.0, 10.0])
    assert not res and res.witness[0] == "phi2 - I decreasing"


def test_gauge_class_check_clusters_float_twins():
    # two grid values one ulp apart are one distance, not a monotonicity probe
    phi1 = GaugeSpec("floor_fraction")
    base = 1.0 + 1.0 / 24.0
    twin = np.nextafter(base, 0.0)
    grid = [1.0, twin, base, 2.0]
    assert bool(verify_gauge_classes(phi1, GaugeSpec("identity"), grid))


# ----- map tables -------------------------------------------------------


def two_pair_space():
    pts = [("a0", (0.0, 0.0), "A"), ("a1", (0.0, 1.0), "A"),
           ("b0", (1.0, 0.0), "B"), ("b1", (1.0, 1.0), "B")]
    edges = [("a0", "b0"), ("b0", "a0"), ("a1", "b1"), ("b1", "a1")]
    return FiniteMetricGraph.from_coords(pts, metric="l1", edges=edges)


def test_map_table_validation():
    sp = two_pair_space()
    good = CyclicMapTable.for_space(sp, {"a0": "b0", "a1": "b0",
                                         "b0": "a0", "b1": "a0"})
    assert good("a1") == "b0" and good.twice("a1") == "a0"
    with pytest.raises(InstanceFormatError):   # not total
        CyclicMapTable.for_space(sp, {"a0": "b0"})
    with pytest.raises(SideMismatch):          # A -> A is not cyclic
        CyclicMapTable.for_space(sp, {"a0": "a1", "a1": "b1",
                                      "b0": "a0", "b1": "a1"})


def test_m_value_and_sides():
    sp = two_pair_space()
    tmap = CyclicMapTable.for_space(sp, {"a0": "b0", "a1": "b1",
                                         "b0": "a0", "b1": "a1"})
    # m = max(d(a1, T a1), d(b0, T b0)) = max(1, 1) = 1
    assert m_value(sp, tmap, "a1", "b0") == 1.0
    with pytest.raises(SideMismatch):
        m_value(sp, tmap, "b0", "a1")


def test_t2_edge_preservation():
    pts = [("a0", (0.0, 0.0), "A"), ("a1", (0.0, 1.0), "A"),
           ("b0", (1.0, 0.0), "B"), ("b1", (1.0, 1.0), "B")]
    # one directed A-edge; the squared map must keep it an edge
    sp = FiniteMetricGraph.from_coords(pts, metric="l1", edges=[("a0", "a1")])
    keeps = CyclicMapTable.for_space(sp, {"a0": "b0", "a1": "b1",
                                          "b0": "a0", "b1": "a1"})
    assert bool(verify_t2_preserves_edges(sp, keeps))
    # cross the orbits: squared map swaps a0 and a1, reversing the edge
    swaps = CyclicMapTable.for_space(sp, {"a0": "b1", "a1": "b0",
                                          "b0": "a0", "b1": "a1"})
    res = verify_t2_preserves_edges(sp, swaps)
    assert not res and res.witness == ("a0", "a1", "a1", "a0")


# ----- contraction bound ------------------------------------------------


def test_rhs_collapses_to_d_ab_at_the_floor():
    # (a0, b0) sits at d = m = d(A, B), where the bound must reduce to d(A, B)
    # itself for every admissible gauge pair
    sp = two_pair_space()
    tmap = CyclicMapTable.for_space(sp, {"a0": "b0", "a1": "b1",
                                         "b0": "a0", "b1": "a1"})
    geom = pair_distance(sp)
    assert sp.d("a0", "b0") == geom.d_ab
    assert m_value(sp, tmap, "a0", "b0") == geom.d_ab
    pairs = [(GaugeSpec("linear", {"c": 0.5}), GaugeSpec("identity")),
             (GaugeSpec("floor_fraction"), GaugeSpec("identity")),
             (GaugeSpec("linear", {"c": 0.9}),
              GaugeSpec("affine_shift", {"c": 0.3})),
             (GaugeSpec("identity"), GaugeSpec("identity"))]
    for phi1, phi2 in pairs:
        rhs = contraction_rhs(sp, tmap, phi1, phi2, geom, "a0", "b0")
        assert rhs == pytest.approx(geom.d_ab, abs=1e-12)


def test_eligibility_routes():
    pts = [("a0", (0.0, 0.0), "A"), ("a1", (0.0, 1.0), "A"),
           ("b0", (1.0, 0.0), "B"), ("b1", (1.0, 1.0), "B")]
    tm = {"a0": "b0", "a1": "b1", "b0": "a0", "b1": "a1"}

    direct = FiniteMetricGraph.from_coords(pts, metric="l1", edges=[("a0", "b1")])
    tmap = CyclicMapTable.for_space(direct, tm)
    assert eligible_pair(direct, tmap, "a0", "b1")

    # (x, Ty): T b1 = a1, so the edge (a0, a1) makes (a0, b1) eligible
    via_image = FiniteMetricGraph.from_coords(pts, metric="l1", edges=[("a0", "a1")])
    tmap = CyclicMapTable.for_space(via_image, tm)
    assert eligible_pair(via_image, tmap, "a0", "b1")

    # (Ty, x) reversed
    via_rev = FiniteMetricGraph.from_coords(pts, metric="l1", edges=[("a1", "a0")])
    tmap = CyclicMapTable.for_space(via_rev, tm)
    assert eligible_pair(via_rev, tmap, "a0", "b1")

    bare = FiniteMetricGraph.from_coords(pts, metric="l1")
    tmap = CyclicMapTable.for_space(bare, tm)
    assert not eligible_pair(bare, tmap, "a0", "b1")


def test_probe_pair_frozen_arithmetic():
    inst = build("ex22_kappa", N=8)
    sp, tm = inst.space, inst.tmap
    lhs = sp.d(tm("f_49/100"), tm("g_51/100"))
    assert abs(lhs - (1.0 + 1.0 / 6.0)) <= 1e-12
    assert abs(sp.d("f_49/100", "g_51/100") - 1.02) <= 1e-12
    # the bound the probe pair would need: 1.02 - phi1(1.02) + 1 = 1.0196
    rhs = contraction_rhs(sp, tm, inst.phi1, inst.phi2, pair_distance(sp),
                          "f_49/100", "g_51/100")
    assert rhs == pytest.approx(1.0196, abs=1e-12)
    assert lhs > rhs


def test_verifier_edge_restricted_vs_all_pairs():
    inst = build("ex22_kappa", N=8)
    rep = verify_g_cyclic_contraction(inst.space, inst.tmap, inst.phi1, inst.phi2)
    assert rep.holds and not rep.violations
    assert rep.maps_a0_into_b0
    rep_all = verify_g_cyclic_contraction(inst.space, inst.tmap,
                                          inst.phi1, inst.phi2, all_pairs=True)
    assert not rep_all.holds
    probe = [(x, y) for x, y, _, _ in rep_all.violations]
    assert ("f_49/100", "g_51/100") in probe


def test_violations_replay_through_check_pair():
    inst = build("ex22_kappa", N=8)
    rep = verify_g_cyclic_contraction(inst.space, inst.tmap,
                                      inst.phi1, inst.phi2, all_pairs=True)
    for x, y, lhs, rhs in rep.violations[:10]:
        ok, lhs2, rhs2 = check_pair(inst.space, inst.tmap,
                                    inst.phi1, inst.phi2, x, y)
        assert not ok
        assert lhs2 == lhs and rhs2 == rhs


def test_bad_gauge_class_refused():
    inst = build("ex22_kappa", N=8)
    flat = GaugeSpec("table", {"knots": [(0.0, 1.0), (5.0, 1.0)]})
    with pytest.raises(GaugeClassViolation):
        verify_g_cyclic_contraction(inst.space, inst.tmap, flat, inst.phi2)


def test_strict_inequality_mode():
    # the dyadic instance achieves exact equality on interior pairs, so with
    # zero slack those pairs flip to violations
    inst = build("ex33_dyadic_l1", depth=4)
    rep = verify_g_cyclic_contraction(inst.space, inst.tmap,
                                      inst.phi1, inst.phi2, tol=0.0)
    loose = verify_g_cyclic_contraction(inst.space, inst.tmap,
                                        inst.phi1, inst.phi2)
    assert len(rep.violations) >= len(loose.violations)


# ----- file loaders -----------------------------------------------------


def test_load_gauge_pair_and_map(tmp_path):
    gpath = tmp_path / "g.json"
    gpath.write_text(json.dumps({
        "schema": "1",
        "phi1": {"kind": "linear", "params": {"c": 0.5}},
        "phi2": {"kind": "identity"},
    }))
    phi1, phi2 = load_gauge_pair(gpath)
    assert phi1.kind == "linear" and phi2.kind == "identity"

    mpath = tmp_path / "m.json"
    mpath.write_text(json.dumps({
        "schema": "1",
        "map": {"a0": "b0", "b0": "a0"},
    }))
    tmap = load_map(mpath)
    assert tmap("a0") == "b0"

    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"schema": "1", "phi1": {"kind": "linear",
                                                       "params": {"c": 0.5}}}))
    with pytest.raises(InstanceFormatError):
        load_gauge_pair(bad)
