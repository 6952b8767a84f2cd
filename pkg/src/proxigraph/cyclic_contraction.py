"""Gauge functions and the edge-restricted cyclic contraction verifier.

A gauge is a map on [0, inf) used in the contraction bound
    d(Tx, Ty) <= (I - phi1)(d(x, y)) + (I - phi2)(m(x, y))
                 + (phi1 + phi2 - I)(d(A, B)),
checked only for pairs (x, y) in A x B that are edge-eligible: at least one of
(x, y), (x, Ty), (Ty, x) is an edge.  m(x, y) = max(d(x, Tx), d(y, Ty)).

The floor-fraction gauge needs the reciprocal-bracket index kappa: for
0 < z < 1, kappa(z) is the unique n + 1 with 1/(n+1) <= z < 1/n.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

from .errors import (
    GaugeClassViolation,
    InstanceFormatError,
    OutOfDomain,
    SideMismatch,
)
from .metric_graph import CheckResult, FiniteMetricGraph, PairGeometry, pair_distance

TOL_INEQ = 1e-9       # slack allowed when checking the contraction inequality
KAPPA_SNAP = 1e-12    # snap width for z that is a float neighbour of some 1/n

GAUGE_KINDS = ("linear", "affine_shift", "floor_fraction", "identity", "table")

# declared monotonicity classes, verifiable on a sample grid
CLASS_INCREASING = "increasing"
CLASS_SHIFTED = "nondecreasing_minus_identity"


def kappa(z: float) -> int:
    """Index of the reciprocal bracket containing z, for z strictly inside (0, 1).

    Floats within KAPPA_SNAP of some exact 1/n are treated as 1/n, which keeps
    values like 0.02 (whose reciprocal is 49.999...) on the intended bracket.
    """
    if not 0.0 < z < 1.0:
        raise OutOfDomain(f"kappa needs 0 < z < 1, got {z}")
    recip = 1.0 / z
    near = round(recip)
    if near >= 1 and abs(z - 1.0 / near) <= KAPPA_SNAP:
        return int(near)
    return int(math.ceil(recip))


def kappa_total(z: float) -> int:
    """kappa extended to the closed interval with the conventions 0 -> 0, 1 -> 1."""
    if abs(z) <= KAPPA_SNAP:
        return 0
    if abs(z - 1.0) <= KAPPA_SNAP:
        return 1
    return kappa(z)


@dataclass(frozen=True)
class GaugeSpec:
    """Named gauge with parameters.

    kinds:
      linear         phi(s) = c * s, 0 < c <= 1
      affine_shift   phi(s) = c + s, c >= 0
      floor_fraction phi(s) = floor(s) + frac(s) / kappa(frac(s)), with
                     frac(s) = 0 mapping to floor(s)
      identity       phi(s) = s
      table          piecewise-linear through sorted (s, phi) knots, linearly
                     extended beyond the last knot
    """

    kind: str
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in GAUGE_KINDS:
            raise InstanceFormatError(f"unknown gauge kind {self.kind!r}")
        if self.kind == "linear":
            c = self.params.get("c")
            if c is None or not 0.0 < float(c) <= 1.0:
                raise InstanceFormatError("linear gauge needs 0 < c <= 1")
        elif self.kind == "affine_shift":
            c = self.params.get("c")
            if c is None or float(c) < 0.0:
                raise InstanceFormatError("affine_shift gauge needs c >= 0")
        elif self.kind == "table":
            knots = self.params.get("knots")
            if not knots or len(knots) < 2:
                raise InstanceFormatError("table gauge needs at least two knots")
            ss = [float(s) for s, _ in knots]
            if sorted(ss) != ss or len(set(ss)) != len(ss):
                raise InstanceFormatError("table gauge knots must be strictly sorted in s")

    @classmethod
    def from_dict(cls, data) -> "GaugeSpec":
        if not isinstance(data, dict) or "kind" not in data:
            raise InstanceFormatError("gauge spec must be an object with a 'kind'")
        return cls(kind=str(data["kind"]), params=dict(data.get("params", {})))

    def to_dict(self) -> dict:
        return {"kind": self.kind, "params": dict(self.params)}


def eval_gauge(gauge: GaugeSpec, s: float) -> float:
    if s < 0:
        raise OutOfDomain(f"gauges are defined on [0, inf), got {s}")
    if gauge.kind == "linear":
        return float(gauge.params["c"]) * s
    if gauge.kind == "affine_shift":
        return float(gauge.params["c"]) + s
    if gauge.kind == "identity":
        return s
    if gauge.kind == "floor_fraction":
        fl = math.floor(s)
        frac = s - fl
        if frac <= KAPPA_SNAP:
            return float(fl)
        return float(fl) + frac / kappa(frac)
    # table
    knots = gauge.params["knots"]
    ss = [float(a) for a, _ in knots]
    vv = [float(b) for _, b in knots]
    if s <= ss[0]:
        lo, hi = 0, 1
    elif s >= ss[-1]:
        lo, hi = len(ss) - 2, len(ss) - 1
    else:
        hi = next(i for i, a in enumerate(ss) if a >= s)
        lo = hi - 1
    t = (s - ss[lo]) / (ss[hi] - ss[lo])
    return vv[lo] + t * (vv[hi] - vv[lo])


def verify_gauge_classes(phi1: GaugeSpec, phi2: GaugeSpec, grid) -> CheckResult:
    """phi1 strictly increasing and phi2 - I non-decreasing over the sorted grid.

    Grid values closer than the snap width collapse to one representative:
    they are the same distance up to float noise, and comparing gauge output
    across them would only measure rounding.
    """
    raw = sorted(set(float(s) for s in grid))
    values: list[float] = []
    for s in raw:
        if not values or s - values[-1] > KAPPA_SNAP:
            values.append(s)
    for lo, hi in zip(values, values[1:]):
        if not eval_gauge(phi1, hi) > eval_gauge(phi1, lo):
            return CheckResult(False, ("phi1 not increasing", lo, hi))
        shift_lo = eval_gauge(phi2, lo) - lo
        shift_hi = eval_gauge(phi2, hi) - hi
        if shift_hi < shift_lo - KAPPA_SNAP:
            return CheckResult(False, ("phi2 - I decreasing", lo, hi))
    return CheckResult(True)


# ----- cyclic map tables ------------------------------------------------


@dataclass(frozen=True)
class CyclicMapTable:
    """Total self-map table that swaps the two sides: T(A) in B and T(B) in A."""

    mapping: dict[str, str]

    @classmethod
    def for_space(cls, space: FiniteMetricGraph, mapping: dict[str, str]) -> "CyclicMapTable":
        t = cls(dict(mapping))
        t.validate(space)
        return t

    @classmethod
    def from_dict(cls, data) -> "CyclicMapTable":
        if not isinstance(data, dict) or "map" not in data or not isinstance(data["map"], dict):
            raise InstanceFormatError("map spec must be an object with a 'map' table")
        return cls({str(k): str(v) for k, v in data["map"].items()})

    def to_dict(self) -> dict:
        return {"map": {k: self.mapping[k] for k in sorted(self.mapping)}}

    def validate(self, space: FiniteMetricGraph):
        for p in space.ids:
            if p not in self.mapping:
                raise InstanceFormatError(f"map table is not total: missing {p!r}")
        for src, dst in self.mapping.items():
            if src not in space.index or dst not in space.index:
                raise InstanceFormatError(f"map entry {src!r} -> {dst!r} references unknown point")
            if "A" in space.side[src] and "B" not in space.side[dst]:
                raise SideMismatch(f"T must send A into B, but {src!r} -> {dst!r}")
            if "B" in space.side[src] and "A" not in space.side[dst]:
                raise SideMismatch(f"T must send B into A, but {src!r} -> {dst!r}")

    def __call__(self, x: str) -> str:
        return self.mapping[x]

    def twice(self, x: str) -> str:
        return self.mapping[self.mapping[x]]


def m_value(space: FiniteMetricGraph, tmap: CyclicMapTable, x: str, y: str) -> float:
    """max of the two orbit gaps d(x, Tx) and d(y, Ty), for x in A and y in B."""
    if "A" not in space.side.get(x, ""):
        raise SideMismatch(f"{x!r} is not on side A")
    if "B" not in space.side.get(y, ""):
        raise SideMismatch(f"{y!r} is not on side B")
    return max(space.d(x, tmap(x)), space.d(y, tmap(y)))


def verify_t2_preserves_edges(space: FiniteMetricGraph, tmap: CyclicMapTable) -> CheckResult:
    """Edges within A must map to edges under the squared map."""
    a = set(space.side_a())
    for x, y in sorted(space.edges):
        if x in a and y in a:
            img = (tmap.twice(x), tmap.twice(y))
            if img not in space.edges:
                return CheckResult(False, (x, y, img[0], img[1]))
    return CheckResult(True)


# ----- contraction verification ----------------------------------------


@dataclass(frozen=True)
class ContractionReport:
    """Aggregated result of a contraction sweep.

    violations hold (x, y, lhs, rhs) sorted by id pair.  holds is True exactly
    when no inequality violation was found and the proximal set A0 mapped into
    B0 (the latter is tracked separately in maps_a0_into_b0).
    """

    holds: bool
    checked_pairs: int
    violations: tuple[tuple[str, str, float, float], ...]
    maps_a0_into_b0: bool = True
    a0_witness: tuple | None = None


def eligible_pair(space: FiniteMetricGraph, tmap: CyclicMapTable, x: str, y: str) -> bool:
    ty = tmap(y)
    return (space.has_edge(x, y) or space.has_edge(x, ty) or space.has_edge(ty, x))


def contraction_rhs(space: FiniteMetricGraph, tmap: CyclicMapTable,
                    phi1: GaugeSpec, phi2: GaugeSpec, geom: PairGeometry,
                    x: str, y: str) -> float:
    dxy = space.d(x, y)
    m = m_value(space, tmap, x, y)
    dab = geom.d_ab
    return ((dxy - eval_gauge(phi1, dxy))
            + (m - eval_gauge(phi2, m))
            + (eval_gauge(phi1, dab) + eval_gauge(phi2, dab) - dab))


def check_pair(space: FiniteMetricGraph, tmap: CyclicMapTable,
               phi1: GaugeSpec, phi2: GaugeSpec, x: str, y: str,
               geom: PairGeometry | None = None, tol: float = TOL_INEQ):
    """Re-check a single pair; returns (ok, lhs, rhs).  Used for witness replay."""
    geom = geom or pair_distance(space)
    lhs = space.d(tmap(x), tmap(y))
    rhs = contraction_rhs(space, tmap, phi1, phi2, geom, x, y)
    return lhs <= rhs + tol, lhs, rhs


def verify_g_cyclic_contraction(space: FiniteMetricGraph, tmap: CyclicMapTable,
                                phi1: GaugeSpec, phi2: GaugeSpec,
                                tol: float = TOL_INEQ,
                                all_pairs: bool = False,
                                check_gauges: bool = True) -> ContractionReport:
    """Sweep A x B and check the contraction bound on edge-eligible pairs.

    all_pairs=True drops the eligibility restriction, which is how an edge-free
    (classical) contraction claim is refuted on instances that only contract
    along edges.  Gauge monotonicity classes are validated first on the grid of
    distance values the sweep will touch.
    """
    tmap.validate(space)
    geom = pair_distance(space)
    a, b = space.side_a(), space.side_b()

    pairs = [(x, y) for x in sorted(a) for y in sorted(b)
             if all_pairs or eligible_pair(space, tmap, x, y)]

    if check_gauges:
        grid = {geom.d_ab}
        for x, y in pairs:
            grid.add(space.d(x, y))
            grid.add(m_value(space, tmap, x, y))
        ok = verify_gauge_classes(phi1, phi2, grid)
        if not ok:
            raise GaugeClassViolation(f"gauge class check failed: {ok.witness}")

    violations = []
    for x, y in pairs:
        lhs = space.d(tmap(x), tmap(y))
        rhs = contraction_rhs(space, tmap, phi1, phi2, geom, x, y)
        if lhs > rhs + tol:
            violations.append((x, y, lhs, rhs))

    a0_ok, a0_witness = True, None
    for x in sorted(geom.a0):
        if tmap(x) not in geom.b0:
            a0_ok, a0_witness = False, (x, tmap(x))
            break

    return ContractionReport(
        holds=not violations and a0_ok,
        checked_pairs=len(pairs),
        violations=tuple(violations),
        maps_a0_into_b0=a0_ok,
        a0_witness=a0_witness,
    )


# ----- JSON helpers for CLI ---------------------------------------------


def load_gauge_pair(path, strict=False) -> tuple[GaugeSpec, GaugeSpec]:
    """Read {"schema": "1", "phi1": {...}, "phi2": {...}} from a file."""
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise InstanceFormatError(f"invalid JSON in {path}: {exc}") from exc
    if not isinstance(data, dict) or "phi1" not in data or "phi2" not in data:
        raise InstanceFormatError("gauge file needs 'phi1' and 'phi2' entries")
    unknown = set(data) - {"schema", "phi1", "phi2"}
    if unknown:
        msg = f"unknown gauge file field(s): {sorted(unknown)}"
        if strict:
            raise InstanceFormatError(msg)
        import sys
        print(f"warning: {msg}", file=sys.stderr)
    return GaugeSpec.from_dict(data["phi1"]), GaugeSpec.from_dict(data["phi2"])


def load_map(path, strict=False) -> CyclicMapTable:
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise InstanceFormatError(f"invalid JSON in {path}: {exc}") from exc
    if isinstance(data, dict):
        unknown = set(data) - {"schema", "map"}
        if unknown:
            msg = f"unknown map file field(s): {sorted(unknown)}"
            if strict:
                raise InstanceFormatError(msg)
            import sys
            print(f"warning: {msg}", file=sys.stderr)
    return CyclicMapTable.from_dict(data)
