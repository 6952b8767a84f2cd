"""Finite metric spaces carrying a directed edge relation over two sides A and B.

Points live on side "A", side "B", or both ("AB").  Distances come either from
coordinates under a named metric (l1, l2, sup) or from an explicit table.  The
edge set is a set of ordered id pairs; every point must carry its trivial loop.

All predicates return a CheckResult holding a boolean and, on failure, a small
witness tuple that pinpoints the violation.
"""
from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import EmptySide, InstanceFormatError, UnknownPoint

TOL_METRIC = 1e-9       # relative tolerance for triangle-inequality validation
TOL_PARALLEL = 1e-12    # absolute tolerance for distance ties against d(A,B)

_METRICS = ("l1", "l2", "sup", "table")
_SIDES = ("A", "B", "AB")

SCHEMA_VERSION = "1"

_INSTANCE_FIELDS = {"schema", "points", "metric", "dist_table", "edges", "auto_loops"}
_POINT_FIELDS = {"id", "coords", "side"}


@dataclass(frozen=True)
class CheckResult:
    """Boolean verdict plus an optional witness for the failing case."""

    ok: bool
    witness: tuple | None = None

    def __bool__(self) -> bool:
        return self.ok


@dataclass(frozen=True)
class PairGeometry:
    """Distance between the sides and the points/pairs that realize it."""

    d_ab: float
    a0: frozenset[str]
    b0: frozenset[str]
    parallel_pairs: frozenset[tuple[str, str]]


@dataclass
class FiniteMetricGraph:
    ids: tuple[str, ...]
    side: dict[str, str]
    dist: np.ndarray
    edges: frozenset[tuple[str, str]]
    coords: dict[str, tuple[float, ...] | None] = field(default_factory=dict)
    metric: str = "table"

    def __post_init__(self):
        self.index = {p: i for i, p in enumerate(self.ids)}
        if len(self.index) != len(self.ids):
            raise InstanceFormatError("duplicate point ids")
        self._validate()

    # ----- construction -------------------------------------------------

    @classmethod
    def from_coords(cls, points, metric="l2", edges=(), auto_loops=True):
        """points: iterable of (id, coords, side) triples."""
        ids, side, coords = [], {}, {}
        for pid, xy, s in points:
            ids.append(str(pid))
            side[str(pid)] = _check_side(s)
            coords[str(pid)] = tuple(float(v) for v in xy)
        if metric not in ("l1", "l2", "sup"):
            raise InstanceFormatError(f"metric {metric!r} needs coordinates from l1/l2/sup")
        dim = {len(c) for c in coords.values()}
        if len(dim) > 1:
            raise InstanceFormatError("points have mixed coordinate dimensions")
        arr = np.array([coords[p] for p in ids], dtype=float)
        diff = arr[:, None, :] - arr[None, :, :]
        if metric == "l1":
            dist = np.abs(diff).sum(axis=2)
        elif metric == "l2":
            dist = np.sqrt((diff ** 2).sum(axis=2))
        else:
            dist = np.abs(diff).max(axis=2)
        return cls(tuple(ids), side, dist,
                   _edge_set(ids, edges, auto_loops), coords, metric)

    @classmethod
    def from_table(cls, ids, side, table, edges=(), auto_loops=True):
        ids = tuple(str(p) for p in ids)
        side = {str(p): _check_side(s) for p, s in side.items()}
        dist = np.array(table, dtype=float)
        if dist.shape != (len(ids), len(ids)):
            raise InstanceFormatError("distance table shape does not match point count")
        return cls(ids, side, dist, _edge_set(ids, edges, auto_loops),
                   {p: None for p in ids}, "table")

    @classmethod
    def from_dict(cls, data, strict=False):
        """Build from the JSON instance format (schema "1")."""
        if not isinstance(data, dict):
            raise InstanceFormatError("instance document must be a JSON object")
        _check_fields(data, _INSTANCE_FIELDS, "instance", strict)
        schema = data.get("schema", SCHEMA_VERSION)
        if str(schema) != SCHEMA_VERSION:
            raise InstanceFormatError(f"unsupported schema version {schema!r}")
        pts = data.get("points")
        if not isinstance(pts, list) or not pts:
            raise InstanceFormatError("instance needs a nonempty 'points' list")
        metric = data.get("metric", "l2")
        if metric not in _METRICS:
            raise InstanceFormatError(f"unknown metric {metric!r}")
        ids, side, coords = [], {}, {}
        for rec in pts:
            _check_fields(rec, _POINT_FIELDS, "point", strict)
            try:
                pid = str(rec["id"])
            except (KeyError, TypeError):
                raise InstanceFormatError("point record missing 'id'") from None
            ids.append(pid)
            side[pid] = _check_side(rec.get("side"))
            c = rec.get("coords")
            coords[pid] = None if c is None else tuple(float(v) for v in c)
        edges = [tuple(map(str, e)) for e in data.get("edges", [])]
        auto_loops = bool(data.get("auto_loops", False))
        if metric == "table":
            table = data.get("dist_table")
            if table is None:
                raise InstanceFormatError("metric 'table' requires 'dist_table'")
            g = cls.from_table(ids, side, table, edges, auto_loops)
            g.coords = coords
            return g
        if any(coords[p] is None for p in ids):
            raise InstanceFormatError(f"metric {metric!r} requires coords on every point")
        return cls.from_coords([(p, coords[p], side[p]) for p in ids],
                               metric, edges, auto_loops)

    @classmethod
    def from_json(cls, path, strict=False):
        try:
            with open(path) as fh:
                data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise InstanceFormatError(f"invalid JSON in {path}: {exc}") from exc
        return cls.from_dict(data, strict=strict)

    def to_dict(self) -> dict:
        return {
            "schema": SCHEMA_VERSION,
            "points": [
                {"id": p, "coords": list(self.coords.get(p)) if self.coords.get(p) else None,
                 "side": self.side[p]}
                for p in self.ids
            ],
            "metric": "table",
            "dist_table": [[float(v) for v in row] for row in self.dist],
            "edges": sorted([a, b] for a, b in self.edges),
            "auto_loops": False,
        }

    # ----- basic access -------------------------------------------------

    def d(self, x: str, y: str) -> float:
        return float(self.dist[self._i(x), self._i(y)])

    def side_a(self) -> tuple[str, ...]:
        return tuple(p for p in self.ids if "A" in self.side[p])

    def side_b(self) -> tuple[str, ...]:
        return tuple(p for p in self.ids if "B" in self.side[p])

    def has_edge(self, x: str, y: str) -> bool:
        return (x, y) in self.edges

    def _i(self, pid: str) -> int:
        try:
            return self.index[pid]
        except KeyError:
            raise UnknownPoint(f"unknown point id {pid!r}") from None

    # ----- validation ---------------------------------------------------

    def _validate(self):
        n = len(self.ids)
        d = self.dist
        if np.any(~np.isfinite(d)):
            raise InstanceFormatError("distance table contains non-finite entries")
        if np.any(d < 0):
            raise InstanceFormatError("negative distance in table")
        if np.any(np.abs(np.diag(d)) > 0):
            raise InstanceFormatError("nonzero self-distance in table")
        if np.any(np.abs(d - d.T) > TOL_METRIC * np.maximum(1.0, np.abs(d))):
            raise InstanceFormatError("distance table is not symmetric")
        scale = max(1.0, float(d.max())) if n else 1.0
        tol = TOL_METRIC * scale
        for k in range(n):
            slack = d[:, :] - (d[:, k][:, None] + d[k, :][None, :])
            if np.any(slack > tol):
                i, j = np.unravel_index(int(np.argmax(slack)), slack.shape)
                raise InstanceFormatError(
                    f"triangle inequality fails for ({self.ids[i]}, {self.ids[k]}, "
                    f"{self.ids[j]}): {d[i, j]} > {d[i, k]} + {d[k, j]}")
        for x, y in self.edges:
            if x not in self.index or y not in self.index:
                raise InstanceFormatError(f"edge ({x!r}, {y!r}) references unknown point")
        for p in self.ids:
            if (p, p) not in self.edges:
                raise InstanceFormatError(f"missing trivial loop edge on point {p!r}")


def _check_side(s):
    if s not in _SIDES:
        raise InstanceFormatError(f"side must be one of {_SIDES}, got {s!r}")
    return s


def _check_fields(rec, allowed, what, strict):
    if not isinstance(rec, dict):
        raise InstanceFormatError(f"{what} record must be an object")
    unknown = set(rec) - allowed
    if unknown:
        msg = f"unknown {what} field(s): {sorted(unknown)}"
        if strict:
            raise InstanceFormatError(msg)
        warnings.warn(msg, stacklevel=3)


def _edge_set(ids, edges, auto_loops):
    out = {(str(a), str(b)) for a, b in edges}
    if auto_loops:
        out |= {(p, p) for p in ids}
    return frozenset(out)


# ----- pair geometry ----------------------------------------------------


def pair_distance(space: FiniteMetricGraph) -> PairGeometry:
    """d(A,B) together with the proximal subsets A0, B0 and the realizing pairs."""
    a, b = space.side_a(), space.side_b()
    if not a or not b:
        raise EmptySide("pair_distance needs nonempty A and B")
    best = min(space.d(x, y) for x in a for y in b)
    pairs = frozenset((x, y) for x in a for y in b
                      if space.d(x, y) <= best + TOL_PARALLEL)
    return PairGeometry(
        d_ab=best,
        a0=frozenset(x for x, _ in pairs),
        b0=frozenset(y for _, y in pairs),
        parallel_pairs=pairs,
    )


def is_sharp_proximal(space: FiniteMetricGraph, geom: PairGeometry | None = None) -> CheckResult:
    """Every point of A has exactly one partner in B at distance d(A,B), and vice versa."""
    geom = geom or pair_distance(space)
    a, b = space.side_a(), space.side_b()
    for x in a:
        partners = tuple(y for y in b if abs(space.d(x, y) - geom.d_ab) <= TOL_PARALLEL)
        if len(partners) != 1:
            return CheckResult(False, (x, partners))
    for y in b:
        partners = tuple(x for x in a if abs(space.d(x, y) - geom.d_ab) <= TOL_PARALLEL)
        if len(partners) != 1:
            return CheckResult(False, (y, partners))
    return CheckResult(True)


def is_g_chebyshev(space: FiniteMetricGraph, geom: PairGeometry | None = None) -> CheckResult:
    """Every parallel pair (x, y) in A x B at distance d(A,B) is an edge."""
    geom = geom or pair_distance(space)
    for pair in sorted(geom.parallel_pairs):
        if pair not in space.edges:
            return CheckResult(False, pair)
    return CheckResult(True)


def has_property_uc(space: FiniteMetricGraph, geom: PairGeometry | None = None) -> CheckResult:
    """No point of B sits at distance d(A,B) from two distinct points of A.

    Finite surrogate of the uniform-closeness property: two A-points equally
    proximal to the same B-point must coincide.
    """
    geom = geom or pair_distance(space)
    a, b = space.side_a(), space.side_b()
    for y in b:
        close = [x for x in a if abs(space.d(x, y) - geom.d_ab) <= TOL_PARALLEL]
        if len(close) > 1:
            return CheckResult(False, (close[0], close[1], y))
    return CheckResult(True)


# ----- graph structure --------------------------------------------------


def _undirected_adj(space: FiniteMetricGraph) -> dict[str, set[str]]:
    adj: dict[str, set[str]] = {p: set() for p in space.ids}
    for x, y in space.edges:
        adj[x].add(y)
        adj[y].add(x)
    return adj


def component_of(space: FiniteMetricGraph, x: str) -> frozenset[str]:
    """Weakly connected component of x: reachability after forgetting direction."""
    space._i(x)
    adj = _undirected_adj(space)
    seen = {x}
    stack = [x]
    while stack:
        for nxt in adj[stack.pop()]:
            if nxt not in seen:
                seen.add(nxt)
                stack.append(nxt)
    return frozenset(seen)


def components(space: FiniteMetricGraph) -> list[frozenset[str]]:
    """All weakly connected components, ordered by their smallest member id."""
    left = set(space.ids)
    out = []
    while left:
        comp = component_of(space, min(left))
        out.append(comp)
        left -= comp
    return sorted(out, key=min)


def is_weakly_connected(space: FiniteMetricGraph, within=None) -> bool:
    """Connectivity after symmetrizing edges, optionally on an induced subset."""
    nodes = tuple(space.ids) if within is None else tuple(within)
    if not nodes:
        return True
    node_set = set(nodes)
    adj = {p: set() for p in nodes}
    for x, y in space.edges:
        if x in node_set and y in node_set:
            adj[x].add(y)
            adj[y].add(x)
    seen = {nodes[0]}
    stack = [nodes[0]]
    while stack:
        for nxt in adj[stack.pop()]:
            if nxt not in seen:
                seen.add(nxt)
                stack.append(nxt)
    return len(seen) == len(node_set)


def check_property_star(space: FiniteMetricGraph, within=None) -> CheckResult:
    """Edge transitivity on the (optionally induced) graph.

    Finite surrogate of the limit-edge property: whenever a chain of edges
    x -> y -> z exists, the shortcut edge x -> z must exist too.  `within`
    restricts both endpoints to a subset (e.g. side A).
    """
    node_set = set(space.ids) if within is None else set(within)
    edges = [(x, y) for x, y in space.edges if x in node_set and y in node_set]
    succ: dict[str, list[str]] = {}
    for x, y in edges:
        succ.setdefault(x, []).append(y)
    for x, y in sorted(edges):
        for z in sorted(succ.get(y, ())):
            if (x, z) not in space.edges:
                return CheckResult(False, (x, y, z))
    return CheckResult(True)
