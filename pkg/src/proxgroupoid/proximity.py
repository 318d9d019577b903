"""Finite spatial and descriptive proximity.

A :class:`DescriptiveSpace` is a finite set of points, a probe set and a
pseudometric.  Regions are subsets of one space.  The spatial relation
:func:`near` compares metric closures; the descriptive relation
:func:`descriptively_near` compares descriptions of those closures.
:func:`validate_axioms` checks either relation against its five proximity
axioms, exhaustively on small spaces and by sampling on larger ones.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterable, Iterator, Sequence

import numpy as np

from .errors import EmptyRegion, InvalidValue, SpaceMismatch
from .feature import FeatureVector, ProbeSet, describe

EXHAUSTIVE_LIMIT = 6
DEFAULT_BUDGET = 1000


@dataclass(frozen=True)
class Point:
    """A located point; ``raw`` holds the inputs its probes read."""

    id: Hashable
    location: tuple = ()
    raw: tuple = ()


Metric = Callable[[Point, Point], float]


def discrete_metric(p: Point, q: Point) -> float:
    return 0.0 if p.id == q.id else 1.0


def euclidean_metric(p: Point, q: Point) -> float:
    return math.dist(p.location, q.location)


def partition_metric(blocks: Iterable[Iterable[Hashable]]) -> Metric:
    """Pseudometric that is 0 inside each block of point ids and 1 across blocks."""
    label = {}
    for i, block in enumerate(blocks):
        for pid in block:
            label[pid] = i

    def metric(p: Point, q: Point) -> float:
        if p.id == q.id:
            return 0.0
        lp, lq = label.get(p.id, ("own", p.id)), label.get(q.id, ("own", q.id))
        return 0.0 if lp == lq else 1.0

    metric.blocks = label
    return metric


class DescriptiveSpace:
    """Finite point set X with probes Φ and a pseudometric (discrete by default)."""

    def __init__(self, points: Iterable[Point], probes: ProbeSet, metric: Metric = discrete_metric, name=None):
        self._points: dict[Hashable, Point] = {}
        for p in points:
            if p.id in self._points:
                raise InvalidValue(f"duplicate point id {p.id!r}")
            self._points[p.id] = p
        self._order = {pid: i for i, pid in enumerate(self._points)}
        self.probes = probes
        self.metric = metric
        self.name = name
        self._descriptions: dict[Hashable, FeatureVector] = {}
        self._closures: dict[frozenset, frozenset] = {}

    def __repr__(self):
        return f"DescriptiveSpace({self.name or ''!s}, {len(self)} points)"

    def __len__(self) -> int:
        return len(self._points)

    def __contains__(self, pid) -> bool:
        return pid in self._points

    @property
    def ids(self) -> tuple:
        return tuple(self._points)

    @property
    def points(self) -> tuple[Point, ...]:
        return tuple(self._points.values())

    def point(self, pid) -> Point:
        return self._points[pid]

    def description(self, pid) -> FeatureVector:
        try:
            return self._descriptions[pid]
        except KeyError:
            d = self._descriptions[pid] = describe(self._points[pid], self.probes)
            return d

    def region(self, ids: Iterable[Hashable] = ()) -> "Region":
        ids = frozenset(ids)
        missing = [i for i in ids if i not in self._points]
        if missing:
            raise InvalidValue(f"ids not in space: {missing[:5]}")
        return Region(ids, self)

    def whole(self) -> "Region":
        return Region(frozenset(self._points), self)

    def singleton(self, pid) -> "Region":
        return self.region((pid,))

    def sort_ids(self, ids: Iterable[Hashable]) -> list:
        return sorted(ids, key=self._order.__getitem__)

    def check_metric(self, tol: float = 0.0) -> None:
        """Raise ``InvalidValue`` unless the metric is a pseudometric on X.

        Quadratic in |X|; meant for small spaces and tests.
        """
        pts = self.points
        for i, p in enumerate(pts):
            if self.metric(p, p) != 0:
                raise InvalidValue(f"metric nonzero on diagonal at {p.id!r}")
            for q in pts[i + 1:]:
                dpq, dqp = self.metric(p, q), self.metric(q, p)
                if dpq < 0 or abs(dpq - dqp) > tol:
                    raise InvalidValue(f"metric not symmetric/non-negative at {p.id!r}, {q.id!r}")


@dataclass(frozen=True)
class Region:
    """A subset of one space, stored as point ids."""

    ids: frozenset
    space: DescriptiveSpace = field(compare=False, repr=False)

    def __hash__(self):
        return hash((self.ids, id(self.space)))

    def __eq__(self, other):
        return isinstance(other, Region) and self.space is other.space and self.ids == other.ids

    def __len__(self) -> int:
        return len(self.ids)

    def __bool__(self) -> bool:
        return bool(self.ids)

    def __contains__(self, pid) -> bool:
        return pid in self.ids

    def __iter__(self) -> Iterator[Point]:
        pt = self.space.point
        return (pt(i) for i in self.space.sort_ids(self.ids))

    def sorted_ids(self) -> list:
        return self.space.sort_ids(self.ids)

    def _same(self, other: "Region") -> None:
        if self.space is not other.space:
            raise SpaceMismatch("regions belong to different spaces")

    def __or__(self, other: "Region") -> "Region":
        self._same(other)
        return Region(self.ids | other.ids, self.space)

    def __and__(self, other: "Region") -> "Region":
        self._same(other)
        return Region(self.ids & other.ids, self.space)


def _require(*regions: Region) -> None:
    for r in regions:
        if not r:
            raise EmptyRegion("operation needs a non-empty region")


def _same_space(a: Region, b: Region) -> None:
    if a.space is not b.space:
        raise SpaceMismatch("regions belong to different spaces")


# -- spatial proximity ----------------------------------------------------------


def point_set_distance(x: Point, A: Region) -> float:
    """D(x, A): smallest metric distance from ``x`` to a point of ``A``."""
    _require(A)
    metric = A.space.metric
    return min(metric(x, a) for a in A)


def spatial_closure(A: Region) -> Region:
    """cl(A) = {x in X : D(x, A) = 0}; equals A under the discrete metric."""
    _require(A)
    space = A.space
    if space.metric is discrete_metric:
        return A
    cached = space._closures.get(A.ids)
    if cached is None:
        metric = space.metric
        members = [space.point(i) for i in A.ids]
        cached = frozenset(
            x.id for x in space.points if x.id in A.ids or any(metric(x, a) == 0 for a in members)
        )
        space._closures[A.ids] = cached
    return Region(cached, space)


def near(A: Region, B: Region) -> bool:
    """Spatial proximity: the closures of A and B share a point."""
    _require(A, B)
    _same_space(A, B)
    return not spatial_closure(A).ids.isdisjoint(spatial_closure(B).ids)


# -- descriptive proximity ------------------------------------------------------


def _descriptions(A: Region) -> set[FeatureVector]:
    d = A.space.description
    return {d(i) for i in A.ids}


def descriptive_intersection(A: Region, B: Region) -> Region:
    """Points of A ∪ B whose description occurs in both Q(A) and Q(B)."""
    _require(A, B)
    _same_space(A, B)
    common = _descriptions(A) & _descriptions(B)
    d = A.space.description
    return Region(frozenset(i for i in A.ids | B.ids if d(i) in common), A.space)


def descriptively_near(A: Region, B: Region) -> bool:
    _require(A, B)
    _same_space(A, B)
    return bool(descriptive_intersection(spatial_closure(A), spatial_closure(B)))


def descriptive_closure(A: Region) -> Region:
    """cl_Φ(A): every point of X whose description occurs in Q(cl(A))."""
    _require(A)
    space = A.space
    q = _descriptions(spatial_closure(A))
    return Region(frozenset(i for i in space.ids if space.description(i) in q), space)


# -- axiom validation -------------------------------------------------------------

AXIOMS = {
    "spatial": ("P0", "P1", "P2", "P3", "P4"),
    "descriptive": ("dP0", "dP1", "dP2", "dP3", "dP4"),
}


@dataclass
class AxiomReport:
    axiom: str
    passed: bool
    witness: tuple[list, list, list] | None = None
    checked: int = 0

    @property
    def verdict(self) -> str:
        return "pass" if self.passed else "fail"

    def to_dict(self) -> dict:
        w = None
        if self.witness is not None:
            w = dict(zip("ABC", (list(s) for s in self.witness)))
        return {"axiom": self.axiom, "verdict": self.verdict, "checked": self.checked, "witness": w}

    def merge(self, other: "AxiomReport") -> "AxiomReport":
        """Combine reports for the same axiom; the first witness found wins."""
        if other.axiom != self.axiom:
            raise InvalidValue("cannot merge reports for different axioms")
        witness = self.witness if self.witness is not None else other.witness
        return AxiomReport(self.axiom, self.passed and other.passed, witness, self.checked + other.checked)


def merge_reports(*runs: Sequence[AxiomReport]) -> list[AxiomReport]:
    merged: dict[str, AxiomReport] = {}
    for run in runs:
        for r in run:
            merged[r.axiom] = merged[r.axiom].merge(r) if r.axiom in merged else r
    return list(merged.values())


Relation = Callable[[Region, Region], bool]


def _total(rel: Relation) -> Relation:
    # empty regions are far from everything, including the empty region
    def wrapped(A, B):
        return bool(A) and bool(B) and bool(rel(A, B))

    return wrapped


def _overlap(system: str) -> Relation:
    if system == "spatial":
        return lambda A, B: not A.ids.isdisjoint(B.ids)
    return lambda A, B: bool(A) and bool(B) and bool(descriptive_intersection(A, B))


def validate_axioms(
    space: DescriptiveSpace,
    system: str = "spatial",
    budget: int | None = None,
    *,
    relation: Relation | None = None,
    exhaustive: bool | None = None,
    seed: int | None = None,
) -> list[AxiomReport]:
    """Check the five proximity axioms of ``system`` on ``space``.

    Spaces with at most ``EXHAUSTIVE_LIMIT`` points are checked on every
    triple of subsets; larger ones on ``budget`` random triples.  ``relation``
    replaces the implemented relation (useful for fault injection).
    """
    if system not in AXIOMS:
        raise InvalidValue(f"unknown axiom system {system!r}")
    base = relation or (near if system == "spatial" else descriptively_near)
    rel = _total(base)
    overlap = _overlap(system)
    if exhaustive is None:
        exhaustive = len(space) <= EXHAUSTIVE_LIMIT
    if exhaustive:
        if len(space) > 12:
            raise InvalidValue("exhaustive validation is limited to 12 points")
        return _validate_exhaustive(space, system, rel, overlap)
    return _validate_sampled(space, system, rel, overlap, budget or DEFAULT_BUDGET, seed)


def _validate_exhaustive(space, system, rel, overlap) -> list[AxiomReport]:
    ids = list(space.ids)
    n = len(ids)
    m = 1 << n
    regions = [Region(frozenset(ids[i] for i in range(n) if mask >> i & 1), space) for mask in range(m)]
    R = np.zeros((m, m), dtype=bool)
    I = np.zeros((m, m), dtype=bool)
    for a in range(m):
        for b in range(m):
            R[a, b] = rel(regions[a], regions[b])
            I[a, b] = overlap(regions[a], regions[b])
    masks = np.arange(m)
    union = masks[:, None] | masks[None, :]

    # S[B, C]: every singleton {b}, b in B, is near C (vacuous for empty B)
    S = np.ones((m, m), dtype=bool)
    for b in range(m):
        for i in range(n):
            if b >> i & 1:
                S[b] &= R[1 << i]

    def witness(a, b, c):
        return tuple(space.sort_ids(regions[k].ids) for k in (a, b, c))

    names = AXIOMS[system]
    reports = []

    bad = np.argwhere(R[0] | R[:, 0])
    w = None
    if len(bad):
        k = int(bad[0][0])
        w = witness(0, k, 0) if R[0, k] else witness(k, 0, 0)
    reports.append(AxiomReport(names[0], w is None, w, m))

    bad = np.argwhere(R != R.T)
    w = witness(int(bad[0][0]), int(bad[0][1]), 0) if len(bad) else None
    reports.append(AxiomReport(names[1], w is None, w, m * m))

    bad = np.argwhere(I & ~R)
    w = witness(int(bad[0][0]), int(bad[0][1]), 0) if len(bad) else None
    reports.append(AxiomReport(names[2], w is None, w, m * m))

    lhs = R[:, union]
    rhs = R[:, :, None] | R[:, None, :]
    bad = np.argwhere(lhs != rhs)
    w = witness(*map(int, bad[0])) if len(bad) else None
    reports.append(AxiomReport(names[3], w is None, w, m**3))

    viol = R[:, :, None] & S[None, :, :] & ~R[:, None, :]
    bad = np.argwhere(viol)
    w = witness(*map(int, bad[0])) if len(bad) else None
    reports.append(AxiomReport(names[4], w is None, w, m**3))
    return reports


def _validate_sampled(space, system, rel, overlap, budget, seed) -> list[AxiomReport]:
    rng = random.Random(seed)
    ids = list(space.ids)

    def subset():
        p = rng.random()
        return Region(frozenset(i for i in ids if rng.random() < p), space)

    names = AXIOMS[system]
    found = [None] * 5

    def w(*rs):
        return tuple(space.sort_ids(r.ids) for r in rs)

    empty = Region(frozenset(), space)
    for _ in range(budget):
        A, B, C = subset(), subset(), subset()
        if found[0] is None and (rel(empty, A) or rel(A, empty)):
            found[0] = w(empty, A, empty)
        ab = rel(A, B)
        if found[1] is None and ab != rel(B, A):
            found[1] = w(A, B, empty)
        if found[2] is None and overlap(A, B) and not ab:
            found[2] = w(A, B, empty)
        if found[3] is None and rel(A, B | C) != (ab or rel(A, C)):
            found[3] = w(A, B, C)
        if found[4] is None and ab and not rel(A, C):
            if all(rel(space.singleton(b), C) for b in B.ids):
                found[4] = w(A, B, C)
    return [AxiomReport(name, f is None, f, budget) for name, f in zip(names, found)]


# -- random spaces ----------------------------------------------------------------

_LEVELS = (0.1, 0.2, 0.3, 0.4)
SPATIAL_METRICS = ("discrete", "partition", "euclidean", "matched")
# The descriptive axioms (dP4) and the descriptive closure corollary hold for
# closure-form nearness only when each zero-distance class carries a single
# description.  "matched" collapses points of equal intensity only; Euclidean
# spaces for descriptive checks use distinct locations.
DESCRIPTIVE_METRICS = ("discrete", "euclidean", "matched")


def random_space(
    rng: random.Random,
    n: int,
    precision: int = 2,
    metrics=SPATIAL_METRICS,
    distinct_locations: bool = False,
) -> DescriptiveSpace:
    """Small random space: few intensity levels and a randomly chosen (pseudo)metric.

    ``partition`` collapses random blocks of points regardless of their
    descriptions; ``matched`` collapses random blocks of equally described
    points.
    """
    if distinct_locations:
        cells = rng.sample([(r, c) for r in range(5) for c in range(5)], n)
    else:
        cells = [(rng.randrange(3), rng.randrange(3)) for _ in range(n)]
    raws = [rng.choice(_LEVELS) for _ in range(n)]
    pts = [Point(i, cells[i], (raws[i],)) for i in range(n)]
    kind = rng.choice(metrics)
    if kind == "discrete":
        metric = discrete_metric
    elif kind == "euclidean":
        metric = euclidean_metric
    elif kind == "partition":
        metric = partition_metric([[i for i in range(n) if rng.randrange(2) == b] for b in range(2)])
    elif kind == "matched":
        blocks = [[i for i in range(n) if raws[i] == v and rng.randrange(2) == b] for v in _LEVELS for b in range(2)]
        metric = partition_metric(blocks)
    else:
        raise InvalidValue(f"unknown metric kind {kind!r}")
    return DescriptiveSpace(pts, ProbeSet.intensity(precision), metric, name=kind)
