"""Groupoids and partial groupoids over description sets.

The carrier of a groupoid is a :class:`~proxgroupoid.feature.DescriptionSet`.
Its operation is tabulated once, as an index table over the sorted carrier,
so closure, regularity and application are lookups.  Pairs whose result falls
outside the carrier are left undefined, which turns the groupoid partial.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import EmptyRegion, NotInCarrier, ProbeSetMismatch, UndefinedPair
from .feature import DescriptionSet, FeatureVector, ProbeSet, QuantizedValue, descriptions_of

VectorOp = Callable[[FeatureVector, FeatureVector], FeatureVector]
LevelOp = Callable[[np.ndarray, np.ndarray], np.ndarray]


@dataclass(frozen=True)
class BinaryOp:
    """A named binary operation on feature vectors.

    ``levels`` is an optional vectorized form acting on broadcast integer
    level arrays of shape ``(..., n_probes)``; when present it is used to
    tabulate whole carriers at once.
    """

    name: str
    fn: VectorOp = field(compare=False, repr=False)
    levels: LevelOp | None = field(default=None, compare=False, repr=False)

    def __call__(self, a: FeatureVector, b: FeatureVector) -> FeatureVector:
        return self.fn(a, b)


def _positionwise(pick):
    def op(a: FeatureVector, b: FeatureVector) -> FeatureVector:
        _check_compatible(a, b)
        return FeatureVector(tuple(
            QuantizedValue(pick(x.level, y.level), x.precision) for x, y in zip(a.values, b.values)
        ))

    return op


def _first(a: FeatureVector, b: FeatureVector) -> FeatureVector:
    return a


MIN = BinaryOp("min", _positionwise(min), np.minimum)
MAX = BinaryOp("max", _positionwise(max), np.maximum)
FIRST = BinaryOp("first", _first, lambda a, b: np.broadcast_arrays(a, b)[0])

OPS = {op.name: op for op in (MIN, MAX, FIRST)}


def custom_op(name: str, fn: VectorOp) -> BinaryOp:
    return BinaryOp(name, fn)


def get_op(name: str) -> BinaryOp:
    try:
        return OPS[name]
    except KeyError:
        raise ValueError(f"unknown operation {name!r}; choose from {sorted(OPS)}") from None


def _check_compatible(a: FeatureVector, b: FeatureVector) -> None:
    if a.precisions != b.precisions:
        raise ProbeSetMismatch(f"incompatible feature vectors {a} and {b}")


class DescriptiveGroupoid:
    """A carrier Q(A) with an operation closed on it.

    Instances returned by :func:`make_groupoid` whose operation leaves the
    carrier on some pairs are :class:`PartialGroupoid`.
    """

    def __init__(self, carrier: DescriptionSet, op: BinaryOp, table: np.ndarray, source=None):
        self.carrier = carrier
        self.op = op
        self.source = source if source is not None else carrier.source
        self.elements: tuple[FeatureVector, ...] = tuple(carrier)
        self.index = {v: i for i, v in enumerate(self.elements)}
        self.table = table
        self.table.setflags(write=False)
        self.precisions = self.elements[0].precisions
        self.levels = np.array([v.levels for v in self.elements], dtype=np.int64)

    def __repr__(self):
        kind = "total" if self.total else "partial"
        return f"<{type(self).__name__} {self.op.name} {kind} |carrier|={len(self)}>"

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, v) -> bool:
        return v in self.index

    @property
    def total(self) -> bool:
        return bool((self.table >= 0).all())

    def position(self, v: FeatureVector) -> int:
        try:
            return self.index[v]
        except (KeyError, TypeError):
            raise NotInCarrier(f"{v} is not in the carrier") from None

    def defined(self, a: FeatureVector, b: FeatureVector) -> bool:
        return self.table[self.position(a), self.position(b)] >= 0

    def apply(self, a: FeatureVector, b: FeatureVector) -> FeatureVector:
        k = self.table[self.position(a), self.position(b)]
        if k < 0:
            raise UndefinedPair(f"{a} ∘ {b} is undefined in this groupoid")
        return self.elements[k]

    def regular_mask(self) -> np.ndarray:
        """Boolean mask over ``elements``: a is regular iff (a∘y)∘a = a for some y."""
        T = self.table
        k = len(self.elements)
        rows = np.arange(k)[:, None]
        left = np.where(T >= 0, T, 0)
        back = T[left, rows]  # back[i, j] = (e_i ∘ e_j) ∘ e_i
        return ((T >= 0) & (back == rows)).any(axis=1)

    def regular_elements(self) -> list[FeatureVector]:
        return [v for v, r in zip(self.elements, self.regular_mask()) if r]

    def summary(self) -> dict:
        return {
            "op": self.op.name,
            "total": self.total,
            "carrier": [list(v.levels) if len(v) > 1 else v.levels[0] for v in self.elements],
            "carrier_size": len(self),
            "regular_count": int(self.regular_mask().sum()),
        }


class PartialGroupoid(DescriptiveGroupoid):
    @property
    def domain(self) -> frozenset[tuple[FeatureVector, FeatureVector]]:
        e = self.elements
        return frozenset((e[i], e[j]) for i, j in zip(*np.nonzero(self.table >= 0)))


def _tabulate(elements: tuple[FeatureVector, ...], op: BinaryOp) -> np.ndarray:
    k = len(elements)
    if op.levels is not None:
        L = np.array([v.levels for v in elements], dtype=np.int64)
        n = L.shape[1]
        res = np.asarray(op.levels(L[:, None, :], L[None, :, :])).reshape(-1, n)
        if n == 1:
            flat, res = L[:, 0], res[:, 0]
            pos = np.minimum(np.searchsorted(flat, res), k - 1)
            return np.where(flat[pos] == res, pos, -1).reshape(k, k)
        _, inv = np.unique(np.concatenate([L, res]), axis=0, return_inverse=True)
        inv = inv.reshape(-1)
        lookup = np.full(inv.max() + 1, -1, dtype=np.int64)
        lookup[inv[:k]] = np.arange(k)
        return lookup[inv[k:]].reshape(k, k)
    index = {v: i for i, v in enumerate(elements)}
    table = np.full((k, k), -1, dtype=np.int64)
    for i, a in enumerate(elements):
        for j, b in enumerate(elements):
            table[i, j] = index.get(op(a, b), -1)
    return table


def groupoid_on(carrier: DescriptionSet, op: BinaryOp, source=None) -> DescriptiveGroupoid:
    """Tabulate ``op`` on ``carrier``; partial when the op is not closed."""
    elements = tuple(carrier)
    if not elements:
        raise EmptyRegion("a groupoid needs a non-empty carrier")
    precs = {v.precisions for v in elements}
    if len(precs) != 1:
        raise ProbeSetMismatch("carrier mixes feature vectors from different probe sets")
    table = _tabulate(elements, op)
    cls = DescriptiveGroupoid if (table >= 0).all() else PartialGroupoid
    return cls(carrier, op, table, source)


def make_groupoid(region, probes: ProbeSet | None = None, op: BinaryOp | str = MIN) -> DescriptiveGroupoid:
    """Groupoid on the descriptions of ``region`` under ``op`` (default min)."""
    if isinstance(op, str):
        op = get_op(op)
    return groupoid_on(descriptions_of(region, probes), op, source=region)


def apply(g: DescriptiveGroupoid, a: FeatureVector, b: FeatureVector) -> FeatureVector:
    return g.apply(a, b)


def pseudometric(a: FeatureVector, b: FeatureVector) -> float:
    """Sum of per-probe absolute differences, in the probes' real units."""
    if len(a) != len(b):
        raise ProbeSetMismatch(f"feature vectors of lengths {len(a)} and {len(b)}")
    _check_compatible(a, b)
    total = 0.0
    for x, y in zip(a.values, b.values):
        total += abs(x.level - y.level) / 10**x.precision
    return total


def elements_neighbourly(a: FeatureVector, b: FeatureVector, tolerance: float = 0.0) -> bool:
    if tolerance == 0:
        if len(a) != len(b):
            raise ProbeSetMismatch(f"feature vectors of lengths {len(a)} and {len(b)}")
        _check_compatible(a, b)
        return a == b
    return pseudometric(a, b) <= tolerance


def is_regular_element(g: DescriptiveGroupoid, a: FeatureVector) -> bool:
    return bool(g.regular_mask()[g.position(a)])


def is_regular_groupoid(g: DescriptiveGroupoid) -> bool:
    return bool(g.regular_mask().all())


def _check_groupoids(g1: DescriptiveGroupoid, g2: DescriptiveGroupoid) -> None:
    if g1.precisions != g2.precisions:
        raise ProbeSetMismatch("groupoids built from incompatible probe sets")


def neighbour_matrix(g1: DescriptiveGroupoid, g2: DescriptiveGroupoid, tolerance: float = 0.0) -> np.ndarray:
    """Boolean matrix M[i, j]: element i of g1 is neighbourly with element j of g2."""
    _check_groupoids(g1, g2)
    if tolerance == 0:
        return (g1.levels[:, None, :] == g2.levels[None, :, :]).all(axis=2)
    dist = np.zeros((len(g1), len(g2)))
    for p, prec in enumerate(g1.precisions):
        dist += np.abs(g1.levels[:, None, p] - g2.levels[None, :, p]) / 10**prec
    return dist <= tolerance


def groupoids_neighbourly(g1: DescriptiveGroupoid, g2: DescriptiveGroupoid, tolerance: float = 0.0) -> bool:
    """True when some carrier element of g1 is neighbourly with one of g2."""
    _check_groupoids(g1, g2)
    if tolerance == 0:
        return not g1.carrier.entries.isdisjoint(g2.carrier.entries)
    return bool(neighbour_matrix(g1, g2, tolerance).any())
