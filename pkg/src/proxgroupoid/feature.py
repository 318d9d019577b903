"""Probe functions, quantized feature vectors and description sets.

A point is described by applying every probe of a :class:`ProbeSet` to it and
quantizing each result to a fixed number of decimal places.  Two points have
*matching descriptions* when their quantized vectors are equal, which keeps
matching exact and free of floating-point equality hazards.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from decimal import ROUND_HALF_UP, Decimal
from functools import lru_cache
from numbers import Integral, Real
from typing import Any, Callable, Hashable, Iterable, Iterator, Sequence

from .errors import EmptyRegion, InvalidValue, ProbeDomainError

DEFAULT_PRECISION = 2


def _check_precision(precision) -> int:
    if isinstance(precision, bool) or not isinstance(precision, Integral) or precision < 0:
        raise InvalidValue(f"precision must be a non-negative integer, got {precision!r}")
    return int(precision)


def _level(raw: float, precision: int) -> int:
    # repr() gives the shortest decimal that round-trips, so 0.835 is read as
    # exactly 0.835 rather than 0.83499999...
    scaled = Decimal(repr(raw)).scaleb(precision)
    return int(scaled.to_integral_value(rounding=ROUND_HALF_UP))


@dataclass(frozen=True)
class QuantizedValue:
    """A real number stored as an integer count of ``10**-precision`` units."""

    level: int
    precision: int = DEFAULT_PRECISION

    @property
    def value(self) -> float:
        return self.level / 10**self.precision

    def __float__(self) -> float:
        return self.value

    def __str__(self) -> str:
        return str(Decimal(self.level).scaleb(-self.precision))


@lru_cache(maxsize=1 << 16, typed=True)
def quantize(raw: float, precision: int = DEFAULT_PRECISION) -> QuantizedValue:
    """Round ``raw`` to ``precision`` decimals, halves away from zero.

    >>> quantize(0.835, 2).level
    84
    """
    precision = _check_precision(precision)
    if isinstance(raw, bool) or not isinstance(raw, Real):
        raise InvalidValue(f"raw value must be a real number, got {raw!r}")
    raw = float(raw)
    if not math.isfinite(raw):
        raise InvalidValue(f"cannot quantize non-finite value {raw!r}")
    return QuantizedValue(_level(raw, precision), precision)


# -- probes -----------------------------------------------------------------

PROBE_KINDS = ("intensity", "map")


def _intensity(point) -> float:
    return point.raw[0]


@dataclass(frozen=True)
class ProbeDescriptor:
    """A named scalar probe ``point -> real`` with its quantization precision.

    ``kind`` is ``"intensity"`` for the built-in grey-level probe and
    ``"map"`` for any user-registered scalar map.
    """

    id: str
    fn: Callable[[Any], float] = field(compare=False, repr=False)
    kind: str = "map"
    precision: int = DEFAULT_PRECISION

    def __post_init__(self):
        _check_precision(self.precision)
        if self.kind not in PROBE_KINDS:
            raise InvalidValue(f"unknown probe kind {self.kind!r}")

    def __call__(self, point) -> float:
        return self.fn(point)


def intensity_probe(precision: int = DEFAULT_PRECISION, id: str = "intensity") -> ProbeDescriptor:
    """Grey-level probe: reads the first raw input of a point."""
    return ProbeDescriptor(id, _intensity, "intensity", precision)


def scalar_probe(id: str, fn: Callable[[Any], float], precision: int = DEFAULT_PRECISION) -> ProbeDescriptor:
    return ProbeDescriptor(id, fn, "map", precision)


@dataclass(frozen=True)
class ProbeSet:
    """Ordered, non-empty collection of probes; positions index feature vectors."""

    probes: tuple[ProbeDescriptor, ...]

    def __post_init__(self):
        probes = tuple(self.probes)
        object.__setattr__(self, "probes", probes)
        if not probes:
            raise InvalidValue("a probe set needs at least one probe")
        ids = [p.id for p in probes]
        if len(set(ids)) != len(ids):
            raise InvalidValue(f"duplicate probe ids in {ids}")

    @classmethod
    def of(cls, *probes: ProbeDescriptor) -> "ProbeSet":
        return cls(tuple(probes))

    @classmethod
    def intensity(cls, precision: int = DEFAULT_PRECISION) -> "ProbeSet":
        return cls((intensity_probe(precision),))

    def __len__(self) -> int:
        return len(self.probes)

    def __iter__(self) -> Iterator[ProbeDescriptor]:
        return iter(self.probes)

    def __getitem__(self, i) -> ProbeDescriptor:
        return self.probes[i]

    @property
    def ids(self) -> tuple[str, ...]:
        return tuple(p.id for p in self.probes)

    @property
    def precisions(self) -> tuple[int, ...]:
        return tuple(p.precision for p in self.probes)


# -- descriptions -------------------------------------------------------------


@dataclass(frozen=True)
class FeatureVector:
    values: tuple[QuantizedValue, ...]

    @classmethod
    def from_levels(cls, levels: Sequence[int], precision: int | Sequence[int] = DEFAULT_PRECISION) -> "FeatureVector":
        """Build a vector directly from integer levels, e.g. ``from_levels([63])``."""
        if isinstance(precision, Integral):
            precision = [precision] * len(levels)
        if len(precision) != len(levels):
            raise InvalidValue("one precision per level required")
        return cls(tuple(QuantizedValue(int(l), _check_precision(p)) for l, p in zip(levels, precision)))

    @property
    def levels(self) -> tuple[int, ...]:
        return tuple(v.level for v in self.values)

    @property
    def precisions(self) -> tuple[int, ...]:
        return tuple(v.precision for v in self.values)

    def __len__(self) -> int:
        return len(self.values)

    def __iter__(self) -> Iterator[QuantizedValue]:
        return iter(self.values)

    def __str__(self) -> str:
        return "(" + ", ".join(str(v.level) for v in self.values) + ")"


def describe(point, probes: ProbeSet) -> FeatureVector:
    """Feature vector of ``point``: every probe applied, then quantized."""
    values = []
    for probe in probes:
        try:
            raw = probe(point)
        except (IndexError, KeyError, TypeError, ValueError, AttributeError, ZeroDivisionError) as exc:
            raise ProbeDomainError(f"probe {probe.id!r} undefined at point {getattr(point, 'id', point)!r}") from exc
        if raw is None:
            raise ProbeDomainError(f"probe {probe.id!r} undefined at point {getattr(point, 'id', point)!r}")
        values.append(quantize(raw, probe.precision))
    return FeatureVector(tuple(values))


def vector_key(v: FeatureVector) -> tuple[int, ...]:
    return v.levels


@dataclass(frozen=True)
class DescriptionSet:
    """The set Q(A) of distinct feature vectors of a region's points.

    Iteration is in ascending level order so reports are deterministic.
    """

    entries: frozenset[FeatureVector]
    source: Hashable = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "entries", frozenset(self.entries))

    @classmethod
    def from_levels(cls, levels: Iterable[int | Sequence[int]], precision: int = DEFAULT_PRECISION, source=None) -> "DescriptionSet":
        vecs = []
        for lv in levels:
            lv = (lv,) if isinstance(lv, Integral) else tuple(lv)
            vecs.append(FeatureVector.from_levels(lv, precision))
        return cls(frozenset(vecs), source)

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[FeatureVector]:
        return iter(sorted(self.entries, key=vector_key))

    def __contains__(self, v) -> bool:
        return v in self.entries

    def __bool__(self) -> bool:
        return bool(self.entries)


def descriptions_of(region, probes: ProbeSet | None = None) -> DescriptionSet:
    """Q(region): the deduplicated descriptions of every point of ``region``.

    ``region`` is any iterable of points.  When it belongs to a space whose
    probe set is ``probes`` (or ``probes`` is omitted), the space's cached
    descriptions are reused.
    """
    space = getattr(region, "space", None)
    if space is not None and (probes is None or probes == space.probes):
        entries = frozenset(space.description(pid) for pid in region.ids)
    else:
        if probes is None:
            raise InvalidValue("probes required for a region without a space")
        entries = frozenset(describe(p, probes) for p in region)
    if not entries:
        raise EmptyRegion("cannot describe an empty region")
    return DescriptionSet(entries, region)
