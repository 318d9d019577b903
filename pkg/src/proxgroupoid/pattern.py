"""Proximal algebraic patterns, saliency and image classification."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import EmptyRegion, InvalidValue, NoPatterns
from .groupoid import DescriptiveGroupoid, groupoids_neighbourly, neighbour_matrix

DEFAULT_THRESHOLD = 0.75


@dataclass(frozen=True)
class Pattern:
    """A generator groupoid together with every candidate neighbourly with it.

    ``members[0]`` is always the generator.
    """

    members: tuple[DescriptiveGroupoid, ...]
    tolerance: float = 0.0

    @property
    def generator(self) -> DescriptiveGroupoid:
        return self.members[0]

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __contains__(self, g) -> bool:
        return any(g is m for m in self.members)


def generate_pattern(
    generator: DescriptiveGroupoid,
    candidates: Sequence[DescriptiveGroupoid],
    tolerance: float = 0.0,
) -> Pattern:
    """Collect the candidates that share a matching description with ``generator``.

    Candidate order is preserved.  A candidate that *is* the generator object
    is skipped, so the generator appears exactly once.
    """
    if generator is None or len(generator) == 0:
        raise EmptyRegion("pattern generator has an empty carrier")
    if tolerance < 0:
        raise InvalidValue("tolerance must be non-negative")
    members = [generator]
    members.extend(c for c in candidates if c is not generator and groupoids_neighbourly(generator, c, tolerance))
    return Pattern(tuple(members), tolerance)


def patterns_for(groupoids: Sequence[DescriptiveGroupoid], tolerance: float = 0.0) -> list[Pattern]:
    """One pattern per groupoid, using all the others as candidates."""
    return [generate_pattern(g, groupoids, tolerance) for g in groupoids]


@dataclass(frozen=True)
class SaliencyScore:
    matched: int
    total: int
    threshold: float

    @property
    def fraction(self) -> float:
        return self.matched / self.total

    @property
    def salient(self) -> bool:
        return self.fraction >= self.threshold

    def to_dict(self) -> dict:
        return {
            "matched": self.matched,
            "total": self.total,
            "fraction": self.fraction,
            "threshold": self.threshold,
            "salient": self.salient,
        }


def _check_threshold(threshold: float) -> None:
    if not 0.0 <= threshold <= 1.0:
        raise InvalidValue(f"threshold must lie in [0, 1], got {threshold}")


def saliency(
    reference: DescriptiveGroupoid,
    candidate: DescriptiveGroupoid,
    threshold: float = DEFAULT_THRESHOLD,
    tolerance: float = 0.0,
) -> SaliencyScore:
    """Fraction of candidate elements neighbourly with some reference element."""
    _check_threshold(threshold)
    if len(reference) == 0 or len(candidate) == 0:
        raise EmptyRegion("saliency needs non-empty carriers")
    if tolerance == 0:
        matched = len(candidate.carrier.entries & reference.carrier.entries)
    else:
        matched = int(neighbour_matrix(candidate, reference, tolerance).any(axis=1).sum())
    return SaliencyScore(matched, len(candidate), threshold)


def patterns_neighbourly(pA: Pattern, pB: Pattern, tolerance: float = 0.0) -> bool:
    return groupoids_neighbourly(pA.generator, pB.generator, tolerance)


@dataclass(frozen=True)
class ClassVerdict:
    """Outcome of classifying a candidate image against a reference image.

    ``score`` is the best salient score when matched; otherwise the best
    score among neighbourly pattern pairs (``None`` if no pair was
    neighbourly).  ``witness`` is the (candidate, reference) pattern pair
    behind ``score``.
    """

    image_id: object
    reference_id: object | None
    score: SaliencyScore | None
    witness: tuple[Pattern, Pattern] | None

    @property
    def matched(self) -> bool:
        return self.reference_id is not None


def classify(
    candidate_image_patterns: Sequence[Pattern],
    reference_image_patterns: Sequence[Pattern],
    threshold: float = DEFAULT_THRESHOLD,
    tolerance: float = 0.0,
    *,
    image_id=None,
    reference_id="reference",
) -> ClassVerdict:
    """Decide whether the candidate image belongs to the reference image's class.

    Matched iff some candidate pattern is neighbourly with some reference
    pattern and its generator scores salient against that reference
    generator.  Ties go to the highest fraction, then the earliest pair in
    (candidate, reference) list order.
    """
    if not candidate_image_patterns or not reference_image_patterns:
        raise NoPatterns("classification needs patterns on both sides")
    _check_threshold(threshold)
    best_salient = best_any = None
    for cp in candidate_image_patterns:
        for rp in reference_image_patterns:
            if not patterns_neighbourly(cp, rp, tolerance):
                continue
            score = saliency(rp.generator, cp.generator, threshold, tolerance)
            entry = (score, (cp, rp))
            if best_any is None or score.fraction > best_any[0].fraction:
                best_any = entry
            if score.salient and (best_salient is None or score.fraction > best_salient[0].fraction):
                best_salient = entry
    if best_salient is not None:
        return ClassVerdict(image_id, reference_id, *best_salient)
    if best_any is not None:
        return ClassVerdict(image_id, None, *best_any)
    return ClassVerdict(image_id, None, None, None)
