import pytest
from hypothesis import given, settings, strategies as st

from proxgroupoid import (
    MIN,
    DescriptionSet,
    EmptyRegion,
    InvalidValue,
    NoPatterns,
    TileSpec,
    classify,
    generate_pattern,
    groupoid_on,
    groupoids_neighbourly,
    make_groupoid,
    patterns_for,
    patterns_neighbourly,
    saliency,
    tile,
)

from oracles import brute_pattern
from synth import four_tiles


def grp(*levels):
    return groupoid_on(DescriptionSet.from_levels(levels), MIN)


level_sets = st.sets(st.integers(0, 30), min_size=1, max_size=8)


# -- pattern generation --------------------------------------------------------------


def test_pattern_of_three_neighbourly_groupoids():
    A, A2, A3, C = grp(10, 83), grp(36, 41, 83), grp(44, 59, 83), grp(20, 21)
    p = generate_pattern(A, [A2, A3, C])
    assert p.members == (A, A2, A3)
    assert p.generator is A


def test_pattern_without_candidates():
    A = grp(63)
    assert generate_pattern(A, []).members == (A,)


def test_identical_candidates_all_included():
    A = grp(1, 2)
    copies = [grp(1, 2) for _ in range(3)]
    assert generate_pattern(A, copies).members == (A, *copies)


def test_generator_listed_once():
    gs = [grp(1), grp(1, 2), grp(3)]
    assert generate_pattern(gs[0], gs).members == (gs[0], gs[1])


def test_pattern_errors():
    with pytest.raises(EmptyRegion):
        generate_pattern(None, [])
    with pytest.raises(InvalidValue):
        generate_pattern(grp(1), [], tolerance=-1)


def test_four_tile_image_pattern():
    tiles = tile(four_tiles(), TileSpec(2, 2))
    gs = [make_groupoid(t) for t in tiles]
    p = generate_pattern(gs[0], gs)
    assert [m.source.origin for m in p] == [(0, 0), (0, 2), (2, 0)]
    assert len(generate_pattern(gs[3], gs)) == 1


@settings(max_examples=100)
@given(level_sets, st.lists(level_sets, max_size=8), st.sampled_from([0.0, 0.01, 0.03]))
def test_generate_pattern_matches_brute_force(gen, cands, tol):
    g = grp(*gen)
    cs = [grp(*c) for c in cands]
    p = generate_pattern(g, cs, tol)
    expected = brute_pattern([(x,) for x in gen], [[(y,) for y in c] for c in cands], tol)
    assert [cs.index(m) for m in p.members[1:]] == expected
    assert g in p
    for m in p.members:
        assert groupoids_neighbourly(g, m, tol)


@settings(max_examples=50)
@given(level_sets, st.lists(level_sets, max_size=8), st.floats(0, 0.05), st.floats(0, 0.05))
def test_pattern_monotone_in_tolerance(gen, cands, t1, t2):
    lo, hi = sorted((t1, t2))
    g = grp(*gen)
    cs = [grp(*c) for c in cands]
    small = {id(m) for m in generate_pattern(g, cs, lo)}
    large = {id(m) for m in generate_pattern(g, cs, hi)}
    assert small <= large


# -- saliency --------------------------------------------------------------------------


def test_saliency_subset_is_fully_salient():
    s = saliency(grp(63, 83, 90), grp(63, 83), threshold=1.0)
    assert (s.matched, s.total, s.fraction, s.salient) == (2, 2, 1.0, True)


def test_saliency_half_matched():
    s = saliency(grp(63, 83), grp(83, 50), threshold=0.6)
    assert s.fraction == 0.5
    assert not s.salient


def test_saliency_tolerance():
    s = saliency(grp(63, 83), grp(84, 50), threshold=0.5, tolerance=0.01)
    assert s.matched == 1 and s.salient


def test_saliency_bad_threshold():
    with pytest.raises(InvalidValue):
        saliency(grp(1), grp(1), threshold=1.5)


@given(level_sets, level_sets, st.floats(0, 1), st.floats(0, 1))
def test_saliency_monotone_in_threshold(ref, cand, a, b):
    lo, hi = sorted((a, b))
    r, c = grp(*ref), grp(*cand)
    if saliency(r, c, hi).salient:
        assert saliency(r, c, lo).salient
    assert saliency(c, c, hi).fraction == 1.0


@given(level_sets, level_sets)
def test_saliency_counts_match_brute_force(ref, cand):
    s = saliency(grp(*ref), grp(*cand))
    assert s.matched == sum(1 for b in cand if b in ref)
    assert 0 <= s.fraction <= 1


def test_saliency_to_dict():
    assert saliency(grp(1, 2), grp(2, 3), 0.5).to_dict() == {
        "matched": 1, "total": 2, "fraction": 0.5, "threshold": 0.5, "salient": True,
    }


# -- pattern neighbourliness and classification ---------------------------------------------


def test_patterns_neighbourly():
    A, B, far = grp(10, 83), grp(83, 90), grp(20)
    pA, pB, pF = generate_pattern(A, []), generate_pattern(B, []), generate_pattern(far, [])
    assert patterns_neighbourly(pA, pB)
    assert patterns_neighbourly(pA, pA)
    assert not patterns_neighbourly(pA, pF)


def test_classify_identical():
    ps = patterns_for([grp(1, 2), grp(3, 4)])
    v = classify(ps, ps, image_id="Y", reference_id="X")
    assert v.matched and v.reference_id == "X" and v.image_id == "Y"
    assert v.score.fraction == 1.0


def test_classify_fully_matched_at_threshold_one():
    ref = patterns_for([grp(10, 83, 90)])
    cand = patterns_for([grp(83, 90)])
    v = classify(cand, ref, threshold=1.0)
    assert v.matched and v.score.salient


def test_classify_disjoint_unmatched():
    v = classify(patterns_for([grp(60, 61)]), patterns_for([grp(10, 11)]))
    assert not v.matched
    assert v.score is None and v.witness is None


def test_classify_neighbourly_but_not_salient():
    v = classify(patterns_for([grp(1, 2, 3, 4)]), patterns_for([grp(1)]), threshold=0.5)
    assert not v.matched
    assert v.score.fraction == 0.25


def test_classify_tie_break_highest_fraction_then_first():
    c1, c2, c3 = grp(1, 9), grp(1, 2), grp(1, 2, 7)
    ref = patterns_for([grp(1, 2)])
    v = classify([generate_pattern(g, []) for g in (c1, c2, c3)], ref, threshold=0.5)
    assert v.witness[0].generator is c2
    v = classify([generate_pattern(g, []) for g in (c3, c1)], ref, threshold=0.5)
    assert v.witness[0].generator is c3


def test_classify_needs_patterns():
    with pytest.raises(NoPatterns):
        classify([], patterns_for([grp(1)]))


def test_classify_tie_break_equal_fractions_keeps_first():
    first, second = grp(1, 9), grp(2, 8)
    ref = patterns_for([grp(1, 2)])
    v = classify([generate_pattern(first, []), generate_pattern(second, [])], ref, threshold=0.5)
    assert v.witness[0].generator is first
