import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import P, PI_F3, TAU_F3, contained, labeled_skew
from permmatch.classify import Corner, label_skew
from permmatch.match321 import ClassViolation
from permmatch.matchskew import (
    EXHAUSTED,
    match_skew_merged,
    min_noncentral_embedding,
    monotone_capacity,
    problem_bound_skew,
    remaining_region,
)
from permmatch.oracle import (
    brute_contains,
    enumerate_embeddings,
    lis_reference,
    random_avoider,
)
from permmatch.perm import Embedding, Permutation, normalize_subsequence, verify_embedding


def _value_map(pattern, text, emb):
    return emb.value_map(pattern, text)


def _outermost_state():
    pl = label_skew(PI_F3)
    tl = label_skew(TAU_F3)
    f = {x: tl.outermost(pl.label[x - 1]) for x in pl.noncentral}
    return f, pl, tl


# --- bounds -------------------------------------------------------------------------


def test_bounds_along_the_worked_run():
    f, pl, tl = _outermost_state()
    x5, x7, x6 = (PI_F3.position(v) for v in (5, 7, 6))
    assert problem_bound_skew(f, x5, pl, tl) == TAU_F3.position(7)
    assert problem_bound_skew(f, x7, pl, tl) == TAU_F3.position(9)
    f[x5] = TAU_F3.position(7)
    f[x7] = TAU_F3.position(9)
    assert problem_bound_skew(f, x6, pl, tl) == TAU_F3.position(8)
    assert f[x6] == TAU_F3.position(8)


def test_bound_rejects_central():
    f, pl, tl = _outermost_state()
    with pytest.raises(ValueError):
        problem_bound_skew(f, PI_F3.position(3), pl, tl)


def test_bound_exhausted():
    # 2413 into 3142: the SW element must sit above the image of the SE one
    # (text value 2), and no SW text element lies above it
    pl = label_skew(P("2413"))
    tl = label_skew(P("3142"))
    f = {1: 2, 2: 1, 3: 4, 4: 3}
    assert problem_bound_skew(f, 1, pl, tl) == EXHAUSTED


# --- minimum non-central embedding ------------------------------------------------------


def test_noncentral_minimum_example():
    res = min_noncentral_embedding(PI_F3, TAU_F3)
    assert _value_map(PI_F3, TAU_F3, res.embedding) == {1: 1, 7: 9, 2: 2, 5: 7, 6: 8}
    assert res.iterations == 2


def test_noncentral_trivial_cases():
    assert min_noncentral_embedding(P("123"), TAU_F3).embedding == Embedding()
    res = min_noncentral_embedding(P("312"), TAU_F3)
    assert _value_map(P("312"), TAU_F3, res.embedding) == {3: 10}
    # pattern needs a corner type the text does not have
    assert min_noncentral_embedding(P("2413"), P("1234")).embedding is None


def test_outer_minimality_exhaustive():
    # every embedding maps corners to the same corner; the computed one is outermost
    def outer_or_equal(a, b, c):
        return a <= b if c.is_west else a >= b

    for text, tl in labeled_skew(7):
        for pattern, pl in labeled_skew(text.n):
            all_e = enumerate_embeddings(pattern, text)
            res = min_noncentral_embedding(pattern, text, pattern_labels=pl, text_labels=tl)
            assert (res.embedding is not None) or not all_e
            if not all_e:
                continue
            mine = res.embedding.as_dict()
            for e in all_e:
                for x, y in mine.items():
                    c = pl.label[x - 1]
                    assert tl.label[e[x] - 1] is c
                    assert outer_or_equal(y, e[x], c), (pattern, text, x)


# --- regions and capacity -------------------------------------------------------------------


def test_region_example():
    partial = min_noncentral_embedding(PI_F3, TAU_F3).embedding
    region = remaining_region(TAU_F3, partial, label_skew(PI_F3))
    assert (region.pos_low, region.pos_high, region.val_low, region.val_high) == (3, 8, 2, 7)
    assert [TAU_F3.value(m) for m in region.members] == [3, 5, 4, 6]
    assert region.subpattern == P("1324")
    assert monotone_capacity(region) == (3, 2)


def test_region_defaults():
    region = remaining_region(TAU_F3, Embedding(), label_skew(P("123")))
    assert region.members == tuple(range(1, 11))
    pl = label_skew(P("312"))
    partial = min_noncentral_embedding(P("312"), TAU_F3).embedding
    region = remaining_region(TAU_F3, partial, pl)
    assert (region.pos_low, region.pos_high, region.val_low, region.val_high) == (1, 11, 0, 10)


def _whole(p):
    return remaining_region(p, Embedding(), label_skew(Permutation(())))


def test_capacity_small_cases():
    assert monotone_capacity(_whole(Permutation(()))) == (0, 0)
    assert monotone_capacity(_whole(P("123"))) == (3, 1)
    assert monotone_capacity(_whole(P("1324"))) == (3, 2)


def test_capacity_rejects_non_skew_region():
    with pytest.raises(ValueError):
        monotone_capacity(_whole(P("2143")))


def test_capacity_matches_reference_exhaustive():
    for p, _ in labeled_skew(8):
        lis, lds = monotone_capacity(_whole(p))
        assert lis == lis_reference(p.values)
        assert lds == lis_reference(p.values[::-1])


@settings(max_examples=300, deadline=None)
@given(st.integers(9, 10), st.integers(0, 2**31))
def test_capacity_matches_reference_random(n, seed):
    p = random_avoider("skew", n, seed)
    lis, lds = monotone_capacity(_whole(p))
    assert (lis, lds) == (lis_reference(p.values), lis_reference(p.values[::-1]))


# --- full matcher -------------------------------------------------------------------------


def test_full_example():
    res = match_skew_merged(PI_F3, TAU_F3)
    assert res.found
    vm = _value_map(PI_F3, TAU_F3, res.embedding)
    assert vm[3] == 3 and vm[4] == 5
    assert {k: vm[k] for k in (1, 7, 2, 5, 6)} == {1: 1, 7: 9, 2: 2, 5: 7, 6: 8}


def test_full_small_cases():
    assert not match_skew_merged(P("321"), P("123")).found
    res = match_skew_merged(P("4321"), TAU_F3)
    assert res.found
    assert verify_embedding(P("4321"), TAU_F3, res.embedding)
    assert match_skew_merged(Permutation(()), TAU_F3).embedding == Embedding()
    with pytest.raises(ClassViolation):
        match_skew_merged(P("2143"), TAU_F3)


def test_oracle_equivalence_small():
    # sizes up to 8 run in the acceptance suite
    for text, tl in labeled_skew(6):
        inside = contained(text)
        for pattern, pl in labeled_skew(text.n):
            res = match_skew_merged(pattern, text, pattern_labels=pl, text_labels=tl)
            assert res.found == (pattern.values in inside), (pattern, text)
            assert res.iterations <= pattern.n * text.n


def test_meet_closure_small():
    from permmatch.oracle import brute_labels, is_embedding_pairwise, meet_join

    free = [(p, l) for p, l in labeled_skew(6) if Corner.CENTRAL not in l.label]
    for text, _ in labeled_skew(6):
        names = brute_labels(text, "skew")
        for pattern, _ in free:
            all_e = enumerate_embeddings(pattern, text)
            for i, a in enumerate(all_e):
                for b in all_e[i + 1 :]:
                    meet, _ = meet_join(a, b, "skew", text, names)
                    images = [meet[x] for x in range(1, pattern.n + 1)]
                    assert is_embedding_pairwise(pattern, text, images)


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 120), st.integers(0, 60), st.integers(0, 2**31), st.booleans())
def test_random_instances_sound_and_bounded(n, k, seed, planted):
    k = min(k, n)
    text = random_avoider("skew", n, seed)
    if planted:
        rng = np.random.default_rng(seed)
        pattern = normalize_subsequence(text, sorted(rng.choice(n, size=k, replace=False) + 1))
    else:
        pattern = random_avoider("skew", k, seed + 1)
    res = match_skew_merged(pattern, text)
    assert res.iterations <= k * n or k == 0
    if planted:
        assert res.found
    if res.found:
        assert verify_embedding(pattern, text, res.embedding)
    if n <= 14:
        assert res.found == brute_contains(pattern, text)
