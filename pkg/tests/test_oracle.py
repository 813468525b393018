import itertools

import pytest

from helpers import P, PI_F3, TAU_F1, TAU_F3, all_perms, by_value
from permmatch.oracle import (
    PermClass,
    avoids,
    brute_contains,
    brute_embedding,
    brute_labels,
    contained_patterns,
    contains_2143,
    enumerate_avoiders,
    enumerate_embeddings,
    in_class,
    is_321_avoiding_reference,
    is_embedding_pairwise,
    is_skew_merged_reference,
    lis_reference,
    meet_join,
    random_avoider,
)
from permmatch.perm import Embedding, Permutation, normalize_subsequence


# --- containment -------------------------------------------------------------------


def test_contains_examples():
    assert not brute_contains(P("21"), P("12"))
    assert not brute_contains(P("321"), TAU_F1)
    assert brute_contains(P("214365"), TAU_F1)
    witness = by_value(TAU_F1, 3, 1, 9, 6, 13, 12)
    assert is_embedding_pairwise(P("214365"), TAU_F1, witness)


def test_pattern_longer_than_text():
    assert not brute_contains(P("12"), P("1"))
    assert enumerate_embeddings(P("12"), P("1")) == []
    assert brute_embedding(P("12"), P("1")) is None


def test_reflexive_and_prefix_antitone():
    for n in range(7):
        for p in all_perms(n):
            assert brute_contains(p, p)
    for n in range(7):
        for text in all_perms(n):
            inside = contained_patterns(text)
            for pattern in (q for k in range(n + 1) for q in all_perms(k)):
                if pattern.values not in inside:
                    continue
                assert brute_contains(pattern, text)
                if pattern.n:
                    prefix = normalize_subsequence(pattern, range(1, pattern.n))
                    assert brute_contains(prefix, text)


def test_backtracking_agrees_with_subset_enumeration():
    for n in range(7):
        for text in all_perms(n):
            inside = contained_patterns(text)
            for k in range(n + 1):
                for pattern in all_perms(k):
                    assert brute_contains(pattern, text) == (pattern.values in inside)


# --- embedding enumeration ---------------------------------------------------------------


def test_enumeration_examples():
    embs = enumerate_embeddings(P("21"), P("2143"))
    assert [e.value_map(P("21"), P("2143")) for e in embs] == [{2: 2, 1: 1}, {2: 4, 1: 3}]
    assert len(enumerate_embeddings(P("1"), P("12"))) == 2
    assert enumerate_embeddings(P("12"), P("21")) == []


def test_enumeration_complete_sorted_and_valid():
    for n in range(6):
        for text in all_perms(n):
            for k in range(n + 1):
                for pattern in all_perms(k):
                    embs = enumerate_embeddings(pattern, text)
                    expected = [
                        c
                        for c in itertools.combinations(range(1, n + 1), k)
                        if is_embedding_pairwise(pattern, text, c)
                    ]
                    assert [e.images() for e in embs] == expected
                    first = brute_embedding(pattern, text)
                    assert first == (embs[0] if embs else None)


def test_enumeration_nonempty_iff_contains():
    # all pairs up to size 6; size-7 texts only against short patterns
    for n in range(8):
        for text in all_perms(n):
            for k in range(n + 1 if n <= 6 else 4):
                for pattern in all_perms(k):
                    assert bool(enumerate_embeddings(pattern, text)) == brute_contains(pattern, text)


def test_pairwise_check_rejects_bad_input():
    assert not is_embedding_pairwise(P("12"), P("12"), [1])
    assert not is_embedding_pairwise(P("12"), P("12"), [1, 3])
    assert not is_embedding_pairwise(P("12"), P("12"), [2, 1])


# --- labels --------------------------------------------------------------------------------


def test_brute_labels_examples():
    fluid = [TAU_F1.value(i + 1) for i, c in enumerate(brute_labels(TAU_F1, "av321")) if c == "F"]
    assert fluid == [4, 5, 11]
    central = [PI_F3.value(i + 1) for i, c in enumerate(brute_labels(PI_F3, PermClass.SKEW)) if c == "C"]
    assert central == [3, 4]
    assert brute_labels(P("123"), "skew") == ("C", "C", "C")


# --- meet and join ---------------------------------------------------------------------------


def test_meet_join_examples():
    text = P("2143")
    a, b = enumerate_embeddings(P("21"), text)
    names = brute_labels(text, "av321")
    meet, join = meet_join(a, b, "av321", text, names)
    assert meet == a.as_dict() and join == b.as_dict()
    meet, join = meet_join(a, a, "av321", text, names)
    assert meet == join == a.as_dict()


def test_meet_join_domain_mismatch():
    with pytest.raises(ValueError):
        meet_join(Embedding(((1, 1),)), Embedding(((2, 1),)), "av321", P("12"), ("F", "F"))


def test_skew_meet_on_worked_example():
    names = brute_labels(TAU_F3, "skew")
    pattern_names = brute_labels(PI_F3, "skew")
    noncentral = [i + 1 for i, c in enumerate(pattern_names) if c != "C"]
    embs = enumerate_embeddings(PI_F3, TAU_F3)
    assert len(embs) >= 2
    restricted = [Embedding(tuple((x, e[x]) for x in noncentral)) for e in embs]
    # the outer meet of the corner parts must extend to a full embedding
    completions = {tuple(e[x] for x in noncentral) for e in embs}
    for a in restricted:
        for b in restricted:
            meet, join = meet_join(a, b, "skew", TAU_F3, names)
            assert join is None
            assert tuple(meet[x] for x in noncentral) in completions


# --- references -------------------------------------------------------------------------------


def test_lis_examples():
    assert lis_reference(P("1324")) == 3
    assert lis_reference(P("321")) == 1
    assert lis_reference(Permutation.identity(9)) == 9


def test_lis_matches_subsequence_search():
    for n in range(7):
        for p in all_perms(n):
            best = 0
            for k in range(n, -1, -1):
                if any(list(c) == sorted(c) for c in itertools.combinations(p.values, k)):
                    best = k
                    break
            assert lis_reference(p) == best


def test_reference_class_checks_exhaustive():
    for n in range(8):
        for p in all_perms(n):
            assert is_321_avoiding_reference(p.values) == avoids(p, P("321"))
            assert contains_2143(p.values) == brute_contains(P("2143"), p)
            assert is_skew_merged_reference(p.values) == in_class(p, "skew")


# --- enumeration of classes and generators --------------------------------------------------------


def test_avoider_enumeration_examples():
    assert enumerate_avoiders("av321", 1) == [P("1")]
    assert len(enumerate_avoiders("av321", 4)) == 14
    assert len(enumerate_avoiders("skew", 4)) == 22
    assert set(enumerate_avoiders("skew", 4)) == set(all_perms(4)) - {P("3412"), P("2143")}
    assert enumerate_avoiders("any", 3) == list(all_perms(3))


def test_avoider_counts_self_consistent():
    for n in range(9):
        perms = list(map(Permutation, itertools.permutations(range(1, n + 1))))
        assert len(enumerate_avoiders("av321", n)) == sum(
            is_321_avoiding_reference(p.values) for p in perms
        )
        if n <= 7:
            assert len(enumerate_avoiders("skew", n)) == sum(
                is_skew_merged_reference(p.values) for p in perms
            )


def test_random_avoider_small_cases():
    assert random_avoider("av321", 1, 5) == P("1")
    for seed in range(20):
        assert random_avoider("av321", 2, seed) in (P("12"), P("21"))
        assert random_avoider("skew", 3, seed).n == 3
        assert random_avoider("any", 0, seed).n == 0


def test_random_avoider_deterministic():
    for cls in ("av321", "skew", "any"):
        assert random_avoider(cls, 50, 7) == random_avoider(cls, 50, 7)


@pytest.mark.parametrize("n", [10, 100, 1000])
@pytest.mark.parametrize("cls", ["av321", "skew"])
def test_random_avoider_in_class(cls, n):
    check = is_321_avoiding_reference if cls == "av321" else is_skew_merged_reference
    for seed in range(10_000):
        p = random_avoider(cls, n, seed)
        assert p.n == n
        assert check(p.values), (cls, n, seed)
