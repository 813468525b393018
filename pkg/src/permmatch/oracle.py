"""Brute-force ground truth for the fast matchers.

Nothing in here touches the seek tables or labelings of ``classify``; every
check is done directly from the definitions so that a bug on the fast side
cannot hide behind the same bug here.
"""

from __future__ import annotations

import itertools
from bisect import bisect_left, insort
from enum import Enum
from typing import Mapping, Optional, Sequence

import numpy as np

from .perm import Embedding, Permutation

__all__ = [
    "PermClass",
    "avoids",
    "brute_contains",
    "brute_embedding",
    "brute_labels",
    "contained_patterns",
    "contains_2143",
    "enumerate_avoiders",
    "enumerate_embeddings",
    "in_class",
    "is_embedding_pairwise",
    "is_skew_merged_reference",
    "is_321_avoiding_reference",
    "lis_reference",
    "meet_join",
    "random_avoider",
]


class PermClass(Enum):
    AV321 = "av321"
    SKEW = "skew"
    ANY = "any"


def _search(
    pattern: Permutation, text: Permutation, collect: Optional[list], first_only: bool = False
) -> bool:
    pv, tv = pattern.values, text.values
    k, n = len(pv), len(tv)
    chosen: list[int] = []

    def extend(j: int, start: int) -> bool:
        if j == k:
            if collect is None:
                return True
            collect.append(tuple(chosen))
            return first_only
        pj = pv[j]
        for t in range(start, n - (k - j) + 1):
            w = tv[t]
            for i in range(j):
                if (pv[i] < pj) != (tv[chosen[i]] < w):
                    break
            else:
                chosen.append(t)
                if extend(j + 1, t + 1):
                    return True
                chosen.pop()
        return False

    return extend(0, 0)


def brute_contains(pattern: Permutation, text: Permutation) -> bool:
    """Backtrack over increasing text positions, checking order incrementally."""
    if pattern.n > text.n:
        return False
    return _search(pattern, text, None)


def brute_embedding(pattern: Permutation, text: Permutation) -> Optional[Embedding]:
    """Lexicographically first embedding, or ``None``."""
    found: list[tuple[int, ...]] = []
    if pattern.n > text.n or not _search(pattern, text, found, first_only=True):
        return None
    return Embedding.from_images([t + 1 for t in found[0]])


def contained_patterns(text: Permutation) -> set[tuple[int, ...]]:
    """Every pattern ``text`` contains, as value tuples, from all 2^n subsets.

    This is containment read straight off the definition and shares nothing
    with the backtracking search, so the two can check each other.
    """
    vals = text.values
    out: set[tuple[int, ...]] = set()
    for r in range(len(vals) + 1):
        for sub in itertools.combinations(vals, r):
            order = sorted(sub)
            out.add(tuple(order.index(v) + 1 for v in sub))
    return out


def enumerate_embeddings(pattern: Permutation, text: Permutation) -> list[Embedding]:
    """Every embedding, ordered lexicographically by image positions."""
    found: list[tuple[int, ...]] = []
    if pattern.n <= text.n:
        _search(pattern, text, found)
    return [Embedding.from_images([t + 1 for t in img]) for img in found]


def is_embedding_pairwise(pattern: Permutation, text: Permutation, images: Sequence[int]) -> bool:
    """Quadratic check of both orders over every pair of pattern elements."""
    k = pattern.n
    if len(images) != k:
        return False
    if any(not 1 <= b <= text.n for b in images):
        return False
    pv, tv = pattern.values, text.values
    for i in range(k):
        for j in range(i + 1, k):
            if images[i] >= images[j]:
                return False
            if (pv[i] < pv[j]) != (tv[images[i] - 1] < tv[images[j] - 1]):
                return False
    return True


def avoids(p: Permutation, *patterns: Permutation) -> bool:
    return not any(brute_contains(q, p) for q in patterns)


_P321 = Permutation((3, 2, 1))
_P3412 = Permutation((3, 4, 1, 2))
_P2143 = Permutation((2, 1, 4, 3))

_SKEW_WITNESS = {
    # corner: (pattern, index of the letter playing the role)
    "NE": ((2, 1, 3), 2),
    "NW": ((3, 1, 2), 0),
    "SW": ((1, 3, 2), 0),
    "SE": ((2, 3, 1), 2),
}


def _plays(values: Sequence[int], x: int, shape: tuple[int, int, int], role: int) -> bool:
    n = len(values)
    for trio in itertools.combinations(range(n), 3):
        if trio[role] != x:
            continue
        a, b, c = (values[t] for t in trio)
        ranks = tuple(sorted((a, b, c)).index(w) + 1 for w in (a, b, c))
        if ranks == shape:
            return True
    return False


def brute_labels(p: Permutation, mode: PermClass | str) -> tuple[str, ...]:
    """Per-position labels straight from the defining patterns.

    ``av321``: "U" if the element is the larger of some inversion, else "L"
    if it is the smaller of one, else "F".  ``skew``: the first corner whose
    witness pattern the element plays a role in, else "C".  On inputs
    outside the class the precedence above decides conflicts.
    """
    mode = PermClass(mode)
    vals = p.values
    n = len(vals)
    out = []
    if mode is PermClass.AV321:
        for i in range(n):
            if any(vals[j] < vals[i] for j in range(i + 1, n)):
                out.append("U")
            elif any(vals[j] > vals[i] for j in range(i)):
                out.append("L")
            else:
                out.append("F")
        return tuple(out)
    for i in range(n):
        for name, (shape, role) in _SKEW_WITNESS.items():
            if _plays(vals, i, shape, role):
                out.append(name)
                break
        else:
            out.append("C")
    return tuple(out)


def _innerness(label: str, text_pos: int) -> int:
    # larger = closer to the centre
    return text_pos if label in ("NW", "SW") else -text_pos


def meet_join(
    e1: Embedding,
    e2: Embedding,
    mode: PermClass | str,
    text: Permutation,
    text_labels: Sequence[str],
) -> tuple[dict[int, int], Optional[dict[int, int]]]:
    """Pointwise meet (and join, for av321) of two type-preserving maps.

    For av321 the per-type order of text elements of one type is left to
    right; for skew it is outer to inner, and only the meet is formed.
    ``text_labels`` are brute labels of ``text``.
    """
    mode = PermClass(mode)
    a, b = e1.as_dict(), e2.as_dict()
    if a.keys() != b.keys():
        raise ValueError("embeddings have different domains")
    meet: dict[int, int] = {}
    join: dict[int, int] = {}
    for x in sorted(a):
        u, w = a[x], b[x]
        if text_labels[u - 1] != text_labels[w - 1]:
            raise ValueError(f"images of {x} have different types")
        if mode is PermClass.AV321:
            meet[x], join[x] = min(u, w), max(u, w)
        else:
            lab = text_labels[u - 1]
            meet[x] = u if _innerness(lab, u) <= _innerness(lab, w) else w
    return meet, (join if mode is PermClass.AV321 else None)


def lis_reference(p: Permutation | Sequence[int]) -> int:
    """Longest increasing subsequence length by patience sorting."""
    piles: list[int] = []
    for v in p:
        i = bisect_left(piles, v)
        if i == len(piles):
            piles.append(v)
        else:
            piles[i] = v
    return len(piles)


def is_321_avoiding_reference(values: Sequence[int]) -> bool:
    """A permutation avoids 321 iff its longest decreasing subsequence is < 3."""
    return lis_reference([-v for v in values]) < 3


def contains_2143(values: Sequence[int]) -> bool:
    """Sweep test for 2143.

    Split the sequence after each index.  On the left keep the smallest
    value that has a smaller value after it (a usable "2"); on the right the
    largest value with a larger value before it (a usable "3").  A split
    where the left one is below the right one is an occurrence.
    """
    n = len(values)
    best_left = [0] * n
    seen: list[int] = []
    cur = n + 1
    for i, v in enumerate(values):
        j = bisect_left(seen, v)
        if j < len(seen):
            cur = min(cur, seen[j])
        insort(seen, v)
        best_left[i] = cur
    seen = []
    cur = 0
    for i in range(n - 1, 0, -1):
        v = values[i]
        j = bisect_left(seen, v)
        if j > 0:
            cur = max(cur, seen[j - 1])
        insort(seen, v)
        if best_left[i - 1] < cur:
            return True
    return False


def is_skew_merged_reference(values: Sequence[int]) -> bool:
    """Avoidance of 2143 and of 3412 (the reverse of 2143)."""
    return not contains_2143(values) and not contains_2143(values[::-1])


def in_class(p: Permutation, cls: PermClass | str) -> bool:
    cls = PermClass(cls)
    if cls is PermClass.AV321:
        return avoids(p, _P321)
    if cls is PermClass.SKEW:
        return avoids(p, _P3412, _P2143)
    return True


def enumerate_avoiders(cls: PermClass | str, n: int) -> list[Permutation]:
    """All size-``n`` members of the class, filtered from all n! permutations."""
    return [
        p
        for p in map(Permutation, itertools.permutations(range(1, n + 1)))
        if in_class(p, cls)
    ]


def _dyck_word(n: int, rng: np.random.Generator) -> np.ndarray:
    # cycle lemma: n up-steps and n+1 down-steps, rotated to stay nonnegative
    steps = np.concatenate((np.ones(n, dtype=np.int64), -np.ones(n + 1, dtype=np.int64)))
    rng.shuffle(steps)
    cut = int(np.argmin(np.cumsum(steps))) + 1
    return np.concatenate((steps[cut:], steps[:cut]))[:-1]


def _dyck_to_321(word: np.ndarray) -> list[int]:
    """Left-to-right maxima from peak heights, the rest filled increasingly."""
    n = len(word) // 2
    ups_before = np.cumsum(word == 1)[word == -1]
    prev = np.concatenate(([0], ups_before[:-1]))
    is_max = ups_before > prev
    values = np.zeros(n, dtype=np.int64)
    values[is_max] = ups_before[is_max]
    rest = np.setdiff1d(np.arange(1, n + 1), ups_before[is_max])
    values[~is_max] = rest
    return values.tolist()


def random_avoider(cls: PermClass | str, n: int, seed: int) -> Permutation:
    """A seeded member of the class; not uniform over the class.

    av321 maps a uniform Dyck word to a 321-avoider.  skew interleaves an
    increasing and a decreasing run over a random split of values and
    positions.  any is a uniform shuffle.
    """
    cls = PermClass(cls)
    rng = np.random.default_rng(seed)
    if n == 0:
        return Permutation(())
    if cls is PermClass.AV321:
        return Permutation(tuple(_dyck_to_321(_dyck_word(n, rng))))
    if cls is PermClass.ANY:
        return Permutation(tuple((rng.permutation(n) + 1).tolist()))
    inc_size = int(rng.integers(0, n + 1))
    inc_vals = np.sort(rng.choice(np.arange(1, n + 1), size=inc_size, replace=False))
    dec_vals = np.setdiff1d(np.arange(1, n + 1), inc_vals)[::-1]
    inc_pos = rng.choice(n, size=inc_size, replace=False)
    mask = np.zeros(n, dtype=bool)
    mask[inc_pos] = True
    values = np.empty(n, dtype=np.int64)
    values[mask] = inc_vals
    values[~mask] = dec_vals
    return Permutation(tuple(values.tolist()))


def value_map_embedding(
    pattern: Permutation, text: Permutation, mapping: Mapping[int, int]
) -> tuple[int, ...]:
    """Image positions (in pattern position order) of a value-to-value map."""
    return tuple(text.position(mapping[v]) for v in pattern.values)
