"""Shared corpora and small utilities for the test suite."""

from __future__ import annotations

import itertools
from functools import lru_cache

from permmatch.classify import Corner, label_rigid_321, label_skew
from permmatch.oracle import contained_patterns, enumerate_avoiders
from permmatch.perm import Permutation, parse_permutation

TAU_F1 = parse_permutation("3 1 2 4 5 9 6 7 10 8 11 13 12")
PI_F3 = parse_permutation("1 7 3 4 2 5 6")
TAU_F3 = parse_permutation("10 1 9 3 5 4 6 2 7 8")


def P(text: str) -> Permutation:
    return parse_permutation(text)


def by_value(p: Permutation, *values: int) -> tuple[int, ...]:
    """Positions of the given values."""
    return tuple(p.position(v) for v in values)


@lru_cache(maxsize=None)
def all_perms(n: int) -> tuple[Permutation, ...]:
    return tuple(Permutation(v) for v in itertools.permutations(range(1, n + 1)))


@lru_cache(maxsize=None)
def avoiders(cls: str, n: int) -> tuple[Permutation, ...]:
    return tuple(enumerate_avoiders(cls, n))


@lru_cache(maxsize=None)
def avoiders_upto(cls: str, n: int) -> tuple[Permutation, ...]:
    return tuple(p for m in range(n + 1) for p in avoiders(cls, m))


@lru_cache(maxsize=None)
def labeled_321(n: int):
    """(perm, labels) for every 321-avoider of size <= n."""
    return tuple((p, label_rigid_321(p)) for p in avoiders_upto("av321", n))


@lru_cache(maxsize=None)
def labeled_skew(n: int):
    """(perm, labels) for every skew-merged permutation of size <= n."""
    return tuple((p, label_skew(p)) for p in avoiders_upto("skew", n))


def contained(text: Permutation) -> set[tuple[int, ...]]:
    return contained_patterns(text)


def skew_positions(labels, corner: Corner) -> set[int]:
    return set(labels.positions(corner))


def values_of(p: Permutation, positions) -> set[int]:
    return {p.value(i) for i in positions}
