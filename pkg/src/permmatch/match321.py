"""Pattern matching between 321-avoiding permutations in O(kn).

The pattern is cut into direct-sum blocks.  A rigid block is placed by the
minimum-embedding fixpoint: start every upper (lower) element at the least
upper (lower) text element of the free region and keep pushing elements
that sit too far left or too low until nothing moves.  A fluid singleton
goes either to the leftmost or to the lowest point of the free region; at
most two partial embeddings survive each block.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import NamedTuple, Optional

import numpy as np

from .classify import Label321, Labels321, label_rigid_321
from .perm import Embedding, Permutation, verify_embedding

__all__ = [
    "ClassViolation",
    "Frontier",
    "MatchResult",
    "RigidResult",
    "match_321",
    "min_rigid_embedding",
    "problem_bound_321",
]

UPPER, LOWER, FLUID = Label321.UPPER, Label321.LOWER, Label321.FLUID

# sentinel results of a bound computation
NO_CONSTRAINT = None
EXHAUSTED = -1

# texts longer than this run the fixpoint loops compiled (see _kernels)
KERNEL_MIN_TEXT = 20_000


class ClassViolation(ValueError):
    """An input lies outside the class the matcher works on."""


class Frontier(NamedTuple):
    """Rectangle strictly above ``maxval`` and right of ``maxpos``."""

    maxpos: int = 0
    maxval: int = 0


@dataclass(frozen=True)
class MatchResult:
    found: bool
    embedding: Optional[Embedding]
    iterations: int
    trace: tuple = field(default=(), compare=False)


@dataclass(frozen=True)
class RigidResult:
    embedding: Optional[Embedding]
    iterations: int


class _Counter:
    __slots__ = ("n",)

    def __init__(self) -> None:
        self.n = 0


def _first_in_region(tl: Labels321, kind: int, fr: Frontier) -> int:
    # elements of one kind form an increasing chain, so the first one right
    # of maxpos and the first one above maxval bound the region's first one
    a = tl._right[kind][fr.maxpos]
    b = tl._up[kind][fr.maxval]
    if not a or not b:
        return 0
    return a if a > b else b


def _bound(x, f, pv, pinv, kind, lo, tl, tv) -> Optional[int]:
    """Lowest admissible image of pattern position ``x`` under ``f``.

    ``None`` when x has neither a left nor a lower neighbor in its block,
    ``EXHAUSTED`` when a neighbor exists but no text element of x's kind
    lies beyond its image.
    """
    best = NO_CONSTRAINT
    if x > lo:
        best = tl._right[kind][f[x - 1]]
        if not best:
            return EXHAUSTED
    v = pv[x]
    if v > lo:
        y = tl._up[kind][tv[f[pinv[v - 1]]]]
        if not y:
            return EXHAUSTED
        if best is None or y > best:
            best = y
    return best


def problem_bound_321(
    f: dict[int, int],
    x: int,
    pattern_labels: Labels321,
    text_labels: Labels321,
) -> Optional[int]:
    """Bound on the image of pattern position ``x`` given the rigid map ``f``.

    ``f`` maps pattern positions to text positions.  Returns a text
    position, ``None`` for no constraint, or ``EXHAUSTED`` when the bound
    runs off the text.  ``x`` is a problem iff ``f[x]`` lies strictly before
    the returned element.
    """
    pattern = pattern_labels.perm
    text = text_labels.perm
    pv = (0,) + pattern.values
    pinv = (0,) + pattern.inverse
    tv = (0,) + text.values
    return _bound(x, f, pv, pinv, pattern_labels.label[x - 1], 1, text_labels, tv)


def _rigid_block(
    pv: tuple[int, ...],
    pinv: tuple[int, ...],
    plab: tuple[Label321, ...],
    lo: int,
    hi: int,
    tl: Labels321,
    tv: tuple[int, ...],
    frontier: Frontier,
    counter: _Counter,
) -> Optional[list[int]]:
    """Minimum embedding of the pattern block on positions (and values) lo..hi.

    ``pv``/``pinv``/``tv`` are 1-based (index 0 unused).  Returns images for
    lo..hi in order, or ``None`` when the block does not fit in the region.
    This is the hot loop of the matcher, so ``_bound`` is inlined below.
    """
    start = (_first_in_region(tl, UPPER, frontier), _first_in_region(tl, LOWER, frontier))
    f = [0] * (hi + 2)
    for x in range(lo, hi + 1):
        img = start[plab[x - 1]]
        if not img:
            return None
        f[x] = img
    # Per pattern position: the position holding value v-1 (0 if outside
    # the block) and the one holding value v+1.
    below = [0] * (hi + 2)
    above = [0] * (hi + 2)
    for x in range(lo, hi + 1):
        v = pv[x]
        if v > lo:
            below[x] = pinv[v - 1]
        if v < hi:
            above[x] = pinv[v + 1]
    if len(tv) > KERNEL_MIN_TEXT:
        return _rigid_block_compiled(f, lo, hi, plab, below, above, tl, counter)
    # and its kind's right-seek and up-from-position tables
    rt = [None] * (hi + 2)
    ut = [None] * (hi + 2)
    right, up_from = tl.hot_tables
    for x in range(lo, hi + 1):
        kind = plab[x - 1]
        rt[x] = right[kind]
        ut[x] = up_from[kind]

    def bound(x: int) -> int:
        # 0 = no constraint
        best = 0
        if x > lo:
            best = rt[x][f[x - 1]]
            if not best:
                return EXHAUSTED
        d = below[x]
        if d:
            y = ut[x][f[d]]
            if not y:
                return EXHAUSTED
            if y > best:
                best = y
        return best

    queued = bytearray(hi + 2)
    problems: deque[int] = deque()
    for x in range(lo, hi + 1):
        b = bound(x)
        if b and (b == EXHAUSTED or f[x] < b):
            problems.append(x)
            queued[x] = 1

    # A position outside the queue satisfies both of its constraints, and
    # images only grow, so moving x can only break the constraint of x+1 on
    # its left side and that of the v+1 holder on its lower side.
    push, pop = problems.append, problems.popleft
    moves = 0
    while problems:
        x = pop()
        queued[x] = 0
        # bound(x) inlined; 1 stands in for "no left neighbor" as every
        # position is at least 1, and 0 means exhausted
        b = rt[x][f[x - 1]] if x > lo else 1
        d = below[x]
        if d and b:
            c = ut[x][f[d]]
            if not c or c > b:
                b = c
        if not b:
            counter.n += moves
            return None
        f[x] = b
        moves += 1
        y = x + 1
        if y <= hi and not queued[y]:
            c = rt[y][b]
            if not c or c > f[y]:
                push(y)
                queued[y] = 1
        y = above[x]
        if y and not queued[y]:
            c = ut[y][b]
            if not c or c > f[y]:
                push(y)
                queued[y] = 1
    counter.n += moves
    return f[lo : hi + 1]


def _rigid_block_compiled(f, lo, hi, plab, below, above, tl, counter) -> Optional[list[int]]:
    """``_rigid_block``'s fixpoint loop, run by the compiled kernel."""
    from ._kernels import rigid_fixpoint

    kind = np.zeros(hi + 2, dtype=np.int64)
    kind[lo : hi + 1] = plab[lo - 1 : hi]
    fa = np.array(f, dtype=np.int64)
    right, up_from = tl.kernel_tables
    ok, moves = rigid_fixpoint(
        fa, lo, hi, kind, np.array(below, dtype=np.int64), np.array(above, dtype=np.int64), right, up_from
    )
    counter.n += moves
    return fa[lo : hi + 1].tolist() if ok else None


def _labels(p: Permutation, given: Optional[Labels321], role: str) -> Labels321:
    labels = given if given is not None else label_rigid_321(p)
    if not labels.is_avoider:
        raise ClassViolation(f"{role} {p} is not 321-avoiding")
    return labels


def min_rigid_embedding(
    pattern: Permutation,
    text: Permutation,
    frontier: Frontier = Frontier(),
    *,
    pattern_labels: Optional[Labels321] = None,
    text_labels: Optional[Labels321] = None,
) -> RigidResult:
    """Minimum embedding of a rigid pattern into the part of ``text`` beyond ``frontier``."""
    pl = _labels(pattern, pattern_labels, "pattern")
    tl = _labels(text, text_labels, "text")
    if any(lab is FLUID for lab in pl.label):
        raise ValueError("pattern has fluid elements")
    counter = _Counter()
    if pattern.n == 0:
        return RigidResult(Embedding(), 0)
    images = _rigid_block(
        (0,) + pattern.values,
        (0,) + pattern.inverse + (0,),
        pl.label,
        1,
        pattern.n,
        tl,
        (0,) + text.values,
        Frontier(*frontier),
        counter,
    )
    if images is None:
        return RigidResult(None, counter.n)
    return RigidResult(Embedding.from_images(images), counter.n)


class _Candidate(NamedTuple):
    frontier: Frontier
    images: tuple[int, ...]
    parent: Optional["_Candidate"]


def _unwind(c: Optional[_Candidate]) -> list[int]:
    parts = []
    while c is not None:
        parts.append(c.images)
        c = c.parent
    return [b for part in reversed(parts) for b in part]


def _prune(cands: list[_Candidate]) -> list[_Candidate]:
    """Drop candidates whose region is contained in another's (ties: keep first)."""
    kept: list[_Candidate] = []
    for c in cands:
        fp, fv = c.frontier
        if any(d.frontier.maxpos <= fp and d.frontier.maxval <= fv for d in kept):
            continue
        kept = [d for d in kept if not (fp <= d.frontier.maxpos and fv <= d.frontier.maxval)]
        kept.append(c)
    return kept


def match_321(
    pattern: Permutation,
    text: Permutation,
    *,
    pattern_labels: Optional[Labels321] = None,
    text_labels: Optional[Labels321] = None,
    trace: bool = False,
) -> MatchResult:
    """Decide whether ``text`` contains ``pattern``; both must avoid 321.

    With ``trace`` the result carries one entry per block: the block range,
    the ``(maxpos, maxval)`` frontiers of all extensions before pruning, and
    the frontiers kept.
    """
    pl = _labels(pattern, pattern_labels, "pattern")
    tl = _labels(text, text_labels, "text")
    k, n = pattern.n, text.n
    if k == 0:
        return MatchResult(True, Embedding(), 0)
    if k > n:
        return MatchResult(False, None, 0)

    pv = (0,) + pattern.values
    pinv = (0,) + pattern.inverse + (0,)
    tv = (0,) + text.values
    plab = pl.label
    counter = _Counter()
    events = []
    cands: list[_Candidate] = [_Candidate(Frontier(), (), None)]

    for lo, hi, single in pl.blocks:
        grown: list[_Candidate] = []
        for c in cands:
            if single:
                firsts = [_first_in_region(tl, kind, c.frontier) for kind in (UPPER, LOWER, FLUID)]
                firsts = [y for y in firsts if y]
                if not firsts:
                    continue
                leftmost = min(firsts)
                lowest = min(firsts, key=tv.__getitem__)
                for y in (leftmost,) if leftmost == lowest else (leftmost, lowest):
                    grown.append(_Candidate(Frontier(y, tv[y]), (y,), c))
            else:
                images = _rigid_block(pv, pinv, plab, lo, hi, tl, tv, c.frontier, counter)
                if images is None:
                    continue
                fr = Frontier(max(images), max(tv[y] for y in images))
                grown.append(_Candidate(fr, tuple(images), c))
        kept = _prune(grown)
        assert len(kept) <= 2, "more than two incomparable partial embeddings"
        if trace:
            events.append(
                {
                    "block": (lo, hi),
                    "singleton": single,
                    "extensions": [tuple(g.frontier) for g in grown],
                    "kept": [tuple(g.frontier) for g in kept],
                }
            )
        cands = kept
        if not cands:
            return MatchResult(False, None, counter.n, tuple(events))

    best = min(cands, key=lambda c: c.frontier)
    embedding = Embedding.from_images(_unwind(best))
    assert verify_embedding(pattern, text, embedding)
    return MatchResult(True, embedding, counter.n, tuple(events))
