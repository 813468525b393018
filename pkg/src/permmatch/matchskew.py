"""Pattern matching between skew-merged permutations in O(kn).

Corner elements of the pattern are placed first, each as far out from the
centre as the constraints allow, by the same problem-queue fixpoint as in
the 321 case with "left/low" replaced by "outer".  The monotone centre of
the pattern then only has to fit into the rectangle those images leave
free, which is a longest increasing/decreasing subsequence question
answered from the rectangle's own corner counts.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .classify import (
    CenterDirection,
    Corner,
    SkewLabels,
    label_skew,
    label_skew_cached,
)
from .match321 import KERNEL_MIN_TEXT, ClassViolation, MatchResult
from .perm import Embedding, Permutation, normalize_subsequence, verify_embedding

__all__ = [
    "PartialResult",
    "Region",
    "match_skew_merged",
    "min_noncentral_embedding",
    "monotone_capacity",
    "problem_bound_skew",
    "remaining_region",
]

CENTRAL = Corner.CENTRAL
EXHAUSTED = -1
_WEST = (False, True, True, False)  # indexed by Corner
_NORTH = (True, True, False, False)


@dataclass(frozen=True)
class PartialResult:
    embedding: Optional[Embedding]
    iterations: int


@dataclass(frozen=True)
class Region:
    """Text elements strictly inside the open box (pos_low, pos_high) x (val_low, val_high)."""

    pos_low: int
    pos_high: int
    val_low: int
    val_high: int
    members: tuple[int, ...]
    subpattern: Permutation
    sublabels: SkewLabels


def _inner_tables(tl: SkewLabels, c: Corner):
    """Text seek tables for the inward horizontal and vertical walks of corner ``c``."""
    h = tl._right[c] if _WEST[c] else tl._left[c]
    v = tl._down[c] if _NORTH[c] else tl._up[c]
    return h, v


def _bound(x, f, oh, ov, c, tl, tv) -> Optional[int]:
    """Outermost admissible image for corner element ``x``; see ``problem_bound_skew``."""
    h_tab, v_tab = _inner_tables(tl, c)
    west = _WEST[c]
    best = None
    y = oh[x]
    if y:
        best = h_tab[f[y]]
        if not best:
            return EXHAUSTED
    y = ov[x]
    if y:
        z = v_tab[tv[f[y]]]
        if not z:
            return EXHAUSTED
        # inner = further right for West corners, further left for East ones
        if best is None or (z > best if west else z < best):
            best = z
    return best


def _strictly_outer(a: int, b: int, c: Corner) -> bool:
    return a < b if _WEST[c] else a > b


def problem_bound_skew(
    f: dict[int, int],
    x: int,
    pattern_labels: SkewLabels,
    text_labels: SkewLabels,
) -> Optional[int]:
    """Innermost of the two bounds imposed on corner element ``x`` by ``f``.

    From the images of x's outward horizontal and vertical neighbors, walk
    inward in the text to the first element of x's corner.  Returns a text
    position, ``None`` when x has no outward neighbors, or ``EXHAUSTED``
    when a walk finds nothing.  ``x`` is a problem iff ``f[x]`` is strictly
    further out than the result.
    """
    tv = (0,) + text_labels.perm.values
    c = pattern_labels.label[x - 1]
    if c is CENTRAL:
        raise ValueError("central elements have no bound")
    oh, _, ov, _ = pattern_labels.single_steps
    return _bound(x, f, oh, ov, c, text_labels, tv)


def _skew_labels(p: Permutation, given: Optional[SkewLabels], role: str) -> SkewLabels:
    labels = given if given is not None else label_skew(p)
    if not labels.is_skew_merged:
        raise ClassViolation(f"{role} {p} is not skew-merged")
    return labels


def _noncentral_compiled(f, xs, plab, steps, tl, counter) -> Optional[dict[int, int]]:
    """``_noncentral``'s fixpoint loop, run by the compiled kernel."""
    from ._kernels import corner_fixpoint

    size = len(f)
    corner = np.zeros(size, dtype=np.int64)
    corner[1:] = plab
    west = (corner == Corner.NW) | (corner == Corner.SW)
    fa = np.array(f, dtype=np.int64)
    horiz, vert = tl.kernel_tables
    oh, ih, ov, iv = (np.array(t, dtype=np.int64) for t in steps)
    ok, moves = corner_fixpoint(fa, np.array(xs, dtype=np.int64), corner, west, oh, ih, ov, iv, horiz, vert)
    counter[0] += moves
    if not ok:
        return None
    images = fa.tolist()
    return {x: images[x] for x in xs}


def _noncentral(pl: SkewLabels, tl: SkewLabels, counter: list[int]) -> Optional[dict[int, int]]:
    plab = pl.label
    xs = pl.noncentral
    outermost = tl._outermost
    f = [0] * (len(plab) + 1)
    for x in xs:
        img = outermost[plab[x - 1]]
        if not img:
            return None
        f[x] = img
    if not xs:
        return {}
    oh, ih, ov, iv = pl.single_steps
    if tl.perm.n > KERNEL_MIN_TEXT:
        return _noncentral_compiled(f, xs, plab, (oh, ih, ov, iv), tl, counter)
    tables = tl.inner_tables
    size = len(plab) + 1
    # per pattern position: inward tables of its corner and its orientation
    ht = [None] * size
    vt = [None] * size
    west = [False] * size
    for x in xs:
        c = plab[x - 1]
        ht[x], vt[x] = tables[c]
        west[x] = _WEST[c]

    def bound(y: int) -> int:
        # like _bound, with 0 for "no constraint"
        best = 0
        z = oh[y]
        if z:
            best = ht[y][f[z]]
            if not best:
                return EXHAUSTED
        z = ov[y]
        if z:
            w = vt[y][f[z]]
            if not w:
                return EXHAUSTED
            if not best or (w > best if west[y] else w < best):
                best = w
        return best

    queued = bytearray(size)
    problems: deque[int] = deque()
    for x in xs:
        b = bound(x)
        if b and (b == EXHAUSTED or (f[x] < b if west[x] else f[x] > b)):
            problems.append(x)
            queued[x] = 1

    # A position outside the queue meets both of its constraints and images
    # only move inward, so moving x can only break the constraint that a
    # dependant y places through x: horizontal if oh[y] == x, vertical if
    # ov[y] == x.  Dependants are among ih[x] and iv[x].
    push, pop = problems.append, problems.popleft
    moves = 0
    while problems:
        x = pop()
        queued[x] = 0
        # bound(x) inlined; -1 marks "no horizontal constraint", 0 exhaustion
        z = oh[x]
        b = ht[x][f[z]] if z else -1
        z = ov[x]
        if z and b:
            w = vt[x][f[z]]
            if not w or b < 0 or (w > b if west[x] else w < b):
                b = w
        if not b:
            counter[0] += moves
            return None
        f[x] = b
        moves += 1
        for y in (ih[x], iv[x]):
            if not y or queued[y]:
                continue
            fy = f[y]
            bad = False
            if oh[y] == x:
                w = ht[y][b]
                bad = not w or (fy < w if west[y] else fy > w)
            if not bad and ov[y] == x:
                w = vt[y][b]
                bad = not w or (fy < w if west[y] else fy > w)
            if bad:
                push(y)
                queued[y] = 1
    counter[0] += moves
    return {x: f[x] for x in xs}


def min_noncentral_embedding(
    pattern: Permutation,
    text: Permutation,
    *,
    pattern_labels: Optional[SkewLabels] = None,
    text_labels: Optional[SkewLabels] = None,
) -> PartialResult:
    """Outermost type-preserving embedding of the pattern's corner elements."""
    pl = _skew_labels(pattern, pattern_labels, "pattern")
    tl = _skew_labels(text, text_labels, "text")
    counter = [0]
    f = _noncentral(pl, tl, counter)
    if f is None:
        return PartialResult(None, counter[0])
    return PartialResult(Embedding.from_mapping(f), counter[0])


def remaining_region(
    text: Permutation,
    partial: Embedding,
    pattern_labels: SkewLabels,
) -> Region:
    """Open box left free by the corner images, relabeled as its own permutation.

    A side with no pattern corner on it extends to the text boundary.
    """
    n = text.n
    pos_low, pos_high, val_low, val_high = 0, n + 1, 0, n + 1
    for x, y in partial.pairs:
        c = pattern_labels.label[x - 1]
        val = text.values[y - 1]
        if _WEST[c]:
            pos_low = max(pos_low, y)
        else:
            pos_high = min(pos_high, y)
        if _NORTH[c]:
            val_high = min(val_high, val)
        else:
            val_low = max(val_low, val)
    if pos_high - pos_low > 256:
        vals = np.asarray(text.values[pos_low : pos_high - 1], dtype=np.int64)
        inside = np.flatnonzero((vals > val_low) & (vals < val_high)) + pos_low + 1
        members = tuple(inside.tolist())
    else:
        members = tuple(
            pos
            for pos in range(pos_low + 1, pos_high)
            if val_low < text.values[pos - 1] < val_high
        )
    sub = normalize_subsequence(text, members)
    return Region(pos_low, pos_high, val_low, val_high, members, sub, label_skew_cached(sub))


def monotone_capacity(region: Region) -> tuple[int, int]:
    """Longest increasing and decreasing subsequence lengths of the region.

    The corners on the matching diagonal always count in full; the centre
    counts in full when it runs the same way and contributes one element
    otherwise.
    """
    sl = region.sublabels
    if not sl.is_skew_merged:
        raise ValueError("region is not skew-merged")
    central = sl.count(CENTRAL)
    d = sl.center_direction
    lis = sl.count(Corner.SW) + sl.count(Corner.NE)
    lds = sl.count(Corner.NW) + sl.count(Corner.SE)
    lis += central if d is not CenterDirection.DECREASING else min(1, central)
    lds += central if d is not CenterDirection.INCREASING else min(1, central)
    return lis, lds


def _monotone_witness(region: Region, increasing: bool) -> list[int]:
    """Text positions of a longest monotone run through the region, in position order."""
    sl = region.sublabels
    first, last = (Corner.SW, Corner.NE) if increasing else (Corner.NW, Corner.SE)
    want = CenterDirection.INCREASING if increasing else CenterDirection.DECREASING
    central = sl.positions(CENTRAL)
    if sl.center_direction not in (want, CenterDirection.TRIVIAL):
        central = central[:1]
    picked = sl.positions(first) + central + sl.positions(last)
    return [region.members[i - 1] for i in picked]


def match_skew_merged(
    pattern: Permutation,
    text: Permutation,
    *,
    pattern_labels: Optional[SkewLabels] = None,
    text_labels: Optional[SkewLabels] = None,
) -> MatchResult:
    """Decide whether ``text`` contains ``pattern``; both must be skew-merged."""
    pl = _skew_labels(pattern, pattern_labels, "pattern")
    tl = _skew_labels(text, text_labels, "text")
    k, n = pattern.n, text.n
    if k == 0:
        return MatchResult(True, Embedding(), 0)
    if k > n:
        return MatchResult(False, None, 0)
    counter = [0]
    f = _noncentral(pl, tl, counter)
    if f is None:
        return MatchResult(False, None, counter[0])

    centre = pl.positions(CENTRAL)
    c = len(centre)
    if c:
        region = remaining_region(text, Embedding.from_mapping(f), pl)
        lis, lds = monotone_capacity(region)
        d = pl.center_direction
        if d is CenterDirection.INCREASING:
            increasing = True
        elif d is CenterDirection.DECREASING:
            increasing = False
        else:
            increasing = lis >= lds
        if c > (lis if increasing else lds):
            return MatchResult(False, None, counter[0])
        chosen = _monotone_witness(region, increasing)[:c]
        f.update(zip(centre, chosen))

    embedding = Embedding.from_mapping(f)
    assert verify_embedding(pattern, text, embedding)
    return MatchResult(True, embedding, counter[0])
