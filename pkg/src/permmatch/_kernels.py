"""Compiled fixpoint loops for large texts.

These mirror the pure-Python loops in ``match321`` and ``matchskew`` step for
step, including the first-in-first-out order, so iteration counts agree.
The module imports numba, so the matchers import it only when a text is
large enough for compilation to pay off.  Compiled code is cached on disk.

Both loops return ``(ok, moves)``; on success ``f`` holds the fixpoint.
"""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True)
def _bound_321(x, lo, f, kind, below, right, up_from):
    # 0 = no constraint, -1 = exhausted
    k = kind[x]
    best = 0
    if x > lo:
        best = right[k, f[x - 1]]
        if best == 0:
            return -1
    d = below[x]
    if d:
        y = up_from[k, f[d]]
        if y == 0:
            return -1
        if y > best:
            best = y
    return best


@njit(cache=True)
def rigid_fixpoint(f, lo, hi, kind, below, above, right, up_from):
    """Fixpoint for one rigid block; arrays are indexed by pattern position."""
    cap = hi - lo + 2
    queue = np.empty(cap, np.int64)
    queued = np.zeros(hi + 2, np.uint8)
    head = 0
    tail = 0
    for x in range(lo, hi + 1):
        b = _bound_321(x, lo, f, kind, below, right, up_from)
        if b != 0 and (b < 0 or f[x] < b):
            queue[tail] = x
            tail = (tail + 1) % cap
            queued[x] = 1
    moves = 0
    while head != tail:
        x = queue[head]
        head = (head + 1) % cap
        queued[x] = 0
        b = _bound_321(x, lo, f, kind, below, right, up_from)
        if b < 0:
            return False, moves
        f[x] = b
        moves += 1
        y = x + 1
        if y <= hi and queued[y] == 0:
            c = right[kind[y], b]
            if c == 0 or c > f[y]:
                queue[tail] = y
                tail = (tail + 1) % cap
                queued[y] = 1
        y = above[x]
        if y and queued[y] == 0:
            c = up_from[kind[y], b]
            if c == 0 or c > f[y]:
                queue[tail] = y
                tail = (tail + 1) % cap
                queued[y] = 1
    return True, moves


@njit(cache=True)
def _bound_skew(x, f, corner, west, oh, ov, horiz, vert):
    # 0 = no constraint, -1 = exhausted
    c = corner[x]
    best = 0
    z = oh[x]
    if z:
        best = horiz[c, f[z]]
        if best == 0:
            return -1
    z = ov[x]
    if z:
        w = vert[c, f[z]]
        if w == 0:
            return -1
        if best == 0 or (w > best if west[x] else w < best):
            best = w
    return best


@njit(cache=True)
def _violates(fy, w, is_west):
    return w == 0 or (fy < w if is_west else fy > w)


@njit(cache=True)
def corner_fixpoint(f, xs, corner, west, oh, ih, ov, iv, horiz, vert):
    """Fixpoint over the corner elements ``xs``; arrays are indexed by pattern position."""
    cap = len(xs) + 1
    queue = np.empty(cap, np.int64)
    queued = np.zeros(len(f), np.uint8)
    head = 0
    tail = 0
    for x in xs:
        b = _bound_skew(x, f, corner, west, oh, ov, horiz, vert)
        if b != 0 and (b < 0 or (f[x] < b if west[x] else f[x] > b)):
            queue[tail] = x
            tail = (tail + 1) % cap
            queued[x] = 1
    moves = 0
    while head != tail:
        x = queue[head]
        head = (head + 1) % cap
        queued[x] = 0
        b = _bound_skew(x, f, corner, west, oh, ov, horiz, vert)
        if b < 0:
            return False, moves
        f[x] = b
        moves += 1
        for i in range(2):
            y = ih[x] if i == 0 else iv[x]
            if y == 0 or queued[y]:
                continue
            bad = False
            if oh[y] == x:
                bad = _violates(f[y], horiz[corner[y], b], west[y])
            if not bad and ov[y] == x:
                bad = _violates(f[y], vert[corner[y], b], west[y])
            if bad:
                queue[tail] = y
                tail = (tail + 1) % cap
                queued[y] = 1
    return True, moves
