"""Linear-time structure of 321-avoiding and skew-merged permutations.

Two labelings live here.  For 321-avoiders every element is upper (the larger
element of some inversion), lower (the smaller one) or fluid (in no
inversion); the fluid elements cut the permutation into direct-sum blocks.
For skew-merged permutations every element is in one of four corners or in
the monotone centre.

Both labelings carry precomputed seek tables so that the matchers can ask
"nearest element of type t in direction d" in constant time.  Tables are
indexed by coordinate (a position for left/right, a value for up/down) from
0 to n+1 and hold a text position, with 0 meaning no such element.  The
public accessors translate 0 to ``None``.
"""

from __future__ import annotations

from array import array
from dataclasses import dataclass
from functools import cached_property, lru_cache
from enum import Enum, IntEnum
from typing import Optional

import numpy as np

from .perm import Direction, Permutation, normalize_subsequence

__all__ = [
    "BlockDecomposition",
    "CenterDirection",
    "Corner",
    "Label321",
    "Labels321",
    "RigidBlock",
    "Singleton",
    "SkewDirection",
    "SkewLabels",
    "block_decomposition",
    "label_rigid_321",
    "label_skew",
    "skew_step",
    "typed_next_321",
    "typed_seek_skew",
]


class Label321(IntEnum):
    UPPER = 0
    LOWER = 1
    FLUID = 2


class Corner(IntEnum):
    NE = 0
    NW = 1
    SW = 2
    SE = 3
    CENTRAL = 4

    @property
    def is_west(self) -> bool:
        return self is Corner.NW or self is Corner.SW

    @property
    def is_north(self) -> bool:
        return self is Corner.NW or self is Corner.NE


class CenterDirection(Enum):
    INCREASING = "increasing"
    DECREASING = "decreasing"
    TRIVIAL = "trivial"


class SkewDirection(Enum):
    """Directions relative to the centre: outward/inward, horizontal/vertical."""

    OH = "oh"
    IH = "ih"
    OV = "ov"
    IV = "iv"


CORNERS = (Corner.NE, Corner.NW, Corner.SW, Corner.SE)
_CORNER_BY_CODE = tuple(Corner)
_SMALL = 48  # below this size the numpy scans cost more than plain loops
_LABEL321_BY_CODE = tuple(Label321)


# --------------------------------------------------------------------------
# table helpers


def _as_table(a: np.ndarray) -> array:
    return array("i", a.astype(np.int32).tobytes())


def _first_after(mask: np.ndarray) -> np.ndarray:
    """out[c] = least index i > c (1-based) with mask[i-1], else 0; c in 0..n+1."""
    n = len(mask)
    idx = np.where(mask, np.arange(1, n + 1), n + 1)
    out = np.full(n + 2, n + 1, dtype=np.int64)
    if n:
        out[:n] = np.minimum.accumulate(idx[::-1])[::-1]
    out[out == n + 1] = 0
    return out


def _last_before(mask: np.ndarray) -> np.ndarray:
    """out[c] = greatest index i < c (1-based) with mask[i-1], else 0; c in 0..n+1."""
    n = len(mask)
    idx = np.where(mask, np.arange(1, n + 1), 0)
    out = np.zeros(n + 2, dtype=np.int64)
    if n:
        out[2:] = np.maximum.accumulate(idx)
    return out


def _barrier(found: np.ndarray, wall: np.ndarray, forward: bool) -> np.ndarray:
    """Keep ``found`` only where it comes before the first ``wall`` hit."""
    if forward:
        ok = (found != 0) & ((wall == 0) | (found < wall))
    else:
        ok = (found != 0) & (found > wall)
    return np.where(ok, found, 0)


def _arrays(p: Permutation) -> tuple[np.ndarray, np.ndarray]:
    v = np.asarray(p.values, dtype=np.int64)
    inv = np.asarray(p.inverse, dtype=np.int64)
    return v, inv


def _value_to_pos(inv: np.ndarray) -> np.ndarray:
    # index 0 and n+1 map to "no element"
    return np.concatenate(([0], inv, [0]))


# --------------------------------------------------------------------------
# 321-avoiding permutations


@dataclass(frozen=True, eq=False)
class Labels321:
    perm: Permutation
    label: tuple[Label321, ...]
    is_avoider: bool
    # private seek tables, see module docstring
    _right: tuple[array, ...]
    _left: tuple[array, ...]
    _up: tuple[array, ...]
    _down: tuple[array, ...]

    def of(self, pos: int) -> Label321:
        return self.label[pos - 1]

    def positions(self, kind: Label321) -> tuple[int, ...]:
        return tuple(i for i, lab in enumerate(self.label, 1) if lab is kind)

    def values(self, kind: Label321) -> tuple[int, ...]:
        return tuple(self.perm.values[i - 1] for i in self.positions(kind))

    @cached_property
    def blocks(self) -> tuple[tuple[int, int, bool], ...]:
        """Cached ``block_ranges`` of this labeling."""
        return tuple(block_ranges(self))

    @cached_property
    def hot_tables(self) -> tuple[tuple[list[int], list[int]], tuple[list[int], list[int]]]:
        """Tables read by the matcher's inner loop, per kind (upper, lower).

        First the right-seek table, then the up-seek taken from the value of
        each position (index 0 seeks from value 0).  Plain lists, because
        indexing them is faster than indexing ``array``.
        """
        vals = (0,) + self.perm.values
        if len(vals) <= _SMALL:
            up_from = tuple(list(map(self._up[kind].__getitem__, vals)) for kind in (0, 1))
            return (self._right[0].tolist(), self._right[1].tolist()), up_from
        right, up_from = self.kernel_tables
        return tuple(right.tolist()), tuple(up_from.tolist())

    @cached_property
    def kernel_tables(self) -> tuple[np.ndarray, np.ndarray]:
        """``hot_tables`` as two int32 arrays of shape (2, n+2) and (2, n+1)."""
        idx = np.array((0,) + self.perm.values, dtype=np.intp)
        right = np.stack([np.frombuffer(self._right[k], dtype=np.int32) for k in (0, 1)])
        up_from = np.stack([np.frombuffer(self._up[k], dtype=np.int32)[idx] for k in (0, 1)])
        return right, up_from


def label_rigid_321(p: Permutation) -> Labels321:
    """Upper/lower/fluid labels from one left-to-right scan.

    With ``hi`` the maximum strictly before x and ``lo`` the minimum strictly
    after it: x > lo makes x upper, x < hi makes it lower, and neither makes
    it fluid.  Both at once means a 321 occurrence, which clears
    ``is_avoider``; the label then defaults to upper.
    """
    n = p.n
    if n < _SMALL:
        return _label_rigid_321_small(p)
    v, inv = _arrays(p)
    if n:
        hi = np.concatenate(([0], np.maximum.accumulate(v)[:-1]))
        lo = np.concatenate((np.minimum.accumulate(v[::-1])[::-1][1:], [n + 1]))
    else:
        hi = lo = v
    upper = v > lo
    lower = v < hi
    is_avoider = not bool(np.any(upper & lower))
    codes = np.where(upper, 0, np.where(lower, 1, 2))
    vpos = _value_to_pos(inv)
    by_value = codes[inv - 1] if n else codes

    right, left, up, down = [], [], [], []
    for kind in Label321:
        mask = codes == kind
        vmask = by_value == kind
        right.append(_as_table(_first_after(mask)))
        left.append(_as_table(_last_before(mask)))
        up.append(_as_table(vpos[_first_after(vmask)]))
        down.append(_as_table(vpos[_last_before(vmask)]))

    labels = tuple(map(_LABEL321_BY_CODE.__getitem__, codes.tolist()))
    return Labels321(p, labels, is_avoider, tuple(right), tuple(left), tuple(up), tuple(down))


def _scan_tables(mask: list[bool], to_pos: Optional[list[int]] = None) -> tuple[array, array]:
    """Pure-Python ``_first_after`` / ``_last_before`` pair, optionally mapped through ``to_pos``."""
    n = len(mask)
    after = [0] * (n + 2)
    nxt = 0
    for c in range(n, -1, -1):
        after[c] = nxt
        if c and mask[c - 1]:
            nxt = c
    before = [0] * (n + 2)
    prv = 0
    for c in range(n + 2):
        before[c] = prv
        if 1 <= c <= n and mask[c - 1]:
            prv = c
    if to_pos is not None:
        after = [to_pos[i] for i in after]
        before = [to_pos[i] for i in before]
    return array("i", after), array("i", before)


def _label_rigid_321_small(p: Permutation) -> Labels321:
    """``label_rigid_321`` without numpy, for inputs where its call overhead dominates."""
    n = p.n
    vals = p.values
    codes = [0] * n
    is_avoider = True
    hi = 0
    lo_after = [n + 1] * (n + 1)
    for i in range(n - 1, -1, -1):
        lo_after[i] = min(lo_after[i + 1], vals[i])
    for i, v in enumerate(vals):
        upper = v > lo_after[i + 1]
        lower = v < hi
        if upper and lower:
            is_avoider = False
        codes[i] = 0 if upper else (1 if lower else 2)
        hi = max(hi, v)
    vpos = [0, *p.inverse, 0]
    right, left, up, down = [], [], [], []
    for kind in Label321:
        r, l = _scan_tables([c == kind for c in codes])
        u, d = _scan_tables([codes[q - 1] == kind for q in p.inverse], vpos)
        right.append(r)
        left.append(l)
        up.append(u)
        down.append(d)
    labels = tuple(map(_LABEL321_BY_CODE.__getitem__, codes))
    return Labels321(p, labels, is_avoider, tuple(right), tuple(left), tuple(up), tuple(down))


def typed_next_321(
    labels: Labels321, x: Optional[int], direction: Direction, kind: Label321
) -> Optional[int]:
    """Nearest element of ``kind`` strictly in ``direction`` from ``x``."""
    if x is None:
        return None
    if direction is Direction.RIGHT:
        found = labels._right[kind][x]
    elif direction is Direction.LEFT:
        found = labels._left[kind][x]
    elif direction is Direction.UP:
        found = labels._up[kind][labels.perm.values[x - 1]]
    else:
        found = labels._down[kind][labels.perm.values[x - 1]]
    return found or None


@dataclass(frozen=True)
class RigidBlock:
    start: int
    stop: int  # inclusive
    pattern: Permutation


@dataclass(frozen=True)
class Singleton:
    position: int

    @property
    def start(self) -> int:
        return self.position

    @property
    def stop(self) -> int:
        return self.position

    @property
    def pattern(self) -> Permutation:
        return Permutation((1,))


@dataclass(frozen=True)
class BlockDecomposition:
    blocks: tuple[RigidBlock | Singleton, ...]

    def patterns(self) -> list[Permutation]:
        return [b.pattern for b in self.blocks]


def block_ranges(labels: Labels321) -> list[tuple[int, int, bool]]:
    """``(start, stop, is_singleton)`` for each direct-sum block."""
    out = []
    start = 0
    for pos, lab in enumerate(labels.label, 1):
        if lab is Label321.FLUID:
            if start:
                out.append((start, pos - 1, False))
                start = 0
            out.append((pos, pos, True))
        elif not start:
            start = pos
    if start:
        out.append((start, len(labels.label), False))
    return out


def block_decomposition(p: Permutation, labels: Optional[Labels321] = None) -> BlockDecomposition:
    if labels is None:
        labels = label_rigid_321(p)
    if not labels.is_avoider:
        raise ValueError("block decomposition needs a 321-avoiding permutation")
    blocks: list[RigidBlock | Singleton] = []
    for start, stop, single in block_ranges(labels):
        if single:
            blocks.append(Singleton(start))
        else:
            sub = normalize_subsequence(p, range(start, stop + 1))
            blocks.append(RigidBlock(start, stop, sub))
    return BlockDecomposition(tuple(blocks))


# --------------------------------------------------------------------------
# skew-merged permutations


@dataclass(frozen=True, eq=False)
class SkewLabels:
    perm: Permutation
    label: tuple[Corner, ...]
    is_skew_merged: bool
    center_direction: CenterDirection
    west_end: int  # last West position, 0 if none
    east_start: int  # first East position, n+1 if none
    south_end: int  # largest South value, 0 if none
    north_start: int  # smallest North value, n+1 if none
    # seek tables per corner; a central element blocks the walk
    _right: tuple[array, ...]
    _left: tuple[array, ...]
    _up: tuple[array, ...]
    _down: tuple[array, ...]
    # outermost element of each corner, 0 if the corner is empty
    _outermost: tuple[int, ...]

    def of(self, pos: int) -> Corner:
        return self.label[pos - 1]

    def positions(self, kind: Corner) -> tuple[int, ...]:
        return tuple(i for i, lab in enumerate(self.label, 1) if lab is kind)

    def values(self, kind: Corner) -> tuple[int, ...]:
        return tuple(self.perm.values[i - 1] for i in self.positions(kind))

    def count(self, kind: Corner) -> int:
        return self.label.count(kind)

    def outermost(self, kind: Corner) -> Optional[int]:
        return self._outermost[kind] or None

    @cached_property
    def single_steps(self) -> tuple[list[int], list[int], list[int], list[int]]:
        """``(oh, ih, ov, iv)`` lists indexed by position; 0 where undefined."""
        p = self.perm
        n = p.n
        lab = self.label
        oh, ih, ov, iv = ([0] * (n + 1) for _ in range(4))

        def keep(y: int) -> int:
            return y if 1 <= y <= n and lab[y - 1] is not Corner.CENTRAL else 0

        for x in range(1, n + 1):
            c = lab[x - 1]
            if c is Corner.CENTRAL:
                continue
            v = p.values[x - 1]
            out_h = -1 if c.is_west else 1
            out_v = 1 if c.is_north else -1
            oh[x] = keep(x + out_h)
            ih[x] = keep(x - out_h)
            ov[x] = keep(p.inverse[v + out_v - 1]) if 1 <= v + out_v <= n else 0
            iv[x] = keep(p.inverse[v - out_v - 1]) if 1 <= v - out_v <= n else 0
        return oh, ih, ov, iv

    @cached_property
    def noncentral(self) -> tuple[int, ...]:
        return tuple(i for i, lab in enumerate(self.label, 1) if lab is not Corner.CENTRAL)

    @cached_property
    def inner_tables(self) -> tuple[tuple[list[int], list[int]], ...]:
        """Per corner, seek tables walking toward the centre, both indexed by position.

        The horizontal one is a plain seek table.  The vertical one seeks
        from the value of the given position (index 0 seeks from value 0).
        Plain lists, because the matcher's inner loop indexes them.
        """
        vals = (0,) + self.perm.values
        if len(vals) > _SMALL:
            horiz, vert = self.kernel_tables
            return tuple(zip(horiz.tolist(), vert.tolist()))
        out = []
        for c in CORNERS:
            h, v = self._inner_pair(c)
            out.append((h.tolist(), list(map(v.__getitem__, vals))))
        return tuple(out)

    @cached_property
    def kernel_tables(self) -> tuple[np.ndarray, np.ndarray]:
        """``inner_tables`` as two int32 arrays of shape (4, n+2) and (4, n+1)."""
        idx = np.array((0,) + self.perm.values, dtype=np.intp)
        pairs = [self._inner_pair(c) for c in CORNERS]
        horiz = np.stack([np.frombuffer(h, dtype=np.int32) for h, _ in pairs])
        vert = np.stack([np.frombuffer(v, dtype=np.int32)[idx] for _, v in pairs])
        return horiz, vert

    def _inner_pair(self, c: Corner) -> tuple[array, array]:
        return (
            self._right[c] if c.is_west else self._left[c],
            self._down[c] if c.is_north else self._up[c],
        )


def _east_boundary(seq: np.ndarray) -> int:
    """Index (0-based) of the first element ending a 213 or 231, else len(seq).

    Only the last adjacent ascent and descent before the element matter:
    as long as no such element has appeared, the prefix is a funnel whose
    inner arms are these two endpoints.
    """
    n = len(seq)
    if n < 3:
        return n
    j = np.arange(n - 1)
    asc = np.where(seq[:-1] < seq[1:], j, -1)
    desc = np.where(seq[:-1] > seq[1:], j, -1)
    # last ascent/descent (j, j+1) with j + 1 <= i - 1
    last_a = np.maximum.accumulate(asc)[: n - 2]
    last_d = np.maximum.accumulate(desc)[: n - 2]
    cur = seq[2:]
    hit = ((last_a >= 0) & (cur < seq[np.maximum(last_a, 0)])) | (
        (last_d >= 0) & (cur > seq[np.maximum(last_d, 0)])
    )
    idx = np.flatnonzero(hit)
    return int(idx[0]) + 2 if len(idx) else n


def label_skew(p: Permutation) -> SkewLabels:
    """Corner/centre labels from four boundary scans, then self-verified.

    East elements end a 213 or 231, West elements start a 132 or 312, North
    elements are the top of a 213 or 312 and South elements the bottom of a
    132 or 231.  Running the East scan on the reverse and on the inverse
    (and its reverse) yields the other three boundaries.  The result is
    accepted as skew-merged only if it exhibits an increasing and a
    decreasing subsequence covering everything.
    """
    n = p.n
    v, inv = _arrays(p)
    east_start = _east_boundary(v) + 1
    west_end = n - _east_boundary(v[::-1])
    north_start = _east_boundary(inv) + 1
    south_end = n - _east_boundary(inv[::-1])

    pos = np.arange(1, n + 1)
    west = pos <= west_end
    east = pos >= east_start
    north = v >= north_start
    south = v <= south_end
    codes = np.full(n, int(Corner.CENTRAL), dtype=np.int64)
    codes[east & north] = Corner.NE
    codes[west & north] = Corner.NW
    codes[west & south] = Corner.SW
    codes[east & south] = Corner.SE
    consistent = not bool(
        np.any(west & east)
        or np.any(north & south)
        or np.any((west | east) != (north | south))
    )

    central = codes == Corner.CENTRAL
    cv = v[central]
    if len(cv) <= 1:
        direction = CenterDirection.TRIVIAL
    elif cv[1] > cv[0]:
        direction = CenterDirection.INCREASING
    else:
        direction = CenterDirection.DECREASING
    inc_mask = (codes == Corner.SW) | (codes == Corner.NE)
    dec_mask = (codes == Corner.NW) | (codes == Corner.SE)
    if direction is CenterDirection.DECREASING:
        dec_mask |= central
    else:
        inc_mask |= central
    inc = v[inc_mask]
    dec = v[dec_mask]
    is_skew = (
        consistent
        and bool(np.all(inc[1:] > inc[:-1]))
        and bool(np.all(dec[1:] < dec[:-1]))
    )

    vpos = _value_to_pos(inv)
    by_value = codes[inv - 1] if n else codes
    vcentral = by_value == Corner.CENTRAL
    wall_r, wall_l = _first_after(central), _last_before(central)
    wall_u, wall_d = _first_after(vcentral), _last_before(vcentral)
    right, left, up, down, outer = [], [], [], [], []
    for kind in Corner:
        mask = codes == kind
        vmask = by_value == kind
        right.append(_as_table(_barrier(_first_after(mask), wall_r, True)))
        left.append(_as_table(_barrier(_last_before(mask), wall_l, False)))
        up.append(_as_table(vpos[_barrier(_first_after(vmask), wall_u, True)]))
        down.append(_as_table(vpos[_barrier(_last_before(vmask), wall_d, False)]))
        members = np.flatnonzero(mask)
        if kind is Corner.CENTRAL or not len(members):
            outer.append(0)
        elif kind.is_west:
            outer.append(int(members[0]) + 1)
        else:
            outer.append(int(members[-1]) + 1)

    labels = tuple(map(_CORNER_BY_CODE.__getitem__, codes.tolist()))
    return SkewLabels(
        p,
        labels,
        is_skew,
        direction,
        west_end,
        east_start,
        south_end,
        north_start,
        tuple(right),
        tuple(left),
        tuple(up),
        tuple(down),
        tuple(outer),
    )


@lru_cache(maxsize=1 << 14)
def _label_skew_small(values: tuple[int, ...]) -> SkewLabels:
    return label_skew(Permutation(values))


def label_skew_cached(p: Permutation) -> SkewLabels:
    """``label_skew`` memoized for small permutations, where numpy setup dominates."""
    if p.n <= 16:
        return _label_skew_small(p.values)
    return label_skew(p)


def resolve(corner: Corner, direction: SkewDirection) -> Direction:
    """Absolute direction of a centre-relative step taken from ``corner``."""
    if direction is SkewDirection.OH:
        return Direction.LEFT if corner.is_west else Direction.RIGHT
    if direction is SkewDirection.IH:
        return Direction.RIGHT if corner.is_west else Direction.LEFT
    if direction is SkewDirection.OV:
        return Direction.UP if corner.is_north else Direction.DOWN
    return Direction.DOWN if corner.is_north else Direction.UP


def skew_step(labels: SkewLabels, x: Optional[int], direction: SkewDirection) -> Optional[int]:
    """Single step from non-central ``x``; landing on the centre gives ``None``."""
    if x is None:
        return None
    p = labels.perm
    d = resolve(labels.label[x - 1], direction)
    if d is Direction.LEFT:
        y = x - 1 if x > 1 else None
    elif d is Direction.RIGHT:
        y = x + 1 if x < p.n else None
    else:
        val = p.values[x - 1] + (1 if d is Direction.UP else -1)
        y = p.inverse[val - 1] if 1 <= val <= p.n else None
    if y is None or labels.label[y - 1] is Corner.CENTRAL:
        return None
    return y


def typed_seek_skew(
    labels: SkewLabels, x: Optional[int], direction: SkewDirection, kind: Corner
) -> Optional[int]:
    """First element of ``kind`` along the chain of single steps from ``x``.

    The step direction is fixed by the corner of ``x`` and kept for the
    whole walk.
    """
    if x is None:
        return None
    d = resolve(labels.label[x - 1], direction)
    if d is Direction.RIGHT:
        found = labels._right[kind][x]
    elif d is Direction.LEFT:
        found = labels._left[kind][x]
    elif d is Direction.UP:
        found = labels._up[kind][labels.perm.values[x - 1]]
    else:
        found = labels._down[kind][labels.perm.values[x - 1]]
    return found or None
