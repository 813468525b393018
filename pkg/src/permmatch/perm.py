"""Permutations, embeddings and the neighbor-only embedding check.

Positions and values are 1-based throughout the public API.  An element of a
permutation is identified by its position; ``None`` stands for an undefined
element and propagates through every neighbor operator.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Mapping, Optional, Sequence

import numpy as np

__all__ = [
    "Direction",
    "Embedding",
    "Permutation",
    "direct_sum",
    "format_permutation",
    "neighbor",
    "normalize_subsequence",
    "parse_permutation",
    "verify_embedding",
]

_SEPARATORS = re.compile(r"[\s,]+")
_VECTOR_THRESHOLD = 256


class Direction(Enum):
    LEFT = "left"
    RIGHT = "right"
    UP = "up"
    DOWN = "down"


@dataclass(frozen=True)
class Permutation:
    """A permutation in one-line notation.

    ``values[i - 1]`` is the value at position ``i`` and ``inverse[v - 1]`` the
    position holding value ``v``.
    """

    values: tuple[int, ...]
    inverse: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        values = tuple(self.values)
        n = len(values)
        if n >= _VECTOR_THRESHOLD:
            object.__setattr__(self, "values", values)
            object.__setattr__(self, "inverse", _checked_inverse(values))
            return
        inverse = [0] * n
        for pos, v in enumerate(values, 1):
            if not isinstance(v, int) or isinstance(v, bool):
                raise ValueError(f"non-integer value {v!r}")
            if v < 1 or v > n:
                raise ValueError(f"value {v} outside 1..{n}")
            if inverse[v - 1]:
                raise ValueError(f"duplicate value {v}")
            inverse[v - 1] = pos
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "inverse", tuple(inverse))

    @classmethod
    def identity(cls, n: int) -> Permutation:
        return cls(tuple(range(1, n + 1)))

    @property
    def n(self) -> int:
        return len(self.values)

    def __len__(self) -> int:
        return len(self.values)

    def __iter__(self):
        return iter(self.values)

    def value(self, pos: int) -> int:
        return self.values[pos - 1]

    def position(self, value: int) -> int:
        return self.inverse[value - 1]

    def __str__(self) -> str:
        return format_permutation(self)


def _checked_inverse(values: tuple[int, ...]) -> tuple[int, ...]:
    n = len(values)
    arr = np.asarray(values)
    if arr.dtype.kind not in "iu":
        raise ValueError("non-integer value in permutation")
    if arr.min() < 1 or arr.max() > n:
        raise ValueError(f"value outside 1..{n}")
    if np.bincount(arr, minlength=n + 1).max() > 1:
        raise ValueError("duplicate value")
    inverse = np.empty(n, dtype=np.int64)
    inverse[arr - 1] = np.arange(1, n + 1)
    return tuple(inverse.tolist())


@dataclass(frozen=True)
class Embedding:
    """A partial map from pattern positions to text positions.

    Stored as ``(pattern_pos, text_pos)`` pairs sorted by pattern position.
    """

    pairs: tuple[tuple[int, int], ...] = ()

    def __post_init__(self) -> None:
        pairs = tuple(sorted((int(a), int(b)) for a, b in self.pairs))
        seen = set()
        for a, _ in pairs:
            if a in seen:
                raise ValueError(f"pattern position {a} assigned twice")
            seen.add(a)
        object.__setattr__(self, "pairs", pairs)

    @classmethod
    def from_mapping(cls, mapping: Mapping[int, int]) -> Embedding:
        return cls(tuple(mapping.items()))

    @classmethod
    def from_images(cls, images: Sequence[int]) -> Embedding:
        """Total embedding where pattern position ``i`` maps to ``images[i - 1]``."""
        return cls(tuple(enumerate(images, 1)))

    @classmethod
    def from_value_map(
        cls, pattern: Permutation, text: Permutation, mapping: Mapping[int, int]
    ) -> Embedding:
        return cls(
            tuple((pattern.position(a), text.position(b)) for a, b in mapping.items())
        )

    @property
    def domain(self) -> tuple[int, ...]:
        return tuple(a for a, _ in self.pairs)

    def as_dict(self) -> dict[int, int]:
        return dict(self.pairs)

    def images(self) -> tuple[int, ...]:
        return tuple(b for _, b in self.pairs)

    def value_map(self, pattern: Permutation, text: Permutation) -> dict[int, int]:
        """Render as pattern value -> text value, in pattern position order."""
        return {pattern.value(a): text.value(b) for a, b in self.pairs}

    def is_total(self, k: int) -> bool:
        return self.domain == tuple(range(1, k + 1))

    def __len__(self) -> int:
        return len(self.pairs)

    def __getitem__(self, pos: int) -> int:
        for a, b in self.pairs:
            if a == pos:
                return b
        raise KeyError(pos)


def parse_permutation(text: str) -> Permutation:
    """Parse one-line notation.

    Integers may be separated by whitespace and/or commas.  A bare digit
    string such as ``"31254"`` is read one digit per value; this only makes
    sense for sizes up to 9.
    """
    stripped = text.strip()
    if not stripped:
        return Permutation(())
    tokens = [t for t in _SEPARATORS.split(stripped) if t]
    if len(tokens) == 1 and len(tokens[0]) > 1 and tokens[0].isdigit():
        digits = tokens[0]
        if len(digits) > 9 or "0" in digits:
            raise ValueError(f"cannot read {digits!r} as single-digit values")
        tokens = list(digits)
    values = []
    for tok in tokens:
        try:
            values.append(int(tok))
        except ValueError:
            raise ValueError(f"non-integer token {tok!r}") from None
    return Permutation(tuple(values))


def format_permutation(p: Permutation) -> str:
    return " ".join(map(str, p.values))


def neighbor(p: Permutation, x: Optional[int], direction: Direction) -> Optional[int]:
    """Immediate neighbor of the element at position ``x``.

    Left/right step by position, up/down step by value.
    """
    if x is None:
        return None
    if direction is Direction.LEFT:
        return x - 1 if x > 1 else None
    if direction is Direction.RIGHT:
        return x + 1 if x < p.n else None
    v = p.value(x)
    if direction is Direction.UP:
        return p.position(v + 1) if v < p.n else None
    return p.position(v - 1) if v > 1 else None


def direct_sum(parts: Iterable[Permutation]) -> Permutation:
    """Place each part above and to the right of the preceding ones."""
    out: list[int] = []
    for part in parts:
        shift = len(out)
        out.extend(v + shift for v in part.values)
    return Permutation(tuple(out))


def normalize_subsequence(p: Permutation, positions: Sequence[int]) -> Permutation:
    """Pattern formed by the points at ``positions`` (strictly increasing)."""
    n = p.n
    if len(positions) >= _VECTOR_THRESHOLD:
        pos = np.asarray(positions, dtype=np.int64)
        if np.any(pos[1:] <= pos[:-1]) or pos[0] < 1:
            raise ValueError("positions must be strictly increasing")
        if pos[-1] > n:
            raise ValueError(f"position {int(pos[-1])} outside 1..{n}")
        picked_arr = np.asarray(p.values, dtype=np.int64)[pos - 1]
        ranks = np.empty(len(pos), dtype=np.int64)
        ranks[np.argsort(picked_arr, kind="stable")] = np.arange(1, len(pos) + 1)
        return Permutation(tuple(ranks.tolist()))
    prev = 0
    for pos in positions:
        if pos <= prev:
            raise ValueError("positions must be strictly increasing")
        if pos > n:
            raise ValueError(f"position {pos} outside 1..{n}")
        prev = pos
    picked = [p.values[pos - 1] for pos in positions]
    rank = {v: r for r, v in enumerate(sorted(picked), 1)}
    return Permutation(tuple(rank[v] for v in picked))


def verify_embedding(pattern: Permutation, text: Permutation, e: Embedding) -> bool:
    """Check ``e`` using only left and down neighbors of each pattern element.

    This is equivalent to checking every pair: relative order propagates
    along the chains of immediate neighbors.
    """
    k = pattern.n
    if not e.is_total(k):
        raise ValueError("embedding must be total on the pattern")
    img = (0,) + e.images()
    for b in img[1:]:
        if not 1 <= b <= text.n:
            raise ValueError(f"image position {b} outside 1..{text.n}")
    tv = text.values
    for x in range(1, k + 1):
        if x > 1 and img[x] <= img[x - 1]:
            return False
        v = pattern.values[x - 1]
        if v > 1:
            below = pattern.inverse[v - 2]
            if tv[img[x] - 1] <= tv[img[below] - 1]:
                return False
    return True
