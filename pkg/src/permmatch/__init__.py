"""O(kn) pattern matching for 321-avoiding and skew-merged permutations."""

from .classify import (
    BlockDecomposition,
    CenterDirection,
    Corner,
    Label321,
    Labels321,
    RigidBlock,
    Singleton,
    SkewDirection,
    SkewLabels,
    block_decomposition,
    label_rigid_321,
    label_skew,
    skew_step,
    typed_next_321,
    typed_seek_skew,
)
from .match321 import (
    ClassViolation,
    Frontier,
    MatchResult,
    match_321,
    min_rigid_embedding,
    problem_bound_321,
)
from .matchskew import (
    match_skew_merged,
    min_noncentral_embedding,
    monotone_capacity,
    problem_bound_skew,
    remaining_region,
)
from .perm import (
    Direction,
    Embedding,
    Permutation,
    direct_sum,
    format_permutation,
    neighbor,
    normalize_subsequence,
    parse_permutation,
    verify_embedding,
)

__version__ = "0.1.0"
