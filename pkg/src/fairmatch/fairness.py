"""Stage two: the fairness score between two equal-size lobbies.

The score is the 1D earth-mover (Kantorovich) distance between the two
lobbies' bucket-index multisets, which for equal-size 1D samples reduces to
the sum of absolute differences of the sorted elements. Lower is fairer;
zero means the index multisets coincide.
"""

from __future__ import annotations

from itertools import permutations
from typing import Sequence

from fairmatch.bucketing import BucketScheme, lobby_to_sorted_indices
from fairmatch.model import Lobby

ORACLE_MAX_LEN = 8


class SizeMismatchError(ValueError):
    """Raised when two index lists (or lobbies) cannot be compared because
    their sizes differ or are zero."""


def sanction_score(u: Sequence[int], v: Sequence[int]) -> int:
    """Sum of absolute differences of the sorted elements of u and v.

    Inputs are not mutated. Raises SizeMismatchError for empty or
    unequal-length inputs.
    """
    if len(u) != len(v):
        raise SizeMismatchError(f"cannot compare lists of size {len(u)} and {len(v)}")
    if not u:
        raise SizeMismatchError("cannot compare empty lists")
    return sum(abs(a - b) for a, b in zip(sorted(u), sorted(v)))


def sanction_score_lobbies(a: Lobby, b: Lobby, scheme: BucketScheme) -> int:
    """Fairness score between two lobbies under a bucket scheme.

    Unlike the stage-one range overlap this considers every player,
    outliers included. Raises SizeMismatchError naming both lobby ids when
    the team sizes differ.
    """
    if a.size != b.size:
        raise SizeMismatchError(
            f"lobby {a.id!r} has {a.size} players but lobby {b.id!r} has {b.size}"
        )
    return sanction_score(lobby_to_sorted_indices(a, scheme), lobby_to_sorted_indices(b, scheme))


def assignment_oracle(u: Sequence[int], v: Sequence[int]) -> int:
    """Exhaustive optimal-assignment cost between u and v.

    Minimum over all pairings of one list against the other of the summed
    absolute differences; equals the 1D earth-mover distance. Factorial
    cost, so inputs are capped at ORACLE_MAX_LEN elements. Test oracle, not
    a production path.
    """
    if len(u) != len(v):
        raise SizeMismatchError(f"cannot compare lists of size {len(u)} and {len(v)}")
    if not u:
        raise SizeMismatchError("cannot compare empty lists")
    if len(u) > ORACLE_MAX_LEN:
        raise ValueError(f"oracle input length {len(u)} exceeds bound {ORACLE_MAX_LEN}")
    return min(sum(abs(a - b) for a, b in zip(u, perm)) for perm in permutations(v))
