"""Non-linear skill buckets.

Bucket widths follow an inverted normal profile: each bucket starts at the
minimum width and receives a share of the remaining range proportional to
how far the normal density at its position falls below the peak. Buckets
are therefore narrowest (exactly ``w_min``) at the center of the rating
range and widest at the extremes, concentrating resolution where players
cluster.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass

from fairmatch.model import ConfigError, Lobby, RatingConfig

_PHI_MAX = 1.0 / math.sqrt(2.0 * math.pi)


def _standard_normal_pdf(z: float) -> float:
    return _PHI_MAX * math.exp(-0.5 * z * z)


@dataclass(frozen=True)
class BucketScheme:
    """n_bucket contiguous buckets covering [x_lcap, x_ucap].

    boundaries has n_bucket + 1 strictly increasing entries starting at
    x_lcap and ending at x_ucap; widths are the consecutive differences.
    """

    boundaries: tuple[float, ...]
    widths: tuple[float, ...]

    def __post_init__(self) -> None:
        if len(self.boundaries) != len(self.widths) + 1:
            raise ValueError("boundaries must have exactly one more entry than widths")
        if any(b1 <= b0 for b0, b1 in zip(self.boundaries, self.boundaries[1:])):
            raise ValueError("boundaries must be strictly increasing")

    @property
    def n_bucket(self) -> int:
        return len(self.widths)


def build_bucket_scheme(config: RatingConfig) -> BucketScheme:
    """Build the bucket scheme for a config.

    Bucket positions are proxied by uniform points z in (-3, 3) (the
    centers of an equal-width partition mapped onto a 3-sigma span), the
    width deficit of bucket i is ``phi_max - phi(z_i)``, and the range left
    over after reserving ``w_min`` per bucket is distributed proportionally
    to the deficits. The deficit at z = 0 is zero, so for odd bucket counts
    the central bucket gets exactly ``w_min``.
    """
    n = config.n_bucket
    r_total = config.rank_range
    if n == 1:
        return BucketScheme(boundaries=(config.x_lcap, config.x_ucap), widths=(r_total,))

    distributable = r_total - n * config.w_min
    if distributable < 0:
        raise ConfigError(
            f"infeasible bucket layout: n_bucket*w_min = {n * config.w_min} exceeds the rank range {r_total}"
        )
    deficits = []
    for i in range(n):
        z = 6.0 * ((i + 0.5) / n - 0.5)
        deficits.append(_PHI_MAX - _standard_normal_pdf(z))
    scale = distributable / math.fsum(deficits)
    widths = [config.w_min + d * scale for d in deficits]

    # Prefix sums via fsum keep each boundary correctly rounded, so the
    # symmetric width profile survives to within a few ulps.
    boundaries = [config.x_lcap]
    for i in range(1, n):
        boundaries.append(config.x_lcap + math.fsum(widths[:i]))
    boundaries.append(config.x_ucap)
    final_widths = tuple(b1 - b0 for b0, b1 in zip(boundaries, boundaries[1:]))
    return BucketScheme(boundaries=tuple(boundaries), widths=final_widths)


def rank_to_bucket(rank: float, scheme: BucketScheme) -> int:
    """Map a capped rank to its bucket index.

    Buckets are left-closed/right-open; the last bucket is closed above so
    the upper cap maps to index n_bucket - 1.
    """
    idx = bisect_right(scheme.boundaries, rank) - 1
    if idx < 0:
        return 0
    if idx >= scheme.n_bucket:
        return scheme.n_bucket - 1
    return idx


def lobby_to_sorted_indices(lobby: Lobby, scheme: BucketScheme) -> tuple[int, ...]:
    """Bucket every rank in the lobby and return the indices sorted ascending."""
    return tuple(sorted(rank_to_bucket(r, scheme) for r in lobby.ranks))
