"""Stage one of the matching pipeline: per-lobby non-outlier ranges and the
continuous range-overlap similarity used to reject bad pairings cheaply."""

from __future__ import annotations

import math

from fairmatch.model import Interval, Lobby, RatingConfig


def non_outlier_range(lobby: Lobby, config: RatingConfig, *, clamp_to_caps: bool = True) -> Interval:
    """Compute the lobby's non-outlier rating range, mean +/- widened sigma.

    The population standard deviation is floored at
    ``(x_ucap - x_lcap) / n_bucket`` so the range never collapses for
    uniform-skill lobbies; with ``clamp_to_caps`` the endpoints are cut to
    the rating caps (the unclamped range always has width exactly twice
    the floored sigma).
    """
    n = len(lobby.ranks)
    mu = math.fsum(lobby.ranks) / n
    var = math.fsum((r - mu) ** 2 for r in lobby.ranks) / n
    sigma = math.sqrt(var)
    sigma_prime = max(sigma, config.rank_range / config.n_bucket)
    lower = mu - sigma_prime
    upper = mu + sigma_prime
    if clamp_to_caps:
        lower = max(lower, config.x_lcap)
        upper = min(upper, config.x_ucap)
    return Interval(lower=lower, upper=upper)


def ruzicka_overlap(a: Interval, b: Interval) -> float:
    """Continuous Jaccard similarity of two closed intervals.

    Intersection length over union length, in [0, 1]: 1 exactly for
    identical intervals, 0 for intervals with disjoint interiors. Two
    coincident zero-width intervals count as identical.
    """
    inter = min(a.upper, b.upper) - max(a.lower, b.lower)
    if inter < 0.0:
        inter = 0.0
    union = a.length + b.length - inter
    if union <= 0.0:
        return 1.0 if a.lower == b.lower else 0.0
    return inter / union


def passes_prefilter(a: Lobby, b: Lobby, config: RatingConfig) -> bool:
    """True when the two lobbies' range overlap reaches theta_r."""
    sr = ruzicka_overlap(non_outlier_range(a, config), non_outlier_range(b, config))
    return sr >= config.theta_r
