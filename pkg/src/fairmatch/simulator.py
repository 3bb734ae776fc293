"""Monte-Carlo fairness-score experiment.

Draws random lobby pairings from a clamped normal rating generator, scores
every pair, and reports the score distribution as an integer histogram
(scores are integer sums of bucket-index differences, so bins of width 1
need no binning policy).

Determinism: the pairing index range is split into fixed-size partitions
(PARTITION_SIZE, independent of worker count) and partition k draws from
``Philox(SeedSequence(seed, spawn_key=(k,)))``. Partial histograms merge
by integer addition, so the result depends only on (params), never on how
many workers ran the partitions.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from fairmatch.bucketing import BucketScheme, build_bucket_scheme
from fairmatch.model import Lobby, RatingConfig

PARTITION_SIZE = 65536


@dataclass(frozen=True)
class SimParams:
    """Generator and run parameters for one simulation.

    gen_mu / gen_sigma default to the rating-range midpoint and a sixth of
    the range, so nearly all draws land inside the caps and cluster around
    the middle. n_pairings and seed are pinned explicitly for reruns.
    """

    config: RatingConfig
    n_pairings: int = 1_000_000
    seed: int = 0
    gen_mu: float | None = None
    gen_sigma: float | None = None

    def __post_init__(self):
        if self.gen_mu is None:
            object.__setattr__(self, "gen_mu", (self.config.x_lcap + self.config.x_ucap) / 2.0)
        if self.gen_sigma is None:
            object.__setattr__(self, "gen_sigma", self.config.rank_range / 6.0)
        if not isinstance(self.n_pairings, int) or self.n_pairings < 0:
            raise ValueError(f"n_pairings must be a nonnegative integer, got {self.n_pairings!r}")
        if not isinstance(self.seed, int) or not 0 <= self.seed < 2**64:
            raise ValueError(f"seed must be a 64-bit unsigned integer, got {self.seed!r}")
        if not math.isfinite(self.gen_mu):
            raise ValueError(f"gen_mu must be finite, got {self.gen_mu!r}")
        if not (math.isfinite(self.gen_sigma) and self.gen_sigma >= 0.0):
            raise ValueError(f"gen_sigma must be finite and >= 0, got {self.gen_sigma!r}")


@dataclass(frozen=True)
class ScoreHistogram:
    """Score -> count map over one simulation run.

    Only nonzero counts are stored; summary statistics are derived lazily
    and are None when undefined (empty histogram, or zero variance for
    skewness).
    """

    counts: Mapping[int, int]

    def __post_init__(self):
        cleaned = {}
        for score in sorted(self.counts):
            count = self.counts[score]
            if not isinstance(score, int) or score < 0:
                raise ValueError(f"scores must be nonnegative integers, got {score!r}")
            if not isinstance(count, int) or count < 0:
                raise ValueError(f"counts must be nonnegative integers, got {count!r}")
            if count:
                cleaned[score] = count
        object.__setattr__(self, "counts", cleaned)

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    @property
    def mean(self) -> float | None:
        return summarize(self).mean

    @property
    def median(self) -> int | None:
        return summarize(self).median

    @property
    def mode_score(self) -> int | None:
        return summarize(self).mode_score

    @property
    def skewness(self) -> float | None:
        return summarize(self).skewness


@dataclass(frozen=True)
class Summary:
    total: int
    mean: float | None
    median: int | None
    mode_score: int | None
    skewness: float | None


def _partition_rng(seed: int, k: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(entropy=seed, spawn_key=(k,))))


def generate_lobby(rng: np.random.Generator, params: SimParams,
                   lobby_id: str = "sim", enqueued_at: int = 0) -> Lobby:
    """Draw one lobby: lobby_size independent N(gen_mu, gen_sigma) ratings,
    clamped to the rating caps. Advances rng by exactly lobby_size draws."""
    ranks = rng.normal(params.gen_mu, params.gen_sigma, size=params.config.lobby_size)
    np.clip(ranks, params.config.x_lcap, params.config.x_ucap, out=ranks)
    return Lobby(lobby_id, tuple(float(r) for r in ranks), enqueued_at)


def _score_partition(params: SimParams, scheme: BucketScheme, k: int, count: int,
                     max_score: int) -> np.ndarray:
    cfg = params.config
    rng = _partition_rng(params.seed, k)
    # One bulk draw per partition; for this bit generator a single
    # normal(size=m) call yields the same stream as m sequential draws, so
    # this matches generate_lobby called 2*count times on the same rng.
    ranks = rng.normal(params.gen_mu, params.gen_sigma, size=(count, 2, cfg.lobby_size))
    np.clip(ranks, cfg.x_lcap, cfg.x_ucap, out=ranks)
    boundaries = np.asarray(scheme.boundaries, dtype=np.float64)
    idx = np.searchsorted(boundaries, ranks, side="right") - 1
    np.clip(idx, 0, scheme.n_bucket - 1, out=idx)
    idx.sort(axis=-1)
    scores = np.abs(idx[:, 0, :] - idx[:, 1, :]).sum(axis=1)
    return np.bincount(scores, minlength=max_score + 1)


def run_simulation(params: SimParams, *, workers: int = 1) -> ScoreHistogram:
    """Score n_pairings random lobby pairs and histogram the results.

    Each pairing draws two fresh lobbies from the generator and records
    their fairness score. workers only controls how many fixed-size
    partitions run concurrently; the histogram is identical for any value.
    """
    scheme = build_bucket_scheme(params.config)
    n = params.n_pairings
    if n == 0:
        return ScoreHistogram({})
    max_score = params.config.lobby_size * (scheme.n_bucket - 1)
    n_parts = (n + PARTITION_SIZE - 1) // PARTITION_SIZE
    sizes = [min(PARTITION_SIZE, n - k * PARTITION_SIZE) for k in range(n_parts)]

    def part(k: int) -> np.ndarray:
        return _score_partition(params, scheme, k, sizes[k], max_score)

    if workers <= 1 or n_parts == 1:
        partials = map(part, range(n_parts))
        merged = np.zeros(max_score + 1, dtype=np.int64)
        for p in partials:
            merged += p
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            merged = np.zeros(max_score + 1, dtype=np.int64)
            for p in pool.map(part, range(n_parts)):
                merged += p
    counts = {int(s): int(c) for s, c in enumerate(merged) if c}
    return ScoreHistogram(counts)


def summarize(histogram: ScoreHistogram | Mapping[int, int]) -> Summary:
    """Weighted summary of a score histogram.

    median = smallest score whose cumulative count reaches ceil(total/2);
    mode = smallest score attaining the maximum count; skewness = Pearson
    moment coefficient g1 = m3 / m2^(3/2). Statistics whose preconditions
    fail (empty histogram; zero variance or total < 2 for skewness) come
    back as None rather than a raise, so an all-identical or empty run
    still summarizes.
    """
    counts = histogram.counts if isinstance(histogram, ScoreHistogram) else histogram
    items = sorted((int(s), int(c)) for s, c in counts.items() if c)
    total = sum(c for _, c in items)
    if total == 0:
        return Summary(0, None, None, None, None)
    mean = math.fsum(s * c for s, c in items) / total
    half = math.ceil(total / 2)
    cumulative = 0
    median = items[-1][0]
    for s, c in items:
        cumulative += c
        if cumulative >= half:
            median = s
            break
    mode_score = max(items, key=lambda item: (item[1], -item[0]))[0]
    skewness = None
    if total >= 2:
        m2 = math.fsum(c * (s - mean) ** 2 for s, c in items) / total
        m3 = math.fsum(c * (s - mean) ** 3 for s, c in items) / total
        if m2 > 0.0:
            skewness = m3 / m2**1.5
    return Summary(total, mean, median, mode_score, skewness)


def _fmt_stat(value: float | int | None) -> str:
    if value is None:
        return "nan"
    if isinstance(value, int):
        return str(value)
    return repr(value)


def histogram_csv(histogram: ScoreHistogram) -> str:
    """Render a histogram as CSV: `score,count` rows ascending by score
    (nonzero counts only), then the summary as `# key=value` comments."""
    s = summarize(histogram)
    lines = ["score,count"]
    lines.extend(f"{score},{count}" for score, count in sorted(histogram.counts.items()))
    lines.append(f"# total={s.total}")
    lines.append(f"# mean={_fmt_stat(s.mean)}")
    lines.append(f"# median={_fmt_stat(s.median)}")
    lines.append(f"# mode={_fmt_stat(s.mode_score)}")
    lines.append(f"# skewness={_fmt_stat(s.skewness)}")
    return "\n".join(lines) + "\n"
