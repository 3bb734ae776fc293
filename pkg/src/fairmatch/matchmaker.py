"""FIFO lobby queue running the two-stage matching pipeline.

Each entry caches its non-outlier range and sorted bucket indices at
enqueue time, so a stage-one check against a waiting lobby costs a handful
of arithmetic ops and a stage-two check a single sorted-difference sum.
The queue counts both kinds of evaluation so the load reduction from
stage gating is observable.

The queue is a single logical writer: enqueue and matching calls must be
externally serialized (the HTTP service holds one lock per queue).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Literal

import numpy as np

from fairmatch.bucketing import BucketScheme, build_bucket_scheme, lobby_to_sorted_indices
from fairmatch.model import Interval, Lobby, RatingConfig
from fairmatch.prefilter import non_outlier_range, ruzicka_overlap

Strategy = Literal["threshold", "argmin"]

STRATEGIES: tuple[Strategy, ...] = ("threshold", "argmin")


class QueueError(ValueError):
    """Base class for queue precondition violations."""


class DuplicateLobbyError(QueueError):
    """A lobby with this id is already waiting."""


class WrongLobbySizeError(QueueError):
    """The lobby's player count does not match the configured team size."""


@dataclass(frozen=True)
class MatchResult:
    """A paired match: the two lobby ids plus the scores that admitted it."""

    lobby_a: str
    lobby_b: str
    ruzicka: float
    sanction: int


@dataclass(frozen=True)
class _Entry:
    lobby: Lobby
    lower: float
    upper: float
    enqueued_at: int
    sorted_indices: np.ndarray


class MatchQueue:
    """FIFO queue of waiting lobbies with cached stage-one/stage-two data.

    entries stay ordered by (enqueued_at, insertion); ids are unique.
    ``prefilter_evals`` / ``sanction_evals`` count stage-one and stage-two
    evaluations performed by the find_match operations.
    """

    def __init__(self, config: RatingConfig, strategy: Strategy = "threshold",
                 scheme: BucketScheme | None = None):
        if strategy not in STRATEGIES:
            raise ValueError(f"unknown strategy {strategy!r}")
        self.config = config
        self.strategy: Strategy = strategy
        self.scheme = scheme if scheme is not None else build_bucket_scheme(config)
        self.prefilter_evals = 0
        self.sanction_evals = 0
        self._lobbies: list[Lobby] = []
        self._ids: set[str] = set()
        cap = 16
        self._lo = np.empty(cap, dtype=np.float64)
        self._hi = np.empty(cap, dtype=np.float64)
        self._enq = np.empty(cap, dtype=np.int64)
        self._sidx = np.empty((cap, config.lobby_size), dtype=np.int64)
        self._n = 0

    def __len__(self) -> int:
        return self._n

    def __iter__(self) -> Iterator[Lobby]:
        return iter(self._lobbies)

    @property
    def waiting_ids(self) -> list[str]:
        return [lb.id for lb in self._lobbies]

    def cached_range(self, index: int) -> Interval:
        return Interval(float(self._lo[index]), float(self._hi[index]))

    def enqueue(self, lobby: Lobby) -> None:
        """Add a lobby, caching its range and sorted bucket indices.

        Rejects duplicate ids and wrong team sizes. Entries are kept
        ordered by (enqueued_at, insertion): an entry whose tick predates
        the tail is placed ahead of younger entries, so waiting time is
        honored even for late arrivals.
        """
        self._check_candidate(lobby)
        if lobby.id in self._ids:
            raise DuplicateLobbyError(f"lobby {lobby.id!r} is already queued")
        pos = int(np.searchsorted(self._enq[: self._n], lobby.enqueued_at, side="right"))
        self._insert(pos, self._make_entry(lobby))

    def find_match_threshold(self, candidate: Lobby) -> MatchResult | None:
        """First-acceptable matching: scan in FIFO order and take the first
        waiting lobby whose fairness score is within theta_s.

        Stage one runs per scanned entry; stage two only on entries that
        pass it. The matched entry is removed; on a miss the queue is
        unchanged apart from the counters.
        """
        self._check_candidate(candidate)
        cand = self._make_entry(candidate)
        c_len = cand.upper - cand.lower
        lo = self._lo[: self._n].tolist()
        hi = self._hi[: self._n].tolist()
        for i in range(self._n):
            self.prefilter_evals += 1
            inter = min(hi[i], cand.upper) - max(lo[i], cand.lower)
            if inter < 0.0:
                inter = 0.0
            union = (hi[i] - lo[i]) + c_len - inter
            if union <= 0.0:
                sr = 1.0 if lo[i] == cand.lower else 0.0
            else:
                sr = inter / union
            if sr < self.config.theta_r:
                continue
            self.sanction_evals += 1
            score = int(np.abs(self._sidx[i] - cand.sorted_indices).sum())
            if score <= self.config.theta_s:
                entry = self._remove(i)
                return MatchResult(candidate.id, entry.lobby.id, sr, score)
        return None

    def find_match_argmin(self, candidate: Lobby) -> MatchResult | None:
        """Best-available matching: run stage one against every waiting
        lobby, score every passer, and take the minimum fairness score.

        Ties go to the earliest enqueued_at, then insertion order. Returns
        None when nothing passes stage one.
        """
        self._check_candidate(candidate)
        if self._n == 0:
            return None
        cand = self._make_entry(candidate)
        n = self._n
        lo = self._lo[:n]
        hi = self._hi[:n]
        inter = np.minimum(hi, cand.upper) - np.maximum(lo, cand.lower)
        np.maximum(inter, 0.0, out=inter)
        union = (hi - lo) + (cand.upper - cand.lower) - inter
        sr = np.where(union > 0.0, inter / np.where(union > 0.0, union, 1.0),
                      np.where(lo == cand.lower, 1.0, 0.0))
        self.prefilter_evals += n
        passers = np.flatnonzero(sr >= self.config.theta_r)
        self.sanction_evals += len(passers)
        if len(passers) == 0:
            return None
        scores = np.abs(self._sidx[passers] - cand.sorted_indices).sum(axis=1)
        # Rows are already in (enqueued_at, insertion) order, so the first
        # occurrence of the minimum realizes the tie-break.
        best = passers[int(np.argmin(scores))]
        result = MatchResult(candidate.id, self._lobbies[best].id, float(sr[best]),
                             int(scores.min()))
        self._remove(int(best))
        return result

    def find_match(self, candidate: Lobby) -> MatchResult | None:
        """Run the queue's configured strategy for this candidate."""
        if self.strategy == "argmin":
            return self.find_match_argmin(candidate)
        return self.find_match_threshold(candidate)

    def match_pass(self) -> list[MatchResult]:
        """One batch pass: repeatedly pop the head as candidate and match it
        against the remaining entries with the configured strategy.

        Matched pairs leave the queue; unmatched heads are set aside and
        re-appended afterwards in their original relative order, so ids
        are conserved and the pass is deterministic.
        """
        results: list[MatchResult] = []
        set_aside: list[_Entry] = []
        while self._n:
            head = self._remove(0)
            result = self._find_for_entry(head)
            if result is None:
                set_aside.append(head)
            else:
                results.append(result)
        for entry in set_aside:
            self._append(entry)
        return results

    # -- internals ---------------------------------------------------------

    def _check_candidate(self, lobby: Lobby) -> None:
        if lobby.size != self.config.lobby_size:
            raise WrongLobbySizeError(
                f"lobby {lobby.id!r} has {lobby.size} players, expected {self.config.lobby_size}"
            )

    def _make_entry(self, lobby: Lobby) -> _Entry:
        rng = non_outlier_range(lobby, self.config)
        sidx = np.asarray(lobby_to_sorted_indices(lobby, self.scheme), dtype=np.int64)
        return _Entry(lobby, rng.lower, rng.upper, lobby.enqueued_at, sidx)

    def _find_for_entry(self, entry: _Entry) -> MatchResult | None:
        # match_pass reuses the already-cached entry data via its lobby;
        # re-deriving the cache is pure and cheap relative to the scan.
        if self.strategy == "argmin":
            return self.find_match_argmin(entry.lobby)
        return self.find_match_threshold(entry.lobby)

    def _append(self, entry: _Entry) -> None:
        self._insert(self._n, entry)

    def _insert(self, i: int, entry: _Entry) -> None:
        if self._n == len(self._lo):
            new_cap = len(self._lo) * 2
            self._lo = np.resize(self._lo, new_cap)
            self._hi = np.resize(self._hi, new_cap)
            self._enq = np.resize(self._enq, new_cap)
            self._sidx = np.resize(self._sidx, (new_cap, self.config.lobby_size))
        n = self._n
        if i < n:
            self._lo[i + 1 : n + 1] = self._lo[i:n]
            self._hi[i + 1 : n + 1] = self._hi[i:n]
            self._enq[i + 1 : n + 1] = self._enq[i:n]
            self._sidx[i + 1 : n + 1] = self._sidx[i:n]
        self._lo[i] = entry.lower
        self._hi[i] = entry.upper
        self._enq[i] = entry.enqueued_at
        self._sidx[i] = entry.sorted_indices
        self._lobbies.insert(i, entry.lobby)
        self._ids.add(entry.lobby.id)
        self._n += 1

    def _remove(self, i: int) -> _Entry:
        entry = _Entry(
            lobby=self._lobbies[i],
            lower=float(self._lo[i]),
            upper=float(self._hi[i]),
            enqueued_at=int(self._enq[i]),
            sorted_indices=self._sidx[i].copy(),
        )
        n = self._n
        self._lo[i : n - 1] = self._lo[i + 1 : n]
        self._hi[i : n - 1] = self._hi[i + 1 : n]
        self._enq[i : n - 1] = self._enq[i + 1 : n]
        self._sidx[i : n - 1] = self._sidx[i + 1 : n]
        del self._lobbies[i]
        self._ids.discard(entry.lobby.id)
        self._n -= 1
        return entry


def pair_diagnostics(a: Lobby, b: Lobby, config: RatingConfig, scheme: BucketScheme):
    """Full two-stage readout for one pair: ranges, overlap, stage-one
    verdict, and the fairness score (computed regardless of the verdict)."""
    from fairmatch.fairness import sanction_score_lobbies

    range_a = non_outlier_range(a, config)
    range_b = non_outlier_range(b, config)
    sr = ruzicka_overlap(range_a, range_b)
    return range_a, range_b, sr, sr >= config.theta_r, sanction_score_lobbies(a, b, scheme)
