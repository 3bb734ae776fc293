"""Request/response models for the HTTP service.

These mirror the domain types field-for-field; all semantic validation
(cap ordering, bucket feasibility, threshold ranges) stays in the domain
constructors so the service and library can never disagree.
"""

from __future__ import annotations

from typing import Literal

from pydantic import BaseModel, Field

from fairmatch.model import Interval, Lobby, RatingConfig


class ConfigModel(BaseModel):
    x_lcap: float
    x_ucap: float
    n_bucket: int
    w_min: float
    theta_r: float
    theta_s: float
    lobby_size: int

    def to_domain(self) -> RatingConfig:
        return RatingConfig(
            x_lcap=self.x_lcap,
            x_ucap=self.x_ucap,
            n_bucket=self.n_bucket,
            w_min=self.w_min,
            theta_r=self.theta_r,
            theta_s=self.theta_s,
            lobby_size=self.lobby_size,
        )


class LobbyModel(BaseModel):
    id: str
    ranks: list[float] = Field(min_length=1)
    enqueued_at: int = 0

    def to_domain(self) -> Lobby:
        return Lobby(self.id, tuple(self.ranks), self.enqueued_at)

    @classmethod
    def from_domain(cls, lobby: Lobby) -> "LobbyModel":
        return cls(id=lobby.id, ranks=list(lobby.ranks), enqueued_at=lobby.enqueued_at)


class IntervalModel(BaseModel):
    lower: float
    upper: float

    @classmethod
    def from_domain(cls, interval: Interval) -> "IntervalModel":
        return cls(lower=interval.lower, upper=interval.upper)


class BucketRow(BaseModel):
    index: int
    lower: float
    upper: float
    width: float


class BucketsRequest(BaseModel):
    config: ConfigModel


class BucketsResponse(BaseModel):
    buckets: list[BucketRow]


class ScoreRequest(BaseModel):
    config: ConfigModel
    lobbies_a: list[LobbyModel]
    lobbies_b: list[LobbyModel]


class PairScore(BaseModel):
    id_a: str
    id_b: str
    range_a: IntervalModel
    range_b: IntervalModel
    sr: float
    prefilter_pass: bool
    sanction: int


class ScoreResponse(BaseModel):
    pairs: list[PairScore]


class MatchRequest(BaseModel):
    config: ConfigModel
    strategy: Literal["threshold", "argmin"] = "threshold"
    lobbies: list[LobbyModel]


class MatchRow(BaseModel):
    lobby_a: str
    lobby_b: str
    ruzicka: float
    sanction: int


class MatchResponse(BaseModel):
    matches: list[MatchRow]
    unmatched: list[str]
    prefilter_evals: int
    sanction_evals: int


class SimulateRequest(BaseModel):
    config: ConfigModel
    pairings: int = Field(default=1_000_000, ge=0)
    seed: int = Field(default=0, ge=0, lt=2**64)
    gen_mu: float | None = None
    gen_sigma: float | None = Field(default=None, ge=0)
    workers: int = Field(default=1, ge=1, le=64)


class SummaryModel(BaseModel):
    total: int
    mean: float | None
    median: int | None
    mode: int | None
    skewness: float | None


class SimulateResponse(BaseModel):
    counts: dict[int, int]
    summary: SummaryModel


class CreateQueueRequest(BaseModel):
    config: ConfigModel
    strategy: Literal["threshold", "argmin"] = "threshold"


class QueueState(BaseModel):
    queue_id: str
    strategy: str
    waiting: list[str]
    prefilter_evals: int
    sanction_evals: int


class EnqueueRequest(BaseModel):
    lobby: LobbyModel


class FindMatchRequest(BaseModel):
    candidate: LobbyModel


class FindMatchResponse(BaseModel):
    match: MatchRow | None
