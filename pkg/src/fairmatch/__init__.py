"""Two-stage fair matchmaking: a cheap range-overlap prefilter in front of a
bucketed earth-mover fairness score, plus a FIFO match queue and a Monte-Carlo
score-distribution simulator."""

from fairmatch.model import (
    ConfigError,
    Interval,
    Lobby,
    LobbyFormatError,
    RatingConfig,
    clamp_lobby,
    clamp_rating,
    load_config,
    parse_lobby_file,
    serialize_lobbies,
)
from fairmatch.prefilter import non_outlier_range, passes_prefilter, ruzicka_overlap
from fairmatch.bucketing import BucketScheme, build_bucket_scheme, lobby_to_sorted_indices, rank_to_bucket
from fairmatch.fairness import SizeMismatchError, assignment_oracle, sanction_score, sanction_score_lobbies
from fairmatch.matchmaker import (
    DuplicateLobbyError,
    MatchQueue,
    MatchResult,
    QueueError,
    WrongLobbySizeError,
)
from fairmatch.simulator import ScoreHistogram, SimParams, generate_lobby, histogram_csv, run_simulation, summarize

__version__ = "0.1.0"

__all__ = [
    "BucketScheme",
    "ConfigError",
    "DuplicateLobbyError",
    "Interval",
    "Lobby",
    "LobbyFormatError",
    "MatchQueue",
    "MatchResult",
    "QueueError",
    "RatingConfig",
    "ScoreHistogram",
    "SimParams",
    "SizeMismatchError",
    "WrongLobbySizeError",
    "assignment_oracle",
    "build_bucket_scheme",
    "clamp_lobby",
    "clamp_rating",
    "generate_lobby",
    "histogram_csv",
    "load_config",
    "lobby_to_sorted_indices",
    "non_outlier_range",
    "parse_lobby_file",
    "passes_prefilter",
    "rank_to_bucket",
    "run_simulation",
    "ruzicka_overlap",
    "sanction_score",
    "sanction_score_lobbies",
    "serialize_lobbies",
    "summarize",
]
