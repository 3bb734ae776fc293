"""Shared domain types, rating clamping, and flat-file (de)serialization.

Ratings are real-valued (ELO/Glicko-style systems produce fractional
ratings) and are clamped into ``[x_lcap, x_ucap]`` once, at ingress; all
downstream math assumes in-range ranks.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass


class ConfigError(ValueError):
    """Raised for configuration values that violate the config invariants."""


class LobbyFormatError(ValueError):
    """Raised for malformed lobby records; the message names the offending
    line or lobby id."""


@dataclass(frozen=True)
class RatingConfig:
    """Global parameter block: rating caps, bucket layout, and thresholds.

    theta_r is the minimum range-overlap similarity a pair must reach to
    enter stage two; theta_s is the maximum acceptable fairness score for
    the threshold matching strategy.
    """

    x_lcap: float
    x_ucap: float
    n_bucket: int
    w_min: float
    theta_r: float
    theta_s: float
    lobby_size: int

    def __post_init__(self) -> None:
        if not (self.x_lcap < self.x_ucap):
            raise ConfigError(f"x_lcap ({self.x_lcap}) must be < x_ucap ({self.x_ucap})")
        if self.n_bucket < 1:
            raise ConfigError(f"n_bucket must be >= 1, got {self.n_bucket}")
        if not (self.w_min > 0):
            raise ConfigError(f"w_min must be > 0, got {self.w_min}")
        if self.n_bucket * self.w_min > self.rank_range:
            raise ConfigError(
                f"infeasible bucket layout: n_bucket*w_min = {self.n_bucket * self.w_min} "
                f"exceeds the rank range {self.rank_range}"
            )
        if not (0.0 <= self.theta_r <= 1.0):
            raise ConfigError(f"theta_r must be in [0, 1], got {self.theta_r}")
        if self.theta_s < 0:
            raise ConfigError(f"theta_s must be >= 0, got {self.theta_s}")
        if self.lobby_size < 1:
            raise ConfigError(f"lobby_size must be >= 1, got {self.lobby_size}")

    @property
    def rank_range(self) -> float:
        return self.x_ucap - self.x_lcap


@dataclass(frozen=True)
class Interval:
    """Closed numeric range [lower, upper]."""

    lower: float
    upper: float

    def __post_init__(self) -> None:
        if self.lower > self.upper:
            raise ValueError(f"interval lower ({self.lower}) exceeds upper ({self.upper})")

    @property
    def length(self) -> float:
        return self.upper - self.lower


@dataclass(frozen=True)
class Lobby:
    """A pre-made team waiting for a match: ordered player ratings plus a
    caller-supplied monotonic enqueue tick."""

    id: str
    ranks: tuple[float, ...]
    enqueued_at: int = 0

    def __post_init__(self) -> None:
        if not self.ranks:
            raise ValueError(f"lobby {self.id!r} has no ranks")
        object.__setattr__(self, "ranks", tuple(float(r) for r in self.ranks))

    @property
    def size(self) -> int:
        return len(self.ranks)


def clamp_rating(rank: float, config: RatingConfig) -> float:
    """Clamp a rating into [x_lcap, x_ucap]. Total, idempotent, monotone."""
    return min(max(rank, config.x_lcap), config.x_ucap)


def clamp_lobby(lobby: Lobby, config: RatingConfig) -> Lobby:
    """Return a copy of the lobby with every rank clamped to the caps."""
    return Lobby(
        id=lobby.id,
        ranks=tuple(clamp_rating(r, config) for r in lobby.ranks),
        enqueued_at=lobby.enqueued_at,
    )


_CONFIG_FIELDS = ("x_lcap", "x_ucap", "n_bucket", "w_min", "theta_r", "theta_s", "lobby_size")


def load_config(data: bytes | str) -> RatingConfig:
    """Parse a JSON config object with the seven RatingConfig fields."""
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    try:
        raw = json.loads(data)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError("config must be a JSON object")
    missing = [f for f in _CONFIG_FIELDS if f not in raw]
    if missing:
        raise ConfigError(f"config is missing fields: {', '.join(missing)}")
    try:
        return RatingConfig(
            x_lcap=float(raw["x_lcap"]),
            x_ucap=float(raw["x_ucap"]),
            n_bucket=int(raw["n_bucket"]),
            w_min=float(raw["w_min"]),
            theta_r=float(raw["theta_r"]),
            theta_s=float(raw["theta_s"]),
            lobby_size=int(raw["lobby_size"]),
        )
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"config has a non-numeric field: {exc}") from exc


def parse_lobby_file(data: bytes | str, config: RatingConfig, *, enforce_size: bool = True) -> list[Lobby]:
    """Parse newline-delimited lobby records, clamping every rank to the caps.

    Each line is a JSON object with fields ``id`` (string), ``ranks``
    (array of numbers) and ``enqueued_at`` (integer). Blank lines are
    skipped. With ``enforce_size`` the rank count must equal
    ``config.lobby_size``; pair-scoring callers may relax this and let the
    score computation reject mismatched pairs instead.
    """
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    lobbies: list[Lobby] = []
    for lineno, line in enumerate(data.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            raw = json.loads(line)
        except json.JSONDecodeError as exc:
            raise LobbyFormatError(f"line {lineno}: invalid JSON: {exc}") from exc
        if not isinstance(raw, dict):
            raise LobbyFormatError(f"line {lineno}: expected a JSON object")
        try:
            lobby_id = str(raw["id"])
            ranks = raw["ranks"]
            enqueued_at = int(raw.get("enqueued_at", 0))
        except (KeyError, TypeError, ValueError) as exc:
            raise LobbyFormatError(f"line {lineno}: bad record: {exc}") from exc
        if not isinstance(ranks, list) or not ranks or not all(isinstance(r, (int, float)) for r in ranks):
            raise LobbyFormatError(f"line {lineno}: ranks must be a nonempty array of numbers")
        if enforce_size and len(ranks) != config.lobby_size:
            raise LobbyFormatError(
                f"line {lineno}: lobby {lobby_id!r} has {len(ranks)} ranks, expected {config.lobby_size}"
            )
        ranks_t = tuple(clamp_rating(float(r), config) for r in ranks)
        if any(math.isnan(r) for r in ranks_t):
            raise LobbyFormatError(f"line {lineno}: lobby {lobby_id!r} has a NaN rank")
        lobbies.append(Lobby(id=lobby_id, ranks=ranks_t, enqueued_at=enqueued_at))
    return lobbies


def serialize_lobbies(lobbies: list[Lobby]) -> str:
    """Render lobbies in the newline-delimited record format, one per line."""
    lines = [
        json.dumps({"id": lb.id, "ranks": list(lb.ranks), "enqueued_at": lb.enqueued_at})
        for lb in lobbies
    ]
    return "\n".join(lines) + ("\n" if lines else "")
