import dataclasses
import json

import pytest

from fairmatch.bucketing import build_bucket_scheme
from fairmatch.model import RatingConfig


@pytest.fixture
def cfg():
    """Stock ladder: caps [0, 3000], 20 buckets, 150-point floor width."""
    return RatingConfig(x_lcap=0.0, x_ucap=3000.0, n_bucket=20, w_min=150.0,
                        theta_r=0.5, theta_s=6.0, lobby_size=5)


@pytest.fixture
def cfg3():
    """Tiny 3-bucket ladder whose widths (450, 100, 450) are hand-checkable."""
    return RatingConfig(x_lcap=0.0, x_ucap=1000.0, n_bucket=3, w_min=100.0,
                        theta_r=0.5, theta_s=4.0, lobby_size=3)


@pytest.fixture
def scheme(cfg):
    return build_bucket_scheme(cfg)


@pytest.fixture
def scheme3(cfg3):
    return build_bucket_scheme(cfg3)


@pytest.fixture
def write_config(tmp_path):
    """Write a RatingConfig (or raw dict) as a JSON config file, return its path."""

    def _write(config, name="config.json"):
        payload = dataclasses.asdict(config) if dataclasses.is_dataclass(config) else config
        path = tmp_path / name
        path.write_text(json.dumps(payload))
        return path

    return _write


@pytest.fixture
def write_lobbies(tmp_path):
    """Write lobby dicts as a newline-delimited lobby file, return its path."""

    def _write(records, name="lobbies.jsonl"):
        path = tmp_path / name
        path.write_text("".join(json.dumps(r) + "\n" for r in records))
        return path

    return _write
