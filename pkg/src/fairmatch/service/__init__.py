"""HTTP facade over the matchmaking core (FastAPI)."""

from fairmatch.service.app import app, create_app

__all__ = ["app", "create_app"]
