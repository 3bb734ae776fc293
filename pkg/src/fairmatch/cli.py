"""Command-line client for the matchmaking service.

Every subcommand is a thin client: it parses local files, sends one JSON
request to the HTTP service, and renders the response in the documented
CSV shapes. By default the service runs in-process (no socket); pass
--server to talk to a remote instance started with `fairmatch serve`.
"""

from __future__ import annotations

import asyncio
import dataclasses
import json
import sys
from pathlib import Path

import click
import httpx

from fairmatch.model import (
    ConfigError,
    Lobby,
    LobbyFormatError,
    RatingConfig,
    load_config,
    parse_lobby_file,
)
from fairmatch.simulator import ScoreHistogram, histogram_csv


def _fmt_float(value: float) -> str:
    """Full round-trip decimal form (repr of the double)."""
    return repr(float(value))


class ServiceClient:
    """POSTs one request at a time, in-process by default."""

    def __init__(self, server: str | None):
        self.server = server

    def post(self, path: str, payload: dict) -> dict:
        if self.server:
            with httpx.Client(base_url=self.server, timeout=600.0) as client:
                response = client.post(path, json=payload)
        else:
            response = asyncio.run(self._post_in_process(path, payload))
        if response.status_code >= 400:
            raise click.ClickException(_error_detail(response))
        return response.json()

    async def _post_in_process(self, path: str, payload: dict) -> httpx.Response:
        from fairmatch.service.app import create_app

        transport = httpx.ASGITransport(app=create_app())
        async with httpx.AsyncClient(
            transport=transport, base_url="http://fairmatch.local", timeout=None
        ) as client:
            return await client.post(path, json=payload)


def _error_detail(response: httpx.Response) -> str:
    try:
        detail = response.json().get("detail")
    except (json.JSONDecodeError, AttributeError):
        detail = None
    if isinstance(detail, list):  # request-model validation errors
        detail = "; ".join(str(item.get("msg", item)) for item in detail)
    return str(detail) if detail else f"service returned HTTP {response.status_code}"


def _read_config(path: str) -> RatingConfig:
    try:
        data = Path(path).read_bytes()
    except OSError as exc:
        raise click.ClickException(f"{path}: {exc.strerror or exc}")
    try:
        return load_config(data)
    except ConfigError as exc:
        raise click.ClickException(f"{path}: {exc}")


def _read_lobbies(path: str, config: RatingConfig, *, enforce_size: bool) -> list[Lobby]:
    try:
        data = Path(path).read_text()
    except OSError as exc:
        raise click.ClickException(f"{path}: {exc.strerror or exc}")
    try:
        return parse_lobby_file(data, config, enforce_size=enforce_size)
    except LobbyFormatError as exc:
        raise click.ClickException(f"{path}: {exc}")


def _config_payload(config: RatingConfig) -> dict:
    return dataclasses.asdict(config)


def _lobby_payload(lobby: Lobby) -> dict:
    return {"id": lobby.id, "ranks": list(lobby.ranks), "enqueued_at": lobby.enqueued_at}


config_option = click.option(
    "--config", "config_path", required=True, metavar="PATH",
    help="Rating/bucket/threshold configuration (JSON).",
)


@click.group()
@click.option("--server", metavar="URL", default=None,
              help="Base URL of a running service; default runs it in-process.")
@click.version_option(package_name="fairmatch")
@click.pass_context
def main(ctx: click.Context, server: str | None) -> None:
    """Two-stage matchmaking: range-overlap prefilter + bucketed fairness score."""
    ctx.obj = ServiceClient(server)


@main.command()
@click.argument("lobby_file_a", metavar="LOBBIES_A")
@click.argument("lobby_file_b", metavar="LOBBIES_B")
@config_option
@click.pass_obj
def score(client: ServiceClient, lobby_file_a: str, lobby_file_b: str, config_path: str) -> None:
    """Score every cross pair of two lobby files (CSV on stdout)."""
    config = _read_config(config_path)
    lobbies_a = _read_lobbies(lobby_file_a, config, enforce_size=False)
    lobbies_b = _read_lobbies(lobby_file_b, config, enforce_size=False)
    data = client.post("/score", {
        "config": _config_payload(config),
        "lobbies_a": [_lobby_payload(lb) for lb in lobbies_a],
        "lobbies_b": [_lobby_payload(lb) for lb in lobbies_b],
    })
    click.echo("id_a,id_b,sr,prefilter_pass,sanction")
    for pair in data["pairs"]:
        click.echo(
            f"{pair['id_a']},{pair['id_b']},{_fmt_float(pair['sr'])},"
            f"{'true' if pair['prefilter_pass'] else 'false'},{pair['sanction']}"
        )


@main.command()
@config_option
@click.pass_obj
def buckets(client: ServiceClient, config_path: str) -> None:
    """Print the bucket scheme for a config (CSV on stdout)."""
    config = _read_config(config_path)
    data = client.post("/buckets", {"config": _config_payload(config)})
    click.echo("index,lower,upper,width")
    for row in data["buckets"]:
        click.echo(
            f"{row['index']},{_fmt_float(row['lower'])},"
            f"{_fmt_float(row['upper'])},{_fmt_float(row['width'])}"
        )


@main.command()
@click.argument("lobby_file", metavar="LOBBIES")
@config_option
@click.option("--strategy", type=click.Choice(["threshold", "argmin"]), default="threshold",
              show_default=True, help="Matching strategy for the pass.")
@click.pass_obj
def match(client: ServiceClient, lobby_file: str, config_path: str, strategy: str) -> None:
    """Run one matching pass over a lobby file (CSV on stdout)."""
    config = _read_config(config_path)
    lobbies = _read_lobbies(lobby_file, config, enforce_size=True)
    data = client.post("/match", {
        "config": _config_payload(config),
        "strategy": strategy,
        "lobbies": [_lobby_payload(lb) for lb in lobbies],
    })
    click.echo("lobby_a,lobby_b,ruzicka,sanction")
    for row in data["matches"]:
        click.echo(
            f"{row['lobby_a']},{row['lobby_b']},"
            f"{_fmt_float(row['ruzicka'])},{row['sanction']}"
        )
    click.echo(f"# prefilter={data['prefilter_evals']} sanction={data['sanction_evals']}")


@main.command()
@config_option
@click.option("--pairings", type=click.IntRange(min=0), default=1_000_000, show_default=True,
              help="Number of random lobby pairings to score.")
@click.option("--seed", type=click.IntRange(0, 2**64 - 1), default=0, show_default=True,
              help="Seed for the deterministic generator.")
@click.option("--gen-mu", type=float, default=None,
              help="Generator mean rating [default: midpoint of the caps].")
@click.option("--gen-sigma", type=click.FloatRange(min=0), default=None,
              help="Generator rating spread [default: one sixth of the cap range].")
@click.option("--workers", type=click.IntRange(1, 64), default=1, show_default=True,
              help="Concurrent partitions (result is identical for any value).")
@click.option("--out", "out_path", metavar="PATH", default=None,
              help="Write the histogram CSV here instead of stdout.")
@click.pass_obj
def simulate(client: ServiceClient, config_path: str, pairings: int, seed: int,
             gen_mu: float | None, gen_sigma: float | None, workers: int,
             out_path: str | None) -> None:
    """Run the Monte-Carlo scoring experiment and emit the histogram CSV."""
    config = _read_config(config_path)
    payload = {
        "config": _config_payload(config),
        "pairings": pairings,
        "seed": seed,
        "workers": workers,
    }
    if gen_mu is not None:
        payload["gen_mu"] = gen_mu
    if gen_sigma is not None:
        payload["gen_sigma"] = gen_sigma
    data = client.post("/simulate", payload)
    counts = {int(s): int(c) for s, c in data["counts"].items()}
    csv_text = histogram_csv(ScoreHistogram(counts))
    if out_path is None:
        click.echo(csv_text, nl=False)
    else:
        try:
            Path(out_path).write_text(csv_text)
        except OSError as exc:
            raise click.ClickException(f"{out_path}: {exc.strerror or exc}")
        # Echo the summary block so a file run still reports its stats.
        for line in csv_text.splitlines():
            if line.startswith("#"):
                click.echo(line)


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8000, show_default=True)
def serve(host: str, port: int) -> None:
    """Run the HTTP service (used by --server clients)."""
    import uvicorn

    uvicorn.run("fairmatch.service.app:app", host=host, port=port)


if __name__ == "__main__":
    sys.exit(main())
