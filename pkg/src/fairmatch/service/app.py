"""FastAPI application: stateless scoring/simulation plus stateful queues.

Stateless endpoints (/buckets, /score, /match, /simulate) carry the config
in each request and hold nothing between calls — the CLI drives these.
Stateful queues live under /queues; a process-wide lock serializes queue
mutation, satisfying the single-logical-writer requirement.
"""

from __future__ import annotations

import itertools
import threading

from fastapi import FastAPI, HTTPException, Request
from fastapi.responses import JSONResponse

from fairmatch import __version__
from fairmatch.bucketing import build_bucket_scheme
from fairmatch.fairness import SizeMismatchError
from fairmatch.matchmaker import MatchQueue, MatchResult, pair_diagnostics
from fairmatch.model import ConfigError, Lobby, LobbyFormatError, RatingConfig, clamp_lobby
from fairmatch.service import schemas
from fairmatch.simulator import SimParams, run_simulation, summarize

_DOMAIN_ERRORS = (ConfigError, LobbyFormatError, SizeMismatchError)


def _match_row(result: MatchResult) -> schemas.MatchRow:
    return schemas.MatchRow(
        lobby_a=result.lobby_a,
        lobby_b=result.lobby_b,
        ruzicka=result.ruzicka,
        sanction=result.sanction,
    )


def _ingest(model: schemas.LobbyModel, config: RatingConfig) -> Lobby:
    # Ratings are clamped at every ingress point, same as file parsing.
    return clamp_lobby(model.to_domain(), config)


def create_app() -> FastAPI:
    app = FastAPI(title="fairmatch", version=__version__)
    queues: dict[str, MatchQueue] = {}
    queue_ids = itertools.count(1)
    lock = threading.Lock()

    async def domain_error(request: Request, exc: Exception) -> JSONResponse:
        return JSONResponse(status_code=422, content={"detail": str(exc)})

    for exc_type in _DOMAIN_ERRORS:
        app.add_exception_handler(exc_type, domain_error)
    # QueueError subclasses (duplicate id, wrong size) are 422s as well.
    from fairmatch.matchmaker import QueueError

    app.add_exception_handler(QueueError, domain_error)

    def get_queue(queue_id: str) -> MatchQueue:
        try:
            return queues[queue_id]
        except KeyError:
            raise HTTPException(status_code=404, detail=f"no queue {queue_id!r}")

    @app.get("/health")
    def health() -> dict[str, str]:
        return {"status": "ok", "version": __version__}

    @app.post("/buckets", response_model=schemas.BucketsResponse)
    def buckets(req: schemas.BucketsRequest) -> schemas.BucketsResponse:
        scheme = build_bucket_scheme(req.config.to_domain())
        rows = [
            schemas.BucketRow(
                index=i,
                lower=scheme.boundaries[i],
                upper=scheme.boundaries[i + 1],
                width=scheme.widths[i],
            )
            for i in range(scheme.n_bucket)
        ]
        return schemas.BucketsResponse(buckets=rows)

    @app.post("/score", response_model=schemas.ScoreResponse)
    def score(req: schemas.ScoreRequest) -> schemas.ScoreResponse:
        config = req.config.to_domain()
        scheme = build_bucket_scheme(config)
        lobbies_a = [_ingest(m, config) for m in req.lobbies_a]
        lobbies_b = [_ingest(m, config) for m in req.lobbies_b]
        pairs = []
        for a in lobbies_a:
            for b in lobbies_b:
                range_a, range_b, sr, passed, sanction = pair_diagnostics(a, b, config, scheme)
                pairs.append(
                    schemas.PairScore(
                        id_a=a.id,
                        id_b=b.id,
                        range_a=schemas.IntervalModel.from_domain(range_a),
                        range_b=schemas.IntervalModel.from_domain(range_b),
                        sr=sr,
                        prefilter_pass=passed,
                        sanction=sanction,
                    )
                )
        return schemas.ScoreResponse(pairs=pairs)

    @app.post("/match", response_model=schemas.MatchResponse)
    def match(req: schemas.MatchRequest) -> schemas.MatchResponse:
        config = req.config.to_domain()
        queue = MatchQueue(config, req.strategy)
        for model in req.lobbies:
            queue.enqueue(_ingest(model, config))
        results = queue.match_pass()
        return schemas.MatchResponse(
            matches=[_match_row(r) for r in results],
            unmatched=queue.waiting_ids,
            prefilter_evals=queue.prefilter_evals,
            sanction_evals=queue.sanction_evals,
        )

    @app.post("/simulate", response_model=schemas.SimulateResponse)
    def simulate(req: schemas.SimulateRequest) -> schemas.SimulateResponse:
        params = SimParams(
            config=req.config.to_domain(),
            n_pairings=req.pairings,
            seed=req.seed,
            gen_mu=req.gen_mu,
            gen_sigma=req.gen_sigma,
        )
        histogram = run_simulation(params, workers=req.workers)
        s = summarize(histogram)
        return schemas.SimulateResponse(
            counts=dict(histogram.counts),
            summary=schemas.SummaryModel(
                total=s.total,
                mean=s.mean,
                median=s.median,
                mode=s.mode_score,
                skewness=s.skewness,
            ),
        )

    def queue_state(queue_id: str, queue: MatchQueue) -> schemas.QueueState:
        return schemas.QueueState(
            queue_id=queue_id,
            strategy=queue.strategy,
            waiting=queue.waiting_ids,
            prefilter_evals=queue.prefilter_evals,
            sanction_evals=queue.sanction_evals,
        )

    @app.post("/queues", response_model=schemas.QueueState, status_code=201)
    def create_queue(req: schemas.CreateQueueRequest) -> schemas.QueueState:
        config = req.config.to_domain()
        with lock:
            queue_id = f"q{next(queue_ids)}"
            queues[queue_id] = MatchQueue(config, req.strategy)
            return queue_state(queue_id, queues[queue_id])

    @app.get("/queues/{queue_id}", response_model=schemas.QueueState)
    def inspect_queue(queue_id: str) -> schemas.QueueState:
        with lock:
            return queue_state(queue_id, get_queue(queue_id))

    @app.delete("/queues/{queue_id}", status_code=204)
    def delete_queue(queue_id: str) -> None:
        with lock:
            get_queue(queue_id)
            del queues[queue_id]

    @app.post("/queues/{queue_id}/lobbies", response_model=schemas.QueueState, status_code=201)
    def enqueue(queue_id: str, req: schemas.EnqueueRequest) -> schemas.QueueState:
        with lock:
            queue = get_queue(queue_id)
            queue.enqueue(_ingest(req.lobby, queue.config))
            return queue_state(queue_id, queue)

    @app.post("/queues/{queue_id}/find-match", response_model=schemas.FindMatchResponse)
    def find_match(queue_id: str, req: schemas.FindMatchRequest) -> schemas.FindMatchResponse:
        with lock:
            queue = get_queue(queue_id)
            result = queue.find_match(_ingest(req.candidate, queue.config))
        return schemas.FindMatchResponse(match=_match_row(result) if result else None)

    @app.post("/queues/{queue_id}/match-pass", response_model=schemas.MatchResponse)
    def match_pass(queue_id: str) -> schemas.MatchResponse:
        with lock:
            queue = get_queue(queue_id)
            results = queue.match_pass()
            return schemas.MatchResponse(
                matches=[_match_row(r) for r in results],
                unmatched=queue.waiting_ids,
                prefilter_evals=queue.prefilter_evals,
                sanction_evals=queue.sanction_evals,
            )

    return app


app = create_app()
