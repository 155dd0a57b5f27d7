"""FastAPI service exposing the solvers.

Every endpoint is a pure function of its request body, so the service can
run with any number of workers.  Domain errors surface as a JSON envelope
``{"error": {"kind", "message"}}`` with kinds invalid-input (400),
cap-exceeded (413), and precondition (422); clients key off the kind.
"""

from __future__ import annotations

import random

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import __version__
from ..acyclic import EXACT_SOLVER_CAP, min_fas_exact, min_fas_heuristic
from ..chipfire import parse_configuration
from ..digraph import Digraph, is_eulerian, is_strongly_connected, parse_digraph
from ..errors import (
    CapExceededError,
    ConfigParseError,
    GraphParseError,
    InfeasibleParameterError,
    NotRecurrentError,
    PreconditionError,
)
from ..eulerianize import eulerianize, lifted_to_text
from ..generate import random_digraph, random_eulerian_digraph
from ..recurrence import (
    burning_sequence,
    enumerate_recurrent,
    is_minimal_recurrent,
    is_recurrent,
    is_stable,
    minrec_exact,
    minrec_witness,
)
from . import models


def _error_response(status: int, kind: str, exc: Exception) -> JSONResponse:
    envelope = models.ErrorEnvelope(
        error=models.ErrorInfo(kind=kind, message=str(exc))
    )
    return JSONResponse(status_code=status, content=envelope.model_dump())


def _check_sink(graph: Digraph, sink: int) -> None:
    if not (0 <= sink < graph.n):
        raise InfeasibleParameterError(f"sink {sink} out of range for n={graph.n}")


def create_app() -> FastAPI:
    app = FastAPI(
        title="arcfire",
        version=__version__,
        description="Feedback arc sets, Eulerian lifts, and chip-firing recurrence.",
    )

    @app.exception_handler(GraphParseError)
    @app.exception_handler(ConfigParseError)
    @app.exception_handler(InfeasibleParameterError)
    async def _invalid(request: Request, exc: Exception) -> JSONResponse:
        return _error_response(400, "invalid-input", exc)

    @app.exception_handler(CapExceededError)
    async def _capped(request: Request, exc: Exception) -> JSONResponse:
        return _error_response(413, "cap-exceeded", exc)

    @app.exception_handler(PreconditionError)
    async def _precondition(request: Request, exc: Exception) -> JSONResponse:
        return _error_response(422, "precondition", exc)

    @app.get("/health", response_model=models.HealthResponse)
    async def health() -> models.HealthResponse:
        return models.HealthResponse(status="ok", version=__version__)

    @app.post("/inspect", response_model=models.InspectResponse)
    async def inspect(req: models.GraphIn) -> models.InspectResponse:
        graph = parse_digraph(req.graph)
        return models.InspectResponse(
            n=graph.n,
            m=graph.m,
            eulerian=is_eulerian(graph),
            strongly_connected=is_strongly_connected(graph),
        )

    @app.post("/minfas", response_model=models.MinfasResponse)
    async def minfas(req: models.MinfasRequest) -> models.MinfasResponse:
        graph = parse_digraph(req.graph)
        if req.mode == "exact":
            cap = req.max_exact_n if req.max_exact_n is not None else EXACT_SOLVER_CAP
            size, witness = min_fas_exact(graph, max_n=cap)
            optimal = True
        else:
            size, witness = min_fas_heuristic(graph)
            optimal = False
        return models.MinfasResponse(
            n=graph.n,
            m=graph.m,
            mode=req.mode,
            size=size,
            optimal=optimal,
            witness=witness.sorted() if req.emit_witness else None,
        )

    @app.post("/eulerianize", response_model=models.EulerianizeResponse)
    async def lift(req: models.EulerianizeRequest) -> models.EulerianizeResponse:
        graph = parse_digraph(req.graph)
        instance = eulerianize(graph)
        return models.EulerianizeResponse(
            d=instance.d,
            hub=instance.hub,
            n_original=graph.n,
            m_original=graph.m,
            n_lifted=instance.lifted.n,
            m_lifted=instance.lifted.m,
            lifted=lifted_to_text(instance),
            vertex_map=list(instance.vertex_map),
        )

    @app.post("/minrec", response_model=models.MinrecResponse)
    async def minrec(req: models.MinrecRequest) -> models.MinrecResponse:
        graph = parse_digraph(req.graph)
        _check_sink(graph, req.sink)
        config = None
        if req.brute:
            recurrent = enumerate_recurrent(graph, req.sink)
            value = min(c.total for c in recurrent)
            if req.emit_config:
                config = min(
                    (c for c in recurrent if c.total == value), key=lambda c: c.chips
                ).as_dict()
            route = "brute"
        else:
            if not is_eulerian(graph):
                raise PreconditionError(
                    "graph is not Eulerian, so the exact minimum-chip route does "
                    "not apply; rerun with brute=true (CLI: --brute) to enumerate"
                )
            cap = req.max_exact_n if req.max_exact_n is not None else EXACT_SOLVER_CAP
            value = minrec_exact(graph, req.sink, max_n=cap)
            if req.emit_config:
                config = minrec_witness(graph, req.sink, max_n=cap).as_dict()
            route = "exact"
        return models.MinrecResponse(
            sink=req.sink, route=route, min_chips=value, config=config
        )

    @app.post("/check", response_model=models.CheckResponse)
    async def check(req: models.CheckRequest) -> models.CheckResponse:
        graph = parse_digraph(req.graph)
        if req.sink is not None:
            _check_sink(graph, req.sink)
        config = parse_configuration(req.config, graph, sink=req.sink)
        if not is_stable(config):
            active = next(v for v in config.slots() if config.get(v) >= graph.out_degree(v))
            raise PreconditionError(
                f"configuration is not stable: vertex {active} is active"
            )
        eulerian = is_eulerian(graph)
        burning_order = None
        unburnt = None
        minimal: bool | None = None
        if eulerian:
            try:
                burning_order = list(burning_sequence(config))
                recurrent = True
                minimal = is_minimal_recurrent(config)
            except NotRecurrentError as exc:
                recurrent = False
                minimal = False
                unburnt = sorted(exc.unburnt)
        else:
            recurrent = is_recurrent(config)
        return models.CheckResponse(
            sink=config.sink,
            eulerian=eulerian,
            total_chips=config.total,
            recurrent=recurrent,
            minimal=minimal,
            burning_order=burning_order,
            unburnt=unburnt,
        )

    @app.post("/generate", response_model=models.GenerateResponse)
    async def generate(req: models.GenerateRequest) -> models.GenerateResponse:
        rng = random.Random(req.seed)
        arcs = req.arcs
        if arcs is None:
            arcs = 0 if req.n == 1 else min(2 * req.n, req.n * (req.n - 1))
        if req.eulerian:
            graph = random_eulerian_digraph(rng, req.n, arcs)
        else:
            graph = random_digraph(rng, req.n, arcs)
        return models.GenerateResponse(
            graph=graph.to_text(),
            n=graph.n,
            m=graph.m,
            eulerian=is_eulerian(graph),
            strongly_connected=is_strongly_connected(graph),
        )

    return app
