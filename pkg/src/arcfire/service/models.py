"""Request/response schemas for the HTTP service and the CLI run report.

Graphs travel as edge-list text (the same format the CLI reads from disk),
configurations as either 'v count' lines or the JSON mirror
``{"sink": k, "chips": {"v": count}}``.
"""

from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, Field


class ErrorInfo(BaseModel):
    kind: Literal["invalid-input", "cap-exceeded", "precondition"]
    message: str


class ErrorEnvelope(BaseModel):
    error: ErrorInfo


class GraphIn(BaseModel):
    graph: str = Field(description="edge-list text: 'n m' header, then one 'u v' line per arc")


class InspectResponse(BaseModel):
    n: int
    m: int
    eulerian: bool
    strongly_connected: bool


class MinfasRequest(GraphIn):
    mode: Literal["exact", "heuristic"] = "exact"
    emit_witness: bool = False
    max_exact_n: Optional[int] = Field(default=None, ge=1)


class MinfasResponse(BaseModel):
    n: int
    m: int
    mode: Literal["exact", "heuristic"]
    size: int
    optimal: bool
    witness: Optional[list[tuple[int, int]]] = None


class EulerianizeRequest(GraphIn):
    pass


class EulerianizeResponse(BaseModel):
    d: int
    hub: Optional[int]
    n_original: int
    m_original: int
    n_lifted: int
    m_lifted: int
    lifted: str
    vertex_map: list[int]


class MinrecRequest(GraphIn):
    sink: int = 0
    brute: bool = False
    emit_config: bool = False
    max_exact_n: Optional[int] = Field(default=None, ge=1)


class MinrecResponse(BaseModel):
    sink: int
    route: Literal["exact", "brute"]
    min_chips: int
    config: Optional[dict[int, int]] = None


class CheckRequest(GraphIn):
    config: str = Field(description="configuration text or its JSON mirror")
    sink: Optional[int] = None


class CheckResponse(BaseModel):
    sink: int
    eulerian: bool
    total_chips: int
    recurrent: bool
    minimal: Optional[bool] = None
    burning_order: Optional[list[int]] = None
    unburnt: Optional[list[int]] = None


class GenerateRequest(BaseModel):
    n: int = Field(ge=1)
    arcs: Optional[int] = Field(default=None, ge=0)
    eulerian: bool = False
    seed: int = 0


class GenerateResponse(BaseModel):
    graph: str
    n: int
    m: int
    eulerian: bool
    strongly_connected: bool


class HealthResponse(BaseModel):
    status: str
    version: str


class RunReport(BaseModel):
    """What every CLI invocation emits in JSON mode: the command echo, a
    digest of the inputs, the service result payload, wall time, and any
    resource caps that were hit."""

    command: str
    argv: list[str]
    input_digest: str
    result: dict
    ms: float
    caps_hit: list[str] = Field(default_factory=list)


REPORT_SCHEMA = RunReport.model_json_schema()
