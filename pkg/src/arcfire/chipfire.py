"""Chip-firing dynamics with a designated sink.

A configuration places non-negative chip counts on every non-sink vertex.
The game is played on the sink-cut graph (the parent minus the sink's
outgoing arcs): a vertex is active when it holds at least out-degree many
chips, firing sends one chip along each outgoing arc, and chips entering
the sink vanish.  Stabilization is policy-independent: every policy below
reaches the same stable configuration with the same per-vertex fire counts.
"""

from __future__ import annotations

import json
import random
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Optional

from .digraph import Digraph, global_sink
from .errors import CapExceededError, ConfigParseError, PreconditionError

POLICIES = ("ascending", "descending", "random", "fifo", "lifo")
DEFAULT_STEP_LIMIT = 10**9


@dataclass(frozen=True)
class Configuration:
    """Chips on the non-sink vertices of ``graph``, in ascending vertex
    order (the sink has no slot)."""

    graph: Digraph
    sink: int
    chips: tuple[int, ...]

    def __post_init__(self) -> None:
        self.graph.check_vertex(self.sink)
        if len(self.chips) != self.graph.n - 1:
            raise PreconditionError(
                f"expected {self.graph.n - 1} chip counts, got {len(self.chips)}"
            )
        for count in self.chips:
            if count < 0:
                raise PreconditionError("chip counts must be non-negative")

    def slots(self) -> tuple[int, ...]:
        return tuple(v for v in self.graph.vertices() if v != self.sink)

    def _slot(self, v: int) -> int:
        self.graph.check_vertex(v)
        if v == self.sink:
            raise PreconditionError("the sink holds no chips")
        return v if v < self.sink else v - 1

    def get(self, v: int) -> int:
        return self.chips[self._slot(v)]

    def as_dict(self) -> dict[int, int]:
        return dict(zip(self.slots(), self.chips))

    @property
    def total(self) -> int:
        return sum(self.chips)

    def replace(self, chips: Iterable[int]) -> "Configuration":
        return Configuration(self.graph, self.sink, tuple(chips))

    def _check_compatible(self, other: "Configuration") -> None:
        if self.graph != other.graph or self.sink != other.sink:
            raise PreconditionError("configurations live on different games")

    def __add__(self, other: "Configuration") -> "Configuration":
        self._check_compatible(other)
        return self.replace(a + b for a, b in zip(self.chips, other.chips))

    def __sub__(self, other: "Configuration") -> "Configuration":
        self._check_compatible(other)
        return self.replace(a - b for a, b in zip(self.chips, other.chips))

    def __le__(self, other: "Configuration") -> bool:
        self._check_compatible(other)
        return all(a <= b for a, b in zip(self.chips, other.chips))


@dataclass(frozen=True)
class Odometer:
    """How many times each non-sink vertex fired during a stabilization."""

    graph: Digraph
    sink: int
    fires: tuple[int, ...]

    def get(self, v: int) -> int:
        if v == self.sink:
            raise PreconditionError("the sink never fires")
        return self.fires[v if v < self.sink else v - 1]

    def as_dict(self) -> dict[int, int]:
        slots = tuple(v for v in self.graph.vertices() if v != self.sink)
        return dict(zip(slots, self.fires))

    @property
    def total(self) -> int:
        return sum(self.fires)


def zero_config(graph: Digraph, sink: int) -> Configuration:
    return Configuration(graph, sink, (0,) * (graph.n - 1))


def is_active(config: Configuration, v: int) -> bool:
    """Active means at least out-degree many chips and out-degree >= 1.
    The sink is never active."""
    config.graph.check_vertex(v)
    if v == config.sink:
        return False
    deg = config.graph.out_degree(v)
    return deg >= 1 and config.get(v) >= deg


def fire(config: Configuration, v: int) -> Configuration:
    """One legal firing of ``v``: it loses out-degree chips, each non-sink
    out-neighbor gains one, chips sent to the sink vanish."""
    if v == config.sink:
        raise PreconditionError("the sink cannot fire")
    if not is_active(config, v):
        raise PreconditionError(f"vertex {v} is not active")
    chips = list(config.chips)
    slot = config._slot(v)
    chips[slot] -= config.graph.out_degree(v)
    for w in config.graph.out_neighbors(v):
        if w != config.sink:
            chips[w if w < config.sink else w - 1] += 1
    return config.replace(chips)


def _check_sinkable_game(config: Configuration) -> None:
    cut = config.graph.drop_out_arcs(config.sink)
    if global_sink(cut) != config.sink:
        raise PreconditionError(
            f"vertex {config.sink} is not a global sink of the sink-cut graph; "
            "stabilization would not terminate"
        )


def stabilize(
    config: Configuration,
    policy: str = "ascending",
    rng: Optional[random.Random] = None,
    step_limit: int = DEFAULT_STEP_LIMIT,
) -> tuple[Configuration, Odometer]:
    """Fire active vertices until none remain.

    ``policy`` picks which active vertex fires next and never changes the
    outcome; it exists so that independence can be tested.  ``rng`` feeds
    the random policy (default: seed 0).
    """
    if policy not in POLICIES:
        raise PreconditionError(f"unknown policy {policy!r}; choose from {POLICIES}")
    _check_sinkable_game(config)
    graph, sink = config.graph, config.sink
    n = graph.n
    slot_of = [v if v < sink else v - 1 for v in range(n)]
    outdeg = [graph.out_degree(v) for v in range(n)]
    sends = [
        [w for w in graph.out_neighbors(v) if w != sink] if v != sink else []
        for v in range(n)
    ]
    chips = list(config.chips)
    fires = [0] * (n - 1)

    def active(v: int) -> bool:
        return v != sink and outdeg[v] >= 1 and chips[slot_of[v]] >= outdeg[v]

    def fire_inplace(v: int) -> None:
        chips[slot_of[v]] -= outdeg[v]
        for w in sends[v]:
            chips[slot_of[w]] += 1
        fires[slot_of[v]] += 1

    steps = 0

    def count_step() -> None:
        nonlocal steps
        steps += 1
        if steps > step_limit:
            raise CapExceededError(
                f"stabilization exceeded the step budget of {step_limit} firings"
            )

    if policy in ("ascending", "descending"):
        pick = min if policy == "ascending" else max
        while True:
            candidates = [v for v in range(n) if active(v)]
            if not candidates:
                break
            count_step()
            fire_inplace(pick(candidates))
    elif policy == "random":
        rng = rng if rng is not None else random.Random(0)
        while True:
            candidates = [v for v in range(n) if active(v)]
            if not candidates:
                break
            count_step()
            fire_inplace(rng.choice(candidates))
    else:
        queue: deque[int] = deque(v for v in range(n) if active(v))
        queued = set(queue)
        while queue:
            v = queue.popleft() if policy == "fifo" else queue.pop()
            queued.discard(v)
            if not active(v):
                continue
            count_step()
            fire_inplace(v)
            for w in sends[v] + [v]:
                if w not in queued and active(w):
                    queued.add(w)
                    queue.append(w)

    result = config.replace(chips)
    return result, Odometer(graph, sink, tuple(fires))


def add(a: Configuration, b: Configuration) -> Configuration:
    """Pointwise sum; stabilizing it is the sandpile group operation once
    both summands are recurrent."""
    return a + b


# -- text and JSON interchange ---------------------------------------------


def parse_configuration(
    text: str, graph: Digraph, sink: Optional[int] = None
) -> Configuration:
    """Parse a configuration: either 'v count' lines (sink supplied by the
    caller, unmentioned vertices hold 0) or the JSON mirror
    ``{"sink": k, "chips": {"v": count}}``."""
    stripped = text.lstrip()
    if stripped.startswith("{"):
        try:
            payload = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigParseError(f"invalid JSON configuration: {exc}") from None
        if not isinstance(payload, dict) or "sink" not in payload:
            raise ConfigParseError("JSON configuration needs a 'sink' field")
        json_sink = payload["sink"]
        if not isinstance(json_sink, int):
            raise ConfigParseError("'sink' must be an integer")
        if sink is not None and sink != json_sink:
            raise ConfigParseError(
                f"sink flag {sink} contradicts the file's sink {json_sink}"
            )
        chips_map = payload.get("chips", {})
        if not isinstance(chips_map, dict):
            raise ConfigParseError("'chips' must be an object of vertex: count")
        entries: dict[int, int] = {}
        for key, value in chips_map.items():
            try:
                v = int(key)
            except (TypeError, ValueError):
                raise ConfigParseError(f"bad vertex id {key!r}") from None
            if not isinstance(value, int):
                raise ConfigParseError(f"chip count for vertex {v} must be an integer")
            entries[v] = value
        return _build_config(graph, json_sink, entries)

    if sink is None:
        raise ConfigParseError("text configurations need an explicit sink")
    entries = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        if len(tokens) != 2:
            raise ConfigParseError("expected 'v count'", lineno)
        try:
            v, count = int(tokens[0]), int(tokens[1])
        except ValueError:
            raise ConfigParseError("expected integers 'v count'", lineno) from None
        if v in entries:
            raise ConfigParseError(f"vertex {v} listed twice", lineno)
        entries[v] = count
    return _build_config(graph, sink, entries)


def _build_config(graph: Digraph, sink: int, entries: dict[int, int]) -> Configuration:
    if not (0 <= sink < graph.n):
        raise ConfigParseError(f"sink {sink} out of range for n={graph.n}")
    chips = [0] * (graph.n - 1)
    for v, count in entries.items():
        if not (0 <= v < graph.n):
            raise ConfigParseError(f"vertex {v} out of range for n={graph.n}")
        if v == sink:
            raise ConfigParseError(f"vertex {v} is the sink and holds no chips")
        if count < 0:
            raise ConfigParseError(f"vertex {v} has a negative chip count")
        chips[v if v < sink else v - 1] = count
    return Configuration(graph, sink, tuple(chips))


def config_to_text(config: Configuration) -> str:
    lines = [f"{v} {count}" for v, count in config.as_dict().items()]
    return "\n".join(lines) + ("\n" if lines else "")


def config_to_json(config: Configuration) -> dict:
    return {
        "sink": config.sink,
        "chips": {str(v): count for v, count in config.as_dict().items()},
    }
