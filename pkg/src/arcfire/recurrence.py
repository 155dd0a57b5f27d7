"""Recurrent configurations, burning passes, and the sandpile group.

A stable configuration is recurrent when it stays reachable no matter how
many chips are poured in.  Two equivalent effective tests are used: on an
Eulerian graph, add one chip per out-neighbor of the sink and check the
stabilization returns the start (the burning test); on any digraph with a
global sink, add the neutral configuration delta - delta° and check the
same (delta doubles every out-degree).

Burning passes on Eulerian graphs fire every non-sink vertex exactly once;
the arcs realized between the sink and earlier-fired vertices form the
firing graph, which ties minimal recurrent configurations bijectively to
maximal acyclic arc sets rooted at the sink.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable

from .acyclic import (
    EXACT_SOLVER_CAP,
    ROOTED_ENUM_CAP,
    RootedAcyclicSet,
    enumerate_rooted_maximal,
    max_acyclic_exact,
    rootify,
)
from .chipfire import Configuration, is_active, stabilize
from .digraph import Arc, ArcSet, Digraph, is_eulerian, is_strongly_connected, reach
from .errors import CapExceededError, NotRecurrentError, PreconditionError

ENUMERATION_CAP = 10**6


# -- reduced Laplacian and group order ---------------------------------------


@dataclass(frozen=True)
class ReducedLaplacian:
    """The Laplacian with the sink's row and column deleted.  Row i, column
    j holds the number of arcs from the i-th to the j-th non-sink vertex;
    the diagonal holds minus the out-degree."""

    sink: int
    vertices: tuple[int, ...]
    rows: tuple[tuple[int, ...], ...]

    def determinant(self) -> int:
        """Exact integer determinant by fraction-free elimination."""
        size = len(self.rows)
        if size == 0:
            return 1
        work = [list(row) for row in self.rows]
        sign = 1
        divisor = 1
        for k in range(size - 1):
            if work[k][k] == 0:
                for r in range(k + 1, size):
                    if work[r][k] != 0:
                        work[k], work[r] = work[r], work[k]
                        sign = -sign
                        break
                else:
                    return 0
            pivot = work[k][k]
            for i in range(k + 1, size):
                for j in range(k + 1, size):
                    work[i][j] = (work[i][j] * pivot - work[i][k] * work[k][j]) // divisor
                work[i][k] = 0
            divisor = pivot
        return sign * work[size - 1][size - 1]


def reduced_laplacian(graph: Digraph, sink: int) -> ReducedLaplacian:
    graph.check_vertex(sink)
    others = tuple(v for v in graph.vertices() if v != sink)
    rows = tuple(
        tuple(
            -graph.out_degree(u) if u == v else (1 if graph.has_arc(u, v) else 0)
            for v in others
        )
        for u in others
    )
    return ReducedLaplacian(sink, others, rows)


def group_order(graph: Digraph, sink: int) -> int:
    """Number of recurrent configurations: the absolute determinant of the
    reduced Laplacian."""
    det = reduced_laplacian(graph, sink).determinant()
    if det == 0:
        raise PreconditionError(
            "reduced Laplacian is singular: the sink is not a global sink of "
            "the sink-cut graph"
        )
    return abs(det)


# -- test configurations ------------------------------------------------------


def burning_config(graph: Digraph, sink: int) -> Configuration:
    """One chip per out-neighbor of the sink (what the sink would send if
    it fired).  Defined on Eulerian graphs."""
    graph.check_vertex(sink)
    if not is_eulerian(graph):
        raise PreconditionError("the burning test requires an Eulerian digraph")
    heads = set(graph.out_neighbors(sink))
    return Configuration(
        graph, sink, tuple(1 if v in heads else 0 for v in graph.vertices() if v != sink)
    )


def neutral_config(graph: Digraph, sink: int, doubled: bool = True) -> Configuration:
    """delta - delta° where delta holds ``factor * outdeg`` chips everywhere
    (factor 2 by default; factor 1 works as well).  The result is in the
    identity's equivalence class and positive on every non-sink vertex."""
    graph.check_vertex(sink)
    factor = 2 if doubled else 1
    saturated = Configuration(
        graph,
        sink,
        tuple(factor * graph.out_degree(v) for v in graph.vertices() if v != sink),
    )
    settled, _ = stabilize(saturated)
    return saturated - settled


# -- recurrence tests ---------------------------------------------------------


def is_stable(config: Configuration) -> bool:
    return not any(is_active(config, v) for v in config.slots())


def _require_stable(config: Configuration) -> None:
    for v in config.slots():
        if is_active(config, v):
            raise PreconditionError(f"configuration is not stable: vertex {v} is active")


def is_recurrent(config: Configuration, method: str = "auto", doubled: bool = True) -> bool:
    """Stable-and-accessible test.  ``method`` is ``burning`` (Eulerian
    only), ``neutral`` (any global-sink digraph), or ``auto``."""
    _require_stable(config)
    graph, sink = config.graph, config.sink
    if method == "auto":
        method = "burning" if is_eulerian(graph) else "neutral"
    if method == "burning":
        probe = burning_config(graph, sink)
    elif method == "neutral":
        probe = neutral_config(graph, sink, doubled=doubled)
    else:
        raise PreconditionError(f"unknown recurrence test {method!r}")
    settled, _ = stabilize(config + probe)
    return settled == config


def burning_sequence(config: Configuration) -> tuple[int, ...]:
    """The order in which vertices fire when the sink's chips are added to
    a recurrent configuration; smallest active vertex first.

    On an Eulerian graph a recurrent configuration makes every non-sink
    vertex fire exactly once.  A non-recurrent one stalls; the failure
    carries the set of vertices that never burned.
    """
    graph, sink = config.graph, config.sink
    if not is_eulerian(graph):
        raise PreconditionError("burning sequences require an Eulerian digraph")
    _require_stable(config)
    work = config + burning_config(graph, sink)
    fired: list[int] = []
    done: set[int] = set()
    while True:
        candidate = next(
            (v for v in work.slots() if v not in done and is_active(work, v)), None
        )
        if candidate is None:
            break
        chips = list(work.chips)
        slot = candidate if candidate < sink else candidate - 1
        chips[slot] -= graph.out_degree(candidate)
        for w in graph.out_neighbors(candidate):
            if w != sink:
                chips[w if w < sink else w - 1] += 1
        work = work.replace(chips)
        fired.append(candidate)
        done.add(candidate)
    if len(fired) != graph.n - 1:
        unburnt = frozenset(v for v in config.slots() if v not in done)
        raise NotRecurrentError(
            f"configuration is not recurrent: {sorted(unburnt)} never burned",
            unburnt,
        )
    if work != config:
        raise RuntimeError("full burning pass did not return to the start")
    return tuple(fired)


# -- firing graphs and the bijection ------------------------------------------


@dataclass(frozen=True)
class FiringGraph:
    """Arcs realized along a burning pass: sink to each out-neighbor, plus
    every arc from an earlier-fired vertex to a later-fired one."""

    graph: Digraph
    sink: int
    order: tuple[int, ...]
    arcs: frozenset[Arc]

    def __post_init__(self) -> None:
        indeg: dict[int, int] = {v: 0 for v in self.graph.vertices()}
        for _, head in self.arcs:
            indeg[head] += 1
        if indeg[self.sink] != 0:
            raise RuntimeError("firing graph gives the sink an incoming arc")
        if any(indeg[v] == 0 for v in self.graph.vertices() if v != self.sink):
            raise RuntimeError("firing graph left a non-sink vertex unreached")
        if reach(self.graph, self.arcs, self.sink) != frozenset(self.graph.vertices()):
            raise RuntimeError("firing graph is not connected from the sink")

    def rooted(self) -> RootedAcyclicSet:
        return RootedAcyclicSet(ArcSet(self.graph, self.arcs), self.sink)

    def to_text(self) -> str:
        """Edge-list text of the realized arcs with the burning order as a
        trailing comment, parseable by the graph reader."""
        lines = [f"{self.graph.n} {len(self.arcs)}"]
        lines.extend(f"{tail} {head}" for tail, head in sorted(self.arcs))
        lines.append("# order " + " ".join(map(str, self.order)))
        return "\n".join(lines) + "\n"


def firing_graph(config: Configuration, order: Iterable[int]) -> FiringGraph:
    """Build the firing graph of a legal burning sequence for ``config``."""
    graph, sink = config.graph, config.sink
    if not is_eulerian(graph):
        raise PreconditionError("firing graphs require an Eulerian digraph")
    order = tuple(order)
    if sorted(order) != sorted(config.slots()):
        raise PreconditionError(
            "burning order must list every non-sink vertex exactly once"
        )
    work = config + burning_config(graph, sink)
    for v in order:
        if not is_active(work, v):
            raise PreconditionError(f"burning order fires inactive vertex {v}")
        chips = list(work.chips)
        slot = v if v < sink else v - 1
        chips[slot] -= graph.out_degree(v)
        for w in graph.out_neighbors(v):
            if w != sink:
                chips[w if w < sink else w - 1] += 1
        work = work.replace(chips)
    if work != config:
        raise PreconditionError("burning order does not return to the configuration")
    position = {sink: 0}
    for i, v in enumerate(order, start=1):
        position[v] = i
    arcs = frozenset(
        a for a in graph.arcs if a[1] != sink and position[a[0]] < position[a[1]]
    )
    return FiringGraph(graph, sink, order, arcs)


def config_from_arcset(graph: Digraph, sink: int, rooted: RootedAcyclicSet) -> Configuration:
    """The recurrent configuration realized by a spanning rooted acyclic
    arc set: out-degree minus in-degree inside the set, at every non-sink
    vertex.  Maximal sets give exactly the minimal recurrent ones."""
    if rooted.graph != graph:
        raise PreconditionError("rooted set belongs to a different graph")
    if rooted.root != sink:
        raise PreconditionError("rooted set must be rooted at the sink")
    if not is_eulerian(graph):
        raise PreconditionError("the bijection requires an Eulerian digraph")
    if not rooted.spans():
        raise PreconditionError("rooted set must reach every vertex from the sink")
    indeg: dict[int, int] = {v: 0 for v in graph.vertices()}
    for _, head in rooted.base.arcs:
        indeg[head] += 1
    return Configuration(
        graph,
        sink,
        tuple(graph.out_degree(v) - indeg[v] for v in graph.vertices() if v != sink),
    )


def is_minimal_recurrent(config: Configuration) -> bool:
    """Recurrent and not above any other recurrent configuration.  Decided
    through the firing graph: minimal configurations are exactly those
    realized by a maximal rooted acyclic arc set."""
    _require_stable(config)
    try:
        order = burning_sequence(config)
    except NotRecurrentError:
        return False
    realized = firing_graph(config, order)
    graph, sink = config.graph, config.sink
    indeg: dict[int, int] = {v: 0 for v in graph.vertices()}
    for _, head in realized.arcs:
        indeg[head] += 1
    if any(config.get(v) != graph.out_degree(v) - indeg[v] for v in config.slots()):
        return False
    # Maximality: every absent arc must close a cycle.
    closure = _reach_table(graph.n, realized.arcs)
    return all(
        (u, v) in realized.arcs or u in closure[v] for u, v in graph.arcs
    )


def _reach_table(n: int, members: frozenset[Arc]) -> list[set[int]]:
    adj: dict[int, list[int]] = {}
    for u, v in members:
        adj.setdefault(u, []).append(v)
    table: list[set[int]] = []
    for s in range(n):
        seen = {s}
        stack = [s]
        while stack:
            x = stack.pop()
            for y in adj.get(x, ()):
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        table.append(seen)
    return table


# -- enumeration and extremal counts ------------------------------------------


def _stable_space(graph: Digraph, sink: int, cap: int) -> list[tuple[int, ...]]:
    degrees = [graph.out_degree(v) for v in graph.vertices() if v != sink]
    size = 1
    for deg in degrees:
        if deg == 0:
            raise PreconditionError(
                "a non-sink vertex with out-degree 0 cannot reach the sink"
            )
        size *= deg
        if size > cap:
            raise CapExceededError(
                f"stable-configuration space exceeds the cap of {cap}"
            )
    return [tuple(c) for c in itertools.product(*(range(d) for d in degrees))]


def enumerate_recurrent(
    graph: Digraph, sink: int, cap: int = ENUMERATION_CAP
) -> frozenset[Configuration]:
    """All recurrent configurations, by testing every stable one."""
    graph.check_vertex(sink)
    if is_eulerian(graph):
        probe = burning_config(graph, sink)
    else:
        probe = neutral_config(graph, sink)
    found = []
    for chips in _stable_space(graph, sink, cap):
        config = Configuration(graph, sink, chips)
        settled, _ = stabilize(config + probe)
        if settled == config:
            found.append(config)
    return frozenset(found)


def enumerate_minimal_recurrent(
    graph: Digraph,
    sink: int,
    cap: int = ENUMERATION_CAP,
    max_n: int = ROOTED_ENUM_CAP,
) -> frozenset[Configuration]:
    """Minimal recurrent configurations, built twice: once through maximal
    rooted acyclic arc sets, once by filtering the recurrent enumeration.
    The two constructions must agree element-wise."""
    via_arcsets = [
        config_from_arcset(graph, sink, rooted)
        for rooted in enumerate_rooted_maximal(graph, sink, max_n=max_n)
    ]
    if len(set(via_arcsets)) != len(via_arcsets):
        raise RuntimeError("distinct maximal rooted sets produced equal configurations")
    recurrent = enumerate_recurrent(graph, sink, cap=cap)
    via_filter = frozenset(
        c for c in recurrent if not any(r != c and r <= c for r in recurrent)
    )
    if frozenset(via_arcsets) != via_filter:
        raise RuntimeError(
            "internal invariant violation: the bijection and the order filter "
            "disagree on the minimal recurrent configurations"
        )
    return via_filter


def minrec_exact(graph: Digraph, sink: int, max_n: int = EXACT_SOLVER_CAP) -> int:
    """Minimum chip total over recurrent configurations: the non-sink
    out-degree total minus the maximum acyclic arc set size."""
    graph.check_vertex(sink)
    if not is_eulerian(graph):
        raise PreconditionError("the exact minimum-chip route requires an Eulerian digraph")
    if not is_strongly_connected(graph):
        raise PreconditionError(
            "the exact minimum-chip route requires a strongly connected digraph"
        )
    best, _ = max_acyclic_exact(graph, max_n=max_n)
    return sum(graph.out_degree(v) for v in graph.vertices() if v != sink) - best


def minrec_witness(
    graph: Digraph, sink: int, max_n: int = EXACT_SOLVER_CAP
) -> Configuration:
    """A recurrent configuration attaining the minimum chip total: re-root
    a maximum acyclic arc set at the sink and read the configuration off."""
    target = minrec_exact(graph, sink, max_n=max_n)
    _, witness = max_acyclic_exact(graph, max_n=max_n)
    rooted = rootify(graph, witness, sink)
    config = config_from_arcset(graph, sink, rooted)
    if config.total != target:
        raise RuntimeError("minimum-chip witness misses the optimum")
    return config


def minrec_brute(graph: Digraph, sink: int, cap: int = ENUMERATION_CAP) -> int:
    """Minimum chip total by enumerating recurrent configurations; works on
    any digraph whose sink-cut graph has a global sink."""
    recurrent = enumerate_recurrent(graph, sink, cap=cap)
    if not recurrent:
        raise RuntimeError("no recurrent configuration found")
    return min(c.total for c in recurrent)


# -- group structure -----------------------------------------------------------


def canonical_recurrent(config: Configuration) -> Configuration:
    """The unique recurrent configuration equivalent to ``config`` modulo
    firings; idempotent on recurrent inputs."""
    graph, sink = config.graph, config.sink
    if is_eulerian(graph):
        probe = burning_config(graph, sink)
    else:
        probe = neutral_config(graph, sink)
    current, _ = stabilize(config)
    max_deg = max((graph.out_degree(v) for v in config.slots()), default=1)
    bound = max(1, graph.n * max_deg * graph.n)
    for _ in range(bound):
        settled, _ = stabilize(current + probe)
        if settled == current:
            return current
        current = settled
    raise RuntimeError("canonical representative failed to converge")


def group_add(a: Configuration, b: Configuration) -> Configuration:
    """Sandpile group operation: pointwise sum, then stabilize.  Both
    inputs must be recurrent; the result is recurrent."""
    if not is_recurrent(a) or not is_recurrent(b):
        raise PreconditionError("group addition needs recurrent operands")
    settled, _ = stabilize(a + b)
    return settled
