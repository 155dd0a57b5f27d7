"""Seeded random instance generators.

All generators are deterministic functions of their ``random.Random``
argument; the CLI seeds one from ``--seed`` so identical invocations
produce identical files.
"""

from __future__ import annotations

import random

from .chipfire import Configuration
from .digraph import Arc, Digraph, global_sink, is_eulerian, is_strongly_connected
from .errors import InfeasibleParameterError

_BUILD_ATTEMPTS = 2000


def random_digraph(rng: random.Random, n: int, m: int) -> Digraph:
    """A uniform simple digraph with exactly ``m`` arcs."""
    if n < 1:
        raise InfeasibleParameterError("need at least one vertex")
    limit = n * (n - 1)
    if not (0 <= m <= limit):
        raise InfeasibleParameterError(
            f"a simple digraph on {n} vertices has between 0 and {limit} arcs"
        )
    pairs = [(u, v) for u in range(n) for v in range(n) if u != v]
    return Digraph(n, rng.sample(pairs, m))


def random_eulerian_digraph(
    rng: random.Random, n: int, m: int, require_strong: bool = True
) -> Digraph:
    """An Eulerian digraph with exactly ``m`` arcs, built by superposing
    random directed cycles and rejecting duplicate arcs."""
    if n < 1:
        raise InfeasibleParameterError("need at least one vertex")
    if n == 1 or m == 0:
        if m != 0:
            raise InfeasibleParameterError("a single vertex admits no arcs")
        if require_strong and n > 1:
            raise InfeasibleParameterError(
                "an arcless graph on several vertices is not strongly connected"
            )
        return Digraph(n, ())
    limit = n * (n - 1)
    if m == 1 or m > limit:
        raise InfeasibleParameterError(
            f"no Eulerian digraph on {n} vertices has exactly {m} arcs"
        )
    if require_strong and m < n:
        raise InfeasibleParameterError(
            f"strong connectivity on {n} vertices needs at least {n} arcs"
        )

    for _ in range(_BUILD_ATTEMPTS):
        arcs: set[Arc] = set()
        stuck = 0
        while len(arcs) < m and stuck < 200:
            remaining = m - len(arcs)
            lengths = [
                length
                for length in range(2, min(n, remaining) + 1)
                if remaining - length != 1
            ]
            if not lengths:
                break
            length = rng.choice(lengths)
            cycle = rng.sample(range(n), length)
            new = [
                (cycle[i], cycle[(i + 1) % length]) for i in range(length)
            ]
            if any(a in arcs for a in new):
                stuck += 1
                continue
            arcs.update(new)
        if len(arcs) != m:
            continue
        graph = Digraph(n, arcs)
        if not is_eulerian(graph):
            raise RuntimeError("cycle superposition produced a non-Eulerian graph")
        if require_strong and not is_strongly_connected(graph):
            continue
        return graph
    raise InfeasibleParameterError(
        f"could not build an Eulerian digraph with n={n}, m={m}"
    )


def random_global_sink_digraph(rng: random.Random, n: int, m: int) -> tuple[Digraph, int]:
    """A digraph together with a vertex that is a global sink once its own
    outgoing arcs are dropped.  The arc count is approximately ``m``."""
    if n < 1:
        raise InfeasibleParameterError("need at least one vertex")
    sink = rng.randrange(n)
    pairs = [(u, v) for u in range(n) for v in range(n) if u != v and u != sink]
    m = min(m, len(pairs))
    arcs = set(rng.sample(pairs, m))
    graph = Digraph(n, arcs)
    for _ in range(n):
        if global_sink(graph.drop_out_arcs(sink)) == sink:
            break
        missing = [
            v
            for v in range(n)
            if v != sink and sink not in _reach_from(graph, v)
        ]
        for v in missing:
            arcs.add((v, sink))
        graph = Digraph(n, arcs)
    return graph, sink


def _reach_from(graph: Digraph, start: int) -> set[int]:
    seen = {start}
    stack = [start]
    while stack:
        x = stack.pop()
        for y in graph.out_neighbors(x):
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return seen


def random_configuration(
    rng: random.Random, graph: Digraph, sink: int, spread: int = 2
) -> Configuration:
    """Chips drawn uniformly from 0 to ``spread * outdeg`` per vertex."""
    chips = tuple(
        rng.randint(0, max(1, spread * graph.out_degree(v)))
        for v in graph.vertices()
        if v != sink
    )
    return Configuration(graph, sink, chips)
