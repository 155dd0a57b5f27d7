"""Shared fixtures and independent brute-force oracles.

The oracles here deliberately avoid the library's own algorithms: cycle
detection is a fresh DFS, maximum acyclic sets come from trying all 2^m arc
subsets, and recurrence comes from the accessibility definition itself.
"""

from __future__ import annotations

import itertools
import random

import pytest

from arcfire import (
    Configuration,
    Digraph,
    stabilize,
)

# -- fixture graphs ------------------------------------------------------------

D2_ARCS = [(0, 1), (1, 0)]
C3_ARCS = [(0, 1), (1, 2), (2, 0)]
K3_ARCS = [(0, 1), (1, 0), (1, 2), (2, 1), (0, 2), (2, 0)]
P1_ARCS = [(0, 1)]

D2_TEXT = "2 2\n0 1\n1 0\n"
C3_TEXT = "3 3\n0 1\n1 2\n2 0\n"
K3_TEXT = "3 6\n0 1\n0 2\n1 0\n1 2\n2 0\n2 1\n"
P1_TEXT = "2 1\n0 1\n"


@pytest.fixture
def d2():
    return Digraph(2, D2_ARCS)


@pytest.fixture
def c3():
    return Digraph(3, C3_ARCS)


@pytest.fixture
def k3():
    return Digraph(3, K3_ARCS)


@pytest.fixture
def p1():
    return Digraph(2, P1_ARCS)


def eulerian_pool(count: int, max_n: int, seed: int = 0, max_arcs=None) -> list[Digraph]:
    """Deterministic pool of strongly connected Eulerian graphs."""
    from arcfire import random_eulerian_digraph

    rng = random.Random(seed)
    graphs = []
    while len(graphs) < count:
        n = rng.randint(2, max_n)
        upper = n * (n - 1) if max_arcs is None else min(max_arcs, n * (n - 1))
        m = rng.randint(n, upper)
        try:
            graphs.append(random_eulerian_digraph(rng, n, m))
        except Exception:
            continue
    return graphs


# -- independent oracles ---------------------------------------------------------


def oracle_has_cycle(n: int, arcs) -> bool:
    """Three-color DFS, written from scratch (no Kahn, no library calls)."""
    adj: dict[int, list[int]] = {v: [] for v in range(n)}
    for tail, head in arcs:
        adj[tail].append(head)
    color = {v: 0 for v in range(n)}  # 0 white, 1 on stack, 2 done

    def visit(v: int) -> bool:
        color[v] = 1
        for w in adj[v]:
            if color[w] == 1:
                return True
            if color[w] == 0 and visit(w):
                return True
        color[v] = 2
        return False

    return any(color[v] == 0 and visit(v) for v in range(n))


def oracle_max_acyclic(graph: Digraph) -> tuple[int, set[frozenset]]:
    """All 2^m subsets; returns (max size, the set of optimal subsets)."""
    arcs = list(graph.arcs)
    best, winners = 0, {frozenset()}
    for k in range(1, len(arcs) + 1):
        for combo in itertools.combinations(arcs, k):
            if not oracle_has_cycle(graph.n, combo):
                if k > best:
                    best, winners = k, set()
                if k == best:
                    winners.add(frozenset(combo))
    return best, winners


def oracle_min_fas(graph: Digraph) -> int:
    best, _ = oracle_max_acyclic(graph)
    return graph.m - best


def all_stable_configs(graph: Digraph, sink: int) -> list[Configuration]:
    others = [v for v in graph.vertices() if v != sink]
    ranges = [range(graph.out_degree(v)) for v in others]
    out = []
    for combo in itertools.product(*ranges):
        chips = [0] * (graph.n - 1)
        for v, count in zip(others, combo):
            chips[v if v < sink else v - 1] = count
        out.append(Configuration(graph, sink, tuple(chips)))
    return out


def oracle_recurrent_set(graph: Digraph, sink: int) -> set[Configuration]:
    """Accessibility by definition: c is recurrent iff it is stable and, from
    every stable d, some chip addition leads back to c after stabilizing.

    Saturating with two chips per out-arc makes every vertex fire, so the
    stabilization of d+saturation+x is always recurrent; conversely group
    translation reaches every recurrent c from it with a stable x.  That
    justifies restricting the additions searched to stable x.
    """
    stables = all_stable_configs(graph, sink)
    saturation = Configuration(
        graph,
        sink,
        tuple(2 * graph.out_degree(v) for v in graph.vertices() if v != sink),
    )
    accessible_from = []
    for d in stables:
        base = d + saturation
        accessible_from.append({stabilize(base + x)[0] for x in stables})
    recurrent = set.intersection(*accessible_from)
    assert all(any(c == s for s in stables) for c in recurrent)
    return recurrent


def all_burning_orders(config: Configuration):
    """Every legal complete burning sequence of config (exhaustive DFS).

    A sequence is legal when each fired vertex is active at its turn and no
    vertex fires twice; complete when all non-sink vertices fired.
    """
    from arcfire import burning_config, fire, is_active

    graph, sink = config.graph, config.sink
    work0 = config + burning_config(graph, sink)
    results: list[tuple[int, ...]] = []
    todo = frozenset(v for v in graph.vertices() if v != sink)

    def extend(work, remaining, prefix):
        if not remaining:
            results.append(tuple(prefix))
            return
        for v in sorted(remaining):
            if is_active(work, v):
                extend(fire(work, v), remaining - {v}, prefix + [v])

    extend(work0, todo, [])
    return results
