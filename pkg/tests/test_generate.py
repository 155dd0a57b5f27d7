import random

import pytest

from arcfire import (
    InfeasibleParameterError,
    global_sink,
    is_eulerian,
    is_strongly_connected,
    random_configuration,
    random_digraph,
    random_eulerian_digraph,
    random_global_sink_digraph,
)


def test_random_digraph_is_seed_deterministic():
    a = random_digraph(random.Random(5), 6, 10)
    b = random_digraph(random.Random(5), 6, 10)
    assert a == b
    assert a.n == 6 and a.m == 10


def test_random_digraph_infeasible():
    with pytest.raises(InfeasibleParameterError):
        random_digraph(random.Random(0), 2, 3)


def test_random_eulerian_properties():
    ## not every (n, m) admits a simple Eulerian digraph (n=3, m=5 does not),
    ## so infeasible draws are skipped rather than treated as failures
    rng = random.Random(1)
    built = 0
    while built < 30:
        n = rng.randint(2, 8)
        m = rng.randint(n, min(3 * n, n * (n - 1)))
        try:
            graph = random_eulerian_digraph(rng, n, m)
        except InfeasibleParameterError:
            continue
        built += 1
        assert graph.n == n and graph.m == m
        assert is_eulerian(graph)
        assert is_strongly_connected(graph)


def test_random_eulerian_infeasible_cases():
    rng = random.Random(2)
    with pytest.raises(InfeasibleParameterError):
        random_eulerian_digraph(rng, 3, 1)  # a single arc is never balanced
    with pytest.raises(InfeasibleParameterError):
        random_eulerian_digraph(rng, 2, 3)  # more arcs than pairs
    with pytest.raises(InfeasibleParameterError):
        random_eulerian_digraph(rng, 4, 2)  # too few arcs to reach everyone


def test_random_global_sink_instances():
    rng = random.Random(3)
    for _ in range(30):
        n = rng.randint(2, 8)
        graph, sink = random_global_sink_digraph(rng, n, rng.randint(n - 1, 2 * n))
        assert global_sink(graph) == sink


def test_random_configuration_bounds():
    rng = random.Random(4)
    graph, sink = random_global_sink_digraph(rng, 6, 10)
    for _ in range(20):
        config = random_configuration(rng, graph, sink, spread=2)
        for v in graph.vertices():
            if v != sink:
                assert 0 <= config.get(v) <= max(1, 2 * graph.out_degree(v))
