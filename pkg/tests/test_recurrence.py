import itertools
import random

import pytest

from arcfire import (
    Configuration,
    Digraph,
    NotRecurrentError,
    PreconditionError,
    burning_config,
    burning_sequence,
    canonical_recurrent,
    config_from_arcset,
    enumerate_minimal_recurrent,
    enumerate_recurrent,
    enumerate_rooted_maximal,
    fire,
    firing_graph,
    group_add,
    group_order,
    is_active,
    is_minimal_recurrent,
    is_recurrent,
    max_acyclic_exact,
    minrec_brute,
    minrec_exact,
    minrec_witness,
    neutral_config,
    parse_digraph,
    reduced_laplacian,
    zero_config,
)

from conftest import all_stable_configs, eulerian_pool, oracle_recurrent_set


def all_stabilization_runs(config):
    """Exhaustive DFS over every legal firing choice until stable."""
    runs = []

    def extend(work, prefix):
        active = [v for v in work.graph.vertices() if is_active(work, v)]
        if not active:
            runs.append(tuple(prefix))
            return
        for v in active:
            extend(fire(work, v), prefix + [v])

    extend(config, [])
    return runs


# -- Laplacian and group order ---------------------------------------------------


def test_reduced_laplacian_fixture(k3, c3):
    lap = reduced_laplacian(k3, 0)
    assert lap.vertices == (1, 2)
    assert lap.rows == ((-2, 1), (1, -2))
    assert lap.determinant() == 3
    assert reduced_laplacian(c3, 1).rows == ((-1, 0), (1, -1))


def test_group_order_fixtures(k3, c3, d2):
    assert group_order(k3, 0) == 3
    assert group_order(c3, 0) == 1
    assert group_order(d2, 0) == 1


def test_group_order_rejects_singular():
    ## vertex 2 has no out-arc, so its Laplacian row vanishes
    dead_end = Digraph(3, [(1, 0)])
    with pytest.raises(PreconditionError):
        group_order(dead_end, 0)


def test_group_order_counts_recurrent_configs():
    for graph in eulerian_pool(10, max_n=6, seed=31, max_arcs=14):
        for sink in graph.vertices():
            assert len(enumerate_recurrent(graph, sink)) == group_order(graph, sink)


# -- probe configurations ----------------------------------------------------------


def test_burning_config_fixtures(k3, c3, d2):
    assert burning_config(k3, 0).chips == (1, 1)
    assert burning_config(c3, 0).chips == (1, 0)
    assert burning_config(d2, 0).chips == (1,)


def test_burning_config_requires_eulerian(p1):
    with pytest.raises(PreconditionError):
        burning_config(p1, 0)


def test_neutral_config_fixtures(k3, c3, d2):
    ## confirmed against the stabilization oracle: the doubled saturation
    ## on these graphs stabilizes to all-zero, so epsilon = 2*outdeg
    assert neutral_config(k3, 0).chips == (3, 3)
    assert neutral_config(c3, 0).chips == (2, 2)
    assert neutral_config(d2, 0).chips == (2,)
    assert neutral_config(k3, 0, doubled=False).chips == (1, 1)


def test_neutral_config_is_strictly_superdiagonal():
    ## epsilon(v) >= outdeg(v)+1 makes every vertex fire during the test
    rng = random.Random(41)
    from arcfire import random_global_sink_digraph

    for _ in range(20):
        graph, sink = random_global_sink_digraph(rng, rng.randint(2, 7), 9)
        eps = neutral_config(graph, sink)
        for v in graph.vertices():
            if v != sink:
                assert eps.get(v) >= graph.out_degree(v) + 1


# -- recurrence tests -------------------------------------------------------------


def test_is_recurrent_fixtures(k3, c3, d2):
    assert is_recurrent(Configuration(k3, 0, (1, 0)))
    assert is_recurrent(Configuration(k3, 0, (0, 1)))
    assert is_recurrent(Configuration(k3, 0, (1, 1)))
    assert not is_recurrent(Configuration(k3, 0, (0, 0)))
    assert is_recurrent(Configuration(c3, 0, (0, 0)))
    assert is_recurrent(Configuration(d2, 0, (0,)))


def test_recurrence_methods_agree_with_accessibility_oracle():
    graphs = [Digraph(2, [(0, 1), (1, 0)]), Digraph(3, [(0, 1), (1, 2), (2, 0)])]
    graphs += eulerian_pool(5, max_n=5, seed=32, max_arcs=9)
    for graph in graphs:
        sink = 0
        truth = oracle_recurrent_set(graph, sink)
        for config in all_stable_configs(graph, sink):
            expected = config in truth
            assert is_recurrent(config, method="burning") == expected
            assert is_recurrent(config, method="neutral") == expected
            assert is_recurrent(config, method="neutral", doubled=False) == expected


def test_is_recurrent_rejects_unstable(k3):
    with pytest.raises(PreconditionError):
        is_recurrent(Configuration(k3, 0, (5, 0)))


# -- burning sequences and firing graphs ----------------------------------


def test_burning_sequence_fixtures(k3):
    assert burning_sequence(Configuration(k3, 0, (1, 1))) == (1, 2)
    assert burning_sequence(Configuration(k3, 0, (1, 0))) == (1, 2)
    assert burning_sequence(Configuration(k3, 0, (0, 1))) == (2, 1)


def test_burning_sequence_reports_unburnt(k3):
    with pytest.raises(NotRecurrentError) as info:
        burning_sequence(Configuration(k3, 0, (0, 0)))
    assert info.value.unburnt == frozenset({1, 2})


def test_burning_exactness_every_legal_run():
    ## any maximal run from c+beta fires each non-sink vertex exactly once
    graphs = eulerian_pool(4, max_n=5, seed=33, max_arcs=9)
    graphs += eulerian_pool(2, max_n=6, seed=34, max_arcs=12)
    for graph in graphs:
        beta = burning_config(graph, 0)
        others = sorted(v for v in graph.vertices() if v != 0)
        for config in enumerate_recurrent(graph, 0):
            runs = all_stabilization_runs(config + beta)
            assert runs
            for run in runs:
                assert sorted(run) == others


def test_firing_graph_fixture(k3):
    config = Configuration(k3, 0, (1, 0))
    fgraph = firing_graph(config, (1, 2))
    assert fgraph.arcs == frozenset({(0, 1), (0, 2), (1, 2)})
    assert fgraph.rooted().root == 0
    text = fgraph.to_text()
    assert parse_digraph(text).arcs == ((0, 1), (0, 2), (1, 2))
    assert "# order 1 2" in text


def test_firing_graph_rejects_illegal_order(k3):
    with pytest.raises(PreconditionError):
        firing_graph(Configuration(k3, 0, (1, 0)), (2, 1))
    with pytest.raises(PreconditionError):
        firing_graph(Configuration(k3, 0, (1, 0)), (1,))


def test_firing_graph_lower_bound():
    ## c(v) >= outdeg(v) - indeg of v in any firing graph of c
    for graph in eulerian_pool(5, max_n=5, seed=35, max_arcs=9):
        beta = burning_config(graph, 0)
        for config in enumerate_recurrent(graph, 0):
            for run in all_stabilization_runs(config + beta):
                fgraph = firing_graph(config, run)
                indeg = {v: 0 for v in graph.vertices()}
                for _, head in fgraph.arcs:
                    indeg[head] += 1
                for v in graph.vertices():
                    if v != 0:
                        assert config.get(v) >= graph.out_degree(v) - indeg[v]


def test_config_from_arcset_inverts_firing_graph(k3):
    config = Configuration(k3, 0, (1, 0))
    fgraph = firing_graph(config, burning_sequence(config))
    assert config_from_arcset(k3, 0, fgraph.rooted()) == config


# -- minimal recurrent configurations and the bijection --------------------------


def test_is_minimal_recurrent_fixtures(k3, c3):
    assert is_minimal_recurrent(Configuration(k3, 0, (1, 0)))
    assert is_minimal_recurrent(Configuration(k3, 0, (0, 1)))
    assert not is_minimal_recurrent(Configuration(k3, 0, (1, 1)))
    assert not is_minimal_recurrent(Configuration(k3, 0, (0, 0)))
    assert is_minimal_recurrent(Configuration(c3, 0, (0, 0)))


def test_enumerate_recurrent_fixture(k3):
    found = {c.chips for c in enumerate_recurrent(k3, 0)}
    assert found == {(1, 0), (0, 1), (1, 1)}


def test_enumerate_minimal_recurrent_fixture(k3, c3, d2):
    assert {c.chips for c in enumerate_minimal_recurrent(k3, 0)} == {(1, 0), (0, 1)}
    assert {c.chips for c in enumerate_minimal_recurrent(c3, 0)} == {(0, 0)}
    assert {c.chips for c in enumerate_minimal_recurrent(d2, 0)} == {(0,)}


def test_minimal_recurrent_matches_rooted_arc_sets():
    ## the bijection: counts agree, and the map is the degree-difference formula
    for graph in eulerian_pool(8, max_n=6, seed=36, max_arcs=12):
        for sink in graph.vertices():
            minimal = enumerate_minimal_recurrent(graph, sink)
            rooted = enumerate_rooted_maximal(graph, sink)
            assert len(minimal) == len(rooted)
            mapped = {config_from_arcset(graph, sink, r) for r in rooted}
            assert mapped == set(minimal)


def test_minimal_config_has_unique_firing_graph():
    for graph in eulerian_pool(5, max_n=5, seed=37, max_arcs=9):
        beta = burning_config(graph, 0)
        for config in enumerate_recurrent(graph, 0):
            runs = all_stabilization_runs(config + beta)
            graphs = {firing_graph(config, run).arcs for run in runs}
            if is_minimal_recurrent(config):
                assert len(graphs) == 1


def test_chip_count_formula_of_minimal_configs():
    for graph in eulerian_pool(6, max_n=6, seed=38, max_arcs=12):
        for sink in graph.vertices():
            for config in enumerate_minimal_recurrent(graph, sink):
                order = burning_sequence(config)
                size = len(firing_graph(config, order).arcs)
                assert config.total == graph.m - graph.out_degree(sink) - size


# -- minimum recurrent chips ------------------------------------------------------


def test_minrec_fixtures(k3, c3, d2):
    assert minrec_exact(k3, 0) == 1
    assert minrec_exact(c3, 0) == 0
    assert minrec_exact(d2, 0) == 0


def test_minrec_identity_with_max_acyclic(k3, c3, d2):
    for graph, expected in ((k3, 4), (c3, 2), (d2, 1)):
        total = minrec_exact(graph, 0) + max_acyclic_exact(graph)[0]
        assert total == expected
        assert total == sum(graph.out_degree(v) for v in graph.vertices() if v != 0)


def test_minrec_exact_agrees_with_brute():
    for graph in eulerian_pool(8, max_n=6, seed=39, max_arcs=12):
        for sink in graph.vertices():
            assert minrec_exact(graph, sink) == minrec_brute(graph, sink)


def test_minrec_witness_is_minimal(k3):
    witness = minrec_witness(k3, 0)
    assert witness.total == 1
    assert is_minimal_recurrent(witness)
    for graph in eulerian_pool(4, max_n=5, seed=40):
        w = minrec_witness(graph, 0)
        assert w.total == minrec_exact(graph, 0)
        assert is_recurrent(w)


def test_minrec_requires_eulerian(p1):
    with pytest.raises(PreconditionError):
        minrec_exact(p1, 0)


def test_minimum_count_is_sink_independent():
    for graph in eulerian_pool(6, max_n=6, seed=42, max_arcs=12):
        counts = set()
        for sink in graph.vertices():
            best = minrec_exact(graph, sink)
            winners = [c for c in enumerate_recurrent(graph, sink) if c.total == best]
            counts.add(len(winners))
        assert len(counts) == 1


# -- the group on recurrent configurations -----------------------------------------


def test_group_add_table_on_k3(k3):
    e = Configuration(k3, 0, (1, 1))
    a = Configuration(k3, 0, (1, 0))
    b = Configuration(k3, 0, (0, 1))
    assert group_add(a, b) == e
    assert group_add(a, a) == b
    assert group_add(b, b) == a
    for x in (e, a, b):
        assert group_add(e, x) == x


def test_group_add_requires_recurrent_operands(k3):
    with pytest.raises(PreconditionError):
        group_add(Configuration(k3, 0, (0, 0)), Configuration(k3, 0, (1, 1)))


def test_group_laws_on_small_instances():
    for graph in eulerian_pool(3, max_n=5, seed=43, max_arcs=8):
        recurrent = enumerate_recurrent(graph, 0)
        if len(recurrent) > 6:
            recurrent = recurrent[:6]
        for a, b in itertools.combinations(recurrent, 2):
            assert group_add(a, b) == group_add(b, a)
        for a, b, c in itertools.combinations(recurrent, 3):
            assert group_add(group_add(a, b), c) == group_add(a, group_add(b, c))
        identity = canonical_recurrent(zero_config(graph, 0))
        for r in recurrent:
            assert group_add(identity, r) == r


def test_canonical_recurrent_fixes_recurrent_inputs():
    for graph in eulerian_pool(4, max_n=5, seed=44, max_arcs=9):
        for r in enumerate_recurrent(graph, 0):
            assert canonical_recurrent(r) == r
    ## and is idempotent from arbitrary starting chips
    k3 = Digraph(3, [(0, 1), (1, 0), (1, 2), (2, 1), (0, 2), (2, 0)])
    rep = canonical_recurrent(Configuration(k3, 0, (7, 2)))
    assert is_recurrent(rep)
    assert canonical_recurrent(rep) == rep
