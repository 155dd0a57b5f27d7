"""Acyclic arc sets, cut-stretching, and feedback-arc-set solvers.

An acyclic arc set is the complement of a feedback arc set, so maximizing
one minimizes the other.  On Eulerian digraphs an acyclic arc set can be
re-rooted: repeatedly swapping the in-cut of the root's reachable region
for its out-cut never shrinks the set and ends with every vertex reachable
from the chosen root.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .digraph import (
    Arc,
    ArcSet,
    Digraph,
    acyclic_order,
    cuts,
    is_eulerian,
    is_strongly_connected,
    reach,
)
from .errors import CapExceededError, PreconditionError

# Subset DP over vertex orderings is O(2^n * n); beyond this the table no
# longer fits comfortably in memory.
EXACT_SOLVER_CAP = 22
# Rooted enumeration walks (n-1)! vertex orders.
ROOTED_ENUM_CAP = 8


@dataclass(frozen=True)
class RootedAcyclicSet:
    """An acyclic arc set whose root has no incoming arc inside the set."""

    base: ArcSet
    root: int

    def __post_init__(self) -> None:
        graph = self.base.graph
        graph.check_vertex(self.root)
        if acyclic_order(graph, self.base) is None:
            raise PreconditionError("base arc set contains a cycle")
        if any(head == self.root for _, head in self.base.arcs):
            raise PreconditionError(f"root {self.root} has an incoming arc in the set")

    @property
    def graph(self) -> Digraph:
        return self.base.graph

    def covered(self) -> frozenset[int]:
        return reach(self.graph, self.base, self.root)

    def spans(self) -> bool:
        return len(self.covered()) == self.graph.n


def cut_stretch(graph: Digraph, arcs, root: int) -> ArcSet:
    """One re-rooting step: drop the arcs entering the root's reachable
    region and add every arc leaving it.

    On an Eulerian graph the result is again acyclic and never smaller,
    and the region reachable from ``root`` strictly grows while it is not
    yet the whole vertex set.
    """
    graph.check_vertex(root)
    if not is_eulerian(graph):
        raise PreconditionError("cut-stretch requires an Eulerian digraph")
    current = arcs if isinstance(arcs, ArcSet) else ArcSet.of(graph, arcs)
    if acyclic_order(graph, current) is None:
        raise PreconditionError("cut-stretch requires an acyclic arc set")
    region = reach(graph, current, root)
    out_cut, in_cut = cuts(graph, region)
    return (current - in_cut) | out_cut


def rootify(graph: Digraph, arcs, root: int) -> RootedAcyclicSet:
    """Iterate cut-stretch until every vertex is reachable from ``root``.

    Takes at most n-1 steps on a strongly connected Eulerian graph; a
    stalled region means the graph was not strongly connected.
    """
    current = arcs if isinstance(arcs, ArcSet) else ArcSet.of(graph, arcs)
    everything = frozenset(graph.vertices())
    covered = reach(graph, current, root)
    steps = 0
    while covered != everything:
        current = cut_stretch(graph, current, root)
        grown = reach(graph, current, root)
        if grown == covered:
            raise PreconditionError(
                "cut-stretch stalled: the graph is not strongly connected"
            )
        covered = grown
        steps += 1
        if steps >= graph.n:
            raise RuntimeError("cut-stretch failed to converge within n-1 steps")
    return RootedAcyclicSet(current, root)


def is_sinkable(graph: Digraph, rooted: RootedAcyclicSet, target: int) -> bool:
    """Can ``rooted`` be re-rooted at ``target``?  True iff some arc of the
    graph points at the current root from a vertex the target reaches."""
    graph.check_vertex(target)
    if rooted.base.graph != graph:
        raise PreconditionError("rooted set belongs to a different graph")
    if target == rooted.root:
        raise PreconditionError("target must differ from the current root")
    if not rooted.spans():
        raise PreconditionError("rooted set must reach every vertex from its root")
    region = reach(graph, rooted.base, target)
    return any(tail in region for tail, head in graph.arcs if head == rooted.root)


def maximal_extend(graph: Digraph, arcs) -> ArcSet:
    """Greedily add arcs in ascending (tail, head) order, skipping any that
    would close a cycle.  The result is maximal: no further arc fits."""
    current = arcs if isinstance(arcs, ArcSet) else ArcSet.of(graph, arcs)
    if acyclic_order(graph, current) is None:
        raise PreconditionError("maximal_extend requires an acyclic arc set")
    members = set(current.arcs)
    adj: dict[int, set[int]] = {}
    for u, v in members:
        adj.setdefault(u, set()).add(v)

    def reaches(src: int, dst: int) -> bool:
        stack = [src]
        seen = {src}
        while stack:
            x = stack.pop()
            if x == dst:
                return True
            for y in adj.get(x, ()):
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        return False

    for u, v in graph.arcs:
        if (u, v) in members:
            continue
        if not reaches(v, u):
            members.add((u, v))
            adj.setdefault(u, set()).add(v)
    return ArcSet.of(graph, members)


def exact_memory_estimate(n: int) -> int:
    """Approximate bytes needed by the subset table for an n-vertex solve."""
    return (4 + 1 + 8) * (1 << n)


def max_acyclic_exact(graph: Digraph, max_n: int = EXACT_SOLVER_CAP) -> tuple[int, ArcSet]:
    """Size and witness of a maximum acyclic arc set.

    Subset dynamic programming over vertex orderings: a set is acyclic iff
    all its arcs run forward along some order, so the optimum equals the
    best forward-arc count over all orders.  O(2^n * n) time.
    """
    n = graph.n
    if n > max_n:
        raise CapExceededError(
            f"exact solver capped at n={max_n} (instance has n={n}; the subset "
            f"table would need about {exact_memory_estimate(n):,} bytes)"
        )
    if graph.m == 0:
        return 0, ArcSet.of(graph)

    pred = [0] * n
    for u, v in graph.arcs:
        pred[v] |= 1 << u

    full = 1 << n
    pop = np.zeros(full, dtype=np.uint8)
    for b in range(n):
        pop[1 << b : 1 << (b + 1)] = pop[: 1 << b] + 1
    dp = np.full(full, -1, dtype=np.int32)
    dp[0] = 0
    by_size = np.argsort(pop, kind="stable")
    counts = np.bincount(pop, minlength=n + 1)
    starts = np.concatenate(([0], np.cumsum(counts)))

    for size in range(1, n + 1):
        layer = by_size[starts[size] : starts[size + 1]]
        for v in range(n):
            bit = 1 << v
            with_v = layer[(layer & bit) != 0]
            if with_v.size == 0:
                continue
            prev = with_v ^ bit
            cand = dp[prev] + pop[np.bitwise_and(prev, pred[v])]
            cur = dp[with_v]
            dp[with_v] = np.where(cand > cur, cand, cur)

    best = int(dp[full - 1])

    # Recover one optimal order, preferring small ids at each step.
    subset = full - 1
    tail_first: list[int] = []
    while subset:
        for v in range(n):
            bit = 1 << v
            if subset & bit:
                prev = subset ^ bit
                gain = bin(pred[v] & prev).count("1")
                if int(dp[prev]) + gain == int(dp[subset]):
                    tail_first.append(v)
                    subset = prev
                    break
        else:
            raise RuntimeError("subset table backtrack failed")
    order = tuple(reversed(tail_first))
    pos = {v: i for i, v in enumerate(order)}
    witness = ArcSet.of(graph, (a for a in graph.arcs if pos[a[0]] < pos[a[1]]))
    if len(witness) != best:
        raise RuntimeError("witness size disagrees with the subset table")
    return best, witness


def min_fas_exact(graph: Digraph, max_n: int = EXACT_SOLVER_CAP) -> tuple[int, ArcSet]:
    """Minimum feedback arc set: size and witness (removing the witness
    leaves the graph acyclic)."""
    best, keep = max_acyclic_exact(graph, max_n=max_n)
    witness = keep.complement()
    if acyclic_order(graph, witness.complement()) is None:
        raise RuntimeError("feedback witness complement is not acyclic")
    return graph.m - best, witness


def min_fas_heuristic(graph: Digraph) -> tuple[int, ArcSet]:
    """Upper bound on the minimum feedback arc set of an Eulerian digraph.

    Restarts once per root: re-root a greedy maximal acyclic set there,
    re-extend to maximality, and keep the largest set found.  The bound is
    |E| minus that size and is tight whenever some root admits only
    maximum-size rooted sets.
    """
    if not is_eulerian(graph):
        raise PreconditionError("the heuristic requires an Eulerian digraph")
    if not is_strongly_connected(graph):
        raise PreconditionError("the heuristic requires a strongly connected digraph")
    seed = maximal_extend(graph, ())
    best: ArcSet | None = None
    for root in graph.vertices():
        candidate = maximal_extend(graph, rootify(graph, seed, root).base)
        if best is None or len(candidate) > len(best):
            best = candidate
    assert best is not None
    witness = best.complement()
    return len(witness), witness


def _forward_arc_sets(graph: Digraph, root: int) -> set[frozenset[Arc]]:
    """Distinct forward-arc sets over all vertex orders starting at root.

    Every maximal acyclic arc set equals the full forward set of each of
    its topological orders, so this family contains all maximal sets whose
    unique source is ``root``.
    """
    others = [v for v in graph.vertices() if v != root]
    found: set[frozenset[Arc]] = set()
    arcs = graph.arcs
    for perm in itertools.permutations(others):
        pos = {root: 0}
        for i, v in enumerate(perm, start=1):
            pos[v] = i
        found.add(frozenset(a for a in arcs if pos[a[0]] < pos[a[1]]))
    return found


def _closure(graph: Digraph, members: frozenset[Arc]) -> list[set[int]]:
    adj: dict[int, list[int]] = {}
    for u, v in members:
        adj.setdefault(u, []).append(v)
    out: list[set[int]] = []
    for s in graph.vertices():
        seen = {s}
        stack = [s]
        while stack:
            x = stack.pop()
            for y in adj.get(x, ()):
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        out.append(seen)
    return out


def _unique_source(graph: Digraph, members: frozenset[Arc], root: int) -> bool:
    indeg = [0] * graph.n
    for _, v in members:
        indeg[v] += 1
    if indeg[root] != 0:
        return False
    return all(indeg[v] >= 1 for v in graph.vertices() if v != root)


def _is_maximal(graph: Digraph, members: frozenset[Arc]) -> bool:
    closure = _closure(graph, members)
    return all((u, v) in members or u in closure[v] for u, v in graph.arcs)


def _check_rooted_enum(graph: Digraph, root: int, max_n: int) -> None:
    graph.check_vertex(root)
    if graph.n > max_n:
        raise CapExceededError(
            f"rooted enumeration capped at n={max_n} (instance has n={graph.n})"
        )
    if not is_eulerian(graph):
        raise PreconditionError("rooted enumeration requires an Eulerian digraph")
    if not is_strongly_connected(graph):
        raise PreconditionError("rooted enumeration requires a strongly connected digraph")


def enumerate_rooted_maximal(
    graph: Digraph, root: int, max_n: int = ROOTED_ENUM_CAP
) -> list[RootedAcyclicSet]:
    """All maximal acyclic arc sets whose unique source is ``root``,
    in a deterministic order."""
    _check_rooted_enum(graph, root, max_n)
    keep = [
        members
        for members in _forward_arc_sets(graph, root)
        if _unique_source(graph, members, root) and _is_maximal(graph, members)
    ]
    keep.sort(key=sorted)
    return [RootedAcyclicSet(ArcSet(graph, members), root) for members in keep]


def count_maximum_rooted(graph: Digraph, root: int, max_n: int = ROOTED_ENUM_CAP) -> int:
    """How many maximum-size acyclic arc sets have ``root`` as their unique
    source.  On a strongly connected Eulerian graph this count does not
    depend on the root."""
    _check_rooted_enum(graph, root, max_n)
    best, _ = max_acyclic_exact(graph)
    return sum(
        1
        for members in _forward_arc_sets(graph, root)
        if len(members) == best and _unique_source(graph, members, root)
    )
