"""Balance any digraph into an Eulerian one, preserving feedback-arc-set
structure.

Each vertex sending more than it receives gets compensating two-arc paths
from a fresh hub through fresh midpoints; each vertex receiving more than
it sends gets paths back to the hub.  With d the total out-surplus, the
lifted graph gains 2d+1 vertices and 4d arcs, its maximum acyclic arc set
grows by exactly 3d, and an optimum of the lifted instance maps back to an
optimum of the original by arithmetic alone.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .acyclic import cut_stretch
from .digraph import Arc, ArcSet, Digraph, acyclic_order, is_eulerian, reach
from .errors import PreconditionError


@dataclass(frozen=True)
class EulerianizedInstance:
    original: Digraph
    lifted: Digraph
    hub: Optional[int]  # fresh global hub, absent when the input was Eulerian
    d: int  # total out-degree surplus of the original
    vertex_map: tuple[int, ...]  # original vertex id -> lifted vertex id

    def __post_init__(self) -> None:
        if not is_eulerian(self.lifted):
            raise PreconditionError("lifted graph must be Eulerian")
        if self.hub is None:
            if self.d != 0 or self.lifted != self.original:
                raise PreconditionError("hub-less instance must be the identity lift")
        else:
            if self.lifted.n != self.original.n + 2 * self.d + 1:
                raise PreconditionError("lifted graph has the wrong vertex count")
            if self.lifted.m != self.original.m + 4 * self.d:
                raise PreconditionError("lifted graph has the wrong arc count")


def eulerianize(graph: Digraph) -> EulerianizedInstance:
    """Lift ``graph`` to an Eulerian digraph.  Eulerian input is returned
    unchanged (no hub, d = 0); original vertices always keep their ids."""
    identity = tuple(graph.vertices())
    surplus = [graph.out_degree(v) - graph.in_degree(v) for v in graph.vertices()]
    d = sum(x for x in surplus if x > 0)
    if d == 0:
        return EulerianizedInstance(graph, graph, None, 0, identity)

    hub = graph.n
    next_id = graph.n + 1
    arcs: list[Arc] = list(graph.arcs)
    for v in graph.vertices():
        for _ in range(abs(surplus[v])):
            w = next_id
            next_id += 1
            if surplus[v] > 0:
                # v sends more than it receives: feed it from the hub.
                arcs.append((hub, w))
                arcs.append((w, v))
            else:
                # v receives more than it sends: drain it to the hub.
                arcs.append((v, w))
                arcs.append((w, hub))
    lifted = Digraph(next_id, arcs)
    return EulerianizedInstance(graph, lifted, hub, d, identity)


def recover_minfas(instance: EulerianizedInstance, lifted_minfas: int) -> int:
    """Map the lifted minimum-feedback-arc-set size back to the original:
    the lifted optimum exceeds the original's by exactly d."""
    if lifted_minfas < 0:
        raise PreconditionError("feedback arc set size cannot be negative")
    return (
        lifted_minfas
        + 3 * instance.d
        + instance.original.m
        - instance.lifted.m
    )


def recover_witness(instance: EulerianizedInstance, lifted_witness: ArcSet) -> ArcSet:
    """Map a feedback arc set of the lifted graph to one of the original.

    The complement is re-rooted at the hub so that no kept arc enters it;
    dropping everything incident to added vertices then leaves an acyclic
    arc set of the original, whose complement is the answer.  Feeding in a
    minimum witness of the lifted graph yields a minimum witness of the
    original.
    """
    lifted = instance.lifted
    if lifted_witness.graph != lifted:
        raise PreconditionError("witness does not belong to the lifted graph")
    keep = lifted_witness.complement()
    if acyclic_order(lifted, keep) is None:
        raise PreconditionError("witness complement must be acyclic")
    if instance.hub is None:
        return ArcSet.of(instance.original, lifted_witness.arcs)

    hub = instance.hub
    covered = reach(lifted, keep, hub)
    for _ in range(lifted.n + 1):
        keep = cut_stretch(lifted, keep, hub)
        grown = reach(lifted, keep, hub)
        if grown == covered:
            break
        covered = grown
    else:
        raise RuntimeError("cut-stretch failed to reach a fixed point")

    n = instance.original.n
    restricted = frozenset(a for a in keep.arcs if a[0] < n and a[1] < n)
    kept_original = ArcSet.of(instance.original, restricted)
    if acyclic_order(instance.original, kept_original) is None:
        raise RuntimeError("restricted witness complement is not acyclic")
    return kept_original.complement()


def lifted_to_text(instance: EulerianizedInstance) -> str:
    """Edge-list text of the lifted graph with the vertex map in trailing
    comments (ignored by the parser, so the file round-trips)."""
    lines = [instance.lifted.to_text().rstrip("\n")]
    lines.append(f"# d {instance.d}")
    if instance.hub is not None:
        lines.append(f"# hub {instance.hub}")
    for v in instance.original.vertices():
        lines.append(f"# map {v} -> {instance.vertex_map[v]}")
    return "\n".join(lines) + "\n"
