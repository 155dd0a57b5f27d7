"""Directed multigraph-free graph core.

A :class:`Digraph` is an immutable simple directed graph on vertices
``0..n-1``: no self-loops, no duplicate arcs, antiparallel pairs allowed.
Arcs are stored and iterated in ascending ``(tail, head)`` order so every
algorithm built on top is deterministic.

The edge-list text format understood by :func:`parse_digraph`:

* lines starting with ``#`` are comments and blank lines are skipped;
* an optional directive ``# names a b c ...`` assigns one label per vertex
  (labels may then be used in place of integer ids on arc lines);
* the first data line is ``n m``;
* exactly ``m`` data lines ``u v`` follow, one arc each, 0-based.
"""

from __future__ import annotations

import heapq
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Iterator, Optional

from .errors import GraphParseError, PreconditionError

Arc = tuple[int, int]
VertexSet = frozenset[int]


class Digraph:
    """Immutable simple digraph on ``0..n-1``."""

    __slots__ = (
        "n",
        "arcs",
        "names",
        "_arc_set",
        "_out",
        "_in",
        "_outdeg",
        "_indeg",
        "_hash",
    )

    def __init__(self, n: int, arcs: Iterable[Arc], names: Optional[Iterable[str]] = None):
        if n < 1:
            raise ValueError("a digraph needs at least one vertex")
        arc_list = sorted((int(u), int(v)) for u, v in arcs)
        seen: set[Arc] = set()
        out: list[list[int]] = [[] for _ in range(n)]
        inc: list[list[int]] = [[] for _ in range(n)]
        for u, v in arc_list:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"arc ({u}, {v}) out of range for n={n}")
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if (u, v) in seen:
                raise ValueError(f"duplicate arc ({u}, {v})")
            seen.add((u, v))
            out[u].append(v)
            inc[v].append(u)
        self.n = n
        self.arcs: tuple[Arc, ...] = tuple(arc_list)
        if names is not None:
            names = tuple(str(x) for x in names)
            if len(names) != n:
                raise ValueError(f"expected {n} names, got {len(names)}")
            if len(set(names)) != n:
                raise ValueError("vertex names must be distinct")
        self.names = names
        self._arc_set = frozenset(arc_list)
        self._out = tuple(tuple(sorted(vs)) for vs in out)
        self._in = tuple(tuple(sorted(us)) for us in inc)
        self._outdeg = tuple(len(vs) for vs in self._out)
        self._indeg = tuple(len(us) for us in self._in)
        self._hash = hash((n, self._arc_set))

    # -- basic accessors ---------------------------------------------------

    @property
    def m(self) -> int:
        return len(self.arcs)

    def vertices(self) -> range:
        return range(self.n)

    def has_arc(self, u: int, v: int) -> bool:
        return (u, v) in self._arc_set

    def out_neighbors(self, v: int) -> tuple[int, ...]:
        return self._out[v]

    def in_neighbors(self, v: int) -> tuple[int, ...]:
        return self._in[v]

    def out_degree(self, v: int) -> int:
        return self._outdeg[v]

    def in_degree(self, v: int) -> int:
        return self._indeg[v]

    def arc_set(self) -> frozenset[Arc]:
        return self._arc_set

    def check_vertex(self, v: int) -> int:
        if not (0 <= v < self.n):
            raise PreconditionError(f"vertex {v} out of range for n={self.n}")
        return v

    def label(self, v: int) -> str:
        return self.names[v] if self.names is not None else str(v)

    # -- derived graphs ----------------------------------------------------

    def drop_out_arcs(self, v: int) -> "Digraph":
        """The graph with every arc leaving ``v`` removed."""
        self.check_vertex(v)
        return Digraph(self.n, (a for a in self.arcs if a[0] != v), names=self.names)

    # -- value semantics ---------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Digraph):
            return NotImplemented
        return self.n == other.n and self._arc_set == other._arc_set

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"Digraph(n={self.n}, m={self.m})"

    # -- serialization -----------------------------------------------------

    def to_text(self) -> str:
        lines = [f"{self.n} {self.m}"]
        if self.names is not None:
            lines.append("# names " + " ".join(self.names))
        lines.extend(f"{u} {v}" for u, v in self.arcs)
        return "\n".join(lines) + "\n"


def parse_digraph(text: str) -> Digraph:
    """Parse the edge-list format; raise :class:`GraphParseError` with the
    offending 1-based line number on any malformed input."""
    names: Optional[tuple[str, ...]] = None
    names_line: Optional[int] = None
    header: Optional[tuple[int, int]] = None
    header_line = 0
    arcs: list[Arc] = []
    seen: set[Arc] = set()
    name_to_id: dict[str, int] = {}

    def resolve(token: str, lineno: int) -> int:
        if token in name_to_id:
            return name_to_id[token]
        try:
            return int(token)
        except ValueError:
            raise GraphParseError(f"unknown vertex {token!r}", lineno) from None

    lines = text.splitlines()
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if line.startswith("#"):
            body = line[1:].strip()
            if body.startswith("names") and names is None:
                names = tuple(body.split()[1:])
                names_line = lineno
            continue
        if not line:
            continue
        tokens = line.split()
        if header is None:
            if len(tokens) != 2:
                raise GraphParseError("expected header 'n m'", lineno)
            try:
                n, m = int(tokens[0]), int(tokens[1])
            except ValueError:
                raise GraphParseError("expected integer header 'n m'", lineno) from None
            if n < 1:
                raise GraphParseError(f"vertex count must be positive, got {n}", lineno)
            if m < 0:
                raise GraphParseError(f"arc count must be non-negative, got {m}", lineno)
            header = (n, m)
            header_line = lineno
            continue
        n, m = header
        if len(arcs) == m:
            raise GraphParseError(f"expected only {m} arc lines", lineno)
        if len(tokens) != 2:
            raise GraphParseError("expected arc line 'u v'", lineno)
        if name_to_id == {} and names is not None:
            if len(names) != n:
                raise GraphParseError(
                    f"names directive lists {len(names)} labels for {n} vertices", names_line
                )
            name_to_id.update((name, i) for i, name in enumerate(names))
        u, v = resolve(tokens[0], lineno), resolve(tokens[1], lineno)
        if not (0 <= u < n and 0 <= v < n):
            raise GraphParseError(f"arc ({u}, {v}) out of range for n={n}", lineno)
        if u == v:
            raise GraphParseError(f"self-loop at vertex {u}", lineno)
        if (u, v) in seen:
            raise GraphParseError(f"duplicate arc ({u}, {v})", lineno)
        seen.add((u, v))
        arcs.append((u, v))

    if header is None:
        raise GraphParseError("empty input: no 'n m' header", len(lines) or 1)
    n, m = header
    if names is not None and len(names) != n:
        raise GraphParseError(
            f"names directive lists {len(names)} labels for {n} vertices", names_line
        )
    if len(arcs) != m:
        raise GraphParseError(
            f"header promised {m} arcs but found {len(arcs)}", header_line
        )
    return Digraph(n, arcs, names=names)


@dataclass(frozen=True)
class ArcSet:
    """A subset of a parent digraph's arcs, iterated in ascending order."""

    graph: Digraph
    arcs: frozenset[Arc]

    def __post_init__(self) -> None:
        stray = self.arcs - self.graph.arc_set()
        if stray:
            raise PreconditionError(f"arcs not in parent graph: {sorted(stray)}")

    @classmethod
    def of(cls, graph: Digraph, arcs: Iterable[Arc] = ()) -> "ArcSet":
        return cls(graph, frozenset((int(u), int(v)) for u, v in arcs))

    @classmethod
    def full(cls, graph: Digraph) -> "ArcSet":
        return cls(graph, graph.arc_set())

    def sorted(self) -> list[Arc]:
        return sorted(self.arcs)

    def complement(self) -> "ArcSet":
        return ArcSet(self.graph, self.graph.arc_set() - self.arcs)

    def _check_same_parent(self, other: "ArcSet") -> None:
        if self.graph != other.graph:
            raise PreconditionError("arc sets belong to different graphs")

    def union(self, other: "ArcSet") -> "ArcSet":
        self._check_same_parent(other)
        return ArcSet(self.graph, self.arcs | other.arcs)

    def difference(self, other: "ArcSet") -> "ArcSet":
        self._check_same_parent(other)
        return ArcSet(self.graph, self.arcs - other.arcs)

    def __or__(self, other: "ArcSet") -> "ArcSet":
        return self.union(other)

    def __sub__(self, other: "ArcSet") -> "ArcSet":
        return self.difference(other)

    def __contains__(self, arc: Arc) -> bool:
        return arc in self.arcs

    def __len__(self) -> int:
        return len(self.arcs)

    def __iter__(self) -> Iterator[Arc]:
        return iter(self.sorted())

    def __le__(self, other: "ArcSet") -> bool:
        self._check_same_parent(other)
        return self.arcs <= other.arcs


def degrees(graph: Digraph, v: int) -> tuple[int, int]:
    """``(indeg, outdeg)`` of ``v``."""
    graph.check_vertex(v)
    return graph.in_degree(v), graph.out_degree(v)


def is_eulerian(graph: Digraph) -> bool:
    """True iff every vertex has equal in- and out-degree."""
    return all(graph.in_degree(v) == graph.out_degree(v) for v in graph.vertices())


def _reach_all_arcs(graph: Digraph, start: int, reverse: bool = False) -> frozenset[int]:
    neigh = graph.in_neighbors if reverse else graph.out_neighbors
    seen = {start}
    queue = deque([start])
    while queue:
        v = queue.popleft()
        for w in neigh(v):
            if w not in seen:
                seen.add(w)
                queue.append(w)
    return frozenset(seen)


def is_strongly_connected(graph: Digraph) -> bool:
    if graph.n == 1:
        return True
    full = frozenset(graph.vertices())
    return _reach_all_arcs(graph, 0) == full and _reach_all_arcs(graph, 0, reverse=True) == full


def global_sink(graph: Digraph) -> Optional[int]:
    """The unique vertex of out-degree 0 reachable from every vertex, or None."""
    full = frozenset(graph.vertices())
    for v in graph.vertices():
        if graph.out_degree(v) == 0 and _reach_all_arcs(graph, v, reverse=True) == full:
            return v
    return None


def _normalize_arcs(graph: Digraph, arcs: "ArcSet | Iterable[Arc]") -> frozenset[Arc]:
    if isinstance(arcs, ArcSet):
        if arcs.graph != graph:
            raise PreconditionError("arc set belongs to a different graph")
        return arcs.arcs
    out = frozenset((int(u), int(v)) for u, v in arcs)
    stray = out - graph.arc_set()
    if stray:
        raise PreconditionError(f"arcs not in parent graph: {sorted(stray)}")
    return out


def reach(graph: Digraph, arcs: "ArcSet | Iterable[Arc]", start: int) -> VertexSet:
    """Vertices reachable from ``start`` using only the given arcs."""
    graph.check_vertex(start)
    members = _normalize_arcs(graph, arcs)
    adj: dict[int, list[int]] = {}
    for u, v in members:
        adj.setdefault(u, []).append(v)
    seen = {start}
    queue = deque([start])
    while queue:
        v = queue.popleft()
        for w in adj.get(v, ()):
            if w not in seen:
                seen.add(w)
                queue.append(w)
    return frozenset(seen)


def acyclic_order(graph: Digraph, arcs: "ArcSet | Iterable[Arc]") -> Optional[tuple[int, ...]]:
    """A vertex order placing every given arc forward, or None on a cycle.

    The order covers all ``n`` vertices and is deterministic: among ready
    vertices the smallest id goes first.
    """
    members = _normalize_arcs(graph, arcs)
    indeg = [0] * graph.n
    adj: dict[int, list[int]] = {}
    for u, v in sorted(members):
        indeg[v] += 1
        adj.setdefault(u, []).append(v)
    ready = [v for v in graph.vertices() if indeg[v] == 0]
    heapq.heapify(ready)
    order: list[int] = []
    while ready:
        v = heapq.heappop(ready)
        order.append(v)
        for w in adj.get(v, ()):
            indeg[w] -= 1
            if indeg[w] == 0:
                heapq.heappush(ready, w)
    if len(order) != graph.n:
        return None
    return tuple(order)


def is_acyclic_set(graph: Digraph, arcs: "ArcSet | Iterable[Arc]") -> bool:
    return acyclic_order(graph, arcs) is not None


def cuts(graph: Digraph, subset: Iterable[int]) -> tuple[ArcSet, ArcSet]:
    """``(out_cut, in_cut)`` of a vertex subset: arcs leaving it and arcs
    entering it."""
    members = frozenset(int(v) for v in subset)
    for v in members:
        graph.check_vertex(v)
    out_cut = frozenset(a for a in graph.arcs if a[0] in members and a[1] not in members)
    in_cut = frozenset(a for a in graph.arcs if a[0] not in members and a[1] in members)
    return ArcSet(graph, out_cut), ArcSet(graph, in_cut)
