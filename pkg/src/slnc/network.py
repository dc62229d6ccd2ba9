"""Acyclic single-source multicast multigraphs with named channels.

Covers the line-oriented text format, unit-capacity max-flow (sink cuts,
edge-set cuts), and enumeration of the topology-based wiretap collection.
Flows explore channels in declaration order so that every derived quantity
is deterministic.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import (
    CycleDetected,
    DuplicateEdgeId,
    EmptySet,
    ParseError,
    SecurityLevelTooLarge,
    UnknownEdge,
    UnknownSink,
    UnreachableSink,
)
from .field import FieldSpec


@dataclass(frozen=True)
class Edge:
    id: str
    tail: str
    head: str


@dataclass(frozen=True)
class WiretapCollection:
    """A family of same-size channel sets, in lexicographic order of sorted ids.

    kind is "cut" for the topology collection (size-r sets whose min cut
    from the source equals r) and "rank" for the code collection (size-r
    sets whose kernel matrix has rank r).
    """

    r: int
    kind: str
    sets: tuple[tuple[str, ...], ...]

    def __contains__(self, item: Sequence[str]) -> bool:
        return tuple(sorted(item)) in set(self.sets)

    def __len__(self) -> int:
        return len(self.sets)


class Network:
    """Validated acyclic single-source multicast network over GF(q)."""

    def __init__(self, field: FieldSpec, edges: Sequence[Edge], source: str, sinks: Sequence[str]):
        self.field = field
        self.edges: tuple[Edge, ...] = tuple(edges)
        self.source = source
        self.sinks: tuple[str, ...] = tuple(sinks)
        self._validate_names()

        names: list[str] = [source]
        for e in self.edges:
            for name in (e.tail, e.head):
                if name not in names:
                    names.append(name)
        for t in self.sinks:
            if t not in names:
                names.append(t)
        self.nodes: tuple[str, ...] = tuple(names)

        self._edge_by_id = {e.id: e for e in self.edges}
        self._out: dict[str, tuple[Edge, ...]] = {
            v: tuple(e for e in self.edges if e.tail == v) for v in self.nodes
        }
        self._in: dict[str, tuple[Edge, ...]] = {
            v: tuple(e for e in self.edges if e.head == v) for v in self.nodes
        }
        self._topo_index = self._topological_index()
        self._check_reachability()

    # -- validation --------------------------------------------------------

    def _validate_names(self) -> None:
        seen: set[str] = set()
        for e in self.edges:
            if e.id in seen:
                raise DuplicateEdgeId(f"channel id {e.id} declared twice")
            seen.add(e.id)
            if e.id.startswith("__"):
                raise ParseError(f"channel id {e.id} uses the reserved '__' prefix")
            if e.head == self.source:
                raise ParseError(f"channel {e.id} enters the source node")
        if not self.sinks:
            raise ParseError("at least one sink is required")
        if len(set(self.sinks)) != len(self.sinks):
            raise ParseError("duplicate sink declaration")
        if self.source in self.sinks:
            raise ParseError("the source cannot be a sink")

    def _topological_index(self) -> dict[str, int]:
        indegree = {v: len(self._in[v]) for v in self.nodes}
        order: list[str] = []
        ready = deque(v for v in self.nodes if indegree[v] == 0)
        while ready:
            v = ready.popleft()
            order.append(v)
            for e in self._out[v]:
                indegree[e.head] -= 1
                if indegree[e.head] == 0:
                    ready.append(e.head)
        if len(order) != len(self.nodes):
            raise CycleDetected("the channel graph contains a directed cycle")
        return {v: i for i, v in enumerate(order)}

    def _check_reachability(self) -> None:
        seen = {self.source}
        stack = [self.source]
        while stack:
            v = stack.pop()
            for e in self._out[v]:
                if e.head not in seen:
                    seen.add(e.head)
                    stack.append(e.head)
        for t in self.sinks:
            if t not in seen:
                raise UnreachableSink(f"sink {t} is unreachable from {self.source}")

    # -- access --------------------------------------------------------------

    def edge(self, edge_id: str) -> Edge:
        try:
            return self._edge_by_id[edge_id]
        except KeyError:
            raise UnknownEdge(f"no channel named {edge_id}") from None

    def in_edges(self, node: str) -> tuple[Edge, ...]:
        return self._in.get(node, ())

    def out_edges(self, node: str) -> tuple[Edge, ...]:
        return self._out.get(node, ())

    def topo_edges(self) -> list[Edge]:
        """Edges sorted by topological position of the tail, then declaration."""
        decl = {e.id: i for i, e in enumerate(self.edges)}
        return sorted(self.edges, key=lambda e: (self._topo_index[e.tail], decl[e.id]))

    def __repr__(self) -> str:
        return (
            f"Network({self.field}, |E|={len(self.edges)}, source={self.source}, "
            f"sinks={list(self.sinks)})"
        )


# -- text format ---------------------------------------------------------------

def parse_network(text: str) -> Network:
    """Parse the line-oriented network format.

    Lines hold whitespace-separated tokens; '#' starts a comment.  Exactly
    one `field q` and one `source s` line are required, plus at least one
    `sink t` line and any number of `edge id tail head` lines.
    """
    field_q: int | None = None
    source: str | None = None
    sinks: list[str] = []
    edges: list[Edge] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        keyword = tokens[0]
        if keyword == "field":
            if len(tokens) != 2:
                raise ParseError(f"line {lineno}: field takes one argument")
            if field_q is not None:
                raise ParseError(f"line {lineno}: duplicate field line")
            try:
                field_q = int(tokens[1])
            except ValueError:
                raise ParseError(f"line {lineno}: field size must be an integer") from None
        elif keyword == "source":
            if len(tokens) != 2:
                raise ParseError(f"line {lineno}: source takes one argument")
            if source is not None:
                raise ParseError(f"line {lineno}: duplicate source line")
            source = tokens[1]
        elif keyword == "sink":
            if len(tokens) != 2:
                raise ParseError(f"line {lineno}: sink takes one argument")
            sinks.append(tokens[1])
        elif keyword == "edge":
            if len(tokens) != 4:
                raise ParseError(f"line {lineno}: edge takes id, tail, head")
            edges.append(Edge(id=tokens[1], tail=tokens[2], head=tokens[3]))
        else:
            raise ParseError(f"line {lineno}: unknown keyword {keyword!r}")
    if field_q is None:
        raise ParseError("missing field line")
    if source is None:
        raise ParseError("missing source line")
    if not sinks:
        raise ParseError("missing sink line")
    try:
        field = FieldSpec(field_q)
    except ValueError as exc:
        raise ParseError(f"bad field size: {exc}") from None
    return Network(field=field, edges=edges, source=source, sinks=sinks)


def serialize_network(net: Network) -> str:
    lines = [f"field {net.field.q}", f"source {net.source}"]
    lines += [f"sink {t}" for t in net.sinks]
    lines += [f"edge {e.id} {e.tail} {e.head}" for e in net.edges]
    return "\n".join(lines) + "\n"


# -- unit-capacity max-flow ------------------------------------------------------

class _FlowGraph:
    """Augmenting-path max-flow; arcs explored in insertion order."""

    def __init__(self) -> None:
        self._to: list[object] = []
        self._cap: list[int] = []
        self._adj: dict[object, list[int]] = {}

    def add_node(self, u: object) -> None:
        self._adj.setdefault(u, [])

    def add_arc(self, u: object, v: object) -> int:
        self.add_node(u)
        self.add_node(v)
        idx = len(self._to)
        self._to.append(v)
        self._cap.append(1)
        self._adj[u].append(idx)
        self._to.append(u)
        self._cap.append(0)
        self._adj[v].append(idx + 1)
        return idx

    def flow_on(self, arc: int) -> int:
        return self._cap[arc ^ 1]

    def max_flow(self, s: object, t: object, limit: int | None = None) -> int:
        if s not in self._adj or t not in self._adj:
            return 0
        total = 0
        while limit is None or total < limit:
            parent = self._bfs(s, t)
            if parent is None:
                break
            node = t
            while node != s:
                arc = parent[node]
                self._cap[arc] -= 1
                self._cap[arc ^ 1] += 1
                node = self._to[arc ^ 1]
            total += 1
        return total

    def _bfs(self, s: object, t: object) -> dict[object, int] | None:
        parent: dict[object, int] = {}
        seen = {s}
        queue: deque[object] = deque([s])
        while queue:
            u = queue.popleft()
            for arc in self._adj[u]:
                v = self._to[arc]
                if self._cap[arc] <= 0 or v in seen:
                    continue
                seen.add(v)
                parent[v] = arc
                if v == t:
                    return parent
                queue.append(v)
        return None


def _sink_flow_graph(net: Network) -> tuple[_FlowGraph, list[int]]:
    g = _FlowGraph()
    for v in net.nodes:
        g.add_node(v)
    arcs = [g.add_arc(e.tail, e.head) for e in net.edges]
    return g, arcs


def min_cut_to_sink(net: Network, t: str) -> int:
    """Maximum number of edge-disjoint source-to-sink paths (= min cut size)."""
    if t not in net.sinks:
        raise UnknownSink(f"{t} is not a declared sink")
    g, _ = _sink_flow_graph(net)
    return g.max_flow(net.source, t)


def c_min(net: Network) -> int:
    """Multicast capacity: the smallest sink min-cut."""
    return min(min_cut_to_sink(net, t) for t in net.sinks)


def edge_disjoint_paths(net: Network, t: str, count: int) -> list[list[str]]:
    """The first `count` edge-disjoint source-to-t paths of the deterministic flow.

    Paths are extracted by walking flow-carrying channels in declaration
    order, so repeated runs yield identical path lists.
    """
    if t not in net.sinks:
        raise UnknownSink(f"{t} is not a declared sink")
    g, arcs = _sink_flow_graph(net)
    reached = g.max_flow(net.source, t, limit=count)
    if reached < count:
        raise ValueError(f"only {reached} edge-disjoint paths to {t}, need {count}")
    flowing: dict[str, list[Edge]] = {}
    for e, arc in zip(net.edges, arcs):
        if g.flow_on(arc):
            flowing.setdefault(e.tail, []).append(e)
    paths: list[list[str]] = []
    used: set[str] = set()
    for _ in range(count):
        node = net.source
        path: list[str] = []
        while node != t:
            step = next(e for e in flowing.get(node, ()) if e.id not in used)
            used.add(step.id)
            path.append(step.id)
            node = step.head
        paths.append(path)
    return paths


_VIRTUAL_SINK = ("virtual-sink",)


def min_cut_to_edges(net: Network, edge_ids: Iterable[str]) -> int:
    """Min cut between the source and a channel set.

    Every channel e = (u, v) is split into u -> x_e -> v with unit arcs;
    each wiretapped channel's split node gains an arc to a virtual sink.
    The value is the max-flow from the source to that sink.
    """
    ids = list(edge_ids)
    if not ids:
        raise EmptySet("the wiretapped channel set must be nonempty")
    for eid in ids:
        net.edge(eid)  # raises UnknownEdge
    g = _FlowGraph()
    g.add_node(net.source)
    for e in net.edges:
        mid = ("split", e.id)
        g.add_arc(e.tail, mid)
        g.add_arc(mid, e.head)
    for eid in sorted(set(ids)):
        g.add_arc(("split", eid), _VIRTUAL_SINK)
    return g.max_flow(net.source, _VIRTUAL_SINK)


def enumerate_topology_wiretap_sets(net: Network, r: int) -> WiretapCollection:
    """All size-r channel sets whose source min-cut equals r (topology only)."""
    capacity = c_min(net)
    if not 1 <= r < capacity:
        raise SecurityLevelTooLarge(
            f"security level must satisfy 1 <= r < C_min = {capacity}, got {r}"
        )
    ids = sorted(e.id for e in net.edges)
    sets = tuple(
        combo
        for combo in itertools.combinations(ids, r)
        if min_cut_to_edges(net, combo) == r
    )
    return WiretapCollection(r=r, kind="cut", sets=sets)
