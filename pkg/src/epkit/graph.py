"""Group-labeled graphs and walks.

A labeled graph is an undirected multigraph whose arcs carry one orientation
and one group label. Traversing an arc against its orientation contributes the
inverse label. Walks are sequences of (arc id, direction) steps; direction 1
follows tail to head, -1 the reverse.

Vertex ids are integers. Induced subgraphs keep the original vertex and arc
ids so certificates computed on subgraphs remain meaningful for the host
graph.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Sequence

import networkx as nx

from .errors import InputError
from .groups import (
    GroupElement,
    GroupSpec,
    format_element,
    identity,
    inverse,
    make_element,
    multiply,
    parse_element,
    spec_from_json,
    spec_to_json,
    validate_spec,
)

FORWARD = 1
REVERSE = -1


@dataclass(frozen=True)
class Arc:
    id: int
    tail: int
    head: int
    label: GroupElement

    def other(self, v: int) -> int:
        if v == self.tail:
            return self.head
        if v == self.head:
            return self.tail
        raise InputError(f"vertex {v} is not an endpoint of arc {self.id}")

    @property
    def is_loop(self) -> bool:
        return self.tail == self.head


class LabeledGraph:
    def __init__(self, group: GroupSpec, vertices: Iterable[int], arcs: Iterable[Arc]):
        validate_spec(group)
        self.group = group
        self.vertices: tuple[int, ...] = tuple(sorted(set(vertices)))
        self._vertex_set = frozenset(self.vertices)
        self.arcs: tuple[Arc, ...] = tuple(arcs)
        self._by_id: dict[int, Arc] = {}
        for arc in self.arcs:
            if arc.id in self._by_id:
                raise InputError(f"duplicate arc id {arc.id}")
            if arc.tail not in self._vertex_set or arc.head not in self._vertex_set:
                raise InputError(f"arc {arc.id} has an endpoint outside the vertex set")
            if arc.label.spec != group:
                raise InputError(f"arc {arc.id} label group differs from the graph group")
            self._by_id[arc.id] = arc
        incident: dict[int, list[Arc]] = {v: [] for v in self.vertices}
        for arc in self.arcs:
            incident[arc.tail].append(arc)
            if not arc.is_loop:
                incident[arc.head].append(arc)
        self._incident = {v: tuple(lst) for v, lst in incident.items()}

    @property
    def n(self) -> int:
        return len(self.vertices)

    @property
    def m(self) -> int:
        return len(self.arcs)

    def has_vertex(self, v: int) -> bool:
        return v in self._vertex_set

    def arc(self, arc_id: int) -> Arc:
        try:
            return self._by_id[arc_id]
        except KeyError:
            raise InputError(f"no arc with id {arc_id}") from None

    def incident(self, v: int) -> tuple[Arc, ...]:
        """Arcs touching v, loops included once."""
        try:
            return self._incident[v]
        except KeyError:
            raise InputError(f"no vertex {v}") from None

    def undirected_neighbors(self, v: int) -> tuple[int, ...]:
        seen = {a.other(v) for a in self.incident(v) if not a.is_loop}
        return tuple(sorted(seen))

    def simple_adjacency(self) -> dict[int, tuple[int, ...]]:
        """Loop-free, multiplicity-collapsed adjacency, neighbors sorted."""
        return {v: self.undirected_neighbors(v) for v in self.vertices}

    def induced_subgraph(self, keep: Iterable[int]) -> "LabeledGraph":
        keep_set = set(keep)
        bad = keep_set - self._vertex_set
        if bad:
            raise InputError(f"vertices not in graph: {sorted(bad)}")
        arcs = [a for a in self.arcs if a.tail in keep_set and a.head in keep_set]
        return LabeledGraph(self.group, keep_set, arcs)

    def delete_vertices(self, drop: Iterable[int]) -> "LabeledGraph":
        drop_set = set(drop)
        return self.induced_subgraph(self._vertex_set - drop_set)

    def delete_arcs(self, arc_ids: Iterable[int]) -> "LabeledGraph":
        drop = set(arc_ids)
        return LabeledGraph(self.group, self.vertices, [a for a in self.arcs if a.id not in drop])

    def with_labels(self, labels: dict[int, GroupElement]) -> "LabeledGraph":
        arcs = [
            Arc(a.id, a.tail, a.head, labels.get(a.id, a.label)) for a in self.arcs
        ]
        return LabeledGraph(self.group, self.vertices, arcs)

    def connected_components(self) -> list[frozenset[int]]:
        seen: set[int] = set()
        comps: list[frozenset[int]] = []
        adj = self.simple_adjacency()
        for start in self.vertices:
            if start in seen:
                continue
            comp = {start}
            stack = [start]
            while stack:
                u = stack.pop()
                for w in adj[u]:
                    if w not in comp:
                        comp.add(w)
                        stack.append(w)
            seen |= comp
            comps.append(frozenset(comp))
        return comps

    def __repr__(self) -> str:  # pragma: no cover
        return f"LabeledGraph(n={self.n}, m={self.m}, group={self.group!r})"


# Walks ----------------------------------------------------------------------

@dataclass(frozen=True)
class Walk:
    """A traversal as (arc id, direction) steps. Empty walks are not allowed
    where a cycle is expected; a one-step walk on a loop arc is a cycle."""

    steps: tuple[tuple[int, int], ...]

    def __len__(self) -> int:
        return len(self.steps)


def step_endpoints(g: LabeledGraph, step: tuple[int, int]) -> tuple[int, int]:
    arc_id, direction = step
    arc = g.arc(arc_id)
    if direction == FORWARD:
        return arc.tail, arc.head
    if direction == REVERSE:
        return arc.head, arc.tail
    raise InputError(f"bad step direction {direction}")


def walk_vertices(g: LabeledGraph, walk: Walk) -> list[int]:
    """Vertex sequence visited, length len(walk) + 1."""
    if not walk.steps:
        raise InputError("empty walk has no vertex sequence")
    seq: list[int] = []
    for i, step in enumerate(walk.steps):
        u, w = step_endpoints(g, step)
        if i == 0:
            seq.append(u)
        elif seq[-1] != u:
            raise InputError(f"walk breaks at step {i}: expected {seq[-1]}, arc starts at {u}")
        seq.append(w)
    return seq


def walk_value(g: LabeledGraph, walk: Walk) -> GroupElement:
    value = identity(g.group)
    for step in walk.steps:
        arc = g.arc(step[0])
        lab = arc.label if step[1] == FORWARD else inverse(arc.label)
        if step[1] not in (FORWARD, REVERSE):
            raise InputError(f"bad step direction {step[1]}")
        value = multiply(value, lab)
    return value


def concat_walks(g: LabeledGraph, first: Walk, second: Walk) -> Walk:
    v1 = walk_vertices(g, first)
    v2 = walk_vertices(g, second)
    if v1[-1] != v2[0]:
        raise InputError("walks do not share an endpoint")
    return Walk(first.steps + second.steps)


def is_closed(g: LabeledGraph, walk: Walk) -> bool:
    seq = walk_vertices(g, walk)
    return seq[0] == seq[-1]


def is_cycle(g: LabeledGraph, walk: Walk) -> bool:
    """True for a simple cycle: closed, vertices distinct apart from the
    closure, length >= 1, and a length-2 cycle uses two distinct arcs."""
    if not walk.steps:
        return False
    seq = walk_vertices(g, walk)
    if seq[0] != seq[-1]:
        return False
    interior = seq[:-1]
    if len(set(interior)) != len(interior):
        return False
    if len(walk.steps) == 1:
        return g.arc(walk.steps[0][0]).is_loop
    if len(walk.steps) == 2:
        return walk.steps[0][0] != walk.steps[1][0]
    return True


def is_non_null_cycle(g: LabeledGraph, walk: Walk) -> bool:
    from .groups import is_identity

    return is_cycle(g, walk) and not is_identity(walk_value(g, walk))


def _step_from(g: LabeledGraph, v: int, arc: Arc) -> tuple[int, int]:
    if arc.tail == v:
        return (arc.id, FORWARD)
    return (arc.id, REVERSE)


def canonical_cycle(g: LabeledGraph, walk: Walk) -> tuple:
    """Canonical form of a simple cycle, invariant under rotation and
    reversal: the lexicographically least (vertex, arc id) pair sequence."""
    if not is_cycle(g, walk):
        raise InputError("not a simple cycle")
    seq = walk_vertices(g, walk)[:-1]
    arcs = [s[0] for s in walk.steps]
    L = len(arcs)
    candidates = []
    for r in range(L):
        candidates.append(tuple((seq[(r + i) % L], arcs[(r + i) % L]) for i in range(L)))
    rev_seq = [seq[0]] + [seq[L - i] for i in range(1, L)]
    rev_arcs = [arcs[L - 1 - i] for i in range(L)]
    for r in range(L):
        candidates.append(
            tuple((rev_seq[(r + i) % L], rev_arcs[(r + i) % L]) for i in range(L))
        )
    return min(candidates)


def cycle_from_canonical(g: LabeledGraph, canon: tuple) -> Walk:
    steps = []
    for v, arc_id in canon:
        steps.append(_step_from(g, v, g.arc(arc_id)))
    return Walk(tuple(steps))


# Separations ----------------------------------------------------------------

@dataclass(frozen=True)
class Separation:
    a: frozenset[int]
    b: frozenset[int]

    @property
    def boundary(self) -> frozenset[int]:
        return self.a & self.b

    @property
    def order(self) -> int:
        return len(self.a & self.b)


def validate_separation(g: LabeledGraph, sep: Separation) -> None:
    if sep.a | sep.b != frozenset(g.vertices):
        raise InputError("separation sides do not cover the vertex set")
    a_only = sep.a - sep.b
    b_only = sep.b - sep.a
    for arc in g.arcs:
        ends = {arc.tail, arc.head}
        if ends & a_only and ends & b_only:
            raise InputError(
                f"arc {arc.id} crosses between the private sides of the separation"
            )


# Blocks ---------------------------------------------------------------------

def blocks_and_cut_vertices(g: LabeledGraph) -> tuple[list[frozenset[int]], frozenset[int]]:
    """Biconnected components (as vertex sets) and articulation points of the
    underlying simple graph. Loops are ignored; isolated vertices appear in no
    block."""
    sg = nx.Graph()
    sg.add_nodes_from(g.vertices)
    for arc in g.arcs:
        if not arc.is_loop:
            sg.add_edge(arc.tail, arc.head)
    blocks = [frozenset(c) for c in nx.biconnected_components(sg)]
    blocks.sort(key=lambda b: sorted(b))
    cuts = frozenset(nx.articulation_points(sg))
    return blocks, cuts


# JSON -----------------------------------------------------------------------

def graph_to_json_dict(g: LabeledGraph) -> dict:
    data: dict = {
        "group": spec_to_json(g.group),
        "n": g.n,
        "arcs": [[a.tail, a.head, format_element(a.label)] for a in g.arcs],
    }
    dense = g.vertices == tuple(range(g.n))
    if not dense:
        data["vertices"] = list(g.vertices)
    arc_ids = [a.id for a in g.arcs]
    if arc_ids != list(range(len(arc_ids))):
        data["arc_ids"] = arc_ids
    return data


def graph_from_json_dict(data: object) -> LabeledGraph:
    if not isinstance(data, dict):
        raise InputError("graph JSON must be an object")
    try:
        group = spec_from_json(data["group"])
        raw_arcs = data["arcs"]
    except KeyError as missing:
        raise InputError(f"graph JSON missing key {missing}") from None
    if "vertices" in data:
        vertices = [int(v) for v in data["vertices"]]
    else:
        n = int(data.get("n", 0))
        vertices = list(range(n))
    vertex_set = set(vertices)
    if not isinstance(raw_arcs, list):
        raise InputError("graph JSON arcs must be a list")
    arc_ids = data.get("arc_ids")
    if arc_ids is not None and len(arc_ids) != len(raw_arcs):
        raise InputError("arc_ids length differs from arcs length")
    arcs = []
    for i, entry in enumerate(raw_arcs):
        if not (isinstance(entry, list) and len(entry) == 3):
            raise InputError(f"arc entry {i} must be [tail, head, label]")
        tail, head, label_text = int(entry[0]), int(entry[1]), entry[2]
        if tail not in vertex_set or head not in vertex_set:
            raise InputError(f"arc entry {i} references an unknown vertex")
        if not isinstance(label_text, str):
            raise InputError(f"arc entry {i} label must be a string")
        arc_id = int(arc_ids[i]) if arc_ids is not None else i
        arcs.append(Arc(arc_id, tail, head, parse_element(group, label_text)))
    return LabeledGraph(group, vertices, arcs)


def load_graph(path: str) -> LabeledGraph:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            data = json.load(handle)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read graph file {path}: {exc}") from None
    return graph_from_json_dict(data)


def dump_json(data: object) -> str:
    """Deterministic JSON used for every artifact the package writes."""
    return json.dumps(data, sort_keys=True, indent=2) + "\n"


# Construction helper --------------------------------------------------------

def build_graph(
    group: GroupSpec,
    n_or_vertices: int | Sequence[int],
    arc_triples: Iterable[tuple[int, int, object]],
) -> LabeledGraph:
    """Convenience constructor; labels may be raw payloads or elements."""
    if isinstance(n_or_vertices, int):
        vertices: Iterable[int] = range(n_or_vertices)
    else:
        vertices = n_or_vertices
    arcs = []
    for i, (tail, head, label) in enumerate(arc_triples):
        if not isinstance(label, GroupElement):
            label = make_element(group, label)
        arcs.append(Arc(i, tail, head, label))
    return LabeledGraph(group, vertices, arcs)
