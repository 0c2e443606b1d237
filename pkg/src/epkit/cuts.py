"""Separators, multiway cuts, and the irrelevant-vertex machinery.

Everything in this module works on the undirected simple view of a graph;
labels play no role. Vertex cuts are computed by unit-capacity flow on the
split digraph (v_in -> v_out), with breadth-first augmentation in ascending
vertex order so enumeration results are reproducible run to run.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Optional

from .errors import InputError, InternalInvariantError
from .graph import LabeledGraph, Separation, validate_separation
from .labeling import is_clean, untangle

Adjacency = dict[int, tuple[int, ...]]


# Flow ------------------------------------------------------------------------

class _FlowResult:
    def __init__(self, value: int, sink_coreach: frozenset):
        self.value = value
        self.sink_coreach = sink_coreach


_SOURCE = ("s", -1)
_SINK = ("t", -1)


def _max_vertex_flow(
    adj: Adjacency,
    sources: frozenset[int],
    sinks: frozenset[int],
    uncuttable: frozenset[int],
    endpoint_capacity: bool,
    limit: Optional[int] = None,
) -> _FlowResult:
    """Max set of vertex-disjoint source-sink paths.

    endpoint_capacity=False models separator problems: sources and sinks are
    uncuttable and a path enters at x_out / leaves at y_in, so min cuts avoid
    them. endpoint_capacity=True models linkages: every path consumes its
    endpoints (a vertex in both sets counts as a zero-length path).

    limit stops augmenting once the value exceeds it; the value is then only
    a lower bound and the coreach is left empty.
    """
    big = len(adj) + 2
    cap: dict[tuple, dict[tuple, int]] = {_SOURCE: {}, _SINK: {}}

    def add_arc(a, b, c):
        cap.setdefault(a, {})[b] = cap.setdefault(a, {}).get(b, 0) + c
        cap.setdefault(b, {}).setdefault(a, 0)

    for v in sorted(adj):
        c = big if (v in uncuttable and not endpoint_capacity) else 1
        add_arc(("in", v), ("out", v), c)
    for v in sorted(adj):
        for w in adj[v]:
            add_arc(("out", v), ("in", w), big)
    for x in sorted(sources):
        add_arc(_SOURCE, ("in", x) if endpoint_capacity else ("out", x), big)
    for y in sorted(sinks):
        add_arc(("out", y) if endpoint_capacity else ("in", y), _SINK, big)

    def bfs_augment() -> int:
        parent: dict[tuple, tuple] = {_SOURCE: _SOURCE}
        queue = [_SOURCE]
        head = 0
        while head < len(queue):
            node = queue[head]
            head += 1
            for nxt in sorted(cap[node]):
                if nxt not in parent and cap[node][nxt] > 0:
                    parent[nxt] = node
                    if nxt == _SINK:
                        bottleneck = big
                        walk = nxt
                        while walk != _SOURCE:
                            prev = parent[walk]
                            bottleneck = min(bottleneck, cap[prev][walk])
                            walk = prev
                        walk = nxt
                        while walk != _SOURCE:
                            prev = parent[walk]
                            cap[prev][walk] -= bottleneck
                            cap[walk][prev] += bottleneck
                            walk = prev
                        return bottleneck
                    queue.append(nxt)
        return 0

    value = 0
    while True:
        if limit is not None and value > limit:
            break
        pushed = bfs_augment()
        if pushed == 0:
            break
        value += pushed

    sink_coreach = frozenset()
    if limit is None or value <= limit:
        # nodes that can still reach the sink in the residual digraph
        rev: dict[tuple, list] = {}
        for a in cap:
            for b, c in cap[a].items():
                if c > 0:
                    rev.setdefault(b, []).append(a)
        coreach = {_SINK}
        stack = [_SINK]
        while stack:
            node = stack.pop()
            for prev in rev.get(node, ()):
                if prev not in coreach:
                    coreach.add(prev)
                    stack.append(prev)
        sink_coreach = frozenset(coreach)
    return _FlowResult(value, sink_coreach)


def _reach(adj: Adjacency, start: Iterable[int], removed: frozenset[int]) -> frozenset[int]:
    seen = {v for v in start if v not in removed}
    stack = list(seen)
    while stack:
        v = stack.pop()
        for w in adj[v]:
            if w not in removed and w not in seen:
                seen.add(w)
                stack.append(w)
    return frozenset(seen)


def max_disjoint_paths(g: LabeledGraph, a: Iterable[int], b: Iterable[int]) -> int:
    """Maximum number of fully vertex-disjoint paths between two vertex sets
    (shared vertices count as zero-length paths)."""
    a_set, b_set = frozenset(a), frozenset(b)
    for v in a_set | b_set:
        if not g.has_vertex(v):
            raise InputError(f"no vertex {v}")
    if not a_set or not b_set:
        return 0
    result = _max_vertex_flow(
        g.simple_adjacency(), a_set, b_set, frozenset(), endpoint_capacity=True
    )
    return result.value


# Important separators ---------------------------------------------------------

@dataclass(frozen=True)
class ImportantSeparator:
    separator: frozenset[int]
    reach: frozenset[int]


class ImportantSeparatorEnumeration:
    """Sequence of important separators plus an inseparability report.

    inseparable is true when some X-Y path cannot be cut by vertices outside
    X and Y (then no separator of any size exists and the list is empty).
    """

    def __init__(self, separators: list[ImportantSeparator], inseparable: bool):
        self.separators = separators
        self.inseparable = inseparable

    def __iter__(self):
        return iter(self.separators)

    def __len__(self):
        return len(self.separators)

    def __getitem__(self, idx):
        return self.separators[idx]


def _is_separator(adj: Adjacency, x: frozenset, y: frozenset, s: frozenset) -> bool:
    return not (_reach(adj, x, s) & y)


def _inseparable(adj: Adjacency, x: frozenset, y: frozenset) -> bool:
    outside = frozenset(adj) - x - y
    return bool(_reach(adj, x, outside) & y)


def _candidate_separators(
    adj: Adjacency, x: frozenset, y: frozenset, budget: int
) -> set[frozenset]:
    """Superset of the important X-Y separators of size <= budget, by
    flow-based branching on the reach-maximal minimum separator."""
    if _inseparable(adj, x, y):
        return set()
    flow = _max_vertex_flow(adj, x, y, x | y, endpoint_capacity=False, limit=budget)
    if flow.value > budget:
        return set()
    if flow.value == 0:
        return {frozenset()}
    s_max = frozenset(
        v
        for v in adj
        if v not in x
        and v not in y
        and ("out", v) in flow.sink_coreach
        and ("in", v) not in flow.sink_coreach
    )
    if len(s_max) != flow.value:
        raise InternalInvariantError("min cut extraction does not match flow value")
    out = {s_max}
    v = min(s_max)
    # branch: v joins the separator
    adj_minus = {
        u: tuple(w for w in nbrs if w != v) for u, nbrs in adj.items() if u != v
    }
    for s in _candidate_separators(adj_minus, x, y, budget - 1):
        out.add(s | {v})
    # branch: v joins the source side, which strictly grows its reach
    grown = _reach(adj, x, s_max) | {v}
    for s in _candidate_separators(adj, grown, y, budget):
        out.add(s)
    return out


def _important_separators_adj(
    adj: Adjacency, x: frozenset, y: frozenset, budget: int
) -> list[ImportantSeparator]:
    candidates = _candidate_separators(adj, x, y, budget)
    minimal = []
    for s in candidates:
        if len(s) > budget or not _is_separator(adj, x, y, s):
            continue
        if any(_is_separator(adj, x, y, s - {v}) for v in s):
            continue
        minimal.append(s)
    with_reach = [(s, _reach(adj, x, s)) for s in minimal]
    # drop dominated ones; every domination chain ends at an important
    # separator and those all appear among the candidates, so an in-set
    # check is exact
    important = [
        ImportantSeparator(s, r)
        for s, r in with_reach
        if not any(len(s2) <= len(s) and r2 > r for s2, r2 in with_reach if s2 != s)
    ]
    important.sort(key=lambda imp: (len(imp.separator), sorted(imp.separator)))
    return important


def enumerate_important_separators(
    g: LabeledGraph, x: Iterable[int], y: Iterable[int], k: int
) -> ImportantSeparatorEnumeration:
    """Exactly the important X-Y separators of size at most k.

    A separator here is a vertex set disjoint from X and Y meeting every
    X-Y path; it is important when it is inclusion-minimal and no separator
    of at most its size has a strictly larger X-reach. Results are sorted by
    (size, vertex list).
    """
    x_set, y_set = frozenset(x), frozenset(y)
    if x_set & y_set:
        raise InputError("X and Y overlap")
    for v in x_set | y_set:
        if not g.has_vertex(v):
            raise InputError(f"no vertex {v}")
    if k < 0:
        raise InputError("budget must be non-negative")
    adj = g.simple_adjacency()
    if _inseparable(adj, x_set, y_set):
        return ImportantSeparatorEnumeration([], inseparable=True)
    return ImportantSeparatorEnumeration(
        _important_separators_adj(adj, x_set, y_set, k), inseparable=False
    )


# Multiway cuts ----------------------------------------------------------------

@dataclass(frozen=True)
class MultiwayCutInstance:
    graph: LabeledGraph
    terminals: frozenset[int]
    partition: tuple[frozenset[int], ...]

    def __post_init__(self):
        for t in self.terminals:
            if not self.graph.has_vertex(t):
                raise InputError(f"terminal {t} not in graph")
        if len(self.partition) < 2:
            raise InputError("partition needs at least two parts")
        seen: set[int] = set()
        for part in self.partition:
            if not part:
                raise InputError("empty partition part")
            if part & seen:
                raise InputError("partition parts overlap")
            seen |= part
        if seen != set(self.terminals):
            raise InputError("partition does not cover the terminal set")


def is_multiway_cut(inst: MultiwayCutInstance, s: Iterable[int]) -> bool:
    s_set = frozenset(s)
    if s_set & inst.terminals:
        raise InputError("cut overlaps the terminal set")
    for v in s_set:
        if not inst.graph.has_vertex(v):
            raise InputError(f"no vertex {v}")
    adj = inst.graph.simple_adjacency()
    part_of = {t: i for i, part in enumerate(inst.partition) for t in part}
    seen: set[int] = set()
    for start in sorted(inst.terminals):
        if start in seen:
            continue
        comp = _reach(adj, [start], s_set)
        seen |= comp & inst.terminals
        touched = {part_of[t] for t in comp & inst.terminals}
        if len(touched) > 1:
            return False
    return True


def is_minimal_multiway_cut(inst: MultiwayCutInstance, s: Iterable[int]) -> bool:
    """A cut with no proper subset that also cuts. Cutting is monotone in the
    vertex set, so dropping single vertices is a complete minimality check."""
    s_set = frozenset(s)
    if not is_multiway_cut(inst, s_set):
        return False
    return all(not is_multiway_cut(inst, s_set - {v}) for v in s_set)


# Well-linked sets ---------------------------------------------------------------

@dataclass(frozen=True)
class WellLinkedWitness:
    z: frozenset[int]
    checked_to: int
    linked: bool
    failure: Optional[tuple[frozenset[int], frozenset[int]]] = None


def verify_well_linked(g: LabeledGraph, z: Iterable[int], p: int) -> WellLinkedWitness:
    """Flow-check every pair of equal-size subsets of Z up to size p."""
    z_set = frozenset(z)
    for v in z_set:
        if not g.has_vertex(v):
            raise InputError(f"no vertex {v}")
    cap = min(p, len(z_set))
    for size in range(1, cap + 1):
        for a in itertools.combinations(sorted(z_set), size):
            for b in itertools.combinations(sorted(z_set), size):
                if max_disjoint_paths(g, a, b) < size:
                    return WellLinkedWitness(
                        z_set, p, False, (frozenset(a), frozenset(b))
                    )
    return WellLinkedWitness(z_set, p, True)


# Treewidth reduction ------------------------------------------------------------

def _partitions(items: list[int]):
    """Set partitions in restricted-growth order, at least two parts."""
    n = len(items)
    if n < 2:
        return
    rgs = [0] * n
    while True:
        count = max(rgs) + 1
        if count >= 2:
            parts: list[set[int]] = [set() for _ in range(count)]
            for idx, part_idx in enumerate(rgs):
                parts[part_idx].add(items[idx])
            yield tuple(frozenset(p) for p in parts)
        i = n - 1
        while i > 0:
            if rgs[i] <= max(rgs[:i]):
                rgs[i] += 1
                for j in range(i + 1, n):
                    rgs[j] = 0
                break
            i -= 1
        else:
            return


def _marking_set(
    adj: Adjacency, t: int, t_set: frozenset[int], z_set: frozenset[int]
) -> frozenset[int]:
    """Core of the reduction: mark the Z-vertices that important separators
    of the apex graph can reach, over all terminal partitions. Assumes the
    caller has validated sizes and linkage."""
    fresh = max(adj) + 1 if adj else 0
    q_star = fresh
    sub_of = {zv: fresh + 1 + i for i, zv in enumerate(sorted(z_set))}
    adj_sets: dict[int, set[int]] = {v: set(ns) for v, ns in adj.items()}
    adj_sets[q_star] = set()
    for zv, zs in sub_of.items():
        adj_sets[zs] = {q_star, zv}
        adj_sets[zv].add(zs)
        adj_sets[q_star].add(zs)
    aux: Adjacency = {v: tuple(sorted(ns)) for v, ns in adj_sets.items()}

    marked: set[int] = set()
    partition_count = 0
    per_partition_bound = (16 ** t) * 2 * t
    for parts in _partitions(sorted(t_set)):
        partition_count += 1
        per_partition: set[int] = set()
        for part in parts:
            far_side = frozenset({q_star}) | (t_set - part)
            if _inseparable(aux, part, far_side):
                continue
            for imp in _important_separators_adj(aux, part, far_side, 2 * t):
                # the separator itself must be marked too: a cut vertex
                # adjacent to both terminal sides is in every separator and
                # in no reach, so reach-only marking misses it
                per_partition |= z_set & (imp.reach | imp.separator)
        if len(per_partition) > per_partition_bound:
            raise InternalInvariantError(
                f"per-partition marking exceeded {per_partition_bound}: "
                f"{len(per_partition)}"
            )
        marked |= per_partition
    if partition_count > len(t_set) ** len(t_set):
        raise InternalInvariantError("partition enumeration exceeded t^t")
    if len(marked) > t ** (6 * t):
        raise InternalInvariantError("marking exceeded t^(6t)")
    return frozenset(marked)


def tw_reduction_set(
    g: LabeledGraph,
    t: int,
    terminals: Iterable[int],
    z: Iterable[int],
    paper_size_check: bool = False,
) -> frozenset[int]:
    """A set of marked vertices such that no vertex of Z outside it belongs
    to any minimal multiway cut of the terminals of size at most t.

    Construction: add an apex q* joined to every vertex of Z by a length-2
    path; for every partition of the terminals into at least two parts and
    every part P, enumerate the important separators of size at most 2t
    between P and {q*} union the remaining terminals, and mark the
    Z-vertices inside each separator or its P-reach.

    By default Z must satisfy |Z| >= 2t+1 and be (t+1)-linked in the given
    graph, which is what the residue argument consumes; paper_size_check
    demands the stronger |Z| >= 7t with linkage to |Z|/2.
    """
    t_set = frozenset(terminals)
    z_set = frozenset(z)
    if t <= 1:
        raise InputError("precondition failed: t must be at least 2")
    if len(t_set) > t:
        raise InputError(
            f"precondition failed: terminal set larger than t ({len(t_set)} > {t})"
        )
    if z_set & t_set:
        raise InputError("precondition failed: Z intersects the terminal set")
    for v in t_set | z_set:
        if not g.has_vertex(v):
            raise InputError(f"no vertex {v}")
    if paper_size_check:
        if len(z_set) < 7 * t:
            raise InputError(
                f"precondition failed: |Z| = {len(z_set)} below 7t = {7 * t}"
            )
        linkage_to = len(z_set) // 2
    else:
        if len(z_set) < 2 * t + 1:
            raise InputError(
                f"precondition failed: |Z| = {len(z_set)} below 2t+1 = {2 * t + 1}"
            )
        linkage_to = t + 1
    witness = verify_well_linked(g, z_set, linkage_to)
    if not witness.linked:
        a, b = witness.failure
        raise InputError(
            "precondition failed: Z is not well-linked "
            f"(subsets {sorted(a)} and {sorted(b)} lack a linkage)"
        )
    if len(t_set) < 2:
        return frozenset()
    return _marking_set(g.simple_adjacency(), t, t_set, z_set)


# Irrelevant vertex ---------------------------------------------------------------

def find_irrelevant_vertex(
    g: LabeledGraph,
    sep: Separation,
    z: Iterable[int],
    p: int,
    k: int,
    paper_size_check: bool = False,
) -> int:
    """A vertex of Z whose deletion preserves the packing-or-cover outcome.

    The separation must have a clean side A with 1 < |A cap B| <= p, and Z
    must be a well-linked subset of A minus B. For every way of keeping at
    least two boundary vertices and deleting the rest, the marking set of the
    kept boundary is collected; the answer is the smallest Z-vertex outside
    all of them, so it sits in no small multiway cut of any boundary residue.
    k is part of the equivalence contract and plays no role in the
    computation.

    Size gate: |Z| > 2^p * p^(6p) with paper_size_check, else |Z| >= 2p+1.
    """
    validate_separation(g, sep)
    boundary = sep.boundary
    z_set = frozenset(z)
    if k < 1:
        raise InputError("precondition failed: k must be positive")
    if not 1 < len(boundary) <= p:
        raise InputError(
            f"precondition failed: separator order {len(boundary)} not in (1, {p}]"
        )
    if not z_set <= sep.a - sep.b:
        raise InputError("precondition failed: Z must avoid B and sit inside A")
    if paper_size_check:
        needed = (2 ** p) * (p ** (6 * p))
        if len(z_set) <= needed:
            raise InputError(
                f"precondition failed: |Z| = {len(z_set)} not above {needed}"
            )
    elif len(z_set) < 2 * p + 1:
        raise InputError(
            f"precondition failed: |Z| = {len(z_set)} below 2p+1 = {2 * p + 1}"
        )
    g_a = g.induced_subgraph(sep.a)
    if not is_clean(g_a):
        raise InputError("precondition failed: the A side is not clean")
    witness = verify_well_linked(g_a, z_set, p + 1)
    if not witness.linked:
        raise InputError("precondition failed: Z is not well-linked in the A side")
    g_a = untangle(g_a, sep.a)

    # deleting boundary vertices can degrade Z's linkage, so the inner calls
    # skip the entry validation; the premises were checked once above
    marked: set[int] = set()
    x_sorted = sorted(boundary)
    for keep_size in range(2, len(x_sorted) + 1):
        for kept in itertools.combinations(x_sorted, keep_size):
            dropped = frozenset(x_sorted) - frozenset(kept)
            sub_adj = g_a.delete_vertices(dropped).simple_adjacency()
            marked |= _marking_set(sub_adj, keep_size, frozenset(kept), z_set)
    eligible = sorted(z_set - marked)
    if not eligible:
        raise InputError(
            "no eligible vertex: every candidate is marked, so a size or "
            "linkage precondition must have been violated upstream"
        )
    return eligible[0]
