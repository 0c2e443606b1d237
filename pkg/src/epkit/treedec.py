"""Tree decompositions and the bounded-treewidth packing-or-cover routine.

The exact solver searches elimination orders by iterative deepening on the
width: a depth-first feasibility check over eliminated-set states with failed
states memoized, simplicial vertices eliminated eagerly, a
minimum-degree-removal lower bound, and the min-fill order as the upper
bound. Small graphs only; the heuristic path has no size cap.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional

from .errors import GuardExceeded, InputError, InternalInvariantError
from .graph import LabeledGraph, Walk, is_non_null_cycle, walk_vertices
from .labeling import GfvsCertificate, find_non_null_cycle, is_clean, verify_gfvs

EXACT_VERTEX_CAP = 20


@dataclass
class TreeDecomposition:
    """Rooted decomposition: the root is the unique node with parent None."""

    nodes: tuple[int, ...]
    parent: dict[int, Optional[int]]
    bags: dict[int, frozenset[int]]

    @property
    def width(self) -> int:
        return max((len(b) for b in self.bags.values()), default=0) - 1

    @property
    def root(self) -> int:
        roots = [n for n in self.nodes if self.parent.get(n) is None]
        if len(roots) != 1:
            raise InputError(f"decomposition has {len(roots)} roots, wanted 1")
        return roots[0]

    def children(self) -> dict[int, tuple[int, ...]]:
        out: dict[int, list[int]] = {n: [] for n in self.nodes}
        for n in self.nodes:
            p = self.parent.get(n)
            if p is not None:
                out[p].append(n)
        return {n: tuple(sorted(cs)) for n, cs in out.items()}

    def post_order(self) -> list[int]:
        kids = self.children()
        order: list[int] = []
        stack: list[tuple[int, bool]] = [(self.root, False)]
        while stack:
            node, expanded = stack.pop()
            if expanded:
                order.append(node)
                continue
            stack.append((node, True))
            for c in reversed(kids[node]):
                stack.append((c, False))
        return order


def validate_tree_decomposition(g: LabeledGraph, td: TreeDecomposition) -> None:
    """Raise InputError unless td is a rooted tree decomposition of g."""
    if not td.nodes:
        raise InputError("decomposition has no nodes")
    if len(set(td.nodes)) != len(td.nodes):
        raise InputError("duplicate decomposition nodes")
    node_set = set(td.nodes)
    if set(td.parent) != node_set or set(td.bags) != node_set:
        raise InputError("parent map and bags must cover exactly the nodes")
    root = td.root  # raises unless unique
    # parent links must form a tree: every node walks up to the root
    for n in td.nodes:
        seen = set()
        walk = n
        while walk is not None:
            if walk in seen:
                raise InputError("parent links contain a cycle")
            if walk not in node_set:
                raise InputError(f"parent link leaves the node set at {walk}")
            seen.add(walk)
            walk = td.parent[walk]
        if root not in seen:
            raise InputError(f"node {n} does not reach the root")
    vertex_set = set(g.vertices)
    for n, bag in td.bags.items():
        if not bag <= vertex_set:
            raise InputError(f"bag of node {n} contains unknown vertices")
    where: dict[int, set[int]] = {v: set() for v in g.vertices}
    for n, bag in td.bags.items():
        for v in bag:
            where[v].add(n)
    for v in g.vertices:
        if not where[v]:
            raise InputError(f"vertex {v} appears in no bag")
    for a in g.arcs:
        if not any(a.tail in bag and a.head in bag for bag in td.bags.values()):
            raise InputError(f"arc {a.id} has no bag containing both endpoints")
    kids = td.children()
    for v in g.vertices:
        # the bag-set of v must induce a connected subtree
        nodes_v = where[v]
        start = next(iter(nodes_v))
        seen = {start}
        stack = [start]
        while stack:
            n = stack.pop()
            for m in kids[n] + ((td.parent[n],) if td.parent[n] is not None else ()):
                if m in nodes_v and m not in seen:
                    seen.add(m)
                    stack.append(m)
        if seen != nodes_v:
            raise InputError(f"bags containing vertex {v} are not connected")


def td_to_json_dict(td: TreeDecomposition) -> dict:
    return {
        "nodes": list(td.nodes),
        "parent": {str(n): td.parent[n] for n in td.nodes},
        "bags": {str(n): sorted(td.bags[n]) for n in td.nodes},
    }


def td_from_json_dict(doc: dict) -> TreeDecomposition:
    if not isinstance(doc, dict):
        raise InputError("decomposition document must be an object")
    for key in ("nodes", "parent", "bags"):
        if key not in doc:
            raise InputError(f"decomposition document missing '{key}'")
    nodes = doc["nodes"]
    if not isinstance(nodes, list) or not all(isinstance(n, int) for n in nodes):
        raise InputError("'nodes' must be a list of integers")
    parent: dict[int, Optional[int]] = {}
    for key, value in doc["parent"].items():
        if value is not None and not isinstance(value, int):
            raise InputError("parent entries must be integers or null")
        parent[int(key)] = value
    bags: dict[int, frozenset[int]] = {}
    for key, value in doc["bags"].items():
        if not isinstance(value, list) or not all(isinstance(v, int) for v in value):
            raise InputError("bags must be lists of integers")
        bags[int(key)] = frozenset(value)
    return TreeDecomposition(tuple(nodes), parent, bags)


# Elimination machinery ---------------------------------------------------------

def _live_neighbors(adj: dict[int, set[int]], eliminated: frozenset[int], v: int) -> set[int]:
    """Neighbors of v in the graph where eliminated vertices are contracted
    away: everything outside reachable from v through eliminated vertices."""
    out: set[int] = set()
    seen = {v}
    stack = [v]
    while stack:
        u = stack.pop()
        for w in adj[u]:
            if w in seen:
                continue
            if w in eliminated:
                seen.add(w)
                stack.append(w)
            else:
                seen.add(w)
                out.add(w)
    return out


def _elimination_width(adj: dict[int, set[int]], order: list[int]) -> int:
    width = 0
    eliminated: set[int] = set()
    for v in order:
        width = max(width, len(_live_neighbors(adj, frozenset(eliminated), v)))
        eliminated.add(v)
    return width


def _min_fill_order(adj: dict[int, set[int]]) -> list[int]:
    work = {v: set(ns) for v, ns in adj.items()}
    order: list[int] = []
    while work:
        best_v, best_fill = None, None
        for v in sorted(work):
            ns = sorted(work[v])
            fill = sum(
                1
                for i in range(len(ns))
                for j in range(i + 1, len(ns))
                if ns[j] not in work[ns[i]]
            )
            if best_fill is None or fill < best_fill:
                best_v, best_fill = v, fill
        ns = work.pop(best_v)
        for u in ns:
            work[u].discard(best_v)
        for u in ns:
            for w in ns:
                if u != w:
                    work[u].add(w)
        order.append(best_v)
    return order


def _mmd_lower_bound(adj: dict[int, set[int]]) -> int:
    work = {v: set(ns) for v, ns in adj.items()}
    best = 0
    while work:
        v = min(work, key=lambda u: (len(work[u]), u))
        best = max(best, len(work[v]))
        for u in work[v]:
            work[u].discard(v)
        del work[v]
    return best


def _feasible_order(adj: dict[int, set[int]], w: int) -> Optional[list[int]]:
    """An elimination order of width <= w, or None. DFS over eliminated
    sets with failure memoization and eager simplicial elimination."""
    all_vertices = sorted(adj)
    n = len(all_vertices)
    failed: set[frozenset[int]] = set()

    def search(eliminated: frozenset[int], prefix: list[int]) -> Optional[list[int]]:
        remaining = [v for v in all_vertices if v not in eliminated]
        if len(remaining) <= w + 1:
            return prefix + remaining
        if eliminated in failed:
            return None
        live = {v: _live_neighbors(adj, eliminated, v) for v in remaining}
        # a simplicial vertex of tolerable degree can always go first
        for v in remaining:
            if len(live[v]) <= w and all(
                u2 in live[u1] for u1 in live[v] for u2 in live[v] if u1 < u2
            ):
                return search(eliminated | {v}, prefix + [v])
        for v in remaining:
            if len(live[v]) <= w:
                found = search(eliminated | {v}, prefix + [v])
                if found is not None:
                    return found
        failed.add(eliminated)
        return None

    if n == 0:
        return []
    return search(frozenset(), [])


def _decomposition_from_order(g: LabeledGraph, order: list[int]) -> TreeDecomposition:
    adj = {v: set(ns) for v, ns in g.simple_adjacency().items()}
    if not order:
        return TreeDecomposition((0,), {0: None}, {0: frozenset()})
    position = {v: i for i, v in enumerate(order)}
    bags: dict[int, frozenset[int]] = {}
    later_neighbor: dict[int, Optional[int]] = {}
    work = {v: set(ns) for v, ns in adj.items()}
    for idx, v in enumerate(order):
        ns = set(work[v])
        bags[idx] = frozenset({v} | ns)
        later_neighbor[idx] = (
            position[min(ns, key=lambda u: position[u])] if ns else None
        )
        for u in ns:
            work[u].discard(v)
            for x in ns:
                if x != u:
                    work[u].add(x)
        del work[v]
    parent: dict[int, Optional[int]] = {}
    for idx in range(len(order)):
        nxt = later_neighbor[idx]
        if nxt is not None:
            parent[idx] = nxt
        elif idx + 1 < len(order):
            # component exhausted; chain onto the next node to keep one tree
            parent[idx] = idx + 1
        else:
            parent[idx] = None
    return TreeDecomposition(tuple(range(len(order))), parent, bags)


def tree_decomposition(g: LabeledGraph, mode: str = "exact") -> TreeDecomposition:
    """A valid rooted tree decomposition; exact mode has optimal width and
    is capped at 20 vertices, heuristic mode is min-fill at any size."""
    if mode not in ("exact", "heuristic"):
        raise InputError(f"unknown decomposition mode {mode!r}")
    adj = {v: set(ns) for v, ns in g.simple_adjacency().items()}
    if mode == "heuristic":
        return _decomposition_from_order(g, _min_fill_order(adj))
    if g.n > EXACT_VERTEX_CAP:
        raise GuardExceeded(
            f"exact treewidth capped at {EXACT_VERTEX_CAP} vertices, got {g.n}"
        )
    if g.n == 0:
        return _decomposition_from_order(g, [])
    upper_order = _min_fill_order(adj)
    upper = _elimination_width(adj, upper_order)
    lower = _mmd_lower_bound(adj)
    for w in range(lower, upper):
        order = _feasible_order(adj, w)
        if order is not None:
            return _decomposition_from_order(g, order)
    return _decomposition_from_order(g, upper_order)


def treewidth_exact(g: LabeledGraph) -> int:
    return tree_decomposition(g, "exact").width


# Packing or cover ----------------------------------------------------------------

@dataclass(frozen=True)
class PackingCertificate:
    """A family of non-null cycles; integral means pairwise vertex-disjoint,
    half-integral allows every vertex on at most two of them."""

    cycles: tuple[Walk, ...]
    integrality: str

    def __post_init__(self):
        if self.integrality not in ("integral", "half-integral"):
            raise InputError(f"unknown integrality {self.integrality!r}")

    @property
    def k(self) -> int:
        return len(self.cycles)


def verify_packing(g: LabeledGraph, cert: PackingCertificate) -> bool:
    seen_forms = set()
    usage: dict[int, int] = {}
    for walk in cert.cycles:
        if not is_non_null_cycle(g, walk):
            return False
        form = tuple(sorted(arc_id for arc_id, _ in walk.steps))
        if form in seen_forms:
            return False
        seen_forms.add(form)
        for v in set(walk_vertices(g, walk)[:-1]):
            usage[v] = usage.get(v, 0) + 1
    cap = 1 if cert.integrality == "integral" else 2
    return all(count <= cap for count in usage.values())


def packing_or_cover_bounded_tw(
    g: LabeledGraph, k: int, td: TreeDecomposition
) -> PackingCertificate | GfvsCertificate:
    """Either k vertex-disjoint non-null cycles or a gfvs of size at most
    (k-1)(w+1), w the decomposition width.

    Unrolled induction: while budget remains, find the lowest decomposition
    node whose live subtree-vertex set induces a non-null cycle, keep that
    cycle, add the node's live bag to the cover, and delete the subtree
    vertices. A non-null cycle avoiding the bag would sit inside a single
    child subtree (contradicting lowest) or survive the deletion, so the
    final clean graph certifies the cover; the kept cycles are pairwise
    disjoint by construction, so surviving all k-1 rounds yields a packing.
    """
    if k < 1:
        raise InputError("k must be positive")
    validate_tree_decomposition(g, td)
    w = td.width
    order = td.post_order()
    kids = td.children()

    live = set(g.vertices)
    cover: set[int] = set()
    cycles: list[Walk] = []
    budget = k
    while True:
        current = g.induced_subgraph(live)
        if is_clean(current):
            cert = GfvsCertificate(tuple(sorted(cover)), True)
            if len(cover) > (k - 1) * (w + 1):
                raise InternalInvariantError(
                    f"cover {len(cover)} exceeds ({k}-1)({w}+1)"
                )
            if not verify_gfvs(g, cert.vertices).verified:
                raise InternalInvariantError("constructed cover fails verification")
            return cert
        if budget == 1:
            witness = find_non_null_cycle(current)
            cycles.append(witness)
            if len(cycles) != k:
                raise InternalInvariantError("packing is missing cycles")
            cert = PackingCertificate(tuple(cycles), "integral")
            if not verify_packing(g, cert):
                raise InternalInvariantError("constructed packing fails verification")
            return cert
        # live vertex set of each subtree, bottom-up
        alpha: dict[int, frozenset[int]] = {}
        for node in order:
            parts = [td.bags[node] & live]
            parts.extend(alpha[c] for c in kids[node])
            alpha[node] = frozenset().union(*parts)
        chosen = None
        for node in order:
            if not is_clean(current, alpha[node]):
                chosen = node
                break
        if chosen is None:
            raise InternalInvariantError(
                "graph is not clean but every subtree is"
            )
        witness = find_non_null_cycle(current.induced_subgraph(alpha[chosen]))
        cycles.append(witness)
        cover |= td.bags[chosen] & live
        live -= alpha[chosen]
        budget -= 1
