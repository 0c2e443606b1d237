"""The packing-or-cover driver.

Control flow per level: strip arcs that lie on no non-null cycle; if the
(exact) treewidth is within the threshold, run the decomposition branch;
otherwise look for a clique expansion and run the expansion branch, which
yields a packing, an irrelevant vertex to delete, or a separation to
recurse behind. Anything past that is the wall case, which this package
does not implement: the driver either fails honestly or, when enabled,
substitutes the exhaustive oracle and marks the trail.

Cover certificates are re-verified at every lift. When a vertex deleted as
irrelevant turns out to be needed by the cover (the equivalence guarantee
is for the predicate, not for any particular witness set), it is added
back; the trail records each such repair.
"""

from dataclasses import dataclass
from typing import Optional

from .certificates import Certificate
from .errors import (
    GuardExceeded,
    InputError,
    InternalInvariantError,
    UnimplementedBranch,
)
from .graph import LabeledGraph, Separation
from .groups import identity, inverse, is_identity, multiply
from .labeling import GfvsCertificate, find_non_null_cycle, is_clean, verify_gfvs
from .oracle import DEFAULT_GUARDS, OracleGuards, max_packing, min_gfvs
from .packing import (
    EXPANSION_ORDER_CAP,
    CliqueExpansion,
    clique_branch_irrelevant,
    clique_branch_separation,
    find_clique_expansion,
    rho_threshold,
    small_mode_floor,
    verify_expansion,
)
from .treedec import (
    EXACT_VERTEX_CAP,
    PackingCertificate,
    TreeDecomposition,
    packing_or_cover_bounded_tw,
    tree_decomposition,
    treewidth_exact,
    validate_tree_decomposition,
    verify_packing,
)


@dataclass(frozen=True)
class DriverConfig:
    tw_threshold: int = 4
    thresholds_mode: str = "small"
    oracle_fallback: bool = False
    seed: int = 0

    def __post_init__(self):
        if self.tw_threshold < 1:
            raise InputError("tw_threshold must be at least 1")
        if self.thresholds_mode not in ("paper", "small"):
            raise InputError(f"unknown thresholds mode {self.thresholds_mode!r}")
        if not -(2**63) <= self.seed < 2**64:
            raise InputError("seed must fit in 64 bits")


# Faithful threshold arithmetic. The wall-extraction step hides a constant
# and a wall-size function that no finite text pins down; both are replaced
# by documented floors (1 and 2^4096), so every reported threshold is a
# true lower bound on any faithful instantiation and still dwarfs every
# representable instance.

_WALL_SIZE_FLOOR = 2**4096


def rho_prime(k: int) -> int:
    return rho_threshold(k) + 3 * k


def sigma_prime(k: int) -> int:
    sigma = 16 * k * k * (_WALL_SIZE_FLOOR + 2 * k)
    return sigma + rho_prime(k) + 3 * k


def paper_tw_threshold(k: int) -> int:
    s, r = sigma_prime(k), rho_prime(k)
    return (s * (s + r)) ** 20


def tau_threshold(k: int) -> int:
    """Cover-size budget: grows by the separator bound per recursion level
    and dominates the bounded-treewidth bound at the top."""
    if k < 0:
        raise InputError("k must be non-negative")
    tau = 0
    for i in range(1, k + 1):
        tau = max(tau + rho_prime(i) + 3 * i, (i - 1) * (paper_tw_threshold(i) + 1))
    return tau


def _report_int(n: int) -> object:
    if n.bit_length() <= 63:
        return n
    return {"bits": n.bit_length()}


def strip_null_arcs(
    g: LabeledGraph, guards: OracleGuards = DEFAULT_GUARDS
) -> LabeledGraph:
    """Remove every arc that lies on no non-null cycle.

    An arc u -> v with label a lies on a non-null cycle exactly when some
    simple v-u path avoiding the arc has a value other than a^-1 (for a
    loop: when a is not the identity). Removing such arcs deletes no
    non-null cycle, because every arc of a non-null cycle is justified by
    that cycle; iteration confirms the fixpoint.
    """
    if g.n > guards.max_vertices:
        raise GuardExceeded(
            f"arc stripping limited to {guards.max_vertices} vertices, got {g.n}"
        )
    current = g
    while True:
        drop = [a.id for a in current.arcs if not _on_non_null_cycle(current, a.id)]
        if not drop:
            return current
        current = current.delete_arcs(drop)


def _on_non_null_cycle(g: LabeledGraph, arc_id: int) -> bool:
    arc = g.arc(arc_id)
    if arc.is_loop:
        return not is_identity(arc.label)
    # the cycle value is the arc label times the return-path value, so the
    # cycle is non-null exactly when the path value differs from the inverse
    target = inverse(arc.label)
    found = False

    def dfs(v: int, visited: frozenset[int], value) -> None:
        nonlocal found
        for nxt in g.incident(v):
            if found:
                return
            if nxt.id == arc_id or nxt.is_loop:
                continue
            w = nxt.other(v)
            label = nxt.label if nxt.tail == v else inverse(nxt.label)
            extended = multiply(value, label)
            if w == arc.tail:
                if extended != target:
                    found = True
                    return
            elif w not in visited:
                dfs(w, visited | {w}, extended)

    dfs(arc.head, frozenset({arc.head}), identity(g.group))
    return found


def _oracle_fallback(
    g: LabeledGraph, k: int, guards: OracleGuards
) -> PackingCertificate | GfvsCertificate:
    cycles = max_packing(g, capacity=2, stop_at=k, guards=guards)
    if len(cycles) >= k:
        cert = PackingCertificate(tuple(cycles[:k]), "half-integral")
        if not verify_packing(g, cert):
            raise InternalInvariantError("oracle packing fails verification")
        return cert
    return GfvsCertificate(tuple(min_gfvs(g, guards)), True)


def _restrict_to_free_supernodes(
    eta: CliqueExpansion, boundary: frozenset[int]
) -> Optional[CliqueExpansion]:
    keep = [mv for mv in sorted(eta.supernodes) if not (eta.supernodes[mv] & boundary)]
    if len(keep) < 2:
        return None
    keep_set = set(keep)
    return CliqueExpansion(
        supernodes={mv: eta.supernodes[mv] for mv in keep},
        tree_edges={mv: eta.tree_edges[mv] for mv in keep},
        edge_map={
            pair: arc_id
            for pair, arc_id in eta.edge_map.items()
            if pair[0] in keep_set and pair[1] in keep_set
        },
        centers={mv: eta.centers[mv] for mv in keep},
    )


def _required_order(k: int, mode: str) -> int:
    if mode == "paper":
        return rho_prime(k)
    return k * small_mode_floor(k)


def solve(
    g: LabeledGraph,
    k: int,
    cfg: DriverConfig = DriverConfig(),
    expansion: Optional[CliqueExpansion] = None,
    td: Optional[TreeDecomposition] = None,
    guards: OracleGuards = DEFAULT_GUARDS,
) -> Certificate:
    """A verified half-integral k-packing of non-null cycles, or a verified
    cover meeting every non-null cycle.

    expansion and td are optional caller-supplied witnesses for the input
    graph; they are re-validated here and not forwarded into recursions.
    """
    if k < 1:
        raise InputError("k must be positive")
    outcome, trail = _solve(g, k, cfg, expansion, td, guards)
    if isinstance(outcome, PackingCertificate):
        if outcome.k != k or not verify_packing(g, outcome):
            raise InternalInvariantError("final packing fails verification")
    else:
        if not verify_gfvs(g, outcome.vertices).verified:
            raise InternalInvariantError("final cover fails verification")
        if cfg.thresholds_mode == "paper":
            tau = tau_threshold(k)
            if len(outcome.vertices) > tau:
                raise InternalInvariantError("cover exceeds the recursion budget")
            trail = trail + (
                {
                    "step": "cover-budget",
                    "cover_size": len(outcome.vertices),
                    "budget": _report_int(tau),
                },
            )
    return Certificate(k=k, outcome=outcome, trail=trail)


def _solve(
    g: LabeledGraph,
    k: int,
    cfg: DriverConfig,
    expansion: Optional[CliqueExpansion],
    td: Optional[TreeDecomposition],
    guards: OracleGuards,
) -> tuple[PackingCertificate | GfvsCertificate, tuple[dict, ...]]:
    trail: list[dict] = []
    current = g
    deletions: list[tuple[LabeledGraph, int]] = []

    while True:
        stripped = strip_null_arcs(current, guards)
        trail.append(
            {
                "step": "strip",
                "removed": sorted(
                    set(a.id for a in current.arcs) - set(a.id for a in stripped.arcs)
                ),
            }
        )
        if is_clean(stripped):
            trail.append({"step": "clean", "cover": []})
            outcome: PackingCertificate | GfvsCertificate = GfvsCertificate((), True)
            break

        threshold = (
            paper_tw_threshold(k)
            if cfg.thresholds_mode == "paper"
            else cfg.tw_threshold
        )
        width = _instance_width(stripped, td, trail)
        trail.append(
            {
                "step": "treewidth",
                "width": width,
                "threshold": _report_int(threshold),
            }
        )
        if width is not None and width <= threshold:
            outcome = _bounded_tw_branch(stripped, k, td, width, trail)
            break

        result = _expansion_branch(stripped, k, cfg, expansion, guards, trail)
        if isinstance(result, (PackingCertificate, GfvsCertificate)):
            outcome = result
            break
        if isinstance(result, int):
            # irrelevant vertex: delete and restart this level
            deletions.append((current, result))
            trail.append({"step": "irrelevant", "vertex": result})
            current = current.delete_vertices({result})
            expansion = None
            td = None
            continue
        outcome = _separation_step(stripped, k, cfg, result, guards, trail)
        break

    if isinstance(outcome, GfvsCertificate):
        cover = frozenset(outcome.vertices)
        added: list[int] = []
        for before, vertex in reversed(deletions):
            if not verify_gfvs(before, cover).verified:
                cover = cover | {vertex}
                added.append(vertex)
        if added:
            trail.append({"step": "cover-repair", "added_back": sorted(added)})
        outcome = GfvsCertificate(tuple(sorted(cover)), True)
    return outcome, tuple(trail)


def _instance_width(
    g: LabeledGraph, td: Optional[TreeDecomposition], trail: list[dict]
) -> Optional[int]:
    """Exact treewidth, the supplied decomposition's width, or None when the
    graph is too large to measure exactly."""
    if td is not None:
        validate_tree_decomposition(g, td)
        return td.width
    if g.n > EXACT_VERTEX_CAP:
        trail.append({"step": "treewidth-skipped", "vertices": g.n})
        return None
    return treewidth_exact(g)


def _bounded_tw_branch(
    g: LabeledGraph,
    k: int,
    td: Optional[TreeDecomposition],
    width: int,
    trail: list[dict],
) -> PackingCertificate | GfvsCertificate:
    if td is None:
        td = tree_decomposition(g, mode="exact")
    result = packing_or_cover_bounded_tw(g, k, td)
    if isinstance(result, PackingCertificate):
        trail.append({"step": "bounded-treewidth", "result": "packing", "width": width})
    else:
        trail.append(
            {
                "step": "bounded-treewidth",
                "result": "cover",
                "width": width,
                "cover_size": len(result.vertices),
                "bound": (k - 1) * (width + 1),
            }
        )
    return result


def _expansion_branch(
    g: LabeledGraph,
    k: int,
    cfg: DriverConfig,
    supplied: Optional[CliqueExpansion],
    guards: OracleGuards,
    trail: list[dict],
) -> PackingCertificate | GfvsCertificate | Separation | int | None:
    """Run the clique-expansion machinery. Returns a certificate, a
    separation, an irrelevant vertex (int), or the oracle/unimplemented
    outcome when no expansion is available."""
    need = _required_order(k, cfg.thresholds_mode)
    eta: Optional[CliqueExpansion] = None
    if supplied is not None:
        if not verify_expansion(g, supplied, supplied.order):
            raise InputError(
                "supplied expansion does not verify against the stripped graph"
            )
        eta = supplied
        trail.append({"step": "expansion", "source": "witness", "order": eta.order})
    elif need <= EXPANSION_ORDER_CAP:
        eta = find_clique_expansion(g, need)
        trail.append(
            {
                "step": "expansion",
                "source": "search" if eta is not None else "absent",
                "order": need,
            }
        )
    else:
        trail.append(
            {"step": "expansion", "source": "skipped", "order": _report_int(need)}
        )

    if eta is None:
        return _wall_case(g, k, cfg, guards, trail)

    try:
        result = clique_branch_separation(
            g, k, eta, thresholds=cfg.thresholds_mode, guards=guards
        )
    except UnimplementedBranch:
        if not cfg.oracle_fallback:
            raise
        trail.append({"step": "oracle-fallback", "fallback": True, "reason": "block"})
        return _oracle_fallback(g, k, guards)
    if isinstance(result, PackingCertificate):
        trail.append({"step": "clique-branch", "result": "packing"})
        return result
    trail.append(
        {
            "step": "clique-branch",
            "result": "separation",
            "boundary": sorted(result.boundary),
        }
    )

    a_graph = g.induced_subgraph(result.a)
    if is_clean(a_graph) and result.order > 1:
        free = _restrict_to_free_supernodes(eta, result.boundary)
        if free is not None:
            try:
                return clique_branch_irrelevant(
                    g, k, free, result, thresholds=cfg.thresholds_mode
                )
            except InputError as exc:
                trail.append({"step": "irrelevant-unavailable", "reason": str(exc)})
    return result


def _wall_case(
    g: LabeledGraph,
    k: int,
    cfg: DriverConfig,
    guards: OracleGuards,
    trail: list[dict],
) -> PackingCertificate | GfvsCertificate:
    if cfg.oracle_fallback:
        trail.append({"step": "oracle-fallback", "fallback": True, "reason": "wall"})
        return _oracle_fallback(g, k, guards)
    raise UnimplementedBranch(
        "the wall branch is not implemented; enable the oracle fallback or "
        "raise the treewidth threshold"
    )


def _separation_step(
    g: LabeledGraph,
    k: int,
    cfg: DriverConfig,
    sep: Separation,
    guards: OracleGuards,
    trail: list[dict],
) -> PackingCertificate | GfvsCertificate:
    """Recurse behind a separation whose near side minus the boundary is
    clean, then lift the sub-certificate."""
    a_graph = g.induced_subgraph(sep.a)
    boundary = sep.boundary
    if not is_clean(a_graph):
        cycle = find_non_null_cycle(a_graph)
        if k == 1:
            cert = PackingCertificate((cycle,), "half-integral")
            if not verify_packing(g, cert):
                raise InternalInvariantError("near-side cycle fails verification")
            trail.append({"step": "separation-recurse", "side": "near-cycle", "k": k})
            return cert
        sub_graph = g.induced_subgraph(sep.b - sep.a)
        sub_outcome, sub_trail = _solve(sub_graph, k - 1, cfg, None, None, guards)
        trail.append(
            {
                "step": "separation-recurse",
                "side": "far",
                "k": k - 1,
                "vertices": sorted(sep.b - sep.a),
                "trail": list(sub_trail),
            }
        )
        if isinstance(sub_outcome, PackingCertificate):
            cert = PackingCertificate(
                sub_outcome.cycles + (cycle,), "half-integral"
            )
            if not verify_packing(g, cert):
                raise InternalInvariantError("merged packing fails verification")
            return cert
        cover = frozenset(sub_outcome.vertices) | boundary
        if not verify_gfvs(g, cover).verified:
            raise InternalInvariantError("merged cover fails verification")
        return GfvsCertificate(tuple(sorted(cover)), True)

    # near side clean: everything non-null lives in G[B], and any cycle
    # leaving B would need two boundary vertices it cannot reuse
    if not sep.a - sep.b:
        raise InternalInvariantError("separation has an empty near side")
    sub_graph = g.induced_subgraph(sep.b)
    sub_outcome, sub_trail = _solve(sub_graph, k, cfg, None, None, guards)
    trail.append(
        {
            "step": "separation-recurse",
            "side": "behind",
            "k": k,
            "vertices": sorted(sep.b),
            "trail": list(sub_trail),
        }
    )
    if isinstance(sub_outcome, PackingCertificate):
        if not verify_packing(g, sub_outcome):
            raise InternalInvariantError("lifted packing fails verification")
        return sub_outcome
    cover = frozenset(sub_outcome.vertices)
    if not verify_gfvs(g, cover).verified:
        cover = cover | boundary
        if not verify_gfvs(g, cover).verified:
            raise InternalInvariantError("lifted cover fails verification")
    return GfvsCertificate(tuple(sorted(cover)), True)
