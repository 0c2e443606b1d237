"""Exact reference answers on small graphs.

Everything here is exponential and guarded. The guards raise rather than
silently truncate, so a caller can trust any value that comes back.

Cycle enumeration is canonical: each simple cycle appears once, regardless
of rotation or direction. Loops are length-1 cycles; a pair of parallel
arcs is a length-2 cycle.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

from .errors import GuardExceeded, InputError
from .graph import (
    FORWARD,
    REVERSE,
    LabeledGraph,
    Walk,
    canonical_cycle,
    walk_value,
)
from .groups import is_identity


@dataclass(frozen=True)
class OracleGuards:
    max_vertices: int = 14
    max_cycles: int = 20000


DEFAULT_GUARDS = OracleGuards()


def _check_size(g: LabeledGraph, guards: OracleGuards) -> None:
    if g.n > guards.max_vertices:
        raise GuardExceeded(
            f"oracle limited to {guards.max_vertices} vertices, got {g.n}"
        )


def enumerate_cycles(
    g: LabeledGraph, guards: OracleGuards = DEFAULT_GUARDS
) -> list[Walk]:
    """All simple cycles, one representative each, deterministic order.

    DFS from each start vertex s, only visiting vertices > s in between, so
    every cycle is found exactly at its minimum vertex. Canonical forms
    dedupe the two traversal directions and parallel-arc choices.
    """
    _check_size(g, guards)
    seen: set[tuple] = set()
    out: list[Walk] = []

    def record(walk: Walk) -> None:
        canon = canonical_cycle(g, walk)
        if canon in seen:
            return
        seen.add(canon)
        out.append(walk)
        if len(out) > guards.max_cycles:
            raise GuardExceeded(f"more than {guards.max_cycles} cycles")

    for arc in g.arcs:
        if arc.is_loop:
            record(Walk(((arc.id, FORWARD),)))

    for s in g.vertices:
        # path state: current vertex, visited set, steps taken
        def dfs(v: int, visited: frozenset[int], steps: tuple) -> None:
            for arc in g.incident(v):
                if arc.is_loop:
                    continue
                w = arc.other(v)
                direction = FORWARD if arc.tail == v else REVERSE
                if w == s and steps:
                    if len(steps) == 1 and steps[0][0] == arc.id:
                        continue  # same arc back and forth
                    record(Walk(steps + ((arc.id, direction),)))
                elif w > s and w not in visited:
                    dfs(w, visited | {w}, steps + ((arc.id, direction),))

        dfs(s, frozenset([s]), ())

    out.sort(key=lambda wlk: canonical_cycle(g, wlk))
    return out


def enumerate_non_null_cycles(
    g: LabeledGraph, guards: OracleGuards = DEFAULT_GUARDS
) -> list[Walk]:
    return [
        w for w in enumerate_cycles(g, guards) if not is_identity(walk_value(g, w))
    ]


def _cycle_vertex_sets(g: LabeledGraph, cycles: list[Walk]) -> list[frozenset[int]]:
    from .graph import walk_vertices

    return [frozenset(walk_vertices(g, w)[:-1]) for w in cycles]


def min_gfvs(
    g: LabeledGraph, guards: OracleGuards = DEFAULT_GUARDS
) -> list[int]:
    """A minimum set of vertices meeting every non-null cycle.

    Iterative deepening; branches on the vertices of the first unhit cycle.
    Deterministic: cycles in canonical order, branch vertices ascending.
    """
    cycles = enumerate_non_null_cycles(g, guards)
    sets = _cycle_vertex_sets(g, cycles)

    def first_unhit(chosen: frozenset[int]) -> Optional[frozenset[int]]:
        for cs in sets:
            if not (cs & chosen):
                return cs
        return None

    def search(chosen: frozenset[int], budget: int) -> Optional[frozenset[int]]:
        unhit = first_unhit(chosen)
        if unhit is None:
            return chosen
        if budget == 0:
            return None
        for v in sorted(unhit):
            found = search(chosen | {v}, budget - 1)
            if found is not None:
                return found
        return None

    size = 0
    while True:
        found = search(frozenset(), size)
        if found is not None:
            return sorted(found)
        size += 1


def max_packing(
    g: LabeledGraph,
    capacity: int,
    stop_at: Optional[int] = None,
    guards: OracleGuards = DEFAULT_GUARDS,
) -> list[Walk]:
    """A maximum collection of distinct non-null cycles with every vertex
    used at most `capacity` times. capacity=1 is the integral packing
    number, capacity=2 the half-integral one. `stop_at` returns early once
    that many cycles fit."""
    if capacity < 1:
        raise InputError("capacity must be at least 1")
    cycles = enumerate_non_null_cycles(g, guards)
    sets = _cycle_vertex_sets(g, cycles)
    order = sorted(range(len(cycles)), key=lambda i: (len(sets[i]), i))
    best: list[int] = []

    usage: dict[int, int] = {v: 0 for v in g.vertices}

    def can_beat(idx: int, slack: int) -> bool:
        """Could at least `slack` + 1 more cycles still fit individually?"""
        if slack < 0:
            return True
        count = 0
        for j in order[idx:]:
            if all(usage[v] < capacity for v in sets[j]):
                count += 1
                if count > slack:
                    return True
        return False

    chosen: list[int] = []

    def search(idx: int) -> bool:
        # skipping a cycle advances idx in place; recursion depth is the
        # number of chosen cycles, not the number of enumerated ones
        nonlocal best
        while True:
            if stop_at is not None and len(best) >= stop_at:
                return True
            if idx == len(order):
                if len(chosen) > len(best):
                    best = list(chosen)
                return stop_at is not None and len(best) >= stop_at
            if not can_beat(idx, len(best) - len(chosen)):
                return False
            j = order[idx]
            if all(usage[v] < capacity for v in sets[j]):
                for v in sets[j]:
                    usage[v] += 1
                chosen.append(j)
                if search(idx + 1):
                    return True
                chosen.pop()
                for v in sets[j]:
                    usage[v] -= 1
            idx += 1

    search(0)
    return [cycles[j] for j in best]


def packing_number(
    g: LabeledGraph,
    capacity: int,
    guards: OracleGuards = DEFAULT_GUARDS,
) -> int:
    return len(max_packing(g, capacity, guards=guards))


def ep_predicate(
    g: LabeledGraph,
    k: int,
    p: int,
    guards: OracleGuards = DEFAULT_GUARDS,
) -> bool:
    """Ground truth for the packing-or-cover promise: a half-integral
    packing of k non-null cycles exists, or some cover of size at most p
    does."""
    if k < 1 or p < 0:
        raise InputError("need k >= 1 and p >= 0")
    if len(max_packing(g, 2, stop_at=k, guards=guards)) >= k:
        return True
    return len(min_gfvs(g, guards)) <= p


def hitting_number(g: LabeledGraph, guards: OracleGuards = DEFAULT_GUARDS) -> int:
    return len(min_gfvs(g, guards))
