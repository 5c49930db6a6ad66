"""Backtracking recognizer for griddy graphs.

Decides whether a graph embeds in Z^2 with unit edges and distinct vertex
positions.  Vertices are placed in breadth-first order from the pinned set
(or a maximum-degree root), so every new vertex has at most four candidate
positions.  Optional symmetry breaking quotients the 8-element lattice
symmetry group exactly; optional twin pruning canonicalizes interchangeable
diagonal pairs, which is what makes exhaustive UNSAT runs on the reduction
graphs feasible.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Optional

from .lattice import Embedding, Graph, Point, verify_embedding

_UNIT = ((1, 0), (-1, 0), (0, 1), (0, -1))


class EmbedderError(Exception):
    pass


@dataclass
class SearchConfig:
    budget: int = 10_000_000
    mode: str = "find_one"  # or "count_all"
    pinned: Optional[Embedding] = None
    symmetry_breaking: bool = True
    twin_pruning: bool = True

    def __post_init__(self):
        if self.budget < 1:
            raise EmbedderError("budget must be positive")
        if self.mode not in ("find_one", "count_all"):
            raise EmbedderError(f"unknown mode {self.mode!r}")


@dataclass
class SearchOutcome:
    kind: str  # "embedded" | "unrealizable" | "budget_exhausted"
    witness: Optional[Embedding] = None
    solution_count: Optional[int] = None
    nodes_expanded: int = 0
    reason: str = ""


def quick_reject(g: Graph) -> Optional[str]:
    """Cheap necessary conditions: max degree 4 and bipartiteness."""
    for v in range(g.n):
        if g.degree(v) > 4:
            return f"vertex {v} has degree {g.degree(v)} > 4"
    color = [-1] * g.n
    for start in range(g.n):
        if color[start] != -1:
            continue
        color[start] = 0
        queue = deque([start])
        while queue:
            u = queue.popleft()
            for w in g.adjacency[u]:
                if color[w] == -1:
                    color[w] = color[u] ^ 1
                    queue.append(w)
                elif color[w] == color[u]:
                    return "graph contains an odd cycle"
    return None


def components(g: Graph) -> list[list[int]]:
    seen = [False] * g.n
    comps = []
    for start in range(g.n):
        if seen[start]:
            continue
        seen[start] = True
        comp, queue = [start], deque([start])
        while queue:
            u = queue.popleft()
            for w in g.adjacency[u]:
                if not seen[w]:
                    seen[w] = True
                    comp.append(w)
                    queue.append(w)
        comps.append(sorted(comp))
    return comps


def order_vertices(g: Graph, pins: Optional[Embedding] = None) -> list[int]:
    """Placement order: BFS from the pins (or a maximum-degree vertex) per
    component, components in id order, ties by vertex id.  Every non-seed
    vertex has an already-ordered neighbor within its component."""
    pins = pins or {}
    order: list[int] = []
    for comp in components(g):
        pinned_here = sorted(v for v in comp if v in pins)
        seeds = pinned_here or [max(comp, key=lambda v: (g.degree(v), -v))]
        seen = set(seeds)
        queue = deque(seeds)
        order.extend(seeds)
        while queue:
            u = queue.popleft()
            for w in g.adjacency[u]:
                if w not in seen:
                    seen.add(w)
                    order.append(w)
                    queue.append(w)
    return order


def _twin_pairs(g: Graph) -> dict[int, list[int]]:
    """For each vertex v, the twins u < v (non-adjacent, same neighborhood)."""
    nbhd = [frozenset(a) for a in g.adjacency]
    by_nbhd: dict[frozenset, list[int]] = {}
    for v in range(g.n):
        by_nbhd.setdefault(nbhd[v], []).append(v)
    partners: dict[int, list[int]] = {}
    for group in by_nbhd.values():
        for i, v in enumerate(group):
            if i:
                partners[v] = group[:i]
    return partners


class _Budget:
    __slots__ = ("left",)

    def __init__(self, n: int):
        self.left = n


class _Exhausted(Exception):
    pass


def _search_component(
    g: Graph,
    comp: list[int],
    cfg: SearchConfig,
    pins: Embedding,
    budget: _Budget,
) -> tuple[str, Optional[Embedding], int]:
    """Returns (kind, witness-or-None, count). Raises _Exhausted on budget."""
    comp_pins = {v: pins[v] for v in comp if v in pins}
    order = [v for v in order_vertices_component(g, comp, comp_pins) if v not in comp_pins]
    adj = g.adjacency
    pos: dict[int, Point] = dict(comp_pins)
    occupied: set[Point] = set(pos.values())
    use_symmetry = cfg.symmetry_breaking and not comp_pins
    # Twin swaps are only sound when they cannot violate a position-based
    # symmetry constraint: with the rotation/reflection anchors active the
    # two quotients interact, so pruning is limited to pinned (or
    # symmetry-free) components, and never touches the translation anchor.
    use_twins = cfg.twin_pruning and cfg.mode == "find_one" and not use_symmetry
    twins = _twin_pairs(g) if use_twins else {}
    anchor = order[0] if (use_twins and not comp_pins and order) else None
    count = 0
    witness: Optional[Embedding] = None
    off_axis = sum(1 for p in pos.values() if p[1] != 0)

    def candidates(idx: int, v: int) -> list[Point]:
        placed_nb = [pos[u] for u in adj[v] if u in pos]
        if not placed_nb:
            # Only the very first vertex of an unpinned component.
            return [(0, 0)]
        first = placed_nb[0]
        cands = [
            (first[0] + dx, first[1] + dy)
            for dx, dy in _UNIT
            if all((first[0] + dx - x) ** 2 + (first[1] + dy - y) ** 2 == 1 for x, y in placed_nb[1:])
        ]
        if use_symmetry:
            if idx == 1:
                cands = [p for p in cands if p == (1, 0)]
            elif off_axis == 0:
                # First departure from the axis must go up.
                cands = [p for p in cands if p[1] >= 0]
        if use_twins and v in twins and v != anchor:
            for u in twins[v]:
                if u in pos and u not in comp_pins and u != anchor:
                    pu = pos[u]
                    cands = [p for p in cands if p > pu]
        return sorted(set(cands) - occupied)

    def recurse(idx: int) -> bool:
        nonlocal count, witness, off_axis
        if idx == len(order):
            count += 1
            if witness is None:
                witness = dict(pos)
            return cfg.mode == "find_one"
        v = order[idx]
        for p in candidates(idx, v):
            if budget.left <= 0:
                raise _Exhausted
            budget.left -= 1
            pos[v] = p
            occupied.add(p)
            if p[1] != 0:
                off_axis += 1
            done = recurse(idx + 1)
            if p[1] != 0:
                off_axis -= 1
            occupied.discard(p)
            del pos[v]
            if done:
                return True
        return False

    recurse(0)
    if witness is not None:
        full = dict(comp_pins)
        full.update(witness)
        return "embedded", full, count
    return "unrealizable", None, 0


def order_vertices_component(g: Graph, comp: list[int], pins: Embedding) -> list[int]:
    seeds = sorted(v for v in comp if v in pins) or [max(comp, key=lambda v: (g.degree(v), -v))]
    seen = set(seeds)
    queue = deque(seeds)
    order = list(seeds)
    while queue:
        u = queue.popleft()
        for w in g.adjacency[u]:
            if w not in seen:
                seen.add(w)
                order.append(w)
                queue.append(w)
    return order


def _check_pins(g: Graph, pins: Embedding) -> None:
    seen: dict[Point, int] = {}
    for v, p in pins.items():
        if not 0 <= v < g.n:
            raise EmbedderError(f"pinned vertex {v} out of range")
        if p in seen:
            raise EmbedderError(f"pins overlap at {p}")
        seen[p] = v
    for v, p in pins.items():
        for u in g.adjacency[v]:
            if u in pins:
                q = pins[u]
                if (p[0] - q[0]) ** 2 + (p[1] - q[1]) ** 2 != 1:
                    raise EmbedderError(f"pinned edge ({v},{u}) is not unit length")


def decide_griddy(g: Graph, cfg: Optional[SearchConfig] = None) -> SearchOutcome:
    """Decide lattice realizability (or count embeddings extending the pins).

    Disconnected graphs are solved per component and the witnesses translated
    onto disjoint x-ranges; in count_all mode the count is the product of the
    per-component counts.  Twin pruning applies only to find_one, where it
    affects the witness but never the yes/no answer.
    """
    cfg = cfg or SearchConfig()
    pins = dict(cfg.pinned or {})
    _check_pins(g, pins)

    reason = quick_reject(g)
    if reason is not None:
        return SearchOutcome(kind="unrealizable", reason=reason, nodes_expanded=0)

    budget = _Budget(cfg.budget)
    # Pinned components first so unpinned ones can be translated clear of them.
    comps = sorted(components(g), key=lambda c: (not any(v in pins for v in c), c[0]))
    total_count = 1
    merged: Embedding = {}
    try:
        for comp in comps:
            kind, witness, count = _search_component(g, comp, cfg, pins, budget)
            if kind == "unrealizable":
                return SearchOutcome(
                    kind="unrealizable",
                    nodes_expanded=cfg.budget - budget.left,
                    reason=f"component containing vertex {comp[0]} has no embedding",
                )
            total_count *= count
            assert witness is not None
            if any(v in pins for v in comp) or not merged:
                # Pinned components (processed first) keep their coordinates.
                merged.update(witness)
            else:
                # Translate onto a disjoint x-range; Z^2 always has room.
                right = max(x for x, _ in merged.values())
                dx = right + 2 - min(x for x, _ in witness.values())
                merged.update({v: (x + dx, y) for v, (x, y) in witness.items()})
    except _Exhausted:
        return SearchOutcome(kind="budget_exhausted", nodes_expanded=cfg.budget)

    nodes = cfg.budget - budget.left
    report = verify_embedding(g, merged)
    if not report.accepted:
        raise AssertionError("search produced an invalid witness")
    return SearchOutcome(
        kind="embedded",
        witness=merged,
        solution_count=total_count if cfg.mode == "count_all" else None,
        nodes_expanded=nodes,
    )
