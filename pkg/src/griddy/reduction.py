"""Compile a formula into the gadget graph: frame, axis, side chains, armatures, flags.

Canonical coordinate convention (all constructive geometry below follows it):

  * left wall occupies columns x in {0,1}, rows y in 0..h
  * top band occupies rows y in {h-1,h}
  * right wall occupies columns x in {w+1,w+2}
  * the axis vertex H[i] sits at (i+1, 0)

A chain based at axis edge (H[b], H[b+1]) has base-edge x-coordinate
X = b+1.  Pointing up, its square t occupies the cell [X+t, X+t+1] x [t, t+1];
pointing down, the mirror image through the axis.  Corner 2 of square t is
the far diagonal corner, corner 4 the near one; corners 1 and 3 are the free
diagonal pair.  Each armature is 4 columns from the next, leaving one empty
diagonal of lattice points between adjacent chains; flag endpoints land
exactly on those empty diagonals, or on side-chain vertices at the two
boundaries.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal as TLiteral, Optional

from .engine import EngineConfig, LogicEngine, build_engine
from .formula import Formula
from .lattice import (
    Embedding,
    Graph,
    LatticeError,
    Point,
    QuotientGraphBuilder,
    StructuralName,
)

Direction = TLiteral["up", "down"]
DiagonalChoice = TLiteral["side1", "side2"]


class ReductionError(Exception):
    pass


@dataclass(frozen=True)
class ReductionParams:
    w: int
    h: int

    def check(self, n: int, m: int) -> None:
        if self.w < 2 * m + 4 * n + 3:
            raise ReductionError(f"w={self.w} violates w >= {2 * m + 4 * n + 3}")
        if self.h < 2 * m + 2 * n + 2:
            raise ReductionError(f"h={self.h} violates h >= {2 * m + 2 * n + 2}")


def default_params(f: Formula) -> ReductionParams:
    """Smallest legal width/height for the formula."""
    return ReductionParams(w=2 * f.m + 4 * f.n + 3, h=2 * f.m + 2 * f.n + 2)


@dataclass(frozen=True)
class GadgetGraph:
    graph: Graph
    index: dict[str, int]  # structural role -> vertex id
    params: ReductionParams
    n: int
    m: int

    def vertex(self, role: str) -> int:
        return self.index[role]

    def flag_roles(self) -> list[tuple[str, int, int]]:
        """Present flags as (kind, i, j), recovered from the index."""
        out = []
        for role in self.index:
            if role.startswith("F") and role.endswith(".1"):
                fam = "ap" if role.startswith("F'") else "a"
                inner = role[role.index("[") :].rstrip(".1")
                i = int(inner.split("[i=")[1].split("]")[0])
                j = int(inner.split("[j=")[1].split("]")[0])
                out.append((fam, i, j))
        return sorted(out)


# -- structural helpers ------------------------------------------------------


def _sq(family: str, idx, corner: int) -> StructuralName:
    indices = (idx,) if isinstance(idx, int) else tuple(idx)
    return StructuralName(family, indices, corner)


def _axis(i: int) -> StructuralName:
    return StructuralName("H", (i,))


def link_square(i: int, j: int, n: int) -> int:
    """Index of the lower square of link j on armature i's chains."""
    return 2 * j + 2 * n - 2 * i - 1


def armature_base(params: ReductionParams, n: int, m: int, k: int) -> int:
    """Axis index b such that armature k's chains attach at (H[b], H[b+1])."""
    return params.w - 2 * m - 4 * n + 4 * k - 3


def side_chain_base(params: ReductionParams, n: int, m: int, which: int) -> int:
    if which == 1:
        return params.w - 2 * m - 4 * n - 2
    return params.w - 2 * m


def chain_length(n: int, m: int, k: int) -> int:
    """Squares per chain of armature k."""
    return 2 * m + 2 * n - 2 * k + 1


# -- graph construction ------------------------------------------------------


def build_frame_and_axis(b: QuotientGraphBuilder, params: ReductionParams) -> None:
    """Walls, top band, and the length-w axis path, glued per the five rules."""
    w, h = params.w, params.h
    for i in range(h):
        b.add_square("L", i)
    for i in range(w):
        b.add_square("T", i)
    for i in range(h):
        b.add_square("R", i)

    for i in range(h - 1):
        b.identify(b.handle(_sq("L", i, 1)), b.handle(_sq("L", i + 1, 4)))
        b.identify(b.handle(_sq("L", i, 2)), b.handle(_sq("L", i + 1, 3)))
    b.identify(b.handle(_sq("L", h - 1, 2)), b.handle(_sq("T", 0, 1)))
    b.identify(b.handle(_sq("L", h - 1, 3)), b.handle(_sq("T", 0, 4)))
    for i in range(w - 1):
        b.identify(b.handle(_sq("T", i, 2)), b.handle(_sq("T", i + 1, 1)))
        b.identify(b.handle(_sq("T", i, 3)), b.handle(_sq("T", i + 1, 4)))
    b.identify(b.handle(_sq("R", h - 1, 1)), b.handle(_sq("T", w - 1, 2)))
    b.identify(b.handle(_sq("R", h - 1, 4)), b.handle(_sq("T", w - 1, 3)))
    for i in range(h - 1):
        b.identify(b.handle(_sq("R", i, 1)), b.handle(_sq("R", i + 1, 4)))
        b.identify(b.handle(_sq("R", i, 2)), b.handle(_sq("R", i + 1, 3)))

    prev = b.handle(_sq("L", 0, 3))
    for i in range(1, w):
        cur = b.add_vertex(_axis(i))
        b.add_edge(prev, cur)
        prev = cur
    b.add_edge(prev, b.handle(_sq("R", 0, 4)))


def _build_chain(
    b: QuotientGraphBuilder,
    family: str,
    make_idx,
    count: int,
    base: int,
) -> None:
    """A corner-glued chain of squares based on the axis edge (H[base], H[base+1]).

    Square 0's (4,3) edge is identified with the axis edge; thereafter corner
    2 of square t-1 is identified with corner 4 of square t.
    """
    for t in range(count):
        b.add_square(family, make_idx(t))
    b.identify(b.handle(_sq(family, make_idx(0), 4)), b.handle(_axis(base)))
    b.identify(b.handle(_sq(family, make_idx(0), 3)), b.handle(_axis(base + 1)))
    for t in range(1, count):
        b.identify(
            b.handle(_sq(family, make_idx(t - 1), 2)),
            b.handle(_sq(family, make_idx(t), 4)),
        )


def build_side_chains(b: QuotientGraphBuilder, params: ReductionParams, n: int, m: int) -> None:
    inner, outer = side_chain_base(params, n, m, 1), side_chain_base(params, n, m, 2)
    _build_chain(b, "SC1", lambda t: t, 2 * m + 2 * n, inner)
    _build_chain(b, "SC1'", lambda t: t, 2 * m + 2 * n, inner)
    _build_chain(b, "SC2", lambda t: t, 2 * m - 1, outer)
    _build_chain(b, "SC2'", lambda t: t, 2 * m - 1, outer)


def build_armatures(b: QuotientGraphBuilder, params: ReductionParams, n: int, m: int) -> None:
    for k in range(1, n + 1):
        base = armature_base(params, n, m, k)
        assert 1 <= base < base + 1 <= params.w - 1, "armature base off the axis"
        length = chain_length(n, m, k)
        _build_chain(b, "C", lambda t, k=k: (k, t), length, base)
        _build_chain(b, "C'", lambda t, k=k: (k, t), length, base)


def add_flags(b: QuotientGraphBuilder, f: Formula) -> None:
    """Glue one flag square per engine flag; each leaves one fresh endpoint vertex."""
    eng = build_engine(f)
    for kind, i, j in eng.flags():
        sq_fam, chain_fam = ("F", "C") if kind == "a" else ("F'", "C'")
        s1 = link_square(i, j, f.n)
        assert s1 >= 1, "link index out of chain range"
        c1, c2, c3, c4 = b.add_square(sq_fam, (i, j))
        b.identify(c2, b.handle(_sq(chain_fam, (i, s1 + 1), 1)))
        b.identify(c3, b.handle(_sq(chain_fam, (i, s1), 2)))
        b.identify(c4, b.handle(_sq(chain_fam, (i, s1), 1)))


def expected_counts(n: int, m: int, w: int, h: int, flags: int) -> tuple[int, int]:
    """Closed-form vertex/edge counts of the finalized gadget graph."""
    v = 4 * h + 3 * w + 1
    e = 6 * h + 4 * w + 1
    lengths = [2 * m + 2 * n] * 2 + [2 * m - 1] * 2
    lengths += [chain_length(n, m, k) for k in range(1, n + 1) for _ in range(2)]
    for length in lengths:
        v += 2 + 3 * (length - 1)
        e += 3 + 4 * (length - 1)
    v += flags
    e += 2 * flags
    return v, e


def reduce(f: Formula, params: Optional[ReductionParams] = None) -> GadgetGraph:
    """The full reduction: formula -> gadget graph with component index."""
    params = params or default_params(f)
    params.check(f.n, f.m)
    b = QuotientGraphBuilder()
    build_frame_and_axis(b, params)
    build_side_chains(b, params, f.n, f.m)
    build_armatures(b, params, f.n, f.m)
    add_flags(b, f)
    g = b.finalize()
    index = {label: vid for vid, labels in enumerate(g.labels) for label in labels}
    nflags = len(build_engine(f).flags())
    ev, ee = expected_counts(f.n, f.m, params.w, params.h, nflags)
    if (g.n, len(g.edges)) != (ev, ee):
        raise AssertionError(
            f"count mismatch: built ({g.n},{len(g.edges)}), closed form ({ev},{ee})"
        )
    return GadgetGraph(graph=g, index=index, params=params, n=f.n, m=f.m)


def frame_axis_only(params: ReductionParams) -> GadgetGraph:
    """Just the frame and axis (used for rigidity checks and pinning)."""
    b = QuotientGraphBuilder()
    build_frame_and_axis(b, params)
    g = b.finalize()
    index = {label: vid for vid, labels in enumerate(g.labels) for label in labels}
    return GadgetGraph(graph=g, index=index, params=params, n=0, m=0)


# -- constructive coordinates ------------------------------------------------


def frame_axis_points(params: ReductionParams) -> dict[str, Point]:
    """Canonical coordinates for every frame and axis role."""
    w, h = params.w, params.h
    pts: dict[str, Point] = {}
    for i in range(h):
        for c, p in zip((1, 2, 3, 4), ((0, i + 1), (1, i + 1), (1, i), (0, i))):
            pts[str(_sq("L", i, c))] = p
        for c, p in zip(
            (1, 2, 3, 4), ((w + 1, i + 1), (w + 2, i + 1), (w + 2, i), (w + 1, i))
        ):
            pts[str(_sq("R", i, c))] = p
    for i in range(w):
        for c, p in zip(
            (1, 2, 3, 4), ((i + 1, h), (i + 2, h), (i + 2, h - 1), (i + 1, h - 1))
        ):
            pts[str(_sq("T", i, c))] = p
    for i in range(1, w):
        pts[str(_axis(i))] = (i + 1, 0)
    return pts


def canonical_frame_embedding(g: GadgetGraph) -> Embedding:
    """Partial embedding pinning the frame and axis at canonical coordinates."""
    emb: Embedding = {}
    for role, p in frame_axis_points(g.params).items():
        vid = g.index[role]
        if emb.setdefault(vid, p) != p:
            raise AssertionError(f"inconsistent frame point at {role}")
    return emb


def chain_points(
    base_x: int, direction: Direction, t: int, diagonal_choice: DiagonalChoice = "side1"
) -> tuple[Point, Point, Point, Point]:
    """Corner coordinates (1..4) of square t of a chain based at x = base_x.

    Corners 2 and 4 are forced; the free diagonal pair {1,3} is ordered by
    diagonal_choice (side1 puts corner 1 at the high-|y| option).  The two
    choices cover the same four points.
    """
    if t < 0:
        raise ReductionError("square index must be nonnegative")
    if direction == "up":
        c4, c2 = (base_x + t, t), (base_x + t + 1, t + 1)
        high, low = (base_x + t, t + 1), (base_x + t + 1, t)
    else:
        c4, c2 = (base_x + t, -t), (base_x + t + 1, -t - 1)
        high, low = (base_x + t, -t - 1), (base_x + t + 1, -t)
    c1, c3 = (high, low) if diagonal_choice == "side1" else (low, high)
    return c1, c2, c3, c4


def flag_endpoint(
    base_x: int,
    direction: Direction,
    j: int,
    n: int,
    i: int,
    pointing: TLiteral["left", "right"],
) -> Point:
    """Where the free flag endpoint lands, by completing the flag square.

    Computed purely from the two link squares' corner positions; no separate
    closed form is involved.
    """
    s1 = link_square(i, j, n)
    if s1 < 1:
        raise ReductionError("link does not exist on this chain")
    if pointing == "left":
        x, y = base_x + s1, s1 + 2
    else:
        x, y = base_x + s1 + 2, s1
    return (x, y) if direction == "up" else (x, -y)


def _chain_plan(g: GadgetGraph) -> list[tuple[str, int, int, int]]:
    """(family, armature index or 0, base_x, length) for every chain."""
    p, n, m = g.params, g.n, g.m
    plan = [
        ("SC1", 0, side_chain_base(p, n, m, 1) + 1, 2 * m + 2 * n),
        ("SC1'", 0, side_chain_base(p, n, m, 1) + 1, 2 * m + 2 * n),
        ("SC2", 0, side_chain_base(p, n, m, 2) + 1, 2 * m - 1),
        ("SC2'", 0, side_chain_base(p, n, m, 2) + 1, 2 * m - 1),
    ]
    for k in range(1, n + 1):
        bx = armature_base(p, n, m, k) + 1
        plan.append(("C", k, bx, chain_length(n, m, k)))
        plan.append(("C'", k, bx, chain_length(n, m, k)))
    return plan


def witness_embedding(g: GadgetGraph, cfg: EngineConfig) -> Embedding:
    """Total embedding realizing the given engine configuration.

    Frame and axis take the canonical coordinates; each armature pair is
    oriented by cfg; unflagged squares take the canonical diagonal choice
    and flagged link squares the choice matching the flag direction.  The
    result is not guaranteed overlap-free: an invalid configuration shows up
    as verifier overlaps at the contested slot.
    """
    if len(cfg.orientation) != g.n:
        raise ReductionError("orientation length does not match armature count")
    flags = g.flag_roles()
    if set(cfg.flag_dir) != set(flags):
        raise ReductionError("flag directions must cover exactly the present flags")

    emb = canonical_frame_embedding(g)

    def put(role: str, p: Point) -> None:
        vid = g.index[role]
        if emb.setdefault(vid, p) != p:
            raise AssertionError(f"inconsistent point for {role}: {emb[vid]} vs {p}")

    # Which (family, chain square) indices have a forced diagonal choice.
    forced: dict[tuple[str, int, int], DiagonalChoice] = {}
    for kind, i, j in flags:
        fam = "C" if kind == "a" else "C'"
        s1 = link_square(i, j, g.n)
        choice: DiagonalChoice = "side1" if cfg.flag_dir[(kind, i, j)] == "left" else "side2"
        forced[(fam, i, s1)] = choice
        forced[(fam, i, s1 + 1)] = choice

    for fam, k, base_x, length in _chain_plan(g):
        if k == 0:
            direction: Direction = "up" if not fam.endswith("'") else "down"
        else:
            up = cfg.orientation[k - 1]
            direction = ("up" if up else "down") if not fam.endswith("'") else ("down" if up else "up")
        for t in range(length):
            choice = forced.get((fam, k, t), "side1") if k else "side1"
            c1, c2, c3, c4 = chain_points(base_x, direction, t, choice)
            idx = (k, t) if k else t
            for corner, p in zip((1, 2, 3, 4), (c1, c2, c3, c4)):
                put(str(_sq(fam, idx, corner)), p)

    for kind, i, j in flags:
        fam = "F" if kind == "a" else "F'"
        base_x = armature_base(g.params, g.n, g.m, i) + 1
        direction = "up" if cfg.chain_points_up(kind, i) else "down"
        p = flag_endpoint(base_x, direction, j, g.n, i, cfg.flag_dir[(kind, i, j)])
        put(str(_sq(fam, (i, j), 1)), p)

    if len(emb) != g.graph.n:
        raise AssertionError("witness embedding is not total")
    return emb


def engine_of(g: GadgetGraph) -> LogicEngine:
    """Reconstruct the logic engine from the gadget graph's flag roles."""
    flag_a = [[False] * g.m for _ in range(g.n)]
    flag_ap = [[False] * g.m for _ in range(g.n)]
    for kind, i, j in g.flag_roles():
        (flag_a if kind == "a" else flag_ap)[i - 1][j - 1] = True
    return LogicEngine(
        n=g.n,
        m=g.m,
        flag_a=tuple(tuple(r) for r in flag_a),
        flag_ap=tuple(tuple(r) for r in flag_ap),
    )


def index_to_json(index: dict[str, int]) -> str:
    import json

    entries = [{"role": r, "vertex": v} for r, v in sorted(index.items())]
    return json.dumps(entries, indent=1)


def index_from_json(text: str) -> dict[str, int]:
    import json

    return {e["role"]: int(e["vertex"]) for e in json.loads(text)}
