"""Abstract logic engine: flag matrices, configurations, and the flat-lying test.

An engine has n armatures and m rows.  Armature i carries two chains, a_i
and a_i'; flipping the armature decides which chain faces the upper side.
A present flag points toward one of the n+1 "gaps" between adjacent
armatures (gap 0 abuts the inner side chain, gap n the outer one).  The
engine lies flat iff a direction assignment exists where no flag points
into gap 0 or gap n and no gap slot (side, row, gap) is taken twice.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Literal as TLiteral, NamedTuple, Optional

from .formula import Formula

ChainKind = TLiteral["a", "ap"]  # ap == the primed chain a'
FlagDir = TLiteral["left", "right"]
Side = TLiteral["upper", "lower"]

FlagKey = tuple[ChainKind, int, int]  # (chain kind, armature i, row j), 1-based


class EngineError(Exception):
    pass


class GapSlot(NamedTuple):
    side: Side
    row: int  # 1..m
    gap: int  # 0..n


@dataclass(frozen=True)
class LogicEngine:
    """Flag presence matrices, indexed [armature-1][row-1]."""

    n: int
    m: int
    flag_a: tuple[tuple[bool, ...], ...]
    flag_ap: tuple[tuple[bool, ...], ...]

    def __post_init__(self):
        for mat in (self.flag_a, self.flag_ap):
            if len(mat) != self.n or any(len(row) != self.m for row in mat):
                raise EngineError("flag matrix dimensions must be n x m")

    def has_flag(self, kind: ChainKind, i: int, j: int) -> bool:
        mat = self.flag_a if kind == "a" else self.flag_ap
        return mat[i - 1][j - 1]

    def flags(self) -> list[FlagKey]:
        """All present flags, in (kind, i, j) order."""
        out = []
        for kind in ("a", "ap"):
            for i in range(1, self.n + 1):
                for j in range(1, self.m + 1):
                    if self.has_flag(kind, i, j):
                        out.append((kind, i, j))
        return out


@dataclass(frozen=True)
class EngineConfig:
    """Orientation per armature (True = chain a_i points up) plus flag directions."""

    orientation: tuple[bool, ...]
    flag_dir: dict[FlagKey, FlagDir] = field(default_factory=dict)

    def chain_points_up(self, kind: ChainKind, i: int) -> bool:
        up = self.orientation[i - 1]
        return up if kind == "a" else not up


def build_engine(f: Formula) -> LogicEngine:
    """Flag placement from a formula.

    Armature i carries a flag on row j of chain a_i iff X_i does not occur
    positively in clause j; on a_i' iff X_i does not occur negatively.
    """
    pos = [[False] * f.m for _ in range(f.n)]
    neg = [[False] * f.m for _ in range(f.n)]
    for j, c in enumerate(f.clauses):
        for lit in c.literals:
            (neg if lit.negated else pos)[lit.var - 1][j] = True
    flag_a = tuple(tuple(not pos[i][j] for j in range(f.m)) for i in range(f.n))
    flag_ap = tuple(tuple(not neg[i][j] for j in range(f.m)) for i in range(f.n))
    return LogicEngine(n=f.n, m=f.m, flag_a=flag_a, flag_ap=flag_ap)


def occupied_slot(e: LogicEngine, c: EngineConfig, i: int, j: int, kind: ChainKind) -> GapSlot:
    """The gap slot taken by the flag at (kind, i, j) under configuration c."""
    if not e.has_flag(kind, i, j):
        raise EngineError(f"no flag at ({kind}, {i}, {j})")
    side: Side = "upper" if c.chain_points_up(kind, i) else "lower"
    direction = c.flag_dir[(kind, i, j)]
    gap = i - 1 if direction == "left" else i
    return GapSlot(side=side, row=j, gap=gap)


def config_valid(e: LogicEngine, c: EngineConfig) -> bool:
    """No flag in a boundary gap, and no slot occupied twice."""
    present = set(e.flags())
    if set(c.flag_dir) != present:
        raise EngineError("flag_dir must be defined on exactly the present flags")
    if len(c.orientation) != e.n:
        raise EngineError("orientation length mismatch")
    taken: set[GapSlot] = set()
    for kind, i, j in present:
        slot = occupied_slot(e, c, i, j, kind)
        if slot.gap == 0 or slot.gap == e.n:
            return False
        if slot in taken:
            return False
        taken.add(slot)
    return True


def _facing_kind(orientation: tuple[bool, ...], side: Side, i: int) -> ChainKind:
    """Which chain of armature i faces the given side."""
    if side == "upper":
        return "a" if orientation[i - 1] else "ap"
    return "ap" if orientation[i - 1] else "a"


def row_has_free_link(e: LogicEngine, orientation: tuple[bool, ...], side: Side, row: int) -> bool:
    """True iff some armature contributes no flag to the physical row (side, row)."""
    for i in range(1, e.n + 1):
        if not e.has_flag(_facing_kind(orientation, side, i), i, row):
            return True
    return False


def _sweep_directions(e: LogicEngine, orientation: tuple[bool, ...]) -> dict[FlagKey, FlagDir]:
    """Constructive direction assignment, one physical row at a time.

    Within a row, maximal runs of consecutive flagged armatures point away
    from the nearest free link: a run touching armature 1 points right
    (outward from gap 0), every other run points left.  Assumes every row
    has a free link.
    """
    dirs: dict[FlagKey, FlagDir] = {}
    for side in ("upper", "lower"):
        for j in range(1, e.m + 1):
            run: list[FlagKey] = []
            for i in range(1, e.n + 1):
                kind = _facing_kind(orientation, side, i)
                if e.has_flag(kind, i, j):
                    run.append((kind, i, j))
                else:
                    if run:
                        d: FlagDir = "right" if run[0][1] == 1 else "left"
                        dirs.update({k: d for k in run})
                        run = []
            if run:
                d = "right" if run[0][1] == 1 else "left"
                dirs.update({k: d for k in run})
    return dirs


def exists_flat(e: LogicEngine, cap: int = 64) -> Optional[EngineConfig]:
    """Search all 2^n orientations for a flat configuration.

    Flatness per orientation is decided by the free-link row rule; the
    witness directions come from the sweep and are re-checked with
    config_valid rather than trusted.  Returns the lexicographically least
    witness (False < True on orientations), or None.
    """
    if e.n * e.m > cap:
        raise EngineError(f"engine size n*m={e.n * e.m} exceeds cap {cap}")
    for orientation in product((False, True), repeat=e.n):
        flat = all(
            row_has_free_link(e, orientation, side, j)
            for side in ("upper", "lower")
            for j in range(1, e.m + 1)
        )
        if not flat:
            continue
        cfg = EngineConfig(orientation=orientation, flag_dir=_sweep_directions(e, orientation))
        if not config_valid(e, cfg):
            raise AssertionError("sweep produced an invalid configuration")
        return cfg
    return None


# -- text dumps (CLI interchange) -------------------------------------------


def engine_dump(e: LogicEngine) -> str:
    lines = [f"{e.n} {e.m}"]
    for mat in (e.flag_a, e.flag_ap):
        for row in mat:
            lines.append(" ".join("1" if x else "0" for x in row))
    return "\n".join(lines) + "\n"


def config_dump(c: EngineConfig) -> str:
    bits = "".join("1" if b else "0" for b in c.orientation)
    lines = [bits]
    for (kind, i, j), d in sorted(c.flag_dir.items()):
        lines.append(f"{kind} {i} {j} {d}")
    return "\n".join(lines) + "\n"
