"""NAE-3SAT instances: parsing, evaluation, and a deliberately dumb solver."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Optional

Assignment = tuple[bool, ...]


class FormulaError(Exception):
    pass


@dataclass(frozen=True)
class Literal:
    var: int  # 1-based
    negated: bool

    def holds(self, a: Assignment) -> bool:
        return a[self.var - 1] != self.negated

    def __str__(self) -> str:
        return f"-{self.var}" if self.negated else str(self.var)


@dataclass(frozen=True)
class Clause:
    """An ordered triple of literals; duplicates are allowed."""

    literals: tuple[Literal, Literal, Literal]

    def __post_init__(self):
        if len(self.literals) != 3:
            raise FormulaError(f"clause has {len(self.literals)} literals, want 3")


@dataclass(frozen=True)
class Formula:
    n: int
    clauses: tuple[Clause, ...]

    def __post_init__(self):
        if self.n < 1:
            raise FormulaError("need at least one variable")
        if not self.clauses:
            raise FormulaError("need at least one clause")
        for c in self.clauses:
            for lit in c.literals:
                if not 1 <= lit.var <= self.n:
                    raise FormulaError(f"literal variable {lit.var} out of 1..{self.n}")

    @property
    def m(self) -> int:
        return len(self.clauses)


def clause(*lits: int) -> Clause:
    """Build a clause from signed integers (DIMACS convention)."""
    return Clause(tuple(Literal(abs(x), x < 0) for x in lits))


def parse_formula(text: str) -> Formula:
    """Parse the line-oriented formula format.

    Comment lines start with 'c'.  One header line `p nae3sat <n> <m>`,
    followed by m clauses: three nonzero integers terminated by 0,
    whitespace-separated across lines.
    """
    tokens: list[str] = []
    for line in text.splitlines():
        stripped = line.strip()
        if not stripped or stripped.startswith("c"):
            continue
        tokens.extend(stripped.split())
    if len(tokens) < 4 or tokens[0] != "p" or tokens[1] != "nae3sat":
        raise FormulaError("malformed header: expected 'p nae3sat <n> <m>'")
    try:
        n, m = int(tokens[2]), int(tokens[3])
    except ValueError:
        raise FormulaError("malformed header: n, m must be integers") from None

    clauses: list[Clause] = []
    current: list[int] = []
    for tok in tokens[4:]:
        try:
            val = int(tok)
        except ValueError:
            raise FormulaError(f"bad token {tok!r}") from None
        if val == 0:
            if len(current) != 3:
                raise FormulaError(f"clause has {len(current)} literals, want 3")
            clauses.append(clause(*current))
            current = []
        else:
            if abs(val) > n:
                raise FormulaError(f"variable index {abs(val)} exceeds n={n}")
            current.append(val)
    if current:
        raise FormulaError("missing clause terminator")
    if len(clauses) != m:
        raise FormulaError(f"header promises {m} clauses, found {len(clauses)}")
    return Formula(n=n, clauses=tuple(clauses))


def format_formula(f: Formula) -> str:
    lines = [f"p nae3sat {f.n} {f.m}"]
    for c in f.clauses:
        lines.append(" ".join(str(lit) for lit in c.literals) + " 0")
    return "\n".join(lines) + "\n"


def nae_eval(f: Formula, a: Assignment) -> bool:
    """True iff every clause has at least one true and one false literal."""
    if len(a) != f.n:
        raise FormulaError(f"assignment length {len(a)} != n={f.n}")
    for c in f.clauses:
        values = [lit.holds(a) for lit in c.literals]
        if all(values) or not any(values):
            return False
    return True


def brute_force_nae_sat(f: Formula, cap: int = 24) -> Optional[Assignment]:
    """Scan all 2^n assignments in lexicographic order; first hit wins.

    Intentionally does not exploit complement symmetry: this is the trusted
    oracle and stays maximally simple.
    """
    if f.n > cap:
        raise FormulaError(f"n={f.n} exceeds brute-force cap {cap}")
    for a in product((False, True), repeat=f.n):
        if nae_eval(f, a):
            return a
    return None
