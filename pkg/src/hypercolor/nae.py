"""Not-all-equal SAT through hypergraph 2-coloring.

Variable ``v`` becomes two vertices, ``pos(v) = 2v - 1`` and ``neg(v) = 2v``,
joined by an edge so they must get different colors. Each clause becomes an
edge over the vertices of its literals. A proper 2-coloring then reads back as
an assignment (``v`` is true iff ``pos(v)`` has color 0) under which every
clause has a true and a false literal, and vice versa.

The spectral solver has no guarantee on these instances; they are not drawn
from the planted model.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .coloring import color2
from .exceptions import ContractError, ImproperColoringError, ParseError, UnitClauseError
from .hypergraph import Coloring, Hypergraph, verify_proper

__all__ = [
    "NaeFormula",
    "ReductionMap",
    "parse_dimacs",
    "write_dimacs",
    "to_hypergraph",
    "decode",
    "check_nae",
    "format_assignment",
    "pos",
    "neg",
    "solve_nae",
]


def pos(v: int) -> int:
    return 2 * v - 1


def neg(v: int) -> int:
    return 2 * v


@dataclass(frozen=True)
class NaeFormula:
    num_vars: int
    clauses: tuple[tuple[int, ...], ...]
    dropped_tautologies: int = 0

    def __post_init__(self):
        if self.num_vars < 0:
            raise ContractError("num_vars must be nonnegative")
        clauses = tuple(tuple(int(l) for l in c) for c in self.clauses)
        for i, clause in enumerate(clauses):
            if not clause:
                raise ContractError(f"clause {i} is empty")
            for lit in clause:
                if lit == 0 or abs(lit) > self.num_vars:
                    raise ContractError(f"literal {lit} in clause {i} exceeds declared vars")
            if any(-lit in clause for lit in clause):
                raise ContractError(f"clause {i} contains a literal and its negation")
        object.__setattr__(self, "clauses", clauses)


@dataclass(frozen=True)
class ReductionMap:
    formula: NaeFormula
    hypergraph: Hypergraph
    clause_edges: tuple[int, ...] = field(default=())

    def vertex(self, literal: int) -> int:
        return pos(literal) if literal > 0 else neg(-literal)


def parse_dimacs(text: str) -> NaeFormula:
    """Read DIMACS CNF. Clauses holding both ``x`` and ``-x`` are dropped and counted."""
    num_vars = None
    declared = None
    clauses = []
    dropped = 0
    current: list[int] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c") or line.startswith("%"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if num_vars is not None:
                raise ParseError("duplicate problem line", lineno)
            if len(parts) != 4 or parts[1] != "cnf":
                raise ParseError(f"bad header {line!r}", lineno)
            try:
                num_vars, declared = int(parts[2]), int(parts[3])
            except ValueError:
                raise ParseError(f"bad header {line!r}", lineno) from None
            if num_vars < 0 or declared < 0:
                raise ParseError(f"bad header {line!r}", lineno)
            continue
        if num_vars is None:
            raise ParseError("clause before 'p cnf' header", lineno)
        for tok in line.split():
            try:
                lit = int(tok)
            except ValueError:
                raise ParseError(f"non-integer literal {tok!r}", lineno) from None
            if lit == 0:
                if not current:
                    raise ParseError("empty clause", lineno)
                if any(-l in current for l in current):
                    dropped += 1
                else:
                    clauses.append(tuple(current))
                current = []
                continue
            if abs(lit) > num_vars:
                raise ParseError(f"literal {lit} exceeds declared vars", lineno)
            current.append(lit)
    if num_vars is None:
        raise ParseError("missing 'p cnf <vars> <clauses>' header", 1)
    if current:
        raise ParseError("last clause is not terminated by 0")
    if len(clauses) + dropped != declared:
        raise ParseError(f"header declares {declared} clauses, found {len(clauses) + dropped}")
    return NaeFormula(num_vars, tuple(clauses), dropped)


def write_dimacs(f: NaeFormula) -> str:
    lines = [f"p cnf {f.num_vars} {len(f.clauses)}"]
    lines += [" ".join(map(str, c)) + " 0" for c in f.clauses]
    return "\n".join(lines) + "\n"


def to_hypergraph(f: NaeFormula) -> ReductionMap:
    """Hypergraph on ``2 * num_vars`` vertices: one pair edge per variable, one edge per clause.

    Raises :class:`UnitClauseError` for clauses with a single distinct literal.
    """
    if f.num_vars == 0:
        if f.clauses:
            raise ContractError("clauses without variables")
        raise ContractError("a formula needs at least one variable to reduce")
    edges = [(pos(v), neg(v)) for v in range(1, f.num_vars + 1)]
    clause_edges = []
    for i, clause in enumerate(f.clauses):
        verts = sorted({pos(l) if l > 0 else neg(-l) for l in clause})
        if len(verts) < 2:
            raise UnitClauseError(i, clause[0])
        clause_edges.append(len(edges))
        edges.append(tuple(verts))
    h = Hypergraph._trusted(2 * f.num_vars, edges)
    return ReductionMap(f, h, tuple(clause_edges))


def check_nae(f: NaeFormula, assignment: Sequence[bool]) -> bool:
    """True iff every clause has at least one true and one false literal.

    ``assignment[v - 1]`` is the value of variable ``v``.
    """
    if len(assignment) != f.num_vars:
        raise ContractError(f"assignment covers {len(assignment)} of {f.num_vars} variables")
    for clause in f.clauses:
        values = {bool(assignment[abs(l) - 1]) == (l > 0) for l in clause}
        if len(values) < 2:
            return False
    return True


def decode(c: Coloring, rmap: ReductionMap) -> list[bool]:
    """Assignment read off a proper coloring of the reduced hypergraph."""
    verdict = verify_proper(rmap.hypergraph, c)
    if not verdict.proper:
        idx = verdict.monochromatic_edges[0]
        raise ImproperColoringError(idx, rmap.hypergraph.edges[idx])
    assignment = [c[pos(v)] == 0 for v in range(1, rmap.formula.num_vars + 1)]
    assert check_nae(rmap.formula, assignment)
    return assignment


def format_assignment(assignment: Sequence[bool]) -> str:
    lits = [str(v if val else -v) for v, val in enumerate(assignment, start=1)]
    return "v " + " ".join(lits + ["0"]) + "\n"


def solve_nae(f: NaeFormula, **color_kwargs):
    """Best-effort NAE solve: reduce, 2-color spectrally, decode.

    Returns ``(assignment, outcome)``; ``assignment`` is ``None`` when the
    coloring is not proper. A formula without variables is solved by the
    empty assignment.
    """
    if f.num_vars == 0:
        return [], None
    rmap = to_hypergraph(f)
    outcome = color2(rmap.hypergraph, **color_kwargs)
    if not outcome.success:
        return None, outcome
    return decode(outcome.coloring, rmap), outcome
