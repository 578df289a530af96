import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hypercolor.coloring import color2
from hypercolor.exceptions import ContractError, ImproperColoringError, ParseError, UnitClauseError
from hypercolor.hypergraph import Coloring, verify_proper
from hypercolor.nae import (
    NaeFormula,
    check_nae,
    decode,
    format_assignment,
    parse_dimacs,
    solve_nae,
    to_hypergraph,
    write_dimacs,
)


def test_parse_simple():
    f = parse_dimacs("p cnf 3 1\n1 2 3 0\n")
    assert f.num_vars == 3 and f.clauses == ((1, 2, 3),)


def test_parse_drops_tautology():
    f = parse_dimacs("p cnf 2 1\n1 -1 0\n")
    assert f.clauses == () and f.dropped_tautologies == 1


def test_parse_multiline_clauses_and_comments():
    f = parse_dimacs("c hi\np cnf 3 2\n1 -2\n3 0 -1 2 0\n")
    assert f.clauses == ((1, -2, 3), (-1, 2))


@pytest.mark.parametrize(
    "text, message",
    [
        ("p cnf 1 1\n2 0\n", "literal 2 exceeds declared vars"),
        ("p sat 1 1\n1 0\n", "bad header"),
        ("1 0\n", "before 'p cnf'"),
        ("p cnf 2 1\n1 2\n", "not terminated"),
        ("p cnf 2 2\n1 2 0\n", "declares 2"),
        ("p cnf 2 1\n0\n", "empty clause"),
    ],
)
def test_parse_errors(text, message):
    with pytest.raises(ParseError, match=message):
        parse_dimacs(text)


def test_parse_error_line_number():
    with pytest.raises(ParseError) as info:
        parse_dimacs("p cnf 1 2\n1 0\n-3 0\n")
    assert info.value.lineno == 3


@given(st.integers(1, 6).flatmap(lambda n: st.tuples(
    st.just(n),
    st.lists(st.lists(st.integers(1, n), min_size=1, max_size=n, unique=True).flatmap(
        lambda vs: st.tuples(*[st.sampled_from([v, -v]) for v in vs])), max_size=8),
)))
def test_print_parse_round_trip(data):
    n, clauses = data
    f = NaeFormula(n, tuple(clauses))
    assert parse_dimacs(write_dimacs(f)) == f


def test_reduction_single_clause():
    rmap = to_hypergraph(NaeFormula(3, ((1, 2, 3),)))
    h = rmap.hypergraph
    assert h.num_vertices == 6
    assert h.edges == ((1, 2), (3, 4), (5, 6), (1, 3, 5))
    assert h.dimension == 3


def test_reduction_no_clauses():
    assert to_hypergraph(NaeFormula(1, ())).hypergraph.edges == ((1, 2),)


def test_reduction_negative_literals():
    h = to_hypergraph(NaeFormula(2, ((1, 2), (-1, -2)))).hypergraph
    assert h.edges == ((1, 2), (3, 4), (1, 3), (2, 4))


def test_unit_clause_rejected():
    with pytest.raises(UnitClauseError):
        to_hypergraph(NaeFormula(2, ((1, 2), (-2,))))
    with pytest.raises(UnitClauseError):
        to_hypergraph(NaeFormula(2, ((1, 1),)))


def test_decode_example():
    rmap = to_hypergraph(NaeFormula(3, ((1, 2, 3),)))
    c = Coloring([0, 1, 0, 1, 1, 0])
    assignment = decode(c, rmap)
    assert assignment == [True, True, False]
    assert check_nae(rmap.formula, assignment)


def test_decode_refuses_improper():
    rmap = to_hypergraph(NaeFormula(2, ((1, 2),)))
    with pytest.raises(ImproperColoringError, match="edge 0"):
        decode(Coloring([0, 0, 0, 1]), rmap)


def test_empty_formula():
    assignment, outcome = solve_nae(NaeFormula(0, ()))
    assert assignment == [] and outcome is None


@pytest.mark.parametrize(
    "clause, assignment, expected",
    [
        ((1, 2, 3), [True, False, True], True),
        ((1, 2, 3), [True, True, True], False),
        ((1, -2), [True, True], True),
    ],
)
def test_check_nae(clause, assignment, expected):
    f = NaeFormula(len(assignment), (clause,))
    assert check_nae(f, assignment) is expected


def test_check_nae_partial_assignment():
    with pytest.raises(ContractError):
        check_nae(NaeFormula(3, ((1, 2),)), [True])


def nae_satisfiable(f):
    return any(check_nae(f, a) for a in itertools.product([False, True], repeat=f.num_vars))


def two_colorable(h):
    labels = np.array(list(itertools.product([0, 1], repeat=h.num_vertices)))
    for row in labels:
        if verify_proper(h, Coloring(row, 2)).proper:
            return True
    return False


def small_formulas(max_vars=2, max_clauses=2):
    for n in range(1, max_vars + 1):
        clauses = []
        for width in range(1, 4):
            for vs in itertools.combinations(range(1, n + 1), width):
                for signs in itertools.product([1, -1], repeat=width):
                    clauses.append(tuple(s * v for s, v in zip(signs, vs)))
        for count in range(max_clauses + 1):
            for chosen in itertools.combinations_with_replacement(clauses, count):
                yield NaeFormula(n, chosen)


def test_reduction_soundness_small():
    checked = 0
    for f in small_formulas():
        if any(len(c) == 1 for c in f.clauses):
            assert not nae_satisfiable(f)
            with pytest.raises(UnitClauseError):
                to_hypergraph(f)
            continue
        assert nae_satisfiable(f) == two_colorable(to_hypergraph(f).hypergraph)
        checked += 1
    assert checked > 10


def test_solve_round_trip_on_planted_formulas():
    rng = np.random.default_rng(3)
    for _ in range(10):
        n = 20
        hidden = rng.random(n) < 0.5
        clauses = []
        while len(clauses) < 60:
            vs = rng.choice(n, 3, replace=False) + 1
            lits = tuple(int(v) if rng.random() < 0.5 else -int(v) for v in vs)
            if len({hidden[abs(l) - 1] == (l > 0) for l in lits}) == 2:
                clauses.append(lits)
        f = NaeFormula(n, tuple(clauses))
        assignment, outcome = solve_nae(f)
        if assignment is not None:
            assert check_nae(f, assignment)
        else:
            assert not outcome.success


def test_format_assignment():
    assert format_assignment([True, False, True]) == "v 1 -2 3 0\n"
