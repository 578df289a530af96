import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hypercolor.exceptions import ContractError, ParseError
from hypercolor.hypergraph import (
    Coloring,
    Hypergraph,
    read_coloring,
    read_hypergraph,
    verify_proper,
    write_coloring,
    write_hypergraph,
)


@pytest.fixture
def small():
    return Hypergraph(4, [(1, 3), (2, 3, 4)])


def test_proper_coloring(small):
    c = Coloring.from_mapping({1: 0, 2: 0, 3: 1, 4: 1})
    assert verify_proper(small, c) == (True, [])


def test_all_one_color(small):
    c = Coloring([0, 0, 0, 0])
    assert verify_proper(small, c) == (False, [0, 1])


def test_no_edges_is_proper():
    assert verify_proper(Hypergraph(5), Coloring([0, 1, 0, 1, 1])).proper


def test_missing_vertex_named(small):
    with pytest.raises(ContractError, match="vertex 4"):
        verify_proper(small, Coloring([0, 1, 0]))
    with pytest.raises(ContractError, match="vertex 2"):
        Coloring.from_mapping({1: 0, 3: 1})


def test_hypergraph_canonicalizes_and_validates():
    h = Hypergraph(4, [[3, 1], (4, 2, 3)])
    assert h.edges == ((1, 3), (2, 3, 4))
    assert h.dimension == 3
    assert Hypergraph(3).dimension == 0
    with pytest.raises(ContractError):
        Hypergraph(3, [(1,)])
    with pytest.raises(ContractError, match="out of range"):
        Hypergraph(3, [(1, 4)])
    with pytest.raises(ContractError, match="repeats"):
        Hypergraph(3, [(1, 1, 2)])


def test_duplicate_edges_tolerated():
    h = read_hypergraph("p hg 3 2\n1 2\n2 1\n")
    assert h.edges == ((1, 2), (1, 2))


def test_read_example():
    h = read_hypergraph("p hg 4 2\n1 3\n2 3 4\n")
    assert h == Hypergraph(4, [(1, 3), (2, 3, 4)])


def test_read_canonicalizes():
    assert read_hypergraph("p hg 4 1\n3 1\n").edges == ((1, 3),)


def test_read_comments_anywhere():
    text = "c hello\np hg 3 1\nc between\n1 2 3\nc end\n"
    assert read_hypergraph(text).edges == ((1, 2, 3),)


@pytest.mark.parametrize(
    "text, message, lineno",
    [
        ("p hg 2 1\n5 1\n", "vertex 5 out of range", 2),
        ("p cnf 2 1\n1 2\n", "malformed header", 1),
        ("p hg 3 1\n2\n", "size 1 < 2", 2),
        ("p hg 3 1\n1 x\n", "non-integer", 2),
        ("p hg 3 1\n1 2\n2 3\n", "more than", 3),
        ("", "missing", 1),
    ],
)
def test_read_errors(text, message, lineno):
    with pytest.raises(ParseError, match=message) as info:
        read_hypergraph(text)
    assert info.value.lineno == lineno


def test_read_too_few_edges():
    with pytest.raises(ParseError, match="expected 2 edges"):
        read_hypergraph("p hg 3 2\n1 2\n")


@st.composite
def hypergraphs(draw, max_vertices=10):
    n = draw(st.integers(2, max_vertices))
    edge = st.lists(st.integers(1, n), min_size=2, max_size=min(n, 5), unique=True)
    edges = draw(st.lists(edge, max_size=20))
    return Hypergraph(n, [tuple(sorted(e)) for e in edges])


@given(hypergraphs())
def test_round_trip(h):
    assert read_hypergraph(write_hypergraph(h)) == h


@settings(max_examples=50)
@given(hypergraphs(max_vertices=7), st.data())
def test_verdict_invariant_under_color_permutation(h, data):
    k = data.draw(st.integers(2, 4))
    labels = data.draw(st.lists(st.integers(0, k - 1), min_size=h.num_vertices, max_size=h.num_vertices))
    c = Coloring(labels, k)
    base = verify_proper(h, c)
    for perm in itertools.permutations(range(k)):
        assert verify_proper(h, c.relabel(perm)) == base


@given(hypergraphs(max_vertices=8), st.data())
def test_two_color_swap_symmetry(h, data):
    labels = data.draw(st.lists(st.integers(0, 1), min_size=h.num_vertices, max_size=h.num_vertices))
    c = Coloring(labels, 2)
    assert verify_proper(h, c).proper == verify_proper(h, c.relabel([1, 0])).proper


def test_coloring_file_round_trip():
    c = Coloring([1, 0, 2, 0], k=3)
    text = write_coloring(c)
    assert text == "1 1\n2 0\n3 2\n4 0\n"
    assert read_coloring(text, k=3) == c


def test_coloring_file_errors():
    with pytest.raises(ParseError, match="vertex 2"):
        read_coloring("1 0\n3 1\n")
    with pytest.raises(ParseError, match="twice"):
        read_coloring("1 0\n1 1\n")


def test_coloring_type_rules():
    c = Coloring([0, 1, 1])
    assert c.k == 2 and c[1] == 0 and c[3] == 1
    assert c.parts() == [frozenset({1}), frozenset({2, 3})]
    with pytest.raises(ContractError):
        Coloring([0, 3], k=2)
    with pytest.raises(ContractError):
        Coloring([-1, 0])
    assert np.array_equal(Coloring.from_parts([[2], [1, 3]], 3).labels, [1, 0, 1])
