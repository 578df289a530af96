import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hypercolor.exceptions import ContractError
from hypercolor.hypergraph import Hypergraph
from hypercolor.planted import PlantedParams, probs_for_density, sample
from hypercolor.spectral import (
    WeightedAdjacency,
    brute_force_matrix,
    build_matrix,
    compute_eta,
    deviation_diagnostic,
    expected_matrix,
    initial_error_budget,
    moments,
)


def expected_by_enumeration(params):
    # Sum p_|e|/|e| * a_e a_e^T over every non-monochromatic subset e.
    n, k = params.n, params.k
    N = n * k
    out = np.zeros((N, N))
    for m in params.sizes():
        for s in itertools.combinations(range(N), m):
            if len({v // n for v in s}) > 1:
                idx = np.array(s)
                out[np.ix_(idx, idx)] += params.prob(m) / m
    return out


def test_build_matrix_example():
    A = build_matrix(Hypergraph(4, [(1, 3), (1, 2, 4)])).toarray()
    third = 1 / 3
    expected = np.array([
        [5 / 6, third, 0.5, third],
        [third, third, 0.0, third],
        [0.5, 0.0, 0.5, 0.0],
        [third, third, 0.0, third],
    ])
    np.testing.assert_allclose(A, expected, atol=1e-15)
    assert A[0].sum() == pytest.approx(2.0, abs=1e-12)


def test_empty_hypergraph_matrix():
    A = build_matrix(Hypergraph(3))
    assert np.array_equal(A.toarray(), np.zeros((3, 3)))
    assert A.scale == 1


@st.composite
def small_hypergraphs(draw):
    n = draw(st.integers(2, 12))
    edge = st.lists(st.integers(1, n), min_size=2, max_size=min(n, 5), unique=True)
    return Hypergraph(n, draw(st.lists(edge, max_size=50)))


@settings(max_examples=100, deadline=None)
@given(small_hypergraphs())
def test_matrix_matches_brute_force(h):
    A = build_matrix(h)
    oracle = brute_force_matrix(h)
    np.testing.assert_allclose(A.toarray(), oracle, rtol=0, atol=1e-12)
    np.testing.assert_allclose(A.row_sums(), h.degrees(), rtol=0, atol=1e-9)
    assert np.allclose(A.toarray(), A.toarray().T)
    assert (A.toarray() >= 0).all()
    assert (np.diag(A.toarray())[:, None] >= A.toarray() - 1e-15).all()


@settings(max_examples=30, deadline=None)
@given(small_hypergraphs(), st.integers(0, 2**16))
def test_streamed_matrix_agrees_with_dense(h, seed):
    dense = build_matrix(h)
    streamed = build_matrix(h, dense_limit=0)
    assert not streamed.is_dense
    X = np.random.default_rng(seed).standard_normal((h.num_vertices, 3))
    np.testing.assert_allclose(streamed.matmat(X), dense.matmat(X), atol=1e-12)
    np.testing.assert_allclose(streamed.diagonal(), dense.diagonal(), atol=1e-15)
    assert streamed.inf_norm() == pytest.approx(dense.inf_norm())


def test_moments_small_example():
    mom = moments(PlantedParams(2, 2, (1.0,)))
    assert (mom.alpha1, mom.alpha2, mom.alpha3) == (0.5, 0.5, 1.0)
    assert mom.lambda_min == 0.0 and mom.eigen_gap == 1.0
    assert mom.eta == pytest.approx(1 / 32)
    vals = np.linalg.eigvalsh(mom.expected_matrix)
    np.testing.assert_allclose(vals, [0, 1, 1, 2], atol=1e-12)


def test_moments_zero():
    mom = moments(PlantedParams(3, 3, (0.0, 0.0)))
    assert (mom.alpha1, mom.alpha2, mom.alpha3, mom.eta) == (0, 0, 0, 0)
    assert not mom.expected_matrix.any()


def test_eta_example():
    assert compute_eta(PlantedParams(4, 2, (1.0,))) == pytest.approx(3 / 32)


def test_moments_rejects_k3():
    with pytest.raises(ContractError):
        moments(PlantedParams(2, 2, (1.0,), k=3))


@pytest.mark.parametrize(
    "params",
    [
        PlantedParams(2, 2, (1.0,)),
        PlantedParams(3, 3, (0.3, 0.1)),
        PlantedParams(4, 4, (0.2, 0.5, 0.7)),
        PlantedParams(2, 3, (0.4, 0.9), k=3),
        PlantedParams(3, 2, (0.6,), k=4),
    ],
)
def test_expected_matrix_matches_enumeration(params):
    np.testing.assert_allclose(expected_matrix(params), expected_by_enumeration(params), atol=1e-12)


@pytest.mark.parametrize("n,M", [(2, 2), (5, 3), (8, 4), (16, 3)])
def test_expected_matrix_spectrum(n, M):
    params = PlantedParams(n, M, probs_for_density(n, M, 30).p)
    mom = moments(params)
    vals = np.linalg.eigvalsh(mom.expected_matrix)
    assert vals[0] == pytest.approx(mom.lambda_min, abs=1e-9 * max(1, abs(vals).max()))
    assert vals[1] - vals[0] == pytest.approx(mom.eigen_gap, rel=1e-9)


def test_k_class_expected_matrix_multiplicity():
    params = PlantedParams(4, 3, (0.5, 0.2), k=3)
    vals = np.linalg.eigvalsh(expected_matrix(params))
    assert vals[1] - vals[0] < 1e-9
    assert vals[2] - vals[1] > 0.1


def test_deviation_zero_cases():
    params = PlantedParams(4, 3, (0.4, 0.2))
    rep = deviation_diagnostic(moments(params).expected_matrix, params)
    assert rep.spectral_norm_dev == 0.0 and rep.within_bound

    empty = PlantedParams(4, 3, (0.0, 0.0))
    h, _ = sample(empty)
    rep = deviation_diagnostic(build_matrix(h), empty)
    assert rep.spectral_norm_dev == 0.0 and rep.within_bound


def test_deviation_matches_dense_norm():
    params = PlantedParams(10, 3, (0.4, 0.05), seed=3)
    h, _ = sample(params)
    A = build_matrix(h)
    rep = deviation_diagnostic(A, params)
    exact = np.linalg.norm(A.toarray() - moments(params).expected_matrix, 2)
    assert rep.spectral_norm_dev == pytest.approx(exact, rel=1e-6)
    assert rep.bernstein_bound == pytest.approx(4 * math.sqrt(10 * moments(params).alpha1 * math.log(10)))


def test_deviation_within_bound_with_high_probability():
    probs = probs_for_density(32, 2, 30, "pairs-only").p
    hits = 0
    for seed in range(100):
        params = PlantedParams(32, 2, probs, seed=seed)
        h, _ = sample(params)
        hits += deviation_diagnostic(build_matrix(h), params).within_bound
    assert hits >= 95


def test_initial_error_budget():
    assert initial_error_budget(1024, 2) == 1024 / (4 * 256)


def test_weighted_adjacency_requires_one_backing():
    with pytest.raises(ContractError):
        WeightedAdjacency()
    with pytest.raises(ContractError):
        WeightedAdjacency.from_dense(np.zeros((2, 3)))
