import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from strategies import permutations
from ulam_median.oracle import bfs_move_distances
from ulam_median.perm_core import (
    DimensionMismatchError,
    Metric,
    Permutation,
    SymbolString,
    edit_distance_indel,
    lcs_alignment,
    lcs_length,
    moved_set,
    objective,
    ulam_distance,
)


def test_permutation_validation():
    assert Permutation([2, 1, 3]).n == 3
    with pytest.raises(ValueError):
        Permutation([])
    with pytest.raises(ValueError):
        Permutation([1, 1, 2])
    with pytest.raises(ValueError):
        Permutation([0, 1])


def test_symbol_string_alphabet():
    s = SymbolString([1, 1, 3], sigma=3)
    assert s.sigma == 3 and not s.is_permutation()
    with pytest.raises(ValueError):
        SymbolString([1, 4], sigma=3)


@pytest.mark.parametrize("x, y, expected", [
    ((1, 2, 3, 4), (1, 2, 3, 4), 0),
    ((1, 2, 3, 4), (2, 3, 4, 1), 1),
    ((3, 1, 2), (1, 2, 3), 1),
])
def test_ulam_distance_examples(x, y, expected):
    assert ulam_distance(x, y) == expected


def test_ulam_distance_dimension_mismatch():
    with pytest.raises(DimensionMismatchError, match="dimension mismatch"):
        ulam_distance((1, 2), (1, 2, 3))


# pairs are 0-based; the (1-based) reference examples shifted by one
@pytest.mark.parametrize("x, y, expected", [
    ((1, 2, 3), (1, 2, 3), [(0, 0), (1, 1), (2, 2)]),
    ((1, 2, 3), (2, 3, 1), [(1, 0), (2, 1)]),
    ((2, 1), (1, 2), [(0, 1)]),
])
def test_lcs_alignment_examples(x, y, expected):
    assert lcs_alignment(x, y) == expected


def _all_lcs_witnesses(x, y):
    best, found = -1, []
    for k in range(min(len(x), len(y)), -1, -1):
        for ci in itertools.combinations(range(len(x)), k):
            for cj in itertools.combinations(range(len(y)), k):
                if all(x[i] == y[j] for i, j in zip(ci, cj)):
                    found.append(list(zip(ci, cj)))
        if found:
            return sorted(found)
    return [[]]


@given(st.lists(st.integers(1, 3), max_size=6), st.lists(st.integers(1, 3), max_size=6))
def test_lcs_alignment_is_lexicographic_minimum(x, y):
    assert lcs_alignment(x, y) == _all_lcs_witnesses(x, y)[0]


@given(st.lists(st.integers(1, 4), max_size=12), st.lists(st.integers(1, 4), max_size=12))
def test_lcs_alignment_is_monotone_matching(x, y):
    pairs = lcs_alignment(x, y)
    assert len(pairs) == lcs_length(x, y)
    assert all(x[i] == y[j] for i, j in pairs)
    assert all(a[0] < b[0] and a[1] < b[1] for a, b in zip(pairs, pairs[1:]))


@pytest.mark.parametrize("s, t, expected", [
    ((1, 2, 3), (1, 2, 3), 0),
    ((1, 2, 3), (1, 3, 2), 2),
    ((1, 2), (2, 1), 2),
])
def test_edit_distance_examples(s, t, expected):
    assert edit_distance_indel(s, t) == expected


@given(st.lists(st.integers(1, 3), max_size=8), st.lists(st.integers(1, 3), max_size=8))
def test_edit_distance_symmetric(s, t):
    assert edit_distance_indel(s, t) == edit_distance_indel(t, s)


@pytest.mark.parametrize("S, y, expected", [
    ([(1, 2, 3)], (1, 2, 3), 0),
    ([(1, 2, 3), (3, 1, 2)], (1, 2, 3), 1),
    ([(1, 2, 3), (1, 2, 3), (3, 2, 1)], (1, 2, 3), 2),
])
def test_objective_examples(S, y, expected):
    assert objective(S, y, Metric.ULAM) == expected


def test_objective_rejects_mixed_dimensions():
    with pytest.raises(DimensionMismatchError):
        objective([(1, 2)], (1, 2, 3))


@pytest.mark.parametrize("ref, x, expected", [
    ((1, 2, 3), (1, 2, 3), set()),
    ((1, 2, 3, 4), (2, 3, 4, 1), {1}),
    ((3, 1, 2), (1, 2, 3), {3}),
])
def test_moved_set_examples(ref, x, expected):
    assert moved_set(ref, x) == expected


@given(permutations(max_n=10), st.data())
def test_moved_set_size_is_distance(x, data):
    y = data.draw(permutations(n=x.n))
    assert len(moved_set(x, y)) == ulam_distance(x, y)


@given(permutations(max_n=12), st.data())
def test_metric_axioms(x, data):
    y = data.draw(permutations(n=x.n))
    z = data.draw(permutations(n=x.n))
    assert ulam_distance(x, y) == ulam_distance(y, x)
    assert (ulam_distance(x, y) == 0) == (x == y)
    assert ulam_distance(x, z) <= ulam_distance(x, y) + ulam_distance(y, z)
    assert 0 <= ulam_distance(x, y) <= x.n - 1


@given(permutations(max_n=12), st.data())
def test_distance_is_n_minus_lcs_and_half_indel(x, data):
    y = data.draw(permutations(n=x.n))
    d = ulam_distance(x, y)
    assert d == x.n - len(lcs_alignment(x, y))
    assert edit_distance_indel(x, y) == 2 * d


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_distance_matches_bfs_exhaustively(n):
    for x in itertools.permutations(range(1, n + 1)):
        bfs = bfs_move_distances(x)
        for y, d in bfs.items():
            assert ulam_distance(x, y) == d
