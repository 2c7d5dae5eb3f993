"""Tests for the speaker assignment solver."""

import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from meetscore.core.errors import AssignmentOverflow
from meetscore.services.assignment import pad_square, solve_assignment


def brute_force(matrix):
    size = len(matrix)
    return min(
        (sum(matrix[perm[k]][k] for k in range(size)), list(perm))
        for perm in itertools.permutations(range(size))
    )


def test_singleton():
    assert solve_assignment([[0]]) == ([0], 0)


def test_identity_is_optimal():
    assert solve_assignment([[1, 2], [2, 1]]) == ([0, 1], 2)


def test_swap_is_optimal():
    assert solve_assignment([[4, 1], [2, 3]]) == ([1, 0], 3)


def test_empty_matrix():
    assert solve_assignment(np.zeros((0, 0), dtype=np.int64)) == ([], 0)


def test_ties_resolve_to_lexicographically_smallest():
    perm, cost = solve_assignment([[1, 1, 1], [1, 1, 1], [1, 1, 1]])
    assert (perm, cost) == ([0, 1, 2], 3)


def test_rejects_non_square():
    with pytest.raises(ValueError):
        solve_assignment([[1, 2, 3], [4, 5, 6]])


def test_rejects_negative_costs():
    with pytest.raises(ValueError):
        solve_assignment([[-1]])


def test_rejects_costs_that_could_overflow():
    huge = np.iinfo(np.int64).max // 2 + 1
    with pytest.raises(AssignmentOverflow):
        solve_assignment([[huge, 0], [0, huge]])


def test_pad_square_more_streams_than_speakers():
    square = pad_square([[1, 2, 3]], row_pad=[4, 5, 6], col_pad=[7])
    assert square.tolist() == [[1, 2, 3], [4, 5, 6], [4, 5, 6]]


def test_pad_square_more_speakers_than_streams():
    square = pad_square([[1], [2]], row_pad=[9], col_pad=[3, 4])
    assert square.tolist() == [[1, 3], [2, 4]]


def test_pad_square_nothing_at_all():
    assert pad_square([], row_pad=[], col_pad=[]).tolist() == [[0]]


@given(st.integers(1, 5).flatmap(
    lambda n: st.lists(st.lists(st.integers(0, 9), min_size=n, max_size=n), min_size=n, max_size=n)
))
@settings(max_examples=150, deadline=None)
def test_matches_brute_force(matrix):
    cost, perm = brute_force(matrix)
    assert solve_assignment(matrix) == (perm, cost)
