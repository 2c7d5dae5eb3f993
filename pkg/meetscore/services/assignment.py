"""
Optimal speaker assignment for cpWER / tcpWER
"""

import logging
from typing import List, Sequence, Tuple

import numpy as np
from scipy.optimize import linear_sum_assignment

from ..core.errors import AssignmentOverflow

logger = logging.getLogger(__name__)

_INT64_MAX = np.iinfo(np.int64).max


def pad_square(matrix: Sequence[Sequence[int]], row_pad: Sequence[int], col_pad: Sequence[int]) -> np.ndarray:
    """
    Pad a K x C distance matrix to K' x K' with K' = max(K, C, 1).

    ``row_pad[c]`` is the cost of hypothesis stream c against an empty
    reference, ``col_pad[k]`` the cost of reference k against an empty stream.
    """
    rows = len(col_pad)
    cols = len(row_pad)
    size = max(rows, cols, 1)
    square = np.zeros((size, size), dtype=np.int64)
    if rows and cols:
        square[:rows, :cols] = np.asarray(matrix, dtype=np.int64).reshape(rows, cols)
    square[rows:, :cols] = np.asarray(row_pad, dtype=np.int64)[None, :]
    square[:rows, cols:] = np.asarray(col_pad, dtype=np.int64)[:, None]
    return square


def _check(matrix: np.ndarray) -> np.ndarray:
    matrix = np.asarray(matrix)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise ValueError(f"cost matrix must be square, got shape {matrix.shape}")
    if matrix.size and not np.issubdtype(matrix.dtype, np.integer):
        if not np.all(np.isfinite(matrix)) or not np.all(matrix == np.round(matrix)):
            raise ValueError("cost matrix entries must be finite integers")
    matrix = matrix.astype(np.int64)
    if matrix.size and matrix.min() < 0:
        raise ValueError("cost matrix entries must be nonnegative")
    if matrix.size and int(matrix.max()) > _INT64_MAX // max(matrix.shape[0], 1):
        raise AssignmentOverflow("cost matrix entries too large to sum without overflow")
    return matrix


def _optimum(matrix: np.ndarray) -> int:
    if matrix.shape[0] == 0:
        return 0
    rows, cols = linear_sum_assignment(matrix)
    return sum(int(matrix[r, c]) for r, c in zip(rows, cols))


def solve_assignment(matrix: Sequence[Sequence[int]]) -> Tuple[List[int], int]:
    """
    Minimum-cost perfect assignment of a square integer matrix.

    Returns ``(perm, cost)`` where column ``k`` is assigned row ``perm[k]``,
    minimizing ``sum(matrix[perm[k], k])``. Among co-optimal permutations
    the lexicographically smallest is returned.
    """
    square = _check(np.asarray(matrix))
    size = square.shape[0]
    total = _optimum(square)
    if total > _INT64_MAX:
        raise AssignmentOverflow(f"assignment cost {total} exceeds int64")

    # Fix columns left to right, each to the smallest row that keeps the optimum.
    perm: List[int] = []
    free_rows = list(range(size))
    spent = 0
    for column in range(size):
        for row in free_rows:
            rest_rows = [r for r in free_rows if r != row]
            rest = square[np.ix_(rest_rows, list(range(column + 1, size)))]
            if spent + int(square[row, column]) + _optimum(rest) == total:
                perm.append(row)
                spent += int(square[row, column])
                free_rows = rest_rows
                break
    logger.debug("assignment of size %d solved with cost %d", size, total)
    return perm, total
