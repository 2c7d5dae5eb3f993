"""
Multi-stream assignment DP shared by MIMO-WER and ORC-WER.

States are ``(a_1..a_K, j_1..j_C)``: utterances consumed per speaker and word
positions per hypothesis stream. A transition aligns the next utterance of one
speaker against a contiguous stretch of one stream. ORC runs the same engine
with every reference utterance under a single speaker in global begin order.
"""

import itertools
import logging
import math
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ..core.config import settings
from ..core.errors import StateSpaceTooLarge
from ..models.schemas import DEFAULT_COSTS, CostModel
from .kernels import INF_COST

logger = logging.getLogger(__name__)

# (speaker index, utterance index) per stream, in emission order
StreamPlan = List[List[Tuple[int, int]]]


def state_count(speakers: Sequence[Sequence[np.ndarray]], streams: Sequence[np.ndarray]) -> int:
    """Number of DP states for the given utterance and stream sizes."""
    return math.prod(len(utterances) + 1 for utterances in speakers) * math.prod(len(s) + 1 for s in streams)


def _insertion_chain(rows: np.ndarray, c_ins: int) -> np.ndarray:
    # Y[j] = min over i <= j of X[i] + (j - i) * c_ins
    offsets = np.arange(rows.shape[-1], dtype=np.int64) * c_ins
    return offsets + np.minimum.accumulate(rows - offsets, axis=-1)


def _levenshtein_rows(rows: np.ndarray, utterance: np.ndarray, stream: np.ndarray, costs: CostModel) -> np.ndarray:
    """Run the Levenshtein recursion for ``utterance`` starting from a batch of row-0 values."""
    current = _insertion_chain(rows, costs.c_ins)
    for token in utterance:
        step = np.where(stream == token, costs.c_cor, costs.c_sub).astype(np.int64)
        nxt = np.empty_like(current)
        nxt[:, 0] = current[:, 0] + costs.c_del
        nxt[:, 1:] = np.minimum(current[:, :-1] + step, current[:, 1:] + costs.c_del)
        current = _insertion_chain(nxt, costs.c_ins)
    return current


def _sub_align(layer: np.ndarray, utterance: np.ndarray, stream: np.ndarray, axis: int, costs: CostModel) -> np.ndarray:
    """Best cost of every stream position after emitting ``utterance`` on stream ``axis``."""
    moved = np.moveaxis(layer, axis, -1)
    shape = moved.shape
    result = _levenshtein_rows(moved.reshape(-1, shape[-1]), utterance, stream, costs)
    return np.moveaxis(result.reshape(shape), -1, axis)


def _suffix_distances(utterance: np.ndarray, prefix: np.ndarray, costs: CostModel) -> np.ndarray:
    """``out[s] = lev(utterance, prefix[s:])`` for every start ``s``."""
    start = (np.arange(len(prefix) + 1, dtype=np.int64) * costs.c_ins)[None, :]
    row = _levenshtein_rows(start, utterance[::-1], prefix[::-1], costs)[0]
    return row[::-1]


def _check_state_space(speakers: Sequence[Sequence[np.ndarray]], streams: Sequence[np.ndarray], max_states: int) -> int:
    states = state_count(speakers, streams)
    logger.debug(
        "multi-stream DP: %d speakers, %d streams, %d states", len(speakers), len(streams), states
    )
    if states > max_states:
        raise StateSpaceTooLarge(
            f"{states} DP states ({states * 8 / 1e6:.0f} MB table) exceed the limit of {max_states}; "
            f"the assignment search grows exponentially with the number of output streams ({len(streams)} here)"
        )
    return states


def multi_stream_alignment(
    speakers: Sequence[Sequence[np.ndarray]],
    streams: Sequence[np.ndarray],
    costs: CostModel = DEFAULT_COSTS,
    max_states: Optional[int] = None,
) -> Tuple[int, StreamPlan]:
    """
    Minimum summed Levenshtein distance over all assignments of reference
    utterances to hypothesis streams that keep each speaker's utterance order.

    ``speakers[k]`` holds the encoded utterances of speaker k in begin order,
    ``streams[c]`` the encoded words of stream c (at least one stream).
    Returns the distance and, per stream, the assigned ``(speaker, utterance)``
    indices in emission order.
    """
    if not streams:
        raise ValueError("at least one hypothesis stream is required")
    _check_state_space(speakers, streams, settings.MAX_DP_STATES if max_states is None else max_states)

    n = tuple(len(utterances) for utterances in speakers)
    m = tuple(len(stream) for stream in streams)
    table = np.full(tuple(x + 1 for x in n) + tuple(x + 1 for x in m), INF_COST, dtype=np.int64)

    # no utterance emitted yet: every consumed hypothesis word is an insertion
    grids = np.meshgrid(*(np.arange(x + 1, dtype=np.int64) for x in m), indexing="ij")
    table[(0,) * len(n)] = sum(grids) * costs.c_ins

    for consumed in itertools.product(*(range(x + 1) for x in n)):
        layer = table[consumed]
        for k, count in enumerate(consumed):
            if count == n[k]:
                continue
            utterance = speakers[k][count]
            target = consumed[:k] + (count + 1,) + consumed[k + 1:]
            for c, stream in enumerate(streams):
                np.minimum(table[target], _sub_align(layer, utterance, stream, c, costs), out=table[target])

    final = n + m
    distance = int(table[final])
    return distance, _backtrace(table, speakers, streams, n, m, costs)


def _backtrace(
    table: np.ndarray,
    speakers: Sequence[Sequence[np.ndarray]],
    streams: Sequence[np.ndarray],
    n: Tuple[int, ...],
    m: Tuple[int, ...],
    costs: CostModel,
) -> StreamPlan:
    plan: StreamPlan = [[] for _ in streams]
    consumed = list(n)
    positions = list(m)
    while any(consumed):
        here = table[tuple(consumed) + tuple(positions)]
        step = _find_step(table, speakers, streams, consumed, positions, here, costs)
        if step is None:
            raise RuntimeError("multi-stream backtrace found no predecessor")
        k, c, start = step
        consumed[k] -= 1
        positions[c] = start
        plan[c].append((k, consumed[k]))
    for assigned in plan:
        assigned.reverse()
    return plan


def _find_step(table, speakers, streams, consumed, positions, here, costs) -> Optional[Tuple[int, int, int]]:
    # speakers ascending, streams ascending, latest start first
    for k, count in enumerate(consumed):
        if count == 0:
            continue
        previous = tuple(consumed[:k]) + (count - 1,) + tuple(consumed[k + 1:])
        utterance = speakers[k][count - 1]
        for c, stream in enumerate(streams):
            end = positions[c]
            suffix = _suffix_distances(utterance, stream[:end], costs)
            for start in range(end, -1, -1):
                index = list(positions)
                index[c] = start
                if int(table[previous + tuple(index)]) + int(suffix[start]) == here:
                    return k, c, start
    return None
