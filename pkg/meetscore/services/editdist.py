"""
Levenshtein engines: plain, time-constrained and banded, with alignment backtrace
"""

import logging
import math
from dataclasses import dataclass
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from ..core.errors import MissingTiming
from ..models.schemas import (
    DEFAULT_COSTS,
    TIME_TOLERANCE,
    AlignmentOp,
    CostModel,
    OpKind,
    TimedWord,
)
from . import kernels

logger = logging.getLogger(__name__)

Word = Union[TimedWord, str]

_OP_KINDS = {
    kernels.OP_CORRECT: OpKind.CORRECT,
    kernels.OP_SUBSTITUTE: OpKind.SUBSTITUTE,
    kernels.OP_INSERT: OpKind.INSERT,
    kernels.OP_DELETE: OpKind.DELETE,
}
_EMPTY_TIMES = np.zeros(0, dtype=np.float64)


class MatchPredicate(BaseModel):
    """Whether a reference and a hypothesis word may match under a collar"""
    model_config = ConfigDict(frozen=True)

    collar: float = Field(default=math.inf, ge=0, description="Collar in seconds, may be infinite")

    def allowed(self, ref_word: TimedWord, hyp_word: TimedWord) -> bool:
        if math.isinf(self.collar):
            return True
        if not (ref_word.timed and hyp_word.timed):
            raise MissingTiming(f"cannot apply a collar to untimed words {ref_word.token!r}/{hyp_word.token!r}")
        return bool(
            hyp_word.begin < ref_word.end + self.collar - TIME_TOLERANCE
            and ref_word.begin < hyp_word.end + self.collar - TIME_TOLERANCE
        )


class EditCounts(NamedTuple):
    """Distance and the error decomposition of one optimal alignment"""
    distance: int
    substitutions: int
    insertions: int
    deletions: int


@dataclass(frozen=True)
class TimedSequence:
    """Tokens with float64 begin/end arrays, the kernel-facing form of timed words"""
    tokens: Tuple[str, ...]
    begins: np.ndarray
    ends: np.ndarray

    def __len__(self) -> int:
        return len(self.tokens)

    @classmethod
    def from_words(cls, words: Sequence[TimedWord]) -> "TimedSequence":
        missing = [word.token for word in words if not word.timed]
        if missing:
            raise MissingTiming(f"{len(missing)} word(s) without begin/end time, first: {missing[0]!r}")
        return cls(
            tokens=tuple(word.token for word in words),
            begins=np.array([word.begin for word in words], dtype=np.float64),
            ends=np.array([word.end for word in words], dtype=np.float64),
        )

    @classmethod
    def empty(cls) -> "TimedSequence":
        return cls(tokens=(), begins=_EMPTY_TIMES, ends=_EMPTY_TIMES)


def tokens_of(words: Sequence[Word]) -> List[str]:
    return [word.token if isinstance(word, TimedWord) else word for word in words]


def encode(*sequences: Sequence[str], vocabulary: Optional[Dict[str, int]] = None) -> List[np.ndarray]:
    """Map token sequences to int64 arrays over one shared vocabulary."""
    vocabulary = {} if vocabulary is None else vocabulary
    encoded = []
    for sequence in sequences:
        ids = [vocabulary.setdefault(token, len(vocabulary)) for token in sequence]
        encoded.append(np.array(ids, dtype=np.int64))
    return encoded


def _full_band(n: int, m: int) -> Tuple[np.ndarray, np.ndarray]:
    return np.zeros(n + 1, dtype=np.int64), np.full(n + 1, m, dtype=np.int64)


def _costs(costs: CostModel) -> Tuple[int, int, int, int]:
    return costs.c_cor, costs.c_sub, costs.c_ins, costs.c_del


def _to_ops(kinds: np.ndarray, ref_idx: np.ndarray, hyp_idx: np.ndarray) -> List[AlignmentOp]:
    return [
        AlignmentOp(
            kind=_OP_KINDS[int(kind)],
            ref_index=int(r) if r >= 0 else None,
            hyp_index=int(h) if h >= 0 else None,
        )
        for kind, r, h in zip(kinds, ref_idx, hyp_idx)
    ]


# Plain Levenshtein
def encoded_counts(ref: np.ndarray, hyp: np.ndarray, costs: CostModel = DEFAULT_COSTS) -> EditCounts:
    lo, hi = _full_band(len(ref), len(hyp))
    result = kernels.banded_distance(
        ref, hyp, lo, hi, _EMPTY_TIMES, _EMPTY_TIMES, _EMPTY_TIMES, _EMPTY_TIMES,
        math.inf, TIME_TOLERANCE, False, *_costs(costs),
    )
    return EditCounts(*(int(value) for value in result))


def encoded_alignment(ref: np.ndarray, hyp: np.ndarray, costs: CostModel = DEFAULT_COSTS) -> Tuple[int, List[AlignmentOp]]:
    lo, hi = _full_band(len(ref), len(hyp))
    distance, kinds, ref_idx, hyp_idx = kernels.banded_alignment(
        ref, hyp, lo, hi, _EMPTY_TIMES, _EMPTY_TIMES, _EMPTY_TIMES, _EMPTY_TIMES,
        math.inf, TIME_TOLERANCE, False, *_costs(costs),
    )
    return int(distance), _to_ops(kinds, ref_idx, hyp_idx)


def levenshtein(
    ref: Sequence[Word],
    hyp: Sequence[Word],
    costs: CostModel = DEFAULT_COSTS,
) -> Tuple[int, List[AlignmentOp]]:
    """
    Levenshtein distance and one optimal alignment.

    Among equal-cost predecessors the backtrace prefers
    correct/substitute, then delete, then insert.
    """
    ref_ids, hyp_ids = encode(tokens_of(ref), tokens_of(hyp))
    return encoded_alignment(ref_ids, hyp_ids, costs)


def levenshtein_counts(ref: Sequence[Word], hyp: Sequence[Word], costs: CostModel = DEFAULT_COSTS) -> EditCounts:
    ref_ids, hyp_ids = encode(tokens_of(ref), tokens_of(hyp))
    return encoded_counts(ref_ids, hyp_ids, costs)


# Time-constrained Levenshtein
def _match_ranges(ref: TimedSequence, hyp: TimedSequence, collar: float) -> Tuple[np.ndarray, np.ndarray]:
    return kernels.match_ranges(ref.begins, ref.ends, hyp.begins, hyp.ends, float(collar), TIME_TOLERANCE)


def _tc_band(ref: TimedSequence, hyp: TimedSequence, collar: float) -> Tuple[np.ndarray, np.ndarray]:
    if math.isinf(collar):
        return _full_band(len(ref), len(hyp))
    first, last = _match_ranges(ref, hyp, collar)
    lo, hi = kernels.dp_band(first, last, len(hyp))
    if logger.isEnabledFor(logging.DEBUG):
        cells = int((hi - lo + 1).sum())
        logger.debug("band covers %d of %d cells", cells, (len(ref) + 1) * (len(hyp) + 1))
    return lo, hi


def _as_timed(words: Union[TimedSequence, Sequence[TimedWord]]) -> TimedSequence:
    return words if isinstance(words, TimedSequence) else TimedSequence.from_words(words)


def band_bounds(
    ref: Union[TimedSequence, Sequence[TimedWord]],
    hyp: Union[TimedSequence, Sequence[TimedWord]],
    collar: float,
) -> List[Tuple[int, int]]:
    """
    Per reference word, the 1-based hypothesis positions that may host a match.

    Ranges are widened to be monotone nondecreasing; an empty row has lo > hi.
    """
    ref, hyp = _as_timed(ref), _as_timed(hyp)
    n, m = len(ref), len(hyp)
    if math.isinf(collar):
        return [(1, m)] * n
    first, last = _match_ranges(ref, hyp, collar)
    lo = np.minimum.accumulate(np.where(first <= last, first + 1, m + 1)[::-1])[::-1]
    hi = np.maximum.accumulate(np.where(first <= last, last + 1, 0))
    return [(int(a), int(b)) for a, b in zip(lo, hi)]


def timed_counts(
    ref: TimedSequence,
    hyp: TimedSequence,
    collar: float,
    costs: CostModel = DEFAULT_COSTS,
    vocabulary: Optional[Dict[str, int]] = None,
) -> EditCounts:
    ref_ids, hyp_ids = encode(ref.tokens, hyp.tokens, vocabulary=vocabulary)
    lo, hi = _tc_band(ref, hyp, collar)
    result = kernels.banded_distance(
        ref_ids, hyp_ids, lo, hi, ref.begins, ref.ends, hyp.begins, hyp.ends,
        float(collar), TIME_TOLERANCE, not math.isinf(collar), *_costs(costs),
    )
    return EditCounts(*(int(value) for value in result))


def timed_alignment(
    ref: TimedSequence,
    hyp: TimedSequence,
    collar: float,
    costs: CostModel = DEFAULT_COSTS,
) -> Tuple[int, List[AlignmentOp]]:
    ref_ids, hyp_ids = encode(ref.tokens, hyp.tokens)
    lo, hi = _tc_band(ref, hyp, collar)
    distance, kinds, ref_idx, hyp_idx = kernels.banded_alignment(
        ref_ids, hyp_ids, lo, hi, ref.begins, ref.ends, hyp.begins, hyp.ends,
        float(collar), TIME_TOLERANCE, not math.isinf(collar), *_costs(costs),
    )
    return int(distance), _to_ops(kinds, ref_idx, hyp_idx)


def tc_levenshtein(
    ref: Union[TimedSequence, Sequence[TimedWord]],
    hyp: Union[TimedSequence, Sequence[TimedWord]],
    collar: float,
    costs: CostModel = DEFAULT_COSTS,
) -> Tuple[int, List[AlignmentOp]]:
    """
    Time-constrained Levenshtein distance and alignment.

    Words may only match (correct or substituted) when their intervals
    overlap or the gap between them is smaller than ``collar``. Cells
    outside the band of allowed matches are never evaluated.
    """
    return timed_alignment(_as_timed(ref), _as_timed(hyp), collar, costs)


def tc_levenshtein_counts(
    ref: Union[TimedSequence, Sequence[TimedWord]],
    hyp: Union[TimedSequence, Sequence[TimedWord]],
    collar: float,
    costs: CostModel = DEFAULT_COSTS,
) -> EditCounts:
    return timed_counts(_as_timed(ref), _as_timed(hyp), collar, costs)


def alignment_cost(ops: Sequence[AlignmentOp], costs: CostModel = DEFAULT_COSTS) -> int:
    """Sum of op costs, for checking an alignment against its distance."""
    total = 0
    for op in ops:
        if op.kind == OpKind.INSERT:
            total += costs.c_ins
        elif op.kind == OpKind.DELETE:
            total += costs.c_del
        elif op.kind == OpKind.CORRECT:
            total += costs.c_cor
        else:
            total += costs.c_sub
    return total


def count_ops(ops: Sequence[AlignmentOp]) -> Dict[OpKind, int]:
    counts = {kind: 0 for kind in OpKind}
    for op in ops:
        counts[op.kind] += 1
    return counts
