"""
Pseudo-word-level timing: word intervals inferred from segment times
"""

from typing import Tuple

import numpy as np

from ..core.errors import MissingTiming
from ..models.schemas import PseudoWordStrategy, Segment, TimedWord


def char_count(token: str) -> int:
    """Code points of the token after whitespace removal."""
    return sum(1 for ch in token if not ch.isspace())


def _boundaries(begin: float, end: float, weights: np.ndarray) -> np.ndarray:
    """Partition [begin, end] proportionally to weights; endpoints are exact."""
    cumulative = np.concatenate(([0], np.cumsum(weights)))
    total = cumulative[-1]
    bounds = begin + (end - begin) * (cumulative / total)
    bounds[0] = begin
    bounds[-1] = end
    return bounds


def pseudo_word_times(segment: Segment, strategy: PseudoWordStrategy) -> Tuple[np.ndarray, np.ndarray]:
    """Begin/end arrays of the segment's words under ``strategy``."""
    if not segment.timed:
        raise MissingTiming(
            f"segment of session {segment.session_id!r} ({segment.speaker or segment.stream}) has no begin/end time"
        )
    count = len(segment.words)
    begin, end = float(segment.begin), float(segment.end)
    if count == 0:
        empty = np.zeros(0, dtype=np.float64)
        return empty, empty

    if strategy == PseudoWordStrategy.FULL_SEGMENT or end <= begin:
        # zero-duration segments collapse every strategy onto the segment time
        if end <= begin:
            end = begin
        return np.full(count, begin), np.full(count, end)

    if strategy == PseudoWordStrategy.EQUAL_INTERVALS:
        bounds = _boundaries(begin, end, np.ones(count))
        return bounds[:-1].copy(), bounds[1:].copy()

    bounds = _boundaries(begin, end, np.array([char_count(word.token) for word in segment.words], dtype=np.float64))
    if strategy == PseudoWordStrategy.CHARACTER_BASED:
        return bounds[:-1].copy(), bounds[1:].copy()
    centers = (bounds[:-1] + bounds[1:]) / 2
    return centers, centers.copy()


def word_times(segment: Segment, strategy: PseudoWordStrategy, force: bool = False) -> Tuple[np.ndarray, np.ndarray]:
    """Word times to score with: caller-provided ones unless ``force``."""
    timed = [word.timed for word in segment.words]
    if not force and timed and all(timed):
        return (
            np.array([word.begin for word in segment.words], dtype=np.float64),
            np.array([word.end for word in segment.words], dtype=np.float64),
        )
    if not force and any(timed):
        raise MissingTiming(
            f"segment of session {segment.session_id!r} has word times for only some of its words"
        )
    return pseudo_word_times(segment, strategy)


def apply_pseudo_timing(segment: Segment, strategy: PseudoWordStrategy, force: bool = False) -> Segment:
    """
    Return the segment with per-word begin/end.

    Word times already present are kept unless ``force`` is set.
    """
    begins, ends = word_times(segment, strategy, force)
    words = tuple(
        TimedWord(token=word.token, begin=float(b), end=float(e))
        for word, b, e in zip(segment.words, begins, ends)
    )
    return segment.model_copy(update={"words": words})
