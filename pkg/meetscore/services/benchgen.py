"""
Synthetic meetings with known injected errors, and a timing harness for the metrics
"""

import logging
import time
from typing import Dict, List, Sequence, Tuple

import numpy as np

from ..models.schemas import (
    DEFAULT_COLLAR,
    GroupKey,
    MeetingSpec,
    Metric,
    ProfileResult,
    Segment,
    TimedWord,
    Transcript,
    TranscriptRole,
)
from . import metrics

logger = logging.getLogger(__name__)

SESSION_ID = "bench"

Interval = Tuple[float, float]


def _speaker(k: int) -> str:
    return f"spk{k}"


def _timeline(spec: MeetingSpec, rng: np.random.Generator) -> List[Tuple[int, float, float, int]]:
    """(speaker, begin, end, word count) per utterance, never overlapping within a speaker."""
    utterances = []
    speaker_free = [0.0] * spec.speakers
    cursor = 0.0
    previous_begin = 0.0
    while cursor < spec.duration:
        k = int(rng.integers(spec.speakers))
        count = int(rng.integers(spec.min_words, spec.max_words + 1))
        length = count / spec.words_per_second
        begin = cursor
        if utterances and rng.random() < spec.overlap_probability:
            # pull this utterance back into the previous one
            begin = float(rng.uniform(previous_begin, cursor))
        begin = round(max(begin, speaker_free[k]), 3)
        end = round(begin + length, 3)
        utterances.append((k, begin, end, count))
        speaker_free[k] = end
        previous_begin = begin
        cursor = max(cursor, end) + float(rng.uniform(spec.min_pause, spec.max_pause))
    return utterances


def _edit_words(words: List[str], spec: MeetingSpec, vocabulary: Sequence[str], rng: np.random.Generator) -> Tuple[List[str], int]:
    edited: List[str] = []
    edits = 0
    for word in words:
        if rng.random() < spec.deletion_rate:
            edits += 1
        elif rng.random() < spec.substitution_rate:
            replacement = word
            while replacement == word:
                replacement = vocabulary[int(rng.integers(len(vocabulary)))]
            edited.append(replacement)
            edits += 1
        else:
            edited.append(word)
        if rng.random() < spec.insertion_rate:
            edited.append(vocabulary[int(rng.integers(len(vocabulary)))])
            edits += 1
    return edited, edits


def _overlaps(interval: Interval, others: Sequence[Interval]) -> bool:
    begin, end = interval
    return any(begin < other_end and other_begin < end for other_begin, other_end in others)


def generate(spec: MeetingSpec) -> Tuple[Transcript, Transcript, int]:
    """
    Generate a reference meeting and a hypothesis derived from it.

    Returns ``(ref, hyp, injected)`` where ``injected`` is the number of word
    edits applied. A segment moved to another stream counts as its reference
    words deleted plus its hypothesis words inserted, in place of its word
    edits.
    """
    rng = np.random.default_rng(spec.seed)
    vocabulary = [f"w{index}" for index in range(spec.vocabulary_size)]
    utterances = _timeline(spec, rng)

    ref_segments: List[Segment] = []
    hyp_words: List[List[str]] = []
    edit_counts: List[int] = []
    for k, begin, end, count in utterances:
        words = [vocabulary[int(i)] for i in rng.integers(len(vocabulary), size=count)]
        ref_segments.append(Segment(
            session_id=SESSION_ID,
            speaker=_speaker(k),
            begin=begin,
            end=end,
            words=tuple(TimedWord(token=word) for word in words),
        ))
        edited, edits = _edit_words(words, spec, vocabulary, rng)
        hyp_words.append(edited)
        edit_counts.append(edits)

    streams = [k for k, _, _, _ in utterances]
    intervals: Dict[int, List[Interval]] = {k: [] for k in range(spec.speakers)}
    for k, begin, end, _ in utterances:
        intervals[k].append((begin, end))
    if spec.speakers > 1 and spec.confusion_probability > 0:
        for index, (k, begin, end, _) in enumerate(utterances):
            if rng.random() >= spec.confusion_probability:
                continue
            target = int(rng.integers(spec.speakers - 1))
            target += target >= k
            if _overlaps((begin, end), intervals[target]):
                continue
            intervals[streams[index]].remove((begin, end))
            intervals[target].append((begin, end))
            streams[index] = target
            # the move replaces the word edits: every word leaves its own stream
            edit_counts[index] = len(ref_segments[index].words) + len(hyp_words[index])
    injected = sum(edit_counts)

    hyp_segments = [
        Segment(
            session_id=SESSION_ID,
            speaker=_speaker(stream),
            stream=_speaker(stream),
            begin=segment.begin,
            end=segment.end,
            words=tuple(TimedWord(token=word) for word in words),
        )
        for segment, words, stream in zip(ref_segments, hyp_words, streams)
    ]
    ref = Transcript(segments=tuple(ref_segments), role=TranscriptRole.REFERENCE, group_by=GroupKey.SPEAKER)
    hyp = Transcript(segments=tuple(hyp_segments), role=TranscriptRole.HYPOTHESIS, group_by=GroupKey.STREAM)
    logger.debug("generated %d utterances, %d words, %d injected edits", len(utterances), ref.word_count(), injected)
    return ref, hyp, injected


def _session_length(transcript: Transcript) -> float:
    timed = [segment for segment in transcript.segments if segment.timed]
    if not timed:
        return 0.0
    return max(segment.end for segment in timed) - min(segment.begin for segment in timed)


def profile(
    ref: Transcript,
    hyp: Transcript,
    metric_names: Sequence[Metric],
    repeats: int = 10,
    collar: float = DEFAULT_COLLAR,
) -> List[ProfileResult]:
    """
    Time each metric ``repeats`` times on one thread after a warm-up call.

    Only the metric call is timed; the warm-up also triggers kernel compilation.
    """
    if repeats < 1:
        raise ValueError("repeats must be at least 1")
    streams = {segment.label(hyp.group_by) for segment in hyp.segments} or {""}
    words_per_stream = hyp.word_count() / len(streams)
    session_length = _session_length(ref)

    results = []
    for metric in metric_names:
        metric = Metric(metric)
        report = metrics.compute(metric, ref, hyp, collar=collar, jobs=1)
        timings = []
        for _ in range(repeats):
            started = time.perf_counter()
            metrics.compute(metric, ref, hyp, collar=collar, jobs=1)
            timings.append(time.perf_counter() - started)
        result = ProfileResult(
            metric=metric,
            repeats=repeats,
            median_seconds=float(np.median(timings)),
            min_seconds=min(timings),
            max_seconds=max(timings),
            stdev_seconds=float(np.std(timings, ddof=1)) if len(timings) > 1 else 0.0,
            errors=report.errors,
            length=report.length,
            words_per_stream=words_per_stream,
            session_length=session_length,
        )
        logger.info("%s: median %.4fs over %d runs", metric.value, result.median_seconds, repeats)
        results.append(result)
    return results
