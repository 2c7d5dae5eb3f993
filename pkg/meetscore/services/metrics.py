"""
Word error rate definitions: WER, cpWER, ORC-WER, MIMO-WER and tcpWER
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple, TypeVar, Union

import numpy as np

from ..core.errors import UnpairedSegments, ZeroLengthReference
from ..models.schemas import (
    DEFAULT_COLLAR,
    DEFAULT_COSTS,
    DEFAULT_HYP_STRATEGY,
    DEFAULT_REF_STRATEGY,
    CostModel,
    ErrorRateReport,
    Metric,
    MimoAssignment,
    OpKind,
    PseudoWordStrategy,
    Segment,
    SpeakerAssignment,
    StreamAlignment,
    TimedWord,
    Transcript,
    UtteranceRef,
)
from . import editdist
from .assignment import pad_square, solve_assignment
from .editdist import EditCounts, TimedSequence, count_ops, encode, tokens_of
from .mimo import multi_stream_alignment
from .timing import apply_pseudo_timing, word_times  # noqa: F401  (re-exported)
from .transcript_service import LENIENT, STRICT, validate, words_of

logger = logging.getLogger(__name__)

Item = TypeVar("Item")
PairInput = Union[Segment, str, Sequence[editdist.Word]]


def _report(counts: EditCounts, length: int, hypothesis_length: int, **extra) -> ErrorRateReport:
    return ErrorRateReport(
        errors=counts.distance,
        length=length,
        insertions=counts.insertions,
        deletions=counts.deletions,
        substitutions=counts.substitutions,
        hypothesis_length=hypothesis_length,
        **extra,
    )


def aggregate(reports: Sequence[ErrorRateReport]) -> ErrorRateReport:
    """
    Micro-average: component-wise sums, rate recomputed.

    A single report is returned as is; aggregates of several carry no assignment.
    """
    if len(reports) == 1:
        return reports[0]
    return ErrorRateReport(
        errors=sum(report.errors for report in reports),
        length=sum(report.length for report in reports),
        insertions=sum(report.insertions for report in reports),
        deletions=sum(report.deletions for report in reports),
        substitutions=sum(report.substitutions for report in reports),
        hypothesis_length=sum(report.hypothesis_length for report in reports),
    )


def _collect(per_session: Dict[str, ErrorRateReport]) -> ErrorRateReport:
    total = aggregate(list(per_session.values())) if per_session else ErrorRateReport(errors=0, length=0)
    return total.model_copy(update={"per_session": per_session})


def _map_sessions(score: Callable[[str], ErrorRateReport], session_ids: Iterable[str], jobs: int) -> Dict[str, ErrorRateReport]:
    """Score sessions, concurrently up to ``jobs``; the result keeps session order."""
    session_ids = list(session_ids)
    if jobs <= 1 or len(session_ids) <= 1:
        results = [score(session_id) for session_id in session_ids]
    else:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(score, session_ids))
    return dict(zip(session_ids, results))


def _union_sessions(ref: Transcript, hyp: Transcript) -> List[str]:
    return sorted(set(ref.session_ids()) | set(hyp.session_ids()))


# WER
def _pair_words(item: PairInput) -> List[str]:
    if isinstance(item, Segment):
        return tokens_of(item.words)
    if isinstance(item, str):
        return item.split()
    return tokens_of(item)


def _wer_report(pairs: Sequence[Tuple[PairInput, PairInput]], costs: CostModel) -> ErrorRateReport:
    counts = EditCounts(0, 0, 0, 0)
    length = hypothesis_length = 0
    for ref, hyp in pairs:
        ref_words, hyp_words = _pair_words(ref), _pair_words(hyp)
        pair = editdist.levenshtein_counts(ref_words, hyp_words, costs)
        counts = EditCounts(*(a + b for a, b in zip(counts, pair)))
        length += len(ref_words)
        hypothesis_length += len(hyp_words)
    return _report(counts, length, hypothesis_length)


def _require_length(report: ErrorRateReport) -> ErrorRateReport:
    if report.length == 0 and report.errors > 0:
        raise ZeroLengthReference(f"{report.errors} error(s) against an empty reference: error rate undefined")
    return report


def wer(pairs: Sequence[Tuple[PairInput, PairInput]], costs: CostModel = DEFAULT_COSTS) -> ErrorRateReport:
    """Summed distances over summed reference lengths of paired utterances."""
    return _require_length(_wer_report(pairs, costs))


# Permutation-based metrics
def _score_permutation(
    ref_items: Dict[str, Item],
    hyp_items: Dict[str, Item],
    empty: Item,
    size: Callable[[Item], int],
    counts: Callable[[Item, Item], EditCounts],
    align: Optional[Callable[[Item, Item], Tuple[int, list]]],
) -> ErrorRateReport:
    ref_labels, hyp_labels = list(ref_items), list(hyp_items)
    refs = [ref_items[label] for label in ref_labels]
    hyps = [hyp_items[label] for label in hyp_labels]

    pairwise = [[counts(r, h) for h in hyps] for r in refs]
    row_pad = [counts(empty, h).distance for h in hyps]
    col_pad = [counts(r, empty).distance for r in refs]
    matrix = pad_square([[c.distance for c in row] for row in pairwise], row_pad, col_pad)
    perm, cost = solve_assignment(matrix)

    matched = sorted((row, column) for column, row in enumerate(perm))
    total = EditCounts(0, 0, 0, 0)
    pairs: List[Tuple[Optional[str], Optional[str]]] = []
    alignments: List[StreamAlignment] = []
    for row, column in matched:
        ref = refs[row] if row < len(refs) else empty
        hyp = hyps[column] if column < len(hyps) else empty
        if row >= len(refs) and column >= len(hyps):
            continue
        if row < len(refs) and column < len(hyps):
            pair_counts = pairwise[row][column]
        else:
            pair_counts = counts(ref, hyp)
        ref_label = ref_labels[row] if row < len(refs) else None
        hyp_label = hyp_labels[column] if column < len(hyps) else None
        pairs.append((ref_label, hyp_label))
        total = EditCounts(*(a + b for a, b in zip(total, pair_counts)))
        if align is not None:
            _, ops = align(ref, hyp)
            alignments.append(StreamAlignment(reference=ref_label, hypothesis=hyp_label, ops=ops))

    assert total.distance == cost, "assignment cost and pair distances disagree"
    return _report(
        total,
        sum(size(r) for r in refs),
        sum(size(h) for h in hyps),
        assignment=SpeakerAssignment(pairs=pairs),
        alignments=alignments if align is not None else None,
    )


def _group_words(transcript: Transcript, session_id: str) -> Dict[str, List]:
    if session_id not in transcript.session_ids():
        return {}
    return {label: words_of(group) for label, group in transcript.groups(session_id).items()}


def cp_wer(
    ref: Transcript,
    hyp: Transcript,
    costs: CostModel = DEFAULT_COSTS,
    with_alignment: bool = False,
    jobs: int = 1,
) -> ErrorRateReport:
    """
    Concatenated minimum-permutation WER.

    Each reference speaker and each hypothesis stream is concatenated;
    streams are assigned to speakers by the permutation with the fewest
    errors. Unmatched speakers count as deletions, unmatched streams as
    insertions.
    """
    ref, hyp = validate(ref, LENIENT), validate(hyp, LENIENT)

    def score(session_id: str) -> ErrorRateReport:
        vocabulary: Dict[str, int] = {}
        ref_groups, hyp_groups = _group_words(ref, session_id), _group_words(hyp, session_id)
        ref_items = {label: encode(tokens_of(words), vocabulary=vocabulary)[0] for label, words in ref_groups.items()}
        hyp_items = {label: encode(tokens_of(words), vocabulary=vocabulary)[0] for label, words in hyp_groups.items()}
        logger.debug("cpWER session %s: %d speakers, %d streams", session_id, len(ref_items), len(hyp_items))
        return _score_permutation(
            ref_items,
            hyp_items,
            np.zeros(0, dtype=np.int64),
            len,
            lambda r, h: editdist.encoded_counts(r, h, costs),
            (lambda r, h: editdist.encoded_alignment(r, h, costs)) if with_alignment else None,
        )

    return _collect(_map_sessions(score, _union_sessions(ref, hyp), jobs))


def _timed_groups(transcript: Transcript, session_id: str, strategy: PseudoWordStrategy) -> Dict[str, TimedSequence]:
    if session_id not in transcript.session_ids():
        return {}
    sequences = {}
    for label, group in transcript.groups(session_id).items():
        tokens: List[str] = []
        begins: List[np.ndarray] = []
        ends: List[np.ndarray] = []
        for segment in group:
            segment_begins, segment_ends = word_times(segment, strategy)
            tokens.extend(word.token for word in segment.words)
            begins.append(segment_begins)
            ends.append(segment_ends)
        sequences[label] = TimedSequence(
            tokens=tuple(tokens),
            begins=np.concatenate(begins) if begins else np.zeros(0),
            ends=np.concatenate(ends) if ends else np.zeros(0),
        )
    return sequences


def tcp_wer(
    ref: Transcript,
    hyp: Transcript,
    collar: float = DEFAULT_COLLAR,
    ref_strategy: PseudoWordStrategy = DEFAULT_REF_STRATEGY,
    hyp_strategy: PseudoWordStrategy = DEFAULT_HYP_STRATEGY,
    costs: CostModel = DEFAULT_COSTS,
    with_alignment: bool = False,
    allow_hyp_overlap: bool = False,
    jobs: int = 1,
) -> ErrorRateReport:
    """
    Time-constrained cpWER.

    Like cp_wer, but a reference and a hypothesis word may only match when
    their (pseudo-)word intervals lie within ``collar`` seconds of each other.
    The speaker assignment minimizes the time-constrained distances.
    """
    ref = validate(ref, STRICT.model_copy(update={"require_timing": True}))
    hyp = validate(hyp, (LENIENT if allow_hyp_overlap else STRICT).model_copy(update={"require_timing": True}))

    def score(session_id: str) -> ErrorRateReport:
        vocabulary: Dict[str, int] = {}
        ref_items = _timed_groups(ref, session_id, ref_strategy)
        hyp_items = _timed_groups(hyp, session_id, hyp_strategy)
        return _score_permutation(
            ref_items,
            hyp_items,
            TimedSequence.empty(),
            len,
            lambda r, h: editdist.timed_counts(r, h, collar, costs, vocabulary),
            (lambda r, h: editdist.timed_alignment(r, h, collar, costs)) if with_alignment else None,
        )

    per_session = _map_sessions(score, _union_sessions(ref, hyp), jobs)
    result = _collect(per_session)
    logger.debug("tcpWER with collar %s: %d errors / %d words", collar, result.errors, result.length)
    return result


# Assignment-free metrics
def _score_streams(
    speakers: List[Tuple[str, List[Segment]]],
    utterance_refs: List[List[UtteranceRef]],
    hyp_groups: Dict[str, List[Segment]],
    costs: CostModel,
    with_alignment: bool,
) -> ErrorRateReport:
    vocabulary: Dict[str, int] = {}
    encoded_speakers = [
        [encode(tokens_of(segment.words), vocabulary=vocabulary)[0] for segment in segments]
        for _, segments in speakers
    ]
    stream_labels = list(hyp_groups) or [""]
    stream_words = [tokens_of(words_of(hyp_groups.get(label, []))) for label in stream_labels]
    encoded_streams = [encode(words, vocabulary=vocabulary)[0] for words in stream_words]

    distance, plan = multi_stream_alignment(encoded_speakers, encoded_streams, costs)

    total = EditCounts(0, 0, 0, 0)
    streams: Dict[str, List[UtteranceRef]] = {}
    alignments: List[StreamAlignment] = []
    for label, assigned, hyp_words in zip(stream_labels, plan, stream_words):
        ref_words = [
            token
            for k, index in assigned
            for token in tokens_of(speakers[k][1][index].words)
        ]
        stream_distance, ops = editdist.levenshtein(ref_words, hyp_words, costs)
        counts = count_ops(ops)
        total = EditCounts(
            total.distance + stream_distance,
            total.substitutions + counts[OpKind.SUBSTITUTE],
            total.insertions + counts[OpKind.INSERT],
            total.deletions + counts[OpKind.DELETE],
        )
        streams[label] = [utterance_refs[k][index] for k, index in assigned]
        if with_alignment:
            alignments.append(StreamAlignment(reference=None, hypothesis=label, ops=ops))

    assert total.distance == distance, "stream decomposition and DP distance disagree"
    return _report(
        total,
        sum(len(segment.words) for _, segments in speakers for segment in segments),
        sum(len(words) for words in stream_words),
        assignment=MimoAssignment(streams=streams),
        alignments=alignments if with_alignment else None,
    )


def _speaker_utterances(ref: Transcript, session_id: str) -> List[Tuple[str, List[Segment]]]:
    if session_id not in ref.session_ids():
        return []
    return list(ref.groups(session_id).items())


def _hyp_groups(hyp: Transcript, session_id: str) -> Dict[str, List[Segment]]:
    return hyp.groups(session_id) if session_id in hyp.session_ids() else {}


def mimo_wer(
    ref: Transcript,
    hyp: Transcript,
    costs: CostModel = DEFAULT_COSTS,
    with_alignment: bool = False,
    jobs: int = 1,
) -> ErrorRateReport:
    """
    MIMO-WER: reference utterances are assigned to hypothesis streams freely,
    only the order within each speaker is kept.
    """
    ref, hyp = validate(ref, LENIENT), validate(hyp, LENIENT)

    def score(session_id: str) -> ErrorRateReport:
        speakers = _speaker_utterances(ref, session_id)
        utterance_refs = [
            [UtteranceRef(speaker=label, index=index) for index in range(len(segments))]
            for label, segments in speakers
        ]
        return _score_streams(speakers, utterance_refs, _hyp_groups(hyp, session_id), costs, with_alignment)

    return _collect(_map_sessions(score, _union_sessions(ref, hyp), jobs))


def orc_wer(
    ref: Transcript,
    hyp: Transcript,
    costs: CostModel = DEFAULT_COSTS,
    with_alignment: bool = False,
    jobs: int = 1,
) -> ErrorRateReport:
    """
    ORC-WER: like MIMO-WER with the reference speaker labels ignored, so the
    global begin-time order of reference utterances is kept on every stream.
    """
    ref, hyp = validate(ref, LENIENT), validate(hyp, LENIENT)

    def score(session_id: str) -> ErrorRateReport:
        merged: List[Segment] = list(ref.sessions().get(session_id, []))
        seen: Dict[str, int] = {}
        refs: List[UtteranceRef] = []
        for segment in merged:
            label = segment.label(ref.group_by)
            refs.append(UtteranceRef(speaker=label, index=seen.get(label, 0)))
            seen[label] = seen.get(label, 0) + 1
        speakers = [("", merged)] if merged else []
        return _score_streams(speakers, [refs] if merged else [], _hyp_groups(hyp, session_id), costs, with_alignment)

    return _collect(_map_sessions(score, _union_sessions(ref, hyp), jobs))


def collar_disallowed_fractions(
    ref: Transcript,
    hyp: Transcript,
    collars: Sequence[float],
    ref_strategy: PseudoWordStrategy = DEFAULT_REF_STRATEGY,
    hyp_strategy: PseudoWordStrategy = DEFAULT_HYP_STRATEGY,
    allow_hyp_overlap: bool = False,
) -> List[float]:
    """
    Per collar, the fraction of the matches (correct or substituted pairs)
    of the infinite-collar alignment that the collar would forbid.
    """
    unconstrained = tcp_wer(
        ref, hyp, math.inf, ref_strategy, hyp_strategy,
        with_alignment=True, allow_hyp_overlap=allow_hyp_overlap,
    )
    ref = validate(ref, STRICT)
    hyp = validate(hyp, LENIENT)
    predicates = [editdist.MatchPredicate(collar=collar) for collar in collars]
    matches = 0
    disallowed = [0] * len(collars)
    for session_id, report in unconstrained.per_session.items():
        ref_items = _timed_groups(ref, session_id, ref_strategy)
        hyp_items = _timed_groups(hyp, session_id, hyp_strategy)
        for alignment in report.alignments or []:
            if alignment.reference is None or alignment.hypothesis is None:
                continue
            r, h = ref_items[alignment.reference], hyp_items[alignment.hypothesis]
            for op in alignment.ops:
                if op.kind not in (OpKind.CORRECT, OpKind.SUBSTITUTE):
                    continue
                matches += 1
                ref_word = _timed_word(r, op.ref_index)
                hyp_word = _timed_word(h, op.hyp_index)
                for index, predicate in enumerate(predicates):
                    if not predicate.allowed(ref_word, hyp_word):
                        disallowed[index] += 1
    return [count / matches if matches else 0.0 for count in disallowed]


def _timed_word(sequence: TimedSequence, index: int) -> TimedWord:
    return TimedWord(token=sequence.tokens[index], begin=float(sequence.begins[index]), end=float(sequence.ends[index]))


def paired_segments(ref: Transcript, hyp: Transcript) -> Dict[str, List[Tuple[Segment, Segment]]]:
    """Pair the i-th reference with the i-th hypothesis segment of every session."""
    pairs: Dict[str, List[Tuple[Segment, Segment]]] = {}
    ref_sessions, hyp_sessions = ref.sessions(), hyp.sessions()
    for session_id in _union_sessions(ref, hyp):
        refs, hyps = ref_sessions.get(session_id, []), hyp_sessions.get(session_id, [])
        if len(refs) != len(hyps):
            raise UnpairedSegments(
                f"session {session_id!r}: {len(refs)} reference vs {len(hyps)} hypothesis segments"
            )
        pairs[session_id] = list(zip(refs, hyps))
    return pairs


def compute(
    metric: Metric,
    ref: Transcript,
    hyp: Transcript,
    *,
    collar: float = DEFAULT_COLLAR,
    ref_strategy: PseudoWordStrategy = DEFAULT_REF_STRATEGY,
    hyp_strategy: PseudoWordStrategy = DEFAULT_HYP_STRATEGY,
    costs: CostModel = DEFAULT_COSTS,
    with_alignment: bool = False,
    allow_hyp_overlap: bool = False,
    jobs: int = 1,
) -> ErrorRateReport:
    """Run one metric by name."""
    metric = Metric(metric)
    if metric == Metric.WER:
        ref, hyp = validate(ref, LENIENT), validate(hyp, LENIENT)
        sessions = paired_segments(ref, hyp)
        return _require_length(_collect({sid: _wer_report(pairs, costs) for sid, pairs in sessions.items()}))
    if metric == Metric.TCPWER:
        return tcp_wer(
            ref, hyp, collar, ref_strategy, hyp_strategy, costs,
            with_alignment=with_alignment, allow_hyp_overlap=allow_hyp_overlap, jobs=jobs,
        )
    scorer = {Metric.CPWER: cp_wer, Metric.ORCWER: orc_wer, Metric.MIMOWER: mimo_wer}[metric]
    return scorer(ref, hyp, costs, with_alignment=with_alignment, jobs=jobs)
