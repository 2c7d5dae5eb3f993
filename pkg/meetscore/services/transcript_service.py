"""
Transcript validation and canonical ordering
"""

import logging
from typing import Iterable, List, Sequence

from ..core.errors import EmptySession, EmptyToken, MissingTiming, OverlapWithinStream
from ..models.schemas import (
    TIME_TOLERANCE,
    Segment,
    TimedWord,
    Transcript,
    TranscriptRole,
    ValidationPolicy,
)

logger = logging.getLogger(__name__)

STRICT = ValidationPolicy()
LENIENT = ValidationPolicy(allow_hyp_overlap=True)


def _canonical_order(segments: Sequence[Segment]) -> List[Segment]:
    """Stable (begin, end) sort per session; sessions with untimed segments keep input order."""
    by_session: dict = {}
    for segment in segments:
        by_session.setdefault(segment.session_id, []).append(segment)
    ordered: List[Segment] = []
    for session_id in sorted(by_session):
        session = by_session[session_id]
        if all(segment.timed for segment in session):
            session = sorted(session, key=lambda segment: (segment.begin, segment.end))
        ordered.extend(session)
    return ordered


def _check_overlap(transcript: Transcript, segments: Sequence[Segment], policy: ValidationPolicy) -> None:
    ordered = transcript.model_copy(update={"segments": tuple(segments)})
    for session_id in ordered.session_ids():
        for label, group in ordered.groups(session_id).items():
            timed = [segment for segment in group if segment.timed]
            for previous, current in zip(timed, timed[1:]):
                if current.begin < previous.end - TIME_TOLERANCE:
                    message = (
                        f"session {session_id!r}, stream {label!r}: segment [{current.begin}, {current.end}] "
                        f"overlaps [{previous.begin}, {previous.end}]"
                    )
                    if not policy.allow_hyp_overlap:
                        raise OverlapWithinStream(message)
                    logger.warning("ignoring hypothesis overlap: %s", message)


def validate(transcript: Transcript, policy: ValidationPolicy = STRICT) -> Transcript:
    """
    Canonicalize a transcript and enforce the policy.

    Raises OverlapWithinStream, MissingTiming, EmptyToken or EmptySession.
    """
    for segment in transcript.segments:
        for word in segment.words:
            if not word.token or any(ch.isspace() for ch in word.token):
                raise EmptyToken(f"session {segment.session_id!r}: invalid token {word.token!r}")
        if policy.require_timing and not segment.timed:
            raise MissingTiming(
                f"session {segment.session_id!r}, {segment.label(transcript.group_by)!r}: "
                f"segment {segment.text[:40]!r} has no begin/end time"
            )

    segments = _canonical_order(transcript.segments)

    if transcript.role == TranscriptRole.HYPOTHESIS:
        _check_overlap(transcript, segments, policy)

    if policy.reject_empty_sessions:
        for session_id, session in transcript.sessions().items():
            if not any(segment.words for segment in session):
                raise EmptySession(f"session {session_id!r} contains no words")

    return transcript.model_copy(update={"segments": tuple(segments)})


def words_of(group: Iterable[Segment]) -> List[TimedWord]:
    """Concatenate the words of a group: segment order, then word order."""
    return [word for segment in group for word in segment.words]
