"""
Transcript file formats (SegLst, STM) and JSON result reports
"""

import json
import logging
import math
from typing import Any, Dict, List, Optional, Sequence, Tuple

from pydantic import ValidationError

from ..core.errors import MeetScoreError, ParseError, SchemaError
from ..models.schemas import (
    ErrorRateReport,
    GroupKey,
    ProfileResult,
    ReportDetail,
    Segment,
    SegLstRecord,
    SweepRow,
    TimedWord,
    Transcript,
    TranscriptRole,
    parse_time,
)

logger = logging.getLogger(__name__)


def _decode(data: bytes) -> str:
    try:
        return data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise ParseError(f"input is not UTF-8: {exc.reason} at byte {exc.start}") from exc


def _default_group(role: TranscriptRole) -> GroupKey:
    return GroupKey.STREAM if role == TranscriptRole.HYPOTHESIS else GroupKey.SPEAKER


def _schema_error(exc: ValidationError, line: Optional[int]) -> SchemaError:
    error = exc.errors()[0]
    field = ".".join(str(part) for part in error["loc"]) or "record"
    if error["type"] == "missing":
        return SchemaError(field, line=line)
    return SchemaError(field, f"invalid field {field!r}: {error['msg']}", line=line)


# SegLst
def _seglst_objects(text: str) -> List[Tuple[int, Any]]:
    """(line or record number, object) pairs of a JSON array or a JSON-lines file."""
    stripped = text.lstrip()
    if not stripped:
        return []
    if stripped.startswith("["):
        try:
            records = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc.msg}", line=exc.lineno) from exc
        return list(enumerate(records, start=1))

    objects = []
    for number, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            objects.append((number, json.loads(line)))
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON line: {exc.msg}", line=number) from exc
    return objects


def _segment_from_record(record: SegLstRecord, role: TranscriptRole, line: int) -> Segment:
    tokens = record.words.split()
    stream = record.stream
    if role == TranscriptRole.HYPOTHESIS and stream is None:
        # recognizer output: the speaker field names the output stream
        stream = record.speaker
    try:
        if record.word_times is not None:
            words = tuple(TimedWord(token=t, begin=b, end=e) for t, (b, e) in zip(tokens, record.word_times))
        else:
            words = tuple(TimedWord(token=t) for t in tokens)
        return Segment(
            session_id=record.session_id,
            speaker=record.speaker,
            stream=stream,
            begin=record.start_time,
            end=record.end_time,
            words=words,
            extra=dict(record.model_extra or {}),
        )
    except ValidationError as exc:
        raise _schema_error(exc, line) from exc


def read_seglst(
    data: bytes,
    role: TranscriptRole = TranscriptRole.REFERENCE,
    group_by: Optional[GroupKey] = None,
) -> Transcript:
    """
    Parse SegLst: a JSON array of records or one record per line.

    Input order is kept; validation canonicalizes it later. Errors carry the
    1-based line (JSON lines) or record index (array).
    """
    segments = []
    for number, obj in _seglst_objects(_decode(data)):
        if not isinstance(obj, dict):
            raise ParseError(f"record must be a JSON object, got {type(obj).__name__}", line=number)
        try:
            record = SegLstRecord.model_validate(obj)
        except ValidationError as exc:
            raise _schema_error(exc, number) from exc
        except MeetScoreError as exc:
            exc.line = exc.line or number
            raise
        segments.append(_segment_from_record(record, role, number))
    logger.debug("read %d SegLst segments", len(segments))
    return Transcript(segments=tuple(segments), role=role, group_by=group_by or _default_group(role))


def transcript_from_records(records: Sequence[SegLstRecord], role: TranscriptRole) -> Transcript:
    """Build a transcript from already validated records (record numbers are 1-based)."""
    segments = tuple(_segment_from_record(record, role, number) for number, record in enumerate(records, start=1))
    return Transcript(segments=segments, role=role, group_by=_default_group(role))


def _format_time(value: Optional[float]) -> Optional[float]:
    # json emits repr(), the shortest round-trip decimal
    return None if value is None else float(value)


def segment_record(segment: Segment, role: TranscriptRole = TranscriptRole.REFERENCE) -> Dict[str, Any]:
    record: Dict[str, Any] = {
        "session_id": segment.session_id,
        "speaker": segment.speaker if segment.speaker is not None else (segment.stream or ""),
        "start_time": _format_time(segment.begin),
        "end_time": _format_time(segment.end),
        "words": segment.text,
    }
    if segment.stream is not None and not (role == TranscriptRole.HYPOTHESIS and segment.stream == segment.speaker):
        record["stream"] = segment.stream
    if segment.words and all(word.timed for word in segment.words):
        record["word_times"] = [[word.begin, word.end] for word in segment.words]
    record.update(segment.extra)
    return record


def write_seglst(transcript: Transcript) -> bytes:
    """Serialize as a JSON array, one record per line, LF-terminated."""
    records = [json.dumps(segment_record(s, transcript.role), ensure_ascii=False) for s in transcript.segments]
    body = ",\n".join(f"  {record}" for record in records)
    return (f"[\n{body}\n]\n" if records else "[]\n").encode("utf-8")


# STM
def _stm_time(text: str, line: int, name: str) -> float:
    try:
        return parse_time(text)
    except ValueError as exc:
        raise ParseError(f"invalid {name} time {text!r}", line=line) from exc


def read_stm(data: bytes, role: TranscriptRole = TranscriptRole.REFERENCE) -> Transcript:
    """
    Parse NIST STM: ``file channel speaker begin end [<label>] transcript``.

    Lines starting with ``;;`` are comments.
    """
    segments = []
    for number, line in enumerate(_decode(data).splitlines(), start=1):
        if not line.strip() or line.lstrip().startswith(";;"):
            continue
        fields = line.split(maxsplit=5)
        if len(fields) < 5:
            raise ParseError(f"expected at least 5 fields, got {len(fields)}", line=number)
        session_id, channel, speaker, begin_text, end_text = fields[:5]
        text = fields[5] if len(fields) > 5 else ""
        if text.startswith("<"):
            label, closed, text = text.partition(">")
            if not closed:
                raise ParseError(f"unterminated label {label!r}", line=number)
        begin = _stm_time(begin_text, number, "begin")
        end = _stm_time(end_text, number, "end")
        if begin > end:
            raise ParseError(f"begin {begin_text} is after end {end_text}", line=number)
        try:
            segment = Segment.from_text(
                session_id,
                text,
                speaker=speaker,
                stream=speaker if role == TranscriptRole.HYPOTHESIS else None,
                begin=begin,
                end=end,
                extra={"channel": channel},
            )
        except ValidationError as exc:
            raise _schema_error(exc, number) from exc
        segments.append(segment)
    logger.debug("read %d STM segments", len(segments))
    return Transcript(segments=tuple(segments), role=role, group_by=_default_group(role))


def write_stm(transcript: Transcript) -> bytes:
    lines = []
    for segment in transcript.segments:
        if not segment.timed:
            raise ValueError(f"STM needs segment times (session {segment.session_id!r})")
        channel = segment.extra.get("channel", "1")
        speaker = segment.label(transcript.group_by) or "unknown"
        fields = [segment.session_id, str(channel), speaker, repr(float(segment.begin)), repr(float(segment.end))]
        if segment.words:
            fields.append(segment.text)
        lines.append(" ".join(fields) + "\n")
    return "".join(lines).encode("utf-8")


# Reports
def _report_dict(report: ErrorRateReport, detail: ReportDetail) -> Dict[str, Any]:
    document = report.model_dump(mode="json", exclude={"per_session", "alignments"})
    if detail in (ReportDetail.PER_SESSION, ReportDetail.ALIGNMENT) and report.per_session:
        document["per_session"] = {
            session_id: _report_dict(session, detail) for session_id, session in report.per_session.items()
        }
    if detail == ReportDetail.ALIGNMENT and report.alignments is not None:
        document["alignments"] = [alignment.model_dump(mode="json") for alignment in report.alignments]
    return document


def write_report(report: ErrorRateReport, detail: ReportDetail = ReportDetail.SUMMARY) -> bytes:
    """JSON report with a stable key order; undefined rates are null."""
    return (json.dumps(_report_dict(report, detail), indent=2, ensure_ascii=False) + "\n").encode("utf-8")


def read_report(data: bytes) -> ErrorRateReport:
    try:
        return ErrorRateReport.model_validate_json(data)
    except ValidationError as exc:
        raise _schema_error(exc, None) from exc


def read_transcript(data: bytes, name: str, role: TranscriptRole) -> Transcript:
    """Dispatch on file name: ``.stm`` is STM, anything else SegLst."""
    if name.lower().endswith(".stm"):
        return read_stm(data, role)
    return read_seglst(data, role)


def _collar_value(collar: float) -> Any:
    return "inf" if math.isinf(collar) else collar


def write_sweep(rows: Sequence[SweepRow]) -> bytes:
    """Collar sweep table as JSON; an infinite collar is written as ``"inf"``."""
    document = [{**row.model_dump(mode="json"), "collar": _collar_value(row.collar)} for row in rows]
    return (json.dumps(document, indent=2) + "\n").encode("utf-8")


def write_profile(results: Sequence[ProfileResult], injected: Optional[int] = None) -> bytes:
    document: Dict[str, Any] = {"results": [result.model_dump(mode="json") for result in results]}
    if injected is not None:
        document["injected_edits"] = injected
    return (json.dumps(document, indent=2) + "\n").encode("utf-8")
