"""
Pydantic models for meetscore: domain types, reports, and API payloads
"""

import math
import re
from enum import Enum
from fractions import Fraction
from pathlib import Path
from typing import Annotated, Any, Dict, List, Literal, Optional, Tuple, Union

from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    NonNegativeInt,
    field_validator,
    model_validator,
)

from ..core.errors import EmptyToken

DEFAULT_COLLAR = 5.0
TIME_TOLERANCE = 1e-9  # seconds

_DECIMAL_TIME = re.compile(r"^\d+(\.\d{1,9})?$")


class PseudoWordStrategy(str, Enum):
    """How word times are derived from segment times"""
    FULL_SEGMENT = "full_segment"
    EQUAL_INTERVALS = "equal_intervals"
    CHARACTER_BASED = "character_based"
    CHARACTER_BASED_POINTS = "character_based_points"


DEFAULT_REF_STRATEGY = PseudoWordStrategy.CHARACTER_BASED
DEFAULT_HYP_STRATEGY = PseudoWordStrategy.CHARACTER_BASED_POINTS


class GroupKey(str, Enum):
    """Segment field a transcript is grouped by"""
    SPEAKER = "speaker"
    STREAM = "stream"


class TranscriptRole(str, Enum):
    REFERENCE = "reference"
    HYPOTHESIS = "hypothesis"


class OpKind(str, Enum):
    """Edit operation kinds of an alignment"""
    CORRECT = "correct"
    SUBSTITUTE = "substitute"
    INSERT = "insert"
    DELETE = "delete"


class Metric(str, Enum):
    WER = "wer"
    CPWER = "cpwer"
    ORCWER = "orcwer"
    MIMOWER = "mimower"
    TCPWER = "tcpwer"


class ReportDetail(str, Enum):
    SUMMARY = "summary"
    PER_SESSION = "per_session"
    ALIGNMENT = "alignment"


class RecognizerStyle(str, Enum):
    """Output convention of a meeting recognizer"""
    DIARIZATION = "diarization"  # one stream per estimated speaker
    CSS = "css"  # overlap-free channels, no speaker labels
    SOT = "sot"  # serialized into a single stream


def parse_time(value: Any) -> Optional[float]:
    """Parse a time field: JSON number or decimal text, locale independent."""
    if value is None:
        return None
    if isinstance(value, bool):
        raise ValueError("time must be a number")
    if isinstance(value, (int, float)):
        number = float(value)
    elif isinstance(value, str):
        text = value.strip()
        if not _DECIMAL_TIME.match(text):
            raise ValueError(f"not a decimal time with at most 9 fractional digits: {value!r}")
        number = float(text)
    else:
        raise ValueError(f"unsupported time value {value!r}")
    if not math.isfinite(number) or number < 0:
        raise ValueError(f"time must be finite and nonnegative, got {value!r}")
    return number


def parse_collar(value: Union[str, float, int]) -> float:
    """Parse a collar: nonnegative seconds or the literal ``inf``."""
    if isinstance(value, str):
        text = value.strip().lower()
        collar = math.inf if text in ("inf", "infinity") else float(text)
    else:
        collar = float(value)
    if math.isnan(collar) or collar < 0:
        raise ValueError(f"collar must be >= 0 or 'inf', got {value!r}")
    return collar


# Domain types
class TimedWord(BaseModel):
    """A token with optional begin/end time, the atomic alignment unit"""
    model_config = ConfigDict(frozen=True)

    token: str = Field(..., description="Word text without whitespace")
    begin: Optional[float] = Field(default=None, ge=0, description="Begin time in seconds")
    end: Optional[float] = Field(default=None, ge=0, description="End time in seconds")

    @field_validator("token")
    @classmethod
    def _check_token(cls, token: str) -> str:
        if not token or any(ch.isspace() for ch in token):
            raise EmptyToken(f"invalid token {token!r}: tokens must be non-empty and contain no whitespace")
        return token

    @model_validator(mode="after")
    def _check_times(self) -> "TimedWord":
        if self.begin is not None and self.end is not None and self.begin > self.end + TIME_TOLERANCE:
            raise ValueError(f"word {self.token!r} begins after it ends ({self.begin} > {self.end})")
        return self

    @property
    def timed(self) -> bool:
        return self.begin is not None and self.end is not None


class Segment(BaseModel):
    """A transcribed unit: one speaker/stream, one time span, a word sequence"""
    model_config = ConfigDict(frozen=True)

    session_id: str = Field(..., description="Session / recording identifier")
    speaker: Optional[str] = Field(default=None, description="Speaker label")
    stream: Optional[str] = Field(default=None, description="Output stream label")
    begin: Optional[float] = Field(default=None, ge=0, description="Segment begin in seconds")
    end: Optional[float] = Field(default=None, ge=0, description="Segment end in seconds")
    words: Tuple[TimedWord, ...] = Field(default=(), description="Words in spoken order")
    extra: Dict[str, Any] = Field(default_factory=dict, description="Unknown fields kept for round-trips")

    @model_validator(mode="after")
    def _check_times(self) -> "Segment":
        if self.begin is None or self.end is None:
            return self
        if self.begin > self.end + TIME_TOLERANCE:
            raise ValueError(f"segment begins after it ends ({self.begin} > {self.end})")
        for word in self.words:
            if word.begin is not None and word.begin < self.begin - TIME_TOLERANCE:
                raise ValueError(f"word {word.token!r} begins before its segment")
            if word.end is not None and word.end > self.end + TIME_TOLERANCE:
                raise ValueError(f"word {word.token!r} ends after its segment")
        return self

    @classmethod
    def from_text(cls, session_id: str, text: str, **fields: Any) -> "Segment":
        """Build a segment by splitting text on whitespace runs."""
        return cls(
            session_id=session_id,
            words=tuple(TimedWord(token=token) for token in text.split()),
            **fields,
        )

    @property
    def timed(self) -> bool:
        return self.begin is not None and self.end is not None

    @property
    def text(self) -> str:
        return " ".join(word.token for word in self.words)

    def label(self, group_by: GroupKey) -> str:
        if group_by == GroupKey.STREAM and self.stream is not None:
            return self.stream
        return self.speaker if self.speaker is not None else ""


class Transcript(BaseModel):
    """Segments of one or more sessions, grouped by speaker or stream"""
    model_config = ConfigDict(frozen=True)

    segments: Tuple[Segment, ...] = Field(default=(), description="All segments")
    role: TranscriptRole = Field(default=TranscriptRole.REFERENCE, description="Reference or hypothesis")
    group_by: GroupKey = Field(default=GroupKey.SPEAKER, description="Grouping key")

    def session_ids(self) -> List[str]:
        return sorted({segment.session_id for segment in self.segments})

    def sessions(self) -> Dict[str, List[Segment]]:
        grouped: Dict[str, List[Segment]] = {}
        for segment in self.segments:
            grouped.setdefault(segment.session_id, []).append(segment)
        return {session_id: grouped[session_id] for session_id in sorted(grouped)}

    def groups(self, session_id: str) -> Dict[str, List[Segment]]:
        """Segments of one session keyed by group label, labels sorted."""
        grouped: Dict[str, List[Segment]] = {}
        for segment in self.segments:
            if segment.session_id == session_id:
                grouped.setdefault(segment.label(self.group_by), []).append(segment)
        return {label: grouped[label] for label in sorted(grouped)}

    def word_count(self) -> int:
        return sum(len(segment.words) for segment in self.segments)

    def regrouped(self, group_by: GroupKey) -> "Transcript":
        return self.model_copy(update={"group_by": group_by})

    def lowercased(self) -> "Transcript":
        segments = tuple(
            segment.model_copy(update={
                "words": tuple(word.model_copy(update={"token": word.token.lower()}) for word in segment.words)
            })
            for segment in self.segments
        )
        return self.model_copy(update={"segments": segments})


class CostModel(BaseModel):
    """Edit costs of the Levenshtein recursion"""
    model_config = ConfigDict(frozen=True)

    c_cor: NonNegativeInt = Field(default=0, description="Cost of a correct match")
    c_sub: NonNegativeInt = Field(default=1, description="Cost of a substitution")
    c_ins: NonNegativeInt = Field(default=1, description="Cost of an insertion")
    c_del: NonNegativeInt = Field(default=1, description="Cost of a deletion")

    @model_validator(mode="after")
    def _check_order(self) -> "CostModel":
        if self.c_cor > self.c_sub:
            raise ValueError("a correct match must not cost more than a substitution")
        return self


DEFAULT_COSTS = CostModel()


class ValidationPolicy(BaseModel):
    """What validate() rejects"""
    model_config = ConfigDict(frozen=True)

    allow_hyp_overlap: bool = Field(default=False, description="Accept self-overlapping hypothesis streams")
    require_timing: bool = Field(default=False, description="Reject segments without begin/end")
    reject_empty_sessions: bool = Field(default=False, description="Reject sessions without words")


class AlignmentOp(BaseModel):
    """One edit operation; indices are 0-based word positions"""
    model_config = ConfigDict(frozen=True)

    kind: OpKind
    ref_index: Optional[int] = None
    hyp_index: Optional[int] = None

    @model_validator(mode="after")
    def _check_indices(self) -> "AlignmentOp":
        needs_ref = self.kind != OpKind.INSERT
        needs_hyp = self.kind != OpKind.DELETE
        if (self.ref_index is not None) != needs_ref or (self.hyp_index is not None) != needs_hyp:
            raise ValueError(f"{self.kind.value} op has wrong indices ({self.ref_index}, {self.hyp_index})")
        return self


class StreamAlignment(BaseModel):
    """Alignment of one reference group against one hypothesis stream"""
    reference: Optional[str] = Field(default=None, description="Reference label (None for padding)")
    hypothesis: Optional[str] = Field(default=None, description="Hypothesis label (None for padding)")
    ops: List[AlignmentOp] = Field(default_factory=list)


class SpeakerAssignment(BaseModel):
    """Speaker permutation resolved for cpWER / tcpWER"""
    kind: Literal["permutation"] = "permutation"
    pairs: List[Tuple[Optional[str], Optional[str]]] = Field(
        default_factory=list, description="(reference speaker, hypothesis stream); None marks padding"
    )


class UtteranceRef(BaseModel):
    """Reference utterance `index` of `speaker` (begin-time order)"""
    speaker: str
    index: int


class MimoAssignment(BaseModel):
    """Reference utterances assigned to each hypothesis stream, in emission order"""
    kind: Literal["mimo"] = "mimo"
    streams: Dict[str, List[UtteranceRef]] = Field(default_factory=dict)


Assignment = Annotated[Union[SpeakerAssignment, MimoAssignment], Field(discriminator="kind")]


class ErrorRateReport(BaseModel):
    """Errors, reference length and decomposition of one scoring run"""
    model_config = ConfigDict(frozen=True)

    error_rate: Optional[float] = Field(default=None, description="errors / length, None when length is 0")
    errors: NonNegativeInt = Field(..., description="Total distance")
    length: NonNegativeInt = Field(..., description="Reference word count")
    insertions: NonNegativeInt = 0
    deletions: NonNegativeInt = 0
    substitutions: NonNegativeInt = 0
    assignment: Optional[Assignment] = None
    hypothesis_length: NonNegativeInt = Field(default=0, description="Hypothesis word count")
    per_session: Dict[str, "ErrorRateReport"] = Field(default_factory=dict)
    alignments: Optional[List[StreamAlignment]] = None

    @model_validator(mode="before")
    @classmethod
    def _derive_rate(cls, data: Any) -> Any:
        if isinstance(data, dict) and "errors" in data and "length" in data:
            data = dict(data)
            length = int(data["length"])
            data["error_rate"] = int(data["errors"]) / length if length else None
        return data

    @property
    def rate_fraction(self) -> Optional[Fraction]:
        return Fraction(self.errors, self.length) if self.length else None


# Benchmark types
class MeetingSpec(BaseModel):
    """Parameters of a synthetic meeting"""
    speakers: int = Field(default=4, ge=1, description="Number of speakers K")
    duration: float = Field(default=300.0, gt=0, description="Meeting length in seconds")
    min_words: int = Field(default=3, ge=1, description="Shortest utterance in words")
    max_words: int = Field(default=12, ge=1, description="Longest utterance in words")
    words_per_second: float = Field(default=2.5, gt=0, description="Speaking rate")
    min_pause: float = Field(default=0.2, ge=0, description="Shortest pause after an utterance")
    max_pause: float = Field(default=2.0, ge=0, description="Longest pause after an utterance")
    overlap_probability: float = Field(default=0.2, ge=0, le=1)
    vocabulary_size: int = Field(default=500, ge=2)
    substitution_rate: float = Field(default=0.0, ge=0, le=1)
    insertion_rate: float = Field(default=0.0, ge=0, le=1)
    deletion_rate: float = Field(default=0.0, ge=0, le=1)
    confusion_probability: float = Field(default=0.0, ge=0, le=1, description="Per-segment speaker confusion")
    seed: int = 0

    @model_validator(mode="after")
    def _check_ranges(self) -> "MeetingSpec":
        if self.min_words > self.max_words:
            raise ValueError("min_words must not exceed max_words")
        if self.min_pause > self.max_pause:
            raise ValueError("min_pause must not exceed max_pause")
        return self


class ProfileResult(BaseModel):
    """Wall-clock statistics of one metric"""
    metric: Metric
    repeats: int
    median_seconds: float
    min_seconds: float
    max_seconds: float
    stdev_seconds: float
    errors: int
    length: int
    words_per_stream: float
    session_length: float


class SweepRow(BaseModel):
    collar: float
    error_rate: Optional[float]
    errors: int
    length: int
    disallowed_fraction: float


# File exchange record
class SegLstRecord(BaseModel):
    """One SegLst record; unknown keys are preserved"""
    model_config = ConfigDict(extra="allow")

    session_id: str = Field(..., min_length=1)
    speaker: str
    start_time: Optional[float]
    end_time: Optional[float]
    words: str
    stream: Optional[str] = None
    word_times: Optional[List[Tuple[float, float]]] = None

    @field_validator("start_time", "end_time", mode="before")
    @classmethod
    def _parse_time(cls, value: Any) -> Optional[float]:
        return parse_time(value)

    @model_validator(mode="after")
    def _check_times(self) -> "SegLstRecord":
        if self.start_time is not None and self.end_time is not None and self.start_time > self.end_time:
            raise ValueError("start_time must not exceed end_time")
        if self.word_times is not None and len(self.word_times) != len(self.words.split()):
            raise ValueError("word_times must hold one [begin, end] pair per word")
        return self


# CLI configuration
class CliConfig(BaseModel):
    """Resolved command-line configuration"""
    subcommand: Literal["wer", "cpwer", "orcwer", "mimower", "tcpwer", "sweep", "bench"]
    ref_path: Optional[Path] = None
    hyp_path: Optional[Path] = None
    collar: float = DEFAULT_COLLAR
    collars: List[float] = Field(default_factory=list)
    ref_pseudo_word_timing: PseudoWordStrategy = DEFAULT_REF_STRATEGY
    hyp_pseudo_word_timing: PseudoWordStrategy = DEFAULT_HYP_STRATEGY
    lowercase: bool = False
    allow_hyp_overlap: bool = False
    detail: ReportDetail = ReportDetail.SUMMARY
    output: Optional[Path] = None
    jobs: int = Field(default=1, ge=1)

    @field_validator("collar", mode="before")
    @classmethod
    def _parse_collar(cls, value: Any) -> float:
        return parse_collar(value)

    @field_validator("collars", mode="before")
    @classmethod
    def _parse_collars(cls, value: Any) -> List[float]:
        if isinstance(value, str):
            value = [part for part in value.split(",") if part.strip()]
        return [parse_collar(item) for item in value]


# Request Models
class ScoringRequest(BaseModel):
    """Request model for scoring SegLst payloads"""
    reference: List[SegLstRecord] = Field(..., description="Reference records")
    hypothesis: List[SegLstRecord] = Field(..., description="Hypothesis records")
    collar: Union[float, Literal["inf"]] = Field(default=DEFAULT_COLLAR, description="Collar in seconds or 'inf'")
    ref_pseudo_word_timing: PseudoWordStrategy = DEFAULT_REF_STRATEGY
    hyp_pseudo_word_timing: PseudoWordStrategy = DEFAULT_HYP_STRATEGY
    lowercase: bool = False
    allow_hyp_overlap: bool = False
    detail: ReportDetail = ReportDetail.PER_SESSION

    @field_validator("collar")
    @classmethod
    def _check_collar(cls, value: Union[float, str]) -> Union[float, str]:
        parse_collar(value)
        return value


# Response Models
class HealthResponse(BaseModel):
    """Health check response"""
    status: str = Field(..., description="Health status")
    message: str = Field(..., description="Health message")


class ErrorResponse(BaseModel):
    """Error response model"""
    error: str = Field(..., description="Error message")
    details: Optional[Dict[str, Any]] = Field(default=None, description="Additional error details")


ErrorRateReport.model_rebuild()
