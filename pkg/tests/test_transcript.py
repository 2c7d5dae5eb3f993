"""Tests for transcript validation and the domain models."""

import pytest
from hypothesis import given, settings, strategies as st
from pydantic import ValidationError

from meetscore.core.errors import EmptySession, EmptyToken, MissingTiming, OverlapWithinStream
from meetscore.models.schemas import (
    ErrorRateReport,
    GroupKey,
    Segment,
    TimedWord,
    Transcript,
    TranscriptRole,
    ValidationPolicy,
    parse_collar,
    parse_time,
)
from meetscore.services.transcript_service import LENIENT, STRICT, validate, words_of
from transcripts import hypothesis, reference, segment


class TestValidate:
    def test_hypothesis_overlap_rejected(self):
        hyp = hypothesis([("1", "a", 0.0, 2.0), ("1", "b", 1.0, 3.0)])
        with pytest.raises(OverlapWithinStream):
            validate(hyp, STRICT)

    def test_hypothesis_overlap_allowed_when_lenient(self):
        hyp = hypothesis([("1", "b", 1.0, 3.0), ("1", "a", 0.0, 2.0)])
        validated = validate(hyp, LENIENT)
        assert [s.begin for s in validated.segments] == [0.0, 1.0]

    def test_reference_overlap_is_fine(self):
        ref = reference([("A", "a", 0.0, 2.0), ("A", "b", 1.0, 3.0)])
        assert len(validate(ref, STRICT).segments) == 2

    def test_overlap_across_streams_is_fine(self):
        hyp = hypothesis([("1", "a", 0.0, 2.0), ("2", "b", 1.0, 3.0)])
        assert len(validate(hyp, STRICT).segments) == 2

    def test_touching_segments_do_not_overlap(self):
        hyp = hypothesis([("1", "a", 0.0, 1.0), ("1", "b", 1.0, 2.0)])
        assert len(validate(hyp, STRICT).segments) == 2

    def test_sorted_by_begin(self):
        ref = reference([("A", "late", 5.0, 6.0), ("A", "early", 1.0, 2.0)])
        assert [s.begin for s in validate(ref).segments] == [1.0, 5.0]

    def test_untimed_keeps_input_order(self):
        ref = reference([("A", "first"), ("A", "second")])
        assert [s.text for s in validate(ref).segments] == ["first", "second"]

    def test_timing_required(self):
        ref = reference([("A", "a b")])
        with pytest.raises(MissingTiming):
            validate(ref, ValidationPolicy(require_timing=True))

    def test_empty_session_rejected_on_request(self):
        ref = reference([("A", "", 0.0, 1.0)])
        assert validate(ref).segments
        with pytest.raises(EmptySession):
            validate(ref, ValidationPolicy(reject_empty_sessions=True))


class TestWordsOf:
    def test_empty(self):
        assert words_of([]) == []

    def test_concatenation(self):
        words = words_of([segment("A", "a b"), segment("A", "c")])
        assert [w.token for w in words] == ["a", "b", "c"]

    def test_order_follows_begin_after_validation(self):
        ref = validate(reference([("A", "c", 5.0, 6.0), ("A", "a b", 1.0, 2.0)]))
        assert [w.token for w in words_of(ref.groups("s1")["A"])] == ["a", "b", "c"]


class TestModels:
    def test_empty_token_rejected(self):
        with pytest.raises(EmptyToken):
            TimedWord(token="")

    def test_whitespace_token_rejected(self):
        with pytest.raises(EmptyToken):
            TimedWord(token="a b")

    def test_segment_end_before_begin(self):
        with pytest.raises(ValidationError):
            Segment(session_id="s", speaker="A", begin=2.0, end=1.0)

    def test_word_outside_segment(self):
        with pytest.raises(ValidationError):
            Segment(session_id="s", speaker="A", begin=0.0, end=1.0,
                    words=(TimedWord(token="a", begin=0.5, end=1.5),))

    def test_from_text_collapses_whitespace(self):
        assert Segment.from_text("s", "  a \t b\n").text == "a b"

    def test_group_label_falls_back_to_speaker(self):
        seg = segment("A", "x")
        assert seg.label(GroupKey.STREAM) == "A"
        assert segment("A", "x", stream="2").label(GroupKey.STREAM) == "2"

    def test_groups_sorted_by_label(self):
        hyp = hypothesis([("b", "x"), ("a", "y")])
        assert list(hyp.groups("s1")) == ["a", "b"]

    def test_lowercased(self):
        ref = reference([("A", "Hello World")])
        assert ref.lowercased().segments[0].text == "hello world"

    def test_report_rate_derived(self):
        report = ErrorRateReport(errors=1, length=3)
        assert report.error_rate == pytest.approx(1 / 3)
        assert str(report.rate_fraction) == "1/3"

    def test_report_rate_undefined_for_empty_reference(self):
        assert ErrorRateReport(errors=0, length=0).error_rate is None

    def test_transcript_defaults(self):
        transcript = Transcript()
        assert transcript.role == TranscriptRole.REFERENCE
        assert transcript.session_ids() == []


class TestParsing:
    @pytest.mark.parametrize("value,expected", [(1, 1.0), ("2.5", 2.5), ("0.123456789", 0.123456789), (None, None)])
    def test_parse_time(self, value, expected):
        assert parse_time(value) == expected

    @pytest.mark.parametrize("value", ["1,5", "-1", "1e3", "nan", True, "0.1234567891"])
    def test_parse_time_rejects(self, value):
        with pytest.raises(ValueError):
            parse_time(value)

    def test_parse_collar(self):
        assert parse_collar("inf") == float("inf")
        assert parse_collar("5") == 5.0
        assert parse_collar(0) == 0.0
        with pytest.raises(ValueError):
            parse_collar("-1")


@st.composite
def mixed_transcripts(draw):
    """Several sessions, timed and untimed segments, begin-time ties."""
    rows = []
    for _ in range(draw(st.integers(0, 8))):
        timed = draw(st.booleans())
        begin = draw(st.integers(0, 4)) / 2
        rows.append(segment(
            draw(st.sampled_from(["A", "B"])),
            " ".join(draw(st.lists(st.sampled_from(["a", "b", "c"]), max_size=3))),
            begin if timed else None,
            begin + draw(st.integers(0, 3)) / 2 if timed else None,
            session_id=draw(st.sampled_from(["s1", "s2"])),
        ))
    return Transcript(segments=tuple(rows))


@given(mixed_transcripts())
@settings(max_examples=200, deadline=None)
def test_validate_is_idempotent(transcript):
    once = validate(transcript, STRICT)
    assert validate(once, STRICT) == once
    assert once.word_count() == transcript.word_count()
