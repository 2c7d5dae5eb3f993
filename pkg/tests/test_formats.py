"""Tests for SegLst, STM and report serialization."""

import json

import pytest
from hypothesis import given, settings, strategies as st

from meetscore.core.errors import ParseError, SchemaError
from meetscore.models.schemas import (
    ErrorRateReport,
    GroupKey,
    ReportDetail,
    Segment,
    SpeakerAssignment,
    SweepRow,
    TimedWord,
    Transcript,
    TranscriptRole,
)
from meetscore.services import formats
from transcripts import reference


class TestSegLst:
    def test_schema_example(self):
        data = b'[{"session_id":"S1","speaker":"A","start_time":0.0,"end_time":6.0,"words":"He is doing"}]'
        transcript = formats.read_seglst(data)
        assert len(transcript.segments) == 1
        segment = transcript.segments[0]
        assert (segment.session_id, segment.speaker, segment.begin, segment.end) == ("S1", "A", 0.0, 6.0)
        assert [w.token for w in segment.words] == ["He", "is", "doing"]

    def test_empty_array(self):
        assert formats.read_seglst(b"[]").segments == ()

    def test_json_lines(self):
        data = (
            b'{"session_id":"S1","speaker":"A","start_time":0,"end_time":1,"words":"a"}\n'
            b"\n"
            b'{"session_id":"S1","speaker":"B","start_time":"1.5","end_time":"2","words":"b c"}\n'
        )
        transcript = formats.read_seglst(data)
        assert [s.begin for s in transcript.segments] == [0.0, 1.5]

    def test_missing_end_time(self):
        data = b'[{"session_id":"S1","speaker":"A","start_time":0.0,"words":"a"}]'
        with pytest.raises(SchemaError) as info:
            formats.read_seglst(data)
        assert info.value.field == "end_time"
        assert info.value.line == 1

    def test_missing_field_reports_json_line(self):
        data = (
            b'{"session_id":"S1","speaker":"A","start_time":0,"end_time":1,"words":"a"}\n'
            b'{"session_id":"S1","start_time":0,"end_time":1,"words":"a"}\n'
        )
        with pytest.raises(SchemaError) as info:
            formats.read_seglst(data)
        assert (info.value.field, info.value.line) == ("speaker", 2)

    def test_invalid_json(self):
        with pytest.raises(ParseError):
            formats.read_seglst(b'[{"session_id": ')

    def test_not_an_object(self):
        with pytest.raises(ParseError) as info:
            formats.read_seglst(b"[1]")
        assert info.value.line == 1

    def test_comma_decimal_rejected(self):
        data = b'[{"session_id":"S1","speaker":"A","start_time":"0,5","end_time":1,"words":"a"}]'
        with pytest.raises(SchemaError) as info:
            formats.read_seglst(data)
        assert info.value.field == "start_time"

    def test_not_utf8(self):
        with pytest.raises(ParseError):
            formats.read_seglst(b"\xff\xfe")

    def test_hypothesis_speaker_names_the_stream(self):
        data = b'[{"session_id":"S1","speaker":"spk0","start_time":0,"end_time":1,"words":"a"}]'
        transcript = formats.read_seglst(data, TranscriptRole.HYPOTHESIS)
        assert transcript.group_by == GroupKey.STREAM
        assert transcript.segments[0].stream == "spk0"

    def test_word_times(self):
        data = (
            b'[{"session_id":"S1","speaker":"A","start_time":0,"end_time":2,'
            b'"words":"a b","word_times":[[0,1],[1,2]]}]'
        )
        segment = formats.read_seglst(data).segments[0]
        assert [(w.begin, w.end) for w in segment.words] == [(0.0, 1.0), (1.0, 2.0)]

    def test_word_times_length_mismatch(self):
        data = (
            b'[{"session_id":"S1","speaker":"A","start_time":0,"end_time":2,'
            b'"words":"a b","word_times":[[0,1]]}]'
        )
        with pytest.raises(SchemaError):
            formats.read_seglst(data)

    def test_round_trip_keeps_unknown_fields(self):
        data = (
            b'[{"session_id":"S1","speaker":"A","start_time":0.5,"end_time":6.25,'
            b'"words":"He is doing","confidence":0.9}]'
        )
        first = formats.write_seglst(formats.read_seglst(data))
        second = formats.write_seglst(formats.read_seglst(first))
        assert first == second
        record = json.loads(first)[0]
        assert record["confidence"] == 0.9
        assert list(record)[:5] == ["session_id", "speaker", "start_time", "end_time", "words"]

    def test_write_empty(self):
        assert formats.write_seglst(reference([])) == b"[]\n"

    def test_output_is_lf_terminated(self):
        output = formats.write_seglst(reference([("A", "a", 0.0, 1.0), ("B", "b", 1.0, 2.0)]))
        assert output.endswith(b"]\n")
        assert b"\r" not in output


@st.composite
def seglst_transcripts(draw):
    role = draw(st.sampled_from(list(TranscriptRole)))
    token = st.text(st.characters(exclude_categories=("Z", "C")), min_size=1, max_size=6)
    segments = []
    for _ in range(draw(st.integers(0, 6))):
        begin = draw(st.integers(0, 10**6)) / 1000
        speaker = draw(st.sampled_from(["A", "B", "spk 3", "Ünal"]))
        segments.append(Segment(
            session_id=draw(st.sampled_from(["S1", "S2"])),
            speaker=speaker,
            stream=speaker if role == TranscriptRole.HYPOTHESIS else None,
            begin=begin,
            end=begin + draw(st.integers(0, 10**5)) / 1000,
            words=tuple(TimedWord(token=t) for t in draw(st.lists(token, max_size=5))),
        ))
    group_by = GroupKey.STREAM if role == TranscriptRole.HYPOTHESIS else GroupKey.SPEAKER
    return Transcript(segments=tuple(segments), role=role, group_by=group_by)


@given(seglst_transcripts())
@settings(max_examples=100, deadline=None)
def test_seglst_write_then_read_is_identity(transcript):
    assert formats.read_seglst(formats.write_seglst(transcript), transcript.role) == transcript


class TestStm:
    def test_basic_line(self):
        transcript = formats.read_stm(b"rec1 1 spkA 0.00 2.50 the quick brown fox\n")
        segment = transcript.segments[0]
        assert (segment.session_id, segment.speaker, segment.begin, segment.end) == ("rec1", "spkA", 0.0, 2.5)
        assert len(segment.words) == 4
        assert segment.extra == {"channel": "1"}

    def test_comment_only(self):
        assert formats.read_stm(b";; comment\n").segments == ()

    def test_too_few_fields(self):
        with pytest.raises(ParseError) as info:
            formats.read_stm(b"rec1 1 spkA 0.00\n")
        assert info.value.line == 1

    def test_label_is_skipped(self):
        transcript = formats.read_stm(b"rec1 1 spkA 0 1 <o,f0,male> hello world\n")
        assert transcript.segments[0].text == "hello world"

    def test_bad_time(self):
        with pytest.raises(ParseError) as info:
            formats.read_stm(b";; header\nrec1 1 spkA 0 x hi\n")
        assert info.value.line == 2

    def test_round_trip(self):
        data = b"rec1 1 spkA 0.0 2.5 the quick brown fox\nrec1 1 spkB 3.0 4.0 hi\n"
        transcript = formats.read_stm(data)
        assert formats.read_stm(formats.write_stm(transcript)) == transcript

    def test_dispatch_by_suffix(self):
        transcript = formats.read_transcript(b"rec1 1 spkA 0 1 hi\n", "ref.STM", TranscriptRole.REFERENCE)
        assert transcript.segments[0].speaker == "spkA"


class TestReports:
    def test_zero_error_report(self):
        document = json.loads(formats.write_report(ErrorRateReport(errors=0, length=4)))
        assert document["error_rate"] == 0.0
        assert document["errors"] == 0
        assert "per_session" not in document

    def test_undefined_rate_is_null(self):
        output = formats.write_report(ErrorRateReport(errors=0, length=0))
        assert json.loads(output)["error_rate"] is None
        assert output.endswith(b"}\n")

    def test_per_session_detail(self):
        session = ErrorRateReport(errors=1, length=2, assignment=SpeakerAssignment(pairs=[("A", "1")]))
        report = session.model_copy(update={"per_session": {"s1": session}})
        summary = json.loads(formats.write_report(report, ReportDetail.SUMMARY))
        detailed = json.loads(formats.write_report(report, ReportDetail.PER_SESSION))
        assert "per_session" not in summary
        assert detailed["per_session"]["s1"]["assignment"] == {"kind": "permutation", "pairs": [["A", "1"]]}

    def test_read_back(self):
        report = ErrorRateReport(errors=3, length=4, insertions=3)
        assert formats.read_report(formats.write_report(report)) == report

    def test_sweep_infinite_collar(self):
        rows = [SweepRow(collar=float("inf"), error_rate=0.5, errors=1, length=2, disallowed_fraction=0.0)]
        assert json.loads(formats.write_sweep(rows))[0]["collar"] == "inf"
