"""Tests for pseudo-word-level timing."""

import pytest
from hypothesis import given, settings, strategies as st

from meetscore.core.errors import MissingTiming
from meetscore.models.schemas import PseudoWordStrategy, Segment, TimedWord
from meetscore.services.timing import apply_pseudo_timing, char_count, pseudo_word_times, word_times
from transcripts import segment


@pytest.fixture
def he_is_doing() -> Segment:
    return segment("A", "He is doing", 0.0, 6.0)


def test_char_count():
    assert char_count("doing") == 5
    assert char_count("a\tb") == 2


def test_full_segment(he_is_doing):
    begins, ends = pseudo_word_times(he_is_doing, PseudoWordStrategy.FULL_SEGMENT)
    assert begins.tolist() == [0.0, 0.0, 0.0]
    assert ends.tolist() == [6.0, 6.0, 6.0]


def test_equal_intervals(he_is_doing):
    begins, ends = pseudo_word_times(he_is_doing, PseudoWordStrategy.EQUAL_INTERVALS)
    assert begins.tolist() == pytest.approx([0, 2, 4])
    assert ends.tolist() == pytest.approx([2, 4, 6])


def test_character_based(he_is_doing):
    begins, ends = pseudo_word_times(he_is_doing, PseudoWordStrategy.CHARACTER_BASED)
    assert begins.tolist() == pytest.approx([0, 4 / 3, 8 / 3])
    assert ends.tolist() == pytest.approx([4 / 3, 8 / 3, 6])
    assert begins[0] == 0.0
    assert ends[-1] == 6.0


def test_character_based_points(he_is_doing):
    begins, ends = pseudo_word_times(he_is_doing, PseudoWordStrategy.CHARACTER_BASED_POINTS)
    assert begins.tolist() == pytest.approx([2 / 3, 2, 13 / 3])
    assert (begins == ends).all()


@pytest.mark.parametrize("strategy", list(PseudoWordStrategy))
def test_zero_duration_segment_collapses(strategy):
    begins, ends = pseudo_word_times(segment("A", "a b", 3.0, 3.0), strategy)
    assert begins.tolist() == [3.0, 3.0]
    assert ends.tolist() == [3.0, 3.0]


@pytest.mark.parametrize("strategy", list(PseudoWordStrategy))
def test_words_stay_inside_segment_and_ordered(strategy):
    seg = segment("A", "one three fifteen x", 1.5, 9.25)
    begins, ends = pseudo_word_times(seg, strategy)
    assert (begins >= 1.5).all() and (ends <= 9.25).all()
    assert (begins <= ends).all()
    assert list(begins) == sorted(begins)


def test_empty_segment_has_no_words():
    begins, ends = pseudo_word_times(segment("A", "", 0.0, 1.0), PseudoWordStrategy.CHARACTER_BASED)
    assert len(begins) == len(ends) == 0


def test_untimed_segment_rejected():
    with pytest.raises(MissingTiming):
        pseudo_word_times(segment("A", "a b"), PseudoWordStrategy.EQUAL_INTERVALS)


def test_given_word_times_win():
    seg = Segment(
        session_id="s1", speaker="A", begin=0.0, end=4.0,
        words=(TimedWord(token="a", begin=0.5, end=1.0), TimedWord(token="b", begin=3.0, end=3.5)),
    )
    begins, ends = word_times(seg, PseudoWordStrategy.EQUAL_INTERVALS)
    assert begins.tolist() == [0.5, 3.0]
    assert ends.tolist() == [1.0, 3.5]

    forced = apply_pseudo_timing(seg, PseudoWordStrategy.EQUAL_INTERVALS, force=True)
    assert [(w.begin, w.end) for w in forced.words] == [(0.0, 2.0), (2.0, 4.0)]


def test_partial_word_times_rejected():
    seg = Segment(
        session_id="s1", speaker="A", begin=0.0, end=4.0,
        words=(TimedWord(token="a", begin=0.5, end=1.0), TimedWord(token="b")),
    )
    with pytest.raises(MissingTiming):
        word_times(seg, PseudoWordStrategy.EQUAL_INTERVALS)


def test_apply_pseudo_timing_sets_every_word():
    timed = apply_pseudo_timing(segment("A", "He is doing", 0.0, 6.0), PseudoWordStrategy.CHARACTER_BASED)
    assert all(word.timed for word in timed.words)
    assert timed.words[1].begin == pytest.approx(4 / 3)


@given(
    st.lists(st.text(alphabet="abcdefgh", min_size=1, max_size=8), min_size=1, max_size=8),
    st.integers(0, 10_000),
    st.integers(100, 60_000),
)
@settings(max_examples=1000, deadline=None)
def test_random_segments_are_partitioned(tokens, begin_ms, duration_ms):
    begin, end = begin_ms / 1000, (begin_ms + duration_ms) / 1000
    seg = Segment(session_id="s1", speaker="A", begin=begin, end=end, words=tuple(TimedWord(token=t) for t in tokens))
    total = sum(len(t) for t in tokens)

    for strategy in (PseudoWordStrategy.EQUAL_INTERVALS, PseudoWordStrategy.CHARACTER_BASED):
        begins, ends = pseudo_word_times(seg, strategy)
        assert begins[0] == begin and ends[-1] == end
        assert (begins[1:] == ends[:-1]).all()
        for token, b, e in zip(tokens, begins, ends):
            share = 1 / len(tokens) if strategy == PseudoWordStrategy.EQUAL_INTERVALS else len(token) / total
            expected = (end - begin) * share
            assert abs((e - b) - expected) <= 1e-9 * expected

    begins, ends = pseudo_word_times(seg, PseudoWordStrategy.CHARACTER_BASED)
    points, _ = pseudo_word_times(seg, PseudoWordStrategy.CHARACTER_BASED_POINTS)
    assert all(abs(p - (b + e) / 2) <= 1e-9 for p, b, e in zip(points, begins, ends))
