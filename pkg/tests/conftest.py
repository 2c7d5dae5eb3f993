"""Shared fixtures."""

from typing import Tuple

import pytest

from meetscore.models.schemas import GroupKey, Transcript
from transcripts import hypothesis, reference


@pytest.fixture
def toy_meeting() -> Tuple[Transcript, Transcript]:
    """Three speakers; the hypothesis moves one word between streams."""
    ref = reference([
        ("spk1", "The quick brown fox"),
        ("spk2", "jumps over"),
        ("spk3", "lazy dog"),
    ])
    hyp = hypothesis([
        ("s1", "The quick brown fox"),
        ("s2", "jumps over dog"),
        ("s3", "lazy"),
    ], group_by=GroupKey.SPEAKER)
    return ref, hyp


@pytest.fixture
def timed_meeting() -> Tuple[Transcript, Transcript]:
    ref = reference([
        ("A", "good morning everyone", 0.0, 2.0),
        ("B", "hello there", 1.5, 3.0),
        ("A", "let us start", 4.0, 5.5),
    ])
    hyp = hypothesis([
        ("1", "good morning everyone", 0.1, 2.1),
        ("2", "hello there", 1.4, 2.9),
        ("1", "let us start", 4.0, 5.4),
    ], group_by=GroupKey.SPEAKER)
    return ref, hyp
