"""
meetscore: word error rates for multi-speaker meeting transcription
"""

from .core.errors import InputError, MeetScoreError, ScoringError
from .models.schemas import (
    CostModel,
    ErrorRateReport,
    Metric,
    PseudoWordStrategy,
    Segment,
    TimedWord,
    Transcript,
)
from .services.metrics import aggregate, cp_wer, mimo_wer, orc_wer, tcp_wer, wer

__version__ = "1.0.0"

__all__ = [
    "CostModel",
    "ErrorRateReport",
    "InputError",
    "MeetScoreError",
    "Metric",
    "PseudoWordStrategy",
    "ScoringError",
    "Segment",
    "TimedWord",
    "Transcript",
    "aggregate",
    "cp_wer",
    "mimo_wer",
    "orc_wer",
    "tcp_wer",
    "wer",
]
