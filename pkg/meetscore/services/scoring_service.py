"""
Scoring service: loads transcripts, dispatches metrics, sweeps collars and runs benchmarks
"""

import logging
import math
from pathlib import Path
from typing import List, NamedTuple, Optional, Sequence, Tuple

from ..core.config import settings
from ..core.errors import InputError, MeetScoreError, ParseError, ScoringError
from ..models.schemas import (
    DEFAULT_COLLAR,
    DEFAULT_HYP_STRATEGY,
    DEFAULT_REF_STRATEGY,
    CliConfig,
    ErrorRateReport,
    GroupKey,
    MeetingSpec,
    Metric,
    ProfileResult,
    PseudoWordStrategy,
    RecognizerStyle,
    ReportDetail,
    SweepRow,
    Transcript,
    TranscriptRole,
    ValidationPolicy,
)
from . import benchgen, formats, metrics
from .transcript_service import validate

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_SCORING = 1
EXIT_INPUT = 2


class RunResult(NamedTuple):
    exit_code: int
    output: bytes
    diagnostic: Optional[str] = None


def recommend_metric(style: RecognizerStyle, timed: bool = False) -> Metric:
    """
    The WER to report for a recognizer output style.

    Speaker-grouped output is scored with cpWER, or tcpWER when segment times
    are available. Output that is not grouped by speaker needs an
    assignment-free metric: ORC-WER for overlap-free channels, MIMO-WER for
    serialized output, which may reorder utterances.
    """
    style = RecognizerStyle(style)
    if style == RecognizerStyle.DIARIZATION:
        return Metric.TCPWER if timed else Metric.CPWER
    if style == RecognizerStyle.CSS:
        return Metric.ORCWER
    return Metric.MIMOWER


def hypothesis_grouping(metric: Metric) -> GroupKey:
    """cpWER/tcpWER group system output by speaker, the other metrics by stream."""
    if Metric(metric) in (Metric.ORCWER, Metric.MIMOWER):
        return GroupKey.STREAM
    return GroupKey.SPEAKER


class ScoringService:
    """Service for scoring transcript files and payloads"""

    def __init__(self, jobs: int = 1):
        if jobs > settings.MAX_JOBS:
            logger.warning("limiting --jobs %d to %d", jobs, settings.MAX_JOBS)
        self.jobs = max(1, min(jobs, settings.MAX_JOBS))

    def load(self, path: Path, role: TranscriptRole) -> Transcript:
        """Read a transcript file; STM by suffix, SegLst otherwise."""
        try:
            data = Path(path).read_bytes()
        except OSError as exc:
            raise ParseError(f"cannot read file: {exc.strerror}", path=str(path)) from exc
        try:
            transcript = formats.read_transcript(data, str(path), role)
        except MeetScoreError as exc:
            raise exc.with_path(str(path))
        logger.debug("%s: %d segments, %d words", path, len(transcript.segments), transcript.word_count())
        return transcript

    def prepare(
        self,
        metric: Metric,
        ref: Transcript,
        hyp: Transcript,
        lowercase: bool = False,
    ) -> Tuple[Transcript, Transcript]:
        ref = ref.regrouped(GroupKey.SPEAKER)
        hyp = hyp.regrouped(hypothesis_grouping(metric))
        if lowercase:
            ref, hyp = ref.lowercased(), hyp.lowercased()
        return ref, hyp

    def check(
        self,
        metric: Metric,
        ref: Transcript,
        hyp: Transcript,
        allow_hyp_overlap: bool = False,
        ref_path: Optional[str] = None,
        hyp_path: Optional[str] = None,
    ) -> None:
        """Validate both sides up front so errors name the offending file."""
        timed = Metric(metric) == Metric.TCPWER
        policies = (
            (ref, ValidationPolicy(require_timing=timed), ref_path),
            (hyp, ValidationPolicy(require_timing=timed, allow_hyp_overlap=allow_hyp_overlap or not timed), hyp_path),
        )
        for transcript, policy, path in policies:
            try:
                validate(transcript, policy)
            except ScoringError as exc:
                raise exc.with_path(path) if path else exc

    def score(
        self,
        metric: Metric,
        ref: Transcript,
        hyp: Transcript,
        *,
        collar: float = DEFAULT_COLLAR,
        ref_strategy: PseudoWordStrategy = DEFAULT_REF_STRATEGY,
        hyp_strategy: PseudoWordStrategy = DEFAULT_HYP_STRATEGY,
        detail: ReportDetail = ReportDetail.SUMMARY,
        allow_hyp_overlap: bool = False,
        lowercase: bool = False,
    ) -> ErrorRateReport:
        """Score one metric on already loaded transcripts."""
        metric = Metric(metric)
        ref, hyp = self.prepare(metric, ref, hyp, lowercase)
        report = metrics.compute(
            metric,
            ref,
            hyp,
            collar=collar,
            ref_strategy=ref_strategy,
            hyp_strategy=hyp_strategy,
            with_alignment=detail == ReportDetail.ALIGNMENT,
            allow_hyp_overlap=allow_hyp_overlap,
            jobs=self.jobs,
        )
        rate = "undefined" if report.error_rate is None else f"{report.error_rate:.2%}"
        logger.info("%s: %d errors / %d words (%s)", metric.value, report.errors, report.length, rate)
        return report

    def sweep(
        self,
        ref: Transcript,
        hyp: Transcript,
        collars: Sequence[float],
        *,
        ref_strategy: PseudoWordStrategy = DEFAULT_REF_STRATEGY,
        hyp_strategy: PseudoWordStrategy = DEFAULT_HYP_STRATEGY,
        allow_hyp_overlap: bool = False,
        lowercase: bool = False,
    ) -> List[SweepRow]:
        """tcpWER for each collar, with the share of unconstrained matches the collar forbids."""
        ref, hyp = self.prepare(Metric.TCPWER, ref, hyp, lowercase)
        fractions = metrics.collar_disallowed_fractions(
            ref, hyp, collars, ref_strategy, hyp_strategy, allow_hyp_overlap=allow_hyp_overlap
        )
        rows = []
        for collar, fraction in zip(collars, fractions):
            report = metrics.tcp_wer(
                ref, hyp, collar, ref_strategy, hyp_strategy,
                allow_hyp_overlap=allow_hyp_overlap, jobs=self.jobs,
            )
            rows.append(SweepRow(
                collar=collar,
                error_rate=report.error_rate,
                errors=report.errors,
                length=report.length,
                disallowed_fraction=0.0 if math.isinf(collar) else fraction,
            ))
            logger.info("collar %s: %d errors, %.2f%% of matches disallowed", collar, report.errors, 100 * fraction)
        return rows

    def bench(
        self,
        spec: MeetingSpec,
        metric_names: Sequence[Metric],
        repeats: int = 10,
        collar: float = DEFAULT_COLLAR,
        emit_dir: Optional[Path] = None,
    ) -> Tuple[List[ProfileResult], int]:
        """Generate a meeting, optionally write it as SegLst, and profile the metrics on it."""
        ref, hyp, injected = benchgen.generate(spec)
        if emit_dir is not None:
            emit_dir = Path(emit_dir)
            emit_dir.mkdir(parents=True, exist_ok=True)
            (emit_dir / "ref.json").write_bytes(formats.write_seglst(ref))
            (emit_dir / "hyp.json").write_bytes(formats.write_seglst(hyp))
            logger.info("wrote generated meeting to %s", emit_dir)
        return benchgen.profile(ref, hyp, metric_names, repeats, collar), injected

    def run(self, config: CliConfig) -> RunResult:
        """
        Load, validate, score and serialize as the command line asks.

        Exit codes: 0 success, 1 scoring precondition failed, 2 input unreadable.
        """
        try:
            ref = self.load(config.ref_path, TranscriptRole.REFERENCE)
            hyp = self.load(config.hyp_path, TranscriptRole.HYPOTHESIS)
            metric = Metric.TCPWER if config.subcommand == "sweep" else Metric(config.subcommand)
            prepared_ref, prepared_hyp = self.prepare(metric, ref, hyp, config.lowercase)
            self.check(
                metric, prepared_ref, prepared_hyp, config.allow_hyp_overlap,
                str(config.ref_path), str(config.hyp_path),
            )
            if config.subcommand == "sweep":
                rows = self.sweep(
                    ref, hyp, config.collars or [config.collar],
                    ref_strategy=config.ref_pseudo_word_timing,
                    hyp_strategy=config.hyp_pseudo_word_timing,
                    allow_hyp_overlap=config.allow_hyp_overlap,
                    lowercase=config.lowercase,
                )
                output = formats.write_sweep(rows)
            else:
                report = self.score(
                    metric, ref, hyp,
                    collar=config.collar,
                    ref_strategy=config.ref_pseudo_word_timing,
                    hyp_strategy=config.hyp_pseudo_word_timing,
                    detail=config.detail,
                    allow_hyp_overlap=config.allow_hyp_overlap,
                    lowercase=config.lowercase,
                )
                output = formats.write_report(report, config.detail)
        except InputError as exc:
            return RunResult(EXIT_INPUT, b"", exc.diagnostic())
        except ScoringError as exc:
            return RunResult(EXIT_SCORING, b"", exc.diagnostic())

        if config.output is not None:
            Path(config.output).write_bytes(output)
        return RunResult(EXIT_OK, output)
