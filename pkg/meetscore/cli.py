"""CLI for meeting transcription scoring."""

from pathlib import Path
from typing import Annotated, List, Optional

import typer
from pydantic import ValidationError
from rich.console import Console
from rich.markup import escape
from rich.table import Table

from .core.config import settings
from .core.logging import setup_logging
from .models.schemas import (
    DEFAULT_HYP_STRATEGY,
    DEFAULT_REF_STRATEGY,
    CliConfig,
    MeetingSpec,
    Metric,
    PseudoWordStrategy,
    ReportDetail,
    parse_collar,
)
from .services import formats
from .services.scoring_service import EXIT_INPUT, ScoringService

app = typer.Typer(
    name="meetscore",
    help=(
        "Word error rates for multi-speaker meeting transcription.\n\n"
        "Which WER? Speaker-attributed output (diarization style): cpwer, or tcpwer "
        "when segment times are known. Overlap-free channels without speaker labels "
        "(CSS style): orcwer. Serialized single-stream output (SOT style): mimower."
    ),
    no_args_is_help=True,
)
err_console = Console(stderr=True)


RefOption = Annotated[Path, typer.Option("--ref", "-r", help="Reference transcript (.stm or SegLst)")]
HypOption = Annotated[Path, typer.Option("--hyp", help="Hypothesis transcript (SegLst)")]
CollarOption = Annotated[str, typer.Option("--collar", help="Collar in seconds, or 'inf'")]
RefTimingOption = Annotated[
    PseudoWordStrategy,
    typer.Option("--ref-pseudo-word-timing", help="How reference word times are derived from segments"),
]
HypTimingOption = Annotated[
    PseudoWordStrategy,
    typer.Option("--hyp-pseudo-word-timing", help="How hypothesis word times are derived from segments"),
]
LowercaseOption = Annotated[bool, typer.Option("--lowercase", help="Lowercase all words before scoring")]
OverlapOption = Annotated[
    bool, typer.Option("--allow-hyp-overlap", help="Accept self-overlapping hypothesis streams")
]
DetailOption = Annotated[ReportDetail, typer.Option("--detail", help="Report detail level")]
OutputOption = Annotated[Optional[Path], typer.Option("--output", "-o", help="Write the report to this file")]
JobsOption = Annotated[int, typer.Option("--jobs", "-j", help="Sessions scored concurrently")]
VerboseOption = Annotated[bool, typer.Option("--verbose", "-v", help="Debug logging on stderr")]


def _cli_error(message: str) -> None:
    err_console.print(f"[red]error:[/red] {escape(message)}", highlight=False, soft_wrap=True)


def _execute(verbose: bool = False, **fields) -> None:
    setup_logging("DEBUG" if verbose else None)
    try:
        config = CliConfig(**fields)
    except ValidationError as e:
        _cli_error(str(e.errors()[0]["msg"]))
        raise typer.Exit(EXIT_INPUT)

    result = ScoringService(jobs=config.jobs).run(config)
    if result.diagnostic:
        _cli_error(result.diagnostic)
        raise typer.Exit(result.exit_code)
    if config.output is None:
        typer.echo(result.output.decode("utf-8"), nl=False)
    raise typer.Exit(result.exit_code)


def _metric_command(
    subcommand: str,
    ref: Path,
    hyp: Path,
    lowercase: bool,
    allow_hyp_overlap: bool,
    detail: ReportDetail,
    output: Optional[Path],
    jobs: int,
    verbose: bool,
    **timing,
) -> None:
    _execute(
        verbose,
        subcommand=subcommand,
        ref_path=ref,
        hyp_path=hyp,
        lowercase=lowercase,
        allow_hyp_overlap=allow_hyp_overlap,
        detail=detail,
        output=output,
        jobs=jobs,
        **timing,
    )


@app.command()
def wer(
    ref: RefOption,
    hyp: HypOption,
    lowercase: LowercaseOption = False,
    allow_hyp_overlap: OverlapOption = False,
    detail: DetailOption = ReportDetail.SUMMARY,
    output: OutputOption = None,
    jobs: JobsOption = 1,
    verbose: VerboseOption = False,
):
    """Utterance-wise WER: the i-th reference segment of a session against the i-th hypothesis segment."""
    _metric_command("wer", ref, hyp, lowercase, allow_hyp_overlap, detail, output, jobs, verbose)


@app.command()
def cpwer(
    ref: RefOption,
    hyp: HypOption,
    lowercase: LowercaseOption = False,
    allow_hyp_overlap: OverlapOption = False,
    detail: DetailOption = ReportDetail.SUMMARY,
    output: OutputOption = None,
    jobs: JobsOption = 1,
    verbose: VerboseOption = False,
):
    """Concatenated minimum-permutation WER for speaker-attributed output."""
    _metric_command("cpwer", ref, hyp, lowercase, allow_hyp_overlap, detail, output, jobs, verbose)


@app.command()
def orcwer(
    ref: RefOption,
    hyp: HypOption,
    lowercase: LowercaseOption = False,
    allow_hyp_overlap: OverlapOption = False,
    detail: DetailOption = ReportDetail.SUMMARY,
    output: OutputOption = None,
    jobs: JobsOption = 1,
    verbose: VerboseOption = False,
):
    """Optimal reference combination WER: reference speaker labels ignored."""
    _metric_command("orcwer", ref, hyp, lowercase, allow_hyp_overlap, detail, output, jobs, verbose)


@app.command()
def mimower(
    ref: RefOption,
    hyp: HypOption,
    lowercase: LowercaseOption = False,
    allow_hyp_overlap: OverlapOption = False,
    detail: DetailOption = ReportDetail.SUMMARY,
    output: OutputOption = None,
    jobs: JobsOption = 1,
    verbose: VerboseOption = False,
):
    """MIMO-WER: utterance order kept only within each reference speaker."""
    _metric_command("mimower", ref, hyp, lowercase, allow_hyp_overlap, detail, output, jobs, verbose)


@app.command()
def tcpwer(
    ref: RefOption,
    hyp: HypOption,
    collar: CollarOption = "5",
    ref_pseudo_word_timing: RefTimingOption = DEFAULT_REF_STRATEGY,
    hyp_pseudo_word_timing: HypTimingOption = DEFAULT_HYP_STRATEGY,
    lowercase: LowercaseOption = False,
    allow_hyp_overlap: OverlapOption = False,
    detail: DetailOption = ReportDetail.SUMMARY,
    output: OutputOption = None,
    jobs: JobsOption = 1,
    verbose: VerboseOption = False,
):
    """Time-constrained cpWER: words only match within the collar."""
    _metric_command(
        "tcpwer", ref, hyp, lowercase, allow_hyp_overlap, detail, output, jobs, verbose,
        collar=collar,
        ref_pseudo_word_timing=ref_pseudo_word_timing,
        hyp_pseudo_word_timing=hyp_pseudo_word_timing,
    )


@app.command()
def sweep(
    ref: RefOption,
    hyp: HypOption,
    collars: Annotated[str, typer.Option("--collars", help="Comma-separated collars, e.g. 1,2,5,inf")] = "0.5,1,2,5,10,100,inf",
    ref_pseudo_word_timing: RefTimingOption = DEFAULT_REF_STRATEGY,
    hyp_pseudo_word_timing: HypTimingOption = DEFAULT_HYP_STRATEGY,
    lowercase: LowercaseOption = False,
    allow_hyp_overlap: OverlapOption = False,
    output: OutputOption = None,
    jobs: JobsOption = 1,
    verbose: VerboseOption = False,
):
    """tcpWER over a list of collars, with the share of matches each collar forbids."""
    _metric_command(
        "sweep", ref, hyp, lowercase, allow_hyp_overlap, ReportDetail.SUMMARY, output, jobs, verbose,
        collars=collars,
        ref_pseudo_word_timing=ref_pseudo_word_timing,
        hyp_pseudo_word_timing=hyp_pseudo_word_timing,
    )


def _parse_metrics(text: str) -> List[Metric]:
    return [Metric(part.strip()) for part in text.split(",") if part.strip()]


@app.command()
def bench(
    speakers: Annotated[int, typer.Option("--speakers", help="Number of speakers")] = 4,
    duration: Annotated[float, typer.Option("--duration", help="Meeting length in seconds")] = 300.0,
    overlap: Annotated[float, typer.Option("--overlap", help="Probability an utterance overlaps the previous one")] = 0.2,
    words_per_second: Annotated[float, typer.Option("--words-per-second", help="Speaking rate; raise it with short pauses for long streams")] = 2.5,
    min_words: Annotated[int, typer.Option("--min-words", help="Shortest utterance in words")] = 3,
    max_words: Annotated[int, typer.Option("--max-words", help="Longest utterance in words")] = 12,
    min_pause: Annotated[float, typer.Option("--min-pause", help="Shortest pause after an utterance in seconds")] = 0.2,
    max_pause: Annotated[float, typer.Option("--max-pause", help="Longest pause after an utterance in seconds")] = 2.0,
    substitution_rate: Annotated[float, typer.Option("--sub-rate", help="Per-word substitution probability")] = 0.0,
    insertion_rate: Annotated[float, typer.Option("--ins-rate", help="Per-word insertion probability")] = 0.0,
    deletion_rate: Annotated[float, typer.Option("--del-rate", help="Per-word deletion probability")] = 0.0,
    confusion: Annotated[float, typer.Option("--confusion", help="Per-segment speaker confusion probability")] = 0.0,
    seed: Annotated[int, typer.Option("--seed", help="Random seed")] = 0,
    metrics: Annotated[str, typer.Option("--metrics", help="Comma-separated metrics to profile")] = "cpwer,tcpwer",
    repeats: Annotated[int, typer.Option("--repeats", help="Timed runs per metric")] = 10,
    collar: CollarOption = "5",
    emit_dir: Annotated[Optional[Path], typer.Option("--emit-dir", help="Write the generated SegLst files here")] = None,
    output: OutputOption = None,
    verbose: VerboseOption = False,
):
    """Generate a synthetic meeting and time the metrics on it."""
    setup_logging("DEBUG" if verbose else None)
    try:
        spec = MeetingSpec(
            speakers=speakers,
            duration=duration,
            overlap_probability=overlap,
            words_per_second=words_per_second,
            min_words=min_words,
            max_words=max_words,
            min_pause=min_pause,
            max_pause=max_pause,
            substitution_rate=substitution_rate,
            insertion_rate=insertion_rate,
            deletion_rate=deletion_rate,
            confusion_probability=confusion,
            seed=seed,
        )
        metric_names = _parse_metrics(metrics)
        collar_seconds = parse_collar(collar)
    except (ValidationError, ValueError) as e:
        _cli_error(str(e))
        raise typer.Exit(EXIT_INPUT)

    results, injected = ScoringService().bench(spec, metric_names, repeats, collar_seconds, emit_dir)

    table = Table(title=f"{speakers} speakers, {duration:g} s, {injected} injected edits")
    for column in ("metric", "median s", "min s", "max s", "errors", "words"):
        table.add_column(column, justify="right" if column != "metric" else "left")
    for result in results:
        table.add_row(
            result.metric.value,
            f"{result.median_seconds:.4f}",
            f"{result.min_seconds:.4f}",
            f"{result.max_seconds:.4f}",
            str(result.errors),
            str(result.length),
        )
    err_console.print(table)

    report = formats.write_profile(results, injected)
    if output is not None:
        output.write_bytes(report)
    else:
        typer.echo(report.decode("utf-8"), nl=False)


@app.command()
def serve(
    host: Annotated[str, typer.Option("--host", help="Bind address")] = settings.HOST,
    port: Annotated[int, typer.Option("--port", help="Port")] = settings.PORT,
):
    """Serve the scoring HTTP API."""
    import uvicorn

    uvicorn.run("meetscore.main:app", host=host, port=port, reload=settings.DEBUG)


def main() -> None:
    app()
