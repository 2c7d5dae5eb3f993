"""
API routes for scoring transcripts
"""

import asyncio
import functools

from fastapi import APIRouter, Depends, File, Form, HTTPException, Response, UploadFile, status

from ..core.deps import get_scoring_service
from ..core.errors import InputError, ScoringError
from ..models.schemas import (
    DEFAULT_HYP_STRATEGY,
    DEFAULT_REF_STRATEGY,
    ErrorResponse,
    Metric,
    PseudoWordStrategy,
    RecognizerStyle,
    ReportDetail,
    ScoringRequest,
    TranscriptRole,
    parse_collar,
)
from ..services import formats
from ..services.scoring_service import ScoringService, recommend_metric

router = APIRouter()

_ERROR_RESPONSES = {
    400: {"model": ErrorResponse},
    422: {"model": ErrorResponse},
    500: {"model": ErrorResponse},
}


async def _score(service: ScoringService, metric: Metric, ref, hyp, detail: ReportDetail, **options) -> Response:
    # Scoring is CPU bound; run it off the event loop
    loop = asyncio.get_running_loop()
    try:
        report = await loop.run_in_executor(
            None,
            functools.partial(service.score, metric, ref, hyp, detail=detail, **options),
        )
    except InputError as e:
        raise HTTPException(status_code=status.HTTP_422_UNPROCESSABLE_ENTITY, detail=e.diagnostic())
    except ScoringError as e:
        raise HTTPException(status_code=status.HTTP_400_BAD_REQUEST, detail=e.diagnostic())
    except Exception as e:
        raise HTTPException(
            status_code=status.HTTP_500_INTERNAL_SERVER_ERROR,
            detail=f"Internal server error: {str(e)}"
        )
    return Response(content=formats.write_report(report, detail), media_type="application/json")


@router.post(
    "/{metric}",
    responses=_ERROR_RESPONSES,
    summary="Score Transcripts",
    description="Score SegLst reference and hypothesis records with the chosen WER"
)
async def score_records(
    metric: Metric,
    request: ScoringRequest,
    service: ScoringService = Depends(get_scoring_service),
):
    """
    Score transcripts sent as JSON records
    """
    try:
        ref = formats.transcript_from_records(request.reference, TranscriptRole.REFERENCE)
        hyp = formats.transcript_from_records(request.hypothesis, TranscriptRole.HYPOTHESIS)
    except InputError as e:
        raise HTTPException(status_code=status.HTTP_422_UNPROCESSABLE_ENTITY, detail=e.diagnostic())

    return await _score(
        service, metric, ref, hyp, request.detail,
        collar=parse_collar(request.collar),
        ref_strategy=request.ref_pseudo_word_timing,
        hyp_strategy=request.hyp_pseudo_word_timing,
        allow_hyp_overlap=request.allow_hyp_overlap,
        lowercase=request.lowercase,
    )


@router.post(
    "/{metric}/files",
    responses=_ERROR_RESPONSES,
    summary="Score Transcript Files",
    description="Score uploaded STM or SegLst files with the chosen WER"
)
async def score_files(
    metric: Metric,
    reference: UploadFile = File(..., description="Reference transcript (.stm or SegLst)"),
    hypothesis: UploadFile = File(..., description="Hypothesis transcript (SegLst)"),
    collar: str = Form("5"),
    ref_pseudo_word_timing: PseudoWordStrategy = Form(DEFAULT_REF_STRATEGY),
    hyp_pseudo_word_timing: PseudoWordStrategy = Form(DEFAULT_HYP_STRATEGY),
    detail: ReportDetail = Form(ReportDetail.PER_SESSION),
    lowercase: bool = Form(False),
    allow_hyp_overlap: bool = Form(False),
    service: ScoringService = Depends(get_scoring_service),
):
    """
    Score uploaded transcript files
    """
    try:
        collar_seconds = parse_collar(collar)
    except ValueError as e:
        raise HTTPException(status_code=status.HTTP_422_UNPROCESSABLE_ENTITY, detail=str(e))

    transcripts = []
    for upload, role in ((reference, TranscriptRole.REFERENCE), (hypothesis, TranscriptRole.HYPOTHESIS)):
        name = upload.filename or role.value
        try:
            transcripts.append(formats.read_transcript(await upload.read(), name, role))
        except InputError as e:
            raise HTTPException(
                status_code=status.HTTP_422_UNPROCESSABLE_ENTITY,
                detail=e.with_path(name).diagnostic()
            )

    ref, hyp = transcripts
    return await _score(
        service, metric, ref, hyp, detail,
        collar=collar_seconds,
        ref_strategy=ref_pseudo_word_timing,
        hyp_strategy=hyp_pseudo_word_timing,
        allow_hyp_overlap=allow_hyp_overlap,
        lowercase=lowercase,
    )


@router.get(
    "/recommend/{style}",
    summary="Recommend Metric",
    description="Which WER to report for a recognizer output style"
)
async def recommend(style: RecognizerStyle, timed: bool = False):
    """
    Recommended metric for a recognizer style
    """
    return {"style": style.value, "timed": timed, "metric": recommend_metric(style, timed).value}
