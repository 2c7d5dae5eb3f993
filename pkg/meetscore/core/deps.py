"""
Dependencies for the FastAPI application
"""

from ..services.scoring_service import ScoringService
from .config import settings


def get_scoring_service() -> ScoringService:
    """
    Scoring service for one request, using every job slot the settings allow
    """
    return ScoringService(jobs=settings.MAX_JOBS)
