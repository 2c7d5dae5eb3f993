"""
Core configuration for the meetscore toolkit
"""

from typing import List
from pydantic_settings import BaseSettings


class Settings(BaseSettings):
    """Toolkit settings"""

    # Server settings
    HOST: str = "0.0.0.0"
    PORT: int = 8000
    DEBUG: bool = False

    # API settings
    API_V1_STR: str = "/api/v1"
    PROJECT_NAME: str = "meetscore"
    PROJECT_DESCRIPTION: str = "Word error rates for multi-speaker meeting transcription"
    VERSION: str = "1.0.0"

    # CORS settings
    CORS_ORIGINS: List[str] = ["http://localhost:3000", "http://localhost:8000"]

    # Logging
    LOG_LEVEL: str = "INFO"

    # Scoring limits
    MAX_DP_STATES: int = 100_000_000  # ORC/MIMO state-space guard; the int64 table takes 8 bytes per state (~800 MB at the default)
    MAX_JOBS: int = 8

    class Config:
        env_file = ".env"
        case_sensitive = True


settings = Settings()
