"""
Main entry point for the meetscore HTTP service
"""

import uvicorn

from meetscore.core.config import settings

if __name__ == "__main__":
    uvicorn.run(
        "meetscore.main:app",
        host=settings.HOST,
        port=settings.PORT,
        reload=settings.DEBUG,
        log_level=settings.LOG_LEVEL.lower()
    )
