"""
FastAPI application for the regularity service.

Main application entry point. Can be run standalone or mounted into an
existing FastAPI app.
"""

import logging
import os
from contextlib import asynccontextmanager

from fastapi import FastAPI
from fastapi.middleware.cors import CORSMiddleware

from holder_regularity import __version__
from holder_regularity.config import LOG_FORMAT

from .routes_regularity import router as regularity_router


logging.basicConfig(
    level=os.getenv("HOLDER_LOG_LEVEL", "INFO").upper(),
    format=LOG_FORMAT,
)
logger = logging.getLogger(__name__)


@asynccontextmanager
async def lifespan(app: FastAPI):
    """
    Application lifespan manager.

    Handles startup and shutdown events.
    """
    logger.info("Starting Hölder Regularity API")
    yield
    logger.info("Shutting down Hölder Regularity API")


app = FastAPI(
    title="Hölder Regularity API",
    description="Certified regularity of symmetric subdivision schemes and pseudo-spline tables",
    version=__version__,
    lifespan=lifespan,
)

app.add_middleware(
    CORSMiddleware,
    allow_origins=["*"],
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)

app.include_router(regularity_router, prefix="/v1/regularity")


@app.get("/")
async def root():
    """Root endpoint."""
    return {
        "service": "Hölder Regularity API",
        "version": __version__,
        "endpoints": {
            "analyze": "/v1/regularity/analyze",
            "table": "/v1/regularity/table/{kind}",
            "compare": "/v1/regularity/compare",
            "health": "/v1/regularity/health",
            "docs": "/docs",
        },
    }


@app.get("/health")
async def health():
    """Global health check."""
    return {"status": "healthy"}


if __name__ == "__main__":
    import uvicorn

    uvicorn.run(app, host="0.0.0.0", port=8000)
