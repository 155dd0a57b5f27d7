"""HTTP layer: pydantic schemas and the FastAPI application factory."""

from .app import create_app
from .models import REPORT_SCHEMA, RunReport

__all__ = ["create_app", "REPORT_SCHEMA", "RunReport"]
