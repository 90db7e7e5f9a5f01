"""
API package for the regularity service.
"""

from .main import app

__all__ = ["app"]
