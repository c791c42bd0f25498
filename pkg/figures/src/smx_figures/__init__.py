"""Figures from smx CLI CSV output."""

__version__ = "0.1.0"

from .errors import FigureError, MissingColumn, SchemaMismatch
from .render import FigureSpec, render

__all__ = ["FigureError", "FigureSpec", "MissingColumn", "SchemaMismatch", "render"]
