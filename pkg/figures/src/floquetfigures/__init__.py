"""Rendering of floquetwaves experiment outputs into publication figures.

This package is a pure consumer of the CSV/JSON files written by the
``floquetwaves`` CLI; it re-implements no numerics.  Every figure kind
maps one CSV schema onto one deterministic image.
"""

from .io import SchemaError, load_manifest, read_csv
from .render import (
    FIGURE_KINDS, FigureSpec, build_figure, render, render_all,
)

__all__ = [
    "SchemaError", "load_manifest", "read_csv",
    "FIGURE_KINDS", "FigureSpec", "build_figure", "render", "render_all",
]
