"""Figure rendering for whittle-ua experiment CSVs."""

from .figures import METRICS, FigureSpec, PlotError, read_rows, render, series

__all__ = ["METRICS", "FigureSpec", "PlotError", "read_rows", "render",
           "series"]

__version__ = "0.1.0"
