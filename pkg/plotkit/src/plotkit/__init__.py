"""plotkit: response-hierarchy figures from response_curve.csv files."""

from .figure import (
    FigureSpec,
    ResponseTable,
    load_response_csv,
    render_response_figure,
)

__all__ = ["FigureSpec", "ResponseTable", "load_response_csv", "render_response_figure"]
