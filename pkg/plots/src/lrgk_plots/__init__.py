"""Figure rendering for benchmark CSV reports."""

from .render import (
    KINDS,
    REQUIRED_COLUMNS,
    EmptyInput,
    FigureSpec,
    PlotsError,
    SchemaMismatch,
    build_figure,
    load_table,
    render,
)

__version__ = "0.1.0"
