"""Figure scripts over the solver's CSV/JSON outputs.

This package is deliberately independent of the solver: it reads the file
contracts, draws the nine standard figure layouts, and evaluates overlay
curves (barrier, sinc limit, Burgers profile, focusing bound) from closed
forms only.  Deleting it leaves every solver test runnable.
"""

from .figio import MissingColumnError, load_columns, load_report
from .figures import ALL_FIGURES, FigureSpec, render, render_all
from .overlays import barrier, burgers, focusing_bound, sinc_limit

__all__ = [
    "ALL_FIGURES",
    "FigureSpec",
    "MissingColumnError",
    "barrier",
    "burgers",
    "focusing_bound",
    "load_columns",
    "load_report",
    "render",
    "render_all",
    "sinc_limit",
]
