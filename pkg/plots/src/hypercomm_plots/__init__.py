"""Figure rendering for hypercomm experiment outputs.

Consumes only the documented output files of the main package — the
per-trial results CSV and the aggregated summary JSON — and renders
them as PNG figures, each paired with a sidecar JSON carrying the
plotted numbers for machine checking.
"""

from .figures import plot_error_curve, plot_heatmap, plot_size_sweep
from .inputs import CSV_HEADER, SchemaError, read_summary, read_trials
from .marching import contour_segments

__version__ = "0.1.0"

__all__ = [
    "CSV_HEADER",
    "SchemaError",
    "contour_segments",
    "plot_error_curve",
    "plot_heatmap",
    "plot_size_sweep",
    "read_summary",
    "read_trials",
]
