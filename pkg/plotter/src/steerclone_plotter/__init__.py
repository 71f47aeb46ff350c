"""Figure renderer for steerclone sweep and region CSV files."""

from .render import CurveData, HeaderError, PlotJob, read_curve, render

__version__ = "0.1.0"

__all__ = ["CurveData", "HeaderError", "PlotJob", "read_curve", "render"]
