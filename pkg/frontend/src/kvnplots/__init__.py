"""Plotting companion for kvnspectral output files (PNG rendering only)."""

from .readers import SchemaError, load_density_csv, load_expansion_json, load_report_json
from .render import KINDS, PlotJob, RenderSummary, render

__version__ = "0.1.0"
