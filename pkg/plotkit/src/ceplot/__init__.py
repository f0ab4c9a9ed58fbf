"""Figure rendering for the simulator's CSV outputs.

This package consumes only the documented CSV schema (see the simulator
README, "Output files"); it never imports the simulator itself. Three figure
kinds are supported: BER-vs-SNR curves on a log axis, EVM CCDFs on a log
axis, and per-antenna PAR histograms.
"""

from .render import PlotJob, ccdf_points, render
from .schema import SchemaError, load_rows

__version__ = "0.1.0"

__all__ = ["PlotJob", "SchemaError", "ccdf_points", "load_rows", "render",
           "__version__"]
