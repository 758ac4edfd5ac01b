"""Weights of Kontsevich graphs by Monte Carlo integration and by exact series."""

__version__ = "0.1.0"

from . import eulersums, geometry, graphs, pipeline, series, specfun  # noqa: E402,F401
