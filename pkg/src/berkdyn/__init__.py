"""Dynamics of quadratic rational maps over the field of Puiseux series."""

from .errors import (
    AxiomViolation,
    BerkdynError,
    DepthExceeded,
    DivisionByZero,
    InexactRoot,
    NoConjugacy,
    NoMatch,
    NotIntegral,
    NotLiftable,
    ParseError,
    PrecisionExhausted,
    SearchBoundExceeded,
)
from .puiseux import EXACT, FLOAT, INF, Field, GaussQ, Series, format_series, parse_series
from .newton import NewtonPolygon, PolyL, newton_polygon, roots

__version__ = "0.1.0"
