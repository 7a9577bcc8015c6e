"""Bounds and witnesses for q(G), the minimum number of distinct eigenvalues
over the real symmetric matrices whose off-diagonal pattern is a graph."""

from __future__ import annotations

from .bounds import BoundReport, bound, lower_bounds, table_consistency, upper_bounds
from .catalog import load_catalog, reference_value, verify_catalog
from .graphs import Graph, from_graph6, make_family, to_graph6
from .spectra import eigensystem, spectrum_summary
from .strongprops import Registry, WitnessRecord, has_smp, has_ssp

__all__ = [
    "BoundReport",
    "Graph",
    "Registry",
    "WitnessRecord",
    "bound",
    "eigensystem",
    "from_graph6",
    "has_smp",
    "has_ssp",
    "load_catalog",
    "lower_bounds",
    "make_family",
    "reference_value",
    "spectrum_summary",
    "table_consistency",
    "to_graph6",
    "upper_bounds",
    "verify_catalog",
]
__version__ = "0.1.0"
