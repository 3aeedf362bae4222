"""Maximal laminar families of 3-cutsets in 3-connected plane graphs."""
from __future__ import annotations

from .decompose import DecompositionResult, maximal_laminar_family
from .planar import EmbeddedPlanarGraph, check_3_connectivity, from_rotation_lists, parse_graph

__all__ = [
    "DecompositionResult",
    "EmbeddedPlanarGraph",
    "check_3_connectivity",
    "from_rotation_lists",
    "maximal_laminar_family",
    "parse_graph",
]
__version__ = "0.1.0"
