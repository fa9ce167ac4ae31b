"""Exact tools for triangle-Ramsey and chromatic peeling experiments on small graphs."""

__version__ = "0.1.0"

from .graph import Graph, parse_graph6, emit_graph6, triangle_count  # noqa: E402
from .solvers import chromatic_number, clique_number, independence_number, max_clique  # noqa: E402
from .arrowing import arrows, ramsey_number  # noqa: E402

__all__ = ["Graph", "parse_graph6", "emit_graph6", "triangle_count", "chromatic_number", "clique_number",
           "independence_number", "max_clique", "arrows", "ramsey_number", "__version__"]
