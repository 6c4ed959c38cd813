"""Triangle-tiling toolkit: exact tiling solvers, barrier certification,
weighted fractional matchings, regularity machinery and extremal
constructions at desk scale."""

from .graphs import (
    Graph,
    IndependenceBound,
    common_neighbors,
    enumerate_triangles,
    independence_number,
    min_degree,
    parse_edge_list,
    format_edge_list,
)

__all__ = [
    "Graph",
    "IndependenceBound",
    "common_neighbors",
    "enumerate_triangles",
    "independence_number",
    "min_degree",
    "parse_edge_list",
    "format_edge_list",
]

__version__ = "0.1.0"
