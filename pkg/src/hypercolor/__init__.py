"""Spectral coloring of random non-uniform bipartite hypergraphs."""

__version__ = "0.1.0"

from .coloring import (
    ColorOutcome,
    PartitionState,
    Status,
    color2,
    colorK,
    initial_partition,
    kmeans,
    refine_step,
)
from .eigen import k_smallest_eigenvectors, smallest_eigenpair, spectral_norm
from .estimator import SpectralHypergraphColoring
from .exceptions import ContractError, HypercolorError, ParseError, UnitClauseError
from .hypergraph import (
    Coloring,
    Hypergraph,
    read_coloring,
    read_hypergraph,
    verify_proper,
    write_coloring,
    write_hypergraph,
)
from .nae import check_nae, decode, parse_dimacs, solve_nae, to_hypergraph
from .planted import (
    PlantedParams,
    density_coefficient,
    expected_edge_count,
    probs_for_density,
    sample,
)
from .spectral import (
    WeightedAdjacency,
    build_matrix,
    compute_eta,
    deviation_diagnostic,
    expected_matrix,
    moments,
)

__all__ = [
    "Coloring",
    "ColorOutcome",
    "ContractError",
    "Hypergraph",
    "HypercolorError",
    "ParseError",
    "PartitionState",
    "PlantedParams",
    "SpectralHypergraphColoring",
    "Status",
    "UnitClauseError",
    "WeightedAdjacency",
    "build_matrix",
    "check_nae",
    "color2",
    "colorK",
    "compute_eta",
    "decode",
    "density_coefficient",
    "deviation_diagnostic",
    "expected_edge_count",
    "expected_matrix",
    "initial_partition",
    "k_smallest_eigenvectors",
    "kmeans",
    "moments",
    "parse_dimacs",
    "probs_for_density",
    "read_coloring",
    "read_hypergraph",
    "refine_step",
    "sample",
    "smallest_eigenpair",
    "solve_nae",
    "spectral_norm",
    "to_hypergraph",
    "verify_proper",
    "write_coloring",
    "write_hypergraph",
]
