"""Non-backtracking matrices, their companion K, and executable checks of their spectral theory."""

from nbspec.graph import DirectedEdgeIndex, Graph, GraphError, from_edge_list, structure_truth, two_core
from nbspec.linalg import Spectrum, eigenvalues
from nbspec.operators import NBOperators, build_decomposition, build_operators
from nbspec.report import VerificationReport

__all__ = [
    "DirectedEdgeIndex",
    "Graph",
    "GraphError",
    "NBOperators",
    "Spectrum",
    "VerificationReport",
    "build_decomposition",
    "build_operators",
    "eigenvalues",
    "from_edge_list",
    "structure_truth",
    "two_core",
]
