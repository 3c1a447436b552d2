"""Array-aware matching of equation/variable bipartite graphs.

Array equations and variables are kept compressed: index sets are unions of
hyperrectangles (:class:`MCIS`) and incidence matrices are unions of
constant-offset diagonals (:class:`MCIM`), so matching cost does not grow
with array sizes.
"""

from .graph import ArrayGraph, GraphError, Violation, flatten, omega, validate
from .matching import MatchingError, augmenting_paths, match, simplify
from .mcim import MCIM, solve_local_matching_problem
from .mcis import MCIS, MultidimensionalRange
from .scalar import ScalarGraph

__all__ = [
    "ArrayGraph", "GraphError", "MCIM", "MCIS", "MatchingError", "MultidimensionalRange",
    "ScalarGraph", "Violation", "augmenting_paths", "flatten", "match", "omega", "simplify",
    "solve_local_matching_problem", "validate",
]
__version__ = "0.1.0"
