"""First passage percolation on lazily generated graphs, with sublinear Morse
geometry of a marked line and the escaping-geodesic experiments built on it."""

__version__ = "0.1.0"

from .errors import FppError, GuardError, OutputError, PathError, PreconditionError, SpecError
from .graphs import (
    Lattice,
    MarkedLine,
    RegularTree,
    StripLine,
    ExplicitGraph,
    ball,
    canonical_edge,
    graph_distance,
    parse_generator,
    parse_vertex,
)
from .metric import GeodesicResult, Path, omega_distance, quasigeodesic_check, slope, subpath
from .search import backend_name
from .sublinear import SublinearFunction, concavize, parse_sublinear
from .weights import Distribution, TableWeights, WeightField, omega_length, parse_distribution
