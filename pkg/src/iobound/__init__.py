"""Spectral lower bounds on the I/O of computation graphs.

A computation graph is a DAG of operations. Given a fast memory of ``M``
words, any schedule that never recomputes a value must move at least
``max_k floor(n/k) * sum_{i<=k} lambda_i - 2kM`` words between fast and
slow memory, where ``lambda_i`` are the smallest eigenvalues of the
out-degree-normalized Laplacian. :class:`SpectralIOBound` computes this;
:mod:`iobound.closed_form` gives analytic versions for hypercubes and
butterflies.

>>> from iobound import SpectralIOBound, hypercube
>>> est = SpectralIOBound(method="loose").fit(hypercube(3))
>>> round(float(est.per_k(1)[0]), 4)
-1.3333
"""

from .bounds import (
    METHODS,
    BoundQuery,
    BoundReport,
    MemoryBelowInDegree,
    SpectralIOBound,
    bound,
    loose_spectral_bound,
    normalized_bound,
    parallel_bound,
    spectral_bound,
)
from .closed_form import (
    AnalyticSpectrum,
    PathSpec,
    augmented_butterfly,
    butterfly_bound,
    butterfly_path_census,
    butterfly_spectrum,
    hypercube_bound,
    hypercube_spectrum,
    k_path_multiset,
    path_spectrum,
)
from .eigen import Spectrum, smallest_eigenvalues
from .exceptions import (
    AlphaOutOfRange,
    BadString,
    ConvergenceFailure,
    CycleDetected,
    DanglingEdge,
    DimensionMismatch,
    InvalidVertexId,
    IOBoundError,
    KindMismatch,
    NotPowerOfTwo,
    ParseError,
    SelfLoop,
    SizeOverflow,
    TraceError,
    UnknownHandle,
    UseAfterBuild,
    ValidationError,
    ZeroDegreeVertex,
)
from .generators import (
    FAMILIES,
    GeneratorSpec,
    butterfly,
    erdos_renyi_dag,
    generate,
    hypercube,
    inner_product,
    naive_matmul,
    strassen,
)
from .graph import (
    ComputationGraph,
    DegreeSummary,
    SparseLaplacian,
    WeightedGraph,
    boundary_cost,
    connected_components,
    degrees,
    indicator,
    laplacian,
    normalize_out_degree,
    quadratic_form,
    undirected_support,
    validate_dag,
)
from .serialization import SweepRow, loads_graph, read_csv, read_graph, write_csv, write_graph
from .sweep import sweep
from .tracing import Handle, TraceBuilder

__version__ = "0.1.0"
__all__ = [name for name in dir() if not name.startswith("_")]
