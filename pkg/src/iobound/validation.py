"""Input validation helpers shared by the estimator and the functional API."""

from __future__ import annotations

import numbers

import numpy as np

from .graph import ComputationGraph, validate_dag


def check_graph(graph) -> ComputationGraph:
    """Coerce ``graph`` to a validated :class:`ComputationGraph`.

    Accepts a ``ComputationGraph``, an ``(n, edges)`` pair, or an
    ``(m, 2)`` integer edge array (``n`` taken as ``max id + 1``).
    Raises ``CycleDetected`` for cyclic input.
    """
    if isinstance(graph, ComputationGraph):
        g = graph
    elif isinstance(graph, tuple) and len(graph) == 2 and isinstance(graph[0], numbers.Integral):
        g = ComputationGraph(graph[0], graph[1])
    else:
        edges = np.asarray(graph)
        if edges.ndim != 2 or edges.shape[1] != 2 or not np.issubdtype(edges.dtype, np.integer):
            raise TypeError(
                "expected a ComputationGraph, an (n, edges) pair or an (m, 2) integer edge array, "
                f"got {type(graph).__name__}"
            )
        n = int(edges.max()) + 1 if edges.size else 0
        g = ComputationGraph(n, edges)
    validate_dag(g)
    return g


def check_int(value, name: str, minimum: int = 1) -> int:
    """Return ``value`` as int if it is an integer >= ``minimum``."""
    if isinstance(value, bool) or not isinstance(value, numbers.Integral):
        if isinstance(value, numbers.Real) and float(value).is_integer():
            value = int(value)
        else:
            raise TypeError(f"{name} must be an integer, got {value!r}")
    value = int(value)
    if value < minimum:
        raise ValueError(f"{name} must be >= {minimum}, got {value}")
    return value


def check_memory(memory) -> np.ndarray:
    """Validate one or many fast-memory sizes; returns a 1-d int64 array."""
    arr = np.atleast_1d(np.asarray(memory))
    if arr.ndim != 1:
        raise ValueError("memory must be a scalar or a 1-d sequence")
    return np.array([check_int(m, "memory", 1) for m in arr.tolist()], dtype=np.int64)
