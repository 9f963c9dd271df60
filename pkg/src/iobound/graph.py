"""Computation graphs, the out-degree-normalized transform, and Laplacians.

A :class:`ComputationGraph` is a directed acyclic multigraph whose vertices
are operations (inputs and outputs included) and whose edges point from an
operand to the operation consuming it.  The I/O bounds are computed from the
spectrum of the Laplacian of an undirected reweighting of that graph in which
every directed edge ``(u, v)`` contributes weight ``1 / d_out(u)``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components as _cc

from .exceptions import (
    CycleDetected,
    DanglingEdge,
    DimensionMismatch,
    InvalidVertexId,
    KindMismatch,
    SelfLoop,
    ValidationError,
    ZeroDegreeVertex,
)

VERTEX_KINDS = ("input", "op", "output")
LAPLACIAN_VARIANTS = ("tilde", "unit", "normalized")


def _frozen(a):
    a = np.ascontiguousarray(a)
    a.setflags(write=False)
    return a


def _as_edge_array(edges) -> np.ndarray:
    arr = np.asarray(edges, dtype=np.int64)
    if arr.size == 0:
        return np.zeros((0, 2), dtype=np.int64)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ValidationError(f"edges must be a sequence of (src, dst) pairs, got shape {arr.shape}")
    return arr


class ComputationGraph:
    """Immutable directed acyclic multigraph of operations.

    Parameters
    ----------
    n : int
        Number of vertices. Vertex ids are the dense range ``0..n-1``.
    edges : array-like of shape (m, 2)
        Directed ``(src, dst)`` pairs. Repeated pairs are kept and count
        with multiplicity in every degree.
    kinds : sequence of str, optional
        One of ``"input"``, ``"op"``, ``"output"`` per vertex. Inferred from
        the degrees when omitted: in-degree 0 gives ``input``, out-degree 0
        gives ``output``, anything else ``op``.
    labels : sequence of str or None, optional
        Free-form metadata; never used by the numerics.

    Notes
    -----
    The constructor checks ids, self-loops and kind consistency. Acyclicity
    is checked by :func:`validate_dag`, which every generator and reader
    calls before returning.
    """

    __slots__ = ("_n", "_edges", "_kinds", "_labels", "_din", "_dout")

    def __init__(self, n: int, edges=(), kinds: Optional[Sequence[str]] = None,
                 labels: Optional[Sequence[Optional[str]]] = None):
        n = int(n)
        if n < 0:
            raise ValidationError("vertex count must be nonnegative")
        arr = _as_edge_array(edges)
        if len(arr):
            bad = (arr < 0) | (arr >= n)
            if bad.any():
                raise DanglingEdge(arr[np.flatnonzero(bad.any(axis=1))[0]], n)
            loops = arr[:, 0] == arr[:, 1]
            if loops.any():
                raise SelfLoop(int(arr[np.flatnonzero(loops)[0], 0]))
        din = np.bincount(arr[:, 1], minlength=n).astype(np.int64)
        dout = np.bincount(arr[:, 0], minlength=n).astype(np.int64)

        if kinds is None:
            kinds = tuple(
                "input" if din[v] == 0 else ("output" if dout[v] == 0 else "op")
                for v in range(n)
            )
        else:
            kinds = tuple(kinds)
            if len(kinds) != n:
                raise KindMismatch(f"expected {n} vertex kinds, got {len(kinds)}")
            for v, kind in enumerate(kinds):
                if kind not in VERTEX_KINDS:
                    raise KindMismatch(f"vertex {v}: unknown kind {kind!r}")
                if (kind == "input") != (din[v] == 0):
                    raise KindMismatch(f"vertex {v}: kind 'input' must coincide with in-degree 0")
                if kind == "output" and dout[v] != 0:
                    raise KindMismatch(f"vertex {v}: output vertex has out-edges")
        if labels is None:
            labels = (None,) * n
        else:
            labels = tuple(None if lab is None else str(lab) for lab in labels)
            if len(labels) != n:
                raise ValidationError(f"expected {n} labels, got {len(labels)}")

        self._n = n
        self._edges = _frozen(arr)
        self._kinds = kinds
        self._labels = labels
        self._din = _frozen(din)
        self._dout = _frozen(dout)

    @property
    def n(self) -> int:
        return self._n

    @property
    def edges(self) -> np.ndarray:
        return self._edges

    @property
    def src(self) -> np.ndarray:
        return self._edges[:, 0]

    @property
    def dst(self) -> np.ndarray:
        return self._edges[:, 1]

    @property
    def n_edges(self) -> int:
        return len(self._edges)

    @property
    def kinds(self) -> tuple:
        return self._kinds

    @property
    def labels(self) -> tuple:
        return self._labels

    @property
    def in_degree(self) -> np.ndarray:
        return self._din

    @property
    def out_degree(self) -> np.ndarray:
        return self._dout

    @property
    def vertices(self) -> list:
        out = []
        for v in range(self._n):
            rec = {"id": v, "kind": self._kinds[v]}
            if self._labels[v] is not None:
                rec["label"] = self._labels[v]
            out.append(rec)
        return out

    def __len__(self):
        return self._n

    def __eq__(self, other):
        if not isinstance(other, ComputationGraph):
            return NotImplemented
        return (
            self._n == other._n
            and self._kinds == other._kinds
            and self._labels == other._labels
            and np.array_equal(_sorted_edges(self._edges), _sorted_edges(other._edges))
        )

    __hash__ = None

    def __repr__(self):
        return f"ComputationGraph(n={self._n}, n_edges={self.n_edges})"


def _sorted_edges(edges: np.ndarray) -> np.ndarray:
    if len(edges) == 0:
        return edges
    order = np.lexsort((edges[:, 1], edges[:, 0]))
    return edges[order]


def validate_dag(g: ComputationGraph) -> list:
    """Return a topological order of ``g`` or raise :class:`CycleDetected`.

    Kahn's algorithm, releasing ready vertices in id order so the result is
    deterministic.
    """
    n = g.n
    indeg = g.in_degree.copy()
    order_idx = np.argsort(g.src, kind="stable")
    succ = g.dst[order_idx]
    starts = np.concatenate(([0], np.cumsum(g.out_degree)))

    ready = deque(int(v) for v in np.flatnonzero(indeg == 0))
    order = []
    while ready:
        u = ready.popleft()
        order.append(u)
        for v in succ[starts[u]:starts[u + 1]]:
            indeg[v] -= 1
            if indeg[v] == 0:
                ready.append(int(v))
    if len(order) < n:
        raise CycleDetected(_vertex_on_cycle(g, indeg))
    return order


def _vertex_on_cycle(g: ComputationGraph, residual_indeg: np.ndarray) -> int:
    # every leftover vertex has a leftover predecessor; walking back must repeat
    alive = residual_indeg > 0
    pred = {}
    for u, v in g.edges:
        if alive[u] and alive[v]:
            pred.setdefault(int(v), int(u))
    v = int(np.flatnonzero(alive)[0])
    seen = set()
    while v not in seen:
        seen.add(v)
        v = pred[v]
    return v


@dataclass(frozen=True)
class DegreeSummary:
    d_in: np.ndarray
    d_out: np.ndarray
    d: np.ndarray

    @property
    def min_in(self) -> int:
        return int(self.d_in.min()) if len(self.d_in) else 0

    @property
    def max_in(self) -> int:
        return int(self.d_in.max()) if len(self.d_in) else 0

    @property
    def min_out(self) -> int:
        return int(self.d_out.min()) if len(self.d_out) else 0

    @property
    def max_out(self) -> int:
        return int(self.d_out.max()) if len(self.d_out) else 0

    @property
    def min_total(self) -> int:
        return int(self.d.min()) if len(self.d) else 0

    @property
    def max_total(self) -> int:
        return int(self.d.max()) if len(self.d) else 0


def degrees(g: ComputationGraph) -> DegreeSummary:
    """Per-vertex in, out and total degree, multi-edges counted with multiplicity."""
    return DegreeSummary(d_in=g.in_degree, d_out=g.out_degree,
                         d=_frozen(g.in_degree + g.out_degree))


class WeightedGraph:
    """Undirected graph with nonnegative edge weights and vertex weights.

    At most one edge is stored per unordered pair; :meth:`from_contributions`
    sums parallel contributions. Vertex weights add to the Laplacian diagonal
    and are zero everywhere except in the augmented butterfly graphs.
    """

    __slots__ = ("_n", "_edges", "_weights", "_vertex_weights")

    def __init__(self, n: int, edges=(), weights=(), vertex_weights=None):
        n = int(n)
        arr = _as_edge_array(edges)
        w = np.asarray(weights, dtype=float).reshape(-1)
        if len(w) != len(arr):
            raise DimensionMismatch(f"{len(arr)} edges but {len(w)} weights")
        if len(arr):
            if ((arr < 0) | (arr >= n)).any():
                raise DanglingEdge(arr[np.flatnonzero(((arr < 0) | (arr >= n)).any(axis=1))[0]], n)
            if (arr[:, 0] == arr[:, 1]).any():
                raise SelfLoop(int(arr[np.flatnonzero(arr[:, 0] == arr[:, 1])[0], 0]))
            lo = np.minimum(arr[:, 0], arr[:, 1])
            hi = np.maximum(arr[:, 0], arr[:, 1])
            keys = lo * n + hi
            if len(np.unique(keys)) != len(keys):
                raise ValidationError("duplicate undirected pair; use from_contributions to accumulate")
            order = np.argsort(keys, kind="stable")
            arr = np.column_stack((lo, hi))[order]
            w = w[order]
        if (w < 0).any() or not np.isfinite(w).all():
            raise ValidationError("edge weights must be finite and nonnegative")
        if vertex_weights is None:
            vw = np.zeros(n)
        else:
            vw = np.asarray(vertex_weights, dtype=float).reshape(-1)
            if len(vw) != n:
                raise DimensionMismatch(f"expected {n} vertex weights, got {len(vw)}")
            if (vw < 0).any() or not np.isfinite(vw).all():
                raise ValidationError("vertex weights must be finite and nonnegative")
        self._n = n
        self._edges = _frozen(arr)
        self._weights = _frozen(w)
        self._vertex_weights = _frozen(vw)

    @classmethod
    def from_contributions(cls, n, u, v, w, vertex_weights=None) -> "WeightedGraph":
        """Build from possibly repeated ``(u, v, w)`` triples, summing repeats."""
        u = np.asarray(u, dtype=np.int64)
        v = np.asarray(v, dtype=np.int64)
        w = np.broadcast_to(np.asarray(w, dtype=float), u.shape)
        if len(u) == 0:
            return cls(n, (), (), vertex_weights)
        lo = np.minimum(u, v)
        hi = np.maximum(u, v)
        keys, inverse = np.unique(lo * n + hi, return_inverse=True)
        total = np.bincount(inverse.reshape(-1), weights=w, minlength=len(keys))
        pairs = np.column_stack((keys // n, keys % n))
        return cls(n, pairs, total, vertex_weights)

    @property
    def n(self) -> int:
        return self._n

    @property
    def edges(self) -> np.ndarray:
        return self._edges

    @property
    def weights(self) -> np.ndarray:
        return self._weights

    @property
    def vertex_weights(self) -> np.ndarray:
        return self._vertex_weights

    @property
    def n_edges(self) -> int:
        return len(self._edges)

    def weighted_degree(self) -> np.ndarray:
        deg = np.zeros(self._n)
        np.add.at(deg, self._edges[:, 0], self._weights)
        np.add.at(deg, self._edges[:, 1], self._weights)
        return deg

    def weight(self, u: int, v: int) -> float:
        lo, hi = min(u, v), max(u, v)
        hit = np.flatnonzero((self._edges[:, 0] == lo) & (self._edges[:, 1] == hi))
        return float(self._weights[hit[0]]) if len(hit) else 0.0

    def __repr__(self):
        return f"WeightedGraph(n={self._n}, n_edges={self.n_edges})"


def normalize_out_degree(g: ComputationGraph) -> WeightedGraph:
    """Undirected reweighting where edge ``(u, v)`` carries ``1 / d_out(u)``."""
    if g.n_edges == 0:
        return WeightedGraph(g.n)
    w = 1.0 / g.out_degree[g.src]
    return WeightedGraph.from_contributions(g.n, g.src, g.dst, w)


def undirected_support(g: ComputationGraph) -> WeightedGraph:
    """Unit-weight undirected graph on the distinct adjacent pairs of ``g``."""
    wg = normalize_out_degree(g)
    return WeightedGraph(wg.n, wg.edges, np.ones(wg.n_edges), wg.vertex_weights)


class SparseLaplacian:
    """Symmetric sparse Laplacian together with the variant it came from."""

    __slots__ = ("matrix", "variant")

    def __init__(self, matrix, variant: str):
        self.matrix = sp.csr_matrix(matrix)
        self.variant = variant

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    @property
    def shape(self):
        return self.matrix.shape

    def diagonal(self) -> np.ndarray:
        return self.matrix.diagonal()

    def max_diagonal(self) -> float:
        return float(self.matrix.diagonal().max()) if self.n else 0.0

    def norm_bound(self) -> float:
        """Infinity-norm of the matrix, an upper bound on its spectral norm."""
        if self.n == 0:
            return 0.0
        return float(abs(self.matrix).sum(axis=1).max())

    def toarray(self) -> np.ndarray:
        return self.matrix.toarray()

    def __matmul__(self, x):
        return self.matrix @ x

    def __repr__(self):
        return f"SparseLaplacian(n={self.n}, variant={self.variant!r}, nnz={self.matrix.nnz})"


def laplacian(wg: WeightedGraph, variant: str = "tilde") -> SparseLaplacian:
    """Assemble ``D - A`` (plus vertex weights on the diagonal).

    ``variant="tilde"`` keeps the stored weights, ``"unit"`` replaces every
    stored edge weight by 1 and ``"normalized"`` returns
    ``D^{-1/2} (D - A) D^{-1/2}`` with ``D`` the diagonal of the weighted
    Laplacian.
    """
    if variant not in LAPLACIAN_VARIANTS:
        raise ValueError(f"unknown Laplacian variant {variant!r}; expected one of {LAPLACIAN_VARIANTS}")
    n = wg.n
    u, v = wg.edges[:, 0], wg.edges[:, 1]
    w = np.ones(wg.n_edges) if variant == "unit" else np.asarray(wg.weights)
    diag = np.asarray(wg.vertex_weights, dtype=float).copy()
    np.add.at(diag, u, w)
    np.add.at(diag, v, w)
    rows = np.concatenate((u, v, np.arange(n)))
    cols = np.concatenate((v, u, np.arange(n)))
    vals = np.concatenate((-w, -w, diag))
    mat = sp.coo_matrix((vals, (rows, cols)), shape=(n, n)).tocsr()
    if variant == "normalized":
        zero = np.flatnonzero(diag <= 0)
        if len(zero):
            raise ZeroDegreeVertex(int(zero[0]))
        scale = sp.diags(1.0 / np.sqrt(diag))
        mat = (scale @ mat @ scale).tocsr()
    mat.eliminate_zeros()
    return SparseLaplacian(mat, variant)


def boundary_cost(g: ComputationGraph, subset: Iterable[int]) -> float:
    """Sum of ``1 / d_out(u)`` over directed edges with exactly one end in ``subset``."""
    mask = np.zeros(g.n, dtype=bool)
    for v in subset:
        v = int(v)
        if not 0 <= v < g.n:
            raise InvalidVertexId(f"vertex {v} outside 0..{g.n - 1}")
        mask[v] = True
    if g.n_edges == 0:
        return 0.0
    crossing = mask[g.src] != mask[g.dst]
    return float(np.sum(1.0 / g.out_degree[g.src[crossing]]))


def quadratic_form(lap: SparseLaplacian, x) -> float:
    """Evaluate ``x^T L x``."""
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or len(x) != lap.n:
        raise DimensionMismatch(f"vector of length {lap.n} expected, got shape {x.shape}")
    return float(x @ (lap.matrix @ x))


def indicator(n: int, subset: Iterable[int]) -> np.ndarray:
    """One-hot encoding of a vertex subset as a float vector."""
    x = np.zeros(n)
    for v in subset:
        x[int(v)] = 1.0
    return x


def connected_components(wg: WeightedGraph) -> int:
    """Number of connected components of the (unweighted) support."""
    if wg.n == 0:
        return 0
    adj = sp.coo_matrix((np.ones(wg.n_edges), (wg.edges[:, 0], wg.edges[:, 1])),
                        shape=(wg.n, wg.n))
    count, _ = _cc(adj, directed=False)
    return int(count)
