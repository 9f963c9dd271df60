"""Built-in computation-graph families.

Every generator returns a validated :class:`~iobound.graph.ComputationGraph`
whose vertex kinds are inferred from degrees.

Conventions that the literature leaves open:

* ``naive_matmul`` uses one n-ary sum vertex per output entry, so the
  maximum in-degree is ``n``. For ``n == 1`` the single product is the
  output (a one-term sum is not materialized).
* ``strassen`` builds every pre-addition as a binary vertex and each output
  quadrant entry as a single vertex over its 2 or 4 recursive products, so
  the maximum in-degree is 4.
* ``erdos_renyi_dag`` draws one uniform per vertex pair from numpy's PCG64
  generator seeded with ``seed``, pairs enumerated row-major over the strict
  upper triangle, and orients every sampled edge from the lower to the higher
  index.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .exceptions import NotPowerOfTwo, SizeOverflow
from .graph import ComputationGraph, validate_dag

FAMILIES = ("hypercube", "butterfly", "naive_matmul", "strassen", "erdos_renyi", "inner_product")

MAX_DIMENSION = 22
MAX_VERTICES = 1 << 26


def _check_dimension(l, cap):
    if l < 1:
        raise ValueError(f"dimension must be >= 1, got {l}")
    if l > cap:
        raise SizeOverflow(f"dimension {l} exceeds cap {cap}")


def _check_vertices(count):
    if count > MAX_VERTICES:
        raise SizeOverflow(f"{count} vertices exceeds cap {MAX_VERTICES}")


def _finish(n, src, dst, labels=None) -> ComputationGraph:
    edges = np.column_stack((np.asarray(src, dtype=np.int64), np.asarray(dst, dtype=np.int64)))
    g = ComputationGraph(n, edges, labels=labels)
    validate_dag(g)
    return g


def hypercube(l: int, max_dimension: int = MAX_DIMENSION) -> ComputationGraph:
    """Boolean hypercube DAG of the Bellman-Held-Karp recursion.

    Vertex ``k`` is the l-bit string of visited cities; ``k1 -> k2`` whenever
    ``k2`` sets exactly one zero bit of ``k1``.
    """
    _check_dimension(l, max_dimension)
    n = 1 << l
    ids = np.arange(n, dtype=np.int64)
    src, dst = [], []
    for b in range(l):
        free = ids[(ids >> b) & 1 == 0]
        src.append(free)
        dst.append(free | (1 << b))
    return _finish(n, np.concatenate(src), np.concatenate(dst))


def butterfly(l: int, max_dimension: int = MAX_DIMENSION) -> ComputationGraph:
    """FFT butterfly with ``l + 1`` columns of ``2**l`` vertices.

    Vertex ``(c, r)`` has id ``c * 2**l + r``. Vertex ``(c + 1, r)`` consumes
    ``(c, r)`` and ``(c, r ^ 2**c)``, so the last stage joins the two halves
    on the top row bit.
    """
    _check_dimension(l, max_dimension)
    rows = 1 << l
    _check_vertices((l + 1) * rows)
    r = np.arange(rows, dtype=np.int64)
    src, dst = [], []
    for c in range(l):
        target = (c + 1) * rows + r
        src += [c * rows + r, c * rows + (r ^ (1 << c))]
        dst += [target, target]
    return _finish((l + 1) * rows, np.concatenate(src), np.concatenate(dst))


def naive_matmul(n: int) -> ComputationGraph:
    """``C = A B`` for ``n x n`` matrices, each ``C_ij`` one n-ary sum of products."""
    if n < 1:
        raise ValueError(f"side length must be >= 1, got {n}")
    n_sums = n * n if n > 1 else 0
    _check_vertices(2 * n * n + n ** 3 + n_sums)
    i, j, k = np.meshgrid(np.arange(n), np.arange(n), np.arange(n), indexing="ij")
    i, j, k = i.ravel(), j.ravel(), k.ravel()
    a_id = i * n + k
    b_id = n * n + k * n + j
    prod = 2 * n * n + np.arange(n ** 3)
    src = [a_id, b_id]
    dst = [prod, prod]
    if n > 1:
        src.append(prod)
        dst.append(2 * n * n + n ** 3 + i * n + j)
    labels = ([f"A{a}{b}" for a in range(n) for b in range(n)]
              + [f"B{a}{b}" for a in range(n) for b in range(n)])
    labels += [None] * (2 * n * n + n ** 3 + n_sums - len(labels))
    return _finish(2 * n * n + n ** 3 + n_sums, np.concatenate(src), np.concatenate(dst), labels)


class _DagAccumulator:
    def __init__(self):
        self.n = 0
        self.src = []
        self.dst = []

    def vertex(self, *operands):
        v = self.n
        self.n += 1
        for u in operands:
            self.src.append(u)
            self.dst.append(v)
        return v


def _strassen(acc, A, B):
    # A, B: square nested lists of vertex ids
    m = len(A)
    if m == 1:
        return [[acc.vertex(A[0][0], B[0][0])]]
    h = m // 2

    def quad(X, qi, qj):
        return [row[qj * h:(qj + 1) * h] for row in X[qi * h:(qi + 1) * h]]

    def add(X, Y):
        return [[acc.vertex(X[r][c], Y[r][c]) for c in range(h)] for r in range(h)]

    A11, A12, A21, A22 = quad(A, 0, 0), quad(A, 0, 1), quad(A, 1, 0), quad(A, 1, 1)
    B11, B12, B21, B22 = quad(B, 0, 0), quad(B, 0, 1), quad(B, 1, 0), quad(B, 1, 1)

    M1 = _strassen(acc, add(A11, A22), add(B11, B22))
    M2 = _strassen(acc, add(A21, A22), B11)
    M3 = _strassen(acc, A11, add(B12, B22))
    M4 = _strassen(acc, A22, add(B21, B11))
    M5 = _strassen(acc, add(A11, A12), B22)
    M6 = _strassen(acc, add(A21, A11), add(B11, B12))
    M7 = _strassen(acc, add(A12, A22), add(B21, B22))

    def combine(*Ms):
        return [[acc.vertex(*(M[r][c] for M in Ms)) for c in range(h)] for r in range(h)]

    C11 = combine(M1, M4, M5, M7)
    C12 = combine(M3, M5)
    C21 = combine(M2, M4)
    C22 = combine(M1, M2, M3, M6)
    top = [C11[r] + C12[r] for r in range(h)]
    bottom = [C21[r] + C22[r] for r in range(h)]
    return top + bottom


def strassen_vertex_count(n: int) -> int:
    """Vertex count of :func:`strassen` by its recurrence (no graph built)."""
    def inner(m):
        if m == 1:
            return 1
        h2 = (m // 2) ** 2
        return 10 * h2 + 7 * inner(m // 2) + 4 * h2
    return 2 * n * n + inner(n)


def strassen(n: int) -> ComputationGraph:
    """Recursive Strassen DAG for ``n x n`` matrices (``n`` a power of two)."""
    if n < 1 or n & (n - 1):
        raise NotPowerOfTwo(f"strassen needs a power-of-two side length, got {n}")
    _check_vertices(strassen_vertex_count(n))
    acc = _DagAccumulator()
    A = [[acc.vertex() for _ in range(n)] for _ in range(n)]
    B = [[acc.vertex() for _ in range(n)] for _ in range(n)]
    _strassen(acc, A, B)
    return _finish(acc.n, acc.src, acc.dst)


def erdos_renyi_dag(n: int, p: float, seed: Optional[int] = 0) -> ComputationGraph:
    """G(n, p) sample oriented low index to high index."""
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    _check_vertices(n)
    rng = np.random.Generator(np.random.PCG64(seed))
    iu, ju = np.triu_indices(n, 1)
    keep = rng.random(len(iu)) < p
    return _finish(n, iu[keep], ju[keep])


def inner_product(m: int) -> ComputationGraph:
    """Dot product of two length-``m`` vectors folded left by binary sums."""
    if m < 1:
        raise ValueError(f"vector length must be >= 1, got {m}")
    _check_vertices(4 * m)
    acc = _DagAccumulator()
    a = [acc.vertex() for _ in range(m)]
    b = [acc.vertex() for _ in range(m)]
    prods = [acc.vertex(a[i], b[i]) for i in range(m)]
    total = prods[0]
    for p in prods[1:]:
        total = acc.vertex(total, p)
    labels = [f"a{i}" for i in range(m)] + [f"b{i}" for i in range(m)]
    labels += [None] * (acc.n - len(labels))
    return _finish(acc.n, acc.src, acc.dst, labels)


@dataclass(frozen=True)
class GeneratorSpec:
    family: str
    size: int
    p: Optional[float] = None
    seed: Optional[int] = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}; expected one of {FAMILIES}")
        if self.size < 1:
            raise ValueError("size must be >= 1")
        if self.family == "strassen" and self.size & (self.size - 1):
            raise NotPowerOfTwo(f"strassen needs a power-of-two side length, got {self.size}")
        if self.family == "erdos_renyi":
            if self.p is None or not 0.0 <= self.p <= 1.0:
                raise ValueError("erdos_renyi needs p in [0, 1]")


def generate(spec: GeneratorSpec) -> ComputationGraph:
    if spec.family == "erdos_renyi":
        return erdos_renyi_dag(spec.size, spec.p, 0 if spec.seed is None else spec.seed)
    return {
        "hypercube": hypercube,
        "butterfly": butterfly,
        "naive_matmul": naive_matmul,
        "strassen": strassen,
        "inner_product": inner_product,
    }[spec.family](spec.size)
