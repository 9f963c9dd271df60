"""Spectral lower bounds on the non-trivial I/O of a computation graph.

For a graph with ``n`` vertices, fast memory ``M`` and a number of segments
``k`` the bounds take the form

    bound(k) = c(k) * sum_{i<=k} lambda_i - 2 k M

where the eigenvalues and the coefficient ``c(k)`` depend on the method:

=============  ================================  ====================================
method         eigenvalues of                    c(k)
=============  ================================  ====================================
``tight``      out-degree-normalized Laplacian   floor(n / k)
``loose``      unit Laplacian of the support     floor(n / k) / max d_out
``parallel``   out-degree-normalized Laplacian   floor(n / (k p))
``normalized`` normalized Laplacian (flagged     floor(n / k) (1 + min d_in / max d_out)
               experimental)
=============  ================================  ====================================

Every ``k`` in ``2..min(h, n)`` gives a valid bound; the report keeps the
whole table and the maximum. Since I/O is nonnegative the effective bound
is ``max(0, raw)``.

:class:`SpectralIOBound` exposes the same computation as a scikit-learn
estimator: ``fit`` takes a graph and computes the (memory independent)
spectrum once, ``predict`` maps fast-memory sizes to effective bounds.
"""

from __future__ import annotations

import warnings
from dataclasses import asdict, dataclass, field
from typing import Optional

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .eigen import DEFAULT_TOL, smallest_eigenvalues
from .graph import degrees, laplacian, normalize_out_degree
from .validation import check_graph, check_int, check_memory

METHODS = ("tight", "loose", "parallel", "normalized")
DEFAULT_EIG_COUNT = 100
# |bound(k)| below this fraction of |c(k) sum lambda| + 2kM is cancellation noise
CANCEL_RTOL = 1e-12

_VARIANT = {"tight": "tilde", "parallel": "tilde", "loose": "unit", "normalized": "normalized"}


class MemoryBelowInDegree(UserWarning):
    """Fast memory cannot hold all operands of some vertex."""


@dataclass(frozen=True)
class BoundQuery:
    memory: int
    eig_count: int = DEFAULT_EIG_COUNT
    processors: int = 1
    method: str = "tight"

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}; expected one of {METHODS}")
        object.__setattr__(self, "memory", check_int(self.memory, "memory", 1))
        object.__setattr__(self, "eig_count", check_int(self.eig_count, "eig_count", 2))
        object.__setattr__(self, "processors", check_int(self.processors, "processors", 1))


@dataclass(frozen=True)
class BoundReport:
    """Outcome of one bound evaluation.

    ``per_k`` holds ``(k, bound(k))`` for every scanned ``k``; ``best_k`` is
    the smallest maximizer and ``raw_bound`` its value (possibly negative).
    """

    per_k: tuple
    best_k: int
    raw_bound: float
    effective_bound: float
    method: str
    query: BoundQuery
    n: int
    experimental: bool = False
    diagnostics: dict = field(default_factory=dict)

    def bound_at(self, k: int) -> float:
        for kk, value in self.per_k:
            if kk == k:
                return value
        raise KeyError(f"k={k} was not scanned")

    def to_dict(self) -> dict:
        return {
            "method": self.method,
            "n": self.n,
            "query": asdict(self.query),
            "best_k": self.best_k,
            "raw_bound": self.raw_bound,
            "effective_bound": self.effective_bound,
            "experimental": self.experimental,
            "per_k": [{"k": k, "bound": v} for k, v in self.per_k],
            "diagnostics": dict(self.diagnostics),
        }


class SpectralIOBound(BaseEstimator):
    """Spectral I/O lower bound as a fit/predict estimator.

    Parameters
    ----------
    method : {"tight", "loose", "parallel", "normalized"}, default="tight"
    eig_count : int, default=100
        Number of smallest eigenvalues ``h``; ``k`` ranges over
        ``2..min(h, n)``.
    processors : int, default=1
        Processor count ``p``; only used by ``method="parallel"``.
    tol : float, default=1e-8
        Relative residual target of the iterative eigensolver.
    eigen_method : {"auto", "dense", "iterative"}, default="auto"
    seed : int, default=0
        Seed of the iterative eigensolver's start vectors.

    Attributes
    ----------
    eigenvalues_ : ndarray
        Ascending eigenvalues of the Laplacian the method uses.
    k_ : ndarray
        Scanned segment counts.
    coefficients_ : ndarray
        Memory-independent part ``c(k) * sum_{i<=k} lambda_i`` per ``k``.
    n_vertices_, max_in_degree_, max_out_degree_, min_in_degree_ : int
    spectrum_ : Spectrum
        Solver diagnostics.
    """

    def __init__(self, method="tight", eig_count=DEFAULT_EIG_COUNT, processors=1,
                 tol=DEFAULT_TOL, eigen_method="auto", seed=0):
        self.method = method
        self.eig_count = eig_count
        self.processors = processors
        self.tol = tol
        self.eigen_method = eigen_method
        self.seed = seed

    def fit(self, graph, y=None):
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}; expected one of {METHODS}")
        h = check_int(self.eig_count, "eig_count", 2)
        p = check_int(self.processors, "processors", 1)
        g = check_graph(graph)
        if g.n < 2:
            raise ValueError("a bound needs at least 2 vertices")
        deg = degrees(g)
        lap = laplacian(normalize_out_degree(g), _VARIANT[self.method])
        spectrum = smallest_eigenvalues(lap, h, tol=self.tol, method=self.eigen_method,
                                        seed=self.seed)
        lam = spectrum.eigenvalues
        n = g.n
        k = np.arange(2, min(h, n) + 1)
        partial = np.cumsum(lam)[k - 1]
        if self.method == "parallel":
            coeff = (n // (k * p)) * partial
        else:
            coeff = (n // k) * partial
        if self.method == "loose":
            coeff = coeff / deg.max_out if deg.max_out else np.zeros_like(coeff)
        elif self.method == "normalized":
            coeff = coeff * (1.0 + deg.min_in / deg.max_out)

        self.n_vertices_ = n
        self.n_edges_ = g.n_edges
        self.max_in_degree_ = deg.max_in
        self.min_in_degree_ = deg.min_in
        self.max_out_degree_ = deg.max_out
        self.spectrum_ = spectrum
        self.eigenvalues_ = lam
        self.k_ = k
        self.coefficients_ = coeff
        return self

    def per_k(self, memory) -> np.ndarray:
        """Bound for every scanned ``k`` at one memory size."""
        check_is_fitted(self)
        (m,) = check_memory(memory)
        return _table(self.coefficients_, self.k_, np.array([m]))[0]

    def predict(self, memory) -> np.ndarray:
        """Effective (clamped) bound for each memory size."""
        check_is_fitted(self)
        ms = check_memory(memory)
        return np.maximum(_table(self.coefficients_, self.k_, ms).max(axis=1), 0.0)

    def report(self, memory) -> BoundReport:
        check_is_fitted(self)
        values = self.per_k(memory)
        (m,) = check_memory(memory)
        best = int(np.argmax(values))
        raw = float(values[best])
        diagnostics = {
            "laplacian": _VARIANT[self.method],
            "eigensolver": self.spectrum_.method,
            "eig_count_used": int(len(self.eigenvalues_)),
            "residual": self.spectrum_.residual,
            "eigen_seconds": self.spectrum_.seconds,
            "max_in_degree": self.max_in_degree_,
            "max_out_degree": self.max_out_degree_,
        }
        if m < self.max_in_degree_:
            diagnostics["warning"] = (
                f"memory {m} is below the maximum in-degree {self.max_in_degree_}; "
                "some operations cannot hold all operands in fast memory"
            )
        query = BoundQuery(memory=m, eig_count=self.eig_count, processors=self.processors,
                           method=self.method)
        return BoundReport(
            per_k=tuple((int(k), float(v)) for k, v in zip(self.k_, values)),
            best_k=int(self.k_[best]),
            raw_bound=raw,
            effective_bound=max(0.0, raw),
            method=self.method,
            query=query,
            n=self.n_vertices_,
            experimental=self.method == "normalized",
            diagnostics=diagnostics,
        )


def _table(coeff, k, memories):
    """``coeff - 2kM`` per (M, k), with cancellation residue snapped to 0.

    Exact zeros such as ``4 * (0 + 2) / 2 - 4`` otherwise come out as
    ``+-1e-16`` depending on the LAPACK build, which breaks golden output.
    """
    io_term = 2.0 * k[None, :] * memories[:, None].astype(float)
    table = coeff[None, :] - io_term
    noise = CANCEL_RTOL * (np.abs(coeff)[None, :] + io_term)
    table[np.abs(table) <= noise] = 0.0
    return table


def bound(graph, query: BoundQuery, *, tol: float = DEFAULT_TOL, eigen_method: str = "auto",
          warn: bool = False) -> BoundReport:
    """Evaluate ``query`` on ``graph`` with the method the query names."""
    est = SpectralIOBound(method=query.method, eig_count=query.eig_count,
                          processors=query.processors, tol=tol, eigen_method=eigen_method)
    report = est.fit(graph).report(query.memory)
    if warn and "warning" in report.diagnostics:
        warnings.warn(report.diagnostics["warning"], MemoryBelowInDegree, stacklevel=2)
    return report


def _with_method(query: Optional[BoundQuery], method: str, memory, **kw) -> BoundQuery:
    if query is None:
        return BoundQuery(memory=memory, method=method, **kw)
    if query.method != method:
        query = BoundQuery(memory=query.memory, eig_count=query.eig_count,
                           processors=query.processors, method=method)
    return query


def spectral_bound(graph, query: Optional[BoundQuery] = None, *, memory=None, **kw) -> BoundReport:
    """``floor(n/k) * sum_{i<=k} lambda_i(L~) - 2kM`` maximized over ``k``."""
    return bound(graph, _with_method(query, "tight", memory, **kw))


def loose_spectral_bound(graph, query: Optional[BoundQuery] = None, *, memory=None, **kw) -> BoundReport:
    """Same as :func:`spectral_bound` with the unit Laplacian scaled by ``1 / max d_out``."""
    return bound(graph, _with_method(query, "loose", memory, **kw))


def parallel_bound(graph, query: Optional[BoundQuery] = None, *, memory=None, **kw) -> BoundReport:
    """Per-processor bound for ``p`` processors: at least one processor incurs it."""
    return bound(graph, _with_method(query, "parallel", memory, **kw))


def normalized_bound(graph, query: Optional[BoundQuery] = None, *, memory=None, **kw) -> BoundReport:
    """Experimental variant on ``D^{-1/2} L~ D^{-1/2}``.

    Uses ``min d_in`` over all vertices, so any graph with an input vertex
    gets a factor of exactly 1.
    """
    return bound(graph, _with_method(query, "normalized", memory, **kw))
