"""Analytic Laplacian spectra and bounds for hypercube and butterfly graphs.

Butterfly spectra come from a decomposition: the Laplacian of the
``l``-level butterfly splits, one join at a time, into the Laplacians of
*augmented* butterflies ``B_l(q)`` indexed by binary strings ``q``. When
``|q| = l`` the augmented graph is a single weighted path ``K(q)``, which
falls apart into path pieces of three kinds (edge weight 2 throughout):

* ``P``  : no end carries extra vertex weight,
* ``P'`` : one end carries vertex weight 2,
* ``P''``: both ends carry vertex weight 2.

All three have cosine closed forms, collected in :func:`path_spectrum`.
The machinery here (``augmented_butterfly``, ``k_path_multiset``) exists so
the closed forms can be checked against dense numerics.

The first butterfly family uses the denominator ``l + 1``; that is what the
4-cycle ``B_1`` (spectrum ``{0, 2, 2, 4}``) requires.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .exceptions import AlphaOutOfRange, BadString
from .graph import WeightedGraph

MERGE_TOL = 1e-9
PATH_VARIANTS = ("P", "P'", "P''")


@dataclass(frozen=True)
class AnalyticSpectrum:
    """Multiset of eigenvalues as sorted ``(value, multiplicity)`` entries."""

    entries: tuple

    @classmethod
    def from_pairs(cls, pairs: Iterable, tol: float = MERGE_TOL) -> "AnalyticSpectrum":
        merged = []
        for value, mult in sorted((float(v), int(m)) for v, m in pairs):
            if mult < 1:
                raise ValueError("multiplicities must be positive")
            if merged and abs(value - merged[-1][0]) <= tol:
                merged[-1][1] += mult
            else:
                merged.append([value, mult])
        return cls(tuple((v, m) for v, m in merged))

    @property
    def total(self) -> int:
        return sum(m for _, m in self.entries)

    def expand(self) -> np.ndarray:
        """Sorted eigenvalue list with multiplicities spelled out."""
        if not self.entries:
            return np.zeros(0)
        return np.repeat([v for v, _ in self.entries], [m for _, m in self.entries])

    def __add__(self, other: "AnalyticSpectrum") -> "AnalyticSpectrum":
        return AnalyticSpectrum.from_pairs(self.entries + other.entries)

    def __len__(self):
        return len(self.entries)


def union(spectra: Iterable[AnalyticSpectrum]) -> AnalyticSpectrum:
    """Multiset union."""
    pairs = []
    for s in spectra:
        pairs.extend(s.entries)
    return AnalyticSpectrum.from_pairs(pairs)


def _cos_eig(num, den):
    return 4.0 - 4.0 * math.cos(math.pi * num / den)


# -- hypercube --------------------------------------------------------------

def hypercube_spectrum(l: int) -> AnalyticSpectrum:
    """Eigenvalue ``2i`` with multiplicity ``C(l, i)``, ``i = 0..l``."""
    if l < 1:
        raise ValueError("l must be >= 1")
    return AnalyticSpectrum.from_pairs((2 * i, math.comb(l, i)) for i in range(l + 1))


def hypercube_bound(l: int, memory: float, alpha: int = 1) -> float:
    """Closed-form loose bound on the ``l``-cube using the levels ``i <= alpha``.

    ``sum_{i<=alpha} C(l,i) * (i * 2^{l+1} / (l * K) - 2M)`` with
    ``K = sum_{i<=alpha} C(l,i)``; the floor of ``n / k`` is dropped.
    """
    if not 1 <= alpha < l:
        raise AlphaOutOfRange(f"alpha must satisfy 1 <= alpha < l={l}, got {alpha}")
    if alpha == 1:
        return 2.0 ** (l + 1) / (l + 1) - 2.0 * memory * (l + 1)
    K = sum(math.comb(l, i) for i in range(alpha + 1))
    return sum(math.comb(l, i) * (i * 2.0 ** (l + 1) / (l * K) - 2.0 * memory)
               for i in range(alpha + 1))


def best_hypercube_alpha(l: int, memory: float) -> tuple:
    """``(alpha, value)`` maximizing :func:`hypercube_bound`; smallest alpha on ties."""
    values = [(hypercube_bound(l, memory, a), -a) for a in range(1, l)]
    value, neg_alpha = max(values)
    return -neg_alpha, value


def hypercube_threshold(l: int) -> float:
    """Memory size ``2^l / (l+1)^2`` below which the alpha=1 bound is positive."""
    return 2.0 ** l / (l + 1) ** 2


# -- butterfly --------------------------------------------------------------

def butterfly_spectrum(l: int) -> AnalyticSpectrum:
    """Laplacian spectrum of the ``l``-level butterfly, with multiplicities."""
    if l < 1:
        raise ValueError("l must be >= 1")
    pairs = [(_cos_eig(j, l + 1), 1) for j in range(l + 1)]
    for i in range(1, l + 1):
        pairs += [(_cos_eig(2 * j + 1, 2 * i + 1), 2 ** (l - i + 1)) for j in range(i)]
    for i in range(1, l):
        pairs += [(_cos_eig(j, i + 1), (l - i) * 2 ** (l - i - 1)) for j in range(1, i + 1)]
    return AnalyticSpectrum.from_pairs(pairs)


def butterfly_bound(l: int, memory: float, alpha: int) -> float:
    """``(l+1) 2^l (1 - cos(pi / (2(l-alpha)+1))) - 2^{alpha+2} M``.

    Keeps ``2^alpha`` copies of the smallest second-family eigenvalue among
    the ``k = 2^{alpha+1}`` smallest and divides by the maximum out-degree 2.
    """
    if not 0 <= alpha < l:
        raise AlphaOutOfRange(f"alpha must satisfy 0 <= alpha < l={l}, got {alpha}")
    angle = math.pi / (2 * (l - alpha) + 1)
    return (l + 1) * 2.0 ** l * (1.0 - math.cos(angle)) - 2.0 ** (alpha + 2) * memory


def butterfly_alpha_for_memory(l: int, memory: int) -> int:
    """``alpha = l - log2(M)`` for power-of-two ``M``."""
    memory = int(memory)
    if memory < 1 or memory & (memory - 1):
        raise ValueError(f"memory must be a power of two, got {memory}")
    alpha = l - (memory.bit_length() - 1)
    if not 0 <= alpha < l:
        raise AlphaOutOfRange(f"alpha = l - log2(M) = {alpha} is outside 0..{l - 1}")
    return alpha


def best_butterfly_alpha(l: int, memory: float) -> tuple:
    values = [(butterfly_bound(l, memory, a), -a) for a in range(l)]
    value, neg_alpha = max(values)
    return -neg_alpha, value


# -- weighted paths ---------------------------------------------------------

@dataclass(frozen=True, order=True)
class PathSpec:
    """Weighted path of ``length`` vertices, edge weight 2.

    ``variant`` is ``"P"``, ``"P'"`` (vertex weight 2 on one end) or
    ``"P''"`` (vertex weight 2 on both ends; a single vertex then gets 4).
    """

    length: int
    variant: str = "P"

    def __post_init__(self):
        if self.length < 1:
            raise ValueError("path length must be >= 1")
        if self.variant not in PATH_VARIANTS:
            raise ValueError(f"unknown path variant {self.variant!r}")

    def graph(self) -> WeightedGraph:
        i = self.length
        vw = np.zeros(i)
        if self.variant in ("P'", "P''"):
            vw[-1] += 2.0
        if self.variant == "P''":
            vw[0] += 2.0
        edges = [(a, a + 1) for a in range(i - 1)]
        return WeightedGraph(i, edges, [2.0] * len(edges), vw)


def path_spectrum(spec: PathSpec) -> AnalyticSpectrum:
    i = spec.length
    if spec.variant == "P":
        values = [_cos_eig(j, i) for j in range(i)]
    elif spec.variant == "P'":
        values = [_cos_eig(2 * j + 1, 2 * i + 1) for j in range(i)]
    else:
        values = [_cos_eig(j, i + 1) for j in range(1, i + 1)]
    return AnalyticSpectrum.from_pairs((v, 1) for v in values)


# -- augmented butterflies --------------------------------------------------

def _check_string(q: str, l: int, exact: bool = False) -> str:
    q = str(q)
    if any(c not in "01" for c in q):
        raise BadString(f"augmentation string must be binary, got {q!r}")
    if len(q) > l or (exact and len(q) != l):
        want = f"exactly {l}" if exact else f"at most {l}"
        raise BadString(f"augmentation string {q!r} must have {want} characters")
    return q


def augmented_butterfly(l: int, q: str = "") -> WeightedGraph:
    """Vertex/edge-weighted butterfly ``B_l(q)``.

    With ``m = len(q)`` the graph has ``l + 1`` columns of ``2^{l-m}``
    vertices; columns ``0..l-m`` carry the plain butterfly ``B_{l-m}``
    (stage ``c`` pairs rows differing in bit ``c``). Join ``t`` of the last
    ``m`` joins becomes weight-2 straight edges if ``q[t] == "1"`` and adds
    2 to both endpoint columns' vertex weights otherwise. Vertex ``(c, r)``
    has id ``c * 2^{l-m} + r``, matching :func:`iobound.generators.butterfly`
    when ``q`` is empty.
    """
    if l < 1:
        raise ValueError("l must be >= 1")
    q = _check_string(q, l)
    m = len(q)
    rows = 1 << (l - m)
    n = (l + 1) * rows
    r = np.arange(rows)
    u, v, w = [], [], []
    for c in range(l - m):
        u += [c * rows + r, c * rows + (r ^ (1 << c))]
        v += [(c + 1) * rows + r, (c + 1) * rows + r]
        w += [np.ones(rows), np.ones(rows)]
    vw = np.zeros(n)
    for t, bit in enumerate(q):
        c = l - m + t
        if bit == "1":
            u.append(c * rows + r)
            v.append((c + 1) * rows + r)
            w.append(np.full(rows, 2.0))
        else:
            vw[c * rows + r] += 2.0
            vw[(c + 1) * rows + r] += 2.0
    if not u:
        return WeightedGraph(n, (), (), vw)
    return WeightedGraph.from_contributions(n, np.concatenate(u), np.concatenate(v),
                                            np.concatenate(w), vw)


def k_path_multiset(q: str, l: int) -> Counter:
    """Path pieces of ``K(q)``, the single-row graph ``B_l(q)`` with ``|q| = l``.

    Edge ``t`` (between vertices ``t`` and ``t + 1``) survives when
    ``q[t] == "1"``; a removed edge leaves vertex weight 2 on both of its
    endpoints. Returns a Counter of :class:`PathSpec`.
    """
    q = _check_string(q, l, exact=True)
    pieces = Counter()
    start = 0
    for end in range(l + 1):
        if end == l or q[end] == "0":
            weighted_ends = (start > 0) + (end < l)
            pieces[PathSpec(end - start + 1, PATH_VARIANTS[weighted_ends])] += 1
            start = end + 1
    return pieces


def butterfly_path_census(l: int) -> Counter:
    """Aggregate :func:`k_path_multiset` over all ``2^l`` strings."""
    total = Counter()
    for bits in itertools.product("01", repeat=l):
        total.update(k_path_multiset("".join(bits), l))
    return total


def census_formula(l: int) -> Counter:
    """Closed-form path census: one ``P_{l+1}``, ``2^{l-i+1}`` of ``P'_i`` and
    ``(l-i) 2^{l-i-1}`` of ``P''_i``."""
    out = Counter({PathSpec(l + 1, "P"): 1})
    for i in range(1, l + 1):
        out[PathSpec(i, "P'")] = 2 ** (l - i + 1)
    for i in range(1, l):
        out[PathSpec(i, "P''")] = (l - i) * 2 ** (l - i - 1)
    return out


def spectrum_from_census(census: Counter) -> AnalyticSpectrum:
    pairs = []
    for spec, count in census.items():
        pairs.extend((v, m * count) for v, m in path_spectrum(spec).entries)
    return AnalyticSpectrum.from_pairs(pairs)
