"""Named invariant suites run by ``iobound verify``.

Each suite returns a list of :class:`Check`; a suite passes when every
check does.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from . import closed_form as cf
from .bounds import SpectralIOBound
from .generators import butterfly, erdos_renyi_dag, hypercube, inner_product, naive_matmul, strassen
from .graph import (
    boundary_cost,
    connected_components,
    indicator,
    laplacian,
    normalize_out_degree,
    quadratic_form,
    undirected_support,
)


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str = ""


def corpus() -> dict:
    """Graphs the property suites sweep over."""
    graphs = {}
    for m in (2, 3, 4):
        graphs[f"inner_product({m})"] = inner_product(m)
    for l in (2, 3, 4, 5):
        graphs[f"hypercube({l})"] = hypercube(l)
    for l in (1, 2, 3, 4):
        graphs[f"butterfly({l})"] = butterfly(l)
    for n in (2, 3):
        graphs[f"naive_matmul({n})"] = naive_matmul(n)
    graphs["strassen(2)"] = strassen(2)
    graphs["erdos_renyi(64,0.1,7)"] = erdos_renyi_dag(64, 0.1, seed=7)
    return graphs


def laplacian_properties() -> list:
    checks = []
    for name, g in corpus().items():
        wg = normalize_out_degree(g)
        for variant in ("tilde", "unit"):
            L = laplacian(wg, variant)
            A = L.toarray()
            off = A - np.diag(np.diag(A))
            lam = np.linalg.eigvalsh(A)
            scale = max(L.max_diagonal(), 1.0)
            ok = (np.array_equal(A, A.T) and (off <= 0).all()
                  and np.abs(A.sum(axis=1)).max() <= 1e-12 * scale
                  and lam.min() >= -1e-9 * scale
                  and int((lam < 1e-8).sum()) == connected_components(wg))
            checks.append(Check(f"{name}/{variant}", bool(ok),
                                f"min eig {lam.min():.3g}, zeros {(lam < 1e-8).sum()}"))
        trace = float(laplacian(wg, "tilde").diagonal().sum())
        non_sinks = int((g.out_degree > 0).sum())
        checks.append(Check(f"{name}/trace", abs(trace - 2 * non_sinks) <= 1e-9 * max(trace, 1),
                            f"trace {trace:.9g} vs 2*non-sinks {2 * non_sinks}"))
    return checks


def cut_identity(samples: int = 200, seed: int = 0) -> list:
    rng = np.random.default_rng(seed)
    checks = []
    for name, g in corpus().items():
        L = laplacian(normalize_out_degree(g), "tilde")
        worst = 0.0
        for _ in range(samples):
            S = np.flatnonzero(rng.random(g.n) < rng.random())
            q = quadratic_form(L, indicator(g.n, S))
            c = boundary_cost(g, S)
            worst = max(worst, abs(q - c) / max(abs(c), 1.0))
        checks.append(Check(name, worst <= 1e-9, f"worst relative gap {worst:.3g}"))
    return checks


def closed_form_spectra() -> list:
    checks = []
    for l in range(1, 9):
        dense = np.linalg.eigvalsh(laplacian(undirected_support(hypercube(l)), "unit").toarray())
        gap = np.abs(cf.hypercube_spectrum(l).expand() - dense).max()
        checks.append(Check(f"hypercube({l})", gap <= 1e-8, f"max gap {gap:.3g}"))
    for l in range(1, 6):
        spec = cf.butterfly_spectrum(l)
        dense = np.linalg.eigvalsh(laplacian(undirected_support(butterfly(l)), "unit").toarray())
        gap = np.abs(spec.expand() - dense).max()
        ok = gap <= 1e-8 and spec.total == (l + 1) * 2 ** l
        checks.append(Check(f"butterfly({l})", ok, f"max gap {gap:.3g}, total {spec.total}"))
        census = cf.butterfly_path_census(l)
        assembled = cf.spectrum_from_census(census).expand()
        ok = (census == cf.census_formula(l)
              and sum(s.length * c for s, c in census.items()) == (l + 1) * 2 ** l
              and np.abs(assembled - spec.expand()).max() <= 1e-8)
        checks.append(Check(f"butterfly({l})/paths", bool(ok)))
    return checks


def decomposition_lemma(max_l: int = 3) -> list:
    def eig(l, q):
        return np.linalg.eigvalsh(laplacian(cf.augmented_butterfly(l, q), "tilde").toarray())

    checks = []
    for l in range(1, max_l + 1):
        for m in range(l):
            for bits in itertools.product("01", repeat=m):
                q = "".join(bits)
                split = np.sort(np.concatenate((eig(l, "1" + q), eig(l, "0" + q))))
                gap = np.abs(eig(l, q) - split).max()
                checks.append(Check(f"B_{l}({q!r})", gap <= 1e-8, f"max gap {gap:.3g}"))
    return checks


def bound_dominance(memories=(1, 2, 4, 8, 16), processors=(1, 2, 3, 4, 8)) -> list:
    checks = []
    for name, g in corpus().items():
        tight = SpectralIOBound(method="tight").fit(g)
        loose = SpectralIOBound(method="loose").fit(g)
        dom = min(float((tight.per_k(m) - loose.per_k(m)).min()) for m in memories)
        checks.append(Check(f"{name}/tight>=loose", dom >= -1e-6, f"min gap {dom:.3g}"))
        raws = [tight.report(m).raw_bound for m in memories]
        checks.append(Check(f"{name}/monotone-M", all(a >= b for a, b in zip(raws, raws[1:]))))
        par = [SpectralIOBound(method="parallel", processors=p).fit(g) for p in processors]
        same = all(np.array_equal(par[0].per_k(m), tight.per_k(m)) for m in memories)
        checks.append(Check(f"{name}/parallel(p=1)==tight", same))
        mono = all(
            all(a.report(m).raw_bound >= b.report(m).raw_bound for a, b in zip(par, par[1:]))
            for m in memories)
        checks.append(Check(f"{name}/monotone-p", mono))
    return checks


SUITES = {
    "laplacian-properties": laplacian_properties,
    "cut-identity": cut_identity,
    "closed-form-spectra": closed_form_spectra,
    "decomposition-lemma": decomposition_lemma,
    "bound-dominance": bound_dominance,
}


def run_suite(name: str) -> list:
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}; expected one of {sorted(SUITES)} or 'all'")
    return SUITES[name]()
