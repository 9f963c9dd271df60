"""Bound sweeps over graph sizes, memory sizes, methods and processor counts."""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Optional, Sequence

from .bounds import SpectralIOBound
from .generators import GeneratorSpec, generate
from .serialization import SweepRow


@dataclass(frozen=True)
class SweepCell:
    family: str
    size: int
    method: str
    processors: int
    memories: tuple
    eig_count: int = 100
    p: Optional[float] = None
    seed: Optional[int] = None


def parse_range(text: str) -> list:
    """``"3:6"`` -> [3, 4, 5, 6]; ``"2,4,8"`` -> [2, 4, 8]; ``"5"`` -> [5]."""
    out = []
    for part in str(text).split(","):
        part = part.strip()
        if not part:
            continue
        if ":" in part:
            lo, hi = part.split(":", 1)
            lo, hi = int(lo), int(hi)
            if hi < lo:
                raise ValueError(f"empty range {part!r}")
            out.extend(range(lo, hi + 1))
        else:
            out.append(int(part))
    if not out:
        raise ValueError(f"no values in {text!r}")
    return out


def run_cell(cell: SweepCell, timing: bool = False) -> list:
    """Fit once for the graph and evaluate every memory size."""
    g = generate(GeneratorSpec(cell.family, cell.size, cell.p, cell.seed))
    t0 = time.perf_counter()
    est = SpectralIOBound(method=cell.method, eig_count=cell.eig_count,
                          processors=cell.processors).fit(g)
    fit_ms = (time.perf_counter() - t0) * 1e3
    rows = []
    for m in cell.memories:
        t1 = time.perf_counter()
        rep = est.report(m)
        ms = fit_ms + (time.perf_counter() - t1) * 1e3
        rows.append(SweepRow(cell.family, cell.size, g.n, m, cell.processors, cell.method,
                             rep.best_k, rep.raw_bound, rep.effective_bound,
                             len(est.eigenvalues_), ms if timing else 0.0))
    return rows


def _run_cell_star(args):
    return run_cell(*args)


def sweep(family: str, sizes: Sequence[int], memories: Sequence[int],
          methods: Sequence[str] = ("tight",), processors: Sequence[int] = (1,),
          eig_count: int = 100, p: Optional[float] = None, seed: Optional[int] = None,
          jobs: int = 1, timing: bool = False) -> list:
    """One :class:`SweepRow` per (size, method, processors, memory) cell.

    Rows come back in that nesting order whatever ``jobs`` is. ``wall_ms``
    is only measured when ``timing`` is set, otherwise it is written as 0
    so repeated sweeps produce byte-identical CSV.
    """
    cells = [SweepCell(family, s, meth, pr, tuple(memories), eig_count, p, seed)
             for s in sizes for meth in methods for pr in processors]
    if jobs > 1 and len(cells) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            chunks = list(pool.map(_run_cell_star, [(c, timing) for c in cells]))
    else:
        chunks = [run_cell(c, timing) for c in cells]
    return [row for chunk in chunks for row in chunk]
