"""Record a computation graph by tracing operations on symbolic handles.

Example
-------
>>> tb = TraceBuilder()
>>> x, y = tb.input("x"), tb.input("y")
>>> z = x * y + x
>>> g = tb.build()
>>> g.n, g.n_edges
(4, 4)
"""

from __future__ import annotations

from typing import Iterable, Optional

from .exceptions import UnknownHandle, UseAfterBuild
from .graph import ComputationGraph, validate_dag


class Handle:
    """Opaque reference to a traced value.

    Supports ``+ - * / @`` and unary minus between handles of the same
    builder; each operator records one vertex.
    """

    __slots__ = ("_builder", "_generation", "index")

    def __init__(self, builder, generation, index):
        self._builder = builder
        self._generation = generation
        self.index = index

    def _binary(self, label, other, swap=False):
        if not isinstance(other, Handle):
            return NotImplemented
        operands = [other, self] if swap else [self, other]
        return self._builder.apply(label, operands)

    def __add__(self, other):
        return self._binary("add", other)

    def __sub__(self, other):
        return self._binary("sub", other)

    def __mul__(self, other):
        return self._binary("mul", other)

    def __truediv__(self, other):
        return self._binary("div", other)

    def __matmul__(self, other):
        return self._binary("matmul", other)

    def __neg__(self):
        return self._builder.apply("neg", [self])

    def __repr__(self):
        return f"Handle({self.index})"


class TraceBuilder:
    """Accumulates vertices and edges; :meth:`build` emits the DAG.

    Vertex ids follow creation order, so every operand precedes its consumer.
    A builder is single-use: after :meth:`build` all of its handles are stale
    (``UnknownHandle``) and further calls raise ``UseAfterBuild``.
    """

    def __init__(self):
        self._labels = []
        self._src = []
        self._dst = []
        self._built = False
        self._generation = object()

    def _new_vertex(self, label):
        self._labels.append(label)
        return Handle(self, self._generation, len(self._labels) - 1)

    def _check_open(self):
        if self._built:
            raise UseAfterBuild("trace already built")

    def input(self, label: Optional[str] = None) -> Handle:
        self._check_open()
        return self._new_vertex(label)

    def apply(self, label: Optional[str], operands: Iterable[Handle]) -> Handle:
        operands = list(operands)
        for h in operands:
            if not isinstance(h, Handle) or h._builder is not self or h._generation is not self._generation:
                raise UnknownHandle(f"{h!r} does not belong to this trace")
            if self._built:
                raise UnknownHandle(f"{h!r} is stale: its trace was already built")
        self._check_open()
        out = self._new_vertex(label)
        for h in operands:
            self._src.append(h.index)
            self._dst.append(out.index)
        return out

    def __len__(self):
        return len(self._labels)

    def build(self) -> ComputationGraph:
        self._check_open()
        self._built = True
        g = ComputationGraph(len(self._labels), list(zip(self._src, self._dst)),
                             labels=self._labels)
        validate_dag(g)
        return g

