"""Graph files, bound reports and sweep CSV output.

Two graph formats are read:

* JSON graph file::

    {"edges": [[0, 4], ...], "n": 7, "version": "1",
     "vertices": [{"id": 0, "kind": "input", "label": "a0"}, ...]}

* whitespace edge list: a header line ``n <count>`` followed by one
  ``src dst`` pair per line; ``#`` starts a comment.

Writers emit sorted keys and lexicographically sorted edges so that
``write(read(write(g)))`` is byte-identical to ``write(g)``. Floats in
reports and CSV are printed with 9 significant digits.
"""

from __future__ import annotations

import csv
import io
import json
import os
from dataclasses import dataclass
from typing import Iterable, Optional, TextIO, Union

import numpy as np

from .exceptions import ParseError, ValidationError
from .graph import VERTEX_KINDS, ComputationGraph, validate_dag

FORMAT_VERSION = "1"
CSV_HEADER = ("family", "param", "n", "M", "p", "method", "best_k",
              "raw_bound", "effective_bound", "h", "wall_ms")

PathLike = Union[str, os.PathLike]


def fmt(x) -> str:
    """Format a number with 9 significant digits (integers verbatim)."""
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return str(int(x))
    return format(float(x), ".9g")


def round9(x: float) -> float:
    return float(format(float(x), ".9g"))


# -- graphs -----------------------------------------------------------------

def dumps_graph(g: ComputationGraph) -> str:
    edges = sorted((int(u), int(v)) for u, v in g.edges)
    lines = ["{", '"edges": [']
    lines += [f"  [{u}, {v}]" + ("," if i < len(edges) - 1 else "") for i, (u, v) in enumerate(edges)]
    lines.append("],")
    lines.append(f'"n": {g.n},')
    lines.append(f'"version": {json.dumps(FORMAT_VERSION)},')
    lines.append('"vertices": [')
    verts = g.vertices
    lines += ["  " + json.dumps(rec, sort_keys=True) + ("," if i < len(verts) - 1 else "")
              for i, rec in enumerate(verts)]
    lines.append("]")
    lines.append("}")
    return "\n".join(lines) + "\n"


def dumps_edgelist(g: ComputationGraph) -> str:
    edges = sorted((int(u), int(v)) for u, v in g.edges)
    return "".join([f"n {g.n}\n"] + [f"{u} {v}\n" for u, v in edges])


def write_graph(g: ComputationGraph, path: Union[PathLike, TextIO], fmt: str = "json") -> None:
    text = dumps_graph(g) if fmt == "json" else dumps_edgelist(g)
    if hasattr(path, "write"):
        path.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _parse_json_graph(text: str) -> ComputationGraph:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"malformed JSON: {exc.msg}", exc.lineno, exc.colno) from None
    if not isinstance(doc, dict):
        raise ParseError("graph file must be a JSON object")
    missing = [k for k in ("version", "n", "vertices", "edges") if k not in doc]
    if missing:
        raise ParseError(f"graph file lacks field(s) {', '.join(missing)}")
    if str(doc["version"]) != FORMAT_VERSION:
        raise ParseError(f"unsupported graph file version {doc['version']!r}")
    n = doc["n"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 0:
        raise ParseError(f"'n' must be a nonnegative integer, got {n!r}")
    verts = doc["vertices"]
    if not isinstance(verts, list) or len(verts) != n:
        raise ParseError(f"'vertices' must list exactly n={n} records")
    kinds = [None] * n
    labels = [None] * n
    for rec in verts:
        if not isinstance(rec, dict) or "id" not in rec or "kind" not in rec:
            raise ParseError(f"vertex record {rec!r} needs 'id' and 'kind'")
        vid = rec["id"]
        if not isinstance(vid, int) or isinstance(vid, bool) or not 0 <= vid < n:
            raise ValidationError(f"vertex id {vid!r} outside 0..{n - 1}")
        if kinds[vid] is not None:
            raise ValidationError(f"duplicate vertex id {vid}")
        if rec["kind"] not in VERTEX_KINDS:
            raise ValidationError(f"vertex {vid}: unknown kind {rec['kind']!r}")
        kinds[vid] = rec["kind"]
        labels[vid] = rec.get("label")
    edges = doc["edges"]
    if not isinstance(edges, list):
        raise ParseError("'edges' must be a list")
    for e in edges:
        if (not isinstance(e, list) or len(e) != 2
                or not all(isinstance(x, int) and not isinstance(x, bool) for x in e)):
            raise ParseError(f"edge {e!r} must be a pair of integers")
    g = ComputationGraph(n, edges if edges else (), kinds=kinds, labels=labels)
    validate_dag(g)
    return g


def _parse_edgelist(text: str) -> ComputationGraph:
    n = None
    edges = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        fields = line.split()
        if not fields:
            continue
        if n is None:
            if len(fields) != 2 or fields[0] != "n":
                raise ParseError("expected header 'n <count>'", lineno, 1)
            try:
                n = int(fields[1])
            except ValueError:
                raise ParseError(f"bad vertex count {fields[1]!r}", lineno, raw.index(fields[1]) + 1) from None
            if n < 0:
                raise ParseError("vertex count must be nonnegative", lineno, raw.index(fields[1]) + 1)
            continue
        if len(fields) != 2:
            raise ParseError(f"expected 'src dst', got {len(fields)} field(s)", lineno, 1)
        pair = []
        for f in fields:
            try:
                pair.append(int(f))
            except ValueError:
                raise ParseError(f"bad vertex id {f!r}", lineno, raw.index(f) + 1) from None
        edges.append(pair)
    if n is None:
        raise ParseError("empty edge list: missing 'n <count>' header", 1, 1)
    g = ComputationGraph(n, edges if edges else ())
    validate_dag(g)
    return g


def loads_graph(text: str) -> ComputationGraph:
    """Parse either graph format, detected from the first non-blank character."""
    if text.startswith("\ufeff"):
        text = text[1:]
    if text.lstrip().startswith("{"):
        return _parse_json_graph(text)
    return _parse_edgelist(text)


def read_graph(path: Union[PathLike, TextIO]) -> ComputationGraph:
    if hasattr(path, "read"):
        return loads_graph(path.read())
    with open(path, encoding="utf-8") as fh:
        return loads_graph(fh.read())


# -- reports ----------------------------------------------------------------

def _round_floats(obj):
    if isinstance(obj, float):
        return round9(obj)
    if isinstance(obj, dict):
        return {k: _round_floats(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round_floats(v) for v in obj]
    return obj


def report_to_json(report) -> str:
    return json.dumps(_round_floats(report.to_dict()), sort_keys=True, indent=2) + "\n"


def format_report(report) -> str:
    q = report.query
    out = io.StringIO()
    out.write(f"method: {report.method}" + (" (experimental)" if report.experimental else "") + "\n")
    out.write(f"n: {report.n}  M: {q.memory}  p: {q.processors}  h: {q.eig_count}\n")
    out.write(f"best k: {report.best_k}\n")
    out.write(f"raw bound: {fmt(report.raw_bound)}\n")
    out.write(f"effective bound: {fmt(report.effective_bound)}\n")
    if "warning" in report.diagnostics:
        out.write(f"warning: {report.diagnostics['warning']}\n")
    out.write("k\tbound\n")
    for k, v in report.per_k:
        out.write(f"{k}\t{fmt(v)}\n")
    return out.getvalue()


# -- sweep CSV --------------------------------------------------------------

@dataclass(frozen=True)
class SweepRow:
    family: str
    param: int
    n: int
    M: int
    p: int
    method: str
    best_k: int
    raw_bound: float
    effective_bound: float
    h: int
    wall_ms: float = 0.0

    def cells(self) -> list:
        return [self.family, str(self.param), str(self.n), str(self.M), str(self.p), self.method,
                str(self.best_k), fmt(self.raw_bound), fmt(self.effective_bound), str(self.h),
                fmt(self.wall_ms)]


def write_csv(rows: Iterable[SweepRow], out: Union[PathLike, TextIO]) -> None:
    def emit(fh):
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for row in rows:
            w.writerow(row.cells())

    if hasattr(out, "write"):
        emit(out)
    else:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            emit(fh)


def read_csv(path: PathLike) -> list:
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        if tuple(reader.fieldnames or ()) != CSV_HEADER:
            raise ParseError(f"unexpected CSV header {reader.fieldnames}")
        return [
            SweepRow(r["family"], int(r["param"]), int(r["n"]), int(r["M"]), int(r["p"]), r["method"],
                     int(r["best_k"]), float(r["raw_bound"]), float(r["effective_bound"]),
                     int(r["h"]), float(r["wall_ms"]))
            for r in reader
        ]
