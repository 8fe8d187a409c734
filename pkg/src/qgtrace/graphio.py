"""JSON round-trip for graph descriptions.

The on-disk form mirrors the object model directly:

{
  "edges": [
    {"length": 1.0, "potential": {"type": "zero"}},
    {"length": 2.0, "potential": {"type": "constant", "value": 1.5}},
    {"length": 1.0, "potential": {"type": "polynomial", "coefficients": [0, 0, 1]}},
    {"length": 1.0, "potential": {"type": "table", "x": [...], "q": [...]}}
  ],
  "coupling": {"type": "hermitian", "matrix_real": [[...]], "matrix_imag": [[...]]}
}

coupling.type may also be "unitary" (same matrix keys, holding the full
2d x 2d vertex unitary) or "vertices" with a list of blocks
{"endpoints": [...], "matrix_real": ..., "matrix_imag": ...}; endpoints
are 1-based slots into the (start_1, end_1, start_2, end_2, ...) order.
matrix_imag may be omitted for real matrices.
"""

from __future__ import annotations

import json

import numpy as np

from .errors import GraphSpecError
from .graphs import (
    ConstantPotential,
    Edge,
    MetricGraph,
    PolynomialPotential,
    TablePotential,
    ZeroPotential,
    hermitian_coupling,
    unitary_coupling,
    vertex_coupling,
)


def _require(mapping, key, where):
    if key not in mapping:
        raise GraphSpecError(f"{where}: missing required field {key!r}")
    return mapping[key]


def _matrix_from(obj, where):
    real = np.asarray(_require(obj, "matrix_real", where), dtype=float)
    if real.ndim != 2 or real.shape[0] != real.shape[1]:
        raise GraphSpecError(f"{where}: matrix_real must be square, got shape {real.shape}")
    imag = obj.get("matrix_imag")
    if imag is None:
        return real.astype(complex)
    imag = np.asarray(imag, dtype=float)
    if imag.shape != real.shape:
        raise GraphSpecError(
            f"{where}: matrix_imag shape {imag.shape} differs from matrix_real {real.shape}")
    return real + 1j * imag


def _potential_from(obj, where):
    if obj is None:
        return ZeroPotential()
    kind = _require(obj, "type", where)
    if kind == "zero":
        return ZeroPotential()
    if kind == "constant":
        return ConstantPotential(_require(obj, "value", where))
    if kind == "polynomial":
        return PolynomialPotential(_require(obj, "coefficients", where))
    if kind == "table":
        return TablePotential(_require(obj, "x", where), _require(obj, "q", where))
    raise GraphSpecError(f"{where}: unknown potential type {kind!r}")


def graph_from_dict(obj):
    """Build a MetricGraph from the parsed JSON form."""
    if not isinstance(obj, dict):
        raise GraphSpecError(f"graph description must be an object, got {type(obj).__name__}")
    edges_obj = _require(obj, "edges", "graph")
    if not isinstance(edges_obj, list) or not edges_obj:
        raise GraphSpecError("graph.edges must be a non-empty list")
    edges = []
    for j, e in enumerate(edges_obj):
        where = f"edges[{j}]"
        if not isinstance(e, dict):
            raise GraphSpecError(f"{where}: must be an object")
        length = _require(e, "length", where)
        try:
            length = float(length)
        except (TypeError, ValueError):
            raise GraphSpecError(f"{where}.length: not a number: {length!r}") from None
        if not length > 0:
            raise GraphSpecError(f"{where}.length: must be positive, got {length!r}")
        edges.append(Edge(length, _potential_from(e.get("potential"), where + ".potential")))

    cobj = _require(obj, "coupling", "graph")
    kind = _require(cobj, "type", "coupling")
    if kind == "hermitian":
        coupling = hermitian_coupling(_matrix_from(cobj, "coupling"))
    elif kind == "unitary":
        coupling = unitary_coupling(_matrix_from(cobj, "coupling"))
    elif kind == "vertices":
        vlist = _require(cobj, "vertices", "coupling")
        if not isinstance(vlist, list) or not vlist:
            raise GraphSpecError("coupling.vertices must be a non-empty list")
        blocks = []
        for v, vb in enumerate(vlist):
            where = f"coupling.vertices[{v}]"
            eps = _require(vb, "endpoints", where)
            blocks.append((_matrix_from(vb, where), tuple(int(x) for x in eps)))
        coupling = vertex_coupling(blocks)
    else:
        raise GraphSpecError(f"coupling.type: unknown kind {kind!r}")

    n = 2 * len(edges)
    if coupling.kind in ("hermitian", "unitary") and coupling.matrix.shape != (n, n):
        raise GraphSpecError(
            f"coupling matrix is {coupling.matrix.shape[0]}x{coupling.matrix.shape[1]}, "
            f"but {len(edges)} edges need {n}x{n}")
    return MetricGraph(edges=tuple(edges), coupling=coupling)


def _potential_to_dict(pot):
    if isinstance(pot, ZeroPotential):
        return {"type": "zero"}
    if isinstance(pot, ConstantPotential):
        return {"type": "constant", "value": pot.c}
    if isinstance(pot, PolynomialPotential):
        return {"type": "polynomial", "coefficients": pot.coeffs.tolist()}
    if isinstance(pot, TablePotential):
        return {"type": "table", "x": pot.xs.tolist(), "q": pot.qs.tolist()}
    raise GraphSpecError(f"cannot serialize potential {pot!r}")


def _matrix_to_dict(mat):
    out = {"matrix_real": np.asarray(mat).real.tolist()}
    if np.any(np.asarray(mat).imag):
        out["matrix_imag"] = np.asarray(mat).imag.tolist()
    return out


def graph_to_dict(graph):
    edges = [{"length": e.length, "potential": _potential_to_dict(e.potential)}
             for e in graph.edges]
    c = graph.coupling
    if c.kind in ("hermitian", "unitary"):
        cobj = {"type": c.kind, **_matrix_to_dict(c.matrix)}
    else:
        cobj = {"type": "vertices", "vertices": [
            {"endpoints": list(eps), **_matrix_to_dict(U)} for U, eps in c.blocks]}
    return {"edges": edges, "coupling": cobj}


def load_graph(path):
    """Read a graph description from a JSON file."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            try:
                obj = json.load(fh)
            except json.JSONDecodeError as exc:
                raise GraphSpecError(f"{path}: not valid JSON: {exc}") from None
    except OSError as exc:
        raise GraphSpecError(f"{path}: cannot read graph file: {exc}") from None
    return graph_from_dict(obj)


def dump_graph(graph, path):
    """Write a graph description as JSON."""
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(graph_to_dict(graph), fh, indent=2)
        fh.write("\n")
