"""External file formats: tree JSON, matrix CSV, DOT export.

All rationals cross the boundary as exact "p/q" strings; decimal notation
is rejected on input. Writers are byte-deterministic for fixed inputs.
"""

from __future__ import annotations

import csv
import io
import json
from typing import Optional

from .errors import FormatError
from .metric import (
    DiametricalGraph,
    FiniteUltrametricSpace,
    MultipartiteDecomposition,
    StarCertificate,
    validate_ultrametric,
)
from .rationals import format_rational, parse_rational
from .tree import LabeledTree, validate_tree


# --- labeled trees ------------------------------------------------------------

def parse_tree_json(text: str) -> LabeledTree:
    """Parse {"vertices": [...], "labels": {...}, "edges": [[a,b], ...]}."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise FormatError("tree file must hold a JSON object")
    for field in ("vertices", "labels", "edges"):
        if field not in data:
            raise FormatError(f"tree file is missing the {field!r} field")
    vertices = data["vertices"]
    labels_raw = data["labels"]
    edges = data["edges"]
    if not isinstance(vertices, list) or not all(isinstance(v, str) for v in vertices):
        raise FormatError("'vertices' must be an array of strings")
    if not isinstance(labels_raw, dict):
        raise FormatError("'labels' must be an object mapping vertex to rational string")
    if not isinstance(edges, list):
        raise FormatError("'edges' must be an array of 2-element vertex arrays")
    labels = {}
    for vertex, value in labels_raw.items():
        if isinstance(value, bool) or isinstance(value, float):
            raise FormatError(
                f"label for {vertex!r} must be an exact rational string, got {value!r}"
            )
        if isinstance(value, int):
            value = str(value)
        if not isinstance(value, str):
            raise FormatError(f"label for {vertex!r} must be a rational string")
        labels[vertex] = parse_rational(value)
    return validate_tree(vertices, edges, labels)


def tree_json_string(tree: LabeledTree) -> str:
    data = {
        "vertices": list(tree.vertices),
        "labels": {
            v: format_rational(lab) for v, lab in zip(tree.vertices, tree.labels)
        },
        "edges": [[tree.vertices[i], tree.vertices[j]] for i, j in tree.edges],
    }
    return json.dumps(data, indent=2) + "\n"


def read_tree_file(path: str) -> LabeledTree:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_tree_json(fh.read())


def write_tree_file(path: str, tree: LabeledTree) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(tree_json_string(tree))


# --- distance matrices ----------------------------------------------------------

def parse_matrix_csv(text: str) -> FiniteUltrametricSpace:
    """Parse a matrix CSV: header of point names, then rows of rationals."""
    rows = [row for row in csv.reader(io.StringIO(text)) if row]
    if not rows:
        raise FormatError("matrix CSV is empty")
    points = [cell.strip() for cell in rows[0]]
    n = len(points)
    if len(rows) != n + 1:
        raise FormatError(f"expected {n} matrix rows after the header, got {len(rows) - 1}")
    matrix = []
    for row in rows[1:]:
        if len(row) != n:
            raise FormatError(f"row has {len(row)} entries, expected {n}")
        matrix.append([parse_rational(cell) for cell in row])
    return validate_ultrametric(points, matrix)


def matrix_csv_string(space: FiniteUltrametricSpace) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(space.points)
    for row in space.matrix:
        writer.writerow([format_rational(v) for v in row])
    return out.getvalue()


def read_matrix_file(path: str) -> FiniteUltrametricSpace:
    with open(path, "r", encoding="utf-8", newline="") as fh:
        return parse_matrix_csv(fh.read())


def write_matrix_file(path: str, space: FiniteUltrametricSpace) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(matrix_csv_string(space))


# --- DOT export ------------------------------------------------------------------

def diametrical_dot_string(
    graph: DiametricalGraph,
    parts: Optional[MultipartiteDecomposition] = None,
    star: Optional[StarCertificate] = None,
) -> str:
    """Render the diametrical graph; parts share a fill color, the star
    center (when present) is drawn with a double border."""
    part_of: dict[str, int] = {}
    if parts is not None:
        for k, part in enumerate(parts.parts):
            for p in part:
                part_of[p] = k + 1
    lines = ["graph diametrical {", "  node [style=filled colorscheme=set19];"]
    for p in graph.points:
        attrs = [f"fillcolor={part_of.get(p, 9)}"]
        if star is not None and star.center == p:
            attrs.append("shape=doublecircle")
            attrs.append('xlabel="star center"')
        lines.append(f"  {json.dumps(p)} [{' '.join(attrs)}];")
    for u, v in graph.edges:
        lines.append(f"  {json.dumps(u)} -- {json.dumps(v)};")
    lines.append("}")
    return "\n".join(lines) + "\n"
