"""Vertex-labeled trees and the path-maximum ultrametric they generate.

A labeled tree carries one non-negative rational label per vertex. The
distance between two distinct vertices is the largest label on the unique
path joining them (endpoints included); the distance from a vertex to
itself is 0. That map is an ultrametric exactly when no edge has both
endpoint labels equal to zero (a *non-degenerate* labeling).

Vertex identifiers are opaque strings externally; internally they map to
dense indices. Trees are immutable after validation, so derived structures
(PathMaxIndex, distance matrices) can cache freely.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence

from .errors import (
    DegenerateLabeling,
    DuplicateVertex,
    FormatError,
    HasCycle,
    MissingLabel,
    NegativeLabel,
    NotABall,
    NotConnected,
    UnknownVertex,
)
from .metric import FiniteUltrametricSpace
from .rationals import parse_rational


@dataclass(frozen=True)
class LabeledTree:
    """An immutable tree with a non-negative rational label on each vertex.

    ``vertices`` fixes the external identifiers and their order; ``edges``
    holds index pairs (i, j) with i < j; ``labels[i]`` belongs to
    ``vertices[i]``. Instances are built by :func:`validate_tree` (or by
    library code that guarantees the invariants by construction).
    """

    vertices: tuple[str, ...]
    edges: tuple[tuple[int, int], ...]
    labels: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.labels) != len(self.vertices):
            raise ValueError("labels must align with vertices")

    @property
    def n(self) -> int:
        return len(self.vertices)

    @cached_property
    def _index(self) -> dict[str, int]:
        return {v: i for i, v in enumerate(self.vertices)}

    def index_of(self, vertex: str) -> int:
        try:
            return self._index[vertex]
        except KeyError:
            raise UnknownVertex(vertex) from None

    def label_of(self, vertex: str) -> Fraction:
        return self.labels[self.index_of(vertex)]

    def edge_names(self) -> tuple[tuple[str, str], ...]:
        return tuple((self.vertices[i], self.vertices[j]) for i, j in self.edges)

    def adjacency(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in range(self.n)]
        for i, j in self.edges:
            adj[i].append(j)
            adj[j].append(i)
        return adj


def validate_tree(
    vertices: Sequence[str],
    edges: Iterable[Sequence[str]],
    labels: Mapping[str, object],
) -> LabeledTree:
    """Check a raw vertex/edge/label description and freeze it into a tree.

    Raises NotConnected, HasCycle, MissingLabel, NegativeLabel,
    DuplicateVertex or UnknownVertex, each naming the offending
    vertex or edge. Label values may be Fractions, ints, or exact
    rational strings ("3", "5/2").
    """
    names = [str(v) for v in vertices]
    if not names:
        raise NotConnected("<empty vertex list>")
    index: dict[str, int] = {}
    for pos, name in enumerate(names):
        if name in index:
            raise DuplicateVertex(name)
        index[name] = pos

    edge_set: set[tuple[int, int]] = set()
    edge_list: list[tuple[int, int]] = []
    for raw in edges:
        pair = tuple(raw)
        if len(pair) != 2:
            raise FormatError(f"an edge needs exactly 2 endpoints: {pair!r}")
        a, b = (str(pair[0]), str(pair[1]))
        if a not in index:
            raise UnknownVertex(a)
        if b not in index:
            raise UnknownVertex(b)
        if a == b:
            raise HasCycle((a, b))
        i, j = sorted((index[a], index[b]))
        if (i, j) in edge_set:
            raise HasCycle((names[i], names[j]))
        edge_set.add((i, j))
        edge_list.append((i, j))

    parsed: list[Fraction] = []
    for name in names:
        if name not in labels:
            raise MissingLabel(name)
        value = labels[name]
        frac = parse_rational(value) if isinstance(value, str) else Fraction(value)
        if frac < 0:
            raise NegativeLabel(name, frac)
        parsed.append(frac)

    # DFS: a back edge means a cycle; an unvisited vertex means disconnection.
    n = len(names)
    adj: list[list[int]] = [[] for _ in range(n)]
    for i, j in edge_list:
        adj[i].append(j)
        adj[j].append(i)
    seen = [False] * n
    parent = [-1] * n
    stack = [0]
    seen[0] = True
    while stack:
        u = stack.pop()
        for w in adj[u]:
            if not seen[w]:
                seen[w] = True
                parent[w] = u
                stack.append(w)
            elif w != parent[u]:
                raise HasCycle((names[min(u, w)], names[max(u, w)]))
    for pos, ok in enumerate(seen):
        if not ok:
            raise NotConnected(names[pos])

    return LabeledTree(tuple(names), tuple(sorted(edge_list)), tuple(parsed))


def degenerate_edge(tree: LabeledTree) -> Optional[tuple[str, str]]:
    """Return an edge whose two endpoint labels are both zero, or None."""
    for i, j in tree.edges:
        if tree.labels[i] == 0 and tree.labels[j] == 0:
            return (tree.vertices[i], tree.vertices[j])
    return None


def is_nondegenerate(tree: LabeledTree) -> bool:
    """True iff every edge has at least one strictly positive endpoint label."""
    return degenerate_edge(tree) is None


class PathMaxIndex:
    """Binary-lifting index answering path-maximum label queries.

    Preprocessing is O(n log d) for maximum depth d; each query is
    O(log d). Labels are compressed to integer ranks once, so the hot
    loops compare small ints; results are mapped back to exact Fractions.
    """

    __slots__ = ("tree", "_values", "_rank", "_depth", "_up", "_upmax", "_levels")

    def __init__(self, tree: LabeledTree):
        self.tree = tree
        n = tree.n
        values = sorted(set(tree.labels))
        pos = {v: r for r, v in enumerate(values)}
        rank = [pos[lab] for lab in tree.labels]

        adj = tree.adjacency()
        parent = [0] * n
        depth = [0] * n
        order = []
        seen = [False] * n
        stack = [0]
        seen[0] = True
        while stack:
            u = stack.pop()
            order.append(u)
            for w in adj[u]:
                if not seen[w]:
                    seen[w] = True
                    parent[w] = u
                    depth[w] = depth[u] + 1
                    stack.append(w)

        max_depth = max(depth) if n > 1 else 0
        levels = max(1, max_depth.bit_length())
        up = [parent]
        upmax = [rank[:]]  # segment of length 1: the vertex itself
        for k in range(1, levels):
            prev_up = up[k - 1]
            prev_max = upmax[k - 1]
            nxt_up = [0] * n
            nxt_max = [0] * n
            for v in range(n):
                mid = prev_up[v]
                nxt_up[v] = prev_up[mid]
                a = prev_max[v]
                b = prev_max[mid]
                nxt_max[v] = a if a >= b else b
            up.append(nxt_up)
            upmax.append(nxt_max)

        self._values = values
        self._rank = rank
        self._depth = depth
        self._up = up
        self._upmax = upmax
        self._levels = levels

    def _path_max_rank(self, u: int, v: int) -> int:
        rank = self._rank
        if u == v:
            return rank[u]
        depth = self._depth
        up = self._up
        upmax = self._upmax
        best = rank[u]
        if rank[v] > best:
            best = rank[v]
        du, dv = depth[u], depth[v]
        if du < dv:
            u, v, du, dv = v, u, dv, du
        diff = du - dv
        k = 0
        while diff:
            if diff & 1:
                m = upmax[k][u]
                if m > best:
                    best = m
                u = up[k][u]
            diff >>= 1
            k += 1
        if u == v:
            return best
        for k in range(self._levels - 1, -1, -1):
            uk = up[k]
            if uk[u] != uk[v]:
                mk = upmax[k]
                m = mk[u]
                if m > best:
                    best = m
                m = mk[v]
                if m > best:
                    best = m
                u = uk[u]
                v = uk[v]
        # u and v now sit just below their lowest common ancestor.
        for r in (rank[u], rank[v], rank[self._up[0][u]]):
            if r > best:
                best = r
        return best

    def path_max(self, u: str, v: str) -> Fraction:
        """Maximum label over the path joining u and v, endpoints included."""
        ui = self.tree.index_of(u)
        vi = self.tree.index_of(v)
        return self._values[self._path_max_rank(ui, vi)]

    def distance(self, u: str, v: str) -> Fraction:
        """The tree ultrametric: 0 if u = v, else the path maximum."""
        ui = self.tree.index_of(u)
        vi = self.tree.index_of(v)
        if ui == vi:
            return Fraction(0)
        return self._values[self._path_max_rank(ui, vi)]


def label_distance(index: PathMaxIndex, u: str, v: str) -> Fraction:
    """Distance between vertices u and v under the indexed tree's metric."""
    return index.distance(u, v)


def distance_matrix(tree: LabeledTree) -> FiniteUltrametricSpace:
    """Build the full exact distance matrix of the tree's ultrametric.

    Raises DegenerateLabeling (with the violating edge) when some edge has
    both labels zero; validity of the result is then guaranteed by
    construction.
    """
    bad = degenerate_edge(tree)
    if bad is not None:
        raise DegenerateLabeling(bad)
    n = tree.n
    index = PathMaxIndex(tree)
    values = index._values
    zero = Fraction(0)
    matrix = [[zero] * n for _ in range(n)]
    for i in range(n):
        row = matrix[i]
        for j in range(i + 1, n):
            d = values[index._path_max_rank(i, j)]
            row[j] = d
            matrix[j][i] = d
    return FiniteUltrametricSpace.from_trusted_matrix(
        tree.vertices, tuple(tuple(r) for r in matrix)
    )


def canonical_labeling(tree: LabeledTree) -> LabeledTree:
    """Replace each label by itself if it occurs as a distance, else by 0.

    The result generates the identical distance matrix, is again
    non-degenerate, and its labels together with 0 are exactly the
    distance set together with 0. Idempotent.
    """
    space = distance_matrix(tree)
    realized = set()
    for row in space.matrix:
        realized.update(row)
    zero = Fraction(0)
    new_labels = tuple(lab if lab in realized else zero for lab in tree.labels)
    return LabeledTree(tree.vertices, tree.edges, new_labels)


def ball_subtree(tree: LabeledTree, ball: Iterable[str]) -> LabeledTree:
    """Restrict the tree to the vertices of an open ball of its space.

    The induced subgraph of an open ball is connected, so the result is a
    tree again; its labeling is the restriction and its distance matrix is
    the restriction of the ambient matrix. Raises NotABall if the given
    vertex set is not an open ball.
    """
    members = {tree.index_of(v) for v in ball}
    if not members:
        raise NotABall(ball)
    bad = degenerate_edge(tree)
    if bad is not None:
        raise DegenerateLabeling(bad)
    index = PathMaxIndex(tree)
    values = index._values

    def dist(i: int, j: int) -> Fraction:
        return Fraction(0) if i == j else values[index._path_max_rank(i, j)]

    center = min(members)
    if len(members) < tree.n:
        inner = max(dist(center, i) for i in members)
        outer = min(dist(center, j) for j in range(tree.n) if j not in members)
        if not inner < outer:
            raise NotABall([tree.vertices[m] for m in members])

    keep = sorted(members)
    names = tuple(tree.vertices[i] for i in keep)
    remap = {old: new for new, old in enumerate(keep)}
    edges = tuple(
        sorted((remap[i], remap[j]) for i, j in tree.edges if i in members and j in members)
    )
    labels = tuple(tree.labels[i] for i in keep)
    return LabeledTree(names, edges, labels)
