"""Exhaustive exploration of finite ultrametric spaces at desk scale.

A leveled dendrogram (internal levels 1..k, all occupied, leaves at 0;
distance = level of the lowest common ancestor) canonically represents a
finite ultrametric space up to order-preserving rescaling of its distance
set. Enumerating canonical dendrograms therefore enumerates those
equivalence classes exactly once. On top of that sit verification
campaigns for the structural theorems and searches probing the open
questions (center-size bound, all-subsets-spheres, closed balls).
"""

from __future__ import annotations

import heapq
import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Optional, Sequence

from .capacity import (
    ALL_SUBSETS_SPHERES_FENCE,
    ENUMERATION_FENCE,
    TREE_SEARCH_FENCE,
    fence_limit,
    require_within,
)
from .errors import (
    EmptyPool,
    FewerThanTwoBlocks,
    NegativeInput,
    NotCompleteMultipartite,
    TooLarge,
    TooSmall,
)
from .formats import matrix_csv_string
from .metric import (
    FiniteUltrametricSpace,
    ball,
    center_of_distances,
    diameter,
    diametrical_graph,
    distance_set,
    enumerate_balls,
    enumerate_centered_spheres,
    is_centered_sphere,
    is_equidistant,
    multipartite_parts,
    pointwise_distance_set,
    restrict,
    spanning_star,
    weak_similarity,
)
from .tree import LabeledTree, distance_matrix, is_nondegenerate, validate_tree

ZERO = Fraction(0)


# --- dendrograms ---------------------------------------------------------------

@dataclass(frozen=True)
class Dendrogram:
    """A rooted leveled hierarchy: leaves at level 0, internal nodes at
    strictly decreasing positive levels, every internal node with at
    least two children. Children are kept sorted by canonical key."""

    level: int
    children: tuple["Dendrogram", ...] = ()

    def __post_init__(self):
        if self.level == 0:
            if self.children:
                raise ValueError("a leaf cannot have children")
        else:
            if len(self.children) < 2:
                raise ValueError("an internal node needs at least 2 children")
            for child in self.children:
                if child.level >= self.level:
                    raise ValueError("levels must strictly decrease downward")

    @property
    def is_leaf(self) -> bool:
        return self.level == 0

    def leaf_count(self) -> int:
        if self.is_leaf:
            return 1
        return sum(child.leaf_count() for child in self.children)

    def levels_used(self) -> frozenset[int]:
        levels: set[int] = set()
        stack = [self]
        while stack:
            node = stack.pop()
            if not node.is_leaf:
                levels.add(node.level)
                stack.extend(node.children)
        return frozenset(levels)

    def key(self) -> str:
        """Canonical string encoding; equal keys mean the same class."""
        if self.is_leaf:
            return "L"
        return "(%d:%s)" % (self.level, ",".join(c.key() for c in self.children))

    def is_canonical(self) -> bool:
        """Levels used are exactly 1..root level and children are sorted."""
        if self.is_leaf:
            return True
        if self.levels_used() != frozenset(range(1, self.level + 1)):
            return False
        stack = [self]
        while stack:
            node = stack.pop()
            if node.is_leaf:
                continue
            keys = [c.key() for c in node.children]
            if keys != sorted(keys):
                return False
            stack.extend(node.children)
        return True


# Internal enumeration works on plain nested tuples (leaf = 0, internal =
# (level, child, ...)) and wraps them into Dendrogram objects on emission.

def _struct_key(t, cache: dict) -> str:
    k = cache.get(t)
    if k is None:
        if t == 0:
            k = "L"
        else:
            k = "(%d:%s)" % (t[0], ",".join(_struct_key(c, cache) for c in t[1:]))
        cache[t] = k
    return k


def _sub_multisets(items: tuple, min_size: int = 0) -> list[tuple]:
    """All sub-multisets of a sorted tuple, as sorted tuples."""
    groups: list[list] = []
    for it in items:
        if groups and groups[-1][0] == it:
            groups[-1][1] += 1
        else:
            groups.append([it, 1])
    result: list[tuple] = []

    def rec(gi: int, chosen: list, total: int) -> None:
        if gi == len(groups):
            if total >= min_size:
                result.append(tuple(chosen))
            return
        value, count = groups[gi]
        for take in range(count + 1):
            rec(gi + 1, chosen + [value] * take, total + take)

    rec(0, [], 0)
    return result


def _multiset_partitions_ge2(items: tuple, keyfn) -> Iterator[tuple]:
    """Partitions of a sorted multiset into parts of size >= 2, each
    partition emitted once as its non-increasing part sequence."""

    def partkey(part):
        return tuple(keyfn(x) for x in part)

    def rec(remaining: tuple, bound, acc: list) -> Iterator[tuple]:
        if not remaining:
            yield tuple(acc)
            return
        for part in _sub_multisets(remaining, min_size=2):
            pk = partkey(part)
            if bound is not None and pk > bound:
                continue
            rest = list(remaining)
            for x in part:
                rest.remove(x)
            acc.append(part)
            yield from rec(tuple(rest), pk, acc)
            acc.pop()

    yield from rec(items, None, [])


def _struct_to_dendrogram(t, cache: dict) -> Dendrogram:
    d = cache.get(t)
    if d is None:
        if t == 0:
            d = Dendrogram(0)
        else:
            d = Dendrogram(t[0], tuple(_struct_to_dendrogram(c, cache) for c in t[1:]))
        cache[t] = d
    return d


def enumerate_dendrograms(n: int) -> Iterator[Dendrogram]:
    """Stream every weak-similarity class of n-point spaces exactly once.

    Classes are built bottom-up: starting from n leaves, each step merges
    one or more groups (of at least two current roots) into new nodes at
    the next level. Every canonical dendrogram has a unique merge
    history, so the walk needs no deduplication.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    require_within("class enumeration", n, ENUMERATION_FENCE)
    if n == 1:
        yield Dendrogram(0)
        return

    key_cache: dict = {}
    dendro_cache: dict = {}

    def keyf(t) -> str:
        return _struct_key(t, key_cache)

    def step(forest: tuple, level: int) -> Iterator:
        for passive in _sub_multisets(forest):
            active = list(forest)
            for x in passive:
                active.remove(x)
            if len(active) < 2:
                continue
            for plan in _multiset_partitions_ge2(tuple(active), keyf):
                merged = [
                    (level,) + tuple(sorted(group, key=keyf)) for group in plan
                ]
                new_forest = tuple(sorted(list(passive) + merged, key=keyf))
                if len(new_forest) == 1:
                    yield new_forest[0]
                else:
                    yield from step(new_forest, level + 1)

    for struct in step(tuple([0] * n), 1):
        yield _struct_to_dendrogram(struct, dendro_cache)


def dendrogram_to_space(dendro: Dendrogram) -> FiniteUltrametricSpace:
    """Realize the dendrogram: leaves x1..xn, distances = ancestor levels."""
    n = dendro.leaf_count()
    names = tuple(f"x{i + 1}" for i in range(n))
    matrix = [[ZERO] * n for _ in range(n)]
    counter = itertools.count()

    def fill(node: Dendrogram) -> list[int]:
        if node.is_leaf:
            return [next(counter)]
        groups = [fill(child) for child in node.children]
        dist = Fraction(node.level)
        for gi in range(len(groups)):
            for gj in range(gi + 1, len(groups)):
                for a in groups[gi]:
                    for b in groups[gj]:
                        matrix[a][b] = dist
                        matrix[b][a] = dist
        return [i for g in groups for i in g]

    fill(dendro)
    return FiniteUltrametricSpace.from_trusted_matrix(names, matrix)


def space_to_dendrogram(space: FiniteUltrametricSpace) -> Dendrogram:
    """Canonical dendrogram of a space: split recursively at the diameter.

    Node levels are the global ranks of the sub-diameters, so two spaces
    are weakly similar exactly when their canonical dendrograms are equal.
    """
    positive = [v for v in distance_set(space).values if v > 0]
    rank = {v: r + 1 for r, v in enumerate(positive)}

    def build(idxs: list[int]) -> Dendrogram:
        if len(idxs) == 1:
            return Dendrogram(0)
        diam = max(space.matrix[i][j] for i in idxs for j in idxs)
        remaining = set(idxs)
        groups: list[list[int]] = []
        while remaining:
            seed = min(remaining)
            group = {seed}
            frontier = [seed]
            while frontier:
                u = frontier.pop()
                for v in list(remaining):
                    if v not in group and space.matrix[u][v] < diam:
                        group.add(v)
                        frontier.append(v)
            remaining -= group
            groups.append(sorted(group))
        children = tuple(
            sorted((build(g) for g in groups), key=Dendrogram.key)
        )
        return Dendrogram(rank[diam], children)

    return build(list(range(space.n)))


def weakly_similar(
    first: FiniteUltrametricSpace, second: FiniteUltrametricSpace
) -> bool:
    """Class equality via canonical dendrograms (fast path for campaigns)."""
    return space_to_dendrogram(first).key() == space_to_dendrogram(second).key()


# --- campaign reports -------------------------------------------------------------

SCHEMA_VERSION = 1


@dataclass
class CampaignReport:
    """Outcome of one verification or search campaign.

    ``results`` maps a check name to its verdict plus tallies; witnesses
    carry replayable matrix CSV strings for extremal or failing instances.
    """

    check: str
    n: Optional[int]
    instances: int
    verdict: str
    results: dict = field(default_factory=dict)
    witnesses: list = field(default_factory=list)

    def to_json_dict(self) -> dict:
        return {
            "schema": SCHEMA_VERSION,
            "check": self.check,
            "n": self.n,
            "classes_checked": self.instances,
            "verdict": self.verdict,
            "results": self.results,
            "witnesses": self.witnesses,
        }


def _witness(label: str, space: FiniteUltrametricSpace, note: str = "") -> dict:
    return {"label": label, "matrix_csv": matrix_csv_string(space), "note": note}


def _parallel_map(fn: Callable, items: Sequence, jobs: int) -> list:
    """Order-preserving map; with jobs > 1 the work is sharded across
    processes but the fold order (hence every output byte) is unchanged."""
    if jobs <= 1 or len(items) < 2:
        return [fn(item) for item in items]
    from concurrent.futures import ProcessPoolExecutor

    chunk = max(1, len(items) // (jobs * 4))
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items, chunksize=chunk))


def _center_size(dendro: Dendrogram) -> int:
    return len(center_of_distances(dendrogram_to_space(dendro)))


def check_con3(n: int, jobs: int = 1) -> CampaignReport:
    """Probe the binary-log bound on the center size over all n-point classes.

    Reports the maximum |center| over every weak-similarity class of
    cardinality n, the extremal witness, and whether the bound
    1 + floor(log2 n) holds.
    """
    require_within("center-size campaign", n, ENUMERATION_FENCE)
    classes = list(enumerate_dendrograms(n))
    sizes = _parallel_map(_center_size, classes, jobs)
    bound = 1 + (n.bit_length() - 1)
    max_size = max(sizes)
    best = sizes.index(max_size)
    witness_space = dendrogram_to_space(classes[best])
    verdict = "CONSISTENT" if max_size <= bound else "COUNTEREXAMPLE"
    report = CampaignReport(
        check="con3",
        n=n,
        instances=len(classes),
        verdict=verdict,
        results={
            "center-size-bound": {
                "verdict": verdict,
                "bound": bound,
                "max_center_size": max_size,
                "bound_attained": max_size == bound,
            }
        },
        witnesses=[
            _witness(
                classes[best].key(),
                witness_space,
                f"center size {max_size} (bound {bound})",
            )
        ],
    )
    return report


def _reference_three_point_space() -> FiniteUltrametricSpace:
    """The non-equidistant three-point shape: one short side, two long."""
    one, two = Fraction(1), Fraction(2)
    return FiniteUltrametricSpace.from_trusted_matrix(
        ("x1", "x2", "x3"),
        ((ZERO, two, one), (two, ZERO, two), (one, two, ZERO)),
    )


def _all_subsets_spheres(dendro: Dendrogram) -> bool:
    space = dendrogram_to_space(dendro)
    return len(enumerate_centered_spheres(space)) == (1 << space.n) - 1


def check_hol(n: int, jobs: int = 1) -> CampaignReport:
    """Search for classes where every non-empty subset is a centered sphere.

    At n = 3 exactly one such class should exist (the one-short-side
    triple); for n > 3 the expectation is none. Any other outcome is
    reported as a counterexample with a replayable witness.
    """
    if n < 3:
        raise TooSmall("the all-subsets-spheres campaign needs n >= 3")
    require_within("all-subsets-spheres campaign", n, ALL_SUBSETS_SPHERES_FENCE)
    classes = list(enumerate_dendrograms(n))
    flags = _parallel_map(_all_subsets_spheres, classes, jobs)
    satisfying = [dendro for dendro, flag in zip(classes, flags) if flag]
    witnesses = []
    similar_to_reference = []
    reference = _reference_three_point_space()
    for dendro in satisfying:
        space = dendrogram_to_space(dendro)
        similar = weak_similarity(space, reference) is not None
        similar_to_reference.append(similar)
        witnesses.append(
            _witness(
                dendro.key(),
                space,
                "all subsets are centered spheres"
                + ("; weakly similar to the 3-point reference" if similar else ""),
            )
        )
    if n == 3:
        consistent = len(satisfying) == 1 and similar_to_reference == [True]
    else:
        consistent = not satisfying
    verdict = "CONSISTENT" if consistent else "COUNTEREXAMPLE"
    return CampaignReport(
        check="hol",
        n=n,
        instances=len(classes),
        verdict=verdict,
        results={
            "all-subsets-spheres": {
                "verdict": verdict,
                "satisfying_classes": len(satisfying),
                "weakly_similar_to_reference": similar_to_reference,
            }
        },
        witnesses=witnesses,
    )


def _sphere_family(space: FiniteUltrametricSpace) -> set[frozenset[str]]:
    return {cert.subset for cert in enumerate_centered_spheres(space)}


def _ball_family(
    space: FiniteUltrametricSpace, kind: str
) -> set[frozenset[str]]:
    return {b.members for b in enumerate_balls(space, kind)}


def check_closed_balls(
    source: str,
    *,
    n: Optional[int] = None,
    count: int = 100,
    n_min: int = 2,
    n_max: int = 12,
    pool: Sequence = (0, 1, 2, 3),
    seed: int = 0,
    jobs: int = 1,
) -> CampaignReport:
    """Verify on tree-generated spaces that closed balls are centered spheres.

    ``source`` is "enumerated" (all classes of cardinality ``n`` that are
    realizable by a labeled tree) or "random-trees" (``count`` random
    non-degenerate labeled trees with sizes in [n_min, n_max], seeded).
    Open balls are re-checked alongside as the established half; the
    closed-ball half is reported as search evidence, not asserted.
    """
    instances: list[tuple[str, FiniteUltrametricSpace]] = []
    if source == "enumerated":
        if n is None:
            raise ValueError("source='enumerated' needs n")
        require_within("enumerated closed-ball campaign", n, TREE_SEARCH_FENCE)
        for pos, dendro in enumerate(enumerate_dendrograms(n)):
            space = dendrogram_to_space(dendro)
            if is_ut(space) is not None:
                instances.append((f"class-{pos}:{dendro.key()}", space))
    elif source == "random-trees":
        rng = random.Random(seed)
        for i in range(count):
            size = rng.randint(n_min, n_max)
            tree = random_labeled_tree(size, pool, seed=rng.randrange(2**32))
            instances.append((f"tree-{i}(n={size})", distance_matrix(tree)))
    else:
        raise ValueError("source must be 'enumerated' or 'random-trees'")

    open_fail = []
    closed_fail = []
    for label, space in instances:
        spheres = _sphere_family(space)
        if not _ball_family(space, "open") <= spheres:
            open_fail.append(_witness(label, space, "open ball is not a sphere"))
        if not _ball_family(space, "closed") <= spheres:
            closed_fail.append(_witness(label, space, "closed ball is not a sphere"))
    closed_verdict = "CONSISTENT" if not closed_fail else "COUNTEREXAMPLE"
    open_verdict = "PASS" if not open_fail else "FAIL"
    overall = closed_verdict if open_verdict == "PASS" else "FAIL"
    return CampaignReport(
        check="closed-balls",
        n=n,
        instances=len(instances),
        verdict=overall,
        results={
            "closed-balls-are-spheres": {
                "verdict": closed_verdict,
                "status": "search evidence",
                "failures": len(closed_fail),
            },
            "open-balls-are-spheres": {
                "verdict": open_verdict,
                "failures": len(open_fail),
            },
        },
        witnesses=open_fail + closed_fail,
    )


# --- per-space theorem suite ----------------------------------------------------

def check_theorem_suite(
    space: FiniteUltrametricSpace, is_ut_hint: bool = False
) -> CampaignReport:
    """Run every structural invariant applicable to the space.

    Universal checks hold for all finite ultrametric spaces; the ut-*
    checks additionally assume the space is generated by a labeled tree
    (pass ``is_ut_hint=True`` only for such spaces). The closed-ball
    check is recorded as search evidence, never as a failure of the
    suite.
    """
    n = space.n
    diam = diameter(space)
    center = center_of_distances(space)
    spheres = _sphere_family(space)
    open_balls = _ball_family(space, "open")
    closed_balls = _ball_family(space, "closed")
    results: dict = {}
    failures: list = []

    def record(name: str, ok: bool, note: str = "") -> None:
        results[name] = {"verdict": "PASS" if ok else "FAIL"}
        if note:
            results[name]["note"] = note
        if not ok:
            failures.append((name, note))

    record(
        "diameter-row-max",
        all(max(row) == diam for row in space.matrix) if n > 1 else diam == 0,
    )
    record("center-contains-zero", ZERO in center)
    if n >= 2:
        record("center-contains-diameter", diam in center)
        b_center = center.values == (ZERO, diam)
        try:
            parts = multipartite_parts(diametrical_graph(space)).parts
            b_singleton = any(len(p) == 1 for p in parts)
            record("complete-multipartite", True)
        except NotCompleteMultipartite as exc:  # would refute the input space
            record("complete-multipartite", False, str(exc))
            b_singleton = False
        b_star = spanning_star(diametrical_graph(space)) is not None
        # A spanning star forces the center to be exactly {0, diam} on any
        # finite space, and a star is the same thing as a singleton part;
        # the full three-way equivalence needs a tree-generated space (the
        # two-pairs-at-different-scales 4-point class breaks the converse).
        note = f"center-dichotomy={b_center} singleton-part={b_singleton} star={b_star}"
        record("star-iff-singleton-part", b_singleton == b_star, note)
        record("star-implies-center-dichotomy", (not b_star) or b_center, note)
        equi = is_equidistant(space) is not None
        record(
            "equidistance-equivalence",
            equi == (spheres == open_balls) == (spheres <= open_balls),
        )
    ok_irrelevance = True
    for b in enumerate_balls(space, "open"):
        for a in b.members:
            if ball(space, a, b.radius, "open").members != b.members:
                ok_irrelevance = False
    record("ball-center-irrelevance", ok_irrelevance)
    ok_relative = True
    for b in enumerate_balls(space, "open"):
        outer = is_centered_sphere(space, b.members) is not None
        inner = is_centered_sphere(restrict(space, b.members), b.members) is not None
        if outer != inner:
            ok_relative = False
    record("ball-relative-spheres", ok_relative)
    probe_radii = [v for v in distance_set(space).values if v > 0] + [diam + 1]
    record(
        "pointwise-greatest-below",
        all(
            pointwise_distance_set(space, p).greatest_below(r) is not None
            for p in space.points
            for r in probe_radii
        ),
    )
    record(
        "singletons-are-spheres",
        all(is_centered_sphere(space, [p]) is not None for p in space.points),
    )

    if is_ut_hint:
        if n >= 2:
            record("ut-center-dichotomy", center.values == (ZERO, diam))
            record(
                "ut-no-interior-center-value",
                all(not (0 < v < diam) for v in center.values),
            )
            record(
                "ut-star-equivalence",
                b_center == b_singleton == b_star,
                f"center-dichotomy={b_center} singleton-part={b_singleton} star={b_star}",
            )
            whole = is_centered_sphere(space, space.points)
            record(
                "ut-whole-space-sphere",
                whole is not None and whole.radius == diam,
            )
            record(
                "ut-spanning-star",
                spanning_star(diametrical_graph(space)) is not None,
            )
        record("ut-open-balls-are-spheres", open_balls <= spheres)
        closed_ok = closed_balls <= spheres
        results["ut-closed-balls-are-spheres"] = {
            "verdict": "CONSISTENT" if closed_ok else "COUNTEREXAMPLE",
            "status": "search evidence",
        }

    verdict = "PASS" if not failures else "FAIL"
    witnesses = []
    if failures:
        name, note = failures[0]
        witnesses.append(_witness(f"first-failure:{name}", space, note))
    return CampaignReport(
        check="suite",
        n=n,
        instances=1,
        verdict=verdict,
        results=results,
        witnesses=witnesses,
    )


def _suite_row(dendro: Dendrogram) -> tuple[str, bool, Optional[str]]:
    space = dendrogram_to_space(dendro)
    hint = space.n <= fence_limit(TREE_SEARCH_FENCE) and is_ut(space) is not None
    report = check_theorem_suite(space, is_ut_hint=hint)
    first_fail = None
    if report.verdict != "PASS":
        first_fail = next(
            name for name, res in report.results.items() if res.get("verdict") == "FAIL"
        )
    return (dendro.key(), report.verdict == "PASS", first_fail)


def check_suite_enumerated(n: int, jobs: int = 1) -> CampaignReport:
    """Run the theorem suite over every class of cardinality n."""
    require_within("class enumeration", n, ENUMERATION_FENCE)
    classes = list(enumerate_dendrograms(n))
    rows = _parallel_map(_suite_row, classes, jobs)
    failures = [(key, fail) for key, ok, fail in rows if not ok]
    witnesses = []
    if failures:
        key, fail = failures[0]
        for dendro in classes:
            if dendro.key() == key:
                witnesses.append(
                    _witness(key, dendrogram_to_space(dendro), f"failed {fail}")
                )
                break
    return CampaignReport(
        check="suite",
        n=n,
        instances=len(classes),
        verdict="PASS" if not failures else "FAIL",
        results={
            "theorem-suite": {
                "verdict": "PASS" if not failures else "FAIL",
                "failing_classes": len(failures),
            }
        },
        witnesses=witnesses,
    )


# --- labeled-tree realizability -----------------------------------------------------

def _prufer_to_edges(seq: Sequence[int], n: int) -> list[tuple[int, int]]:
    """Decode a Prüfer sequence over 0..n-1 into a sorted edge list."""
    degree = [1] * n
    for x in seq:
        degree[x] += 1
    leaves = [i for i in range(n) if degree[i] == 1]
    heapq.heapify(leaves)
    edges = []
    for x in seq:
        leaf = heapq.heappop(leaves)
        edges.append((min(leaf, x), max(leaf, x)))
        degree[x] -= 1
        if degree[x] == 1:
            heapq.heappush(leaves, x)
    u = heapq.heappop(leaves)
    v = heapq.heappop(leaves)
    edges.append((min(u, v), max(u, v)))
    return sorted(edges)


def is_ut(
    space: FiniteUltrametricSpace, limit: int = TREE_SEARCH_FENCE
) -> Optional[LabeledTree]:
    """Find a labeled tree on exactly the space's points realizing it.

    Exhausts all tree shapes (Prüfer sequences) with vertex labels drawn
    from the distance values plus 0, pruned by the two necessary
    conditions: a vertex label never exceeds its smallest distance, and
    each edge must realize its endpoints' distance as the larger label.
    Rejects immediately when the center of distances is not {0, diam},
    which no tree-generated space can violate. Returns the first
    certificate found (its matrix is re-checked against the input), or
    None after an exhaustive search.
    """
    n = space.n
    effective = min(limit, fence_limit(TREE_SEARCH_FENCE))
    if n > effective:
        raise TooLarge("labeled-tree search", n, effective)
    if n == 1:
        return validate_tree(space.points, [], {space.points[0]: 0})

    diam = diameter(space)
    if center_of_distances(space).values != (ZERO, diam):
        return None

    values = list(distance_set(space).values)  # 0 included
    min_dist = [
        min(space.matrix[i][j] for j in range(n) if j != i) for i in range(n)
    ]
    candidates = [[v for v in values if v <= min_dist[i]] for i in range(n)]
    candidate_sets = [set(c) for c in candidates]

    for seq in itertools.product(range(n), repeat=n - 2):
        edges = _prufer_to_edges(seq, n)
        adj: list[list[int]] = [[] for _ in range(n)]
        for i, j in edges:
            adj[i].append(j)
            adj[j].append(i)
        # visit order: each new vertex hangs off an already-labeled one
        order = [(0, -1)]
        seen = [False] * n
        seen[0] = True
        pos = 0
        while pos < len(order):
            u, _ = order[pos]
            pos += 1
            for w in adj[u]:
                if not seen[w]:
                    seen[w] = True
                    order.append((w, u))

        labels: list[Optional[Fraction]] = [None] * n

        def assign(step: int) -> bool:
            if step == len(order):
                return _tree_labels_match(space, edges, labels, adj)
            v, parent = order[step]
            if parent < 0:
                for c in candidates[v]:
                    labels[v] = c
                    if assign(step + 1):
                        return True
                labels[v] = None
                return False
            need = space.matrix[v][parent]
            lp = labels[parent]
            if lp > need:
                return False
            if lp == need:
                options = [c for c in candidates[v] if c <= need]
            else:
                options = [need] if need in candidate_sets[v] else []
            for c in options:
                labels[v] = c
                if assign(step + 1):
                    return True
            labels[v] = None
            return False

        if assign(0):
            tree = validate_tree(
                space.points,
                [(space.points[i], space.points[j]) for i, j in edges],
                {space.points[i]: labels[i] for i in range(n)},
            )
            return tree
    return None


def _tree_labels_match(
    space: FiniteUltrametricSpace,
    edges: list[tuple[int, int]],
    labels: list,
    adj: list[list[int]],
) -> bool:
    """Full check that the labeled tree's path maxima reproduce the matrix."""
    n = space.n
    for root in range(n):
        best: list = [None] * n
        best[root] = labels[root]
        stack = [root]
        while stack:
            u = stack.pop()
            for w in adj[u]:
                if best[w] is None:
                    best[w] = best[u] if best[u] >= labels[w] else labels[w]
                    stack.append(w)
        for j in range(n):
            if j != root and best[j] != space.matrix[root][j]:
                return False
    return True


# --- partition merging ---------------------------------------------------------------

def merge_parts(parts: Sequence[Iterable]) -> tuple[tuple, tuple]:
    """Fold a partition with k >= 2 blocks into two blocks whose smaller
    side is at least as large as the smallest input block.

    Blocks are assigned largest-first to the currently lighter side, so
    each side ends up holding at least one whole block.
    """
    blocks = [tuple(sorted(b, key=repr)) for b in parts]
    if len(blocks) < 2:
        raise FewerThanTwoBlocks(len(blocks))
    if any(not b for b in blocks):
        raise ValueError("partition blocks must be non-empty")
    blocks.sort(key=lambda b: (-len(b), b))
    side_a: list = []
    side_b: list = []
    for block in blocks:
        if len(side_a) <= len(side_b):
            side_a.extend(block)
        else:
            side_b.extend(block)
    first, second = sorted(
        (tuple(sorted(side_a, key=repr)), tuple(sorted(side_b, key=repr))),
        key=lambda side: (-len(side), side),
    )
    return (first, second)


# --- random labeled trees ---------------------------------------------------------------

def random_labeled_tree(n: int, label_pool: Sequence, seed: int) -> LabeledTree:
    """Uniformly random tree shape with labels drawn from the pool.

    Degenerate edges (both endpoint labels zero) are repaired in a single
    deterministic pass by redrawing the lower endpoint from the positive
    pool values; repairs only ever raise labels, so the result is always
    non-degenerate. The pool must contain a positive value whenever
    n >= 2. Deterministic for a fixed seed.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    pool = [Fraction(v) for v in label_pool]
    if not pool:
        raise EmptyPool()
    for v in pool:
        if v < 0:
            raise NegativeInput(v)
    positive = [v for v in pool if v > 0]
    if n >= 2 and not positive:
        raise EmptyPool("label pool needs a positive value for n >= 2")

    rng = random.Random(seed)
    names = [f"v{i + 1}" for i in range(n)]
    if n == 1:
        edges: list[tuple[int, int]] = []
    elif n == 2:
        edges = [(0, 1)]
    else:
        seq = [rng.randrange(n) for _ in range(n - 2)]
        edges = _prufer_to_edges(seq, n)

    labels = [rng.choice(pool) for _ in range(n)]
    for i, j in edges:
        if labels[i] == 0 and labels[j] == 0:
            labels[i] = rng.choice(positive)
    tree = validate_tree(
        names,
        [(names[i], names[j]) for i, j in edges],
        {names[i]: labels[i] for i in range(n)},
    )
    assert is_nondegenerate(tree)
    return tree
