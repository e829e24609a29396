"""Topologically stable Poisson structures on surfaces, as labeled graphs.

A structure is encoded by an oriented multigraph: one vertex per
two-dimensional leaf (labeled by its genus), one edge per zero curve
(labeled by its modular period), the edge pointing toward the side where
the structure is positive.  Loops and parallel edges are allowed.  An
optional regularized volume completes the invariants for the Poisson
isomorphism test.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations, product

from .errors import InconsistentTopology, MissingVolume
from .groups import FiniteGroup
from .report import ValidationReport


class LabeledSurfaceGraph:
    """Oriented labeled multigraph; vertices and edges canonically ordered.

    Edges are stored as (tail index, head index, period) triples sorted
    lexicographically, so edge indices are stable under reconstruction.
    """

    def __init__(self, vertices, genus, edges, volume=None):
        self.vertices = tuple(sorted(str(v) for v in vertices))
        if len(set(self.vertices)) != len(self.vertices):
            raise ValueError("duplicate vertex ids")
        self.v_index = {v: i for i, v in enumerate(self.vertices)}
        try:
            self.genus = tuple(int(genus[v]) for v in self.vertices)
        except KeyError as exc:
            raise ValueError(f"genus missing for vertex {exc}") from None
        try:
            canon = sorted((self.v_index[t], self.v_index[h], float(p))
                           for (t, h, p) in edges)
        except KeyError as exc:
            raise ValueError(f"edge endpoint unknown: {exc}") from None
        self.edges = tuple(canon)
        self.volume = None if volume is None else float(volume)

    @property
    def n_vertices(self):
        return len(self.vertices)

    @property
    def n_edges(self):
        return len(self.edges)

    def degree(self, v: int) -> int:
        """Boundary-circle count of the leaf: loops count twice."""
        return sum((t == v) + (h == v) for (t, h, _) in self.edges)

    def euler_characteristic(self) -> int:
        return sum(2 - 2 * self.genus[v] - self.degree(v)
                   for v in range(self.n_vertices))

    def reversed_orientation(self) -> "LabeledSurfaceGraph":
        """The same graph with every edge flipped (a non-invariant extra)."""
        genus = {v: self.genus[i] for i, v in enumerate(self.vertices)}
        edges = [(self.vertices[h], self.vertices[t], p) for (t, h, p) in self.edges]
        return LabeledSurfaceGraph(self.vertices, genus, edges, self.volume)

    def __repr__(self):
        return (f"LabeledSurfaceGraph(vertices={self.n_vertices}, "
                f"edges={self.n_edges})")


@dataclass(frozen=True)
class TssIsomorphism:
    """A vertex bijection plus an edge bijection, both index-level."""

    vertex_map: tuple[int, ...]
    edge_map: tuple[int, ...]

    def compose(self, other: "TssIsomorphism") -> "TssIsomorphism":
        """self after other (other maps A->B, self maps B->C)."""
        return TssIsomorphism(
            tuple(self.vertex_map[v] for v in other.vertex_map),
            tuple(self.edge_map[e] for e in other.edge_map))

    def inverse(self) -> "TssIsomorphism":
        vm = [0] * len(self.vertex_map)
        em = [0] * len(self.edge_map)
        for i, v in enumerate(self.vertex_map):
            vm[v] = i
        for i, e in enumerate(self.edge_map):
            em[e] = i
        return TssIsomorphism(tuple(vm), tuple(em))


@dataclass(frozen=True)
class PicardIngredients:
    """The three structural pieces the Picard group of a TSS is built from."""

    graph_aut: FiniteGroup
    torus_rank: int
    leaf_descriptors: tuple[tuple[int, int], ...]  # (genus, boundary count)


def validate_tss(g: LabeledSurfaceGraph) -> ValidationReport:
    report = ValidationReport()
    if g.n_vertices == 0:
        report.add("nonempty")
        return report
    parent = list(range(g.n_vertices))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for (t, h, _) in g.edges:
        rt, rh = find(t), find(h)
        if rt != rh:
            parent[max(rt, rh)] = min(rt, rh)
    if len({find(v) for v in range(g.n_vertices)}) > 1:
        report.add("connected")
    for i, (t, h, p) in enumerate(g.edges):
        if not p > 0:
            report.add("period-positive", g.vertices[t], g.vertices[h], p)
    for v in range(g.n_vertices):
        if g.genus[v] < 0:
            report.add("genus-nonnegative", g.vertices[v])
    chi = g.euler_characteristic()
    if chi % 2 != 0:
        report.add("euler-even", chi)
    elif chi > 2:
        report.add("euler-at-most-2", chi)
    return report


def surface_genus(g: LabeledSurfaceGraph) -> int:
    """Genus of the closed surface, recovered from Euler characteristic.

    Zero curves contribute no Euler characteristic, so chi is the sum of
    the open-leaf contributions 2 - 2 genus - boundary count.
    """
    chi = g.euler_characteristic()
    if chi % 2 != 0 or chi > 2:
        raise InconsistentTopology(f"Euler characteristic {chi} is not that "
                                   "of a closed oriented surface")
    return (2 - chi) // 2


# ---------------------------------------------------------------------------
# labeled-graph isomorphism

def _edge_groups(g: LabeledSurfaceGraph) -> dict:
    groups = {}
    for i, (t, h, p) in enumerate(g.edges):
        groups.setdefault((t, h), []).append(i)
    return groups


def _vertex_signature(g: LabeledSurfaceGraph, v: int, exact_periods: bool):
    out = sorted(p for (t, h, p) in g.edges if t == v)
    inc = sorted(p for (t, h, p) in g.edges if h == v)
    loops = sum(1 for (t, h, _) in g.edges if t == h == v)
    if exact_periods:
        return (g.genus[v], len(out), len(inc), loops, tuple(out), tuple(inc))
    return (g.genus[v], len(out), len(inc), loops)


def _match_periods(ps1, ps2, tol):
    """Match two sorted period lists pairwise within tol."""
    if len(ps1) != len(ps2):
        return False
    return all(abs(a - b) <= tol for a, b in zip(ps1, ps2))


def _edge_bijection(g1, g2, vmap, tol):
    """Edge map induced by a vertex bijection, or None.

    Within each ordered vertex pair, edges are matched in period order;
    for a uniform tolerance on the line, the sorted pairing succeeds
    whenever any pairing does.
    """
    groups1 = _edge_groups(g1)
    groups2 = _edge_groups(g2)
    mapped = {(vmap[t], vmap[h]): idxs for (t, h), idxs in groups1.items()}
    if set(mapped) != set(groups2):
        return None
    edge_map = [None] * g1.n_edges
    for key, idxs1 in mapped.items():
        idxs2 = groups2[key]
        if len(idxs1) != len(idxs2):
            return None
        by_p1 = sorted(idxs1, key=lambda i: g1.edges[i][2])
        by_p2 = sorted(idxs2, key=lambda i: g2.edges[i][2])
        for a, b in zip(by_p1, by_p2):
            if abs(g1.edges[a][2] - g2.edges[b][2]) > tol:
                return None
            edge_map[a] = b
    return tuple(edge_map)


def _isomorphisms(g1, g2, tol, first_only=True):
    if g1.n_vertices != g2.n_vertices or g1.n_edges != g2.n_edges:
        return []
    exact = tol == 0
    sig1 = [_vertex_signature(g1, v, exact) for v in range(g1.n_vertices)]
    sig2 = [_vertex_signature(g2, v, exact) for v in range(g2.n_vertices)]
    if sorted(sig1) != sorted(sig2):
        return []
    candidates = [[w for w in range(g2.n_vertices) if sig2[w] == sig1[v]]
                  for v in range(g1.n_vertices)]
    order = sorted(range(g1.n_vertices), key=lambda v: len(candidates[v]))
    results = []
    vmap = [None] * g1.n_vertices

    def backtrack(k, used):
        if results and first_only:
            return
        if k == g1.n_vertices:
            emap = _edge_bijection(g1, g2, tuple(vmap), tol)
            if emap is not None:
                results.append(TssIsomorphism(tuple(vmap), emap))
            return
        v = order[k]
        for w in candidates[v]:
            if w in used:
                continue
            vmap[v] = w
            backtrack(k + 1, used | {w})
            vmap[v] = None

    backtrack(0, frozenset())
    return results


def morita_equivalent_tss(g1: LabeledSurfaceGraph, g2: LabeledSurfaceGraph,
                          period_tolerance: float = 0.0) -> TssIsomorphism | None:
    """Labeled-graph isomorphism preserving orientation, genus and periods."""
    found = _isomorphisms(g1, g2, period_tolerance, first_only=True)
    return found[0] if found else None


def gauge_equivalent_tss(g1: LabeledSurfaceGraph, g2: LabeledSurfaceGraph,
                         tol: float = 0.0) -> TssIsomorphism | None:
    """Gauge equivalence coincides with Morita equivalence for these graphs."""
    return morita_equivalent_tss(g1, g2, tol)


def poisson_isomorphic_tss(g1: LabeledSurfaceGraph, g2: LabeledSurfaceGraph,
                           tol: float = 0.0) -> TssIsomorphism | None:
    """Morita equivalence plus agreement of the regularized volume."""
    if g1.volume is None or g2.volume is None:
        raise MissingVolume("both graphs need a volume invariant")
    if abs(g1.volume - g2.volume) > tol:
        return None
    return morita_equivalent_tss(g1, g2, tol)


def graph_automorphisms(g: LabeledSurfaceGraph) -> FiniteGroup:
    """Label-preserving automorphisms, including parallel-edge swaps."""
    vertex_autos = _isomorphisms(g, g, 0.0, first_only=False)
    # expand each vertex automorphism by all period-preserving edge bijections
    autos = set()
    groups = _edge_groups(g)
    for iso in vertex_autos:
        vmap = iso.vertex_map
        per_group = []
        keys = sorted(groups)
        for key in keys:
            idxs1 = groups[key]
            t, h = key
            idxs2 = groups[(vmap[t], vmap[h])]
            options = []
            for perm in permutations(idxs2):
                if all(g.edges[a][2] == g.edges[b][2]
                       for a, b in zip(idxs1, perm)):
                    options.append(perm)
            per_group.append((idxs1, options))
        for combo in product(*(opts for _, opts in per_group)):
            emap = [None] * g.n_edges
            for (idxs1, _), perm in zip(per_group, combo):
                for a, b in zip(idxs1, perm):
                    emap[a] = b
            autos.add((vmap, tuple(emap)))
    autos = sorted(autos)
    payload = [TssIsomorphism(vm, em) for vm, em in autos]
    index = {a: i for i, a in enumerate(autos)}
    n = len(autos)
    table = [[index[(payload[i].compose(payload[j]).vertex_map,
                     payload[i].compose(payload[j]).edge_map)]
              for j in range(n)] for i in range(n)]
    names = [f"g{i:03d}" for i in range(n)]
    return FiniteGroup(names, table, payload=payload)


def picard_ingredients(g: LabeledSurfaceGraph) -> PicardIngredients:
    """Emit the ingredients only; how they combine is an open problem."""
    descriptors = tuple((g.genus[v], g.degree(v)) for v in range(g.n_vertices))
    return PicardIngredients(graph_automorphisms(g), g.n_edges, descriptors)
