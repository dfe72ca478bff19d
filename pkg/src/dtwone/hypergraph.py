"""Hypergraphs and the machinery around them: dual, 2-section, line graph,
acyclicity, the Helly property, host-tree witnesses, and exact small-instance
oracles for hypertree width and hyperbranch width.

Vertex ids must be pairwise sortable (all ints or all strings); hyperedges are
frozensets and may repeat — a repeated vertex set counts as a distinct
hyperedge.  Isolated vertices are not allowed, the empty hypergraph is.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property

from .digraph import all_subsets
from .errors import InstanceTooLarge

EXACT_HW_SIZE_GUARD = 12  # |V| + |E| limit for the exact hypertree-width oracle
EXACT_HBW_MAX_EDGES = 7  # hyperedge (= leaf) limit for the exact hbw oracle


@dataclass(frozen=True)
class Hypergraph:
    """A finite hypergraph with ordered vertices and an ordered edge multiset.

    `labels`, when present, carries one provenance tag per hyperedge (such as
    the originating vertex of a dual edge).
    """

    vertices: tuple
    edges: tuple
    labels: tuple | None = None

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "edges", tuple(frozenset(e) for e in self.edges))
        vs = set(self.vertices)
        assert len(vs) == len(self.vertices), "duplicate vertex ids"
        covered = set()
        for e in self.edges:
            assert e, "empty hyperedge"
            assert e <= vs, f"hyperedge {sorted(e)} uses undeclared vertices"
            covered |= e
        assert covered == vs, "isolated vertices are not allowed"
        if self.labels is not None:
            object.__setattr__(self, "labels", tuple(self.labels))
            assert len(self.labels) == len(self.edges), "one label per hyperedge"


def hypergraph_from_edges(edges, labels=None):
    """Hypergraph on the sorted union of the given hyperedges."""
    es = tuple(frozenset(e) for e in edges)
    vs = tuple(sorted(set().union(*es))) if es else ()
    return Hypergraph(vs, es, labels)


@dataclass(frozen=True)
class UGraph:
    """An undirected loop-free graph; isolated vertices are permitted here."""

    vertices: tuple
    edges: frozenset

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(
            self, "edges", frozenset(frozenset(e) for e in self.edges)
        )
        vs = set(self.vertices)
        for e in self.edges:
            assert len(e) == 2, f"not an undirected edge: {sorted(e)}"
            assert e <= vs, f"edge {sorted(e)} uses undeclared vertices"

    @cached_property
    def _adj(self):
        adj = {v: set() for v in self.vertices}
        for e in self.edges:
            u, v = sorted(e)
            adj[u].add(v)
            adj[v].add(u)
        return {v: tuple(sorted(ns)) for v, ns in adj.items()}

    def neighbours(self, v):
        return self._adj[v]

    def has_edge(self, u, v):
        return frozenset((u, v)) in self.edges


def dual(h):
    """The dual hypergraph: one vertex per hyperedge index of h, and for every
    vertex v of h one hyperedge e_v collecting the indices of the hyperedges
    containing v.  Labels record the originating vertices."""
    es = tuple(
        frozenset(i for i, e in enumerate(h.edges) if v in e) for v in h.vertices
    )
    return Hypergraph(tuple(range(len(h.edges))), es, labels=tuple(h.vertices))


def two_section(h):
    """The 2-section: u and v are adjacent iff some hyperedge contains both."""
    es = set()
    for e in h.edges:
        for pair in itertools.combinations(sorted(e), 2):
            es.add(frozenset(pair))
    return UGraph(h.vertices, frozenset(es))


def line_graph(h):
    """The intersection graph of the hyperedges, one vertex per edge index."""
    m = len(h.edges)
    es = frozenset(
        frozenset((i, j))
        for i, j in itertools.combinations(range(m), 2)
        if h.edges[i] & h.edges[j]
    )
    return UGraph(tuple(range(m)), es)


def is_alpha_acyclic(h):
    """Reduction test for acyclicity: repeatedly drop vertices lying in at most
    one live edge and edges contained in other live edges (equal edges keep the
    lowest index); acyclic iff nothing remains."""
    live = {i: set(e) for i, e in enumerate(h.edges)}
    while True:
        changed = False
        count = {}
        for e in live.values():
            for v in e:
                count[v] = count.get(v, 0) + 1
        for i in sorted(live):
            rare = {v for v in live[i] if count[v] <= 1}
            if rare:
                live[i] -= rare
                changed = True
        for i in sorted(live):
            if not live[i]:
                del live[i]
                changed = True
        for i in sorted(live):
            if i not in live:
                continue
            swallowed = any(
                j != i and (live[i] < live[j] or (live[i] == live[j] and i > j))
                for j in live
            )
            if swallowed:
                del live[i]
                changed = True
        if not changed:
            return not live


def has_helly(h):
    """True if every family of pairwise intersecting hyperedges has a common
    vertex.

    Searches for a violating family depth-first in index order, carrying the
    running intersection; the first time the intersection of a pairwise
    intersecting family empties, a violation is found.
    """
    edges = h.edges
    m = len(edges)

    def violation(members, core):
        start = members[-1] + 1 if members else 0
        for j in range(start, m):
            ej = edges[j]
            if not all(ej & edges[i] for i in members):
                continue
            new_core = core & ej if members else ej
            if not new_core:
                return True
            members.append(j)
            if violation(members, new_core):
                return True
            members.pop()
        return False

    return not violation([], frozenset())


def is_chordal(g):
    """Chordality via maximum-cardinality search and a perfect-elimination
    check; ties are broken towards the earlier vertex in g.vertices."""
    position = {v: i for i, v in enumerate(g.vertices)}
    weight = {v: 0 for v in g.vertices}
    numbered = {}
    seq = []
    for _ in range(len(g.vertices)):
        v = max(
            (u for u in g.vertices if u not in numbered),
            key=lambda u: (weight[u], -position[u]),
        )
        numbered[v] = len(seq)
        seq.append(v)
        for w in g.neighbours(v):
            if w not in numbered:
                weight[w] += 1
    # Earlier-numbered neighbours of each vertex must form a clique, which
    # reduces to: all of them are adjacent to the latest-numbered one.
    for v in seq:
        earlier = [w for w in g.neighbours(v) if numbered[w] < numbered[v]]
        if not earlier:
            continue
        last = max(earlier, key=lambda w: numbered[w])
        for w in earlier:
            if w != last and not g.has_edge(w, last):
                return False
    return True


def _maximal_cliques(g):
    """All maximal cliques (Bron–Kerbosch, no pivoting, deterministic)."""
    if not g.vertices:
        return []
    adj = {v: set(g.neighbours(v)) for v in g.vertices}
    out = []

    def grow(clique, candidates, used):
        if not candidates and not used:
            out.append(frozenset(clique))
            return
        for v in sorted(candidates):
            grow(clique | {v}, candidates & adj[v], used & adj[v])
            candidates = candidates - {v}
            used = used | {v}

    grow(set(), set(g.vertices), set())
    return out


def is_conformal(h):
    """True if every maximal clique of the 2-section is a hyperedge."""
    present = set(h.edges)
    return all(c in present for c in _maximal_cliques(two_section(h)))


@dataclass(frozen=True)
class JoinTreeWitness:
    """A host tree on the hypergraph's vertices in which every hyperedge
    induces a subtree; subtrees lists the hyperedges themselves, in order."""

    tree: UGraph
    subtrees: tuple


def _connected_in(g, subset):
    subset = set(subset)
    if len(subset) <= 1:
        return True
    start = min(subset)
    seen = {start}
    stack = [start]
    while stack:
        u = stack.pop()
        for w in g.neighbours(u):
            if w in subset and w not in seen:
                seen.add(w)
                stack.append(w)
    return seen == subset


def hypertree_witness(h):
    """A host tree in which every hyperedge induces a subtree, if one exists.

    Construction: a maximum-weight spanning tree over all vertex pairs,
    weighted by the number of shared hyperedges (Kruskal; ties broken by the
    vertex pair), then verified edge by edge.  A maximum-weight tree is a
    valid host whenever any valid host exists, so failed verification means
    none exists.
    """
    vs = sorted(h.vertices)
    if not vs:
        return JoinTreeWitness(UGraph((), frozenset()), tuple(h.edges))
    ranked = sorted(
        (-sum(1 for e in h.edges if u in e and v in e), u, v)
        for u, v in itertools.combinations(vs, 2)
    )
    parent = {v: v for v in vs}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    tree_edges = set()
    for _, u, v in ranked:
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[ru] = rv
            tree_edges.add(frozenset((u, v)))
    tree = UGraph(tuple(vs), frozenset(tree_edges))
    for e in h.edges:
        if not _connected_in(tree, e):
            return None
    return JoinTreeWitness(tree, tuple(h.edges))


@dataclass(frozen=True)
class HypertreeDecomposition:
    """A (generalised) hypertree decomposition: a rooted tree with a vertex bag
    and a guard set of hyperedge indices per node.

    Arcs run (parent, child).  The generalised reading ignores the rooting;
    the stricter reading additionally requires the descendant condition — see
    the validators in the decomp module.
    """

    nodes: tuple
    arcs: tuple
    bags: dict
    guards: dict

    @property
    def width(self):
        return max((len(self.guards[t]) for t in self.nodes), default=0)


def _width_one_decomposition(h):
    """A hypertree decomposition of width 1 for an acyclic hypergraph: a join
    tree over the hyperedge indices, each node guarded by its own edge."""
    m = len(h.edges)
    ranked = sorted(
        (-len(h.edges[i] & h.edges[j]), i, j)
        for i, j in itertools.combinations(range(m), 2)
    )
    parent = list(range(m))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    adj = {i: set() for i in range(m)}
    for _, i, j in ranked:
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[ri] = rj
            adj[i].add(j)
            adj[j].add(i)
    holders = UGraph(
        tuple(range(m)),
        frozenset(frozenset((i, j)) for i in range(m) for j in adj[i]),
    )
    for v in h.vertices:
        assert _connected_in(
            holders, {i for i in range(m) if v in h.edges[i]}
        ), "maximum-weight tree failed to connect an edge's holders"
    arcs = []
    seen = {0}
    queue = [0]
    while queue:
        t = queue.pop(0)
        for c in sorted(adj[t]):
            if c not in seen:
                seen.add(c)
                arcs.append((t, c))
                queue.append(c)
    return HypertreeDecomposition(
        nodes=tuple(range(m)),
        arcs=tuple(arcs),
        bags={i: h.edges[i] for i in range(m)},
        guards={i: frozenset((i,)) for i in range(m)},
    )


def _vertex_components(adj, rest):
    """Connected pieces of `rest` under the adjacency map, sorted by minimum."""
    rest = set(rest)
    pieces = []
    while rest:
        start = min(rest)
        comp = {start}
        stack = [start]
        while stack:
            u = stack.pop()
            for w in adj[u]:
                if w in rest and w not in comp:
                    comp.add(w)
                    stack.append(w)
        pieces.append(frozenset(comp))
        rest -= comp
    return sorted(pieces, key=min)


def _bounded_width_decomposition(h, k):
    """A guard-first exhaustive search for a hypertree decomposition of width
    at most k, as nested (bag, guard, children) templates; None if impossible.

    Subproblems are (component, connector) pairs: the component still to be
    covered and the bag vertices of the parent it attaches to.  Guards are
    tried by increasing size, then lexicographically.
    """
    sec = two_section(h)
    adj = {v: set(sec.neighbours(v)) for v in h.vertices}
    m = len(h.edges)
    candidates = [g for g in all_subsets(range(m), k) if g]
    memo = {}

    def solve(comp, conn):
        key = (comp, conn)
        if key in memo:
            return memo[key]
        result = None
        for gamma in candidates:
            union = frozenset().union(*(h.edges[i] for i in gamma))
            if not conn <= union:
                continue
            bag = union & (comp | conn)
            if not bag & comp:
                continue
            children = []
            for sub in _vertex_components(adj, comp - bag):
                reach = frozenset().union(*(adj[v] for v in sub))
                child = solve(sub, frozenset(bag & reach))
                if child is None:
                    break
                children.append(child)
            else:
                result = (bag, gamma, tuple(children))
                break
        memo[key] = result
        return result

    top = []
    for comp in _vertex_components(adj, h.vertices):
        t = solve(comp, frozenset())
        if t is None:
            return None
        top.append(t)

    nodes = []
    arcs = []
    bags = {}
    guards = {}

    def build(template, parent):
        bag, gamma, children = template
        t = len(nodes)
        nodes.append(t)
        bags[t] = frozenset(bag)
        guards[t] = frozenset(gamma)
        if parent is not None:
            arcs.append((parent, t))
        for c in children:
            build(c, t)
        return t

    root = build(top[0], None)
    for extra in top[1:]:
        build(extra, root)
    return HypertreeDecomposition(
        nodes=tuple(nodes), arcs=tuple(arcs), bags=bags, guards=guards
    )


def exact_hw(h, k_max):
    """Minimum hypertree width with a witnessing decomposition, as a pair
    (width, decomposition); None if the width exceeds k_max.

    Width 1 is decided by the reduction characterisation and witnessed by a
    join tree over the hyperedges; larger widths by the guard-first search.
    Guarded to small instances.
    """
    if len(h.vertices) + len(h.edges) > EXACT_HW_SIZE_GUARD:
        raise InstanceTooLarge(
            f"exact hypertree width limited to |V|+|E| <= {EXACT_HW_SIZE_GUARD}, "
            f"got {len(h.vertices)}+{len(h.edges)}"
        )
    if not h.edges:
        return 0, HypertreeDecomposition((), (), {}, {})
    if k_max < 1:
        return None
    if is_alpha_acyclic(h):
        return 1, _width_one_decomposition(h)
    for k in range(2, k_max + 1):
        dec = _bounded_width_decomposition(h, k)
        if dec is not None:
            from .decomp import validate_hd

            report = validate_hd(h, dec)
            assert report.valid, f"search produced an invalid decomposition: {report.violations}"
            assert dec.width == k
            return k, dec
    return None


def leaf_labeled_subcubic_trees(m):
    """All leaf-labelled subcubic trees with leaves 0..m−1, as sorted edge
    tuples; internal nodes are m..2m−3.

    Generated by iterated leaf insertion (subdivide an edge, hang the new
    leaf), which yields each tree exactly once: (2m−5)!! trees for m ≥ 3.
    """
    if m <= 1:
        yield ()
        return
    trees = [((0, 1),)]
    for leaf in range(2, m):
        new = m + leaf - 2
        grown = []
        for t in trees:
            for i in range(len(t)):
                a, b = t[i]
                rest = t[:i] + t[i + 1 :]
                grown.append(
                    tuple(
                        sorted(
                            rest
                            + (
                                tuple(sorted((a, new))),
                                tuple(sorted((b, new))),
                                (leaf, new),
                            )
                        )
                    )
                )
        trees = grown
    yield from trees


def _tree_sides(edges):
    """For each edge (a, b) of a tree, the set of nodes on the a-side after
    removing that edge, as a dict edge -> frozenset of nodes."""
    adj = {}
    for a, b in edges:
        adj.setdefault(a, set()).add(b)
        adj.setdefault(b, set()).add(a)
    sides = {}
    for a, b in edges:
        seen = {a}
        stack = [a]
        while stack:
            u = stack.pop()
            for w in adj[u]:
                if w not in seen and {u, w} != {a, b}:
                    seen.add(w)
                    stack.append(w)
        sides[(a, b)] = frozenset(seen)
    return sides


def exact_hbw(h, k_max):
    """Minimum hyperbranch width with an optimal decomposition, as a pair
    (width, decomposition); None if the width exceeds k_max.

    Exhaustive over all leaf-labelled subcubic trees on the hyperedges; the
    thickness of a tree edge is the least number of hyperedges covering the
    boundary between the two sides, memoised per boundary.
    """
    from .decomp import HyperbranchDecomposition

    m = len(h.edges)
    if m > EXACT_HBW_MAX_EDGES:
        raise InstanceTooLarge(
            f"exact hyperbranch width limited to {EXACT_HBW_MAX_EDGES} hyperedges, got {m}"
        )
    if m <= 1:
        dec = HyperbranchDecomposition(
            ground=h,
            nodes=(0,) if m else (),
            edges=(),
            leaf_edge={0: 0} if m else {},
            cover_sets={},
        )
        return 0, dec
    all_indices = frozenset(range(m))
    cover_memo = {}

    def min_cover(boundary):
        if boundary in cover_memo:
            return cover_memo[boundary]
        for s in all_subsets(range(m), m):
            if boundary <= frozenset().union(*(h.edges[i] for i in s)):
                cover_memo[boundary] = s
                return s
        raise AssertionError("the full edge set always covers")

    best = None
    for edges in leaf_labeled_subcubic_trees(m):
        sides = _tree_sides(edges)
        width = 0
        covers = {}
        for e in edges:
            side = frozenset(x for x in sides[e] if x < m)
            other = all_indices - side
            boundary = frozenset().union(
                *(h.edges[i] for i in side)
            ) & frozenset().union(*(h.edges[i] for i in other))
            cover = min_cover(boundary)
            covers[e] = cover
            width = max(width, len(cover))
        if best is None or width < best[0]:
            best = (width, edges, covers)
    width, edges, covers = best
    if width > k_max:
        return None
    nodes = tuple(sorted({x for e in edges for x in e}))
    dec = HyperbranchDecomposition(
        ground=h,
        nodes=nodes,
        edges=edges,
        leaf_edge={i: i for i in range(m)},
        cover_sets={e: frozenset(c) for e, c in covers.items()},
    )
    return width, dec
