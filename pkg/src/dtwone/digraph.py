"""Digraphs with dense integer vertices, butterfly contractions and one-vertex
separations.

A digraph is a vertex count plus a set of ordered pairs; loops and parallel
edges are excluded.  Everything else — strong components, butterfly
contractions, tight separations and their shore contractions — is computed on
demand.  All enumeration orders are deterministic.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property


@dataclass(frozen=True)
class Digraph:
    """A finite digraph on vertices 0..n-1 without loops or parallel edges."""

    n: int
    edges: frozenset

    def __post_init__(self):
        object.__setattr__(self, "edges", frozenset(self.edges))
        for (u, v) in self.edges:
            assert 0 <= u < self.n and 0 <= v < self.n, f"edge ({u},{v}) out of range"
            assert u != v, f"loop at {u}"

    @cached_property
    def _out(self):
        adj = {u: [] for u in range(self.n)}
        for (u, v) in sorted(self.edges):
            adj[u].append(v)
        return {u: tuple(vs) for u, vs in adj.items()}

    @cached_property
    def _in(self):
        adj = {u: [] for u in range(self.n)}
        for (u, v) in sorted(self.edges):
            adj[v].append(u)
        return {u: tuple(vs) for u, vs in adj.items()}

    def out_neighbours(self, u):
        """Sorted tuple of heads of edges leaving u."""
        return self._out[u]

    def in_neighbours(self, u):
        """Sorted tuple of tails of edges entering u."""
        return self._in[u]

    def vertices(self):
        return range(self.n)

    def has_edge(self, u, v):
        return (u, v) in self.edges

    def sorted_edges(self):
        return sorted(self.edges)


def digraph_from_edges(n, edges):
    return Digraph(n, frozenset((u, v) for (u, v) in edges))


def bidirect(n, undirected_edges):
    """The bidirected digraph: every undirected edge becomes a digon."""
    es = set()
    for (u, v) in undirected_edges:
        assert u != v, f"loop at {u}"
        es.add((u, v))
        es.add((v, u))
    return Digraph(n, frozenset(es))


def directed_cycle_digraph(length):
    """The directed cycle 0 -> 1 -> ... -> length-1 -> 0."""
    assert length >= 2
    return Digraph(length, frozenset((i, (i + 1) % length) for i in range(length)))


def bicycle(length):
    """The bidirected cycle on `length` vertices (every edge a digon)."""
    assert length >= 3
    return bidirect(length, [(i, (i + 1) % length) for i in range(length)])


def a4_digraph():
    """The 4-vertex obstruction: a directed 4-cycle plus both diagonals as digons.

    Vertices 0..3 with the cycle 0->1->2->3->0, a digon between 1 and 3 and a
    digon between 0 and 2.
    """
    return Digraph(
        4,
        frozenset(
            [(0, 1), (1, 2), (2, 3), (3, 0), (1, 3), (3, 1), (0, 2), (2, 0)]
        ),
    )


def strong_components(d):
    """Strong components of d in reverse topological order of the condensation.

    The first component returned is a sink of the condensation; for the single
    edge a->b the result is [{b}, {a}].  Deterministic: Tarjan's algorithm with
    vertices visited in increasing order and sorted adjacency.
    """
    n = d.n
    index = [None] * n
    low = [0] * n
    on_stack = [False] * n
    stack = []
    comps = []
    counter = 0
    for root in range(n):
        if index[root] is not None:
            continue
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = True
        work = [(root, iter(d.out_neighbours(root)))]
        while work:
            v, it = work[-1]
            pushed = False
            for w in it:
                if index[w] is None:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack[w] = True
                    work.append((w, iter(d.out_neighbours(w))))
                    pushed = True
                    break
                if on_stack[w] and index[w] < low[v]:
                    low[v] = index[w]
            if pushed:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                if low[v] < low[parent]:
                    low[parent] = low[v]
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp.append(w)
                    if w == v:
                        break
                comps.append(frozenset(comp))
    return comps


def is_strongly_connected(d):
    if d.n <= 1:
        return True
    return len(strong_components(d)) == 1


def induced_subgraph(d, keep):
    """Induced subgraph on `keep`, with dense renaming.

    Returns (subgraph, old_ids) where old_ids[new] is the original vertex.
    """
    old_ids = tuple(sorted(keep))
    new_of = {old: new for new, old in enumerate(old_ids)}
    es = frozenset(
        (new_of[u], new_of[v]) for (u, v) in d.edges if u in new_of and v in new_of
    )
    return Digraph(len(old_ids), es), old_ids


def delete_vertex(d, v):
    """d - v with dense renaming; returns (subgraph, old_ids)."""
    return induced_subgraph(d, [u for u in range(d.n) if u != v])


def reachable_from(d, sources):
    """All vertices reachable from `sources` (including them)."""
    seen = set(sources)
    frontier = list(seen)
    while frontier:
        u = frontier.pop()
        for w in d.out_neighbours(u):
            if w not in seen:
                seen.add(w)
                frontier.append(w)
    return frozenset(seen)


def reaching(d, targets):
    """All vertices with a directed path into `targets` (including them)."""
    seen = set(targets)
    frontier = list(seen)
    while frontier:
        u = frontier.pop()
        for w in d.in_neighbours(u):
            if w not in seen:
                seen.add(w)
                frontier.append(w)
    return frozenset(seen)


def butterfly_contractible(d, edge):
    """An edge (u,v) is butterfly contractible if it is the unique edge leaving
    u or the unique edge entering v."""
    (u, v) = edge
    assert edge in d.edges, f"edge {edge} not present"
    return len(d.out_neighbours(u)) == 1 or len(d.in_neighbours(v)) == 1


def butterfly_contract(d, edge):
    """Contract a butterfly-contractible edge (u,v).

    The merged vertex keeps the smaller of the two ids; ids are then renamed to
    stay dense.  Returns (contracted digraph, mapping) with mapping[old] = new.
    """
    (u, v) = edge
    assert butterfly_contractible(d, edge), f"edge {edge} is not butterfly contractible"
    keep, gone = min(u, v), max(u, v)
    mapping = []
    for x in range(d.n):
        if x == gone:
            mapping.append(keep if keep < gone else keep - 1)
        elif x < gone:
            mapping.append(x)
        else:
            mapping.append(x - 1)
    # after deleting `gone`, all ids above shift down; `keep` is below `gone`
    es = set()
    for (a, b) in d.edges:
        a2 = mapping[keep] if a in (u, v) else mapping[a]
        b2 = mapping[keep] if b in (u, v) else mapping[b]
        if a2 != b2:
            es.add((a2, b2))
    return Digraph(d.n - 1, frozenset(es)), tuple(mapping)


@dataclass(frozen=True)
class TightSeparation:
    """A directed separation of order one.

    shoreA and shoreB cover all vertices, meet in exactly the cut vertex, and
    no edge runs from shoreB-only to shoreA-only (edges cross A -> B).
    """

    shoreA: frozenset
    shoreB: frozenset

    @property
    def cut_vertex(self):
        (c,) = self.shoreA & self.shoreB
        return c

    def sort_key(self):
        return (tuple(sorted(self.shoreA)), tuple(sorted(self.shoreB)))


def is_directed_separation(d, shore_a, shore_b):
    """True if (shore_a, shore_b) covers V and no edge runs from B-only to A-only."""
    if frozenset(shore_a) | frozenset(shore_b) != frozenset(range(d.n)):
        return False
    a_only = frozenset(shore_a) - frozenset(shore_b)
    b_only = frozenset(shore_b) - frozenset(shore_a)
    return not any(u in b_only and v in a_only for (u, v) in d.edges)


def separations_cross(s, t):
    """Crossing test on stored orientations: (A,B) and (C,D) cross when A∩C,
    B∩D, (A∩D)∖(B∩C) and (B∩C)∖(A∩D) are all non-empty."""
    a, b = s.shoreA, s.shoreB
    c, dd = t.shoreA, t.shoreB
    return bool(a & c) and bool(b & dd) and bool((a & dd) - (b & c)) and bool((b & c) - (a & dd))


def tight_separations(d, non_trivial_only=True):
    """All tight separations of a strongly connected digraph arising from single
    cut vertices.

    For each vertex v whose removal leaves several strong components and each
    component K of d - v: if some other component has a path to K, the shore X
    is the union of all components reachable from K (including K); otherwise
    X is K alone.  The rest of d - v is Y, and the separation pairs Y+v against
    X+v with separator {v}.  Results are deduplicated by unordered shore pair,
    stored in the valid orientation (edges crossing from the first shore to the
    second; lexicographically smaller first shore when both orientations are
    valid) and sorted.  With non_trivial_only both shores must have >= 2
    vertices, which here just excludes the Y = empty case.
    """
    found = {}
    for v in range(d.n):
        sub, old_ids = delete_vertex(d, v)
        comps = [frozenset(old_ids[i] for i in comp) for comp in strong_components(sub)]
        if len(comps) <= 1:
            continue
        comp_of = {}
        for ci, comp in enumerate(comps):
            for u in comp:
                comp_of[u] = ci
        # condensation adjacency of d - v
        succ = {ci: set() for ci in range(len(comps))}
        pred = {ci: set() for ci in range(len(comps))}
        for (a, b) in d.edges:
            if a == v or b == v:
                continue
            ca, cb = comp_of[a], comp_of[b]
            if ca != cb:
                succ[ca].add(cb)
                pred[cb].add(ca)
        for ci in sorted(range(len(comps)), key=lambda i: min(comps[i])):
            if pred[ci]:
                closure = set()
                frontier = [ci]
                while frontier:
                    cj = frontier.pop()
                    if cj in closure:
                        continue
                    closure.add(cj)
                    frontier.extend(succ[cj])
                x = frozenset().union(*(comps[cj] for cj in closure))
            else:
                x = comps[ci]
            y = frozenset(u for u in range(d.n) if u != v) - x
            if not y and non_trivial_only:
                continue
            p = y | {v}
            q = x | {v}
            key = frozenset((p, q))
            if key in found:
                continue
            pq_valid = is_directed_separation(d, p, q)
            qp_valid = is_directed_separation(d, q, p)
            assert pq_valid or qp_valid, "constructed shores admit no valid orientation"
            if pq_valid and qp_valid:
                first, second = sorted((p, q), key=lambda s: tuple(sorted(s)))
            elif pq_valid:
                first, second = p, q
            else:
                first, second = q, p
            found[key] = TightSeparation(first, second)
    return sorted(found.values(), key=TightSeparation.sort_key)


def contract_shore(d, sep, shore):
    """Contract one shore of a tight separation onto its cut vertex.

    `shore` is "A" or "B".  Returns (contracted digraph, mapping) with
    mapping[old] = new dense id; all vertices of the contracted shore map to
    the cut vertex's new id.
    """
    assert shore in ("A", "B")
    s = sep.shoreA if shore == "A" else sep.shoreB
    c = sep.cut_vertex
    keep = sorted((set(range(d.n)) - s) | {c})
    new_of = {old: new for new, old in enumerate(keep)}
    mapping = tuple(new_of[x] if x not in s else new_of[c] for x in range(d.n))
    es = set()
    for (a, b) in d.edges:
        a2, b2 = mapping[a], mapping[b]
        if a2 != b2:
            es.add((a2, b2))
    return Digraph(len(keep), frozenset(es)), mapping


def is_strongly_2_connected(d):
    """True if d stays strongly connected after deleting any single vertex.

    Digraphs on at most two vertices count as strongly 2-connected.
    """
    if d.n <= 2:
        return True
    if not is_strongly_connected(d):
        return False
    for v in range(d.n):
        sub, _ = delete_vertex(d, v)
        if not is_strongly_connected(sub):
            return False
    return True


def butterfly_dominating_vertices(d):
    """Vertices incident with every butterfly-contractible edge, subject to the
    degree proviso.

    A vertex v qualifies when (i) every contractible edge has v as an endpoint
    and (ii) if v has both an incoming and an outgoing contractible edge, then
    v has exactly one in-edge or exactly one out-edge.  With no contractible
    edge at all, every vertex qualifies.
    """
    contractible = [e for e in d.sorted_edges() if butterfly_contractible(d, e)]
    if not contractible:
        return frozenset(range(d.n))
    result = set()
    for v in range(d.n):
        if not all(v in e for e in contractible):
            continue
        has_in = any(h == v for (_, h) in contractible)
        has_out = any(t == v for (t, _) in contractible)
        if has_in and has_out:
            if len(d.in_neighbours(v)) == 1 or len(d.out_neighbours(v)) == 1:
                result.add(v)
        else:
            result.add(v)
    return frozenset(result)


def all_subsets(items, max_size):
    """Subsets of `items` by increasing size, lexicographic within each size."""
    ordered = sorted(items)
    for size in range(max_size + 1):
        for combo in itertools.combinations(ordered, size):
            yield frozenset(combo)
