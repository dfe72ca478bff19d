"""Decomposition types and validators for digraphs and hypergraphs, plus the
conversions linking directed tree decompositions, directed branch
decompositions and decompositions of the dual cycle hypergraph."""

from __future__ import annotations

from dataclasses import dataclass

from .cycles import DEFAULT_CYCLE_CAP, cut, cycle_hypergraph, min_hitting_set
from .digraph import Digraph, all_subsets
from .hypergraph import Hypergraph, HypertreeDecomposition, dual


@dataclass(frozen=True)
class Report:
    """Outcome of a validation: width is only reported for valid inputs."""

    valid: bool
    width: int | None
    violations: tuple = ()


@dataclass(frozen=True)
class DirectedTreeDecomposition:
    """An arborescence with a vertex bag per node and a guard set per arc.

    Arcs run (parent, child), away from the root.  Bags partition the host's
    vertex set; empty bags are allowed.  The guard of an arc must hit every
    directed walk that starts and ends in the union of the bags below the arc
    and leaves that union in between.
    """

    nodes: tuple
    arcs: tuple
    bags: dict
    guards: dict

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(self.nodes))
        object.__setattr__(self, "arcs", tuple(tuple(a) for a in self.arcs))
        object.__setattr__(
            self, "bags", {t: frozenset(b) for t, b in self.bags.items()}
        )
        object.__setattr__(
            self,
            "guards",
            {tuple(a): frozenset(g) for a, g in self.guards.items()},
        )

    def root(self):
        targets = {c for (_, c) in self.arcs}
        roots = [t for t in self.nodes if t not in targets]
        assert len(roots) == 1, "expected exactly one root"
        return roots[0]

    def children(self, t):
        return tuple(c for (p, c) in self.arcs if p == t)

    def subtree_nodes(self, t):
        out = [t]
        seen = {t}
        i = 0
        while i < len(out):
            for c in self.children(out[i]):
                if c not in seen:
                    seen.add(c)
                    out.append(c)
            i += 1
        return tuple(out)

    def subtree_vertices(self, t):
        return frozenset().union(*(self.bags[s] for s in self.subtree_nodes(t)))

    def gamma_at(self, t):
        """The bag together with all guards of arcs incident to t."""
        g = set(self.bags[t])
        for a in self.arcs:
            if t in a:
                g |= self.guards[a]
        return frozenset(g)

    def width(self):
        """max |Γ(t)|−1 over the nodes, clamped to be non-negative."""
        return max(
            max((len(self.gamma_at(t)) - 1 for t in self.nodes), default=0), 0
        )


def _reach(d: Digraph, sources, removed, backwards=False):
    """Vertices reachable from the sources in d minus the removed set,
    following edges backwards when asked."""
    step = d.in_neighbours if backwards else d.out_neighbours
    seen = set(sources) - set(removed)
    stack = list(seen)
    while stack:
        u = stack.pop()
        for v in step(u):
            if v not in removed and v not in seen:
                seen.add(v)
                stack.append(v)
    return seen


def _unguarded_return_witnesses(d: Digraph, s, g):
    """Vertices outside s and g through which a directed walk can leave s∖g
    and come back to it while avoiding g.

    Such a vertex exists iff some walk starting and ending in s escapes the
    guard, so an empty result certifies that g hits every returning walk.
    """
    sources = s - g
    forward = _reach(d, sources, g)
    backward = _reach(d, sources, g, backwards=True)
    return (forward & backward) - s - g


def validate_dtd(d: Digraph, dec: DirectedTreeDecomposition) -> Report:
    """Check a directed tree decomposition: the arcs must form an
    arborescence, the bags must partition the vertex set, and every arc's
    guard must block all walks returning to the bags below it."""
    violations = []
    nodes = dec.nodes
    if not nodes or len(set(nodes)) != len(nodes):
        violations.append("nodes must be non-empty and pairwise distinct")
    known = set(nodes)
    for a in dec.arcs:
        if len(a) != 2 or a[0] not in known or a[1] not in known or a[0] == a[1]:
            violations.append(f"arc {a!r} does not join two distinct nodes")
    if len(set(dec.arcs)) != len(dec.arcs):
        violations.append("arcs repeat")
    if set(dec.bags) != known:
        violations.append("bags must be keyed by exactly the nodes")
    if set(dec.guards) != set(dec.arcs):
        violations.append("guards must be keyed by exactly the arcs")
    if violations:
        return Report(False, None, tuple(violations))

    parent = {}
    for (p, c) in dec.arcs:
        if c in parent:
            violations.append(f"node {c!r} has two parents")
        parent[c] = p
    roots = [t for t in nodes if t not in parent]
    if len(roots) != 1:
        violations.append("expected exactly one root")
    if violations:
        return Report(False, None, tuple(violations))
    if len(dec.subtree_nodes(roots[0])) != len(nodes):
        violations.append("not every node is reachable from the root")
        return Report(False, None, tuple(violations))

    union = set()
    total = 0
    for t in nodes:
        union |= dec.bags[t]
        total += len(dec.bags[t])
    if union != set(range(d.n)) or total != d.n:
        violations.append("bags must partition the vertex set of the digraph")

    for a in dec.arcs:
        s = dec.subtree_vertices(a[1])
        g = dec.guards[a]
        if not g <= set(range(d.n)):
            violations.append(f"guard of arc {a!r} mentions unknown vertices")
            continue
        bad = _unguarded_return_witnesses(d, s, g)
        if bad:
            violations.append(
                f"guard {sorted(g)} of arc {a!r} misses a walk returning to "
                f"{sorted(s)} through vertex {min(bad)}"
            )
    if violations:
        return Report(False, None, tuple(violations))
    return Report(True, dec.width(), ())


@dataclass(frozen=True)
class DirectedBranchDecomposition:
    """An unrooted subcubic tree whose leaves name the digraph's vertices,
    with a cached minimum hitting set per tree edge."""

    nodes: tuple
    edges: tuple
    leaf_vertex: dict
    hitting_sets: dict

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(self.nodes))
        object.__setattr__(
            self, "edges", tuple(tuple(sorted(e)) for e in self.edges)
        )
        object.__setattr__(
            self,
            "hitting_sets",
            {tuple(sorted(e)): frozenset(s) for e, s in self.hitting_sets.items()},
        )

    def degree(self, t):
        return sum(1 for e in self.edges if t in e)

    def leaves(self):
        return tuple(t for t in self.nodes if self.degree(t) <= 1)

    def side_vertices(self, e, endpoint):
        """The digraph vertices at the leaves of the component of
        tree − e containing the given endpoint."""
        assert endpoint in e
        seen = {endpoint}
        stack = [endpoint]
        while stack:
            u = stack.pop()
            for f in self.edges:
                if f == tuple(sorted(e)):
                    continue
                if u in f:
                    w = f[0] if f[1] == u else f[1]
                    if w not in seen:
                        seen.add(w)
                        stack.append(w)
        return frozenset(
            self.leaf_vertex[t] for t in seen if t in self.leaf_vertex
        )

    def width(self):
        return max((len(s) for s in self.hitting_sets.values()), default=0)


def _tree_report(nodes, edges, max_degree=3):
    """Structural violations for an undirected tree given by nodes/edges."""
    violations = []
    if not nodes or len(set(nodes)) != len(nodes):
        violations.append("nodes must be non-empty and pairwise distinct")
        return violations
    known = set(nodes)
    for e in edges:
        if len(e) != 2 or e[0] not in known or e[1] not in known or e[0] == e[1]:
            violations.append(f"edge {e!r} does not join two distinct nodes")
    if len(set(edges)) != len(edges):
        violations.append("edges repeat")
    if violations:
        return violations
    if len(edges) != len(nodes) - 1:
        violations.append("a tree needs exactly one edge less than nodes")
        return violations
    adj = {t: [] for t in nodes}
    for (u, v) in edges:
        adj[u].append(v)
        adj[v].append(u)
    start = nodes[0]
    seen = {start}
    stack = [start]
    while stack:
        u = stack.pop()
        for v in adj[u]:
            if v not in seen:
                seen.add(v)
                stack.append(v)
    if len(seen) != len(nodes):
        violations.append("the edges do not connect all nodes")
    for t in nodes:
        if len(adj[t]) > max_degree:
            violations.append(f"node {t!r} has degree above {max_degree}")
    return violations


def validate_dbd(
    d: Digraph,
    dec: DirectedBranchDecomposition,
    bound: int,
    cap: int = DEFAULT_CYCLE_CAP,
) -> Report:
    """Check a directed branch decomposition and recompute every edge's
    thickness: the least size of a set hitting all directed cycles with
    vertices on both sides of the edge.  The cached witnesses must hit their
    crossing cycles and be of minimum size; `bound` caps the hitting-set
    search."""
    violations = _tree_report(dec.nodes, dec.edges)
    if violations:
        return Report(False, None, tuple(violations))
    leaves = dec.leaves()
    if set(dec.leaf_vertex) != set(leaves):
        violations.append("leaf map must be keyed by exactly the tree leaves")
    if sorted(dec.leaf_vertex.values()) != list(range(d.n)):
        violations.append("leaf map must be a bijection onto the vertices")
    if set(dec.hitting_sets) != set(dec.edges):
        violations.append("hitting sets must be keyed by exactly the edges")
    if violations:
        return Report(False, None, tuple(violations))

    ch = cycle_hypergraph(d, cap)
    width = 0
    for e in dec.edges:
        side = dec.side_vertices(e, e[0])
        targets = cut(ch, side)
        best = min_hitting_set(ch, targets, bound)
        if best is None:
            violations.append(
                f"no hitting set of size at most {bound} for edge {e!r}"
            )
            continue
        cached = dec.hitting_sets[e]
        if not all(ch.hyperedges[i] & cached for i in targets):
            violations.append(f"cached set of edge {e!r} misses a crossing cycle")
        elif len(cached) != len(best):
            violations.append(f"cached set of edge {e!r} is not minimum")
        width = max(width, len(best))
    if violations:
        return Report(False, None, tuple(violations))
    return Report(True, width, ())


@dataclass(frozen=True)
class HyperbranchDecomposition:
    """An unrooted subcubic tree whose leaves name the ground hypergraph's
    edges (by index), with a cached minimum cover per tree edge."""

    ground: Hypergraph
    nodes: tuple
    edges: tuple
    leaf_edge: dict
    cover_sets: dict

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(self.nodes))
        object.__setattr__(
            self, "edges", tuple(tuple(sorted(e)) for e in self.edges)
        )
        object.__setattr__(
            self,
            "cover_sets",
            {tuple(sorted(e)): frozenset(s) for e, s in self.cover_sets.items()},
        )

    def degree(self, t):
        return sum(1 for e in self.edges if t in e)

    def leaves(self):
        return tuple(t for t in self.nodes if self.degree(t) <= 1)

    def side_edge_indices(self, e, endpoint):
        assert endpoint in e
        seen = {endpoint}
        stack = [endpoint]
        while stack:
            u = stack.pop()
            for f in self.edges:
                if f == tuple(sorted(e)):
                    continue
                if u in f:
                    w = f[0] if f[1] == u else f[1]
                    if w not in seen:
                        seen.add(w)
                        stack.append(w)
        return frozenset(
            self.leaf_edge[t] for t in seen if t in self.leaf_edge
        )

    def boundary(self, e):
        """Ground vertices covered by hyperedges on both sides of a tree
        edge."""
        here = self.side_edge_indices(e, e[0])
        there = frozenset(range(len(self.ground.edges))) - here
        union = lambda idx: frozenset().union(
            *(self.ground.edges[i] for i in idx)
        ) if idx else frozenset()
        return union(here) & union(there)

    def width(self):
        return max((len(s) for s in self.cover_sets.values()), default=0)


def validate_hbd(h: Hypergraph, dec: HyperbranchDecomposition) -> Report:
    """Check a hyperbranch decomposition against its ground hypergraph: the
    cached covers must cover their boundaries and be of minimum size."""
    violations = []
    if not (h.vertices == dec.ground.vertices and h.edges == dec.ground.edges):
        violations.append("decomposition was built over a different hypergraph")
        return Report(False, None, tuple(violations))
    m = len(h.edges)
    if m <= 1:
        if dec.edges or len(dec.nodes) != m or sorted(
            dec.leaf_edge.values()
        ) != list(range(m)):
            violations.append("a hypergraph this small needs a bare tree")
            return Report(False, None, tuple(violations))
        return Report(True, 0, ())
    violations = _tree_report(dec.nodes, dec.edges)
    if violations:
        return Report(False, None, tuple(violations))
    if set(dec.leaf_edge) != set(dec.leaves()):
        violations.append("leaf map must be keyed by exactly the tree leaves")
    if sorted(dec.leaf_edge.values()) != list(range(m)):
        violations.append("leaf map must be a bijection onto the edge indices")
    if set(dec.cover_sets) != set(dec.edges):
        violations.append("cover sets must be keyed by exactly the edges")
    if violations:
        return Report(False, None, tuple(violations))
    width = 0
    for e in dec.edges:
        boundary = dec.boundary(e)
        best = None
        for s in all_subsets(range(m), m):
            covered = (
                frozenset().union(*(h.edges[i] for i in s)) if s else frozenset()
            )
            if boundary <= covered:
                best = s
                break
        cached = dec.cover_sets[e]
        got = (
            frozenset().union(*(h.edges[i] for i in cached))
            if cached
            else frozenset()
        )
        if not cached <= frozenset(range(m)):
            violations.append(f"cover of edge {e!r} names unknown hyperedges")
        elif not boundary <= got:
            violations.append(f"cover of edge {e!r} misses its boundary")
        elif len(cached) != len(best):
            violations.append(f"cover of edge {e!r} is not minimum")
        width = max(width, len(best))
    if violations:
        return Report(False, None, tuple(violations))
    return Report(True, width, ())


def _validate_hyper_decomposition(h, dec, descendant):
    violations = []
    nodes = dec.nodes
    if len(set(nodes)) != len(nodes):
        violations.append("nodes repeat")
        return Report(False, None, tuple(violations))
    if not nodes:
        if h.vertices or h.edges:
            violations.append("empty decomposition for a non-empty hypergraph")
        return Report(not violations, 0 if not violations else None, tuple(violations))
    known = set(nodes)
    for a in dec.arcs:
        if len(a) != 2 or a[0] not in known or a[1] not in known or a[0] == a[1]:
            violations.append(f"arc {a!r} does not join two distinct nodes")
    if len(set(dec.arcs)) != len(dec.arcs):
        violations.append("arcs repeat")
    if set(dec.bags) != known or set(dec.guards) != known:
        violations.append("bags and guards must be keyed by exactly the nodes")
    if violations:
        return Report(False, None, tuple(violations))
    if len(dec.arcs) != len(nodes) - 1:
        violations.append("a tree needs exactly one arc less than nodes")
        return Report(False, None, tuple(violations))
    adj = {t: [] for t in nodes}
    for (p, c) in dec.arcs:
        adj[p].append(c)
        adj[c].append(p)
    seen = {nodes[0]}
    stack = [nodes[0]]
    while stack:
        u = stack.pop()
        for v in adj[u]:
            if v not in seen:
                seen.add(v)
                stack.append(v)
    if len(seen) != len(nodes):
        violations.append("the arcs do not connect all nodes")
        return Report(False, None, tuple(violations))
    if descendant:
        parent = {}
        for (p, c) in dec.arcs:
            if c in parent:
                violations.append(f"node {c!r} has two parents")
            parent[c] = p
        roots = [t for t in nodes if t not in parent]
        if len(roots) != 1:
            violations.append("expected exactly one root")
        if violations:
            return Report(False, None, tuple(violations))

    vertex_set = set(h.vertices)
    edge_count = len(h.edges)
    for t in nodes:
        if not dec.bags[t] <= vertex_set:
            violations.append(f"bag of node {t!r} mentions unknown vertices")
        if not set(dec.guards[t]) <= set(range(edge_count)):
            violations.append(f"guard of node {t!r} names unknown hyperedges")
    if violations:
        return Report(False, None, tuple(violations))

    holders = {v: [t for t in nodes if v in dec.bags[t]] for v in h.vertices}
    for v in h.vertices:
        if not holders[v]:
            violations.append(f"vertex {v!r} appears in no bag")
    for e in h.edges:
        pairs = sorted(e)
        for i in range(len(pairs)):
            for j in range(i + 1, len(pairs)):
                u, v = pairs[i], pairs[j]
                if not any(
                    u in dec.bags[t] and v in dec.bags[t] for t in nodes
                ):
                    violations.append(
                        f"no bag contains both {u!r} and {v!r} of a common edge"
                    )
    for v in h.vertices:
        hold = set(holders[v])
        if not hold:
            continue
        start = holders[v][0]
        seen = {start}
        stack = [start]
        while stack:
            u = stack.pop()
            for w in adj[u]:
                if w in hold and w not in seen:
                    seen.add(w)
                    stack.append(w)
        if seen != hold:
            violations.append(f"the bags containing {v!r} are not connected")
    for t in nodes:
        covered = frozenset().union(
            *(h.edges[i] for i in dec.guards[t])
        ) if dec.guards[t] else frozenset()
        if not dec.bags[t] <= covered:
            violations.append(f"bag of node {t!r} is not covered by its guard")
    if descendant and not violations:
        children = {t: [] for t in nodes}
        for (p, c) in dec.arcs:
            children[p].append(c)

        def below(t):
            out = [t]
            i = 0
            while i < len(out):
                out.extend(children[out[i]])
                i += 1
            return out

        for t in nodes:
            covered = frozenset().union(
                *(h.edges[i] for i in dec.guards[t])
            ) if dec.guards[t] else frozenset()
            inside = frozenset().union(*(dec.bags[s] for s in below(t)))
            if not covered & inside <= dec.bags[t]:
                violations.append(
                    f"guard of node {t!r} reaches below the node past its bag"
                )
    if violations:
        return Report(False, None, tuple(violations))
    width = max(len(dec.guards[t]) for t in nodes)
    return Report(True, width, ())


def validate_ghd(h: Hypergraph, dec: HypertreeDecomposition) -> Report:
    """Check the tree-decomposition axioms on the 2-section plus coverage of
    every bag by its guard edges; the rooting is ignored."""
    return _validate_hyper_decomposition(h, dec, descendant=False)


def validate_hd(h: Hypergraph, dec: HypertreeDecomposition) -> Report:
    """validate_ghd plus the arborescence shape and the descendant condition:
    below a node, its guard edges may only touch the node's own bag."""
    return _validate_hyper_decomposition(h, dec, descendant=True)


def _ordered_children(dec: DirectedTreeDecomposition):
    """Children lists keyed by node, ordered by the least vertex below the
    child (children with vertex-free subtrees come last, by name)."""
    kids = {t: [] for t in dec.nodes}
    for (p, c) in dec.arcs:
        kids[p].append(c)

    def key(c):
        vs = dec.subtree_vertices(c)
        return (0, min(vs), "") if vs else (1, 0, str(c))

    for t in kids:
        kids[t].sort(key=key)
    return kids


def dtd_to_leaf_dtd(
    d: Digraph, dec: DirectedTreeDecomposition
) -> DirectedTreeDecomposition:
    """Rebuild a valid decomposition in leaf shape: every vertex sits alone in
    a leaf bag, internal bags are empty, and the tree is subcubic.

    Per node, one new leaf is hung below it for each bag vertex, guarded by
    the node's original bag; nodes with too many children grow a spine of
    empty nodes guarded by the node's original Γ.  Childless nodes that
    already hold exactly one vertex stay as they are, so decompositions
    already in leaf shape only get relabelled.  The width never increases;
    the result is re-validated.
    """
    report = validate_dtd(d, dec)
    assert report.valid, f"input decomposition invalid: {report.violations}"
    root = dec.root()
    orig_gamma = {t: dec.gamma_at(t) for t in dec.nodes}
    kids = _ordered_children(dec)

    bags = {}
    arcs = []
    guards = {}
    spine_count = {}
    for t in dec.nodes:
        keep = not kids[t] and len(dec.bags[t]) == 1
        bags[("node", t)] = dec.bags[t] if keep else frozenset()

    def child_key(token):
        if token[0] == "leaf":
            return (0, token[2], "")
        vs = dec.subtree_vertices(token[1])
        return (0, min(vs), "") if vs else (1, 0, str(token[1]))

    def attach(parent, source, tokens, allowed):
        while len(tokens) > allowed:
            head, tokens = tokens[: allowed - 1], tokens[allowed - 1 :]
            for c in head:
                link(parent, source, c)
            i = spine_count.get(source, 0)
            spine_count[source] = i + 1
            s = ("spine", source, i)
            bags[s] = frozenset()
            arcs.append((parent, s))
            guards[(parent, s)] = orig_gamma[source]
            parent = s
            allowed = 2
        for c in tokens:
            link(parent, source, c)

    def link(parent, source, child):
        arcs.append((parent, child))
        if child[0] == "leaf":
            guards[(parent, child)] = dec.bags[source]
        else:
            guards[(parent, child)] = dec.guards[(source, child[1])]

    for t in dec.nodes:
        keep = not kids[t] and len(dec.bags[t]) == 1
        tokens = [("node", c) for c in kids[t]]
        if not keep:
            for v in sorted(dec.bags[t]):
                leaf = ("leaf", t, v)
                bags[leaf] = frozenset({v})
                tokens.append(leaf)
        tokens.sort(key=child_key)
        attach(("node", t), t, tokens, 3 if t == root else 2)

    # prune childless empty nodes and empty single-child roots
    children = {}
    parent_of = {}
    for (p, c) in arcs:
        children.setdefault(p, []).append(c)
        parent_of[c] = p
    alive = set(bags)
    root_token = ("node", root)
    changed = True
    while changed:
        changed = False
        for t in sorted(alive, key=str):
            live_kids = [c for c in children.get(t, ()) if c in alive]
            if t != root_token and not live_kids and not bags[t]:
                alive.remove(t)
                changed = True
        live_kids = [c for c in children.get(root_token, ()) if c in alive]
        if not bags[root_token] and len(live_kids) == 1:
            alive.remove(root_token)
            root_token = live_kids[0]
            changed = True

    order = [root_token]
    i = 0
    while i < len(order):
        for c in children.get(order[i], ()):
            if c in alive:
                order.append(c)
        i += 1
    rename = {t: i for i, t in enumerate(order)}
    out = DirectedTreeDecomposition(
        nodes=tuple(range(len(order))),
        arcs=tuple(
            (rename[parent_of[t]], rename[t]) for t in order if t != root_token
        ),
        bags={rename[t]: bags[t] for t in order},
        guards={
            (rename[parent_of[t]], rename[t]): guards[(parent_of[t], t)]
            for t in order
            if t != root_token
        },
    )
    check = validate_dtd(d, out)
    assert check.valid, f"leaf construction went invalid: {check.violations}"
    assert check.width <= report.width, "leaf construction may not widen"
    leaf_nodes = [t for t in out.nodes if not out.children(t)]
    assert all(len(out.bags[t]) == 1 for t in leaf_nodes)
    assert all(
        not out.bags[t] for t in out.nodes if out.children(t)
    ), "internal bags must be empty"
    degree = {t: 0 for t in out.nodes}
    for (p, c) in out.arcs:
        degree[p] += 1
        degree[c] += 1
    assert all(degree[t] <= 3 for t in out.nodes), "tree must be subcubic"
    return out


def dtd_to_dbd(
    d: Digraph, dec: DirectedTreeDecomposition, cap: int = DEFAULT_CYCLE_CAP
) -> DirectedBranchDecomposition:
    """Forget the orientation of the leaf-shaped decomposition: leaves name
    their bag vertices and every tree edge caches a true minimum hitting set
    for its crossing cycles."""
    leaf = dtd_to_leaf_dtd(d, dec)
    edges = tuple(sorted(tuple(sorted(a)) for a in leaf.arcs))
    leaf_nodes = [t for t in leaf.nodes if not leaf.children(t)]
    leaf_vertex = {t: min(leaf.bags[t]) for t in leaf_nodes}
    dec_out = DirectedBranchDecomposition(
        nodes=leaf.nodes,
        edges=edges,
        leaf_vertex=leaf_vertex,
        hitting_sets={e: frozenset() for e in edges},
    )
    ch = cycle_hypergraph(d, cap)
    hitting = {}
    for e in edges:
        targets = cut(ch, dec_out.side_vertices(e, e[0]))
        best = min_hitting_set(ch, targets, d.n)
        assert best is not None, "the full vertex set hits everything"
        hitting[e] = best
    return DirectedBranchDecomposition(
        nodes=leaf.nodes,
        edges=edges,
        leaf_vertex=leaf_vertex,
        hitting_sets=hitting,
    )


def _dual_ground(d: Digraph, cap: int):
    ch = cycle_hypergraph(d, cap)
    assert len(ch.vertices) == d.n, (
        "conversion needs every vertex on a directed cycle"
    )
    return ch, dual(ch.as_hypergraph())


def dbd_to_hbd(
    d: Digraph, dec: DirectedBranchDecomposition, cap: int = DEFAULT_CYCLE_CAP
) -> HyperbranchDecomposition:
    """Reinterpret a branch decomposition of the digraph over the dual cycle
    hypergraph: leaf vertices become their dual hyperedges and hitting sets
    become covers.  Thicknesses agree edge for edge, which is asserted."""
    ch, ground = _dual_ground(d, cap)
    out = HyperbranchDecomposition(
        ground=ground,
        nodes=dec.nodes,
        edges=dec.edges,
        leaf_edge=dict(dec.leaf_vertex),
        cover_sets=dict(dec.hitting_sets),
    )
    for e in out.edges:
        boundary = out.boundary(e)
        cached = out.cover_sets[e]
        covered = (
            frozenset().union(*(ground.edges[i] for i in cached))
            if cached
            else frozenset()
        )
        assert boundary <= covered, "hitting set fails to cover its boundary"
        targets = cut(ch, dec.side_vertices(e, e[0]))
        best = min_hitting_set(ch, targets, d.n)
        assert len(best) == len(cached), "widths must agree edge for edge"
    return out


def hbd_to_dbd(
    d: Digraph, dec: HyperbranchDecomposition, cap: int = DEFAULT_CYCLE_CAP
) -> DirectedBranchDecomposition:
    """Invert dbd_to_hbd: requires the decomposition's ground hypergraph to
    be the dual cycle hypergraph of the digraph."""
    _, ground = _dual_ground(d, cap)
    if not (
        dec.ground.vertices == ground.vertices
        and dec.ground.edges == ground.edges
    ):
        raise ValueError(
            "ground hypergraph is not the dual cycle hypergraph of the digraph"
        )
    labels = ground.labels or tuple(range(len(ground.edges)))
    return DirectedBranchDecomposition(
        nodes=dec.nodes,
        edges=dec.edges,
        leaf_vertex={t: labels[i] for t, i in dec.leaf_edge.items()},
        hitting_sets=dict(dec.cover_sets),
    )


def _minimal_subtree(adj, targets):
    """The nodes of the smallest subtree containing all target nodes:
    repeatedly shed leaves that are not targets."""
    targets = set(targets)
    if not targets:
        return set()
    alive = set(adj)
    degree = {t: len(adj[t]) for t in alive}
    queue = [t for t in alive if degree[t] <= 1 and t not in targets]
    while queue:
        t = queue.pop()
        if t not in alive:
            continue
        alive.remove(t)
        for u in adj[t]:
            if u in alive:
                degree[u] -= 1
                if degree[u] <= 1 and u not in targets:
                    queue.append(u)
    return alive


def dtd_to_ghd(
    d: Digraph, dec: DirectedTreeDecomposition, cap: int = DEFAULT_CYCLE_CAP
) -> HypertreeDecomposition:
    """A generalised hypertree decomposition of the dual cycle hypergraph,
    over the same tree: each cycle's dual vertex occupies the minimal subtree
    spanning the nodes whose bags meet the cycle, and each node is guarded by
    the dual edges of its Γ."""
    report = validate_dtd(d, dec)
    assert report.valid, f"input decomposition invalid: {report.violations}"
    ch = cycle_hypergraph(d, cap)
    if not ch.hyperedges:
        return HypertreeDecomposition((), (), {}, {})
    adj = {t: set() for t in dec.nodes}
    for (p, c) in dec.arcs:
        adj[p].add(c)
        adj[c].add(p)
    bags = {t: set() for t in dec.nodes}
    for i, e in enumerate(ch.hyperedges):
        meets = {t for t in dec.nodes if dec.bags[t] & e}
        for t in _minimal_subtree(adj, meets):
            bags[t].add(i)
    position = {v: i for i, v in enumerate(ch.vertices)}
    guards = {
        t: frozenset(position[v] for v in dec.gamma_at(t) if v in position)
        for t in dec.nodes
    }
    return HypertreeDecomposition(
        nodes=dec.nodes,
        arcs=dec.arcs,
        bags={t: frozenset(b) for t, b in bags.items()},
        guards=guards,
    )
