"""Directed cycles of a digraph, the cycle hypergraph, cuts and hitting sets,
and chains of cycles."""

from __future__ import annotations

from dataclasses import dataclass

import networkx as nx

from .digraph import Digraph, all_subsets
from .errors import CapExceeded
from .hypergraph import Hypergraph

DEFAULT_CYCLE_CAP = 100_000


@dataclass(frozen=True)
class DirectedCycle:
    """A simple directed cycle, stored in canonical rotation: the vertex
    sequence begins at its minimum member, with an implicit closing edge."""

    sequence: tuple

    def __post_init__(self):
        seq = tuple(self.sequence)
        object.__setattr__(self, "sequence", seq)
        assert len(seq) >= 2, "cycles have length at least two"
        assert len(set(seq)) == len(seq), "cycle vertices repeat"
        assert seq[0] == min(seq), "canonical rotation starts at the minimum vertex"

    @property
    def length(self):
        return len(self.sequence)

    @property
    def vertex_set(self):
        return frozenset(self.sequence)


def canonical_rotation(seq):
    """Rotate a cyclic vertex sequence to start at its minimum member."""
    seq = tuple(seq)
    i = seq.index(min(seq))
    return seq[i:] + seq[:i]


def enumerate_cycles(d: Digraph, cap: int = DEFAULT_CYCLE_CAP):
    """All simple directed cycles of d, deduplicated up to rotation and sorted
    lexicographically on their canonical sequences.

    Raises CapExceeded as soon as more than `cap` cycles have been seen.
    """
    assert cap >= 1, "cap must be positive"
    g = nx.DiGraph()
    g.add_nodes_from(range(d.n))
    g.add_edges_from(d.sorted_edges())
    found = set()
    for cyc in nx.simple_cycles(g):
        assert len(cyc) >= 2, "loop-free digraphs have no shorter cycles"
        found.add(canonical_rotation(cyc))
        if len(found) > cap:
            raise CapExceeded(cap, len(found))
    return [DirectedCycle(s) for s in sorted(found)]


@dataclass(frozen=True)
class CycleHypergraph:
    """The cycle hypergraph of a digraph: one hyperedge per directed cycle.

    Hyperedges with identical vertex sets stay distinct entries — parallel
    cycles are different hyperedges.  Vertices lying on no cycle are excluded
    from the hypergraph's vertex set but remembered in `isolated`.
    """

    host: Digraph
    cycles: tuple
    hyperedges: tuple

    @property
    def vertices(self):
        on_cycles = set().union(*self.hyperedges) if self.hyperedges else set()
        return tuple(sorted(on_cycles))

    @property
    def isolated(self):
        on_cycles = set(self.vertices)
        return tuple(v for v in range(self.host.n) if v not in on_cycles)

    def as_hypergraph(self):
        """The same hypergraph as a plain Hypergraph value."""
        return Hypergraph(self.vertices, self.hyperedges)


def cycle_hypergraph(d: Digraph, cap: int = DEFAULT_CYCLE_CAP) -> CycleHypergraph:
    """The cycle hypergraph C(D), built from the enumerated cycles."""
    cycles = tuple(enumerate_cycles(d, cap))
    return CycleHypergraph(
        host=d, cycles=cycles, hyperedges=tuple(c.vertex_set for c in cycles)
    )


def cut(ch: CycleHypergraph, x) -> frozenset:
    """Indices of the hyperedges meeting both x and its complement."""
    x = frozenset(x)
    rest = frozenset(range(ch.host.n)) - x
    return frozenset(
        i for i, e in enumerate(ch.hyperedges) if e & x and e & rest
    )


def min_hitting_set(ch: CycleHypergraph, targets, bound: int):
    """A minimum-cardinality vertex set meeting every target hyperedge, or
    None if none of size at most `bound` exists.

    Search is exhaustive by increasing size, lexicographic within a size, so
    the result is deterministic.
    """
    assert bound >= 0
    sets = [ch.hyperedges[i] for i in sorted(targets)]
    if not sets:
        return frozenset()
    useful = sorted(set().union(*sets))
    for s in all_subsets(useful, min(bound, len(useful))):
        if all(e & s for e in sets):
            return frozenset(s)
    return None


def is_chain(ch: CycleHypergraph, seq) -> bool:
    """True if the cycle-index sequence forms a chain: consecutive cycles
    intersect and cycles at distance at least two are disjoint.  Singleton
    sequences are chains."""
    sets = [ch.hyperedges[i] for i in seq]
    for a in range(len(sets) - 1):
        if not sets[a] & sets[a + 1]:
            return False
    for a in range(len(sets)):
        for b in range(a + 2, len(sets)):
            if sets[a] & sets[b]:
                return False
    return True


@dataclass(frozen=True)
class CycleChain:
    """A chain of cycles by hyperedge index; closed chains wrap around."""

    cycles: tuple
    closed: bool

    def __post_init__(self):
        object.__setattr__(self, "cycles", tuple(self.cycles))
        if self.closed:
            assert len(self.cycles) >= 3, "closed chains have length at least 3"


def _induced_cycle_of_length(adj, m, target):
    """A chordless cycle of exactly `target` >= 4 vertices in an intersection
    graph given as an adjacency matrix, canonical (starts at its minimum
    member, second member smaller than last) and lexicographically first."""

    def extend(path):
        tail = path[-1]
        for v in range(path[0] + 1, m):
            if v in path or not adj[tail][v]:
                continue
            if any(adj[v][p] for p in path[1:-1]):
                continue
            closes = adj[v][path[0]]
            if len(path) + 1 == target:
                if closes and path[1] < v:
                    return path + [v]
                continue
            if closes:
                continue
            result = extend(path + [v])
            if result is not None:
                return result
        return None

    for start in range(m):
        for second in range(start + 1, m):
            if not adj[start][second]:
                continue
            result = extend([start, second])
            if result is not None:
                return result
    return None


def find_closed_chain(ch: CycleHypergraph):
    """A closed chain of ℓ >= 3 cycles, if one exists.

    Closed chains of three cycles are pairwise intersecting triples whose
    three pairwise intersections have no common vertex; longer closed chains
    are chordless cycles in the intersection graph of the hyperedges.  The
    search proceeds by ascending length, lexicographically within a length.
    """
    es = ch.hyperedges
    m = len(es)
    for i in range(m):
        for j in range(i + 1, m):
            if not es[i] & es[j]:
                continue
            for k in range(j + 1, m):
                if es[i] & es[k] and es[j] & es[k] and not (es[i] & es[j] & es[k]):
                    return CycleChain((i, j, k), True)
    adj = [[i != j and bool(es[i] & es[j]) for j in range(m)] for i in range(m)]
    for target in range(4, m + 1):
        cycle = _induced_cycle_of_length(adj, m, target)
        if cycle is not None:
            return CycleChain(tuple(cycle), True)
    return None


def strongly_connected_via_chains(d: Digraph, cap: int = DEFAULT_CYCLE_CAP) -> bool:
    """Strong connectivity read off the cycle structure.

    A single vertex is trivially strongly connected.  Otherwise the digraph is
    strongly connected iff every vertex lies on a directed cycle and every
    pair of cycles is joined by a chain of cycles; the latter holds exactly
    when the intersection graph of the cycles is connected, since a shortest
    path in that graph is a chain.
    """
    if d.n <= 1:
        return True
    ch = cycle_hypergraph(d, cap)
    if len(ch.vertices) != d.n:
        return False
    es = ch.hyperedges
    m = len(es)
    if m == 0:
        return False
    seen = {0}
    stack = [0]
    while stack:
        i = stack.pop()
        for j in range(m):
            if j not in seen and es[i] & es[j]:
                seen.add(j)
                stack.append(j)
    return len(seen) == m
