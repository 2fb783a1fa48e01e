"""Interconnection graphs of BD-RIS elements and planarity decisions.

Vertices are the RIS elements, labelled ``1..n`` so that vertex ``v`` matches
row/column ``v`` of the admittance matrix. An edge ``(i, j)`` with ``i < j``
means a tunable admittance connects elements ``i`` and ``j``.

Two independent planarity routes are provided:

* :func:`is_planar` -- exact decision through the left-right planarity test
  shipped with networkx, with a Kuratowski subgraph as witness;
* :func:`forbidden_minor_oracle` -- exhaustive search for a K5 or K3,3 minor
  by edge contraction. Exponential, restricted to small graphs, used as
  ground truth in the tests.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import networkx as nx

__all__ = [
    "CircuitGraph",
    "GraphError",
    "OracleInfeasibleError",
    "PlanarityVerdict",
    "Witness",
    "ORACLE_MAX_VERTICES",
    "make_graph",
    "complete_graph",
    "complete_bipartite_graph",
    "path_graph",
    "edge_count",
    "is_planar",
    "forbidden_minor_oracle",
    "is_acyclic",
    "connected_components",
    "graph_to_json",
    "graph_from_json",
]

ORACLE_MAX_VERTICES = 10


class GraphError(ValueError):
    """Raised for malformed vertex counts or edge lists."""


class OracleInfeasibleError(RuntimeError):
    """Raised when the minor oracle is asked to handle a graph above its size limit."""


@dataclass(frozen=True)
class CircuitGraph:
    """Undirected simple graph on vertices ``1..n``.

    ``edges`` is kept sorted with ``i < j`` in every pair; build instances
    with :func:`make_graph` to get validation and normalisation.
    """

    n: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if self.n < 1:
            raise GraphError(f"vertex count must be >= 1, got {self.n}")
        prev = None
        for e in self.edges:
            i, j = e
            if not (1 <= i < j <= self.n):
                raise GraphError(f"edge {e} is not a normalised pair within 1..{self.n}")
            if prev is not None and e <= prev:
                raise GraphError("edges must be strictly sorted; use make_graph()")
            prev = e

    @property
    def vertices(self) -> range:
        return range(1, self.n + 1)

    def has_edge(self, i: int, j: int) -> bool:
        return (min(i, j), max(i, j)) in self._edge_set

    @property
    def _edge_set(self) -> frozenset:
        # cached lazily on the frozen instance
        try:
            return self.__dict__["_es"]
        except KeyError:
            es = frozenset(self.edges)
            object.__setattr__(self, "_es", es)
            return es

    def adjacency(self) -> dict[int, set[int]]:
        adj: dict[int, set[int]] = {v: set() for v in self.vertices}
        for i, j in self.edges:
            adj[i].add(j)
            adj[j].add(i)
        return adj

    def degree(self, v: int) -> int:
        return sum(1 for e in self.edges if v in e)

    def non_edges(self) -> list[tuple[int, int]]:
        es = self._edge_set
        return [p for p in itertools.combinations(self.vertices, 2) if p not in es]

    def with_edges(self, extra: Iterable[tuple[int, int]]) -> "CircuitGraph":
        return make_graph(self.n, list(self.edges) + list(extra))

    def relabel(self, perm: Sequence[int]) -> "CircuitGraph":
        """Return the graph with vertex ``v`` renamed to ``perm[v - 1]``."""
        if sorted(perm) != list(self.vertices):
            raise GraphError("perm must be a permutation of 1..n")
        return make_graph(self.n, [(perm[i - 1], perm[j - 1]) for i, j in self.edges])

    def to_networkx(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(self.vertices)
        g.add_edges_from(self.edges)
        return g


def make_graph(n: int, edges: Iterable[Sequence[int]] = ()) -> CircuitGraph:
    """Build a :class:`CircuitGraph`, normalising and deduplicating ``edges``.

    Raises :class:`GraphError` for self-loops or endpoints outside ``1..n``.
    """
    if not isinstance(n, int) or n < 1:
        raise GraphError(f"vertex count must be a positive integer, got {n!r}")
    canon = set()
    for e in edges:
        if len(e) != 2:
            raise GraphError(f"edge {tuple(e)} must have exactly two endpoints")
        i, j = int(e[0]), int(e[1])
        if i == j:
            raise GraphError(f"self-loop at vertex {i} is not allowed")
        for v in (i, j):
            if not 1 <= v <= n:
                raise GraphError(f"endpoint {v} of edge ({i}, {j}) outside 1..{n}")
        canon.add((min(i, j), max(i, j)))
    return CircuitGraph(n, tuple(sorted(canon)))


def complete_graph(n: int) -> CircuitGraph:
    return make_graph(n, itertools.combinations(range(1, n + 1), 2))


def complete_bipartite_graph(a: int, b: int) -> CircuitGraph:
    return make_graph(a + b, [(i, a + j) for i in range(1, a + 1) for j in range(1, b + 1)])


def path_graph(n: int) -> CircuitGraph:
    return make_graph(n, [(i, i + 1) for i in range(1, n)])


def edge_count(g: CircuitGraph) -> int:
    return len(g.edges)


# ---------------------------------------------------------------------------
# Planarity verdicts
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Witness:
    """Forbidden structure certifying non-planarity.

    ``kind`` is ``"K5"`` or ``"K3,3"``. ``branch_sets`` holds one vertex set
    per vertex of the forbidden graph; for K3,3 the first three sets form one
    side of the bipartition. Singletons mean the structure is a subdivision
    (topological minor); larger sets are contracted branch sets.
    """

    kind: str
    branch_sets: tuple[frozenset, ...]


@dataclass(frozen=True)
class PlanarityVerdict:
    planar: bool
    witness: Optional[Witness] = None

    def __post_init__(self):
        if self.witness is not None and self.planar:
            raise ValueError("a planar verdict cannot carry a non-planarity witness")

    def __bool__(self) -> bool:
        return self.planar


def is_planar(g: CircuitGraph, witness: bool = True) -> PlanarityVerdict:
    """Exact planarity decision.

    Non-planar graphs get a :class:`Witness` built from the Kuratowski
    subgraph networkx extracts: its branch vertices are the vertices of
    degree at least 3 in that subgraph. Extraction dominates the cost, so
    bulk callers that only need the verdict pass ``witness=False``.
    """
    planar, cert = nx.check_planarity(g.to_networkx(), counterexample=witness)
    if planar or not witness:
        return PlanarityVerdict(planar)
    return PlanarityVerdict(False, _kuratowski_witness(cert))


def _kuratowski_witness(sub: nx.Graph) -> Witness:
    branch = sorted(v for v in sub if sub.degree(v) >= 3)
    if len(branch) == 5:
        return Witness("K5", tuple(frozenset([v]) for v in branch))
    # K3,3 subdivision: walk the subdivided paths to find branch neighbours
    branch_set = set(branch)
    reach: dict[int, set[int]] = {}
    for b in branch:
        reach[b] = set()
        for nb in sub[b]:
            prev, cur = b, nb
            while cur not in branch_set:
                prev, cur = cur, next(x for x in sub[cur] if x != prev)
            reach[b].add(cur)
    side_a = [branch[0]] + [v for v in branch[1:] if v not in reach[branch[0]]]
    side_b = sorted(reach[branch[0]])
    return Witness("K3,3", tuple(frozenset([v]) for v in sorted(side_a) + side_b))


def forbidden_minor_oracle(
    g: CircuitGraph, max_vertices: int = ORACLE_MAX_VERTICES
) -> PlanarityVerdict:
    """Decide planarity by exhaustive search for a K5 or K3,3 minor.

    Explores every graph reachable by edge contractions and checks each for a
    K5 or K3,3 subgraph (Wagner's theorem). Vertices of degree <= 1 are
    deleted and degree-2 vertices contracted into a neighbour first; neither
    step changes whether such a minor exists, since both forbidden graphs have
    minimum degree 3.

    Raises :class:`OracleInfeasibleError` above ``max_vertices`` vertices.
    """
    if g.n > max_vertices:
        raise OracleInfeasibleError(
            f"minor oracle limited to {max_vertices} vertices, graph has {g.n}"
        )
    start = {frozenset([v]): set() for v in g.vertices}
    for i, j in g.edges:
        a, b = frozenset([i]), frozenset([j])
        start[a].add(b)
        start[b].add(a)

    seen: set = set()
    stack = [_reduce(start)]
    while stack:
        adj = stack.pop()
        key = frozenset(frozenset((u, w)) for u in adj for w in adj[u])
        if key in seen:
            continue
        seen.add(key)
        if len(adj) < 5 or len(key) < 9:
            continue
        found = _find_k5(adj) or _find_k33(adj)
        if found is not None:
            return PlanarityVerdict(False, found)
        for u, w in key:
            stack.append(_reduce(_contract(adj, u, w)))
    return PlanarityVerdict(True)


def _contract(adj: dict, u: frozenset, w: frozenset) -> dict:
    merged = u | w
    out = {}
    for x, nbrs in adj.items():
        if x in (u, w):
            continue
        new = {merged if y in (u, w) else y for y in nbrs}
        out[x] = new
    out[merged] = (adj[u] | adj[w]) - {u, w}
    return out


def _reduce(adj: dict) -> dict:
    adj = {x: set(n) for x, n in adj.items()}
    changed = True
    while changed:
        changed = False
        for x in list(adj):
            d = len(adj[x])
            if d <= 1:
                for y in adj.pop(x):
                    adj[y].discard(x)
                changed = True
                break
            if d == 2:
                y = min(adj[x], key=sorted)
                adj = _contract(adj, x, y)
                changed = True
                break
    return adj


def _find_k5(adj: dict) -> Optional[Witness]:
    cand = [x for x in adj if len(adj[x]) >= 4]
    for combo in itertools.combinations(cand, 5):
        if all(b in adj[a] for a, b in itertools.combinations(combo, 2)):
            sets = sorted(combo, key=sorted)
            return Witness("K5", tuple(sets))
    return None


def _find_k33(adj: dict) -> Optional[Witness]:
    cand = [x for x in adj if len(adj[x]) >= 3]
    for side in itertools.combinations(cand, 3):
        common = set.intersection(*(adj[a] for a in side)) - set(side)
        if len(common) >= 3:
            other = sorted(common, key=sorted)[:3]
            return Witness("K3,3", tuple(sorted(side, key=sorted)) + tuple(other))
    return None


# ---------------------------------------------------------------------------
# Structure
# ---------------------------------------------------------------------------


def is_acyclic(g: CircuitGraph) -> bool:
    """True iff ``g`` is a forest."""
    parent = list(range(g.n + 1))

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for i, j in g.edges:
        ri, rj = find(i), find(j)
        if ri == rj:
            return False
        parent[ri] = rj
    return True


def connected_components(g: CircuitGraph) -> list[tuple[int, ...]]:
    """Vertex partition into connected components, ordered by smallest vertex."""
    adj = g.adjacency()
    seen: set[int] = set()
    comps = []
    for v in g.vertices:
        if v in seen:
            continue
        comp = {v}
        frontier = [v]
        while frontier:
            x = frontier.pop()
            for y in adj[x]:
                if y not in comp:
                    comp.add(y)
                    frontier.append(y)
        seen |= comp
        comps.append(tuple(sorted(comp)))
    return comps


# ---------------------------------------------------------------------------
# Serialisation
# ---------------------------------------------------------------------------


def graph_to_json(g: CircuitGraph) -> str:
    return json.dumps({"n": g.n, "edges": [list(e) for e in g.edges]})


def graph_from_json(text: str) -> CircuitGraph:
    data = json.loads(text)
    try:
        return make_graph(int(data["n"]), data["edges"])
    except KeyError as exc:
        raise GraphError(f"graph JSON is missing field {exc}") from None
