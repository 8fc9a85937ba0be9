"""Simple undirected graphs: data model, graph6 I/O, families and operations.

Vertices are the integers ``0 .. n-1``.  Edges are stored as a frozenset of
pairs ``(i, j)`` with ``i < j``.  Graph values are immutable; every operation
returns a new graph.
"""
from __future__ import annotations

import itertools
from collections import deque
from importlib import resources
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Sequence

import numpy as np

Edge = tuple[int, int]

GRAPH6_SMALL_MAX = 62
GRAPH6_LARGE_MAX = 258047


class GraphFormatError(ValueError):
    """Raised when a graph6 or edge-list string cannot be decoded."""

    def __init__(self, message: str, offset: int | None = None):
        if offset is not None:
            message = f"{message} (byte offset {offset})"
        super().__init__(message)
        self.offset = offset


class GraphDomainError(ValueError):
    """Raised when a query is undefined for the given graph."""


def _norm_edge(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Graph:
    n: int
    edges: frozenset = frozenset()
    labels: tuple[str, ...] | None = field(default=None, compare=False)
    _adj: tuple = field(default=(), init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("vertex count must be nonnegative")
        edges = set()
        for e in self.edges:
            u, v = e
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"edge {e} out of range for n={self.n}")
            edges.add(_norm_edge(int(u), int(v)))
        object.__setattr__(self, "edges", frozenset(edges))
        if self.labels is not None:
            if len(self.labels) != self.n:
                raise ValueError("labels must have one entry per vertex")
            object.__setattr__(self, "labels", tuple(str(s) for s in self.labels))
        adj = [set() for _ in range(self.n)]
        for u, v in edges:
            adj[u].add(v)
            adj[v].add(u)
        object.__setattr__(self, "_adj", tuple(frozenset(a) for a in adj))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]], labels=None) -> "Graph":
        return cls(n, frozenset(_norm_edge(int(u), int(v)) for u, v in edges), labels)

    @property
    def m(self) -> int:
        return len(self.edges)

    def adj(self, u: int, v: int) -> bool:
        return v in self._adj[u]

    def neighbors(self, v: int) -> frozenset:
        return self._adj[v]

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def sorted_edges(self) -> list[Edge]:
        return sorted(self.edges)

    def adjacency_matrix(self) -> np.ndarray:
        a = np.zeros((self.n, self.n))
        for u, v in self.edges:
            a[u, v] = a[v, u] = 1.0
        return a

    def label(self, v: int) -> str:
        return self.labels[v] if self.labels is not None else str(v)

    def relabel(self, perm: Sequence[int]) -> "Graph":
        """Return the graph with vertex ``v`` renamed to ``perm[v]``."""
        return Graph.from_edges(self.n, ((perm[u], perm[v]) for u, v in self.edges))

    def induced_subgraph(self, vertices: Sequence[int]) -> "Graph":
        index = {v: i for i, v in enumerate(vertices)}
        edges = [(index[u], index[v]) for u, v in self.edges if u in index and v in index]
        labels = [self.label(v) for v in vertices] if self.labels is not None else None
        return Graph.from_edges(len(vertices), edges, labels)

    def __str__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"


# ---------------------------------------------------------------- graph6


def _size_prefix(n: int) -> str:
    if n <= GRAPH6_SMALL_MAX:
        return chr(n + 63)
    if n <= GRAPH6_LARGE_MAX:
        return "~" + "".join(chr(((n >> s) & 63) + 63) for s in (12, 6, 0))
    raise ValueError(f"graph6 supports at most {GRAPH6_LARGE_MAX} vertices, got {n}")


def to_graph6(g: Graph) -> str:
    """Encode ``g`` in graph6 (no ``>>graph6<<`` header)."""
    bits = [1 if (i, j) in g.edges else 0 for j in range(1, g.n) for i in range(j)]
    bits.extend([0] * (-len(bits) % 6))
    data = []
    for k in range(0, len(bits), 6):
        val = 0
        for b in bits[k:k + 6]:
            val = (val << 1) | b
        data.append(chr(val + 63))
    return _size_prefix(g.n) + "".join(data)


def parse_graph6(text: str) -> Graph:
    """Decode a single graph6 line.

    Raises
    ------
    GraphFormatError
        On an empty string, a byte outside ``[63, 126]``, a short body or
        trailing bytes; the message names the offending byte offset.
    """
    s = text.strip()
    base = 0
    if s.startswith(">>graph6<<"):
        s = s[10:]
        base = 10
    if not s:
        raise GraphFormatError("empty graph6 string", base)
    for k, ch in enumerate(s):
        if not 63 <= ord(ch) <= 126:
            raise GraphFormatError(f"byte {ord(ch)} outside [63, 126]", base + k)
    if s[0] != "~":
        n, pos = ord(s[0]) - 63, 1
    else:
        if len(s) < 4:
            raise GraphFormatError("truncated large-format size", base + len(s))
        if s[1] == "~":
            raise GraphFormatError("graphs above 258047 vertices are unsupported", base + 1)
        n = 0
        for ch in s[1:4]:
            n = (n << 6) | (ord(ch) - 63)
        pos = 4
    nbits = n * (n - 1) // 2
    nbytes = (nbits + 5) // 6
    body = s[pos:]
    if len(body) < nbytes:
        raise GraphFormatError(
            f"expected {nbytes} data bytes for n={n}, found {len(body)}", base + len(s))
    if len(body) > nbytes:
        raise GraphFormatError("trailing bytes after graph6 body", base + pos + nbytes)
    edges = []
    k = 0
    for j in range(1, n):
        for i in range(j):
            byte = ord(body[k // 6]) - 63
            if (byte >> (5 - k % 6)) & 1:
                edges.append((i, j))
            k += 1
    if nbits % 6:
        last = ord(body[-1]) - 63
        if last & ((1 << (6 - nbits % 6)) - 1):
            raise GraphFormatError("nonzero padding bits", base + pos + nbytes - 1)
    return Graph.from_edges(n, edges)


def parse_edge_list(text: str) -> Graph:
    """Parse ``"n\\nu v\\nu v..."`` (0-indexed, ``#`` comments allowed)."""
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise GraphFormatError("empty edge list")
    try:
        n = int(lines[0])
        edges = []
        for ln in lines[1:]:
            u, v = ln.split()
            edges.append((int(u), int(v)))
        return Graph.from_edges(n, edges)
    except ValueError as exc:
        raise GraphFormatError(f"malformed edge list: {exc}") from None


def to_edge_list(g: Graph) -> str:
    return "\n".join([str(g.n)] + [f"{u} {v}" for u, v in g.sorted_edges()]) + "\n"


CORPORA = ("connected_le5", "connected_le7", "trees_le7")


def load_corpus(name: str) -> list[Graph]:
    """Graphs from a bundled graph6 corpus, one per isomorphism class.

    ``connected_le5`` and ``connected_le7`` hold every connected graph up to
    that order, ``trees_le7`` every tree on at most 7 vertices.
    """
    if name not in CORPORA:
        raise ValueError(f"unknown corpus {name!r}; choose from {', '.join(CORPORA)}")
    text = resources.files(__package__).joinpath("data", f"{name}.g6").read_text()
    return [parse_graph6(line) for line in text.split()]


# ---------------------------------------------------------------- operations


def union(g: Graph, h: Graph) -> Graph:
    """Disjoint union; ``h``'s vertices follow ``g``'s."""
    edges = list(g.edges) + [(u + g.n, v + g.n) for u, v in h.edges]
    return Graph.from_edges(g.n + h.n, edges)


def join(g: Graph, h: Graph) -> Graph:
    """Disjoint union plus every edge between ``g`` and ``h``."""
    base = union(g, h)
    cross = [(u, g.n + v) for u in range(g.n) for v in range(h.n)]
    return Graph.from_edges(base.n, list(base.edges) + cross)


def complement(g: Graph) -> Graph:
    return Graph.from_edges(
        g.n, [(i, j) for i, j in itertools.combinations(range(g.n), 2) if (i, j) not in g.edges],
        g.labels)


def cartesian_product(g: Graph, h: Graph) -> Graph:
    """Cartesian product; vertex ``(a, b)`` has index ``a * h.n + b``."""
    def idx(a, b):
        return a * h.n + b

    edges = [(idx(a, b), idx(a, c)) for a in range(g.n) for b, c in h.edges]
    edges += [(idx(a, b), idx(c, b)) for a, c in g.edges for b in range(h.n)]
    labels = [f"({g.label(a)},{h.label(b)})" for a in range(g.n) for b in range(h.n)]
    return Graph.from_edges(g.n * h.n, edges, labels)


def corona(g: Graph) -> Graph:
    """Attach a pendant vertex ``n + v`` to every vertex ``v``."""
    edges = list(g.edges) + [(v, g.n + v) for v in range(g.n)]
    return Graph.from_edges(2 * g.n, edges)


# ---------------------------------------------------------------- structure


def bfs_distances(g: Graph, source: int) -> list[int]:
    """Distances from ``source``; unreachable vertices get ``-1``."""
    dist = [-1] * g.n
    dist[source] = 0
    queue = deque([source])
    while queue:
        u = queue.popleft()
        for w in g.neighbors(u):
            if dist[w] < 0:
                dist[w] = dist[u] + 1
                queue.append(w)
    return dist


def shortest_path_counts(g: Graph, source: int) -> tuple[list[int], list[int]]:
    """BFS distances and number of shortest paths from ``source``.

    Counts are accumulated layer by layer over the BFS DAG.
    """
    dist = [-1] * g.n
    count = [0] * g.n
    dist[source] = 0
    count[source] = 1
    queue = deque([source])
    while queue:
        u = queue.popleft()
        for w in g.neighbors(u):
            if dist[w] < 0:
                dist[w] = dist[u] + 1
                queue.append(w)
            if dist[w] == dist[u] + 1:
                count[w] += count[u]
    return dist, count


def components(g: Graph) -> list[list[int]]:
    seen = [False] * g.n
    comps = []
    for s in range(g.n):
        if seen[s]:
            continue
        comp = [v for v, d in enumerate(bfs_distances(g, s)) if d >= 0]
        for v in comp:
            seen[v] = True
        comps.append(comp)
    return comps


def is_connected(g: Graph) -> bool:
    return g.n <= 1 or all(d >= 0 for d in bfs_distances(g, 0))


def is_tree(g: Graph) -> bool:
    return g.n >= 1 and g.m == g.n - 1 and is_connected(g)


def is_path(g: Graph) -> bool:
    if g.n == 1:
        return True
    return is_tree(g) and max(g.degree(v) for v in range(g.n)) <= 2


def is_bipartite(g: Graph) -> tuple[bool, tuple[list[int], list[int]] | None]:
    """2-colour every component; return the colour classes when possible."""
    color = [-1] * g.n
    for s in range(g.n):
        if color[s] >= 0:
            continue
        color[s] = 0
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for w in g.neighbors(u):
                if color[w] < 0:
                    color[w] = 1 - color[u]
                    queue.append(w)
                elif color[w] == color[u]:
                    return False, None
    x = [v for v in range(g.n) if color[v] == 0]
    y = [v for v in range(g.n) if color[v] == 1]
    return True, (x, y)


def eccentricities(g: Graph) -> list[int]:
    if not is_connected(g) or g.n == 0:
        raise GraphDomainError("eccentricity is undefined for a disconnected or empty graph")
    return [max(bfs_distances(g, v)) for v in range(g.n)]


def diameter(g: Graph) -> int:
    return max(eccentricities(g))


def pendant_vertices(g: Graph) -> list[int]:
    return [v for v in range(g.n) if g.degree(v) == 1]


def cut_edges(g: Graph) -> list[Edge]:
    """Bridges via iterative low-link DFS."""
    disc = [-1] * g.n
    low = [0] * g.n
    bridges = []
    timer = 0
    for root in range(g.n):
        if disc[root] >= 0:
            continue
        disc[root] = low[root] = timer
        timer += 1
        stack = [(root, -1, iter(sorted(g.neighbors(root))))]
        while stack:
            u, parent, it = stack[-1]
            advanced = False
            for w in it:
                if w == parent:
                    continue
                if disc[w] < 0:
                    disc[w] = low[w] = timer
                    timer += 1
                    stack.append((w, u, iter(sorted(g.neighbors(w)))))
                    advanced = True
                    break
                low[u] = min(low[u], disc[w])
            if not advanced:
                stack.pop()
                if parent >= 0:
                    low[parent] = min(low[parent], low[u])
                    if low[u] > disc[parent]:
                        bridges.append(_norm_edge(parent, u))
    return sorted(bridges)


def common_neighbors(g: Graph, u: int, v: int) -> frozenset:
    return g.neighbors(u) & g.neighbors(v)


def independent_sets_up_to(g: Graph, kmax: int, kmin: int = 1) -> Iterator[tuple[int, ...]]:
    """Yield every independent set with ``kmin <= size <= kmax`` (sorted tuples)."""
    def extend(current: list[int], start: int):
        if len(current) >= kmin:
            yield tuple(current)
        if len(current) == kmax:
            return
        for v in range(start, g.n):
            if all(not g.adj(v, u) for u in current):
                current.append(v)
                yield from extend(current, v + 1)
                current.pop()

    if kmax >= 1:
        for s in extend([], 0):
            if s:
                yield s


def maximal_cliques(g: Graph) -> Iterator[tuple[int, ...]]:
    """Bron--Kerbosch with pivoting; isolated vertices give singleton cliques."""
    def expand(r: list[int], p: set, x: set):
        if not p and not x:
            yield tuple(sorted(r))
            return
        pivot = max(p | x, key=lambda w: len(g.neighbors(w) & p))
        for v in sorted(p - g.neighbors(pivot)):
            yield from expand(r + [v], p & g.neighbors(v), x & g.neighbors(v))
            p = p - {v}
            x = x | {v}

    if g.n:
        yield from expand([], set(range(g.n)), set())


# ---------------------------------------------------------------- families


def empty_graph(n: int) -> Graph:
    _require(n >= 0, "empty graph needs n >= 0")
    return Graph(n)


def path_graph(n: int) -> Graph:
    _require(n >= 1, "path needs n >= 1")
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n: int) -> Graph:
    _require(n >= 3, "cycle needs n >= 3")
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def complete_graph(n: int) -> Graph:
    _require(n >= 1, "complete graph needs n >= 1")
    return Graph.from_edges(n, itertools.combinations(range(n), 2))


def complete_multipartite(*parts: int) -> Graph:
    _require(len(parts) >= 1 and all(p >= 1 for p in parts), "parts must be positive")
    owner = [k for k, p in enumerate(parts) for _ in range(p)]
    n = len(owner)
    return Graph.from_edges(
        n, [(i, j) for i, j in itertools.combinations(range(n), 2) if owner[i] != owner[j]])


def complete_bipartite(m: int, n: int) -> Graph:
    return complete_multipartite(m, n)


def star_graph(leaves: int) -> Graph:
    return complete_bipartite(1, leaves)


def hypercube(d: int) -> Graph:
    _require(d >= 1, "hypercube dimension must be >= 1")
    q = complete_graph(2)
    for _ in range(d - 1):
        q = cartesian_product(q, complete_graph(2))
    return Graph.from_edges(q.n, q.edges)


def petersen_graph() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    return Graph.from_edges(10, outer + inner + spokes)


def s_graph(m: int, n: int) -> Graph:
    """4-cycle v1 u1 v2 u2 with a path of ``m`` edges at v1 and ``n`` edges at v2.

    Vertex order is ``[v1, u1, v2, u2]`` followed by the path at v1 and then
    the path at v2, each listed outward from the cycle.  Path vertices
    alternate u/v labels so the graph stays bipartite.
    """
    _require(m >= 1 and n >= 1, "S_{m,n} needs m, n >= 1")
    labels = ["v1", "u1", "v2", "u2"]
    edges = [(0, 1), (1, 2), (2, 3), (3, 0)]
    index = 3

    def attach(root: int, length: int):
        nonlocal index
        prev = root
        for t in range(length):
            labels.append(("u" if t % 2 == 0 else "v") + str(index + t // 2))
            edges.append((prev, len(labels) - 1))
            prev = len(labels) - 1
        index += (length + 1) // 2

    attach(0, m)
    attach(2, n)
    return Graph.from_edges(len(labels), edges, labels)


def s_graph_extra_edge(m: int) -> Graph:
    """S_{m,m} with the edge u1--u3 added (u3 is the first vertex on the v1 path)."""
    s = s_graph(m, m)
    return Graph.from_edges(s.n, list(s.edges) + [(1, 4)], s.labels)


def s_graph_extra_vertex(m: int) -> Graph:
    """S_{m,m} with a new vertex w adjacent to u1 and u3."""
    s = s_graph(m, m)
    w = s.n
    return Graph.from_edges(s.n + 1, list(s.edges) + [(1, w), (4, w)], list(s.labels) + ["w"])


def g_nk(n: int, k: int) -> Graph:
    """Clique on v1..v_{n-k+2} followed by a tail path to v_n.

    ``k = 1`` has no clique of size ``n + 1``; it is taken to be the empty
    graph on ``n`` vertices.
    """
    _require(1 <= k <= n, "G(n,k) needs 1 <= k <= n")
    labels = [f"v{i + 1}" for i in range(n)]
    if k == 1:
        return Graph(n, frozenset(), labels)
    top = n - k + 2
    edges = list(itertools.combinations(range(top), 2))
    edges += [(i, i + 1) for i in range(top - 1, n - 1)]
    return Graph.from_edges(n, edges, labels)


_EXCEPTIONAL = {
    "c5": [(1, 5), (5, 4), (4, 3), (3, 2), (1, 2)],
    "c5p": [(1, 5), (5, 4), (4, 3), (3, 2), (1, 2), (5, 3)],
    "c5pp": [(1, 5), (5, 4), (4, 3), (3, 2), (1, 2), (2, 5), (5, 3)],
}


def exceptional_graph(name: str) -> Graph:
    """Base exceptional graphs ``c5``, ``c5p`` (C5') and ``c5pp`` (C5'')."""
    try:
        edges = _EXCEPTIONAL[name]
    except KeyError:
        raise ValueError(f"unknown exceptional graph {name!r}") from None
    return Graph.from_edges(5, [(u - 1, v - 1) for u, v in edges], [str(i) for i in range(1, 6)])


def path_with_chord(n: int, i: int) -> Graph:
    """Path v1..vn plus the chord {v_i, v_{i+2}}, ``1 <= i <= n-2``."""
    _require(n >= 3 and 1 <= i <= n - 2, "need n >= 3 and 1 <= i <= n-2")
    return Graph.from_edges(n, [(j, j + 1) for j in range(n - 1)] + [(i - 1, i + 1)])


def path_with_pendant(n: int, i: int) -> Graph:
    """Path v1..v_{n-1} plus v_n attached to v_i, ``2 <= i <= n-2``."""
    _require(n >= 4 and 2 <= i <= n - 2, "need n >= 4 and 2 <= i <= n-2")
    return Graph.from_edges(n, [(j, j + 1) for j in range(n - 2)] + [(i - 1, n - 1)])


def erdos_renyi(n: int, p: float, seed: int = 0) -> Graph:
    rng = np.random.default_rng(seed)
    pairs = list(itertools.combinations(range(n), 2))
    keep = rng.random(len(pairs)) < p
    return Graph.from_edges(n, [e for e, k in zip(pairs, keep) if k])


def random_tree(n: int, seed: int = 0) -> Graph:
    """Uniform labelled tree from a random Pruefer sequence."""
    _require(n >= 1, "tree needs n >= 1")
    if n <= 2:
        return path_graph(n)
    rng = np.random.default_rng(seed)
    seq = [int(x) for x in rng.integers(0, n, size=n - 2)]
    degree = [1] * n
    for x in seq:
        degree[x] += 1
    edges = []
    for x in seq:
        leaf = min(v for v in range(n) if degree[v] == 1)
        edges.append((leaf, x))
        degree[leaf] -= 1
        degree[x] -= 1
    u, v = [w for w in range(n) if degree[w] == 1]
    edges.append((u, v))
    return Graph.from_edges(n, edges)


def random_connected(n: int, p: float, seed: int = 0) -> Graph:
    """Random spanning tree plus independent extra edges with probability ``p``."""
    tree = random_tree(n, seed)
    extra = erdos_renyi(n, p, seed + 1)
    return Graph.from_edges(n, tree.edges | extra.edges)


FAMILIES: dict[str, Callable[..., Graph]] = {
    "empty": empty_graph,
    "path": path_graph,
    "cycle": cycle_graph,
    "complete": complete_graph,
    "complete-minus-edge": lambda n: Graph.from_edges(
        n, [e for e in complete_graph(n).edges if e != (0, n - 1)]),
    "complete-bipartite": complete_bipartite,
    "multipartite": complete_multipartite,
    "star": star_graph,
    "hypercube": hypercube,
    "petersen": petersen_graph,
    "s-graph": s_graph,
    "s-graph-edge": s_graph_extra_edge,
    "s-graph-vertex": s_graph_extra_vertex,
    "g-nk": g_nk,
    "c5": lambda: exceptional_graph("c5"),
    "c5p": lambda: exceptional_graph("c5p"),
    "c5pp": lambda: exceptional_graph("c5pp"),
    "path-chord": path_with_chord,
    "path-pendant": path_with_pendant,
    "random-tree": random_tree,
    "random-connected": lambda n, p=0.3, seed=0: random_connected(n, p, seed),
}


def generate(family: str, *params) -> Graph:
    """Build a named family member, e.g. ``generate("s-graph", 4, 4)``."""
    try:
        builder = FAMILIES[family]
    except KeyError:
        raise ValueError(
            f"unknown family {family!r}; choose from {', '.join(sorted(FAMILIES))}") from None
    try:
        return builder(*params)
    except TypeError as exc:
        raise ValueError(f"bad parameters for {family!r}: {exc}") from None


def _require(cond: bool, message: str):
    if not cond:
        raise ValueError(message)
