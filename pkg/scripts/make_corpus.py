"""Regenerate the graph6 corpora shipped in ``mindistinct/data``.

connected_le5.g6  every connected graph on 1..5 vertices, one per isomorphism class
connected_le7.g6  every connected graph on 1..7 vertices, one per isomorphism class
trees_le7.g6      every tree on 1..7 vertices, one per isomorphism class

Small enough for brute force: graphs are canonicalised by the minimum edge
bitmask over all vertex permutations, trees by the AHU string rooted at
their centre(s).  Orders 6 and 7 are grown from order n-1 by adding one
vertex with every nonempty neighbourhood; deleting a non-cut vertex of a
connected graph leaves it connected, so nothing is missed.
"""
from __future__ import annotations

import argparse
import itertools
from pathlib import Path

import numpy as np

from mindistinct.graph import Graph, is_connected, to_graph6

DATA = Path(__file__).resolve().parents[1] / "src" / "mindistinct" / "data"


def canonical_bitmask(n: int, edges) -> int:
    pairs = list(itertools.combinations(range(n), 2))
    index = {p: k for k, p in enumerate(pairs)}
    best = None
    for perm in itertools.permutations(range(n)):
        mask = 0
        for u, v in edges:
            a, b = sorted((perm[u], perm[v]))
            mask |= 1 << index[(a, b)]
        best = mask if best is None or mask < best else best
    return best


def connected_graphs(n: int) -> list[Graph]:
    pairs = list(itertools.combinations(range(n), 2))
    seen, out = set(), []
    for mask in range(1 << len(pairs)):
        edges = [p for k, p in enumerate(pairs) if mask >> k & 1]
        if len(edges) < n - 1:
            continue
        g = Graph.from_edges(n, edges)
        if not is_connected(g):
            continue
        key = canonical_bitmask(n, edges)
        if key not in seen:
            seen.add(key)
            out.append(Graph.from_edges(n, [p for k, p in enumerate(pairs) if key >> k & 1]))
    return sorted(out, key=lambda g: (g.m, to_graph6(g)))


class PermutationCanon:
    """Minimum edge bitmask over all permutations, vectorised over the permutations."""

    def __init__(self, n: int):
        pairs = list(itertools.combinations(range(n), 2))
        perms = np.array(list(itertools.permutations(range(n))), dtype=np.intp)
        self.pairs = pairs
        self.left = perms[:, [i for i, _ in pairs]]
        self.right = perms[:, [j for _, j in pairs]]
        self.weights = np.array([1 << k for k in range(len(pairs))], dtype=np.int64)

    def __call__(self, adj: np.ndarray) -> int:
        bits = adj[self.left, self.right]
        return int((bits.astype(np.int64) @ self.weights).min())

    def graph(self, n: int, key: int) -> Graph:
        return Graph.from_edges(n, [p for k, p in enumerate(self.pairs) if key >> k & 1])


def extend_connected(n: int, smaller: list[Graph]) -> list[Graph]:
    canon = PermutationCanon(n)
    seen = set()
    for h in smaller:
        for mask in range(1, 1 << (n - 1)):
            adj = np.zeros((n, n), dtype=bool)
            for u, v in h.edges:
                adj[u, v] = adj[v, u] = True
            for u in range(n - 1):
                if mask >> u & 1:
                    adj[u, n - 1] = adj[n - 1, u] = True
            seen.add(canon(adj))
    return sorted((canon.graph(n, key) for key in seen), key=lambda g: (g.m, to_graph6(g)))


def connected_up_to(nmax: int) -> list[Graph]:
    by_order = {n: connected_graphs(n) for n in range(1, min(nmax, 5) + 1)}
    for n in range(6, nmax + 1):
        by_order[n] = extend_connected(n, by_order[n - 1])
    return [g for n in sorted(by_order) for g in by_order[n]]


def _prufer_trees(n: int):
    if n == 1:
        yield []
        return
    if n == 2:
        yield [(0, 1)]
        return
    for seq in itertools.product(range(n), repeat=n - 2):
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
        yield edges


def tree_canonical(n: int, edges) -> str:
    adj = {v: set() for v in range(n)}
    for u, v in edges:
        adj[u].add(v)
        adj[v].add(u)
    layer = [v for v in range(n) if len(adj[v]) <= 1]
    remaining, deg = n, {v: len(adj[v]) for v in range(n)}
    while remaining > 2:
        remaining -= len(layer)
        nxt = []
        for leaf in layer:
            for w in adj[leaf]:
                deg[w] -= 1
                if deg[w] == 1:
                    nxt.append(w)
        layer = nxt
    centres = layer if n > 1 else [0]

    def encode(v, parent):
        return "(" + "".join(sorted(encode(w, v) for w in adj[v] if w != parent)) + ")"

    return min(encode(c, None) for c in centres)


def trees(n: int) -> list[Graph]:
    seen, out = set(), []
    for edges in _prufer_trees(n):
        key = tree_canonical(n, edges)
        if key not in seen:
            seen.add(key)
            out.append(Graph.from_edges(n, edges))
    return sorted(out, key=lambda g: to_graph6(g))


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out", type=Path, default=DATA)
    args = parser.parse_args(argv)
    args.out.mkdir(parents=True, exist_ok=True)
    connected = [g for n in range(1, 6) for g in connected_graphs(n)]
    tree_list = [g for n in range(1, 8) for g in trees(n)]
    seven = connected_up_to(7)
    (args.out / "connected_le5.g6").write_text("".join(to_graph6(g) + "\n" for g in connected))
    (args.out / "connected_le7.g6").write_text("".join(to_graph6(g) + "\n" for g in seven))
    (args.out / "trees_le7.g6").write_text("".join(to_graph6(g) + "\n" for g in tree_list))
    print(f"{len(connected)} + {len(seven)} connected graphs, {len(tree_list)} trees -> {args.out}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
