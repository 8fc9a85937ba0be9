"""Independent brute-force oracles shared by the test modules.

None of these call into the library's algorithms beyond the Graph container.
"""
import itertools

import numpy as np
from scipy.optimize import Bounds, LinearConstraint, milp

from mindistinct.graph import Graph


def hand_graph6(n, edges):
    """graph6 encoder written straight from the format description (n <= 62)."""
    bits = [1 if (i, j) in edges else 0 for j in range(n) for i in range(j)]
    bits += [0] * (-len(bits) % 6)
    chunks = [bits[k:k + 6] for k in range(0, len(bits), 6)]
    return chr(n + 63) + "".join(chr(63 + int("".join(map(str, c)), 2)) for c in chunks)


def n_components(n, edges):
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            x = parent[x]
        return x

    for u, v in edges:
        parent[find(u)] = find(v)
    return len({find(x) for x in range(n)})


def brute_cut_edges(g):
    base = n_components(g.n, g.edges)
    return sorted(e for e in g.edges if n_components(g.n, g.edges - {e}) > base)


def all_cliques(g, min_size=1):
    return [c for r in range(min_size, g.n + 1) for c in itertools.combinations(range(g.n), r)
            if all(g.adj(a, b) for a, b in itertools.combinations(c, 2))]


def brute_maximal_cliques(g):
    cliques = [set(c) for c in all_cliques(g)]
    return sorted(tuple(sorted(c)) for c in cliques if not any(c < d for d in cliques))


def brute_paths(g, s):
    """Distance and number of shortest s-v paths, by enumerating every simple path from s."""
    dist, count = {s: 0}, {s: 1}
    stack = [(s, (s,))]
    while stack:
        v, path = stack.pop()
        for w in g.neighbors(v):
            if w in path:
                continue
            length = len(path)
            if w not in dist or length < dist[w]:
                dist[w], count[w] = length, 1
            elif length == dist[w]:
                count[w] += 1
            stack.append((w, path + (w,)))
    return dist, count


def walk_count_paths(g):
    """Distances and geodesic counts from powers of the adjacency matrix.

    A walk whose length equals the distance is a shortest path, so the first
    power with a nonzero (u, v) entry gives both.
    """
    a = np.array([[1 if g.adj(i, j) else 0 for j in range(g.n)] for i in range(g.n)], dtype=np.int64)
    dist = np.where(np.eye(g.n, dtype=bool), 0, -1)
    count = np.eye(g.n, dtype=np.int64)
    power = np.eye(g.n, dtype=np.int64)
    for d in range(1, g.n):
        power = power @ a
        new = (dist < 0) & (power > 0)
        dist[new] = d
        count[new] = power[new]
    return dist, count


def milp_clique_cover(g):
    """Minimum number of cliques covering every edge, as a 0/1 program over all cliques."""
    edges = sorted(g.edges)
    if not edges:
        return 0
    cliques = all_cliques(g, 2)
    cover = np.array([[1 if u in c and v in c else 0 for c in cliques] for u, v in edges])
    res = milp(np.ones(len(cliques)), integrality=np.ones(len(cliques)),
               bounds=Bounds(0, 1), constraints=LinearConstraint(cover, lb=1))
    assert res.success
    return int(round(res.fun))


def canonical_form(g):
    """Lexicographically smallest sorted edge list over all vertex relabellings."""
    return min(tuple(sorted(tuple(sorted((p[u], p[v]))) for u, v in g.edges))
               for p in itertools.permutations(range(g.n)))


def isomorphic(g, h):
    return g.n == h.n and g.m == h.m and canonical_form(g) == canonical_form(h)


def nearest_involution_by_sampling(m, samples, rng):
    """Best Frobenius distance from ``m`` to sampled symmetric involutions.

    Involutions are ``U diag(s) U^T`` with ``s`` in {+1, -1}^n and ``U`` a
    random orthogonal matrix; every sign pattern is tried for each ``U``.
    """
    n = m.shape[0]
    signs = [np.array(s) for s in itertools.product((1.0, -1.0), repeat=n)]
    best = np.inf
    for _ in range(samples):
        u, _r = np.linalg.qr(rng.standard_normal((n, n)))
        for s in signs:
            best = min(best, np.linalg.norm(m - (u * s) @ u.T))
    return best
