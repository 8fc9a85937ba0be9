"""Combinatorial lower and upper bounds on q(G) and their aggregation.

Lower-bound rules
-----------------
``edgeless``             q = 1 exactly when G has no edges.
``nonempty``             q >= 2 for any graph with an edge.
``unique-shortest-path`` a unique shortest u-v path of length d gives q >= d + 1.
``tree-diameter``        q(T) >= diam(T) + 1 (cross-check on trees).
``no-q2:*``              structural obstructions to q = 2, giving q >= 3.

Upper bounds come from the edge clique cover number (q <= cc + 1) and from
verified certificates.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Any, Iterable, Sequence

from .graph import (
    Graph, common_neighbors, components, cut_edges, diameter, independent_sets_up_to,
    is_bipartite, is_tree, maximal_cliques, pendant_vertices, shortest_path_counts,
)
from .spectra import Certificate

CLIQUE_COVER_MAX_N = 16
CLIQUE_COVER_NODE_BUDGET = 200_000
INDEPENDENT_SET_CAP = 12
INDEPENDENT_SET_BUDGET = 100_000


@dataclass(frozen=True)
class Bound:
    value: int
    rule: str
    witness: Any = None

    def to_dict(self) -> dict:
        return {"value": self.value, "rule": self.rule, "witness": _plain(self.witness)}


def _plain(obj):
    if isinstance(obj, (list, tuple, set, frozenset)):
        items = sorted(obj) if isinstance(obj, (set, frozenset)) else obj
        return [_plain(x) for x in items]
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    return obj


def _component_graphs(g: Graph) -> list[tuple[list[int], Graph]]:
    return [(comp, g.induced_subgraph(comp)) for comp in components(g)]


# ---------------------------------------------------------------- lower bounds


def lower_unique_shortest_path(g: Graph) -> tuple[int, tuple[int, int] | None]:
    """``1 + max d(u, v)`` over pairs joined by exactly one shortest path.

    Works per component on disconnected graphs; the witness uses the
    original vertex numbering.
    """
    best, witness = 1, None
    for u in range(g.n):
        dist, count = shortest_path_counts(g, u)
        for v in range(u + 1, g.n):
            if dist[v] > 0 and count[v] == 1 and dist[v] + 1 > best:
                best, witness = dist[v] + 1, (u, v)
    if witness is None and g.n:
        witness = (0, 0)
    return best, witness


def lower_tree_diameter(g: Graph) -> int | None:
    return diameter(g) + 1 if is_tree(g) else None


def q2_obstructions(g: Graph, kmax: int | None = None, first_only: bool = False) -> list[Bound]:
    """Every violated necessary condition for q(G) = 2.

    Each connected component on at least 3 vertices is checked for a pendant
    vertex, a cut edge, a non-adjacent pair with exactly one common
    neighbour, unequal bipartition sizes, and independent sets ``S`` where
    the union ``X`` of pairwise common neighbourhoods is smaller than the
    number of members of ``S`` adjacent to ``X``.  Any hit shows
    q(component) >= 3 and hence q(G) >= 3.

    Only members adjacent to ``X`` count: in a symmetric orthogonal matrix
    their rows restricted to ``X`` are nonzero and mutually orthogonal.  A
    non-adjacent pair with no common neighbour is no obstruction (antipodal
    vertices of Q_3, which has q = 2).

    At most ``INDEPENDENT_SET_BUDGET`` independent sets are examined per
    component, so on large sparse graphs this rule may miss a hit; it never
    reports a false one.
    """
    found: list[Bound] = []

    def hit(rule, witness):
        found.append(Bound(3, rule, witness))
        return first_only

    for comp, h in _component_graphs(g):
        if h.n < 3 or h.m == 0:
            continue
        back = comp
        pend = pendant_vertices(h)
        if pend and hit("no-q2:pendant-vertex", {"vertex": back[pend[0]]}):
            return found
        bridges = cut_edges(h)
        if bridges and hit("no-q2:cut-edge", {"edge": [back[x] for x in bridges[0]]}):
            return found
        for u, v in itertools.combinations(range(h.n), 2):
            if not h.adj(u, v):
                common = common_neighbors(h, u, v)
                if len(common) == 1 and hit(
                        "no-q2:common-neighbors",
                        {"pair": [back[u], back[v]], "common": sorted(back[w] for w in common)}):
                    return found
        bip, parts = is_bipartite(h)
        if bip and len(parts[0]) != len(parts[1]) and hit(
                "no-q2:unequal-bipartition",
                {"parts": [[back[x] for x in parts[0]], [back[x] for x in parts[1]]]}):
            return found
        cap = kmax if kmax is not None else min(h.n // 2 + 1, INDEPENDENT_SET_CAP)
        for s in itertools.islice(independent_sets_up_to(h, cap, kmin=2), INDEPENDENT_SET_BUDGET):
            covered = set()
            for a, b in itertools.combinations(s, 2):
                covered |= common_neighbors(h, a, b)
            touching = [x for x in s if h.neighbors(x) & covered]
            if len(covered) < len(touching) and hit(
                    "no-q2:independent-set",
                    {"set": [back[x] for x in touching], "covered": sorted(back[x] for x in covered)}):
                return found
    return found


def rule_out_q2(g: Graph) -> Bound | None:
    """First obstruction to q(G) = 2 (lower bound 3), or None if none fires."""
    hits = q2_obstructions(g, first_only=True)
    return hits[0] if hits else None


# ---------------------------------------------------------------- clique cover


@dataclass(frozen=True)
class CliqueCover:
    value: int
    cover: tuple[tuple[int, ...], ...]
    exact: bool
    nodes: int = 0


def _greedy_cover(edges: Sequence, cliques: Sequence[frozenset]) -> list[int]:
    uncovered = set(range(len(edges)))
    chosen = []
    while uncovered:
        best = max(range(len(cliques)), key=lambda c: (len(cliques[c] & uncovered), -c))
        chosen.append(best)
        uncovered -= cliques[best]
    return chosen


def upper_clique_cover(g: Graph, node_budget: int = CLIQUE_COVER_NODE_BUDGET) -> CliqueCover:
    """Minimum edge clique cover by branch and bound over maximal cliques.

    The search lower bound counts uncovered edges that pairwise share no
    clique.  Graphs above 16 vertices, or searches past ``node_budget``
    nodes, return the best cover found with ``exact=False``.
    """
    edges = g.sorted_edges()
    if not edges:
        return CliqueCover(1, (), True)
    eidx = {e: k for k, e in enumerate(edges)}
    cliques = [c for c in maximal_cliques(g) if len(c) >= 2]
    masks = [frozenset(eidx[e] for e in itertools.combinations(c, 2)) for c in cliques]
    greedy = _greedy_cover(edges, masks)
    if g.n > CLIQUE_COVER_MAX_N:
        return CliqueCover(len(greedy) + 1, tuple(cliques[c] for c in greedy), False)

    covering = [0] * len(edges)
    for c, mk in enumerate(masks):
        for e in mk:
            covering[e] |= 1 << c
    full = (1 << len(edges)) - 1
    bitmask = [sum(1 << e for e in mk) for mk in masks]

    best = list(greedy)
    nodes = 0
    exhausted = False

    def lower(uncovered: int) -> int:
        used, count = 0, 0
        rest = uncovered
        while rest:
            e = (rest & -rest).bit_length() - 1
            rest &= rest - 1
            if covering[e] & used == 0:
                used |= covering[e]
                count += 1
        return count

    def branch(covered: int, chosen: list[int]):
        nonlocal best, nodes, exhausted
        nodes += 1
        if nodes > node_budget:
            exhausted = True
            return
        if covered == full:
            if len(chosen) < len(best):
                best = list(chosen)
            return
        uncovered = full & ~covered
        if len(chosen) + lower(uncovered) >= len(best):
            return
        rest, pick, options = uncovered, -1, None
        while rest:
            e = (rest & -rest).bit_length() - 1
            rest &= rest - 1
            k = bin(covering[e]).count("1")
            if options is None or k < options:
                pick, options = e, k
                if k == 1:
                    break
        cand = [c for c in range(len(masks)) if covering[pick] >> c & 1]
        cand.sort(key=lambda c: -bin(bitmask[c] & uncovered).count("1"))
        for c in cand:
            chosen.append(c)
            branch(covered | bitmask[c], chosen)
            chosen.pop()
            if exhausted:
                return

    branch(0, [])
    return CliqueCover(len(best) + 1, tuple(cliques[c] for c in best), not exhausted, nodes)


# ---------------------------------------------------------------- report


@dataclass
class BoundReport:
    graph: Graph
    lower_bounds: list[Bound] = field(default_factory=list)
    upper_bounds: list[Bound] = field(default_factory=list)

    @property
    def best_lower(self) -> int:
        return max(b.value for b in self.lower_bounds)

    @property
    def best_upper(self) -> int:
        return min(b.value for b in self.upper_bounds)

    @property
    def consistent(self) -> bool:
        return self.best_lower <= self.best_upper

    @property
    def exact(self) -> int | None:
        return self.best_lower if self.best_lower == self.best_upper else None

    @property
    def rules_fired(self) -> list[str]:
        return [b.rule for b in self.lower_bounds if b.value == self.best_lower]

    def lower_witness(self) -> Bound:
        return max(self.lower_bounds, key=lambda b: b.value)

    def upper_witness(self) -> Bound:
        return min(self.upper_bounds, key=lambda b: b.value)

    def add_certificate(self, cert: Certificate):
        if not cert.verified:
            raise ValueError("only verified certificates can bound q(G)")
        if cert.graph != self.graph:
            raise ValueError("certificate is for a different graph")
        self.upper_bounds.append(
            Bound(cert.verification.measured_q, "certificate", {"id": cert.cert_id}))

    def to_dict(self) -> dict:
        from .graph import to_graph6

        return {
            "graph6": to_graph6(self.graph),
            "n": self.graph.n,
            "m": self.graph.m,
            "lower_bounds": [b.to_dict() for b in self.lower_bounds],
            "upper_bounds": [b.to_dict() for b in self.upper_bounds],
            "best_lower": self.best_lower,
            "best_upper": self.best_upper,
            "exact": self.exact,
            "consistent": self.consistent,
        }


def bound_report(g: Graph, certs: Iterable[Certificate] = ()) -> BoundReport:
    """Collect every lower bound rule, the clique cover bound and the certificates."""
    report = BoundReport(g)
    if g.n == 0:
        report.lower_bounds.append(Bound(0, "no-vertices"))
        report.upper_bounds.append(Bound(0, "no-vertices"))
        return report
    if g.m == 0:
        report.lower_bounds.append(Bound(1, "edgeless"))
        report.upper_bounds.append(Bound(1, "edgeless", "identity matrix"))
    else:
        report.lower_bounds.append(Bound(2, "nonempty"))
        value, pair = lower_unique_shortest_path(g)
        report.lower_bounds.append(Bound(value, "unique-shortest-path", pair))
        tree = lower_tree_diameter(g)
        if tree is not None:
            report.lower_bounds.append(Bound(tree, "tree-diameter"))
        obstruction = rule_out_q2(g)
        if obstruction is not None:
            report.lower_bounds.append(obstruction)
        cover = upper_clique_cover(g)
        rule = "clique-cover" if cover.exact else "clique-cover-heuristic"
        report.upper_bounds.append(Bound(cover.value, rule, [list(c) for c in cover.cover]))
        report.upper_bounds.append(Bound(g.n, "order"))
    for cert in certs:
        report.add_certificate(cert)
    return report
