import itertools

import numpy as np
import pytest

from mindistinct import graph as gr
from mindistinct.bounds import (
    bound_report, lower_tree_diameter, lower_unique_shortest_path, q2_obstructions, rule_out_q2,
    upper_clique_cover,
)
from mindistinct.constructions import adjacency_certificate, complete_bipartite_certificate
from mindistinct.graph import load_corpus

from oracles import brute_paths, milp_clique_cover, walk_count_paths

CONNECTED7 = load_corpus("connected_le7")


# ---------------------------------------------------------------- unique shortest path


@pytest.mark.parametrize("g, value", [
    (gr.path_graph(6), 6), (gr.s_graph(4, 4), 6), (gr.hypercube(3), 2),
    (gr.cycle_graph(5), 3), (gr.cycle_graph(6), 3), (gr.complete_graph(5), 2),
    (gr.g_nk(8, 5), 5),
])
def test_unique_shortest_path_examples(g, value):
    got, (u, v) = lower_unique_shortest_path(g)
    assert got == value
    dist, count = brute_paths(g, u)
    assert dist[v] + 1 == value and count[v] == 1


def test_fig2_graph_lower_bound():
    assert lower_unique_shortest_path(gr.s_graph_extra_edge(4))[0] >= 10


def test_unique_path_bound_against_walk_oracle():
    """Bound equals 1 + longest geodesic with count 1; equals n only on paths."""
    for g in CONNECTED7:
        dist, count = walk_count_paths(g)
        expect = 1 + max(int(dist[u, v]) for u in range(g.n) for v in range(g.n) if count[u, v] == 1)
        got, _ = lower_unique_shortest_path(g)
        assert got == expect
        if g.m:
            assert got >= 2
        is_path = g.m == g.n - 1 and max((g.degree(v) for v in range(g.n)), default=0) <= 2
        assert (got == g.n) == is_path


def test_disconnected_graph_uses_components():
    g = gr.union(gr.path_graph(3), gr.path_graph(5))
    assert lower_unique_shortest_path(g)[0] == 5
    assert lower_unique_shortest_path(gr.empty_graph(3))[0] == 1


@pytest.mark.parametrize("g, value", [
    (gr.star_graph(4), 3), (gr.path_graph(5), 5), (gr.cycle_graph(4), None),
])
def test_tree_diameter(g, value):
    assert lower_tree_diameter(g) == value


def test_tree_diameter_agrees_with_unique_path_on_trees():
    for g in load_corpus("trees_le7"):
        if g.m:
            assert lower_tree_diameter(g) == lower_unique_shortest_path(g)[0]


# ---------------------------------------------------------------- obstructions to q = 2


def test_petersen_obstruction():
    hit = rule_out_q2(gr.petersen_graph())
    assert hit.value == 3 and hit.rule == "no-q2:common-neighbors"
    assert len(hit.witness["common"]) == 1


def test_p1_join_p4_obstruction():
    g = gr.join(gr.empty_graph(1), gr.path_graph(4))
    hits = q2_obstructions(g)
    assert hits and all(h.value == 3 for h in hits)
    assert "no-q2:independent-set" in {h.rule for h in hits}


def test_k23_obstruction():
    hits = {h.rule: h for h in q2_obstructions(gr.complete_bipartite(2, 3))}
    assert "no-q2:unequal-bipartition" in hits
    sizes = sorted(len(p) for p in hits["no-q2:unequal-bipartition"].witness["parts"])
    assert sizes == [2, 3]


@pytest.mark.parametrize("g", [
    gr.hypercube(d) for d in (2, 3, 4, 5)] + [
    gr.complete_graph(5), gr.complete_bipartite(3, 3), gr.complete_multipartite(2, 2, 2),
    gr.join(gr.path_graph(4), gr.path_graph(4)), gr.cycle_graph(4),
])
def test_no_obstruction_on_q2_graphs(g):
    assert q2_obstructions(g) == []


def test_pendant_and_cut_edge_rules():
    assert rule_out_q2(gr.star_graph(3)).rule == "no-q2:pendant-vertex"
    two_triangles = gr.Graph.from_edges(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 3)])
    assert rule_out_q2(two_triangles).rule == "no-q2:cut-edge"


def test_pair_witnesses_are_found_by_set_rule():
    """Every common-neighbour pair witness reappears in the general enumeration at k = 2."""
    for g in CONNECTED7:
        hits = q2_obstructions(g, kmax=2)
        pairs = [set(h.witness["pair"]) for h in hits if h.rule == "no-q2:common-neighbors"]
        if not pairs:
            continue
        found = [set(h.witness["set"]) for h in hits if h.rule == "no-q2:independent-set"]
        assert all(p in found for p in pairs), gr.to_graph6(g)


def test_obstruction_witnesses_are_genuine():
    for g in CONNECTED7:
        for h in q2_obstructions(g):
            w = h.witness
            if h.rule == "no-q2:pendant-vertex":
                assert g.degree(w["vertex"]) == 1
            elif h.rule == "no-q2:cut-edge":
                u, v = w["edge"]
                assert gr.is_connected(g) and not gr.is_connected(
                    gr.Graph.from_edges(g.n, g.edges - {(u, v)}))
            elif h.rule == "no-q2:common-neighbors":
                u, v = w["pair"]
                assert not g.adj(u, v) and len(gr.common_neighbors(g, u, v)) == 1
            elif h.rule == "no-q2:independent-set":
                s, covered = w["set"], set(w["covered"])
                assert not any(g.adj(a, b) for a, b in itertools.combinations(s, 2))
                assert len(covered) < len(s)


def test_all_tree_components_fire():
    for g in load_corpus("trees_le7"):
        if g.n >= 3:
            assert rule_out_q2(g) is not None


# ---------------------------------------------------------------- clique cover


@pytest.mark.parametrize("g, value", [
    (gr.complete_graph(6), 2), (gr.path_graph(4), 4), (gr.g_nk(6, 3), 3), (gr.empty_graph(3), 1),
    (gr.petersen_graph(), 16), (gr.complete_multipartite(2, 2, 2), 5),
])
def test_clique_cover_examples(g, value):
    cover = upper_clique_cover(g)
    assert cover.value == value and cover.exact
    covered = {e for c in cover.cover for e in itertools.combinations(sorted(c), 2)}
    assert covered == set(g.edges)


def test_clique_cover_matches_milp_oracle():
    for g in CONNECTED7:
        assert upper_clique_cover(g).value == milp_clique_cover(g) + 1 or g.m == 0
    for seed in range(25):
        g = gr.erdos_renyi(8, 0.5, seed)
        assert upper_clique_cover(g).value == max(milp_clique_cover(g), 0) + 1


def test_clique_cover_budget_fallback():
    g = gr.erdos_renyi(12, 0.5, 1)
    cover = upper_clique_cover(g, node_budget=3)
    assert not cover.exact and cover.value >= upper_clique_cover(g).value


# ---------------------------------------------------------------- report


def test_report_examples():
    c5 = gr.cycle_graph(5)
    assert bound_report(c5, [adjacency_certificate(c5)]).exact == 3
    assert bound_report(gr.complete_bipartite(3, 3), [complete_bipartite_certificate(3, 3)]).exact == 2
    empty = bound_report(gr.empty_graph(4))
    assert empty.exact == 1 and empty.rules_fired == ["edgeless"]
    assert bound_report(gr.empty_graph(0)).exact == 0
    assert bound_report(gr.empty_graph(1)).exact == 1
    report = bound_report(gr.petersen_graph(), [adjacency_certificate(gr.petersen_graph())])
    assert report.exact == 3 and report.consistent
    data = report.to_dict()
    assert data["graph6"] == gr.to_graph6(gr.petersen_graph()) and data["exact"] == 3


def test_report_rejects_foreign_or_unverified_certificates():
    report = bound_report(gr.path_graph(3))
    with pytest.raises(ValueError):
        report.add_certificate(adjacency_certificate(gr.path_graph(4)))
    cert = adjacency_certificate(gr.path_graph(3))
    from dataclasses import replace

    bad = replace(cert, verification=replace(cert.verification, ok=False))
    with pytest.raises(ValueError):
        report.add_certificate(bad)


def test_lower_bounds_never_exceed_order():
    rng = np.random.default_rng(0)
    for _ in range(30):
        g = gr.random_connected(int(rng.integers(2, 12)), 0.3, int(rng.integers(1000)))
        report = bound_report(g)
        assert report.consistent and report.best_upper <= g.n
