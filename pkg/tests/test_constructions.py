import math
import warnings

import numpy as np
import pytest

from mindistinct import constructions as cs
from mindistinct import graph as gr
from mindistinct.bounds import bound_report, upper_clique_cover
from mindistinct.graph import load_corpus
from mindistinct.spectra import Certificate, eigenvalues, in_pattern, verify


def involution_error(a):
    return np.max(np.abs(a @ a - np.eye(len(a))))


def spectrum(cert):
    return np.array(cert.verification.clustering.eigenvalues)


def pm1(cert):
    return verify(Certificate(cert.graph, cs.normalize_pm1(cert), cert.verification.measured_q))


# ---------------------------------------------------------------- complete families


@pytest.mark.parametrize("n", [2, 5, 50])
def test_complete(n):
    cert = cs.complete_certificate(n)
    assert cert.verified and cert.claimed_q == 2
    assert np.allclose(spectrum(cert), [-1] * (n - 1) + [n - 1])


@pytest.mark.parametrize("n", range(2, 13))
def test_complete_minus_edge(n):
    cert = cs.complete_minus_edge_certificate(n)
    assert cert.verified and cert.claimed_q == {2: 1, 3: 3}.get(n, 2)
    assert cert.graph.m == n * (n - 1) // 2 - 1
    if n >= 4:
        assert involution_error(cert.matrix) <= 1e-12


@pytest.mark.parametrize("m, n", [(m, n) for n in range(1, 7) for m in range(1, n + 1)])
def test_complete_bipartite(m, n):
    cert = cs.complete_bipartite_certificate(m, n)
    assert cert.verified and cert.claimed_q == (2 if m == n else 3)
    if m == n:
        assert involution_error(cert.matrix) <= 1e-12
    else:
        root = math.sqrt(m * n)
        assert np.allclose(spectrum(cert), [-root] + [0] * (m + n - 2) + [root])


def test_orthogonal_full_support():
    for n in range(1, 9):
        b = cs.orthogonal_full_support(n)
        assert np.allclose(b @ b.T, np.eye(n)) and np.all(b != 0)


# ---------------------------------------------------------------- join with itself


@pytest.mark.parametrize("g", [
    gr.empty_graph(1), gr.path_graph(3), gr.cycle_graph(5), gr.star_graph(4), gr.complete_graph(4),
    gr.path_graph(10), gr.random_tree(8, 2),
])
def test_join_self(g):
    cert = cs.join_self_certificate(g)
    info = cert.provenance
    assert cert.verified and cert.claimed_q == 2
    assert cert.graph == gr.join(g, g)
    assert info["involution_error"] <= 1e-9 and info["sq_eqn_residual"] <= 1e-10
    assert info["min_y_entry"] > 0 and info["min_root_entry"] > 1e-12
    assert info["deltas_monotone"]


def test_join_self_order_scaling_on_small_graph():
    cert = cs.join_self_certificate(gr.path_graph(3), scaling="order")
    assert cert.verified and cert.provenance["recipe"]["extra"]["scaling"] == "order"
    n = 3
    adj = gr.path_graph(3).adjacency_matrix()
    p = (2 * n - 1) / (4 * n * n) * np.linalg.matrix_power(adj / n + np.eye(n), 2)
    root = cert.matrix[:n, n:]
    assert np.max(np.abs(root @ root + p - np.eye(n))) <= 1e-10


def test_join_self_rejects_disconnected_and_diverging():
    with pytest.raises(ValueError):
        cs.join_self_certificate(gr.empty_graph(2))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        with pytest.raises(cs.ConstructionError):
            cs.square_root_iteration(1.2 * np.eye(2), stall=50)


def test_square_root_iteration_matches_closed_form():
    # scalar case: the limit of y <- (p + y^2)/2 is 1 - sqrt(1 - p)
    for p in (0.1, 0.5, 0.9):
        trace = cs.square_root_iteration(np.array([[p]]))
        assert trace.y[0, 0] == pytest.approx(1 - math.sqrt(1 - p), abs=1e-12)


@pytest.mark.parametrize("parts", [(1, 1), (2, 2, 1, 1), (3, 3, 1, 1), (1, 1, 2, 2, 3, 3)])
def test_multipartite(parts):
    cert = cs.multipartite_certificate(*parts)
    assert cert.verified and cert.graph == gr.complete_multipartite(*parts)
    assert involution_error(cert.matrix) <= 1e-9


@pytest.mark.parametrize("parts", [(2, 2, 2), (1, 2), (2,)])
def test_multipartite_needs_pairs(parts):
    with pytest.raises(ValueError):
        cs.multipartite_certificate(*parts)


def test_k222_explicit_witness():
    cert = cs.k222_certificate()
    assert cert.verified and involution_error(cert.matrix) <= 1e-12
    for i in range(3):
        assert np.all(cert.matrix[2 * i:2 * i + 2, 2 * i:2 * i + 2] == 0)


# ---------------------------------------------------------------- products


def test_cartesian_examples():
    k2 = cs.complete_certificate(2)
    c4 = cs.cartesian_k2_certificate(k2)
    assert c4.verification.measured_q == 2 and sorted(c4.graph.degree(v) for v in range(4)) == [2] * 4
    k3 = pm1(cs.complete_certificate(3))
    assert cs.cartesian_k2_certificate(k3).verification.measured_q <= 2
    p3 = pm1(cs.path_certificate(3))
    assert cs.cartesian_k2_certificate(p3).verification.measured_q <= 4
    with pytest.raises(ValueError):
        cs.cartesian_k2_certificate(cs.path_certificate(3))
    with pytest.raises(ValueError):
        cs.cartesian_k2_certificate(k2, 0.5, 0.5)


@pytest.mark.parametrize("seed", range(12))
def test_cartesian_spectrum_property(seed):
    rng = np.random.default_rng(seed)
    g = gr.random_connected(int(rng.integers(2, 9)), 0.3, seed)
    base = pm1(cs.adjacency_certificate(g))
    alpha = float(rng.uniform(0.2, 0.9))
    beta = math.sqrt(1 - alpha * alpha)
    cert = cs.cartesian_k2_certificate(base, alpha, beta)
    assert cert.graph == gr.cartesian_product(g, gr.complete_graph(2))
    mu = eigenvalues(base.matrix)
    expect = np.sort(np.r_[np.sqrt(alpha ** 2 * mu ** 2 + beta ** 2),
                           -np.sqrt(alpha ** 2 * mu ** 2 + beta ** 2)])
    assert np.allclose(spectrum(cert), expect, atol=1e-10)
    assert cert.verification.measured_q <= 2 * base.verification.measured_q - 2


@pytest.mark.parametrize("d", range(1, 7))
def test_hypercube(d):
    cert = cs.hypercube_certificate(d)
    assert cert.verified and cert.claimed_q == 2 and cert.graph == gr.hypercube(d)
    assert involution_error(cert.matrix) <= 1e-9


def test_corona_examples():
    k1 = verify(Certificate(gr.empty_graph(1), np.zeros((1, 1)), 1))
    cert = cs.corona_certificate(k1)
    assert np.allclose(spectrum(cert), [-1, 1])
    assert cs.corona_certificate(cs.complete_certificate(3)).verification.measured_q <= 4
    c4 = cs.complete_bipartite_certificate(2, 2)
    assert cs.corona_certificate(c4).verification.measured_q <= 4


@pytest.mark.parametrize("seed", range(12))
def test_corona_map_property(seed):
    rng = np.random.default_rng(seed)
    g = gr.random_connected(int(rng.integers(1, 9)), 0.3, seed)
    a = g.adjacency_matrix() * rng.uniform(0.5, 2.0, (g.n, g.n))
    a = (a + a.T) / 2 + np.diag(rng.standard_normal(g.n))
    base = cs._certify(g, a, None, cs.Recipe("random"))
    cert = cs.corona_certificate(base)
    assert cert.provenance["eigen_map_error"] <= 1e-8
    assert cert.graph == gr.corona(g)
    assert cert.verification.measured_q <= 2 * base.verification.measured_q


def test_union():
    k2 = cs.complete_certificate(2)
    assert cs.union_certificate(k2, k2).verification.measured_q == 2
    assert cs.union_certificate(cs.complete_certificate(3), cs.complete_certificate(5)).verified
    assert cs.union_certificate(cs.hypercube_certificate(2), cs.complete_certificate(4)).verified
    with pytest.raises(ValueError):
        cs.union_certificate(k2, cs.path_certificate(3))


# ---------------------------------------------------------------- clique covers and G(n, k)


@pytest.mark.parametrize("n, k", [(n, k) for n in range(2, 9) for k in range(2, n + 1)])
def test_g_nk(n, k):
    cert = cs.g_nk_certificate(n, k)
    assert cert.verified and cert.claimed_q == k and cert.graph == gr.g_nk(n, k)
    assert bound_report(cert.graph, [cert]).exact == k


def test_nonnegative_certificates_respect_diameter():
    """Entrywise nonnegative certificates on connected graphs have at least diam + 1 eigenvalues."""
    for g in load_corpus("connected_le7"):
        cert = cs.clique_cover_certificate(g)
        assert np.all(cert.matrix >= 0)
        q = cert.verification.measured_q
        if g.m:
            assert gr.diameter(g) + 1 <= q <= upper_clique_cover(g).value


# ---------------------------------------------------------------- S graphs and exceptional graphs


@pytest.mark.parametrize("m, n", [(4, 4), (2, 2), (2, 4), (1, 1), (1, 3), (3, 5), (6, 2), (5, 5)])
def test_s_graph(m, n):
    cert = cs.s_graph_certificate(m, n)
    assert cert.verified and cert.claimed_q == max(m, n) + 2
    assert bound_report(cert.graph, [cert]).exact == max(m, n) + 2


def test_s_graph_parity_check():
    with pytest.raises(ValueError):
        cs.s_graph_certificate(2, 3)


def test_exceptional():
    certs = cs.exceptional_certificates()
    assert set(certs) == {"c5", "c5p", "c5pp"}
    for name, cert in certs.items():
        assert cert.verified and cert.claimed_q == 3
        assert cert.graph == gr.exceptional_graph(name)
    expect = np.sort([0, 0, 2, 2, 18 - 9 * math.sqrt(2)])
    assert np.max(np.abs(spectrum(certs["c5pp"]) - expect)) <= 1e-8
    assert in_pattern(certs["c5p"].matrix, gr.exceptional_graph("c5p"))


# ---------------------------------------------------------------- bipartite bound


def test_bipartite_upper_examples():
    k33 = gr.complete_bipartite(3, 3)
    res = cs.bipartite_upper(k33, np.eye(3) - 2 / 3 * np.ones((3, 3)))
    assert res.bound == 2 and res.square and res.certificate.verification.measured_q == 2
    k23 = gr.complete_bipartite(2, 3)
    res = cs.bipartite_upper(k23, np.ones((2, 3)))
    assert (res.gram_q, res.bound, res.certificate.verification.measured_q) == (2, 5, 3)
    s44 = cs.s_graph_certificate(4, 4)
    b, parts = cs.path_bipartite_block(s44)
    res = cs.bipartite_upper(s44.graph, b, parts)
    assert s44.verification.measured_q <= res.bound
    with pytest.raises(ValueError):
        cs.bipartite_upper(k23, np.array([[1.0, 0, 1], [1, 1, 1]]))


# ---------------------------------------------------------------- cross-module


def test_constructed_certificates_respect_lower_bounds():
    certs = [
        cs.complete_minus_edge_certificate(6), cs.hypercube_certificate(3), cs.k222_certificate(),
        cs.join_self_certificate(gr.path_graph(4)), cs.s_graph_certificate(3, 3),
        cs.corona_certificate(cs.complete_certificate(4)), cs.cycle_certificate(6),
        *cs.exceptional_certificates().values(),
    ]
    for cert in certs:
        report = bound_report(cert.graph, [cert])
        assert report.consistent
        assert report.best_lower <= cert.verification.measured_q


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_small_cycles(n):
    cert = cs.cycle_certificate(n)
    assert cert.verified and cert.claimed_q == (n + 1) // 2
