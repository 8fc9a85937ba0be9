import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from mindistinct import graph as gr
from mindistinct.constructions import complete_minus_edge_certificate, exceptional_certificates
from mindistinct.spectra import (
    Certificate, SpectraDomainError, affine_normalize, distinct_count, eigen_decompose,
    eigenvalues, in_pattern, multiplicity_profile, spectral_radius, verify,
)


def random_symmetric(rng, n):
    b = rng.standard_normal((n, n))
    return (b + b.T) / 2


# ---------------------------------------------------------------- eigensolver


@pytest.mark.parametrize("seed", range(40))
def test_solver_against_numpy(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 21))
    a = random_symmetric(rng, n) * 10.0 ** rng.integers(-3, 4)
    w, v = eigen_decompose(a)
    scale = max(1.0, np.linalg.norm(a))
    assert np.allclose(w, np.linalg.eigvalsh(a), atol=1e-10 * scale)
    assert np.linalg.norm(v @ np.diag(w) @ v.T - a) <= 1e-9 * max(np.linalg.norm(a), 1e-300)
    assert np.max(np.abs(v.T @ v - np.eye(n))) <= 1e-10
    assert np.max(np.linalg.norm(a @ v - v * w, axis=0)) <= 1e-10 * scale


def test_solver_on_structured_matrices():
    assert np.allclose(eigenvalues(gr.complete_graph(3).adjacency_matrix()), [-1, -1, 2])
    c5 = eigenvalues(gr.cycle_graph(5).adjacency_matrix())
    assert np.allclose(c5, sorted(2 * math.cos(2 * math.pi * j / 5) for j in range(5)))
    assert np.allclose(eigenvalues(np.diag([3.0, 1.0, 4.0])), [1, 3, 4])
    w, v = eigen_decompose(np.zeros((0, 0)))
    assert w.size == 0 and v.shape == (0, 0)
    # repeated eigenvalues still give an orthonormal basis
    w, v = eigen_decompose(np.ones((6, 6)))
    assert np.allclose(w, [0] * 5 + [6]) and np.allclose(v.T @ v, np.eye(6))


@pytest.mark.parametrize("bad", [
    [[1.0, 2.0], [2.1, 1.0]], [[np.nan, 0.0], [0.0, 1.0]], [[1.0, 2.0, 3.0]], [[np.inf]],
])
def test_solver_rejects_bad_input(bad):
    with pytest.raises(SpectraDomainError):
        eigen_decompose(bad)


# ---------------------------------------------------------------- clustering


def test_clustering_examples():
    assert distinct_count([-1, -1, 2], scale=3).count == 2
    assert distinct_count(eigenvalues(gr.cycle_graph(5).adjacency_matrix())).count == 3
    assert distinct_count([0, 5e-7, 1], scale=1).count == 2
    assert distinct_count([0, 2e-6, 1], scale=1).count == 3
    assert distinct_count([]).count == 0
    with pytest.raises(ValueError):
        distinct_count([1, 0])


@given(st.lists(st.floats(-50, 50), min_size=1, max_size=12),
       st.floats(1, 20), st.floats(-30, 30), st.booleans())
def test_clustering_affine_invariance(values, slope, shift, flip):
    eigs = np.sort(values)
    base = distinct_count(eigs)
    s = -slope if flip else slope
    mapped = np.sort(s * eigs + shift)
    image = distinct_count(mapped, scale=abs(s) * base.gap_tolerance / 1e-6)
    # compare group sizes in the order they appear after the map
    sizes = base.multiplicities[::-1] if flip else base.multiplicities
    assert image.multiplicities == sizes


@given(st.lists(st.floats(-5, 5), min_size=1, max_size=10), st.floats(1e-9, 1e-2),
       st.floats(1, 100))
def test_clustering_monotone_in_tolerance(values, rtol, factor):
    eigs = np.sort(values)
    assert distinct_count(eigs, rtol=rtol * factor).count <= distinct_count(eigs, rtol=rtol).count


def test_clustering_invariants():
    rng = np.random.default_rng(7)
    for _ in range(50):
        eigs = np.sort(np.round(rng.standard_normal(15), 1) + rng.standard_normal(15) * 1e-9)
        c = distinct_count(eigs)
        flat = [i for grp in c.groups for i in grp]
        assert flat == list(range(15))
        assert all(eigs[b[0]] - eigs[a[-1]] > c.gap_tolerance for a, b in zip(c.groups, c.groups[1:]))


def test_multiplicity_profile_and_radius():
    assert multiplicity_profile(distinct_count(eigenvalues(gr.complete_graph(4).adjacency_matrix()))) == [3, 1]
    assert multiplicity_profile(distinct_count(eigenvalues(gr.path_graph(4).adjacency_matrix()))) == [1] * 4
    assert spectral_radius(gr.complete_graph(6).adjacency_matrix()) == pytest.approx(5)
    assert spectral_radius(np.zeros((3, 3))) == 0
    assert spectral_radius(gr.cycle_graph(9).adjacency_matrix()) == pytest.approx(2)


# ---------------------------------------------------------------- pattern and affine maps


def test_in_pattern_cases():
    g = gr.petersen_graph()
    assert in_pattern(g.adjacency_matrix(), g)
    check = in_pattern(np.eye(3), gr.complete_graph(3))
    assert not check and len(check.violations) == 3
    k5e = complete_minus_edge_certificate(5)
    assert in_pattern(k5e.matrix, k5e.graph)
    a = gr.path_graph(3).adjacency_matrix()
    a[0, 2] = a[2, 0] = 1e-3
    check = in_pattern(a, gr.path_graph(3))
    assert not check and check.violations[0][:2] == (0, 2)
    a[0, 2] = a[2, 0] = 1e-12
    assert in_pattern(a, gr.path_graph(3))
    with pytest.raises(ValueError):
        in_pattern(np.eye(2), gr.path_graph(3))


def test_affine_normalize_examples():
    k3 = gr.complete_graph(3).adjacency_matrix()
    assert np.allclose(eigenvalues(affine_normalize(k3, 2, -1, 1, -1)), [-1, -1, 1])
    c4 = gr.cycle_graph(4).adjacency_matrix()
    assert np.allclose(eigenvalues(affine_normalize(c4, 2, -2, 1, -1)), [-1, 0, 0, 1])
    assert np.allclose(affine_normalize(k3, 2, -1, 2, -1), k3)
    out = affine_normalize(k3, 2, -1, 1, -1)
    assert in_pattern(out, gr.complete_graph(3)) and np.array_equal(out, out.T)
    with pytest.raises(ValueError):
        affine_normalize(k3, 2, 2, 1, -1)


# ---------------------------------------------------------------- certificates


def test_verify_examples():
    k4 = gr.complete_graph(4)
    good = verify(Certificate(k4, k4.adjacency_matrix(), 2))
    assert good.verified and good.verification.clustering.multiplicities == [3, 1]
    assert np.allclose(good.verification.clustering.values, [-1, 3])
    bad = verify(Certificate(k4, k4.adjacency_matrix(), 3))
    assert not bad.verified and "measured 2" in bad.verification.failures[0]
    c5pp = exceptional_certificates()["c5pp"]
    w = np.array(c5pp.verification.clustering.eigenvalues)
    assert c5pp.verified and c5pp.claimed_q == 3
    assert np.max(np.abs(w - np.sort([0, 0, 2, 2, 18 - 9 * math.sqrt(2)]))) <= 1e-8


def test_verify_reports_rather_than_raises():
    g = gr.path_graph(3)
    bad = verify(Certificate(g, np.array([[0, 1, 0], [1.5, 0, 1], [0, 1, 0]]), 3))
    assert not bad.verified and any(f.startswith("matrix") for f in bad.verification.failures)
    zeroed = verify(Certificate(g, np.zeros((3, 3)), 1))
    assert not zeroed.verified and zeroed.verification.failures[0].startswith("pattern")


def test_certificate_json_round_trip_is_exact():
    rng = np.random.default_rng(3)
    g = gr.cycle_graph(6)
    a = g.adjacency_matrix() * rng.uniform(0.5, 2, (6, 6))
    a = (a + a.T) / 2 + np.diag(rng.standard_normal(6))
    cert = verify(Certificate(g, a, 6, {"construction": "random"}))
    back = Certificate.from_json(cert.to_json())
    assert back.graph == g and np.array_equal(back.matrix, a) and back.cert_id == cert.cert_id
    assert verify(back).verification.to_dict() == cert.verification.to_dict()


def test_tampering_is_detected():
    cert = verify(Certificate(gr.complete_graph(5), gr.complete_graph(5).adjacency_matrix(), 2))
    data = cert.to_dict()
    data["matrix"][0][1] = data["matrix"][1][0] = "0"
    tampered = verify(Certificate.from_dict(data))
    assert not tampered.verified and "(0,1)" in tampered.verification.failures[0]
