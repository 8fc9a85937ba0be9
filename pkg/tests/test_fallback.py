import os
import subprocess
import sys

import numpy as np
import pytest

from mindistinct import _kernels

compiled = pytest.mark.skipif(_kernels.compiled_jacobi_sweeps is None,
                              reason="compiled extension not built")


def run_kernel(kernel, a):
    work, vecs = a.copy(), np.eye(len(a))
    sweeps = kernel(work, vecs, 1e-14 * np.linalg.norm(a), 30)
    return sweeps, work, vecs


@compiled
@pytest.mark.parametrize("seed", range(8))
def test_kernels_agree(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 16))
    b = rng.standard_normal((n, n))
    a = (b + b.T) / 2
    s1, w1, v1 = run_kernel(_kernels.compiled_jacobi_sweeps, a)
    s2, w2, v2 = run_kernel(_kernels.python_jacobi_sweeps, a)
    assert s1 == s2 >= 0
    assert np.allclose(w1, w2, atol=1e-12) and np.allclose(v1, v2, atol=1e-12)


def test_kernel_reports_exhaustion():
    rng = np.random.default_rng(0)
    b = rng.standard_normal((8, 8))
    a = (b + b.T) / 2
    assert run_kernel(_kernels.python_jacobi_sweeps, a)[0] >= 1
    work, vecs = a.copy(), np.eye(8)
    assert _kernels.python_jacobi_sweeps(work, vecs, 0.0, 1) == -1


def test_environment_forces_python_backend():
    env = dict(os.environ, MINDISTINCT_PURE_PYTHON="1")
    script = (
        "import mindistinct, mindistinct.spectra as s, mindistinct.graph as g\n"
        "c = s.verify(s.Certificate(g.petersen_graph(), g.petersen_graph().adjacency_matrix(), 3))\n"
        "print(mindistinct.BACKEND, c.verified)\n"
    )
    out = subprocess.run([sys.executable, "-c", script], env=env, capture_output=True, text=True,
                         check=True).stdout.split()
    assert out == ["python", "True"]


@compiled
def test_default_backend_is_compiled():
    if os.environ.get("MINDISTINCT_PURE_PYTHON"):
        pytest.skip("fallback forced by environment")
    assert _kernels.BACKEND == "cython"
