"""Dense symmetric eigensolver, eigenvalue clustering and certificate checks.

Everything that claims "this matrix has k distinct eigenvalues" goes through
:func:`eigen_decompose` and :func:`distinct_count`.  Distinctness is measured
numerically: sorted eigenvalues are split wherever the gap between neighbours
exceeds ``rtol * scale``.
"""
from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field, replace
from typing import Any

import numpy as np

from . import _kernels
from .graph import Graph, parse_graph6, to_graph6

DEFAULT_RTOL = 1e-6
DEFAULT_ZERO_RTOL = 1e-8
JACOBI_TOL = 1e-14
JACOBI_MAX_SWEEPS = 30


class SpectraDomainError(ValueError):
    """Non-finite, non-square or non-symmetric matrix input."""


class EigenSolverError(RuntimeError):
    """Jacobi sweeps did not converge within the sweep limit."""


def as_symmetric(a) -> np.ndarray:
    """Validate a real symmetric matrix and return it as a float64 array."""
    a = np.array(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise SpectraDomainError(f"expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise SpectraDomainError("matrix has non-finite entries")
    if not np.array_equal(a, a.T):
        raise SpectraDomainError("matrix is not exactly symmetric")
    return a


def symmetrize(a) -> np.ndarray:
    """``(A + A^T) / 2``, which is exactly symmetric in floating point."""
    a = np.asarray(a, dtype=float)
    return (a + a.T) / 2.0


def eigen_decompose(a) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (ascending) and orthonormal eigenvectors by cyclic Jacobi.

    Sweeps stop once the off-diagonal Frobenius norm is at most
    ``1e-14 * ||A||_F``.

    Raises
    ------
    SpectraDomainError
        For non-finite or non-symmetric input.
    EigenSolverError
        If 30 sweeps do not reach the tolerance.
    """
    work = np.ascontiguousarray(as_symmetric(a), dtype=float).copy()
    n = work.shape[0]
    vecs = np.eye(n)
    if n == 0:
        return np.zeros(0), vecs
    tol = JACOBI_TOL * float(np.linalg.norm(work))
    sweeps = _kernels.jacobi_sweeps(work, vecs, tol, JACOBI_MAX_SWEEPS)
    if sweeps < 0:
        raise EigenSolverError(f"Jacobi did not converge in {JACOBI_MAX_SWEEPS} sweeps (n={n})")
    w = np.diag(work).copy()
    order = np.argsort(w, kind="stable")
    return w[order], vecs[:, order]


def eigenvalues(a) -> np.ndarray:
    return eigen_decompose(a)[0]


@dataclass(frozen=True)
class Clustering:
    """Sorted eigenvalues split into numerically distinct groups."""

    eigenvalues: tuple[float, ...]
    groups: tuple[tuple[int, ...], ...]
    gap_tolerance: float

    @property
    def count(self) -> int:
        return len(self.groups)

    @property
    def values(self) -> list[float]:
        return [float(np.mean([self.eigenvalues[i] for i in grp])) for grp in self.groups]

    @property
    def multiplicities(self) -> list[int]:
        return [len(grp) for grp in self.groups]

    @property
    def max_spread(self) -> float:
        """Largest within-group spread (0 for simple eigenvalues)."""
        return max((self.eigenvalues[g[-1]] - self.eigenvalues[g[0]] for g in self.groups),
                   default=0.0)

    @property
    def min_gap(self) -> float:
        """Smallest gap between adjacent groups (``inf`` for one group)."""
        gaps = [self.eigenvalues[b[0]] - self.eigenvalues[a[-1]]
                for a, b in zip(self.groups, self.groups[1:])]
        return min(gaps, default=math.inf)

    @property
    def ambiguous(self) -> bool:
        """True when single-linkage chaining produced a group wider than the tolerance."""
        return self.max_spread > self.gap_tolerance

    def to_dict(self) -> dict:
        return {
            "eigenvalues": [repr(float(x)) for x in self.eigenvalues],
            "groups": [list(g) for g in self.groups],
            "gap_tolerance": self.gap_tolerance,
            "count": self.count,
        }


def spectral_scale(eigs) -> float:
    eigs = np.asarray(eigs, dtype=float)
    if eigs.size == 0:
        return 1.0
    return max(1.0, float(eigs[-1] - eigs[0]))


def distinct_count(eigs, scale: float | None = None, rtol: float = DEFAULT_RTOL) -> Clustering:
    """Group sorted eigenvalues, splitting at gaps larger than ``rtol * scale``.

    ``scale`` defaults to ``max(1, spread)``.
    """
    eigs = np.asarray(eigs, dtype=float)
    if eigs.size and np.any(np.diff(eigs) < 0):
        raise ValueError("eigenvalues must be sorted ascending")
    if scale is None:
        scale = spectral_scale(eigs)
    if scale <= 0:
        raise ValueError("scale must be positive")
    tau = rtol * scale
    groups: list[list[int]] = []
    for i, x in enumerate(eigs):
        if groups and x - eigs[i - 1] <= tau:
            groups[-1].append(i)
        else:
            groups.append([i])
    return Clustering(tuple(float(x) for x in eigs), tuple(tuple(g) for g in groups), tau)


def count_distinct(a, rtol: float = DEFAULT_RTOL) -> int:
    return distinct_count(eigenvalues(a), rtol=rtol).count


def multiplicity_profile(clustering: Clustering) -> list[int]:
    """Group sizes in descending order."""
    return sorted(clustering.multiplicities, reverse=True)


def spectral_radius(a) -> float:
    w = eigenvalues(a)
    return float(np.max(np.abs(w))) if w.size else 0.0


@dataclass(frozen=True)
class PatternCheck:
    ok: bool
    zero_tol: float
    min_edge_magnitude: float
    max_nonedge_magnitude: float
    violations: tuple[tuple[int, int, float, str], ...] = ()

    def __bool__(self) -> bool:
        return self.ok


def in_pattern(a, g: Graph, zero_tol: float | None = None) -> PatternCheck:
    """Check ``A in S(G)``: edge entries nonzero, off-diagonal non-edges zero.

    The diagonal is unconstrained.  ``zero_tol`` defaults to
    ``1e-8 * max(1, ||A||_F)``.
    """
    a = np.asarray(a, dtype=float)
    if a.shape != (g.n, g.n):
        raise ValueError(f"matrix shape {a.shape} does not match graph order {g.n}")
    if zero_tol is None:
        zero_tol = DEFAULT_ZERO_RTOL * max(1.0, float(np.linalg.norm(a)))
    violations = []
    min_edge, max_nonedge = math.inf, 0.0
    for i in range(g.n):
        for j in range(i + 1, g.n):
            x = abs(a[i, j])
            if g.adj(i, j):
                min_edge = min(min_edge, x)
                if x <= zero_tol:
                    violations.append((i, j, float(a[i, j]), "edge entry is zero"))
            else:
                max_nonedge = max(max_nonedge, x)
                if x > zero_tol:
                    violations.append((i, j, float(a[i, j]), "non-edge entry is nonzero"))
    return PatternCheck(not violations, zero_tol, min_edge, max_nonedge, tuple(violations))


def affine_normalize(a, lam1: float, lam2: float, mu1: float, mu2: float) -> np.ndarray:
    """Affine image of ``A`` whose spectrum maps ``lam1 -> mu1`` and ``lam2 -> mu2``.

    Off-diagonal entries are scaled by the nonzero slope, so the pattern is kept.
    """
    if lam1 == lam2 or mu1 == mu2:
        raise ValueError("affine_normalize needs lam1 != lam2 and mu1 != mu2")
    a = as_symmetric(a)
    slope = (mu1 - mu2) / (lam1 - lam2)
    shift = (lam1 * mu2 - lam2 * mu1) / (mu1 - mu2)
    return symmetrize(slope * (a + shift * np.eye(a.shape[0])))


# ---------------------------------------------------------------- certificates


@dataclass(frozen=True)
class Verification:
    ok: bool
    failures: tuple[str, ...]
    measured_q: int
    clustering: Clustering
    pattern: PatternCheck
    max_residual: float
    orthogonality_error: float
    min_edge_magnitude: float
    min_cluster_gap: float

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "failures": list(self.failures),
            "measured_q": self.measured_q,
            "multiplicities": self.clustering.multiplicities,
            "values": [repr(v) for v in self.clustering.values],
            "gap_tolerance": self.clustering.gap_tolerance,
            "max_residual": self.max_residual,
            "orthogonality_error": self.orthogonality_error,
            "min_edge_magnitude": self.min_edge_magnitude,
            "min_cluster_gap": self.min_cluster_gap,
            "pattern_violations": [list(v) for v in self.pattern.violations],
        }


@dataclass(frozen=True)
class Certificate:
    """A matrix claimed to lie in S(G) with ``claimed_q`` distinct eigenvalues."""

    graph: Graph
    matrix: np.ndarray = field(compare=False)
    claimed_q: int
    provenance: dict = field(default_factory=dict, compare=False)
    verification: Verification | None = field(default=None, compare=False)

    @property
    def verified(self) -> bool:
        return self.verification is not None and self.verification.ok

    @property
    def cert_id(self) -> str:
        digest = hashlib.sha1(np.ascontiguousarray(self.matrix).tobytes()).hexdigest()[:10]
        return f"{self.provenance.get('construction', 'cert')}-{digest}"

    def to_dict(self) -> dict[str, Any]:
        out = {
            "graph6": to_graph6(self.graph),
            "matrix": [[format(float(x), ".17g") for x in row] for row in self.matrix],
            "claimed_q": int(self.claimed_q),
            "provenance": self.provenance,
        }
        if self.verification is not None:
            out["verification"] = self.verification.to_dict()
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1, default=_json_default)

    @classmethod
    def from_dict(cls, data: dict) -> "Certificate":
        g = parse_graph6(data["graph6"])
        matrix = np.array([[float(x) for x in row] for row in data["matrix"]], dtype=float)
        return cls(g, matrix, int(data["claimed_q"]), dict(data.get("provenance", {})))

    @classmethod
    def from_json(cls, text: str) -> "Certificate":
        return cls.from_dict(json.loads(text))


def _json_default(obj):
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def verify(cert: Certificate, rtol: float = DEFAULT_RTOL, zero_tol: float | None = None) -> Certificate:
    """Return ``cert`` with its verification record filled in.

    Failure is reported in the record (``verification.ok`` false and a list of
    failed checks), never raised, except for malformed matrices.
    """
    failures = []
    try:
        a = as_symmetric(cert.matrix)
    except SpectraDomainError as exc:
        a = symmetrize(np.nan_to_num(np.asarray(cert.matrix, dtype=float)))
        failures.append(f"matrix: {exc}")
    if a.shape != (cert.graph.n, cert.graph.n):
        raise ValueError(f"matrix shape {a.shape} does not match graph order {cert.graph.n}")
    w, v = eigen_decompose(a)
    clustering = distinct_count(w, rtol=rtol)
    pattern = in_pattern(a, cert.graph, zero_tol)
    anorm = max(1.0, float(np.linalg.norm(a)))
    residual = float(np.max(np.linalg.norm(a @ v - v * w, axis=0))) / anorm if w.size else 0.0
    orth = float(np.max(np.abs(v.T @ v - np.eye(len(w))))) if w.size else 0.0
    if not pattern.ok:
        i, j, x, kind = pattern.violations[0]
        failures.append(f"pattern: {len(pattern.violations)} violation(s), first ({i},{j})={x:.3g}: {kind}")
    if clustering.count != cert.claimed_q:
        failures.append(f"clustering: measured {clustering.count} distinct eigenvalues != claimed {cert.claimed_q}")
    if clustering.ambiguous:
        failures.append(f"clustering: group spread {clustering.max_spread:.3g} exceeds gap tolerance")
    record = Verification(
        ok=not failures,
        failures=tuple(failures),
        measured_q=clustering.count,
        clustering=clustering,
        pattern=pattern,
        max_residual=residual,
        orthogonality_error=orth,
        min_edge_magnitude=pattern.min_edge_magnitude,
        min_cluster_gap=clustering.min_gap,
    )
    return replace(cert, verification=record)
