"""Alternating-projection search for matrices in S(G) with a prescribed spectrum shape.

Each restart alternates between two sets: matrices with the target spectral
structure (involutions, or a fixed multiplicity profile) and matrices with
the sign pattern of G whose edge entries stay at least ``eta`` in
magnitude.  Alternating projections converge only linearly, so once the two
sets are within ``POLISH_FROM`` of each other a few Newton steps on the
pattern entries finish the job.  A restart succeeds when the two
projections agree to ``tol`` in max norm; the pattern-side matrix is then
verified independently.  Failure proves nothing about q(G).
"""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .bounds import BoundReport, bound_report
from .graph import Graph
from .spectra import Certificate, distinct_count, eigen_decompose, eigenvalues, symmetrize, verify

DEFAULT_RESTARTS = 64
DEFAULT_MAX_SWEEPS = 5000
DEFAULT_TOL = 1e-10
DEFAULT_ETA = 1e-3
PROFILE_CAP = 50
STALL_WINDOW = 400
MIN_VALUE_GAP = 0.05
POLISH_FROM = 1e-2
POLISH_HANDOFF = 1e-6
POLISH_STEPS = 30


@dataclass(frozen=True)
class SearchProblem:
    """A search target on ``graph``.

    ``target`` is ``"involution"`` or a tuple of multiplicities listed from
    the largest eigenvalue down.  ``values`` pins the eigenvalues (strictly
    decreasing, one per multiplicity) and defaults to Chebyshev points in
    [-1, 1].  ``values="adaptive"`` instead uses the block means of the
    current spectrum, rescaled to [-1, 1], so only the multiplicities are
    prescribed.
    """

    graph: Graph
    target: str | tuple[int, ...] = "involution"
    values: tuple[float, ...] | str | None = None
    restarts: int = DEFAULT_RESTARTS
    max_sweeps: int = DEFAULT_MAX_SWEEPS
    seed: int = 0
    eta: float = DEFAULT_ETA
    tol: float = DEFAULT_TOL
    workers: int = 1

    def __post_init__(self):
        if self.target != "involution":
            mults = tuple(int(x) for x in self.target)
            object.__setattr__(self, "target", mults)
            if any(x < 1 for x in mults) or sum(mults) != self.graph.n:
                raise ValueError(f"multiplicities {mults} must be positive and sum to {self.graph.n}")
            if self.values is None:
                object.__setattr__(self, "values", chebyshev_values(len(mults)))
            if self.values != "adaptive":
                vals = tuple(float(v) for v in self.values)
                object.__setattr__(self, "values", vals)
                if len(vals) != len(mults):
                    raise ValueError("need one target value per multiplicity")
                if any(b >= a for a, b in zip(vals, vals[1:])):
                    raise ValueError("target values must be strictly decreasing")
        elif self.values is not None:
            raise ValueError("involution targets take no values")
        if self.eta <= 0 or self.tol <= 0:
            raise ValueError("eta and tol must be positive")
        if self.restarts < 1 or self.max_sweeps < 1:
            raise ValueError("restarts and max_sweeps must be >= 1")

    @property
    def classes(self) -> int:
        return 2 if self.target == "involution" else len(self.target)

    def describe(self) -> dict:
        return {
            "target": self.target if self.target == "involution" else list(self.target),
            "values": self.values if self.values in (None, "adaptive") else list(self.values),
            "restarts": self.restarts, "max_sweeps": self.max_sweeps, "seed": self.seed,
            "eta": self.eta, "tol": self.tol,
        }


@dataclass(frozen=True)
class RestartResult:
    index: int
    status: str  # converged | polished | rejected | stalled | exhausted
    sweeps: int
    residual: float
    matrix: np.ndarray | None = None

    def to_dict(self) -> dict:
        return {"index": self.index, "status": self.status, "sweeps": self.sweeps,
                "residual": self.residual}


@dataclass
class SearchOutcome:
    problem: SearchProblem
    certificate: Certificate | None
    restarts: list[RestartResult] = field(default_factory=list)

    @property
    def success(self) -> bool:
        return self.certificate is not None

    def to_dict(self) -> dict:
        from .graph import to_graph6

        counts: dict[str, int] = {}
        for r in self.restarts:
            counts[r.status] = counts.get(r.status, 0) + 1
        return {
            "graph6": to_graph6(self.problem.graph),
            "problem": self.problem.describe(),
            "success": self.success,
            "certificate_id": self.certificate.cert_id if self.certificate else None,
            "status_counts": counts,
            "best_residual": min((r.residual for r in self.restarts), default=None),
            "restarts": [r.to_dict() for r in self.restarts],
        }


# ---------------------------------------------------------------- projections


def project_involution(a: np.ndarray) -> np.ndarray:
    """Nearest symmetric involution in Frobenius norm: ``U sign(L) U^T``, sign(0) = +1."""
    lam, u = eigen_decompose(a)
    s = np.where(lam >= 0, 1.0, -1.0)
    return symmetrize((u * s) @ u.T)


def chebyshev_values(k: int) -> tuple[float, ...]:
    """``k`` Chebyshev points in [-1, 1], decreasing (``(1,)`` for ``k = 1``)."""
    if k == 1:
        return (1.0,)
    return tuple(math.cos((2 * j + 1) * math.pi / (2 * k)) for j in range(k))


def _adaptive_values(lam_desc: np.ndarray, mults: Sequence[int]) -> np.ndarray:
    bounds = np.cumsum((0,) + tuple(mults))
    vals = np.array([lam_desc[bounds[i]:bounds[i + 1]].mean() for i in range(len(mults))])
    if len(vals) == 1:
        return vals
    lo, hi = vals[-1], vals[0]
    vals = (vals - lo) / (hi - lo) * 2.0 - 1.0 if hi > lo else np.linspace(1.0, -1.0, len(vals))
    for i in range(1, len(vals)):
        vals[i] = min(vals[i], vals[i - 1] - MIN_VALUE_GAP)
    return (vals - vals[-1]) / (vals[0] - vals[-1]) * 2.0 - 1.0


def project_spectrum(a: np.ndarray, mults: Sequence[int], values="adaptive") -> np.ndarray:
    """Replace the sorted spectrum of ``a`` blockwise by the target values.

    Eigenvalues are matched sorted-to-sorted: the largest ``mults[0]`` get
    ``values[0]``, and so on.  Ties keep the eigensolver's index order.
    """
    lam, u = eigen_decompose(a)
    lam_desc = lam[::-1]
    vals = (_adaptive_values(lam_desc, mults) if isinstance(values, str)
            else np.asarray(values, dtype=float))
    new_desc = np.repeat(vals, mults)
    return symmetrize((u * new_desc[::-1]) @ u.T)


def edge_mask(g: Graph) -> np.ndarray:
    mask = np.zeros((g.n, g.n), dtype=bool)
    for i, j in g.edges:
        mask[i, j] = mask[j, i] = True
    return mask


def project_pattern(a: np.ndarray, mask: np.ndarray, eta: float) -> np.ndarray:
    """Zero the non-edges and push edge entries to magnitude >= ``eta`` (sign 0 -> +)."""
    out = np.where(mask, a, 0.0)
    np.fill_diagonal(out, np.diag(a))
    small = mask & (np.abs(out) < eta)
    out[small] = np.where(out[small] < 0, -eta, eta)
    return out


def random_start(g: Graph, rng: np.random.Generator, mask: np.ndarray, eta: float) -> np.ndarray:
    x = rng.uniform(-1.0, 1.0, (g.n, g.n))
    x = np.triu(x) + np.triu(x, 1).T
    return project_pattern(x, mask, eta)


def _block_layout(problem: SearchProblem, lam: np.ndarray):
    """Ascending multiplicity blocks and values (None when adaptive) for ``lam``."""
    if problem.target == "involution":
        neg = int(np.sum(lam < 0))
        mults = [m for m in (neg, len(lam) - neg) if m]
        vals = ([-1.0] if neg else []) + ([1.0] if neg < len(lam) else [])
        return mults, vals
    mults = list(problem.target)[::-1]
    vals = None if problem.values == "adaptive" else list(problem.values)[::-1]
    return mults, vals


def newton_polish(problem: SearchProblem, a: np.ndarray, steps: int = POLISH_STEPS):
    """Newton iteration for the multiple-eigenvalue inverse problem on the pattern.

    Each step asks that, for every multiplicity block with eigenvector
    basis ``U_b``, the compressed matrix ``U_b^T (A + dA) U_b`` equal the
    block's value times the identity (to first order), and takes the
    minimum-norm pattern correction ``dA``.  With adaptive values the block
    values are extra unknowns.  Returns ``(matrix, residual)`` where the
    residual is the largest eigenvalue-to-target distance.
    """
    g = problem.graph
    n = g.n
    edges = g.sorted_edges()
    ii = np.array([e[0] for e in edges], dtype=int)
    jj = np.array([e[1] for e in edges], dtype=int)
    residual = math.inf
    for _ in range(steps + 1):
        lam, u = eigen_decompose(a)
        mults, vals = _block_layout(problem, lam)
        starts = np.cumsum([0] + mults)
        free = vals is None
        blocks, rhs = [], []
        residual = 0.0
        for b, m_b in enumerate(mults):
            ub = u[:, starts[b]:starts[b + 1]]
            lb = lam[starts[b]:starts[b + 1]]
            target = lb.mean() if free else vals[b]
            residual = max(residual, float(np.max(np.abs(lb - target))))
            px, py = np.triu_indices(m_b)
            rows = np.vstack([ub[:, px] * ub[:, py],
                              ub[ii][:, px] * ub[jj][:, py] + ub[jj][:, px] * ub[ii][:, py]]).T
            if free:
                extra = np.zeros((len(px), len(mults)))
                extra[px == py, b] = -1.0
                rows = np.hstack([rows, extra])
            blocks.append(rows)
            rhs.append(np.where(px == py, target - lb[px], 0.0))
        scale = max(1.0, float(np.max(np.abs(lam))))
        if residual <= 1e-13 * scale:
            break
        dx = np.linalg.lstsq(np.vstack(blocks), np.concatenate(rhs), rcond=None)[0]
        da = np.diag(dx[:n])
        da[ii, jj] = da[jj, ii] = dx[n:n + len(edges)]
        a = a + da
    return a, residual


def _project(problem: SearchProblem, a: np.ndarray) -> np.ndarray:
    if problem.target == "involution":
        return project_involution(a)
    return project_spectrum(a, problem.target, problem.values)


def _run_restart(problem: SearchProblem, index: int) -> RestartResult:
    g = problem.graph
    rng = np.random.default_rng([problem.seed, index])
    mask = edge_mask(g)
    a = random_start(g, rng, mask, problem.eta)
    best, best_at = math.inf, 0
    residual = math.inf
    status, sweep = "exhausted", 0
    for sweep in range(1, problem.max_sweeps + 1):
        s = _project(problem, a)
        a = project_pattern(s, mask, problem.eta)
        residual = float(np.max(np.abs(s - a)))
        if residual <= problem.tol:
            return RestartResult(index, "converged", sweep, residual, a)
        if residual <= POLISH_HANDOFF:
            break
        if residual < 0.99 * best:
            best, best_at = residual, sweep
        elif sweep - best_at > STALL_WINDOW:
            status = "stalled"
            break
    if residual > POLISH_FROM:
        return RestartResult(index, status, sweep, residual)
    polished, _ = newton_polish(problem, a)
    signs_kept = np.all(np.sign(polished[mask]) == np.sign(a[mask]))
    if not signs_kept or np.min(np.abs(polished[mask])) < problem.eta:
        return RestartResult(index, status, sweep, residual)
    residual = float(np.max(np.abs(_project(problem, polished) - polished)))
    if residual <= problem.tol:
        return RestartResult(index, "polished", sweep, residual, polished)
    return RestartResult(index, status, sweep, residual)


def _certify(problem: SearchProblem, result: RestartResult) -> Certificate | None:
    claimed = problem.classes
    measured = distinct_count(eigenvalues(result.matrix)).count
    provenance = {
        "construction": "search",
        "search": {**problem.describe(), "restart": result.index, "sweeps": result.sweeps,
                   "residual": result.residual},
    }
    cert = verify(Certificate(problem.graph, symmetrize(result.matrix), min(claimed, measured), provenance))
    return cert if cert.verified else None


def _restart_batch(problem: SearchProblem, indices: Sequence[int]) -> list[RestartResult]:
    return [_run_restart(problem, i) for i in indices]


def run_search(problem: SearchProblem) -> SearchOutcome:
    """Run restarts in index order and return the lowest-index verified success.

    With ``workers > 1`` restarts are spread over a process pool; all
    results are gathered before choosing, so the answer does not depend on
    scheduling.
    """
    outcome = SearchOutcome(problem, None)
    if problem.graph.n == 0:
        return outcome
    if problem.workers > 1:
        chunks = [list(range(k, problem.restarts, problem.workers)) for k in range(problem.workers)]
        with ProcessPoolExecutor(max_workers=problem.workers) as pool:
            results = [r for batch in pool.map(_restart_batch, [problem] * len(chunks), chunks)
                       for r in batch]
        results.sort(key=lambda r: r.index)
    else:
        results = None
    for index in range(problem.restarts):
        result = results[index] if results is not None else _run_restart(problem, index)
        if result.status in ("converged", "polished"):
            cert = _certify(problem, result)
            if cert is None:
                result = RestartResult(index, "rejected", result.sweeps, result.residual)
            elif outcome.certificate is None:
                outcome.certificate = cert
        outcome.restarts.append(RestartResult(result.index, result.status, result.sweeps, result.residual))
        if outcome.certificate is not None and results is None:
            break
    return outcome


def find_involution(problem: SearchProblem) -> Certificate | None:
    """Verified certificate with two eigenvalues, or None.

    Deliberately does not consult the combinatorial obstructions first, so
    that agreement between the two is a meaningful check.
    """
    if problem.target != "involution":
        raise ValueError("find_involution needs an involution target")
    if problem.graph.m == 0:
        return None
    return run_search(problem).certificate


def find_with_multiplicities(problem: SearchProblem) -> Certificate | None:
    if problem.target == "involution":
        raise ValueError("find_with_multiplicities needs a multiplicity list")
    return run_search(problem).certificate


# ---------------------------------------------------------------- profiles


def partitions(n: int, k: int, largest: int | None = None):
    """Partitions of ``n`` into exactly ``k`` positive parts, nonincreasing."""
    largest = n if largest is None else largest
    if k == 0:
        if n == 0:
            yield ()
        return
    for first in range(min(n - k + 1, largest), 0, -1):
        if first * k < n:
            break
        for rest in partitions(n - first, k - 1, first):
            yield (first,) + rest


def _multiset_permutations(items: tuple[int, ...], limit: int):
    out: list[tuple[int, ...]] = []
    counts: dict[int, int] = {}
    for x in items:
        counts[x] = counts.get(x, 0) + 1
    keys = sorted(counts)

    def rec(prefix):
        if len(out) >= limit:
            return
        if len(prefix) == len(items):
            out.append(tuple(prefix))
            return
        for key in keys:
            if counts[key]:
                counts[key] -= 1
                prefix.append(key)
                rec(prefix)
                prefix.pop()
                counts[key] += 1

    rec([])
    return out


def multiplicity_profiles(n: int, k: int, cap: int = PROFILE_CAP) -> list[tuple[int, ...]]:
    """Ordered multiplicity lists with ``k`` classes summing to ``n``.

    Partitions go most balanced first (smallest sum of squares); within a
    partition, arrangements with simple eigenvalues at the two ends come
    first.
    """
    if not 1 <= k <= n:
        return []
    parts = sorted(partitions(n, k), key=lambda p: (sum(x * x for x in p), tuple(-x for x in p)))
    out: list[tuple[int, ...]] = []
    for p in parts:
        arrangements = _multiset_permutations(p, 2000)
        arrangements.sort(key=lambda a: ((a[0] > 1) + (a[-1] > 1), a[::-1] != a, a))
        for a in arrangements:
            out.append(a)
            if len(out) >= cap:
                return out
    return out


# ---------------------------------------------------------------- estimate


@dataclass
class Estimate:
    lo: int
    hi: int
    certificates: list[Certificate]
    report: BoundReport

    @property
    def exact(self) -> int | None:
        return self.lo if self.lo == self.hi else None


def _adjacency_certificate(g: Graph) -> Certificate | None:
    a = g.adjacency_matrix()
    cert = verify(Certificate(g, a, distinct_count(eigenvalues(a)).count, {"construction": "adjacency"}))
    return cert if cert.verified else None


def estimate_q(g: Graph, restarts: int = 16, seed: int = 0, max_profiles: int = PROFILE_CAP,
               max_sweeps: int = DEFAULT_MAX_SWEEPS, workers: int = 1,
               certificates: Sequence[Certificate] = ()) -> Estimate:
    """Interval for q(G) from the bounds plus searches at increasing ``k``."""
    certs = list(certificates)
    if g.m:
        adj = _adjacency_certificate(g)
        if adj is not None:
            certs.append(adj)
    report = bound_report(g, certs)
    lo, hi = report.best_lower, report.best_upper
    for k in range(max(lo, 2), hi):
        if g.m == 0:
            break
        problems = ([SearchProblem(g, "involution", restarts=restarts, seed=seed,
                                   max_sweeps=max_sweeps, workers=workers)] if k == 2 else
                    [SearchProblem(g, prof, restarts=restarts, seed=seed, max_sweeps=max_sweeps,
                                   workers=workers)
                     for prof in multiplicity_profiles(g.n, k, max_profiles)])
        found = None
        for problem in problems:
            found = run_search(problem).certificate
            if found is not None:
                break
        if found is not None:
            certs.append(found)
            report.add_certificate(found)
            break
    return Estimate(report.best_lower, report.best_upper, certs, report)
