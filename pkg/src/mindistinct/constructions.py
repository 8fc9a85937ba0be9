"""Explicit matrices in S(G) with few distinct eigenvalues.

Every builder returns a :class:`~mindistinct.spectra.Certificate` that has
already been through :func:`~mindistinct.spectra.verify`; a construction that
fails verification raises :class:`ConstructionError` carrying the
unverified certificate for inspection.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from . import graph as gr
from .graph import Graph
from .spectra import (
    Certificate, affine_normalize, distinct_count, eigen_decompose, eigenvalues, symmetrize, verify,
)

SQ2 = math.sqrt(2.0)


class ConstructionError(RuntimeError):
    def __init__(self, message: str, certificate: Certificate | None = None, **diagnostics):
        super().__init__(message)
        self.certificate = certificate
        self.diagnostics = diagnostics


@dataclass(frozen=True)
class Recipe:
    """Family tag, parameters and numeric controls of a construction."""

    family: str
    params: tuple = ()
    tol: float | None = None
    max_iter: int | None = None
    seed: int | None = None
    extra: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        out = {k: v for k, v in asdict(self).items() if v not in (None, {}, ())}
        out["params"] = list(self.params)
        return out


def _certify(g: Graph, a: np.ndarray, claimed: int | None, recipe: Recipe, **info) -> Certificate:
    """Verify ``a`` on ``g``; ``claimed=None`` means "whatever is measured"."""
    a = symmetrize(a)
    provenance = {"construction": recipe.family, "recipe": recipe.to_dict(), **info}
    if claimed is None:
        claimed = distinct_count(eigenvalues(a)).count
    cert = verify(Certificate(g, a, int(claimed), provenance))
    if not cert.verified:
        raise ConstructionError(
            f"{recipe.family}{recipe.params}: " + "; ".join(cert.verification.failures), cert)
    return cert


def _block_permute(a: np.ndarray, perm) -> np.ndarray:
    """Reindex so that old vertex ``k`` becomes new vertex ``perm[k]``."""
    out = np.empty_like(a)
    idx = np.asarray(perm)
    out[np.ix_(idx, idx)] = a
    return out


# ---------------------------------------------------------------- simple families


def adjacency_certificate(g: Graph) -> Certificate:
    """The 0/1 adjacency matrix, claiming whatever count it has."""
    return _certify(g, g.adjacency_matrix() if g.m else np.eye(g.n), None, Recipe("adjacency"))


def complete_certificate(n: int) -> Certificate:
    if n < 2:
        raise ValueError("complete_certificate needs n >= 2")
    return _certify(gr.complete_graph(n), gr.complete_graph(n).adjacency_matrix(), 2,
                    Recipe("complete", (n,)))


def path_certificate(n: int) -> Certificate:
    g = gr.path_graph(n)
    return _certify(g, g.adjacency_matrix(), n, Recipe("path", (n,)))


def complete_minus_edge_certificate(n: int) -> Certificate:
    """K_n minus the edge {0, n-1}.

    For ``n >= 4`` the matrix is ``I - 2(u1 u1^T + u2 u2^T)`` with
    ``u1 ~ (1, 1, ..., 1, 0)`` and ``u2 ~ (0, x, ..., x, -(n-3)x, 1)``.  With
    ``x = 1`` the entry between vertices 1 and 2 cancels when ``n = 4``, so
    ``x = 2`` is used there.
    """
    if n < 2:
        raise ValueError("K_n - e needs n >= 2")
    g = gr.generate("complete-minus-edge", n)
    recipe = Recipe("complete-minus-edge", (n,))
    if n == 2:
        return _certify(g, np.eye(2), 1, recipe)
    if n == 3:
        return _certify(g, g.adjacency_matrix(), 3, recipe)
    x = 2.0 if n == 4 else 1.0
    u1 = np.r_[1.0, np.ones(n - 2), 0.0] / math.sqrt(n - 1)
    u2 = np.r_[0.0, x * np.ones(n - 3), -(n - 3) * x, 1.0]
    u2 /= np.linalg.norm(u2)
    q = np.eye(n) - 2.0 * (np.outer(u1, u1) + np.outer(u2, u2))
    return _certify(g, q, 2, recipe, involution_error=_involution_error(q))


def _involution_error(q: np.ndarray) -> float:
    return float(np.max(np.abs(q @ q - np.eye(len(q)))))


def orthogonal_full_support(n: int) -> np.ndarray:
    """An n x n orthogonal matrix with no zero entry."""
    if n == 1:
        return np.array([[1.0]])
    if n == 2:
        return np.array([[1.0, 1.0], [1.0, -1.0]]) / SQ2
    return np.eye(n) - (2.0 / n) * np.ones((n, n))


def complete_bipartite_certificate(m: int, n: int) -> Certificate:
    """K_{m,n}: ``[[0, B], [B^T, 0]]`` with orthogonal B when ``m = n``,
    otherwise the adjacency matrix (three eigenvalues)."""
    if not 1 <= m <= n:
        raise ValueError("need 1 <= m <= n")
    g = gr.complete_bipartite(m, n)
    recipe = Recipe("complete-bipartite", (m, n))
    if m < n:
        return _certify(g, g.adjacency_matrix(), 3, recipe)
    b = orthogonal_full_support(n)
    a = np.block([[np.zeros((n, n)), b], [b.T, np.zeros((n, n))]])
    return _certify(g, a, 2, recipe, involution_error=_involution_error(a))


# ---------------------------------------------------------------- join with itself


@dataclass(frozen=True)
class SquareRootTrace:
    y: np.ndarray
    iterations: int
    deltas: list[float]


def square_root_iteration(p: np.ndarray, tol: float = 1e-14, max_iter: int = 10**6,
                          stall: int = 1000) -> SquareRootTrace:
    """Iterate ``Y <- (P + Y^2) / 2`` from ``Y = 0``.

    The limit ``Y*`` gives ``I - Y*`` as the square root of ``I - P`` when
    ``rho(P) < 1``.  Stops when successive iterates differ by at most ``tol``
    in max norm.
    """
    y = np.zeros_like(p)
    deltas: list[float] = []
    best, since_best = math.inf, 0
    for it in range(1, max_iter + 1):
        y_next = symmetrize((p + y @ y) / 2.0)
        delta = float(np.max(np.abs(y_next - y)))
        deltas.append(delta)
        y = y_next
        if delta <= tol:
            return SquareRootTrace(y, it, deltas)
        if delta < best:
            best, since_best = delta, 0
        else:
            since_best += 1
            if since_best >= stall:
                raise ConstructionError("square-root iteration stalled", iterations=it, delta=delta)
    raise ConstructionError("square-root iteration hit max_iter", iterations=max_iter, delta=deltas[-1])


JOIN_ROBUST_ENTRY = 1e-6
JOIN_SPECTRAL_THETA = 0.99


def _join_blocks(adj: np.ndarray, scaling: str):
    """Return ``(M, c)`` with ``M = a A + I`` and ``P = c^2 M^2``."""
    n = len(adj)
    if scaling == "order":
        return adj / n + np.eye(n), math.sqrt(2 * n - 1) / (2 * n)
    rho = float(np.max(np.abs(eigenvalues(adj)))) if n > 1 else 0.0
    m = adj / rho + np.eye(n) if rho > 0 else np.eye(n)
    rho_m = float(np.max(np.abs(eigenvalues(m))))
    return m, JOIN_SPECTRAL_THETA / rho_m


def join_self_certificate(g: Graph, tol: float = 1e-14, max_iter: int = 10**6,
                          scaling: str = "auto") -> Certificate:
    """Orthogonal two-eigenvalue matrix on the join of a connected graph with itself.

    ``Q = [[c M, I - Y*], [I - Y*, -c M]]`` where ``M = a A(G) + I`` and
    ``I - Y*`` is the square root of ``I - c^2 M^2`` obtained by the
    square-root iteration.  ``scaling="order"`` uses ``a = 1/n`` and
    ``c = sqrt(2n-1)/(2n)``; ``"spectral"`` uses ``a = 1/rho(A)`` and
    ``c = 0.99/rho(M)``, which keeps the entries of ``I - Y*`` far from zero
    on graphs of large diameter.  ``"auto"`` takes the order scaling unless
    some entry of ``I - Y*`` falls below 1e-6.
    """
    if g.n < 1 or not gr.is_connected(g):
        raise ValueError("join_self_certificate needs a connected graph")
    if scaling not in ("auto", "order", "spectral"):
        raise ValueError(f"unknown scaling {scaling!r}")
    adj = g.adjacency_matrix()
    n = g.n
    used = "order" if scaling in ("auto", "order") else "spectral"
    m, c = _join_blocks(adj, used)
    trace = square_root_iteration(c * c * m @ m, tol, max_iter)
    root = np.eye(n) - trace.y
    if scaling == "auto" and np.min(np.abs(root)) < JOIN_ROBUST_ENTRY:
        used = "spectral"
        m, c = _join_blocks(adj, used)
        trace = square_root_iteration(c * c * m @ m, tol, max_iter)
        root = np.eye(n) - trace.y
    if np.min(trace.y) <= 0 or np.min(np.abs(root)) == 0:
        raise ConstructionError("I - Y* has a zero entry", min_y=float(np.min(trace.y)))
    sq_residual = float(np.max(np.abs(root @ root + c * c * m @ m - np.eye(n))))
    q = np.block([[c * m, root], [root, -c * m]])
    jg = gr.join(g, g)
    return _certify(
        jg, q, 2, Recipe("join-self", (gr.to_graph6(g),), tol, max_iter, extra={"scaling": used}),
        iterations=trace.iterations,
        sq_eqn_residual=sq_residual,
        min_root_entry=float(np.min(np.abs(root))),
        min_y_entry=float(np.min(trace.y)),
        deltas_monotone=all(b <= a * (1 + 1e-12) + 1e-300 for a, b in zip(trace.deltas, trace.deltas[1:])),
        involution_error=_involution_error(q),
    )


def multipartite_certificate(*parts: int) -> Certificate:
    """K_{n1,n1,n2,n2,...} as the join of K_{n1,n2,...} with itself."""
    if len(parts) < 2 or len(parts) % 2 or any(parts[2 * i] != parts[2 * i + 1]
                                                   for i in range(len(parts) // 2)):
        raise ValueError("parts must come in equal pairs n1,n1,n2,n2,...")
    half = parts[::2]
    h = gr.complete_multipartite(*half)
    if not gr.is_connected(h):
        raise ValueError("K_{n1,...,nk} must be connected (k >= 2 or a single vertex)")
    base = join_self_certificate(h)
    target = gr.complete_multipartite(*parts)
    starts = np.cumsum((0,) + tuple(parts))
    perm = []
    for copy in range(2):
        for i, size in enumerate(half):
            perm.extend(range(starts[2 * i + copy], starts[2 * i + copy] + size))
    a = _block_permute(base.matrix, perm)
    return _certify(target, a, 2, Recipe("multipartite", tuple(parts)),
                    involution_error=_involution_error(a))


def k222_certificate(angle: float = math.pi / 8) -> Certificate:
    """Explicit symmetric orthogonal matrix in S(K_{2,2,2}).

    ``Q = I - 2 U U^T`` where the two rows of ``U`` belonging to a part are
    orthogonal vectors of squared norm 1/2 spanning one of the three
    coordinate planes of R^3.  The diagonal 2x2 blocks vanish and the
    off-diagonal blocks are rank one with no zero entry.
    """
    c, s = math.cos(angle), math.sin(angle)
    rows = []
    for i, j in ((0, 1), (1, 2), (2, 0)):
        for vec in ((c, s), (-s, c)):
            r = np.zeros(3)
            r[i], r[j] = vec
            rows.append(r / SQ2)
    u = np.array(rows)
    q = np.eye(6) - 2.0 * u @ u.T
    q[np.abs(q) < 1e-15] = 0.0
    return _certify(gr.complete_multipartite(2, 2, 2), q, 2, Recipe("k222", (angle,)),
                    involution_error=_involution_error(q))


# ---------------------------------------------------------------- products


def _spectrum_has(cert: Certificate, value: float) -> bool:
    vals = cert.verification.clustering.values if cert.verified else list(eigenvalues(cert.matrix))
    return any(abs(v - value) <= 1e-8 * max(1.0, abs(value)) for v in vals)


def normalize_pm1(cert: Certificate) -> np.ndarray:
    """Affine copy of the matrix whose spectrum has max -> 1 and min -> -1."""
    vals = cert.verification.clustering.values
    if len(vals) < 2:
        raise ValueError("need at least two distinct eigenvalues to normalise")
    return affine_normalize(cert.matrix, vals[-1], vals[0], 1.0, -1.0)


def cartesian_k2_certificate(cert_g: Certificate, alpha: float = 1 / SQ2,
                             beta: float = 1 / SQ2) -> Certificate:
    """``[[alpha A, beta I], [beta I, -alpha A]]`` on G x K_2.

    ``A`` must have both 1 and -1 as eigenvalues and ``alpha^2 + beta^2 = 1``;
    then the result has at most ``2 q(A) - 2`` distinct eigenvalues.
    """
    if not cert_g.verified:
        raise ValueError("cartesian_k2_certificate needs a verified certificate")
    if alpha == 0 or beta == 0 or abs(alpha * alpha + beta * beta - 1) > 1e-12:
        raise ValueError("need nonzero alpha, beta with alpha^2 + beta^2 = 1")
    if not (_spectrum_has(cert_g, 1.0) and _spectrum_has(cert_g, -1.0)):
        raise ValueError("spectrum must contain 1 and -1; normalise first")
    g = cert_g.graph
    n = g.n
    a = cert_g.matrix
    eye = np.eye(n)
    block = np.block([[alpha * a, beta * eye], [beta * eye, -alpha * a]])
    perm = [v * 2 + side for side in range(2) for v in range(n)]
    b = _block_permute(block, perm)
    prod = gr.cartesian_product(g, gr.complete_graph(2))
    prod = Graph(prod.n, prod.edges)
    q_g = cert_g.verification.measured_q
    cert = _certify(prod, b, None, Recipe("cartesian-k2", (cert_g.cert_id,), extra={
        "alpha": alpha, "beta": beta}), base_q=q_g)
    if cert.verification.measured_q > 2 * q_g - 2:
        raise ConstructionError("product exceeds 2q - 2 distinct eigenvalues", cert)
    return cert


def hypercube_certificate(d: int) -> Certificate:
    """Involution in S(Q_d) by repeated products with K_2."""
    if d < 1:
        raise ValueError("dimension must be >= 1")
    k2 = gr.complete_graph(2)
    cert = _certify(k2, k2.adjacency_matrix(), 2, Recipe("hypercube", (1,)))
    for _ in range(d - 1):
        normalized = verify(Certificate(cert.graph, normalize_pm1(cert), 2, cert.provenance))
        cert = cartesian_k2_certificate(normalized)
    a = cert.matrix
    return _certify(gr.hypercube(d), a, 2, Recipe("hypercube", (d,)),
                    involution_error=_involution_error(a))


def corona_certificate(cert_g: Certificate) -> Certificate:
    """``[[A, I], [I, 0]]`` on the corona of G (at most ``2 q(A)`` eigenvalues).

    Every eigenvalue ``lam`` of the result is nonzero and ``(lam^2 - 1)/lam``
    is an eigenvalue of ``A``; the largest mismatch is recorded as
    ``eigen_map_error``.
    """
    if not cert_g.verified:
        raise ValueError("corona_certificate needs a verified certificate")
    g = cert_g.graph
    n = g.n
    a = cert_g.matrix
    b = np.block([[a, np.eye(n)], [np.eye(n), np.zeros((n, n))]])
    lam = eigenvalues(b)
    mu = eigenvalues(a)
    if np.min(np.abs(lam)) == 0:
        raise ConstructionError("zero eigenvalue in corona matrix")
    mapped = (lam * lam - 1.0) / lam
    err = float(max(np.min(np.abs(mu - x)) for x in mapped))
    q_g = cert_g.verification.measured_q
    cert = _certify(gr.corona(g), b, None, Recipe("corona", (cert_g.cert_id,)),
                    base_q=q_g, eigen_map_error=err)
    if cert.verification.measured_q > 2 * q_g:
        raise ConstructionError("corona exceeds 2q distinct eigenvalues", cert)
    return cert


def union_certificate(c1: Certificate, c2: Certificate) -> Certificate:
    """Block sum of two q = 2 certificates, both mapped to spectrum {-1, 1}."""
    for c in (c1, c2):
        if not c.verified or c.verification.measured_q != 2:
            raise ValueError("union_certificate needs two verified q = 2 certificates")
    a1, a2 = normalize_pm1(c1), normalize_pm1(c2)
    n1, n2 = len(a1), len(a2)
    a = np.block([[a1, np.zeros((n1, n2))], [np.zeros((n2, n1)), a2]])
    return _certify(gr.union(c1.graph, c2.graph), a, 2, Recipe("union", (c1.cert_id, c2.cert_id)))


# ---------------------------------------------------------------- clique covers


def clique_sum_matrix(n: int, cliques, rng: np.random.Generator) -> np.ndarray:
    """``sum_i w_i 1_C 1_C^T`` with weights uniform in [1, 2]; rank <= #cliques."""
    a = np.zeros((n, n))
    for c in cliques:
        idx = np.asarray(c)
        a[np.ix_(idx, idx)] += rng.uniform(1.0, 2.0)
    return a


def clique_cover_certificate(g: Graph, cover=None, seed: int = 0) -> Certificate:
    """Weighted sum of clique indicators: at most ``len(cover) + 1`` eigenvalues."""
    if g.m == 0:
        return _certify(g, np.eye(g.n), 1, Recipe("clique-cover", (), seed=seed))
    if cover is None:
        from .bounds import upper_clique_cover

        cover = upper_clique_cover(g).cover
    rng = np.random.default_rng(seed)
    a = clique_sum_matrix(g.n, cover, rng)
    return _certify(g, a, None, Recipe("clique-cover", (len(cover),), seed=seed),
                    cover=[list(c) for c in cover])


def g_nk_certificate(n: int, k: int, seed: int = 0, retries: int = 20) -> Certificate:
    """G(n,k) from its k-1 clique cover with generic positive weights.

    The rank is at most ``k - 1`` so there are at most ``k`` eigenvalues;
    new weights are drawn if fewer than ``k`` are measured.
    """
    if not 2 <= k <= n:
        raise ValueError("g_nk_certificate needs 2 <= k <= n")
    g = gr.g_nk(n, k)
    top = n - k + 2
    cover = [tuple(range(top))] + [(i, i + 1) for i in range(top - 1, n - 1)]
    rng = np.random.default_rng(seed)
    last = None
    for attempt in range(retries):
        a = clique_sum_matrix(n, cover, rng)
        try:
            return _certify(g, a, k, Recipe("g-nk", (n, k), seed=seed), attempt=attempt)
        except ConstructionError as exc:
            last = exc
    raise ConstructionError(f"G({n},{k}): no generic weights after {retries} draws",
                            last.certificate if last else None)


# ---------------------------------------------------------------- cycles


def cycle_certificate(n: int, seed: int = 0, restarts: int = 64, max_sweeps: int = 5000,
                      values=None) -> Certificate:
    """C_n with ceil(n/2) eigenvalues.

    Odd n uses the adjacency matrix.  Even n searches for a matrix whose
    ``n/2`` eigenvalues all have multiplicity two, at the Chebyshev points of
    [-1, 1].  (The values ``2 cos(2 pi j / n)``, ``j = 1..n/2`` are also
    realisable but the search rarely reaches them; pass them as ``values``
    to try.)
    """
    if n < 3:
        raise ValueError("cycle needs n >= 3")
    g = gr.cycle_graph(n)
    if n % 2:
        return _certify(g, g.adjacency_matrix(), (n + 1) // 2, Recipe("cycle", (n,)))
    from .search import SearchProblem, run_search

    problem = SearchProblem(g, (2,) * (n // 2), values=values, seed=seed,
                            restarts=restarts, max_sweeps=max_sweeps)
    outcome = run_search(problem)
    if outcome.certificate is None:
        raise ConstructionError(f"search found no certificate for C_{n}", stats=outcome.to_dict())
    cert = outcome.certificate
    return _certify(g, cert.matrix, n // 2, Recipe("cycle", (n,), seed=seed),
                    search=cert.provenance.get("search"))


# ---------------------------------------------------------------- S_{m,n}


def lanczos_jacobi(lams, weights) -> tuple[np.ndarray, np.ndarray]:
    """Jacobi matrix with spectrum ``lams`` and first eigenvector components ``weights``.

    Lanczos on ``diag(lams)`` started from the normalised weight vector, with
    full reorthogonalisation.  Returns ``(diagonal, offdiagonal)``.
    """
    lams = np.asarray(lams, dtype=float)
    p = len(lams)
    q = np.asarray(weights, dtype=float)
    q = q / np.linalg.norm(q)
    basis = [q]
    alpha, beta = [], []
    for j in range(p):
        z = lams * basis[j]
        alpha.append(float(basis[j] @ z))
        for _ in range(2):
            z = z - np.array(basis).T @ (np.array(basis) @ z)
        if j < p - 1:
            b = float(np.linalg.norm(z))
            if b < 1e-12 * max(1.0, float(np.max(np.abs(lams)))):
                raise ConstructionError("Lanczos breakdown: weights or eigenvalues degenerate")
            beta.append(b)
            basis.append(z / b)
    return np.array(alpha), np.array(beta)


def _tridiag(alpha, beta) -> np.ndarray:
    return np.diag(alpha) + np.diag(beta, 1) + np.diag(beta, -1)


def _weights_for_target(lams: np.ndarray, target: float) -> np.ndarray:
    """Positive weights ``w`` (``sum w^2 = 1``) with ``sum w_i^2 / lam_i = target``."""
    inv = 1.0 / lams
    z = np.ones(len(lams))
    mean = inv.mean()
    if not inv.min() < target < inv.max() and len(lams) > 1:
        raise ConstructionError("target outside the attainable range")
    if len(lams) > 1 and mean != target:
        k = int(np.argmax(inv)) if mean < target else int(np.argmin(inv))
        t = (target - mean) * len(lams) / (inv[k] - target)
        z[k] += t
    return np.sqrt(z / z.sum())


def _backward_bidiagonal(x: np.ndarray, extra: float = 0.0) -> tuple[np.ndarray, np.ndarray]:
    """Lower-bidiagonal ``R`` with ``R^T R = X``, solved from the last row up.

    ``extra`` is the square of an additional entry below the last column
    (the odd-length case, where ``R`` has one more row than column).
    Returns ``(diag, sub)`` with ``R[k,k] = diag[k]`` and ``R[k+1,k] = sub[k]``.
    """
    p = len(x)
    diag = np.zeros(p)
    sub = np.zeros(p)
    sub[p - 1] = math.sqrt(extra)
    for k in range(p - 1, -1, -1):
        d2 = x[k, k] - sub[k] ** 2
        if d2 <= 0:
            raise ConstructionError("zero pivot in bidiagonal factorisation", row=k)
        diag[k] = math.sqrt(d2)
        if k > 0:
            sub[k - 1] = x[k, k - 1] / diag[k]
    return diag, sub


def _side_factor(lams: np.ndarray, odd: bool) -> tuple[np.ndarray, np.ndarray]:
    """Bidiagonal factor for one side of S_{m,n} with ``R[0,0]^2 = 2``."""
    if not odd:
        w = _weights_for_target(lams, 0.5)
        x = _tridiag(*lanczos_jacobi(lams, w))
        diag, sub = _backward_bidiagonal(x)
        return diag, sub
    if len(lams) > 1:
        lo = 1.0 / lams.max()
        w = _weights_for_target(lams, lo + 0.25 * (min(0.5, 1.0 / lams.min()) - lo))
    else:
        w = np.ones(1)
    x = _tridiag(*lanczos_jacobi(lams, w)) if len(lams) > 1 else np.array([[lams[0]]])

    def pivot(c):
        try:
            return _backward_bidiagonal(x, c)[0][0] ** 2
        except ConstructionError:
            return -math.inf

    lo_c, hi_c = 0.0, float(x[-1, -1])
    if pivot(lo_c) <= 2.0:
        raise ConstructionError("odd side: pivot already below 2")
    for _ in range(200):
        mid = 0.5 * (lo_c + hi_c)
        if pivot(mid) > 2.0:
            lo_c = mid
        else:
            hi_c = mid
    return _backward_bidiagonal(x, 0.5 * (lo_c + hi_c))


def _side_spectra(p_long: int, p_short: int, rng) -> tuple[np.ndarray, np.ndarray]:
    if p_long == 1:
        lams = np.array([5.0])
    else:
        lams = np.linspace(1.0, 5.0, p_long)
        lams[1:-1] += rng.uniform(-0.1, 0.1, p_long - 2) * (4.0 / p_long)
    pick = np.unique(np.round(np.linspace(0, p_long - 1, p_short)).astype(int))
    if p_short == 1:
        pick = np.array([p_long - 1])
    return lams, lams[pick]


def s_graph_certificate(m: int, n: int, seed: int = 0, retries: int = 10) -> Certificate:
    """S_{m,n} (same parity) with ``max(m, n) + 2`` distinct eigenvalues.

    ``A = [[0, B], [B^T, 0]]`` where the 4-cycle entries of ``B`` are
    ``(1, -1)`` on the v1 column and ``(1, 1)`` on the v2 column.  The columns
    for each path side then form a Jacobi block of ``B^T B``; the block on
    the longer side gets a prescribed simple spectrum and the shorter side a
    subset of it.  Path entries are recovered by a bidiagonal factorisation
    of each block.  Falls back to numerical search if every retry hits a
    zero pivot.
    """
    if (m - n) % 2:
        raise ValueError("s_graph_certificate needs m and n of the same parity")
    g = gr.s_graph(m, n)
    claimed = max(m, n) + 2
    odd = m % 2 == 1
    sides = {"v1": (0, m), "v2": (2, n)}
    p_of = {k: (length + 2) // 2 if not odd else (length + 1) // 2 for k, (_, length) in sides.items()}
    long_side = "v1" if m >= n else "v2"
    short_side = "v2" if long_side == "v1" else "v1"
    rng = np.random.default_rng(seed)
    for attempt in range(retries):
        try:
            lams_long, lams_short = _side_spectra(p_of[long_side], p_of[short_side], rng)
            factors = {long_side: _side_factor(lams_long, odd),
                       short_side: _side_factor(lams_short, odd)}
        except ConstructionError:
            continue
        a = np.zeros((g.n, g.n))
        for (i, j, val) in ((0, 1, 1.0), (0, 3, -1.0), (2, 1, 1.0), (2, 3, 1.0)):
            a[i, j] = a[j, i] = val
        start = 4
        for key in ("v1", "v2"):
            root, length = sides[key]
            diag, sub = factors[key]
            prev = root
            for t in range(length):
                weight = sub[t // 2] if t % 2 == 0 else diag[(t + 1) // 2]
                cur = start + t
                a[prev, cur] = a[cur, prev] = weight
                prev = cur
            start += length
        try:
            return _certify(g, a, claimed, Recipe("s-graph", (m, n), seed=seed),
                            attempt=attempt, method="bidiagonal",
                            block_spectrum=[float(x) for x in lams_long])
        except ConstructionError:
            continue
    from .search import SearchProblem, run_search

    prof = _s_graph_profile(g.n, claimed)
    outcome = run_search(SearchProblem(g, prof, seed=seed))
    if outcome.certificate is None:
        raise ConstructionError(f"S_{m},{n}: construction and search both failed")
    return _certify(g, outcome.certificate.matrix, claimed, Recipe("s-graph", (m, n), seed=seed),
                    method="search")


def _s_graph_profile(n_vertices: int, classes: int) -> tuple[int, ...]:
    """Doubled interior values, simple extremes, padded with a zero class if needed."""
    prof = [1] * classes
    i = 1
    while sum(prof) < n_vertices:
        prof[i] += 1
        i = i + 1 if i + 1 < classes - 1 else 1
    return tuple(prof)


# ---------------------------------------------------------------- exceptional graphs


def _path_laplacian(n: int) -> np.ndarray:
    lap = 2.0 * np.eye(n) - np.eye(n, k=1) - np.eye(n, k=-1)
    lap[0, 0] = lap[-1, -1] = 1.0
    return lap


def _path_laplacian_vector(n: int, k: int) -> np.ndarray:
    """Unit eigenvector of the path Laplacian for ``2 - 2 cos(pi k / n)``."""
    v = np.cos(math.pi * k * (np.arange(n) + 0.5) / n)
    return v / np.linalg.norm(v)


def c5pp_matrix(beta1: float = 2.0) -> tuple[np.ndarray, dict]:
    """Bordered path Laplacian with spectrum {0, 0, 2, 2, 18 - 9 sqrt 2} (for beta1 = 2)."""
    lap = _path_laplacian(4)
    x2 = _path_laplacian_vector(4, 3)  # eigenvalue 2 + sqrt 2
    x3 = _path_laplacian_vector(4, 1)  # eigenvalue 2 - sqrt 2
    alpha1 = -math.sqrt(((2 - SQ2) * beta1 ** 2 - SQ2) / (2 + SQ2))
    alpha2 = (2 + SQ2) / SQ2 * alpha1
    beta2 = (SQ2 - 2) / SQ2 * beta1
    u = alpha1 * x2 + beta1 * x3
    w = alpha2 * x2 + beta2 * x3
    b = lap @ u
    a = float(u @ lap @ u)
    mat = np.zeros((5, 5))
    mat[:4, :4] = lap
    mat[:4, 4] = mat[4, :4] = b
    mat[4, 4] = a
    info = {
        "alpha1": alpha1, "beta1": beta1, "alpha2": alpha2, "beta2": beta2,
        "border_residual": float(np.max(np.abs(b - (lap - 2 * np.eye(4)) @ w))),
        "corner_residual": abs(a - (float(w @ (lap - 2 * np.eye(4)) @ w) + 2.0)),
    }
    return mat, info


def bordered_two_double(lap: np.ndarray, zero_at, pair=None) -> tuple[np.ndarray, tuple] | None:
    """Border a 4x4 path matrix so the result has two double eigenvalues.

    Picks two eigenvalues ``mu1, mu2`` of ``lap``; the border ``b`` lies in
    the span of the other two eigenvectors and vanishes at ``zero_at``.
    Returns ``None`` when the resulting scalar equation has no real root.
    """
    nu, y = eigen_decompose(lap)
    choices = [pair] if pair is not None else [(i, j) for i in range(4) for j in range(i + 1, 4)]
    for i, j in choices:
        rest = [k for k in range(4) if k not in (i, j)]
        ya, yb = y[:, rest[0]], y[:, rest[1]]
        if zero_at:
            z = zero_at[0]
            bhat = ya * yb[z] - yb * ya[z]
        else:
            bhat = ya + yb
        if np.linalg.norm(bhat) < 1e-8:
            continue
        bhat /= np.linalg.norm(bhat)
        coef = [float(bhat @ y[:, k]) for k in rest]
        mu1, mu2 = nu[i], nu[j]
        c1 = sum(cf * cf / (nu[k] - mu1) for cf, k in zip(coef, rest))
        c2 = sum(cf * cf / (nu[k] - mu2) for cf, k in zip(coef, rest))
        if c1 == c2 or (mu2 - mu1) / (c1 - c2) <= 0:
            continue
        t = math.sqrt((mu2 - mu1) / (c1 - c2))
        b = t * bhat
        a = t * t * c1 + mu1
        mat = np.zeros((5, 5))
        mat[:4, :4] = lap
        mat[:4, 4] = mat[4, :4] = b
        mat[4, 4] = a
        return mat, (float(mu1), float(mu2))
    return None


def c5p_matrix(seed: int = 0, starts: int = 500) -> tuple[np.ndarray, dict]:
    """C5' by seeded multi-start over random path matrices on vertices 1-4."""
    rng = np.random.default_rng(seed)
    for start in range(starts):
        off = rng.uniform(0.5, 1.5, 3) * rng.choice([-1.0, 1.0], 3)
        lap = np.diag(rng.uniform(-2.0, 2.0, 4)) + np.diag(off, 1) + np.diag(off, -1)
        found = bordered_two_double(symmetrize(lap), zero_at=(1,))
        if found is None:
            continue
        mat, mus = found
        b = mat[:4, 4]
        if min(abs(b[0]), abs(b[2]), abs(b[3])) < 1e-2 * np.linalg.norm(b):
            continue
        counts = distinct_count(eigenvalues(mat))
        if counts.count == 3 and counts.min_gap > 1e-2:
            mat[1, 4] = mat[4, 1] = 0.0
            return mat, {"start": start, "double_values": list(mus)}
    raise ConstructionError("C5': no multi-start succeeded")


def exceptional_certificates(seed: int = 0) -> dict[str, Certificate]:
    """Three-eigenvalue certificates for C5, C5' and C5''."""
    out = {}
    c5 = gr.exceptional_graph("c5")
    out["c5"] = _certify(c5, c5.adjacency_matrix(), 3, Recipe("exceptional", ("c5",)))
    mat, info = c5p_matrix(seed)
    out["c5p"] = _certify(gr.exceptional_graph("c5p"), mat, 3,
                          Recipe("exceptional", ("c5p",), seed=seed), **info)
    mat, info = c5pp_matrix()
    out["c5pp"] = _certify(gr.exceptional_graph("c5pp"), mat, 3,
                           Recipe("exceptional", ("c5pp",)), **info)
    return out


# ---------------------------------------------------------------- bipartite bound


@dataclass(frozen=True)
class BipartiteBound:
    bound: int
    gram_q: int
    square: bool
    certificate: Certificate


def bipartite_upper(g: Graph, b, parts=None) -> BipartiteBound:
    """Bound ``2 q(B B^T) + 1`` (``2 q(B B^T)`` when square) and its witness.

    ``b`` has rows indexed by ``parts[0]`` and columns by ``parts[1]``
    (default: the two colour classes, swapped if the shape requires it) and
    must have exactly the biadjacency support.
    """
    b = np.asarray(b, dtype=float)
    if parts is None:
        ok, parts = gr.is_bipartite(g)
        if not ok:
            raise ValueError("graph is not bipartite")
        if (len(parts[0]), len(parts[1])) != b.shape:
            parts = (parts[1], parts[0])
    rows, cols = parts
    if (len(rows), len(cols)) != b.shape:
        raise ValueError(f"B has shape {b.shape}, parts have sizes {len(rows)}, {len(cols)}")
    for i, r in enumerate(rows):
        for j, c in enumerate(cols):
            if (b[i, j] != 0) != g.adj(r, c):
                raise ValueError(f"B[{i},{j}] does not match the edge pattern")
    gram = symmetrize(b @ b.T)
    gram_q = distinct_count(eigenvalues(gram)).count
    square = b.shape[0] == b.shape[1]
    bound = 2 * gram_q if square else 2 * gram_q + 1
    a = np.zeros((g.n, g.n))
    a[np.ix_(rows, cols)] = b
    a[np.ix_(cols, rows)] = b.T
    cert = _certify(g, a, None, Recipe("bipartite", (list(b.shape),)), gram_q=gram_q)
    if cert.verification.measured_q > bound:
        raise ConstructionError("bipartite certificate exceeds the 2q(BB^T)+1 bound", cert)
    return BipartiteBound(bound, gram_q, square, cert)


def path_bipartite_block(cert: Certificate) -> tuple[np.ndarray, tuple[list[int], list[int]]]:
    """Off-diagonal block ``B`` of a bipartite certificate and its parts."""
    ok, parts = gr.is_bipartite(cert.graph)
    if not ok:
        raise ValueError("certificate graph is not bipartite")
    rows, cols = parts
    return cert.matrix[np.ix_(rows, cols)], (rows, cols)


CONSTRUCTIONS = {
    "complete": complete_certificate,
    "path": path_certificate,
    "complete-minus-edge": complete_minus_edge_certificate,
    "complete-bipartite": complete_bipartite_certificate,
    "hypercube": hypercube_certificate,
    "cycle": cycle_certificate,
    "g-nk": g_nk_certificate,
    "s-graph": s_graph_certificate,
    "multipartite": multipartite_certificate,
    "k222": k222_certificate,
}
