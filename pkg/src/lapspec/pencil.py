"""Generalized eigenvalue pencils: dense solvers, clustering, subspace gap.

Dense symmetric-definite solves go through LAPACK's Cholesky-reduction path
(sygvd): B = LL^T, reduce to a standard symmetric problem, tridiagonalize,
implicit-shift QR. General pencils go through QZ (ggev). Large sparse definite
pencils are handled by a shift-free block subspace iteration.
"""
import numpy as np
import scipy.linalg as la
import scipy.sparse as sp
import scipy.sparse.linalg as spla

DEFAULT_CLUSTER_RTOL = 1e-6


class Pencil:
    """Pair (A, B) for the problem A v = lambda B v, with verified flags."""

    def __init__(self, A, B, b_definiteness="none"):
        A = np.asarray(A, dtype=float)
        B = np.asarray(B, dtype=float)
        if A.shape != B.shape or A.ndim != 2 or A.shape[0] != A.shape[1]:
            raise ValueError("A and B must be square matrices of equal size")
        self.A, self.B = A, B
        self.sym_a = _is_symmetric(A)
        self.sym_b = _is_symmetric(B)
        if b_definiteness not in ("positive-definite", "positive-semidefinite", "none"):
            raise ValueError(f"unknown definiteness flag {b_definiteness!r}")
        self.b_definiteness = b_definiteness

    @property
    def n(self):
        return self.A.shape[0]


def _is_symmetric(M):
    scale = np.abs(M).max() or 1.0
    return np.abs(M - M.T).max() <= 1e-12 * scale


def cluster(values, rtol=DEFAULT_CLUSTER_RTOL):
    """Group an ascending array into multiplicity clusters.

    Two neighbors belong to one cluster when their gap is at most
    rtol * max(1, |value|); returns (cluster sizes, cluster means).
    """
    values = np.asarray(values)
    if len(values) == 0:
        return np.array([], dtype=int), np.array([])
    sizes, means = [], []
    start = 0
    for i in range(1, len(values) + 1):
        if i == len(values) or (values[i] - values[i - 1]
                                > rtol * max(1.0, abs(values[i]))):
            sizes.append(i - start)
            means.append(values[start:i].mean())
            start = i
    return np.array(sizes, dtype=int), np.array(means)


class Spectrum:
    """Ascending eigenvalue list with multiplicity clustering and provenance."""

    def __init__(self, eigenvalues, method, param, domain, vectors=None,
                 cluster_rtol=DEFAULT_CLUSTER_RTOL, flags=None):
        self.eigenvalues = np.asarray(eigenvalues)
        self.method = method
        self.param = param
        self.domain = domain
        self.vectors = vectors
        self.cluster_rtol = cluster_rtol
        self.flags = dict(flags or {})
        if np.isrealobj(self.eigenvalues):
            sizes, means = cluster(self.eigenvalues, cluster_rtol)
            self.cluster_sizes = sizes
            self.cluster_means = means
        else:
            self.cluster_sizes = np.ones(len(self.eigenvalues), dtype=int)
            self.cluster_means = self.eigenvalues

    def __len__(self):
        return len(self.eigenvalues)

    def __getitem__(self, k):
        return self.eigenvalues[k]

    def multiplicity_pattern(self):
        return list(self.cluster_sizes)

    def __repr__(self):
        head = ", ".join(f"{v:.6g}" for v in self.eigenvalues[:6])
        return (f"Spectrum[{self.method}]({len(self)} values: {head}"
                f"{', ...' if len(self) > 6 else ''})")


def solve_symdef(pencil, method="pencil", param=None, domain=None):
    """All eigenpairs of a symmetric-definite pencil, ascending, B-orthonormal."""
    if not (pencil.sym_a and pencil.sym_b):
        raise ValueError("solve_symdef needs symmetric A and B")
    try:
        vals, vecs = la.eigh(pencil.A, pencil.B)
    except la.LinAlgError as exc:
        raise ValueError(f"B is not positive definite to working precision: {exc}")
    # residual gate from the contract
    nA = la.norm(pencil.A, 2) if pencil.n <= 400 else la.norm(pencil.A, "fro")
    nB = la.norm(pencil.B, 2) if pencil.n <= 400 else la.norm(pencil.B, "fro")
    R = pencil.A @ vecs - pencil.B @ vecs * vals
    worst = np.abs(R).max(axis=0)
    bound = 1e-9 * (nA + np.abs(vals) * nB)
    if np.any(worst > bound):
        k = int(np.argmax(worst - bound))
        raise ValueError(f"eigenpair {k} residual {worst[k]:.2e} exceeds gate {bound[k]:.2e}")
    return Spectrum(vals, method, param, domain, vectors=vecs)


def solve_general(pencil, method="pencil", param=None, domain=None, cond_gate=1e12):
    """Eigenvalues of a general square pencil by QZ.

    Real pairs are reported as reals when the imaginary part is at most
    1e-8 of the modulus; the full list is sorted by modulus, real lists
    ascending.
    """
    est = np.linalg.cond(pencil.B)
    if not np.isfinite(est) or est > cond_gate:
        raise ValueError(f"B condition estimate {est:.2e} exceeds {cond_gate:.0e}")
    vals = la.eig(pencil.A, pencil.B, right=False)
    vals = vals[np.isfinite(vals)]
    mod = np.abs(vals)
    realish = np.abs(vals.imag) <= 1e-8 * np.maximum(mod, 1e-300)
    if np.all(realish):
        out = np.sort(vals.real)
    else:
        out = vals[np.argsort(mod)]
    return Spectrum(out, method, param, domain)


def subspace_gap(U, V, gram=None):
    """Symmetrized subspace distance delta-hat(U, V) in [0, 1].

    delta(U, V) is the sup over unit u in span(U) of the distance to span(V),
    measured in the inner product given by `gram` (identity by default).
    """
    U = np.atleast_2d(np.asarray(U, dtype=float))
    V = np.atleast_2d(np.asarray(V, dtype=float))
    if U.shape[0] != V.shape[0]:
        raise ValueError("U and V must share the ambient dimension")
    if gram is not None:
        L = la.cholesky(gram, lower=True)
        U = L.T @ U
        V = L.T @ V
    Qu = _orthonormal(U, "U")
    Qv = _orthonormal(V, "V")

    def delta(Qa, Qb):
        if Qa.shape[1] > Qb.shape[1]:
            return 1.0
        s = la.svd(Qb.T @ Qa, compute_uv=False)
        smin = s.min() if len(s) else 1.0
        return float(np.sqrt(max(0.0, 1.0 - min(1.0, smin) ** 2)))

    return max(delta(Qu, Qv), delta(Qv, Qu))


def _orthonormal(M, label):
    q, r = la.qr(M, mode="economic")
    d = np.abs(np.diag(r))
    if d.min() <= 1e-12 * max(1.0, d.max()):
        raise ValueError(f"{label} block is rank deficient")
    return q


def solve_lowest(S, T, m, tol=1e-10, max_iter=400, seed=1234):
    """Largest-theta eigenpairs of T v = theta S v for sparse spd S.

    Shift-free block subspace iteration: factor S once, iterate
    X <- S^{-1} (T X) with Rayleigh-Ritz projection, block size 2m.
    Returns (theta, X) with theta descending, the first m converged to
    relative `tol`. Callers map theta back to their eigenvalue parameter.
    """
    n = S.shape[0]
    q = min(n, 2 * m)
    S = sp.csc_matrix(S)
    T = sp.csr_matrix(T)
    lu = spla.splu(S)
    rng = np.random.default_rng(seed)
    X = rng.standard_normal((n, q))
    X, _ = la.qr(X, mode="economic")
    prev = None
    for _ in range(max_iter):
        Y = lu.solve(T @ X)
        Y, _ = la.qr(Y, mode="economic")
        a = Y.T @ (T @ Y)
        b = Y.T @ (S @ Y)
        theta, C = la.eigh((a + a.T) / 2, (b + b.T) / 2)
        order = np.argsort(theta)[::-1]
        theta, C = theta[order], C[:, order]
        X = Y @ C
        if prev is not None:
            num = np.abs(theta[:m] - prev[:m])
            den = np.maximum(np.abs(theta[:m]), 1e-30)
            if np.all(num <= tol * den):
                return theta, X
        prev = theta
    raise ValueError(f"subspace iteration did not converge in {max_iter} sweeps")
