"""Nystrom collocation for Steklov spectra on collections of circles.

Single-layer and adjoint-double-layer matrices with the periodic log-weight
splitting on each curve (spectrally accurate for analytic boundaries) and
plain trapezoid across curves. The eigenvalue pencil acts on mean-free
densities; the shared one-dimensional kernel of both sides is deflated by an
orthogonal projection before the QZ solve, so no spurious eigenvalues appear
even though the outer circle has unit radius (its equilibrium density makes
the raw single-layer matrix singular).
"""
import warnings

import numpy as np
import scipy.linalg as la

from . import pencil as pen
from .geometry import BoundaryQuadrature, boundary_quadrature

NORMALIZATION = -1.0 / (2.0 * np.pi)  # fundamental solution -(1/2pi) ln|x-y|
IMAG_TOL = 1e-6
COND_GATE = 1e12


def kress_log_weights(m):
    """Row weights R_{|i-j|} for the periodic kernel ln(4 sin^2((t-s)/2)).

    Exact for trigonometric polynomials of degree < m/2 against the kernel;
    m must be even.
    """
    if m % 2:
        raise ValueError("log-weight rule needs an even node count")
    n = m // 2
    k = np.arange(m)
    j = np.arange(1, n)
    if len(j):
        out = -(2 * np.pi / n) * (np.cos(np.pi / n * np.outer(k, j)) @ (1.0 / j))
    else:
        out = np.zeros(m)
    out -= (np.pi / n**2) * np.cos(np.pi * k)
    return out


class KernelMatrices:
    """S0 and (1/2 I + K') with the mean-subtraction projector built in."""

    def __init__(self, S0, Khalf, quad, weights):
        self.S0 = S0
        self.Khalf = Khalf
        self.quad = quad
        self.weights = weights
        self.normalization = NORMALIZATION

    @property
    def n(self):
        return self.S0.shape[0]


def _raw_kernels(quad):
    xs = quad.points
    total = quad.total
    S0 = np.zeros((total, total))
    Kp = np.zeros((total, total))
    offs = quad.offsets
    for a, ca in enumerate(quad.curves):
        ia = slice(offs[a], offs[a + 1])
        xa, na = ca.points, ca.normals
        for b, cb in enumerate(quad.curves):
            ib = slice(offs[b], offs[b + 1])
            d = xa[:, None, :] - cb.points[None, :, :]
            r2 = np.einsum("ijk,ijk->ij", d, d)
            sb, hb = cb.speed, cb.h
            if a != b:
                if r2.min() <= 0.0:
                    raise ValueError("coincident quadrature nodes across curves")
                S0[ia, ib] = -(1 / (4 * np.pi)) * np.log(r2) * (sb * hb)
                Kp[ia, ib] = (-(1 / (2 * np.pi))
                              * np.einsum("ijk,ik->ij", d, na) / r2 * (sb * hb))
            else:
                m = cb.n
                lag = np.abs(np.arange(m)[:, None] - np.arange(m)[None, :])
                Rm = kress_log_weights(m)[lag]
                dt = cb.t[:, None] - cb.t[None, :]
                s2 = 4.0 * np.sin(dt / 2.0) ** 2
                np.fill_diagonal(s2, 1.0)
                np.fill_diagonal(r2, 1.0)
                # ln|x-y| = 1/2 ln(4 sin^2((t-s)/2)) + analytic remainder
                wsm = 0.5 * np.log(r2 / s2)
                np.fill_diagonal(wsm, np.log(cb.speed))
                S0[ia, ib] = -(1 / (2 * np.pi)) * (0.5 * Rm + hb * wsm) * sb
                kd = (-(1 / (2 * np.pi))
                      * np.einsum("ijk,ik->ij", d, na) / r2 * (sb * hb))
                signed_curv = cb.orientation * cb.curvature
                np.fill_diagonal(kd, -signed_curv / (4 * np.pi) * sb * hb)
                Kp[ia, ib] = kd
    return S0, Kp


def assemble_kernels(quad):
    """Kernel matrices acting on mean-free densities."""
    if not isinstance(quad, BoundaryQuadrature):
        raise TypeError("assemble_kernels expects a BoundaryQuadrature")
    S0, Kp = _raw_kernels(quad)
    w = quad.weights
    n = quad.total
    ImW = np.eye(n) - np.outer(np.ones(n), w) / w.sum()
    return KernelMatrices(S0 @ ImW, (0.5 * np.eye(n) + Kp) @ ImW, quad, w)


def _deflated_pencil(kernels):
    """Project the pencil onto the complement of the constant density.

    Both matrices annihilate constants by construction (mean subtraction on
    the right; on the left the jump identity for the constant density on the
    outer curve combines with the unit-capacity kernel of S0), so the
    one-dimensional common null space is removed exactly.
    """
    n = kernels.n
    Qf, _ = la.qr(np.ones((n, 1)), mode="full")
    Q = Qf[:, 1:]
    A = Q.T @ kernels.Khalf @ Q
    B = Q.T @ kernels.S0 @ Q
    return A, B, Q


def solve_steklov_bie(domain, n_per_curve, count=None, max_halvings=3):
    """Steklov spectrum of a smooth-curves domain by collocation.

    Returns ascending real eigenvalues with the zero mode prepended and
    flagged. Complex pencil eigenvalues among the requested leading block
    signal under-resolution and are rejected; an ill-conditioned projected
    single-layer matrix triggers a halving of the node counts with a warning.
    """
    if domain.kind != "smooth-curves":
        raise ValueError("the collocation solver needs a smooth-curves domain")
    if np.isscalar(n_per_curve):
        n_per_curve = [int(n_per_curve)] * len(domain.circles)
    n_per_curve = [int(n) for n in n_per_curve]

    for attempt in range(max_halvings + 1):
        quad = boundary_quadrature(domain, n_per_curve)
        kernels = assemble_kernels(quad)
        A, B, _ = _deflated_pencil(kernels)
        est = np.linalg.cond(B)
        if est <= COND_GATE:
            break
        halved = [max(8, n // 2 - (n // 2) % 2) for n in n_per_curve]
        warnings.warn(f"projected single-layer condition {est:.2e} exceeds "
                      f"{COND_GATE:.0e}; retrying with nodes {halved}")
        n_per_curve = halved
    else:
        raise ValueError("single-layer matrix stayed ill-conditioned after halvings")

    spec = pen.solve_general(pen.Pencil(A, B), method="bie",
                             param=sum(n_per_curve), domain=domain.name)
    vals = spec.eigenvalues
    if np.iscomplexobj(vals):
        realish = np.abs(vals.imag) <= IMAG_TOL * np.maximum(np.abs(vals), 1e-300)
        m_req = count if count is not None else len(vals)
        kept = np.sort(vals[realish].real)
        bad = vals[~realish]
        cutoff = kept[min(m_req, len(kept)) - 1] if len(kept) else 0.0
        offending = bad[np.abs(bad) <= abs(cutoff)]
        if len(offending):
            raise ValueError(
                "complex pencil eigenvalues inside the requested range "
                f"(worst {offending[0]:.6g}); increase the node counts")
        vals = kept
    if np.any(vals < -1e-8):
        raise ValueError(f"negative Steklov value {vals.min():.3e}: "
                         "discretization inconsistency")
    vals = np.concatenate([[0.0], np.clip(vals, 0.0, None)])
    if count is not None:
        vals = vals[:count]
    return pen.Spectrum(vals, "bie", sum(n_per_curve), domain.name,
                        flags={"zero_mode": True,
                               "n_per_curve": list(n_per_curve)})


def annulus_domain(eps, inner_radius=0.1):
    """The unit disk with an off-center hole of radius `inner_radius`."""
    from .geometry import Domain
    return Domain("smooth-curves",
                  circles=[((0.0, 0.0), 1.0, +1), ((0.0, float(eps)), inner_radius, -1)],
                  name=f"annulus:eps={eps:g}")


def sweep_annulus(eps_grid, n_per_curve, k_list, threads=1):
    """sigma_k across a family of hole offsets, normalized by the centered case.

    Returns rows (eps, k, sigma, ratio_to_concentric, N_total), ordered by
    eps then k. The centered spectrum is computed at the same node counts.
    """
    eps_grid = [float(e) for e in eps_grid]
    for e in eps_grid:
        if e < 0.0:
            raise ValueError("offsets must be nonnegative")
        if e >= 0.9:
            raise ValueError(f"offset {e} puts the hole against the outer boundary")
    k_list = [int(k) for k in k_list]
    if any(k < 1 for k in k_list):
        raise ValueError("mode indices start at 1 (index 0 is the zero mode)")
    kmax = max(k_list)

    def one(eps):
        spec = solve_steklov_bie(annulus_domain(eps), n_per_curve, count=kmax + 1)
        return spec.eigenvalues

    results = {}
    todo = sorted(set(eps_grid))
    if threads > 1:
        from concurrent.futures import ThreadPoolExecutor
        with ThreadPoolExecutor(max_workers=threads) as pool:
            for eps, vals in zip(todo, pool.map(one, todo)):
                results[eps] = vals
    else:
        for eps in todo:
            results[eps] = one(eps)
    base = results[0.0] if 0.0 in results else one(0.0)

    if np.isscalar(n_per_curve):
        n_total = int(n_per_curve) * 2
    else:
        n_total = int(sum(n_per_curve))
    rows = []
    for eps in eps_grid:
        vals = results[eps]
        for k in k_list:
            rows.append((eps, k, float(vals[k]), float(vals[k] / base[k]), n_total))
    return rows


def evaluate_interior(quad, density, points):
    """Single-layer potential of the mean-free part of `density`.

    Valid away from the boundary: every point must be inside the domain and
    at least three node spacings from each curve.
    """
    density = np.asarray(density, dtype=float)
    points = np.atleast_2d(np.asarray(points, dtype=float))
    if len(density) != quad.total:
        raise ValueError("density must have one value per quadrature node")
    for p in points:
        for idx, c in enumerate(quad.curves):
            gap = abs(np.hypot(*(p - np.asarray(c.center))) - c.radius)
            spacing = c.h * c.radius
            if gap < 3.0 * spacing:
                raise ValueError(f"point {tuple(p)} is within 3 node spacings "
                                 f"of curve {idx}")
            r = np.hypot(*(p - np.asarray(c.center)))
            inside_ok = r < c.radius if c.orientation > 0 else r > c.radius
            if not inside_ok:
                raise ValueError(f"point {tuple(p)} is outside the domain")
    w = quad.weights
    rho = density - (w @ density) / w.sum()
    d = points[:, None, :] - quad.points[None, :, :]
    r = np.sqrt(np.einsum("ijk,ijk->ij", d, d))
    return (NORMALIZATION * np.log(r)) @ (rho * w)
