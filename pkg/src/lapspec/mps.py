"""Method of particular solutions with corner-adapted Fourier-Bessel bases.

Dirichlet eigenvalues on polygons are located where the subspace angle
between the trial space and the space of functions vanishing on the boundary
is smallest: the basis is evaluated at boundary collocation points and at
interior regularization points, the stacked block is orthonormalized, and
the smallest singular value of the boundary sub-block serves as the
indicator s(lambda). A-posteriori intervals around located minima follow
the classical residual bound driven by the boundary sup norm.
"""
import numpy as np
import scipy.linalg as la

from . import specfun
from .fem import _Q5_BARY, _Q5_W, build_mesh


class CornerBasis:
    """Fourier-Bessel fan at one polygon corner.

    Functions J_{alpha k}(sqrt(lambda) r) sin(alpha k theta), k = 1..size,
    in the local frame whose theta = 0 ray is the forward incident edge;
    every function vanishes identically on both edges meeting at the corner.
    """

    def __init__(self, domain, corner, size):
        if domain.kind != "polygon":
            raise ValueError("corner bases are defined on polygons")
        verts = domain.vertices
        n = len(verts)
        corner = int(corner) % n
        fwd = verts[(corner + 1) % n] - verts[corner]
        bwd = verts[(corner - 1) % n] - verts[corner]
        phi_f = np.arctan2(fwd[1], fwd[0])
        phi_b = np.arctan2(bwd[1], bwd[0])
        angle = (phi_b - phi_f) % (2 * np.pi)
        self.vertex = verts[corner]
        self.corner = corner
        self.angle = angle
        self.alpha = np.pi / angle
        self.size = int(size)
        if self.size < 1:
            raise ValueError("basis size must be at least 1")
        if self.alpha * self.size > specfun.NU_MAX:
            raise ValueError(f"top order {self.alpha * self.size:.1f} exceeds "
                             f"the Bessel accuracy domain {specfun.NU_MAX:g}")
        self._phi0 = phi_f
        # branch cut of the local angle along the exterior bisector, so the
        # fan is smooth across the forward-edge ray wherever that ray
        # re-enters the domain (it does on nonconvex polygons)
        self._cut = angle / 2 - np.pi
        self.edges = {(corner, (corner + 1) % n), ((corner - 1) % n, corner)}

    def orders(self):
        return self.alpha * np.arange(1, self.size + 1)

    def evaluate(self, lam, points):
        """Matrix of basis values, one row per point."""
        d = np.atleast_2d(points) - self.vertex
        r = np.hypot(d[:, 0], d[:, 1])
        theta = self._cut + (np.arctan2(d[:, 1], d[:, 0])
                             - self._phi0 - self._cut) % (2 * np.pi)
        nus = self.orders()
        vals = specfun.bessel_j(nus[None, :], np.sqrt(lam) * r[:, None])
        return vals * np.sin(theta[:, None] * nus[None, :])


def corner_angles(domain):
    """Interior angle at every polygon corner."""
    verts = domain.vertices
    n = len(verts)
    out = np.empty(n)
    for j in range(n):
        fwd = verts[(j + 1) % n] - verts[j]
        bwd = verts[(j - 1) % n] - verts[j]
        out[j] = (np.arctan2(bwd[1], bwd[0])
                  - np.arctan2(fwd[1], fwd[0])) % (2 * np.pi)
    return out


def reentrant_corners(domain):
    """Indices of corners with interior angle above pi."""
    return [j for j, a in enumerate(corner_angles(domain)) if a > np.pi + 1e-12]


def singular_corners(domain):
    """Corners where eigenfunctions are genuinely non-smooth.

    When the interior angle is pi/m for an integer m, repeated odd
    reflection continues eigenfunctions analytically across the corner and
    no fan is needed there; every other corner contributes fractional-power
    terms and gets one.
    """
    out = []
    for j, a in enumerate(corner_angles(domain)):
        m = np.pi / a
        if abs(m - round(m)) > 1e-9:
            out.append(j)
    return out


def corner_basis(domain, size, corners=None):
    """Build the default single-corner basis or a union over given corners.

    With corners=None the corner with the largest interior angle is used;
    corners="singular" places a fan at every corner that is not an exact
    pi-over-integer; corners="reentrant" takes the reflex corners only;
    otherwise pass explicit corner indices.
    """
    if corners is None:
        corners = [int(np.argmax(corner_angles(domain)))]
    elif corners == "reentrant":
        corners = reentrant_corners(domain)
        if not corners:
            raise ValueError("polygon has no reflex corners")
    elif corners == "singular":
        corners = singular_corners(domain)
        if not corners:
            corners = [int(np.argmax(corner_angles(domain)))]
    return [CornerBasis(domain, c, size) for c in corners]


def _as_basis_list(basis):
    # anything with an evaluate(lam, points) method works as a fan
    if hasattr(basis, "evaluate"):
        return [basis]
    basis = list(basis)
    if not basis:
        raise ValueError("empty basis")
    return basis


def _fan_size(fan):
    return getattr(fan, "size", 1)


def _fan_edges(fan):
    return getattr(fan, "edges", set())


def _point_in_polygon(p, verts):
    inside = False
    n = len(verts)
    for i in range(n):
        a, b = verts[i], verts[(i + 1) % n]
        if (a[1] > p[1]) != (b[1] > p[1]):
            x_cross = a[0] + (p[1] - a[1]) * (b[0] - a[0]) / (b[1] - a[1])
            if x_cross > p[0]:
                inside = not inside
    return inside


def _halton(index, base):
    f, r = 1.0, 0.0
    while index > 0:
        f /= base
        r += f * (index % base)
        index //= base
    return r


def interior_points(domain, count, offset=17):
    """Deterministic low-discrepancy points strictly inside the polygon."""
    verts = domain.vertices
    lo, hi = verts.min(axis=0), verts.max(axis=0)
    pts = []
    idx = offset
    while len(pts) < count:
        p = np.array([lo[0] + (hi[0] - lo[0]) * _halton(idx, 2),
                      lo[1] + (hi[1] - lo[1]) * _halton(idx, 3)])
        idx += 1
        if _point_in_polygon(p, verts):
            pts.append(p)
        if idx - offset > 1000 * count:
            raise ValueError("interior sampling failed; degenerate polygon?")
    return np.array(pts)


def boundary_collocation(domain, basis, total):
    """`total` points spread over the edges where some basis function lives.

    Edges on which every basis fan vanishes identically (all fans share the
    corner the edge touches) carry no information and are skipped.
    """
    basis = _as_basis_list(basis)
    verts = domain.vertices
    n = len(verts)
    edges = [(j, (j + 1) % n) for j in range(n)]
    active = [e for e in edges if any(e not in _fan_edges(fan) for fan in basis)]
    if not active:
        raise ValueError("no boundary edges left to collocate")
    lengths = np.array([np.hypot(*(verts[b] - verts[a])) for a, b in active])
    counts = np.maximum(2, np.round(total * lengths / lengths.sum()).astype(int))
    pts = []
    for (a, b), m in zip(active, counts):
        s = (np.arange(m) + 0.5) / m
        pts.append(verts[a] + s[:, None] * (verts[b] - verts[a]))
    return np.vstack(pts)


def _stacked(basis, lam, bpts, ipts):
    blocks = [fan.evaluate(lam, np.vstack([bpts, ipts])) for fan in basis]
    return np.hstack(blocks)


def _subspace_smin(M, nb, want_vector=False):
    # high orders decay like J_nu, so equilibrate columns before QR;
    # the span is unchanged and the orthonormalization stays meaningful
    scale = np.linalg.norm(M, axis=0)
    if np.any(scale == 0.0):
        raise ValueError("basis column vanished at every sample point; "
                         "the trial space is ill posed here")
    q, r = la.qr(M / scale, mode="economic")
    d = np.abs(np.diag(r))
    if d.min() <= 1e-13 * d.max():
        raise ValueError("basis block lost rank at the sample points; "
                         "the trial space is ill posed here")
    qb = q[:nb]
    if not want_vector:
        s = la.svd(qb, compute_uv=False)
        return float(s[-1]), None
    u, s, vt = la.svd(qb)
    coeff = la.solve_triangular(r, vt[-1], lower=False) / scale
    return float(s[-1]), coeff


def sigma_min_sweep(domain, basis, lambda_grid, oversample=2, threads=1,
                    offset=17):
    """Subspace-angle indicator s(lambda) over a grid; minima mark eigenvalues."""
    basis = _as_basis_list(basis)
    lambda_grid = np.asarray(lambda_grid, dtype=float)
    if np.any(lambda_grid <= 0) or np.any(np.diff(lambda_grid) <= 0):
        raise ValueError("lambda grid must be positive and ascending")
    total = oversample * sum(_fan_size(fan) for fan in basis)
    bpts = boundary_collocation(domain, basis, total)
    ipts = interior_points(domain, len(bpts), offset=offset)

    def one(lam):
        s, _ = _subspace_smin(_stacked(basis, lam, bpts, ipts), len(bpts))
        return (float(lam), s)

    if threads > 1:
        from concurrent.futures import ThreadPoolExecutor
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(one, lambda_grid))
    return [one(lam) for lam in lambda_grid]


_GOLD = (np.sqrt(5.0) - 1.0) / 2.0


def refine_minimum(domain, basis, bracket, rtol=1e-9, oversample=2, offset=17):
    """Golden-section descent of s(lambda) inside a bracket.

    Returns (lambda_h, coefficients) where the coefficient vector is
    normalized to unit L2 norm over the polygon (degree-5 quadrature on a
    level-3 triangulation). A bracket without an interior minimum of s is
    rejected.
    """
    basis = _as_basis_list(basis)
    a, b = float(bracket[0]), float(bracket[1])
    if not 0 < a < b:
        raise ValueError("bracket must be positive and increasing")
    total = oversample * sum(_fan_size(fan) for fan in basis)
    bpts = boundary_collocation(domain, basis, total)
    ipts = interior_points(domain, len(bpts), offset=offset)

    def s_of(lam):
        return _subspace_smin(_stacked(basis, lam, bpts, ipts), len(bpts))[0]

    sa, sb = s_of(a), s_of(b)
    x1 = b - _GOLD * (b - a)
    x2 = a + _GOLD * (b - a)
    f1, f2 = s_of(x1), s_of(x2)
    lo, hi = a, b
    while hi - lo > rtol * hi:
        if f1 <= f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - _GOLD * (hi - lo)
            f1 = s_of(x1)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + _GOLD * (hi - lo)
            f2 = s_of(x2)
    lam_h = float(0.5 * (lo + hi))
    s_min, coeff = _subspace_smin(_stacked(basis, lam_h, bpts, ipts),
                                  len(bpts), want_vector=True)
    if s_min >= min(sa, sb) - 1e-12:
        raise ValueError(f"no interior minimum of s in [{a:g}, {b:g}] "
                         f"(s = {s_min:.3e} vs endpoints {sa:.3e}, {sb:.3e})")
    coeff = coeff / _l2_norm(domain, basis, lam_h, coeff)
    return lam_h, coeff


def evaluate_solution(basis, lam, coeff, points):
    """Trial function value at arbitrary points."""
    basis = _as_basis_list(basis)
    blocks = np.hstack([fan.evaluate(lam, points) for fan in basis])
    return blocks @ coeff


def _l2_norm(domain, basis, lam, coeff, level=3):
    mesh = build_mesh(domain, level)
    p = mesh.vertices[mesh.triangles]
    areas = mesh.areas()
    total = 0.0
    for lamq, w in zip(_Q5_BARY, _Q5_W):
        x = np.einsum("q,tqd->td", lamq, p)
        u = evaluate_solution(basis, lam, coeff, x)
        total += np.sum(w * areas * u**2)
    return float(np.sqrt(total))


class Enclosure:
    """Interval around a located eigenvalue from the boundary residual."""

    def __init__(self, lambda_h, epsilon):
        if not 0 <= epsilon < 1:
            raise ValueError("boundary sup estimate must lie in [0, 1)")
        self.lambda_h = float(lambda_h)
        self.epsilon = float(epsilon)
        self.radius = float(lambda_h * (np.sqrt(2.0) * epsilon + epsilon**2)
                            / (1.0 - epsilon**2))
        self.lower = self.lambda_h - self.radius
        self.upper = self.lambda_h + self.radius
        self.method = "fhm"
        # sup norm is sampled and the L2 norm is quadrature-based, so the
        # interval is a floating-point evaluation, not a certified bound
        self.caveat = True

    def __contains__(self, value):
        return self.lower <= value <= self.upper

    def report_line(self):
        return (f"{self.lambda_h!r},{self.lower!r},{self.upper!r},"
                f"{self.epsilon!r},{str(self.caveat).lower()}")

    def __repr__(self):
        return (f"Enclosure[{self.method}]({self.lower:.9g}, {self.upper:.9g}; "
                f"eps={self.epsilon:.3g}, caveat={self.caveat})")


def _boundary_samples(domain, per_piece):
    if domain.kind == "polygon":
        verts = domain.vertices
        s = (np.arange(per_piece) + 0.5) / per_piece
        for j in range(len(verts)):
            a, b = verts[j], verts[(j + 1) % len(verts)]
            yield a + s[:, None] * (b - a)
    else:
        t = 2 * np.pi * (np.arange(per_piece) + 0.5) / per_piece
        for c, r, _ in domain.circles:
            yield c + r * np.column_stack([np.cos(t), np.sin(t)])


def fhm_enclosure(domain, lambda_h, coeff, basis, samples_per_edge=1200):
    """A-posteriori interval for an L2-normalized candidate eigenfunction."""
    basis = _as_basis_list(basis)
    sup = 0.0
    for pts in _boundary_samples(domain, samples_per_edge):
        u = evaluate_solution(basis, lambda_h, coeff, pts)
        sup = max(sup, float(np.abs(u).max()))
    if sup >= 1.0:
        raise ValueError(f"boundary sup {sup:.3g} is not below 1; "
                         "candidate is not eigenfunction-like")
    return Enclosure(lambda_h, sup)
