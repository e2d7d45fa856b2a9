import numpy as np
import pytest

from lapspec import mps, specfun
from lapspec.geometry import load_domain
from lapspec.mps import (CornerBasis, Enclosure, boundary_collocation,
                         corner_angles, corner_basis, fhm_enclosure,
                         interior_points, refine_minimum, reentrant_corners,
                         sigma_min_sweep, singular_corners)

from conftest import shared_square_mps


# ---------------------------------------------------------------------------
# corner geometry and fans
# ---------------------------------------------------------------------------

def test_square_corner_angles(square):
    assert np.allclose(corner_angles(square), np.pi / 2, atol=1e-14)


def test_gww_corner_classification(gww_a):
    angles = corner_angles(gww_a) / np.pi
    assert np.allclose(angles, [0.5, 0.75, 1.5, 0.25, 0.75, 0.5, 1.5, 0.25],
                       atol=1e-12)
    assert reentrant_corners(gww_a) == [2, 6]
    # pi/angle is an integer at the pi/2 and pi/4 corners, where odd
    # reflection continues eigenfunctions smoothly; everywhere else a fan
    # is required
    assert singular_corners(gww_a) == [1, 2, 4, 6]


def test_fan_orders_and_alpha(square):
    fan = CornerBasis(square, 0, 6)
    assert fan.alpha == pytest.approx(2.0, abs=1e-14)
    assert np.allclose(fan.orders(), [2, 4, 6, 8, 10, 12])


def test_fan_vanishes_on_incident_edges(gww_a):
    fan = CornerBasis(gww_a, 2, 8)  # a reflex corner
    v = gww_a.vertices
    s = np.linspace(0.05, 0.95, 9)[:, None]
    fwd = v[2] + s * (v[3] - v[2])
    bwd = v[1] + s * (v[2] - v[1])
    vals = fan.evaluate(50.0, np.vstack([fwd, bwd]))
    assert np.max(np.abs(vals)) < 1e-12


def test_fan_smooth_across_forward_ray_inside(gww_a):
    # the forward edge ray from the corner re-enters this nonconvex drum;
    # the local angle's branch cut must not fall there
    fan = CornerBasis(gww_a, 1, 5)
    p = np.array([1.75, 0.75])  # interior, on the forward-edge ray of corner 1
    eps = 1e-7
    up = fan.evaluate(30.0, [p + [0, eps]])
    dn = fan.evaluate(30.0, [p - [0, eps]])
    assert np.max(np.abs(up - dn)) < 1e-5


def test_fan_size_and_order_guards(square):
    with pytest.raises(ValueError):
        CornerBasis(square, 0, 0)
    with pytest.raises(ValueError):
        CornerBasis(square, 0, 101)  # top order 202 exceeds the Bessel domain
    with pytest.raises(ValueError):
        CornerBasis(load_domain("unit-disk"), 0, 4)


def test_corner_basis_selection(square, gww_a):
    default = corner_basis(square, 5)
    assert len(default) == 1 and default[0].corner == 0
    sing = corner_basis(gww_a, 5, corners="singular")
    assert [f.corner for f in sing] == [1, 2, 4, 6]
    reen = corner_basis(gww_a, 5, corners="reentrant")
    assert [f.corner for f in reen] == [2, 6]
    explicit = corner_basis(gww_a, 5, corners=[4, 6])
    assert [f.corner for f in explicit] == [4, 6]
    with pytest.raises(ValueError):
        corner_basis(square, 5, corners="reentrant")
    # a polygon whose corners are all pi/integer falls back to the widest one
    fallback = corner_basis(square, 5, corners="singular")
    assert len(fallback) == 1


# ---------------------------------------------------------------------------
# sampling
# ---------------------------------------------------------------------------

def test_point_in_polygon_hand_cases(gww_a):
    v = gww_a.vertices
    assert mps._point_in_polygon(np.array([1.0, 0.25]), v)
    assert mps._point_in_polygon(np.array([1.75, 0.75]), v)
    assert not mps._point_in_polygon(np.array([0.25, 0.9]), v)
    assert not mps._point_in_polygon(np.array([-0.1, 0.5]), v)


def test_interior_points_deterministic_and_inside(gww_a):
    a = interior_points(gww_a, 40)
    b = interior_points(gww_a, 40)
    assert np.array_equal(a, b)
    c = interior_points(gww_a, 40, offset=99)
    assert not np.array_equal(a, c)
    for p in np.vstack([a, c]):
        assert mps._point_in_polygon(p, gww_a.vertices)


def test_boundary_collocation_skips_fan_edges(square):
    fan = CornerBasis(square, 0, 6)
    pts = boundary_collocation(square, fan, 24)
    # the two edges meeting corner 0 carry no information; nodes live on
    # x = 1 and y = 1 only
    on_far = (np.abs(pts[:, 0] - 1) < 1e-14) | (np.abs(pts[:, 1] - 1) < 1e-14)
    assert np.all(on_far)
    assert len(pts) >= 24


def test_boundary_collocation_minimum_two_per_edge(gww_a):
    basis = corner_basis(gww_a, 2, corners="singular")
    pts = boundary_collocation(gww_a, basis, 8)
    # every edge not shared by all fans keeps at least two midpoint nodes
    assert len(pts) >= 2 * 6


# ---------------------------------------------------------------------------
# the indicator and its minima
# ---------------------------------------------------------------------------

def test_sweep_validates_grid(square):
    basis = corner_basis(square, 6)
    with pytest.raises(ValueError):
        sigma_min_sweep(square, basis, [2.0, 1.0])
    with pytest.raises(ValueError):
        sigma_min_sweep(square, basis, [-1.0, 1.0])


def test_sweep_dips_at_eigenvalue(square):
    basis = corner_basis(square, 12)
    grid = np.linspace(18.0, 22.0, 21)
    rows = sigma_min_sweep(square, basis, grid)
    s = np.array([r[1] for r in rows])
    k = int(np.argmin(s))
    assert abs(grid[k] - 2 * np.pi**2) < 0.11
    assert s[k] < 0.02
    assert s[0] > 10 * s[k] and s[-1] > 10 * s[k]


def test_sweep_threaded_matches_serial(square):
    basis = corner_basis(square, 10)
    grid = np.linspace(18, 21, 5)
    assert sigma_min_sweep(square, basis, grid) == \
        sigma_min_sweep(square, basis, grid, threads=3)


class _ColumnScaledFan:
    """Duck-typed fan wrapping another with fixed positive column scalings."""

    def __init__(self, inner, factors):
        self.inner = inner
        self.factors = np.asarray(factors, dtype=float)
        self.size = inner.size
        self.edges = inner.edges

    def evaluate(self, lam, points):
        return self.inner.evaluate(lam, points) * self.factors


def test_indicator_invariant_under_column_scaling(square, rng):
    base = corner_basis(square, 10)
    scaled = [_ColumnScaledFan(base[0], rng.uniform(0.2, 5.0, 10))]
    grid = np.linspace(19.0, 20.5, 4)
    a = sigma_min_sweep(square, base, grid)
    b = sigma_min_sweep(square, scaled, grid)
    for (_, sa), (_, sb) in zip(a, b):
        assert abs(sa - sb) <= 1e-10


def test_refine_square_fundamental(square):
    basis = corner_basis(square, 12)
    lam, coeff = refine_minimum(square, basis, (19.0, 21.0))
    assert lam == pytest.approx(2 * np.pi**2, abs=1e-7)
    # coefficients are L2-normalized over the domain
    norm = mps._l2_norm(square, basis, lam, coeff)
    assert norm == pytest.approx(1.0, rel=1e-9)


def test_refine_rejects_bracket_without_minimum(square):
    basis = corner_basis(square, 12)
    with pytest.raises(ValueError, match="no interior minimum"):
        refine_minimum(square, basis, (21.0, 24.0))
    with pytest.raises(ValueError):
        refine_minimum(square, basis, (-3.0, 5.0))


def test_located_value_stable_under_denser_collocation(square):
    basis = corner_basis(square, 12)
    lam2, coeff2 = refine_minimum(square, basis, (19.0, 21.0), oversample=2)
    lam4, _ = refine_minimum(square, basis, (19.0, 21.0), oversample=4)
    encl = fhm_enclosure(square, lam2, coeff2, basis)
    assert abs(lam2 - lam4) < encl.radius


# ---------------------------------------------------------------------------
# enclosures
# ---------------------------------------------------------------------------

def test_enclosure_radius_formula():
    e = Enclosure(10.0, 0.1)
    want = 10.0 * (np.sqrt(2.0) * 0.1 + 0.01) / (1.0 - 0.01)
    assert e.radius == pytest.approx(want, rel=1e-15)
    assert e.radius == pytest.approx(1.5295086488617127, rel=1e-14)
    assert e.lower == e.lambda_h - e.radius
    assert e.upper == e.lambda_h + e.radius
    assert e.caveat is True
    assert e.method == "fhm"
    assert 10.0 in e and 8.0 not in e


def test_enclosure_degenerate_and_invalid():
    assert Enclosure(5.0, 0.0).radius == 0.0
    with pytest.raises(ValueError):
        Enclosure(5.0, 1.0)
    with pytest.raises(ValueError):
        Enclosure(5.0, -0.2)


def test_enclosure_report_line():
    line = Enclosure(10.0, 0.0).report_line()
    assert line == "10.0,10.0,10.0,0.0,true"


def test_square_enclosures_contain_true_eigenvalues():
    for lam, encl, exact in shared_square_mps():
        assert exact in encl
        assert abs(lam - exact) < 1e-5


def test_disk_enclosure_with_analytic_radial_mode(disk):
    j01 = specfun.bessel_j_zero(0, 1)
    norm = np.sqrt(np.pi) * abs(specfun.bessel_j(1.0, j01))

    class RadialMode:
        size = 1

        def evaluate(self, lam, points):
            pts = np.atleast_2d(points)
            r = np.hypot(pts[:, 0], pts[:, 1])
            return (specfun.bessel_j(0.0, np.sqrt(lam) * r) / norm)[:, None]

    encl = fhm_enclosure(disk, j01**2, np.array([1.0]), RadialMode())
    assert encl.epsilon < 1e-10
    assert j01**2 in encl
    assert encl.radius < 1e-8


def test_enclosure_rejects_non_eigenfunction(square):
    basis = corner_basis(square, 8)
    # an off-eigenvalue trial function has O(1) boundary values after
    # normalization
    lam = 30.0
    coeff = np.zeros(8)
    coeff[0] = 1.0
    coeff = coeff / mps._l2_norm(square, basis, lam, coeff)
    with pytest.raises(ValueError, match="not below 1"):
        fhm_enclosure(square, lam, coeff, basis)
