import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lapspec import geometry
from lapspec.geometry import Domain, boundary_quadrature, load_domain, refine, triangulate


def test_builtin_names_resolve():
    for name in ("gww-a", "gww-b", "unit-square", "dn-square", "dn-triangle",
                 "unit-disk", "annulus:eps=0.3"):
        assert load_domain(name).name == name


def test_unknown_name_raises():
    with pytest.raises(ValueError):
        load_domain("no-such-domain")


def test_square_area(square):
    assert square.area() == pytest.approx(1.0, rel=1e-15)


def test_gww_pair_share_area(gww_a, gww_b):
    # both drums are unions of seven half-unit right triangles
    assert gww_a.area() == pytest.approx(1.75, rel=1e-14)
    assert gww_b.area() == pytest.approx(gww_a.area(), rel=1e-14)


def test_clockwise_polygon_rejected():
    with pytest.raises(ValueError):
        Domain("polygon", [(0, 0), (0, 1), (1, 1), (1, 0)])


def test_self_intersecting_polygon_rejected():
    with pytest.raises(ValueError):
        Domain("polygon", [(0, 0), (1, 1), (1, 0), (0, 1)])


def test_bad_marker_rejected():
    with pytest.raises(ValueError):
        Domain("polygon", [(0, 0), (1, 0), (0, 1)], ["dirichlet", "robin", "dirichlet"])


def test_inner_circle_containment_enforced():
    with pytest.raises(ValueError):
        Domain("smooth-curves", circles=[((0, 0), 1.0, +1), ((0.95, 0), 0.2, -1)])


def test_scaled_area_and_markers():
    dom = load_domain("dn-square").scaled(2.0)
    assert dom.area() == pytest.approx(4.0, rel=1e-14)
    assert dom.markers == ["dirichlet", "dirichlet", "neumann", "dirichlet"]
    disk = load_domain("unit-disk").scaled(0.5)
    assert disk.area() == pytest.approx(np.pi * 0.25, rel=1e-14)


def test_domain_file_polygon(tmp_path):
    f = tmp_path / "wedge.dom"
    f.write_text(
        "# a marked triangle\n"
        "v 0 0\nv 2 0\nv 0 2\n"
        "e 0 1 neumann\n"
        "e 1 2 dirichlet\n"
        "e 2 0 steklov\n"
    )
    dom = load_domain(str(f))
    assert dom.kind == "polygon"
    assert dom.markers == ["neumann", "dirichlet", "steklov"]
    assert dom.area() == pytest.approx(2.0)


def test_domain_file_circles(tmp_path):
    f = tmp_path / "ring.dom"
    f.write_text("c 0 0 1 ccw\nc 0 0.4 0.1 cw\nweight genus2\n")
    dom = load_domain(str(f))
    assert dom.kind == "smooth-curves"
    assert dom.weight == "genus2"
    assert len(dom.circles) == 2


def test_domain_file_mixed_sections_rejected(tmp_path):
    f = tmp_path / "bad.dom"
    f.write_text("v 0 0\nv 1 0\nv 0 1\nc 0 0 1 ccw\n")
    with pytest.raises(ValueError):
        load_domain(str(f))


def test_domain_file_parse_error_carries_line_number(tmp_path):
    f = tmp_path / "typo.dom"
    f.write_text("v 0 0\nv 1 zero\n")
    with pytest.raises(ValueError, match=":2:"):
        load_domain(str(f))


# ---------------------------------------------------------------------------
# meshes
# ---------------------------------------------------------------------------

def _mesh_tower(domain, levels):
    m = triangulate(domain)
    tower = [m]
    for _ in range(levels):
        m = refine(m)
        tower.append(m)
    return tower


@pytest.mark.parametrize("name", ["unit-square", "gww-a", "gww-b", "dn-triangle"])
def test_triangle_areas_positive_and_sum_to_domain_area(name):
    dom = load_domain(name)
    for mesh in _mesh_tower(dom, 3):
        areas = mesh.areas()
        assert np.all(areas > 0)
        assert np.sum(areas) == pytest.approx(dom.area(), rel=1e-12)


def test_nonconvex_ear_clipping_triangle_count(gww_a):
    mesh = triangulate(gww_a)
    assert len(mesh.triangles) == len(gww_a.vertices) - 2


def test_refinement_adds_only_edge_midpoints(square):
    coarse = triangulate(square)
    fine = refine(coarse)
    nold = coarse.n_vertices
    assert np.array_equal(fine.vertices[:nold], coarse.vertices)
    # every appended vertex is the midpoint of some coarse edge
    t = coarse.triangles
    raw = np.concatenate([t[:, [0, 1]], t[:, [1, 2]], t[:, [2, 0]]])
    raw.sort(axis=1)
    edges = np.unique(raw, axis=0)
    mids = 0.5 * (coarse.vertices[edges[:, 0]] + coarse.vertices[edges[:, 1]])
    for p in fine.vertices[nold:]:
        assert np.min(np.sum((mids - p) ** 2, axis=1)) < 1e-28
    assert fine.n_vertices == nold + len(edges)


def test_refinement_preserves_boundary(gww_a):
    coarse = triangulate(gww_a)
    fine = refine(coarse)
    old_bnd = set(np.unique(coarse.boundary_edges))
    new_bnd = set(np.unique(fine.boundary_edges))
    assert old_bnd <= new_bnd
    assert len(fine.boundary_edges) == 2 * len(coarse.boundary_edges)
    # markers duplicate in place, so edge pairs keep their parent's condition
    for k, m in enumerate(coarse.markers):
        assert fine.markers[2 * k] == m
        assert fine.markers[2 * k + 1] == m
    # perimeter is preserved exactly by midpoint splitting
    assert np.sum(fine.edge_lengths()) == pytest.approx(
        np.sum(coarse.edge_lengths()), rel=1e-14)


def test_quadruple_triangle_count_and_halved_h(square):
    coarse = triangulate(square)
    fine = refine(coarse)
    assert len(fine.triangles) == 4 * len(coarse.triangles)
    assert fine.h == pytest.approx(coarse.h / 2, rel=1e-14)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.floats(min_value=0.05, max_value=2 * np.pi - 0.05),
                min_size=4, max_size=9, unique=True))
def test_convex_polygon_mesh_area_preserved(angles):
    pts = np.column_stack([np.cos(sorted(angles)), np.sin(sorted(angles))])
    dom = Domain("polygon", pts)
    mesh = refine(triangulate(dom))
    assert np.all(mesh.areas() > 0)
    assert np.sum(mesh.areas()) == pytest.approx(dom.area(), rel=1e-12)


# ---------------------------------------------------------------------------
# circle quadrature
# ---------------------------------------------------------------------------

def test_circle_weights_sum_to_circumference():
    dom = load_domain("annulus:eps=0.3")
    quad = boundary_quadrature(dom, [64, 32])
    for curve, (_, r, _) in zip(quad.curves, dom.circles):
        assert np.sum(curve.weights) == pytest.approx(2 * np.pi * r, rel=1e-14)
    assert quad.total == 96


def test_quadrature_normals_point_out_of_the_domain():
    dom = load_domain("annulus:eps=0.3")
    quad = boundary_quadrature(dom, 32)
    outer, inner = quad.curves
    ro = outer.points - outer.center
    ri = inner.points - inner.center
    assert np.all(np.sum(outer.normals * ro, axis=1) > 0)
    assert np.all(np.sum(inner.normals * ri, axis=1) < 0)
    assert np.allclose(np.sum(quad.normals**2, axis=1), 1.0, atol=1e-14)


def test_quadrature_node_counts_validated(disk):
    with pytest.raises(ValueError):
        boundary_quadrature(disk, 33)
    with pytest.raises(ValueError):
        boundary_quadrature(disk, 2)
    with pytest.raises(ValueError):
        boundary_quadrature(load_domain("unit-square"), 32)


def test_spectral_accuracy_of_trapezoid_rule(disk):
    # the equispaced rule integrates smooth periodic integrands to machine precision
    quad = boundary_quadrature(disk, 24)
    theta = np.arctan2(quad.points[:, 1], quad.points[:, 0])
    val = np.sum(np.exp(np.sin(theta)) * quad.weights)
    dense = boundary_quadrature(disk, 512)
    theta_d = np.arctan2(dense.points[:, 1], dense.points[:, 0])
    ref = np.sum(np.exp(np.sin(theta_d)) * dense.weights)
    assert val == pytest.approx(ref, rel=1e-13)
