import numpy as np
import pytest

from lapspec import fem, geometry

_MESH_CACHE = {}
_SOLVE_CACHE = {}


def shared_mesh(name, level):
    key = (name, level)
    if key not in _MESH_CACHE:
        _MESH_CACHE[key] = fem.build_mesh(geometry.load_domain(name), level)
    return _MESH_CACHE[key]


def shared_solve(name, bc, kind, level, count, scale=1.0):
    """Memoized FEM solve so the expensive drum spectra are computed once."""
    key = (name, bc, kind, level, count, scale)
    if key not in _SOLVE_CACHE:
        dom = geometry.load_domain(name)
        if scale != 1.0:
            dom = dom.scaled(scale)
        spec = fem.EigenProblemSpec(bc, count, kind=kind, level=level)
        mesh = None if scale != 1.0 else shared_mesh(name, level)
        _SOLVE_CACHE[key] = fem.solve_fem(dom, spec, mesh=mesh)
    return _SOLVE_CACHE[key]


def shared_bie(eps, n_per_curve):
    """Memoized full off-center-annulus spectrum at n nodes per curve."""
    from lapspec import bie
    key = ("bie", float(eps), int(n_per_curve))
    if key not in _SOLVE_CACHE:
        _SOLVE_CACHE[key] = bie.solve_steklov_bie(
            bie.annulus_domain(eps), int(n_per_curve))
    return _SOLVE_CACHE[key]


def shared_square_mps(size=14):
    """Locate the distinct low square eigenvalues once: (lambda_h, enclosure,
    exact) for 2, 5, 8, 10, 13 times pi^2."""
    from lapspec import mps
    key = ("square-mps", size)
    if key not in _SOLVE_CACHE:
        dom = geometry.load_domain("unit-square")
        basis = mps.corner_basis(dom, size)
        out = []
        for m2 in (2, 5, 8, 10, 13):
            exact = m2 * np.pi**2
            lam, coeff = mps.refine_minimum(dom, basis,
                                            (exact - 1.5, exact + 1.5))
            out.append((lam, mps.fhm_enclosure(dom, lam, coeff, basis), exact))
        _SOLVE_CACHE[key] = out
    return _SOLVE_CACHE[key]


def shared_gww_mps(size=14):
    """One located eigenvalue near the drum's tenth, with its enclosure."""
    from lapspec import mps
    key = ("gww-mps", size)
    if key not in _SOLVE_CACHE:
        dom = geometry.load_domain("gww-a")
        basis = mps.corner_basis(dom, size, corners="singular")
        lam, coeff = mps.refine_minimum(dom, basis, (103.5, 105.5))
        _SOLVE_CACHE[key] = (lam, mps.fhm_enclosure(dom, lam, coeff, basis))
    return _SOLVE_CACHE[key]


@pytest.fixture(scope="session")
def gww_steklov():
    def get(name, kind, level, count=5):
        return shared_solve(name, "steklov", kind, level, count)
    return get


@pytest.fixture(scope="session")
def square():
    return geometry.load_domain("unit-square")


@pytest.fixture(scope="session")
def gww_a():
    return geometry.load_domain("gww-a")


@pytest.fixture(scope="session")
def gww_b():
    return geometry.load_domain("gww-b")


@pytest.fixture(scope="session")
def disk():
    return geometry.load_domain("unit-disk")


@pytest.fixture
def rng():
    return np.random.default_rng(20260816)
