"""P1, P2, and Crouzeix-Raviart assembly plus the eigenvalue drives.

All element integrals on affine triangles are exact: constant gradients for
P1/CR, the 3-midpoint rule for P2 stiffness (exact on quadratics), and a
7-point degree-5 rule for P2 mass and for the smooth radial weight. Boundary
mass is exact edgewise. Dirichlet constraints are imposed by dof elimination
so every pencil stays symmetric definite.
"""
import numpy as np
import scipy.sparse as sp

from . import pencil as pen
from .geometry import triangulate, refine

KINDS = ("P1", "P2", "CR")

# degree-5 rule on the reference triangle: centroid + two symmetric orbits
_Q5_A = (6.0 - np.sqrt(15.0)) / 21.0
_Q5_B = (6.0 + np.sqrt(15.0)) / 21.0
_Q5_BARY = np.array(
    [[1 / 3, 1 / 3, 1 / 3]]
    + [[_Q5_A, _Q5_A, 1 - 2 * _Q5_A], [_Q5_A, 1 - 2 * _Q5_A, _Q5_A],
       [1 - 2 * _Q5_A, _Q5_A, _Q5_A]]
    + [[_Q5_B, _Q5_B, 1 - 2 * _Q5_B], [_Q5_B, 1 - 2 * _Q5_B, _Q5_B],
       [1 - 2 * _Q5_B, _Q5_B, _Q5_B]])
_Q5_W = np.array([9 / 40]
                 + [(155.0 - np.sqrt(15.0)) / 1200.0] * 3
                 + [(155.0 + np.sqrt(15.0)) / 1200.0] * 3)

# midpoint rule, exact on quadratics
_QMID_BARY = np.array([[0.0, 0.5, 0.5], [0.5, 0.0, 0.5], [0.5, 0.5, 0.0]])
_QMID_W = np.array([1 / 3, 1 / 3, 1 / 3])


def genus2_weight(points):
    """Smooth radial mass coefficient w(r) = 4 / (1 + r^2)^2."""
    r2 = (np.asarray(points) ** 2).sum(axis=-1)
    return 4.0 / (1.0 + r2) ** 2


def _edge_table(triangles, n_vertices):
    """Global edge numbering; local edge i is opposite local vertex i."""
    local = np.stack([triangles[:, [1, 2]], triangles[:, [2, 0]],
                      triangles[:, [0, 1]]], axis=1)
    flat = np.sort(local.reshape(-1, 2), axis=1)
    keys = flat[:, 0] * n_vertices + flat[:, 1]
    uniq, inverse = np.unique(keys, return_inverse=True)
    edges = np.column_stack([uniq // n_vertices, uniq % n_vertices])
    return edges, inverse.reshape(-1, 3), uniq


class FemSpace:
    """Finite element space on a mesh with Dirichlet dofs eliminated later.

    Dof numbering: P1 uses vertex indices; P2 appends edge midpoints after
    the vertices; CR uses edge indices alone. `constrained_markers` names the
    boundary markers whose edges carry the essential condition.
    """

    def __init__(self, kind, mesh, constrained_markers=()):
        if kind not in KINDS:
            raise ValueError(f"unknown element kind {kind!r}")
        self.kind = kind
        self.mesh = mesh
        nv = mesh.n_vertices
        self.edges, self.tri_edges, self._edge_keys = _edge_table(mesh.triangles, nv)
        ne = len(self.edges)
        if kind == "P1":
            self.n_dofs = nv
            self.cell_dofs = mesh.triangles
        elif kind == "P2":
            self.n_dofs = nv + ne
            self.cell_dofs = np.hstack([mesh.triangles, nv + self.tri_edges])
        else:
            self.n_dofs = ne
            self.cell_dofs = self.tri_edges

        bpairs = np.sort(mesh.boundary_edges, axis=1)
        bkeys = bpairs[:, 0] * nv + bpairs[:, 1]
        pos = np.searchsorted(self._edge_keys, bkeys)
        if np.any(pos >= ne) or np.any(self._edge_keys[pos] != bkeys):
            raise ValueError("boundary edge missing from the triangulation")
        self.boundary_edge_index = pos

        constrained = np.zeros(self.n_dofs, dtype=bool)
        on_boundary = np.zeros(self.n_dofs, dtype=bool)
        for (a, b), e, marker in zip(mesh.boundary_edges,
                                     self.boundary_edge_index, mesh.markers):
            dofs = self._edge_trace_dofs(a, b, e)
            on_boundary[dofs] = True
            if marker in constrained_markers:
                constrained[dofs] = True
        self.constrained = constrained
        self.on_boundary = on_boundary
        self.free = np.flatnonzero(~constrained)

    def _edge_trace_dofs(self, a, b, e):
        if self.kind == "P1":
            return [a, b]
        if self.kind == "P2":
            return [a, b, self.mesh.n_vertices + e]
        return [e]

    def _geometry(self):
        p = self.mesh.vertices[self.mesh.triangles]
        j11 = p[:, 1, 0] - p[:, 0, 0]
        j12 = p[:, 2, 0] - p[:, 0, 0]
        j21 = p[:, 1, 1] - p[:, 0, 1]
        j22 = p[:, 2, 1] - p[:, 0, 1]
        det = j11 * j22 - j12 * j21
        area = 0.5 * det
        # gradients of the barycentric coordinates, shape (t, 3, 2)
        g = np.empty((len(det), 3, 2))
        g[:, 1, 0] = j22 / det
        g[:, 1, 1] = -j12 / det
        g[:, 2, 0] = -j21 / det
        g[:, 2, 1] = j11 / det
        g[:, 0] = -g[:, 1] - g[:, 2]
        return p, area, g


def _p2_values(lam):
    """P2 basis values at one barycentric point, length 6."""
    l0, l1, l2 = lam
    return np.array([l0 * (2 * l0 - 1), l1 * (2 * l1 - 1), l2 * (2 * l2 - 1),
                     4 * l1 * l2, 4 * l2 * l0, 4 * l0 * l1])


def _scatter(cell_dofs, element, n):
    nd = cell_dofs.shape[1]
    rows = np.repeat(cell_dofs, nd, axis=1).ravel()
    cols = np.tile(cell_dofs, (1, nd)).ravel()
    mat = sp.coo_matrix((element.ravel(), (rows, cols)), shape=(n, n))
    return mat.tocsr()


def assemble_stiffness(space):
    """Stiffness matrix; symmetric, kernel = constants when unconstrained."""
    p, area, g = space._geometry()
    if space.kind == "P1":
        ke = np.einsum("tid,tjd,t->tij", g, g, area)
    elif space.kind == "CR":
        ke = 4.0 * np.einsum("tid,tjd,t->tij", g, g, area)
    else:
        nt = len(area)
        ke = np.zeros((nt, 6, 6))
        for lam, w in zip(_QMID_BARY, _QMID_W):
            grad = np.zeros((nt, 6, 2))
            for i in range(3):
                grad[:, i] = (4 * lam[i] - 1) * g[:, i]
            for i, (j, k) in enumerate([(1, 2), (2, 0), (0, 1)]):
                grad[:, 3 + i] = 4 * (lam[k] * g[:, j] + lam[j] * g[:, k])
            ke += w * np.einsum("tid,tjd,t->tij", grad, grad, area)
    return _scatter(space.cell_dofs, ke, space.n_dofs)


def assemble_mass(space, weight="unit"):
    """Mass matrix, exactly integrated for the unit weight."""
    p, area, g = space._geometry()
    nt = len(area)
    if weight == "unit":
        if space.kind == "P1":
            base = (np.ones((3, 3)) + np.eye(3)) / 12.0
            ke = area[:, None, None] * base
        elif space.kind == "CR":
            ke = area[:, None, None] * (np.eye(3) / 3.0)
        else:
            ke = np.zeros((nt, 6, 6))
            for lam, w in zip(_Q5_BARY, _Q5_W):
                v = _p2_values(lam)
                ke += w * np.einsum("i,j,t->tij", v, v, area)
    elif weight == "genus2":
        nd = space.cell_dofs.shape[1]
        ke = np.zeros((nt, nd, nd))
        for lam, w in zip(_Q5_BARY, _Q5_W):
            x = np.einsum("q,tqd->td", lam, p)
            coef = genus2_weight(x) * area * w
            if space.kind == "P1":
                v = lam
            elif space.kind == "CR":
                v = 1.0 - 2.0 * lam
            else:
                v = _p2_values(lam)
            ke += np.einsum("i,j,t->tij", v, v, coef)
    else:
        raise ValueError(f"unknown weight {weight!r}")
    return _scatter(space.cell_dofs, ke, space.n_dofs)


def assemble_boundary_mass(space, cr_variant=None):
    """Boundary mass on marked edges, lifted to the volume dof numbering.

    CR traces jump at boundary vertices, so plain CR assembly is refused;
    pass cr_variant="midpoint" for the midpoint-lumped form on the natural
    CR edge dofs.
    """
    mesh = space.mesh
    if space.kind == "CR" and cr_variant != "midpoint":
        raise ValueError("CR boundary mass needs cr_variant='midpoint' "
                         "(CR traces are discontinuous at boundary vertices)")
    n = space.n_dofs
    rows, cols, data = [], [], []
    lengths = mesh.edge_lengths()
    for (a, b), e, L in zip(mesh.boundary_edges, space.boundary_edge_index, lengths):
        if space.kind == "P1":
            dofs = [a, b]
            block = (L / 6.0) * np.array([[2.0, 1.0], [1.0, 2.0]])
        elif space.kind == "P2":
            dofs = [a, b, mesh.n_vertices + e]
            block = (L / 30.0) * np.array([[4.0, -1.0, 2.0],
                                           [-1.0, 4.0, 2.0],
                                           [2.0, 2.0, 16.0]])
        else:
            dofs = [e]
            block = np.array([[L]])
        for i, di in enumerate(dofs):
            for j, dj in enumerate(dofs):
                rows.append(di)
                cols.append(dj)
                data.append(block[i, j])
    return sp.coo_matrix((data, (rows, cols)), shape=(n, n)).tocsr()


class EigenProblemSpec:
    """What to solve: bc, weight, eigenvalue count, element kind, level."""

    BCS = ("dirichlet", "neumann", "mixed", "steklov")

    def __init__(self, bc, count, kind="P1", level=0, weight="unit"):
        if bc not in self.BCS:
            raise ValueError(f"unknown boundary condition {bc!r}")
        if kind not in KINDS:
            raise ValueError(f"unknown element kind {kind!r}")
        if count < 1:
            raise ValueError("eigenvalue count must be at least 1")
        if level < 0:
            raise ValueError("refinement level must be nonnegative")
        if weight not in ("unit", "genus2"):
            raise ValueError(f"unknown weight {weight!r}")
        if weight == "genus2" and bc == "steklov":
            raise ValueError("the radial weight applies to volume mass terms only")
        self.bc = bc
        self.count = count
        self.kind = kind
        self.level = level
        self.weight = weight


DENSE_LIMIT = 4000


def build_mesh(domain, level):
    mesh = triangulate(domain)
    for _ in range(level):
        mesh = refine(mesh)
    return mesh


def _constrained_markers(bc):
    if bc == "dirichlet":
        return ("dirichlet", "neumann", "steklov")
    if bc == "mixed":
        return ("dirichlet",)
    return ()


def solve_fem(domain, spec, mesh=None):
    """Eigenvalues of the requested problem on a refined triangulation.

    Dirichlet/mixed eliminate constrained dofs and solve (K, M). Neumann
    solves unconstrained (K, M) and flags the zero mode. Steklov solves
    B v = mu (K + B) v on the definite side and maps sigma = 1/mu - 1,
    which discards the infinite interior modes (mu = 0) automatically.
    """
    if mesh is None:
        mesh = build_mesh(domain, spec.level)
    space = FemSpace(spec.kind, mesh, _constrained_markers(spec.bc))
    K = assemble_stiffness(space)
    flags = {"bc": spec.bc, "level": mesh.level, "weight": spec.weight}
    method = f"fem-{spec.kind.lower()}"

    if spec.bc == "steklov":
        B = assemble_boundary_mass(
            space, cr_variant="midpoint" if spec.kind == "CR" else None)
        if spec.kind == "CR":
            method = "fem-cr-midpoint"
            flags["variant"] = "cr-midpoint"
        n_boundary = int(space.on_boundary.sum())
        if spec.count > n_boundary:
            raise ValueError(f"only {n_boundary} boundary dofs: cannot return "
                             f"{spec.count} finite Steklov eigenvalues")
        G = K + B
        if space.n_dofs <= DENSE_LIMIT:
            full = pen.solve_symdef(pen.Pencil(B.toarray(), G.toarray()))
            mu = full.eigenvalues[::-1][:spec.count]
            vecs = full.vectors[:, ::-1][:, :spec.count]
        else:
            mu, vecs = pen.solve_lowest(G, B, spec.count)
            mu, vecs = mu[:spec.count], vecs[:, :spec.count]
        vals = 1.0 / mu - 1.0
        vals[np.abs(vals) <= 1e-9] = 0.0
        flags["zero_mode"] = bool(vals[0] == 0.0)
        return _spectrum(vals, vecs, method, mesh, domain, flags, space)

    M = assemble_mass(space, spec.weight)
    if spec.bc == "neumann":
        if spec.count > space.n_dofs:
            raise ValueError(f"only {space.n_dofs} dofs: cannot return "
                             f"{spec.count} eigenvalues")
        flags["zero_mode"] = True
        if space.n_dofs <= DENSE_LIMIT:
            full = pen.solve_symdef(pen.Pencil(K.toarray(), M.toarray()))
            vals = full.eigenvalues[:spec.count]
            vecs = full.vectors[:, :spec.count]
        else:
            theta, vecs = pen.solve_lowest(K + M, M, spec.count)
            vals = 1.0 / theta[:spec.count] - 1.0
            vecs = vecs[:, :spec.count]
        vals = vals.copy()
        vals[np.abs(vals) <= 1e-9 * max(1.0, abs(vals[-1]))] = 0.0
        return _spectrum(vals, vecs, method, mesh, domain, flags, space)

    # dirichlet or mixed: eliminate the constrained dofs
    free = space.free
    if len(free) == 0:
        raise ValueError("no free dofs remain after the Dirichlet constraints")
    if spec.count > len(free):
        raise ValueError(f"only {len(free)} free dofs: cannot return "
                         f"{spec.count} eigenvalues (refine the mesh)")
    Kff = K[free][:, free]
    Mff = M[free][:, free]
    if len(free) <= DENSE_LIMIT:
        full = pen.solve_symdef(pen.Pencil(Kff.toarray(), Mff.toarray()))
        vals = full.eigenvalues[:spec.count]
        vfree = full.vectors[:, :spec.count]
    else:
        theta, vfree = pen.solve_lowest(Kff, Mff, spec.count)
        vals = 1.0 / theta[:spec.count]
        vfree = vfree[:, :spec.count]
    vecs = np.zeros((space.n_dofs, vfree.shape[1]))
    vecs[free] = vfree
    return _spectrum(vals, vecs, method, mesh, domain, flags, space)


def _spectrum(vals, vecs, method, mesh, domain, flags, space):
    spectrum = pen.Spectrum(vals, method, mesh.h, getattr(domain, "name", None),
                            vectors=vecs, flags=flags)
    spectrum.space = space
    return spectrum
