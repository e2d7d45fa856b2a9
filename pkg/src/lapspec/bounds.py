"""Eigenvalue bounds and mesh-sequence extrapolation.

The nonconforming (edge-midpoint) element underestimates Dirichlet
eigenvalues asymptotically, and a computable correction turns its output
into a guaranteed lower bound on polygons; conforming elements give upper
bounds by min-max. Running both over a refinement schedule yields a
two-sided bracket, and Richardson extrapolation of each column gives the
best single estimate together with an observed convergence rate.
"""
from collections import namedtuple

import numpy as np

from . import specfun
from .fem import (EigenProblemSpec, assemble_mass, assemble_stiffness,
                  build_mesh, solve_fem)

_J11 = specfun.bessel_j_zero(1, 1)
KAPPA_SQ = 0.125 + 1.0 / _J11**2


def cr_lower_bound(lam_cr, h):
    """Guaranteed lower bound from a nonconforming eigenvalue.

    lam / (1 + kappa^2 h^2 lam) with kappa^2 = 1/8 + 1/j_{1,1}^2. Valid for
    the Dirichlet Laplacian on polygons when the discrete problem is solved
    exactly; the algebraic solve is accurate to solver tolerance here, so
    pair the bound with the pencil residual when it matters.
    """
    lam_cr = float(lam_cr)
    h = float(h)
    if lam_cr <= 0 or h <= 0:
        raise ValueError("lower bound needs a positive eigenvalue and mesh size")
    return lam_cr / (1.0 + KAPPA_SQ * h**2 * lam_cr)


Extrapolation = namedtuple("Extrapolation", "limit rate asymptotic")


def richardson_extrapolate(values, hs):
    """Limit estimate from values on a halving mesh sequence.

    Fits v(h) = v* + C h^r on the finest three levels: r from the log2
    ratio of consecutive differences, v* by Aitken elimination. The
    asymptotic flag is set when at least two rate windows exist and
    successive estimates agree within 10%. Non-monotone differences in the
    finest window leave the data un-extrapolated (last value, rate nan).
    """
    v = np.asarray(values, dtype=float)
    h = np.asarray(hs, dtype=float)
    if v.shape != h.shape or v.ndim != 1 or len(v) < 3:
        raise ValueError("need matching 1-d arrays with at least 3 levels")
    ratios = h[:-1] / h[1:]
    if np.any(h <= 0) or np.any(np.abs(ratios - 2.0) > 0.02):
        raise ValueError("mesh sizes must halve between consecutive levels")
    rates = []
    for a, b, c in zip(v, v[1:], v[2:]):
        p, q = b - a, c - b
        rates.append(np.log2(p / q) if p * q > 0 and p != q else np.nan)
    if np.isnan(rates[-1]):
        return Extrapolation(float(v[-1]), float("nan"), False)
    a, b, c = v[-3:]
    limit = c - (c - b) ** 2 / ((c - b) - (b - a))
    asymptotic = (len(rates) >= 2
                  and not any(np.isnan(r) for r in rates)
                  and all(abs(r2 - r1) <= 0.1 * abs(r1)
                          for r1, r2 in zip(rates, rates[1:])))
    return Extrapolation(float(limit), float(rates[-1]), asymptotic)


def _infer_bc(domain):
    if domain.kind != "polygon":
        raise ValueError("bracket reports run on polygon domains")
    kinds = set(domain.markers)
    if kinds == {"dirichlet"}:
        return "dirichlet"
    if kinds == {"neumann"}:
        return "neumann"
    if kinds <= {"dirichlet", "neumann"}:
        return "mixed"
    raise ValueError("bracket reports cover volume eigenvalue problems only")


def _pencil_residual(spectrum, index):
    space = spectrum.space
    weight = spectrum.flags.get("weight", "unit")
    K = assemble_stiffness(space)
    M = assemble_mass(space, weight)
    free = space.free
    lam = spectrum.eigenvalues[index - 1]
    vec = spectrum.vectors[free, index - 1]
    kv = K[free][:, free] @ vec
    mv = M[free][:, free] @ vec
    denom = np.linalg.norm(kv) + abs(lam) * np.linalg.norm(mv)
    if denom == 0:
        return 0.0
    return float(np.linalg.norm(kv - lam * mv) / denom)


class BracketReport:
    """Two-sided eigenvalue localization over a refinement schedule.

    rows: one per level, (level, h, cr, cr_lower, p1, p2); cr_lower is nan
    when the lower-bound theorem does not apply (non-Dirichlet markers or a
    non-unit weight). extrapolated maps each column name to an
    Extrapolation; enclosure is [max lower bound, min conforming value];
    cr_residuals records the algebraic pencil residual behind each bound.
    """

    COLUMNS = ("cr", "cr_lower", "p1", "p2")

    def __init__(self, domain, index, rows, extrapolated, cr_residuals, certified):
        self.domain = getattr(domain, "name", str(domain))
        self.index = index
        self.rows = rows
        self.extrapolated = extrapolated
        self.cr_residuals = cr_residuals
        self.certified = certified
        lowers = [r[3] for r in rows]
        uppers = [x for r in rows for x in (r[4], r[5])]
        self.enclosure = (max(lowers) if certified else float("nan"), min(uppers))

    @property
    def best(self):
        return self.extrapolated["p2"].limit

    def to_csv(self):
        lines = [f"# bracket report: domain={self.domain} index={self.index} "
                 f"certified={str(self.certified).lower()}",
                 f"# enclosure,{self.enclosure[0]!r},{self.enclosure[1]!r}"]
        lines += [f"# cr_pencil_residual,level_{lvl},{res:.3e}"
                  for (lvl, *_), res in zip(self.rows, self.cr_residuals)]
        lines.append("level,h,cr,cr_lower,p1,p2")
        for lvl, h, cr, lo, p1, p2 in self.rows:
            lines.append(f"{lvl},{h!r},{cr!r},{lo!r},{p1!r},{p2!r}")
        for col in self.COLUMNS:
            ex = self.extrapolated[col]
            lines.append(f"extrapolated,{col},{ex.limit!r},{ex.rate!r}")
        return "\n".join(lines) + "\n"

    def __repr__(self):
        lo, hi = self.enclosure
        return (f"BracketReport({self.domain!r}, index={self.index}, "
                f"levels={len(self.rows)}, enclosure=[{lo:.6g}, {hi:.6g}])")


def bracket_report(domain, index, levels):
    """Solve P1, P2, and edge-midpoint problems per level and bracket.

    The certified lower-bound column requires all-Dirichlet markers and the
    unit weight; any other volume problem still gets the observational
    columns. Levels must be consecutive so the mesh size halves.
    """
    levels = [int(l) for l in levels]
    if len(levels) < 3 or any(b - a != 1 for a, b in zip(levels, levels[1:])):
        raise ValueError("need at least 3 consecutive refinement levels")
    if index < 1:
        raise ValueError("eigenvalue index is 1-based")
    bc = _infer_bc(domain)
    certified = bc == "dirichlet" and domain.weight == "unit"
    rows, residuals = [], []
    for lvl in levels:
        mesh = build_mesh(domain, lvl)
        per_kind = {}
        for kind in ("CR", "P1", "P2"):
            spec = EigenProblemSpec(bc, index, kind=kind, level=lvl,
                                    weight=domain.weight)
            per_kind[kind] = solve_fem(domain, spec, mesh=mesh)
        cr = float(per_kind["CR"].eigenvalues[index - 1])
        lo = cr_lower_bound(cr, mesh.h) if certified and cr > 0 else float("nan")
        rows.append((lvl, float(mesh.h), cr, lo,
                     float(per_kind["P1"].eigenvalues[index - 1]),
                     float(per_kind["P2"].eigenvalues[index - 1])))
        residuals.append(_pencil_residual(per_kind["CR"], index))
    hs = [r[1] for r in rows]
    cols = {"cr": [r[2] for r in rows], "cr_lower": [r[3] for r in rows],
            "p1": [r[4] for r in rows], "p2": [r[5] for r in rows]}
    extrapolated = {}
    for name, vals in cols.items():
        if any(np.isnan(vals)):
            extrapolated[name] = Extrapolation(float("nan"), float("nan"), False)
        else:
            extrapolated[name] = richardson_extrapolate(vals, hs)
    return BracketReport(domain, index, rows, extrapolated, residuals, certified)
