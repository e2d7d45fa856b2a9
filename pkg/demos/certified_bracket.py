"""Pinning an eigenvalue from both sides.

Two independent ways to localize the square's first Dirichlet
eigenvalue 2 pi^2 = 19.7392...:

  1. a mesh-based bracket: conforming elements approach from above,
     the shifted nonconforming value is a lower bound, so each level
     hands us an interval;
  2. a basis-based interval: the method of particular solutions finds
     the eigenvalue to many digits and the boundary residual of the
     trial function converts into an a-posteriori interval around it.

Both intervals are floating-point evaluations of the bound formulas,
not interval arithmetic; they agree with each other anyway.
"""

import numpy as np

from lapspec import bounds, geometry, mps

TARGET = 2 * np.pi**2


def main():
    square = geometry.load_domain("unit-square")

    print("Mesh route: five refinement levels on the unit square.")
    report = bounds.bracket_report(square, 1, [1, 2, 3, 4, 5])
    print("  level    h        lower bound   P1 (upper)")
    for lvl, h, _, lower, p1, _ in report.rows:
        print(f"  {lvl:3d}   {h:8.5f}   {lower:11.6f}   {p1:11.6f}")
    lo, hi = report.enclosure
    print(f"  enclosure: [{lo:.6f}, {hi:.6f}]  width {hi - lo:.4f}")
    print(f"  extrapolated P2 value: {report.best:.10f}")
    print(f"  target 2 pi^2        : {TARGET:.10f}\n")

    print("Basis route: 12 Fourier-Bessel functions per corner fan.")
    basis = mps.corner_basis(square, 12)
    lam, coeff = mps.refine_minimum(square, basis, (TARGET - 1.5, TARGET + 1.5))
    enc = mps.fhm_enclosure(square, lam, coeff, basis)
    print(f"  located lambda_h = {lam:.12f}")
    print(f"  interval [{enc.lower:.12f}, {enc.upper:.12f}]")
    print(f"  radius {enc.radius:.2e} from boundary residual {enc.epsilon:.2e}")
    inside = "inside" if TARGET in enc else "OUTSIDE"
    print(f"  2 pi^2 is {inside} the interval, "
          f"off center by {abs(lam - TARGET):.2e}")


if __name__ == "__main__":
    main()
