"""Draw nodal lines of a few drum eigenfunctions into an SVG.

Solves the first handful of Dirichlet modes on the gww-a polygon and
renders where each eigenfunction changes sign. The zero sets are what
make the isospectrality story tactile: the drums sound identical while
their nodal portraits look nothing alike.

Writes modes-gww-a.svg next to this script.
"""

import os

from lapspec import cli, fem, geometry


def main():
    dom = geometry.load_domain("gww-a")
    spec = fem.solve_fem(dom, fem.EigenProblemSpec("dirichlet", 6,
                                                   kind="P2", level=4))
    print("First Dirichlet eigenvalues of gww-a (unit edges):")
    for k, lam in enumerate(spec.eigenvalues, start=1):
        print(f"  lambda_{k} = {lam:10.4f}")

    svg = cli.render_modes_svg(spec, [1, 2, 3, 4, 5, 6])
    out = os.path.join(os.path.dirname(os.path.abspath(__file__)),
                       "modes-gww-a.svg")
    with open(out, "w", encoding="utf-8") as fh:
        fh.write(svg)
    print(f"\nwrote {out} ({len(svg)} bytes); open it in a browser.")


if __name__ == "__main__":
    main()
