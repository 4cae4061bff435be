"""Rearrangement classes, majorization and the comonotone extremizer.

On a uniform grid a rearrangement class is just the multiset of cell
values, so its decreasing rearrangement is a value/measure profile and
averaging any two members produces a field the whole class majorizes.
The comonotone arrangement - class values dealt along the ranking of a
reference field - maximizes the weighted integral, which is the discrete
Hardy-Littlewood inequality in action.
"""

import numpy as np

from eigenweight import (
    build_grid,
    check_majorization,
    comonotone_arrangement,
    decreasing_rearrangement,
    distribution_function,
    integrate,
)


def main():
    grid = build_grid("interval", [1.0], [8])
    rng = np.random.default_rng(3)
    m0 = np.array([2.0, -1.0, 0.5, -1.0, 2.0, -3.0, 0.5, -1.0])
    cls = decreasing_rearrangement(m0, grid)

    print("field:", m0)
    print("profile (value, measure):")
    for value, measure in cls.profile:
        print(f"  {value:>5.1f}  {measure:.3f}")
    print("distribution {m > 0}:",
          distribution_function(m0, grid, 0.0))
    print()

    shuffled = rng.permutation(m0)
    averaged = 0.5 * m0 + 0.5 * shuffled
    rep = check_majorization(averaged, m0, grid)
    print("average of two members is majorized by the class:",
          rep.holds, f"(worst prefix margin {rep.worst_margin:.2e})")
    rep_back = check_majorization(m0, averaged, grid)
    print("but not conversely (averaging loses extremality):",
          not rep_back.holds)
    print()

    u = np.sin(np.pi * grid.cell_centers()[:, 0])
    best = comonotone_arrangement(cls, u, grid)
    print("reference u:     ", np.round(u, 2))
    print("comonotone m:    ", best)
    print("integral m*u:     best={:.4f}, original={:.4f}, shuffled={:.4f}"
          .format(integrate(grid, best * u), integrate(grid, m0 * u),
                  integrate(grid, shuffled * u)))


if __name__ == "__main__":
    main()
