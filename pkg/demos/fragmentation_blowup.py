"""Fragmenting the habitat makes lambda1 blow up.

There is no worst arrangement: tiling the same resource profile in ever
finer stripes drives the weight weakly-* toward its (negative) mean, so
mu1 tends to zero and lambda1 = 1/mu1 grows without bound.  The ladder
below shows the roughly quadratic growth in the stripe count.
"""

import numpy as np

from eigenweight import (
    build_grid,
    decreasing_rearrangement,
    oscillating_arrangement,
    principal_eigenpair,
    weight_field,
)


def main():
    grid = build_grid("interval", [1.0], [256])
    budget = np.where(np.arange(256) < 64, 1.0, -2.0)
    cls = decreasing_rearrangement(budget, grid)

    print(f"{'stripes':>8} {'lambda1':>12} {'growth':>8}")
    prev = None
    for k in (1, 2, 4, 8, 16, 32):
        field = oscillating_arrangement(cls, grid, k)
        lam = principal_eigenpair(weight_field(grid, field)).lambda1
        growth = "" if prev is None else f"{lam / prev:>8.2f}"
        print(f"{k:>8} {lam:>12.2f} {growth}")
        prev = lam
    print()
    print("stripe pattern at k=8: ",
          "".join("+" if v > 0 else "-"
                  for v in oscillating_arrangement(cls, grid, 8)[::4]))


if __name__ == "__main__":
    main()
