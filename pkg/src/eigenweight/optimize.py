"""Minimization of lambda1 over a rearrangement class.

Minimizing lambda1 is maximizing mu1 = 1/lambda1, which is convex with
directional derivative u_m^2; the subgradient inequality

    mu1(m') >= mu1(m) + sum_i w_i (m'_i - m_i) u_i^2

makes the fixed-point sweep  m  ->  comonotone_arrangement(class, u_m)
monotone in mu1: rearranging the class comonotone with the current
eigenfunction can only increase mu1.  Fixed points are exactly the
arrangements ordered like their own eigenfunction, the structure every
minimizer has.  Discrete fixed points need not be unique, so the driver
supports random restarts from seeded permutations.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NotAdmissibleClass, IndivisibleStripes
from .grid import Grid, as_field
from .rearrange import RearrangementClass, comonotone_arrangement, _require_uniform
from .spectral import EigenPair, principal_eigenpair, weight_field


@dataclass(frozen=True, eq=False)
class MonotonicityReport:
    """Per-line monotonicity scan along the first axis.

    ``classification`` is monotone_decreasing, monotone_increasing or
    not_monotone (mixed directions count as not monotone; an all-constant
    field reports monotone_decreasing by convention).  ``per_line`` holds
    one of decreasing/increasing/constant/none per first-axis line.
    """

    classification: str
    per_line: tuple


@dataclass(frozen=True, eq=False)
class OptimizationResult:
    """Outcome of the fixed-point minimization.

    ``trace`` lists (iteration, mu1, lambda1, changed_cells) for the best
    restart; mu1 is nondecreasing along it.  ``comonotone_violations``
    counts cell pairs ordered against the final eigenfunction (zero at a
    true fixed point) and ``monotone_x1`` summarizes the final weight's
    monotonicity along the first axis.
    """

    final_m: np.ndarray
    final_pair: EigenPair
    trace: tuple
    converged: bool
    restarts_used: int
    comonotone_violations: int
    monotone_x1: MonotonicityReport


def check_monotone_x1(m, grid: Grid) -> MonotonicityReport:
    """Classify a field's monotonicity along every first-axis line."""
    m = as_field(grid, m)
    labels = []
    for line in grid.axis1_lines:
        diffs = np.diff(m[line])
        noninc = bool(np.all(diffs <= 0))
        nondec = bool(np.all(diffs >= 0))
        if noninc and nondec:
            labels.append("constant")
        elif noninc:
            labels.append("decreasing")
        elif nondec:
            labels.append("increasing")
        else:
            labels.append("none")
    per_line = tuple(labels)
    if all(lab in ("decreasing", "constant") for lab in per_line):
        classification = "monotone_decreasing"
    elif all(lab in ("increasing", "constant") for lab in per_line):
        classification = "monotone_increasing"
    else:
        classification = "not_monotone"
    return MonotonicityReport(classification=classification, per_line=per_line)


def count_comonotone_violations(m, u, grid: Grid) -> int:
    """Pairs (i, j) with u_i > u_j but m_i < m_j.

    Zero exactly when m is an increasing function of u up to ties, the
    fixed-point characterization of minimizers.
    """
    m = as_field(grid, m)
    u = as_field(grid, u)
    order = np.argsort(-u, kind="stable")
    u_sorted = u[order]
    m_sorted = m[order]
    total = 0
    # scan blocks of equal u; earlier blocks have strictly larger u
    starts = np.flatnonzero(np.r_[True, u_sorted[1:] != u_sorted[:-1]])
    ends = np.r_[starts[1:], u_sorted.size]
    for s, e in zip(starts, ends):
        rest = m_sorted[e:]
        if rest.size == 0:
            break
        block = m_sorted[s:e]
        total += int(np.sum(block[:, None] < rest[None, :]))
    return total


def _start_fields(cls: RearrangementClass, grid: Grid, restarts: int,
                  seed) -> list:
    """Restart 0 is the canonical arrangement (sorted values in flat cell
    order); later restarts are seeded permutations from a splittable
    generator."""
    canonical = cls.cell_values(grid)
    starts = [canonical]
    if restarts > 1:
        children = np.random.SeedSequence(seed).spawn(restarts - 1)
        for child in children:
            rng = np.random.default_rng(child)
            starts.append(rng.permutation(canonical))
    return starts


def minimize_lambda1(cls: RearrangementClass, grid: Grid,
                     max_iters: int = 200, tol: float = 1e-12,
                     restarts: int = 1, seed: int = 0,
                     solver: str = "dense") -> OptimizationResult:
    """Minimize lambda1 over the rearrangement class by fixed-point sweeps.

    Each sweep replaces the weight by the class arrangement comonotone
    with the current eigenfunction; the subgradient inequality makes mu1
    nondecreasing, and the run stops when the arrangement repeats itself
    exactly.  Across restarts the iterate with the largest mu1 (smallest
    lambda1) wins, ties resolved toward the earlier restart.  Hitting
    ``max_iters`` is reported through ``converged=False``, not an error.
    """
    _require_uniform(grid)
    if not cls.is_admissible:
        raise NotAdmissibleClass(
            "class needs a positive value and negative total integral")
    if restarts < 1:
        raise ValueError("restarts must be at least 1")

    best = None
    for m0 in _start_fields(cls, grid, restarts, seed):
        m = m0
        pair = principal_eigenpair(weight_field(grid, m), solver=solver,
                                   tol=tol)
        trace = [(0, pair.mu1, pair.lambda1, 0)]
        converged = False
        for it in range(1, max_iters + 1):
            m_next = comonotone_arrangement(cls, pair.u, grid)
            changed = int(np.count_nonzero(m_next != m))
            if changed == 0:
                converged = True
                trace.append((it, pair.mu1, pair.lambda1, 0))
                break
            m = m_next
            pair = principal_eigenpair(weight_field(grid, m), solver=solver,
                                       tol=tol)
            trace.append((it, pair.mu1, pair.lambda1, changed))
        candidate = (pair.mu1, m, pair, tuple(trace), converged)
        if best is None or candidate[0] > best[0]:
            best = candidate

    _, m, pair, trace, converged = best
    return OptimizationResult(
        final_m=m,
        final_pair=pair,
        trace=trace,
        converged=converged,
        restarts_used=restarts,
        comonotone_violations=count_comonotone_violations(m, pair.u, grid),
        monotone_x1=check_monotone_x1(m, grid),
    )


def oscillating_arrangement(cls: RearrangementClass, grid: Grid,
                            k: int) -> np.ndarray:
    """Tile the class profile periodically along the first axis.

    Splits the first axis into k stripes of equal width and spreads each
    value's cells across stripes as evenly as possible (nearest stripe to
    the ideal fractional position, earliest stripe on ties); within a
    stripe values are laid out sorted descending in flat order.  k = 1
    reproduces the canonical arrangement; as k grows the field converges
    weakly-* to the constant mean, driving mu1 to zero and lambda1 to
    infinity.
    """
    _require_uniform(grid)
    if k < 1 or grid.shape[0] % k != 0:
        raise IndivisibleStripes(
            f"stripe count {k} does not divide first-axis cells "
            f"{grid.shape[0]}")
    n1 = grid.shape[0]
    period = n1 // k
    capacity = grid.n_cells // k
    remaining = np.full(k, capacity)
    stripe_values: list = [[] for _ in range(k)]
    for value, count in zip(cls.values, cls.cell_counts(grid)):
        for j in range(count):
            x = (j + 0.5) * k / count - 0.5  # ideal stripe index
            candidates = sorted(range(k), key=lambda s: (abs(s - x), s))
            for s in candidates:
                if remaining[s] > 0:
                    stripe_values[s].append(value)
                    remaining[s] -= 1
                    break

    out = np.empty(grid.n_cells)
    i1 = np.arange(grid.n_cells) % n1
    for s in range(k):
        cells = np.flatnonzero(i1 // period == s)
        out[cells] = np.sort(stripe_values[s])[::-1]
    return out
