"""Uniform tensor-product grids and the zero-flux (Neumann) stiffness matrix.

Domains are products of intervals (0, L_a).  Cells are uniform boxes centered
at midpoints, indexed flat with the *first axis fastest*: the cell with
multi-index (i1, ..., iN) has flat index

    i1 + shape[0] * (i2 + shape[1] * i3).

Lines of cells along the first axis are therefore contiguous ranges of flat
indices, which keeps first-axis rearrangements cache-friendly and lets 2D
field files open directly as heatmap matrices (one row per line).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import scipy.sparse as sp

from .errors import InvalidSpec, LengthMismatch

#: domain kind -> dimension
DOMAIN_KINDS = {"interval": 1, "rectangle": 2, "box": 3}


@dataclass(frozen=True, eq=False)
class Grid:
    """Uniform cell-centered grid on a box domain.

    Attributes
    ----------
    dim : int
        Spatial dimension, 1 to 3.
    extents : tuple of float
        Side length per axis; the domain is the product of (0, extents[a]).
    shape : tuple of int
        Cell count per axis.
    spacing : tuple of float
        Cell width per axis, extents[a] / shape[a].
    cell_measures : ndarray
        Lebesgue measure of each cell (all equal on uniform grids).
    axis1_lines : ndarray, shape (n_lines, shape[0])
        Flat indices of each full line of cells along the first axis,
        ordered by increasing first coordinate.
    """

    dim: int
    extents: tuple
    shape: tuple
    spacing: tuple
    cell_measures: np.ndarray
    axis1_lines: np.ndarray

    @property
    def n_cells(self) -> int:
        return int(self.cell_measures.size)

    @property
    def volume(self) -> float:
        """Measure of the whole domain."""
        return float(np.prod(self.extents))

    def is_uniform(self, rtol: float = 1e-12) -> bool:
        w = self.cell_measures
        return bool(np.all(np.abs(w - w[0]) <= rtol * abs(w[0])))

    def flat_index(self, multi_index) -> int:
        """Layout map: (i1, ..., iN) -> flat index, first axis fastest."""
        multi_index = tuple(multi_index)
        if len(multi_index) != self.dim:
            raise InvalidSpec(
                f"multi-index {multi_index} does not match dim {self.dim}")
        flat = 0
        for axis in range(self.dim - 1, -1, -1):
            i = multi_index[axis]
            if not 0 <= i < self.shape[axis]:
                raise InvalidSpec(
                    f"index {i} out of range on axis {axis}")
            flat = flat * self.shape[axis] + i
        return flat

    def multi_index(self, flat: int) -> tuple:
        """Inverse layout map: flat index -> (i1, ..., iN)."""
        if not 0 <= flat < self.n_cells:
            raise InvalidSpec(f"flat index {flat} out of range")
        out = []
        for axis in range(self.dim):
            out.append(flat % self.shape[axis])
            flat //= self.shape[axis]
        return tuple(out)

    def cell_centers(self) -> np.ndarray:
        """Midpoints of all cells as an (n_cells, dim) array in flat order."""
        idx = np.arange(self.n_cells)
        centers = np.empty((self.n_cells, self.dim))
        for a in range(self.dim):
            ia = idx % self.shape[a]
            idx = idx // self.shape[a]
            centers[:, a] = (ia + 0.5) * self.spacing[a]
        return centers


@dataclass(frozen=True, eq=False)
class StiffnessMatrix:
    """Sparse symmetric stiffness matrix of the zero-flux Laplacian.

    ``f @ entries @ f`` discretizes the Dirichlet energy of the piecewise
    field f.  Constants lie in the kernel (the discrete Neumann condition)
    and all row sums vanish.
    """

    size: int
    entries: sp.csr_matrix


def build_grid(kind: str, extents, shape) -> Grid:
    """Build a uniform grid on an interval, rectangle or box domain.

    Parameters
    ----------
    kind : {"interval", "rectangle", "box"}
        Domain family; must match the number of axes given.
    extents : sequence of float
        Positive side length per axis.
    shape : sequence of int
        Cells per axis, each at least 2.
    """
    if kind not in DOMAIN_KINDS:
        raise InvalidSpec(f"unknown domain kind {kind!r}")
    dim = DOMAIN_KINDS[kind]
    extents = tuple(float(L) for L in np.atleast_1d(extents))
    shape = tuple(int(n) for n in np.atleast_1d(shape))
    if len(extents) != dim or len(shape) != dim:
        raise InvalidSpec(
            f"{kind} domain needs {dim} extents and {dim} cell counts, "
            f"got {len(extents)} and {len(shape)}"
        )
    if any(L <= 0 for L in extents):
        raise InvalidSpec(f"extents must be positive, got {extents}")
    if any(n < 2 for n in shape):
        raise InvalidSpec(f"cell counts must be at least 2, got {shape}")

    spacing = tuple(L / n for L, n in zip(extents, shape))
    n_cells = int(np.prod(shape))
    w = float(np.prod(spacing))
    cell_measures = np.full(n_cells, w)
    cell_measures.setflags(write=False)
    # first axis fastest: each line is a contiguous run of shape[0] indices
    axis1_lines = np.arange(n_cells).reshape(-1, shape[0])
    axis1_lines.setflags(write=False)
    return Grid(dim, extents, shape, spacing, cell_measures, axis1_lines)


def _forward_difference(n: int) -> sp.csr_matrix:
    """(n-1) x n interior-face forward difference; no ghost flux at the ends."""
    return sp.diags([-np.ones(n - 1), np.ones(n - 1)], [0, 1],
                    shape=(n - 1, n), format="csr")


def axis_stiffness(grid: Grid, axis: int) -> sp.csr_matrix:
    """Stiffness contribution of one axis: D^T diag(face_weight) D.

    D is the forward difference across interior faces orthogonal to `axis`
    and face_weight = (product of transverse spacings) / (axis spacing).
    """
    if not 0 <= axis < grid.dim:
        raise InvalidSpec(f"axis {axis} out of range for dim {grid.dim}")
    mats = []
    for a in range(grid.dim):
        if a == axis:
            mats.append(_forward_difference(grid.shape[a]))
        else:
            mats.append(sp.identity(grid.shape[a], format="csr"))
    # flat index has axis 0 fastest -> kron order is reversed
    diff = mats[grid.dim - 1]
    for a in range(grid.dim - 2, -1, -1):
        diff = sp.kron(diff, mats[a], format="csr")
    face_weight = float(np.prod(grid.spacing)) / grid.spacing[axis] ** 2
    return (face_weight * (diff.T @ diff)).tocsr()


@lru_cache(maxsize=32)
def assemble_stiffness(grid: Grid) -> StiffnessMatrix:
    """Assemble the Neumann stiffness matrix of the grid.

    Finite-volume / tensor-difference assembly summed over axes.  The
    result is symmetric with zero row sums and positive semidefinite;
    f^T K f = 0 exactly when f is constant.
    """
    K = axis_stiffness(grid, 0)
    for a in range(1, grid.dim):
        K = K + axis_stiffness(grid, a)
    K = ((K + K.T) * 0.5).tocsr()  # enforce exact symmetry
    return StiffnessMatrix(size=grid.n_cells, entries=K)


def as_field(grid: Grid, f) -> np.ndarray:
    """Validate and return f as a float cell field on the grid."""
    f = np.asarray(f, dtype=float)
    if f.shape != (grid.n_cells,):
        raise LengthMismatch(
            f"field has shape {f.shape}, grid has {grid.n_cells} cells")
    return f


def integrate(grid: Grid, f) -> float:
    """Midpoint-rule integral of a cell field: sum of measure * value."""
    f = as_field(grid, f)
    return float(grid.cell_measures @ f)
