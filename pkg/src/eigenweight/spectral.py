"""Eigenvalue machinery for -div(grad u) = lambda * m * u with zero-flux boundary.

The weight m changes sign.  When the weight integrates to a negative value
and is positive somewhere, the problem has a smallest positive eigenvalue
lambda1 with a one-signed eigenfunction; its reciprocal mu1 = 1/lambda1 is
the largest positive eigenvalue of the compact solution operator acting on
the mean-zero-against-m subspace

    V_m = { f : sum_i w_i m_i f_i = 0 },

equipped with the stiffness (Dirichlet) inner product <f, g> = f^T K g.

The dense path restricts the pencil (W diag(m), K) to V_m through an
orthonormal basis and is the oracle of record up to ``DENSE_CELL_LIMIT``
cells.  The iterative path of record is Lanczos on the solution operator
in the stiffness inner product, which resolves the largest positive
eigenvalue even when the negative side dominates in magnitude and the
positive side clusters; a shifted power method is kept as a secondary
path for well-separated spectra.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import scipy.linalg
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .errors import (
    ConstantField,
    IterationLimit,
    NoPositivePart,
    NotAdmissible,
    SingularSystem,
    TooLarge,
    ZeroWeightIntegral,
)
from .grid import Grid, as_field, assemble_stiffness, integrate

#: above this cell count the dense pencil is refused (TooLarge)
DENSE_CELL_LIMIT = 6000

#: cap on operator applications for the iterative eigensolvers
POWER_ITERATION_CAP = 10_000

#: Lanczos basis size between restarts
_LANCZOS_BASIS = 250


@dataclass(frozen=True, eq=False)
class WeightField:
    """A cell-wise weight with cached admissibility flags.

    The flags are recomputed from the values at construction and never
    user-set: ``is_admissible`` means the integral is negative while the
    positive set has positive measure, the regime with a positive
    principal eigenvalue.
    """

    grid: Grid
    values: np.ndarray
    integral: float
    has_positive_part: bool
    is_admissible: bool


def weight_field(grid: Grid, values) -> WeightField:
    """Wrap per-cell weight values, caching integral and admissibility."""
    values = as_field(grid, values).copy()
    values.setflags(write=False)
    total = integrate(grid, values)
    has_pos = bool(np.any(values > 0))
    return WeightField(
        grid=grid,
        values=values,
        integral=total,
        has_positive_part=has_pos,
        is_admissible=(total < 0) and has_pos,
    )


@dataclass(frozen=True, eq=False)
class EigenPair:
    """Principal eigenpair: mu1 = 1/lambda1 and the positive eigenfunction.

    u is normalized by u^T K u = 1, so m-weighted mass of u^2 equals mu1.
    ``residual`` is the relative norm of K u - lambda1 W (m*u) after
    removing its component along W m (the Lagrange direction).
    """

    mu1: float
    lambda1: float
    u: np.ndarray
    residual: float


@dataclass(frozen=True, eq=False)
class SignedSpectrum:
    """Extreme eigenvalues of the weighted pencil on V_m.

    ``positive`` is sorted descending (largest first); ``negative`` is
    sorted ascending, most negative first.  ``bound`` dominates every
    eigenvalue magnitude; ``basis_dim`` is the dimension of the discrete
    V_m, one less than the cell count.
    """

    positive: np.ndarray
    negative: np.ndarray
    basis_dim: int
    bound: float


def _weighted_values(m: WeightField) -> np.ndarray:
    """w_i * m_i, the vector defining the V_m constraint."""
    return m.grid.cell_measures * m.values


def project_mean_zero(m: WeightField, f) -> np.ndarray:
    """Remove the m-weighted mean: f - (int m f / int m).

    Maps any field onto V_m; constants map to zero and fields already in
    V_m are fixed.  Raises ZeroWeightIntegral when the weight integrates
    to zero.
    """
    if m.integral == 0.0:
        raise ZeroWeightIntegral("weight integrates to zero")
    f = as_field(m.grid, f)
    q = _weighted_values(m)
    return f - (q @ f) / m.integral


@lru_cache(maxsize=64)
def _saddle_solver(m: WeightField):
    """Saddle matrix [[K, Wm], [Wm^T, 0]] and its LU, shared across solves.

    Cached per weight object; concurrent use with distinct weights does
    not serialize beyond the cache dictionary access.
    """
    K = assemble_stiffness(m.grid).entries
    q = _weighted_values(m)
    n = m.grid.n_cells
    saddle = sp.bmat(
        [[K, q.reshape(n, 1)], [q.reshape(1, n), None]], format="csc")
    try:
        return saddle, spla.splu(saddle)
    except RuntimeError as exc:  # pragma: no cover - connected grids only
        raise SingularSystem(f"saddle factorization failed: {exc}") from exc


def solution_operator(m: WeightField, f) -> np.ndarray:
    """Apply the constrained solution operator of the zero-flux problem.

    For f in V_m, returns the unique u in V_m with
    u^T K phi = sum_i w_i m_i f_i phi_i for every phi in V_m, computed
    from the saddle system with the constraint vector W m.  One step of
    iterative refinement keeps the backward error near roundoff.
    """
    if m.integral == 0.0:
        raise ZeroWeightIntegral("weight integrates to zero")
    f = as_field(m.grid, f)
    n = m.grid.n_cells
    rhs = np.empty(n + 1)
    rhs[:n] = m.grid.cell_measures * m.values * f
    rhs[n] = 0.0
    saddle, lu = _saddle_solver(m)
    x = lu.solve(rhs)
    x += lu.solve(rhs - saddle @ x)
    # clean residual drift off the constraint
    return project_mean_zero(m, x[:n])


def _vm_basis(m: WeightField) -> np.ndarray:
    """Orthonormal basis of {f : (Wm)^T f = 0} from a Householder reflector.

    Deterministic: columns 2..n of the reflector that maps Wm onto the
    first coordinate axis.
    """
    q = _weighted_values(m)
    n = q.size
    norm = np.linalg.norm(q)
    if norm == 0.0:
        raise ZeroWeightIntegral("weight is identically zero")
    v = q.copy()
    v[0] += norm if q[0] >= 0 else -norm
    vtv = v @ v
    B = (-2.0 / vtv) * np.outer(v, v[1:])
    B[1:, :] += np.eye(n - 1)
    return B


def _dense_pencil(m: WeightField):
    """All eigenvalues/vectors of the pencil (W diag(m), K) restricted to V_m.

    Returns (vals ascending, vecs in cell coordinates).
    """
    n = m.grid.n_cells
    if n > DENSE_CELL_LIMIT:
        raise TooLarge(
            f"{n} cells exceeds the dense limit of {DENSE_CELL_LIMIT}")
    K = assemble_stiffness(m.grid).entries
    B = _vm_basis(m)
    d = _weighted_values(m)
    A = B.T @ (d[:, None] * B)
    S = B.T @ (K @ B)
    A = 0.5 * (A + A.T)
    S = 0.5 * (S + S.T)
    vals, vecs = scipy.linalg.eigh(A, S)
    return vals, B @ vecs


def _finalize_eigenpair(m: WeightField, mu1: float, u: np.ndarray) -> EigenPair:
    """Sign-fix, normalize u^T K u = 1 and attach the V_m residual."""
    K = assemble_stiffness(m.grid).entries
    if u[np.argmax(np.abs(u))] < 0:
        u = -u
    u = u / np.sqrt(u @ (K @ u))
    # one-signed up to solver accuracy: rough weights can graze zero, while
    # a genuine sign-changing mode has a negative part of order max(u)
    if np.min(u) < -1e-6 * np.max(u):
        raise SingularSystem(
            "principal eigenfunction is not one-signed; solver failure")
    lam = 1.0 / mu1
    r = K @ u - lam * (_weighted_values(m) * u)
    q = _weighted_values(m)
    r -= q * (q @ r) / (q @ q)
    residual = float(np.linalg.norm(r) / max(np.linalg.norm(K @ u), 1e-300))
    return EigenPair(mu1=float(mu1), lambda1=float(lam), u=u,
                     residual=residual)


def _check_admissible(m: WeightField) -> None:
    if m.integral >= 0:
        raise NotAdmissible(
            f"weight integral {m.integral:g} is nonnegative")
    if not m.has_positive_part:
        raise NoPositivePart("weight is nonpositive everywhere")


def _power_start(m: WeightField) -> np.ndarray:
    """Deterministic start vector in V_m, generic against grid symmetries.

    A coordinate-based start can be exactly orthogonal to the principal
    eigenspace of a symmetric weight, so use a fixed-seed random vector;
    the same inputs always produce the same start.
    """
    rng = np.random.default_rng(0x5EED)
    f = project_mean_zero(m, rng.standard_normal(m.grid.n_cells))
    norm = np.linalg.norm(f)
    if norm == 0.0:  # pragma: no cover - random vectors are nonconstant
        raise SingularSystem("degenerate start vector")
    return f / norm


def _lanczos_iteration(m: WeightField, tol: float) -> EigenPair:
    """Lanczos on the solution operator in the stiffness inner product.

    The operator is self-adjoint in <f, g> = f^T K g on V_m, so a Lanczos
    recurrence with K-inner products builds a tridiagonal whose largest
    Ritz value converges to mu1 from below; no spectral shift is needed
    because Lanczos resolves both ends of the spectrum at once.  Full
    reorthogonalization keeps the basis clean; the basis is restarted
    from the current Ritz vector when it grows past ``_LANCZOS_BASIS``.
    """
    K = assemble_stiffness(m.grid).entries
    d = _weighted_values(m)
    n = m.grid.n_cells
    max_basis = min(_LANCZOS_BASIS, n - 1)

    v = _power_start(m)
    z = K @ v
    v = v / np.sqrt(v @ z)
    applies = 0
    theta = None
    while applies < POWER_ITERATION_CAP:
        V = [v]
        Z = [K @ v]
        alphas: list = []
        betas: list = []
        while len(V) <= max_basis and applies < POWER_ITERATION_CAP:
            w = project_mean_zero(m, solution_operator(m, V[-1]))
            applies += 1
            alphas.append(float(w @ Z[-1]))
            # full reorthogonalization, two passes
            for _ in range(2):
                for vb, zb in zip(V, Z):
                    w = w - (w @ zb) * vb
            zw = K @ w
            beta = float(np.sqrt(max(w @ zw, 0.0)))
            evals, evecs = scipy.linalg.eigh_tridiagonal(
                np.array(alphas), np.array(betas))
            theta = float(evals[-1])
            scale = max(abs(evals[0]), abs(evals[-1]), 1e-300)
            residual = beta * abs(evecs[-1, -1])
            if residual <= tol * scale or beta <= 1e-14 * scale:
                u = np.column_stack(V) @ evecs[:, -1]
                if theta <= 0:
                    raise SingularSystem(
                        "iterative solver converged to a nonpositive "
                        "eigenvalue")
                return _finalize_eigenpair(m, theta, u)
            betas.append(beta)
            V.append(w / beta)
            Z.append(zw / beta)
        # restart from the best Ritz vector
        evals, evecs = scipy.linalg.eigh_tridiagonal(
            np.array(alphas), np.array(betas[:-1]))
        v = np.column_stack(V[:-1]) @ evecs[:, -1]
        v = project_mean_zero(m, v)
        z = K @ v
        v = v / np.sqrt(v @ z)
    raise IterationLimit(
        f"Lanczos did not converge within {POWER_ITERATION_CAP} operator "
        f"applications")


def _power_iteration(m: WeightField, tol: float) -> EigenPair:
    """Shifted power iteration on the solution operator.

    The largest positive eigenvalue mu1 need not dominate in magnitude,
    so the iteration runs on G + sigma*I with sigma above the magnitude
    of the most negative eigenvalue, estimated from a short unshifted
    power run.  Converges slowly when the positive spectrum clusters;
    the Lanczos path is preferred.
    """
    K = assemble_stiffness(m.grid).entries
    d = _weighted_values(m)

    def k_norm(g):
        return float(np.sqrt(max(g @ (K @ g), 0.0)))

    # short run to estimate the dominant magnitude of the unshifted operator
    f = _power_start(m)
    f /= k_norm(f)
    rho = 0.0
    for _ in range(50):
        g = solution_operator(m, f)
        rho = float(f @ (d * f))
        norm = k_norm(g)
        if norm == 0.0:
            break
        f = g / norm
    sigma = 1.1 * abs(rho) + 1e-12

    f = _power_start(m)
    f /= k_norm(f)
    mu = float(f @ (d * f))
    for it in range(POWER_ITERATION_CAP):
        g = solution_operator(m, f) + sigma * f
        g = project_mean_zero(m, g)
        norm = k_norm(g)
        if norm == 0.0:
            raise SingularSystem("power iteration collapsed to zero")
        f = g / norm
        mu_new = float(f @ (d * f))
        if abs(mu_new - mu) < tol * max(1.0, abs(mu_new)):
            mu = mu_new
            break
        mu = mu_new
    else:
        raise IterationLimit(
            f"power iteration did not converge in {POWER_ITERATION_CAP} steps")
    if mu <= 0:
        raise SingularSystem(
            "power iteration converged to a nonpositive eigenvalue")
    return _finalize_eigenpair(m, mu, f)


def principal_eigenpair(m: WeightField, solver: str = "dense",
                        tol: float = 1e-12) -> EigenPair:
    """Largest positive eigenvalue mu1 of the weighted pencil and its pair.

    Requires an admissible weight (negative integral, positive part of
    positive measure).  ``solver`` selects the dense V_m-restricted pencil
    (the oracle path, refused above ``DENSE_CELL_LIMIT`` cells), the
    Lanczos iteration ("iterative") or the shifted power method ("power",
    adequate only for well-separated spectra); all paths return the
    eigenfunction normalized by u^T K u = 1 with the sign fixed positive.
    """
    _check_admissible(m)
    if solver == "dense":
        vals, vecs = _dense_pencil(m)
        mu1 = float(vals[-1])
        if mu1 <= 0:  # pragma: no cover - admissible weights have mu1 > 0
            raise NoPositivePart("pencil has no positive eigenvalue")
        return _finalize_eigenpair(m, mu1, vecs[:, -1])
    if solver == "iterative":
        return _lanczos_iteration(m, tol)
    if solver == "power":
        return _power_iteration(m, tol)
    raise ValueError(f"unknown solver {solver!r}")


def signed_spectrum(m: WeightField, k: int) -> SignedSpectrum:
    """The k largest positive and k most negative pencil eigenvalues.

    Dense only.  The positive list is empty exactly when the weight has no
    positive part, the negative list exactly when it has no negative part.
    """
    if m.integral == 0.0:
        raise ZeroWeightIntegral("weight integrates to zero")
    vals, _ = _dense_pencil(m)
    pos = vals[vals > 0][::-1][:k].copy()
    neg = vals[vals < 0][:k].copy()
    bound = float(np.max(np.abs(vals))) if vals.size else 0.0
    return SignedSpectrum(positive=pos, negative=neg,
                          basis_dim=m.grid.n_cells - 1, bound=bound)


def rayleigh_quotient(m: WeightField, f) -> float:
    """Weighted Rayleigh quotient f^T W(m*f) / f^T K f.

    Bounded above by mu1 on V_m; raises ConstantField when the Dirichlet
    energy vanishes (numerically: fields whose relative variation is at
    roundoff scale count as constant).
    """
    f = as_field(m.grid, f)
    K = assemble_stiffness(m.grid).entries
    den = float(f @ (K @ f))
    energy_floor = 1e-14 * float(np.abs(K.diagonal()).max()) * float(f @ f)
    if den <= energy_floor:
        raise ConstantField("field has zero Dirichlet energy")
    num = float(f @ (_weighted_values(m) * f))
    return num / den


def mu1_derivative(m: WeightField, v) -> float:
    """Directional derivative of mu1 at m: the v-weighted mass of u^2.

    With the eigenfunction normalization u^T K u = 1 the derivative in
    direction v is sum_i w_i u_i^2 v_i; in particular the derivative in
    direction m recovers mu1 itself (degree-1 homogeneity).
    """
    v = as_field(m.grid, v)
    pair = principal_eigenpair(m)
    return float((m.grid.cell_measures * pair.u ** 2) @ v)


def mu1_extended(m: WeightField, solver: str = "dense",
                 tol: float = 1e-12) -> float:
    """mu1 extended by zero to weights with no positive part.

    Total on weights with negative integral, which makes convexity
    statements meaningful across degenerate weights; the degenerate case
    is signalled by ``m.has_positive_part`` being False.
    """
    if m.integral >= 0:
        raise NotAdmissible(
            f"weight integral {m.integral:g} is nonnegative")
    if not m.has_positive_part:
        return 0.0
    return principal_eigenpair(m, solver=solver, tol=tol).mu1
