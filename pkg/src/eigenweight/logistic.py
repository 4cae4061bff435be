"""Logistic reaction-diffusion with zero-flux boundaries.

Time-steps  v_t = div(grad v) + gamma * v * (m - v)  with an IMEX scheme:
diffusion implicit (unconditionally stable, mass-conserving when gamma is
zero) and the logistic reaction explicit under an adaptive substep guard.
The long-run classification implements the persistence criterion: the
population survives exactly when lambda1(m) < gamma, so total mass either
settles on a positive steady state or decays to zero.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .errors import InvalidSpec, NegativeInitial, UnstableStep
from .grid import as_field, assemble_stiffness
from .spectral import WeightField

#: persistence threshold: final mass fraction of |domain| * max(m)+
PERSIST_MASS_FRACTION = 1e-3

#: extinction threshold: final mass fraction of the initial mass
EXTINCT_MASS_FRACTION = 1e-9

#: entries below this before clamping count as genuine clamp events
CLAMP_TOL = -1e-12

_MAX_SUBSTEPS = 1_000_000


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Recorded history of one simulation.

    Mass, min and max are recorded per accepted step; ``outcome`` is
    persistent, extinct or undecided per the thresholds above.
    ``clamp_events`` counts entries pushed below CLAMP_TOL by the solver
    (zero in healthy runs) and ``min_pre_clamp`` is the most negative
    value ever seen before clamping.
    """

    times: np.ndarray
    total_mass: np.ndarray
    min_v: np.ndarray
    max_v: np.ndarray
    outcome: str
    final_v: np.ndarray
    clamp_events: int
    min_pre_clamp: float


def simulate_logistic(m: WeightField, gamma: float, v0, dt: float,
                      t_end: float) -> Trajectory:
    """Run the logistic model to t_end and classify the outcome.

    Each macro step of length dt is split into the smallest number of
    substeps keeping  dt_sub * gamma * (max|m| + 2 max v) < 1,  which
    bounds the explicit reaction and keeps the implicit diffusion solve
    nonnegative; UnstableStep is raised if the guard needs more than
    10^6 substeps.
    """
    grid = m.grid
    v = as_field(grid, v0).copy()
    if np.any(v < 0):
        raise NegativeInitial("initial density has negative entries")
    if dt <= 0 or t_end <= 0:
        raise InvalidSpec("dt and t_end must be positive")
    if gamma < 0:
        raise InvalidSpec("gamma must be nonnegative")

    K = assemble_stiffness(grid).entries
    w = grid.cell_measures
    W = sp.diags(w)
    solvers = {}

    def diffusion_solver(dt_sub):
        key = round(dt_sub, 15)
        if key not in solvers:
            solvers[key] = spla.factorized((W / dt_sub + K).tocsc())
        return solvers[key]

    m_abs_max = float(np.max(np.abs(m.values)))
    n_steps = int(np.ceil(t_end / dt - 1e-12))

    times = [0.0]
    mass = [float(w @ v)]
    min_v = [float(v.min())]
    max_v = [float(v.max())]
    clamp_events = 0
    min_pre_clamp = 0.0

    t = 0.0
    for step in range(n_steps):
        step_dt = min(dt, t_end - t)
        rate = gamma * (m_abs_max + 2.0 * max(float(v.max()), 0.0))
        n_sub = max(1, int(np.floor(step_dt * rate)) + 1)
        if n_sub > _MAX_SUBSTEPS:
            raise UnstableStep(
                f"stability guard needs {n_sub} substeps at t={t:g}")
        dt_sub = step_dt / n_sub
        solve = diffusion_solver(dt_sub)
        for _ in range(n_sub):
            rhs = w * (v / dt_sub + gamma * v * (m.values - v))
            v = solve(rhs)
            low = float(v.min())
            if low < 0.0:
                min_pre_clamp = min(min_pre_clamp, low)
                if low < CLAMP_TOL:
                    clamp_events += int(np.count_nonzero(v < CLAMP_TOL))
                v = np.maximum(v, 0.0)
        t += step_dt
        times.append(t)
        mass.append(float(w @ v))
        min_v.append(float(v.min()))
        max_v.append(float(v.max()))

    times = np.asarray(times)
    mass = np.asarray(mass)
    outcome = _classify(m, times, mass)
    return Trajectory(
        times=times,
        total_mass=mass,
        min_v=np.asarray(min_v),
        max_v=np.asarray(max_v),
        outcome=outcome,
        final_v=v,
        clamp_events=clamp_events,
        min_pre_clamp=min_pre_clamp,
    )


def _classify(m: WeightField, times: np.ndarray, mass: np.ndarray) -> str:
    """Persistent / extinct / undecided from the recorded mass history."""
    if mass[-1] <= EXTINCT_MASS_FRACTION * mass[0]:
        return "extinct"
    threshold = (PERSIST_MASS_FRACTION * m.grid.volume
                 * max(float(m.values.max()), 0.0))
    tail_start = np.searchsorted(times, 0.9 * times[-1])
    tail_start = min(tail_start, len(times) - 2)
    tail = mass[tail_start:]
    stays_up = bool(tail.min() > threshold)
    trend_ok = bool(mass[-1] >= tail[0] - 1e-12 * max(1.0, abs(tail[0])))
    if stays_up and trend_ok:
        return "persistent"
    return "undecided"
