"""Fixed-step classical RK4 on a shared uniform grid.

The state system integrates forward from t0; the adjoint system integrates
backward from t_f re-using the already-computed state trajectory.  Controls
live on the grid nodes: the stages at the interval ends use the nodal
controls and the two midpoint stages use their average, which keeps fourth
order for smooth controls.  States needed at backward midpoints are the
average of the adjacent nodal states.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import ModelParams, RateCallable, State, Weights, rhs_terms
from .pmp import Costate, costate_terms

NODES_PER_TIME_UNIT = 200

# Continuous trajectories stay nonnegative; anything below this after a step
# signals the step size is too coarse for the current rates.
NONNEG_TOLERANCE = 1e-12


class IntegrationError(RuntimeError):
    """Integration produced a non-finite or inadmissible state."""

    def __init__(self, message: str, step: int):
        super().__init__(message)
        self.step = step


@dataclass(frozen=True)
class TimeGrid:
    """Uniform grid t_i = t0 + i*h, i = 0..n, with h = (t_f - t0)/n."""

    t0: float
    t_f: float
    n: int

    def __post_init__(self) -> None:
        if self.n < 2:
            raise ValueError(f"need at least 2 intervals, got n={self.n}")
        if not (self.t_f > self.t0):
            raise ValueError(f"t_f must exceed t0, got [{self.t0}, {self.t_f}]")

    @property
    def h(self) -> float:
        return (self.t_f - self.t0) / self.n

    def nodes(self) -> np.ndarray:
        return self.t0 + np.arange(self.n + 1) * self.h


def default_grid(t_f: float, t0: float = 0.0) -> TimeGrid:
    """Grid at the default resolution of NODES_PER_TIME_UNIT intervals per unit time."""
    return TimeGrid(t0=t0, t_f=t_f, n=round(NODES_PER_TIME_UNIT * (t_f - t0)))


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Values of a 3-component quantity at every grid node; rows are nodes.

    Columns are (R, C, P) for states and (p1, p2, p3) for adjoints.
    """

    grid: TimeGrid
    values: np.ndarray

    def __post_init__(self) -> None:
        values = np.array(self.values, dtype=float)
        if values.shape != (self.grid.n + 1, 3):
            raise ValueError(
                f"expected shape {(self.grid.n + 1, 3)}, got {values.shape}"
            )
        if not np.all(np.isfinite(values)):
            raise ValueError("trajectory values must all be finite")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    def component(self, index: int) -> np.ndarray:
        return self.values[:, index]


@dataclass(frozen=True, eq=False)
class ControlGrid:
    """A (u1, u2) pair at every grid node; the sweep solver's unknown."""

    grid: TimeGrid
    values: np.ndarray

    def __post_init__(self) -> None:
        values = np.array(self.values, dtype=float)
        if values.shape != (self.grid.n + 1, 2):
            raise ValueError(
                f"expected shape {(self.grid.n + 1, 2)}, got {values.shape}"
            )
        if not np.all(np.isfinite(values)):
            raise ValueError("control values must all be finite")
        if values.min() < 0.0:
            raise ValueError("control values must be >= 0")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @property
    def u1(self) -> np.ndarray:
        return self.values[:, 0]

    @property
    def u2(self) -> np.ndarray:
        return self.values[:, 1]

    def within_bounds(self, params: ModelParams) -> bool:
        return bool(
            self.values[:, 0].max() <= params.u1_max
            and self.values[:, 1].max() <= params.u2_max
        )


def zero_controls(grid: TimeGrid) -> ControlGrid:
    return ControlGrid(grid, np.zeros((grid.n + 1, 2)))


def _rates_on_grid(
    rate: RateCallable, grid: TimeGrid
) -> tuple[list[float], list[float]]:
    """Rate values at the nodes and at the interval midpoints."""
    h = grid.h
    ts = grid.nodes()
    at_nodes = [float(rate(t)) for t in ts]
    at_mid = [float(rate(t + 0.5 * h)) for t in ts[:-1]]
    return at_nodes, at_mid


def rk4_forward(
    x0: State,
    u: ControlGrid,
    params: ModelParams,
    beta: RateCallable,
    gamma: RateCallable,
    n0: float,
) -> Trajectory:
    """Integrate the state system over u.grid starting from x0."""
    grid = u.grid
    h = grid.h
    half = 0.5 * h
    sixth = h / 6.0
    beta_n, beta_m = _rates_on_grid(beta, grid)
    gamma_n, gamma_m = _rates_on_grid(gamma, grid)
    u1 = u.values[:, 0].tolist()
    u2 = u.values[:, 1].tolist()
    a1, a2 = params.alpha1, params.alpha2
    l1, l2 = params.lambda1, params.lambda2

    R, C, P = x0.R, x0.C, x0.P
    rows = [(R, C, P)]
    for i in range(grid.n):
        u1a, u2a = u1[i], u2[i]
        u1b, u2b = u1[i + 1], u2[i + 1]
        u1m, u2m = 0.5 * (u1a + u1b), 0.5 * (u2a + u2b)
        kR1, kC1, kP1 = rhs_terms(
            R, C, P, u1a, u2a, beta_n[i], gamma_n[i], a1, a2, l1, l2, n0
        )
        kR2, kC2, kP2 = rhs_terms(
            R + half * kR1, C + half * kC1, P + half * kP1,
            u1m, u2m, beta_m[i], gamma_m[i], a1, a2, l1, l2, n0,
        )
        kR3, kC3, kP3 = rhs_terms(
            R + half * kR2, C + half * kC2, P + half * kP2,
            u1m, u2m, beta_m[i], gamma_m[i], a1, a2, l1, l2, n0,
        )
        kR4, kC4, kP4 = rhs_terms(
            R + h * kR3, C + h * kC3, P + h * kP3,
            u1b, u2b, beta_n[i + 1], gamma_n[i + 1], a1, a2, l1, l2, n0,
        )
        R += sixth * (kR1 + 2.0 * (kR2 + kR3) + kR4)
        C += sixth * (kC1 + 2.0 * (kC2 + kC3) + kC4)
        P += sixth * (kP1 + 2.0 * (kP2 + kP3) + kP4)
        if not (math.isfinite(R) and math.isfinite(C) and math.isfinite(P)):
            raise IntegrationError(
                f"non-finite state at step {i + 1} (t={grid.t0 + (i + 1) * h:.6g})",
                step=i + 1,
            )
        if min(R, C, P) < -NONNEG_TOLERANCE:
            raise IntegrationError(
                f"state component below -{NONNEG_TOLERANCE:g} at step {i + 1} "
                f"(t={grid.t0 + (i + 1) * h:.6g}); reduce the step size h={h:.6g}",
                step=i + 1,
            )
        rows.append((R, C, P))
    return Trajectory(grid, np.array(rows))


def rk4_backward(
    p_terminal: Costate,
    x: Trajectory,
    u: ControlGrid,
    params: ModelParams,
    weights: Weights,
    beta: RateCallable,
    gamma: RateCallable,
    n0: float,
) -> Trajectory:
    """Integrate the adjoint system from t_f down to t0 along x and u.

    The result is stored forward-indexed; its final node equals p_terminal
    exactly.
    """
    if x.grid != u.grid:
        raise ValueError("state trajectory and controls must share one grid")
    grid = x.grid
    h = grid.h
    half = 0.5 * h
    sixth = h / 6.0
    beta_n, beta_m = _rates_on_grid(beta, grid)
    gamma_n, gamma_m = _rates_on_grid(gamma, grid)
    u1 = u.values[:, 0].tolist()
    u2 = u.values[:, 1].tolist()
    Rs = x.values[:, 0].tolist()
    Cs = x.values[:, 1].tolist()
    Ps = x.values[:, 2].tolist()
    a1, a2 = params.alpha1, params.alpha2
    l1, l2 = params.lambda1, params.lambda2
    k1 = weights.kappa1

    p1, p2, p3 = p_terminal.p1, p_terminal.p2, p_terminal.p3
    out = np.empty((grid.n + 1, 3))
    out[grid.n] = (p1, p2, p3)
    for i in range(grid.n - 1, -1, -1):
        Ra, Ca, Pa = Rs[i], Cs[i], Ps[i]
        Rb, Cb, Pb = Rs[i + 1], Cs[i + 1], Ps[i + 1]
        Rm, Cm, Pm = 0.5 * (Ra + Rb), 0.5 * (Ca + Cb), 0.5 * (Pa + Pb)
        u1a, u2a = u1[i], u2[i]
        u1b, u2b = u1[i + 1], u2[i + 1]
        u1m, u2m = 0.5 * (u1a + u1b), 0.5 * (u2a + u2b)
        kA1, kB1, kC1 = costate_terms(
            Rb, Cb, Pb, p1, p2, p3,
            u1b, u2b, beta_n[i + 1], gamma_n[i + 1], a1, a2, l1, l2, k1, n0,
        )
        kA2, kB2, kC2 = costate_terms(
            Rm, Cm, Pm, p1 - half * kA1, p2 - half * kB1, p3 - half * kC1,
            u1m, u2m, beta_m[i], gamma_m[i], a1, a2, l1, l2, k1, n0,
        )
        kA3, kB3, kC3 = costate_terms(
            Rm, Cm, Pm, p1 - half * kA2, p2 - half * kB2, p3 - half * kC2,
            u1m, u2m, beta_m[i], gamma_m[i], a1, a2, l1, l2, k1, n0,
        )
        kA4, kB4, kC4 = costate_terms(
            Ra, Ca, Pa, p1 - h * kA3, p2 - h * kB3, p3 - h * kC3,
            u1a, u2a, beta_n[i], gamma_n[i], a1, a2, l1, l2, k1, n0,
        )
        p1 -= sixth * (kA1 + 2.0 * (kA2 + kA3) + kA4)
        p2 -= sixth * (kB1 + 2.0 * (kB2 + kB3) + kB4)
        p3 -= sixth * (kC1 + 2.0 * (kC2 + kC3) + kC4)
        if not (math.isfinite(p1) and math.isfinite(p2) and math.isfinite(p3)):
            raise IntegrationError(
                f"non-finite adjoint at step {i} (t={grid.t0 + i * h:.6g})",
                step=i,
            )
        out[i] = (p1, p2, p3)
    return Trajectory(grid, out)
