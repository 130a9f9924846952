"""Forward-backward sweep solver.

Each iteration integrates the state forward with the current controls,
integrates the adjoint backward along that state, evaluates the pointwise
optimality law at every node, and blends the fresh controls with the
previous iterate (a convex combination) to damp the fixed-point iteration.
The loop stops when all eight tracked series (R, C, P, p1, p2, p3, u1, u2)
change by less than tol_delta in relative l1 norm between iterations.

The returned control grid is the unrelaxed optimality law evaluated on the
returned state/adjoint pair, so the pointwise optimality conditions hold
exactly on the result; the blended controls only steer the iteration.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .integrator import (
    ControlGrid,
    IntegrationError,
    TimeGrid,
    Trajectory,
    rk4_backward,
    rk4_forward,
)
from .model import ControlPair, State
from .objectives import ObjectiveKind, evaluate_cost
from .pmp import Costate, control_law_l1, control_law_l2, switching_functions
from .scenarios import Scenario


class DivergenceError(RuntimeError):
    """The sweep produced non-finite values."""

    def __init__(self, message: str, iteration: int):
        super().__init__(message)
        self.iteration = iteration


@dataclass(frozen=True)
class SweepSettings:
    """Iteration knobs for the sweep.

    relaxation is the weight on the fresh controls in the convex update;
    values below 0.5 damp harder, which helps the bang-bang objective settle
    its switch locations.
    """

    grid: TimeGrid
    relaxation: float = 0.5
    tol_delta: float = 1e-3
    max_iters: int = 1000
    eps_singular: float = 1e-9

    def __post_init__(self) -> None:
        if not (0.0 < self.relaxation <= 1.0):
            raise ValueError(f"relaxation must be in (0, 1], got {self.relaxation}")
        if self.tol_delta <= 0.0:
            raise ValueError(f"tol_delta must be > 0, got {self.tol_delta}")
        if self.max_iters < 1:
            raise ValueError(f"max_iters must be >= 1, got {self.max_iters}")


@dataclass(frozen=True, eq=False)
class SolveResult:
    state: Trajectory
    costate: Trajectory
    controls: ControlGrid
    cost: float
    iterations: int
    converged: bool
    residual_history: tuple[float, ...]
    singular_flags: np.ndarray | None = None
    interior_fraction: float | None = None


def convergence_test(
    old: Sequence[np.ndarray],
    new: Sequence[np.ndarray],
    tol_delta: float,
) -> list[bool]:
    """Per-quantity relative l1 test: tol*sum|new| - sum|new - old| >= 0."""
    if len(old) != len(new):
        raise ValueError(f"got {len(old)} old series but {len(new)} new series")
    verdicts = []
    for old_q, new_q in zip(old, new):
        old_q = np.asarray(old_q, dtype=float)
        new_q = np.asarray(new_q, dtype=float)
        if old_q.shape != new_q.shape:
            raise ValueError(
                f"series length mismatch: {old_q.shape} vs {new_q.shape}"
            )
        verdicts.append(
            bool(
                tol_delta * np.abs(new_q).sum() - np.abs(new_q - old_q).sum() >= 0.0
            )
        )
    return verdicts


def _tracked(x: np.ndarray, p: np.ndarray, u: np.ndarray) -> list[np.ndarray]:
    return [x[:, 0], x[:, 1], x[:, 2], p[:, 0], p[:, 1], p[:, 2], u[:, 0], u[:, 1]]


def _worst_residual(old: Sequence[np.ndarray], new: Sequence[np.ndarray]) -> float:
    worst = 0.0
    for old_q, new_q in zip(old, new):
        scale = np.abs(new_q).sum()
        change = np.abs(new_q - old_q).sum()
        if scale > 0.0:
            worst = max(worst, change / scale)
        elif change > 0.0:
            return float("inf")
    return worst


def _law_on_grid(
    scenario: Scenario,
    x: Trajectory,
    p: Trajectory,
    u_prev: np.ndarray,
    eps_singular: float,
) -> tuple[np.ndarray, np.ndarray | None]:
    """Pointwise optimality law at every node; singular flags for l1."""
    n0 = scenario.n0
    params = scenario.params
    weights = scenario.weights
    n_nodes = x.grid.n + 1
    u_new = np.empty((n_nodes, 2))
    if scenario.objective == "l2":
        for i in range(n_nodes):
            state = State(*x.values[i])
            costate = Costate(*p.values[i])
            pair = control_law_l2(state, costate, params, weights, n0)
            u_new[i, 0] = pair.u1
            u_new[i, 1] = pair.u2
        return u_new, None
    flags = np.zeros(n_nodes, dtype=bool)
    for i in range(n_nodes):
        state = State(*x.values[i])
        costate = Costate(*p.values[i])
        phi = switching_functions(state, costate, params, weights, n0)
        pair, (s1, s2) = control_law_l1(
            phi, params, ControlPair(*u_prev[i]), eps_singular
        )
        u_new[i, 0] = pair.u1
        u_new[i, 1] = pair.u2
        flags[i] = s1 or s2
    return u_new, flags


def solve(scenario: Scenario, settings: SweepSettings) -> SolveResult:
    """Run the sweep to convergence (or max_iters) and return the last iterate."""
    grid = settings.grid
    n0 = scenario.n0
    kind = ObjectiveKind(scenario.objective, scenario.weights)
    p_terminal = Costate(0.0, 0.0, 0.0)

    u_work = np.zeros((grid.n + 1, 2))
    prev = _tracked(
        np.zeros((grid.n + 1, 3)), np.zeros((grid.n + 1, 3)), u_work
    )
    x = p = None
    u_law = u_work
    flags = None
    history: list[float] = []
    converged = False
    iterations = 0

    for iteration in range(1, settings.max_iters + 1):
        iterations = iteration
        u_current = ControlGrid(grid, u_work)
        try:
            x = rk4_forward(
                scenario.x0,
                u_current,
                scenario.params,
                scenario.beta,
                scenario.gamma,
                n0,
            )
            p = rk4_backward(
                p_terminal,
                x,
                u_current,
                scenario.params,
                scenario.weights,
                scenario.beta,
                scenario.gamma,
                n0,
            )
        except IntegrationError as err:
            raise DivergenceError(
                f"sweep diverged at iteration {iteration}: {err}", iteration
            ) from err
        u_law, flags = _law_on_grid(scenario, x, p, u_work, settings.eps_singular)
        u_work = settings.relaxation * u_law + (1.0 - settings.relaxation) * u_work
        current = _tracked(x.values, p.values, u_work)
        history.append(_worst_residual(prev, current))
        if all(convergence_test(prev, current, settings.tol_delta)):
            converged = True
            break
        prev = current

    controls = ControlGrid(grid, u_law)
    interior = None
    if scenario.objective == "l1":
        off_lower = u_work > 1e-12
        off_upper = np.empty_like(off_lower)
        off_upper[:, 0] = u_work[:, 0] < scenario.params.u1_max - 1e-12
        off_upper[:, 1] = u_work[:, 1] < scenario.params.u2_max - 1e-12
        interior = float(np.mean(np.any(off_lower & off_upper, axis=1)))
    return SolveResult(
        state=x,
        costate=p,
        controls=controls,
        cost=evaluate_cost(kind, x, controls),
        iterations=iterations,
        converged=converged,
        residual_history=tuple(history),
        singular_flags=flags,
        interior_fraction=interior,
    )
