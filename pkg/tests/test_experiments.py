import math
from dataclasses import replace

import numpy as np
import pytest

from marketopt.experiments import (
    StrategyKind,
    SweepSpec,
    compare_strategies,
    default_sweep_values,
    run_sweep,
    strategy_controls,
)
from marketopt.integrator import TimeGrid
from marketopt.model import State
from marketopt.scenarios import Constant, Scenario, preset_scenario
from marketopt.solver import SweepSettings, solve

COMPARISON = preset_scenario("comparison-default")
FAST_GRID = TimeGrid(0.0, 7.0, 700)
FAST_SETTINGS = SweepSettings(grid=FAST_GRID)


def test_constant_strategy_values():
    u = strategy_controls(StrategyKind.CONSTANT, COMPARISON, FAST_GRID)
    assert np.all(u.values[:, 0] == pytest.approx(0.0285, rel=1e-15))
    assert np.all(u.values[:, 1] == 0.05)


def test_no_control_strategy_is_zero():
    u = strategy_controls(StrategyKind.NO_CONTROL, COMPARISON, FAST_GRID)
    assert not u.values.any()


def test_heuristic_vanishes_where_no_potential_customers():
    sc = replace(COMPARISON, x0=State(R=0.4, C=0.6, P=0.0))
    u = strategy_controls(StrategyKind.FOLLOW_HEURISTIC, sc, FAST_GRID)
    assert tuple(u.values[0]) == (0.0, 0.0)


def test_heuristic_controls_never_exceed_bounds():
    for name in ("scenario1", "comparison-default"):
        sc = preset_scenario(name)
        u = strategy_controls(StrategyKind.FOLLOW_HEURISTIC, sc, FAST_GRID)
        cap1 = (1.0 - sc.params.alpha1) * sc.params.u1_max
        cap2 = sc.params.alpha2 * sc.params.u2_max
        assert u.values[:, 0].max() <= cap1 <= sc.params.u1_max
        assert u.values[:, 1].max() <= cap2 <= sc.params.u2_max


def test_optimal_strategy_delegates_to_the_solver():
    u = strategy_controls(
        StrategyKind.OPTIMAL, COMPARISON, FAST_GRID, settings=FAST_SETTINGS
    )
    direct = solve(COMPARISON, FAST_SETTINGS)
    assert np.array_equal(u.values, direct.controls.values)


def test_compare_orders_strategies_at_the_default_point():
    table = compare_strategies(COMPARISON, FAST_SETTINGS)
    assert len(table.rows) == 4
    costs = {row.strategy: row.cost for row in table.rows}
    assert costs[StrategyKind.OPTIMAL] < costs[StrategyKind.NO_CONTROL]
    assert costs[StrategyKind.NO_CONTROL] < costs[StrategyKind.CONSTANT]
    assert costs[StrategyKind.NO_CONTROL] < costs[StrategyKind.FOLLOW_HEURISTIC]
    assert all(row.converged for row in table.rows)


def test_optimal_never_loses_to_no_control():
    table = compare_strategies(COMPARISON, FAST_SETTINGS)
    j_opt = table.cost_of(StrategyKind.OPTIMAL)
    j_nc = table.cost_of(StrategyKind.NO_CONTROL)
    assert j_opt <= j_nc + 1e-9


def test_single_point_sweep_matches_compare():
    spec = SweepSpec(parameter="gamma", values=(0.1,), base=COMPARISON)
    swept = run_sweep(spec, FAST_SETTINGS)
    table = compare_strategies(COMPARISON, FAST_SETTINGS)
    assert len(swept.rows) == 4
    for row, ref in zip(swept.rows, table.rows):
        assert row.strategy is ref.strategy
        assert row.parameter == "gamma"
        assert row.value == 0.1
        assert row.cost == ref.cost
        assert row.iterations == ref.iterations


def test_optimal_cost_is_nondecreasing_in_the_defection_rate():
    spec = SweepSpec(
        parameter="gamma", values=(0.1, 0.4, 0.7, 1.0, 1.1),
        base=COMPARISON,
        strategies=(StrategyKind.NO_CONTROL, StrategyKind.OPTIMAL),
    )
    table = run_sweep(spec, FAST_SETTINGS)
    j_opt = [table.cost_of(StrategyKind.OPTIMAL, v) for v in spec.values]
    assert all(a <= b + 1e-12 for a, b in zip(j_opt, j_opt[1:]))
    for value in (1.0, 1.1):
        j_nc = table.cost_of(StrategyKind.NO_CONTROL, value)
        assert abs(table.cost_of(StrategyKind.OPTIMAL, value) - j_nc) / j_nc <= 0.01


def test_sweep_is_reproducible():
    spec = SweepSpec(
        parameter="gamma", values=(0.3, 0.9),
        base=COMPARISON, strategies=(StrategyKind.NO_CONTROL, StrategyKind.OPTIMAL),
    )
    assert run_sweep(spec, FAST_SETTINGS) == run_sweep(spec, FAST_SETTINGS)


def test_parallel_sweep_matches_sequential():
    spec = SweepSpec(
        parameter="gamma", values=(0.4, 1.1),
        base=COMPARISON, strategies=(StrategyKind.NO_CONTROL, StrategyKind.OPTIMAL),
    )
    assert run_sweep(spec, FAST_SETTINGS, workers=2) == run_sweep(spec, FAST_SETTINGS)


def test_tf_sweep_keeps_step_size_and_renormalizes_state_weight():
    spec = SweepSpec(
        parameter="tf", values=(4.0,), base=COMPARISON,
        strategies=(StrategyKind.NO_CONTROL,),
    )
    table = run_sweep(spec, FAST_SETTINGS)
    assert len(table.rows) == 1
    # cost of the uncontrolled run with kappa1 = 1/4 over [0, 4]: near-constant
    # potential pool P ~= 0.99 integrates to ~0.99 for any horizon
    assert table.rows[0].cost == pytest.approx(0.99, abs=0.01)


def test_failed_cells_are_recorded_not_raised():
    wild = Scenario(
        params=COMPARISON.params,
        weights=COMPARISON.weights,
        beta=Constant(1e8),
        gamma=Constant(0.1),
        x0=State(0.5, 0.0, 0.5),
        t_f=7.0,
    )
    table = compare_strategies(wild, SweepSettings(grid=TimeGrid(0.0, 7.0, 100)))
    assert len(table.rows) == 4
    assert all(not row.converged for row in table.rows)
    assert all(math.isnan(row.cost) for row in table.rows)


def test_sweep_spec_validation():
    with pytest.raises(ValueError):
        SweepSpec(parameter="delta", values=(1.0,), base=COMPARISON)
    with pytest.raises(ValueError):
        SweepSpec(parameter="gamma", values=(), base=COMPARISON)
    with pytest.raises(ValueError):
        SweepSpec(parameter="gamma", values=(0.0,), base=COMPARISON)
    with pytest.raises(ValueError):
        SweepSpec(parameter="beta", values=(5.0,), base=COMPARISON)
    with pytest.raises(ValueError):
        SweepSpec(parameter="tf", values=(2.0,), base=COMPARISON)
    with pytest.raises(ValueError):
        SweepSpec(parameter="gamma", values=(0.5,), base=COMPARISON, strategies=())


def test_default_sweep_values():
    assert default_sweep_values("gamma")[0] == pytest.approx(0.1)
    assert default_sweep_values("tf") == (4.0, 6.0, 8.0, 10.0, 12.0, 14.0)
    with pytest.raises(ValueError):
        default_sweep_values("epsilon")
