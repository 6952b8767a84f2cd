"""Periodic boundary value solver: kernel, quadrature, and monotone iteration."""
from __future__ import annotations

import math

import numpy as np
import pytest

from proxigraph import (
    GreensKernel,
    GridFunction,
    RhsFunction,
    TimeGrid,
    build,
    greens_kernel_value,
    is_lower_solution,
    kernel_matrix,
    solve_common_pbvp,
    solve_pbvp,
    verify_condition_iv,
)
from proxigraph.corpus import E_SQUARED
from proxigraph.errors import (
    BetaNotContractive,
    ConditionIvViolated,
    EvaluationFailure,
    InstanceFormatError,
    NotLowerSolution,
    OutOfDomain,
    ParamOutOfRange,
)

E = math.e


def test_kernel_spot_values():
    k = GreensKernel(alpha=1.0, period=1.0)
    assert greens_kernel_value(k, 0.5, 0.25) == pytest.approx(
        E ** 0.75 / (E - 1.0), rel=1e-15)
    assert greens_kernel_value(k, 0.25, 0.5) == pytest.approx(
        E ** 0.25 / (E - 1.0), rel=1e-15)
    # the diagonal belongs to the s <= t branch
    assert greens_kernel_value(k, 0.3, 0.3) == pytest.approx(
        E / (E - 1.0), rel=1e-15)


def test_kernel_domain_and_construction():
    k = GreensKernel(alpha=1.0, period=1.0)
    with pytest.raises(OutOfDomain):
        greens_kernel_value(k, 1.5, 0.5)
    with pytest.raises(OutOfDomain):
        greens_kernel_value(k, 0.5, -0.1)
    with pytest.raises(ParamOutOfRange):
        GreensKernel(alpha=0.0, period=1.0)
    with pytest.raises(ParamOutOfRange):
        GreensKernel(alpha=1.0, period=-2.0)
    with pytest.raises(ParamOutOfRange):
        TimeGrid(1.0, 2)
    with pytest.raises(ParamOutOfRange):
        TimeGrid(0.0, 11)
    with pytest.raises(ParamOutOfRange, match="period"):
        kernel_matrix(GreensKernel(alpha=1.0, period=2.0), TimeGrid(1.0, 11))


@pytest.mark.parametrize("alpha", [0.5, 2.0, E_SQUARED])
def test_kernel_rows_integrate_to_reciprocal_alpha(alpha):
    # exact identity: the kernel integrates to 1/alpha in s for every t
    grid = TimeGrid(1.0, 201)
    W = kernel_matrix(GreensKernel(alpha=alpha, period=1.0), grid)
    err = float(np.max(np.abs(W.sum(axis=1) - 1.0 / alpha)))
    assert err <= 1e-4


def test_kernel_mass_error_shrinks_under_refinement():
    errs = []
    for n in (201, 401):
        grid = TimeGrid(1.0, n)
        W = kernel_matrix(GreensKernel(alpha=E_SQUARED, period=1.0), grid)
        errs.append(float(np.max(np.abs(W.sum(axis=1) - 1.0 / E_SQUARED))))
    assert errs[0] / errs[1] >= 3.5


def test_constant_fixed_point():
    # f + alpha s == alpha c identically, so the operator is constant and the
    # iteration lands in two applications
    grid = TimeGrid(1.0, 201)
    f = RhsFunction("linear", {"a": -2.0, "b": 1.5})
    w0 = GridFunction.constant(grid, 0.75)
    assert is_lower_solution(f, w0)
    u, rep = solve_pbvp(f, 2.0, 1.0, w0)
    assert rep.iterations == 2
    assert rep.final_increment == 0.0
    assert float(np.max(np.abs(u.values - 0.75))) <= 1e-3


def exact_cosine(t: np.ndarray) -> np.ndarray:
    w = 2.0 * np.pi
    return (np.cos(w * t) + w * np.sin(w * t)) / (1.0 + w * w)


def test_cosine_forced_solution_with_order():
    f = RhsFunction("cosine_forced", {"a": -1.0, "amp": 1.0, "freq": 1.0})
    errs = []
    for n in (201, 401):
        grid = TimeGrid(1.0, n)
        u, rep = solve_pbvp(f, 2.0, 1.0, GridFunction.constant(grid, -1.0))
        errs.append(float(np.max(np.abs(u.values - exact_cosine(grid.nodes)))))
        assert rep.beta == 0.5
        assert all(rep.monotone_steps)
    assert errs[0] <= 1e-4
    assert errs[1] <= 1e-5
    assert errs[0] / errs[1] >= 3.5


def test_exponential_pair_small_grid():
    inst = build("ex53_pbvp", n_nodes=51)
    u, rep = solve_pbvp(inst.f, inst.alpha, inst.h_spec, inst.w0,
                        tol=inst.tol)
    assert rep.beta == pytest.approx((E_SQUARED - 1.0) / E_SQUARED, abs=1e-15)
    assert u.sup_norm() <= 1e-4  # coarse grid, loose cap
    assert u.periodicity_residual() <= 1e-9
    assert rep.max_ratio <= rep.beta + 1e-6
    assert all(rep.monotone_steps)


def test_condition_iv():
    f = RhsFunction("exp_linear", {"c": -1.0})
    alpha = E_SQUARED
    ts = np.linspace(0.0, 1.0, 41)
    pairs = [(-2.0, -1.0), (-1.0, 0.5), (0.0, 3.0)]
    ok = verify_condition_iv(f, f, alpha, {"kind": "exp_gap"}, ts, pairs)
    assert ok
    # a weight too small to dominate the coupling
    bad = verify_condition_iv(f, f, alpha, 0.5, ts, pairs)
    assert not bad
    assert len(bad.witness) == 5
    # sup h >= alpha violates the strict gap condition
    cap = verify_condition_iv(f, f, alpha, 8.0, ts, pairs)
    assert not cap
    assert cap.witness == ("sup h", 8.0, alpha)
    with pytest.raises(ParamOutOfRange, match="ordered"):
        verify_condition_iv(f, f, alpha, 1.0, ts, [(1.0, 0.0)])


def test_lower_solution_checks():
    f = RhsFunction("exp_linear", {"c": -1.0})
    grid = TimeGrid(1.0, 101)
    assert is_lower_solution(f, GridFunction.constant(grid, -1.0))
    up = is_lower_solution(f, GridFunction.constant(grid, 1.0))
    assert not up
    t, dw, fw = up.witness
    assert dw == 0.0 and fw == pytest.approx(-math.exp(t))

    ramp = GridFunction(grid, -grid.nodes)
    down = is_lower_solution(RhsFunction("linear", {"a": 0.0, "b": 10.0}),
                             ramp)
    assert not down
    assert down.witness[0] == "endpoint order"

    with pytest.raises(NotLowerSolution):
        solve_pbvp(f, E_SQUARED, {"kind": "exp_gap"},
                   GridFunction.constant(grid, 1.0))


def test_rhs_table_and_validation():
    tab = RhsFunction("table", {"t_nodes": [0.0, 1.0], "s_nodes": [0.0, 1.0],
                                "values": [[0.0, 1.0], [2.0, 3.0]]})
    assert tab(0.5, 0.5) == pytest.approx(1.5)
    assert tab(0.0, 2.0) == 1.0  # clamped to the node box
    with pytest.raises(InstanceFormatError, match="sorted"):
        RhsFunction("table", {"t_nodes": [1.0, 0.0], "s_nodes": [0.0, 1.0],
                              "values": [[0.0, 1.0], [2.0, 3.0]]})
    with pytest.raises(InstanceFormatError, match="shape"):
        RhsFunction("table", {"t_nodes": [0.0, 1.0], "s_nodes": [0.0, 1.0],
                              "values": [[0.0, 1.0]]})
    with pytest.raises(InstanceFormatError, match="kind"):
        RhsFunction("cubic", {})


def test_non_finite_rhs_surfaces_as_evaluation_failure():
    nan_tab = RhsFunction("table", {
        "t_nodes": [0.0, 1.0], "s_nodes": [-2.0, 2.0],
        "values": [[float("nan"), float("nan")], [0.0, 0.0]]})
    grid = TimeGrid(1.0, 11)
    with pytest.raises(EvaluationFailure):
        solve_pbvp(nan_tab, 2.0, 1.0, GridFunction.constant(grid, 0.0),
                   check_lower=False)


def test_common_solver_agrees_with_single_solver():
    f = RhsFunction("cosine_forced", {"a": -1.0, "amp": 1.0, "freq": 1.0})
    grid = TimeGrid(1.0, 101)
    w0 = GridFunction.constant(grid, -1.0)
    u1, _ = solve_pbvp(f, 2.0, 1.0, w0)
    u2, rep = solve_common_pbvp(f, f, 2.0, 1.0, w0)
    assert float(np.max(np.abs(u1.values - u2.values))) <= 1e-9
    assert all(rep.monotone_steps)


def test_common_solver_rejects_uncoupled_pair():
    f1 = RhsFunction("cosine_forced", {"a": -1.0, "amp": 1.0, "freq": 1.0})
    f2 = RhsFunction("cosine_forced", {"a": -1.0, "amp": 11.0, "freq": 1.0})
    grid = TimeGrid(1.0, 51)
    w0 = GridFunction.constant(grid, -11.0)
    with pytest.raises(ConditionIvViolated):
        solve_common_pbvp(f1, f2, 2.0, 1.0, w0, check_lower=False)


def test_beta_gate():
    f = RhsFunction("linear", {"a": -2.0, "b": 0.0})
    grid = TimeGrid(1.0, 11)
    with pytest.raises(BetaNotContractive):
        solve_pbvp(f, 2.0, 3.0, GridFunction.constant(grid, 0.0))
