"""Periodic boundary value problems u' = f(t, u), u(0) = u(T) via Picard
iteration on an equivalent integral equation.

The kernel
    G(t, s) = e^{alpha (T + s - t)} / (e^{alpha T} - 1)   for s < t
    G(t, s) = e^{alpha (s - t)}     / (e^{alpha T} - 1)   for s > t
satisfies int_0^T G(t, s) ds = 1 / alpha for every t.  At s = t the left
branch is used.  The fixed-point operator is
    (F u)(t) = int_0^T G(t, s) [f(s, u(s)) + alpha u(s)] ds,
discretized by composite trapezoid on each side of the diagonal, so the node
s = t contributes both branch values with half weights.  The scheme is second
order in the grid spacing.

Iteration starts from a lower solution w (w' <= f(t, w), w(0) <= w(T)) and is
a contraction with factor beta = sup h / alpha when the state dependence of
f + alpha * id is Lipschitz with weight h(t) < alpha.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    BetaNotContractive,
    ConditionIvViolated,
    EvaluationFailure,
    InstanceFormatError,
    MonotonicityBroken,
    NoConvergence,
    NotLowerSolution,
    OutOfDomain,
    ParamOutOfRange,
)
from .metric_graph import CheckResult

TOL_PBVP = 1e-10
MAX_ITER = 10_000

RHS_KINDS = ("linear", "exp_linear", "cosine_forced", "table")
H_KINDS = ("const", "exp_gap")


@dataclass(frozen=True)
class TimeGrid:
    period: float
    n: int

    def __post_init__(self):
        if self.period <= 0:
            raise ParamOutOfRange(f"grid period must be positive, got {self.period}")
        if self.n < 3:
            raise ParamOutOfRange(f"grid needs at least 3 nodes, got {self.n}")

    @property
    def nodes(self) -> np.ndarray:
        return np.linspace(0.0, self.period, self.n)

    @property
    def spacing(self) -> float:
        return self.period / (self.n - 1)


@dataclass
class GridFunction:
    grid: TimeGrid
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != (self.grid.n,):
            raise InstanceFormatError(
                f"grid function needs {self.grid.n} values, got shape {self.values.shape}")

    @classmethod
    def constant(cls, grid: TimeGrid, value: float) -> "GridFunction":
        return cls(grid, np.full(grid.n, float(value)))

    def sup_norm(self) -> float:
        return float(np.max(np.abs(self.values)))

    def periodicity_residual(self) -> float:
        return float(abs(self.values[0] - self.values[-1]))


@dataclass(frozen=True)
class GreensKernel:
    alpha: float
    period: float

    def __post_init__(self):
        if self.alpha <= 0:
            raise ParamOutOfRange(f"kernel needs alpha > 0, got {self.alpha}")
        if self.period <= 0:
            raise ParamOutOfRange(f"kernel needs period > 0, got {self.period}")


def greens_kernel_value(kernel: GreensKernel, t: float, s: float) -> float:
    """Pointwise kernel value; the diagonal uses the left branch."""
    T = kernel.period
    if not (0.0 <= t <= T and 0.0 <= s <= T):
        raise OutOfDomain(f"(t, s) = ({t}, {s}) outside [0, {T}]^2")
    denom = math.expm1(kernel.alpha * T)
    if s <= t:
        return math.exp(kernel.alpha * (T + s - t)) / denom
    return math.exp(kernel.alpha * (s - t)) / denom


def kernel_matrix(kernel: GreensKernel, grid: TimeGrid) -> np.ndarray:
    """Quadrature weight matrix W with (F u)_i = sum_j W[i, j] g_j.

    Row i integrates with trapezoid over [0, t_i] using the left branch and
    over [t_i, T] using the right branch, so the diagonal node carries half of
    each branch value.
    """
    if abs(grid.period - kernel.period) > 1e-12 * max(1.0, kernel.period):
        raise ParamOutOfRange("grid period does not match kernel period")
    t = grid.nodes
    h = grid.spacing
    n = grid.n
    denom = np.expm1(kernel.alpha * grid.period)
    S, Tt = t[None, :], t[:, None]
    # (period - t) + s, not period + (s - t): makes the t = T row of the left
    # branch bitwise equal to the t = 0 row of the right branch, so operator
    # outputs are periodic to the last bit
    left = np.exp(kernel.alpha * ((grid.period - Tt) + S)) / denom
    right = np.exp(kernel.alpha * (S - Tt)) / denom
    W = np.zeros((n, n))
    for i in range(n):
        if i >= 1:
            w = np.full(i + 1, h)
            w[0] = w[-1] = h / 2
            W[i, : i + 1] += w * left[i, : i + 1]
        if i <= n - 2:
            w = np.full(n - i, h)
            w[0] = w[-1] = h / 2
            W[i, i:] += w * right[i, i:]
    return W


# ----- right-hand sides -------------------------------------------------


@dataclass(frozen=True)
class RhsFunction:
    """Named right-hand side f(t, s) with optional state bound m(t).

    kinds:
      linear         f = a * s + b
      exp_linear     f = c * e^t * s
      cosine_forced  f = a * s + amp * cos(2 pi freq t)
      table          bilinear interpolation of values over t_nodes x s_nodes
    """

    kind: str
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in RHS_KINDS:
            raise InstanceFormatError(f"unknown rhs kind {self.kind!r}")
        if self.kind == "table":
            p = self.params
            if not all(k in p for k in ("t_nodes", "s_nodes", "values")):
                raise InstanceFormatError("table rhs needs t_nodes, s_nodes, values")
            tn, sn = list(p["t_nodes"]), list(p["s_nodes"])
            if sorted(tn) != tn or sorted(sn) != sn:
                raise InstanceFormatError("table rhs nodes must be sorted")
            vals = np.asarray(p["values"], dtype=float)
            if vals.shape != (len(tn), len(sn)):
                raise InstanceFormatError("table rhs values shape mismatch")

    @classmethod
    def from_dict(cls, data) -> "RhsFunction":
        if not isinstance(data, dict) or "kind" not in data:
            raise InstanceFormatError("rhs spec must be an object with a 'kind'")
        params = {k: v for k, v in data.items() if k not in ("kind", "schema")}
        params.update(data.get("params", {}))
        params.pop("params", None)
        return cls(kind=str(data["kind"]), params=params)

    def __call__(self, t, s):
        t = np.asarray(t, dtype=float)
        s = np.asarray(s, dtype=float)
        if self.kind == "linear":
            out = float(self.params.get("a", 0.0)) * s + float(self.params.get("b", 0.0))
        elif self.kind == "exp_linear":
            out = float(self.params.get("c", 1.0)) * np.exp(t) * s
        elif self.kind == "cosine_forced":
            a = float(self.params.get("a", 0.0))
            amp = float(self.params.get("amp", 1.0))
            freq = float(self.params.get("freq", 1.0))
            out = a * s + amp * np.cos(2.0 * np.pi * freq * t)
        else:
            out = self._bilinear(t, s)
        return out if out.shape else float(out)

    def _bilinear(self, t, s):
        tn = np.asarray(self.params["t_nodes"], dtype=float)
        sn = np.asarray(self.params["s_nodes"], dtype=float)
        vals = np.asarray(self.params["values"], dtype=float)
        t = np.clip(t, tn[0], tn[-1])
        s = np.clip(s, sn[0], sn[-1])
        it = np.clip(np.searchsorted(tn, t, side="right") - 1, 0, len(tn) - 2)
        js = np.clip(np.searchsorted(sn, s, side="right") - 1, 0, len(sn) - 2)
        wt = np.where(tn[it + 1] > tn[it], (t - tn[it]) / (tn[it + 1] - tn[it]), 0.0)
        ws = np.where(sn[js + 1] > sn[js], (s - sn[js]) / (sn[js + 1] - sn[js]), 0.0)
        v00 = vals[it, js]
        v01 = vals[it, js + 1]
        v10 = vals[it + 1, js]
        v11 = vals[it + 1, js + 1]
        return (v00 * (1 - wt) * (1 - ws) + v01 * (1 - wt) * ws
                + v10 * wt * (1 - ws) + v11 * wt * ws)

    def bound_m(self):
        """Optional dominating function m with |f(t, .)| <= m(t), or None."""
        m = self.params.get("m")
        if m is None:
            return None
        return make_h(m) if isinstance(m, dict) else (lambda t: np.full_like(np.asarray(t, float), float(m)))

    def check_bound(self, t_samples, s_samples) -> CheckResult:
        m = self.bound_m()
        if m is None:
            return CheckResult(True)
        for t in np.asarray(t_samples, dtype=float):
            cap = float(np.asarray(m(t)))
            for s in np.asarray(s_samples, dtype=float):
                val = float(np.asarray(self(t, s)))
                if abs(val) > cap + 1e-12:
                    return CheckResult(False, (float(t), float(s), val, cap))
        return CheckResult(True)


def make_h(spec, alpha: float | None = None):
    """Comparison weight h(t) from a config dict or a plain number.

    kinds: const (value) and exp_gap (alpha - e^t, alpha taken from the dict
    itself or from the surrounding solver context).
    """
    if callable(spec):
        return spec
    if isinstance(spec, (int, float)):
        v = float(spec)
        return lambda t: np.full_like(np.asarray(t, dtype=float), v)
    if not isinstance(spec, dict) or "kind" not in spec:
        raise InstanceFormatError("h spec must be a number or an object with a 'kind'")
    kind = spec["kind"]
    params = dict(spec.get("params", {}))
    params.update({k: v for k, v in spec.items() if k not in ("kind", "params", "schema")})
    if kind == "const":
        v = float(params.get("value", params.get("c", 0.0)))
        return lambda t: np.full_like(np.asarray(t, dtype=float), v)
    if kind == "exp_gap":
        a = params.get("alpha", alpha)
        if a is None:
            raise InstanceFormatError("exp_gap h needs an alpha")
        a = float(a)
        return lambda t: a - np.exp(np.asarray(t, dtype=float))
    raise InstanceFormatError(f"unknown h kind {kind!r}")


# ----- operator and checks ----------------------------------------------


def integral_operator(kernel: GreensKernel, f: RhsFunction, u: GridFunction,
                      weights: np.ndarray | None = None) -> GridFunction:
    """(F u)(t_i) on the grid of u."""
    W = kernel_matrix(kernel, u.grid) if weights is None else weights
    t = u.grid.nodes
    try:
        fv = np.asarray(f(t, u.values), dtype=float)
    except (ArithmeticError, ValueError, TypeError) as exc:
        raise EvaluationFailure(f"right-hand side failed on the grid: {exc}") from exc
    if fv.shape != u.values.shape:
        fv = np.broadcast_to(fv, u.values.shape)
    if not np.all(np.isfinite(fv)):
        i = int(np.nonzero(~np.isfinite(fv))[0][0])
        raise EvaluationFailure(
            f"right-hand side is not finite at t = {t[i]}, s = {u.values[i]}")
    g = fv + kernel.alpha * u.values
    return GridFunction(u.grid, W @ g)


def _derivative(values: np.ndarray, h: float) -> np.ndarray:
    """Second-order finite differences: central inside, one-sided at the ends."""
    n = len(values)
    d = np.empty(n)
    d[1:-1] = (values[2:] - values[:-2]) / (2 * h)
    d[0] = (-3 * values[0] + 4 * values[1] - values[2]) / (2 * h)
    d[-1] = (3 * values[-1] - 4 * values[-2] + values[-3]) / (2 * h)
    return d


def is_lower_solution(f: RhsFunction, w: GridFunction, tol: float = 1e-6) -> CheckResult:
    """w' <= f(t, w) at every node (finite differences) and w(0) <= w(T)."""
    t = w.grid.nodes
    dw = _derivative(w.values, w.grid.spacing)
    fw = np.asarray(f(t, w.values), dtype=float)
    bad = np.nonzero(dw > fw + tol)[0]
    if bad.size:
        i = int(bad[0])
        return CheckResult(False, (float(t[i]), float(dw[i]), float(fw[i])))
    if w.values[0] > w.values[-1] + tol:
        return CheckResult(False, ("endpoint order", float(w.values[0]), float(w.values[-1])))
    return CheckResult(True)


def verify_condition_iv(f1: RhsFunction, f2: RhsFunction, alpha: float, h,
                        t_samples, s_pairs, tol: float = 1e-12) -> CheckResult:
    """One-sided coupling bound between the shifted right-hand sides:
    |f1(t, s2) + alpha s2 - (f2(t, s1) + alpha s1)| <= h(t) (s2 - s1)
    for sampled t and ordered pairs s1 <= s2.  Also requires sup h < alpha."""
    hfun = make_h(h, alpha)
    ts = np.asarray(t_samples, dtype=float)
    hv = np.asarray(hfun(ts), dtype=float)
    sup_h = float(np.max(hv))
    if not sup_h < alpha:
        return CheckResult(False, ("sup h", sup_h, alpha))
    for s1, s2 in s_pairs:
        if s1 > s2:
            raise ParamOutOfRange(f"s_pairs must be ordered, got ({s1}, {s2})")
        lhs = np.abs(np.asarray(f1(ts, np.full_like(ts, float(s2))), dtype=float)
                     + alpha * s2
                     - np.asarray(f2(ts, np.full_like(ts, float(s1))), dtype=float)
                     - alpha * s1)
        rhs = hv * (s2 - s1)
        bad = np.nonzero(lhs > rhs + tol)[0]
        if bad.size:
            i = int(bad[0])
            return CheckResult(False, (float(ts[i]), float(s1), float(s2),
                                       float(lhs[i]), float(rhs[i])))
    return CheckResult(True)


# ----- solvers ----------------------------------------------------------


@dataclass(frozen=True)
class PbvpReport:
    iterations: int
    beta: float
    max_ratio: float
    final_increment: float
    periodicity_residual: float
    ode_residual: float
    ode_residual_periodic: float
    ratios: tuple[float, ...] = ()
    monotone_steps: tuple[bool, ...] = ()


def _ode_residuals(f: RhsFunction, u: GridFunction) -> tuple[float, float]:
    t = u.grid.nodes
    h = u.grid.spacing
    fu = np.asarray(f(t, u.values), dtype=float)
    d_one_sided = _derivative(u.values, h)
    res_one = float(np.max(np.abs(d_one_sided - fu)))
    # periodic wrap: u(0) = u(T) identifies the endpoints, so the neighbours of
    # node 0 are node n-2 (behind) and node 1 (ahead)
    d_per = d_one_sided.copy()
    d_per[0] = (u.values[1] - u.values[-2]) / (2 * h)
    d_per[-1] = d_per[0]
    res_per = float(np.max(np.abs(d_per - fu)))
    return res_one, res_per


def _beta_of(h, alpha: float, grid: TimeGrid) -> float:
    hfun = make_h(h, alpha)
    return float(np.max(np.asarray(hfun(grid.nodes), dtype=float))) / alpha


def solve_pbvp(f: RhsFunction, alpha: float, h, w0: GridFunction,
               tol: float = TOL_PBVP, max_iter: int = MAX_ITER,
               check_lower: bool = True,
               lower_tol: float = 1e-6) -> tuple[GridFunction, PbvpReport]:
    """Picard iteration u_{k+1} = F u_k starting one step above the lower
    solution w0.  Stops when the sup increment drops to tol."""
    grid = w0.grid
    beta = _beta_of(h, alpha, grid)
    if not beta < 1.0:
        raise BetaNotContractive(f"sup h / alpha = {beta} is not < 1")
    if check_lower:
        low = is_lower_solution(f, w0, tol=lower_tol)
        if not low:
            raise NotLowerSolution(f"w0 is not a lower solution: witness {low.witness}")
    kernel = GreensKernel(alpha=alpha, period=grid.period)
    W = kernel_matrix(kernel, grid)

    u = integral_operator(kernel, f, w0, W)
    prev_inc = None
    ratios: list[float] = []
    monotone = [bool(np.all(u.values >= w0.values - 1e-12))]
    floor = 100 * np.finfo(float).eps * max(1.0, u.sup_norm())
    for k in range(max_iter):
        nxt = integral_operator(kernel, f, u, W)
        inc = float(np.max(np.abs(nxt.values - u.values)))
        monotone.append(bool(np.all(nxt.values >= u.values - 1e-12)))
        if prev_inc is not None and prev_inc > floor:
            ratios.append(inc / prev_inc)
        prev_inc = inc
        u = nxt
        if inc <= tol:
            res_one, res_per = _ode_residuals(f, u)
            report = PbvpReport(
                iterations=k + 2,
                beta=beta,
                max_ratio=max(ratios, default=0.0),
                final_increment=inc,
                periodicity_residual=u.periodicity_residual(),
                ode_residual=res_one,
                ode_residual_periodic=res_per,
                ratios=tuple(ratios),
                monotone_steps=tuple(monotone),
            )
            return u, report
    raise NoConvergence(f"Picard iteration did not reach {tol} in {max_iter} steps")


def solve_common_pbvp(f1: RhsFunction, f2: RhsFunction, alpha: float, h,
                      w0: GridFunction, tol: float = TOL_PBVP,
                      max_iter: int = MAX_ITER,
                      check_lower: bool = True, lower_tol: float = 1e-6,
                      check_condition_iv: bool = True,
                      strict_monotone: bool = True) -> tuple[GridFunction, PbvpReport]:
    """Alternating iteration for a pair of periodic problems sharing a solution.

    F1 applies the kernel to f2 + alpha * id, F2 applies it to f1 + alpha * id;
    the orbit is x0 = F2 w0, then F1, F2 alternating.  The one-sided coupling
    condition is sampled on the grid and a state lattice before iterating, and
    each step is checked for the pointwise monotone ordering.
    """
    grid = w0.grid
    beta = _beta_of(h, alpha, grid)
    if not beta < 1.0:
        raise BetaNotContractive(f"sup h / alpha = {beta} is not < 1")
    if check_lower:
        low = is_lower_solution(f1, w0, tol=lower_tol)
        if not low:
            raise NotLowerSolution(f"w0 is not a lower solution of f1: witness {low.witness}")
    if check_condition_iv:
        lo = float(np.min(w0.values)) - 1.0
        hi = float(np.max(w0.values)) + 1.0
        svals = np.linspace(lo, hi, 9)
        pairs = [(float(a), float(b)) for a in svals for b in svals if a <= b]
        ok = verify_condition_iv(f1, f2, alpha, h, grid.nodes, pairs)
        if not ok:
            raise ConditionIvViolated(ok.witness)

    kernel = GreensKernel(alpha=alpha, period=grid.period)
    W = kernel_matrix(kernel, grid)

    def f_op(f, u):
        return integral_operator(kernel, f, u, W)

    u = f_op(f1, w0)  # x0, one kernel application of the lower solution
    monotone = [bool(np.all(u.values >= w0.values - 1e-12))]
    if strict_monotone and not monotone[0]:
        raise MonotonicityBroken("first step fell below the lower solution")
    prev_inc = None
    ratios: list[float] = []
    floor = 100 * np.finfo(float).eps * max(1.0, u.sup_norm())
    use_f = f2  # x1 = F1 x0 and F1 rides on f2
    for k in range(max_iter):
        nxt = f_op(use_f, u)
        inc = float(np.max(np.abs(nxt.values - u.values)))
        step_ok = bool(np.all(nxt.values >= u.values - 1e-12))
        monotone.append(step_ok)
        if strict_monotone and not step_ok:
            raise MonotonicityBroken(f"step {k} lost the pointwise ordering")
        if prev_inc is not None and prev_inc > floor:
            ratios.append(inc / prev_inc)
        prev_inc = inc
        u = nxt
        use_f = f1 if use_f is f2 else f2
        if inc <= tol:
            r1 = float(np.max(np.abs(f_op(f2, u).values - u.values)))
            r2 = float(np.max(np.abs(f_op(f1, u).values - u.values)))
            if max(r1, r2) <= max(10 * tol, 1e-9):
                res_one, res_per = _ode_residuals(f1, u)
                report = PbvpReport(
                    iterations=k + 2,
                    beta=beta,
                    max_ratio=max(ratios, default=0.0),
                    final_increment=inc,
                    periodicity_residual=u.periodicity_residual(),
                    ode_residual=res_one,
                    ode_residual_periodic=res_per,
                    ratios=tuple(ratios),
                    monotone_steps=tuple(monotone),
                )
                return u, report
    raise NoConvergence(f"alternating iteration did not reach {tol} in {max_iter} steps")
