"""Coupling schedules: linear, local (gap-adapted), and parallel (constant gap).

All three interpolate between the boundary conditions b(t_i) = 0 (ground
state |w>, trivially preparable) and a(t_f) = 0 (ground state |m>, the
solution).  They differ in how the path crosses the avoided crossing:

* linear: a and b are straight ramps with a + b = alpha.  The gap dips to
  alpha/sqrt(n) at the midpoint, so the global adiabaticity budget scales
  as alpha*T > 2n/eps.
* local: a + b = alpha with the crossing rate adapted so the local
  adiabaticity ratio is pinned, 2*d(theta)/dt = eps*gap at every instant.
  Closed form, with s = (2t - t_i - t_f)/T and T = 2*sqrt(n-1)/(alpha*eps):

      a(t) = alpha/2 * (1 - s / (sqrt(n) * sqrt(1 - s^2 (n-1)/n)))
      gap(t) = alpha/sqrt(n) / sqrt(1 - s^2 (n-1)/n)

* parallel: both couplings vary along the constant-gap level line
  gap = 2*beta/sqrt(n), an ellipse in the (a+b, b-a) plane:

      a, b = beta * (sqrt(1 - F^2 (n-1)/n) -/+ F/sqrt(n)),

  with F(t) = tanh(t/T_par) or erf(t/T_par), truncated to the window
  [-r*T_par/2, +r*T_par/2].  F is evaluated as-is at the window edges, so
  the boundary conditions hold only up to an exponentially small residual.

Cost accounting: cost = a_peak * t_eff, with a_peak the largest value of
a(t) over the window and t_eff the window length (r*T_par for parallel).
For the parallel strategy the numeric maximum is beta*sqrt(n/(n-1)) at
F = -1/sqrt(n-1); `parallel_peak_reference` exposes the alternative closed
form beta*(n-2)/sqrt(n(n-1)) that the equal-cost bookkeeping
(`equal_cost_parallel_time`) is built on, and reports surface both.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar
from scipy.special import erf

from .errors import ExactDegenerateN, InvalidParameter
from .model import SearchInstance


class Strategy(str, enum.Enum):
    LINEAR = "linear"
    LOCAL = "local"
    PARALLEL = "parallel"


class Shape(str, enum.Enum):
    """Ramp profile F(t) for the parallel strategy."""

    TANH = "tanh"
    ERF = "erf"


@dataclass(frozen=True)
class CostReport:
    """Peak coupling, effective duration, and their product."""

    a_peak: float
    t_eff: float
    cost: float


@dataclass(frozen=True)
class Schedule:
    """One concrete coupling schedule over a finite time window.

    `t_char` is the characteristic time of the kind: the total duration for
    linear and local, the ramp time T_par for parallel (whose window is
    r*T_par long).  `epsilon` is the defining adiabaticity parameter for
    local and optional metadata otherwise.
    """

    kind: Strategy
    n: int
    alpha_or_beta: float
    t_char: float
    window: tuple[float, float]
    epsilon: float | None = None
    r: float | None = None
    shape: Shape | None = None

    def couplings(self, t):
        """Vectorized (a, b, a_dot, b_dot) at times t (scalar or array)."""
        t = np.asarray(t, dtype=float)
        t_i, t_f = self.window
        if self.kind is Strategy.LINEAR:
            span = t_f - t_i
            amp = self.alpha_or_beta
            a = amp * (t_f - t) / span
            b = amp * (t - t_i) / span
            a_dot = np.full_like(t, -amp / span)
            b_dot = np.full_like(t, amp / span)
            return a, b, a_dot, b_dot
        if self.kind is Strategy.LOCAL:
            alpha = self.alpha_or_beta
            span = t_f - t_i
            sqrt_n = math.sqrt(self.n)
            k = (self.n - 1.0) / self.n
            s = (2.0 * t - t_i - t_f) / span
            root = np.sqrt(1.0 - k * s * s)
            a = 0.5 * alpha * (1.0 - s / (sqrt_n * root))
            # exact boundary values, not left to rounding
            a = np.where(s == 1.0, 0.0, a)
            a = np.where(s == -1.0, alpha, a)
            a_dot = -(alpha / (sqrt_n * span)) / root**3
            return a, alpha - a, a_dot, -a_dot
        beta = self.alpha_or_beta
        sqrt_n = math.sqrt(self.n)
        k = (self.n - 1.0) / self.n
        x = t / self.t_char
        if self.shape is Shape.TANH:
            f = np.tanh(x)
            f_dot = (1.0 - f * f) / self.t_char
        else:
            f = erf(x)
            f_dot = (2.0 / math.sqrt(math.pi)) * np.exp(-x * x) / self.t_char
        root = np.sqrt(1.0 - k * f * f)
        root_dot = -k * f * f_dot / root
        a = beta * (root - f / sqrt_n)
        b = beta * (root + f / sqrt_n)
        a_dot = beta * (root_dot - f_dot / sqrt_n)
        b_dot = beta * (root_dot + f_dot / sqrt_n)
        return a, b, a_dot, b_dot

    def at(self, t: float):
        """CouplingPoint at one time."""
        from .model import CouplingPoint

        a, b, a_dot, b_dot = self.couplings(t)
        # clip rounding-level negatives at the window edges
        return CouplingPoint(max(float(a), 0.0), max(float(b), 0.0), float(a_dot), float(b_dot))

    def to_config(self) -> dict:
        """JSON-ready description; inverse of `Schedule.from_config`."""
        key = "beta" if self.kind is Strategy.PARALLEL else "alpha"
        cfg = {"strategy": self.kind.value, "n": self.n, key: self.alpha_or_beta,
               "T": self.t_char}
        if self.epsilon is not None:
            cfg["epsilon"] = self.epsilon
        if self.kind is Strategy.PARALLEL:
            cfg["r"] = self.r
            cfg["shape"] = self.shape.value
        return cfg

    @classmethod
    def from_config(cls, cfg: dict) -> "Schedule":
        cfg = dict(cfg)
        try:
            kind = Strategy(cfg.pop("strategy"))
            n = int(cfg.pop("n"))
        except (KeyError, ValueError) as exc:
            raise InvalidParameter(f"bad schedule config: {exc}") from exc
        inst = SearchInstance(n)
        if kind is Strategy.LINEAR:
            t_given = cfg.pop("T", None)
            if t_given is None:
                raise InvalidParameter("linear schedule config requires T")
            sched = linear_schedule(cfg.pop("alpha", 1.0), t_given, inst,
                                    epsilon=cfg.pop("epsilon", None))
        elif kind is Strategy.LOCAL:
            alpha = cfg.pop("alpha", 1.0)
            epsilon = cfg.pop("epsilon", None)
            if epsilon is None:
                raise InvalidParameter("local schedule config requires epsilon")
            sched = local_schedule(alpha, epsilon, inst)
            t_given = cfg.pop("T", None)
            if t_given is not None and not math.isclose(t_given, sched.t_char, rel_tol=1e-9):
                raise InvalidParameter(
                    f"local duration T={t_given} inconsistent with epsilon={epsilon}"
                )
        else:
            t_given = cfg.pop("T", None)
            if t_given is None:
                raise InvalidParameter("parallel schedule config requires T")
            sched = parallel_schedule(cfg.pop("beta", 1.0), t_given, inst,
                                      r=cfg.pop("r", 8.0),
                                      shape=cfg.pop("shape", "tanh"))
        if cfg:
            raise InvalidParameter(f"unknown schedule config keys: {sorted(cfg)}")
        return sched


def _require_positive(**kwargs) -> None:
    for name, value in kwargs.items():
        if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0):
            raise InvalidParameter(f"{name} must be a positive finite number, got {value!r}")


def linear_schedule(
    alpha: float, t_total: float, inst: SearchInstance, epsilon: float | None = None
) -> Schedule:
    """Straight ramps a = alpha*(t_f - t)/T, b = alpha*(t - t_i)/T on [0, T]."""
    _require_positive(alpha=alpha, t_total=t_total)
    if epsilon is not None:
        _require_positive(epsilon=epsilon)
    return Schedule(Strategy.LINEAR, inst.n, float(alpha), float(t_total),
                    (0.0, float(t_total)), epsilon=epsilon)


def local_schedule(alpha: float, epsilon: float, inst: SearchInstance) -> Schedule:
    """Gap-adapted schedule with 2*d(theta)/dt = eps*gap, on [0, 2*sqrt(n-1)/(alpha*eps)]."""
    _require_positive(alpha=alpha, epsilon=epsilon)
    t_total = 2.0 * math.sqrt(inst.n - 1.0) / (alpha * epsilon)
    return Schedule(Strategy.LOCAL, inst.n, float(alpha), t_total, (0.0, t_total),
                    epsilon=float(epsilon))


def parallel_schedule(
    beta: float,
    t_par: float,
    inst: SearchInstance,
    r: float = 8.0,
    shape: Shape = Shape.TANH,
) -> Schedule:
    """Constant-gap schedule on the truncated window [-r*T_par/2, +r*T_par/2]."""
    _require_positive(beta=beta, t_par=t_par, r=r)
    try:
        shape = Shape(shape)
    except ValueError as exc:
        raise InvalidParameter(f"shape must be 'tanh' or 'erf', got {shape!r}") from exc
    half = 0.5 * r * t_par
    return Schedule(Strategy.PARALLEL, inst.n, float(beta), float(t_par),
                    (-half, half), r=float(r), shape=shape)


def cost(schedule: Schedule) -> CostReport:
    """Peak coupling times effective duration.

    a_peak is located by dense sampling over the window followed by local
    refinement, accurate to 1e-10 relative; t_eff is the window length
    (r*T_par for the parallel strategy).
    """
    t_i, t_f = schedule.window
    ts = np.linspace(t_i, t_f, 4097)
    a = schedule.couplings(ts)[0]
    i = int(np.argmax(a))
    best = float(a[i])
    if 0 < i < len(ts) - 1:
        res = minimize_scalar(
            lambda t: -float(schedule.couplings(t)[0]),
            bounds=(float(ts[i - 1]), float(ts[i + 1])),
            method="bounded",
            options={"xatol": 1e-10 * (t_f - t_i)},
        )
        best = max(best, -float(res.fun))
    a_peak = max(best, float(a[0]), float(a[-1]))
    t_eff = t_f - t_i
    return CostReport(a_peak=a_peak, t_eff=t_eff, cost=a_peak * t_eff)


def equal_cost_gamma(epsilon: float, r: float) -> float:
    """Sweep rate gamma = sqrt(n)/T_par matching the local cost at large n."""
    _require_positive(epsilon=epsilon, r=r)
    return 0.5 * epsilon * r


def parallel_peak_reference(beta: float, n: int) -> float:
    """Closed-form peak coupling beta*(n-2)/sqrt(n(n-1)) used by the equal-cost bookkeeping.

    Direct maximization of a(t) instead gives beta*sqrt(n/(n-1)); cost()
    reports that numeric maximum and comparisons surface both values.
    """
    _require_positive(beta=beta)
    if n < 2:
        raise InvalidParameter(f"database size must be >= 2, got n={n}")
    return beta * (n - 2.0) / math.sqrt(n * (n - 1.0))


def equal_cost_parallel_time(epsilon: float, r: float, n: int, beta: float = 1.0) -> float:
    """Ramp time T_par = 2(n-1)sqrt(n) / ((n-2) eps beta r) matching the local cost.

    The matching uses the closed-form peak `parallel_peak_reference`, so
    peak_reference * r * T_par = 2*sqrt(n-1)/eps exactly.  Undefined at
    n = 2, where the reference peak vanishes.
    """
    _require_positive(epsilon=epsilon, r=r, beta=beta)
    if n < 2:
        raise InvalidParameter(f"database size must be >= 2, got n={n}")
    if n == 2:
        raise ExactDegenerateN("equal-cost matching is undefined at n = 2")
    return 2.0 * (n - 1.0) * math.sqrt(n) / ((n - 2.0) * epsilon * beta * r)
