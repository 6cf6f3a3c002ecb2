"""Closed-form loss estimates and adiabaticity diagnostics.

For the local strategy the two-level problem is exactly solvable in the
adiabatic frame: with kappa = sqrt(1 + eps^2) the final loss is

    P_loss = eps^2/(1+eps^2) * sin^2( kappa/eps * arctan(sqrt(n-1)) ),

which for large n and small eps tends to eps^2 * sin^2(pi/(2 eps)) with
upper envelope eps^2.  The sin^2 factor vanishes on a measure-zero family
(eps = 1/(2p) in the asymptotic form); reports flag such values as
non-robust rather than advertising a zero.

For the parallel strategy with a tanh ramp the untruncated problem maps
onto an exactly solvable constant-gap crossing, giving

    P_loss ~ sech^2(pi * T_par * beta / sqrt(n)) = sech^2(pi/gamma),

with gamma = sqrt(n)/T_par (beta = 1 units), and the large-argument form
4*exp(-2*pi/gamma).  Window truncation adds an exponentially small floor
on top, visible in sweeps at large 1/gamma.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from . import model
from .errors import InvalidParameter
from .schedules import Schedule, Strategy


@dataclass(frozen=True)
class LossPrediction:
    """Analytic loss references for one schedule."""

    exact: float | None
    asymptotic: float
    regime_note: str


@dataclass(frozen=True)
class AdiabaticityReport:
    """Global adiabaticity check: max theta_dot vs eps * min gap / 2."""

    holds: bool
    ratio: float
    max_theta_dot: float
    min_gap: float


def _sech2(x: float) -> float:
    # overflow-safe: sech^2(x) = (2 e^{-|x|} / (1 + e^{-2|x|}))^2
    e = math.exp(-abs(x))
    s = 2.0 * e / (1.0 + e * e)
    return s * s


def local_loss_exact(epsilon: float, n: float) -> float:
    """Exact final loss of the local strategy.

    `n` may be non-integral (> 1): the formula is analytic in n and the
    zero family n = 1 + tan^2(x) is useful in studies.
    """
    if not epsilon > 0:
        raise InvalidParameter(f"epsilon must be positive, got {epsilon!r}")
    if not n > 1:
        raise InvalidParameter(f"n must exceed 1, got {n!r}")
    kappa2 = 1.0 + epsilon * epsilon
    phase = math.sqrt(kappa2) / epsilon * math.atan(math.sqrt(n - 1.0))
    return epsilon * epsilon / kappa2 * math.sin(phase) ** 2


def local_loss_asymptotic(epsilon: float) -> float:
    """Large-n, small-eps form eps^2 * sin^2(pi/(2 eps))."""
    if not epsilon > 0:
        raise InvalidParameter(f"epsilon must be positive, got {epsilon!r}")
    return epsilon * epsilon * math.sin(0.5 * math.pi / epsilon) ** 2


def local_loss_envelope(epsilon: float) -> float:
    """Upper envelope eps^2 of the asymptotic local loss."""
    if not epsilon > 0:
        raise InvalidParameter(f"epsilon must be positive, got {epsilon!r}")
    return epsilon * epsilon


def parallel_loss_asymptotic(beta: float, t_par: float, n: float) -> float:
    """Constant-gap asymptote sech^2(pi * t_par * beta / sqrt(n))."""
    if not (beta > 0 and t_par > 0 and n > 1):
        raise InvalidParameter("need beta > 0, t_par > 0, n > 1")
    return _sech2(math.pi * t_par * beta / math.sqrt(n))


def parallel_loss_gamma(gamma: float) -> tuple[float, float]:
    """Both asymptotic forms (sech^2(pi/gamma), 4*exp(-2*pi/gamma))."""
    if not gamma > 0:
        raise InvalidParameter(f"gamma must be positive, got {gamma!r}")
    x = math.pi / gamma
    return _sech2(x), 4.0 * math.exp(-2.0 * x)


def linear_cost_bound(epsilon: float, n: int) -> float:
    """Adiabaticity budget of the linear strategy: alpha*T must exceed 2n/eps."""
    if not epsilon > 0:
        raise InvalidParameter(f"epsilon must be positive, got {epsilon!r}")
    if n < 2:
        raise InvalidParameter(f"database size must be >= 2, got n={n}")
    return 2.0 * n / epsilon


def resonant_epsilon(epsilon: float, tol: float = 1e-9) -> bool:
    """True when eps is within tol of the measure-zero family 1/(2p), p = 1, 2, ...

    At such eps the asymptotic local loss vanishes identically; the zero is
    not robust to detuning, so reports flag it.
    """
    if not epsilon > 0:
        raise InvalidParameter(f"epsilon must be positive, got {epsilon!r}")
    p = 0.5 / epsilon
    return p >= 1.0 - tol and abs(p - round(p)) < tol


def loss_prediction(schedule: Schedule) -> LossPrediction | None:
    """Analytic references for a schedule; None for the linear strategy."""
    if schedule.kind is Strategy.LOCAL:
        note = "exact two-level interference form"
        if resonant_epsilon(schedule.epsilon):
            note += "; epsilon on the 1/(2p) family: loss zero is non-robust"
        return LossPrediction(
            exact=local_loss_exact(schedule.epsilon, schedule.n),
            asymptotic=local_loss_asymptotic(schedule.epsilon),
            regime_note=note,
        )
    if schedule.kind is Strategy.PARALLEL:
        return LossPrediction(
            exact=None,
            asymptotic=parallel_loss_asymptotic(
                schedule.alpha_or_beta, schedule.t_char, schedule.n
            ),
            regime_note="constant-gap asymptote; window truncation adds a floor",
        )
    return None


def adiabaticity_check(
    schedule: Schedule, epsilon: float | None = None, samples: int = 1000
) -> AdiabaticityReport:
    """Check max theta_dot < eps * min gap / 2 over the window.

    Extremes are located by dense sampling plus local refinement.  The
    returned ratio is max_theta_dot / (eps * min_gap / 2); the criterion
    holds when it is below 1.
    """
    if samples < 1000:
        raise InvalidParameter(f"samples must be >= 1000, got {samples}")
    if epsilon is None:
        epsilon = schedule.epsilon
    if epsilon is None or not epsilon > 0:
        raise InvalidParameter("a positive epsilon is required for the check")

    n = schedule.n
    t_i, t_f = schedule.window

    def rate(t):
        a, b, a_dot, b_dot = schedule.couplings(t)
        return model.coupling_rate(a, b, a_dot, b_dot, n)

    def gap(t):
        a, b, _, _ = schedule.couplings(t)
        return model.energy_gap(a, b, n)

    ts = np.linspace(t_i, t_f, samples)

    def refine(fn, sign: float) -> float:
        values = sign * fn(ts)
        i = int(np.argmin(values))
        best = float(values[i])
        if 0 < i < len(ts) - 1:
            res = minimize_scalar(
                lambda t: sign * float(fn(t)),
                bounds=(float(ts[i - 1]), float(ts[i + 1])),
                method="bounded",
                options={"xatol": 1e-10 * (t_f - t_i)},
            )
            best = min(best, float(res.fun))
        return sign * best

    max_rate = refine(rate, -1.0)
    min_gap = refine(gap, 1.0)
    bound = 0.5 * epsilon * min_gap
    ratio = max_rate / bound
    return AdiabaticityReport(
        holds=bool(max_rate < bound),
        ratio=float(ratio),
        max_theta_dot=float(max_rate),
        min_gap=float(min_gap),
    )
