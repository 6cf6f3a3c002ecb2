"""Two-level reduction of the rank-two search Hamiltonian.

The control problem lives in an n-dimensional space with

    H(t) = a(t) |w><w| + b(t) |m><m|,

where |w> is the uniform superposition of all n basis states and |m> is the
marked basis state.  The dynamics never leaves span{|w>, |m>}, so everything
reduces to a two-level problem on the orthonormal pair {|u>, |m>}, with |u>
the uniform superposition of the n-1 unmarked states.  In that basis

    H = (a+b)/2 * 1  +  delta * sigma_z  +  omega * sigma_x,
    delta = (a-b)/2 - a/n,      omega = a*sqrt(n-1)/n,

with sigma_z = |u><u| - |m><m|.  Eigenvalues are (a+b)/2 +/- R with
R = sqrt(delta^2 + omega^2); the upper eigenvector is
|+> = cos(theta)|u> + sin(theta)|m> with 2*theta = atan2(omega, delta), which
keeps theta continuous in [0, pi/2] along any path with omega >= 0.  The
non-adiabatic coupling between the instantaneous eigenvectors is

    d(theta)/dt = sqrt(n-1)/n * (a*db/dt - da/dt*b) / gap^2.

Units: hbar = 1 throughout, couplings are angular frequencies.

The kernel functions (`reduced_terms`, `eigenvalues`, `energy_gap`,
`mixing_angle`, `coupling_rate`) accept scalars or numpy arrays and
broadcast; the typed wrappers operate on single coupling points.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegeneratePoint, InvalidParameter, NonUnit, OracleSizeExceeded

DEFAULT_ORACLE_CAP = 512


@dataclass(frozen=True)
class SearchInstance:
    """Database size and marked index.

    The reduced dynamics depends on n only; `marked` matters solely for
    full-space (oracle) operations.
    """

    n: int
    marked: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "marked", int(self.marked))
        if self.n < 2:
            raise InvalidParameter(f"database size must be >= 2, got n={self.n}")
        if not 0 <= self.marked < self.n:
            raise InvalidParameter(
                f"marked index must lie in [0, {self.n}), got {self.marked}"
            )


@dataclass(frozen=True)
class CouplingPoint:
    """Instantaneous couplings (a, b) and their time derivatives."""

    a: float
    b: float
    a_dot: float = 0.0
    b_dot: float = 0.0

    def __post_init__(self) -> None:
        if self.a < 0.0 or self.b < 0.0:
            raise InvalidParameter(
                f"couplings must be non-negative, got a={self.a}, b={self.b}"
            )


@dataclass(frozen=True)
class ReducedHamiltonian:
    """Coefficients of the two-level form: mean*1 + delta*sigma_z + omega*sigma_x."""

    mean: float
    delta: float
    omega: float


@dataclass(frozen=True)
class EigenSystem:
    """Instantaneous eigenvalues and mixing angle, theta in [0, pi/2]."""

    lambda_plus: float
    lambda_minus: float
    theta: float

    @property
    def gap(self) -> float:
        return self.lambda_plus - self.lambda_minus


def reduced_terms(a, b, n):
    """Return (mean, delta, omega) for couplings a, b at database size n."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    n = np.asarray(n, dtype=float)
    mean = 0.5 * (a + b)
    delta = 0.5 * (a - b) - a / n
    omega = a * np.sqrt(n - 1.0) / n
    return mean, delta, omega


def eigenvalues(a, b, n):
    """Return (lambda_plus, lambda_minus)."""
    mean, delta, omega = reduced_terms(a, b, n)
    r = np.hypot(delta, omega)
    return mean + r, mean - r


def energy_gap(a, b, n):
    """Return lambda_plus - lambda_minus = sqrt(a^2 + b^2 - 2ab(1 - 2/n))."""
    _, delta, omega = reduced_terms(a, b, n)
    return 2.0 * np.hypot(delta, omega)


def mixing_angle(a, b, n):
    """Return theta with 2*theta = atan2(omega, delta).

    omega >= 0 for non-negative couplings, so theta is continuous in
    [0, pi/2]; theta = pi/2 is reached exactly when a = 0 (|+> = |m>).
    """
    _, delta, omega = reduced_terms(a, b, n)
    return 0.5 * np.arctan2(omega, delta)


def coupling_rate(a, b, a_dot, b_dot, n):
    """Return d(theta)/dt = sqrt(n-1)/n * (a*b_dot - a_dot*b) / gap^2."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    nf = np.asarray(n, dtype=float)
    gap = energy_gap(a, b, nf)
    num = np.sqrt(nf - 1.0) / nf * (a * np.asarray(b_dot, float) - np.asarray(a_dot, float) * b)
    return num / gap**2


def reduced_hamiltonian(point: CouplingPoint, inst: SearchInstance) -> ReducedHamiltonian:
    """Project the rank-two Hamiltonian onto span{|u>, |m>}."""
    mean, delta, omega = reduced_terms(point.a, point.b, inst.n)
    return ReducedHamiltonian(float(mean), float(delta), float(omega))


def eigensystem(point: CouplingPoint, inst: SearchInstance) -> EigenSystem:
    """Instantaneous eigenvalues and mixing angle at one coupling point.

    Raises DegeneratePoint when a = b = 0, where the splitting vanishes and
    the eigenvectors are undefined.
    """
    mean, delta, omega = reduced_terms(point.a, point.b, inst.n)
    r = float(np.hypot(delta, omega))
    if r == 0.0:
        raise DegeneratePoint("a = b = 0: eigenvectors undefined")
    theta = float(0.5 * np.arctan2(omega, delta))
    return EigenSystem(float(mean) + r, float(mean) - r, theta)


def theta_dot(point: CouplingPoint, inst: SearchInstance) -> float:
    """Non-adiabatic coupling at one point; requires a nonzero gap."""
    gap = float(energy_gap(point.a, point.b, inst.n))
    if gap == 0.0:
        raise DegeneratePoint("a = b = 0: coupling rate undefined")
    return float(coupling_rate(point.a, point.b, point.a_dot, point.b_dot, inst.n))


def adiabatic_projection(state, point: CouplingPoint, inst: SearchInstance):
    """Populations (p_plus, p_minus) of `state` on the instantaneous eigenbasis.

    `state` is any (c_u, c_m) amplitude pair, normalized to 1 within 1e-9.
    The returned pair is normalized so p_plus + p_minus = 1 exactly up to
    rounding.
    """
    c_u, c_m = state
    nrm = float(np.hypot(abs(c_u), abs(c_m)))
    if abs(nrm - 1.0) > 1e-9:
        raise NonUnit(f"state norm {nrm!r} deviates from 1 beyond 1e-9")
    es = eigensystem(point, inst)
    c, s = np.cos(es.theta), np.sin(es.theta)
    amp_plus = c * c_u + s * c_m
    amp_minus = s * c_u - c * c_m
    p_plus = float(abs(amp_plus) ** 2)
    p_minus = float(abs(amp_minus) ** 2)
    total = p_plus + p_minus
    return p_plus / total, p_minus / total


def full_hamiltonian(
    point: CouplingPoint, inst: SearchInstance, cap: int = DEFAULT_ORACLE_CAP
) -> np.ndarray:
    """Dense n x n Hamiltonian a*|w><w| + b*|m><m| (real symmetric).

    Refuses with OracleSizeExceeded when n exceeds `cap`; dense work scales
    as n^2 and is meant for cross-checks, not production runs.
    """
    if inst.n > cap:
        raise OracleSizeExceeded(f"n={inst.n} exceeds the dense-operation cap {cap}")
    h = np.full((inst.n, inst.n), point.a / inst.n, dtype=float)
    h[inst.marked, inst.marked] += point.b
    return h
