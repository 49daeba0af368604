"""Mean-field predictions for the rumour process on a small-world ring.

With ring half-degree k and shortcut intensity c, write B = 2k + c for the
mean degree and let alpha = E[1/(X + 2k)] with X ~ Poisson(c): the limiting
probability that a vertex's uniform neighbour choice hits one specified
neighbour. The ignorant/spreader/stifler masses (x, y, z) then follow

    x' = -B^2 alpha x y
    y' =  B^2 alpha x y - B (1-alpha) (y+z) y - B alpha y
    z' =  B (1-alpha) (y+z) y + B alpha y

and the final stifler fraction solves z = 1 - exp(-lam z) with
lam = B alpha + 1 - alpha, solved in closed form through the principal
branch of the Lambert W function:

    z_inf = 1 + W0(-lam e^(-lam)) / lam.

The ODE flow has y = 0 as a fixed point, so the integrator's default initial
condition carries one part in n_ref of spreader mass; the Lambert closed
form is the authoritative asymptotic and the ODE serves as a cross-check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numba import njit

__all__ = [
    "MeanFieldParams",
    "MeanFieldTrajectory",
    "StepSizeRejected",
    "alpha",
    "integrate",
    "lambert_w0",
    "ode_rhs",
    "poisson_expectation",
    "z_infinity",
]

_NEG_INV_E = -math.exp(-1.0)


class StepSizeRejected(RuntimeError):
    """The fixed-step integrator left the admissible region; shrink dt."""


def poisson_expectation(f, c: float, tol: float = 1e-14, f_bound: float = 1.0) -> float:
    """E[f(X)] for X ~ Poisson(c), by direct summation.

    The series stops once the neglected tail can contribute less than
    ``tol``, using ``f_bound >= sup |f|`` to bound the tail term.
    """
    if c < 0:
        raise ValueError(f"c must be >= 0, got {c}")
    if c > 700:
        raise ValueError("Poisson pmf underflows for c > 700")
    if tol <= 0:
        raise ValueError("tol must be positive")
    pmf = math.exp(-c)
    mass = 0.0
    acc = 0.0
    x = 0
    max_terms = int(c + 60 * math.sqrt(c + 1) + 100)
    while True:
        acc += pmf * f(x)
        mass += pmf
        if (1.0 - mass) * f_bound < tol or x >= max_terms:
            return acc
        x += 1
        pmf *= c / x


def alpha(k: int, c: float, tol: float = 1e-14) -> float:
    """E[1/(X + 2k)] with X ~ Poisson(c); lies in (0, 1/(2k)]."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    two_k = 2 * k
    return poisson_expectation(lambda x: 1.0 / (x + two_k), c, tol, f_bound=1.0 / two_k)


@dataclass(frozen=True)
class MeanFieldParams:
    """(k, c) with the derived alpha and transcendental exponent lam."""

    k: int
    c: float
    alpha: float
    lam: float

    @classmethod
    def from_kc(
        cls,
        k: int,
        c: float,
        tol: float = 1e-14,
        alpha_override: float | None = None,
    ) -> "MeanFieldParams":
        """Build params from (k, c).

        ``alpha_override`` substitutes a fixed alpha (e.g. 1/(2k+c) for the
        degenerate constant-shortcut-count variant) without a separate code
        path.
        """
        if k < 1:
            raise ValueError(f"k must be >= 1, got {k}")
        if c < 0:
            raise ValueError(f"c must be >= 0, got {c}")
        if alpha_override is not None:
            a = float(alpha_override)
            if not 0.0 < a <= 1.0:
                raise ValueError(f"alpha override must be in (0, 1], got {a}")
        else:
            a = alpha(k, c, tol)
        lam = (2 * k + c) * a + 1.0 - a
        return cls(int(k), float(c), a, lam)

    @property
    def mean_degree(self) -> float:
        return 2 * self.k + self.c


def ode_rhs(state, params: MeanFieldParams) -> np.ndarray:
    """Right-hand side (x', y', z') of the mean-field system.

    The three components share their sub-expressions, so the returned
    derivatives sum to zero exactly.
    """
    x, y, z = state
    B = params.mean_degree
    a = params.alpha
    infect = B * B * a * x * y
    stifle = B * (1.0 - a) * (y + z) * y + B * a * y
    dx = -infect
    dy = infect - stifle
    dz = -(dx + dy)  # equals stifle, assembled so the float sum is exactly 0
    return np.array([dx, dy, dz])


@njit(cache=True)
def _rk4_kernel(x, y, z, B, a, dt, max_steps, y_stop, record_every):
    n_cap = max_steps // record_every + 3
    ts = np.empty(n_cap)
    xs = np.empty(n_cap)
    ys = np.empty(n_cap)
    zs = np.empty(n_cap)
    ts[0] = 0.0
    xs[0] = x
    ys[0] = y
    zs[0] = z
    n_rec = 1
    status = 0
    step = 0
    bba = B * B * a
    while step < max_steps:
        k1x = -bba * x * y
        s1 = B * (1.0 - a) * (y + z) * y + B * a * y
        k1y = -k1x - s1

        x2 = x + 0.5 * dt * k1x
        y2 = y + 0.5 * dt * k1y
        z2 = z + 0.5 * dt * s1
        k2x = -bba * x2 * y2
        s2 = B * (1.0 - a) * (y2 + z2) * y2 + B * a * y2
        k2y = -k2x - s2

        x3 = x + 0.5 * dt * k2x
        y3 = y + 0.5 * dt * k2y
        z3 = z + 0.5 * dt * s2
        k3x = -bba * x3 * y3
        s3 = B * (1.0 - a) * (y3 + z3) * y3 + B * a * y3
        k3y = -k3x - s3

        x4 = x + dt * k3x
        y4 = y + dt * k3y
        z4 = z + dt * s3
        k4x = -bba * x4 * y4
        s4 = B * (1.0 - a) * (y4 + z4) * y4 + B * a * y4
        k4y = -k4x - s4

        x += dt / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x)
        y += dt / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y)
        z = 1.0 - (x + y)  # mass balance is exact; park rounding drift in z
        step += 1
        done = (y_stop > 0.0 and y < y_stop) or step >= max_steps
        if x < -1e-12 or y < -1e-12 or z < -1e-12:
            status = 1
            done = True
        if done or step % record_every == 0:
            ts[n_rec] = step * dt
            xs[n_rec] = x
            ys[n_rec] = y
            zs[n_rec] = z
            n_rec += 1
            if done:
                break
    return ts[:n_rec], xs[:n_rec], ys[:n_rec], zs[:n_rec], status


@dataclass(frozen=True)
class MeanFieldTrajectory:
    t: np.ndarray
    x: np.ndarray
    y: np.ndarray
    z: np.ndarray
    dt: float

    @property
    def final_state(self) -> tuple[float, float, float]:
        return float(self.x[-1]), float(self.y[-1]), float(self.z[-1])


def integrate(
    params: MeanFieldParams,
    y0=None,
    t_max: float | None = None,
    dt: float | None = None,
    n_ref: float = 1e4,
    max_records: int = 100_000,
) -> MeanFieldTrajectory:
    """Integrate the mean-field system with fixed-step classical RK4.

    Defaults: initial state (1 - 1/n_ref, 1/n_ref, 0) mirroring one initial
    spreader; dt = 1e-3 / (2k+c)^2 so the stiffest coupling stays resolved;
    with ``t_max=None`` the run stops once the spreader mass falls below
    1e-10 (capped at t = 200). Recorded states keep x + y + z = 1 exactly;
    a component dropping below -1e-12 raises ``StepSizeRejected``.
    """
    if y0 is None:
        eps = 1.0 / float(n_ref)
        y0 = (1.0 - eps, eps, 0.0)
    x0, yy0, z0 = (float(v) for v in y0)
    if min(x0, yy0, z0) < 0.0 or abs(x0 + yy0 + z0 - 1.0) > 1e-9:
        raise ValueError(f"y0 must be a probability triple summing to 1, got {y0}")
    B = params.mean_degree
    if dt is None:
        dt = 1e-3 / B**2
    if dt <= 0:
        raise ValueError("dt must be positive")
    if t_max is None:
        horizon, y_stop = 200.0, 1e-10
    else:
        if t_max <= 0:
            raise ValueError("t_max must be positive")
        horizon, y_stop = float(t_max), 0.0
    max_steps = int(math.ceil(horizon / dt))
    record_every = max(1, max_steps // max_records)
    ts, xs, ys, zs, status = _rk4_kernel(
        x0, yy0, z0, B, params.alpha, float(dt), max_steps, y_stop, record_every
    )
    if status != 0:
        raise StepSizeRejected(
            f"state left [0, 1] at t={ts[-1]:.6g}; decrease dt (currently {dt:g})"
        )
    return MeanFieldTrajectory(ts, xs, ys, zs, float(dt))


def lambert_w0(x: float) -> float:
    """Principal branch of the Lambert W function (inverse of w -> w*e^w).

    Defined for x >= -1/e with W0(x) >= -1. A guess from the branch-point
    series (small x) or the log asymptote (large x) is polished by Halley
    iteration; the residual |w*e^w - x| lands near machine precision.
    """
    x = float(x)
    if math.isnan(x):
        raise ValueError("lambert_w0 is undefined for NaN")
    if x < _NEG_INV_E:
        if x < _NEG_INV_E - 1e-14:
            raise ValueError(f"lambert_w0 domain is [-1/e, inf), got {x}")
        x = _NEG_INV_E
    if x == _NEG_INV_E:
        return -1.0
    if x == 0.0:
        return 0.0
    if x < -0.25:
        rho = math.sqrt(2.0 * (math.e * x + 1.0))
        w = -1.0 + rho - rho**2 / 3.0 + 11.0 * rho**3 / 72.0
    elif x <= math.e:
        w = math.log1p(x)
    else:
        lx = math.log(x)
        w = lx - math.log(lx)
    for _ in range(80):
        ew = math.exp(w)
        f = w * ew - x
        w1 = w + 1.0
        delta = f / (ew * w1 - (w + 2.0) * f / (2.0 * w1))
        w -= delta
        if abs(delta) <= 1e-14 * (1.0 + abs(w)):
            break
    return w


def z_infinity(
    k: int,
    c: float,
    tol: float = 1e-14,
    alpha_override: float | None = None,
) -> float:
    """Final stifler fraction of the mean-field flow, in [0, 1).

    Solves z = 1 - exp(-lam z), lam = (2k+c) alpha + 1 - alpha, via the
    principal Lambert branch; the zero solution is returned when lam <= 1.
    """
    params = MeanFieldParams.from_kc(k, c, tol, alpha_override)
    lam = params.lam
    if lam <= 1.0:
        return 0.0
    w = lambert_w0(-lam * math.exp(-lam))
    return max(1.0 + w / lam, 0.0)
