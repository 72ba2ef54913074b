"""Linear stability of the equilibrium of x'(t) = -a x(t) + f(x(t - tau)).

The linearization has characteristic function chi(l) = l + a - b e^{-l tau}
with b = f'(K) < 0.  Two computable quantities matter downstream: the first
Hopf crossing tau0 (closed form) and N, the number of characteristic roots in
the open upper-right quarter-plane, obtained from the winding number of chi
around a rectangle hugging the positive quadrant.  Any root with Re >= 0 has
modulus at most a + |b|, so the rectangle [eps, a+|b|+1]^2 captures them all.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ContourRootError, InvalidParameterError

__all__ = [
    "Linearization",
    "StabilityResult",
    "critical_delay",
    "crossing_delays",
    "count_unstable_pairs",
    "local_stability",
]


@dataclass(frozen=True)
class Linearization:
    """Coefficients of the linearized equation: decay a, feedback slope b, delay tau."""

    a: float
    b: float
    tau: float

    def __post_init__(self):
        if self.a < 0:
            raise InvalidParameterError("a must be >= 0")
        if self.b >= 0:
            raise InvalidParameterError("feedback slope b must be < 0")
        if self.tau <= 0:
            raise InvalidParameterError("tau must be > 0")


@dataclass(frozen=True)
class StabilityResult:
    locally_stable: bool
    tau0: float | None  # first Hopf crossing; None when |b| <= a
    n_unstable_pairs: int


def critical_delay(a: float, b: float) -> float | None:
    """First delay at which a root pair crosses the imaginary axis.

    None when |b| <= a (stability for every delay); otherwise
    tau0 = arccos(a/b) / sqrt(b^2 - a^2), the smallest positive solution of
    i w + a = b e^{-i w tau}.
    """
    if b >= 0:
        raise InvalidParameterError("critical_delay needs b < 0")
    if a < 0:
        raise InvalidParameterError("critical_delay needs a >= 0")
    if -b <= a:
        return None
    omega = math.sqrt(b * b - a * a)
    return math.acos(a / b) / omega


def crossing_delays(a: float, b: float, tau_max: float) -> list[float]:
    """All Hopf crossing delays up to tau_max (empty when |b| <= a)."""
    if b >= 0:
        raise InvalidParameterError("crossing_delays needs b < 0")
    if -b <= a:
        return []
    omega = math.sqrt(b * b - a * a)
    theta = math.acos(a / b)
    out = []
    j = 0
    while True:
        tj = (theta + 2.0 * math.pi * j) / omega
        if tj > tau_max:
            return out
        out.append(tj)
        j += 1


def _rectangle(eps: float, R: float, H: float):
    """Counterclockwise parametrization s in [0, 4] of the counting rectangle."""

    def gamma(s):
        s = np.asarray(s, dtype=float)
        e = np.mod(s, 4.0)
        z = np.empty(e.shape, dtype=complex)
        m0 = e < 1
        m1 = (e >= 1) & (e < 2)
        m2 = (e >= 2) & (e < 3)
        m3 = e >= 3
        z[m0] = (eps + (R - eps) * e[m0]) + 1j * eps
        z[m1] = R + 1j * (eps + (H - eps) * (e[m1] - 1.0))
        z[m2] = (R - (R - eps) * (e[m2] - 2.0)) + 1j * H
        z[m3] = eps + 1j * (H - (H - eps) * (e[m3] - 3.0))
        return z

    return gamma


def count_unstable_pairs(lin: Linearization, n_initial: int = 4096) -> int:
    """Characteristic roots with Re > 0 and Im > 0, via the argument principle.

    The contour is sampled adaptively until every consecutive argument
    increment is below pi/2, which pins the winding number; the offset eps
    keeps axis points (conjugate partners, exact Hopf roots) outside.
    """
    a, b, tau = lin.a, lin.b, lin.tau
    scale = a + abs(b)
    eps = 1e-6 * scale
    R = H = scale + 1.0
    chi = lambda lam: lam + a - b * np.exp(-lam * tau)

    for attempt in range(3):
        gamma = _rectangle(eps, R, H)
        s = np.linspace(0.0, 4.0, n_initial + 1)
        v = chi(gamma(s))
        if np.min(np.abs(v)) < 1e-12 * scale:
            eps *= 1.0 + 1e-6  # nudge the contour off an on-axis root
            continue
        ok = False
        for _ in range(48):
            dphi = np.angle(v[1:] / v[:-1])
            bad = np.abs(dphi) >= 0.5 * math.pi
            if not bad.any():
                ok = True
                break
            mids = 0.5 * (s[:-1][bad] + s[1:][bad])
            s = np.sort(np.concatenate([s, mids]))
            v = chi(gamma(s))
            if np.min(np.abs(v)) < 1e-12 * scale:
                break
        if not ok:
            eps *= 1.0 + 1e-6
            continue
        total = float(np.sum(np.angle(v[1:] / v[:-1])))
        winding = total / (2.0 * math.pi)
        n = int(round(winding))
        if abs(winding - n) > 1e-6:
            raise ContourRootError(
                f"winding number {winding:.3e} did not settle on an integer"
            )
        return n
    raise ContourRootError("a characteristic root stayed on the contour after perturbation")


def local_stability(a: float, b: float, tau: float) -> StabilityResult:
    """tau0, the unstable quarter-plane count N, and the stability verdict."""
    lin = Linearization(a=a, b=b, tau=tau)
    tau0 = critical_delay(a, b)
    n = count_unstable_pairs(lin)
    on_axis = tau0 is not None and any(
        abs(tau - tj) <= 1e-12 * max(1.0, tau) for tj in crossing_delays(a, b, tau * 1.001)
    )
    return StabilityResult(
        locally_stable=(n == 0 and not on_axis), tau0=tau0, n_unstable_pairs=n
    )
