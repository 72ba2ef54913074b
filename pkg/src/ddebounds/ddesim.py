"""Method-of-steps integration of x'(t) = -a x(t) + f(x(t - tau)).

The integrator is classical fixed-step RK4 with step h = tau/m_steps, so the
delayed argument at stage endpoints falls exactly on stored grid nodes and the
half-stage value comes from cubic Hermite interpolation of the step that
contains it (or straight from the history function while t - tau < 0).  Nodes
store both values and derivatives, which yields O(h^4) dense output on smooth
segments and lets tail statistics include intra-step extrema instead of just
node values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import maps
from .errors import (
    BlowUpError,
    InvalidHistoryError,
    InvalidParameterError,
    TooShortError,
)
from .maps import MapSpec
from .onedim import TwoCycle

__all__ = [
    "History",
    "DdeProblem",
    "Trajectory",
    "TailStats",
    "integrate",
    "tail_stats",
    "simulate_wright_y",
    "square_wave_distance",
    "positivity_check",
]

_BLOWUP_GUARD = 1e12


@dataclass(frozen=True)
class History:
    """Initial segment on [-tau, 0]: a constant or a sampled polyline."""

    times: np.ndarray | None  # None for constant histories
    values: np.ndarray

    @classmethod
    def constant(cls, value: float) -> "History":
        return cls(times=None, values=np.asarray([float(value)]))

    @classmethod
    def polyline(cls, times, values) -> "History":
        t = np.asarray(times, dtype=float)
        v = np.asarray(values, dtype=float)
        if t.ndim != 1 or t.shape != v.shape or len(t) < 2:
            raise InvalidHistoryError("polyline needs matching 1-d times/values")
        if not np.all(np.diff(t) > 0):
            raise InvalidHistoryError("polyline times must be strictly increasing")
        return cls(times=t, values=v)

    def __call__(self, t):
        if self.times is None:
            if np.ndim(t):
                return np.full(np.shape(t), self.values[0])
            return float(self.values[0])
        return np.interp(t, self.times, self.values)

    def slope(self, t):
        if self.times is None:
            return 0.0
        i = int(np.clip(np.searchsorted(self.times, t, side="right") - 1, 0, len(self.times) - 2))
        return float(
            (self.values[i + 1] - self.values[i]) / (self.times[i + 1] - self.times[i])
        )

    def transform(self, fn: Callable) -> "History":
        return History(times=self.times, values=np.atleast_1d(np.asarray(fn(self.values), dtype=float)))

    @property
    def min(self) -> float:
        return float(np.min(self.values))

    @property
    def max(self) -> float:
        return float(np.max(self.values))


def _coerce_history(h) -> History:
    if isinstance(h, History):
        return h
    if np.ndim(h) == 0:
        return History.constant(float(h))
    raise InvalidHistoryError("history must be a number or a History")


@dataclass(frozen=True)
class DdeProblem:
    """x'(t) = -a x(t) + f(x(t - tau)) with an initial segment on [-tau, 0]."""

    a: float
    tau: float
    feedback: MapSpec
    history: History

    def __post_init__(self):
        if self.a < 0:
            raise InvalidParameterError("decay rate a must be >= 0")
        if self.tau <= 0:
            raise InvalidParameterError("delay tau must be > 0")
        object.__setattr__(self, "history", _coerce_history(self.history))
        lo, _hi = self.feedback.domain
        if lo >= 0.0:
            # nonnegative cone: history must be admissible for positivity
            if self.history.min < 0.0:
                raise InvalidHistoryError("cone-case history must be nonnegative")
            if self.history.max == 0.0 and maps.evaluate(self.feedback, 0.0) == 0.0:
                raise InvalidHistoryError("cone-case history must not be identically 0")


@dataclass(frozen=True)
class Trajectory:
    """Dense RK4 output: uniform nodes from -tau to t_end with derivatives."""

    t: np.ndarray
    x: np.ndarray
    xdot: np.ndarray
    tau: float
    step: float
    start_index: int  # node index of t = 0
    var: str = "x"

    @property
    def t_end(self) -> float:
        return float(self.t[-1])

    def sample(self, ts):
        """Cubic-Hermite dense evaluation at arbitrary times in [-tau, t_end]."""
        ts = np.asarray(ts, dtype=float)
        if np.any(ts < self.t[0] - 1e-12) or np.any(ts > self.t[-1] + 1e-12):
            raise InvalidParameterError("sample times outside the integrated range")
        idx = np.clip(((ts - self.t[0]) / self.step).astype(int), 0, len(self.t) - 2)
        th = (ts - self.t[idx]) / self.step
        h00 = (1.0 + 2.0 * th) * (1.0 - th) ** 2
        h10 = th * (1.0 - th) ** 2
        h01 = th * th * (3.0 - 2.0 * th)
        h11 = th * th * (th - 1.0)
        out = (
            h00 * self.x[idx]
            + h10 * self.step * self.xdot[idx]
            + h01 * self.x[idx + 1]
            + h11 * self.step * self.xdot[idx + 1]
        )
        return float(out) if np.ndim(ts) == 0 else out

    def to_csv(self, path) -> None:
        """Write ``t,x`` (or ``t,y``) rows with 17 significant digits."""
        with open(path, "w", newline="") as fh:
            fh.write(f"t,{self.var}\n")
            for t, v in zip(self.t, self.x):
                fh.write(f"{t:.17g},{v:.17g}\n")


@dataclass(frozen=True)
class TailStats:
    """Empirical liminf/limsup proxies over the trailing window of a run."""

    lo: float
    hi: float
    window: tuple[float, float]
    converged: bool


# ---------------------------------------------------------------------------
# integration
# ---------------------------------------------------------------------------

def integrate(problem: DdeProblem, T: float, m_steps: int = 100) -> Trajectory:
    """Integrate up to (at least) T with step h = tau/m_steps.

    The grid extends to the smallest node multiple of h covering T.  Raises
    BlowUpError if |x| exceeds 1e12, which for S-map feedback signals a bug
    rather than genuine dynamics (those solutions stay bounded).
    """
    if T <= 0:
        raise InvalidParameterError("T must be > 0")
    if m_steps < 20:
        raise InvalidParameterError("m_steps must be >= 20")
    a = float(problem.a)
    tau = float(problem.tau)
    h = tau / int(m_steps)
    m = int(m_steps)
    n = int(math.ceil(T / h - 1e-9))
    N = m + n
    f = maps.scalar_callable(problem.feedback)
    dlo, dhi = problem.feedback.domain
    clamp = lambda v: dlo if v < dlo else (dhi if v > dhi else v)
    hist = problem.history

    t0 = -tau
    vals = np.empty(N + 1)
    dervs = np.empty(N + 1)
    fnode = np.empty(N + 1)
    for i in range(m + 1):
        ti = t0 + i * h
        vals[i] = hist(ti)
        dervs[i] = hist.slope(ti)
        fnode[i] = f(clamp(vals[i]))
    dervs[m] = -a * vals[m] + fnode[0]  # right derivative at t = 0

    half = 0.5 * h
    sixth = h / 6.0
    for j in range(m, N):
        xj = vals[j]
        i0 = j - m
        tm = t0 + j * h + half - tau
        if tm <= 0.0:
            xm = hist(tm)
        else:
            # Hermite midpoint of the stored step containing t + h/2 - tau
            xm = 0.5 * (vals[i0] + vals[i0 + 1]) + 0.125 * h * (dervs[i0] - dervs[i0 + 1])
        fm = f(clamp(xm))
        k1 = -a * xj + fnode[i0]
        k2 = -a * (xj + half * k1) + fm
        k3 = -a * (xj + half * k2) + fm
        k4 = -a * (xj + h * k3) + fnode[i0 + 1]
        xn = xj + sixth * (k1 + 2.0 * (k2 + k3) + k4)
        if not abs(xn) < _BLOWUP_GUARD:
            raise BlowUpError(
                f"|x| exceeded {_BLOWUP_GUARD:g} at t = {t0 + (j + 1) * h:g}",
                t=t0 + (j + 1) * h,
            )
        vals[j + 1] = xn
        fnode[j + 1] = f(clamp(xn))
        dervs[j + 1] = -a * xn + fnode[i0 + 1]
    t = t0 + h * np.arange(N + 1)
    return Trajectory(
        t=t, x=vals, xdot=dervs, tau=tau, step=h, start_index=m, var="x"
    )


# ---------------------------------------------------------------------------
# dense extrema and tail statistics
# ---------------------------------------------------------------------------

def _step_extrema(traj: Trajectory, i0: int, i1: int):
    """Node values plus interior Hermite-cubic extrema on steps i0..i1-1."""
    x0 = traj.x[i0:i1]
    x1 = traj.x[i0 + 1 : i1 + 1]
    m0 = traj.xdot[i0:i1] * traj.step
    m1 = traj.xdot[i0 + 1 : i1 + 1] * traj.step
    # cubic a0 + a1 th + a2 th^2 + a3 th^3 on th in [0, 1]
    a0 = x0
    a1 = m0
    a2 = 3.0 * (x1 - x0) - 2.0 * m0 - m1
    a3 = 2.0 * (x0 - x1) + m0 + m1
    nodes = np.concatenate([x0, x1[-1:]])
    # interior critical points: roots of 3 a3 th^2 + 2 a2 th + a1
    A, B, C = 3.0 * a3, 2.0 * a2, a1
    disc = B * B - 4.0 * A * C
    ok = disc >= 0.0
    sq = np.sqrt(np.where(ok, disc, 0.0))
    interior = []
    with np.errstate(divide="ignore", invalid="ignore"):
        quad = np.abs(A) > 1e-300
        lin = ~quad & (np.abs(B) > 1e-300)
        cands = (
            np.where(quad, (-B + sq) / (2.0 * A), np.nan),
            np.where(quad, (-B - sq) / (2.0 * A), np.nan),
            np.where(lin, -C / B, np.nan),
        )
    for r in cands:
        good = ok & np.isfinite(r) & (r > 0.0) & (r < 1.0)
        if not np.any(good):
            continue
        th = r[good]
        v = a0[good] + th * (a1[good] + th * (a2[good] + th * a3[good]))
        interior.append(v)
    if interior:
        return np.concatenate([nodes, *interior])
    return nodes


def tail_stats(traj: Trajectory, fraction: float = 0.2, tol: float = 1e-6) -> TailStats:
    """Min/max of the dense output over the last ``fraction`` of [0, t_end]."""
    if not 0.0 < fraction < 1.0:
        raise InvalidParameterError("fraction must lie in (0, 1)")
    if traj.t_end < 10.0 * traj.tau:
        raise TooShortError("tail statistics need t_end >= 10 tau")
    t_from = traj.t_end * (1.0 - fraction)
    i0 = max(traj.start_index, int(math.floor((t_from - traj.t[0]) / traj.step)))
    i1 = len(traj.t) - 1
    dense = _step_extrema(traj, i0, i1)
    return TailStats(
        lo=float(np.min(dense)),
        hi=float(np.max(dense)),
        window=(float(traj.t[i0]), traj.t_end),
        converged=bool(np.max(dense) - np.min(dense) < tol),
    )


def positivity_check(traj: Trajectory) -> bool:
    """True iff the dense output is strictly positive for all t > 0.

    The node at t = 0 itself may be 0 (a zero history leaving the origin
    upward when f(0) > 0); dense[0] is exactly that node and is skipped.
    """
    i0 = traj.start_index
    dense = _step_extrema(traj, i0, len(traj.t) - 1)
    return bool(np.all(dense[1:] > 0.0))


def square_wave_distance(
    traj: Trajectory,
    cycle: TwoCycle,
    band: float,
    fraction: float = 0.2,
    samples_per_step: int = 16,
) -> float:
    """Fraction of tail time spent within ``band`` of either cycle level.

    1.0 means the tail sits on the two-level square-wave profile; small values
    mean the solution spends most of its time in transit between the levels.
    """
    t_from = traj.t_end * (1.0 - fraction)
    ts = np.arange(t_from, traj.t_end, traj.step / samples_per_step)
    xs = traj.sample(ts)
    near = (np.abs(xs - cycle.lo) <= band) | (np.abs(xs - cycle.hi) <= band)
    return float(np.mean(near))


# ---------------------------------------------------------------------------
# Wright's equation in its original variable
# ---------------------------------------------------------------------------

def simulate_wright_y(
    r: float, y_history, T: float, m_steps: int = 100
) -> Trajectory:
    """Integrate y'(t) = -r y(t-1)(1 + y(t)) and return the y-trajectory.

    Uses the substitution x = ln(1 + y), which turns the equation into
    x'(t) = -r (e^{x(t-1)} - 1); the returned y = e^x - 1 is then > -1 for
    every t by construction.  The history must satisfy 1 + y > 0 throughout
    (constants need y > -1), which also covers the y(0) > -1 requirement.
    """
    if r <= 0:
        raise InvalidParameterError("r must be > 0")
    yh = _coerce_history(y_history)
    if yh.min <= -1.0:
        raise InvalidHistoryError("Wright history needs 1 + y > 0 on [-1, 0]")
    xh = yh.transform(np.log1p)
    problem = DdeProblem(a=0.0, tau=1.0, feedback=maps.wright_exp(r), history=xh)
    traj = integrate(problem, T, m_steps)
    ex = np.exp(traj.x)
    return Trajectory(
        t=traj.t,
        x=ex - 1.0,
        xdot=ex * traj.xdot,  # chain rule keeps dense output consistent
        tau=traj.tau,
        step=traj.step,
        start_index=traj.start_index,
        var="y",
    )
