"""Discrete dynamics of one-dimensional maps.

Fixed points, period-two cycles, orbit iteration, interval images, and the
dichotomy that drives everything downstream: a decreasing map with negative
Schwarzian derivative either pulls every orbit to its fixed point (when
|f'(K)| <= 1) or to a unique, globally attracting 2-cycle (when |f'(K)| > 1).

Root finding is bracketed bisection to width 1e-13 followed by a short Newton
polish, which keeps results deterministic and tolerance-faithful.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import maps
from .errors import (
    ClassificationError,
    DomainEscapeError,
    NoSignChangeError,
    NotDecidableError,
)
from .maps import MapClass, MapKind, MapSpec

__all__ = [
    "FixedPoint",
    "TwoCycle",
    "DichotomyVerdict",
    "bisect_root",
    "find_fixed_point",
    "find_two_cycle",
    "iterate",
    "interval_image",
    "singer_dichotomy",
    "inverse_on_branch",
    "orbit_to_csv",
]

# verdict tags for DichotomyVerdict.case
FIXED_POINT = "globally_attracting_fixed_point"
TWO_CYCLE = "globally_attracting_two_cycle"

_SLOPE_TIE_TOL = 1e-9  # |f'(K)| within this of 1 counts as the stable side


@dataclass(frozen=True)
class FixedPoint:
    """Fixed point location, slope f'(K) there, and the residual |f(K) - K|."""

    x: float
    slope: float
    residual: float


@dataclass(frozen=True)
class TwoCycle:
    """A period-two cycle {lo, hi} with f(lo) = hi and f(hi) = lo."""

    lo: float
    hi: float
    residuals: tuple[float, float]  # (|f(lo) - hi|, |f(hi) - lo|)


@dataclass(frozen=True)
class DichotomyVerdict:
    case: str  # FIXED_POINT or TWO_CYCLE
    fixed_point: FixedPoint
    two_cycle: TwoCycle | None = None


# ---------------------------------------------------------------------------
# root finding
# ---------------------------------------------------------------------------

def bisect_root(
    fn: Callable[[float], float],
    lo: float,
    hi: float,
    xtol: float = 1e-13,
    max_iter: int = 256,
) -> float:
    """Bisection root of fn on [lo, hi]; endpoints with fn == 0 are returned."""
    flo, fhi = fn(lo), fn(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if (flo > 0) == (fhi > 0):
        raise NoSignChangeError(f"no sign change on [{lo:g}, {hi:g}]")
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        fm = fn(mid)
        if fm == 0.0:
            return mid
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi, fhi = mid, fm
        if hi - lo <= xtol:
            break
    return 0.5 * (lo + hi)


def _newton_polish(fn, dfn, x: float, lo: float, hi: float, steps: int = 5) -> float:
    for _ in range(steps):
        d = dfn(x)
        if d == 0.0 or not math.isfinite(d):
            break
        step = fn(x) / d
        xn = x - step
        if not lo <= xn <= hi or not math.isfinite(xn):
            break
        x = xn
        if abs(step) <= 1e-16 * max(1.0, abs(x)):
            break
    return x


def find_fixed_point(spec: MapSpec, bracket: tuple[float, float]) -> FixedPoint:
    """Solve f(K) = K on a bracketing interval (f(x) - x must change sign)."""
    f = lambda x: maps.evaluate(spec, x) - x
    k = bisect_root(f, float(bracket[0]), float(bracket[1]))
    df = lambda x: maps.derivatives(spec, x).f1 - 1.0
    k = _newton_polish(f, df, k, float(bracket[0]), float(bracket[1]))
    slope = maps.derivatives(spec, k).f1
    return FixedPoint(x=k, slope=slope, residual=abs(f(k)))


def inverse_on_branch(spec: MapSpec, value: float, bracket: tuple[float, float]) -> float:
    """Numerical inverse of a monotone branch: the x in bracket with f(x) = value."""
    from .errors import InversionError

    lo, hi = float(bracket[0]), float(bracket[1])
    g = lambda x: maps.evaluate(spec, x) - value
    try:
        x = bisect_root(g, lo, hi, xtol=1e-13)
    except NoSignChangeError as exc:
        raise InversionError(
            f"{spec}: no preimage of {value:g} bracketed on [{lo:g}, {hi:g}]"
        ) from exc
    dg = lambda x: maps.derivatives(spec, x).f1
    return _newton_polish(g, dg, x, lo, hi)


# ---------------------------------------------------------------------------
# cycles and dichotomy
# ---------------------------------------------------------------------------

def _smap_interval_and_fp(spec: MapSpec, cls: MapClass):
    """Invariant interval and fixed point for an S-map (or restricted SU-map)."""
    if cls.kind == MapKind.NEITHER:
        raise ClassificationError("operation needs an S- or SU-map classification")
    a, b = maps.invariant_attracting_interval(spec, cls)
    fp = find_fixed_point(spec, (a, b))
    return a, b, fp


def find_two_cycle(spec: MapSpec, cls: MapClass) -> TwoCycle | None:
    """The unique 2-cycle of an S-map with |f'(K)| > 1, or None on the stable side.

    The cycle's lower point is the smallest fixed point of f o f, bracketed in
    [A, K - delta] inside the invariant interval; the upper point is its image.
    SU-maps are handled through their S-map restriction [f(f(x0)), f(x0)].
    """
    a, b, fp = _smap_interval_and_fp(spec, cls)
    if abs(fp.slope) <= 1.0 + _SLOPE_TIE_TOL:
        return None
    delta = 1e-8 * (b - a)
    g = lambda x: maps.evaluate(spec, maps.evaluate(spec, x)) - x

    def dg(x):
        fx = maps.evaluate(spec, x)
        return maps.derivatives(spec, fx).f1 * maps.derivatives(spec, x).f1 - 1.0

    ga = g(a)
    if ga < 0.0 and abs(ga) <= 1e-12 * max(1.0, abs(a)):
        # hyper-attracting cycles round f(f(A)) onto A itself
        lo = a
    else:
        lo = bisect_root(g, a, fp.x - delta)
        lo = _newton_polish(g, dg, lo, a, fp.x - delta)
    hi = maps.evaluate(spec, lo)
    res = (abs(maps.evaluate(spec, lo) - hi), abs(maps.evaluate(spec, hi) - lo))
    return TwoCycle(lo=lo, hi=hi, residuals=res)


def iterate(spec: MapSpec, x0: float, n: int) -> np.ndarray:
    """The orbit [x0, f(x0), ..., f^n(x0)]; raises if an iterate leaves the domain."""
    if n < 0:
        raise ValueError("n must be >= 0")
    lo, hi = spec.domain
    out = np.empty(n + 1)
    x = float(x0)
    if not lo <= x <= hi:
        raise DomainEscapeError(f"x0 = {x:g} outside domain", x=x, step=0)
    out[0] = x
    for k in range(1, n + 1):
        x = maps.evaluate(spec, x)
        if not (lo <= x <= hi) or not math.isfinite(x):
            raise DomainEscapeError(
                f"iterate {k} left the domain at x = {x:g}", x=x, step=k
            )
        out[k] = x
    return out


def interval_image(spec: MapSpec, iv: tuple[float, float]) -> tuple[float, float]:
    """The image f([lo, hi]) as an interval.

    Exact for monotone-decreasing families ([f(hi), f(lo)]) and for unimodal
    ones (endpoints plus the critical point); unknown shapes are sampled.
    """
    lo, hi = float(iv[0]), float(iv[1])
    shape = maps._family_shape(spec)
    if shape == "decreasing":
        return (maps.evaluate(spec, hi), maps.evaluate(spec, lo))
    if shape == "unimodal":
        vals = [maps.evaluate(spec, lo), maps.evaluate(spec, hi)]
        try:
            x0 = maps._critical_point(spec)
        except ClassificationError:
            x0 = None
        if x0 is not None and lo <= x0 <= hi:
            vals.append(maps.evaluate(spec, x0))
            return (min(vals), max(vals))
        if x0 is not None:
            return (min(vals), max(vals))
    xs = np.linspace(lo, hi, 1025)
    vals = maps.evaluate(spec, xs)
    return (float(np.min(vals)), float(np.max(vals)))


def singer_dichotomy(spec: MapSpec, cls: MapClass) -> DichotomyVerdict:
    """Attractor dichotomy for the discrete system x -> f(x).

    |f'(K)| <= 1: the fixed point attracts every orbit.  |f'(K)| > 1 (S-maps):
    the unique 2-cycle attracts every orbit except K itself.  SU-maps are
    decided only via their S-map restriction, i.e. when f(f(x0)) >= x0.
    """
    if cls.kind == MapKind.NEITHER:
        raise ClassificationError("dichotomy needs an S- or SU-map")
    if cls.kind == MapKind.SU_MAP:
        x0 = cls.critical_point
        fx0 = maps.evaluate(spec, x0)
        if maps.evaluate(spec, fx0) < x0:
            raise NotDecidableError(
                f"{spec}: f(f(x0)) < x0, the S-map restriction does not apply"
            )
    _, _, fp = _smap_interval_and_fp(spec, cls)
    if abs(fp.slope) <= 1.0 + _SLOPE_TIE_TOL:
        return DichotomyVerdict(case=FIXED_POINT, fixed_point=fp)
    cycle = find_two_cycle(spec, cls)
    return DichotomyVerdict(case=TWO_CYCLE, fixed_point=fp, two_cycle=cycle)


def orbit_to_csv(orbit: np.ndarray, path) -> None:
    """Write an orbit as CSV rows ``n,x`` with 17 significant digits."""
    with open(path, "w", newline="") as fh:
        fh.write("n,x\n")
        for n, x in enumerate(np.asarray(orbit, dtype=float)):
            fh.write(f"{n},{x:.17g}\n")
