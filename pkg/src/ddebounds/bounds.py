"""Attractor-bound pipelines for delay equations with S-map feedback.

Each pipeline turns map-level data into a dichotomy: either the equilibrium
attracts every solution of the delay equation (GLOBAL_STABILITY), or the
global attractor is enclosed in a computable interval (BOUNDED).

Wright case (a = 0, f(x) = -r(e^x - 1), delay 1):
  * ``wright_basic_bounds``  -- stability for r <= 3/2, otherwise the iterate
    chain [f^(2k+1)(r), f^(2k)(r)] around the 2-cycle of f, reported in the
    original Wright variable y = e^x - 1;
  * ``wright_F_bounds``      -- the sharper enclosure [F^2(-1), F(-1)] from the
    decreasing map F(y) = -1 + exp[(r y + 1 - e^{r y})/y], tightened to F's
    own 2-cycle.

Mackey-Glass case (a = 1, f decreasing on the nonnegative cone):
  * ``f_cycle_bounds``  -- the delay-independent enclosure [alpha, beta] by the
    2-cycle of f itself (the sharpest bound valid for every delay);
  * ``g_map_bounds``    -- delay-aware bounds via g(x) = (1-e^-tau) f(x) +
    e^-tau K: stability when (1-e^-tau)|f'(K)| <= 1, else [g(g(0)), g(0)]
    tightened to g's 2-cycle;
  * ``h_map_bound``     -- the improved upper bound h(0) solving
    F(h(0)) = (1-e^-tau) f(0) with F(x) = x - e^-tau f^{-1}(x).

``best_bounds`` composes every applicable pipeline and intersects intervals,
keeping per-endpoint provenance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import maps, onedim
from .errors import (
    ClassificationError,
    InvalidParameterError,
    InversionError,
    NotApplicableError,
)
from .maps import MapClass, MapKind, MapSpec
from .onedim import FixedPoint, TwoCycle

__all__ = [
    "BoundsReport",
    "GLOBAL_STABILITY",
    "BOUNDED",
    "wright_basic_bounds",
    "wright_F_bounds",
    "f_cycle_bounds",
    "g_map_bounds",
    "h_map_bound",
    "best_bounds",
    "g_map_of",
    "wright_f_probe_window",
]

GLOBAL_STABILITY = "global_stability"
BOUNDED = "bounded_by_interval"


@dataclass(frozen=True)
class BoundsReport:
    """One pipeline's verdict on the global attractor.

    ``interval`` is the sharpest enclosure the pipeline certifies (None for
    global stability); ``coarse_interval`` keeps the closed-form iterate bound
    before cycle tightening; ``stability_margin`` is the quantity that was
    compared against the pipeline's threshold (|f'(0)| vs 3/2, or
    (1 - e^-tau)|f'(K)| vs 1, ...).
    """

    pipeline: str
    verdict: str
    interval: tuple[float, float] | None
    stability_margin: float
    threshold: float
    coarse_interval: tuple[float, float] | None = None
    cycle: TwoCycle | None = None
    fixed_point: FixedPoint | None = None
    provenance: tuple[str, ...] = ()
    components: tuple["BoundsReport", ...] = ()

    def csv_row(self) -> str:
        def fmt(v):
            return f"{v:.17g}" if v is not None and math.isfinite(v) else ""

        lo, hi = self.interval if self.interval else (None, None)
        return f"{self.pipeline},{self.verdict},{fmt(lo)},{fmt(hi)},{self.stability_margin:.17g}"

    def text(self) -> str:
        lines = [f"[{self.pipeline}] {self.verdict}"]
        lines.append(
            f"  margin: {self.stability_margin:.6g} vs threshold {self.threshold:.6g}"
        )
        if self.coarse_interval is not None:
            lines.append(
                f"  coarse interval: [{self.coarse_interval[0]:.10g}, {self.coarse_interval[1]:.10g}]"
            )
        if self.interval is not None:
            lines.append(
                f"  interval: [{self.interval[0]:.10g}, {self.interval[1]:.10g}]"
            )
        for p in self.provenance:
            lines.append(f"  - {p}")
        for c in self.components:
            lines.extend("  " + ln for ln in c.text().splitlines())
        return "\n".join(lines)

    def __str__(self):
        return self.text()


CSV_HEADER = "pipeline,verdict,lo,hi,margin"


# ---------------------------------------------------------------------------
# Wright pipelines (a = 0)
# ---------------------------------------------------------------------------

def _to_y(x: float) -> float:
    # the Wright variable: y = e^x - 1
    return math.expm1(x)


def wright_basic_bounds(r: float, k: int = 3) -> BoundsReport:
    """Dichotomy for Wright's equation from the feedback map f(x) = -r(e^x - 1).

    r <= 3/2 certifies convergence of every solution to the equilibrium.  For
    r > 3/2 the enclosure is the iterate chain [f^(2k+1)(r), f^(2k)(r)] around
    f's 2-cycle (k = 0 gives the classical bounds e^r - 1 above and
    -1 + exp(-r(e^r - 1)) below, in the y variable), tightened to the cycle.
    """
    if r <= 0:
        raise InvalidParameterError("wright_basic_bounds needs r > 0")
    if k < 0:
        raise InvalidParameterError("refinement count k must be >= 0")
    if r <= 1.5:
        return BoundsReport(
            pipeline="wright_basic",
            verdict=GLOBAL_STABILITY,
            interval=None,
            stability_margin=r,
            threshold=1.5,
            provenance=("|f'(0)| = r <= 3/2: every solution tends to 0",),
        )
    spec = maps.wright_exp(r)
    chain = [r]
    for _ in range(2 * k + 1):
        chain.append(maps.evaluate(spec, chain[-1]))
    x_lo, x_hi = chain[2 * k + 1], chain[2 * k]
    coarse = (_to_y(x_lo), _to_y(x_hi))
    cls = MapClass(MapKind.S_MAP, finite_limit=r)
    cycle_x = onedim.find_two_cycle(spec, cls)
    fp = onedim.find_fixed_point(spec, (-1.0, 1.0))
    prov = [
        f"limit anchor f(-inf) = r = {r:.10g}",
        f"x-chain bound [f^{2*k+1}(r), f^{2*k}(r)] = [{x_lo:.10g}, {x_hi:.10g}]",
        f"y = e^x - 1 image of the chain: [{coarse[0]:.10g}, {coarse[1]:.10g}]",
    ]
    cycle = None
    interval = coarse
    if cycle_x is not None:
        cycle = TwoCycle(
            lo=_to_y(cycle_x.lo), hi=_to_y(cycle_x.hi), residuals=cycle_x.residuals
        )
        interval = (cycle.lo, cycle.hi)
        prov.append(
            f"2-cycle of f in x: [{cycle_x.lo:.10g}, {cycle_x.hi:.10g}] -> y interval"
        )
    return BoundsReport(
        pipeline="wright_basic",
        verdict=BOUNDED,
        interval=interval,
        stability_margin=r,
        threshold=1.5,
        coarse_interval=coarse,
        cycle=cycle,
        fixed_point=fp,
        provenance=tuple(prov),
    )


def wright_f_probe_window(r: float) -> tuple[float, float]:
    """Classification window for the F map (keeps derivatives representable)."""
    return maps.default_probe_interval(maps.wright_f(r))


def wright_F_bounds(r: float) -> BoundsReport:
    """Sharper Wright enclosure via the decreasing map F.

    Valid for r > 1.  For r <= 3/2 the verdict is global stability (by the
    basic 3/2 criterion, which dominates F's own |F'(0)| = r^2/2 threshold
    on (1, 3/2]); for r > 3/2 the enclosure is [F^2(-1), F(-1)] tightened to
    the 2-cycle of F.
    """
    if r <= 1:
        raise InvalidParameterError("wright_F_bounds needs r > 1")
    if r <= 1.5:
        return BoundsReport(
            pipeline="wright_f",
            verdict=GLOBAL_STABILITY,
            interval=None,
            stability_margin=r,
            threshold=1.5,
            provenance=("r <= 3/2: global stability from the basic criterion",),
        )
    spec = maps.wright_f(r)
    f_m1 = maps.evaluate(spec, -1.0)
    f2_m1 = maps.evaluate(spec, f_m1)
    coarse = (f2_m1, f_m1)
    cls = maps.classify(spec)
    if cls.kind != MapKind.S_MAP:
        raise ClassificationError(f"F map failed S-map certification: {cls}")
    cycle = onedim.find_two_cycle(spec, cls)
    fp = onedim.find_fixed_point(spec, (-0.5, 0.5))
    prov = [
        f"F(-1) = -1 + exp(-1 + r + e^-r) = {f_m1:.10g}",
        f"F^2(-1) = {f2_m1:.17g}",
    ]
    interval = coarse
    if cycle is not None:
        interval = (cycle.lo, cycle.hi)
        prov.append(f"2-cycle of F: [{cycle.lo:.10g}, {cycle.hi:.10g}]")
    return BoundsReport(
        pipeline="wright_f",
        verdict=BOUNDED,
        interval=interval,
        stability_margin=r * r / 2.0,  # |F'(0)|
        threshold=1.0,
        coarse_interval=coarse,
        cycle=cycle,
        fixed_point=fp,
        provenance=tuple(prov),
    )


# ---------------------------------------------------------------------------
# Mackey-Glass pipelines (a = 1)
# ---------------------------------------------------------------------------

def _certified_smap(spec: MapSpec, cls: MapClass | None) -> MapClass:
    if cls is None:
        cls = maps.classify(spec)
    if cls.kind != MapKind.S_MAP:
        raise ClassificationError(f"{spec}: pipeline needs an S-map, got {cls.kind}")
    return cls


def f_cycle_bounds(spec: MapSpec, cls: MapClass | None = None) -> BoundsReport:
    """Delay-independent dichotomy from the feedback map itself.

    |f'(K)| <= 1: every solution converges to K for every delay.  Otherwise
    the 2-cycle [alpha, beta] of f contains the global attractor for every
    delay, and no delay-independent interval is sharper.
    """
    cls = _certified_smap(spec, cls)
    a, b = maps.invariant_attracting_interval(spec, cls)
    fp = onedim.find_fixed_point(spec, (a, b))
    margin = abs(fp.slope)
    if margin <= 1.0 + 1e-9:
        return BoundsReport(
            pipeline="f_cycle",
            verdict=GLOBAL_STABILITY,
            interval=None,
            stability_margin=margin,
            threshold=1.0,
            fixed_point=fp,
            provenance=(f"|f'(K)| = {margin:.10g} <= 1 at K = {fp.x:.10g}",),
        )
    cycle = onedim.find_two_cycle(spec, cls)
    return BoundsReport(
        pipeline="f_cycle",
        verdict=BOUNDED,
        interval=(cycle.lo, cycle.hi),
        stability_margin=margin,
        threshold=1.0,
        coarse_interval=(a, b),
        cycle=cycle,
        fixed_point=fp,
        provenance=(
            f"invariant interval [{a:.10g}, {b:.10g}]",
            f"2-cycle of f: [{cycle.lo:.10g}, {cycle.hi:.10g}] (delay-independent)",
        ),
    )


def g_map_of(spec: MapSpec, tau: float, fixed_point: FixedPoint | None = None) -> MapSpec:
    """The delay-aware comparison map g(x) = (1 - e^-tau) f(x) + e^-tau K."""
    if tau <= 0:
        raise InvalidParameterError("tau must be > 0")
    if fixed_point is None:
        cls = _certified_smap(spec, None)
        a, b = maps.invariant_attracting_interval(spec, cls)
        fixed_point = onedim.find_fixed_point(spec, (a, b))
    w = -math.expm1(-tau)  # 1 - e^-tau
    return maps.affine_of(spec, w, (1.0 - w) * fixed_point.x)


def g_map_bounds(spec: MapSpec, tau: float, cls: MapClass | None = None) -> BoundsReport:
    """Delay-aware dichotomy via the map g(x) = (1 - e^-tau) f(x) + e^-tau K.

    Requires the nonnegative-cone setting (domain starting at 0) so that
    g(0) and g(g(0)) are defined.  (1 - e^-tau)|f'(K)| <= 1 certifies global
    stability; otherwise [g(g(0)), g(0)] contains the attractor, tightened to
    the 2-cycle of g.
    """
    if tau <= 0:
        raise InvalidParameterError("tau must be > 0")
    cls = _certified_smap(spec, cls)
    if spec.domain[0] != 0.0:
        raise ClassificationError("g-map bounds need a feedback domain starting at 0")
    a, b = maps.invariant_attracting_interval(spec, cls)
    fp = onedim.find_fixed_point(spec, (a, b))
    w = -math.expm1(-tau)
    margin = w * abs(fp.slope)
    if margin <= 1.0 + 1e-9:
        return BoundsReport(
            pipeline="g_map",
            verdict=GLOBAL_STABILITY,
            interval=None,
            stability_margin=margin,
            threshold=1.0,
            fixed_point=fp,
            provenance=(
                f"(1 - e^-tau)|f'(K)| = {margin:.10g} <= 1 (tau = {tau:g})",
            ),
        )
    g = g_map_of(spec, tau, fp)
    g0 = maps.evaluate(g, 0.0)
    g20 = maps.evaluate(g, g0)
    coarse = (g20, g0)
    gcls = maps.classify(g)
    if gcls.kind != MapKind.S_MAP:
        raise ClassificationError(f"g map failed S-map certification: {gcls}")
    cycle = onedim.find_two_cycle(g, gcls)
    prov = [
        f"g(0) = {g0:.10g}, g(g(0)) = {g20:.10g} (tau = {tau:g})",
        f"|g'(K)| = (1 - e^-tau)|f'(K)| = {margin:.10g} > 1",
    ]
    interval = coarse
    if cycle is not None:
        interval = (cycle.lo, cycle.hi)
        prov.append(f"2-cycle of g: [{cycle.lo:.10g}, {cycle.hi:.10g}]")
    return BoundsReport(
        pipeline="g_map",
        verdict=BOUNDED,
        interval=interval,
        stability_margin=margin,
        threshold=1.0,
        coarse_interval=coarse,
        cycle=cycle,
        fixed_point=fp,
        provenance=tuple(prov),
    )


def h_map_bound(spec: MapSpec, tau: float, cls: MapClass | None = None) -> float:
    """The improved upper bound h(0) for the cone case.

    h = F^{-1}((1 - e^-tau) f) with F(x) = x - e^-tau f^{-1}(x); h(0) solves
    F(h(0)) = (1 - e^-tau) f(0) and always improves on g(0).  The inverse of
    f is evaluated by bisection on its decreasing branch, so no closed-form
    inverse is needed.
    """
    if tau <= 0:
        raise InvalidParameterError("tau must be > 0")
    cls = _certified_smap(spec, cls)
    if spec.domain[0] != 0.0:
        raise ClassificationError("h-map bound needs a feedback domain starting at 0")
    a, b = maps.invariant_attracting_interval(spec, cls)
    fp = onedim.find_fixed_point(spec, (a, b))
    f0 = maps.evaluate(spec, 0.0)
    emt = math.exp(-tau)
    target = -math.expm1(-tau) * f0  # (1 - e^-tau) f(0)
    inv_hi = max(b, fp.x) + 1.0  # f is decreasing: preimages of [K, f(0)] live in [0, inv_hi]

    def big_f(x: float) -> float:
        return x - emt * onedim.inverse_on_branch(spec, x, (0.0, inv_hi))

    # F is increasing with F(K) = (1 - e^-tau) K < target < f(0) = F(f(0))
    lo, hi = fp.x, f0
    flo, fhi = big_f(lo) - target, big_f(hi) - target
    if not (flo <= 0.0 <= fhi):
        raise InversionError(
            f"h(0) not bracketed: F(K)-t = {flo:.3g}, F(f(0))-t = {fhi:.3g}"
        )
    h0 = onedim.bisect_root(lambda x: big_f(x) - target, lo, hi)
    g0 = -math.expm1(-tau) * f0 + emt * fp.x
    if h0 > g0 + 1e-9:
        raise InversionError(f"h(0) = {h0:.12g} failed to improve on g(0) = {g0:.12g}")
    return h0


# ---------------------------------------------------------------------------
# composition
# ---------------------------------------------------------------------------

def _intersect(parts):
    """Intersection with per-endpoint provenance from labelled intervals."""
    lo, lo_src = -math.inf, "none"
    hi, hi_src = math.inf, "none"
    for label, (plo, phi) in parts:
        if plo > lo:
            lo, lo_src = plo, label
        if phi < hi:
            hi, hi_src = phi, label
    return (lo, hi), lo_src, hi_src


def best_bounds(
    spec: MapSpec,
    a: float,
    tau: float | None = None,
    k: int = 3,
    pipelines: tuple[str, ...] | None = None,
) -> BoundsReport:
    """Run every applicable pipeline for the given problem class and intersect.

    ``a`` selects the problem family: 0 for the Wright case (spec must be the
    wright_exp feedback; results are in the y variable), 1 for the
    Mackey-Glass cone case (any decreasing S-map on [0, inf); tau required).
    Global stability from any pipeline wins; otherwise the intervals are
    intersected with per-endpoint provenance.
    """
    if a not in (0.0, 1.0, 0, 1):
        raise InvalidParameterError("best_bounds handles a = 0 or a = 1")
    reports: list[BoundsReport] = []
    parts = []
    prov: list[str] = []
    if a == 0:
        if spec.family != "wright_exp":
            raise ClassificationError(
                "the a = 0 pipelines are specific to wright_exp feedback"
            )
        r = spec.params["r"]
        enabled = pipelines or ("wright_basic", "wright_f")
        if "wright_basic" in enabled:
            reports.append(wright_basic_bounds(r, k=k))
        if "wright_f" in enabled and r > 1:
            reports.append(wright_F_bounds(r))
    else:
        if tau is None:
            raise InvalidParameterError("tau is required for the a = 1 pipelines")
        cls = _certified_smap(spec, None)
        enabled = pipelines or ("f_cycle", "g_map", "h_map")
        if "f_cycle" in enabled:
            reports.append(f_cycle_bounds(spec, cls))
        if "g_map" in enabled and spec.domain[0] == 0.0:
            reports.append(g_map_bounds(spec, tau, cls))
        stable = any(rep.verdict == GLOBAL_STABILITY for rep in reports)
        if "h_map" in enabled and spec.domain[0] == 0.0 and not stable:
            h0 = h_map_bound(spec, tau, cls)
            reports.append(
                BoundsReport(
                    pipeline="h_map",
                    verdict=BOUNDED,
                    interval=(-math.inf, h0),
                    stability_margin=math.nan,
                    threshold=math.nan,
                    provenance=(f"h(0) = {h0:.10g} (upper bound only)",),
                )
            )

    stable_rep = next((rep for rep in reports if rep.verdict == GLOBAL_STABILITY), None)
    if stable_rep is not None:
        return BoundsReport(
            pipeline="best",
            verdict=GLOBAL_STABILITY,
            interval=None,
            stability_margin=stable_rep.stability_margin,
            threshold=stable_rep.threshold,
            fixed_point=next(
                (rep.fixed_point for rep in reports if rep.fixed_point), None
            ),
            provenance=(f"global stability certified by {stable_rep.pipeline}",),
            components=tuple(reports),
        )

    for rep in reports:
        if rep.interval is not None:
            parts.append((rep.pipeline, rep.interval))
    if not parts:
        raise NotApplicableError("no pipeline produced an interval")
    (lo, hi), lo_src, hi_src = _intersect(parts)
    prov.append(f"lower endpoint {lo:.10g} from {lo_src}")
    prov.append(f"upper endpoint {hi:.10g} from {hi_src}")
    fp = next((rep.fixed_point for rep in reports if rep.fixed_point), None)
    margins = [rep.stability_margin for rep in reports if not math.isnan(rep.stability_margin)]
    return BoundsReport(
        pipeline="best",
        verdict=BOUNDED,
        interval=(lo, hi),
        stability_margin=max(margins),
        threshold=1.5 if a == 0 else 1.0,
        fixed_point=fp,
        provenance=tuple(prov),
        components=tuple(reports),
    )
