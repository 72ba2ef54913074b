"""Feedback-map families with exact derivatives and grid-certified classification.

A map is described by a :class:`MapSpec`: a family tag, a parameter table and a
domain interval.  Every built-in family carries closed-form first, second and
third derivatives, so the Schwarzian derivative

    (Sf)(x) = f'''(x)/f'(x) - (3/2) * (f''(x)/f'(x))**2

is available wherever f' does not vanish.  ``classify`` sorts a map into one of
three kinds on a sampled grid:

* ``S_MAP``   -- strictly decreasing with negative Schwarzian everywhere probed
                 (and a finite limit at one end when the domain is the line);
* ``SU_MAP``  -- unimodal: f' changes sign exactly once (+ to -) at x0, the
                 Schwarzian is negative off x0, and the unique fixed point sits
                 right of x0;
* ``NEITHER`` -- anything else, with a witness point for the violated condition.

The classification is grid-certified only: it samples ``grid_size`` points plus
one refinement pass near vanishing derivatives.  It is a numerical check, not a
proof.
"""

from __future__ import annotations

import math
import types
from dataclasses import dataclass
from typing import Callable, Mapping

import numpy as np

from .errors import (
    ClassificationError,
    CriticalPointError,
    DomainError,
    InvalidParameterError,
    NotApplicableError,
)

__all__ = [
    "MapSpec",
    "DerivativeBundle",
    "MapClass",
    "MapKind",
    "wright_exp",
    "mackey_glass_hill",
    "lasota_wazewska",
    "ricker",
    "logistic",
    "tanh_odd",
    "arctan_odd",
    "taylor_mg",
    "wright_f",
    "affine_of",
    "custom_map",
    "evaluate",
    "scalar_callable",
    "derivatives",
    "schwarzian",
    "classify",
    "invariant_attracting_interval",
    "default_probe_interval",
    "mapspec_from_dict",
]

# math-backed namespace so one family definition serves both the vectorized
# (numpy) path and the scalar fast path used inside integration loops
_SCALAR = types.SimpleNamespace(
    exp=math.exp, log=math.log, tanh=math.tanh, arctan=math.atan
)

_INF = math.inf


# ---------------------------------------------------------------------------
# map specification
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MapSpec:
    """A feedback nonlinearity: family tag + parameters + domain interval.

    ``base`` is set for derived maps (family ``affine``), ``fn`` for family
    ``custom``.  Instances are immutable; all operations on them are pure.
    """

    family: str
    params: Mapping[str, float]
    domain: tuple[float, float]
    base: "MapSpec | None" = None
    fn: Callable[[float], float] | None = None
    shape_hint: str | None = None  # custom maps may declare "decreasing"/"unimodal"

    def __call__(self, x):
        return evaluate(self, x)

    def contains(self, x) -> bool:
        lo, hi = self.domain
        return bool(np.all((np.asarray(x) >= lo) & (np.asarray(x) <= hi)))

    def __str__(self):
        ptxt = ", ".join(f"{k}={v:g}" for k, v in self.params.items())
        return f"{self.family}({ptxt})"


@dataclass(frozen=True)
class DerivativeBundle:
    """Values of f, f', f'', f''' at one point."""

    f0: float
    f1: float
    f2: float
    f3: float
    method: str  # "closed_form" | "finite_difference"


class MapKind:
    S_MAP = "s_map"
    SU_MAP = "su_map"
    NEITHER = "neither"


@dataclass(frozen=True)
class MapClass:
    """Grid-certified classification of a map on a probe window."""

    kind: str
    critical_point: float | None = None
    finite_limit: float | None = None
    witness: float | None = None
    probe_interval: tuple[float, float] | None = None


# ---------------------------------------------------------------------------
# built-in families
# ---------------------------------------------------------------------------
# Each family provides: parameter validation, default domain, value (backend
# pluggable: numpy or math), closed-form derivatives (numpy), limits at the
# infinite ends of its domain, and for unimodal families the critical point.

class _WrightExp:
    # f(x) = -r (e^x - 1); decreasing on R, f(-inf) = r
    name = "wright_exp"
    shape = "decreasing"
    param_names = ("r",)

    @staticmethod
    def check(p):
        if not p["r"] > 0:
            return "wright_exp requires r > 0"

    @staticmethod
    def default_domain(p):
        return (-_INF, _INF)

    @staticmethod
    def value(p, x, xp=np):
        return -p["r"] * (xp.exp(x) - 1.0)

    @staticmethod
    def derivs(p, x):
        d = -p["r"] * np.exp(x)
        return d, d, d

    @staticmethod
    def limits(p):
        return (p["r"], None)


class _MackeyGlassHill:
    # f(x) = p / (1 + x^n); decreasing Hill feedback on [0, inf)
    name = "mackey_glass_hill"
    shape = "decreasing"
    param_names = ("p", "n")

    @staticmethod
    def check(p):
        if not p["p"] > 0:
            return "mackey_glass_hill requires p > 0"
        if not p["n"] > 1:
            return "mackey_glass_hill requires n > 1"

    @staticmethod
    def default_domain(p):
        return (0.0, _INF)

    @staticmethod
    def value(p, x, xp=np):
        return p["p"] / (1.0 + x ** p["n"])

    @staticmethod
    def derivs(p, x):
        pp, n = p["p"], p["n"]
        x = np.asarray(x, dtype=float)
        u = x**n
        s = 1.0 + u
        f1 = -pp * n * x ** (n - 1.0) / s**2
        f2 = pp * n * x ** (n - 2.0) * ((n + 1.0) * u - (n - 1.0)) / s**3
        f3 = (
            pp
            * n
            * x ** (n - 3.0)
            * (
                -(n - 1.0) * (n - 2.0)
                + 4.0 * (n * n - 1.0) * u
                - (n + 1.0) * (n + 2.0) * u * u
            )
            / s**4
        )
        return f1, f2, f3

    @staticmethod
    def limits(p):
        return (None, 0.0)


class _LasotaWazewska:
    # f(x) = p e^{-a x}; decreasing on [0, inf), f(inf) = 0
    name = "lasota_wazewska"
    shape = "decreasing"
    param_names = ("p", "a")

    @staticmethod
    def check(p):
        if not p["p"] > 0:
            return "lasota_wazewska requires p > 0"
        if not p["a"] > 0:
            return "lasota_wazewska requires a > 0"

    @staticmethod
    def default_domain(p):
        return (0.0, _INF)

    @staticmethod
    def value(p, x, xp=np):
        return p["p"] * xp.exp(-p["a"] * x)

    @staticmethod
    def derivs(p, x):
        pp, a = p["p"], p["a"]
        e = pp * np.exp(-a * np.asarray(x, dtype=float))
        return -a * e, a * a * e, -(a**3) * e

    @staticmethod
    def limits(p):
        return (None, 0.0)


class _Ricker:
    # f(x) = lam * x * e^{-x}; unimodal with x0 = 1
    name = "ricker"
    shape = "unimodal"
    param_names = ("lam",)

    @staticmethod
    def check(p):
        if not p["lam"] > 0:
            return "ricker requires lam > 0"

    @staticmethod
    def default_domain(p):
        return (0.0, _INF)

    @staticmethod
    def value(p, x, xp=np):
        return p["lam"] * x * xp.exp(-x)

    @staticmethod
    def derivs(p, x):
        lam = p["lam"]
        x = np.asarray(x, dtype=float)
        e = lam * np.exp(-x)
        return e * (1.0 - x), e * (x - 2.0), e * (3.0 - x)

    @staticmethod
    def limits(p):
        return (None, 0.0)

    @staticmethod
    def critical_point(p):
        return 1.0


class _Logistic:
    # f(x) = lam * x * (1 - x) on [0, 1]; unimodal with x0 = 1/2
    name = "logistic"
    shape = "unimodal"
    param_names = ("lam",)

    @staticmethod
    def check(p):
        if not 0 < p["lam"] <= 4:
            return "logistic requires 0 < lam <= 4"

    @staticmethod
    def default_domain(p):
        return (0.0, 1.0)

    @staticmethod
    def value(p, x, xp=np):
        return p["lam"] * x * (1.0 - x)

    @staticmethod
    def derivs(p, x):
        lam = p["lam"]
        x = np.asarray(x, dtype=float)
        return lam * (1.0 - 2.0 * x), np.full_like(x, -2.0 * lam), np.zeros_like(x)

    @staticmethod
    def limits(p):
        return (None, None)

    @staticmethod
    def critical_point(p):
        return 0.5


class _TanhOdd:
    # f(x) = -a tanh(b x); odd decreasing S-map with Sf = -2 b^2
    name = "tanh_odd"
    shape = "decreasing"
    param_names = ("a", "b")

    @staticmethod
    def check(p):
        if not (p["a"] > 0 and p["b"] > 0):
            return "tanh_odd requires a > 0 and b > 0"

    @staticmethod
    def default_domain(p):
        return (-_INF, _INF)

    @staticmethod
    def value(p, x, xp=np):
        return -p["a"] * xp.tanh(p["b"] * x)

    @staticmethod
    def derivs(p, x):
        a, b = p["a"], p["b"]
        u = b * np.asarray(x, dtype=float)
        th = np.tanh(u)
        sech2 = 1.0 - th * th
        f1 = -a * b * sech2
        f2 = 2.0 * a * b * b * sech2 * th
        f3 = 2.0 * a * b**3 * sech2 * (sech2 - 2.0 * th * th)
        return f1, f2, f3

    @staticmethod
    def limits(p):
        return (p["a"], -p["a"])


class _ArctanOdd:
    # f(x) = -a arctan(b x); odd decreasing S-map with Sf = -2b^2/(1+b^2 x^2)^2
    name = "arctan_odd"
    shape = "decreasing"
    param_names = ("a", "b")

    @staticmethod
    def check(p):
        if not (p["a"] > 0 and p["b"] > 0):
            return "arctan_odd requires a > 0 and b > 0"

    @staticmethod
    def default_domain(p):
        return (-_INF, _INF)

    @staticmethod
    def value(p, x, xp=np):
        return -p["a"] * xp.arctan(p["b"] * x)

    @staticmethod
    def derivs(p, x):
        a, b = p["a"], p["b"]
        x = np.asarray(x, dtype=float)
        q = 1.0 + (b * x) ** 2
        f1 = -a * b / q
        f2 = 2.0 * a * b**3 * x / q**2
        f3 = 2.0 * a * b**3 * (1.0 - 3.0 * b * b * x * x) / q**3
        return f1, f2, f3

    @staticmethod
    def limits(p):
        return (p["a"] * math.pi / 2.0, -p["a"] * math.pi / 2.0)


class _TaylorMG:
    # f(x) = b x / (1 + x^n): the unimodal Mackey-Glass hump.  The extra
    # parameter ``a`` records the instantaneous decay of the companion delay
    # equation x' = -a x + f(x(t - tau)); it does not enter the map itself.
    name = "taylor_mg"
    shape = "unimodal"
    param_names = ("a", "b", "n")

    @staticmethod
    def check(p):
        if not p["a"] > 0:
            return "taylor_mg requires a > 0"
        if not p["b"] > 0:
            return "taylor_mg requires b > 0"
        if not p["n"] > 1:
            return "taylor_mg requires n > 1"

    @staticmethod
    def default_domain(p):
        return (0.0, _INF)

    @staticmethod
    def value(p, x, xp=np):
        return p["b"] * x / (1.0 + x ** p["n"])

    @staticmethod
    def derivs(p, x):
        b, n = p["b"], p["n"]
        x = np.asarray(x, dtype=float)
        u = x**n
        s = 1.0 + u
        f1 = b * (1.0 - (n - 1.0) * u) / s**2
        f2 = b * n * x ** (n - 1.0) * ((n - 1.0) * u - (n + 1.0)) / s**3
        f3 = (
            b
            * n
            * x ** (n - 2.0)
            * (
                -(n * n - 1.0)
                + (4.0 * n * n + 2.0) * u
                - (n * n - 1.0) * u * u
            )
            / s**4
        )
        return f1, f2, f3

    @staticmethod
    def limits(p):
        return (None, 0.0)

    @staticmethod
    def critical_point(p):
        return (1.0 / (p["n"] - 1.0)) ** (1.0 / p["n"])


class _WrightF:
    # F(y) = -1 + exp[(r y + 1 - e^{r y}) / y], F(0) = 0 (removable singularity).
    # Near y = 0 the exponent phi is evaluated by series to avoid cancellation;
    # once phi underflows exp, F is -1 to working precision and the derivative
    # bundle degenerates to zero (the probe window helper below avoids that
    # region when certifying the S-map property).
    name = "wright_f"
    shape = "decreasing"
    param_names = ("r",)
    _SERIES_CUT = 1e-3  # switch on |r y|

    @staticmethod
    def check(p):
        if not p["r"] > 1:
            return "wright_f requires r > 1"

    @staticmethod
    def default_domain(p):
        return (-_INF, _INF)

    @classmethod
    def _phi(cls, r, y):
        y = np.asarray(y, dtype=float)
        ry = r * y
        small = np.abs(ry) < cls._SERIES_CUT
        ysafe = np.where(small, 1.0, y)
        with np.errstate(over="ignore"):
            direct = (ry + 1.0 - np.exp(ry)) / ysafe
        series = -(
            r**2 * y / 2.0
            + r**3 * y**2 / 6.0
            + r**4 * y**3 / 24.0
            + r**5 * y**4 / 120.0
            + r**6 * y**5 / 720.0
        )
        return np.where(small, series, direct)

    @classmethod
    def value(cls, p, x, xp=np):
        r = p["r"]
        if xp is _SCALAR:
            ry = r * x
            if abs(ry) < cls._SERIES_CUT:
                phi = -(
                    r**2 * x / 2.0
                    + r**3 * x**2 / 6.0
                    + r**4 * x**3 / 24.0
                    + r**5 * x**4 / 120.0
                    + r**6 * x**5 / 720.0
                )
            elif ry > 700.0:
                return -1.0
            else:
                phi = (ry + 1.0 - math.exp(ry)) / x
            return -1.0 + math.exp(phi) if phi > -746.0 else -1.0
        with np.errstate(under="ignore"):
            return -1.0 + np.exp(cls._phi(r, x))

    @classmethod
    def derivs(cls, p, x):
        r = p["r"]
        y = np.asarray(x, dtype=float)
        ry = r * y
        small = np.abs(ry) < cls._SERIES_CUT
        # direct branch via u = 1 - e^{ry}; dead where e^{ry} overflows
        alive = ry <= 700.0
        ys = np.where(small | ~alive, 1.0, y)
        with np.errstate(over="ignore", invalid="ignore"):
            e = np.exp(np.where(alive, ry, 0.0))
            u = 1.0 - e
            u1 = -r * e
            u2 = -r * r * e
            u3 = -(r**3) * e
            phi_d = r + u / ys
            p1_d = u1 / ys - u / ys**2
            p2_d = u2 / ys - 2.0 * u1 / ys**2 + 2.0 * u / ys**3
            p3_d = u3 / ys - 3.0 * u2 / ys**2 + 6.0 * u1 / ys**3 - 6.0 * u / ys**4
        phi_s = -(
            r**2 * y / 2.0
            + r**3 * y**2 / 6.0
            + r**4 * y**3 / 24.0
            + r**5 * y**4 / 120.0
            + r**6 * y**5 / 720.0
        )
        p1_s = -(
            r**2 / 2.0
            + r**3 * y / 3.0
            + r**4 * y**2 / 8.0
            + r**5 * y**3 / 30.0
            + r**6 * y**4 / 144.0
        )
        p2_s = -(r**3 / 3.0 + r**4 * y / 4.0 + r**5 * y**2 / 10.0 + r**6 * y**3 / 36.0)
        p3_s = -(r**4 / 4.0 + r**5 * y / 5.0 + r**6 * y**2 / 6.0)
        phi = np.where(small, phi_s, phi_d)
        p1 = np.where(small, p1_s, p1_d)
        p2 = np.where(small, p2_s, p2_d)
        p3 = np.where(small, p3_s, p3_d)
        with np.errstate(under="ignore"):
            ee = np.where(alive & (phi > -746.0), np.exp(np.maximum(phi, -746.0)), 0.0)
        f1 = p1 * ee
        f2 = (p2 + p1 * p1) * ee
        f3 = (p3 + 3.0 * p1 * p2 + p1**3) * ee
        dead = ~alive | (phi <= -746.0)
        f1 = np.where(dead, -0.0, f1)
        f2 = np.where(dead, 0.0, f2)
        f3 = np.where(dead, 0.0, f3)
        return f1, f2, f3

    @staticmethod
    def limits(p):
        return (math.exp(p["r"]) - 1.0, -1.0)

    @classmethod
    def probe_window(cls, p):
        # largest y with phi(y) > -650, so the derivative bundle stays
        # representable; the window always covers the fixed point 0
        r = p["r"]
        lo, hi = 1e-3, 2000.0 / r
        if cls._phi(r, hi) > -650.0:
            return (-1.0, float(hi))
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if cls._phi(r, mid) > -650.0:
                lo = mid
            else:
                hi = mid
        return (-1.0, float(lo))


_FAMILIES = {
    cls.name: cls
    for cls in (
        _WrightExp,
        _MackeyGlassHill,
        _LasotaWazewska,
        _Ricker,
        _Logistic,
        _TanhOdd,
        _ArctanOdd,
        _TaylorMG,
        _WrightF,
    )
}


# ---------------------------------------------------------------------------
# constructors
# ---------------------------------------------------------------------------

def _make(family: str, domain=None, **params) -> MapSpec:
    fam = _FAMILIES[family]
    missing = set(fam.param_names) - set(params)
    if missing:
        raise InvalidParameterError(f"{family}: missing parameters {sorted(missing)}")
    msg = fam.check(params)
    if msg:
        raise InvalidParameterError(msg)
    dom = tuple(float(v) for v in (domain or fam.default_domain(params)))
    if not dom[0] < dom[1]:
        raise InvalidParameterError(f"{family}: empty domain {dom}")
    return MapSpec(family=family, params=dict(params), domain=dom)


def wright_exp(r: float, domain=None) -> MapSpec:
    """f(x) = -r (e^x - 1), the feedback of the transformed Wright equation."""
    return _make("wright_exp", domain, r=float(r))


def mackey_glass_hill(p: float, n: float, domain=None) -> MapSpec:
    """f(x) = p / (1 + x^n), the decreasing Mackey-Glass (Hill) feedback."""
    return _make("mackey_glass_hill", domain, p=float(p), n=float(n))


def lasota_wazewska(p: float, a: float, domain=None) -> MapSpec:
    """f(x) = p e^{-a x}, the Lasota-Wazewska red-cell production feedback."""
    return _make("lasota_wazewska", domain, p=float(p), a=float(a))


def ricker(lam: float, domain=None) -> MapSpec:
    """f(x) = lam x e^{-x}, the unimodal Ricker map."""
    return _make("ricker", domain, lam=float(lam))


def logistic(lam: float, domain=None) -> MapSpec:
    """f(x) = lam x (1 - x) on [0, 1]."""
    return _make("logistic", domain, lam=float(lam))


def tanh_odd(a: float, b: float, domain=None) -> MapSpec:
    """f(x) = -a tanh(b x); its Schwarzian is the constant -2 b^2."""
    return _make("tanh_odd", domain, a=float(a), b=float(b))


def arctan_odd(a: float, b: float, domain=None) -> MapSpec:
    """f(x) = -a arctan(b x); Sf(x) = -2 b^2 / (1 + b^2 x^2)^2."""
    return _make("arctan_odd", domain, a=float(a), b=float(b))


def taylor_mg(a: float, b: float, n: float, domain=None) -> MapSpec:
    """f(x) = b x / (1 + x^n), the unimodal hump of Taylor's multistable equation.

    ``a`` records the decay rate of the companion equation x' = -a x + f(x(t-tau)).
    """
    return _make("taylor_mg", domain, a=float(a), b=float(b), n=float(n))


def wright_f(r: float, domain=None) -> MapSpec:
    """The decreasing refinement map F(y) = -1 + exp[(r y + 1 - e^{r y}) / y]."""
    return _make("wright_f", domain, r=float(r))


def affine_of(base: MapSpec, scale: float, offset: float) -> MapSpec:
    """The affine post-composition x -> scale * f(x) + offset of an existing map.

    Scaling does not change the Schwarzian derivative, so affine images of
    S-maps are S-maps; ``scale`` must be nonzero (positive to preserve shape).
    """
    if scale == 0.0:
        raise InvalidParameterError("affine_of requires scale != 0")
    return MapSpec(
        family="affine",
        params={"scale": float(scale), "offset": float(offset)},
        domain=base.domain,
        base=base,
    )


def custom_map(fn: Callable[[float], float], domain, shape: str | None = None) -> MapSpec:
    """Wrap an evaluation callback; derivatives come from central differences."""
    if not callable(fn):
        raise InvalidParameterError("custom_map requires a callable")
    dom = (float(domain[0]), float(domain[1]))
    if not dom[0] < dom[1]:
        raise InvalidParameterError(f"custom_map: empty domain {dom}")
    return MapSpec(family="custom", params={}, domain=dom, fn=fn, shape_hint=shape)


# ---------------------------------------------------------------------------
# evaluation and derivatives
# ---------------------------------------------------------------------------

def _check_domain(spec: MapSpec, x) -> None:
    lo, hi = spec.domain
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise DomainError(f"{spec}: evaluation point is not finite")
    if np.any(arr < lo) or np.any(arr > hi):
        raise DomainError(f"{spec}: point outside domain [{lo:g}, {hi:g}]")


def _raw_value(spec: MapSpec, x, xp=np):
    if spec.family == "affine":
        return spec.params["scale"] * _raw_value(spec.base, x, xp) + spec.params["offset"]
    if spec.family == "custom":
        return spec.fn(x)
    return _FAMILIES[spec.family].value(spec.params, x, xp)


def evaluate(spec: MapSpec, x):
    """f(x) for a scalar or array of in-domain points."""
    _check_domain(spec, x)
    out = _raw_value(spec, np.asarray(x, dtype=float))
    if np.isscalar(x) or np.ndim(x) == 0:
        return float(out)
    return np.asarray(out, dtype=float)


def scalar_callable(spec: MapSpec) -> Callable[[float], float]:
    """A fast float -> float closure for integration loops (no domain checks)."""
    if spec.family == "affine":
        g = scalar_callable(spec.base)
        c, d = spec.params["scale"], spec.params["offset"]
        return lambda x: c * g(x) + d
    if spec.family == "custom":
        fn = spec.fn
        return lambda x: float(fn(x))
    fam = _FAMILIES[spec.family]
    p = spec.params
    return lambda x: fam.value(p, x, _SCALAR)


_FD_STEPS = (1e-5, 1e-4, 1e-3)  # relative steps for f', f'', f'''


def _fd_bundle(fn, x):
    x = np.asarray(x, dtype=float)
    s = np.maximum(1.0, np.abs(x))
    h1, h2, h3 = (c * s for c in _FD_STEPS)
    f1 = (fn(x + h1) - fn(x - h1)) / (2.0 * h1)
    f2 = (fn(x + h2) - 2.0 * fn(x) + fn(x - h2)) / (h2 * h2)
    f3 = (fn(x + 2 * h3) - 2.0 * fn(x + h3) + 2.0 * fn(x - h3) - fn(x - 2 * h3)) / (
        2.0 * h3**3
    )
    return f1, f2, f3


def _raw_derivs(spec: MapSpec, x):
    """(f1, f2, f3, method) without domain checks; vectorized."""
    if spec.family == "affine":
        f1, f2, f3, method = _raw_derivs(spec.base, x)
        c = spec.params["scale"]
        return c * f1, c * f2, c * f3, method
    if spec.family == "custom":
        f1, f2, f3 = _fd_bundle(spec.fn, x)
        return f1, f2, f3, "finite_difference"
    f1, f2, f3 = _FAMILIES[spec.family].derivs(spec.params, x)
    return f1, f2, f3, "closed_form"


def derivatives(spec: MapSpec, x) -> DerivativeBundle:
    """Closed-form f, f', f'', f''' at a point (finite differences for custom maps)."""
    _check_domain(spec, x)
    f0 = _raw_value(spec, np.asarray(x, dtype=float))
    f1, f2, f3, method = _raw_derivs(spec, x)
    return DerivativeBundle(float(f0), float(f1), float(f2), float(f3), method)


def schwarzian(spec: MapSpec, x, floor: float = 1e-12) -> float:
    """(Sf)(x) = f'''/f' - (3/2)(f''/f')^2 where |f'(x)| >= floor."""
    _check_domain(spec, x)
    f1, f2, f3, _ = _raw_derivs(spec, x)
    f1 = float(f1)
    if f1 == 0.0 or abs(f1) < floor:
        raise CriticalPointError(f"{spec}: |f'({float(np.asarray(x)):g})| < {floor:g}")
    q = float(f2) / f1
    return float(f3) / f1 - 1.5 * q * q


def _schwarzian_grid(spec: MapSpec, xs):
    """Vectorized Schwarzian for classification; NaN where f' == 0."""
    f1, f2, f3, _ = _raw_derivs(spec, xs)
    with np.errstate(divide="ignore", invalid="ignore"):
        q = f2 / f1
        s = f3 / f1 - 1.5 * q * q
    return np.where(f1 == 0.0, np.nan, s)


# ---------------------------------------------------------------------------
# classification
# ---------------------------------------------------------------------------

def _family_shape(spec: MapSpec) -> str | None:
    if spec.family == "affine":
        if spec.params["scale"] > 0:
            return _family_shape(spec.base)
        return None
    if spec.family == "custom":
        return spec.shape_hint
    return _FAMILIES[spec.family].shape


def _family_limits(spec: MapSpec) -> tuple[float | None, float | None]:
    """(f(-inf), f(+inf)) restricted to the infinite ends of the domain."""
    lo, hi = spec.domain
    if spec.family == "affine":
        bl = _family_limits(spec.base)
        c, d = spec.params["scale"], spec.params["offset"]
        return tuple(None if v is None else c * v + d for v in bl)  # type: ignore[return-value]
    if spec.family == "custom":
        # probe far out; a stable value is taken as the limit (non-rigorous)
        out: list[float | None] = [None, None]
        for i, sgn in ((0, -1.0), (1, 1.0)):
            if math.isinf(spec.domain[i]):
                v1, v2 = spec.fn(sgn * 1e6), spec.fn(sgn * 1e7)
                if math.isfinite(v1) and abs(v1 - v2) <= 1e-6 * max(1.0, abs(v1)):
                    out[i] = float(v1)
        return (out[0], out[1])
    lim = _FAMILIES[spec.family].limits(spec.params)
    return (lim[0] if math.isinf(lo) else None, lim[1] if math.isinf(hi) else None)


def default_probe_interval(spec: MapSpec) -> tuple[float, float]:
    """Working window for classification: the invariant interval padded by 1,
    clipped to the domain (finite ends are used directly)."""
    lo, hi = spec.domain
    fam = _FAMILIES.get(spec.family)
    if fam is not None and hasattr(fam, "probe_window"):
        return fam.probe_window(spec.params)
    shape = _family_shape(spec)
    if shape == "unimodal":
        x0 = _critical_point(spec)
        top = float(_raw_value(spec, np.asarray(x0))) + 1.0
        return (max(lo, 0.0) if math.isfinite(lo) else -top, min(hi, top))
    # decreasing (or unknown): anchor at a finite limit or a finite domain end
    lim_lo, lim_hi = _family_limits(spec)
    if lim_lo is not None:
        b = lim_lo
        a = float(_raw_value(spec, np.asarray(b)))
    elif math.isfinite(lo):
        b = float(_raw_value(spec, np.asarray(lo)))
        a = float(_raw_value(spec, np.asarray(b)))
    elif lim_hi is not None:
        a = lim_hi
        b = float(_raw_value(spec, np.asarray(a)))
    elif math.isfinite(hi):
        a = float(_raw_value(spec, np.asarray(hi)))
        b = float(_raw_value(spec, np.asarray(a)))
    else:
        raise ClassificationError(
            f"{spec}: no finite limit or domain end to anchor a probe window"
        )
    a, b = min(a, b), max(a, b)
    return (max(lo, a - 1.0), min(hi, b + 1.0))


def _critical_point(spec: MapSpec) -> float:
    if spec.family == "affine":
        return _critical_point(spec.base)
    fam = _FAMILIES.get(spec.family)
    if fam is not None and hasattr(fam, "critical_point"):
        return float(fam.critical_point(spec.params))
    raise ClassificationError(f"{spec}: no closed-form critical point")


def _refine_sign(spec: MapSpec, a: float, b: float, n: int = 9):
    """Subdivide [a, b] once and report f' signs on the finer points."""
    xs = np.linspace(a, b, n)[1:-1]
    f1 = _raw_derivs(spec, xs)[0]
    return xs, np.asarray(f1, dtype=float)


def _locate_turn(spec: MapSpec, a: float, b: float) -> float:
    """Bisect f' = 0 inside [a, b] given f'(a) > 0 > f'(b)."""
    fa = float(_raw_derivs(spec, np.asarray(a))[0])
    fb = float(_raw_derivs(spec, np.asarray(b))[0])
    if fa == 0.0:
        return a
    if fb == 0.0:
        return b
    for _ in range(200):
        mid = 0.5 * (a + b)
        fm = float(_raw_derivs(spec, np.asarray(mid))[0])
        if fm == 0.0:
            return mid
        if (fm > 0) == (fa > 0):
            a, fa = mid, fm
        else:
            b, fb = mid, fm
        if b - a <= 1e-14 * max(1.0, abs(a) + abs(b)):
            break
    return 0.5 * (a + b)


def classify(
    spec: MapSpec,
    probe_interval: tuple[float, float] | None = None,
    grid_size: int = 257,
) -> MapClass:
    """Grid-certified classification into S-map / SU-map / neither.

    Probes ``grid_size`` points of ``probe_interval`` (default: the padded
    invariant window).  Derivative zeros at a domain boundary are exempt from
    the strict-decrease requirement: cone-case feedbacks like the Hill family
    vanish to first order at 0 while being genuinely decreasing inside.
    """
    if grid_size < 64:
        raise InvalidParameterError("classify requires grid_size >= 64")
    if probe_interval is None:
        probe_interval = default_probe_interval(spec)
    lo, hi = float(probe_interval[0]), float(probe_interval[1])
    dlo, dhi = spec.domain
    if lo < dlo or hi > dhi or not lo < hi:
        raise DomainError(f"probe interval [{lo:g}, {hi:g}] not inside domain")

    xs = np.linspace(lo, hi, int(grid_size))
    f1 = np.asarray(_raw_derivs(spec, xs)[0], dtype=float)

    boundary = np.zeros(xs.shape, dtype=bool)
    boundary[0] = xs[0] == dlo
    boundary[-1] = xs[-1] == dhi

    interior_zero = (f1 == 0.0) & ~boundary
    sign = np.sign(f1)
    sign_eval = sign[~boundary]
    xs_eval = xs[~boundary]

    # refinement pass: where |f'| nearly vanishes without an exact zero,
    # subdivide once to look for a sign change hidden between grid points
    scale = float(np.max(np.abs(f1))) if np.any(np.isfinite(f1)) else 1.0
    near = (np.abs(f1) < 1e-9 * max(1.0, scale)) & (f1 != 0.0)
    extra_x, extra_s = [], []
    for i in np.flatnonzero(near):
        a = xs[max(i - 1, 0)]
        b = xs[min(i + 1, len(xs) - 1)]
        rx, rf1 = _refine_sign(spec, float(a), float(b))
        extra_x.append(rx)
        extra_s.append(np.sign(rf1))
    if extra_x:
        xs_eval = np.concatenate([xs_eval, *extra_x])
        sign_eval = np.concatenate([sign_eval, *extra_s])
        order = np.argsort(xs_eval)
        xs_eval, sign_eval = xs_eval[order], sign_eval[order]

    nonzero = sign_eval != 0.0
    changes = np.flatnonzero(np.diff(sign_eval[nonzero]) != 0.0)
    n_changes = len(changes)

    if np.any(interior_zero) and n_changes == 0:
        w = float(xs[interior_zero][0])
        return MapClass(MapKind.NEITHER, witness=w, probe_interval=(lo, hi))

    if n_changes == 0 and np.all(sign_eval[nonzero] < 0):
        # S-map candidate: negative Schwarzian everywhere probed
        sf = _schwarzian_grid(spec, xs_eval[nonzero])
        bad = np.flatnonzero(~(sf < 0.0) & np.isfinite(sf))
        if len(bad):
            w = float(xs_eval[nonzero][bad[0]])
            return MapClass(MapKind.NEITHER, witness=w, probe_interval=(lo, hi))
        lim_lo, lim_hi = _family_limits(spec)
        if math.isinf(dlo) and math.isinf(dhi) and lim_lo is None and lim_hi is None:
            return MapClass(MapKind.NEITHER, witness=math.inf, probe_interval=(lo, hi))
        limit = lim_lo if lim_lo is not None else lim_hi
        return MapClass(MapKind.S_MAP, finite_limit=limit, probe_interval=(lo, hi))

    if n_changes == 1:
        pos_first = sign_eval[nonzero][0] > 0
        if not pos_first:
            w = float(xs_eval[nonzero][changes[0] + 1])
            return MapClass(MapKind.NEITHER, witness=w, probe_interval=(lo, hi))
        # unimodal candidate: locate the turning point
        xi = xs_eval[nonzero]
        a, b = float(xi[changes[0]]), float(xi[changes[0] + 1])
        if np.any(interior_zero):
            x0 = float(xs[interior_zero][0])
        else:
            try:
                x0 = _critical_point(spec)
            except ClassificationError:
                x0 = _locate_turn(spec, a, b)
            if not a <= x0 <= b:
                x0 = _locate_turn(spec, a, b)
        # Schwarzian negative off the critical point
        off = np.abs(xs_eval - x0) > 1e-6 * max(1.0, abs(x0))
        sf = _schwarzian_grid(spec, xs_eval[off])
        bad = np.flatnonzero(~(sf < 0.0) & np.isfinite(sf))
        if len(bad):
            w = float(xs_eval[off][bad[0]])
            return MapClass(MapKind.NEITHER, witness=w, probe_interval=(lo, hi))
        # unique fixed point, right of the turning point
        gx = np.asarray(_raw_value(spec, xs), dtype=float) - xs
        gs = np.sign(gx)
        roots = [float(v) for v in xs[(gx == 0.0) & ~boundary]]
        inner = ~boundary & (gs != 0.0)
        gi = gs[inner]
        xi2 = xs[inner]
        for j in np.flatnonzero(np.diff(gi) != 0.0):
            a_, b_ = float(xi2[j]), float(xi2[j + 1])
            if not any(a_ <= rt <= b_ for rt in roots):
                roots.append(0.5 * (a_ + b_))
        roots.sort()
        if len(roots) != 1:
            w = float(roots[1]) if len(roots) > 1 else lo
            return MapClass(MapKind.NEITHER, witness=w, probe_interval=(lo, hi))
        if roots[0] <= x0:
            return MapClass(MapKind.NEITHER, witness=float(roots[0]), probe_interval=(lo, hi))
        return MapClass(MapKind.SU_MAP, critical_point=float(x0), probe_interval=(lo, hi))

    witness_idx = changes[0] + 1 if n_changes else 0
    w = float(xs_eval[nonzero][witness_idx])
    return MapClass(MapKind.NEITHER, witness=w, probe_interval=(lo, hi))


# ---------------------------------------------------------------------------
# invariant attracting interval
# ---------------------------------------------------------------------------

def invariant_attracting_interval(spec: MapSpec, cls: MapClass) -> tuple[float, float]:
    """A compact interval [A, B] with f([A, B]) inside [A, B].

    S-maps anchor at a finite limit (B = f(-inf), A = f(B)) or at a finite
    domain end; SU-maps use [f(f(x0)), f(x0)], which requires f(f(x0)) >= x0.
    The invariance claim is re-verified by interval imaging before returning.
    """
    from .onedim import interval_image  # local import to avoid a cycle

    if cls.kind == MapKind.NEITHER:
        raise ClassificationError("invariant interval needs an S- or SU-map")
    if cls.kind == MapKind.SU_MAP:
        x0 = cls.critical_point
        b = float(_raw_value(spec, np.asarray(x0)))
        a = float(_raw_value(spec, np.asarray(b)))
        if a < x0:
            raise NotApplicableError(
                f"{spec}: f(f(x0)) = {a:g} < x0 = {x0:g}; no S-map restriction"
            )
    else:
        lo, hi = spec.domain
        lim_lo, lim_hi = _family_limits(spec)
        if lim_lo is not None:
            b = lim_lo
            a = float(_raw_value(spec, np.asarray(b)))
        elif math.isfinite(lo):
            b = float(_raw_value(spec, np.asarray(lo)))
            a = float(_raw_value(spec, np.asarray(b)))
        elif lim_hi is not None:
            a = lim_hi
            b = float(_raw_value(spec, np.asarray(a)))
        else:
            a = float(_raw_value(spec, np.asarray(hi)))
            b = float(_raw_value(spec, np.asarray(a)))
        a, b = min(a, b), max(a, b)
        a, b = max(a, lo), min(b, hi)
    img = interval_image(spec, (a, b))
    tol = 1e-12 * max(1.0, abs(a), abs(b))
    if img[0] < a - tol or img[1] > b + tol:
        raise NotApplicableError(
            f"{spec}: candidate interval [{a:g}, {b:g}] is not invariant"
        )
    return (float(a), float(b))


# ---------------------------------------------------------------------------
# config parsing
# ---------------------------------------------------------------------------

_CONSTRUCTORS = {
    "wright_exp": wright_exp,
    "mackey_glass_hill": mackey_glass_hill,
    "lasota_wazewska": lasota_wazewska,
    "ricker": ricker,
    "logistic": logistic,
    "tanh_odd": tanh_odd,
    "arctan_odd": arctan_odd,
    "taylor_mg": taylor_mg,
    "wright_f": wright_f,
}


def _parse_bound(v) -> float:
    if isinstance(v, str):
        s = v.strip().lower()
        if s in ("inf", "+inf", ".inf"):
            return _INF
        if s in ("-inf", "-.inf"):
            return -_INF
        return float(v)
    return float(v)


def mapspec_from_dict(d: Mapping) -> MapSpec:
    """Build a MapSpec from a parsed config table.

    Expected keys: ``family`` (string), ``params`` (name -> number table) and
    optionally ``domain`` ([lo, hi], with "-inf"/"inf" accepted as sentinels).
    """
    try:
        family = str(d["family"])
    except (KeyError, TypeError) as exc:
        raise InvalidParameterError("map table needs a 'family' key") from exc
    if family not in _CONSTRUCTORS:
        raise InvalidParameterError(
            f"unknown family {family!r}; choose from {sorted(_CONSTRUCTORS)}"
        )
    params = d.get("params", {})
    if not isinstance(params, Mapping):
        raise InvalidParameterError("'params' must be a name -> number table")
    domain = d.get("domain")
    if domain is not None:
        if len(domain) != 2:
            raise InvalidParameterError("'domain' must be a [lo, hi] pair")
        domain = (_parse_bound(domain[0]), _parse_bound(domain[1]))
    kwargs = {str(k): float(v) for k, v in params.items()}
    try:
        return _CONSTRUCTORS[family](domain=domain, **kwargs)
    except TypeError as exc:
        raise InvalidParameterError(f"{family}: bad parameter table: {exc}") from exc
