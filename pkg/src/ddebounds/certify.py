"""Cross-checking theory against simulation.

``certify`` runs the applicable bound pipelines for a configured problem,
integrates a battery of constant histories, and asserts that the empirical
tail range of every run is contained in the certified enclosure (or that every
run has converged to the equilibrium when global stability was certified).
``reproduce`` regenerates the data behind the three worked examples: the
Wright equation at r = 2 and the Mackey-Glass equation at (p, n) = (2, 20)
with delay-independent and delay-aware bounds.

Run configurations are human-editable YAML files::

    a: 1
    tau: 1.0
    T: 300.0           # optional, default max(100 tau, 200)
    m_steps: 100       # optional
    tail_fraction: 0.2 # optional
    histories: [0.3, 1.8]            # optional, default quantile battery
    pipelines: [f_cycle, g_map]      # optional, default all applicable
    map:
      family: mackey_glass_hill
      params: {p: 2, n: 20}
      domain: [0, inf]               # optional, "-inf"/"inf" sentinels ok
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping

import yaml

from . import bounds as bounds_mod
from . import ddesim, maps
from .bounds import BOUNDED, GLOBAL_STABILITY, BoundsReport
from .ddesim import DdeProblem, TailStats, Trajectory
from .errors import ConfigError, DdeBoundsError, InvalidParameterError
from .maps import MapSpec

__all__ = [
    "RunConfig",
    "Certification",
    "certify",
    "reproduce",
    "default_history_battery",
]

CONTAINMENT_TOL = 1e-3  # absolute slack allowed on empirical tails
_BATTERY_QUANTILES = (0.1, 0.5, 0.9)


# ---------------------------------------------------------------------------
# configuration
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RunConfig:
    """A validated certification run: problem, histories and solver settings."""

    feedback: MapSpec
    a: float
    tau: float
    histories: tuple[float, ...] | None = None
    T: float | None = None
    m_steps: int = 100
    tail_fraction: float = 0.2
    pipelines: tuple[str, ...] | None = None
    refine_k: int = 3

    @property
    def horizon(self) -> float:
        return self.T if self.T is not None else max(100.0 * self.tau, 200.0)

    @classmethod
    def from_dict(cls, d: Mapping) -> "RunConfig":
        if not isinstance(d, Mapping):
            raise ConfigError("configuration root must be a mapping")
        unknown = set(d) - {
            "a", "tau", "T", "m_steps", "tail_fraction",
            "histories", "pipelines", "refine_k", "map",
        }
        if unknown:
            raise ConfigError(f"unknown configuration keys: {sorted(unknown)}")
        try:
            feedback = maps.mapspec_from_dict(d["map"])
        except KeyError as exc:
            raise ConfigError("configuration needs a 'map' table") from exc
        except DdeBoundsError as exc:
            raise ConfigError(str(exc)) from exc
        try:
            a = float(d.get("a", 1.0))
            tau = float(d.get("tau", 1.0))
            T = None if d.get("T") is None else float(d["T"])
            m_steps = int(d.get("m_steps", 100))
            tail_fraction = float(d.get("tail_fraction", 0.2))
            refine_k = int(d.get("refine_k", 3))
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"bad scalar setting: {exc}") from exc
        histories = d.get("histories")
        if histories is not None:
            try:
                histories = tuple(float(v) for v in histories)
            except (TypeError, ValueError) as exc:
                raise ConfigError("'histories' must be a list of numbers") from exc
            if not histories:
                raise ConfigError("'histories' must not be empty")
        pipelines = d.get("pipelines")
        if pipelines is not None:
            pipelines = tuple(str(p) for p in pipelines)
            known = {"wright_basic", "wright_f", "f_cycle", "g_map", "h_map"}
            if not set(pipelines) <= known:
                raise ConfigError(f"unknown pipelines: {sorted(set(pipelines) - known)}")
        if a not in (0.0, 1.0):
            raise ConfigError("only a = 0 (Wright) and a = 1 (Mackey-Glass) are supported")
        if tau <= 0:
            raise ConfigError("tau must be > 0")
        if T is not None and T <= 0:
            raise ConfigError("T must be > 0")
        if m_steps < 20:
            raise ConfigError("m_steps must be >= 20")
        if not 0.0 < tail_fraction < 1.0:
            raise ConfigError("tail_fraction must lie in (0, 1)")
        return cls(
            feedback=feedback,
            a=a,
            tau=tau,
            histories=histories,
            T=T,
            m_steps=m_steps,
            tail_fraction=tail_fraction,
            pipelines=pipelines,
            refine_k=refine_k,
        )

    @classmethod
    def from_yaml(cls, path) -> "RunConfig":
        try:
            with open(path) as fh:
                data = yaml.safe_load(fh)
        except OSError as exc:
            raise ConfigError(f"cannot read {path}: {exc}") from exc
        except yaml.YAMLError as exc:
            raise ConfigError(f"cannot parse {path}: {exc}") from exc
        return cls.from_dict(data)


def default_history_battery(spec: MapSpec, a: float) -> tuple[float, ...]:
    """Constants at the 10/50/90% quantiles of the invariant interval.

    For the Wright case the quantiles are taken in the original y variable,
    i.e. on the e^x - 1 image of the invariant interval of the x feedback.
    """
    cls = maps.classify(spec)
    lo, hi = maps.invariant_attracting_interval(spec, cls)
    if a == 0.0:
        lo, hi = math.expm1(lo), math.expm1(hi)
    return tuple(lo + q * (hi - lo) for q in _BATTERY_QUANTILES)


# ---------------------------------------------------------------------------
# certification
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Certification:
    """Theory vs simulation for one problem and a battery of histories."""

    problem: str
    theory: BoundsReport
    histories: tuple[float, ...]
    stats: tuple[TailStats, ...]
    end_values: tuple[float, ...]
    contained: tuple[bool, ...]
    slack: tuple[tuple[float, float], ...]
    equilibrium: float
    tol: float = CONTAINMENT_TOL

    @property
    def all_contained(self) -> bool:
        return all(self.contained)

    def text(self) -> str:
        lines = [f"problem: {self.problem}", ""]
        lines.extend(self.theory.text().splitlines())
        lines.append("")
        if self.theory.verdict == GLOBAL_STABILITY:
            lines.append(
                f"check per history: |x(T) - K| < {self.tol:g} with K = {self.equilibrium:.10g}"
            )
        else:
            lo, hi = self.theory.interval
            lines.append(
                f"check per history: tail range within [{lo:.10g} - {self.tol:g}, {hi:.10g} + {self.tol:g}]"
            )
        for h, st, xe, ok, (slo, shi) in zip(
            self.histories, self.stats, self.end_values, self.contained, self.slack
        ):
            lines.append(
                f"  history {h:>10.6g}: tail [{st.lo:.10g}, {st.hi:.10g}]"
                f"  x(T) = {xe:.10g}  slack ({slo:.3g}, {shi:.3g})"
                f"  {'contained' if ok else 'VIOLATION'}"
            )
        lines.append("")
        lines.append(f"verdict: {'PASS' if self.all_contained else 'FAIL'}")
        return "\n".join(lines)

    def csv_rows(self) -> list[str]:
        rows = ["history,tail_lo,tail_hi,x_end,contained,slack_lo,slack_hi"]
        for h, st, xe, ok, (slo, shi) in zip(
            self.histories, self.stats, self.end_values, self.contained, self.slack
        ):
            rows.append(
                f"{h:.17g},{st.lo:.17g},{st.hi:.17g},{xe:.17g},{int(ok)},{slo:.17g},{shi:.17g}"
            )
        return rows


def _simulate(config: RunConfig, history: float) -> Trajectory:
    if config.a == 0.0:
        return ddesim.simulate_wright_y(
            config.feedback.params["r"], history, config.horizon, config.m_steps
        )
    problem = DdeProblem(
        a=config.a, tau=config.tau, feedback=config.feedback, history=history
    )
    return ddesim.integrate(problem, config.horizon, config.m_steps)


def _staged(stage: str, fn, *args, **kwargs):
    """Run one certification stage, annotating any package error with it."""
    try:
        return fn(*args, **kwargs)
    except DdeBoundsError as exc:
        raise type(exc)(f"[{stage}] {exc}") from exc


def certify(config: RunConfig) -> Certification:
    """Run the bound pipelines, simulate the history battery, check containment.

    In the bounded case every empirical tail range must sit inside the
    certified interval inflated by the containment tolerance; in the global
    stability case every run must end within that tolerance of the
    equilibrium.  A violation in the stability case would falsify the
    implementation, not the theorems, and is reported as a failure.
    """
    theory = _staged(
        "bounds",
        bounds_mod.best_bounds,
        config.feedback,
        config.a,
        tau=config.tau,
        k=config.refine_k,
        pipelines=config.pipelines,
    )
    if config.a == 0.0:
        equilibrium = 0.0  # the y variable equilibrates at 0
    else:
        equilibrium = theory.fixed_point.x if theory.fixed_point else math.nan
    histories = config.histories or default_history_battery(config.feedback, config.a)

    stats, ends, contained, slack = [], [], [], []
    for h in histories:
        traj = _staged(f"simulate history {h:g}", _simulate, config, h)
        st = _staged("tail statistics", ddesim.tail_stats, traj, config.tail_fraction)
        x_end = float(traj.sample(traj.t_end))
        if theory.verdict == GLOBAL_STABILITY:
            dev = abs(x_end - equilibrium)
            ok = dev < CONTAINMENT_TOL
            sl = (CONTAINMENT_TOL - dev, CONTAINMENT_TOL - dev)
        else:
            lo, hi = theory.interval
            sl = (st.lo - lo, hi - st.hi)
            ok = sl[0] >= -CONTAINMENT_TOL and sl[1] >= -CONTAINMENT_TOL
        stats.append(st)
        ends.append(x_end)
        contained.append(ok)
        slack.append(sl)

    problem = (
        f"x' = -{config.a:g} x + f(x(t - {config.tau:g}))  with  f = {config.feedback}"
        if config.a
        else f"y' = -{config.feedback.params['r']:g} y(t-1)(1 + y)  [Wright form]"
    )
    return Certification(
        problem=problem,
        theory=theory,
        histories=tuple(histories),
        stats=tuple(stats),
        end_values=tuple(ends),
        contained=tuple(contained),
        slack=tuple(slack),
        equilibrium=equilibrium,
    )


# ---------------------------------------------------------------------------
# worked-example reproduction
# ---------------------------------------------------------------------------

def _write(path: Path, lines) -> Path:
    path.write_text("\n".join(lines) + "\n")
    return path


def _summary_rows(entries) -> list[str]:
    rows = ["quantity,published,computed,abs_diff"]
    for name, published, computed in entries:
        rows.append(
            f"{name},{published:.17g},{computed:.17g},{abs(computed - published):.17g}"
        )
    return rows


def reproduce(example_id: str, out_dir) -> list[Path]:
    """Regenerate the data behind one worked example (ex1, ex2 or ex3).

    Writes trajectory CSVs (t plus x or y columns), a bounds CSV with one row
    per pipeline, and a summary CSV putting published values next to computed
    ones.  Output is deterministic: rerunning produces byte-identical files.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    files: list[Path] = []

    if example_id == "ex1":
        # Wright equation, r = 2: coarse bound e^r - 1 vs the F refinement
        r = 2.0
        basic = bounds_mod.wright_basic_bounds(r, k=0)
        refined = bounds_mod.wright_F_bounds(r)
        for i, y0 in enumerate((-0.5, 0.5), start=1):
            traj = ddesim.simulate_wright_y(r, y0, T=60.0, m_steps=100)
            p = out / f"ex1_trajectory_{i}.csv"
            traj.to_csv(p)
            files.append(p)
        files.append(
            _write(
                out / "ex1_bounds.csv",
                [bounds_mod.CSV_HEADER, basic.csv_row(), refined.csv_row()],
            )
        )
        m1 = basic.coarse_interval[1]
        m2 = maps.evaluate(maps.wright_f(r), -1.0)
        files.append(
            _write(
                out / "ex1_summary.csv",
                _summary_rows(
                    [
                        ("upper_bound_M1", 6.389, m1),
                        ("upper_bound_M2", 2.112, m2),
                        ("lower_bound_F2", -1.0, maps.evaluate(maps.wright_f(r), m2)),
                    ]
                ),
            )
        )
        return files

    if example_id == "ex2":
        # Mackey-Glass (p, n) = (2, 20): delay-independent cycle bounds
        spec = maps.mackey_glass_hill(2.0, 20.0)
        rep = bounds_mod.f_cycle_bounds(spec)
        for i, (tau, T, m_steps) in enumerate(((1.0, 300.0, 100), (10.0, 500.0, 200)), start=1):
            problem = DdeProblem(a=1.0, tau=tau, feedback=spec, history=0.5)
            traj = ddesim.integrate(problem, T, m_steps)
            p = out / f"ex2_trajectory_tau{tau:g}.csv"
            traj.to_csv(p)
            files.append(p)
        files.append(
            _write(out / "ex2_bounds.csv", [bounds_mod.CSV_HEADER, rep.csv_row()])
        )
        files.append(
            _write(
                out / "ex2_summary.csv",
                _summary_rows(
                    [
                        ("equilibrium_K", 1.0, rep.fixed_point.x),
                        ("slope_at_K", -10.0, rep.fixed_point.slope),
                        ("cycle_lo", 0.0, rep.cycle.lo),
                        ("cycle_hi", 2.0, rep.cycle.hi),
                    ]
                ),
            )
        )
        return files

    if example_id == "ex3":
        # Mackey-Glass with tau = 1: delay-aware g bounds and the h refinement
        spec = maps.mackey_glass_hill(2.0, 20.0)
        tau = 1.0
        grep = bounds_mod.g_map_bounds(spec, tau)
        h0 = bounds_mod.h_map_bound(spec, tau)
        best = bounds_mod.best_bounds(spec, 1.0, tau=tau)
        for i, x0 in enumerate((0.3, 1.8), start=1):
            problem = DdeProblem(a=1.0, tau=tau, feedback=spec, history=x0)
            traj = ddesim.integrate(problem, 300.0, 100)
            p = out / f"ex3_trajectory_{i}.csv"
            traj.to_csv(p)
            files.append(p)
        hrep = BoundsReport(
            pipeline="h_map",
            verdict=BOUNDED,
            interval=(-math.inf, h0),
            stability_margin=math.nan,
            threshold=math.nan,
        )
        files.append(
            _write(
                out / "ex3_bounds.csv",
                [bounds_mod.CSV_HEADER, grep.csv_row(), hrep.csv_row(), best.csv_row()],
            )
        )
        g0 = grep.coarse_interval[1]
        g20 = grep.coarse_interval[0]
        files.append(
            _write(
                out / "ex3_summary.csv",
                _summary_rows(
                    [
                        ("g_at_0", 1.6321, g0),
                        ("g2_at_0", 0.3679, g20),
                        ("h_at_0", 1.6071, h0),
                    ]
                ),
            )
        )
        return files

    raise InvalidParameterError(f"unknown example id {example_id!r} (use ex1|ex2|ex3)")
