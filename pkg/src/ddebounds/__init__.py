"""Certified global-attractor bounds for x'(t) = -a x(t) + f(x(t - tau)).

The package analyzes feedback maps that are decreasing with negative
Schwarzian derivative (or unimodal with that structure past their peak),
computes the attractor enclosures this structure yields for the delay
equation, and verifies the enclosures against direct numerical integration.

Layout:
  maps     map families, derivatives, Schwarzian, classification
  onedim   fixed points, 2-cycles, orbits, the map dichotomy
  bounds   Wright and Mackey-Glass attractor-bound pipelines
  linstab  critical delay and unstable-root counts for the linearization
  ddesim   RK4 method-of-steps integrator and tail statistics
  certify  theory-vs-simulation certification, worked-example reproduction
  cli      command-line front end (``ddebounds`` or ``python -m ddebounds.cli``)
"""

from . import bounds, certify, ddesim, errors, linstab, maps, onedim
from .bounds import (
    BOUNDED,
    GLOBAL_STABILITY,
    BoundsReport,
    best_bounds,
    f_cycle_bounds,
    g_map_bounds,
    h_map_bound,
    wright_F_bounds,
    wright_basic_bounds,
)
from .certify import Certification, RunConfig
from .ddesim import (
    DdeProblem,
    History,
    TailStats,
    Trajectory,
    integrate,
    simulate_wright_y,
    tail_stats,
)
from .linstab import (
    Linearization,
    StabilityResult,
    count_unstable_pairs,
    critical_delay,
)
from .maps import (
    DerivativeBundle,
    MapClass,
    MapKind,
    MapSpec,
    affine_of,
    arctan_odd,
    classify,
    custom_map,
    derivatives,
    evaluate,
    invariant_attracting_interval,
    lasota_wazewska,
    logistic,
    mackey_glass_hill,
    ricker,
    schwarzian,
    tanh_odd,
    taylor_mg,
    wright_exp,
    wright_f,
)
from .onedim import (
    DichotomyVerdict,
    FixedPoint,
    TwoCycle,
    find_fixed_point,
    find_two_cycle,
    interval_image,
    iterate,
    singer_dichotomy,
)

__version__ = "0.1.0"
