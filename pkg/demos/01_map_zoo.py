"""Tour of the built-in feedback families.

For each family: evaluate it, compare its closed-form derivatives against
central differences, evaluate the Schwarzian derivative, classify the map on
a working window, and report the invariant attracting interval when one
exists.  The decreasing families all come out S-maps; Ricker, logistic and
the Mackey-Glass hump come out SU-maps (unimodal).
"""

import math

import numpy as np

from ddebounds import maps
from ddebounds.errors import CriticalPointError, NotApplicableError

ZOO = [
    ("Wright exponential", maps.wright_exp(2.0), 0.5),
    ("Mackey-Glass Hill", maps.mackey_glass_hill(2.0, 20.0), 1.3),
    ("Lasota-Wazewska", maps.lasota_wazewska(1.0, 1.0), 0.4),
    ("odd tanh", maps.tanh_odd(1.3, 2.0), 0.7),
    ("odd arctan", maps.arctan_odd(1.3, 2.0), 0.7),
    ("Wright F refinement", maps.wright_f(2.0), 0.5),
    ("Ricker", maps.ricker(math.exp(2.0)), 2.5),
    ("logistic", maps.logistic(3.2), 0.3),
    ("Mackey-Glass hump", maps.taylor_mg(6.15385, 73.8462, 10.0), 1.5),
]

for name, spec, x in ZOO:
    b = maps.derivatives(spec, x)
    fd = (maps.evaluate(spec, x + 1e-5) - maps.evaluate(spec, x - 1e-5)) / 2e-5
    try:
        sf_txt = f"{maps.schwarzian(spec, x): .4f}"
    except CriticalPointError:
        sf_txt = "  n/a"
    cls = maps.classify(spec)
    print(f"{name:22s} f({x:g}) = {b.f0: .5f}   f' = {b.f1: .5f} (fd {fd: .5f})   Sf = {sf_txt}")
    line = f"{'':22s} class: {cls.kind}"
    if cls.critical_point is not None:
        line += f", peak at x0 = {cls.critical_point:.5g}"
    if cls.finite_limit is not None:
        line += f", finite limit {cls.finite_limit:.5g}"
    try:
        a, bb = maps.invariant_attracting_interval(spec, cls)
        line += f", invariant interval [{a:.5g}, {bb:.5g}]"
    except NotApplicableError:
        line += ", no invariant interval (SU restriction fails)"
    print(line)
    print()

# the odd examples have constant / algebraic Schwarzians
print("Sf for -a tanh(bx) is the constant -2 b^2:")
for bpar in (1.0, 2.0, 3.0):
    spec = maps.tanh_odd(1.0, bpar)
    xs = np.linspace(-2, 2, 5)
    vals = [maps.schwarzian(spec, float(v)) for v in xs]
    print(f"  b = {bpar:g}: Sf in [{min(vals):.12f}, {max(vals):.12f}]  (-2b^2 = {-2*bpar**2:g})")
