"""The dichotomy of decreasing maps with negative Schwarzian derivative.

Sweeping the slope parameter: as soon as |f'(K)| crosses 1, the globally
attracting fixed point hands over to a globally attracting 2-cycle, and
nothing else can happen.  Orbits from random starting points all settle on
the same attractor, and the iterate chain from the map's limit value nests
down onto the cycle.
"""

import numpy as np

from ddebounds import maps, onedim

print("Wright exponential family f(x) = -r (e^x - 1), K = 0, f'(K) = -r")
print(f"{'r':>5} {'verdict':>34} {'cycle':>30}")
for r in (0.5, 0.9, 1.0, 1.1, 1.5, 2.0, 3.0):
    spec = maps.wright_exp(r)
    cls = maps.classify(spec, (-6.0, 6.0))
    v = onedim.singer_dichotomy(spec, cls)
    cyc = ""
    if v.two_cycle is not None:
        cyc = f"[{v.two_cycle.lo:.5g}, {v.two_cycle.hi:.5g}]"
    print(f"{r:5.2f} {v.case:>34} {cyc:>30}")

print()
print("orbits all land on the attractor (r = 2):")
spec = maps.wright_exp(2.0)
cls = maps.classify(spec, (-6.0, 6.0))
a, b = maps.invariant_attracting_interval(spec, cls)
cycle = onedim.find_two_cycle(spec, cls)
rng = np.random.default_rng(0)
for x0 in rng.uniform(a, b, 5):
    orbit = onedim.iterate(spec, float(x0), 60)
    d_end = min(abs(orbit[-1] - cycle.lo), abs(orbit[-1] - cycle.hi))
    print(f"  x0 = {x0:9.4f}: orbit[60] = {orbit[-1]:12.6f}, distance to cycle {d_end:.2e}")

print()
print("iterate chain from the limit value r nests onto the cycle:")
chain = [2.0]
for _ in range(9):
    chain.append(maps.evaluate(spec, chain[-1]))
for k in range(4):
    lo, hi = chain[2 * k + 1], chain[2 * k]
    print(f"  k = {k}: [{lo:.10f}, {hi:.10f}]  width {hi - lo:.10f}")
print(f"  2-cycle:  [{cycle.lo:.10f}, {cycle.hi:.10f}]")
