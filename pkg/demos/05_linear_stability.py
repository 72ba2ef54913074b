"""Linear stability of the equilibrium: critical delay and root counts.

For lambda + a - b e^{-lambda tau} = 0 with b = f'(K) < 0, the equilibrium is
stable for every delay when |b| <= a, and otherwise loses stability at
tau0 = arccos(a/b)/sqrt(b^2 - a^2).  Past tau0, one conjugate root pair
crosses into the right half-plane at each further crossing delay; N counts
the pairs in the open upper-right quarter-plane via the argument principle.
The staircase N(tau) computed by contour winding matches the closed-form
crossing delays exactly.
"""

import numpy as np

from ddebounds import linstab
from ddebounds.linstab import Linearization

print("critical delay for a = 1 as the feedback slope steepens:")
for b in (-0.5, -1.0, -2.0, -5.0, -10.0, -50.0):
    tau0 = linstab.critical_delay(1.0, b)
    txt = "none (stable for every delay)" if tau0 is None else f"{tau0:.6f}"
    print(f"  b = {b:6.1f}: tau0 = {txt}")

print()
print("pure-delay case a = 0: tau0 = (pi/2)/|b|, the classical 3/2-type threshold scale")
for b in (-1.0, -np.pi / 2.0, -2.0):
    print(f"  b = {b:8.5f}: tau0 = {linstab.critical_delay(0.0, b):.6f}")

print()
a, b = 1.0, -10.0
crossings = linstab.crossing_delays(a, b, 3.0)
print(f"staircase of unstable pairs for (a, b) = (1, -10); crossings at "
      + ", ".join(f"{t:.4f}" for t in crossings))
print(f"{'tau':>8} {'N (winding)':>12} {'N (formula)':>12}")
for tau in np.linspace(0.05, 2.95, 30):
    n = linstab.count_unstable_pairs(Linearization(a, b, float(tau)))
    want = sum(1 for tj in crossings if tj < tau)
    mark = "" if n == want else "   <-- mismatch"
    print(f"{tau:8.3f} {n:12d} {want:12d}{mark}")
