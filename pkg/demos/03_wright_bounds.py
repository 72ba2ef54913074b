"""Attractor bounds for Wright's equation y'(t) = -r y(t-1) (1 + y(t)).

At r = 2 the equilibrium is unstable and solutions settle onto a slowly
oscillating periodic orbit.  Two enclosures for its range:

* the classical one, e^r - 1 above and -1 + exp(-r(e^r - 1)) below, from the
  iterate chain of the transformed feedback -r(e^x - 1);
* the much sharper [F^2(-1), F(-1)] from the decreasing refinement map F.

The script integrates two histories, prints both enclosures next to the
empirical tail range, and (optionally) plots everything.

usage: python 03_wright_bounds.py [--out DIR] [--plot]
"""

import argparse
from pathlib import Path

from ddebounds import bounds, ddesim

parser = argparse.ArgumentParser()
parser.add_argument("--out", default="out_wright", help="directory for CSV output")
parser.add_argument("--plot", action="store_true", help="also write a PNG")
parser.add_argument("--r", type=float, default=2.0)
args = parser.parse_args()

r = args.r
basic = bounds.wright_basic_bounds(r, k=0)
refined = bounds.wright_F_bounds(r)
print(basic.text())
print()
print(refined.text())
print()

out = Path(args.out)
out.mkdir(parents=True, exist_ok=True)
trajs = []
for y0 in (-0.5, 0.5):
    traj = ddesim.simulate_wright_y(r, y0, T=60.0)
    st = ddesim.tail_stats(traj)
    print(f"history y = {y0:5.2f}: tail range [{st.lo:.6f}, {st.hi:.6f}]")
    traj.to_csv(out / f"wright_r{r:g}_y0_{y0:g}.csv")
    trajs.append(traj)

m1 = basic.coarse_interval[1]
m2 = refined.coarse_interval[1]
print(f"\ncoarse upper bound  M1 = e^r - 1    = {m1:.6f}")
print(f"refined upper bound M2 = F(-1)      = {m2:.6f}")
print(f"wrote CSVs to {out}/")

if args.plot:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(8, 4.5))
    for traj, y0 in zip(trajs, (-0.5, 0.5)):
        ax.plot(traj.t, traj.x, lw=1.0, label=f"y(0) = {y0:g}")
    for level, label in ((m1, "coarse bound"), (m2, "F bound")):
        ax.axhline(level, color="k", ls="--", lw=0.8)
        ax.annotate(label, (61, level), fontsize=8, va="center")
    ax.axhline(-1.0, color="r", ls=":", lw=0.8)
    ax.set_xlabel("t")
    ax.set_ylabel("y")
    ax.set_title(f"Wright equation, r = {r:g}: bounds vs trajectories")
    ax.legend(loc="upper right")
    fig.tight_layout()
    fig.savefig(out / "wright_bounds.png", dpi=150)
    print(f"wrote {out / 'wright_bounds.png'}")
