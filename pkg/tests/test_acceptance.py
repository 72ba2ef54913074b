"""Acceptance gate: each test is one criterion, printed as a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the per-criterion
lines alongside the pytest verdicts.
"""

import math
import time

import numpy as np

from ddebounds import bounds, certify, ddesim, linstab, maps, onedim
from ddebounds.ddesim import DdeProblem
from ddebounds.linstab import Linearization
from conftest import f_minus1_closed


def _criterion(num: int, ok: bool, detail: str):
    print(f"[{'PASS' if ok else 'FAIL'}] criterion {num}: {detail}")
    assert ok, f"criterion {num}: {detail}"


def test_criterion_01_wright_f_upper_bound():
    spec = maps.wright_f(2.0)
    maps.evaluate(spec, -1.0)  # warm-up
    tic = time.perf_counter()
    value = maps.evaluate(spec, -1.0)
    elapsed = time.perf_counter() - tic
    ok = abs(value - 2.112) < 1e-3 and elapsed < 1e-3
    _criterion(1, ok, f"F(-1) = {value:.6f} (target 2.112 +- 1e-3), {elapsed*1e6:.0f} us")


def test_criterion_02_wright_coarse_bound():
    value = bounds.wright_basic_bounds(2.0, k=0).coarse_interval[1]
    ok = abs(value - 6.389) < 1e-3
    _criterion(2, ok, f"e^r - 1 = {value:.6f} (target 6.389 +- 1e-3)")


def test_criterion_03_g_interval(mg):
    rep = bounds.g_map_bounds(mg, 1.0)
    g20, g0 = rep.coarse_interval
    ok = abs(g20 - 0.3679) < 1e-4 and abs(g0 - 1.6321) < 1e-4
    _criterion(3, ok, f"[g2(0), g(0)] = [{g20:.6f}, {g0:.6f}] (target [0.3679, 1.6321] +- 1e-4)")


def test_criterion_04_h_bound(mg):
    h0 = bounds.h_map_bound(mg, 1.0)
    emt = math.exp(-1.0)
    worst = 0.0
    for x in (0.8, 1.2, 1.6):
        closed = x - emt * (2.0 / x - 1.0) ** (1.0 / 20.0)
        numeric = x - emt * onedim.inverse_on_branch(mg, x, (0.0, 3.0))
        worst = max(worst, abs(closed - numeric))
    ok = abs(h0 - 1.6071) < 1e-3 and worst < 1e-9
    _criterion(4, ok, f"h(0) = {h0:.6f} (target 1.6071 +- 1e-3), F cross-check err {worst:.2e}")


def test_criterion_05_equilibrium_data(mg):
    fp = onedim.find_fixed_point(mg, (0.5, 1.5))
    ok = abs(fp.x - 1.0) < 1e-12 and abs(fp.slope - (-10.0)) < 1e-9
    _criterion(5, ok, f"K = {fp.x:.15f}, f'(K) = {fp.slope:.12f}")


def test_criterion_06_stable_side_simulation():
    spec = maps.wright_exp(1.5)
    tic = time.perf_counter()
    finals = []
    for h in (-0.5, 0.5, 1.0):
        problem = DdeProblem(a=0.0, tau=1.0, feedback=spec, history=h)
        traj = ddesim.integrate(problem, 200.0, 100)
        finals.append(abs(traj.sample(200.0)))
    elapsed = time.perf_counter() - tic
    ok = max(finals) < 1e-3 and elapsed < 2.0
    _criterion(
        6, ok, f"r=1.5: max |x(200)| = {max(finals):.2e} (< 1e-3), {elapsed:.2f} s (< 2 s)"
    )


def test_criterion_07_unstable_side_tails(wright_y_traj, mg_traj_tau1, mg_traj_tau10):
    f1 = f_minus1_closed(2.0)
    f2 = maps.evaluate(maps.wright_f(2.0), f1)
    st_y = ddesim.tail_stats(wright_y_traj)
    ok_y = st_y.lo >= f2 - 1e-3 and st_y.hi <= f1 + 1e-3
    st1 = ddesim.tail_stats(mg_traj_tau1)
    ok1 = st1.lo >= 0.3679 - 1e-3 and st1.hi <= 1.6321 + 1e-3
    st10 = ddesim.tail_stats(mg_traj_tau10)
    ok10 = st10.lo >= 0.0 - 1e-3 and st10.hi <= 2.0 + 1e-3
    ok = ok_y and ok1 and ok10
    _criterion(
        7,
        ok,
        f"wright y tail [{st_y.lo:.4f}, {st_y.hi:.4f}] in [{f2 - 1e-3:.4f}, {f1 + 1e-3:.4f}]; "
        f"MG tau=1 tail [{st1.lo:.4f}, {st1.hi:.4f}] in [0.3669, 1.6331]; "
        f"MG tau=10 tail [{st10.lo:.4f}, {st10.hi:.4f}] in [-0.001, 2.001]",
    )


def test_criterion_08_property_suite(mg, mg_traj_tau1, mg_traj_tau10):
    rng = np.random.default_rng(123)
    # (i) closed-form Schwarzians of the odd S-map examples
    a, b = 1.3, 2.0
    tanh_spec, atan_spec = maps.tanh_odd(a, b), maps.arctan_odd(a, b)
    ok_i = True
    for x in rng.uniform(-3.0, 3.0, 100):
        ok_i &= abs(maps.schwarzian(tanh_spec, float(x)) + 2.0 * b * b) < 1e-9
        want = -2.0 * b * b / (1.0 + b * b * x * x) ** 2
        ok_i &= abs(maps.schwarzian(atan_spec, float(x)) - want) < 1e-9

    # (ii) affine post-composition leaves the Schwarzian unchanged
    g = maps.affine_of(mg, 1.0 - math.exp(-1.0), math.exp(-1.0))
    ok_ii = True
    for x in rng.uniform(0.4, 1.8, 100):
        sf = maps.schwarzian(mg, float(x), floor=0.0)
        ok_ii &= abs(sf - maps.schwarzian(g, float(x), floor=0.0)) < 1e-10 * max(1.0, abs(sf))

    # (iii) tail ranges sit inside their own g image on the certification runs
    ok_iii = True
    for traj, tau in ((mg_traj_tau1, 1.0), (mg_traj_tau10, 10.0)):
        st = ddesim.tail_stats(traj)
        gmap = bounds.g_map_of(mg, tau)
        img = onedim.interval_image(gmap, (st.lo, st.hi))
        ok_iii &= img[0] - 1e-6 <= st.lo and st.hi <= img[1] + 1e-6

    # (iv) RK4 error drops ~16x under step halving on the linear oracle
    lin = maps.custom_map(lambda x: 0.5 * x, (-10.0, 10.0))
    errs = []
    for m in (50, 100):
        traj = ddesim.integrate(DdeProblem(a=1.0, tau=1.0, feedback=lin, history=1.0), 1.0, m)
        sel = traj.t >= 0.0
        exact = 0.5 + 0.5 * np.exp(-traj.t[sel])
        errs.append(np.max(np.abs(traj.x[sel] - exact)))
    ratio = errs[0] / errs[1]
    ok_iv = 12.0 <= ratio <= 20.0

    # (v) cycle residuals and nesting of the Wright refinement chain
    cyc = onedim.find_two_cycle(mg, maps.classify(mg))
    ok_v = max(cyc.residuals) < 1e-9
    wcyc = onedim.find_two_cycle(maps.wright_exp(2.0), maps.classify(maps.wright_exp(2.0), (-5.0, 5.0)))
    ok_v &= max(wcyc.residuals) < 1e-9
    prev = None
    for k in range(4):
        lo, hi = bounds.wright_basic_bounds(2.0, k=k).coarse_interval
        if prev is not None:
            ok_v &= prev[0] <= lo and hi <= prev[1]
        prev = (lo, hi)

    ok = ok_i and ok_ii and ok_iii and ok_iv and ok_v
    _criterion(
        8,
        ok,
        f"schwarzian forms {ok_i}, affine invariance {ok_ii}, g-image containment {ok_iii}, "
        f"RK4 ratio {ratio:.1f} in [12, 20] {ok_iv}, residuals+nesting {ok_v}",
    )


def test_criterion_09_linear_stability():
    tic = time.perf_counter()
    tau0_unit = linstab.critical_delay(0.0, -math.pi / 2.0)
    ok_thresh = abs(tau0_unit - 1.0) < 1e-9
    tau0 = linstab.critical_delay(1.0, -10.0)
    n_lo = linstab.count_unstable_pairs(Linearization(1.0, -10.0, tau0 - 1e-4))
    n_hi = linstab.count_unstable_pairs(Linearization(1.0, -10.0, tau0 + 1e-4))
    elapsed = time.perf_counter() - tic
    ok = ok_thresh and n_lo == 0 and n_hi == 1 and elapsed < 1.0
    _criterion(
        9,
        ok,
        f"tau0(0, -pi/2) = {tau0_unit:.12f}; N flips {n_lo} -> {n_hi} across "
        f"tau0 = {tau0:.6f} +- 1e-4; {elapsed:.2f} s (< 1 s)",
    )


def test_criterion_10_reproduce_determinism(tmp_path):
    files1 = certify.reproduce("ex3", tmp_path / "a")
    files2 = certify.reproduce("ex3", tmp_path / "b")
    ok = len(files1) == len(files2) and all(
        f1.read_bytes() == f2.read_bytes() for f1, f2 in zip(files1, files2)
    )
    _criterion(10, ok, f"reproduce ex3 twice: {len(files1)} files byte-identical")
