import math

import numpy as np
import pytest

from ddebounds import maps, onedim
from ddebounds.errors import (
    CriticalPointError,
    DomainError,
    InvalidParameterError,
    NotApplicableError,
)
from ddebounds.maps import MapKind

# per-family probe windows for derivative checks: inside the domain and away
# from regions where the derivatives underflow double precision
FAMILY_PROBES = [
    (lambda: maps.wright_exp(2.0), -3.0, 2.0),
    (lambda: maps.mackey_glass_hill(2.0, 20.0), 0.55, 2.5),
    (lambda: maps.lasota_wazewska(1.0, 1.0), 0.0, 3.0),
    (lambda: maps.ricker(math.exp(2.0)), 0.05, 6.0),
    (lambda: maps.logistic(3.2), 0.02, 0.98),
    (lambda: maps.tanh_odd(1.3, 2.0), -3.0, 3.0),
    (lambda: maps.arctan_odd(1.3, 2.0), -3.0, 3.0),
    (lambda: maps.taylor_mg(6.15385, 73.8462, 10.0), 0.15, 3.0),
    (lambda: maps.wright_f(2.0), -0.95, 1.5),
]


def test_eval_wright_fixed_point(wright2):
    assert maps.evaluate(wright2, 0.0) == 0.0


def test_eval_hill_equilibrium_and_origin(mg):
    assert maps.evaluate(mg, 1.0) == pytest.approx(1.0, abs=1e-15)
    assert maps.evaluate(mg, 0.0) == pytest.approx(2.0, abs=1e-15)


def test_eval_outside_domain_raises(mg):
    with pytest.raises(DomainError):
        maps.evaluate(mg, -0.5)


def test_eval_vectorized(wright2):
    xs = np.array([-1.0, 0.0, 1.0])
    vals = maps.evaluate(wright2, xs)
    assert vals.shape == (3,)
    assert vals[1] == 0.0


def test_family_parameter_validation():
    with pytest.raises(InvalidParameterError):
        maps.wright_exp(0.0)
    with pytest.raises(InvalidParameterError):
        maps.mackey_glass_hill(2.0, 1.0)
    with pytest.raises(InvalidParameterError):
        maps.mackey_glass_hill(-1.0, 20.0)
    with pytest.raises(InvalidParameterError):
        maps.wright_f(1.0)
    with pytest.raises(InvalidParameterError):
        maps.affine_of(maps.wright_exp(1.0), 0.0, 1.0)


def test_derivatives_wright_at_zero(wright2):
    b = maps.derivatives(wright2, 0.0)
    assert b.f1 == -2.0
    assert b.method == "closed_form"


def test_derivatives_hill_slope_at_equilibrium(mg):
    assert maps.derivatives(mg, 1.0).f1 == pytest.approx(-10.0, abs=1e-9)


@pytest.mark.parametrize("make,lo,hi", FAMILY_PROBES)
def test_closed_forms_match_finite_differences(make, lo, hi):
    spec = make()
    rng = np.random.default_rng(42)
    xs = rng.uniform(lo, hi, 100)
    closed = np.array([
        (lambda b: (b.f1, b.f2, b.f3))(maps.derivatives(spec, float(x))) for x in xs
    ])
    fd = np.array([
        [float(v) for v in maps._fd_bundle(lambda y: maps._raw_value(spec, y), np.asarray(x))]
        for x in xs
    ])
    tols = (1e-6, 1e-4, 1e-3)
    for k, tol in enumerate(tols):
        scale = max(np.max(np.abs(closed[:, k])), 1.0)
        assert np.max(np.abs(closed[:, k] - fd[:, k])) <= tol * scale, (spec, k)


def test_custom_map_uses_finite_differences():
    spec = maps.custom_map(lambda x: 0.5 * x * x, (-2.0, 2.0))
    b = maps.derivatives(spec, 1.0)
    assert b.method == "finite_difference"
    assert b.f1 == pytest.approx(1.0, rel=1e-8)
    assert b.f2 == pytest.approx(1.0, rel=1e-6)


def test_schwarzian_tanh_is_constant():
    spec = maps.tanh_odd(1.7, 3.0)
    rng = np.random.default_rng(7)
    for x in rng.uniform(-2.0, 2.0, 100):
        assert maps.schwarzian(spec, float(x)) == pytest.approx(-2.0 * 9.0, abs=1e-9)


def test_schwarzian_arctan_closed_form():
    a, b = 1.7, 3.0
    spec = maps.arctan_odd(a, b)
    rng = np.random.default_rng(8)
    for x in rng.uniform(-2.0, 2.0, 100):
        want = -2.0 * b * b / (1.0 + b * b * x * x) ** 2
        assert maps.schwarzian(spec, float(x)) == pytest.approx(want, abs=1e-9)


def test_schwarzian_logistic_matches_fd_oracle():
    spec = maps.logistic(3.2)
    x = 0.25
    f1, f2, f3 = (float(v) for v in maps._fd_bundle(lambda y: maps._raw_value(spec, y), np.asarray(x)))
    oracle = f3 / f1 - 1.5 * (f2 / f1) ** 2
    assert maps.schwarzian(spec, x) == pytest.approx(oracle, rel=1e-4)


def test_schwarzian_rejects_critical_point():
    spec = maps.ricker(math.exp(2.0))
    with pytest.raises(CriticalPointError):
        maps.schwarzian(spec, 1.0)  # f'(1) = 0
    # the floor is configurable; derivative magnitudes below it are rejected
    with pytest.raises(CriticalPointError):
        maps.schwarzian(maps.mackey_glass_hill(2.0, 20.0), 1e-4)
    assert maps.schwarzian(maps.mackey_glass_hill(2.0, 20.0), 1e-4, floor=0.0) < 0.0


def test_affine_composition_preserves_schwarzian():
    rng = np.random.default_rng(9)
    for base, lo, hi in [
        (maps.wright_exp(2.0), -3.0, 2.0),
        (maps.mackey_glass_hill(2.0, 20.0), 0.6, 2.5),
        (maps.lasota_wazewska(1.0, 1.0), 0.0, 3.0),
    ]:
        g = maps.affine_of(base, 0.632, 0.368)
        for x in rng.uniform(lo, hi, 40):
            sf = maps.schwarzian(base, float(x), floor=0.0)
            sg = maps.schwarzian(g, float(x), floor=0.0)
            assert abs(sf - sg) <= 1e-10 * max(1.0, abs(sf))


def test_classify_wright_is_smap(wright2, wright2_cls):
    assert wright2_cls.kind == MapKind.S_MAP
    assert wright2_cls.finite_limit == 2.0


def test_classify_hill_is_smap(mg_cls):
    assert mg_cls.kind == MapKind.S_MAP


def test_classify_ricker_su_map():
    spec = maps.ricker(math.exp(2.0))
    cls = maps.classify(spec, (0.0, 8.0))
    assert cls.kind == MapKind.SU_MAP
    assert cls.critical_point == pytest.approx(1.0, abs=1e-10)


def test_classify_negative_cubic_neither():
    spec = maps.custom_map(lambda x: -(x**3), (-1.0, 1.0))
    cls = maps.classify(spec, (-1.0, 1.0), 129)
    assert cls.kind == MapKind.NEITHER
    assert cls.witness == pytest.approx(0.0, abs=1e-12)


def test_classify_increasing_map_neither():
    spec = maps.custom_map(lambda x: np.tanh(x), (-2.0, 2.0), shape="decreasing")
    cls = maps.classify(spec, (-2.0, 2.0))
    assert cls.kind == MapKind.NEITHER


def test_classify_rejects_small_grid(wright2):
    with pytest.raises(InvalidParameterError):
        maps.classify(wright2, (-1.0, 1.0), grid_size=32)


def test_smap_probes_negative_slope_and_schwarzian(mg, mg_cls, wright2, wright2_cls):
    rng = np.random.default_rng(11)
    for spec, cls in ((mg, mg_cls), (wright2, wright2_cls)):
        lo, hi = cls.probe_interval
        xs = rng.uniform(lo, hi, 1000)
        f1 = np.asarray(maps._raw_derivs(spec, xs)[0])
        # boundary zeros are exempt; interior slopes must be strictly negative
        interior = (xs > spec.domain[0]) & (xs < spec.domain[1])
        assert np.all(f1[interior] < 0.0)
        sf = maps._schwarzian_grid(spec, xs[interior])
        assert np.all(sf[np.isfinite(sf)] < 0.0)


def test_invariant_interval_wright(wright2, wright2_cls):
    a, b = maps.invariant_attracting_interval(wright2, wright2_cls)
    assert b == 2.0
    assert a == pytest.approx(-2.0 * (math.exp(2.0) - 1.0), rel=1e-12)


def test_invariant_interval_hill(mg, mg_cls):
    a, b = maps.invariant_attracting_interval(mg, mg_cls)
    assert b == 2.0
    assert a == pytest.approx(2.0 / (1.0 + 2.0**20), rel=1e-12)


def test_invariant_interval_ricker():
    spec = maps.ricker(math.exp(2.0))
    cls = maps.classify(spec, (0.0, 8.0))
    a, b = maps.invariant_attracting_interval(spec, cls)
    e = math.e
    assert b == pytest.approx(e, rel=1e-12)  # f(x0) = f(1) = e
    assert a == pytest.approx(math.exp(2.0) * e * math.exp(-e), rel=1e-12)
    assert a >= 1.0  # the SU restriction f(f(x0)) >= x0 holds here


def test_invariant_interval_su_restriction_fails():
    spec = maps.ricker(math.exp(5.0))
    cls = maps.classify(spec, (0.0, 60.0))
    assert cls.kind == MapKind.SU_MAP
    with pytest.raises(NotApplicableError):
        maps.invariant_attracting_interval(spec, cls)


@pytest.mark.parametrize("make,probe", [
    (lambda: maps.wright_exp(2.0), (-5.0, 5.0)),
    (lambda: maps.mackey_glass_hill(2.0, 20.0), None),
    (lambda: maps.lasota_wazewska(1.0, 1.0), None),
    (lambda: maps.tanh_odd(1.3, 2.0), None),
    (lambda: maps.arctan_odd(1.3, 2.0), None),
])
def test_invariant_interval_is_invariant(make, probe):
    spec = make()
    cls = maps.classify(spec, probe)
    a, b = maps.invariant_attracting_interval(spec, cls)
    img = onedim.interval_image(spec, (a, b))
    tol = 1e-12 * max(1.0, abs(a), abs(b))
    assert img[0] >= a - tol and img[1] <= b + tol


def test_mapspec_from_dict_roundtrip():
    spec = maps.mapspec_from_dict(
        {"family": "mackey_glass_hill", "params": {"p": 2, "n": 20}, "domain": [0, "inf"]}
    )
    assert spec.family == "mackey_glass_hill"
    assert spec.domain == (0.0, math.inf)
    assert maps.evaluate(spec, 1.0) == pytest.approx(1.0)


def test_mapspec_from_dict_rejects_bad_input():
    with pytest.raises(InvalidParameterError):
        maps.mapspec_from_dict({"family": "nope", "params": {}})
    with pytest.raises(InvalidParameterError):
        maps.mapspec_from_dict({"params": {"r": 1}})
    with pytest.raises(InvalidParameterError):
        maps.mapspec_from_dict({"family": "wright_exp", "params": {"r": 1}, "domain": [0]})
