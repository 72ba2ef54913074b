import math

import pytest

from ddebounds import certify, cli, maps
from ddebounds.bounds import GLOBAL_STABILITY
from ddebounds.certify import RunConfig
from ddebounds.errors import ConfigError

MG_DICT = {
    "a": 1,
    "tau": 1.0,
    "T": 300.0,
    "m_steps": 100,
    "histories": [0.3, 1.8],
    "map": {"family": "mackey_glass_hill", "params": {"p": 2, "n": 20}},
}

WRIGHT_DICT = {
    "a": 0,
    "tau": 1.0,
    "T": 60.0,
    "histories": [-0.5, 0.5, 1.0],
    "map": {"family": "wright_exp", "params": {"r": 2}},
}


def _write_yaml(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text)
    return path


@pytest.fixture(scope="module")
def mg_certification():
    return certify.certify(RunConfig.from_dict(MG_DICT))


@pytest.fixture(scope="module")
def wright_certification():
    return certify.certify(RunConfig.from_dict(WRIGHT_DICT))


def test_config_from_yaml(tmp_path):
    path = _write_yaml(
        tmp_path,
        "run.yaml",
        """
a: 1
tau: 2.5
histories: [0.4]
map:
  family: mackey_glass_hill
  params: {p: 2, n: 20}
  domain: [0, inf]
""",
    )
    cfg = RunConfig.from_yaml(path)
    assert cfg.tau == 2.5
    assert cfg.histories == (0.4,)
    assert cfg.feedback.domain == (0.0, math.inf)
    assert cfg.horizon == max(100.0 * 2.5, 200.0)


def test_config_rejects_bad_input(tmp_path):
    with pytest.raises(ConfigError):
        RunConfig.from_dict({"a": 1})  # no map
    with pytest.raises(ConfigError):
        RunConfig.from_dict({**MG_DICT, "bogus": 1})
    with pytest.raises(ConfigError):
        RunConfig.from_dict({**MG_DICT, "a": 2})
    with pytest.raises(ConfigError):
        RunConfig.from_dict({**MG_DICT, "histories": []})
    with pytest.raises(ConfigError):
        RunConfig.from_dict({**MG_DICT, "pipelines": ["nope"]})
    with pytest.raises(ConfigError):
        RunConfig.from_dict({**MG_DICT, "m_steps": 5})
    with pytest.raises(ConfigError):
        RunConfig.from_yaml(tmp_path / "missing.yaml")
    bad = _write_yaml(tmp_path, "bad.yaml", "a: [unclosed")
    with pytest.raises(ConfigError):
        RunConfig.from_yaml(bad)


def test_default_history_battery(mg):
    battery = certify.default_history_battery(mg, 1.0)
    a, b = maps.invariant_attracting_interval(mg, maps.classify(mg))
    assert len(battery) == 3
    assert battery[0] == pytest.approx(a + 0.1 * (b - a))
    assert battery[2] == pytest.approx(a + 0.9 * (b - a))


def test_certify_mg_contained(mg_certification):
    cert = mg_certification
    assert cert.all_contained
    assert cert.theory.interval[1] == pytest.approx(1.6071, abs=1e-3)
    assert all(s[0] > 0 and s[1] > 0 for s in cert.slack)
    assert "PASS" in cert.text()


def test_certify_wright_contained(wright_certification):
    cert = wright_certification
    assert cert.all_contained
    # upper slack against the refined bound 2.1122 stays positive
    assert cert.theory.interval[1] == pytest.approx(2.1122, abs=1e-3)
    assert all(s[1] > 0 for s in cert.slack)


def test_certify_small_delay_stability():
    cfg = RunConfig.from_dict(
        {
            "a": 1,
            "tau": 0.05,
            "T": 200.0,
            "map": {"family": "mackey_glass_hill", "params": {"p": 2, "n": 20}},
        }
    )
    cert = certify.certify(cfg)
    assert cert.theory.verdict == GLOBAL_STABILITY
    assert cert.all_contained
    assert all(abs(x - 1.0) < 1e-3 for x in cert.end_values)


def test_certify_reports_unconverged_transient_as_failure():
    # at T = 50 the r = 1.5 Wright solution has not yet reached the 1e-3 ball:
    # certify must report the violation instead of certifying
    cfg = RunConfig.from_dict(
        {
            "a": 0,
            "tau": 1.0,
            "T": 50.0,
            "histories": [1.0],
            "map": {"family": "wright_exp", "params": {"r": 1.5}},
        }
    )
    cert = certify.certify(cfg)
    assert cert.theory.verdict == GLOBAL_STABILITY
    assert not cert.all_contained
    assert "FAIL" in cert.text()


def test_certification_csv_rows(mg_certification):
    rows = mg_certification.csv_rows()
    assert rows[0].startswith("history,")
    assert len(rows) == 3
    assert rows[1].endswith(",1") or ",1," in rows[1]


def test_bounded_interval_straddles_equilibrium(mg_certification, wright_certification):
    for cert in (mg_certification, wright_certification):
        lo, hi = cert.theory.interval
        assert lo < cert.equilibrium < hi


def test_certify_errors_name_failing_stage():
    cfg = RunConfig.from_dict(
        {
            "a": 1,
            "tau": 1.0,
            "map": {"family": "ricker", "params": {"lam": math.exp(2.0)}},
        }
    )
    from ddebounds.errors import ClassificationError

    with pytest.raises(ClassificationError) as err:
        certify.certify(cfg)
    assert "[bounds]" in str(err.value)


def test_reproduce_ex1(tmp_path):
    files = certify.reproduce("ex1", tmp_path)
    names = {f.name for f in files}
    assert {"ex1_trajectory_1.csv", "ex1_trajectory_2.csv", "ex1_bounds.csv", "ex1_summary.csv"} <= names
    summary = (tmp_path / "ex1_summary.csv").read_text().splitlines()
    rows = {ln.split(",")[0]: ln.split(",") for ln in summary[1:]}
    assert abs(float(rows["upper_bound_M2"][2]) - 2.112) < 1e-3
    assert abs(float(rows["upper_bound_M1"][2]) - 6.389) < 1e-3
    traj = (tmp_path / "ex1_trajectory_1.csv").read_text().splitlines()
    assert traj[0] == "t,y"


def test_reproduce_ex2(tmp_path):
    certify.reproduce("ex2", tmp_path)
    summary = (tmp_path / "ex2_summary.csv").read_text().splitlines()
    rows = {ln.split(",")[0]: ln.split(",") for ln in summary[1:]}
    assert float(rows["equilibrium_K"][3]) < 1e-12
    assert float(rows["slope_at_K"][3]) < 1e-9
    assert abs(float(rows["cycle_lo"][2])) < 1e-4
    assert abs(float(rows["cycle_hi"][2]) - 2.0) < 1e-4


def test_reproduce_ex3(tmp_path):
    certify.reproduce("ex3", tmp_path)
    summary = (tmp_path / "ex3_summary.csv").read_text().splitlines()
    rows = {ln.split(",")[0]: ln.split(",") for ln in summary[1:]}
    assert abs(float(rows["g_at_0"][2]) - 1.6321) < 1e-4
    assert abs(float(rows["g2_at_0"][2]) - 0.3679) < 1e-4
    assert abs(float(rows["h_at_0"][2]) - 1.6071) < 1e-3


def test_reproduce_rejects_unknown(tmp_path):
    from ddebounds.errors import InvalidParameterError

    with pytest.raises(InvalidParameterError):
        certify.reproduce("ex9", tmp_path)


def test_cli_analyze(tmp_path, capsys):
    import yaml

    path = _write_yaml(tmp_path, "mg.yaml", yaml.safe_dump(MG_DICT))
    assert cli.main(["analyze", str(path)]) == 0
    out = capsys.readouterr().out
    assert "s_map" in out
    assert "globally_attracting_two_cycle" in out


def test_cli_bounds_csv(tmp_path, capsys):
    import yaml

    path = _write_yaml(tmp_path, "mg.yaml", yaml.safe_dump(MG_DICT))
    csv_path = tmp_path / "rows.csv"
    assert cli.main(["bounds", str(path), "--csv", str(csv_path)]) == 0
    lines = csv_path.read_text().splitlines()
    assert lines[0] == "pipeline,verdict,lo,hi,margin"
    assert any(ln.startswith("h_map,") for ln in lines)
    assert lines[-1].startswith("best,")


def test_cli_simulate(tmp_path, capsys):
    import yaml

    cfg = dict(MG_DICT, T=50.0)
    path = _write_yaml(tmp_path, "mg.yaml", yaml.safe_dump(cfg))
    out = tmp_path / "out"
    assert cli.main(["simulate", str(path), "--out", str(out)]) == 0
    assert (out / "trajectory_1.csv").exists()
    assert (out / "trajectory_2.csv").exists()


def test_cli_stability(capsys):
    assert cli.main(["stability", "--a", "1", "--b", "-10", "--tau", "0.2"]) == 0
    out = capsys.readouterr().out
    assert "0.167938" in out
    assert "N = 1" in out
    assert "unstable" in out


def test_cli_certify_pass_and_fail(tmp_path, capsys):
    import yaml

    path = _write_yaml(tmp_path, "mg.yaml", yaml.safe_dump(MG_DICT))
    out = tmp_path / "report"
    assert cli.main(["certify", str(path), "--out", str(out)]) == 0
    assert (out / "report.txt").exists() and (out / "report.csv").exists()
    failing = {
        "a": 0,
        "tau": 1.0,
        "T": 50.0,
        "histories": [1.0],
        "map": {"family": "wright_exp", "params": {"r": 1.5}},
    }
    path2 = _write_yaml(tmp_path, "failing.yaml", yaml.safe_dump(failing))
    assert cli.main(["certify", str(path2)]) == 1


def test_cli_invalid_input_exit_code(tmp_path, capsys):
    assert cli.main(["analyze", str(tmp_path / "missing.yaml")]) == 2
    bad = _write_yaml(tmp_path, "bad.yaml", "map: {family: nope}")
    assert cli.main(["bounds", str(bad)]) == 2


def test_cli_reproduce_deterministic(tmp_path, capsys):
    out1, out2 = tmp_path / "r1", tmp_path / "r2"
    assert cli.main(["reproduce", "--example", "ex3", "--out", str(out1)]) == 0
    assert cli.main(["reproduce", "--example", "ex3", "--out", str(out2)]) == 0
    for f1 in sorted(out1.iterdir()):
        f2 = out2 / f1.name
        assert f1.read_bytes() == f2.read_bytes()
