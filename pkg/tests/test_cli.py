import json

import pytest

from magnetophoton import cli
from magnetophoton.params import MU0, PhysicalInput, build_params, eb_to_field
from magnetophoton.spectrum import resonant_fields
from magnetophoton.sweep import CSV_HEADER, csv_body


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def parse(out):
    return dict(line.split("=", 1) for line in out.splitlines() if "=" in line)


def test_roots_output(capsys):
    code, out, _ = run(capsys, "roots")
    assert code == 0
    kv = parse(out)
    p = build_params(PhysicalInput(1000.0, 500.0, 1e14, 2.0))
    assert float(kv["tau0_exact"]) == pytest.approx(p.omega0, rel=1e-6)
    assert float(kv["tau21_exact"]) == pytest.approx(p.kappa2, rel=1e-8)
    assert float(kv["tau21_minus_kappa_exact"]) > 0
    assert kv["collision"] == "False"


def test_transform_output_has_small_residuals(capsys):
    code, out, _ = run(capsys, "transform", "--field", "1e9am")
    assert code == 0
    kv = parse(out)
    for key in ("residual_uu_minus_vv", "residual_vuT_minus_uvT"):
        assert float(kv[key]) < 1e-8
    assert {"A[0]", "B[4]", "u[2]", "v[3]", "offset"} <= set(kv)


def test_measure_output(capsys):
    code, out, _ = run(capsys, "measure", "--field", "1e10am", "--density", "1e18")
    assert code == 0
    kv = parse(out)
    for key in ("upsilon1", "upsilon4", "y", "z", "mu1", "mu2", "M", "one_minus_y"):
        assert key in kv
    assert 0 < float(kv["M"]) < 1
    assert float(kv["mu1"]) + float(kv["mu2"]) == pytest.approx(1.0, abs=1e-15)


def test_parallel_polarizations_measure_zero(capsys):
    code, out, _ = run(capsys, "measure", "--lambda1", "1", "--lambda2", "1", "--field", "1e10am")
    assert code == 0 and float(parse(out)["M"]) == 0.0


def test_resonance_reports_reference_comparison(capsys):
    code, out, _ = run(capsys, "resonance", "--wavelength2", "380")
    assert code == 0
    kv = parse(out)
    b2 = eb_to_field(resonant_fields(build_params(PhysicalInput(1000.0, 380.0, 1e14, 2.0))).eB2)
    assert float(kv["B2_am"]) == pytest.approx(b2, rel=1e-14)
    assert kv["B2_in_reference_range_6.0_225.0_am"] == "False"
    assert float(kv["B2_over_reference_low"]) == pytest.approx(b2 / 6.0, rel=1e-14)
    assert kv["B2_am_unscaled"] == kv["B2_am_scaled"] == kv["B2_am_lightcone"]
    assert kv["polarization_pair_B2"] == "2,1" and kv["polarization_pair_B1"] == "1,2"


def test_field_units(capsys):
    t = parse(run(capsys, "resonance")[1])
    for arg in ("1t", "1T", f"{1 / MU0!r}am", "5.0"):
        code, _, _ = run(capsys, "roots", "--field", arg)
        assert code == 0
    assert float(t["B1_tesla"]) / MU0 == pytest.approx(float(t["B1_am"]), rel=1e-12)


@pytest.mark.parametrize(
    "argv",
    [
        ["measure", "--density", "abc"],
        ["measure", "--field", "2gauss"],
        ["measure", "--field", "two"],
        ["measure", "--wavelength1", "500", "--wavelength2", "500"],
        ["measure", "--wavelength2", "-3"],
        ["measure", "--convention", "cgs"],
        ["measure", "--lambda1", "3"],
        ["sweep", "--range", "1"],
        ["sweep"],
        ["roots", "--config", "/nonexistent/config.json"],
        ["frobnicate"],
    ],
)
def test_bad_input_exits_one(capsys, argv):
    with pytest.raises(SystemExit) as exc:
        code = cli.main(argv)
        raise SystemExit(code)
    assert exc.value.code == 1
    assert capsys.readouterr().err


def test_numerical_failure_exits_two(capsys):
    # a coupling this small leaves the root offsets below the subnormal range
    code, _, err = run(capsys, "measure", "--density", "1e-300")
    assert code == 2 and "numerical error" in err


def test_config_merges_with_flags_winning(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"wavelength2": 380.0, "density": 1e16, "field": "1e9am"}))
    a = parse(run(capsys, "measure", "--config", str(cfg))[1])
    b = parse(run(capsys, "measure", "--wavelength2", "380", "--density", "1e16", "--field", "1e9am")[1])
    assert a == b
    c = parse(run(capsys, "measure", "--config", str(cfg), "--density", "1e18")[1])
    d = parse(run(capsys, "measure", "--wavelength2", "380", "--density", "1e18", "--field", "1e9am")[1])
    assert c == d and c != a


def test_config_accepts_long_key_names(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"wavelength_2_nm": 380.0, "density_m3": 1e16, "field_am": 1e9, "landau_level": 0, "unit_convention": "unscaled"}))
    a = parse(run(capsys, "measure", "--config", str(cfg))[1])
    b = parse(run(capsys, "measure", "--wavelength2", "380", "--density", "1e16", "--field", "1e9am", "--convention", "unscaled")[1])
    assert a == b


def test_sweep_writes_reproducible_csv(tmp_path, capsys):
    b2 = eb_to_field(resonant_fields(build_params(PhysicalInput(1000.0, 500.0, 1e14, 2.0))).eB2)
    rng = f"{0.5 * b2!r},{1.5 * b2!r}"
    paths = [tmp_path / "a.csv", tmp_path / "b.csv"]
    for path, workers in zip(paths, ("1", "3")):
        code, _, _ = run(capsys, "sweep", "--range", rng, "--points", "30", "--workers", workers, "--out", str(path))
        assert code == 0
    a, b = (p.read_text() for p in paths)
    assert csv_body(a) == csv_body(b)
    assert CSV_HEADER in a.splitlines()
    rows = [ln for ln in a.splitlines() if ln.startswith("field,")]
    assert len(rows) == 30


def test_sweep_density_axis_to_stdout(capsys):
    code, out, _ = run(capsys, "sweep", "--sweep-axis", "density", "--range", "1e12,1e20", "--points", "5")
    assert code == 0
    rows = [ln.split(",") for ln in out.splitlines() if ln.startswith("density,")]
    Ms = [float(r[3]) for r in rows]
    assert len(Ms) == 5 and Ms == sorted(Ms)


def test_selfcheck_passes(capsys):
    code, out, _ = run(capsys, "selfcheck")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines and all(ln.startswith("PASS") for ln in lines)


def test_selfcheck_failure_exit_code(monkeypatch, capsys):
    from magnetophoton.validation import CheckResult

    monkeypatch.setattr(cli, "run_checks", lambda names: [CheckResult("forced", False, {}, 0.0)])
    code, out, _ = run(capsys, "selfcheck")
    assert code == 3 and out.startswith("FAIL")
