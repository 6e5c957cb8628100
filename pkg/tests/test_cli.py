import json

import numpy as np
import pytest

from spinaccess.cli import main


def write_json(path, obj):
    path.write_text(json.dumps(obj))


def run(args):
    return main([str(a) for a in args])


def test_classify_identity_ray(tmp_path):
    inp = tmp_path / "in.json"
    out = tmp_path / "out.json"
    write_json(inp, {"basis": [[1, 1, 1, 0, 0, 0]]})
    assert run(["classify", "--input", inp, "--output", out]) == 0
    data = json.loads(out.read_text())
    assert data["case"] == "3c"
    assert data["n_p"] == data["n_cp"] == 1
    assert data["certificate"] == "none"
    assert not data["ambiguous"]


def test_classify_spin_field_pattern(tmp_path):
    inp = tmp_path / "in.json"
    out = tmp_path / "out.json"
    write_json(inp, {"basis": [
        [1, 0, 0, 0, 0, 0], [0, 0, 1, 0, 0, 0], [0, 0, 0, 1, 0, 0],
        [0, 0, 0, 0, 1, 0], [0, 0, 0, 0, 0, 1]]})
    # boundary-contained admissible set: conservative classification, exit 2
    assert run(["classify", "--input", inp, "--output", out]) == 2
    data = json.loads(out.read_text())
    assert data["case"] == "3b"
    assert data["certificate"] == "condition1"
    assert (data["n_p"], data["n_cp"]) == (5, 3)
    assert data["ambiguous"]


def test_classify_rejects_empty_basis(tmp_path):
    inp = tmp_path / "in.json"
    write_json(inp, {"basis": []})
    assert run(["classify", "--input", inp]) == 1


def test_classify_rejects_unknown_key(tmp_path, capsys):
    inp = tmp_path / "in.json"
    write_json(inp, {"basis": [[1, 1, 1, 0, 0, 0]], "bogus": 1})
    assert run(["classify", "--input", inp]) == 1
    assert "bogus" in capsys.readouterr().err


def test_classify_rejects_malformed_json(tmp_path):
    inp = tmp_path / "in.json"
    inp.write_text("{not json")
    assert run(["classify", "--input", inp]) == 1


def test_lie_report(tmp_path):
    inp = tmp_path / "in.json"
    out = tmp_path / "out.json"
    write_json(inp, {
        "basis": [[1, 0, 0, 0, 0, 0], [0, 1, 0, 0, 0, 0], [0, 0, 0, 0, 0, 1]],
        "h": [0, 0, 1.0],
        "theta_p": [1.0, 1.0, 0.7],
        "theta_cp": [1.0, 1.0, 0.0],
    })
    assert run(["lie", "--input", inp, "--output", out]) == 0
    data = json.loads(out.read_text())
    assert (data["dim_p"], data["dim_cp"]) == (9, 2)
    assert data["accessible_p"] and not data["accessible_cp"]
    assert data["differ"]
    assert len(data["basis_p"]) == 9
    assert len(data["basis_cp"]) == 2


def test_lie_infeasible_coordinates_exit_domain(tmp_path):
    inp = tmp_path / "in.json"
    write_json(inp, {
        "basis": [[1, 0, 0, 0, 0, 0], [0, 1, 0, 0, 0, 0], [0, 0, 0, 0, 0, 1]],
        "h": [0, 0, 1.0],
        "theta_p": [1.0, 1.0, 0.7],
        "theta_cp": [1.0, 1.0, 0.7],
    })
    assert run(["lie", "--input", inp]) == 2


def test_evolve_empty_schedule_single_row(tmp_path):
    inp = tmp_path / "in.json"
    out = tmp_path / "traj.csv"
    write_json(inp, {"c": [1, 1, 1, 0, 0, 0], "h": [0, 0, 1], "v0": [0.5, 0, 0],
                     "schedule": [], "dt": 0.1})
    assert run(["evolve", "--input", inp, "--output", out]) == 0
    lines = out.read_text().strip().splitlines()
    assert lines[0] == "t,rho1,rho2,rho3,purity,u"
    assert len(lines) == 2


def test_evolve_csv_round_trips_bit_exactly(tmp_path):
    inp = tmp_path / "in.json"
    out = tmp_path / "traj.csv"
    write_json(inp, {"c": [0.3, 0.4, 0.5, 0.05, 0, 0], "h": [0.2, 0, 1],
                     "v0": [0.4, 0.1, -0.2], "schedule": [[1.0, 1.0], [0.5, 0.0]],
                     "dt": 0.07})
    assert run(["evolve", "--input", inp, "--output", out]) == 0

    from spinaccess import ControlSchedule, evolve_schedule, vec6_to_sym
    from spinaccess.generator import dissipation_from_kossakowski

    d = dissipation_from_kossakowski(vec6_to_sym([0.3, 0.4, 0.5, 0.05, 0, 0]))
    traj = evolve_schedule([0.2, 0, 1], d, ControlSchedule([(1.0, 1.0), (0.5, 0.0)]),
                           [0.4, 0.1, -0.2], 0.07)
    rows = [line.split(",") for line in out.read_text().strip().splitlines()[1:]]
    parsed = np.array([[float(x) for x in row] for row in rows])
    assert parsed.shape[0] == len(traj.times)
    assert np.array_equal(parsed[:, 0], traj.times)
    assert np.array_equal(parsed[:, 1:4], traj.states)
    assert np.array_equal(parsed[:, 4], traj.purities)


def test_evolve_flags_ball_exit_without_aborting(tmp_path, capsys):
    inp = tmp_path / "in.json"
    out = tmp_path / "traj.csv"
    write_json(inp, {"c": [1, 1, -2.5, 0, 0, 0], "h": [0, 0, 0], "v0": [0.5, 0, 0],
                     "schedule": [[2.0, 0.0]], "dt": 0.05})
    assert run(["evolve", "--input", inp, "--output", out]) == 0
    assert "Bloch ball" in capsys.readouterr().err


def test_evolve_json_format(tmp_path):
    inp = tmp_path / "in.json"
    out = tmp_path / "traj.json"
    write_json(inp, {"c": [1, 1, 1, 0, 0, 0], "h": [0, 0, 1], "v0": [0.5, 0, 0],
                     "schedule": [[1.0, 1.0]], "dt": 0.1})
    assert run(["evolve", "--input", inp, "--output", out, "--format", "json"]) == 0
    data = json.loads(out.read_text())
    assert not data["exited_ball"]
    assert len(data["times"]) == len(data["states"])


def test_spin_field_zero_family(tmp_path):
    inp = tmp_path / "in.json"
    out = tmp_path / "out.json"
    write_json(inp, {"family": "zero", "b3": 1.0})
    assert run(["spin-field", "--input", inp, "--output", out]) == 0
    data = json.loads(out.read_text())
    coeffs = data["coefficients"]
    assert all(coeffs[k] == 0.0 for k in ("c11", "c12", "c13", "c23", "c33"))
    assert data["cp_admissible"]


def test_spin_field_exponential(tmp_path):
    inp = tmp_path / "in.json"
    out = tmp_path / "out.json"
    write_json(inp, {"family": "exponential", "w11": 1.0, "w13": 0.2,
                     "w33": 1.0, "tau": 0.5, "b3": 1.0})
    assert run(["spin-field", "--input", inp, "--output", out]) == 0
    data = json.loads(out.read_text())
    assert not data["cp_admissible"]
    assert data["positivity_admissible"]
    assert abs(data["coefficients"]["c11"] - 0.5) < 1e-12


def test_montecarlo_zero_samples_is_input_error(tmp_path):
    inp = tmp_path / "in.json"
    write_json(inp, {"family": "white", "w11": 0.2, "b3": 1.0, "v0": [0.5, 0, 0],
                     "dt": 0.01, "t_final": 1.0, "n_samples": 0})
    assert run(["montecarlo", "--input", inp]) == 1


def test_montecarlo_report(tmp_path):
    inp = tmp_path / "in.json"
    out = tmp_path / "out.json"
    write_json(inp, {"family": "white", "w11": 0.2, "w33": 0.1, "b3": 1.0,
                     "v0": [0.5, 0, 0], "dt": 0.01, "t_final": 1.0,
                     "n_samples": 200})
    assert run(["montecarlo", "--input", inp, "--output", out, "--seed", "5"]) == 0
    data = json.loads(out.read_text())
    assert data["n_samples"] == 200
    assert data["within_3se"]


def test_reproduce_passes_and_is_deterministic(tmp_path):
    out1 = tmp_path / "r1.json"
    out2 = tmp_path / "r2.json"
    assert run(["reproduce", "--output", out1, "--seed", "0"]) == 0
    assert run(["reproduce", "--output", out2, "--seed", "0"]) == 0
    assert out1.read_bytes() == out2.read_bytes()
    report = json.loads(out1.read_text())
    assert report["all_passed"]
    assert len(report["checks"]) >= 10


def test_reproduce_perturbed_convention_mismatches(tmp_path, capsys):
    out = tmp_path / "r.json"
    assert run(["reproduce", "--output", out, "--perturb-convention"]) == 3
    report = json.loads(out.read_text())
    assert not report["all_passed"]
    assert "mismatch" in capsys.readouterr().err


def test_config_overrides_flags(tmp_path):
    inp = tmp_path / "in.json"
    out = tmp_path / "out.json"
    cfg = tmp_path / "cfg.json"
    write_json(inp, {"family": "zero", "b3": 1.0})
    write_json(cfg, {"output": str(out)})
    assert run(["spin-field", "--input", inp, "--config", cfg]) == 0
    assert out.exists()


def test_config_rejects_unknown_keys(tmp_path):
    inp = tmp_path / "in.json"
    cfg = tmp_path / "cfg.json"
    write_json(inp, {"family": "zero", "b3": 1.0})
    write_json(cfg, {"outputs": "typo.json"})
    assert run(["spin-field", "--input", inp, "--config", cfg]) == 1


def test_unknown_tolerance_key_rejected(tmp_path):
    inp = tmp_path / "in.json"
    write_json(inp, {"basis": [[1, 1, 1, 0, 0, 0]]})
    assert run(["classify", "--input", inp, "--tol", "bogus=1"]) == 1


def test_missing_input_rejected():
    assert run(["classify"]) == 1
