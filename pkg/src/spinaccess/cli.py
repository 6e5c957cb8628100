"""Command-line front end: JSON/CSV I/O around the analysis modules.

Exit-code contract: 0 success, 1 malformed input, 2 domain error (including
infeasible or boundary-ambiguous classifications), 3 reproduction mismatch.
Every command is deterministic given its input file and seed.  Floats print
with 17 significant digits in CSV and shortest-round-trip form in JSON, so
outputs re-read losslessly.
"""

import argparse
import json
import sys

import numpy as np

from .cones import ParamSubspace, classify_subspace, rank_drop_certificate
from .dynamics import ControlSchedule, evolve_schedule
from .errors import SpinAccessError
from .generator import dissipation_from_kossakowski, sym_to_vec6, vec6_to_sym
from .liealg import compare_accessibility
from .reproduce import run_reproduction
from .stochastic import (CorrelationModel, build_spin_generator, coefficients,
                         cp_admissible, mc_validate, positivity_admissible)

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_DOMAIN = 2
EXIT_MISMATCH = 3


class InputError(Exception):
    """Malformed command input; maps to exit code 1."""


def _fail_input(message: str) -> "InputError":
    return InputError(message)


def _strict_keys(data: dict, allowed: set, required: set, context: str) -> None:
    for key in data:
        if key not in allowed:
            raise _fail_input(f"unknown key {key!r} in {context}")
    for key in required:
        if key not in data:
            raise _fail_input(f"missing key {key!r} in {context}")


def _load_json(path: str, context: str) -> dict:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise _fail_input(f"cannot read {context} file: {exc}")
    except json.JSONDecodeError as exc:
        raise _fail_input(f"{context} file is not valid JSON: {exc}")
    if not isinstance(data, dict):
        raise _fail_input(f"{context} file must hold a JSON object")
    return data


def _vector(data, name, length):
    arr = np.asarray(data, dtype=float)
    if arr.shape != (length,):
        raise _fail_input(f"field {name!r} must be a list of {length} numbers")
    return arr


def _subspace(data) -> ParamSubspace:
    if "basis" not in data:
        raise _fail_input("missing key 'basis' in input")
    rows = data["basis"]
    if not isinstance(rows, list) or not rows:
        raise _fail_input("field 'basis' must be a nonempty list of 6-vectors")
    try:
        return ParamSubspace.from_vec6([_vector(r, "basis row", 6) for r in rows])
    except ValueError as exc:
        raise _fail_input(f"field 'basis' is invalid: {exc}")


def _write_json(obj, path):
    text = json.dumps(obj, indent=2) + "\n"
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _write_csv_trajectory(traj, path):
    lines = ["t,rho1,rho2,rho3,purity,u"]
    for i in range(len(traj.times)):
        row = [traj.times[i], traj.states[i, 0], traj.states[i, 1],
               traj.states[i, 2], traj.purities[i], traj.controls[i]]
        lines.append(",".join("%.17g" % x for x in row))
    text = "\n".join(lines) + "\n"
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _trajectory_dict(traj) -> dict:
    return {
        "times": traj.times.tolist(),
        "states": traj.states.tolist(),
        "purities": traj.purities.tolist(),
        "controls": traj.controls.tolist(),
        "violations": traj.violations.tolist(),
        "exited_ball": traj.exited_ball,
    }


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_classify(args) -> int:
    data = _load_json(args.input, "input")
    _strict_keys(data, {"basis", "draws"}, {"basis"}, "input")
    v = _subspace(data)
    draws = int(data.get("draws", 32))
    tol = args.tolerances.get("feas", 1e-9)
    analysis = classify_subspace(v, tol=tol, seed=args.seed)
    verdict = rank_drop_certificate(v, draws=draws, seed=args.seed)
    out = {
        "case": analysis.case_label,
        "n": analysis.n,
        "n_p": analysis.n_p,
        "n_cp": analysis.n_cp,
        "extent_p": analysis.extent_p,
        "extent_cp": analysis.extent_cp,
        "ambiguous": analysis.ambiguous,
        "certificate": verdict,
        "witnesses_p": [sym_to_vec6(w).tolist() for w in analysis.witnesses_p],
        "witnesses_cp": [sym_to_vec6(w).tolist() for w in analysis.witnesses_cp],
    }
    _write_json(out, args.output)
    return EXIT_DOMAIN if analysis.ambiguous else EXIT_OK


def cmd_lie(args) -> int:
    data = _load_json(args.input, "input")
    _strict_keys(data, {"basis", "h", "theta_p", "theta_cp"},
                 {"basis", "h", "theta_p", "theta_cp"}, "input")
    v = _subspace(data)
    h = _vector(data["h"], "h", 3)
    theta_p = _vector(data["theta_p"], "theta_p", v.n)
    theta_cp = _vector(data["theta_cp"], "theta_cp", v.n)
    report = compare_accessibility(v, h, theta_p, theta_cp)
    out = {
        "dim_p": report.dim_p,
        "dim_cp": report.dim_cp,
        "accessible_p": report.accessible_p,
        "accessible_cp": report.accessible_cp,
        "differ": report.differ,
        "basis_p": [b.reshape(9).tolist() for b in report.closure_p.basis],
        "basis_cp": [b.reshape(9).tolist() for b in report.closure_cp.basis],
    }
    _write_json(out, args.output)
    return EXIT_OK


def cmd_evolve(args) -> int:
    data = _load_json(args.input, "input")
    _strict_keys(data, {"c", "h", "v0", "schedule", "dt"},
                 {"c", "h", "v0", "schedule", "dt"}, "input")
    c = vec6_to_sym(_vector(data["c"], "c", 6))
    h = _vector(data["h"], "h", 3)
    v0 = _vector(data["v0"], "v0", 3)
    segments = data["schedule"]
    if not isinstance(segments, list):
        raise _fail_input("field 'schedule' must be a list of [duration, u] pairs")
    try:
        sched = ControlSchedule([(float(s[0]), float(s[1])) for s in segments])
    except (TypeError, IndexError, ValueError) as exc:
        raise _fail_input(f"field 'schedule' is invalid: {exc}")
    dt = float(data["dt"])
    if dt <= 0:
        raise _fail_input("field 'dt' must be positive")
    traj = evolve_schedule(h, dissipation_from_kossakowski(c), sched, v0, dt)
    if traj.exited_ball:
        print("warning: trajectory left the Bloch ball (flagged)", file=sys.stderr)
    if args.format == "json":
        _write_json(_trajectory_dict(traj), args.output)
    else:
        _write_csv_trajectory(traj, args.output)
    return EXIT_OK


_MODEL_KEYS = {"family", "w11", "w13", "w33", "tau"}


def _model_from(data) -> CorrelationModel:
    if "family" not in data:
        raise _fail_input("missing key 'family' in input")
    return CorrelationModel(
        family=data["family"],
        w11=float(data.get("w11", 0.0)),
        w13=float(data.get("w13", 0.0)),
        w33=float(data.get("w33", 0.0)),
        tau=float(data.get("tau", 0.0)),
    )


def cmd_spin_field(args) -> int:
    data = _load_json(args.input, "input")
    _strict_keys(data, _MODEL_KEYS | {"b3", "u"}, {"family", "b3"}, "input")
    model = _model_from(data)
    b3 = float(data["b3"])
    u = float(data.get("u", 1.0))
    coeffs = coefficients(model, b3)
    h, d = build_spin_generator(coeffs, u)
    out = {
        "coefficients": {
            "c11": coeffs.c11, "c12": coeffs.c12, "c13": coeffs.c13,
            "c23": coeffs.c23, "c33": coeffs.c33,
            "omega1": coeffs.omega1, "omega2": coeffs.omega2,
            "omega3": coeffs.omega3, "b3": coeffs.b3,
        },
        "hamiltonian_part": h.tolist(),
        "dissipation_part": d.tolist(),
        "cp_admissible": cp_admissible(coeffs),
        "positivity_admissible": positivity_admissible(coeffs),
    }
    _write_json(out, args.output)
    return EXIT_OK


def cmd_montecarlo(args) -> int:
    data = _load_json(args.input, "input")
    allowed = _MODEL_KEYS | {"b3", "u", "v0", "dt", "t_final", "n_samples"}
    _strict_keys(data, allowed, {"family", "b3", "v0", "dt", "t_final", "n_samples"},
                 "input")
    model = _model_from(data)
    n_samples = int(data["n_samples"])
    if n_samples < 100:
        raise _fail_input(f"field 'n_samples' must be at least 100, got {n_samples}")
    report = mc_validate(
        model,
        b3=float(data["b3"]),
        u=float(data.get("u", 1.0)),
        v0=_vector(data["v0"], "v0", 3),
        dt=float(data["dt"]),
        t_final=float(data["t_final"]),
        n_samples=n_samples,
        seed=args.seed,
    )
    out = {
        "n_samples": report.n_samples,
        "max_deviation": report.max_deviation,
        "mean_deviation": report.mean_deviation,
        "max_se_ratio": report.max_se_ratio,
        "within_3se": report.within_3se,
        "max_standard_error": float(report.standard_error.max()),
    }
    _write_json(out, args.output)
    return EXIT_OK


def cmd_reproduce(args) -> int:
    scale = 0.5 if args.perturb_convention else 1.0
    report = run_reproduction(seed=args.seed, dissipation_scale=scale)
    _write_json(report, args.output)
    if not report["all_passed"]:
        for check in report["checks"]:
            if not check["passed"]:
                print(f"mismatch: {check['name']}: expected {check['expected']}, "
                      f"computed {check['computed']}", file=sys.stderr)
        return EXIT_MISMATCH
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument plumbing
# ---------------------------------------------------------------------------

_TOL_KEYS = {"feas"}

_CONFIG_KEYS = {"input", "output", "seed", "tol", "format"}


def _parse_tols(pairs) -> dict:
    out = {}
    for pair in pairs or []:
        if "=" not in pair:
            raise _fail_input(f"--tol expects KEY=VAL, got {pair!r}")
        key, _, val = pair.partition("=")
        if key not in _TOL_KEYS:
            raise _fail_input(f"unknown tolerance key {key!r}")
        try:
            out[key] = float(val)
        except ValueError:
            raise _fail_input(f"tolerance {key!r} has non-numeric value {val!r}")
    return out


def _apply_config(args) -> None:
    if args.config is None:
        return
    data = _load_json(args.config, "config")
    _strict_keys(data, _CONFIG_KEYS, set(), "config")
    if "input" in data:
        args.input = data["input"]
    if "output" in data:
        args.output = data["output"]
    if "seed" in data:
        args.seed = int(data["seed"])
    if "format" in data:
        if data["format"] not in ("json", "csv"):
            raise _fail_input(f"config format must be json or csv, got {data['format']!r}")
        args.format = data["format"]
    if "tol" in data:
        if not isinstance(data["tol"], dict):
            raise _fail_input("config key 'tol' must be an object")
        for key, val in data["tol"].items():
            if key not in _TOL_KEYS:
                raise _fail_input(f"unknown tolerance key {key!r} in config")
            args.tolerances[key] = float(val)


def _add_common(sub, needs_input=True):
    if needs_input:
        sub.add_argument("--input", required=False, help="input JSON file")
    sub.add_argument("--output", default=None, help="output file (default: stdout)")
    sub.add_argument("--seed", type=int, default=0, help="seed for all randomized steps")
    sub.add_argument("--tol", action="append", metavar="KEY=VAL",
                     help="override a named tolerance (repeatable)")
    sub.add_argument("--format", choices=("json", "csv"), default="csv",
                     help="trajectory output format")
    sub.add_argument("--config", default=None,
                     help="JSON config overriding the flags above")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spinaccess",
        description="Accessibility analysis of dissipative qubit control systems")
    subs = parser.add_subparsers(dest="command", required=True)

    for name, fn, needs_input in [
        ("classify", cmd_classify, True),
        ("lie", cmd_lie, True),
        ("evolve", cmd_evolve, True),
        ("spin-field", cmd_spin_field, True),
        ("montecarlo", cmd_montecarlo, True),
        ("reproduce", cmd_reproduce, False),
    ]:
        sub = subs.add_parser(name)
        _add_common(sub, needs_input)
        if name == "reproduce":
            sub.add_argument("--perturb-convention", action="store_true",
                             help="negative control: corrupt the dissipation "
                                  "normalization so every run must mismatch")
        sub.set_defaults(handler=fn, needs_input=needs_input)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.tolerances = _parse_tols(args.tol)
        _apply_config(args)
        if args.needs_input and args.input is None:
            raise _fail_input("an --input file is required for this command")
        return args.handler(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except SpinAccessError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
