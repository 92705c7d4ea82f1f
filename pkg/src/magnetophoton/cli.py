"""Command-line interface.

Output is ``key=value`` lines (or CSV for ``sweep``) with every float in its
shortest round-trip form. Exit status: 0 success, 1 input error, 2 numerical
failure, 3 selfcheck failure.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import bogoliubov as bg
from . import entanglement as en
from .errors import InputError, NumericalError
from .params import CONVENTIONS, FIELD_UNITS, PhysicalInput, build_params, eb_to_field
from .spectrum import MODES, perturbative_roots, resonant_fields, solve_roots
from .sweep import AXES, SPACINGS, SweepSpec, run_sweep, to_csv
from .validation import REFERENCE_RANGE_AM, SELFCHECK, run_checks

EXIT_OK, EXIT_INPUT, EXIT_NUMERICAL, EXIT_SELFCHECK = 0, 1, 2, 3

DEFAULTS = {
    "wavelength1": 1000.0,
    "wavelength2": 500.0,
    "density": 1e14,
    "field": "2am",
    "landau": 0,
    "p3": 0.0,
    "convention": "scaled",
    "lambda1": 2,
    "lambda2": 1,
    "points": None,
    "spacing": None,
    "sweep_axis": "field",
    "range": None,
    "workers": 1,
}


# long config-file key names accepted alongside the flag names
CONFIG_ALIASES = {
    "wavelength_1_nm": "wavelength1",
    "wavelength_2_nm": "wavelength2",
    "density_m3": "density",
    "field_am": "field",
    "landau_level": "landau",
    "unit_convention": "convention",
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def fmt(x):
    if isinstance(x, (complex, np.complexfloating)):
        return f"{repr(float(x.real))}{'+' if x.imag >= 0 else '-'}{repr(abs(float(x.imag)))}j"
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    return str(x)


def emit(out, key, value):
    out.write(f"{key}={fmt(value)}\n")


_NUM = r"[-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?"


def parse_length(text):
    m = re.fullmatch(rf"\s*({_NUM})\s*(nm)?\s*", str(text))
    if not m:
        raise InputError(f"cannot read wavelength {text!r}; expected e.g. 380 or 380nm")
    return float(m.group(1))


def parse_field(text):
    """``2am``, ``1.5t`` or ``0.3natural``; a bare number is read as A/m."""
    m = re.fullmatch(rf"\s*({_NUM})\s*([a-zA-Z/]*)\s*", str(text))
    if not m:
        raise InputError(f"cannot read field {text!r}; expected a number with suffix am, t or natural")
    unit = m.group(2).lower().replace("a/m", "am") or "am"
    if unit not in FIELD_UNITS:
        raise InputError(f"unknown field unit {m.group(2)!r}; expected one of {FIELD_UNITS}")
    return float(m.group(1)), unit


def parse_range(text):
    parts = [p for p in re.split(r"[,:]", str(text)) if p.strip()]
    if len(parts) != 2:
        raise InputError(f"range must be 'lo,hi', got {text!r}")
    return tuple(float(p) for p in parts)


def load_config(path):
    text = Path(path).read_text(encoding="utf-8")
    if str(path).endswith(".toml"):
        try:
            import tomllib
        except ModuleNotFoundError:
            raise InputError("TOML config needs Python 3.11 or newer; use a JSON file instead") from None
        data = tomllib.loads(text)
    else:
        data = json.loads(text)
    if not isinstance(data, dict):
        raise InputError("config file must hold a mapping")
    opts = {}
    for key, val in data.items():
        key = key.replace("-", "_")
        if key == "field_am":
            val = f"{val!r}am" if isinstance(val, (int, float)) else val
        opts[CONFIG_ALIASES.get(key, key)] = val
    return opts


def _common(p):
    p.add_argument("--wavelength1", help="first photon wavelength, nm")
    p.add_argument("--wavelength2", help="second photon wavelength, nm")
    p.add_argument("--density", type=float, help="electron density, m^-3")
    p.add_argument("--field", help="field with unit suffix am|t|natural, e.g. 2am")
    p.add_argument("--landau", type=int, help="Landau level N0")
    p.add_argument("--p3", type=float, help="electron momentum along the field, eV")
    p.add_argument("--convention", choices=CONVENTIONS, help="density-to-coupling convention")
    p.add_argument("--lambda1", type=int, choices=(1, 2))
    p.add_argument("--lambda2", type=int, choices=(1, 2))
    p.add_argument("--config", help="JSON or TOML file of defaults; explicit flags win")
    p.add_argument("--out", help="write output here instead of standard output")


def build_parser():
    parser = _Parser(prog="magnetophoton", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name, text in (
        ("roots", "print the five mode frequencies, exact and perturbative"),
        ("transform", "dump A, B, u, v and the constraint residuals"),
        ("measure", "print the two-photon amplitudes and entanglement"),
        ("resonance", "print the resonant fields and their laboratory values"),
        ("sweep", "run a parameter sweep and write CSV"),
        ("selfcheck", "run the oracle and constraint checks"),
    ):
        p = sub.add_parser(name, help=text)
        _common(p)
        if name == "sweep":
            p.add_argument("--sweep-axis", choices=AXES)
            p.add_argument("--range", help="lo,hi in axis units (field in the --field unit)")
            p.add_argument("--points", type=int)
            p.add_argument("--spacing", choices=SPACINGS)
            p.add_argument("--workers", type=int, help="threads for point evaluation")
    return parser


def resolve(args):
    """Defaults, then config file, then explicit flags."""
    opts = dict(DEFAULTS)
    if getattr(args, "config", None):
        opts.update(load_config(args.config))
    for key, val in vars(args).items():
        if val is not None and key not in ("command", "config", "out"):
            opts[key] = val
    return opts


def physical_input(opts):
    value, unit = parse_field(opts["field"])
    return PhysicalInput(
        wavelength_1=parse_length(opts["wavelength1"]),
        wavelength_2=parse_length(opts["wavelength2"]),
        density=float(opts["density"]),
        field=value,
        landau_level=int(opts["landau"]),
        p3=float(opts["p3"]),
        field_unit=unit,
        unit_convention=opts["convention"],
    )


def cmd_roots(opts, out):
    params = build_params(physical_input(opts))
    exact = solve_roots(params)
    try:
        pert = perturbative_roots(params)
    except NumericalError:
        pert = None
    for mode in MODES:
        tag = f"tau{mode[0]}{mode[1]}" if mode[0] else "tau0"
        emit(out, f"{tag}_exact", exact[mode])
        if mode[0]:
            emit(out, f"{tag}_minus_kappa_exact", exact.gap(mode, params.kappas[mode[0] - 1]))
        emit(out, f"{tag}_perturbative", pert[mode] if pert else float("nan"))
    emit(out, "collision", exact.collision)
    emit(out, "near_resonance", ",".join(str(s) for s in exact.near_resonance))


def _matrix(out, name, m):
    for i, row in enumerate(m):
        out.write(f"{name}[{i}]=" + ",".join(fmt(complex(x)) for x in row) + "\n")


def cmd_transform(opts, out):
    params = build_params(physical_input(opts))
    roots = solve_roots(params)
    qf = bg.build_quadratic_form(params)
    t = bg.closed_form_transform(roots, params, check=False)
    _matrix(out, "A", qf.A)
    _matrix(out, "B", qf.B)
    emit(out, "offset", qf.offset)
    _matrix(out, "u", t.u)
    _matrix(out, "v", t.v)
    c1, c2 = bg.verify_canonical(t)
    d1, d2 = bg.verify_diagonalization(qf, t)
    emit(out, "residual_uu_minus_vv", c1)
    emit(out, "residual_vuT_minus_uvT", c2)
    emit(out, "residual_eigen_u", d1)
    emit(out, "residual_eigen_v", d2)


def cmd_measure(opts, out):
    params = build_params(physical_input(opts))
    t = bg.closed_form_transform(solve_roots(params), params)
    l1, l2 = int(opts["lambda1"]), int(opts["lambda2"])
    a = en.two_photon_amplitudes(t, l1, l2)
    rep = en.measure(a, l1, l2)
    for i, u in enumerate(a.upsilon, start=1):
        emit(out, f"upsilon{i}", complex(u))
    emit(out, "y", rep.y)
    emit(out, "one_minus_y", rep.one_minus_y)
    emit(out, "z", rep.z)
    emit(out, "mu1", rep.mu[0])
    emit(out, "mu2", rep.mu[1])
    emit(out, "M", rep.M)


def cmd_resonance(opts, out):
    inp = physical_input(opts)
    info = resonant_fields(build_params(inp))
    lo, hi = REFERENCE_RANGE_AM
    for which in (1, 2):
        eB = info[which]
        am = eb_to_field(eB, "am")
        emit(out, f"eB{which}_natural", eB)
        emit(out, f"B{which}_tesla", eb_to_field(eB, "t"))
        emit(out, f"B{which}_am", am)
        # the coupling convention does not enter the resonance condition
        for conv in CONVENTIONS:
            other = resonant_fields(build_params(replace(inp, unit_convention=conv)))[which]
            emit(out, f"B{which}_am_{conv}", eb_to_field(other, "am"))
        emit(out, f"B{which}_in_reference_range_{fmt(lo)}_{fmt(hi)}_am", lo <= am <= hi)
        emit(out, f"B{which}_over_reference_low", am / lo)
    emit(out, "polarization_pair_B1", "%d,%d" % info.resonant_polarization[1])
    emit(out, "polarization_pair_B2", "%d,%d" % info.resonant_polarization[2])


def cmd_sweep(opts, out):
    inp = physical_input(opts)
    axis = opts["sweep_axis"]
    if opts["range"] is None:
        raise InputError("sweep needs --range lo,hi")
    lo, hi = parse_range(opts["range"]) if isinstance(opts["range"], str) else tuple(opts["range"])
    spec = SweepSpec(
        axis,
        lo,
        hi,
        inp,
        points=opts["points"],
        spacing=opts["spacing"],
        polarizations=(int(opts["lambda1"]), int(opts["lambda2"])),
    )
    out.write(to_csv(run_sweep(spec, workers=int(opts["workers"] or 1))))


def cmd_selfcheck(opts, out):
    results = run_checks(SELFCHECK)
    for r in results:
        out.write(r.line() + "\n")
    return EXIT_OK if all(r.passed for r in results) else EXIT_SELFCHECK


COMMANDS = {
    "roots": cmd_roots,
    "transform": cmd_transform,
    "measure": cmd_measure,
    "resonance": cmd_resonance,
    "sweep": cmd_sweep,
    "selfcheck": cmd_selfcheck,
}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        opts = resolve(args)
        if args.out:
            with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
                status = COMMANDS[args.command](opts, fh)
        else:
            status = COMMANDS[args.command](opts, sys.stdout)
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (OSError, json.JSONDecodeError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except NumericalError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    return EXIT_OK if status is None else status


if __name__ == "__main__":
    sys.exit(main())
