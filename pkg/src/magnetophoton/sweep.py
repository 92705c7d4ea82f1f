"""Parameter sweeps over field, density or second wavelength, with CSV output."""

from __future__ import annotations

import io
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from datetime import datetime, timezone

import numpy as np
from scipy.optimize import brentq

from .bogoliubov import closed_form_transform
from .entanglement import PHYSICAL, pair_entanglement
from .errors import InputError, NumericalError
from .params import PhysicalInput, build_params, eb_to_field, field_to_eb, wavenumber_to_wavelength
from .spectrum import MODES, RESONANCE_RTOL, omega0_of_field, resonant_fields, solve_roots

AXES = ("field", "density", "wavelength2")
SPACINGS = ("linear", "log")
DEFAULT_POINTS = {"field": 400, "density": 100, "wavelength2": 400}
DEFAULT_SPACING = {"field": "linear", "density": "log", "wavelength2": "linear"}

CSV_HEADER = "axis,value,y,M,tau0,tau11,tau12,tau21,tau22,flag"

FLAG_GUARD = "guard"
FLAG_COLLISION = "collision"


def code_version():
    from . import __version__

    return __version__


@dataclass(frozen=True)
class SweepSpec:
    axis: str
    lo: float
    hi: float
    fixed: PhysicalInput
    points: int | None = None
    spacing: str | None = None
    polarizations: tuple = (2, 1)
    pairing: str = PHYSICAL

    def __post_init__(self):
        if self.axis not in AXES:
            raise InputError(f"unknown sweep axis {self.axis!r}; expected one of {AXES}")
        if self.points is None:
            object.__setattr__(self, "points", DEFAULT_POINTS[self.axis])
        if self.spacing is None:
            object.__setattr__(self, "spacing", DEFAULT_SPACING[self.axis])
        if self.spacing not in SPACINGS:
            raise InputError(f"unknown spacing {self.spacing!r}; expected one of {SPACINGS}")
        if not self.lo < self.hi:
            raise InputError(f"sweep range must satisfy lo < hi, got [{self.lo}, {self.hi}]")
        if int(self.points) != self.points or self.points < 2:
            raise InputError(f"a sweep needs at least 2 points, got {self.points}")
        if self.spacing == "log" and not self.lo > 0:
            raise InputError("log spacing needs a positive range")
        object.__setattr__(self, "points", int(self.points))

    def grid(self):
        if self.spacing == "log":
            return np.geomspace(self.lo, self.hi, self.points)
        return np.linspace(self.lo, self.hi, self.points)


@dataclass(frozen=True)
class SweepRow:
    value: float
    y: float
    M: float
    taus: tuple
    flag: str = ""
    evaluated_at: float | None = None


@dataclass(frozen=True)
class SweepResult:
    spec: SweepSpec
    rows: tuple
    resonance: tuple = ()
    metadata: dict = field(default_factory=dict)

    def column(self, name):
        return np.array([getattr(r, name) for r in self.rows])

    @property
    def values(self):
        return self.column("value")

    @property
    def M(self):
        return self.column("M")


def point_input(spec: SweepSpec, value) -> PhysicalInput:
    key = {"field": "field", "density": "density", "wavelength2": "wavelength_2"}[spec.axis]
    return replace(spec.fixed, **{key: float(value)})


def _guard_field(inp: PhysicalInput):
    """Move a field lying inside a resonance guard band to the nearer band edge.

    Returns the (possibly) shifted input and whether it moved.
    """
    p = build_params(inp)
    for kappa in p.kappas:
        rel = (p.omega0 - kappa) / kappa
        if abs(rel) >= RESONANCE_RTOL:
            continue
        side = 1.0 if rel >= 0 else -1.0
        target = kappa * (1.0 + side * RESONANCE_RTOL)
        center = resonant_fields(p)[1 if kappa == p.kappa1 else 2]

        def f(eB):
            return omega0_of_field(eB, p) - target

        lo, hi = center * (1 - 1e-8), center * (1 + 1e-8)
        eB = brentq(f, lo, hi, xtol=1e-300, rtol=4 * np.finfo(float).eps)
        # step outward far enough that rounding keeps the point outside the band
        while abs(omega0_of_field(eB, p) - kappa) < RESONANCE_RTOL * kappa:
            eB = np.nextafter(eB, math.inf if side > 0 else 0.0)
        if inp.field_unit == "natural":
            fieldval = eB
        else:
            fieldval = eb_to_field(eB, inp.field_unit)
            # the unit round trip must not land back inside the band
            while abs(
                omega0_of_field(field_to_eb(fieldval, inp.field_unit), p) - kappa
            ) < RESONANCE_RTOL * kappa:
                fieldval = np.nextafter(fieldval, math.inf if side > 0 else 0.0)
        return replace(inp, field=float(fieldval)), True
    return inp, False


def evaluate_point(spec: SweepSpec, value) -> SweepRow:
    """Full pipeline at one grid value; failures are returned as flagged rows."""
    try:
        inp, moved = _guard_field(point_input(spec, value))
        params = build_params(inp)
        roots = solve_roots(params)
        t = closed_form_transform(roots, params)
        rep = pair_entanglement(t, *spec.polarizations, pairing=spec.pairing)
    except (NumericalError, InputError) as exc:
        nan = float("nan")
        reason = str(exc).replace(",", ";").replace("\n", " ")
        return SweepRow(float(value), nan, nan, (nan,) * len(MODES), f"error: {reason}")
    flags = []
    if moved:
        flags.append(FLAG_GUARD)
    if roots.collision:
        flags.append(FLAG_COLLISION)
    evaluated = inp.field if moved else None
    taus = tuple(float(x) for x in roots.as_array())
    return SweepRow(float(value), float(rep.y), float(rep.M), taus, ";".join(flags), evaluated)


def _resonances_on_axis(spec: SweepSpec):
    base = build_params(spec.fixed)
    if spec.axis == "field":
        info = resonant_fields(base)
        unit = spec.fixed.field_unit
        vals = [eb_to_field(e, unit) if unit != "natural" else e for e in (info.eB1, info.eB2)]
    elif spec.axis == "wavelength2":
        # omega0 does not depend on the second wavelength
        vals = [wavenumber_to_wavelength(base.omega0)]
    else:
        vals = []
    return tuple(v for v in vals if spec.lo <= v <= spec.hi)


def run_sweep(spec: SweepSpec, workers: int | None = None) -> SweepResult:
    """Evaluate the pipeline on every grid point, in grid order.

    ``workers`` > 1 evaluates points concurrently; the rows are identical to
    the serial result because each point is an independent pure computation.
    """
    grid = spec.grid()
    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = tuple(pool.map(lambda v: evaluate_point(spec, v), grid))
    else:
        rows = tuple(evaluate_point(spec, v) for v in grid)
    if all(r.flag.startswith("error") for r in rows):
        raise NumericalError(f"every sweep point failed; first: {rows[0].flag}")
    meta = {
        "params": repr(spec.fixed),
        "axis": spec.axis,
        "polarizations": repr(tuple(spec.polarizations)),
        "pairing": spec.pairing,
        "convention": spec.fixed.unit_convention,
        "code_version": code_version(),
        "timestamp": datetime.now(timezone.utc).isoformat(),
    }
    return SweepResult(spec, rows, _resonances_on_axis(spec), meta)


def _fmt(x):
    return repr(float(x))


def to_csv(result: SweepResult, include_timestamp=True) -> str:
    out = io.StringIO(newline="")
    for key, val in result.metadata.items():
        if key == "timestamp" and not include_timestamp:
            continue
        out.write(f"# {key}={val}\n")
    out.write(f"# resonance={','.join(_fmt(v) for v in result.resonance)}\n")
    out.write(CSV_HEADER + "\n")
    for r in result.rows:
        fields = [result.spec.axis, _fmt(r.value), _fmt(r.y), _fmt(r.M), *(_fmt(t) for t in r.taus), r.flag]
        out.write(",".join(fields) + "\n")
    return out.getvalue()


def csv_body(text: str) -> str:
    """The CSV without its timestamp line, for reproducibility comparisons."""
    return "".join(line for line in text.splitlines(keepends=True) if not line.startswith("# timestamp="))


def write_csv(result: SweepResult, path):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(to_csv(result))


def locate_jump(result: SweepResult, rel_threshold=1e-12):
    """Axis value of the resonant jump in M, refined with three extra evaluations.

    The jump shows up as an interior maximum of M with a negative discrete
    second difference. The two cells around it are bisected, then the better
    half once more, and the location of the largest M found is returned.
    Returns None when the profile has no interior peak.
    """
    rows = [r for r in result.rows if math.isfinite(r.M)]
    if len(rows) < 3:
        return None
    x = np.array([r.value for r in rows])
    M = np.array([r.M for r in rows])
    i = int(np.argmax(M))
    if i == 0 or i == len(M) - 1 or M[i] <= 0:
        return None
    second = M[i - 1] - 2 * M[i] + M[i + 1]
    if not second < -rel_threshold * M[i]:
        return None
    spec = result.spec

    def m_at(v):
        r = evaluate_point(spec, v)
        return r.M if math.isfinite(r.M) else -math.inf

    samples = {x[i - 1]: M[i - 1], x[i]: M[i], x[i + 1]: M[i + 1]}
    mid_lo, mid_hi = 0.5 * (x[i - 1] + x[i]), 0.5 * (x[i] + x[i + 1])
    samples[mid_lo] = m_at(mid_lo)
    samples[mid_hi] = m_at(mid_hi)
    side = mid_lo if samples[mid_lo] > samples[mid_hi] else mid_hi
    quarter = 0.5 * (side + x[i])
    samples[quarter] = m_at(quarter)
    return float(max(samples, key=samples.get))
