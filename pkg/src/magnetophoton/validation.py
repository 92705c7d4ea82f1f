"""Numerical acceptance checks, shared by the test suite and ``selfcheck``.

Every check returns a :class:`CheckResult`; nothing here raises on a failed
criterion, so a caller can report all of them.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from . import bogoliubov as bg
from . import entanglement as en
from .params import UNSCALED, ModelParams, PhysicalInput, build_params, eb_to_field
from .spectrum import MODES, perturbative_roots, resonant_fields, solve_roots
from .sweep import SweepSpec, csv_body, locate_jump, run_sweep, to_csv

BENCHMARK = dict(kappa1=1.0, kappa2=2.0, eB=0.5, m=1.0)
PROFILE_WAVELENGTHS = (500.0, 380.0, 100.0)
REFERENCE_RANGE_AM = (6.0, 225.0)


@dataclass
class CheckResult:
    name: str
    passed: bool
    details: dict = field(default_factory=dict)
    seconds: float = 0.0

    def line(self):
        status = "PASS" if self.passed else "FAIL"
        info = " ".join(f"{k}={_short(v)}" for k, v in self.details.items())
        return f"{status} {self.name} ({self.seconds:.2f}s) {info}".rstrip()


def _short(v):
    if isinstance(v, float):
        return f"{v:.6g}"
    if isinstance(v, (list, tuple)):
        return "[" + ",".join(_short(x) for x in v) + "]"
    return str(v)


def _timed(name, func, limit=None):
    t0 = time.perf_counter()
    passed, details = func()
    dt = time.perf_counter() - t0
    if limit is not None:
        details["limit_s"] = limit
        passed = passed and dt < limit
    return CheckResult(name, bool(passed), details, dt)


def slope(xs, ys):
    """Least-squares slope of log|y| against log x."""
    return float(np.polyfit(np.log(np.asarray(xs)), np.log(np.abs(np.asarray(ys))), 1)[0])


def random_params(n=100, seed=20240601):
    """Dimensionless draws over the acceptance box (free light-cone momentum)."""
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(n):
        k1 = rng.uniform(0.5, 2.0)
        k2 = k1 * rng.uniform(1.5, 5.0)
        p = ModelParams(
            kappa1=k1,
            kappa2=k2,
            eB=rng.uniform(0.01, 5.0),
            m=rng.uniform(0.5, 5.0),
            epsilon=10 ** rng.uniform(-6, math.log10(0.05)),
            N0=int(rng.integers(0, 4)),
        )
        out.append(p)
    return out


def root_oracle(draws=None):
    draws = random_params() if draws is None else draws
    worst = 0.0
    for p in draws:
        taus = np.sort(solve_roots(p).as_array())
        freqs, _ = bg.oracle_diagonalize(bg.build_quadratic_form(p))
        worst = max(worst, float(np.max(np.abs(taus - np.sort(freqs)) / taus)))
    return worst < 1e-10, {"max_rel_err": worst, "draws": len(draws)}


def canonical_constraints(draws=None):
    draws = random_params() if draws is None else draws
    canon = diag = 0.0
    for p in draws:
        roots = solve_roots(p)
        t = bg.closed_form_transform(roots, p, check=False)
        canon = max(canon, *bg.verify_canonical(t))
        diag = max(diag, *bg.verify_diagonalization(bg.build_quadratic_form(p), t))
    return canon < 1e-8 and diag < 1e-8, {"canonical": canon, "eigen_equations": diag}


def root_differences(p):
    """|tau_exact - tau_pert| per mode, formed from the pole offsets."""
    ex, pt = solve_roots(p), perturbative_roots(p)
    out = {}
    for mode in MODES:
        if ex.anchors[mode] == pt.anchors.get(mode) and mode != (0, 1):
            out[mode] = abs(ex.offsets[mode] - pt.offsets[mode])
        else:
            out[mode] = abs(ex[mode] - pt[mode])
    return out


def perturbative_scaling():
    eps = np.geomspace(1e-6, 1e-3, 7)
    base = ModelParams(epsilon=1e-6, **BENCHMARK)
    diffs = {m: [] for m in MODES}
    for e in eps:
        for m, d in root_differences(base.with_epsilon(e)).items():
            diffs[m].append(d)
    slopes = [slope(eps, diffs[m]) for m in MODES]
    off_ok = all(abs(s - 2.0) <= 0.2 for s in slopes)

    at_b1 = base.with_field(resonant_fields(base).eB1)
    k2 = at_b1.kappa2
    gaps, split = [], []
    for e in eps:
        r = solve_roots(at_b1.with_epsilon(e))
        gaps.append(-r.gap((2, 1), k2))
        split.append(-r.gap((1, 1), at_b1.kappa1))
    s21 = slope(eps, gaps)
    details = {
        "offres_slopes": slopes,
        "kappa2_minus_tau21_slope_at_eB1": s21,
        "kappa1_minus_tau11_slope_at_eB1": slope(eps, split),
    }
    return off_ok and abs(s21 - 0.5) <= 0.05, details


def _one_minus_y(p, lam1, lam2):
    t = bg.closed_form_transform(solve_roots(p), p)
    return en.pair_entanglement(t, lam1, lam2).one_minus_y


def entanglement_scaling():
    eps = np.geomspace(1e-6, 1e-4, 5)
    off = ModelParams(epsilon=1e-5, **BENCHMARK)
    lam = (2, 1)
    xs = [_one_minus_y(off.with_epsilon(e), *lam) for e in eps]
    s_off = slope(eps, xs)
    ratio_off = _one_minus_y(off, *lam) / (en.offres_prefactor(off, *lam) * off.medium_coupling**4)

    res = off.with_field(resonant_fields(off).eB2)
    xr = [_one_minus_y(res.with_epsilon(e), *lam) for e in eps]
    s_res = slope(eps, xr)
    ratio_res = _one_minus_y(res, *lam) / (en.resonant_prefactor(res, 2) * res.medium_coupling**3)
    passed = abs(s_off - 4) <= 0.2 and abs(ratio_off - 1) <= 0.05 and abs(s_res - 3) <= 0.2 and abs(ratio_res - 1) <= 0.1
    return passed, {"offres_slope": s_off, "beta_ratio": ratio_off, "res_slope": s_res, "delta2_ratio": ratio_res}


def exact_zeros(draws=None):
    draws = random_params(30, seed=7) if draws is None else draws
    worst_parallel = 0.0
    for p in draws:
        t = bg.closed_form_transform(solve_roots(p), p)
        for lam in (1, 2):
            worst_parallel = max(worst_parallel, en.pair_entanglement(t, lam, lam).M)
    free = ModelParams(epsilon=0.0, **BENCHMARK)
    m_free = max(en.pair_entanglement(bg.free_transform(free), a, b).M for a in (1, 2) for b in (1, 2))
    bell = en.measure(en.TwoQubitAmplitudes.from_vector([1, 0, 0, 1])).M
    passed = worst_parallel <= 1e-12 and m_free <= 1e-12 and abs(bell - 1) <= 1e-12
    return passed, {"max_M_parallel": worst_parallel, "M_free": m_free, "M_bell": bell}


def entropy_identities(draws=None):
    draws = random_params(30, seed=11) if draws is None else draws
    trace = sym = eig = 0.0
    for p in draws:
        t = bg.closed_form_transform(solve_roots(p), p)
        for lam1, lam2 in ((1, 2), (2, 1)):
            a = en.two_photon_amplitudes(t, lam1, lam2)
            rep = en.measure(a)
            mu_a = np.linalg.eigvalsh(en.reduced_density(a, 2))
            mu_b = np.linalg.eigvalsh(en.reduced_density(a, 1))
            closed = np.array([0.5 * (1 - rep.y), 0.5 * (1 + rep.y)])
            trace = max(trace, abs(sum(rep.mu) - 1.0))
            sym = max(sym, abs(en.binary_entropy(min(mu_a[0], 1)) - en.binary_entropy(min(mu_b[0], 1))))
            eig = max(eig, float(np.max(np.abs(mu_a - closed))))
    passed = trace <= 1e-12 and sym <= 1e-12 and eig <= 1e-12
    return passed, {"mu_sum_err": trace, "S_A_minus_S_B": sym, "eigen_err": eig}


def _field_profile_sweep(nu2, convention, lo_frac=0.5, hi_frac=1.5, points=400, bounds=None):
    fixed = PhysicalInput(1000.0, nu2, 1e14, 1.0, unit_convention=convention)
    b2 = eb_to_field(resonant_fields(build_params(fixed)).eB2)
    lo, hi = bounds if bounds else (lo_frac * b2, hi_frac * b2)
    return run_sweep(SweepSpec("field", lo, hi, fixed, points=points, polarizations=(2, 1))), b2


def field_profile(convention="scaled"):
    details = {}
    shape_ok = True
    b2s = []
    for nu2 in PROFILE_WAVELENGTHS:
        res, b2 = _field_profile_sweep(nu2, convention)
        b2s.append(b2)
        x, M = res.values, res.M
        below, above = x < b2, x > b2
        rising = bool(np.all(np.diff(M[below]) > 0))
        falling = bool(np.all(np.diff(M[above]) < 0))
        peaks = int(np.sum((M[1:-1] > M[:-2]) & (M[1:-1] > M[2:])))
        jump = locate_jump(res)
        cell = x[1] - x[0]
        located = jump is not None and abs(jump - b2) <= cell
        shape_ok &= rising and falling and peaks == 1 and located
        details[f"nu2={nu2:g}"] = f"rising={rising},falling={falling},peaks={peaks},jump_cells={(jump - b2) / cell if jump else None}"
    # pointwise ordering on a grid below every resonance
    lo, hi = 0.05 * min(b2s), 0.95 * min(b2s)
    curves = [_field_profile_sweep(nu2, convention, bounds=(lo, hi), points=50)[0].M for nu2 in PROFILE_WAVELENGTHS]
    ordered = bool(all(np.all(a > b) for a, b in zip(curves, curves[1:])))
    details["ordering_inverse_to_delta_kappa"] = ordered

    unscaled_res, _ = _field_profile_sweep(380.0, UNSCALED)
    max_m = float(np.max(unscaled_res.M))
    magnitude_ok = 1e-2 <= max_m <= 1.0
    details["max_M_unscaled_convention"] = max_m
    return shape_ok and ordered and magnitude_ok, details


def density_profile(convention="scaled"):
    fixed = PhysicalInput(1000.0, 380.0, 1e14, 2.0, unit_convention=convention)
    res = run_sweep(SweepSpec("density", 1e12, 1e20, fixed, polarizations=(2, 1)))
    M = res.M
    rising = bool(np.all(np.diff(M) > 0))
    return rising, {"rising": rising, "M_range": (float(M[0]), float(M[-1])), "points": len(M)}


def resonant_field_consistency():
    worst = 0.0
    for k1, k2, m, n0 in ((1.0, 2.0, 1.0, 0), (0.7, 3.1, 2.5, 2), (1.3, 2.0, 0.6, 3)):
        p = ModelParams(k1, k2, 0.1, m, 1e-4, N0=n0)
        info = resonant_fields(p)
        for num, closed in ((info.eB1, info.closed_form1), (info.eB2, info.closed_form2)):
            worst = max(worst, abs(num - closed) / closed)
    fields = {}
    for nu2 in (380.0, 100.0, 10.0):
        fx = build_params(PhysicalInput(1000.0, nu2, 1e14, 1.0))
        fields[nu2] = eb_to_field(resonant_fields(fx).eB2, "am")
    ref_lo, ref_hi = REFERENCE_RANGE_AM
    ratio = (fields[380.0] / ref_lo, fields[10.0] / ref_hi)
    details = {
        "max_rel_err": worst,
        "B2_am_380nm": fields[380.0],
        "B2_am_10nm": fields[10.0],
        "ratio_to_reference_range": ratio,
        "within_reference_range": ref_lo <= fields[380.0] <= ref_hi and ref_lo <= fields[10.0] <= ref_hi,
    }
    return worst < 1e-10, details


def determinism(invoke=None):
    """Repeated and parallel sweeps must give identical CSV bodies."""
    fixed = PhysicalInput(1000.0, 380.0, 1e14, 1.0)
    b2 = eb_to_field(resonant_fields(build_params(fixed)).eB2)
    spec = SweepSpec("field", 0.5 * b2, 1.5 * b2, fixed, points=101)
    a = csv_body(to_csv(run_sweep(spec)))
    b = csv_body(to_csv(run_sweep(spec)))
    c = csv_body(to_csv(run_sweep(spec, workers=4)))
    same = a == b == c
    details = {"serial_repeat_identical": a == b, "parallel_identical": a == c}
    if invoke is not None:
        cli_same = invoke()
        details["cli_repeat_identical"] = cli_same
        same = same and cli_same
    return same, details


ACCEPTANCE = (
    ("1 root oracle equivalence", root_oracle, 5.0),
    ("2 canonical constraints", canonical_constraints, None),
    ("3 perturbative scaling", perturbative_scaling, None),
    ("4 entanglement scaling", entanglement_scaling, 10.0),
    ("5 exact zeros", exact_zeros, None),
    ("6 entropy identities", entropy_identities, None),
    ("7 field profile", field_profile, 5.0),
    ("8 density profile", density_profile, 2.0),
    ("9 resonant field consistency", resonant_field_consistency, None),
    ("10 determinism", determinism, None),
)

SELFCHECK = ("1 root oracle equivalence", "2 canonical constraints", "5 exact zeros", "6 entropy identities", "9 resonant field consistency", "10 determinism")


def run_checks(names=None):
    results = []
    for name, func, limit in ACCEPTANCE:
        if names is not None and name not in names:
            continue
        try:
            results.append(_timed(name, func, limit))
        except Exception as exc:  # a crashing criterion is a failed criterion
            results.append(CheckResult(name, False, {"error": f"{type(exc).__name__}: {exc}"}))
    return results
