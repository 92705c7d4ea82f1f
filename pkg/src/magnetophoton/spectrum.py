"""Quasi-particle frequencies: the secular equation and its expansions.

The five normal-mode frequencies are the positive roots of

    sum_s epsilon / (tau^2 - kappa_s^2) = 1 + (-1)^lambda * omega / tau

taken on the branch lambda = 1 (three roots: the electron mode and one per
photon beam) and lambda = 2 (two photon roots). Roots that sit close to a pole
are stored as an offset from that pole so that ``tau - kappa_s`` keeps full
relative precision even when it is many orders of magnitude below ``kappa_s``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.optimize import brentq

from .errors import ConvergenceError, InputError, PoleProximityError, ResonanceSingularError
from .params import ModelParams

MODES = ((0, 1), (1, 1), (1, 2), (2, 1), (2, 2))
PHOTON_MODES = MODES[1:]

EXACT = "exact-numeric"
PERTURBATIVE = "perturbative"

POLE_GUARD = 1e-300
COLLISION_RTOL = 1e-13
RESONANCE_RTOL = 1e-10
_RTOL = 4 * np.finfo(float).eps
_MAXITER = 200


@dataclass(frozen=True)
class RootSet:
    """The five positive secular roots keyed by mode ``(s, lambda)``.

    ``anchors`` maps each mode to the pole (or 0) its value was solved
    relative to, and ``offsets`` holds ``tau - anchor`` at full precision.
    """

    values: dict
    method: str = EXACT
    anchors: dict = field(default_factory=dict)
    offsets: dict = field(default_factory=dict)
    collision: bool = False
    near_resonance: tuple = ()

    @property
    def tau0(self):
        return self.values[(0, 1)]

    @property
    def tau(self):
        return {mode: self.values[mode] for mode in PHOTON_MODES}

    def __getitem__(self, mode):
        return self.values[mode]

    def gap(self, mode, kappa):
        """``tau_mode - kappa`` without cancellation when kappa is the anchor."""
        anchor = self.anchors.get(mode)
        if anchor is not None and anchor == kappa:
            return self.offsets[mode]
        if anchor is not None:
            return (anchor - kappa) + self.offsets[mode]
        return self.values[mode] - kappa

    def as_array(self):
        return np.array([self.values[m] for m in MODES])

    @property
    def flagged(self):
        return self.collision


@dataclass(frozen=True)
class ResonanceInfo:
    eB1: float
    eB2: float
    closed_form1: float | None = None
    closed_form2: float | None = None
    # which polarization pair (lambda1, lambda2) each resonance is singular for
    resonant_polarization: dict = field(default_factory=lambda: {1: (1, 2), 2: (2, 1)})

    def __getitem__(self, which):
        return {1: self.eB1, 2: self.eB2}[which]


def _sign(lam):
    return -1.0 if lam == 1 else 1.0


def _residual(anchor, d, lam, p: ModelParams):
    tau = anchor + d
    total = 0.0
    for kappa in p.kappas:
        diff = d if anchor == kappa else (anchor - kappa) + d
        total += p.epsilon / (diff * (tau + kappa))
    return total - 1.0 - _sign(lam) * p.omega / tau


def characteristic_residual(tau, lam, params: ModelParams, guard=None):
    """Signed residual of the lambda-branch secular equation at ``tau``.

    With zero coupling the poles at ``kappa_s`` are themselves roots of the
    cleared equation, and the residual there is reported as exactly 0.
    """
    if lam not in (1, 2):
        raise InputError(f"polarization index must be 1 or 2, got {lam}")
    if not tau > 0:
        raise InputError(f"tau must be positive, got {tau}")
    if guard is None:
        guard = 1e-9 * params.kappa1
    for kappa in params.kappas:
        if abs(tau - kappa) <= guard:
            if params.epsilon == 0 and tau == kappa:
                return 0.0
            raise PoleProximityError(tau, kappa)
    return _residual(0.0, tau, lam, params)


def root_residual(roots: RootSet, mode, params: ModelParams):
    """Residual of ``mode``'s branch at the stored root, evaluated from its pole offset."""
    anchor = roots.anchors.get(mode, 0.0)
    offset = roots.offsets.get(mode, roots[mode] - anchor)
    return _residual(anchor, offset, mode[1], params)


def _expected_near_sign(anchor, side, lam, p):
    if anchor == 0.0:
        return 1.0 if lam == 1 else -1.0
    return 1.0 if side > 0 else -1.0


def _solve_from(anchor, side, span, lam, p, far_sign):
    """Root of the residual with ``d = side * h`` for ``0 < h < span``.

    ``span`` may be infinite. The bracket is found by shrinking h toward the
    anchor until the near-pole sign shows up and growing h toward the far end.
    """
    near_sign = _expected_near_sign(anchor, side, lam, p)

    def g(h):
        return _residual(anchor, side * h, lam, p)

    base = span / 2 if math.isfinite(span) else max(abs(anchor), p.kappa2)
    h_near = base
    h_seen = math.inf  # smallest scanned h already showing the far-end sign
    for _ in range(400):
        val = g(h_near)
        if np.sign(val) == near_sign:
            break
        if np.sign(val) == far_sign:
            h_seen = h_near
        h_near *= 1e-2 if h_near > 1e-200 else 0.5
        if h_near < POLE_GUARD:
            raise ConvergenceError("no sign change next to the pole", (anchor, side))
    else:
        raise ConvergenceError("no sign change next to the pole", (anchor, side))
    if math.isfinite(span):
        h_far = span / 2
        frac = 0.5
        for _ in range(200):
            if np.sign(g(h_far)) == far_sign:
                break
            frac /= 2
            h_far = span * (1 - frac)
        else:
            raise ConvergenceError("no sign change at the far end", (anchor, side, span))
    else:
        h_far = base
        for _ in range(200):
            if np.sign(g(h_far)) == far_sign:
                break
            h_far *= 2
        else:
            raise ConvergenceError("residual keeps its sign on the unbounded interval", (anchor,))
    # a tight far end keeps brentq from bisecting across hundreds of decades
    h_far = min(h_far, h_seen)
    if h_near > h_far:
        # both ends satisfied by the same point only if it is the root itself
        h_near, h_far = h_far, h_near
    if g(h_near) == 0.0:
        return side * h_near
    h, res = brentq(g, h_near, h_far, xtol=1e-300, rtol=_RTOL, maxiter=_MAXITER, full_output=True, disp=False)
    if not res.converged:
        raise ConvergenceError("bracketed iteration did not converge", (anchor + side * h_near, anchor + side * h_far))
    return side * h


def _interval_root(lo, hi, lam, p):
    """Solve on (lo, hi) anchored at whichever end the root is nearer.

    The residual decreases across the interval, so its sign at the midpoint
    tells which half holds the root; the far end of the bracket is then the
    midpoint itself and never has to approach the opposite pole.
    """
    lo_sign = -1.0 if (lo == 0.0 and lam == 2) else 1.0
    hi_sign = -1.0  # approaching a pole from below, or tau -> infinity
    if math.isfinite(hi):
        half = (hi - lo) / 2
        mid = _residual(lo, half, lam, p)
        if mid == 0.0:
            return lo, half
        if mid > 0:
            return hi, _solve_from(hi, -1.0, hi - lo, lam, p, far_sign=lo_sign)
    return lo, _solve_from(lo, 1.0, hi - lo, lam, p, far_sign=hi_sign)


def free_roots(params: ModelParams) -> RootSet:
    k1, k2 = params.kappas
    values = {(0, 1): params.omega, (1, 1): k1, (1, 2): k1, (2, 1): k2, (2, 2): k2}
    anchors = {(0, 1): 0.0, (1, 1): k1, (1, 2): k1, (2, 1): k2, (2, 2): k2}
    offsets = {m: values[m] - anchors[m] for m in MODES}
    return RootSet(values, EXACT, anchors, offsets, near_resonance=_near_resonance(params))


def _near_resonance(p):
    return tuple(s for s, kappa in ((1, p.kappa1), (2, p.kappa2)) if abs(p.omega - kappa) < RESONANCE_RTOL * kappa)


def _collides(anchors, offsets, values):
    """Roots on the same pole are compared through their offsets, which keep full precision."""
    for i, a in enumerate(MODES):
        for b in MODES[i + 1 :]:
            if anchors[a] == anchors[b]:
                da, db = offsets[a], offsets[b]
                if abs(da - db) <= COLLISION_RTOL * max(abs(da), abs(db)):
                    return True
            elif abs(values[a] - values[b]) <= COLLISION_RTOL * max(values[a], values[b]):
                return True
    return False


def solve_roots(params: ModelParams) -> RootSet:
    """All five positive roots, each connected to its zero-coupling limit."""
    p = params
    if p.epsilon == 0:
        return free_roots(p)
    if not p.omega > 0:
        raise InputError("solve_roots needs omega > 0 (a non-zero magnetic field)")
    k1, k2 = p.kappas
    lam1 = [_interval_root(lo, hi, 1, p) for lo, hi in ((0.0, k1), (k1, k2), (k2, math.inf))]
    lam2 = [_interval_root(lo, hi, 2, p) for lo, hi in ((k1, k2), (k2, math.inf))]
    # the electron root sits in the interval containing omega; at exact
    # resonance omega == kappa_s it is taken as the upper partner
    if p.omega < k1:
        order = [(0, 1), (1, 1), (2, 1)]
    elif p.omega < k2:
        order = [(1, 1), (0, 1), (2, 1)]
    else:
        order = [(1, 1), (2, 1), (0, 1)]
    anchors, offsets = {}, {}
    for mode, (a, d) in zip(order, lam1):
        anchors[mode], offsets[mode] = a, d
    for mode, (a, d) in zip([(1, 2), (2, 2)], lam2):
        anchors[mode], offsets[mode] = a, d
    values = {m: anchors[m] + offsets[m] for m in MODES}
    collision = _collides(anchors, offsets, values)
    return RootSet(values, EXACT, anchors, offsets, collision, _near_resonance(p))


def _omega0_over_eb(p):
    return 1.0 / (p.pbar0 + p.p3)


def perturbative_roots(params: ModelParams, tol=RESONANCE_RTOL) -> RootSet:
    """First-order roots in the medium strength ``alpha rho = epsilon * ng``."""
    p = params
    w0 = p.omega0
    for kappa in p.kappas:
        if abs(w0 - kappa) < tol * kappa and p.epsilon != 0:
            raise ResonanceSingularError(f"omega0 = {w0!r} is resonant with kappa = {kappa!r}")
    big = p.medium_coupling
    ratio = _omega0_over_eb(p)  # omega0 / eB without 0/0 at zero field
    anchors, offsets = {}, {}
    for s, kappa in ((1, p.kappa1), (2, p.kappa2)):
        for lam in (1, 2):
            mode = (s, lam)
            anchors[mode] = kappa
            offsets[mode] = ratio * big / (2.0 * (kappa + _sign(lam) * w0))
    total = sum(1.0 / (w0 * w0 - k * k) for k in p.kappas)
    anchors[(0, 1)] = 0.0
    offsets[(0, 1)] = w0 * (1.0 - big * ratio * (w0 * p.N0 / p.pbar0 - 1.0) * total)
    values = {m: anchors[m] + offsets[m] for m in MODES}
    return RootSet(values, PERTURBATIVE, anchors, offsets, near_resonance=_near_resonance(p))


def resonant_root_expansion(params: ModelParams, which: int) -> dict:
    """Leading behaviour of the two roots affected when omega0 = kappa_which.

    Returns the resonant root (shifted by a square root of the coupling) and
    its non-resonant companion on the other beam.
    """
    p = params
    k1, k2 = p.kappas
    big = p.medium_coupling
    if which == 2:
        kj = k2
        return {
            (1, 2): k1 + kj * big / (2.0 * (k1 + k2) * p.eB),
            (2, 1): k2 - math.sqrt(kj * big / (2.0 * p.eB)),
        }
    if which == 1:
        kj = k1
        return {
            (2, 2): k2 + kj * big / (2.0 * (k1 + k2) * p.eB),
            (1, 1): k1 - math.sqrt(kj * big / (2.0 * p.eB)),
        }
    raise InputError(f"resonance index must be 1 or 2, got {which}")


def omega0_of_field(eB, params: ModelParams):
    pbar0 = math.sqrt(2.0 * eB * (params.N0 + 0.5) + params.p3**2 + params.m**2)
    return eB / (pbar0 + params.p3)


def resonant_field_closed_form(kappa, m, N0):
    n = N0 + 0.5
    return kappa * (math.sqrt(n * n * kappa * kappa + m * m) + n * kappa)


def resonant_fields(params: ModelParams) -> ResonanceInfo:
    """eB values at which omega0 reaches kappa1 and kappa2."""
    out = []
    for kappa in params.kappas:

        def f(eB, kappa=kappa):
            return omega0_of_field(eB, params) / kappa - 1.0

        hi = kappa * (kappa + params.m)
        while f(hi) < 0:
            hi *= 2.0
        eB = brentq(f, 0.0, hi, xtol=1e-300, rtol=_RTOL, maxiter=_MAXITER)
        out.append(eB)
    closed = (None, None)
    if params.p3 == 0:
        closed = tuple(resonant_field_closed_form(k, params.m, params.N0) for k in params.kappas)
    return ResonanceInfo(out[0], out[1], closed[0], closed[1])


def quasi_electron_energy(params: ModelParams, roots: RootSet):
    """Quasi-electron energy p0: (exact value, first-order expansion)."""
    p = params
    exact = math.sqrt(2.0 * p.eB * (roots.tau0 * p.N0 / p.omega + 0.5) + p.p3**2 + p.m**2) if p.omega else p.pbar0
    w0 = p.omega0
    total = sum(1.0 / (w0 * w0 - k * k) for k in p.kappas)
    first = p.pbar0 + p.epsilon * p.eB * p.N0 * total / p.pbar0
    return exact, first


def dressed_params(params: ModelParams, rtol=1e-15, maxiter=50) -> ModelParams:
    """Replace ng by the self-consistent quasi-electron value p0 + p3.

    Only the Landau-level term of the quasi-electron energy depends on the
    coupling, so N0 = 0 (or zero coupling) returns the input unchanged.
    """
    if params.N0 == 0 or params.epsilon == 0 or params.eB == 0:
        return params
    p = params
    for _ in range(maxiter):
        p0, _ = quasi_electron_energy(p, solve_roots(p))
        ng = p0 + p.p3
        if abs(ng - p.ng) <= max(rtol, 8 * np.finfo(float).eps) * ng:
            return replace(p, ng=ng)
        p = replace(p, ng=ng)
    raise ConvergenceError(
        "self-consistent light-cone momentum did not converge; near omega = kappa_s the "
        "quasi-electron label jumps between the two split roots and no fixed point may exist"
    )


def quasi_photon_energy(params: ModelParams, roots: RootSet, transform, occupations):
    """Energy of a quasi-photon Fock state with the given mode occupations."""
    for mode, n in occupations.items():
        if mode not in PHOTON_MODES:
            raise InputError(f"{mode} is not a photon mode")
        if int(n) != n or n < 0:
            raise InputError(f"occupation of {mode} must be a non-negative integer")
    excitation = sum(roots[mode] * n for mode, n in occupations.items())
    taus = roots.as_array()
    vacuum_shift = float(np.sum(taus[None, :] * np.abs(transform.v) ** 2))
    return excitation - vacuum_shift + 0.5 * params.epsilon * sum(1.0 / k for k in params.kappas)
