"""Two-photon polarization state and its von Neumann entanglement.

The computational basis is

    |1> = a11^dag a21^dag |0>,   |2> = a11^dag a22^dag |0>,
    |3> = a12^dag a21^dag |0>,   |4> = a12^dag a22^dag |0>,

where a_{s,lam} creates a photon of wavenumber kappa_s and linear
polarization lam. The state is obtained by acting with one quasi-photon of
mode (1, lambda1) and one of mode (2, lambda2) on the vacuum and keeping the
two-photon part.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bogoliubov import CanonicalTransform
from .errors import DegenerateStateError, InputError, NumericalError, ResonanceSingularError
from .params import ModelParams
from .spectrum import MODES, resonant_fields

PHYSICAL = "physical"
SWAPPED = "swapped"
PAIRINGS = (PHYSICAL, SWAPPED)

EIGEN_TOL = 1e-12

_ROW = {mode: i for i, mode in enumerate(MODES)}


@dataclass(frozen=True)
class TwoQubitAmplitudes:
    """Amplitudes over the four basis states.

    ``det`` is the determinant of the 2x2 amplitude matrix [[u1, u2], [u3, u4]]
    of the *normalized* vector. It is carried separately because for weakly
    coupled photons it is many orders of magnitude below the amplitudes and
    cannot be recovered from them by subtraction.
    """

    upsilon: np.ndarray
    normalized: bool = True
    det: complex | None = None

    @classmethod
    def from_vector(cls, upsilon, normalize=True):
        ups = np.asarray(upsilon, dtype=complex)
        if ups.shape != (4,):
            raise InputError("expected four amplitudes")
        norm2 = float(np.sum(np.abs(ups) ** 2))
        if norm2 == 0:
            raise DegenerateStateError("all two-photon amplitudes vanish")
        if normalize:
            ups = ups / math.sqrt(norm2)
        return cls(ups, normalize)

    @property
    def matrix(self):
        return self.upsilon.reshape(2, 2)

    def determinant(self):
        if self.det is not None:
            return self.det
        u = self.upsilon
        return complex(u[0] * u[3] - u[1] * u[2])


@dataclass(frozen=True)
class EntanglementReport:
    y: float
    z: float
    mu: tuple
    M: float
    lambda1: int | None = None
    lambda2: int | None = None
    one_minus_y: float | None = None


def _columns(t: CanonicalTransform, lambda1, lambda2, pairing):
    if lambda1 not in (1, 2) or lambda2 not in (1, 2):
        raise InputError("polarization indices must be 1 or 2")
    if pairing == PHYSICAL:
        return _ROW[(1, lambda1)], _ROW[(2, lambda2)]
    if pairing == SWAPPED:
        return _ROW[(1, lambda2)], _ROW[(2, lambda1)]
    raise InputError(f"unknown pairing {pairing!r}; expected one of {PAIRINGS}")


def _photon_rows(t, col):
    """(u_{1,1}, u_{1,2}), (u_{2,1}, u_{2,2}) of one column."""
    u = t.u[:, col]
    return (u[_ROW[(1, 1)]], u[_ROW[(1, 2)]]), (u[_ROW[(2, 1)]], u[_ROW[(2, 2)]])


def two_photon_amplitudes(t: CanonicalTransform, lambda1, lambda2, pairing=PHYSICAL) -> TwoQubitAmplitudes:
    """Normalized amplitude vector of the pair (1, lambda1), (2, lambda2).

    With ``w_{s,l}`` the photon entries of the first column and ``x_{s,l}``
    those of the second, the amplitudes are w11 x21 + w21 x11 and
    w11 x22 + w22 x11, followed by minus the second and a copy of the first.
    ``pairing="physical"`` takes the columns (1, lambda1) and (2, lambda2);
    ``"swapped"`` takes (1, lambda2) and (2, lambda1).
    """
    ca, cb = _columns(t, lambda1, lambda2, pairing)
    (a1, a2), (d1, d2) = _photon_rows(t, ca)  # w_{1,l}, w_{2,l}
    (c1, c2), (b1, b2) = _photon_rows(t, cb)  # x_{1,l}, x_{2,l}
    ups1 = a1 * b1 + d1 * c1
    ups2 = a1 * b2 + d2 * c1
    ups = np.array([ups1, ups2, -ups2, ups1], dtype=complex)
    norm2 = float(np.sum(np.abs(ups) ** 2))
    if norm2 == 0:
        raise DegenerateStateError("all two-photon amplitudes vanish")
    # the amplitude matrix is a sum of two outer products, so its determinant
    # factorizes into two 2x2 minors formed from the columns themselves
    det = (a1 * c2 - a2 * c1) * (b1 * d2 - b2 * d1)
    return TwoQubitAmplitudes(ups / math.sqrt(norm2), True, complex(det) / norm2)


def full_sum_amplitudes(t: CanonicalTransform, lambda1, lambda2, pairing=PHYSICAL) -> TwoQubitAmplitudes:
    """Amplitudes of every basis state from the complete product of the two columns.

    Each basis state |1,l; 2,l'> collects u_{1l;A} u_{2l';B} + u_{2l';A} u_{1l;B},
    with no relation between the four entries assumed.
    """
    ca, cb = _columns(t, lambda1, lambda2, pairing)
    ua, ub = t.u[:, ca], t.u[:, cb]
    ups = np.zeros(4, dtype=complex)
    for i, l in enumerate((1, 2)):
        for k, lp in enumerate((1, 2)):
            r1, r2 = _ROW[(1, l)], _ROW[(2, lp)]
            ups[2 * i + k] = ua[r1] * ub[r2] + ua[r2] * ub[r1]
    norm2 = float(np.sum(np.abs(ups) ** 2))
    if norm2 == 0:
        raise DegenerateStateError("all two-photon amplitudes vanish")
    (a1, a2), (d1, d2) = _photon_rows(t, ca)
    (c1, c2), (b1, b2) = _photon_rows(t, cb)
    det = (a1 * c2 - a2 * c1) * (b1 * d2 - b2 * d1)
    return TwoQubitAmplitudes(ups / math.sqrt(norm2), True, complex(det) / norm2)


def reduced_density(a: TwoQubitAmplitudes, trace_out=2) -> np.ndarray:
    """2x2 density operator of one photon after tracing over the other."""
    m = a.matrix
    if trace_out == 2:
        return m @ m.conj().T
    if trace_out == 1:
        return m.T @ m.conj()
    raise InputError("trace_out must be 1 or 2")


def binary_entropy(p):
    """H(p) in bits, with 0 log 0 = 0."""
    p = float(p)
    if p < 0 or p > 1:
        raise InputError(f"probability out of range: {p}")
    if p == 0.0 or p == 1.0:
        return 0.0
    return (-p * math.log(p) - (1.0 - p) * math.log1p(-p)) / math.log(2.0)


def _stable_spectrum(a: TwoQubitAmplitudes):
    """(mu_small, mu_large, y) with mu_small from the determinant, not from 1 - y."""
    u = a.upsilon
    r11 = abs(u[0]) ** 2 + abs(u[1]) ** 2
    r22 = abs(u[2]) ** 2 + abs(u[3]) ** 2
    r12 = u[0] * np.conj(u[2]) + u[1] * np.conj(u[3])
    y_formula = math.sqrt((r11 - r22) ** 2 + 4.0 * abs(r12) ** 2)
    big = 0.5 * (1.0 + min(y_formula, 1.0))
    small = abs(a.determinant()) ** 2 / big if big > 0 else 0.5
    # the smaller eigenvalue is at most 1/2; rounding near maximal entanglement can overshoot
    small = min(small, 0.5)
    return small, 1.0 - small, y_formula


def measure(a: TwoQubitAmplitudes, lambda1=None, lambda2=None) -> EntanglementReport:
    """Entanglement entropy of the pure two-photon state, in bits."""
    if not a.normalized:
        a = TwoQubitAmplitudes.from_vector(a.upsilon)
    mu_small, mu_big, y_formula = _stable_spectrum(a)
    one_minus_y = 2.0 * mu_small
    y = 1.0 - one_minus_y
    eig = np.linalg.eigvalsh(reduced_density(a, 2))
    eig_b = np.linalg.eigvalsh(reduced_density(a, 1))
    # closed form versus the explicit eigen-decompositions of both reduced states
    worst = max(abs(eig[0] - mu_small), abs(eig[1] - mu_big), abs(eig_b[0] - mu_small), abs(eig_b[1] - mu_big))
    if worst > EIGEN_TOL or abs(y_formula - y) > 1e-10:
        raise NumericalError(f"reduced-density spectrum disagrees with the closed form by {worst:.3e}")
    M = binary_entropy(mu_small)
    return EntanglementReport(y, 0.5 * (1.0 + y), (mu_big, mu_small), M, lambda1, lambda2, one_minus_y)


def pair_entanglement(t: CanonicalTransform, lambda1, lambda2, pairing=PHYSICAL) -> EntanglementReport:
    return measure(two_photon_amplitudes(t, lambda1, lambda2, pairing), lambda1, lambda2)


def measure_from_deficit(one_minus_y):
    """M = H((1 + y)/2) evaluated from x = 1 - y without cancellation."""
    return binary_entropy(0.5 * one_minus_y)


def expanded_measure(one_minus_y):
    """Leading small-x form of H: (x/2)(1/ln 2 - log2(x/2))."""
    x = float(one_minus_y)
    if x == 0:
        return 0.0
    return 0.5 * x * (1.0 / math.log(2.0) - math.log2(0.5 * x))


def offres_prefactor(params: ModelParams, lambda1, lambda2, tol=1e-10):
    """beta with 1 - y = beta * (epsilon ng)^4 away from the resonant fields."""
    p = params
    w = p.omega
    d1 = w + (-1) ** lambda1 * p.kappa1
    d2 = w + (-1) ** lambda2 * p.kappa2
    if abs(d1) < tol * p.kappa1 or abs(d2) < tol * p.kappa2:
        raise ResonanceSingularError("off-resonant asymptotics evaluated at a resonant field")
    return 1.0 / ((p.ng * p.delta_kappa) ** 4 * 8.0 * d1**2 * d2**2)


def resonant_prefactor(params: ModelParams, which):
    """delta_j with 1 - y = delta_j * (epsilon ng)^3 at the resonant field eB_j."""
    p = params
    eB = resonant_fields(p)[which]
    kappa = p.kappas[which - 1]
    return (kappa / eB) ** 3 / (4.0 * p.delta_kappa**4 * (p.kappa1 + p.kappa2) ** 2)


def asymptotic_measure_offres(params: ModelParams, lambda1, lambda2):
    """(y, M) from the leading small-coupling expansion off resonance."""
    if lambda1 == lambda2:
        return 1.0, 0.0
    x = offres_prefactor(params, lambda1, lambda2) * params.medium_coupling**4
    return 1.0 - x, expanded_measure(x)


def asymptotic_measure_res(params: ModelParams, which):
    """(y, M) from the leading expansion at eB_j, for the pair that resonates there."""
    if which not in (1, 2):
        raise InputError("which must be 1 or 2")
    x = resonant_prefactor(params, which) * params.medium_coupling**3
    return 1.0 - x, expanded_measure(x)
