"""Quadratic Hamiltonian, its canonical transformation, and an eigen-solver oracle.

Rows and columns run over the five modes in the order of
:data:`magnetophoton.spectrum.MODES`: the electron mode (0, 1) followed by
(1, 1), (1, 2), (2, 1), (2, 2). The Hamiltonian is

    H = a^dag A a + (a^dag B a^dag + a B^* a) / 2 + offset

and the new operators are ``c_j = sum_i (conj(u_ij) a_i + v_ij a_i^dag)``, so
column ``j`` of ``u`` and ``v`` describes normal mode ``j``. The diagonalizing
columns then satisfy

    (A - tau_j) u_j = B conj(v_j),    (A + tau_j) v_j = B conj(u_j).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import CanonicalViolationError, InstabilityError, ResonanceSingularError
from .params import ModelParams
from .spectrum import MODES, RootSet

CLOSED_FORM = "closed-form"
PERTURBATIVE = "perturbative"
ORACLE = "oracle"

CANONICAL_TOL = 1e-8


@dataclass(frozen=True)
class QuadraticForm:
    A: np.ndarray
    B: np.ndarray
    offset: float


@dataclass(frozen=True)
class CanonicalTransform:
    u: np.ndarray
    v: np.ndarray
    q: np.ndarray
    method: str
    taus: np.ndarray | None = None


def build_quadratic_form(params: ModelParams) -> QuadraticForm:
    p = params
    n = len(MODES)
    A = np.zeros((n, n), dtype=complex)
    B = np.zeros((n, n), dtype=complex)
    eps, w = p.epsilon, p.omega
    half = 0.5 * math.sqrt(eps * w)
    A[0, 0] = w
    for i, (s, lam) in enumerate(MODES):
        if s == 0:
            continue
        ks = p.kappas[s - 1]
        A[i, i] += ks
        for j, (s2, lam2) in enumerate(MODES):
            if s2 == 0 or lam2 != lam:
                continue
            photon = eps / (2.0 * math.sqrt(ks * p.kappas[s2 - 1]))
            A[i, j] += photon
            B[i, j] += photon
        A[i, 0] = -half * (1j) ** (lam - 1) / math.sqrt(ks)
        A[0, i] = np.conj(A[i, 0])
        B[i, 0] = B[0, i] = -half * (-1j) ** (lam - 1) / math.sqrt(ks)
    offset = p.m**2 / (2.0 * p.ng) + 0.5 * w + 0.5 * eps * sum(1.0 / k for k in p.kappas)
    return QuadraticForm(A, B, offset)


def _polarization(lam, sigma):
    """Circular mixing of the linear polarization ``lam`` inside normal mode ``sigma``."""
    if lam == 1:
        return 1.0 + 0j
    return -1j * (-1) ** sigma


def closed_form_transform(roots: RootSet, params: ModelParams, check=True) -> CanonicalTransform:
    """u, v from the analytic eigenvectors of the secular problem.

    The electron entry of column (k, sigma) sits in ``u`` for sigma = 1 and in
    ``v`` for sigma = 2. Each column is normalized to unit symplectic norm.
    """
    p = params
    if roots.collision:
        raise ResonanceSingularError("colliding roots: closed-form transform is degenerate")
    if p.epsilon == 0:
        raise ResonanceSingularError("closed-form transform needs a non-zero coupling; use free_transform")
    n = len(MODES)
    u = np.zeros((n, n), dtype=complex)
    v = np.zeros((n, n), dtype=complex)
    q = np.zeros(n)
    taus = roots.as_array()
    for j, (k, sigma) in enumerate(MODES):
        tau = taus[j]
        gaps = [roots.gap((k, sigma), kappa) for kappa in p.kappas]
        electron = p.omega / (p.epsilon * tau**3)
        # the norm is computed in units of the smallest gap so tiny couplings neither
        # overflow nor underflow it; q carries the scale back
        r = [abs(g) * (tau + kappa) for g, kappa in zip(gaps, p.kappas)]
        c = min(r)
        norm = (1.0 if sigma == 1 else -1.0) * electron * c * c + 2.0 * sum((c / x) ** 2 for x in r)
        if not norm > 0:
            raise CanonicalViolationError("mode has non-positive symplectic norm", {"mode": (k, sigma), "norm": norm})
        q[j] = c / math.sqrt(norm)
        for i, (s, lam) in enumerate(MODES):
            if s == 0:
                entry = -q[j] * math.sqrt(electron)
                if sigma == 1:
                    u[i, j] = entry
                else:
                    v[i, j] = entry
                continue
            kappa = p.kappas[s - 1]
            g = gaps[s - 1]
            pol = _polarization(lam, sigma)
            root = 2.0 * math.sqrt(tau * kappa)
            u[i, j] = pol * q[j] / (root * g)
            v[i, j] = np.conj(pol) * q[j] / (root * (tau + kappa))
    t = CanonicalTransform(u, v, q, CLOSED_FORM, taus)
    if check:
        res = verify_canonical(t)
        if max(res) > CANONICAL_TOL:
            raise CanonicalViolationError("closed-form transform violates the canonical constraints", res)
    return t


def free_transform(params: ModelParams) -> CanonicalTransform:
    """Zero-coupling limit: electron decoupled, photons in circular combinations."""
    pt = perturbative_transform(params.with_epsilon(0.0))
    return CanonicalTransform(pt.u, pt.v, pt.q, CLOSED_FORM, pt.taus)


def perturbative_transform(params: ModelParams, tol=1e-10) -> CanonicalTransform:
    """Leading small-coupling expansion of :func:`closed_form_transform`.

    Keeps the O(1) and O(sqrt(epsilon)) parts of ``u`` and the O(sqrt(epsilon))
    and O(epsilon) parts of ``v``, with the same column phases as the closed
    form, so the two differ entrywise by O(epsilon).
    """
    p = params
    eps, w = p.epsilon, p.omega0
    n = len(MODES)
    u = np.zeros((n, n), dtype=complex)
    v = np.zeros((n, n), dtype=complex)
    q = np.zeros(n)
    taus = np.zeros(n)
    for kk in p.kappas:
        if abs(kk - w) < tol * kk:
            raise ResonanceSingularError(f"omega0 = {w!r} is resonant with kappa = {kk!r}")
    for j, (k, sigma) in enumerate(MODES):
        if k == 0:
            # electron column: tau0 ~ omega0, q ~ omega0 sqrt(eps)
            u[0, j] = -1.0
            taus[j] = w
            q[j] = w * math.sqrt(eps)
            for i, (s, lam) in enumerate(MODES[1:], start=1):
                kappa = p.kappas[s - 1]
                amp = math.sqrt(eps * w) / (2.0 * math.sqrt(kappa))
                u[i, j] = _polarization(lam, 1) * amp / (w - kappa)
                v[i, j] = np.conj(_polarization(lam, 1)) * amp / (w + kappa)
            continue
        kk = p.kappas[k - 1]
        denom = kk + (-1) ** sigma * w
        if abs(denom) < tol * kk:
            raise ResonanceSingularError(f"mode {(k, sigma)} is resonant with the electron (omega0 = kappa{k})")
        shift = eps / (2.0 * abs(denom))  # |tau - kappa_k| at first order
        sgn = math.copysign(1.0, denom)
        taus[j] = kk + sgn * shift
        q[j] = math.sqrt(2.0) * kk * shift
        el = math.sqrt(eps * w / (2.0 * kk)) / abs(denom)
        if sigma == 1:
            u[0, j] = -el
        else:
            v[0, j] = -el
        for i, (s, lam) in enumerate(MODES[1:], start=1):
            ks = p.kappas[s - 1]
            pol = _polarization(lam, sigma)
            if s == k:
                u[i, j] = pol * sgn / math.sqrt(2.0)
                v[i, j] = np.conj(pol) * shift / (2.0 * math.sqrt(2.0) * kk)
            else:
                mix = shift * math.sqrt(kk / ks) / math.sqrt(2.0)
                u[i, j] = pol * mix / (kk - ks)
                v[i, j] = np.conj(pol) * mix / (kk + ks)
    return CanonicalTransform(u, v, q, PERTURBATIVE, taus)


def _maxabs(x):
    return float(np.max(np.abs(x))) if x.size else 0.0


def verify_canonical(t: CanonicalTransform):
    """Max-entry residuals of ``u u^dag - v v^dag = I`` and ``v u^T = u v^T``."""
    u, v = t.u, t.v
    first = u @ u.conj().T - v @ v.conj().T - np.eye(u.shape[0])
    second = v @ u.T - u @ v.T
    return _maxabs(first), _maxabs(second)


def verify_canonical_columns(t: CanonicalTransform):
    """The equivalent column form: ``u^dag u - v^T v^* = I``, ``u^dag v = v^T u^*``."""
    u, v = t.u, t.v
    first = u.conj().T @ u - v.T @ v.conj() - np.eye(u.shape[0])
    second = u.conj().T @ v - v.T @ u.conj()
    return _maxabs(first), _maxabs(second)


def verify_diagonalization(qf: QuadraticForm, t: CanonicalTransform, taus=None):
    """Max-entry residuals of the two linear eigen-equations, all columns at once."""
    taus = t.taus if taus is None else np.asarray(taus)
    u, v = t.u, t.v
    first = qf.A @ u - u * taus[None, :] - qf.B @ v.conj()
    second = qf.A @ v + v * taus[None, :] - qf.B @ u.conj()
    return _maxabs(first), _maxabs(second)


def dynamical_matrix(qf: QuadraticForm):
    return np.block([[qf.A, qf.B], [-qf.B.conj(), -qf.A.conj()]])


def oracle_diagonalize(qf: QuadraticForm):
    """Normal modes from the bosonic Hamiltonian matrix alone.

    Factorizes ``[[A, B], [B*, A*]] = K K^dag`` and diagonalizes the Hermitian
    matrix ``K^dag sigma_z K``; its positive eigenvalues are the normal-mode
    frequencies, and ``K^-dag U sqrt(|Lambda|)`` gives paraunitary eigenvectors
    of the dynamical matrix. Columns come out in ascending frequency order,
    degenerate ones orthonormalized by the Hermitian solver.
    """
    n = qf.A.shape[0]
    H = np.block([[qf.A, qf.B], [qf.B.conj(), qf.A.conj()]])
    H = 0.5 * (H + H.conj().T)
    try:
        L = np.linalg.cholesky(H)
    except np.linalg.LinAlgError as exc:
        raise InstabilityError("Hamiltonian matrix is not positive definite") from exc
    sz = np.concatenate([np.ones(n), -np.ones(n)])
    W = L.conj().T @ (sz[:, None] * L)
    W = 0.5 * (W + W.conj().T)
    lam, U = np.linalg.eigh(W)
    pos = np.argsort(lam)[n:]
    if not np.all(lam[pos] > 0) or np.sum(lam > 0) != n:
        raise InstabilityError(f"expected {n} positive frequencies, got {lam}")
    freqs = lam[pos]
    # sigma_z H T = T Lambda with T = L^-dag U sqrt(|Lambda|)
    T = np.linalg.solve(L.conj().T, U[:, pos] * np.sqrt(freqs)[None, :])
    u = T[:n]
    v = -T[n:].conj()
    return freqs, CanonicalTransform(u, v, np.ones(n), ORACLE, freqs)


def phase_fixed(t: CanonicalTransform) -> CanonicalTransform:
    """Make the largest-magnitude ``u`` entry of each column real positive.

    Ties (to 1e-8) go to the entry that comes first in mode order.
    """
    u, v = t.u.copy(), t.v.copy()
    for j in range(u.shape[1]):
        mags = np.abs(u[:, j])
        if mags.max() == 0:
            continue
        # circular photon columns have two entries of equal size; take the first
        i = int(np.flatnonzero(mags >= mags.max() * (1 - 1e-8))[0])
        ph = np.conj(u[i, j]) / abs(u[i, j])
        u[:, j] *= ph
        v[:, j] *= np.conj(ph)
    return CanonicalTransform(u, v, t.q, t.method, t.taus)


def match_columns(reference_taus, taus):
    """Index permutation sending each reference frequency to the nearest one in ``taus``."""
    taus = np.asarray(taus)
    order = []
    free = list(range(len(taus)))
    for r in reference_taus:
        j = min(free, key=lambda k: abs(taus[k] - r))
        order.append(j)
        free.remove(j)
    return np.array(order)


def vacuum_shift(t: CanonicalTransform, taus=None) -> float:
    """sum_{i,j} tau_j |v_ij|^2, the zero-point energy removed from the vacuum mean."""
    taus = t.taus if taus is None else np.asarray(taus)
    return float(np.sum(taus[None, :] * np.abs(t.v) ** 2))


def vacuum_mean(qf: QuadraticForm) -> float:
    """<0| H |0> in the free-particle vacuum: only the c-number survives normal ordering."""
    return qf.offset


def ground_constant(roots: RootSet, t: CanonicalTransform, params: ModelParams) -> float:
    """Constant left after diagonalization, ``H = sum tau c^dag c + H0``."""
    p = params
    shift = vacuum_shift(t, roots.as_array())
    return p.m**2 / (2.0 * p.ng) + 0.5 * p.omega - shift + 0.5 * p.epsilon * sum(1.0 / k for k in p.kappas)


def oracle_ground_energy(qf: QuadraticForm, freqs) -> float:
    """offset + (sum tau - tr A) / 2, which needs no eigenvectors."""
    return qf.offset + 0.5 * (float(np.sum(freqs)) - float(np.real(np.trace(qf.A))))
