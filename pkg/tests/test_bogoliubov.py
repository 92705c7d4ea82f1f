import math

import numpy as np
import pytest
from hypothesis import given

from magnetophoton import bogoliubov as bg
from magnetophoton.bogoliubov import CanonicalTransform
from magnetophoton.errors import InstabilityError, ResonanceSingularError
from magnetophoton.params import ModelParams, dimensionless_rescale
from magnetophoton.spectrum import MODES, resonant_fields, solve_roots
from magnetophoton.validation import slope

from conftest import model_params, off_resonance


def literal_quadratic_form(k1, k2, w, eps):
    """Entry-by-entry transcription of the coupled Hamiltonian, independent of the builder."""
    kap = {1: k1, 2: k2}
    idx = {m: i for i, m in enumerate(MODES)}
    A = np.zeros((5, 5), complex)
    B = np.zeros((5, 5), complex)
    A[0, 0] = w
    for s in (1, 2):
        for lam in (1, 2):
            i = idx[(s, lam)]
            A[i, i] = kap[s]
            phase = {1: 1.0, 2: 1j}[lam]
            A[i, 0] = -0.5 * math.sqrt(eps * w / kap[s]) * phase
            A[0, i] = np.conj(A[i, 0])
            B[i, 0] = B[0, i] = -0.5 * math.sqrt(eps * w / kap[s]) * np.conj(phase)
            for s2 in (1, 2):
                j = idx[(s2, lam)]
                c = eps / (2 * math.sqrt(kap[s] * kap[s2]))
                A[i, j] += c
                B[i, j] += c
    return A, B


def test_quadratic_form_matches_literal_transcription(bench):
    qf = bg.build_quadratic_form(bench)
    A, B = literal_quadratic_form(1.0, 2.0, 0.5, 0.01)
    assert np.max(np.abs(qf.A - A)) < 1e-15
    assert np.max(np.abs(qf.B - B)) < 1e-15
    assert qf.offset == pytest.approx(1.0 / 2 + 0.25 + 0.005 * 1.5, rel=1e-15)


def test_quadratic_form_free_limit():
    p = ModelParams(1.0, 2.0, 0.5, 1.0, 0.0)
    qf = bg.build_quadratic_form(p)
    assert np.array_equal(qf.A, np.diag([p.omega, 1, 1, 2, 2]).astype(complex))
    assert not qf.B.any()
    assert qf.offset == pytest.approx(p.m**2 / (2 * p.ng) + p.omega / 2, rel=1e-15)


@given(model_params())
def test_quadratic_form_symmetries(p):
    qf = bg.build_quadratic_form(p)
    assert np.max(np.abs(qf.A - qf.A.conj().T)) <= 1e-14
    assert np.max(np.abs(qf.B - qf.B.T)) <= 1e-14
    photon = np.ix_(range(1, 5), range(1, 5))
    eps_part = qf.A[photon] - np.diag([p.kappa1, p.kappa1, p.kappa2, p.kappa2])
    assert np.max(np.abs(eps_part - qf.B[photon])) <= 1e-14


def _matched(p):
    roots = solve_roots(p)
    t = bg.closed_form_transform(roots, p)
    freqs, o = bg.oracle_diagonalize(bg.build_quadratic_form(p))
    order = bg.match_columns(roots.as_array(), freqs)
    o = CanonicalTransform(o.u[:, order], o.v[:, order], o.q, o.method, freqs[order])
    return roots, t, o


def test_closed_form_matches_oracle_magnitudes(bench_free_ng):
    p = bench_free_ng.with_epsilon(0.01)
    _, t, o = _matched(p)
    a, b = bg.phase_fixed(t), bg.phase_fixed(o)
    assert np.max(np.abs(np.abs(a.u) - np.abs(b.u))) < 1e-8
    assert np.max(np.abs(np.abs(a.v) - np.abs(b.v))) < 1e-8
    # after phase fixing the columns agree as complex vectors too
    assert np.max(np.abs(a.u - b.u)) < 1e-8
    assert np.max(np.abs(a.v - b.v)) < 1e-8


@given(model_params())
def test_closed_form_constraints(p):
    roots = solve_roots(p)
    t = bg.closed_form_transform(roots, p)
    assert max(bg.verify_canonical(t)) < 1e-8
    assert max(bg.verify_canonical_columns(t)) < 1e-8
    assert max(bg.verify_diagonalization(bg.build_quadratic_form(p), t)) < 1e-8
    assert abs(np.linalg.det(t.u)) > 0


@given(model_params())
def test_energy_sum_matches_oracle(p):
    roots, t, o = _matched(p)
    assert bg.vacuum_shift(t, roots.as_array()) == pytest.approx(bg.vacuum_shift(o), rel=1e-8, abs=1e-12)


def test_ground_constant_identity(bench):
    roots = solve_roots(bench)
    t = bg.closed_form_transform(roots, bench)
    qf = bg.build_quadratic_form(bench)
    freqs, _ = bg.oracle_diagonalize(qf)
    assert bg.ground_constant(roots, t, bench) == pytest.approx(bg.oracle_ground_energy(qf, freqs), rel=1e-10)


def test_ground_constant_free_limit():
    p = ModelParams(1.0, 2.0, 0.5, 1.0, 0.0)
    t = bg.free_transform(p)
    assert bg.ground_constant(solve_roots(p), t, p) == pytest.approx(p.m**2 / (2 * p.ng) + p.omega / 2, rel=1e-15)


def test_ground_constant_scales_with_energy_unit():
    p = ModelParams(2.0, 4.0, 2.0, 2.0, 0.04)
    q = dimensionless_rescale(p)
    e_p = bg.ground_constant(solve_roots(p), bg.closed_form_transform(solve_roots(p), p), p)
    e_q = bg.ground_constant(solve_roots(q), bg.closed_form_transform(solve_roots(q), q), q)
    assert e_p == pytest.approx(2 * e_q, rel=1e-12)


def test_oracle_free_frequencies_and_scaling():
    p = ModelParams(1.0, 2.0, 0.5, 1.0, 0.0)
    freqs, _ = bg.oracle_diagonalize(bg.build_quadratic_form(p))
    assert freqs == pytest.approx(sorted([p.omega, 1, 1, 2, 2]), rel=1e-14)
    a = ModelParams(1.0, 2.0, 0.5, 1.0, 0.01)
    b = ModelParams(3.0, 6.0, 4.5, 3.0, 0.09)
    fa, _ = bg.oracle_diagonalize(bg.build_quadratic_form(a))
    fb, _ = bg.oracle_diagonalize(bg.build_quadratic_form(b))
    assert fb == pytest.approx(3 * fa, rel=1e-12)


def test_oracle_rejects_unstable_form():
    p = ModelParams(1.0, 2.0, 0.5, 1.0, 0.01)
    qf = bg.build_quadratic_form(p)
    bad = bg.QuadraticForm(qf.A - 3 * np.eye(5), qf.B, qf.offset)
    with pytest.raises(InstabilityError):
        bg.oracle_diagonalize(bad)


def test_verify_canonical_identity():
    t = CanonicalTransform(np.eye(5, dtype=complex), np.zeros((5, 5), complex), np.ones(5), "identity")
    assert bg.verify_canonical(t) == (0.0, 0.0)


def test_perturbative_free_limit():
    p = ModelParams(1.0, 2.0, 0.5, 1.0, 0.0)
    t = bg.perturbative_transform(p)
    assert not t.v.any()
    assert t.u[0, 0] == -1
    for j, (k, sigma) in enumerate(MODES[1:], start=1):
        sgn = math.copysign(1.0, p.kappas[k - 1] + (-1) ** sigma * p.omega0)
        col = t.u[:, j]
        assert col[MODES.index((k, 1))] == pytest.approx(sgn / math.sqrt(2))
        assert col[MODES.index((k, 2))] == pytest.approx(-1j * (-1) ** sigma * sgn / math.sqrt(2))
        assert np.count_nonzero(col) == 2


def test_perturbative_converges_linearly_to_closed_form(bench_free_ng):
    eps = np.geomspace(1e-6, 1e-3, 5)
    du, dv, canon = [], [], []
    for e in eps:
        p = bench_free_ng.with_epsilon(e)
        t = bg.closed_form_transform(solve_roots(p), p)
        pt = bg.perturbative_transform(p)
        du.append(np.max(np.abs(pt.u - t.u)))
        dv.append(np.max(np.abs(pt.v - t.v)))
        canon.append(max(bg.verify_canonical(pt)))
    assert slope(eps, du) == pytest.approx(1.0, abs=0.1)
    # v starts at O(sqrt(eps)), so its first neglected term is O(eps^1.5)
    assert slope(eps, dv) == pytest.approx(1.5, abs=0.1)
    assert slope(eps, canon) == pytest.approx(1.0, abs=0.1)
    assert canon[-1] < 0.05


def test_perturbative_electron_entry_in_v(bench_free_ng):
    p = bench_free_ng
    pt = bg.perturbative_transform(p)
    big = p.medium_coupling
    expected = p.omega0 * math.sqrt(big) / (math.sqrt(2 * p.eB * p.kappa1) * (p.omega0 + p.kappa1))
    assert abs(pt.v[0, MODES.index((1, 2))]) == pytest.approx(expected, rel=1e-14)
    assert pt.u[0, MODES.index((1, 2))] == 0


def test_perturbative_refuses_resonance(bench_free_ng):
    p = bench_free_ng.with_field(resonant_fields(bench_free_ng).eB2)
    with pytest.raises(ResonanceSingularError):
        bg.perturbative_transform(p)


@given(model_params(eps_max=1e-4))
def test_perturbative_close_to_closed_form(p):
    if not off_resonance(p, 0.1):
        return
    t = bg.closed_form_transform(solve_roots(p), p)
    pt = bg.perturbative_transform(p)
    gap = min(abs(p.omega0 - k) for k in p.kappas) / max(p.kappas)
    assert np.max(np.abs(pt.u - t.u)) < 1.0 * p.epsilon / gap**2 / min(p.kappas) ** 2 + 1e-12
