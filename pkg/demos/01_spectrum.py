"""
Mode frequencies of two photons coupled to an electron
======================================================

Two photon beams with wavenumbers kappa1 < kappa2 travel through an electron
gas in a magnetic field. The photons mix with the electron's cyclotron motion,
and the resulting normal modes have frequencies tau given by the positive roots
of a secular equation with poles at kappa1 and kappa2.

This walk-through uses dimensionless numbers (energies in units of kappa1).
"""

# %%
# Set up the benchmark point: kappa = (1, 2), eB = 0.5, m = 1, coupling 0.01.
# Fixing the light-cone momentum ``ng`` to 1 makes the cyclotron frequency 0.5.
import numpy as np

from magnetophoton import bogoliubov as bg
from magnetophoton.params import ModelParams
from magnetophoton.spectrum import MODES, perturbative_roots, resonant_fields, solve_roots

p = ModelParams(kappa1=1.0, kappa2=2.0, eB=0.5, m=1.0, epsilon=0.01, ng=1.0)
print("cyclotron frequency omega =", p.omega)

# %%
# Solve the secular equation. Each root is stored as a pole plus a small
# offset so that shifts far below machine precision relative to kappa survive.
roots = solve_roots(p)
for mode in MODES:
    print(f"mode {mode}: tau = {roots[mode]!r}")

# %%
# Cross-check against a completely different route: diagonalize the 10x10
# dynamical matrix of the quadratic Hamiltonian.
freqs, _ = bg.oracle_diagonalize(bg.build_quadratic_form(p))
print("largest relative difference:", np.max(np.abs(np.sort(roots.as_array()) - freqs) / freqs))

# %%
# Away from resonance the first-order expansion is accurate to O(coupling^2).
# It is built around the free cyclotron frequency omega0, so compare with the
# light-cone momentum left at its free value rather than pinned to 1.
free = ModelParams(kappa1=1.0, kappa2=2.0, eB=0.5, m=1.0, epsilon=0.01)
exact, pert = solve_roots(free), perturbative_roots(free)
print("largest |exact - perturbative|:", max(abs(exact[m] - pert[m]) for m in MODES))

# %%
# At the fields where the cyclotron frequency meets a photon wavenumber the
# expansion breaks down: one pair of modes splits as sqrt(coupling) instead.
base = ModelParams(1.0, 2.0, 0.5, 1.0, 1e-6)
info = resonant_fields(base)
at_b2 = base.with_field(info.eB2)
for eps in (1e-8, 1e-6, 1e-4):
    r = solve_roots(at_b2.with_epsilon(eps))
    print(f"coupling {eps:.0e}: kappa2 - tau21 = {-r.gap((2, 1), 2.0):.3e}")
