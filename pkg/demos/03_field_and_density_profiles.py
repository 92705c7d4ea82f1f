"""
Entanglement profiles in physical units
=======================================

Sweep the magnetic field across the second resonance for a 1000 nm beam
paired with 500, 380 and 100 nm beams, then sweep the electron density at a
fixed weak field. Results can also be written as CSV with
``magnetophoton sweep``.
"""

# %%
import numpy as np

from magnetophoton.params import PhysicalInput, build_params, eb_to_field
from magnetophoton.spectrum import resonant_fields
from magnetophoton.sweep import SweepSpec, locate_jump, run_sweep

# %%
# The field profile peaks sharply at the resonant field B2, which for optical
# wavelengths lies near 1e10 A/m.
for nu2 in (500.0, 380.0, 100.0):
    fixed = PhysicalInput(1000.0, nu2, 1e14, 1.0)
    b2 = eb_to_field(resonant_fields(build_params(fixed)).eB2)
    res = run_sweep(SweepSpec("field", 0.5 * b2, 1.5 * b2, fixed, points=200))
    jump = locate_jump(res)
    print(f"nu2={nu2:5.0f} nm  B2={b2:.4e} A/m  peak at {jump:.4e} A/m  max M={np.max(res.M):.3e}")

# %%
# Changing the density-to-coupling convention rescales M by orders of
# magnitude but leaves the shape alone.
for conv in ("scaled", "unscaled", "lightcone"):
    fixed = PhysicalInput(1000.0, 380.0, 1e14, 1.0, unit_convention=conv)
    b2 = eb_to_field(resonant_fields(build_params(fixed)).eB2)
    res = run_sweep(SweepSpec("field", 0.5 * b2, 1.5 * b2, fixed, points=50))
    print(f"{conv:9s} max M = {np.max(res.M):.3e}")

# %%
# At a fixed weak field, entanglement rises steadily with density.
fixed = PhysicalInput(1000.0, 380.0, 1e14, 2.0)
res = run_sweep(SweepSpec("density", 1e12, 1e20, fixed, points=9))
for rho, m in zip(res.values, res.M):
    print(f"rho={rho:.1e} m^-3  M={m:.3e}")
