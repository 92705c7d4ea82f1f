"""
How much entanglement does the medium create?
=============================================

After the canonical transformation each photon is a mixture of both linear
polarizations, and a two-photon state built from orthogonally polarized
quasi-photons is slightly entangled. The measure M is the entropy of either
photon's reduced density matrix. It vanishes at zero coupling and for parallel
polarizations.
"""

# %%
import numpy as np

from magnetophoton import bogoliubov as bg
from magnetophoton import entanglement as en
from magnetophoton.params import ModelParams
from magnetophoton.spectrum import resonant_fields, solve_roots


def deficit(p, lam=(2, 1)):
    t = bg.closed_form_transform(solve_roots(p), p)
    return en.pair_entanglement(t, *lam).one_minus_y


# %%
# Off resonance 1 - y grows as the fourth power of the coupling.
off = ModelParams(1.0, 2.0, 0.5, 1.0, 1e-5)
eps = np.geomspace(1e-6, 1e-4, 5)
xs = [deficit(off.with_epsilon(e)) for e in eps]
print("off-resonance slope:", np.polyfit(np.log(eps), np.log(xs), 1)[0])
print("ratio to leading asymptotic:", deficit(off) / (en.offres_prefactor(off, 2, 1) * off.medium_coupling**4))

# %%
# At the second resonant field the growth is only cubic, so entanglement is
# enhanced by a factor of order 1 / coupling.
res = off.with_field(resonant_fields(off).eB2)
xr = [deficit(res.with_epsilon(e)) for e in eps]
print("resonant slope:", np.polyfit(np.log(eps), np.log(xr), 1)[0])

# %%
# The measure itself follows from 1 - y through the binary entropy.
x = deficit(res)
print("M =", en.measure_from_deficit(x), " leading form:", en.expanded_measure(x))

# %%
# Parallel polarizations stay separable.
t = bg.closed_form_transform(solve_roots(off), off)
print("M(1,1) =", en.pair_entanglement(t, 1, 1).M, " M(2,2) =", en.pair_entanglement(t, 2, 2).M)
