"""Photon polarization entanglement mediated by an electron in a magnetic field.

Pipeline: :func:`build_params` -> :func:`solve_roots` ->
:func:`closed_form_transform` -> :func:`two_photon_amplitudes` -> :func:`measure`.
"""

__version__ = "0.1.0"

from .bogoliubov import (
    CanonicalTransform,
    QuadraticForm,
    build_quadratic_form,
    closed_form_transform,
    free_transform,
    oracle_diagonalize,
    perturbative_transform,
    verify_canonical,
    verify_diagonalization,
)
from .entanglement import (
    EntanglementReport,
    TwoQubitAmplitudes,
    asymptotic_measure_offres,
    asymptotic_measure_res,
    binary_entropy,
    pair_entanglement,
    full_sum_amplitudes,
    measure,
    reduced_density,
    two_photon_amplitudes,
)
from .errors import (
    CanonicalViolationError,
    ConvergenceError,
    DegenerateStateError,
    InputError,
    InstabilityError,
    NumericalError,
    PoleProximityError,
    ResonanceSingularError,
    RootCollisionError,
)
from .params import ModelParams, PhysicalInput, build_params, dimensionless_rescale, natural_to_si, si_to_natural
from .spectrum import (
    MODES,
    RootSet,
    characteristic_residual,
    dressed_params,
    perturbative_roots,
    resonant_fields,
    solve_roots,
)
from .sweep import SweepResult, SweepSpec, locate_jump, run_sweep, to_csv

__all__ = [name for name in dir() if not name.startswith("_")]
