"""Physical inputs, unit conversion and the derived model parameters.

Everything internal is in natural units (hbar = c = 1) with energies in eV.
Wavenumbers, masses and frequencies carry eV, the field enters only through
the product eB (eV^2), and the coupling ``epsilon`` that appears in the
quadratic Hamiltonian carries eV^2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

from scipy import constants

from .errors import InputError

HBARC_EV_NM = 197.3269804
HBARC_EV_M = HBARC_EV_NM * 1e-9
ALPHA = constants.fine_structure
MU0 = constants.mu_0
ELECTRON_MASS_EV = constants.physical_constants["electron mass energy equivalent in MeV"][0] * 1e6
# eB in eV^2 for B = 1 T: (hbar / e) c^2 with hbar/e in V s
EB_PER_TESLA = constants.hbar / constants.e * constants.c**2

#: epsilon = alpha rho (hbar c)^3 / kappa1, closes dimensionally (eV^2)
SCALED = "scaled"
#: epsilon = alpha rho (hbar c)^3 taken numerically as eV^2
UNSCALED = "unscaled"
#: epsilon = alpha rho (hbar c)^3 / (pbar0 + p3), the light-cone normalized coupling
LIGHTCONE = "lightcone"
CONVENTIONS = (SCALED, UNSCALED, LIGHTCONE)

FIELD_UNITS = ("am", "t", "natural")


def wavelength_to_wavenumber(wavelength_nm):
    """kappa = 2 pi hbar c / wavelength, in eV."""
    return 2.0 * math.pi * HBARC_EV_NM / wavelength_nm


def wavenumber_to_wavelength(kappa):
    return 2.0 * math.pi * HBARC_EV_NM / kappa


def density_to_natural(density_m3):
    """Number density in m^-3 to eV^3."""
    return density_m3 * HBARC_EV_M**3


def density_from_natural(rho):
    return rho / HBARC_EV_M**3


def field_to_eb(value, unit="am"):
    """Convert a field strength to eB in eV^2.

    ``am`` reads the value as H in A/m with B = mu0 H; ``t`` reads tesla;
    ``natural`` means the value already is eB in eV^2.
    """
    if unit == "am":
        return value * MU0 * EB_PER_TESLA
    if unit == "t":
        return value * EB_PER_TESLA
    if unit == "natural":
        return float(value)
    raise InputError(f"unknown field unit {unit!r}; expected one of {FIELD_UNITS}")


def eb_to_field(eB, unit="am"):
    if unit == "am":
        return eB / (MU0 * EB_PER_TESLA)
    if unit == "t":
        return eB / EB_PER_TESLA
    if unit == "natural":
        return float(eB)
    raise InputError(f"unknown field unit {unit!r}; expected one of {FIELD_UNITS}")


def si_to_natural(quantity, value, **kw):
    """Dispatch for the supported conversions (``wavelength``, ``density``, ``field``)."""
    if quantity == "wavelength":
        return wavelength_to_wavenumber(value)
    if quantity == "density":
        return density_to_natural(value)
    if quantity == "field":
        return field_to_eb(value, kw.get("unit", "am"))
    raise InputError(f"no conversion for {quantity!r}")


def natural_to_si(quantity, value, **kw):
    if quantity == "wavelength":
        return wavenumber_to_wavelength(value)
    if quantity == "density":
        return density_from_natural(value)
    if quantity == "field":
        return eb_to_field(value, kw.get("unit", "am"))
    raise InputError(f"no conversion for {quantity!r}")


def free_energy(eB, N0, p3, m):
    """Energy of a spinless charged particle on Landau level N0."""
    return math.sqrt(2.0 * eB * (N0 + 0.5) + p3 * p3 + m * m)


@dataclass(frozen=True)
class PhysicalInput:
    """Laboratory-unit description of one operating point."""

    wavelength_1: float
    wavelength_2: float
    density: float
    field: float
    landau_level: int = 0
    p3: float = 0.0
    field_unit: str = "am"
    unit_convention: str = SCALED
    mass: float = ELECTRON_MASS_EV


@dataclass(frozen=True)
class ModelParams:
    """Natural-unit parameters of the two-mode model.

    ``ng`` is the light-cone momentum (n g) of the electron, which fixes the
    cyclotron-like frequency ``omega = eB / ng``. It defaults to the free value
    ``pbar0 + p3``; :func:`magnetophoton.spectrum.dressed_params` replaces it
    by the self-consistent quasi-electron value. ``scale`` records the energy
    unit the numbers are expressed in (1 for eV).
    """

    kappa1: float
    kappa2: float
    eB: float
    m: float
    epsilon: float
    N0: int = 0
    p3: float = 0.0
    ng: float | None = None
    scale: float = 1.0
    pbar0: float = field(init=False)
    omega0: float = field(init=False)
    omega: float = field(init=False)

    def __post_init__(self):
        k1, k2 = sorted((float(self.kappa1), float(self.kappa2)))
        if not k1 > 0:
            raise InputError(f"wavenumbers must be positive, got {k1}")
        if not k2 > k1:
            raise InputError("the two wavenumbers must differ")
        if self.eB < 0:
            raise InputError(f"eB must be non-negative, got {self.eB}")
        if not self.m > 0:
            raise InputError(f"mass must be positive, got {self.m}")
        if self.epsilon < 0:
            raise InputError(f"coupling must be non-negative, got {self.epsilon}")
        if int(self.N0) != self.N0 or self.N0 < 0:
            raise InputError(f"Landau level must be a non-negative integer, got {self.N0}")
        pbar0 = free_energy(self.eB, self.N0, self.p3, self.m)
        free_ng = pbar0 + self.p3
        ng = free_ng if self.ng is None else float(self.ng)
        if not ng > 0:
            raise InputError("(n g) must be positive; negative light-cone momenta are not supported")
        set_ = object.__setattr__
        set_(self, "kappa1", k1)
        set_(self, "kappa2", k2)
        set_(self, "N0", int(self.N0))
        set_(self, "ng", ng)
        set_(self, "pbar0", pbar0)
        set_(self, "omega0", self.eB / free_ng)
        set_(self, "omega", self.eB / ng)

    @property
    def kappas(self):
        return (self.kappa1, self.kappa2)

    @property
    def delta_kappa(self):
        return self.kappa2 - self.kappa1

    @property
    def medium_coupling(self):
        """The medium strength epsilon * (n g), i.e. alpha rho in natural units (eV^3)."""
        return self.epsilon * self.ng

    def with_field(self, eB):
        return replace(self, eB=eB, ng=None)

    def with_epsilon(self, epsilon):
        return replace(self, epsilon=epsilon)


def coupling_from_density(density_m3, convention, kappa1, ng):
    rho = density_to_natural(density_m3)
    if convention == SCALED:
        return ALPHA * rho / kappa1
    if convention == UNSCALED:
        return ALPHA * rho
    if convention == LIGHTCONE:
        return ALPHA * rho / ng
    raise InputError(f"unknown unit convention {convention!r}; expected one of {CONVENTIONS}")


def build_params(inp: PhysicalInput) -> ModelParams:
    if inp.wavelength_1 == inp.wavelength_2:
        raise InputError("wavelength_1 and wavelength_2 must differ")
    if not (inp.wavelength_1 > 0 and inp.wavelength_2 > 0):
        raise InputError("wavelengths must be positive")
    if not inp.density > 0:
        raise InputError(f"density must be positive, got {inp.density}")
    if inp.field < 0:
        raise InputError(f"field must be non-negative, got {inp.field}")
    if inp.unit_convention not in CONVENTIONS:
        raise InputError(f"unknown unit convention {inp.unit_convention!r}; expected one of {CONVENTIONS}")
    k1, k2 = sorted(wavelength_to_wavenumber(w) for w in (inp.wavelength_1, inp.wavelength_2))
    eB = field_to_eb(inp.field, inp.field_unit)
    ng = free_energy(eB, inp.landau_level, inp.p3, inp.mass) + inp.p3
    eps = coupling_from_density(inp.density, inp.unit_convention, k1, ng)
    return ModelParams(k1, k2, eB, inp.mass, eps, inp.landau_level, inp.p3)


def dimensionless_rescale(params: ModelParams) -> ModelParams:
    """Express every energy in units of kappa1.

    Energies are divided by kappa1 and energy^2 quantities (eB, epsilon) by
    kappa1^2; ``scale`` accumulates the factor so results can be restored.
    """
    s = params.kappa1
    if s == 1.0:
        return params
    return ModelParams(
        kappa1=1.0,
        kappa2=params.kappa2 / s,
        eB=params.eB / s**2,
        m=params.m / s,
        epsilon=params.epsilon / s**2,
        N0=params.N0,
        p3=params.p3 / s,
        ng=params.ng / s,
        scale=params.scale * s,
    )
