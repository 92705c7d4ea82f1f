"""Exception hierarchy.

Input problems derive from :class:`InputError` (a ``ValueError``); anything that
goes wrong inside a numerical routine derives from :class:`NumericalError`.
The CLI maps the two families onto different exit codes.
"""


class InputError(ValueError):
    """Invalid physical or numerical input."""


class NumericalError(ArithmeticError):
    """A numerical routine could not produce a trustworthy result."""


class PoleProximityError(NumericalError):
    """A secular residual was requested too close to a pole at ``tau = kappa_s``."""

    def __init__(self, tau, pole):
        super().__init__(f"tau={tau!r} lies inside the guard band of the pole at {pole!r}")
        self.tau = tau
        self.pole = pole


class ConvergenceError(NumericalError):
    def __init__(self, message, bracket=None):
        super().__init__(message if bracket is None else f"{message} (bracket={bracket})")
        self.bracket = bracket


class RootCollisionError(NumericalError):
    """Two secular roots coincide to within the collision tolerance."""

    def __init__(self, modes, values):
        super().__init__(f"roots {modes} collide: {values}")
        self.modes = modes
        self.values = values


class ResonanceSingularError(NumericalError):
    """A perturbative formula was evaluated where its denominator vanishes."""


class InstabilityError(NumericalError):
    """The quadratic form is not positive definite; no bosonic normal modes exist."""


class CanonicalViolationError(NumericalError):
    def __init__(self, message, residuals):
        super().__init__(f"{message}: {residuals}")
        self.residuals = residuals


class DegenerateStateError(NumericalError):
    """All two-photon amplitudes vanish, so the state cannot be normalized."""
