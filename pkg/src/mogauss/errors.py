"""Exception types shared across the package."""


class MoGaussError(Exception):
    """Base class for all package errors."""


class DomainError(MoGaussError):
    """Evaluation outside a function's validity domain (t <= 0, t outside
    the declared interval, or a non-unit direction)."""


class InputError(MoGaussError):
    """Malformed user input: bad file fields, duplicate normals,
    non-positive masses, wrong dimensions."""


class HemisphereError(MoGaussError):
    """A direction set or measure is concentrated on a closed hemisphere,
    so the associated body would be unbounded / the problem infeasible."""


class EvennessError(MoGaussError):
    """An operation requiring an even (origin-symmetric) measure or body
    received a non-even one."""


class OutOfClassError(MoGaussError):
    """A function violates its declared class at a probed point (wrong
    derivative sign, vanishing denominator, positivity failure)."""


class HypothesisError(MoGaussError):
    """A solver mode's class/limit hypotheses are not met by (G, Psi)."""

    def __init__(self, mode: str, condition: str):
        self.mode = mode
        self.condition = condition
        super().__init__(f"{mode}: {condition}")


class ConvexityError(MoGaussError):
    """Sampled support data fails a convexity requirement (h'' + h <= 0)."""


class QuadratureError(MoGaussError):
    """An adaptive quadrature failed to reach its tolerance, or an
    integrand returned a non-finite value at a node."""


class DegenerateMeasureError(MoGaussError):
    """A measure that must be nonzero (total weight) is numerically zero."""
