"""Typed errors raised by the evaluation kernels.

Degenerate parameter constellations raise instead of returning NaN-like
values, so that samplers can treat them as resample signals.
"""

from __future__ import annotations


class DegenerateParameterError(ValueError):
    """A denominator theta/q-factorial fell below the safety guard."""


class HConditionError(DegenerateParameterError):
    """The lattice-weight normalisation condition failed: a row weight at
    column zero vanished, or a complementary weight at row zero hit one."""


class ZeroArgumentError(DegenerateParameterError):
    """Theta evaluated at argument zero (the function has an essential
    singularity there)."""


class RootOfUnityError(DegenerateParameterError):
    """A q-factorial denominator vanished because q is (numerically) a
    root of unity of too small an order."""


class DivergenceError(ValueError):
    """An infinite product was requested outside its convergence region."""


class OutOfRegionError(ValueError):
    """A lattice step or position lies outside the rectangular region."""


class CapExceededError(ValueError):
    """A brute-force enumeration exceeded the configured size cap."""


class CommonRootError(ValueError):
    """The two cofactor-equation polynomials share a root, so no bounded
    cofactor pair exists."""


class SingularSystemError(ValueError):
    """The coefficient-matching linear system could not be solved."""


class UnknownIdentityError(ValueError):
    """An identity family name is not recognised."""


class ResamplingExhaustedError(RuntimeError):
    """No generic parameter point was found within the attempt budget."""
