"""Parameter bundles shared by every evaluator.

A :class:`ParamPoint` fixes one numeric instance of the six quantities
(x, a, b, c, q, p) at which all series, weights and normal forms are
evaluated.  Scalars may be built-in ``complex`` or ``mpmath.mpc``; the
evaluators are agnostic as long as the usual arithmetic works.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass


def _is_zero(z) -> bool:
    return z == 0


@dataclass(frozen=True)
class ParamPoint:
    """One sampled evaluation point.

    Invariants: x, a, b, c, q nonzero; |p| < 1 with p = 0 only for the
    basic (theta-free) specialisation.  ``generic`` is set by the sampler
    after a genericity scan passed; evaluators never set it themselves.
    """

    x: complex
    a: complex
    b: complex
    c: complex
    q: complex
    p: complex
    generic: bool = False

    def __post_init__(self):
        for name in ("x", "a", "b", "c", "q"):
            if _is_zero(getattr(self, name)):
                raise ValueError(f"parameter {name!r} must be nonzero")
        if abs(self.p) >= 1:
            raise ValueError("nome p must satisfy |p| < 1")

    @property
    def is_basic(self) -> bool:
        """True when p = 0 exactly (q-series specialisation)."""
        return _is_zero(self.p)

    def swap_ab(self) -> "ParamPoint":
        """The point with the roles of a and b exchanged."""
        return dataclasses.replace(self, a=self.b, b=self.a, generic=self.generic)

    def shift(self, alpha: int, beta: int, gamma: int) -> "ParamPoint":
        """Substitute (a, b, c) -> (a q^alpha, b q^beta, c q^gamma)."""
        if alpha == beta == gamma == 0:
            return self
        q = self.q
        return dataclasses.replace(
            self,
            a=self.a * q**alpha,
            b=self.b * q**beta,
            c=self.c * q**gamma,
            generic=False,
        )

    def replace(self, **changes) -> "ParamPoint":
        return dataclasses.replace(self, **changes)


@dataclass(frozen=True)
class IdentitySize:
    """The pair of truncation depths (m, n) of a two-sum identity."""

    m: int
    n: int

    def __post_init__(self):
        if self.m < 0 or self.n < 0:
            raise ValueError("truncation depths must be nonnegative")
