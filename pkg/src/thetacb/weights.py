"""The three elliptic weight functions and the lattice step weights.

``elliptic_weight`` is the eight-theta ratio that biases an east step at
lattice position (i, j):

    h(i, j) = theta(bc q^(i+2j), (c/b) q^i, ax q^i, (a/x) q^i; p)
            / theta(ab q^(i+j), (a/b) q^(i-j), cx q^(i+j), (c/x) q^(i+j); p).

``normalized_weight`` is the row-normalised form H(i, j) = h(i, j)/h(i, 0),
and ``binomial_weight`` is the five-theta weight W(s, t) driving the
Pascal-style recursion of the two-parameter elliptic binomial coefficients.
All three are elliptic: substituting p*x, p*a, p*b or p*c for the matching
parameter leaves them unchanged.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

from .errors import DegenerateParameterError, HConditionError, OutOfRegionError
from .params import IdentitySize, ParamPoint
from .special import theta

#: Runtime backstop: a denominator theta whose magnitude (normalised by
#: 1 + |argument|) falls below this raises instead of dividing.  Samplers
#: enforce a much wider margin (see ``thetacb.sampling``).
EVAL_GUARD = 1e-12


def _theta_ratio(num_args, den_args, p, guard: float):
    num = 1
    for z in num_args:
        num = num * theta(z, p)
    den = 1
    for z in den_args:
        t = theta(z, p)
        if abs(t) <= guard * (1 + abs(z)):
            raise DegenerateParameterError(f"denominator theta({z!r}) below guard")
        den = den * t
    return num / den


def elliptic_weight(pp: ParamPoint, i: int, j: int, guard: float = EVAL_GUARD):
    """East-step weight h(i, j): the eight-theta ratio above."""
    if i < 0 or j < 0:
        raise OutOfRegionError("weight indices must be nonnegative")
    x, a, b, c, q, p = pp.x, pp.a, pp.b, pp.c, pp.q, pp.p
    qi = q**i
    qij = q ** (i + j)
    return _theta_ratio(
        (b * c * q ** (i + 2 * j), (c / b) * qi, a * x * qi, (a / x) * qi),
        (a * b * qij, (a / b) * q ** (i - j), c * x * qij, (c / x) * qij),
        p,
        guard,
    )


def elliptic_weight_complement(pp: ParamPoint, i: int, j: int, guard: float = EVAL_GUARD):
    """Closed form of 1 - h(i, j), which equals h(j, i) with a and b
    exchanged.  Kept as an independent route for cross-checks; production
    paths compute 1 - elliptic_weight directly."""
    return elliptic_weight(pp.swap_ab(), j, i, guard)


def normalized_weight(pp: ParamPoint, i: int, j: int, guard: float = EVAL_GUARD):
    """Row-normalised weight H(i, j) = h(i, j) / h(i, 0)."""
    h_i0 = elliptic_weight(pp, i, 0, guard)
    if abs(h_i0) <= guard:
        raise HConditionError(f"h({i}, 0) vanished; H(i, j) undefined")
    if j == 0:
        return 1
    return elliptic_weight(pp, i, j, guard) / h_i0


def binomial_weight(a, b, q, p, s: int, t: int, guard: float = EVAL_GUARD):
    """Recursion weight W(s, t) of the (a, b)-elliptic binomial family:

        W(s, t) = theta(a q^(s+2t), b q^(2s), b q^(2s-1),
                        (a/b) q^(1-s), (a/b) q^(-s); p)
                / theta(a q^s, b q^(2s+t), b q^(2s+t-1),
                        (a/b) q^(1+t-s), (a/b) q^(t-s); p) * q^t.

    W(s, 0) = 1 exactly (coded fast path); the iterated limit p -> 0,
    a -> 0, b -> 0 recovers the plain q-weight q^t.
    """
    if s < 0 or t < 0:
        raise OutOfRegionError("weight indices must be nonnegative")
    if t == 0:
        return a * 0 + b * 0 + 1
    ab = a / b
    ratio = _theta_ratio(
        (a * q ** (s + 2 * t), b * q ** (2 * s), b * q ** (2 * s - 1),
         ab * q ** (1 - s), ab * q ** (-s)),
        (a * q**s, b * q ** (2 * s + t), b * q ** (2 * s + t - 1),
         ab * q ** (1 + t - s), ab * q ** (t - s)),
        p,
        guard,
    )
    return ratio * q**t


Step = Literal["east", "north"]


@dataclass(frozen=True)
class StepWeightSpec:
    """One unit step of a monotone lattice path: kind and start position."""

    kind: Step
    i: int
    j: int

    def __post_init__(self):
        if self.kind not in ("east", "north"):
            raise ValueError("step kind must be 'east' or 'north'")
        if self.i < 0 or self.j < 0:
            raise OutOfRegionError("step position must be nonnegative")


def step_weight(pp: ParamPoint, size: IdentitySize, spec: StepWeightSpec):
    """Weight of one step inside the (m+1) x (n+1) region.

    East steps at height j <= n carry h(i, j); along the top edge
    (j = n+1) they carry 1.  North steps at column i <= m carry
    1 - h(i, j); along the right edge (i = m+1) they carry 1.
    """
    m, n = size.m, size.n
    i, j = spec.i, spec.j
    if spec.kind == "east":
        if i > m or j > n + 1:
            raise OutOfRegionError(f"east step at ({i}, {j}) leaves the region")
        if j == n + 1:
            return 1
        return elliptic_weight(pp, i, j)
    if j > n or i > m + 1:
        raise OutOfRegionError(f"north step at ({i}, {j}) leaves the region")
    if i == m + 1:
        return 1
    return 1 - elliptic_weight(pp, i, j)
