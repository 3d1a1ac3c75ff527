"""Genericity scanning and randomized parameter sampling.

A parameter point is *generic* for truncation depths (m, n) when every
theta or q-factorial denominator reachable by the in-scope formulas keeps
a safe margin from zero, and the lattice-weight normalisation condition
(h(i, 0) away from 0, h(0, j) away from 1) holds.  Points failing the
scan are resampled, never silently evaluated.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from random import Random

from .errors import DegenerateParameterError, ResamplingExhaustedError
from .params import IdentitySize, ParamPoint
from .special import theta
from .weights import elliptic_weight

#: Default width of the denominator safety margin used while sampling.
DEFAULT_GUARD = 1e-6

#: Default resampling budget before giving up on a domain.
MAX_ATTEMPTS = 100


@dataclass(frozen=True)
class SamplingDomains:
    """Magnitude windows for the sampled parameters; arguments are always
    uniform on the circle."""

    mag_lo: float = 0.2
    mag_hi: float = 2.0
    q_lo: float = 0.3
    q_hi: float = 0.9
    p_lo: float = 0.05
    p_hi: float = 0.5


DEFAULT_DOMAINS = SamplingDomains()


def theta_margin(arg, p) -> float:
    """Scale-free magnitude |theta(arg; p)| / (1 + |arg|); ~0 near a zero.
    Arguments deep in a quasi-period make theta astronomically large;
    overflow therefore counts as an infinite (safe) margin."""
    if arg == 0:
        return 0.0
    try:
        return float(abs(theta(arg, p))) / (1.0 + float(abs(arg)))
    except OverflowError:
        return math.inf


def _denominator_args(pp: ParamPoint, m: int, n: int):
    """Arguments whose theta factors can appear in a denominator for
    truncation depths up to (m, n), including the a <-> b mirror and the
    shifted contexts used by the non-commutative expansions."""
    x, a, b, c, q = pp.x, pp.a, pp.b, pp.c, pp.q
    top = m + n + 1
    wide = 2 * (m + n) + 2
    for t in range(1, top + 2):
        yield q**t
    for t in range(top + 1):
        yield a * b * q**t
        yield c * x * q**t
        yield (c / x) * q**t
        yield a * c * q**t
        yield b * c * q**t
    for t in range(-(top + 1), top + 2):
        yield (a / b) * q**t
    for t in range(wide + 1):
        yield a * q**t
        yield b * q**t


def check_genericity(pp: ParamPoint, size: IdentitySize, guard: float = DEFAULT_GUARD) -> bool:
    """True when every reachable denominator keeps margin ``guard`` and the
    weight-normalisation condition holds with the same margin."""
    m, n = size.m, size.n
    tiny = 1e-12
    for z in (pp.x, pp.a, pp.b, pp.c, pp.q):
        if abs(z) < tiny:
            return False
    for arg in _denominator_args(pp, m, n):
        if theta_margin(arg, pp.p) <= guard:
            return False
    try:
        for i in range(m + 1):
            if abs(elliptic_weight(pp, i, 0)) <= guard:
                return False
        for j in range(n + 1):
            if abs(1 - elliptic_weight(pp, 0, j)) <= guard:
                return False
    except DegenerateParameterError:
        return False
    return True


def _unit_complex(rng: Random) -> complex:
    ang = rng.uniform(0.0, 2.0 * math.pi)
    return complex(math.cos(ang), math.sin(ang))


def _log_uniform(rng: Random, lo: float, hi: float) -> float:
    return math.exp(rng.uniform(math.log(lo), math.log(hi)))


def sample_param_point(
    rng: Random,
    size: IdentitySize,
    guard: float = DEFAULT_GUARD,
    domains: SamplingDomains = DEFAULT_DOMAINS,
    p_max: float | None = None,
    max_attempts: int = MAX_ATTEMPTS,
    precision_digits: int = 0,
) -> ParamPoint:
    """Draw a generic parameter point (log-uniform magnitudes, uniform
    arguments), resampling until the genericity scan passes.

    ``precision_digits`` > 0 converts the sampled scalars to ``mpmath.mpc``
    at that many decimal digits; the draw itself is identical, so reports
    stay reproducible across precision modes.
    """
    d = domains
    p_hi = d.p_hi if p_max is None else min(d.p_hi, p_max)
    for _ in range(max_attempts):
        pp = ParamPoint(
            x=_log_uniform(rng, d.mag_lo, d.mag_hi) * _unit_complex(rng),
            a=_log_uniform(rng, d.mag_lo, d.mag_hi) * _unit_complex(rng),
            b=_log_uniform(rng, d.mag_lo, d.mag_hi) * _unit_complex(rng),
            c=_log_uniform(rng, d.mag_lo, d.mag_hi) * _unit_complex(rng),
            q=_log_uniform(rng, d.q_lo, d.q_hi) * _unit_complex(rng),
            p=_log_uniform(rng, d.p_lo, p_hi) * _unit_complex(rng),
        )
        if check_genericity(pp, size, guard):
            if precision_digits > 0:
                pp = _to_mp(pp, precision_digits)
            return pp.replace(generic=True)
    raise ResamplingExhaustedError(
        f"no generic point found in {max_attempts} attempts (guard {guard})")


def _to_mp(pp: ParamPoint, digits: int) -> ParamPoint:
    import mpmath

    def conv(z):
        return mpmath.mpc(z.real, z.imag)

    return ParamPoint(conv(pp.x), conv(pp.a), conv(pp.b), conv(pp.c),
                      conv(pp.q), conv(pp.p), generic=pp.generic)
