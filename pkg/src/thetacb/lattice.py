"""Weighted monotone lattice paths on the rectangle {0..m+1} x {0..n+1}.

Three independent routes to the endpoint generating function A(k, l) are
provided: brute-force path enumeration, the two-term recurrence

    A(k, l) = h(k-1, l) A(k-1, l) + (1 - h(k, l-1)) A(k, l-1)

with boundary products, and fully factorised closed forms.  The module
also carries the normalised table B(k, l) = A(k, l)/(A(k, 0) A(0, l)),
its closed form, and the partition of unity

    1 = sum_k (1 - h(k, n)) A(k, n) + sum_l h(m, l) A(m, l)

obtained by splitting paths at their last free step.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations

from .errors import CapExceededError, HConditionError, OutOfRegionError
from .params import IdentitySize, ParamPoint
from .special import relative_residual, theta, theta_fact_prod
from .weights import EVAL_GUARD, elliptic_weight, step_weight, StepWeightSpec

#: Endpoints with m + n beyond this are refused by the brute-force routes.
BRUTE_FORCE_CAP = 12


@dataclass(frozen=True)
class LatticePath:
    """A monotone path encoded as a bit sequence, east = 1, north = 0."""

    steps: tuple[int, ...]

    def __post_init__(self):
        if any(s not in (0, 1) for s in self.steps):
            raise ValueError("steps must be 0 (north) or 1 (east)")

    @property
    def east_count(self) -> int:
        return sum(self.steps)

    @property
    def north_count(self) -> int:
        return len(self.steps) - self.east_count

    def positions(self):
        """Yield (i, j, step) for every step, starting from the origin."""
        i = j = 0
        for s in self.steps:
            yield i, j, s
            if s:
                i += 1
            else:
                j += 1

    @property
    def end(self) -> tuple[int, int]:
        return self.east_count, self.north_count


@lru_cache(maxsize=None)
def _bit_paths(east: int, north: int) -> tuple[tuple[int, ...], ...]:
    length = east + north
    out = []
    for pos in combinations(range(length), east):
        bits = [0] * length
        for t in pos:
            bits[t] = 1
        out.append(tuple(bits))
    return tuple(out)


def enumerate_paths(size: IdentitySize, cap: int = BRUTE_FORCE_CAP) -> list[LatticePath]:
    """All C(m+n+2, m+1) monotone paths from (0, 0) to (m+1, n+1)."""
    if size.m + size.n > cap:
        raise CapExceededError(f"m + n = {size.m + size.n} exceeds cap {cap}")
    return [LatticePath(bits) for bits in _bit_paths(size.m + 1, size.n + 1)]


def path_weight(pp: ParamPoint, size: IdentitySize, path: LatticePath):
    """Product of the step weights along one full path of the region."""
    if path.end != (size.m + 1, size.n + 1):
        raise OutOfRegionError(f"path ends at {path.end}, region needs "
                               f"({size.m + 1}, {size.n + 1})")
    acc = 1
    for i, j, s in path.positions():
        acc = acc * step_weight(pp, size, StepWeightSpec("east" if s else "north", i, j))
    return acc


@lru_cache(maxsize=65536)
def _h_value(pp: ParamPoint, i: int, j: int):
    # parameter points are frozen and hashable; memoising the pure weight
    # keeps repeated table builds for nested sizes from re-running eight
    # theta products per cell
    return elliptic_weight(pp, i, j)


def _h_table(pp: ParamPoint, m: int, n: int) -> list[list[complex]]:
    return [[_h_value(pp, i, j) for j in range(n + 1)] for i in range(m + 1)]


def total_weight(pp: ParamPoint, size: IdentitySize, cap: int = BRUTE_FORCE_CAP):
    """Brute-force sum of all path weights over the region; the weight
    assignment makes this exactly 1.  Weights are read from a precomputed
    h table, which matches the step_weight cases factor for factor."""
    total, _ = _total_weight_scaled(pp, size, cap)
    return total


def total_weight_residual(pp: ParamPoint, size: IdentitySize, cap: int = BRUTE_FORCE_CAP) -> float:
    """Relative residual of the brute-force partition of unity, normalised
    by the largest single path weight.  Individual path weights can reach
    1e8 at perfectly generic points, so the plain difference from 1 is
    dominated by summation rounding; the scale-aware form reflects the
    identity itself."""
    total, scale = _total_weight_scaled(pp, size, cap)
    return relative_residual(1, total, scale)


def _total_weight_scaled(pp: ParamPoint, size: IdentitySize, cap: int):
    m, n = size.m, size.n
    if m + n > cap:
        raise CapExceededError(f"m + n = {m + n} exceeds cap {cap}")
    h = _h_table(pp, m, n)
    total = 0
    scale = 0.0
    for bits in _bit_paths(m + 1, n + 1):
        acc = 1
        i = j = 0
        for s in bits:
            if s:
                if j <= n:
                    acc = acc * h[i][j]
                i += 1
            else:
                if i <= m:
                    acc = acc * (1 - h[i][j])
                j += 1
        total = total + acc
        scale = max(scale, abs(acc))
    return total, scale


def endpoint_weights(pp: ParamPoint, k: int, l: int, cap: int = BRUTE_FORCE_CAP):
    """Weights of every path from the origin to (k, l), one per path.

    The largest magnitude in this list is the natural cancellation scale
    for comparing the summed routes to A(k, l) in floating point.
    """
    if k + l > cap:
        raise CapExceededError(f"k + l = {k + l} exceeds cap {cap}")
    h = _h_table(pp, k, l)
    out = []
    for bits in _bit_paths(k, l):
        acc = 1
        i = j = 0
        for s in bits:
            acc = acc * (h[i][j] if s else 1 - h[i][j])
            if s:
                i += 1
            else:
                j += 1
        out.append(acc)
    return out


def a_bruteforce(pp: ParamPoint, k: int, l: int, cap: int = BRUTE_FORCE_CAP):
    """Generating function A(k, l) by enumerating every path to (k, l)."""
    total = 0
    for w in endpoint_weights(pp, k, l, cap):
        total = total + w
    return total


@dataclass(frozen=True)
class WeightTable:
    """DP tables over the grid {0..m} x {0..n}: a[k][l] is the endpoint
    generating function, b[k][l] the boundary-normalised form."""

    m: int
    n: int
    a: tuple[tuple[complex, ...], ...]
    b: tuple[tuple[complex, ...], ...]


def a_table_dp(pp: ParamPoint, size: IdentitySize, guard: float = EVAL_GUARD) -> WeightTable:
    """Fill A by its recurrence and B by its own difference system.

    A boundaries are the row/column products of h(i, 0) and 1 - h(0, j);
    B is driven by the quotient coefficients h(k-1, l)/h(k-1, 0) and
    (1 - h(k, l-1))/(1 - h(0, l-1)) with unit boundaries, so the two
    tables are produced by genuinely different recursions.
    """
    m, n = size.m, size.n
    h = _h_table(pp, m, n)
    for i in range(m + 1):
        if abs(h[i][0]) <= guard:
            raise HConditionError(f"h({i}, 0) vanished")
    for j in range(n + 1):
        if abs(1 - h[0][j]) <= guard:
            raise HConditionError(f"1 - h(0, {j}) vanished")

    a = [[None] * (n + 1) for _ in range(m + 1)]
    a[0][0] = 1
    for k in range(1, m + 1):
        a[k][0] = a[k - 1][0] * h[k - 1][0]
    for l in range(1, n + 1):
        a[0][l] = a[0][l - 1] * (1 - h[0][l - 1])
    for k in range(1, m + 1):
        for l in range(1, n + 1):
            a[k][l] = h[k - 1][l] * a[k - 1][l] + (1 - h[k][l - 1]) * a[k][l - 1]

    b = [[1] * (n + 1) for _ in range(m + 1)]
    for k in range(1, m + 1):
        for l in range(1, n + 1):
            b[k][l] = (h[k - 1][l] / h[k - 1][0]) * b[k - 1][l] \
                + ((1 - h[k][l - 1]) / (1 - h[0][l - 1])) * b[k][l - 1]

    return WeightTable(m, n, tuple(map(tuple, a)), tuple(map(tuple, b)))


def b_closed(pp: ParamPoint, k: int, l: int, guard: float = EVAL_GUARD):
    """Closed form of the normalised table:

        B(k, l) = theta((a/b) q^(k-l), b/a; p) (bc q^l; q, p)_k
                  (ac q^k, ab, cx, c/x, q^(k+1); q, p)_l
                / [theta((a/b) q^k, (b/a) q^l; p) (bc; q, p)_k
                   (ac, ab q^k, cx q^k, (c/x) q^k, q; q, p)_l] * q^l.

    The l = 0 boundary is the system's boundary condition B(k, 0) = 1 and
    is returned exactly; at k = 0 the value is computed (the factors only
    cancel through the theta inversion identity there).
    """
    if k < 0 or l < 0:
        raise OutOfRegionError("table indices must be nonnegative")
    if l == 0:
        return 1
    x, a, b, c, q, p = pp.x, pp.a, pp.b, pp.c, pp.q, pp.p
    qk = q**k
    num = theta((a / b) * q ** (k - l), p) * theta(b / a, p)
    num = num * theta_fact_prod((b * c * q**l,), q, p, k)
    num = num * theta_fact_prod((a * c * qk, a * b, c * x, c / x, q ** (k + 1)), q, p, l)
    den = theta((a / b) * qk, p) * theta((b / a) * q**l, p)
    den = den * theta_fact_prod((b * c,), q, p, k)
    den = den * theta_fact_prod((a * c, a * b * qk, c * x * qk, (c / x) * qk, q), q, p, l)
    if abs(den) <= guard:
        raise HConditionError("closed-form B denominator vanished")
    return num / den * q**l


def a_closed(pp: ParamPoint, k: int, l: int, guard: float = EVAL_GUARD):
    """First factorised closed form of A(k, l)."""
    if k < 0 or l < 0:
        raise OutOfRegionError("table indices must be nonnegative")
    x, a, b, c, q, p = pp.x, pp.a, pp.b, pp.c, pp.q, pp.p
    qk = q**k
    num = theta((a / b) * q ** (k - l), p)
    num = num * theta_fact_prod((b * c * q**l, c / b, a * x, a / x), q, p, k)
    num = num * theta_fact_prod((q ** (k + 1), a * c * qk, c / a, b * x, b / x), q, p, l)
    den = theta_fact_prod((a / b,), q, p, k + 1)
    den = den * theta_fact_prod((q, q * b / a), q, p, l)
    den = den * theta_fact_prod((a * b, c * x, c / x), q, p, k + l)
    if abs(den) <= guard:
        raise HConditionError("closed-form A denominator vanished")
    return num / den * q**l


def a_closed_alt(pp: ParamPoint, k: int, l: int, guard: float = EVAL_GUARD):
    """Second factorised closed form of A(k, l); differs from
    :func:`a_closed` by a theta inversion, so agreement is a real check."""
    if k < 0 or l < 0:
        raise OutOfRegionError("table indices must be nonnegative")
    x, a, b, c, q, p = pp.x, pp.a, pp.b, pp.c, pp.q, pp.p
    ql = q**l
    num = theta((b / a) * q ** (l - k), p)
    num = num * theta_fact_prod((a * c * q**k, c / a, b * x, b / x), q, p, l)
    num = num * theta_fact_prod((q ** (l + 1), b * c * ql, c / b, a * x, a / x), q, p, k)
    den = theta_fact_prod((b / a,), q, p, l + 1)
    den = den * theta_fact_prod((q, q * a / b), q, p, k)
    den = den * theta_fact_prod((a * b, c * x, c / x), q, p, l + k)
    if abs(den) <= guard:
        raise HConditionError("closed-form A denominator vanished")
    return num / den * q**k


def master_equality_total(pp: ParamPoint, size: IdentitySize):
    """The boundary split sum_k (1 - h(k, n)) A(k, n) + sum_l h(m, l) A(m, l)
    with A taken from the closed form; equals 1 when the identity holds."""
    m, n = size.m, size.n
    total = 0
    scale = 0.0
    for k in range(m + 1):
        term = (1 - elliptic_weight(pp, k, n)) * a_closed(pp, k, n)
        total = total + term
        scale = max(scale, abs(term))
    for l in range(n + 1):
        term = elliptic_weight(pp, m, l) * a_closed(pp, m, l)
        total = total + term
        scale = max(scale, abs(term))
    return total, scale


def master_equality_residual(pp: ParamPoint, size: IdentitySize) -> float:
    """Relative residual of the partition of unity over the two boundary
    sums, normalised by the largest term magnitude (floor 1)."""
    total, scale = master_equality_total(pp, size)
    return relative_residual(1, total, scale)
