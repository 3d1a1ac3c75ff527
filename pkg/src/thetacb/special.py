"""Scalar kernels: q-shifted factorials, the modified Jacobi theta
function, theta-shifted factorials and q-binomial coefficients.

Conventions used throughout the package:

    (x; q)_k        = prod_{l=0}^{k-1} (1 - x q^l),      (x; q)_0 = 1
    theta(x; p)     = prod_{k>=0} (1 - x p^k)(1 - (p/x) p^k)
    (x; q, p)_k     = prod_{l=0}^{k-1} theta(x q^l; p),  (x; q, p)_0 = 1
    [n, k]_q        = (q; q)_n / ((q; q)_k (q; q)_{n-k})

At p = 0 the theta function is the exact closed form 1 - x, which makes
(x; q, 0)_k collapse bit-for-bit onto (x; q)_k.

All functions are pure; they accept ``complex`` or ``mpmath.mpc`` scalars
and return the matching type.
"""

from __future__ import annotations

import cmath
import math

from .errors import DivergenceError, RootOfUnityError, ZeroArgumentError

#: Truncation control for infinite products: factors are kept while
#: |p|^k >= tol * (1 + |x|), which bounds the relative tail error by
#: roughly |x| * tol for arguments in the reduced annulus.  For mpmath
#: scalars the default follows the working precision instead (see
#: :func:`_default_tol`), so extended-precision runs are not truncation
#: limited.
DEFAULT_THETA_TOL = 1e-18

#: Below this magnitude a q-factorial denominator counts as vanished.
ROOT_OF_UNITY_GUARD = 1e-12


def qpoch(x, q, k: int):
    """q-shifted factorial (x; q)_k for nonnegative integer k."""
    if k < 0:
        raise ValueError("q-shifted factorial needs k >= 0")
    acc = 1
    xq = x
    for _ in range(k):
        acc = acc * (1 - xq)
        xq = xq * q
    return acc


def qpoch_prod(args, q, k: int):
    """Product of q-shifted factorials (x1, ..., xs; q)_k."""
    acc = 1
    for x in args:
        acc = acc * qpoch(x, q, k)
    return acc


def qpoch_inf(x, q, tol: float = 1e-15):
    """Convergent infinite product (x; q)_infinity, |q| < 1.

    The truncation point is chosen so the relative tail error
    sum_{j>=N} |x q^j| <= |x q^N| / (1 - |q|) stays below ``tol``.
    """
    aq = abs(q)
    if aq >= 1:
        raise DivergenceError("(x; q)_infinity diverges for |q| >= 1")
    bound = tol * (1 - aq)
    acc = 1
    xq = x
    while abs(xq) > bound:
        acc = acc * (1 - xq)
        xq = xq * q
    return acc


def _default_tol(x, p) -> float:
    if isinstance(x, complex) and isinstance(p, complex):
        return DEFAULT_THETA_TOL
    import mpmath

    return min(DEFAULT_THETA_TOL, float(mpmath.mp.eps) * 1e-2)


def theta(x, p, tol: float | None = None):
    """Modified Jacobi theta function theta(x; p) = (x, p/x; p)_infinity.

    p = 0 returns the exact closed form 1 - x.  For p != 0 the argument is
    first moved into the annulus |p|^(1/2) <= |x'| < |p|^(-1/2) with the
    quasi-periodicity theta(x; p) = (-1)^n x^n p^(n(n-1)/2) theta(p^n x; p),
    which keeps the truncated product accurate for very large or very
    small arguments.
    """
    if x == 0:
        raise ZeroArgumentError("theta(x; p) requires x != 0")
    if p == 0:
        return 1 - x
    ap = abs(p)
    if ap >= 1:
        raise DivergenceError("theta(x; p) requires |p| < 1")
    if tol is None:
        tol = _default_tol(x, p)

    n = round(-math.log(float(abs(x))) / math.log(float(ap)))
    pref = 1
    if n:
        e = n * (n - 1) // 2
        # The two power factors can overflow doubles separately even when
        # their product is representable; switch to log space when large.
        mag = abs(n) * abs(math.log(float(abs(x)))) + abs(e) * abs(math.log(float(ap)))
        if mag < 500.0:
            pref = (-1) ** n * x**n * p**e
        else:
            pref = (-1) ** n * _exp(n * _log(x) + e * _log(p))
        x = x * p**n

    stop = tol * (1 + float(abs(x)))
    acc = 1
    pk = 1
    px = p / x
    while abs(pk) >= stop:
        acc = acc * (1 - x * pk) * (1 - px * pk)
        pk = pk * p
    return pref * acc


def _log(z):
    if isinstance(z, complex):
        return cmath.log(z)
    import mpmath

    return mpmath.log(z)


def _exp(z):
    if isinstance(z, complex):
        return cmath.exp(z)
    import mpmath

    return mpmath.exp(z)


def theta_prod(args, p, tol: float | None = None):
    """Product of theta functions theta(x1, ..., xs; p)."""
    acc = 1
    for x in args:
        acc = acc * theta(x, p, tol)
    return acc


def theta_fact(x, q, p, k: int):
    """Theta-shifted factorial (x; q, p)_k = prod_{l<k} theta(x q^l; p).

    The p = 0 branch delegates to :func:`qpoch` so the degeneration is
    bit-for-bit exact, not merely close.
    """
    if k < 0:
        raise ValueError("theta-shifted factorial needs k >= 0")
    if p == 0:
        if x == 0 or (k > 1 and q == 0):
            raise ZeroArgumentError("theta-shifted factorial hit argument 0")
        return qpoch(x, q, k)
    acc = 1
    xq = x
    for _ in range(k):
        acc = acc * theta(xq, p)
        xq = xq * q
    return acc


def theta_fact_prod(args, q, p, k: int):
    """Product of theta-shifted factorials (x1, ..., xs; q, p)_k."""
    acc = 1
    for x in args:
        acc = acc * theta_fact(x, q, p, k)
    return acc


def qbinom(n: int, k: int, q):
    """q-binomial coefficient [n, k]_q; zero outside 0 <= k <= n.

    Computed as prod_{j=1}^{k} (1 - q^(n-k+j)) / (1 - q^j) after reducing
    k to min(k, n-k).  Raises if a denominator factor vanishes, i.e. q is
    numerically a root of unity of order <= n.
    """
    if n < 0:
        raise ValueError("q-binomial needs n >= 0")
    if k < 0 or k > n:
        return 0
    k = min(k, n - k)
    num = 1
    den = 1
    for j in range(1, k + 1):
        d = 1 - q**j
        if abs(d) < ROOT_OF_UNITY_GUARD:
            raise RootOfUnityError(f"1 - q^{j} vanished in q-binomial")
        num = num * (1 - q ** (n - k + j))
        den = den * d
    return num / den


def addition_formula_residual(x, y, u, v, p) -> float:
    """Relative residual of the four-term Weierstrass-Riemann relation

        theta(xy, x/y, uv, u/v; p) - theta(xv, x/v, uy, u/y; p)
            = (u/y) theta(yv, y/v, xu, x/u; p),

    normalised by the largest term magnitude.
    """
    t1 = theta_prod((x * y, x / y, u * v, u / v), p)
    t2 = theta_prod((x * v, x / v, u * y, u / y), p)
    t3 = (u / y) * theta_prod((y * v, y / v, x * u, x / u), p)
    scale = max(abs(t1), abs(t2), abs(t3))
    if scale == 0:
        return 0.0
    return float(abs(t1 - t2 - t3) / scale)


def relative_residual(lhs, rhs, *scales) -> float:
    """|lhs - rhs| / max(1, |lhs|, |rhs|, scales...).

    The floor of 1 keeps residuals meaningful when both sides are tiny;
    the extra scales let callers include intermediate term magnitudes so
    that cancellation between large terms is not mistaken for error.
    """
    denom = max(1.0, float(abs(lhs)), float(abs(rhs)), *(float(s) for s in scales))
    return float(abs(lhs - rhs)) / denom
