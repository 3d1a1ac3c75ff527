"""Direct evaluators and residual checks for the two-term expansions of
unity, from the classical binomial form up to the four-parameter elliptic
form, together with the limit arrows connecting neighbouring families.

Every family writes 1 as termA + termB where termB is the mirror of termA
(swap the truncation depths, and swap a with b where the family has them;
the classical mirror is x -> 1 - x).  Each family has its own direct
evaluator; limits between families appear only in the degeneration
checks, so identity truth and limit-rate estimation stay separate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DegenerateParameterError, UnknownIdentityError
from .params import ParamPoint
from .special import qbinom, qpoch, relative_residual, theta

#: Family names accepted by :func:`cb_residual`, most general first.
FAMILIES = ("elliptic", "abcq", "abq2", "abq1", "qcb", "classical")

_GUARD = 1e-12


def _guarded(value, what: str):
    if abs(value) <= _GUARD:
        raise DegenerateParameterError(f"{what} vanished")
    return value


def _sum_with_running_products(num_args, den_args, q, p, m: int, top_ratio):
    """sum_{k=0}^{m} top_ratio(k) * (num_args; q, p)_k / (den_args; q, p)_k * q^k
    with all factorials maintained as running products (theta at p = 0 is
    the exact form 1 - z, so the basic families reuse this path exactly).
    """
    num_cur = list(num_args)
    den_cur = list(den_args)
    run = 1
    qk = 1
    total = 0
    scale = 0.0
    for k in range(m + 1):
        if k:
            for idx, z in enumerate(num_cur):
                run = run * theta(z, p)
                num_cur[idx] = z * q
            for idx, z in enumerate(den_cur):
                run = run / _guarded(theta(z, p), f"series denominator theta({z!r})")
                den_cur[idx] = z * q
            qk = qk * q
        term = top_ratio(k) * run * qk
        total = total + term
        scale = max(scale, abs(term))
    return total, scale


def cb_term_elliptic(pp: ParamPoint, m: int, n: int):
    """The (m, n) addend of the four-parameter expansion of unity:

        (ac, c/a, bx, b/x; q, p)_{n+1} / (ab, b/a, cx, c/x; q, p)_{n+1}
        * sum_{k<=m} theta(ac q^(n+2k); p)/theta(ac q^n; p)
          * (ac q^n, bc q^n, c/b, q^(n+1), ax, a/x; q, p)_k
          / (q, aq/b, ab q^(n+1), ac, c q^(n+1)/x, cx q^(n+1); q, p)_k * q^k.

    At p = 0 every theta is the exact factor 1 - z, so this value *is* the
    (a, b, c; q)-family value, bit for bit.
    """
    x, a, b, c, q, p = pp.x, pp.a, pp.b, pp.c, pp.q, pp.p
    qn = q**n
    qn1 = qn * q

    pre_num = 1
    pre_den = 1
    num_cur = [a * c, c / a, b * x, b / x]
    den_cur = [a * b, b / a, c * x, c / x]
    for _ in range(n + 1):
        for idx, z in enumerate(num_cur):
            pre_num = pre_num * theta(z, p)
            num_cur[idx] = z * q
        for idx, z in enumerate(den_cur):
            pre_den = pre_den * _guarded(theta(z, p), f"prefactor theta({z!r})")
            den_cur[idx] = z * q

    th_ref = _guarded(theta(a * c * qn, p), "theta(ac q^n; p)")
    acq2 = a * c * qn
    q2 = q * q

    def top_ratio(k: int):
        return theta(acq2 * q2**k, p) / th_ref

    total, _ = _sum_with_running_products(
        (a * c * qn, b * c * qn, c / b, qn1, a * x, a / x),
        (q, a * q / b, a * b * qn1, a * c, c * qn1 / x, c * x * qn1),
        q, p, m, top_ratio)
    return pre_num / pre_den * total


def cb_term_abcq(pp: ParamPoint, m: int, n: int):
    """The (a, b, c; q)-family addend: the p = 0 closed form of
    :func:`cb_term_elliptic` (thetas collapse to 1 - z exactly)."""
    return cb_term_elliptic(pp.replace(p=0j), m, n)


def cb_term_abq2(pp: ParamPoint, m: int, n: int):
    """Second-kind two-parameter addend:

        (bx, b/x; q)_{n+1} / (ab, b/a; q)_{n+1}
        * sum_{k<=m} (q^(n+1), ax, a/x; q)_k / (q, aq/b, ab q^(n+1); q)_k * q^k.
    """
    x, a, b, q = pp.x, pp.a, pp.b, pp.q
    pre = qpoch(b * x, q, n + 1) * qpoch(b / x, q, n + 1)
    pre = pre / _guarded(qpoch(a * b, q, n + 1) * qpoch(b / a, q, n + 1),
                         "(ab, b/a; q)_{n+1}")
    total, _ = _sum_with_running_products(
        (q ** (n + 1), a * x, a / x),
        (q, a * q / b, a * b * q ** (n + 1)),
        q, 0j, m, lambda k: 1)
    return pre * total


def cb_term_abq1(x, a, b, q, m: int, n: int):
    """First-kind two-parameter addend:

        (bx; q)_{n+1} / (b/a; q)_{n+1}
        * sum_{k<=m} (q^(n+1), ax; q)_k / (q, aq/b; q)_k * q^k.

    The b variable is redundant (a -> ab, x -> x/b eliminates it) but kept
    for the a <-> b mirror symmetry.
    """
    pre = qpoch(b * x, q, n + 1) / _guarded(qpoch(b / a, q, n + 1), "(b/a; q)_{n+1}")
    total, _ = _sum_with_running_products(
        (q ** (n + 1), a * x), (q, a * q / b), q, 0j, m, lambda k: 1)
    return pre * total


def cb_terms_qcb(x, q, m: int, n: int):
    """Both addends of the one-parameter basic family:

        termA = (x; q)_{n+1} sum_{k<=m} [n+k, k]_q x^k
        termB = x^(m+1) sum_{k<=n} [m+k, k]_q q^k (x; q)_k.
    """
    total_a = 0
    xk = 1
    for k in range(m + 1):
        total_a = total_a + qbinom(n + k, k, q) * xk
        xk = xk * x
    term_a = qpoch(x, q, n + 1) * total_a

    total_b = 0
    run = 1
    qk = 1
    xq = x
    for k in range(n + 1):
        if k:
            run = run * (1 - xq)
            xq = xq * q
            qk = qk * q
        total_b = total_b + qbinom(m + k, k, q) * qk * run
    term_b = x ** (m + 1) * total_b
    return term_a, term_b


def cb_terms_classical(x, m: int, n: int):
    """Both addends of the classical form, with exact integer binomial
    coefficients promoted to complex only on multiplication:

        termA = (1-x)^(n+1) sum_{k<=m} C(n+k, k) x^k
        termB = x^(m+1) sum_{k<=n} C(m+k, k) (1-x)^k.
    """
    y = 1 - x
    total_a = 0
    xk = 1
    for k in range(m + 1):
        total_a = total_a + math.comb(n + k, k) * xk
        xk = xk * x
    term_a = y ** (n + 1) * total_a

    total_b = 0
    yk = 1
    for k in range(n + 1):
        total_b = total_b + math.comb(m + k, k) * yk
        yk = yk * y
    term_b = x ** (m + 1) * total_b
    return term_a, term_b


def cb_terms(family: str, pp: ParamPoint, m: int, n: int):
    """The (termA, termB) pair of the named family at the given point."""
    if family == "elliptic":
        return cb_term_elliptic(pp, m, n), cb_term_elliptic(pp.swap_ab(), n, m)
    if family == "abcq":
        return cb_term_abcq(pp, m, n), cb_term_abcq(pp.swap_ab(), n, m)
    if family == "abq2":
        return cb_term_abq2(pp, m, n), cb_term_abq2(pp.swap_ab(), n, m)
    if family == "abq1":
        return (cb_term_abq1(pp.x, pp.a, pp.b, pp.q, m, n),
                cb_term_abq1(pp.x, pp.b, pp.a, pp.q, n, m))
    if family == "qcb":
        return cb_terms_qcb(pp.x, pp.q, m, n)
    if family == "classical":
        return cb_terms_classical(pp.x, m, n)
    raise UnknownIdentityError(f"unknown family {family!r}; expected one of {FAMILIES}")


def cb_residual(family: str, pp: ParamPoint, m: int, n: int) -> float:
    """Relative residual |1 - termA - termB| of the named family,
    normalised by the larger term magnitude (floor 1)."""
    term_a, term_b = cb_terms(family, pp, m, n)
    return relative_residual(1, term_a + term_b, abs(term_a), abs(term_b))


def cb_variant_residual(x, m: int, n: int) -> float:
    """Residual of the signed variant obtained from the classical form by
    x -> x/(x-1) and clearing denominators:

        (1-x)^(m+n+1) = sum_{k<=m} C(n+k, k) (-1)^k x^k (1-x)^(m-k)
                        + (-1)^(m+1) x^(m+1) sum_{k<=n} C(m+k, k) (1-x)^(n-k).
    """
    y = 1 - x
    lhs = y ** (m + n + 1)
    term_a = 0
    sign = 1
    xk = 1
    for k in range(m + 1):
        term_a = term_a + math.comb(n + k, k) * sign * xk * y ** (m - k)
        sign = -sign
        xk = xk * x
    term_b = 0
    for k in range(n + 1):
        term_b = term_b + math.comb(m + k, k) * y ** (n - k)
    term_b = (-1) ** (m + 1) * x ** (m + 1) * term_b
    return relative_residual(lhs, term_a + term_b, abs(term_a), abs(term_b))


def cb_homogeneous_residual(x, y, m: int, n: int) -> float:
    """Residual of the two-variable homogeneous form:

        (x+y)^(m+n+1) = y^(n+1) sum_{k<=m} C(n+k, k) x^k (x+y)^(m-k)
                        + x^(m+1) sum_{k<=n} C(m+k, k) y^k (x+y)^(n-k).
    """
    s = x + y
    lhs = s ** (m + n + 1)
    term_a = 0
    xk = 1
    for k in range(m + 1):
        term_a = term_a + math.comb(n + k, k) * xk * s ** (m - k)
        xk = xk * x
    term_a = y ** (n + 1) * term_a
    term_b = 0
    yk = 1
    for k in range(n + 1):
        term_b = term_b + math.comb(m + k, k) * yk * s ** (n - k)
        yk = yk * y
    term_b = x ** (m + 1) * term_b
    return relative_residual(lhs, term_a + term_b, abs(term_a), abs(term_b))


#: Arrow names of the degeneration chain, most general first.
ARROWS = ("elliptic_to_abcq", "abcq_to_abq2", "abq2_to_abq1",
          "abq1_to_qcb", "qcb_to_classical")


@dataclass(frozen=True)
class DegenerationReport:
    """Absolute gaps |termA(limit point) - termA(target family)| for each
    arrow of the chain at one eps."""

    eps: float
    gaps: dict[str, float]

    def max_gap(self) -> float:
        return max(self.gaps.values())


def _unit(z):
    return z / abs(z)


def degeneration_consistency(pp: ParamPoint, m: int, n: int, eps: float) -> DegenerationReport:
    """Evaluate every arrow of the degeneration chain at distance eps.

    (i)   nome shrunk to |p| = eps          vs the (a, b, c; q) family,
    (ii)  |c| = eps                         vs the second two-parameter kind,
    (iii) a -> eps a, b -> b eps, x -> x/eps vs the first kind (gap is O(eps^2)),
    (iv)  x -> x/b at |b| = eps             vs the one-parameter family,
    (v)   q = 1 - eps                       vs the classical form.
    """
    x, a, b, c, q = pp.x, pp.a, pp.b, pp.c, pp.q
    gaps = {}

    p_small = eps * (_unit(pp.p) if pp.p != 0 else 1.0)
    gaps["elliptic_to_abcq"] = float(abs(
        cb_term_elliptic(pp.replace(p=p_small), m, n) - cb_term_abcq(pp, m, n)))

    c_small = eps * _unit(c)
    gaps["abcq_to_abq2"] = float(abs(
        cb_term_abcq(pp.replace(c=c_small, p=0j), m, n) - cb_term_abq2(pp, m, n)))

    delta = eps
    pp_delta = pp.replace(x=x / delta, a=delta * a, b=b * delta)
    gaps["abq2_to_abq1"] = float(abs(
        cb_term_abq2(pp_delta, m, n) - cb_term_abq1(x, a, b, q, m, n)))

    b_small = eps * _unit(b)
    qcb_a, _ = cb_terms_qcb(x, q, m, n)
    gaps["abq1_to_qcb"] = float(abs(
        cb_term_abq1(x / b_small, a, b_small, q, m, n) - qcb_a))

    q_near_1 = 1 - eps
    qcb_a_limit, _ = cb_terms_qcb(x, q_near_1, m, n)
    cl_a, _ = cb_terms_classical(x, m, n)
    gaps["qcb_to_classical"] = float(abs(qcb_a_limit - cl_a))

    return DegenerationReport(eps=eps, gaps=gaps)


def degeneration_decay(pp: ParamPoint, m: int, n: int,
                       eps0: float = 1e-3, halvings: int = 3) -> dict[str, list[float]]:
    """Gap sequences for eps0, eps0/2, ..., eps0/2^halvings; every arrow
    is first order or better, so consecutive gaps shrink by >= ~2x."""
    seqs: dict[str, list[float]] = {name: [] for name in ARROWS}
    eps = eps0
    for _ in range(halvings + 1):
        rep = degeneration_consistency(pp, m, n, eps)
        for name in ARROWS:
            seqs[name].append(rep.gaps[name])
        eps = eps / 2
    return seqs


def abq1_q_to_1_gap(x, a, b, eps: float, m: int, n: int) -> float:
    """Gap between the first-kind addend at q = 1 - eps and the classical
    addend at the substituted argument x' = (1 - ax)/(1 - a/b); the q -> 1
    limit of the first-kind family is the classical identity in x'."""
    val = cb_term_abq1(x, a, b, 1 - eps, m, n)
    x_sub = (1 - a * x) / (1 - a / b)
    cl_a, _ = cb_terms_classical(x_sub, m, n)
    return float(abs(val - cl_a))


@dataclass(frozen=True)
class IdentityReport:
    """Outcome of one residual trial; ``verdict`` is True iff the residual
    met the tolerance."""

    identity: str
    params: ParamPoint
    m: int
    n: int
    residual: float
    tolerance: float
    verdict: bool

    def __post_init__(self):
        if self.verdict != (self.residual <= self.tolerance):
            raise ValueError("verdict inconsistent with residual/tolerance")

    @classmethod
    def from_residual(cls, identity: str, params: ParamPoint, m: int, n: int,
                      residual: float, tolerance: float) -> "IdentityReport":
        return cls(identity, params, m, n, float(residual), float(tolerance),
                   residual <= tolerance)

    def to_record(self) -> dict:
        pp = self.params
        return {
            "identity": self.identity,
            "m": self.m,
            "n": self.n,
            "params": {name: _scalar_pair(getattr(pp, name))
                       for name in ("x", "a", "b", "c", "q", "p")},
            "residual": self.residual,
            "tolerance": self.tolerance,
            "verdict": "pass" if self.verdict else "fail",
        }

    @classmethod
    def from_record(cls, rec: dict) -> "IdentityReport":
        par = {name: _pair_scalar(rec["params"][name])
               for name in ("x", "a", "b", "c", "q", "p")}
        return cls(rec["identity"], ParamPoint(**par), rec["m"], rec["n"],
                   rec["residual"], rec["tolerance"], rec["verdict"] == "pass")


def _scalar_pair(z):
    if isinstance(z, complex):
        return [z.real, z.imag]
    return [str(z.real), str(z.imag)]  # mpmath scalars keep full precision


def _pair_scalar(pair):
    re, im = pair
    if isinstance(re, str):
        import mpmath

        return mpmath.mpc(re, im)
    return complex(re, im)
