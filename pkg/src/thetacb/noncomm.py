"""Normal-form engines for three non-commutative X, Y algebras and the
binomial/convolution identities they satisfy.

Each algebra is generated by X, Y over a commutative coefficient field,
with a reordering rule Y X = w * X Y and substitution rules describing how
X and Y commute past a coefficient:

    q-commuting:      w = q,            coefficients are constants
    (a, b)-elliptic:  w = W(1, 1),      X f(a, b) = f(aq, bq^2) X,
                                        Y f(a, b) = f(aq^2, bq) Y
    (x,a,b,c)-elliptic: w = H(0, 1),    X f = f(x, aq, b, cq) X,
                                        Y f = f(x, a, bq, cq) Y

Every element has a unique normal form sum f_kl X^k Y^l.  Coefficients are
kept as lazy expression trees carrying an integer substitution state
(alpha, beta, gamma) for (a, b, c) -> (a q^alpha, b q^beta, c q^gamma), so
moving a generator past a coefficient is an O(1) shift update and the
commutation rules stay auditably exact; numbers appear only when a
normal form is evaluated at a parameter point.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache
from .errors import DegenerateParameterError
from .lattice import b_closed
from .params import ParamPoint
from .special import qbinom, theta, theta_fact_prod
from .weights import binomial_weight, elliptic_weight, normalized_weight

#: Coefficients below this fraction of the row maximum count as structural
#: zeros when two normal forms are compared.
STRUCTURAL_ZERO = 1e-14


# ---------------------------------------------------------------------------
# Elliptic binomial coefficients of both kinds.

def elliptic_binomial(a, b, q, p, n: int, k: int):
    """Two-parameter elliptic binomial coefficient

        [n, k]_(a,b) = (q^(1+k), a q^(1+k), b q^(1+k), a q^(1-k)/b; q, p)_(n-k)
                     / (q, aq, b q^(1+2k), aq/b; q, p)_(n-k),

    zero outside 0 <= k <= n and exactly 1 on the boundary (coded, not
    computed).  Reduces to [n, k]_q under p -> 0, a -> 0, then b -> 0.
    """
    if k < 0 or k > n:
        return 0
    if k == 0 or k == n:
        return 1
    ab = a / b
    num = theta_fact_prod(
        (q ** (1 + k), a * q ** (1 + k), b * q ** (1 + k), ab * q ** (1 - k)),
        q, p, n - k)
    den = theta_fact_prod((q, a * q, b * q ** (1 + 2 * k), ab * q), q, p, n - k)
    if abs(den) == 0:
        raise DegenerateParameterError("elliptic binomial denominator vanished")
    return num / den


def path_binomial(pp: ParamPoint, n: int, k: int):
    """Four-parameter elliptic binomial coefficient: the normalised
    generating function B(k, n-k) of weighted paths to (k, n-k); zero
    outside 0 <= k <= n, exactly 1 on the boundary."""
    if k < 0 or k > n:
        return 0
    if k == 0 or k == n:
        return 1
    return b_closed(pp, k, n - k)


def elliptic_binomial_recursion_residual(a, b, q, p, n: int, k: int) -> float:
    """Residual of [n+1, k] = [n, k] + [n, k-1] W(k, n+1-k)."""
    lhs = elliptic_binomial(a, b, q, p, n + 1, k)
    rhs = elliptic_binomial(a, b, q, p, n, k)
    if 0 < k <= n + 1:
        rhs = rhs + elliptic_binomial(a, b, q, p, n, k - 1) \
            * binomial_weight(a, b, q, p, k, n + 1 - k)
    return float(abs(lhs - rhs) / max(1.0, abs(lhs), abs(rhs)))


def path_binomial_recursion_residual(pp: ParamPoint, n: int, k: int) -> float:
    """Residual of the mixed-weight recursion

        [n+1, k] = [n, k-1] H(k-1, n+1-k) + [n, k] H~(n-k, k),

    where H~ reads the weight with a and b exchanged."""
    lhs = path_binomial(pp, n + 1, k)
    rhs = 0
    if 0 < k <= n + 1:
        rhs = rhs + path_binomial(pp, n, k - 1) * normalized_weight(pp, k - 1, n + 1 - k)
    if k <= n:
        rhs = rhs + path_binomial(pp, n, k) * normalized_weight(pp.swap_ab(), n - k, k)
    return float(abs(lhs - rhs) / max(1.0, abs(lhs), abs(rhs)))


# ---------------------------------------------------------------------------
# Lazy coefficients with substitution state.

class _Const:
    __slots__ = ("value",)

    def __init__(self, value):
        self.value = value


class _Leaf:
    __slots__ = ("key", "fn")

    def __init__(self, key, fn):
        self.key = key
        self.fn = fn


class _Prod:
    __slots__ = ("left", "right")

    def __init__(self, left, right):
        self.left = left
        self.right = right


class _Sum:
    __slots__ = ("parts",)

    def __init__(self, parts):
        self.parts = parts


_ZERO_SHIFT = (0, 0, 0)


@dataclass(frozen=True)
class Coefficient:
    """A member of the coefficient field: an expression tree plus the
    pending substitution (a, b, c) -> (a q^alpha, b q^beta, c q^gamma).
    Shifts compose additively and distribute over products and sums."""

    node: object
    shift: tuple[int, int, int] = _ZERO_SHIFT

    def shifted(self, delta: tuple[int, int, int]) -> "Coefficient":
        if delta == _ZERO_SHIFT:
            return self
        s = self.shift
        return Coefficient(self.node, (s[0] + delta[0], s[1] + delta[1], s[2] + delta[2]))

    def is_zero(self) -> bool:
        return isinstance(self.node, _Const) and self.node.value == 0

    def __mul__(self, other: "Coefficient") -> "Coefficient":
        if isinstance(self.node, _Const) and self.shift == _ZERO_SHIFT:
            if self.node.value == 0:
                return self
            if self.node.value == 1:
                return other
        if isinstance(other.node, _Const) and other.shift == _ZERO_SHIFT:
            if other.node.value == 0:
                return other
            if other.node.value == 1:
                return self
        return Coefficient(_Prod(self, other))

    def __add__(self, other: "Coefficient") -> "Coefficient":
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        return Coefficient(_Sum((self, other)))


def coeff_const(value) -> Coefficient:
    return Coefficient(_Const(value))


COEFF_ONE = coeff_const(1)
COEFF_ZERO = coeff_const(0)


def coeff_qpow(e: int) -> Coefficient:
    """The constant q^e (unaffected by substitution of a, b, c)."""
    return Coefficient(_Leaf(("qpow", e), lambda pp, s: pp.q**e))


def _shifted_pp(pp: ParamPoint, s, swap: bool) -> ParamPoint:
    out = pp.shift(*s)
    return out.swap_ab() if swap else out


def coeff_h(i: int, j: int, swap: bool = False) -> Coefficient:
    """The lattice weight h(i, j) as a field element; ``swap`` reads the
    weight with the roles of a and b exchanged (after substitution)."""
    return Coefficient(_Leaf(
        ("h", i, j, swap),
        lambda pp, s: elliptic_weight(_shifted_pp(pp, s, swap), i, j)))


def coeff_big_h(i: int, j: int, swap: bool = False) -> Coefficient:
    """The normalised weight H(i, j) as a field element."""
    return Coefficient(_Leaf(
        ("H", i, j, swap),
        lambda pp, s: normalized_weight(_shifted_pp(pp, s, swap), i, j)))


def coeff_path_binomial(n: int, k: int) -> Coefficient:
    """The four-parameter elliptic binomial as a field element."""
    return Coefficient(_Leaf(
        ("pbin", n, k),
        lambda pp, s: path_binomial(pp.shift(*s), n, k)))


def coeff_elliptic_binomial(n: int, k: int) -> Coefficient:
    """The two-parameter elliptic binomial as a field element."""
    return Coefficient(_Leaf(
        ("wbin", n, k),
        lambda pp, s: elliptic_binomial(*_ab_of(pp.shift(*s)), n, k)))


def coeff_binomial_weight(s_idx: int, t_idx: int) -> Coefficient:
    """The recursion weight W(s, t) as a field element."""
    return Coefficient(_Leaf(
        ("W", s_idx, t_idx),
        lambda pp, s: binomial_weight(*_ab_of(pp.shift(*s)), s_idx, t_idx)))


def _ab_of(pp: ParamPoint):
    return pp.a, pp.b, pp.q, pp.p


class EvalContext:
    """Memoised evaluator for coefficient trees at one parameter point.

    Leaves are cached by (key, total shift) so repeated theta-heavy
    weights are computed once per substitution state; composite nodes are
    cached by identity, which is safe because the context keeps every
    cached node alive.
    """

    def __init__(self, pp: ParamPoint):
        self.pp = pp
        self._memo: dict = {}

    def value(self, coeff: Coefficient, outer: tuple[int, int, int] = _ZERO_SHIFT):
        s = coeff.shift
        total = (outer[0] + s[0], outer[1] + s[1], outer[2] + s[2])
        node = coeff.node
        if isinstance(node, _Const):
            return node.value
        if isinstance(node, _Leaf):
            key = (node.key, total)
        else:
            key = (id(node), total)
        hit = self._memo.get(key)
        if hit is not None:
            return hit[1]
        if isinstance(node, _Leaf):
            val = node.fn(self.pp, total)
        elif isinstance(node, _Prod):
            val = self.value(node.left, total) * self.value(node.right, total)
        else:
            val = 0
            for part in node.parts:
                val = val + self.value(part, total)
        self._memo[key] = (node, val)
        return val


# ---------------------------------------------------------------------------
# The three algebras and normal forms.

class AlgebraTag(enum.Enum):
    Q_COMMUTING = "q_commuting"
    ELLIPTIC_AB = "elliptic_ab"
    ELLIPTIC_XABC = "elliptic_xabc"

    @property
    def x_shift(self) -> tuple[int, int, int]:
        return _X_SHIFT[self]

    @property
    def y_shift(self) -> tuple[int, int, int]:
        return _Y_SHIFT[self]

    @property
    def yx_coefficient(self) -> Coefficient:
        return _YX[self]


_X_SHIFT = {
    AlgebraTag.Q_COMMUTING: _ZERO_SHIFT,
    AlgebraTag.ELLIPTIC_AB: (1, 2, 0),
    AlgebraTag.ELLIPTIC_XABC: (1, 0, 1),
}
_Y_SHIFT = {
    AlgebraTag.Q_COMMUTING: _ZERO_SHIFT,
    AlgebraTag.ELLIPTIC_AB: (2, 1, 0),
    AlgebraTag.ELLIPTIC_XABC: (0, 1, 1),
}
_YX = {
    AlgebraTag.Q_COMMUTING: coeff_qpow(1),
    AlgebraTag.ELLIPTIC_AB: coeff_binomial_weight(1, 1),
    AlgebraTag.ELLIPTIC_XABC: coeff_big_h(0, 1),
}


@lru_cache(maxsize=None)
def reorder_coefficient(tag: AlgebraTag, s: int, r: int) -> Coefficient:
    """The field element C(s, r) with Y^s X^r = C(s, r) X^r Y^s, built
    from the elementary rule alone: the product over i < r, j < s of the
    base YX coefficient shifted by i steps of X and j steps of Y."""
    if tag is AlgebraTag.Q_COMMUTING:
        return coeff_qpow(s * r) if s * r else COEFF_ONE
    dx, dy = tag.x_shift, tag.y_shift
    base = tag.yx_coefficient
    out = COEFF_ONE
    for j in range(s):
        for i in range(r):
            delta = (i * dx[0] + j * dy[0], i * dx[1] + j * dy[1], i * dx[2] + j * dy[2])
            out = out * base.shifted(delta)
    return out


@dataclass(frozen=True)
class NormalFormElement:
    """A finite sum f_kl X^k Y^l in normal form; ``terms`` maps exponent
    pairs to field coefficients, with structural zeros pruned."""

    tag: AlgebraTag
    terms: tuple[tuple[tuple[int, int], Coefficient], ...]

    def coefficient(self, k: int, l: int) -> Coefficient:
        for key, c in self.terms:
            if key == (k, l):
                return c
        return COEFF_ZERO


def nf_element(tag: AlgebraTag, mapping: dict) -> NormalFormElement:
    items = tuple(sorted(
        ((key, c) for key, c in mapping.items() if not c.is_zero()),
        key=lambda item: item[0]))
    for (k, l), _ in items:
        if k < 0 or l < 0:
            raise ValueError("normal-form exponents must be nonnegative")
    return NormalFormElement(tag, items)


def nf_unit(tag: AlgebraTag) -> NormalFormElement:
    return nf_element(tag, {(0, 0): COEFF_ONE})


def nf_monomial(tag: AlgebraTag, k: int, l: int,
                coeff: Coefficient = COEFF_ONE) -> NormalFormElement:
    return nf_element(tag, {(k, l): coeff})


def nf_add(e1: NormalFormElement, e2: NormalFormElement) -> NormalFormElement:
    if e1.tag is not e2.tag:
        raise ValueError("cannot add elements of different algebras")
    out = dict(e1.terms)
    for key, c in e2.terms:
        out[key] = out[key] + c if key in out else c
    return nf_element(e1.tag, out)


def nf_scale(e: NormalFormElement, coeff: Coefficient) -> NormalFormElement:
    """Left-multiply by a field element (which stays left of all X, Y)."""
    return nf_element(e.tag, {key: coeff * c for key, c in e.terms})


def nf_mul(e1: NormalFormElement, e2: NormalFormElement) -> NormalFormElement:
    """Normal form of the product: every cross term

        f X^k1 Y^l1 * g X^k2 Y^l2
            = f * g[shift k1*dX + l1*dY] * C(l1, k2)[shift k1*dX]
              X^(k1+k2) Y^(l1+l2)

    obtained by commuting g and then the reorder coefficient past the
    leading generators of the left factor.
    """
    if e1.tag is not e2.tag:
        raise ValueError("cannot multiply elements of different algebras")
    tag = e1.tag
    dx, dy = tag.x_shift, tag.y_shift
    out: dict = {}
    for (k1, l1), f in e1.terms:
        move = (k1 * dx[0] + l1 * dy[0], k1 * dx[1] + l1 * dy[1], k1 * dx[2] + l1 * dy[2])
        xmove = (k1 * dx[0], k1 * dx[1], k1 * dx[2])
        for (k2, l2), g in e2.terms:
            c = f * g.shifted(move)
            if l1 and k2:
                c = c * reorder_coefficient(tag, l1, k2).shifted(xmove)
            key = (k1 + k2, l1 + l2)
            out[key] = out[key] + c if key in out else c
    return nf_element(tag, out)


def nf_pow(e: NormalFormElement, n: int) -> NormalFormElement:
    out = nf_unit(e.tag)
    for _ in range(n):
        out = nf_mul(out, e)
    return out


def evaluate_element(e: NormalFormElement, pp: ParamPoint,
                     ctx: EvalContext | None = None) -> dict:
    """Numeric normal-form coefficients {(k, l): value} at one point."""
    if ctx is None:
        ctx = EvalContext(pp)
    return {key: ctx.value(c) for key, c in e.terms}


def binomial_base(tag: AlgebraTag) -> NormalFormElement:
    """The binomial whose powers have factorising normal forms: X + Y in
    the q-commuting and (a, b)-elliptic algebras, X + h~(0,0) Y in the
    four-parameter algebra (h~ is the weight with a and b exchanged)."""
    if tag is AlgebraTag.ELLIPTIC_XABC:
        return nf_element(tag, {(1, 0): COEFF_ONE, (0, 1): coeff_h(0, 0, swap=True)})
    return nf_element(tag, {(1, 0): COEFF_ONE, (0, 1): COEFF_ONE})


def binomial_power(tag: AlgebraTag, pp: ParamPoint, n: int) -> NormalFormElement:
    """Normal form of the n-th power of :func:`binomial_base`.

    The point is used to reject degenerate bases up front (the four-
    parameter base weight must be evaluable); coefficients themselves stay
    lazy and surface degeneracies when evaluated.
    """
    base = binomial_base(tag)
    if tag is AlgebraTag.ELLIPTIC_XABC:
        elliptic_weight(pp.swap_ab(), 0, 0)
    return nf_pow(base, n)


def compare_maps(map1: dict, map2: dict) -> float:
    """Worst relative gap between two coefficient maps; entries below
    STRUCTURAL_ZERO of the row maximum count as structural zeros."""
    keys = set(map1) | set(map2)
    if not keys:
        return 0.0
    row = max([abs(v) for v in map1.values()] + [abs(v) for v in map2.values()],
              default=0.0)
    if row == 0:
        return 0.0
    worst = 0.0
    for key in keys:
        v1 = map1.get(key, 0)
        v2 = map2.get(key, 0)
        big = max(abs(v1), abs(v2))
        if big <= STRUCTURAL_ZERO * row:
            continue
        worst = max(worst, float(abs(v1 - v2) / big))
    return worst


# ---------------------------------------------------------------------------
# Verification drivers.

def _report(identity, pp, m, n, residual, tol):
    from .identities import IdentityReport

    return IdentityReport.from_residual(identity, pp, m, n, residual, tol)


def closed_binomial_coefficients(tag: AlgebraTag, pp: ParamPoint, n: int,
                                 ctx: EvalContext) -> dict:
    """The factorised normal-form coefficients the binomial theorems
    assert for binomial_base(tag)^n, keyed like evaluate_element."""
    out = {}
    if tag is AlgebraTag.Q_COMMUTING:
        for k in range(n + 1):
            out[(k, n - k)] = qbinom(n, k, pp.q)
    elif tag is AlgebraTag.ELLIPTIC_AB:
        for k in range(n + 1):
            out[(k, n - k)] = elliptic_binomial(pp.a, pp.b, pp.q, pp.p, n, k)
    else:
        swapped = pp.swap_ab()
        prods = [1]
        for j in range(n):
            prods.append(prods[-1] * elliptic_weight(swapped, j, 0))
        for k in range(n + 1):
            out[(k, n - k)] = path_binomial(pp, n, k) * prods[n - k]
    return out


def verify_binomial_theorems(pp: ParamPoint, n_max: int,
                             tol: float = 1e-9) -> list:
    """Expand binomial_base(tag)^n by repeated normal-form multiplication
    and compare against the closed coefficient formulas, for every algebra
    and every n <= n_max."""
    reports = []
    for tag in AlgebraTag:
        ctx = EvalContext(pp)
        power = nf_unit(tag)
        base = binomial_base(tag)
        for n in range(n_max + 1):
            if n:
                power = nf_mul(power, base)
            expanded = evaluate_element(power, pp, ctx)
            closed = closed_binomial_coefficients(tag, pp, n, ctx)
            residual = compare_maps(expanded, closed)
            reports.append(_report(f"binomial_theorem_{tag.value}", pp, n, 0,
                                   residual, tol))
    return reports


def _homogeneous_rhs(tag: AlgebraTag, m: int, n: int) -> NormalFormElement:
    """Right-hand side of the homogeneous two-sum expansion of
    binomial_base^(m+n+1) in the given algebra."""
    base = binomial_base(tag)
    powers = [nf_unit(tag)]
    for _ in range(max(m, n)):
        powers.append(nf_mul(powers[-1], base))

    total = nf_element(tag, {})
    if tag is AlgebraTag.Q_COMMUTING:
        # Y^(n+1) sum_k [n+k,k]_q q^(-(n+1)k) X^k (X+Y)^(m-k)
        # + X^(m+1) sum_k [m+k,k]_(1/q) q^((m+1)k) Y^k (X+Y)^(n-k);
        # the leading Y block does not commute freely with X^k, so the
        # first sum is built as an explicit product.
        y_head = nf_monomial(tag, 0, n + 1)
        for k in range(m + 1):
            term = nf_mul(y_head, nf_mul(nf_monomial(tag, k, 0), powers[m - k]))
            term = nf_scale(term, coeff_qpow(-(n + 1) * k))
            term = nf_scale(term, Coefficient(_Leaf(("qbinom", n + k, k),
                                                    lambda pp, s, nn=n + k, kk=k: qbinom(nn, kk, pp.q))))
            total = nf_add(total, term)
        for k in range(n + 1):
            term = nf_mul(nf_monomial(tag, m + 1, k), powers[n - k])
            term = nf_scale(term, coeff_qpow((m + 1) * k))
            term = nf_scale(term, Coefficient(_Leaf(("qbinom_inv", m + k, k),
                                                    lambda pp, s, nn=m + k, kk=k: qbinom(nn, kk, 1 / pp.q))))
            total = nf_add(total, term)
        return total

    if tag is AlgebraTag.ELLIPTIC_AB:
        for k in range(m + 1):
            head = nf_monomial(tag, k, n + 1)
            term = nf_mul(head, powers[m - k])
            term = nf_scale(term, coeff_elliptic_binomial(n + k, k))
            total = nf_add(total, term)
        for k in range(n + 1):
            head = nf_monomial(tag, m + 1, k)
            term = nf_mul(head, powers[n - k])
            term = nf_scale(term, coeff_elliptic_binomial(m + k, m)
                            * coeff_binomial_weight(m + 1, k))
            total = nf_add(total, term)
        return total

    # Splitting each length-(m+n+1) word at its (n+1)-th Y gives the first
    # sum; splitting at the (m+1)-th X gives the second.  Moving that X
    # past the k leading Y's of the tail costs the telescoped reorder
    # factor H(m, k), without which the expansion fails for every k >= 1.
    swap_prod = [COEFF_ONE]
    for j in range(max(m, n) + 1):
        swap_prod.append(swap_prod[-1] * coeff_h(j, 0, swap=True))
    for k in range(m + 1):
        head = nf_monomial(tag, k, n + 1)
        term = nf_mul(head, powers[m - k])
        left = coeff_path_binomial(n + k, k) * swap_prod[n] * coeff_h(n, k, swap=True)
        term = nf_scale(term, left)
        total = nf_add(total, term)
    for k in range(n + 1):
        head = nf_monomial(tag, m + 1, k)
        term = nf_mul(head, powers[n - k])
        left = coeff_path_binomial(m + k, m) * swap_prod[k]
        if k:
            left = left * coeff_big_h(m, k)
        term = nf_scale(term, left)
        total = nf_add(total, term)
    return total


def _qcomm_swap_image(values: dict, q) -> dict:
    """Numeric image of a q-commuting normal form under X <-> Y with the
    base inverted: X^k Y^l evaluated at 1/q maps to q^(k l) X^l Y^k."""
    return {(l, k): v * q ** (k * l) for (k, l), v in values.items()}


def verify_homogeneous_cb(tag: AlgebraTag, pp: ParamPoint, m: int, n: int,
                          tol: float = 1e-9):
    """Expand both sides of the homogeneous two-sum identity to normal
    form and compare coefficients.

    For the q-commuting algebra the identity is additionally invariant
    under (X, Y, q, m, n) -> (Y, X, 1/q, n, m); the check maps the
    expansion at (1/q, n, m) through the swap isomorphism and compares it
    with the direct expansion, for both sides.
    """
    lhs = nf_pow(binomial_base(tag), m + n + 1)
    rhs = _homogeneous_rhs(tag, m, n)
    ctx = EvalContext(pp)
    residual = compare_maps(evaluate_element(lhs, pp, ctx),
                            evaluate_element(rhs, pp, ctx))

    if tag is AlgebraTag.Q_COMMUTING:
        pp_inv = pp.replace(q=1 / pp.q)
        ctx_inv = EvalContext(pp_inv)
        lhs_sw = nf_pow(binomial_base(tag), m + n + 1)
        rhs_sw = _homogeneous_rhs(tag, n, m)
        lhs_img = _qcomm_swap_image(evaluate_element(lhs_sw, pp_inv, ctx_inv), pp.q)
        rhs_img = _qcomm_swap_image(evaluate_element(rhs_sw, pp_inv, ctx_inv), pp.q)
        residual = max(residual,
                       compare_maps(lhs_img, evaluate_element(lhs, pp, ctx)),
                       compare_maps(rhs_img, evaluate_element(rhs, pp, ctx)))

    return _report(f"homogeneous_cb_{tag.value}", pp, m, n, residual, tol)


# ---------------------------------------------------------------------------
# Convolution and the terminating very-well-poised sum.

def _swap_weight_products(pp: ParamPoint, count: int, start: int = 0, row: int = 0):
    """prod_{s<count} h~(start + s, row) with h~ the a<->b swapped weight."""
    swapped = pp.swap_ab()
    acc = 1
    for s in range(count):
        acc = acc * elliptic_weight(swapped, start + s, row)
    return acc


def convolution_residual(pp: ParamPoint, n: int, m: int, k: int) -> float:
    """Residual of the elliptic binomial convolution

        [n+m, k] prod_{j<n+m-k} h~(j, 0)
          = sum_j [n, j] [m, k-j]@(a q^j, b q^(n-j), c q^n)
            prod_{l<n-j} h~(l, 0) prod_{s<m+j-k} h~(s+n-j, j)
            prod_{i<k-j} H(i+j, n-j),

    which splits a (n+m)-step binomial expansion at step n.
    """
    if k < 0 or k > n + m:
        raise ValueError("need 0 <= k <= n + m")
    lhs = path_binomial(pp, n + m, k) * _swap_weight_products(pp, n + m - k)
    total = 0
    scale = abs(lhs)
    for j in range(max(0, k - m), min(k, n) + 1):
        term = path_binomial(pp, n, j)
        term = term * path_binomial(pp.shift(j, n - j, n), m, k - j)
        term = term * _swap_weight_products(pp, n - j)
        term = term * _swap_weight_products(pp, m + j - k, start=n - j, row=j)
        for i in range(k - j):
            term = term * normalized_weight(pp, i + j, n - j)
        total = total + term
        scale = max(scale, abs(term))
    return float(abs(lhs - total) / max(1.0, scale))


def convolution_nf_cross_check(pp: ParamPoint, n: int, m: int, k: int) -> float:
    """The proof route: the (k, n+m-k) coefficient of the product of the
    n-th and m-th binomial powers must match the one of the (n+m)-th."""
    tag = AlgebraTag.ELLIPTIC_XABC
    ctx = EvalContext(pp)
    prod = nf_mul(binomial_power(tag, pp, n), binomial_power(tag, pp, m))
    whole = binomial_power(tag, pp, n + m)
    v1 = ctx.value(prod.coefficient(k, n + m - k))
    v2 = ctx.value(whole.coefficient(k, n + m - k))
    return float(abs(v1 - v2) / max(1.0, abs(v1), abs(v2)))


def frenkel_turaev(a, b, c, d, n: int, q, p, guard: float = 1e-12):
    """Both sides of the terminating very-well-poised 10V9 summation with
    e = a^2 q^(n+1) / (bcd) enforcing the balancing condition:

        sum_{k<=n} theta(a q^(2k); p)/theta(a; p)
            * (a, b, c, d, e, q^-n; q, p)_k
            / (q, aq/b, aq/c, aq/d, aq/e, a q^(n+1); q, p)_k * q^k
        = (aq, aq/bc, aq/bd, aq/cd; q, p)_n
        / (aq/b, aq/c, aq/d, aq/bcd; q, p)_n.
    """
    e = a * a * q ** (n + 1) / (b * c * d)
    th_a = theta(a, p)
    if abs(th_a) <= guard:
        raise DegenerateParameterError("theta(a; p) below guard")

    num_cur = [a, b, c, d, e, q ** (-n)]
    den_cur = [q, a * q / b, a * q / c, a * q / d, a * q / e, a * q ** (n + 1)]
    run = 1
    qk = 1
    lhs = 0
    for k in range(n + 1):
        if k:
            for idx, z in enumerate(num_cur):
                run = run * theta(z, p)
                num_cur[idx] = z * q
            for idx, z in enumerate(den_cur):
                t = theta(z, p)
                if abs(t) <= guard * (1 + abs(z)):
                    raise DegenerateParameterError("series denominator below guard")
                run = run / t
                den_cur[idx] = z * q
            qk = qk * q
        lhs = lhs + theta(a * q ** (2 * k), p) / th_a * run * qk

    rhs_num = theta_fact_prod((a * q, a * q / (b * c), a * q / (b * d), a * q / (c * d)),
                              q, p, n)
    rhs_den = theta_fact_prod((a * q / b, a * q / c, a * q / d, a * q / (b * c * d)),
                              q, p, n)
    if abs(rhs_den) <= guard:
        raise DegenerateParameterError("closed-side denominator below guard")
    return lhs, rhs_num / rhs_den


def frenkel_turaev_from_convolution(pp: ParamPoint, n: int, m: int, k: int):
    """The parameter list under which the convolution formula becomes a
    terminating very-well-poised sum: evaluate that sum at

        (a, b, c, d, n) -> (a q^-n / b, a c q^(n+m), q^(1-n)/(b c),
                            a q^(k-n-m) / b, k).
    """
    x, a, b, c, q, p = pp.x, pp.a, pp.b, pp.c, pp.q, pp.p
    return frenkel_turaev(a * q ** (-n) / b,
                          a * c * q ** (n + m),
                          q ** (1 - n) / (b * c),
                          a * q ** (k - n - m) / b,
                          k, q, p)
