"""Cofactor-identity tests: series coefficients, linear-algebra solves
against closed forms, the base-inverting involution, transition-matrix
inversion, connection sums, and root-evaluation divisibility."""

from __future__ import annotations

from random import Random

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import unit_complex
from thetacb.bezout import (
    DualQPoly,
    Poly,
    abq1_cofactors,
    abq2_cofactor_coeffs,
    bezout_solve,
    bezout_solve_symmetric,
    connection_first,
    connection_second,
    f_entry,
    g_entry,
    matrix_pair_check,
    mod_reduction_check,
    poly_monomial,
    qcb_cofactors,
    qpoch_poly,
    series_inv_qpoch,
    symmetric_identity_residual,
    t_involution,
)
from thetacb.errors import CommonRootError
from thetacb.special import qbinom, qpoch


def _coeff_gap(got: Poly, want: Poly) -> float:
    pad = max(len(got.coeffs), len(want.coeffs))
    scale = max([1.0] + [abs(z) for z in want.coeffs])
    gap = 0.0
    for i in range(pad):
        g = got.coeffs[i] if i < len(got.coeffs) else 0
        w = want.coeffs[i] if i < len(want.coeffs) else 0
        gap = max(gap, abs(g - w))
    return gap / scale


class TestPoly:
    def test_trim_and_degree(self):
        assert Poly((1, 2, 0, 0)).degree == 1
        assert Poly(()).degree == -1

    def test_eval_horner(self):
        p = Poly((1, -2, 3))
        assert p(2.0) == 1 - 4 + 12

    @settings(max_examples=60, deadline=None)
    @given(a=st.lists(st.integers(-5, 5), min_size=1, max_size=6),
           b=st.lists(st.integers(-5, 5), min_size=1, max_size=5))
    def test_divmod_round_trip(self, a, b):
        num, den = Poly(tuple(map(complex, a))), Poly(tuple(map(complex, b)))
        if den.degree < 0:
            return
        quo, rem = divmod(num, den)
        back = quo * den + rem
        pad = max(len(back.coeffs), len(num.coeffs))
        for i in range(pad):
            x = back.coeffs[i] if i < len(back.coeffs) else 0
            y = num.coeffs[i] if i < len(num.coeffs) else 0
            assert abs(x - y) < 1e-9
        assert rem.degree < den.degree


class TestSeries:
    def test_geometric_case(self):
        s = series_inv_qpoch(0, 0.7, 2)
        assert s.coeffs == (1, 1, 1)

    def test_first_nontrivial_coefficient(self):
        s = series_inv_qpoch(1, 0.5, 1)
        assert abs(s.coeffs[0] - 1) == 0
        assert abs(s.coeffs[1] - 1.5) < 1e-15

    def test_product_is_one_modulo_truncation(self):
        q, n, m = 0.6 + 0.1j, 2, 5
        prod = series_inv_qpoch(n, q, m) * qpoch_poly(1, q, n + 1)
        assert abs(prod.coeffs[0] - 1) < 1e-14
        assert max(abs(c) for c in prod.coeffs[1:m + 1]) < 1e-13


class TestBezoutSolve:
    def test_smallest_case(self):
        q1, q2 = bezout_solve(qpoch_poly(1, 0.5, 1), poly_monomial(1), 0, 0)
        assert q1.coeffs == (1 + 0j,)
        assert q2.coeffs == (1 + 0j,)

    def test_one_parameter_family_matches_series(self):
        q = 0.6
        m, n = 2, 1
        q1, _ = bezout_solve(qpoch_poly(1, q, n + 1), poly_monomial(m + 1), m, n)
        for k, c in enumerate(q1.coeffs):
            assert abs(c - qbinom(n + k, k, q)) < 1e-12

    def test_two_parameter_family_matches_closed_sum(self):
        rng = Random(71)
        for _ in range(10):
            a, b = unit_complex(rng, 0.2, 2), unit_complex(rng, 0.2, 2)
            q = unit_complex(rng, 0.3, 0.9)
            m, n = rng.randint(0, 5), rng.randint(0, 5)
            got1, got2 = bezout_solve(qpoch_poly(b, q, n + 1),
                                      qpoch_poly(a, q, m + 1), m, n)
            want1, want2 = abq1_cofactors(a, b, q, m, n)
            assert _coeff_gap(got1, want1) < 1e-9
            assert _coeff_gap(got2, want2) < 1e-9

    def test_cross_orientation_symmetry(self):
        # Q1 at (a, b, m, n) equals Q2 of the independent swapped solve
        rng = Random(72)
        a, b = unit_complex(rng, 0.2, 2), unit_complex(rng, 0.2, 2)
        q = unit_complex(rng, 0.3, 0.9)
        m, n = 3, 2
        q1, _ = bezout_solve(qpoch_poly(b, q, n + 1), qpoch_poly(a, q, m + 1), m, n)
        _, q2_swapped = bezout_solve(qpoch_poly(a, q, m + 1), qpoch_poly(b, q, n + 1), n, m)
        assert _coeff_gap(q1, q2_swapped) < 1e-10

    def test_repeat_solves_are_identical(self):
        q = 0.45 + 0.2j
        first = bezout_solve(qpoch_poly(1, q, 3), poly_monomial(3), 2, 2)
        second = bezout_solve(qpoch_poly(1, q, 3), poly_monomial(3), 2, 2)
        assert first[0].coeffs == second[0].coeffs
        assert first[1].coeffs == second[1].coeffs

    def test_common_root_rejected(self):
        q = 0.5
        with pytest.raises(CommonRootError):
            bezout_solve(qpoch_poly(1, q, 2), qpoch_poly(1, q, 3), 2, 1)

    def test_degree_contract(self):
        with pytest.raises(ValueError):
            bezout_solve(qpoch_poly(1, 0.5, 4), poly_monomial(1), 0, 0)


class TestSymmetricFamily:
    def test_collocation_matches_closed_coefficients(self):
        rng = Random(73)
        for _ in range(8):
            a, b = unit_complex(rng, 0.2, 2), unit_complex(rng, 0.2, 2)
            q = unit_complex(rng, 0.3, 0.9)
            m, n = rng.randint(0, 5), rng.randint(0, 5)
            u, v = bezout_solve_symmetric(a, b, q, m, n)
            cu, cv = abq2_cofactor_coeffs(a, b, q, m, n)
            scale = max([1.0] + [abs(z) for z in cu + cv])
            assert max(abs(x - y) for x, y in zip(u, cu)) / scale < 1e-9
            assert max(abs(x - y) for x, y in zip(v, cv)) / scale < 1e-9

    def test_identity_at_symmetric_sample_points(self):
        rng = Random(74)
        a, b = unit_complex(rng, 0.2, 2), unit_complex(rng, 0.2, 2)
        q = unit_complex(rng, 0.3, 0.9)
        m, n = 3, 2
        u, v = abq2_cofactor_coeffs(a, b, q, m, n)
        points = [unit_complex(rng, 0.4, 1.6) for _ in range(m + n + 2)]
        points += [1 / x for x in points]  # 2(m+n) + 4 symmetric points
        assert symmetric_identity_residual(a, b, q, m, n, u, v, points) < 1e-11


class TestInvolution:
    def test_fixes_constants(self):
        dp = DualQPoly.from_constants([2.5 - 1j])
        assert t_involution(dp, 0.7).at(0.7).coeffs == (2.5 - 1j,)

    def test_monomial_to_shifted_base(self):
        # x maps to (x; q)_1 = 1 - x, re-expanded over monomials
        img = t_involution(DualQPoly.from_constants([0, 1]), 0.7).at(0.7)
        assert img.coeffs == (1 + 0j, -1 + 0j)

    def test_degree_preserved(self):
        dp = DualQPoly.from_constants([1, 2, 3, 4])
        assert t_involution(dp, 0.8).degree == dp.degree

    def test_double_application_is_identity(self):
        rng = Random(75)
        for _ in range(6):
            q = unit_complex(rng, 0.75, 0.9)
            values = [unit_complex(rng, 0.2, 2) for _ in range(rng.randint(1, 6))]
            dp = DualQPoly.from_constants(values)
            back = t_involution(t_involution(dp, q), q).at(q)
            gap = max(abs(x - y) for x, y in zip(back.coeffs, dp.at(q).coeffs))
            assert gap < 1e-11

    def test_double_application_degree_eight_extended_precision(self):
        # at |q| near 0.3 the re-expansion scale reaches |q|^-28, past
        # double headroom; the involution itself is precision-agnostic
        rng = Random(76)
        with mpmath.workdps(40):
            q = mpmath.mpc(0.31, 0.12)
            values = [mpmath.mpc(unit_complex(rng, 0.2, 2)) for _ in range(9)]
            dp = DualQPoly.from_constants(values)
            back = t_involution(t_involution(dp, q), q).at(q)
            gap = max(float(abs(x - y)) for x, y in zip(back.coeffs, dp.at(q).coeffs))
        assert gap < 1e-11


class TestTransitionMatrices:
    def test_trivial_size(self):
        assert matrix_pair_check(0, 0.7) == 0

    def test_moderate_size(self):
        assert matrix_pair_check(5, 0.7) < 1e-12

    def test_inverse_entries_are_base_inverted(self):
        q = 0.7 - 0.2j
        worst = max(abs(g_entry(n, k, q) - f_entry(n, k, 1 / q))
                    for n in range(6) for k in range(n + 1))
        assert worst < 1e-13


class TestConnectionCoefficients:
    def test_k_zero_prefactor(self):
        a, b, q = 0.8, 1.3, 0.6
        for n in range(5):
            assert abs(connection_first(n, 0, a, b, q) - qpoch(b / a, q, n)) < 1e-13

    def test_first_kind_connecting_relation(self):
        rng = Random(77)
        worst = 0.0
        for _ in range(20):
            a, b = unit_complex(rng, 0.2, 2), unit_complex(rng, 0.2, 2)
            q, x = unit_complex(rng, 0.3, 0.9), unit_complex(rng, 0.2, 2)
            n = rng.randint(0, 5)
            terms = [connection_first(n, k, a, b, q) * qpoch(a * x, q, k)
                     for k in range(n + 1)]
            scale = max([1.0] + [abs(t) for t in terms])
            worst = max(worst, abs(sum(terms) - qpoch(b * x, q, n)) / scale)
        assert worst < 1e-11

    def test_second_kind_connecting_relation(self):
        rng = Random(78)
        worst = 0.0
        for _ in range(20):
            a, b = unit_complex(rng, 0.2, 2), unit_complex(rng, 0.2, 2)
            q, x = unit_complex(rng, 0.3, 0.9), unit_complex(rng, 0.2, 2)
            n = rng.randint(0, 5)
            terms = [connection_second(n, k, a, b, q)
                     * qpoch(a * x, q, k) * qpoch(a / x, q, k)
                     for k in range(n + 1)]
            scale = max([1.0] + [abs(t) for t in terms])
            target = qpoch(b * x, q, n) * qpoch(b / x, q, n)
            worst = max(worst, abs(sum(terms) - target) / scale)
        assert worst < 1e-11

    def test_terminates_above_n(self):
        # the (q^-n; q)_k factor vanishes for k > n, up to rounding in q^-n q^n
        assert abs(connection_first(3, 5, 0.8, 1.3, 0.6)) < 1e-15


class TestModReduction:
    def test_single_root(self):
        assert mod_reduction_check("first", 0.9, 1.4, 0.6, 0, 3) < 1e-12

    def test_first_kind_sweep(self):
        rng = Random(79)
        worst = 0.0
        for _ in range(10):
            a, b = unit_complex(rng, 0.2, 2), unit_complex(rng, 0.2, 2)
            q = unit_complex(rng, 0.3, 0.9)
            worst = max(worst, mod_reduction_check("first", a, b, q, 2, 1))
        assert worst < 1e-11

    def test_second_kind_sweep(self):
        rng = Random(80)
        worst = 0.0
        for _ in range(10):
            a, b = unit_complex(rng, 0.2, 2), unit_complex(rng, 0.2, 2)
            q = unit_complex(rng, 0.3, 0.9)
            worst = max(worst, mod_reduction_check("second", a, b, q, 1, 1))
        assert worst < 1e-10

    def test_unknown_family(self):
        with pytest.raises(ValueError):
            mod_reduction_check("third", 1, 2, 0.5, 1, 1)


def test_qcb_cofactors_satisfy_identity():
    q, m, n = 0.55 + 0.2j, 3, 2
    q1, q2 = qcb_cofactors(q, m, n)
    ident = qpoch_poly(1, q, n + 1) * q1 + poly_monomial(m + 1) * q2
    assert abs(ident.coeffs[0] - 1) < 1e-12
    assert max(abs(c) for c in ident.coeffs[1:]) < 1e-12
