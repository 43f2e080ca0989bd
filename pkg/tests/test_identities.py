import cmath
import itertools
import math
import random

import pytest

from selberg.functionals import GenericParams, LaurentPoly, SymmetricParams
from selberg.identities import (IdentityReport, bubble_sort_identity, check_aomoto_ratio,
                                check_aomoto_step, check_aomoto_three_term, check_symmetrization,
                                df_n2_claim, df_n2_claim_rhs, df_n2_value, df_product_formula,
                                dfsym_check, inversions, moebius_param_map, sigma_insert,
                                theta_phase, three_term_admissible)
from selberg.quadrature import QuadSettings, selberg_quad
from selberg.sampling import generic_point, rng
from selberg.special import beta_mero, gamma, rgamma, sinpi


def test_report_residual_normalization():
    rep = IdentityReport.compare("t", 3.0, 3.0 + 3e-6, 1e-6)
    assert rep.residual == pytest.approx(1e-6, rel=1e-5) and rep.passed
    small = IdentityReport.compare("t", 1e-3, 2e-3, 1e-2)
    assert small.residual == pytest.approx(1e-3)
    js = rep.to_json()
    assert set(js) >= {"tag", "point", "lhs", "rhs", "residual", "passed"}


def test_theta_phase_examples():
    p3 = GenericParams.make([0] * 3, [0] * 3, 0.2)
    assert theta_phase((1, 2, 3), p3) == 0
    p2 = GenericParams.make([0, 0], [0, 0], 0.37)
    assert theta_phase((2, 1), p2) == pytest.approx(2 * math.pi * 0.37)
    assert theta_phase((3, 2, 1), p3) == pytest.approx(6 * math.pi * 0.2)


def test_theta_is_additive_over_inversions():
    p = GenericParams.make([0] * 4, [0] * 4, {(1, 2): 0.1, (1, 3): 0.2, (1, 4): 0.3,
                                              (2, 3): 0.4, (2, 4): 0.5, (3, 4): 0.6})
    for sigma in itertools.permutations(range(1, 5)):
        want = sum(p.g(j, k) for j in range(1, 5) for k in range(j + 1, 5)
                   if sigma[j - 1] > sigma[k - 1])
        assert theta_phase(sigma, p) == pytest.approx(2 * math.pi * want)


@pytest.mark.parametrize("N", range(1, 7))
def test_bubble_sort_identity(N):
    r = random.Random(N)
    for _ in range(20):
        while True:
            z = complex(r.uniform(-1.3, 1.3), r.uniform(-1.3, 1.3))
            if all(abs(z ** n - 1) > 1e-3 for n in range(1, N + 1)):
                break
        assert bubble_sort_identity(N, z).passed


def test_inversions_and_insertion_cycle():
    assert inversions((3, 1, 2)) == 2
    assert sigma_insert(4, 3) == (3, 1, 2, 4)
    assert sigma_insert(4, 1) == (1, 2, 3, 4)


def test_symmetrization_examples():
    rep = check_symmetrization((0, 2, 0), None, SymmetricParams(0.2, -0.3, 1 / 3))
    assert rep.passed, rep.to_json()
    rep = check_symmetrization((0, 2, 0), None, SymmetricParams(0.2, -0.3, 1 / 3), route="quad")
    assert rep.passed, rep.to_json()
    rep = check_symmetrization((0, 1, 0), None, SymmetricParams(0.4, 0.1, 0))
    assert rep.residual < 1e-14
    rep = check_symmetrization((0, 2, 0), None, SymmetricParams(0, 0, 1))
    assert rep.lhs == pytest.approx(1 / 6, abs=1e-13) and rep.rhs == pytest.approx(1 / 6, abs=1e-13)


def test_symmetrization_n3_quadrature():
    s = QuadSettings(max_level=4, target_rel=1e-6)
    rep = check_symmetrization((0, 3, 0), None, SymmetricParams(0.1, 0.2, 0.3), tol=1e-5, s=s)
    assert rep.passed, rep.to_json()


@pytest.mark.parametrize("sign", [+1, -1])
def test_three_term_n1(sign):
    p = GenericParams.make([-0.6], [-0.7], [])
    assert three_term_admissible((1, 0, 0), p)
    rep = check_aomoto_three_term((1, 0, 0), None, p, sign)
    assert rep.passed, rep.to_json()


@pytest.mark.parametrize("sign", [+1, -1])
def test_three_term_n2(sign):
    p = generic_point(rng(4), (1, 1, 0), box=((-2.5, 1.0), (-2.5, 1.0), (-0.3, 0.6)),
                      accept=lambda q: three_term_admissible((1, 1, 0), q))
    rep = check_aomoto_three_term((1, 1, 0), None, p, sign)
    assert rep.passed, rep.to_json()


def test_three_term_conjugation():
    p = GenericParams.make([-0.6], [-0.7], [])
    plus = check_aomoto_three_term((1, 0, 0), None, p, +1)
    minus = check_aomoto_three_term((1, 0, 0), None, p, -1)
    assert abs(minus.lhs - plus.lhs.conjugate()) < 1e-12
    assert abs(minus.rhs - plus.rhs.conjugate()) < 1e-12


def test_three_term_residual_is_numerical():
    p = GenericParams.make([-0.6], [-0.7], [])
    loose = check_aomoto_three_term((1, 0, 0), None, p, +1,
                                    s=QuadSettings(max_level=3, target_rel=1e-2))
    tight = check_aomoto_three_term((1, 0, 0), None, p, +1)
    assert tight.residual <= loose.residual


def test_aomoto_ratio_n1_against_beta():
    a, b = -0.45, -0.72
    p = SymmetricParams(a, b, 0.13)
    rep = check_aomoto_ratio(1, None, p)
    assert rep.passed
    outer = selberg_quad((0, 0, 1), LaurentPoly.constant(1), p.generic(1)).value
    want = -sinpi(a + b) / sinpi(a) * outer
    assert abs(beta_mero(a, b) - want) < 1e-10


@pytest.mark.parametrize("variant", [0, 1])
def test_aomoto_ratio_n2(variant):
    rep = check_aomoto_ratio(2, None, SymmetricParams(-0.47, -0.52, -0.245), variant)
    assert rep.passed, rep.to_json()


def test_aomoto_step_n2():
    rep = check_aomoto_step(2, 0, None, SymmetricParams(-0.47, -0.52, -0.245))
    assert rep.passed, rep.to_json()


def test_aomoto_ratio_skips_near_sine_zero():
    rep = check_aomoto_ratio(1, None, SymmetricParams(-0.5, -0.5, 0.1))
    assert rep.skipped_reason and "sin" in rep.skipped_reason


def test_moebius_map_table():
    p = GenericParams.make([0.1, 0.2], [0.3, 0.4], 0.25)
    sh, q, rev = moebius_param_map("1", (1, 1, 0), p)
    assert sh.as_tuple() == (1, 1, 0) and q == p and not rev
    sh, q, rev = moebius_param_map("(0 1)", (1, 1, 0), p)
    assert sh.as_tuple() == (0, 1, 1) and rev
    assert set(q.alpha) == set(p.beta) and set(q.beta) == set(p.alpha)
    p1 = GenericParams.make([0.1], [0.3], [])
    _, q, _ = moebius_param_map("(0 inf)", (0, 1, 0), p1)
    assert q.alpha[0] == pytest.approx(-2.4) and q.beta[0] == pytest.approx(0.3)


def test_dfsym_examples():
    F = LaurentPoly.make(3, {(2, 0, 0): 1, (0, 2, 0): 1, (0, 0, 2): 1, (1, 1, 1): 3})
    for lam in (0.5, 2, 7 + 1j):
        assert dfsym_check(F, {1, 2, 3}, lam)[0]
    lm, lp = 2.0, 3.0
    G = LaurentPoly.make(2, {(1, 0): lm, (0, 1): lp})
    assert dfsym_check(G, {1}, (lm + lp) / lm)[0]
    ok, pair = dfsym_check(LaurentPoly.make(2, {(1, 0): 1}), {1}, 2)
    assert not ok and pair == (1, 2)


def test_dfsym_is_an_algebra():
    lm, lp = 1.5, 2.5
    lam = (lm + lp) / lm
    N = 3
    S = {1}
    # lambda_- sum over S plus lambda_+ sum over the rest
    lin = LaurentPoly.make(N, {(1, 0, 0): lm, (0, 1, 0): lp, (0, 0, 1): lp})
    one = LaurentPoly.constant(N)
    members = [lin, one * 2, lin * lin]
    for f, g in itertools.product(members, repeat=2):
        assert dfsym_check(f + g, S, lam)[0]
        assert dfsym_check(f * g, S, lam)[0]


def test_df_product_formula_pure_species():
    # no minus particles: only the Selberg-type product of the + species is left
    a, b, g = 0.3, 0.4, 0.25
    v = df_product_formula(0, 2, a, b, g)
    want = 1 + 0j
    for j in (1, 2):
        want *= (gamma(1 + a + (j - 1) * g) * gamma(1 + b + (j - 1) * g)
                 * rgamma(2 + a + b + j * g) * rgamma(1 - j * g) / rgamma(1 - g)
                 * cmath.exp(-1j * math.pi * (j - 1) * g))
    assert abs(v - want) <= 1e-13 * abs(want)


@pytest.mark.parametrize("gp", [-2.0, -1.5])
def test_df_product_ratio_constant(gp):
    pts = [(2, 3), (2.5, 3), (3, 3.5), (2.2, 2.7), (3.5, 3)]
    ratios = [df_n2_value(a, b, gp) / df_product_formula(1, 1, a, b, gp) for a, b in pts]
    for q in ratios[1:]:
        assert abs(q - ratios[0]) <= 1e-3 * abs(ratios[0])


def test_df_product_sign_choices_agree():
    for a, b, gp in ((2, 3, -2.0), (2.5, 3.1, -1.5)):
        plus = df_product_formula(1, 1, a, b, gp, +1)
        minus = df_product_formula(1, 1, a, b, gp, -1)
        assert abs(plus - minus) <= 1e-12 * abs(plus)


def test_df_claim_rhs():
    assert abs(abs(df_n2_claim_rhs(2, 3)) - 1 / 240) < 1e-16
    assert df_n2_claim_rhs(2, 3) == pytest.approx(df_n2_claim_rhs(3, 2))


def test_df_claim_sign_is_constant():
    reps = [df_n2_claim(a, b) for a, b in ((2, 3), (1.5, 2.5), (3, 3))]
    assert all(r.passed for r in reps)
    assert len({r.extra["sign"] for r in reps}) == 1
