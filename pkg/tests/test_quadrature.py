import cmath
import math
import random

import mpmath
import pytest

from selberg.errors import BranchCutHit, DecayViolation, OutOfDomain, Unconverged
from selberg.functionals import GenericParams, LaurentPoly, SymmetricParams
from selberg.identities import MOEBIUS, check_moebius
from selberg.quadrature import (QuadSettings, contour_i2, df_quad, power_quad, selberg_quad,
                                ts_nodes)
from selberg.special import beta_mero

ONE1 = LaurentPoly.constant(1)
ONE2 = LaurentPoly.constant(2)


def _rel(a, b):
    return abs(a - b) / abs(b)


def test_polynomial_examples():
    assert abs(selberg_quad((0, 2, 0), ONE2, SymmetricParams(0, 0, 1).generic(2)).value - 1 / 12) < 1e-13
    assert abs(selberg_quad((0, 2, 0), ONE2, SymmetricParams(0, 0, 0.5).generic(2)).value - 1 / 6) < 1e-13


def test_beta_oracle():
    r = random.Random(1)
    for _ in range(30):
        a = complex(r.uniform(-0.9, 2), r.uniform(-1, 1))
        b = complex(r.uniform(-0.9, 2), r.uniform(-1, 1))
        v = selberg_quad((0, 1, 0), ONE1, GenericParams.make([a], [b], [])).value
        assert _rel(v, beta_mero(a, b)) <= 1e-10, (a, b)


def test_unbounded_block_n1():
    # x in (-inf, 0]: int |x|^a (1-x)^b dx = Gamma(1+a)Gamma(-1-a-b)/Gamma(-b)
    for a, b in ((-0.4, -1.3), (0.2, -2.5 + 0.3j), (-0.7, -1.1)):
        want = complex(mpmath.gamma(1 + a) * mpmath.gamma(-1 - a - b) / mpmath.gamma(-b))
        v = selberg_quad((1, 0, 0), ONE1, GenericParams.make([a], [b], [])).value
        assert _rel(v, want) <= 1e-10


def test_laurent_integrand_against_mpmath():
    a, b, g = (-0.3, 0.4), (0.25, -0.2), 0.35
    F = LaurentPoly.make(2, {(2, 0): 1, (0, 1): 3, (0, -1): 0.5})
    p = GenericParams.make(a, b, g)
    got = selberg_quad((0, 2, 0), F, p).value
    mpmath.mp.dps = 20

    def inner(x2):
        return mpmath.quad(lambda x1: x1 ** a[0] * (1 - x1) ** b[0] * x2 ** a[1] * (1 - x2) ** b[1]
                           * (x2 - x1) ** (2 * g) * (x1 ** 2 + 3 * x2 + 0.5 / x2), [0, x2])
    want = complex(mpmath.quad(inner, [0, 1]))
    mpmath.mp.dps = 15
    assert _rel(got, want) <= 1e-8


def test_reflection_symmetry():
    r = random.Random(6)
    for N, shape in ((1, (0, 1, 0)), (2, (0, 2, 0))):
        for _ in range(5):
            a = [complex(r.uniform(-0.6, 1), r.uniform(-0.5, 0.5)) for _ in range(N)]
            b = [complex(r.uniform(-0.6, 1), r.uniform(-0.5, 0.5)) for _ in range(N)]
            g = r.uniform(0.05, 0.6)
            lhs = selberg_quad(shape, LaurentPoly.constant(N), GenericParams.make(a, b, g)).value
            # x -> 1 - x swaps alpha/beta and reverses the order of the variables
            rhs = selberg_quad(shape, LaurentPoly.constant(N),
                               GenericParams.make(b[::-1], a[::-1], g)).value
            assert _rel(lhs, rhs) <= 1e-9


def test_df_quad_identity_permutation():
    p = GenericParams.make([0.3], [-0.2], [])
    assert df_quad((0, 1, 0), ONE1, p).value == selberg_quad((0, 1, 0), ONE1, p).value


def test_df_quad_bubble_n2():
    for g in (1.0, 0.3, 0.45 + 0.2j):
        p = SymmetricParams(-0.2, 0.15, g).generic(2)
        s2 = selberg_quad((0, 2, 0), ONE2, p).value
        assert _rel(df_quad((0, 2, 0), ONE2, p).value, (1 + cmath.exp(2j * math.pi * g)) * s2) <= 1e-10
    one = df_quad((0, 2, 0), ONE2, SymmetricParams(0, 0, 1).generic(2)).value
    assert abs(one - 1 / 6) < 1e-13


def test_contour_matches_cube_integral():
    for a1, a2, b1, b2, g in ((0.3, 0.2, 0.1, 0.4, 0.2), (-0.3, 0.5, 0.2, -0.1, 0.35 + 0.1j)):
        c = contour_i2(a1, a2, b1, b2, g).value
        d = df_quad((0, 2, 0), ONE2, GenericParams.make([a1, a2], [b1, b2], g)).value
        assert _rel(c, d) <= 1e-6


def test_contour_at_gamma_zero_is_beta_product():
    a1, a2, b1, b2 = 0.3, -0.4, 0.7, -0.2
    c = contour_i2(a1, a2, b1, b2, 0).value
    assert _rel(c, beta_mero(a1, b1) * beta_mero(a2, b2)) <= 1e-10


def test_contour_height_independent():
    args = (0.3, -0.2, 0.1, 0.6, 0.25)
    assert _rel(contour_i2(*args, r=0.5).value, contour_i2(*args, r=2.0).value) <= 1e-9


def test_contour_errors():
    with pytest.raises(DecayViolation):
        contour_i2(0.3, -1.2, 0.1, 0.2, 0.1)
    with pytest.raises(BranchCutHit):
        contour_i2(0.3, 0.2, 0.1, 0.2, 0.1, r=0.0)


@pytest.mark.parametrize("sigma", sorted(MOEBIUS))
def test_moebius_n1(sigma):
    p = GenericParams.make([-0.35], [0.2], [])
    assert check_moebius(sigma, (0, 1, 0), p).passed


@pytest.mark.parametrize("sigma", ["(0 1)", "(0 inf)", "(1 inf)", "(0 1 inf)"])
def test_moebius_n2(sigma):
    p = GenericParams.make([-0.3, 0.1], [0.2, -0.25], 0.15)
    rep = check_moebius(sigma, (0, 2, 0), p)
    assert rep.passed, rep.to_json()


def test_out_of_domain():
    with pytest.raises(OutOfDomain):
        selberg_quad((0, 1, 0), ONE1, GenericParams.make([-1.2], [0], []))
    with pytest.raises(OutOfDomain):
        selberg_quad((0, 1, 0), ONE1, GenericParams.make([-0.97], [0], []))
    with pytest.raises(OutOfDomain):
        selberg_quad((0, 2, 0), ONE1, SymmetricParams(0, 0, 1).generic(2))


def test_unconverged():
    p = GenericParams.make([-0.9], [0.3], [])
    with pytest.raises(Unconverged):
        selberg_quad((0, 1, 0), ONE1, p, QuadSettings(max_level=2, target_rel=1e-14))


def test_settings_limits():
    with pytest.raises(ValueError):
        QuadSettings(max_level=13).resolved(1)
    with pytest.raises(ValueError):
        QuadSettings(target_rel=1e-16).resolved(1)


def test_err_estimate_bounds_error():
    p = GenericParams.make([-0.5], [0.7], [])
    r = selberg_quad((0, 1, 0), ONE1, p, QuadSettings(target_rel=1e-6))
    assert abs(r.value - beta_mero(-0.5, 0.7)) <= max(r.err_est, 1e-15) * 10
    assert r.evaluations > 0


def test_power_quad_endpoint_singularities():
    v, _ = power_quad(lambda x: 1 + 0 * x, 0.0, 1.0, -0.5, -0.5)
    assert abs(v - math.pi) < 1e-12


def test_nodes_are_cached_and_read_only():
    lw, _, _ = ts_nodes(4)
    assert ts_nodes(4)[0] is lw
    assert not lw.flags.writeable
