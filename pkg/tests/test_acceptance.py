"""Acceptance criteria, one test each, at the stated tolerances.

Run under pytest (a PASS/FAIL line per criterion is printed in the terminal
summary) or directly:

    python3 tests/test_acceptance.py
"""
import cmath
import functools
import itertools
import math
import random
import sys
import time

import mpmath

from selberg.combinatorics import (RegionShape, bdf_value, catalan, enumerate_k_faces,
                                   enumerate_tamari)
from selberg.continuation import (beta_continued, continue_s2, i2_closed, regularized_s2,
                                  residue_terms, s2_closed, s2_closed_poly, selberg_closed,
                                  stripped_hyperplanes)
from selberg.functionals import LaurentPoly, SymmetricParams
from selberg.identities import (bubble_sort_identity, check_aomoto_ratio,
                                check_aomoto_three_term, df_n2_claim, three_term_admissible)
from selberg.quadrature import QuadSettings, selberg_quad
from selberg.sampling import generic_point, off_integer, rng, symmetric_point

RESULTS = {}


def criterion(number, title):
    def wrap(fn):
        @functools.wraps(fn)
        def run():
            RESULTS[number] = (title, False, "did not finish")
            t0 = time.perf_counter()
            try:
                detail = fn()
            except AssertionError as exc:
                RESULTS[number] = (title, False, str(exc).splitlines()[0] if str(exc) else "assertion")
                raise
            RESULTS[number] = (title, True, f"{detail}; {time.perf_counter() - t0:.1f} s")
        return run
    return wrap


def summary_lines():
    return [f"{'PASS' if ok else 'FAIL'} criterion {n:2d} {title}: {detail}"
            for n, (title, ok, detail) in sorted(RESULTS.items())]


def _rel(a, b):
    return abs(a - b) / abs(b)


@criterion(1, "face and Tamari counts")
def test_counts():
    t0 = time.perf_counter()
    for N, want in zip(range(1, 7), (2, 5, 14, 42, 132, 429)):
        sh = RegionShape(0, N, 0)
        assert len(enumerate_k_faces(sh)) == N * (N + 3) // 2, f"faces N={N}"
        assert len(enumerate_tamari(sh)) == want == catalan(N + 1), f"Tamari N={N}"
    dt = time.perf_counter() - t0
    assert dt < 1.0, f"runtime {dt:.2f} s"
    return "N=1..6 exact"


@criterion(2, "quadrature against the Selberg product")
def test_selberg_formula():
    t0 = time.perf_counter()
    worst = {}
    for N, count, tol, s in ((1, 200, 1e-8, None), (2, 200, 1e-6, None),
                             (3, 20, 1e-4, QuadSettings(max_level=4, target_rel=1e-4))):
        r = rng(100 + N)
        worst[N] = 0.0
        for _ in range(count):
            p = symmetric_point(r, [(0, N, 0)])
            q = selberg_quad((0, N, 0), LaurentPoly.constant(N), p.generic(N), s).value
            err = _rel(q, selberg_closed(N, p))
            worst[N] = max(worst[N], err)
            assert err <= tol, f"N={N} rel err {err:.2e} at {p}"
    dt = time.perf_counter() - t0
    assert dt < 60, f"runtime {dt:.1f} s"
    return ", ".join(f"N={N} worst {w:.1e}" for N, w in worst.items())


@criterion(3, "Beta continuation")
def test_beta_continuation():
    r = rng(3)
    worst = 0.0
    alphas = [a for a in (-4.6 + 7.6 * i / 59 for i in range(60)) if abs(a - round(a)) >= 0.1][:40]
    assert len(alphas) == 40
    for a in alphas:
        b = off_integer(r, -2.6, 2.0)
        want = complex(mpmath.gamma(1 + a) * mpmath.gamma(1 + b) / mpmath.gamma(2 + a + b))
        err = _rel(beta_continued(a, b), want)
        worst = max(worst, err)
        assert err <= 1e-9, f"rel err {err:.2e} at ({a}, {b})"
    return f"40 points, worst {worst:.1e}"


@criterion(4, "two-point continuation against the 3F2 form")
def test_s2_continuation():
    r = rng(4)
    worst = 0.0
    for _ in range(50):
        a1 = off_integer(r, -2.95, -1.05, 0.05)
        b1, b2 = r.uniform(-0.5, 1), r.uniform(-0.5, 1)
        g = r.uniform(0.05, 0.6)
        # alpha2 keeps 2 + a1 + a2 + 2g inside its convergent half-plane
        a2 = max(r.uniform(-0.5, 1), -1 - a1 - 2 * g + 0.3)
        p = (a1, a2, b1, b2, g)
        err = _rel(continue_s2(p), s2_closed(p))
        worst = max(worst, err)
        assert err <= 1e-6, f"rel err {err:.2e} at {p}"
    return f"50 points, worst {worst:.1e}"


def _s2_weight(F, a):
    return s2_closed_poly(F, (a, a, 0.5, 0.5, 1 / 3))


@criterion(5, "figure zeros")
def test_figure_zeros():
    x2 = LaurentPoly.make(2, {(0, 2): 1})
    x1 = LaurentPoly.make(2, {(2, 0): 1})
    found = []
    for F, zeros in ((x2, (-2.48503,)), (x1, (-3.06833, -3.57013, -4.08562))):
        for z in zeros:
            lo, hi = _s2_weight(F, z - 2e-3), _s2_weight(F, z + 2e-3)
            assert abs(lo.imag) < 1e-12 * abs(lo) and abs(hi.imag) < 1e-12 * abs(hi)
            assert lo.real * hi.real < 0, f"no sign change around {z}"
            found.append(z)
    return "sign changes within 2e-3 of " + ", ".join(f"{z}" for z in found)


@criterion(6, "residue cancellation")
def test_residue_cancellation():
    both = LaurentPoly.make(2, {(2, 0): 1, (0, 2): 1})
    one = LaurentPoly.make(2, {(0, 2): 1})
    worst_both, least_one = 0.0, math.inf
    points = [(kk, b, g) for kk in (1, 3, 5, 7, 9) for b, g in ((0.5, 1 / 3), (0.2, 0.45))]
    for kk, b, g in points:
        a = (-4 - kk - 2 * g) / 2
        p = (a, a, b, b, g)
        k = kk + 2
        tb = residue_terms(both, k, p)
        scale = max(abs(t) for t in tb)
        rb = abs(sum(tb))
        ro = abs(sum(residue_terms(one, k, p)))
        worst_both = max(worst_both, rb / scale)
        least_one = min(least_one, ro / scale)
        assert rb <= 1e-8 * scale, f"x^2+y^2 residue {rb:.2e} vs scale {scale:.2e} at k={k}"
        assert ro > 1e-6 * scale, f"x^2 residue {ro:.2e} vs scale {scale:.2e} at k={k}"
    return f"10 points, symmetric {worst_both:.1e}, single {least_one:.1e} (relative to scale)"


@criterion(7, "Aomoto relations")
def test_aomoto():
    box = ((-2.5, 1.0), (-2.5, 1.0), (-0.3, 0.6))
    worst = {}
    for shape in ((1, 0, 0), (1, 1, 0)):
        r = rng(70 + sum(shape))
        tag = f"three-term {shape}"
        worst[tag] = 0.0
        for _ in range(50):
            p = generic_point(r, shape, box=box, accept=lambda q: three_term_admissible(shape, q))
            for sign in (+1, -1):
                rep = check_aomoto_three_term(shape, None, p, sign)
                worst[tag] = max(worst[tag], rep.residual)
                assert rep.passed, f"{rep.identity_tag} residual {rep.residual:.2e} at {p}"
    for N in (1, 2):
        r = rng(80 + N)
        tag = f"sine ratio N={N}"
        worst[tag] = 0.0
        done = 0
        while done < 50:
            p = symmetric_point(r, [(0, N, 0), (0, 0, N), (N, 0, 0)],
                                box=((-0.95, 0.5), (-0.95, 0.5), (-0.45, 0.5)))
            reps = [check_aomoto_ratio(N, None, p, v) for v in (0, 1)]
            if any(rep.skipped_reason for rep in reps):
                continue
            for rep in reps:
                worst[tag] = max(worst[tag], rep.residual)
                assert rep.passed, f"{rep.identity_tag} residual {rep.residual:.2e} at {p}"
            done += 1
    return ", ".join(f"{k} worst {v:.1e}" for k, v in worst.items())


@criterion(8, "symmetrization and bubble sort")
def test_symmetrization():
    r = rng(8)
    worst = 0.0
    for _ in range(50):
        p = symmetric_point(r, [(0, 2, 0)], box=((-0.9, 1.5), (-0.9, 1.5), (-0.4, 1.2)))
        g = p.gamma
        # cube side from the two-ordering closed form, ordered side by quadrature
        lhs = i2_closed(p.generic(2))
        rhs = (1 + cmath.exp(2j * math.pi * g)) * selberg_quad((0, 2, 0), LaurentPoly.constant(2),
                                                               p.generic(2)).value
        err = abs(lhs - rhs) / abs(lhs)
        worst = max(worst, err)
        assert err <= 1e-7, f"rel err {err:.2e} at {p}"
    r = random.Random(88)
    for N in range(1, 7):
        for _ in range(20):
            while True:
                z = complex(r.uniform(-1.3, 1.3), r.uniform(-1.3, 1.3))
                if all(abs(z ** n - 1) > 1e-3 for n in range(1, N + 1)):
                    break
            rep = bubble_sort_identity(N, z, 1e-12)
            assert rep.passed, f"bubble sort N={N} residual {rep.residual:.2e}"
    return f"50 points, worst {worst:.1e}; bubble sort N<=6"


@criterion(9, "regularized value stays bounded near stripped hyperplanes")
def test_regularized_bounded():
    F = LaurentPoly.make(2, {(2, 0): 1, (0, 2): 1})
    planes = stripped_hyperplanes(F, 0.5, 1 / 3, -6.0, 0.0)
    assert planes, "no hyperplanes found"
    biggest, worst_growth = 0.0, 0.0
    for h in planes:
        for side in (-1, 1):
            vals = [abs(regularized_s2(F, (h + side * d, 0.5, 1 / 3))) for d in (1e-1, 1e-2, 1e-3)]
            biggest = max(biggest, *vals)
            assert max(vals) <= 1e6, f"value {max(vals):.2e} near alpha={h}"
            for far, near in zip(vals, vals[1:]):
                growth = near / far
                worst_growth = max(worst_growth, growth)
                assert growth <= 1.5, f"growth {growth:.2f} per decade near alpha={h}"
    return f"{len(planes)} hyperplanes, max |value| {biggest:.3g}, worst growth {worst_growth:.2f}"


@criterion(10, "two-particle DF claim")
def test_df_claim():
    reps = [df_n2_claim(a, b, "equal") for a, b in ((2, 3), (1.5, 2.5), (3, 3))]
    for rep in reps:
        rel = rep.extra["relative_residual"]
        assert rel <= 1e-4, f"relative residual {rel:.2e} at {rep.point}"
    signs = {rep.extra["sign"] for rep in reps}
    assert len(signs) == 1, "sign of lhs/rhs changes"
    worst = max(rep.extra["relative_residual"] for rep in reps)
    return f"slot convention 'equal', sign {signs.pop():+d}, worst {worst:.1e}"


def _subsets(items):
    items = list(items)
    for n in range(len(items) + 1):
        yield from (set(c) for c in itertools.combinations(items, n))


@criterion(11, "boundary defining function identities")
def test_bdf_identities():
    r = random.Random(11)
    worst = 0.0
    for i in range(1000):
        N = 1 + i % 5
        x = [r.uniform(0.001, 0.999) for _ in range(N)]
        for j in range(1, N + 1):
            prod = math.prod(bdf_value(S, x) for S in _subsets(range(1, N + 1)) if j in S)
            err = abs(prod - x[j - 1]) / x[j - 1]
            worst = max(worst, err)
            assert err <= 1e-12, f"lift error {err:.2e}"
        for M in range(1, N):
            for Q in (q for q in _subsets(range(1, M + 1)) if q):
                lhs = bdf_value(Q, x[:M])
                rhs = math.prod(bdf_value(Q | Q0, x) for Q0 in _subsets(range(M + 1, N + 1)))
                err = abs(lhs - rhs) / lhs
                worst = max(worst, err)
                assert err <= 1e-12, f"forgetful error {err:.2e}"
    return f"1000 points, worst {worst:.1e}"


def _regular_elsewhere(a, b, g, j0, gap=0.05):
    args = []
    for j in (1, 2):
        args += [1 + a + (j - 1) * g, 1 + b + (j - 1) * g]
        if j != j0:
            args.append(2 + a + b + j * g)
    args += [1 + g, 1 + 2 * g]
    return all(x > 0 or abs(x - round(x)) >= gap for x in args)


@criterion(12, "truncation zeros")
def test_truncation_zeros():
    r = random.Random(12)
    worst = 0.0
    done = 0
    while done < 10:
        a, b = round(r.uniform(-0.9, 1.5), 4), round(r.uniform(-0.9, 1.5), 4)
        j, n = r.choice((1, 2)), r.randint(0, 2)
        g = (-n - 2 - a - b) / j
        if not _regular_elsewhere(a, b, g, j):
            continue
        v = abs(selberg_closed(2, SymmetricParams(a, b, g)))
        worst = max(worst, v)
        assert v <= 1e-10, f"|value| {v:.2e} at ({a}, {b}, {g})"
        done += 1
    return f"10 points, max |value| {worst:.1e}"


if __name__ == "__main__":
    failed = False
    for name, fn in list(globals().items()):
        if name.startswith("test_"):
            try:
                fn()
            except AssertionError:
                failed = True
    print("\n".join(summary_lines()))
    sys.exit(1 if failed else 0)
