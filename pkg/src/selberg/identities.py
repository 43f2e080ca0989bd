"""Numerical checks of the symmetrization, Aomoto, Moebius and DF relations.

Every check computes both sides by independent routes (quadrature against
quadrature, or quadrature against a closed form) and returns an
IdentityReport.
"""
import cmath
import math
from dataclasses import dataclass, field
from itertools import permutations

from .combinatorics import RegionShape
from .continuation import i2_closed
from .errors import PoleAt, SineTooSmall
from .functionals import GenericParams, LaurentPoly, SymmetricParams, omega_margin
from .quadrature import (_inverse, contour_df2, contour_i2, df_point, df_quad,
                         selberg_quad, theta_phase)
from .special import gamma, rgamma, sinpi

SINE_GUARD = 1e-6


def _cj(z):
    z = complex(z)
    return [z.real, z.imag]


@dataclass
class IdentityReport:
    lhs: complex
    rhs: complex
    residual: float
    tolerance: float
    passed: bool
    identity_tag: str
    point: dict = field(default_factory=dict)
    skipped_reason: str = None
    extra: dict = field(default_factory=dict)

    @classmethod
    def compare(cls, tag, lhs, rhs, tol, point=None, **extra):
        lhs, rhs = complex(lhs), complex(rhs)
        res = abs(lhs - rhs) / max(1.0, abs(lhs), abs(rhs))
        return cls(lhs, rhs, res, tol, bool(res <= tol), tag, point or {}, None, extra)

    @classmethod
    def skipped(cls, tag, reason, point=None):
        nan = complex("nan")
        return cls(nan, nan, math.nan, 0.0, True, tag, point or {}, reason)

    def to_json(self):
        out = {"tag": self.identity_tag, "point": self.point, "lhs": _cj(self.lhs),
               "rhs": _cj(self.rhs), "residual": self.residual, "passed": self.passed}
        if self.skipped_reason:
            out["skipped_reason"] = self.skipped_reason
        out.update(self.extra)
        return out


def _shape(shape):
    if isinstance(shape, RegionShape):
        return shape
    if isinstance(shape, int):
        return RegionShape(0, shape, 0)
    return RegionShape(*shape)


def _sym_point(p):
    return {"alpha": _cj(p.alpha), "beta": _cj(p.beta), "gamma": _cj(p.gamma)}


# ----------------------------------------------------------------- symmetrization

def inversions(sigma):
    return sum(1 for i in range(len(sigma)) for j in range(i + 1, len(sigma))
               if sigma[i] > sigma[j])


def bubble_sort_identity(N, zeta, tol=1e-12):
    """sum over S_N of zeta**inv(sigma) against prod (1-zeta**n)/(1-zeta)."""
    zeta = complex(zeta)
    lhs = sum(zeta ** inversions(s) for s in permutations(range(N)))
    rhs = 1 + 0j
    for n in range(1, N + 1):
        rhs *= (1 - zeta ** n) / (1 - zeta)
    return IdentityReport.compare("bubble_sort", lhs, rhs, tol,
                                  {"N": N, "zeta": _cj(zeta)})


def symmetrization_factor(shape, g):
    """prod over blocks of prod_{k<=size} (1 - e^{2 pi i k g})/(1 - e^{2 pi i g})."""
    out = 1 + 0j
    q = cmath.exp(2j * math.pi * g)
    for size in (shape.l, shape.m, shape.n):
        for k in range(1, size + 1):
            out *= k if abs(1 - q) < 1e-14 else (1 - q ** k) / (1 - q)
    return out


def check_symmetrization(shape, F, p, tol=1e-7, s=None, route="auto"):
    """Cube integral against factor x ordered integral.

    route "closed" takes the cube side from the two-ordering hypergeometric
    formula (N = 2, F = 1 only); "quad" sums quadratures over orderings.
    """
    shape = _shape(shape)
    if isinstance(p, SymmetricParams):
        p = p.generic(shape.N)
    F = F if F is not None else LaurentPoly.constant(shape.N)
    gs = {complex(v) for _, v in p.gamma}
    if len(gs) > 1:
        raise ValueError("symmetrization needs a constant gamma")
    g = gs.pop() if gs else 0j
    S = selberg_quad(shape, F, p, s)
    fac = symmetrization_factor(shape, g)
    use_closed = (route == "closed" or route == "auto" and shape.as_tuple() == (0, 2, 0)
                  and F.approx_equal(LaurentPoly.constant(2)))
    if use_closed:
        lhs = i2_closed(p)
        tag = "symmetrization/closed"
    else:
        lhs = df_quad(shape, F, p, s).value
        tag = "symmetrization/quad"
    return IdentityReport.compare(tag, lhs, fac * S.value, tol, p.to_json(),
                                  shape=list(shape.as_tuple()), err_est=S.err_est)


# ----------------------------------------------------------------- Aomoto relations

def sigma_insert(N, j):
    """sigma_j = (1 j j-1 ... 2): 1 -> j, i -> i-1 for 2 <= i <= j."""
    out = list(range(1, N + 1))
    out[0] = j
    for i in range(2, j + 1):
        out[i - 1] = i - 1
    return tuple(out)


def act(p, F, sigma):
    """(params, F)**sigma: the value carried by slot i moves to slot sigma(i)."""
    inv = _inverse(sigma)
    return p.permuted(inv), F.permute(sigma)


def _gsum(p, j):
    return sum((p.g(1, k) for k in range(2, j + 1)), 0j)


def three_term_terms(shape, p):
    """(shape, params) of every integral in the three-term relation."""
    shape = _shape(shape)
    l, m, n, N = shape.l, shape.m, shape.n, shape.N
    F = LaurentPoly.constant(N)
    out = []
    for shp, js in (((l, m, n), range(1, l + 1)), ((l - 1, m + 1, n), range(l, l + m + 1)),
                    ((l - 1, m, n + 1), range(l + m, N + 1))):
        for j in js:
            out.append((RegionShape(*shp), act(p, F, sigma_insert(N, j))[0]))
    return out


def three_term_admissible(shape, p, margin=0.1):
    return all(omega_margin(shp, q) >= margin for shp, q in three_term_terms(shape, p))


def check_aomoto_three_term(shape, F, p, sign=+1, tol=1e-6, s=None):
    """Three families of ordered integrals with phases; they sum to zero.

    Reported as lhs = first family, rhs = minus the other two.
    """
    shape = _shape(shape)
    l, m, n, N = shape.l, shape.m, shape.n, shape.N
    if l < 1:
        raise ValueError("three-term relation needs l >= 1")
    F = F if F is not None else LaurentPoly.constant(N)
    a1, b1 = complex(p.alpha[0]), complex(p.beta[0])
    sg = 1 if sign in (+1, "+") else -1
    groups = (((l, m, n), range(1, l + 1), lambda j: 2 * math.pi * _gsum(p, j)),
              ((l - 1, m + 1, n), range(l, l + m + 1),
               lambda j: math.pi * a1 + 2 * math.pi * _gsum(p, j)),
              ((l - 1, m, n + 1), range(l + m, N + 1),
               lambda j: math.pi * (a1 + b1) + 2 * math.pi * _gsum(p, j)))
    sums = []
    err = 0.0
    for shp, js, phase in groups:
        tot = 0j
        for j in js:
            q, Fq = act(p, F, sigma_insert(N, j))
            r = selberg_quad(shp, Fq, q, s)
            tot += cmath.exp(sg * 1j * phase(j)) * r.value
            err += r.err_est
        sums.append(tot)
    tag = f"aomoto_three_term/{l},{m},{n}/{'+' if sg > 0 else '-'}"
    return IdentityReport.compare(tag, sums[0], -(sums[1] + sums[2]), tol, p.to_json(),
                                  err_est=err)


def _sines(values):
    for v in values:
        if abs(sinpi(v)) < SINE_GUARD:
            raise SineTooSmall(f"sin(pi*{complex(v)}) below {SINE_GUARD}")
    return [sinpi(v) for v in values]


def aomoto_ratio_factor(N, p, variant=0):
    a, b, g = complex(p.alpha), complex(p.beta), complex(p.gamma)
    other = a if variant == 0 else b
    num = _sines([a + b + (N + m - 1) * g for m in range(N)])
    den = _sines([other + m * g for m in range(N)])
    out = (-1) ** N + 0j
    for x, y in zip(num, den):
        out *= x / y
    return out


def check_aomoto_ratio(N, F, p, variant=0, tol=1e-6, s=None):
    """Middle ordered integral against the right (variant 0) or left (1) one."""
    if isinstance(p, tuple):
        p = SymmetricParams(*p)
    F = F if F is not None else LaurentPoly.constant(N)
    try:
        fac = aomoto_ratio_factor(N, p, variant)
    except SineTooSmall as exc:
        return IdentityReport.skipped(f"aomoto_ratio/{variant}", str(exc), _sym_point(p))
    gp = p.generic(N)
    mid = selberg_quad((0, N, 0), F, gp, s)
    outer = selberg_quad((0, 0, N) if variant == 0 else (N, 0, 0), F, gp, s)
    return IdentityReport.compare(f"aomoto_ratio/{variant}/N={N}", mid.value,
                                  fac * outer.value, tol, _sym_point(p),
                                  err_est=mid.err_est + abs(fac) * outer.err_est)


def check_aomoto_step(N, n, F, p, tol=1e-6, s=None):
    """One step of the recursion: S_{0,N-n,n} against S_{0,N-n-1,n+1}."""
    if isinstance(p, tuple):
        p = SymmetricParams(*p)
    a, b, g = complex(p.alpha), complex(p.beta), complex(p.gamma)
    F = F if F is not None else LaurentPoly.constant(N)
    try:
        num = _sines([a + b + (2 * N - n - 2) * g, (n + 1) * g])
        den = _sines([a + (N - n - 1) * g, (N - n) * g])
    except SineTooSmall as exc:
        return IdentityReport.skipped("aomoto_step", str(exc), _sym_point(p))
    fac = -num[0] * num[1] / (den[0] * den[1])
    gp = p.generic(N)
    lhs = selberg_quad((0, N - n, n), F, gp, s).value
    rhs = fac * selberg_quad((0, N - n - 1, n + 1), F, gp, s).value
    return IdentityReport.compare(f"aomoto_step/N={N}/n={n}", lhs, rhs, tol, _sym_point(p))


# ----------------------------------------------------------------- Moebius maps

MOEBIUS = {
    "1": {"0": "0", "1": "1", "inf": "inf"},
    "(0 1)": {"0": "1", "1": "0", "inf": "inf"},
    "(0 inf)": {"0": "inf", "inf": "0", "1": "1"},
    "(1 inf)": {"1": "inf", "inf": "1", "0": "0"},
    "(0 1 inf)": {"0": "1", "1": "inf", "inf": "0"},
    "(0 inf 1)": {"0": "inf", "inf": "1", "1": "0"},
}
_ALIASES = {"(1 0 inf)": "(0 inf 1)", "(1 inf 0)": "(0 1 inf)", "(inf 0 1)": "(0 1 inf)",
            "(inf 1 0)": "(0 inf 1)", "(1 0)": "(0 1)", "(inf 0)": "(0 inf)",
            "(inf 1)": "(1 inf)", "id": "1"}
_ARCS = (("inf", "0"), ("0", "1"), ("1", "inf"))  # blocks I1, I2, I3


def _moebius_key(sigma):
    key = " ".join(str(sigma).replace("∞", "inf").split())
    key = _ALIASES.get(key, key)
    if key not in MOEBIUS:
        raise ValueError(f"unknown permutation of {{0,1,inf}}: {sigma!r}")
    return key


def moebius_param_map(sigma, shape, p):
    """(new shape, new GenericParams, reversal flag) after y = T_sigma(x).

    Variables keep their block order when T_sigma preserves orientation and
    are reversed inside every block when it does not (odd sigma).
    """
    key = _moebius_key(sigma)
    img = MOEBIUS[key]
    shape = _shape(shape)
    N = shape.N
    rev = key in ("(0 1)", "(0 inf)", "(1 inf)")
    old_blocks = shape.blocks
    counts = [0, 0, 0]
    src = [None, None, None]
    for b, (u, v) in enumerate(_ARCS):
        tgt = {img[u], img[v]}
        nb = next(i for i, arc in enumerate(_ARCS) if set(arc) == tgt)
        counts[nb] = len(old_blocks[b])
        src[nb] = old_blocks[b]
    new_shape = RegionShape(*counts)
    order = []
    for blk in src:
        order += list(reversed(blk)) if rev else list(blk)
    # per old variable: new alpha/beta from the table
    gsum = [sum((p.g(j, k) for k in range(1, N + 1) if k != j), 0j) for j in range(1, N + 1)]
    A = [complex(x) for x in p.alpha]
    B = [complex(x) for x in p.beta]
    C = [-2 - A[j] - B[j] - 2 * gsum[j] for j in range(N)]
    table = {"1": (A, B), "(0 1)": (B, A), "(0 inf)": (C, B), "(1 inf)": (A, C),
             "(0 1 inf)": (C, A), "(0 inf 1)": (B, C)}
    na, nbeta = table[key]
    alpha = [na[i - 1] for i in order]
    beta = [nbeta[i - 1] for i in order]
    gam = {(j, k): p.g(order[j - 1], order[k - 1])
           for j in range(1, N + 1) for k in range(j + 1, N + 1)}
    return new_shape, GenericParams.make(alpha, beta, gam), rev


def check_moebius(sigma, shape, p, tol=1e-7, s=None):
    shape = _shape(shape)
    new_shape, q, rev = moebius_param_map(sigma, shape, p)
    N = shape.N
    one = LaurentPoly.constant(N)
    lhs = selberg_quad(shape, one, p, s).value
    rhs = selberg_quad(new_shape, one, q, s).value
    return IdentityReport.compare(f"moebius/{_moebius_key(sigma)}", lhs, rhs, tol, p.to_json(),
                                  new_shape=list(new_shape.as_tuple()), reversed=rev)


# ----------------------------------------------------------------- DF relations

def _s_preserving_generators(N, S):
    S = sorted(S)
    T = [i for i in range(1, N + 1) if i not in S]
    gens = []
    for blk in (S, T):
        for a, b in zip(blk, blk[1:]):
            perm = list(range(1, N + 1))
            perm[a - 1], perm[b - 1] = b, a
            gens.append(tuple(perm))
    return gens


def dfsym_check(F, S, lam, tol=1e-12):
    """(True, None) when F lies in DFSym(N, S, lam), else (False, first bad pair)."""
    N = F.N
    S = set(S)
    for perm in _s_preserving_generators(N, S):
        if not F.permute(perm).approx_equal(F, tol):
            return False, tuple(i for i in range(1, N + 1) if perm[i - 1] != i)
    for j in sorted(S):
        for k in range(1, N + 1):
            if k in S:
                continue
            lhs = F.derivative(j).set_equal(j, k) * lam
            rhs = F.set_equal(j, k).derivative(k)
            if not lhs.approx_equal(rhs, tol):
                return False, (j, k)
    return True, None


def df_species(alpha_plus, beta_plus, gamma_plus):
    gm = 1.0 / complex(gamma_plus)
    return {"+": (complex(alpha_plus), complex(beta_plus), complex(gamma_plus)),
            "-": (-gm * alpha_plus, -gm * beta_plus, gm)}


def df_product_formula(n_minus, n_plus, alpha_plus, beta_plus, gamma_plus, sign=+1):
    """The product claimed proportional to the DF integral, for one sign choice.

    sign +1 reads the upper signs (the + species first), -1 the lower ones.
    """
    if complex(gamma_plus) == 0:
        raise PoleAt("gamma_plus=0", "df_product_formula")
    sp = df_species(alpha_plus, beta_plus, gamma_plus)
    cnt = {"+": n_plus, "-": n_minus}
    first, second = ("+", "-") if sign in (+1, "+") else ("-", "+")
    a1, b1, g1 = sp[first]
    a2, b2, g2 = sp[second]
    N1, N2 = cnt[first], cnt[second]
    out = g2 ** (2 * n_minus * n_plus) + 0j
    # Gamma(w) sin(pi w) = pi / Gamma(1 - w) keeps the sine-Gamma pairs entire
    for j in range(1, N1 + 1):
        out *= cmath.exp(-1j * math.pi * (j - 1) * g1) * rgamma(1 - j * g1) / rgamma(1 - g1)
    for j in range(1, N2 + 1):
        out *= ((-1) ** N1 * cmath.exp(-1j * math.pi * (j - 1) * g2)
                * rgamma(1 + N1 - j * g2) / rgamma(1 - g2))
    for j in range(1, N1 + 1):
        out *= (gamma(1 + a1 + (j - 1) * g1) * gamma(1 + b1 + (j - 1) * g1)
                * rgamma(2 - 2 * N2 + a1 + b1 + (N1 - 2 + j) * g1))
    for j in range(1, N2 + 1):
        out *= (gamma(1 + a2 + (j - 1) * g2 - N1) * gamma(1 + b2 + (j - 1) * g2 - N1)
                * rgamma(2 - N1 + a2 + b2 + (N2 - 2 + j) * g2))
    return out


def df_n2_value(alpha_plus, beta_plus, gamma_plus, S=(1,), s=None):
    """N = 2, one particle of each species, gamma_0 = -1, by the contour formula."""
    sp = df_species(alpha_plus, beta_plus, gamma_plus)
    first = "+" if 1 in S else "-"
    second = "-" if first == "+" else "+"
    a1, b1, _ = sp[first]
    a2, b2, _ = sp[second]
    return contour_i2(a1, a2, b1, b2, -1.0, s=s).value


def df_n2_claim_rhs(alpha_plus, beta_plus):
    a, b = complex(alpha_plus), complex(beta_plus)
    return -(gamma(1 + a) * gamma(1 + b) * gamma(a) * gamma(b)
             * rgamma(1 + a + b) * rgamma(a + b)) / 2


def df_n2_claim(alpha_plus, beta_plus, convention="equal", tol=1e-4, s=None):
    """Contour value at the DF point against the two-particle product.

    The residual compares magnitudes; the sign of lhs/rhs is reported.
    """
    lhs = contour_df2(alpha_plus, beta_plus, -1.0, s=s, convention=convention).value
    rhs = df_n2_claim_rhs(alpha_plus, beta_plus)
    rep = IdentityReport.compare(f"df_n2_claim/{convention}", abs(lhs), abs(rhs), tol,
                                 {"alpha_plus": _cj(alpha_plus), "beta_plus": _cj(beta_plus)})
    ratio = lhs / rhs
    rep.extra = {"convention": convention, "slots": [_cj(v) for v in
                                                     df_point(alpha_plus, beta_plus, -1.0, convention)],
                 "sign": 1 if ratio.real > 0 else -1, "ratio": _cj(ratio),
                 "signed_lhs": _cj(lhs), "signed_rhs": _cj(rhs)}
    # both sides are small, so the pass decision uses the relative error
    rel = abs(abs(lhs) - abs(rhs)) / abs(rhs)
    rep.extra["relative_residual"] = rel
    rep.passed = bool(rel <= tol)
    return rep


__all__ = ["IdentityReport", "theta_phase", "inversions", "bubble_sort_identity",
           "symmetrization_factor", "check_symmetrization", "sigma_insert",
           "check_aomoto_three_term", "three_term_terms", "three_term_admissible", "aomoto_ratio_factor", "check_aomoto_ratio",
           "check_aomoto_step", "moebius_param_map", "check_moebius", "dfsym_check",
           "df_product_formula", "df_n2_value", "df_n2_claim", "df_n2_claim_rhs",
           "MOEBIUS"]
