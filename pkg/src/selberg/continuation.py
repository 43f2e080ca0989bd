"""Meromorphic continuation of the two-point integral, closed forms, Gamma
factorizations, regularized values and residues.

The one-dimensional step is the classical one: for

    int_0^T t**rho psi(t) dt

subtract the Taylor polynomial of psi of degree J, integrate it exactly and
keep the remainder, which is integrable for Re rho > -J-2.
"""
import cmath
import math
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .combinatorics import RegionShape, enumerate_k_faces
from .errors import (ChartNotCovered, InsufficientOrder, LaurentInput,
                     LimitDisagreement, PoleAt, PoleHit, UnsupportedShape)
from .functionals import (Affine, GenericParams, LaurentPoly, SymmetricParams,
                          cluster_functional, cluster_order, face_cluster,
                          vanishing_profile)
from .quadrature import power_quad, power_rule
from .special import (beta_mero, digamma_factor, gamma, hyp3f2_at1, rgamma)

DEFAULT_J = 12
DEFAULT_T = 0.5
POLE_HIT = 1e-9
CHART_MARGIN = 0.02
LIMIT_STEP = 1e-3
LIMIT_TOL = 1e-5
_EXTRA_TERMS = 90  # series terms beyond J used for the remainder at t <= radius/2


# ----------------------------------------------------------------- 1-d step

def _binomial_series(b, n):
    """Coefficients of (1-t)**b up to t**(n-1)."""
    out = np.empty(n, dtype=complex)
    out[0] = 1.0
    for k in range(1, n):
        out[k] = out[k - 1] * (k - 1 - b) / k
    return out


class TaylorOracle:
    """Taylor data of a smooth factor psi at t = 0.

    coeff(n) returns the first n coefficients.  value(t) (vectorised) is only
    needed when the remainder is evaluated beyond half the radius.
    """

    def __init__(self, coeff, value=None, radius=1.0, degree=None):
        self._coeff = coeff
        self._cache = np.zeros(0, dtype=complex)
        self.value = value
        self.radius = radius
        self.degree = degree

    def coeffs(self, n):
        if len(self._cache) < n:
            c = self._coeff
            got = np.asarray(c(n) if callable(c) else c, dtype=complex)
            if len(got) < n:
                got = np.concatenate([got, np.zeros(n - len(got), dtype=complex)])
            self._cache = got[:max(n, len(got))]
        return self._cache[:n]

    @classmethod
    def polynomial(cls, coeffs):
        coeffs = np.asarray(coeffs, dtype=complex)
        return cls(coeffs, lambda t: np.polyval(coeffs[::-1], t),
                   radius=math.inf, degree=len(coeffs) - 1)

    @classmethod
    def binomial(cls, b):
        """psi(t) = (1-t)**b."""
        b = complex(b)
        def value(t):
            # t = 1 gives log 0; the endpoint node never carries weight
            with np.errstate(divide="ignore", invalid="ignore"):
                return np.exp(b * np.log1p(-np.asarray(t, dtype=float)))

        return cls(lambda n: _binomial_series(b, n), value, radius=1.0)

    @classmethod
    def product(cls, first, second):
        def coeff(n):
            return np.convolve(first.coeffs(n), second.coeffs(n))[:n]

        def value(t):
            return first.value(t) * second.value(t)

        deg = None
        if first.degree is not None and second.degree is not None:
            deg = first.degree + second.degree
        return cls(coeff, value, min(first.radius, second.radius), deg)


def _needed_order(re_rho, J):
    return max(J, int(math.ceil(-re_rho)) + 2)


def continue_1d(rho, oracle, T=DEFAULT_T, J=DEFAULT_J, tail=None):
    """Continued value of int_0^1 t**rho psi(t) dt, split at T.

    tail: None integrates t**rho psi over [T, 1] directly, a callable is
    called with no arguments, a number is added as is.
    """
    rho = complex(rho)
    if not 0 < T <= 1:
        raise ValueError("T must lie in (0, 1]")
    if rho.real <= -J - 2:
        raise InsufficientOrder(f"Re rho = {rho.real:.6g} needs J > {-rho.real - 2:.6g}")
    for j in range(J + 1):
        if abs(rho + j + 1) < 1e-12:
            raise PoleHit(f"rho+{j + 1}", rho)
    nmax = J + 1 + _EXTRA_TERMS
    c = oracle.coeffs(nmax)
    head = 0j
    for j in range(J + 1):
        e = rho + j + 1
        head += c[j] * cmath.exp(e * math.log(T)) / e
    rem = 0j
    if oracle.degree is None or oracle.degree > J:
        tail_c = c[J + 1:][::-1]
        poly = c[:J + 1][::-1]
        cut = 0.5 * oracle.radius

        def E(t):
            t = np.asarray(t, dtype=float)
            out = np.polyval(tail_c, t).astype(complex)
            far = t > cut
            if np.any(far):
                tf = t[far]
                out[far] = (oracle.value(tf) - np.polyval(poly, tf)) / tf ** (J + 1)
            return out

        rem, _ = power_quad(E, 0.0, T, rho + J + 1, 0.0, target=1e-14, max_level=9)
    if tail is None:
        if T < 1:
            val = oracle.value
            tail_v, _ = power_quad(lambda t: np.exp(rho * np.log(t)) * val(t), T, 1.0,
                                   target=1e-14, max_level=9)
        else:
            tail_v = 0j
    elif callable(tail):
        tail_v = tail()
    else:
        tail_v = complex(tail)
    return head + rem + tail_v


def beta_continued(alpha, beta, J=DEFAULT_J):
    """int_0^1 x**alpha (1-x)**beta continued in both exponents (split at 1/2)."""
    alpha, beta = complex(alpha), complex(beta)
    left = continue_1d(alpha, TaylorOracle.binomial(beta), 0.5,
                       _needed_order(alpha.real, J), tail=0.0)
    right = continue_1d(beta, TaylorOracle.binomial(alpha), 0.5,
                        _needed_order(beta.real, J), tail=0.0)
    return left + right


# ----------------------------------------------------------------- N = 2

def _near_pole(z, tol=POLE_HIT):
    """Return n if z is within tol of the nonpositive integer -n."""
    z = complex(z)
    if abs(z.imag) > tol:
        return None
    n = round(z.real)
    if n <= 0 and abs(z.real - n) < tol:
        return -n
    return None


def _unpack2(p):
    if isinstance(p, GenericParams):
        if p.N != 2:
            raise UnsupportedShape("two-point routine needs N = 2")
        return (complex(p.alpha[0]), complex(p.alpha[1]), complex(p.beta[0]),
                complex(p.beta[1]), complex(p.g(1, 2)))
    a1, a2, b1, b2, g = p
    return complex(a1), complex(a2), complex(b1), complex(b2), complex(g)


def _pole_checks(a1, a2, b2, g2):
    """Genuine pole families of one monomial in the primary chart."""
    for name, z in (("1+alpha1", 1 + a1), ("2+alpha1+alpha2+2gamma12", 2 + a1 + a2 + g2),
                    ("1+beta2", 1 + b2), ("1+2gamma12", 1 + g2)):
        if _near_pole(z) is not None:
            raise PoleHit(name, z)


def _psi_series(a1, b1, b2, g2, n):
    """Coefficients of rho**k in int_0^1 lam**a1 (1-lam)**g2 (1-lam rho)**b1 (1-rho)**b2."""
    B = np.empty(n, dtype=complex)
    for q in range(n):
        B[q] = beta_mero(a1 + q, g2)
    return np.convolve(_binomial_series(b1, n) * B, _binomial_series(b2, n))[:n]


def _corner_sectors(a1, rA, b1, b2, g2, target=1e-13):
    """The [1/2,1]^2 corner in (mu, nu) = (1-lam, 1-rho), split along mu = nu."""
    e = 1 + g2 + b1 + b2
    prev = None
    for level in range(3, 9):
        xo, wo = power_rule(0.0, 0.5, e, 0.0, level)
        s1, w1 = power_rule(0.0, 1.0, b2, 0.0, level)
        s2, w2 = power_rule(0.0, 1.0, g2, 0.0, level)
        mu = xo[:, None]
        s = s1[None, :]
        f1 = np.exp(b1 * np.log1p(s - mu * s) + a1 * np.log1p(-mu) + rA * np.log1p(-mu * s))
        s = s2[None, :]
        f2 = np.exp(b1 * np.log1p(s - mu * s) + a1 * np.log1p(-mu * s) + rA * np.log1p(-mu))
        total = complex(wo @ f1 @ w1 + wo @ f2 @ w2)
        if prev is not None and abs(total - prev) <= target * max(abs(total), 1e-300):
            return total
        prev = total
    return total


def _s2_primary(a1, a2, b1, b2, g2, J=DEFAULT_J):
    """S2 for one monomial via rho = x2, lam = x1/x2 (exponent 2gamma passed as g2)."""
    _pole_checks(a1, a2, b2, g2)
    rA = 1 + a1 + a2 + g2
    JA = _needed_order(rA.real, J)
    JB = _needed_order(a1.real, J)
    n = max(JA, JB) + 1 + _EXTRA_TERMS
    psi = TaylorOracle(_psi_series(a1, b1, b2, g2, n), radius=1.0)

    def part_b():
        # lam in [0, 1/2], rho in [1/2, 1]: series in lam with moments in rho
        q = np.arange(n)
        M, _ = power_quad(lambda r: np.exp((rA + q[:, None]) * np.log(r)[None, :]),
                          0.5, 1.0, 0.0, b2, target=1e-14, max_level=9)
        c = np.convolve(_binomial_series(g2, n), _binomial_series(b1, n) * M)[:n]
        b1_part = continue_1d(a1, TaylorOracle(c, radius=1.0), 0.5, JB, tail=0.0)
        return b1_part + _corner_sectors(a1, rA, b1, b2, g2)

    return continue_1d(rA, psi, 0.5, JA, tail=part_b)


def _chart_ok(b1, b2, g2, margin=CHART_MARGIN):
    return (b2.real > -1 + margin and g2.real > -1 + margin
            and (b1 + b2 + g2).real > -2 + margin)


def _mirror_terms(F):
    """Monomials of F(1-y2, 1-y1) as (coeff, (e1, e2))."""
    if not F.is_polynomial():
        raise LaurentInput("the mirrored chart needs a polynomial weight")
    out = {}
    for (d1, d2), c in F.terms:
        for i in range(d2 + 1):
            for j in range(d1 + 1):
                w = c * math.comb(d2, i) * math.comb(d1, j) * (-1) ** (i + j)
                out[(i, j)] = out.get((i, j), 0) + w
    return [(c, e) for e, c in out.items() if c != 0]


def continue_s2(p, F=None, J=DEFAULT_J):
    """Continued value of S2[F] = int_{0<x1<x2<1} F x^alpha (1-x)^beta |x2-x1|^{2gamma}."""
    a1, a2, b1, b2, g = _unpack2(p)
    g2 = 2 * g
    F = F if F is not None else LaurentPoly.constant(2)
    if F.N != 2:
        raise UnsupportedShape("weight must have two variables")
    if _chart_ok(b1, b2, g2):
        return sum(complex(c) * _s2_primary(a1 + d1, a2 + d2, b1, b2, g2, J)
                   for (d1, d2), c in F.terms)
    if _chart_ok(a2, a1, g2):
        return sum(complex(c) * _s2_primary(b2 + e1, b1 + e2, a2, a1, g2, J)
                   for c, (e1, e2) in _mirror_terms(F))
    raise ChartNotCovered("both corner families continued at once; neither chart applies")


# ----------------------------------------------------------------- closed forms

def _pole_name(fn, name):
    try:
        return fn()
    except PoleAt as exc:
        raise PoleHit(name, getattr(exc, "where", None)) from exc


def s2_closed(p, mirrored=False):
    """Hypergeometric closed form of S2 (F = 1); mirrored uses x -> 1-x."""
    a1, a2, b1, b2, g = _unpack2(p)
    if mirrored:
        a1, a2, b1, b2 = b2, b1, a2, a1
    g2 = 2 * g
    num = (_pole_name(lambda: gamma(1 + a1), "1+alpha1")
           * _pole_name(lambda: gamma(1 + b2), "1+beta2")
           * _pole_name(lambda: gamma(2 + g2 + a1 + a2), "2+alpha1+alpha2+2gamma12")
           * _pole_name(lambda: gamma(1 + g2), "1+2gamma12"))
    den = rgamma(2 + a1 + g2) * rgamma(3 + a1 + a2 + b2 + g2)
    f = hyp3f2_at1((1 + a1, -b1, 2 + g2 + a1 + a2), (2 + a1 + g2, 3 + a1 + a2 + b2 + g2))
    return num * den * f


def s2_closed_poly(F, p, mirrored=False):
    a1, a2, b1, b2, g = _unpack2(p)
    return sum(complex(c) * s2_closed((a1 + d1, a2 + d2, b1, b2, g), mirrored)
               for (d1, d2), c in F.terms)


def i2_closed(p):
    """Cube integral with (x2 - x1 + i0)**{2gamma}: both orderings of the closed form."""
    a1, a2, b1, b2, g = _unpack2(p)
    g2 = 2 * g
    pre = gamma(2 + g2 + a1 + a2) * gamma(1 + g2)
    first = (gamma(1 + a1) * gamma(1 + b2) * rgamma(2 + a1 + g2)
             * rgamma(3 + a1 + a2 + b2 + g2)
             * hyp3f2_at1((1 + a1, -b1, 2 + g2 + a1 + a2), (2 + a1 + g2, 3 + a1 + a2 + b2 + g2)))
    second = (gamma(1 + a2) * gamma(1 + b1) * rgamma(2 + a2 + g2)
              * rgamma(3 + a1 + a2 + b1 + g2)
              * hyp3f2_at1((1 + a2, -b2, 2 + g2 + a1 + a2), (2 + a2 + g2, 3 + a1 + a2 + b1 + g2)))
    return pre * (first + cmath.exp(2j * math.pi * g) * second)


def _sym3(p):
    if isinstance(p, SymmetricParams):
        return complex(p.alpha), complex(p.beta), complex(p.gamma)
    a, b, g = p
    return complex(a), complex(b), complex(g)


def inv_digamma_factor(k, g):
    """1 / (Gamma(1+k g)/Gamma(1+g)), zero on the poles of the ratio."""
    try:
        return 1.0 / digamma_factor(k, g)
    except PoleAt:
        return 0j


def selberg_closed(N, p):
    """Selberg's product for int over the ordered simplex (1/N! of the cube)."""
    a, b, g = _sym3(p)
    out = 1.0 / math.factorial(N) + 0j
    for j in range(1, N + 1):
        for label, fn in ((f"Gamma(1+alpha+{j - 1}gamma)", lambda: gamma(1 + a + (j - 1) * g)),
                          (f"Gamma(1+beta+{j - 1}gamma)", lambda: gamma(1 + b + (j - 1) * g)),
                          (f"Gamma(1+{j}gamma)/Gamma(1+gamma)", lambda: digamma_factor(j, g))):
            try:
                out *= fn()
            except PoleAt as exc:
                raise PoleAt(f"j={j}", label) from exc
        out *= rgamma(2 + a + b + (N + j - 2) * g)
    return out


# ----------------------------------------------------------------- Gamma factorizations

@dataclass
class GammaFactorization:
    """Gamma(1 + functional + shift) for each factor; functionals are Affine."""
    variant: str
    factors: list = field(default_factory=list)
    evaluator: object = None

    def arguments(self, values):
        return [1 + f.evaluate(values) + s for f, s in self.factors]

    def prefactor(self, values):
        out = 1 + 0j
        for z in self.arguments(values):
            out *= gamma(z)
        return out

    def regular_part(self, values, value=None):
        if value is None:
            if self.evaluator is None:
                raise ValueError("no value and no evaluator")
            value = self.evaluator(values)
        out = complex(value)
        for z in self.arguments(values):
            out *= rgamma(z)
        return out

    def to_json(self):
        return {"variant": self.variant,
                "factors": [{"functional": f.to_json(), "text": str(f + 1), "shift": int(s)}
                            for f, s in self.factors]}


_DF_ALPHA = {True: "alpha+", False: "alpha-"}
_DF_BETA = {True: "beta+", False: "beta-"}


def _df_slots(fn, S):
    """Rename generic slots to the two-species slots."""
    coeffs = {}
    for k, v in fn.terms:
        if k.startswith("alpha"):
            key = _DF_ALPHA[int(k[5:]) in S]
        elif k.startswith("beta"):
            key = _DF_BETA[int(k[4:]) in S]
        else:
            j, kk = (int(x) for x in k[5:].split(","))
            both = (j in S) + (kk in S)
            key = ("gamma-", "gamma0", "gamma+")[both]
        coeffs[key] = coeffs.get(key, 0) + v
    return Affine.of(fn.const, coeffs)


def _anchor_pool(shape, anchor):
    I1, I2, I3 = shape.blocks
    return {"0": I1 + I2, "1": I2 + I3, "inf": I3 + I1}[anchor]


def gamma_factorization(shape, F=None, variant="generic", S=None):
    if isinstance(shape, int):
        shape = RegionShape(0, shape, 0)
    elif not isinstance(shape, RegionShape):
        shape = RegionShape(*shape)
    N = shape.N
    if F is None:
        F = LaurentPoly.constant(N)
    if variant == "generic":
        facs = []
        for face in enumerate_k_faces(shape):
            anchor, A = face_cluster(shape, face)
            facs.append((cluster_functional(N, anchor, A), cluster_order(F, anchor, A)))
        return GammaFactorization("generic", facs)
    if variant == "symmetric":
        prof = vanishing_profile(F)
        l, m, n = shape.l, shape.m, shape.n
        facs = []
        for k in range(1, l + m + 1):
            facs.append((Affine.of(k - 1, {"alpha": k, "gamma": k * (k - 1)}), prof.delta[k - 1]))
        for k in range(1, m + n + 1):
            facs.append((Affine.of(k - 1, {"beta": k, "gamma": k * (k - 1)}), prof.atled[k - 1]))
        for k in range(1, l + n + 1):
            facs.append((Affine.of(-k - 1, {"alpha": -k, "beta": -k,
                                            "gamma": -k * (2 * N - k - 1)}), -prof.deg[k - 1]))
        return GammaFactorization("symmetric", facs)
    if variant == "DF0":
        if S is None:
            raise ValueError("DF0 factorization needs the + set S")
        S = set(S)
        facs = []
        for anchor in ("0", "1", "inf"):
            pool = _anchor_pool(shape, anchor)
            minus = [i for i in pool if i not in S]
            plus = [i for i in pool if i in S]
            for jm in range(len(minus) + 1):
                for jp in range(len(plus) + 1):
                    if jm + jp == 0:
                        continue
                    rep = sorted(minus[:jm] + plus[:jp])
                    fn = _df_slots(cluster_functional(N, anchor, rep), S)
                    shift = min(cluster_order(F, anchor, sorted(a + b))
                                for a in combinations(minus, jm) for b in combinations(plus, jp))
                    facs.append((fn, shift))
        return GammaFactorization("DF0", facs)
    raise UnsupportedShape(f"unknown factorization variant {variant!r}")


# ----------------------------------------------------------------- regularized values

def _s2_sym(F, a, b, g, method):
    p = (a, a, b, b, g)
    if method == "closed":
        return s2_closed_poly(F, p)
    if method == "continued":
        return continue_s2(p, F)
    raise ValueError(f"unknown method {method!r}")


def regularized_prefactor(F, p):
    """The factor that turns S2[F] (symmetric F) into an entire function."""
    a, b, g = _sym3(p)
    prof = vanishing_profile(F)
    N = 2
    out = 1 + 0j
    args = []
    for j in range(1, N + 1):
        num = 2 + prof.bar_d[j - 1] + a + b + (N + j - 2) * g
        d1 = 1 + prof.bar_delta[j - 1] + a + (j - 1) * g
        d2 = 1 + prof.bar_atled[j - 1] + b + (j - 1) * g
        args.append((num, d1, d2))
        out *= gamma(num) * rgamma(d1) * rgamma(d2) * inv_digamma_factor(j, g)
    return out, args


def _stripped_args(F, a, b, g):
    """(value, d/dalpha, d/dbeta, d/dgamma) of every Gamma argument in the prefactor."""
    prof = vanishing_profile(F)
    out = []
    for j in (1, 2):
        out += [(2 + prof.bar_d[j - 1] + a + b + j * g, 1, 1, j),
                (1 + prof.bar_delta[j - 1] + a + (j - 1) * g, 1, 0, j - 1),
                (1 + prof.bar_atled[j - 1] + b + (j - 1) * g, 0, 1, j - 1),
                (1 + j * g, 0, 0, j), (1 + g, 0, 0, 1)]
    return out


# alpha and gamma first; the others only when one of those is tangent
_DIRECTIONS = ((1, 0, 0), (0, 0, 1), (1, 0, 1), (0, 1, 0), (1, 1, 1), (1, -1, 0))


def _limit_directions(near):
    good = [d for d in _DIRECTIONS
            if all(d[0] * da + d[1] * db + d[2] * dg != 0 for _, da, db, dg in near)]
    return good[:2]


def _direct_reg(F, a, b, g, method):
    pre, _ = regularized_prefactor(F, (a, b, g))
    return _s2_sym(F, a, b, g, method) * pre


def _limit(F, a, b, g, method, near, h=LIMIT_STEP):
    dirs = _limit_directions(near)

    def along(d):
        def sym(t):
            return 0.5 * (_direct_reg(F, a + t * d[0], b + t * d[1], g + t * d[2], method)
                          + _direct_reg(F, a - t * d[0], b - t * d[1], g - t * d[2], method))
        return (4 * sym(h / 2) - sym(h)) / 3

    vals = [along(d) for d in dirs]
    if len(vals) == 2 and abs(vals[0] - vals[1]) > LIMIT_TOL * max(abs(vals[0]), abs(vals[1]), 1e-300):
        raise LimitDisagreement(f"directional limits differ: {vals[0]} vs {vals[1]}")
    return sum(vals) / len(vals)


def regularized_s2(F, p, method="closed"):
    """S2[F] times the stripping prefactor; limits are taken near stripped poles."""
    a, b, g = _sym3(p)
    if not F.is_symmetric():
        raise ValueError("regularized values need a symmetric weight")
    near = [t for t in _stripped_args(F, a, b, g) if _near_pole(t[0], 1e-6) is not None]
    if near:
        return _limit(F, a, b, g, method, near)
    try:
        v = _direct_reg(F, a, b, g, method)
    except (PoleAt, ZeroDivisionError):
        v = complex("nan")
    if not cmath.isfinite(v):
        return _limit(F, a, b, g, method, near)
    return v


def stripped_hyperplanes(F, beta, gamma_, lo, hi):
    """Real alpha in [lo, hi] where some alpha-dependent stripped argument is a pole."""
    b, g = complex(beta), complex(gamma_)
    out = set()
    for z0, da, _, _ in _stripped_args(F, 0j, b, g):
        if da == 0 or abs(z0.imag) > 1e-12:
            continue
        # z0 + alpha = -n
        n = max(0, math.ceil(-(hi + z0.real) - 1e-12))
        while -n - z0.real >= lo - 1e-12:
            out.add(round(-n - z0.real, 12))
            n += 1
    return sorted(out)


# ----------------------------------------------------------------- residues

def residue_terms(F, k, p):
    """Individual contributions to the residue of S2[F] on 2+alpha1+alpha2+2gamma+k = 0."""
    a1, a2, b1, b2, g = _unpack2(p)
    F = F if F is not None else LaurentPoly.constant(2)
    terms = []
    for (d1, d2), c in F.terms:
        kk = k - d1 - d2
        if kk < 0:
            continue
        cb1 = _binomial_series(b1, kk + 1)
        cb2 = _binomial_series(b2, kk + 1)
        for q in range(kk + 1):
            terms.append(complex(c) * cb1[q] * cb2[kk - q] * beta_mero(a1 + d1 + q, 2 * g))
    return terms


def residue_series(F, k, p):
    return sum(residue_terms(F, k, p), 0j)
