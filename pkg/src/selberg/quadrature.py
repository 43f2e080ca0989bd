"""Direct evaluation of ordered-region and cube integrals inside their domains.

Each variable is moved to a circle by x = tan(phi), which puts 0, 1 and
infinity at the angles 0, pi/4 and pi/2 (= -pi/2).  Every factor of the
integrand becomes |sin(phi_a - phi_b)| to some power, one per pair of points
among the N free points and the three fixed ones.  The N + 3 points split the
circle into gaps; collisions of consecutive points are exactly the faces of K.

The region is split into sectors: in each of the three arcs the largest gap
is singled out, the remaining gaps are measured relative to it, and along
each fixed point the small gaps are ordered by a binary tree (largest first).
In a sector every tree node v carries a variable u_v with the integrand
behaving like u_v**rho_v, rho_v being the exponent functional of the
cluster below v.  The substitution u = w**(1/kappa) absorbs that power and
the remaining integrand is bounded, so a tensor tanh-sinh rule converges.
"""
import cmath
import math
import os
from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations

import numpy as np

from .combinatorics import RegionShape
from .errors import BranchCutHit, DecayViolation, OutOfDomain, Unconverged
from .functionals import (GenericParams, LaurentPoly, cluster_functional,
                          in_domain, omega_margin)
from .special import gamma, hyp2f1, rgamma

try:  # compiled core, built by setup.py when Cython is available
    if os.environ.get("SELBERG_PURE"):
        raise ImportError
    from ._kernel import sector_sum as _sector_sum
    KERNEL = "cython"
except ImportError:  # pragma: no cover - exercised when the extension is absent
    from ._kernel_py import sector_sum as _sector_sum
    KERNEL = "numpy"

T_MAX = 3.2
END_LEVEL = 5
MIN_MARGIN = 0.05
_DEFAULTS = {1: (9, 1e-12), 2: (7, 1e-10), 3: (4, 1e-6)}


@dataclass(frozen=True)
class QuadSettings:
    max_level: int = None
    target_rel: float = None
    compactify: bool = True
    min_margin: float = MIN_MARGIN

    def resolved(self, N):
        lvl, tgt = _DEFAULTS.get(N, (4, 1e-6))
        lvl = self.max_level if self.max_level is not None else lvl
        tgt = self.target_rel if self.target_rel is not None else tgt
        if lvl > 12:
            raise ValueError("max_level must be at most 12")
        if tgt < 1e-14:
            raise ValueError("target_rel must be at least 1e-14")
        return lvl, tgt


@dataclass
class QuadResult:
    value: complex
    err_est: float
    evaluations: int

    def to_json(self):
        return {"value_re": self.value.real, "value_im": self.value.imag,
                "err_est": self.err_est, "evaluations": self.evaluations}


# ------------------------------------------------------------ tanh-sinh

@lru_cache(maxsize=32)
def ts_nodes(level, tmax=T_MAX):
    """Nodes on [0, 1] as arrays (log w, log 1-w, log(weight / w)).

    w = 1/(1+exp(-pi sinh t)), t = i h, h = 2**-level.
    """
    h = 2.0 ** -level
    k = int(math.floor(tmax / h))
    t = h * np.arange(-k, k + 1)
    q = math.pi * np.sinh(t)
    lw = -np.logaddexp(0.0, -q)
    l1w = -np.logaddexp(0.0, q)
    lwt = math.log(h) + np.log(math.pi * np.cosh(t)) + l1w
    for arr in (lw, l1w, lwt):
        arr.setflags(write=False)
    return lw, l1w, lwt


def _half_rule(level, a, length, pa, kappa):
    """x = a + length*u on u in [0, 1]; returns (x, log weight incl. u**pa)."""
    lw, l1w, lwt = ts_nodes(level)
    lu = lw / kappa
    u = np.exp(lu)
    one_minus_u = -np.expm1(lu)
    logw = (pa + 1) * lu + lwt - math.log(kappa) + (pa + 1) * cmath.log(length)
    return u, one_minus_u, logw


def power_rule(a, b, pa=0.0, pb=0.0, level=5):
    """Nodes x and complex weights w with sum w f(x) ~ int (x-a)**pa (b-x)**pb f(x).

    The interval is halved; each half gets a power substitution at its
    singular end.  Needs Re pa, Re pb > -1.
    """
    pa, pb = complex(pa), complex(pb)
    if pa.real <= -1 or pb.real <= -1:
        raise OutOfDomain("endpoint exponent not integrable", [])
    half = 0.5 * (b - a)
    ka = min(1.0, pa.real + 1)
    kb = min(1.0, pb.real + 1)
    u, omu, logw = _half_rule(level, a, half, pa, ka)
    x0 = a + half * u
    w0 = np.exp(logw + pb * np.log(half * (1.0 + omu)))
    v, omv, logv = _half_rule(level, b, half, pb, kb)
    x1 = b - half * v
    w1 = np.exp(logv + pa * np.log(half * (1.0 + omv)))
    return np.concatenate([x0, x1]), np.concatenate([w0, w1])


def power_quad(f, a, b, pa=0.0, pb=0.0, target=1e-13, max_level=10, min_level=3):
    """Integral of (x-a)**pa (b-x)**pb f(x) over [a, b], with Re pa, Re pb > -1.

    f is vectorised over the last axis; array-valued f gives an array result.
    """
    prev = None
    err = float("inf")
    for level in range(min_level, max_level + 1):
        x, w = power_rule(a, b, pa, pb, level)
        total = np.asarray(f(x)) @ w
        if prev is not None:
            err = float(np.max(np.abs(total - prev)))
            if err <= target * max(float(np.max(np.abs(total))), 1e-300):
                return (complex(total) if np.ndim(total) == 0 else total), err
        prev = total
    raise Unconverged("one-dimensional tanh-sinh did not converge", prev, err)


# ------------------------------------------------------------ sectors

@dataclass(frozen=True)
class _Sector:
    path: np.ndarray       # (M, N) int32
    svec: np.ndarray       # subtree sizes
    nodes: tuple           # (anchor, vars) per tree node


def _arcs(shape):
    l, m = shape.l, shape.m
    M = shape.modulus
    return (list(range(0, l + 1)), list(range(l + 1, l + m + 2)),
            list(range(l + m + 2, M)))


def _trees(seq):
    """All binary trees on a sequence, as lists of (node, parent, run)."""
    if not seq:
        return [[]]
    out = []
    for i, r in enumerate(seq):
        for left in _trees(seq[:i]):
            for right in _trees(seq[i + 1:]):
                tree = [(r, None, tuple(seq))]
                for node, par, run in left + right:
                    tree.append((node, r if par is None else par, run))
                out.append(tree)
    return out


def _cluster_of_run(shape, run):
    M = shape.modulus
    positions = set(run) | {(run[-1] + 1) % M}
    anchor = None
    A = []
    for pos in positions:
        a = shape.anchor_of_label(pos)
        if a is None:
            A.append(shape.var_of_label(pos))
        else:
            anchor = a
    return anchor, tuple(sorted(A))


@lru_cache(maxsize=None)
def sectors(shape):
    N, M = shape.N, shape.modulus
    arcs = _arcs(shape)
    out = []
    for i0 in arcs[0]:
        for i1 in arcs[1]:
            for i2 in arcs[2]:
                mx = (i0, i1, i2)
                lines = []
                for prev, nxt in ((2, 0), (0, 1), (1, 2)):
                    pa, na = arcs[prev], arcs[nxt]
                    after = pa[pa.index(mx[prev]) + 1:]
                    before = na[:na.index(mx[nxt])]
                    lines.append(after + before)
                for combo in _product_trees(lines):
                    nodes = [n for tree in combo for n in tree]
                    order = [n for n, _, _ in nodes]
                    assert len(order) == N
                    vidx = {g: v for v, g in enumerate(order)}
                    parent = {n: p for n, p, _ in nodes}
                    path = np.zeros((M, N), dtype=np.int32)
                    for g in order:
                        cur = g
                        while cur is not None:
                            path[g, vidx[cur]] = 1
                            cur = parent[cur]
                    svec = np.array([len(run) for _, _, run in nodes], dtype=float)
                    info = tuple(_cluster_of_run(shape, run) for _, _, run in nodes)
                    out.append(_Sector(path, svec, info))
    return tuple(out)


def _product_trees(lines):
    combos = [[]]
    for line in lines:
        combos = [c + [t] for c in combos for t in _trees(line)]
    return combos


@lru_cache(maxsize=None)
def _static(shape):
    N, M = shape.N, shape.modulus
    arcs = _arcs(shape)
    gap_arc = np.zeros(M, dtype=np.int32)
    for a, gaps in enumerate(arcs):
        for g in gaps:
            gap_arc[g] = a
    log_len = np.log(np.array([math.pi / 2, math.pi / 4, math.pi / 4]))
    p_arc = np.array([len(g) for g in arcs], dtype=np.int32)
    pairs = []
    for a in range(M):
        for b in range(a + 1, M):
            if shape.anchor_of_label(a) and shape.anchor_of_label(b):
                continue
            pairs.append((a, b))
    return gap_arc, log_len, p_arc, pairs


def _pair_exponents(shape, p, pairs):
    N = shape.N
    e = []
    for a, b in pairs:
        va, vb = shape.var_of_label(a), shape.var_of_label(b)
        if va is not None and vb is not None:
            e.append(2 * p.g(va, vb))
            continue
        anchor = shape.anchor_of_label(a if va is None else b)
        j = vb if va is None else va
        if anchor == "0":
            e.append(p.alpha[j - 1])
        elif anchor == "1":
            e.append(p.beta[j - 1])
        else:
            s = sum(p.g(j, k) for k in range(1, N + 1) if k != j)
            e.append(-2 - p.alpha[j - 1] - p.beta[j - 1] - 2 * s)
    return np.array(e, dtype=complex)


def _pair_runs(pairs, small, M):
    """Direction of summation per pair: the run made only of small gaps.

    A run through a largest gap has length at least pi/16, so when neither
    direction is all-small both are bounded away from 0 and pi.
    """
    starts, lens = [], []
    for a, b in pairs:
        fwd = [(a + t) % M for t in range(b - a)]
        bwd = [(b + t) % M for t in range(M - (b - a))]
        if not all(small[k] for k in fwd) and all(small[k] for k in bwd):
            starts.append(b % M)
            lens.append(M - (b - a))
        else:
            starts.append(a)
            lens.append(b - a)
    return np.array(starts, dtype=np.int32), np.array(lens, dtype=np.int32)


def _ordered_level(shape, p, level):
    """Sum over sectors of the F = 1 integral at one tanh-sinh level."""
    N, M = shape.N, shape.modulus
    gap_arc, log_len, p_arc, pairs = _static(shape)
    e = _pair_exponents(shape, p, pairs)
    e_re = np.ascontiguousarray(e.real)
    e_im = np.ascontiguousarray(e.imag)
    c = sum(p.beta) * (math.log(2.0) / 2)
    lw, _, lwt = ts_nodes(level)
    lw = np.ascontiguousarray(lw)
    lwt = np.ascontiguousarray(lwt)
    parts = []
    count = 0
    for sec in sectors(shape):
        kappa = np.array([min(1.0, cluster_functional(N, anc, A).evaluate(p).real + 1.0)
                          for anc, A in sec.nodes])
        gap_in_t = np.ascontiguousarray(sec.path.any(axis=1).astype(np.int32))
        pair_a, pair_len = _pair_runs(pairs, gap_in_t, M)
        re, im, sc, n = _sector_sum(N, M, lw, lwt, kappa, np.log(kappa), sec.svec,
                                    sec.path, gap_arc, gap_in_t, log_len, p_arc,
                                    pair_a, pair_len, e_re, e_im, c.real, c.imag)
        parts.append((complex(re, im), sc))
        count += n
    top = max(sc for _, sc in parts)
    total = sum(v * math.exp(sc - top) for v, sc in parts)
    return total * math.exp(top), count


def _monomial_terms(shape, F, p):
    """S[F] = sum_d c_d sign_d S[1](alpha + d): the ell-block variables are negative."""
    out = []
    for d, c in F.terms:
        sign = (-1) ** sum(d[:shape.l])
        out.append((complex(c) * sign, p.shifted(dalpha=d)))
    return out


def _check_domain(shape, terms, margin):
    for _, q in terms:
        if omega_margin(shape, q) < margin:
            rep = in_domain("Omega", shape, q)
            raise OutOfDomain(
                f"parameters outside the convergence domain (margin {margin} required)",
                [v.to_json() for v in rep.violations])


def _as_shape(shape):
    return shape if isinstance(shape, RegionShape) else RegionShape(*shape)


def selberg_quad(shape, F, p, s=None):
    """Ordered-region integral S_{l,m,n}[F] by sector tanh-sinh quadrature."""
    shape = _as_shape(shape)
    s = s or QuadSettings()
    if shape.N != p.N or F.N != p.N:
        raise OutOfDomain("dimension mismatch between shape, F and parameters", [])
    max_level, target = s.resolved(shape.N)
    terms = _monomial_terms(shape, F, p)
    _check_domain(shape, terms, s.min_margin)
    prev = None
    evals = 0
    err = float("inf")
    for level in range(1, max_level + 1):
        total = 0j
        scale = 0.0
        for c, q in terms:
            v, n = _ordered_level(shape, q, level)
            evals += n
            total += c * v
            scale += abs(c * v)
        if prev is not None:
            err = abs(total - prev)
            if err <= target * max(abs(total), 1e-8 * scale, 1e-300):
                return QuadResult(total, err, evals)
        prev = total
    raise Unconverged(f"quadrature did not reach {target:g} by level {max_level}", prev, err)


# ------------------------------------------------------------ cube integrals

def theta_phase(sigma, p):
    """Theta(sigma) = 2 pi sum_{j<k} [sigma(j) > sigma(k)] gamma_{j,k}."""
    N = len(sigma)
    tot = 0j
    for j in range(1, N + 1):
        for k in range(j + 1, N + 1):
            if sigma[j - 1] > sigma[k - 1]:
                tot += p.g(j, k)
    return 2 * math.pi * tot


def block_permutations(shape):
    """Permutations of 1..N preserving the three blocks, as tuples."""
    out = [()]
    for block in shape.blocks:
        out = [o + perm for o in out for perm in permutations(block)]
    return out


def _inverse(sigma):
    inv = [0] * len(sigma)
    for i, s in enumerate(sigma, 1):
        inv[s - 1] = i
    return tuple(inv)


def df_quad(shape, F, p, s=None):
    """Cube integral with (x_k - x_j + i0)**(2 gamma) phases.

    On the piece where x_{tau(1)} <= ... in each block the integrand is the
    ordered one with parameters relabelled by tau and phase exp(i Theta(tau^-1)).
    """
    shape = _as_shape(shape)
    total = 0j
    err = 0.0
    evals = 0
    for tau in block_permutations(shape):
        inv = _inverse(tau)
        phase = cmath.exp(1j * theta_phase(inv, p))
        r = selberg_quad(shape, F.permute(inv), p.permuted(tau), s)
        total += phase * r.value
        err += abs(phase) * r.err_est
        evals += r.evaluations
    return QuadResult(total, err, evals)


# ------------------------------------------------------------ N = 2 contour

_GL_CACHE = {}


def _gauss_legendre(n):
    if n not in _GL_CACHE:
        _GL_CACHE[n] = np.polynomial.legendre.leggauss(n)
    return _GL_CACHE[n]


def _graded_panels(a, b, grade_left, grade_right, levels, ratio=0.15):
    """Panel endpoints on [a, b], geometrically refined toward chosen ends."""
    pts = [0.0, 1.0]
    if grade_left:
        pts += [0.5 * ratio ** k for k in range(levels)]
    if grade_right:
        pts += [1.0 - 0.5 * ratio ** k for k in range(levels)]
    if grade_left and grade_right:
        pts.append(0.5)
    pts = sorted(set(pts))
    return [(a + (b - a) * u, a + (b - a) * v) for u, v in zip(pts[:-1], pts[1:])]


def contour_i2(a1, a2, b1, b2, g, s=None, r=1.0, nodes=64):
    """Gamma-prefactor times the trapezoid integral of
    z**(a2+2g) (1-z)**b2 2F1(-2g, 1+a1; 2+a1+b1; 1/z) from 0 to 1 through the upper half plane.
    """
    s = s or QuadSettings()
    target = s.target_rel if s.target_rel is not None else 1e-10
    a1, a2, b1, b2, g = (complex(v) for v in (a1, a2, b1, b2, g))
    bad = []
    for name, val, lim in (("alpha2", a2.real, -1.0), ("alpha1+alpha2+2gamma", (a1 + a2 + 2 * g).real, -2.0),
                           ("beta2", b2.real, -1.0), ("beta1+beta2+2gamma", (b1 + b2 + 2 * g).real, -2.0)):
        if not val > lim:
            bad.append({"name": name, "value": val, "margin": val - lim})
    if bad:
        raise DecayViolation("contour integrand not integrable at the endpoints", bad)
    if r <= 1e-9:
        raise BranchCutHit("trapezoid height collapses onto the real axis")
    pref = gamma(1 + a1) * gamma(1 + b1) * rgamma(2 + a1 + b1)
    legs = [(lambda t: t * (1 + 1j * r), 1 + 1j * r, 0.0, 1 / 3, True, False),
            (lambda t: t + 1j * r / 3, 1.0 + 0j, 1 / 3, 2 / 3, False, False),
            (lambda t: t + 1j * r * (1 - t), 1 - 1j * r, 2 / 3, 1.0, False, True)]
    c = 2 + a1 + b1
    # leading local exponents of the integrand at z = 0 and z = 1
    e0 = min((a2, a1 + a2 + 2 * g + 1), key=lambda v: v.real)
    e1 = min((b2, b1 + b2 + 2 * g + 1), key=lambda v: v.real)

    def integrand(z, omz=None):
        omz = 1 - z if omz is None else omz
        return cmath.exp((a2 + 2 * g) * cmath.log(z) + b2 * cmath.log(omz)) * hyp2f1(-2 * g, 1 + a1, c, 1 / z)

    def end_panel(z_of, dz, pa, pb, at_left):
        # singular end panel: power-weighted tanh-sinh in the distance to the end
        e = e0 if at_left else e1
        x, w = power_rule(0.0, pb - pa, e, 0.0, END_LEVEL)
        tot = 0j
        for u, wu in zip(x, w):
            if u <= 0.0:
                continue
            if at_left:
                z = z_of(pa) + u * dz
                tot += wu * dz * integrand(z) * u ** -e
            else:
                # 1 - z kept exact near the right end
                omz = u * dz
                tot += wu * dz * integrand(1 - omz, omz) * u ** -e
        return tot, len(x)

    prev = None
    evals = 0
    for level in range(2, 12):
        xg, wg = _gauss_legendre(nodes)
        total = 0j
        for z_of, dz, lo, hi, gl, gr in legs:
            for pa, pb in _graded_panels(lo, hi, gl, gr, level):
                if (gl and pa == lo) or (gr and pb == hi):
                    v, n = end_panel(z_of, dz, pa, pb, gl and pa == lo)
                    total += v
                    evals += n
                    continue
                half = 0.5 * (pb - pa)
                mid = 0.5 * (pb + pa)
                for x, w in zip(xg, wg):
                    total += w * half * dz * integrand(z_of(mid + half * x))
                    evals += 1
        if prev is not None:
            err = abs(total - prev)
            if err <= target * max(abs(total), 1e-300):
                return QuadResult(pref * total, abs(pref) * err, evals)
        prev = total
    raise Unconverged("contour quadrature did not converge", pref * prev, abs(pref) * err)


def df_point(alpha_plus, beta_plus, gamma_slot, convention="equal"):
    """Arguments (a1, a2, b1, b2, g) of the N=2 contour formula at a DF point.

    ``equal``: (a+, a+, b+, b+, gamma), the point with gamma_- = gamma_0 = -1.
    ``literal``: (a+, -a+, b+, -b+, gamma), as the display is written.
    """
    if convention == "equal":
        return (alpha_plus, alpha_plus, beta_plus, beta_plus, gamma_slot)
    if convention == "literal":
        return (alpha_plus, -alpha_plus, beta_plus, -beta_plus, gamma_slot)
    raise ValueError(f"unknown convention {convention!r}")


def contour_df2(alpha_plus, beta_plus, gamma=-1.0, s=None, r=1.0, convention="equal"):
    """N=2 DF value via the trapezoid contour; see df_point for the slot choice."""
    return contour_i2(*df_point(alpha_plus, beta_plus, gamma, convention), s=s, r=r)


__all__ = ["QuadSettings", "QuadResult", "selberg_quad", "df_quad", "contour_i2",
           "contour_df2", "df_point", "theta_phase", "block_permutations",
           "power_quad", "ts_nodes", "sectors", "KERNEL"]
