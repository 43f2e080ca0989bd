"""Command line: polynomial input, evaluation, verification suites, figure data.

    selberg eval    --kind S --shape 0,2,0 --alpha 0,0 --beta 0,0 --gamma 1 --f 1
    selberg verify  --suite aomoto --seed 7
    selberg figure  --name fig-x2 --start -5 --stop 0 --count 2000
    selberg faces   --shape 0,3,0

Exit codes: 0 ok, 1 verification failure, 2 domain error, 3 convergence
failure, 64 usage.
"""
import argparse
import csv
import hashlib
import json
import math
import os
import re
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

from .combinatorics import (RegionShape, brute_force_sigma_tamari, bdf_value, catalan,
                            enumerate_k_faces, enumerate_sigma_tamari, enumerate_tamari)
from .continuation import (beta_continued, continue_s2, gamma_factorization, i2_closed,
                           regularized_s2, s2_closed, s2_closed_poly, selberg_closed)
from .errors import (ConvergenceError, DecayViolation, DomainError, PolySyntaxError,
                     SelbergError, VariableOutOfRange)
from .functionals import GenericParams, LaurentPoly, SymmetricParams, in_domain
from .identities import (IdentityReport, bubble_sort_identity, check_aomoto_ratio,
                         check_aomoto_step, check_aomoto_three_term, check_symmetrization,
                         df_n2_claim, df_n2_value, df_product_formula, dfsym_check,
                         three_term_admissible)
from .quadrature import (QuadResult, QuadSettings, contour_i2, df_quad, selberg_quad)
from .sampling import generic_point, off_integer, rng, symmetric_point
from .special import beta_mero, gamma, hyp2f1, hyp3f2_at1, poch, rgamma, sinpi

EXIT_OK, EXIT_FAIL, EXIT_DOMAIN, EXIT_CONV, EXIT_USAGE = 0, 1, 2, 3, 64

SUITES = ("combinatorics", "special", "quadrature", "continuation", "aomoto",
          "symmetrization", "df")
FIGURES = ("fig-x2", "fig-y2", "fig-sum", "fig-reg")
MAX_FIGURE_POINTS = 10 ** 5

# defaults for every tolerance the suites use; a config file may override them
DEFAULTS = {
    "tol.combinatorics": 1e-12,
    "tol.special": 1e-9,
    "tol.quadrature": 1e-6,
    "tol.continuation": 1e-6,
    "tol.aomoto": 1e-6,
    "tol.symmetrization": 1e-7,
    "tol.df": 1e-4,
    "tol.df_ratio": 1e-3,
    "points": 5,
    "target_rel": None,
    "max_level": None,
}


# ----------------------------------------------------------------- polynomials

_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<num>(?:\d+\.\d*|\.\d+|\d+)(?:[eE][+-]?\d+)?(?:/\d+)?)
  | (?P<var>x(?P<idx>\d+)(?:\^(?P<exp>[+-]?\d+))?)
  | (?P<op>[-+*])
""", re.VERBOSE)


def _tokens(text):
    pos = 0
    out = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise PolySyntaxError(f"unexpected character {text[pos]!r}",
                                  len(text[:pos].encode()))
        if m.lastgroup != "ws":
            out.append((m.lastgroup, m, len(text[:pos].encode())))
        pos = m.end()
    out.append(("end", None, len(text.encode())))
    return out


def _coeff(tok):
    s = tok.group("num")
    if "/" in s:
        num, den = s.split("/")
        if int(den) == 0:
            raise ZeroDivisionError
        return float(Fraction(num) / int(den))
    return float(s)


def parse_poly(text, N):
    """LaurentPoly in x1..xN from text such as ``3/2*x1*x2^-1 - x2^2``."""
    toks = _tokens(text)
    i = 0
    terms = []

    def peek():
        return toks[i]

    if peek()[0] == "end":
        raise PolySyntaxError("empty polynomial", 0)
    while True:
        sign = 1.0
        kind, tok, off = peek()
        if kind == "op" and tok.group() in "+-":
            sign = -1.0 if tok.group() == "-" else 1.0
            i += 1
        elif terms:
            raise PolySyntaxError("expected + or -", off)
        coeff = 1.0
        exps = [0] * N
        kind, tok, off = peek()
        if kind == "num":
            try:
                coeff = _coeff(tok)
            except ZeroDivisionError:
                raise PolySyntaxError("zero denominator", off) from None
            i += 1
            kind, tok, off = peek()
            if not (kind == "op" and tok.group() == "*"):
                terms.append((tuple(exps), sign * coeff))
                if kind == "end":
                    break
                continue
            i += 1
        while True:
            kind, tok, off = peek()
            if kind != "var":
                raise PolySyntaxError("expected a variable xK", off)
            k = int(tok.group("idx"))
            if not 1 <= k <= N:
                raise VariableOutOfRange(f"x{k} is not among x1..x{N}")
            exps[k - 1] += int(tok.group("exp")) if tok.group("exp") else 1
            i += 1
            kind, tok, off = peek()
            if kind == "op" and tok.group() == "*":
                i += 1
                continue
            break
        terms.append((tuple(exps), sign * coeff))
        if peek()[0] == "end":
            break
    return LaurentPoly.make(N, terms)


def emit_poly(F):
    """Text for F that parse_poly reads back to the same polynomial."""
    if not F.terms:
        return "0"
    parts = []
    for exps, c in F.terms:
        c = complex(c)
        if c.imag != 0:
            raise ValueError("the text form has real coefficients only")
        c = c.real
        sign = "-" if c < 0 else "+"
        factors = [f"x{k}" if e == 1 else f"x{k}^{e}" for k, e in enumerate(exps, 1) if e]
        body = "*".join([repr(abs(c))] + factors)
        parts.append((sign, body))
    first_sign, first = parts[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


# ----------------------------------------------------------------- argument values

def parse_complex(text):
    """``a+bi`` style literal (``j`` also accepted)."""
    t = text.strip().replace(" ", "")
    if t.endswith("i"):
        t = t[:-1] + "j"
    try:
        return complex(t)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a complex number: {text!r}") from None


def parse_vector(text):
    return [parse_complex(x) for x in text.split(",") if x.strip()]


def parse_gamma(text):
    """Single value, a list, or ``j,k=v`` pairs separated by ';' or spaces."""
    if "=" not in text:
        vals = parse_vector(text)
        return vals[0] if len(vals) == 1 else vals
    out = {}
    for item in re.split(r"[;\s]+", text.strip()):
        if not item:
            continue
        key, _, val = item.partition("=")
        j, k = (int(x) for x in key.split(","))
        out[(j, k)] = parse_complex(val)
    return out


def parse_shape(text):
    vals = [int(x) for x in text.split(",")]
    if len(vals) != 3:
        raise argparse.ArgumentTypeError("shape is l,m,n")
    return RegionShape(*vals)


def _cj(z):
    z = complex(z)
    return [z.real, z.imag]


def load_config(path):
    cfg = dict(DEFAULTS)
    if not path:
        return cfg
    with open(path) as fh:
        for n, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, val = line.partition("=")
            if not sep:
                raise ValueError(f"{path}:{n}: expected key=value")
            key, val = key.strip(), val.strip()
            if key not in DEFAULTS:
                raise ValueError(f"{path}:{n}: unknown key {key}")
            cfg[key] = int(val) if key in ("points", "max_level") else float(val)
    return cfg


def _settings(cfg, args):
    tr = getattr(args, "target_rel", None) or cfg.get("target_rel")
    ml = getattr(args, "max_level", None) or cfg.get("max_level")
    return QuadSettings(max_level=ml, target_rel=tr)


def workers():
    n = os.cpu_count() or 1
    cap = os.environ.get("SELBERG_THREADS")
    if cap:
        n = min(n, max(1, int(cap)))
    return n


# ----------------------------------------------------------------- cache

class QuadCache:
    """Memoizes quadrature results on disk, keyed by a hash of the inputs."""

    def __init__(self, root):
        self.root = root
        os.makedirs(root, exist_ok=True)

    @staticmethod
    def key(kind, shape, F, p, s):
        blob = json.dumps({"kind": kind, "shape": list(shape.as_tuple()),
                           "F": [[list(e), _cj(c)] for e, c in F.terms],
                           "p": p.to_json(), "s": s.to_json() if hasattr(s, "to_json")
                           else [s.max_level, s.target_rel, s.compactify, s.min_margin]},
                          sort_keys=True)
        return hashlib.sha256(blob.encode()).hexdigest()

    def get(self, key):
        path = os.path.join(self.root, key + ".json")
        if not os.path.exists(path):
            return None
        with open(path) as fh:
            d = json.load(fh)
        return QuadResult(complex(d["value_re"], d["value_im"]), d["err_est"], d["evaluations"])

    def put(self, key, res):
        path = os.path.join(self.root, key + ".json")
        tmp = path + ".tmp"
        with open(tmp, "w") as fh:
            json.dump(res.to_json(), fh)
        os.replace(tmp, path)


def _cached(cache, kind, fn, shape, F, p, s):
    if cache is None:
        return fn(shape, F, p, s)
    key = QuadCache.key(kind, shape, F, p, s)
    hit = cache.get(key)
    if hit is not None:
        return hit
    res = fn(shape, F, p, s)
    cache.put(key, res)
    return res


# ----------------------------------------------------------------- eval

def _build_params(args, shape):
    N = shape.N
    if args.symmetric:
        a, b = parse_vector(args.alpha), parse_vector(args.beta)
        g = parse_gamma(args.gamma) if args.gamma is not None else 0
        if len(a) != 1 or len(b) != 1 or isinstance(g, (list, dict)):
            raise DomainError("--symmetric takes single alpha, beta and gamma values")
        return SymmetricParams(a[0], b[0], g)
    a, b = parse_vector(args.alpha), parse_vector(args.beta)
    if len(a) != N or len(b) != N:
        raise DomainError(f"alpha and beta need {N} values each")
    g = parse_gamma(args.gamma) if args.gamma is not None else 0
    return GenericParams.make(a, b, g if N > 1 else [])


def _domain_flags(shape, gp):
    out = {}
    for kind in ("Omega", "dotOmega"):
        try:
            rep = in_domain(kind, shape, gp)
            out[kind] = {"member": bool(rep), "violations": [v.name for v in rep.violations]}
        except SelbergError as exc:
            out[kind] = {"member": None, "error": type(exc).__name__}
    return out


def _factor_arguments(shape, F, p):
    try:
        if isinstance(p, SymmetricParams):
            fac = gamma_factorization(shape, F, "symmetric")
            vals = {"alpha": p.alpha, "beta": p.beta, "gamma": p.gamma}
        else:
            fac = gamma_factorization(shape, F, "generic")
            vals = p
    except SelbergError:
        return []
    out = []
    for (fn, shift), z in zip(fac.factors, fac.arguments(vals)):
        out.append({"argument": str(fn + (1 + shift)), "value": _cj(z)})
    return out


def _evaluate(args, cfg, cache):
    shape = args.shape if args.shape is not None else RegionShape(0, args.n or 1, 0)
    N = shape.N
    F = parse_poly(args.f, N)
    p = _build_params(args, shape)
    gp = p.generic(N) if isinstance(p, SymmetricParams) else p
    s = _settings(cfg, args)
    method = args.method
    err = 0.0
    two = shape.as_tuple() == (0, 2, 0)
    one = F.approx_equal(LaurentPoly.constant(N))
    if args.kind == "S":
        if method == "quad":
            r = _cached(cache, "S", selberg_quad, shape, F, gp, s)
            value, err = r.value, r.err_est
        elif method == "closed":
            if N == 1 and shape.as_tuple() == (0, 1, 0):
                value = sum(complex(c) * beta_mero(gp.alpha[0] + e[0], gp.beta[0])
                            for e, c in F.terms)
            elif two:
                value = s2_closed_poly(F, gp)
            elif isinstance(p, SymmetricParams) and one and shape.as_tuple() == (0, N, 0):
                value = selberg_closed(N, p)
            else:
                raise DomainError("no closed form for this shape and weight")
        elif method == "continued":
            if N == 1 and shape.as_tuple() == (0, 1, 0):
                value = sum(complex(c) * beta_continued(gp.alpha[0] + e[0], gp.beta[0])
                            for e, c in F.terms)
            elif two:
                value = continue_s2(gp, F)
            else:
                raise DomainError("continuation is available for N <= 2 on (0,N,0)")
        elif method == "regularized":
            if not (two and isinstance(p, SymmetricParams)):
                raise DomainError("regularized values need --symmetric and N = 2")
            value = regularized_s2(F, p)
        else:
            raise DomainError(f"method {method} does not apply to S")
    else:
        if method == "quad":
            r = _cached(cache, "I", df_quad, shape, F, gp, s)
            value, err = r.value, r.err_est
        elif method in ("closed", "contour"):
            if not (two and one):
                raise DomainError(f"the {method} route needs shape 0,2,0 and F = 1")
            if method == "closed":
                value = i2_closed(gp)
            else:
                r = contour_i2(*gp.alpha, *gp.beta, gp.g(1, 2), s=s)
                value, err = r.value, r.err_est
        else:
            raise DomainError(f"method {method} does not apply to I")
    return {"value_re": complex(value).real, "value_im": complex(value).imag,
            "err_est": err, "method": method, "domain_flags": _domain_flags(shape, gp),
            "gamma_factor_arguments": _factor_arguments(shape, F, p)}


def cmd_eval(args, cfg):
    cache = QuadCache(args.cache) if args.cache else None
    rec = _evaluate(args, cfg, cache)
    print(json.dumps(rec))
    return EXIT_OK


# ----------------------------------------------------------------- verification suites
#
# A suite is a list of tasks (name, kwargs); each task returns a list of report
# dicts.  Tasks are picklable so a process pool can run them; results are
# merged in task order, which keeps the output identical for any worker count.

def _rep(tag, lhs, rhs, tol, point=None, **extra):
    return IdentityReport.compare(tag, lhs, rhs, tol, point, **extra).to_json()


def _skip(tag, reason, point=None):
    return IdentityReport.skipped(tag, reason, point).to_json()


def _t_counts(N, tol):
    shp = RegionShape(0, N, 0)
    return [_rep(f"k_faces/N={N}", len(enumerate_k_faces(shp)), N * (N + 3) // 2, 0, {"N": N}),
            _rep(f"tamari/N={N}", len(enumerate_tamari(shp)), catalan(N + 1), 0, {"N": N})]


def _t_sigma_tamari(shape, tol):
    shp = RegionShape(*shape)
    return [_rep(f"sigma_tamari/{shape}", len(enumerate_sigma_tamari(shp)),
                 len(brute_force_sigma_tamari(shp)), 0, {"shape": list(shape)})]


def _t_bdf(seed, N, count, tol):
    r = rng(seed)
    out = []
    for _ in range(count):
        x = [r.uniform(0.01, 0.99) for _ in range(N)]
        # each coordinate lifts to the product of the bdfs of the faces it meets
        for j in range(1, N + 1):
            prod = 1.0
            for S in _subsets_containing(N, j):
                prod *= bdf_value(S, x)
            rec = _rep(f"bdf_lift/N={N}", prod, x[j - 1], tol, {"x": x, "j": j})
            rec["residual"] = abs(prod - x[j - 1]) / x[j - 1]
            rec["passed"] = rec["residual"] <= tol
            out.append(rec)
        for M in range(1, N):
            for Q in _nonempty_subsets(range(1, M + 1)):
                lhs = bdf_value(Q, x[:M])
                rhs = 1.0
                for Q0 in _all_subsets(range(M + 1, N + 1)):
                    rhs *= bdf_value(set(Q) | set(Q0), x)
                rec = _rep(f"bdf_forgetful/N={N}/M={M}", lhs, rhs, tol,
                           {"x": x, "Q": sorted(Q)})
                rec["residual"] = abs(lhs - rhs) / abs(lhs)
                rec["passed"] = rec["residual"] <= tol
                out.append(rec)
    return out


def _all_subsets(items):
    items = list(items)
    for mask in range(1 << len(items)):
        yield [items[i] for i in range(len(items)) if mask >> i & 1]


def _nonempty_subsets(items):
    return [s for s in _all_subsets(items) if s]


def _subsets_containing(N, j):
    return [s for s in _all_subsets(range(1, N + 1)) if j in s]


def _t_special(seed, count, tol):
    r = rng(seed)
    out = []
    for _ in range(count):
        z = complex(r.uniform(-4.5, 4.5), r.uniform(-3, 3))
        pt = {"z": _cj(z)}
        out.append(_rep("gamma_recurrence", gamma(z + 1), z * gamma(z), tol, pt))
        out.append(_rep("gamma_reflection", gamma(z) * gamma(1 - z), math.pi / sinpi(z), tol, pt))
        a, b = complex(r.uniform(-0.9, 3), r.uniform(-1, 1)), complex(r.uniform(-0.9, 3), 0)
        out.append(_rep("beta_symmetry", beta_mero(a, b), beta_mero(b, a), tol,
                        {"a": _cj(a), "b": _cj(b)}))
        # Pfaff: the two sides evaluate 2F1 at z and at z/(z-1)
        a2, b2, c2 = r.uniform(-1.5, 1.5), r.uniform(-1.5, 1.5), r.uniform(0.3, 2.5)
        z2 = complex(r.uniform(-0.9, 0.6), r.uniform(-0.4, 0.4))
        out.append(_rep("hyp2f1_pfaff", hyp2f1(a2, b2, c2, z2),
                        (1 - z2) ** (-a2) * hyp2f1(a2, c2 - b2, c2, z2 / (z2 - 1)), tol,
                        {"a": a2, "b": b2, "c": c2, "z": _cj(z2)}))
        # Saalschutz: terminating balanced 3F2 at 1
        n = r.randint(1, 6)
        a3, b3, c3 = r.uniform(-2, 2), r.uniform(-2, 2), r.uniform(0.3, 3)
        lhs = hyp3f2_at1((a3, b3, -n), (c3, 1 + a3 + b3 - c3 - n))
        rhs = poch(c3 - a3, n) * poch(c3 - b3, n) / (poch(c3, n) * poch(c3 - a3 - b3, n))
        out.append(_rep("hyp3f2_saalschutz", lhs, rhs, tol,
                        {"a": a3, "b": b3, "c": c3, "n": n}))
    return out


def _t_quad(seed, N, count, tol, s):
    r = rng(seed)
    out = []
    for _ in range(count):
        p = symmetric_point(r, [(0, N, 0)])
        q = selberg_quad((0, N, 0), LaurentPoly.constant(N), p.generic(N), s)
        c = selberg_closed(N, p)
        rec = _rep(f"selberg_formula/N={N}", q.value, c, tol,
                   {"alpha": p.alpha, "beta": p.beta, "gamma": p.gamma}, err_est=q.err_est)
        rec["residual"] = abs(q.value - c) / abs(c)
        rec["passed"] = rec["residual"] <= tol
        out.append(rec)
    return out


def _rel(rec, lhs, rhs, tol):
    rec["residual"] = abs(lhs - rhs) / abs(rhs)
    rec["passed"] = bool(rec["residual"] <= tol)
    return rec


def _t_beta(seed, count, tol):
    r = rng(seed)
    out = []
    for _ in range(count):
        a, b = off_integer(r, -4.6, 3), off_integer(r, -2.6, 2)
        v, ref = beta_continued(a, b), beta_mero(a, b)
        out.append(_rel(_rep("beta_continued", v, ref, tol, {"alpha": a, "beta": b}), v, ref, tol))
    return out


def _t_s2(seed, count, tol):
    r = rng(seed)
    out = []
    for _ in range(count):
        a1 = off_integer(r, -2.95, -1.05, 0.05)
        a2, b1, b2 = r.uniform(-0.5, 1), r.uniform(-0.5, 1), r.uniform(-0.5, 1)
        g = r.uniform(0.05, 0.6)
        a2 = max(a2, -1 - a1 - 2 * g + 0.3)  # keep 2 + a1 + a2 + 2g clear of the lattice
        p = tuple(round(v, 6) for v in (a1, a2, b1, b2, g))
        v, ref = continue_s2(p), s2_closed(p)
        pt = dict(zip(("alpha1", "alpha2", "beta1", "beta2", "gamma"), p))
        out.append(_rel(_rep("continue_s2", v, ref, tol, pt), v, ref, tol))
    return out


_TT_BOX = ((-2.5, 1.0), (-2.5, 1.0), (-0.3, 0.6))


def _t_three_term(seed, shape, tol, s):
    r = rng(seed)
    p = generic_point(r, shape, box=_TT_BOX, accept=lambda q: three_term_admissible(shape, q))
    return [check_aomoto_three_term(shape, None, p, sg, tol, s).to_json() for sg in (+1, -1)]


def _ratio_shapes(N):
    return [(0, N, 0), (0, 0, N), (N, 0, 0)]


def _t_ratio(seed, N, tol, s):
    r = rng(seed)
    p = symmetric_point(r, _ratio_shapes(N), box=((-0.95, 0.5), (-0.95, 0.5), (-0.45, 0.5)))
    out = [check_aomoto_ratio(N, None, p, v, tol, s).to_json() for v in (0, 1)]
    if N == 2:
        q = symmetric_point(r, [(0, 2, 0), (0, 1, 1)], box=((-0.95, 0.5), (-0.95, 0.5), (-0.45, 0.5)))
        out.append(check_aomoto_step(2, 0, None, q, tol, s).to_json())
    return out


def _t_symmetrization(seed, tol, s):
    r = rng(seed)
    p = symmetric_point(r, [(0, 2, 0)], box=((-0.9, 1.5), (-0.9, 1.5), (-0.4, 1.2)))
    return [check_symmetrization((0, 2, 0), None, p, tol, s).to_json()]


def _t_bubble(seed, tol):
    r = rng(seed)
    out = []
    for N in range(1, 7):
        for _ in range(3):
            while True:
                z = complex(r.uniform(-1.2, 1.2), r.uniform(-1.2, 1.2))
                if all(abs(z ** n - 1) > 1e-3 for n in range(1, N + 1)):
                    break
            out.append(bubble_sort_identity(N, z, tol).to_json())
    return out


def _t_df_claim(point, convention, tol, s):
    try:
        return [df_n2_claim(point[0], point[1], convention, tol, s).to_json()]
    except DecayViolation as exc:
        return [_skip(f"df_n2_claim/{convention}", f"DecayViolation: {exc}",
                      {"alpha_plus": point[0], "beta_plus": point[1]})]


def _t_df_ratio(gamma_plus, tol):
    pts = [(2, 3), (2.5, 3), (3, 3.5), (2.2, 2.7), (3.5, 3)]
    ratios = [df_n2_value(a, b, gamma_plus) / df_product_formula(1, 1, a, b, gamma_plus)
              for a, b in pts]
    out = []
    for (a, b), q in zip(pts[1:], ratios[1:]):
        out.append(_rep("df_product_ratio", q, ratios[0], tol,
                        {"alpha_plus": a, "beta_plus": b, "gamma_plus": gamma_plus}))
    return out


def _t_dfsym(tol):
    lm, lp = 2.0, 3.0
    cases = [("dfsym/symmetric", LaurentPoly.make(3, {(2, 0, 0): 1, (0, 2, 0): 1, (0, 0, 2): 1,
                                                      (1, 1, 1): 3}), {1, 2, 3}, 0.7, True),
             ("dfsym/linear", LaurentPoly.make(2, {(1, 0): lm, (0, 1): lp}), {1},
              (lm + lp) / lm, True),
             ("dfsym/x1", LaurentPoly.make(2, {(1, 0): 1}), {1}, 2.0, False)]
    out = []
    for tag, F, S, lam, want in cases:
        ok, pair = dfsym_check(F, S, lam)
        rec = _rep(tag, float(ok), float(want), 0, {"S": sorted(S), "lambda": lam})
        rec["violated_pair"] = list(pair) if pair else None
        out.append(rec)
    return out


TASKS = {
    "counts": _t_counts, "sigma_tamari": _t_sigma_tamari, "bdf": _t_bdf,
    "special": _t_special, "quad": _t_quad, "beta": _t_beta, "s2": _t_s2,
    "three_term": _t_three_term, "ratio": _t_ratio, "symmetrization": _t_symmetrization,
    "bubble": _t_bubble, "df_claim": _t_df_claim, "df_ratio": _t_df_ratio, "dfsym": _t_dfsym,
}


def suite_tasks(suite, seed, cfg, tol=None, s=None):
    """The task list of one suite; --tol replaces every suite tolerance."""
    def t(key):
        return tol if tol is not None else cfg[f"tol.{key}"]

    k = cfg["points"]
    s = s or QuadSettings()
    if suite == "combinatorics":
        return ([("counts", dict(N=N, tol=0)) for N in range(1, 7)]
                + [("sigma_tamari", dict(shape=sh, tol=0)) for sh in ((0, 1, 0), (0, 2, 0), (1, 1, 1))]
                + [("bdf", dict(seed=seed + N, N=N, count=k, tol=t("combinatorics")))
                   for N in range(1, 6)])
    if suite == "special":
        return [("special", dict(seed=seed, count=4 * k, tol=t("special")))]
    if suite == "quadrature":
        return [("quad", dict(seed=seed + N, N=N, count=k, tol=t("quadrature"), s=s))
                for N in (1, 2)]
    if suite == "continuation":
        return [("beta", dict(seed=seed, count=2 * k, tol=t("continuation"))),
                ("s2", dict(seed=seed + 1, count=k, tol=t("continuation")))]
    if suite == "aomoto":
        return ([("three_term", dict(seed=seed * 1000 + i, shape=sh, tol=t("aomoto"), s=s))
                 for sh in ((1, 0, 0), (1, 1, 0)) for i in range(k)]
                + [("ratio", dict(seed=seed * 1000 + i, N=N, tol=t("aomoto"), s=s))
                   for N in (1, 2) for i in range(k)])
    if suite == "symmetrization":
        return ([("symmetrization", dict(seed=seed * 1000 + i, tol=t("symmetrization"), s=s))
                 for i in range(k)] + [("bubble", dict(seed=seed, tol=min(t("symmetrization"), 1e-12)))])
    if suite == "df":
        pts = ((2, 3), (1.5, 2.5), (3, 3))
        return ([("df_claim", dict(point=pt, convention=c, tol=t("df"), s=None))
                 for c in ("equal", "literal") for pt in pts]
                + [("df_ratio", dict(gamma_plus=g, tol=t("df_ratio"))) for g in (-2.0, -1.5)]
                + [("dfsym", dict(tol=0))])
    raise ValueError(f"unknown suite {suite!r}")


def _run_task(task):
    name, kw = task
    try:
        return TASKS[name](**kw)
    except SelbergError as exc:
        point = {k: v for k, v in kw.items() if k in ("seed", "N", "shape", "point")}
        point = json.loads(json.dumps(point, default=str))
        if isinstance(exc, ConvergenceError):
            return [{"tag": name, "point": point, "lhs": None, "rhs": None,
                     "residual": None, "passed": False, "error": f"{type(exc).__name__}: {exc}"}]
        return [_skip(name, f"{type(exc).__name__}: {exc}", point)]


def run_tasks(tasks, n_workers=None):
    n_workers = n_workers or workers()
    if n_workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=n_workers) as pool:
            results = list(pool.map(_run_task, tasks))
    else:
        results = [_run_task(t) for t in tasks]
    return [rec for group in results for rec in group]


def _json_default(o):
    if isinstance(o, complex):
        return [o.real, o.imag]
    if isinstance(o, RegionShape):
        return list(o.as_tuple())
    raise TypeError(type(o).__name__)


def cmd_verify(args, cfg):
    suites = SUITES if args.suite == "all" else (args.suite,)
    s = _settings(cfg, args)
    failed = 0
    for suite in suites:
        for rec in run_tasks(suite_tasks(suite, args.seed, cfg, args.tol, s)):
            rec = {"suite": suite, **rec}
            print(json.dumps(rec, default=_json_default))
            if not rec.get("passed", False):
                failed += 1
                print(f"FAIL {rec['tag']} at {json.dumps(rec.get('point'), default=_json_default)}",
                      file=sys.stderr)
    return EXIT_FAIL if failed else EXIT_OK


# ----------------------------------------------------------------- figures

_XX = LaurentPoly.make(2, {(0, 2): 1})
_YY = LaurentPoly.make(2, {(2, 0): 1})
_SUM = LaurentPoly.make(2, {(0, 2): 1, (2, 0): 1})
FIGURE_WEIGHTS = {"fig-x2": _XX, "fig-y2": _YY, "fig-sum": _SUM, "fig-reg": _SUM}


def figure_value(name, alpha, beta=0.5, gamma_=1 / 3, method="closed"):
    """Signed value plotted by figure ``name`` at one alpha."""
    F = FIGURE_WEIGHTS[name]
    if name == "fig-reg":
        return regularized_s2(F, (alpha, beta, gamma_), method)
    p = (alpha, alpha, beta, beta, gamma_)
    if method == "closed":
        return s2_closed_poly(F, p)
    return continue_s2(p, F)


def figure_rows(name, start, stop, count, beta=0.5, gamma_=1 / 3, method="closed"):
    if not 1 <= count <= MAX_FIGURE_POINTS:
        raise DomainError(f"count must lie in 1..{MAX_FIGURE_POINTS}")
    label = "regularized" if name == "fig-reg" else method
    for i in range(count):
        a = start + (stop - start) * i / (count - 1) if count > 1 else start
        try:
            v = complex(figure_value(name, a, beta, gamma_, method))
            if not (math.isfinite(v.real) and math.isfinite(v.imag)):
                raise ZeroDivisionError
        except (DomainError, ZeroDivisionError, OverflowError):
            v = None
        yield a, v, label


def cmd_figure(args, cfg):
    w = csv.writer(sys.stdout, lineterminator="\n")
    head = ["alpha", "abs_value", "method"] + (["value_re", "value_im"] if args.signed else [])
    w.writerow(head)
    for a, v, label in figure_rows(args.name, args.start, args.stop, args.count,
                                   args.beta, args.gamma, args.method):
        row = [repr(a), "" if v is None else repr(abs(v)), label]
        if args.signed:
            row += ["", ""] if v is None else [repr(v.real), repr(v.imag)]
        w.writerow(row)
    return EXIT_OK


# ----------------------------------------------------------------- faces

def cmd_faces(args, cfg):
    shape = args.shape
    out = {"shape": list(shape.as_tuple()),
           "k_faces": [f.to_json() for f in enumerate_k_faces(shape)],
           "tamari": [f.to_json() for f in enumerate_tamari(shape)],
           "sigma_tamari": [f.to_json() for f in enumerate_sigma_tamari(shape)]}
    out["counts"] = {k: len(out[k]) for k in ("k_faces", "tamari", "sigma_tamari")}
    print(json.dumps(out))
    return EXIT_OK


# ----------------------------------------------------------------- entry

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_USAGE)


def build_parser():
    ap = _Parser(prog="selberg", description="Selberg-type integrals and their identities.")
    ap.add_argument("--config", help="key=value file overriding default tolerances")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    ev = sub.add_parser("eval", help="evaluate S or I at one parameter point")
    ev.add_argument("--kind", choices=("S", "I"), default="S")
    ev.add_argument("--shape", type=parse_shape)
    ev.add_argument("--n", type=int, help="N for shape 0,N,0 when --shape is absent")
    ev.add_argument("--symmetric", action="store_true")
    ev.add_argument("--alpha", required=True)
    ev.add_argument("--beta", required=True)
    ev.add_argument("--gamma")
    ev.add_argument("--f", default="1", help="weight polynomial, e.g. 'x1^2 + x2^2'")
    ev.add_argument("--method", default="quad",
                    choices=("quad", "closed", "continued", "regularized", "contour"))
    ev.add_argument("--target-rel", type=float)
    ev.add_argument("--max-level", type=int)
    ev.add_argument("--cache", help="directory memoizing quadrature results")

    ve = sub.add_parser("verify", help="run identity suites, JSON lines on stdout")
    ve.add_argument("--suite", default="all", choices=SUITES + ("all",))
    ve.add_argument("--seed", type=int, default=0)
    ve.add_argument("--tol", type=float)
    ve.add_argument("--target-rel", type=float)
    ve.add_argument("--max-level", type=int)

    fi = sub.add_parser("figure", help="CSV data for the N = 2 figures")
    fi.add_argument("--name", required=True, choices=FIGURES)
    fi.add_argument("--start", type=float, default=-5.0)
    fi.add_argument("--stop", type=float, default=0.0)
    fi.add_argument("--count", type=int, default=2000)
    fi.add_argument("--beta", type=float, default=0.5)
    fi.add_argument("--gamma", type=float, default=1 / 3)
    fi.add_argument("--method", choices=("closed", "continued"), default="closed")
    fi.add_argument("--signed", action="store_true", help="append value_re and value_im")

    fa = sub.add_parser("faces", help="dump faces and Tamari families of a shape")
    fa.add_argument("--shape", type=parse_shape, default=RegionShape(0, 2, 0))
    return ap


COMMANDS = {"eval": cmd_eval, "verify": cmd_verify, "figure": cmd_figure, "faces": cmd_faces}


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        cfg = load_config(args.config)
    except (OSError, ValueError) as exc:
        print(f"selberg: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return COMMANDS[args.command](args, cfg)
    except PolySyntaxError as exc:
        print(f"selberg: PolySyntaxError: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ConvergenceError as exc:
        print(f"selberg: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_CONV
    except SelbergError as exc:
        print(f"selberg: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
