"""Affine exponent functionals, Laurent insertions, and parameter domains.

Functionals are exact records (integer or Fraction coefficients over named
parameter slots) so identities between them are compared coefficientwise.
Slot names: ``alpha3``, ``beta1``, ``gamma1,2`` for generic parameters,
``alpha``/``beta``/``gamma`` for constant ones, and ``alpha-``, ``gamma0``
and friends for the two-species parameters.
"""
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from .combinatorics import (ANCHORS, AFaceId, KFaceId, RegionShape, a_face,
                            enumerate_a_faces, enumerate_k_faces, k_face)
from .errors import (DomainError, InvalidFace, LaurentInput, UnsupportedKind,
                     UnsupportedShape)

# ----------------------------------------------------------------- params


def _gkey(j, k):
    return (j, k) if j < k else (k, j)


@dataclass(frozen=True)
class GenericParams:
    """Exponent vectors alpha, beta (length N) and symmetric gamma_{j,k}."""
    alpha: tuple
    beta: tuple
    gamma: tuple  # ((j, k), value) with j < k, every pair present

    def __post_init__(self):
        N = len(self.alpha)
        if len(self.beta) != N:
            raise DomainError("alpha and beta lengths differ")
        keys = [k for k, _ in self.gamma]
        want = [(j, k) for j in range(1, N + 1) for k in range(j + 1, N + 1)]
        if sorted(keys) != want:
            raise DomainError("gamma must hold every pair j<k exactly once")

    @classmethod
    def make(cls, alpha, beta, gamma):
        """gamma: scalar, dict {(j,k): v}, or N x N nested list."""
        alpha = tuple(complex(a) for a in alpha)
        beta = tuple(complex(b) for b in beta)
        N = len(alpha)
        pairs = [(j, k) for j in range(1, N + 1) for k in range(j + 1, N + 1)]
        if isinstance(gamma, dict):
            g = {}
            for key, v in gamma.items():
                g[_gkey(*key)] = complex(v)
            vals = tuple((p, g[p]) for p in pairs)
        elif isinstance(gamma, (list, tuple)) and gamma and isinstance(gamma[0], (list, tuple)):
            vals = tuple((p, complex(gamma[p[0] - 1][p[1] - 1])) for p in pairs)
        elif isinstance(gamma, (list, tuple)):
            if len(gamma) != len(pairs):
                raise DomainError("gamma list length must be N(N-1)/2")
            vals = tuple((p, complex(v)) for p, v in zip(pairs, gamma))
        else:
            vals = tuple((p, complex(gamma)) for p in pairs)
        return cls(alpha, beta, vals)

    @classmethod
    def symmetric(cls, N, alpha, beta, gamma):
        return cls.make([alpha] * N, [beta] * N, gamma)

    @property
    def N(self):
        return len(self.alpha)

    def g(self, j, k):
        key = _gkey(j, k)
        for p, v in self.gamma:
            if p == key:
                return v
        raise KeyError(key)

    def gdict(self):
        return dict(self.gamma)

    def slots(self):
        out = {}
        for i, a in enumerate(self.alpha, 1):
            out[f"alpha{i}"] = a
        for i, b in enumerate(self.beta, 1):
            out[f"beta{i}"] = b
        for (j, k), v in self.gamma:
            out[f"gamma{j},{k}"] = v
        return out

    def permuted(self, sigma):
        """Parameters of the relabelled integrand: slot j gets sigma(j)'s values.

        sigma is a tuple with sigma[j-1] = sigma(j).
        """
        N = self.N
        g = self.gdict()
        alpha = [self.alpha[sigma[j] - 1] for j in range(N)]
        beta = [self.beta[sigma[j] - 1] for j in range(N)]
        gam = {(j, k): g[_gkey(sigma[j - 1], sigma[k - 1])]
               for j in range(1, N + 1) for k in range(j + 1, N + 1)}
        return GenericParams.make(alpha, beta, gam)

    def shifted(self, dalpha=None, dbeta=None):
        a = list(self.alpha)
        b = list(self.beta)
        if dalpha is not None:
            a = [x + d for x, d in zip(a, dalpha)]
        if dbeta is not None:
            b = [x + d for x, d in zip(b, dbeta)]
        return GenericParams(tuple(a), tuple(b), self.gamma)

    def is_real(self):
        vals = list(self.alpha) + list(self.beta) + [v for _, v in self.gamma]
        return all(v.imag == 0 for v in vals)

    def conj(self):
        return GenericParams(tuple(a.conjugate() for a in self.alpha),
                             tuple(b.conjugate() for b in self.beta),
                             tuple((p, v.conjugate()) for p, v in self.gamma))

    def to_json(self):
        return {"alpha": [_cjson(a) for a in self.alpha],
                "beta": [_cjson(b) for b in self.beta],
                "gamma": {f"{j},{k}": _cjson(v) for (j, k), v in self.gamma}}


def _cjson(z):
    z = complex(z)
    return z.real if z.imag == 0 else [z.real, z.imag]


@dataclass(frozen=True)
class SymmetricParams:
    alpha: complex
    beta: complex
    gamma: complex

    def __post_init__(self):
        for v in (self.alpha, self.beta, self.gamma):
            if not math.isfinite(complex(v).real) or not math.isfinite(complex(v).imag):
                raise DomainError("parameters must be finite")

    def generic(self, N):
        return GenericParams.symmetric(N, self.alpha, self.beta, self.gamma)

    def slots(self):
        return {"alpha": complex(self.alpha), "beta": complex(self.beta),
                "gamma": complex(self.gamma)}


def df0_params(N, S, alpha_m, alpha_p, beta_m, beta_p, gamma_m, gamma_0, gamma_p):
    """Two-species parameters: slots in S carry the + values."""
    S = set(S)
    alpha = [alpha_p if j in S else alpha_m for j in range(1, N + 1)]
    beta = [beta_p if j in S else beta_m for j in range(1, N + 1)]
    gam = {}
    for j in range(1, N + 1):
        for k in range(j + 1, N + 1):
            inj, ink = j in S, k in S
            gam[(j, k)] = gamma_p if inj and ink else gamma_m if not (inj or ink) else gamma_0
    return GenericParams.make(alpha, beta, gam)


def df_params(N, S, alpha_p, beta_p, gamma_p, gamma_0=-1.0):
    """gamma_- = 1/gamma_+, alpha_- = -gamma_- alpha_+, beta_- = -gamma_- beta_+."""
    gm = 1.0 / complex(gamma_p)
    return df0_params(N, S, -gm * alpha_p, alpha_p, -gm * beta_p, beta_p, gm, gamma_0, gamma_p)


# ----------------------------------------------------------------- affine

@dataclass(frozen=True)
class Affine:
    const: object = 0
    terms: tuple = ()  # sorted ((slot, coeff), ...) with coeff != 0

    @classmethod
    def build(cls, const=0, **_):
        return cls(const, ())

    @classmethod
    def of(cls, const=0, coeffs=None):
        coeffs = coeffs or {}
        items = tuple(sorted((k, v) for k, v in coeffs.items() if v != 0))
        return cls(const, items)

    def coeffs(self):
        return dict(self.terms)

    def __add__(self, other):
        if not isinstance(other, Affine):
            return Affine(self.const + other, self.terms)
        c = self.coeffs()
        for k, v in other.terms:
            c[k] = c.get(k, 0) + v
        return Affine.of(self.const + other.const, c)

    __radd__ = __add__

    def __neg__(self):
        return Affine(-self.const, tuple((k, -v) for k, v in self.terms))

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, s):
        return Affine.of(self.const * s, {k: v * s for k, v in self.terms})

    __rmul__ = __mul__

    def evaluate(self, values):
        if hasattr(values, "slots"):
            values = values.slots()
        total = complex(self.const)
        for k, v in self.terms:
            total += v * values[k]
        return total

    def linear_key(self):
        return self.terms

    def __str__(self):
        parts = []
        if self.const != 0 or not self.terms:
            parts.append(str(self.const))
        for k, v in self.terms:
            if v == 1:
                s = k
            elif v == -1:
                s = "-" + k
            else:
                s = f"{v}*{k}"
            parts.append(s)
        out = "+".join(parts)
        return out.replace("+-", "-")

    def to_json(self):
        alpha, beta, gamma, other = {}, {}, {}, {}
        for k, v in self.terms:
            v = float(v) if isinstance(v, Fraction) else v
            if k.startswith("alpha") and k[5:].isdigit():
                alpha[int(k[5:])] = v
            elif k.startswith("beta") and k[4:].isdigit():
                beta[int(k[4:])] = v
            elif k.startswith("gamma") and "," in k:
                gamma[k[5:]] = v
            else:
                other[k] = v
        const = float(self.const) if isinstance(self.const, Fraction) else self.const
        out = {"const": const}
        n = max(list(alpha) + list(beta) + [0])
        if alpha or beta or gamma:
            out["alpha"] = [alpha.get(i, 0) for i in range(1, n + 1)]
            out["beta"] = [beta.get(i, 0) for i in range(1, n + 1)]
            out["gamma"] = gamma
        if other:
            out["slots"] = other
        return out


def _a(i):
    return f"alpha{i}"


def _b(i):
    return f"beta{i}"


def _g(j, k):
    j, k = _gkey(j, k)
    return f"gamma{j},{k}"


def _sum_alpha(idx):
    return Affine.of(0, {_a(i): 1 for i in idx})


def _sum_beta(idx):
    return Affine.of(0, {_b(i): 1 for i in idx})


def _pairs_within(idx, c=2):
    idx = sorted(idx)
    return Affine.of(0, {_g(j, k): c for j, k in combinations(idx, 2)})


def _pairs_touching(idx, N, c=2):
    A = set(idx)
    coeffs = {}
    for j in range(1, N + 1):
        for k in range(j + 1, N + 1):
            if j in A or k in A:
                coeffs[_g(j, k)] = c
    return Affine.of(0, coeffs)


def alpha_star(N, j):
    return _sum_alpha(range(1, j + 1)) + _pairs_within(range(1, j + 1))


def beta_star(N, j):
    idx = range(N - j + 1, N + 1)
    return _sum_beta(idx) + _pairs_within(idx)


def gamma_star(N, j, k):
    """gamma_{j,k,*}, with the relabelling for j = 0 and k = N+1."""
    if j == 0 and 1 <= k <= N:
        return alpha_star(N, k)
    if k == N + 1 and 1 <= j <= N:
        return beta_star(N, N + 1 - j)
    if 1 <= j < k <= N:
        return _pairs_within(range(j, k + 1))
    raise DomainError(f"gamma_star index ({j},{k}) out of range")


def star_functionals(p):
    """Evaluated star functionals of a GenericParams."""
    N = p.N
    a = [alpha_star(N, j).evaluate(p) for j in range(1, N + 1)]
    b = [beta_star(N, j).evaluate(p) for j in range(1, N + 1)]
    g = {}
    for j in range(0, N + 1):
        for k in range(j + 1, N + 2):
            if (j, k) == (0, N + 1):
                continue
            g[(j, k)] = gamma_star(N, j, k).evaluate(p)
    return {"alpha_star": a, "beta_star": b, "gamma_star": g}


# ----------------------------------------------------------------- rho

def _as_k_face(shape, face):
    if isinstance(face, KFaceId):
        if face.modulus != shape.modulus:
            raise InvalidFace("face belongs to a different shape")
        return k_face(shape, face.j, face.k)
    j, k = face
    return k_face(shape, j, k)


def face_cluster(shape, face):
    """(anchor or None, sorted variables) of a K face."""
    f = _as_k_face(shape, face)
    anchor = None
    A = []
    for lab in f.labels:
        a = shape.anchor_of_label(lab)
        if a is not None:
            anchor = a
        else:
            A.append(shape.var_of_label(lab))
    return anchor, sorted(A)


def cluster_functional(N, anchor, A):
    """Order of the integrand density at a collision cluster.

    A points colliding at a fixed point or with each other: substitute
    x = x0 + eps z (or x = z/eps at infinity) and read off the eps power.
    """
    a = len(A)
    if anchor is None:
        return Affine.of(a - 2) + _pairs_within(A)
    if anchor == "0":
        return Affine.of(a - 1) + _sum_alpha(A) + _pairs_within(A)
    if anchor == "1":
        return Affine.of(a - 1) + _sum_beta(A) + _pairs_within(A)
    return Affine.of(-a - 1) - _sum_alpha(A) - _sum_beta(A) - _pairs_touching(A, N)


def rho_functional(shape, face):
    anchor, A = face_cluster(shape, face)
    return cluster_functional(shape.N, anchor, A)


def rho(shape, face, p):
    """rho_{j,k} evaluated at GenericParams p."""
    return rho_functional(shape, face).evaluate(p)


def rho_literal(shape, face):
    """The four printed cases, transcribed term by term.

    Two corrections: the free-cluster constant is k-j-1, and in the
    infinity case the inner sum excludes i = k' (the printed i != k'-2
    would reference gamma_{k',k'}).
    """
    f = _as_k_face(shape, face)
    N, l, m = shape.N, shape.l, shape.m
    M = shape.modulus
    labs = f.labels
    specials = [lab for lab in labs if shape.anchor_of_label(lab) is not None]
    gsum = lambda lo, hi: _pairs_within(range(lo, hi + 1))
    if not specials:
        j, k = f.start, f.start + f.length - 1

        def prime(i):
            if i <= l:
                return i
            if i <= l + m + 1:
                return i - 1
            return i - 2
        return Affine.of(k - j - 1) + gsum(prime(j), prime(k))
    sp = specials[0]
    if sp == l + 1:
        j, k = f.start, f.start + f.length - 1
        out = Affine.of(k - j - 1) + _sum_alpha(range(j, l + 1))
        out = out + _sum_alpha([i - 1 for i in range(l + 2, k + 1)])
        return out + gsum(j, k - 1)
    if sp == l + m + 2:
        j, k = f.start, f.start + f.length - 1
        out = Affine.of(k - j - 1) + _sum_beta([i - 1 for i in range(j, l + m + 2)])
        out = out + _sum_beta([i - 2 for i in range(l + m + 3, k + 1)])
        return out + gsum(j - 1, k - 2)
    # infinity: run goes from k (high labels, N+3 meaning 0) around to j
    end = (f.start + f.length - 1) % M
    j = end
    k = f.start if f.start != 0 else N + 3
    out = Affine.of(k - j - N - 4)
    out = out - _sum_alpha(range(1, j + 1)) - _sum_beta(range(1, j + 1))
    out = out - _sum_alpha([i - 2 for i in range(k, N + 3)])
    out = out - _sum_beta([i - 2 for i in range(k, N + 3)])
    c = {}

    def add(jj, kk, v):
        key = _g(jj, kk)
        c[key] = c.get(key, 0) + v
    for jp in range(1, j + 1):
        for i in range(1, N + 1):
            if i != jp:
                add(i, jp, -2)
    for kp in range(k - 2, N + 1):
        for i in range(1, N + 1):
            if i != kp:
                add(i, kp, -2)
    for jp in range(1, j + 1):
        for kp in range(jp + 1, j + 1):
            add(jp, kp, 2)
    for jp in range(k - 2, N + 1):
        for kp in range(jp + 1, N + 1):
            add(jp, kp, 2)
    for jp in range(1, j + 1):
        for kp in range(k - 2, N + 1):
            add(jp, kp, 2)
    return out + Affine.of(0, c)


def thm_star_of_face(shape, face):
    """For shape (0,N,0): the star functional paired with a K face, shifted so
    that 1 + rho = (k'-j') + gamma_{j',k',*}, with K label i <-> index i-1."""
    if shape.l or shape.n:
        raise UnsupportedShape("star pairing defined for (0,N,0)")
    f = _as_k_face(shape, face)
    jp, kp = f.start - 1, f.start + f.length - 2
    return jp, kp, gamma_star(shape.N, jp, kp)


# ----------------------------------------------------------------- varrho

def varrho_functional(shape, face):
    if isinstance(face, AFaceId):
        face = a_face(shape, face.S, face.Q, face.anchor)
    else:
        face = a_face(shape, *face)
    A = sorted(face.members)
    N = shape.N
    a = len(A)
    if face.anchor == "0":
        return Affine.of(a - 1) + _sum_alpha(A) + _pairs_within(A)
    if face.anchor == "1":
        return Affine.of(a - 1) + _sum_beta(A) + _pairs_within(A)
    return Affine.of(-a - 1) - _sum_alpha(A) - _sum_beta(A) - _pairs_touching(A, N)


def varrho(shape, face, p):
    return varrho_functional(shape, face).evaluate(p)


# ----------------------------------------------------------------- polys

def _clean(c):
    if isinstance(c, complex) and c.imag == 0:
        c = c.real
    if isinstance(c, float) and c.is_integer() and abs(c) < 2**53:
        return Fraction(int(c))
    if isinstance(c, int):
        return Fraction(c)
    return c


@dataclass(frozen=True)
class LaurentPoly:
    N: int
    terms: tuple  # sorted ((exponent tuple), coeff)

    @classmethod
    def make(cls, N, terms, drop_below=0.0):
        acc = {}
        for e, c in (terms.items() if isinstance(terms, dict) else terms):
            e = tuple(int(x) for x in e)
            if len(e) != N:
                raise DomainError(f"exponent {e} has wrong length for N={N}")
            acc[e] = acc.get(e, 0) + c
        items = []
        for e, c in acc.items():
            if c == 0 or (drop_below and abs(c) < drop_below):
                continue
            items.append((e, _clean(c)))
        return cls(N, tuple(sorted(items)))

    @classmethod
    def constant(cls, N, c=1):
        return cls.make(N, {(0,) * N: c})

    @classmethod
    def monomial(cls, exps, c=1):
        return cls.make(len(exps), {tuple(exps): c})

    @classmethod
    def var(cls, N, i):
        e = [0] * N
        e[i - 1] = 1
        return cls.make(N, {tuple(e): 1})

    def as_dict(self):
        return dict(self.terms)

    def __add__(self, other):
        if not isinstance(other, LaurentPoly):
            other = LaurentPoly.constant(self.N, other)
        self._same(other)
        d = self.as_dict()
        for e, c in other.terms:
            d[e] = d.get(e, 0) + c
        return LaurentPoly.make(self.N, d)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly(self.N, tuple((e, -c) for e, c in self.terms))

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, LaurentPoly):
            return LaurentPoly.make(self.N, {e: c * other for e, c in self.terms})
        self._same(other)
        d = {}
        for e1, c1 in self.terms:
            for e2, c2 in other.terms:
                e = tuple(a + b for a, b in zip(e1, e2))
                d[e] = d.get(e, 0) + c1 * c2
        return LaurentPoly.make(self.N, d)

    __rmul__ = __mul__

    def _same(self, other):
        if other.N != self.N:
            raise DomainError("polynomials in different numbers of variables")

    def is_zero(self):
        return not self.terms

    def is_polynomial(self):
        return all(min(e) >= 0 for e, _ in self.terms) if self.terms else True

    def evaluate(self, x):
        total = 0j
        for e, c in self.terms:
            t = complex(c)
            for xi, d in zip(x, e):
                if d:
                    t *= xi ** d
            total += t
        return total

    def permute(self, sigma):
        """F(x_{sigma(1)}, ..., x_{sigma(N)})."""
        d = {}
        for e, c in self.terms:
            new = [0] * self.N
            for i, di in enumerate(e):
                new[sigma[i] - 1] += di
            d[tuple(new)] = c
        return LaurentPoly.make(self.N, d)

    def is_symmetric(self):
        from itertools import permutations
        return all(self.permute(s) == self for s in permutations(range(1, self.N + 1)))

    def reflect(self):
        """F(1 - x_1, ..., 1 - x_N), expanded exactly."""
        if not self.is_polynomial():
            raise LaurentInput("reflection of a Laurent polynomial")
        out = {}
        for e, c in self.terms:
            parts = [{(): c}]
            acc = {(): c}
            for d in e:
                nxt = {}
                for pre, v in acc.items():
                    for t in range(d + 1):
                        coef = math.comb(d, t) * (-1) ** t
                        key = pre + (t,)
                        nxt[key] = nxt.get(key, 0) + v * coef
                acc = nxt
            del parts
            for key, v in acc.items():
                out[key] = out.get(key, 0) + v
        return LaurentPoly.make(self.N, out, drop_below=1e-14)

    def derivative(self, j):
        d = {}
        for e, c in self.terms:
            if e[j - 1] == 0:
                continue
            new = list(e)
            new[j - 1] -= 1
            d[tuple(new)] = d.get(tuple(new), 0) + c * e[j - 1]
        return LaurentPoly.make(self.N, d)

    def set_equal(self, j, k):
        """Substitute x_j = x_k (x_j disappears)."""
        d = {}
        for e, c in self.terms:
            new = list(e)
            new[k - 1] += new[j - 1]
            new[j - 1] = 0
            d[tuple(new)] = d.get(tuple(new), 0) + c
        return LaurentPoly.make(self.N, d)

    def max_abs_coeff(self):
        return max((abs(c) for _, c in self.terms), default=0.0)

    def approx_equal(self, other, tol=1e-12):
        diff = self - other
        scale = max(1.0, self.max_abs_coeff(), other.max_abs_coeff())
        return all(abs(c) <= tol * scale for _, c in diff.terms)

    def degree_in(self, idx):
        return [sum(e[i - 1] for i in idx) for e, _ in self.terms]


def cluster_order(F, anchor, A):
    """Order of vanishing of F at the collision of the variables A.

    At 0 and 1 this is a minimum of partial degrees; at infinity it is minus
    the maximum; at an interior diagonal it is the lowest power of eps in
    F(y + eps z) for generic rational y, z.
    """
    if F is None or not A:
        return 0
    if anchor == "0":
        return min(F.degree_in(A))
    if anchor == "1":
        return min(F.reflect().degree_in(A))
    if anchor == "inf":
        return -max(F.degree_in(A))
    return _diagonal_order(F, A)


def _diagonal_order(F, A):
    rng = random.Random(12345)
    N = F.N
    base = [Fraction(rng.randint(1, 97), rng.randint(98, 199)) for _ in range(N)]
    y = Fraction(rng.randint(1, 50), 101)
    z = {i: Fraction(rng.randint(1, 89), 97) * (1 + (i % 3)) for i in A}
    exact = all(isinstance(c, Fraction) for _, c in F.terms)
    poly = {}
    for e, c in F.terms:
        # product of (y + t z_i)^{d_i} for i in A, times base^{d_i} otherwise
        coeffs = [c if exact else complex(c)]
        for i in range(1, N + 1):
            d = e[i - 1]
            if i in z:
                if d < 0:
                    raise LaurentInput("diagonal order of a Laurent polynomial")
                fac = [math.comb(d, t) * y ** (d - t) * z[i] ** t for t in range(d + 1)]
                new = [0] * (len(coeffs) + d)
                for a_, ca in enumerate(coeffs):
                    for b_, cb in enumerate(fac):
                        new[a_ + b_] += ca * cb
                coeffs = new
            else:
                mult = base[i - 1] ** d
                coeffs = [cc * mult for cc in coeffs]
        for t, cc in enumerate(coeffs):
            poly[t] = poly.get(t, 0) + cc
    scale = max((abs(v) for v in poly.values()), default=0)
    for t in sorted(poly):
        if exact and poly[t] != 0:
            return t
        if not exact and abs(poly[t]) > 1e-12 * scale:
            return t
    raise DomainError("zero polynomial has no finite order")


@dataclass(frozen=True)
class VanishingProfile:
    delta: tuple
    atled: tuple
    deg: tuple
    bar_delta: tuple
    bar_atled: tuple
    bar_d: tuple

    def to_json(self):
        return {k: list(getattr(self, k)) for k in
                ("delta", "atled", "deg", "bar_delta", "bar_atled", "bar_d")}


def _ceil_div(a, b):
    return -((-a) // b)


def vanishing_profile(F):
    """delta_j, atled_j (through F(1-x)), deg_j and their barred versions."""
    if not F.is_polynomial():
        raise LaurentInput("vanishing profile needs a polynomial")
    if F.is_zero():
        raise DomainError("zero polynomial")
    N = F.N
    R = F.reflect()
    delta = tuple(min(sum(e[:j]) for e, _ in F.terms) for j in range(1, N + 1))
    atled = tuple(min(sum(e[N - j:]) for e, _ in R.terms) for j in range(1, N + 1))
    deg = tuple(max(sum(e[:j]) for e, _ in F.terms) for j in range(1, N + 1))
    bar_delta = tuple(_ceil_div(delta[j - 1], j) for j in range(1, N + 1))
    bar_atled = tuple(_ceil_div(atled[j - 1], j) for j in range(1, N + 1))
    bar_d = tuple(deg[j - 1] // (N - j + 1) for j in range(1, N + 1))
    return VanishingProfile(delta, atled, deg, bar_delta, bar_atled, bar_d)


# ----------------------------------------------------------------- domains

@dataclass
class Violation:
    name: str
    functional: str
    value: complex
    margin: float

    def to_json(self):
        return {"name": self.name, "functional": self.functional,
                "value": _cjson(self.value), "margin": self.margin}


@dataclass
class DomainReport:
    kind: str
    ok: bool
    violations: list = field(default_factory=list)

    def __bool__(self):
        return self.ok

    def to_json(self):
        return {"kind": self.kind, "ok": self.ok,
                "violations": [v.to_json() for v in self.violations]}


KINDS = ("Omega", "dotOmega", "V", "dotV", "U", "dotU", "ringU", "W")
LATTICE_TOL = 1e-9


def _on_lattice(z, top):
    """z within LATTICE_TOL of an integer <= top."""
    z = complex(z)
    if abs(z.imag) > LATTICE_TOL:
        return False
    r = round(z.real)
    return abs(z.real - r) <= LATTICE_TOL and r <= top


def _face_name(shape, face):
    if shape.l == 0 and shape.n == 0:
        jp, kp, _ = thm_star_of_face(shape, face)
        N = shape.N
        if jp == 0:
            return f"alpha_{kp},*"
        if kp == N + 1:
            return f"beta_{N + 1 - jp},*"
        return f"gamma_{jp},{kp},*"
    f = _as_k_face(shape, face)
    return f"rho_{f.j},{f.k}"


def omega_margin(shape, p):
    """min over faces of Re(rho) + 1; positive inside the convergence domain."""
    return min(rho(shape, f, p).real + 1.0 for f in enumerate_k_faces(shape))


def v_margin(shape, p):
    return min(varrho(shape, f, p).real + 1.0 for f in enumerate_a_faces(shape))


def _sym_orders(profile, anchor, k):
    if profile is None:
        return 0
    if anchor == "0":
        return profile.delta[k - 1]
    if anchor == "1":
        return profile.atled[k - 1]
    return -profile.deg[k - 1]


def in_domain(kind, shape, p, profile=None, F=None):
    """Membership in one of the parameter regions, with every violation.

    Omega/dotOmega work face by face on K (for (0,N,0) these are exactly the
    star-functional conditions); V/dotV on the faces of A.  U, dotU, ringU
    and W take SymmetricParams; ``shape`` may then be an int N.
    """
    if kind not in KINDS:
        raise UnsupportedKind(kind)
    if isinstance(shape, (tuple, list)):
        shape = RegionShape(*shape)
    out = DomainReport(kind, True)

    def bad(name, fn, val, margin):
        out.ok = False
        out.violations.append(Violation(name, str(fn), val, margin))

    if kind in ("Omega", "dotOmega"):
        for f in enumerate_k_faces(shape):
            fn = rho_functional(shape, f)
            val = fn.evaluate(p)
            name = _face_name(shape, f)
            if kind == "Omega":
                if not val.real > -1.0:
                    bad(name, fn, val, val.real + 1.0)
            else:
                anchor, A = face_cluster(shape, f)
                o = cluster_order(F, anchor, A)
                if _on_lattice(val + o, -1):
                    bad(name, fn, val, 0.0)
        return out
    if kind in ("V", "dotV", "W"):
        if kind == "W":
            N = shape.N if isinstance(shape, RegionShape) else int(shape)
            if not isinstance(shape, RegionShape):
                shape = RegionShape(0, N, 0)
            p = p.generic(shape.N) if isinstance(p, SymmetricParams) else p
        for f in enumerate_a_faces(shape):
            fn = varrho_functional(shape, f)
            val = fn.evaluate(p)
            name = f"varrho_{sorted(f.S)},{sorted(f.Q)};{f.anchor}"
            if kind in ("V", "W"):
                if not val.real > -1.0:
                    bad(name, fn, val, val.real + 1.0)
            else:
                if F is not None:
                    o = cluster_order(F, f.anchor, sorted(f.members))
                else:
                    o = _sym_orders(profile, f.anchor, len(f.members))
                if _on_lattice(val + o, -1):
                    bad(name, fn, val, 0.0)
        return out
    # symmetric kinds
    N = shape.N if isinstance(shape, RegionShape) else int(shape)
    if isinstance(p, GenericParams):
        p = SymmetricParams(p.alpha[0], p.beta[0], p.gamma[0][1] if p.gamma else 0)
    a, b, g = complex(p.alpha), complex(p.beta), complex(p.gamma)
    if profile is None:
        profile = vanishing_profile(F) if F is not None else VanishingProfile(
            (0,) * N, (0,) * N, (0,) * N, (0,) * N, (0,) * N, (0,) * N)
    for j in range(1, N + 1):
        fa = j * (a + (j - 1) * g)
        fb = j * (b + (j - 1) * g)
        da, db = profile.delta[j - 1], profile.atled[j - 1]
        if kind == "U":
            if not fa.real > -j - da:
                bad(f"alpha_{j}", f"{j}(alpha+{j - 1}gamma)", fa, fa.real + j + da)
            if not fb.real > -j - db:
                bad(f"beta_{j}", f"{j}(beta+{j - 1}gamma)", fb, fb.real + j + db)
        elif kind == "dotU":
            if _on_lattice(fa, -j - da):
                bad(f"alpha_{j}", f"{j}(alpha+{j - 1}gamma)", fa, 0.0)
            if _on_lattice(fb, -j - db):
                bad(f"beta_{j}", f"{j}(beta+{j - 1}gamma)", fb, 0.0)
        else:
            va = a + profile.bar_delta[j - 1] + (j - 1) * g
            vb = b + profile.bar_atled[j - 1] + (j - 1) * g
            if _on_lattice(va, -1):
                bad(f"alpha_{j}", f"alpha+{profile.bar_delta[j - 1]}+{j - 1}gamma", va, 0.0)
            if _on_lattice(vb, -1):
                bad(f"beta_{j}", f"beta+{profile.bar_atled[j - 1]}+{j - 1}gamma", vb, 0.0)
    for j in range(1, N):
        if kind == "U":
            v = j * (j + 1) * g
            if not v.real > -j:
                bad(f"gamma_{j}", f"{j * (j + 1)}gamma", v, v.real + j)
        elif kind == "dotU":
            v = j * (j + 1) * g
            if _on_lattice(v, -j):
                bad(f"gamma_{j}", f"{j * (j + 1)}gamma", v, 0.0)
        else:
            v = (j + 1) * g
            if _on_lattice(v, -1) and not _on_lattice(g, 10**9):
                bad(f"gamma_{j}", f"{j + 1}gamma", v, 0.0)
    return out


def affine_key(fn):
    """Hashable coefficient record used to compare functionals exactly."""
    return (fn.const, fn.terms)


__all__ = [
    "GenericParams", "SymmetricParams", "Affine", "LaurentPoly", "VanishingProfile",
    "DomainReport", "Violation", "alpha_star", "beta_star", "gamma_star",
    "star_functionals", "rho", "rho_functional", "rho_literal", "varrho",
    "varrho_functional", "vanishing_profile", "in_domain", "omega_margin",
    "v_margin", "cluster_functional", "cluster_order", "face_cluster",
    "thm_star_of_face", "df0_params", "df_params", "KINDS", "ANCHORS",
]
