"""Faces and minimal facets of the associahedra K_{l,m,n} and A_{l,m,n}.

Labels live on the cycle Z/(N+3):

    0            the point at infinity
    1..l         x_1..x_l            (block I1, left of 0)
    l+1          the point 0
    l+2..l+m+1   x_{l+1}..x_{l+m}    (block I2)
    l+m+2        the point 1
    l+m+3..N+2   x_{l+m+1}..x_N      (block I3)

A face of K is a consecutive run of labels of size 2..N+1 holding at most
one of the three fixed points.
"""
import math
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations, permutations

from .errors import DomainError, EmptySet, InvalidFace

ANCHORS = ("0", "1", "inf")


@dataclass(frozen=True)
class RegionShape:
    l: int
    m: int
    n: int

    def __post_init__(self):
        if min(self.l, self.m, self.n) < 0 or self.l + self.m + self.n < 1:
            raise DomainError(f"bad region shape {(self.l, self.m, self.n)}")

    @property
    def N(self):
        return self.l + self.m + self.n

    @property
    def modulus(self):
        return self.N + 3

    @property
    def blocks(self):
        l, m, N = self.l, self.m, self.N
        return (tuple(range(1, l + 1)), tuple(range(l + 1, l + m + 1)),
                tuple(range(l + m + 1, N + 1)))

    @property
    def special_labels(self):
        """Labels of (infinity, 0, 1)."""
        return (0, self.l + 1, self.l + self.m + 2)

    def label_of_var(self, i):
        if i <= self.l:
            return i
        if i <= self.l + self.m:
            return i + 1
        return i + 2

    def var_of_label(self, lab):
        """Variable index for a label, or None for a fixed point."""
        lab %= self.modulus
        l, m = self.l, self.m
        if lab == 0 or lab == l + 1 or lab == l + m + 2:
            return None
        if lab <= l:
            return lab
        if lab <= l + m + 1:
            return lab - 1
        return lab - 2

    def anchor_of_label(self, lab):
        lab %= self.modulus
        inf, zero, one = self.special_labels
        return {inf: "inf", zero: "0", one: "1"}.get(lab)

    def allowed_anchors(self, i):
        """Fixed points a variable may collide with inside A_{l,m,n}."""
        if i <= self.l:
            return ("0", "inf")
        if i <= self.l + self.m:
            return ("0", "1")
        return ("1", "inf")

    def as_tuple(self):
        return (self.l, self.m, self.n)


@dataclass(frozen=True, order=True)
class KFaceId:
    start: int
    length: int
    modulus: int = field(compare=False)

    @property
    def j(self):
        return self.start

    @property
    def k(self):
        return (self.start + self.length - 1) % self.modulus

    @property
    def labels(self):
        return tuple((self.start + t) % self.modulus for t in range(self.length))

    @property
    def codim(self):
        return self.length - 1

    def to_json(self):
        return {"j": self.j, "k": self.k, "codim": self.codim}


def k_face(shape, j, k):
    """The face F_{j,k}: the admissible run with endpoints j and k."""
    M = shape.modulus
    j %= M
    k %= M
    if j == k:
        raise InvalidFace(f"degenerate pair {{{j},{k}}}")
    specials = set(shape.special_labels)
    for a, b in ((j, k), (k, j)):
        length = (b - a) % M + 1
        f = KFaceId(a, length, M)
        if 2 <= length <= shape.N + 1 and len(specials.intersection(f.labels)) <= 1:
            return f
    raise InvalidFace(f"{{{j},{k}}} is not a face of K{shape.as_tuple()}")


def _all_k_faces(shape):
    M = shape.modulus
    specials = set(shape.special_labels)
    out = []
    for start in range(M):
        for length in range(2, shape.N + 2):
            f = KFaceId(start, length, M)
            if len(specials.intersection(f.labels)) <= 1:
                out.append(f)
    return out


def enumerate_k_faces(shape):
    """All faces F_{j,k} of K_{l,m,n}, ordered by (start, length)."""
    return sorted(_all_k_faces(shape))


def _mask(labels):
    m = 0
    for x in labels:
        m |= 1 << x
    return m


def _compatible(a, b):
    return a & b == 0 or a & b == a or a & b == b


def maximal_laminar(masks):
    """All maximal pairwise nested-or-disjoint subfamilies, as index tuples."""
    n = len(masks)
    compat = [[_compatible(masks[i], masks[j]) for j in range(n)] for i in range(n)]
    out = []

    def rec(i, chosen, allowed):
        # allowed: indices >= i compatible with every chosen one
        if i == n:
            for t in range(n):
                if t not in chosen and all(compat[t][c] for c in chosen):
                    return
            out.append(tuple(chosen))
            return
        if i in allowed:
            rec(i + 1, chosen + [i], allowed & {t for t in allowed if compat[i][t]})
        # excluding i is only useful if something chosen later blocks it
        rec(i + 1, chosen, allowed - {i})

    rec(0, [], set(range(n)))
    return out


@dataclass(frozen=True)
class ParenFamily:
    intervals: tuple

    def minimal_facet(self):
        """For K families: the faces F_{j,k} whose runs form the family."""
        return tuple((f.j, f.k) for f in self.intervals)

    def to_json(self):
        if self.intervals and isinstance(self.intervals[0], KFaceId):
            return [list(f.labels) for f in self.intervals]
        return [[a, sorted(s)] for a, s in self.intervals]


def enumerate_tamari(shape):
    """Maximal nested-or-disjoint families of K-face runs (the set T(l,m,n))."""
    faces = enumerate_k_faces(shape)
    masks = [_mask(f.labels) for f in faces]
    fams = [ParenFamily(tuple(faces[i] for i in idx)) for idx in maximal_laminar(masks)]
    return sorted(fams, key=lambda p: [(f.start, f.length) for f in p.intervals])


@lru_cache(maxsize=None)
def catalan(n):
    """C_n by the convolution recursion."""
    if n <= 1:
        return 1
    return sum(catalan(i) * catalan(n - 1 - i) for i in range(n))


# --------------------------------------------------------------- A faces

@dataclass(frozen=True)
class AFaceId:
    S: frozenset
    Q: frozenset
    anchor: str

    @property
    def members(self):
        return self.S | self.Q


def _anchor_blocks(shape, anchor):
    I1, I2, I3 = (set(b) for b in shape.blocks)
    return {"0": (I1, I2), "1": (I2, I3), "inf": (I3, I1)}[anchor]


def a_face(shape, S, Q, anchor):
    """Validated F_{S,Q;anchor}.  S and Q may come in either order."""
    if anchor not in ANCHORS:
        raise InvalidFace(f"unknown anchor {anchor!r}")
    S, Q = frozenset(S), frozenset(Q)
    if not S and not Q:
        raise InvalidFace("S and Q both empty")
    b1, b2 = _anchor_blocks(shape, anchor)
    for first, second in ((S, Q), (Q, S)):
        if first <= b1 and second <= b2:
            return AFaceId(first, second, anchor)
    raise InvalidFace(f"F_{{{sorted(S)},{sorted(Q)};{anchor}}} is not a face of A{shape.as_tuple()}")


def enumerate_a_faces(shape):
    out = []
    for anchor in ANCHORS:
        b1, b2 = _anchor_blocks(shape, anchor)
        pool = sorted(b1 | b2)
        for r in range(1, len(pool) + 1):
            for sub in combinations(pool, r):
                s = frozenset(sub)
                out.append(AFaceId(s & b1, s & b2, anchor))
    return out


def enumerate_sigma_tamari(shape):
    """Maximal families of (anchor, set) pairs: the set Sigma-T(l,m,n).

    Each variable sits with exactly one permitted anchor, and the sets
    attached to one anchor form a maximal chain of its assigned variables.
    Sets at different anchors are disjoint, since one point cannot collide
    with two fixed points.
    """
    N = shape.N
    fams = []

    def assign(i, groups):
        if i > N:
            chains = [_chains(anchor, groups[anchor]) for anchor in ANCHORS]
            for a in chains[0]:
                for b in chains[1]:
                    for c in chains[2]:
                        fams.append(ParenFamily(tuple(a + b + c)))
            return
        for anchor in shape.allowed_anchors(i):
            groups[anchor].append(i)
            assign(i + 1, groups)
            groups[anchor].pop()

    assign(1, {a: [] for a in ANCHORS})
    return sorted(fams, key=_sigma_key)


def _chains(anchor, members):
    if not members:
        return [[]]
    out = []
    for perm in permutations(members):
        out.append([(anchor, frozenset(perm[:t])) for t in range(1, len(perm) + 1)])
    return out


def _sigma_key(fam):
    return [(ANCHORS.index(a), len(s), sorted(s)) for a, s in fam.intervals]


def sigma_family_valid(shape, fam):
    """Rule check for a Sigma-T family; returns a reason string or None."""
    N = shape.N
    seen = set()
    for a, s in fam:
        if a not in ANCHORS or not s or not s <= set(range(1, N + 1)):
            return f"bad pair {(a, sorted(s))}"
        for i in s:
            if a not in shape.allowed_anchors(i):
                return f"variable {i} not allowed at anchor {a}"
        seen.add((a, frozenset(s)))
    pairs = list(seen)
    for (a, s), (b, q) in combinations(pairs, 2):
        if a == b and not (s <= q or q <= s):
            return f"unnested at anchor {a}: {sorted(s)} vs {sorted(q)}"
        if a != b and s & q:
            return f"overlap across anchors {a},{b}"
    return None


def brute_force_sigma_tamari(shape):
    """Maximal valid families found by exhaustive search over A faces."""
    faces = [(f.anchor, f.members) for f in enumerate_a_faces(shape)]
    n = len(faces)

    def ok(p, q):
        (a, s), (b, t) = p, q
        if a == b:
            return s <= t or t <= s
        return not (s & t)

    compat = [[ok(faces[i], faces[j]) for j in range(n)] for i in range(n)]
    out = []

    def rec(i, chosen, allowed):
        if i == n:
            for t in range(n):
                if t not in chosen and all(compat[t][c] for c in chosen):
                    return
            out.append(frozenset(faces[c] for c in chosen))
            return
        if i in allowed:
            rec(i + 1, chosen + [i], {t for t in allowed if compat[i][t]})
        rec(i + 1, chosen, allowed - {i})

    rec(0, [], set(range(n)))
    return out


# --------------------------------------------------------------- bdf

def bdf_value(S, x):
    """x_{F_S} = prod over S0 containing S of (sum_{j in S0} x_j)^((-1)^(|S|-|S0|))."""
    S = frozenset(S)
    if not S:
        raise EmptySet("bdf of the empty set")
    N = len(x)
    if not S <= set(range(1, N + 1)):
        raise DomainError(f"index set {sorted(S)} not within 1..{N}")
    for v in x:
        if not v > 0:
            raise DomainError("coordinates must be positive")
    rest = [j for j in range(1, N + 1) if j not in S]
    base = math.fsum(x[j - 1] for j in S)
    logsum = 0.0
    for r in range(len(rest) + 1):
        sign = -1.0 if r % 2 else 1.0
        for extra in combinations(rest, r):
            logsum += sign * math.log(base + math.fsum(x[j - 1] for j in extra))
    return math.exp(logsum)
