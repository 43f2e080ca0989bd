import itertools
import math
import random

import pytest
from hypothesis import given, settings, strategies as st

from selberg.combinatorics import (RegionShape, a_face, bdf_value, brute_force_sigma_tamari,
                                   catalan, enumerate_a_faces, enumerate_k_faces,
                                   enumerate_sigma_tamari, enumerate_tamari, k_face)
from selberg.errors import DomainError, EmptySet, InvalidFace


def _runs(face):
    return frozenset(face.labels)


def _laminar(a, b):
    return not (a & b) or a <= b or b <= a


def _brute_tamari_count(shape):
    # every subset of faces, kept if pairwise laminar and not extendable
    faces = [_runs(f) for f in enumerate_k_faces(shape)]
    fams = []
    for r in range(len(faces) + 1):
        for sub in itertools.combinations(range(len(faces)), r):
            if all(_laminar(faces[i], faces[j]) for i, j in itertools.combinations(sub, 2)):
                fams.append(set(sub))
    maximal = [f for f in fams
               if not any(all(_laminar(faces[x], faces[i]) for i in f)
                          for x in range(len(faces)) if x not in f)]
    return len(maximal)


@pytest.mark.parametrize("N", range(1, 7))
def test_k_face_count(N):
    assert len(enumerate_k_faces(RegionShape(0, N, 0))) == N * (N + 3) // 2


@pytest.mark.parametrize("N,want", [(1, 2), (2, 5), (3, 14), (4, 42), (5, 132), (6, 429)])
def test_tamari_count_is_catalan(N, want):
    assert len(enumerate_tamari(RegionShape(0, N, 0))) == want
    assert catalan(N + 1) == math.comb(2 * N + 2, N + 1) // (N + 2)


def test_small_face_lists():
    assert sorted((f.j, f.k) for f in enumerate_k_faces(RegionShape(0, 1, 0))) == [(1, 2), (2, 3)]
    pairs = {frozenset((f.j, f.k)) for f in enumerate_k_faces(RegionShape(0, 2, 0))}
    assert pairs == {frozenset(p) for p in ((1, 2), (2, 3), (3, 4), (1, 3), (2, 4))}
    assert len(enumerate_k_faces(RegionShape(1, 1, 1))) == 9


@pytest.mark.parametrize("shape", [(0, 1, 0), (0, 2, 0), (0, 3, 0), (1, 1, 0), (1, 1, 1)])
def test_tamari_matches_brute_force(shape):
    sh = RegionShape(*shape)
    assert len(enumerate_tamari(sh)) == _brute_tamari_count(sh)


@pytest.mark.parametrize("N", range(1, 6))
def test_tamari_families_are_nested_and_full(N):
    for fam in enumerate_tamari(RegionShape(0, N, 0)):
        runs = [_runs(f) for f in fam.intervals]
        for a, b in itertools.combinations(runs, 2):
            assert _laminar(a, b)
        # a minimal facet of the N-dimensional K meets exactly N faces
        assert len(runs) == N


def test_tamari_order_is_deterministic():
    a = [f.to_json() for f in enumerate_tamari(RegionShape(0, 3, 0))]
    b = [f.to_json() for f in enumerate_tamari(RegionShape(0, 3, 0))]
    assert a == b


def test_k_face_rejects_bad_pairs():
    with pytest.raises(InvalidFace):
        k_face(RegionShape(0, 2, 0), 1, 1)


def test_sigma_tamari_small():
    fams = enumerate_sigma_tamari(RegionShape(0, 1, 0))
    assert sorted(f.to_json() for f in fams) == [[["0", [1]]], [["1", [1]]]]


@pytest.mark.parametrize("shape", [(0, 1, 0), (0, 2, 0), (1, 1, 0), (0, 3, 0), (1, 1, 1)])
def test_sigma_tamari_matches_brute_force(shape):
    sh = RegionShape(*shape)
    got = sorted(sorted((a, sorted(s)) for a, s in f.intervals) for f in enumerate_sigma_tamari(sh))
    want = sorted(sorted((a, sorted(s)) for a, s in f) for f in brute_force_sigma_tamari(sh))
    assert got == want


def test_sigma_tamari_respects_anchor_blocks():
    sh = RegionShape(1, 1, 1)
    allowed = {"0": {1, 2}, "1": {2, 3}, "inf": {3, 1}}
    for fam in enumerate_sigma_tamari(sh):
        for anchor, s in fam.intervals:
            assert set(s) <= allowed[anchor]


def test_a_faces():
    sh = RegionShape(0, 2, 0)
    assert a_face(sh, set(), {1, 2}, "0").members == {1, 2}
    with pytest.raises(InvalidFace):
        a_face(sh, {1, 2}, set(), "inf")
    with pytest.raises(InvalidFace):
        a_face(sh, set(), set(), "0")
    # (0,2,0): anchors 0 and 1 each see both variables, infinity sees none
    assert len(enumerate_a_faces(sh)) == 6


def test_bdf_examples():
    assert bdf_value({1, 2}, (0.2, 0.3)) == pytest.approx(0.5, rel=1e-15)
    assert bdf_value({1}, (0.2, 0.3)) == pytest.approx(0.4, rel=1e-15)
    x, y, z = 0.21, 0.33, 0.47
    want = y * (x + y + z) / ((x + y) * (y + z))
    assert bdf_value({2}, (x, y, z)) == pytest.approx(want, rel=1e-14)


def test_bdf_errors():
    with pytest.raises(EmptySet):
        bdf_value(set(), (0.2, 0.3))
    with pytest.raises(DomainError):
        bdf_value({1}, (0.0, 0.3))


def _subsets(items):
    items = list(items)
    for r in range(len(items) + 1):
        yield from (set(c) for c in itertools.combinations(items, r))


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 5), st.integers(0, 2 ** 31))
def test_forgetful_identity(N, seed):
    r = random.Random(seed)
    x = [r.uniform(0.001, 0.999) for _ in range(N)]
    for M in range(1, N):
        for Q in (q for q in _subsets(range(1, M + 1)) if q):
            lhs = bdf_value(Q, x[:M])
            rhs = math.prod(bdf_value(Q | Q0, x) for Q0 in _subsets(range(M + 1, N + 1)))
            assert abs(lhs - rhs) <= 1e-12 * lhs


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 5), st.integers(0, 2 ** 31))
def test_bdf_product_lifts_coordinates(N, seed):
    r = random.Random(seed)
    x = [r.uniform(0.001, 0.999) for _ in range(N)]
    for j in range(1, N + 1):
        prod = math.prod(bdf_value(S, x) for S in _subsets(range(1, N + 1)) if j in S)
        assert abs(prod - x[j - 1]) <= 1e-12 * x[j - 1]
