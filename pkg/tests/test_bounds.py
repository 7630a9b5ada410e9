from __future__ import annotations

import random

import pytest
from hypothesis import given, settings, strategies as st

from satkit.bounds import (
    BoundValue,
    entry_sum,
    lt22_lower,
    max_top_count,
    sauer_forb,
    sauer_forb_l,
    shift_fixpoint,
    shift_row,
)
from satkit.containment import MatrixFamily
from satkit.matrix import Matrix, build_K_l, build_T, f


def test_formulas():
    assert sauer_forb(4, 3) == 11
    assert all(sauer_forb(n, 1) == 1 for n in range(6))
    assert sauer_forb(5, 3) == 16
    assert sauer_forb_l(2, 1, 2) == 4
    assert sauer_forb_l(3, 2, 2) == 20
    assert all(sauer_forb_l(n, k, 1) == f(n, k - 1) for n in range(6) for k in range(1, n + 2))
    assert lt22_lower(6).value == 13
    with pytest.raises(ValueError):
        BoundValue("sat-lower", -1, "x")
    with pytest.raises(ValueError):
        sauer_forb(1, 3)


def test_shift_examples():
    M = Matrix(3, (0, 2, 6))  # row 0 all zero
    assert shift_row(M, 0) == M
    for k, l in ((2, 1), (2, 2), (3, 1)):
        K = build_K_l(k, l)
        assert shift_row(K, 0).cols == K.cols
    ext = Matrix(4, tuple(c for c in range(81) if sum(1 for d in _digits(c, 4, 2) if d == 2) < 2), 2)
    S = shift_fixpoint(ext)
    assert S.m == ext.m == sauer_forb_l(4, 2, 2)


def _digits(c, n, l):
    out = []
    for _ in range(n):
        c, r = divmod(c, l + 1)
        out.append(r)
    return out


def _random_free(rng, n, k, l):
    K = MatrixFamily.of(build_K_l(k, l))
    order = list(range((l + 1) ** n))
    rng.shuffle(order)
    cols = []
    for c in order[: rng.randint(1, len(order))]:
        if not K.violates(Matrix(n, tuple(cols + [c]), l)):
            cols.append(c)
    return Matrix(n, tuple(cols), l), K


@given(st.integers(0, 10 ** 6))
@settings(max_examples=150, deadline=None)
def test_shift_keeps_freeness(seed):
    rng = random.Random(seed)
    l = rng.choice((1, 2))
    n = rng.randint(2, 4 if l == 1 else 3)
    k = rng.randint(1, min(3, n))
    M, K = _random_free(rng, n, k, l)
    S = shift_row(M, rng.randrange(n))
    assert S.m == M.m and S.simple and not K.violates(S)
    T = shift_fixpoint(M)
    assert max_top_count(T) <= k - 1
    assert T.m <= sauer_forb_l(n, k, l)
    assert entry_sum(T) <= entry_sum(M)


def test_k2_free_fixpoint_has_weight_at_most_one():
    rng = random.Random(0)
    for _ in range(500):
        M, _ = _random_free(rng, 4, 2, 1)
        S = shift_fixpoint(M)
        assert S.m == M.m and all(sum(c) <= 1 for c in S.columns)
