from __future__ import annotations

import random

from hypothesis import given, settings, strategies as st

from satkit.containment import MatrixFamily, contains, creates, family_free
from satkit.matrix import Matrix, build_T, parse_matrix

import oracles
from test_matrix import SIX_BY_TEN


def _check(M, F):
    w = contains(M, F)
    want = oracles.contains(list(M.columns), list(F.columns), M.n, F.n)
    assert (w is not None) == want
    if w is not None:
        assert w.replay(M, F)


def test_examples():
    K2 = build_T(2, 0, 2)
    w = contains(K2, K2)
    assert w is not None and w.replay(K2, K2)
    M = parse_matrix(SIX_BY_TEN)
    assert family_free(M, MatrixFamily.of(build_T(3, 0, 3)))
    assert contains(Matrix(0, ()), K2) is None
    # multiplicities in F need distinct columns of M
    twice = Matrix(1, (1, 1))
    assert contains(Matrix(1, (0, 1)), twice) is None
    assert contains(Matrix(2, (1, 3)), twice) is not None


def test_random_binary_vs_oracle():
    rng = random.Random(11)
    for _ in range(400):
        n = rng.randint(1, 4)
        M = Matrix(n, tuple(rng.sample(range(2 ** n), rng.randint(0, min(6, 2 ** n)))))
        k = rng.randint(1, min(n, 3))
        F = Matrix(k, tuple(rng.randrange(2 ** k) for _ in range(rng.randint(1, 3))))
        _check(M, F)


@given(st.data())
@settings(max_examples=300)
def test_random_ternary_vs_oracle(data):
    n = data.draw(st.integers(1, 3))
    M = Matrix(n, tuple(data.draw(st.lists(st.integers(0, 3 ** n - 1), max_size=6, unique=True))), 2)
    k = data.draw(st.integers(1, n))
    F = Matrix(k, tuple(data.draw(st.lists(st.integers(0, 3 ** k - 1), min_size=1, max_size=3))), 2)
    _check(M, F)


def test_creates_matches_definition():
    rng = random.Random(5)
    fam = MatrixFamily.of(build_T(3, 0, 3))
    for _ in range(100):
        n = rng.randint(3, 4)
        cols = rng.sample(range(2 ** n), 5)
        M = Matrix(n, tuple(cols))
        if fam.violates(M):
            continue
        for c in range(2 ** n):
            if c not in M.cols:
                assert creates(M, c, fam) == fam.violates(M.with_columns([c]))


def test_family_key_is_isomorphism_invariant():
    a = MatrixFamily.of(Matrix.from_strings("01", "11"), build_T(2, 2, 2))
    b = MatrixFamily.of(build_T(2, 2, 2), Matrix.from_strings("11", "01"))
    assert a.key == b.key
