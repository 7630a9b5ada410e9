from __future__ import annotations

import random
from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from satkit.matrix import (
    Matrix,
    MatrixFormatError,
    build_K_l,
    build_T,
    canonical_form,
    chi,
    column_from_id,
    column_id,
    complement,
    concat,
    delete_row,
    duplicate_row,
    f,
    format_matrix,
    isomorphic,
    parse_matrices,
    parse_matrix,
    permute_rows,
    submatrix,
)

import oracles

SIX_BY_TEN = """6 10 1
0000110111
0011000111
0101001011
1000011011
1010001101
0100101101
"""


@st.composite
def matrices(draw, max_n=4, max_m=6, l=None, simple=True):
    ll = draw(st.integers(1, 2)) if l is None else l
    n = draw(st.integers(0, max_n))
    N = (ll + 1) ** n
    if simple:
        cols = draw(st.lists(st.integers(0, N - 1), max_size=min(max_m, N), unique=True))
    else:
        cols = draw(st.lists(st.integers(0, N - 1), max_size=max_m))
    return Matrix(n, tuple(cols), ll)


def test_submatrix_examples():
    K2 = Matrix.from_strings("0011", "0101")
    assert submatrix(K2, [0], [0, 1, 2, 3]).rows == ((0, 0, 1, 1),)
    M = parse_matrix(SIX_BY_TEN)
    assert submatrix(M, range(6), range(10)) == M
    with pytest.raises(IndexError):
        submatrix(K2, [2])


def test_submatrix_t31_direct():
    T31 = Matrix.from_strings("100", "010", "001")
    assert submatrix(T31, [1, 2], [1, 2]).columns == ((1, 0), (0, 1))


def test_build_T():
    assert build_T(3, 1, 1).m == 3
    assert all(sum(c) == 1 for c in build_T(3, 1, 1).columns)
    assert build_T(2, 0, 2).cols == (0, 1, 2, 3)
    assert build_T(4, 0, 1).m == f(4, 1) == 5
    with pytest.raises(ValueError):
        build_T(3, 2, 1)


@pytest.mark.parametrize("k,lo,hi", [(k, lo, hi) for k in range(6) for lo in range(k + 1) for hi in range(lo, k + 1)])
def test_build_T_sizes(k, lo, hi):
    M = build_T(k, lo, hi)
    assert M.m == sum(comb(k, i) for i in range(lo, hi + 1))
    assert M.simple and list(M.cols) == sorted(M.cols)


def test_build_K_l():
    assert build_K_l(1, 2).columns == ((0,), (1,), (2,))
    assert build_K_l(2, 1) == build_T(2, 0, 2)
    assert build_K_l(3, 2).m == 27


def test_chi_and_f():
    assert chi([], 3) == (0, 0, 0)
    assert chi(range(5), 5) == (1,) * 5
    assert chi([0, 2], 4) == (1, 0, 1, 0)
    assert f(4, 2) == 11 and f(7, 0) == 1 and f(5, 5) == 32


def test_column_ids_bijective():
    for l in (1, 2, 3):
        for n in range(4):
            ids = [column_id(column_from_id(c, n, l), l) for c in range(((l + 1) ** n))]
            assert ids == list(range((l + 1) ** n))
    # row 0 is the most significant digit
    assert column_id((1, 0, 0)) == 4


def test_complement_dup_delete_concat():
    T31 = build_T(3, 1, 1)
    assert sorted(complement(T31).cols) == sorted(build_T(3, 2, 2).cols)
    with pytest.raises(ValueError):
        complement(build_K_l(1, 2))
    M = parse_matrix(SIX_BY_TEN)
    for i in range(6):
        D = duplicate_row(M, i)
        assert D.rows[-1] == M.rows[i] and delete_row(D, 6) == M
    C = concat(build_T(4, 0, 1), build_T(4, 4, 4))
    assert C.m == 6 and C.simple
    with pytest.raises(ValueError):
        concat(build_T(3, 0, 1), build_T(4, 0, 1))


@given(matrices(l=1))
def test_complement_involution(M):
    assert complement(complement(M)) == M


@given(matrices())
def test_duplicate_then_delete(M):
    if M.n:
        assert delete_row(duplicate_row(M, M.n - 1), M.n) == M


def test_parse_format():
    K2 = parse_matrix("2 4 1\n0011\n0101\n")
    assert K2 == build_T(2, 0, 2)
    assert format_matrix(parse_matrix(SIX_BY_TEN)) == SIX_BY_TEN
    M = parse_matrix("1 2 2\n02\n")
    assert M.l == 2 and M.rows == ((0, 2),)
    assert parse_matrix("0 0 1\n") == Matrix(0, ())
    assert parse_matrix("3 0 1\n\n\n\n").shape == (3, 0)


@pytest.mark.parametrize("text,line", [
    ("2 4 1\n0011\n010\n", 3),
    ("2 4\n0011\n0101\n", 1),
    ("1 2 1\n0a\n", 2),
    ("1 2 1\n02\n", 2),
    ("2 2 1\n00\n", 2),
    ("", 1),
])
def test_parse_errors_name_line(text, line):
    with pytest.raises(MatrixFormatError) as e:
        parse_matrix(text)
    assert e.value.line == line


def test_parse_error_names_column():
    with pytest.raises(MatrixFormatError) as e:
        parse_matrix("1 3 1\n012\n")
    assert (e.value.line, e.value.col) == (2, 3)


@given(matrices(simple=False))
def test_roundtrip(M):
    assert parse_matrix(format_matrix(M)) == M


def test_parse_matrices_blocks():
    ms = parse_matrices("1 1 1\n1\n\n2 1 1\n0\n1\n")
    assert [M.n for M in ms] == [1, 2]


def test_canonical_examples():
    M = Matrix.from_strings("0011", "0101", "0110")
    swapped = permute_rows(M, [1, 0, 2])
    assert canonical_form(M) == canonical_form(swapped)
    T31 = build_T(3, 1, 1)
    import itertools
    forms = {canonical_form(permute_rows(T31, p)) for p in itertools.permutations(range(3))}
    assert len(forms) == 1


@given(matrices(max_n=5, max_m=6))
@settings(max_examples=200)
def test_canonical_idempotent_and_invariant(M):
    C = canonical_form(M)
    assert canonical_form(C) == C
    order = list(range(M.n))
    random.Random(len(M.cols)).shuffle(order)
    P = permute_rows(M, order)
    assert canonical_form(Matrix(P.n, tuple(reversed(P.cols)), P.l)) == C


def test_canonical_vs_bruteforce():
    rng = random.Random(7)
    mats = [Matrix(4, tuple(rng.sample(range(16), 5))) for _ in range(1000)]
    # small value alphabet makes isomorphic pairs frequent
    sample = mats[:120]
    forms = [canonical_form(M) for M in sample]
    agree = 0
    for i in range(len(sample)):
        for j in range(i + 1, len(sample)):
            same = forms[i] == forms[j]
            assert same == oracles.isomorphic(sample[i].columns, sample[j].columns, 4)
            agree += same
    assert agree > 0
    for M in mats:
        assert isomorphic(M, permute_rows(M, [3, 1, 0, 2]))
