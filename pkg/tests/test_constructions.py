from __future__ import annotations

import itertools
import shutil
from importlib import resources

import pytest

from satkit import reproduce
from satkit.constructions import (
    FANO_LINES,
    GALLERY,
    N_matrix,
    StarFamily,
    UnsupportedError,
    bad_k_set_count,
    bad_set_bound,
    family,
    family_params,
    gallery,
    gallery_cases,
    hsf_saturated,
    hsf_seed,
    hypergraph_H,
    load_asset,
    lt22_family,
    one_row,
    remark_family,
    set_data_dir,
    star_family,
    star_pad,
    t32_tilde,
)
from satkit.containment import MatrixFamily
from satkit.matrix import Matrix, build_T, concat, f, parse_matrix, repeat
from satkit.saturation import is_saturated

from test_matrix import SIX_BY_TEN

FOUR_BY_TEN = "4 10 1\n0000000111\n0000111011\n0011001101\n0101010110\n"
T32_M5 = "5 13 1\n0100001111000\n0010001100100\n0001001010010\n0000101001001\n0000011000111\n"


def test_printed_matrices():
    assert gallery("K3_SAT", 6).matrix == parse_matrix(SIX_BY_TEN)
    assert gallery("K3_SAT", 4).matrix == parse_matrix(FOUR_BY_TEN)
    e = gallery("T32_SAT", 5)
    assert sorted(e.matrix.cols) == sorted(parse_matrix(T32_M5).cols)
    assert e.matrix.m == 13 and e.verify()


@pytest.mark.parametrize("gid,n,params", list(gallery_cases(12)),
                         ids=lambda x: str(x) if not isinstance(x, dict) else ",".join(f"{k}{v}" for k, v in x.items()))
def test_gallery_entry_verifies(gid, n, params):
    assert gallery(gid, n, **params).verify()


def test_gallery_sizes():
    for n in range(3, 13):
        assert gallery("T32_SAT", n).matrix.m == 3 * n - 2
        assert gallery("K2_SAT", n).matrix.m == n + 1
        assert gallery("CHAIN", n).matrix.m == n + 1
        assert len(t32_tilde(n)) == 2 * n - 4
    for l in range(2, 6):
        for m in range(0, l + 1):
            for n in range(l, 9):
                if m == 1:
                    continue
                want = l + m - 1 if m > 1 else (2 if l == 2 else l + 1)
                assert one_row(n, m, l).matrix.m == want


def test_named_examples():
    e = gallery("LT22_SAT", 7, l=3)
    assert e.matrix.m == 15 and is_saturated(e.matrix, lt22_family(3))
    assert gallery("LT22_SAT", 4, l=3).matrix.m == 9
    assert gallery("LT22_SAT", 6, l=3).matrix.m == 14
    s3 = gallery("SAT3", 3)
    assert s3.matrix.m == 3 and is_saturated(s3.matrix, family("T20T22"))
    for l in (1, 2, 3):
        assert gallery("LT22_REMARK", 6, l=l).matrix.m <= 2 * 2 ** l
    assert sorted(FANO_LINES) == sorted(set(FANO_LINES))
    pairs = [p for L in FANO_LINES for p in itertools.combinations(sorted(L), 2)]
    assert len(pairs) == len(set(pairs)) == 21


def test_unsupported():
    with pytest.raises(UnsupportedError):
        gallery("K3_SAT", 3)
    with pytest.raises(UnsupportedError):
        gallery("NOPE", 5)
    with pytest.raises(UnsupportedError):
        one_row(2, 2, 3)  # n = l-1 with m > 1
    with pytest.raises(UnsupportedError):
        one_row(5, 1, 3)  # m = 1 needs l a power of two
    with pytest.raises(UnsupportedError):
        gallery("LT22_SAT", 5, l=3, variant="design")


def test_row_repetition_tails():
    M6 = gallery("T30T32T33", 6).matrix
    for n in (7, 9):
        M = gallery("T30T32T33", n).matrix
        assert M.rows[:6] == M6.rows and all(r == M6.rows[-1] for r in M.rows[6:])
    M5 = gallery("T3LE2", 5).matrix
    M = gallery("T3LE2", 8).matrix
    assert all(r == (1, 1, 0, 0, 0, 0, 1, 0, 1, 1) for r in M.rows[5:]) and M.rows[:5] == M5.rows


def test_tamper_fails_gallery_row(tmp_path):
    src = resources.files("satkit").joinpath("data")
    for item in src.iterdir():
        if item.name.endswith(".mat"):
            (tmp_path / item.name).write_text(item.read_text())
    text = (tmp_path / "K3_SAT_6x10.mat").read_text().split("\n")
    text[1] = text[1][:-1] + ("0" if text[1][-1] == "1" else "1")
    (tmp_path / "K3_SAT_6x10.mat").write_text("\n".join(text))
    try:
        set_data_dir(tmp_path)
        ok, detail = reproduce.c9()
        assert not ok and "K3_SAT" in detail
    finally:
        set_data_dir(None)
    assert reproduce.c9()[0]


# star families and the saturated growth construction -----------------------------


def test_hypergraph():
    assert hypergraph_H(5, 1, 2) == [(1, 5), (2, 4)]
    assert hypergraph_H(7, 2, 1) == []
    for n in range(3, 11):
        for l in (1, 2, 3):
            if l + 1 > n:
                continue
            for d in (1, 2, 3, 4):
                H = [set(Y) for Y in hypergraph_H(n, l, d)]
                for A in itertools.combinations(range(1, n + 1), l):
                    assert sum(1 for Y in H if set(A) <= Y) <= d - 1


def test_family_params():
    assert family_params(lt22_family(2), 2)[:2] == (2, 1)
    assert family_params(lt22_family(3), 2)[:2] == (2, 2)
    odd = MatrixFamily.of(Matrix.from_strings("101", "010"))
    base = family_params(odd, 2)
    assert family_params(odd, 2, extra=3) == base
    l, d, _ = base
    top = 1 + max(F.m for F in odd.members) + 3
    layer = repeat(build_T(2, 0, l - 1), top) if l else None
    parts = [build_T(2, l, l)] * d + [build_T(2, w, w) for w in range(l + 1, 3)]
    M = concat(*([layer] if layer is not None else []), *parts)
    assert not odd.violates(M)
    with pytest.raises(ValueError):
        family_params(family("K2"), 2)


def test_hsf_seed():
    fam = lt22_family(3)
    # the seed needs l < k; 3T22 has l = k = 2, so use a family with l < k
    fam2 = MatrixFamily.of(repeat(build_T(2, 1, 1), 2))
    l, d, _ = family_params(fam2, 2)
    assert l < 2
    for n in range(3, 8):
        M = hsf_seed(n, fam2, 2)
        assert not fam2.violates(M)
        assert M.m == len(hypergraph_H(n, l, d)) + build_T(n, l, l).m
    with pytest.raises(ValueError):
        hsf_seed(5, fam, 2)


def test_bad_sets():
    assert bad_k_set_count(8, 3, 1, 3) <= 240 == bad_set_bound(8, 3, 1, 3)
    assert all(bad_k_set_count(n, 3, 1, 1) == 0 == bad_set_bound(n, 3, 1, 1) for n in range(3, 8))
    for n in range(2, 11):
        for k in range(1, min(n, 4) + 1):
            for l in range(0, k):
                for d in (1, 2, 3):
                    assert bad_k_set_count(n, k, l, d) <= bad_set_bound(n, k, l, d)


def test_star_identity():
    for k in range(1, 5):
        for d in range(1, 4):
            T = build_T(k, 0, k)
            L = concat(star_pad(T, d), N_matrix(k, d))
            top = Matrix.from_columns((c[:k] for c in L.columns), n=k)
            assert sorted(top.cols) == sorted(concat(T, repeat(build_T(k, k, k), d)).cols)
            assert star_pad(T, d).n == k + d and star_pad(T, d).m == T.m
            assert all(sum(c) == k + d - 1 for c in N_matrix(k, d).columns)


def test_star_family():
    fam = lt22_family(3)
    star = star_family(fam, 2)
    assert isinstance(star, StarFamily) and star.d == 2
    for s in range(1, 6):
        assert not fam.violates(N_matrix(s, star.d))
    with pytest.raises(ValueError):
        star_family(MatrixFamily.of(repeat(build_T(2, 1, 1), 2)), 2)


def test_hsf_saturated():
    K2 = family("K2")
    for n in range(2, 8):
        M = hsf_saturated(n, K2, 2)
        assert is_saturated(M, K2) and M.m <= f(n, 1)
    for fam in (lt22_family(2), lt22_family(3), remark_family(2)):
        for n in range(3, 8):
            M = hsf_saturated(n, fam, fam.members[0].n)
            assert is_saturated(M, fam)
    M = hsf_saturated(6, lt22_family(3), 2)
    assert M.m >= 13


def test_hsf_growth_regression():
    # e <= C n^(k-1) with C = 3 fitted on n <= 6 and frozen
    fam = lt22_family(3)
    for n in range(3, 13):
        assert hsf_saturated(n, fam, 2).m <= 3 * n
