from __future__ import annotations

import itertools
import random

import pytest

from satkit.constructions import family
from satkit.containment import MatrixFamily
from satkit.matrix import Matrix, build_T, column_from_id, delete_row, duplicate_row, parse_matrix
from satkit.saturation import (
    EXTENDABLE,
    NOT_ADMISSIBLE,
    SATURATED,
    close,
    duplicate_pairs,
    extend_by_duplication,
    find_bondy_row,
    is_m_saturated,
    is_m_saturated_literal,
    is_saturated,
    row_balance_check,
    row_extension_scan,
)

import oracles
from test_matrix import SIX_BY_TEN

SMALL_FAMS = ["K2", "K3", "T21", "T20T22", "T2GE1", "COL01_T22", "T32", "T30T33", "T3LE2"]


def _fam_list(fam):
    return [(F.n, list(F.columns)) for F in fam.members]


def test_verdicts():
    K2 = family("K2")
    M = build_T(4, 0, 1)
    assert is_saturated(M, K2).verdict == SATURATED
    smaller = Matrix(4, M.cols[1:])
    rep = is_saturated(smaller, K2)
    assert rep.verdict == EXTENDABLE and rep.column == column_from_id(M.cols[0], 4)
    assert is_saturated(build_T(2, 0, 2), K2).verdict == NOT_ADMISSIBLE
    with pytest.raises(ValueError):
        is_saturated(Matrix(2, (1, 1)), K2)


def test_printed_k3_matrix_and_duplicates():
    K3 = family("K3")
    M = parse_matrix(SIX_BY_TEN)
    assert is_saturated(M, K3)
    for i in range(6):
        assert is_saturated(duplicate_row(M, i), K3)
        assert is_saturated(delete_row(M, i), K3)


@pytest.mark.parametrize("name", SMALL_FAMS)
def test_is_saturated_vs_oracle(name):
    fam = family(name)
    for n in (2, 3):
        if n < fam.members[0].n - 1:
            continue
        N = 2 ** n
        for m in range(N + 1):
            for S in itertools.islice(itertools.combinations(range(N), m), 40):
                M = Matrix(n, S)
                want = oracles.saturated(list(M.columns), n, _fam_list(fam))
                assert is_saturated(M, fam).saturated == want


@pytest.mark.parametrize("name", ["K2", "T21", "T32", "COL01_T22", "T20T22"])
def test_m_saturated_vs_literal(name):
    fam = family(name)
    for n in (2, 3):
        N = 2 ** n
        for m in range(N + 1):
            for S in itertools.islice(itertools.combinations(range(N), m), 30):
                M = Matrix(n, S)
                fast = is_m_saturated(M, fam).saturated
                assert fast == is_m_saturated_literal(M, fam)
                assert fast == oracles.m_saturated(list(M.columns), n, _fam_list(fam))


def test_m_saturated_nonuniform():
    fam = MatrixFamily.of(build_T(2, 1, 1), build_T(3, 3, 3))
    for S in itertools.combinations(range(8), 3):
        M = Matrix(3, S)
        assert is_m_saturated(M, fam).saturated == is_m_saturated_literal(M, fam)


@pytest.mark.parametrize("name", SMALL_FAMS)
def test_close_is_saturated(name):
    fam = family(name)
    rng = random.Random(name)
    for n in range(3, 6):
        order = list(range(2 ** n))
        rng.shuffle(order)
        M = close(Matrix(n, ()), fam, order)
        assert is_saturated(M, fam)
    with pytest.raises(ValueError):
        close(build_T(3, 0, 3), family("K3"))


def test_duplication_step():
    K3 = family("K3")
    M = parse_matrix(SIX_BY_TEN)
    for i in range(6):
        E = extend_by_duplication(M, K3, i)
        assert is_saturated(E, K3)
        assert E.m <= M.m + 2 * len(duplicate_pairs(M, i))


def test_bondy_row():
    rng = random.Random(9)
    for _ in range(200):
        n = rng.randint(2, 6)
        M = Matrix(n, tuple(rng.sample(range(2 ** n), rng.randint(1, n))))
        i = find_bondy_row(M)
        assert i is not None and delete_row(M, i).simple


def test_row_balance():
    assert row_balance_check(parse_matrix(SIX_BY_TEN), 3)
    assert not row_balance_check(build_T(4, 0, 1), 3)


def test_row_extension_scan_small():
    K3 = family("K3")
    M = build_T(3, 0, 1)
    out = row_extension_scan(M, K3, 10, keep=100)
    assert out and all(is_saturated(X, K3) for X in out)
    assert len(out) == 16  # every appended row is admissible here
