"""Saturation, monotone saturation, closure and the row-duplication step."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from numba import njit

from .containment import ContainmentWitness, ForbiddenFamily, MatrixFamily, family_free
from .kernel import _add, _creates, kernel_for
from .matrix import Column, Matrix, column_from_id, delete_row, duplicate_row, submatrix

SATURATED = "saturated"
NOT_ADMISSIBLE = "not-admissible"
EXTENDABLE = "extendable"


@dataclass(frozen=True)
class SaturationReport:
    verdict: str
    witness: ContainmentWitness | None = None
    member: Matrix | None = None
    column: Column | None = None

    @property
    def saturated(self) -> bool:
        return self.verdict == SATURATED

    def __bool__(self) -> bool:
        return self.saturated


def _require_simple(M: Matrix) -> None:
    if not M.simple:
        raise ValueError("matrix has repeated columns")


def _absent_ids(M: Matrix) -> Iterable[int]:
    present = set(M.cols)
    return (c for c in range((M.l + 1) ** M.n) if c not in present)


def is_saturated(M: Matrix, fam: ForbiddenFamily) -> SaturationReport:
    """Check admissibility, then that every absent column (id order) creates a copy."""
    _require_simple(M)
    if isinstance(fam, MatrixFamily):
        hit = fam.witness(M)
        if hit is not None:
            return SaturationReport(NOT_ADMISSIBLE, witness=hit[1], member=hit[0])
        kern = kernel_for(fam, M.n)
        made = kern.creates_all(kern.state(M.cols))
        for c in _absent_ids(M):
            if not made[c]:
                return SaturationReport(EXTENDABLE, column=column_from_id(c, M.n, M.l))
        return SaturationReport(SATURATED)
    if fam.violates(M):
        return SaturationReport(NOT_ADMISSIBLE)
    for c in _absent_ids(M):
        if not fam.creates(M, c):
            return SaturationReport(EXTENDABLE, column=column_from_id(c, M.n, M.l))
    return SaturationReport(SATURATED)


def _free_on_rows(M: Matrix, rows: Sequence[int], fam: MatrixFamily) -> bool:
    return family_free(submatrix(M, rows), fam)


def is_m_saturated(M: Matrix, fam: ForbiddenFamily) -> SaturationReport:
    """Monotone saturation: each absent C creates a copy on rows R that were free.

    Only row sets of size v(F), F a member, are examined: a witnessing set A
    of any size can be shrunk to the rows of the new copy, and a sub-matrix
    of the admissible M(A,) is admissible.  ``is_m_saturated_literal`` keeps
    the any-A definition for cross-checking.
    """
    _require_simple(M)
    if not isinstance(fam, MatrixFamily):
        raise ValueError("monotone saturation needs a family with explicit members")
    kern = kernel_for(fam, M.n)
    if kern.uniform:
        made = kern.m_creates_all(kern.state(M.cols))
        for c in _absent_ids(M):
            if not made[c]:
                return SaturationReport(EXTENDABLE, column=column_from_id(c, M.n, M.l))
        return SaturationReport(SATURATED)
    sizes = sorted(k for k in fam.row_counts if k <= M.n)
    for c in _absent_ids(M):
        ext = M.with_columns([c])
        if not any(
            _free_on_rows(M, R, fam) and not _free_on_rows(ext, R, fam)
            for k in sizes
            for R in itertools.combinations(range(M.n), k)
        ):
            return SaturationReport(EXTENDABLE, column=column_from_id(c, M.n, M.l))
    return SaturationReport(SATURATED)


def is_m_saturated_literal(M: Matrix, fam: ForbiddenFamily) -> bool:
    """The definition verbatim: quantify over every row subset A."""
    _require_simple(M)
    subsets = [A for r in range(M.n + 1) for A in itertools.combinations(range(M.n), r)]
    for c in _absent_ids(M):
        ext = M.with_columns([c])
        if not any(
            not fam.violates(submatrix(M, A)) and fam.violates(submatrix(ext, A)) for A in subsets
        ):
            return False
    return True


def close(M: Matrix, fam: ForbiddenFamily, order: Iterable[int] | None = None) -> Matrix:
    """Greedily add absent columns (default: id order) while admissibility holds."""
    _require_simple(M)
    if order is None:
        order = range((M.l + 1) ** M.n)
    present = set(M.cols)
    added: list[int] = []
    if isinstance(fam, MatrixFamily):
        kern = kernel_for(fam, M.n)
        code = kern.state(M.cols)
        if kern.forbidden(code):
            raise ValueError("matrix is not admissible")
        for c in order:
            if c in present:
                continue
            if not kern.creates(code, c):
                code = kern.add(code, c)
                present.add(c)
                added.append(c)
        return M.with_columns(added)
    if fam.violates(M):
        raise ValueError("matrix is not admissible")
    cur = M
    for c in order:
        if c in present:
            continue
        if not fam.creates(cur, c):
            cur = cur.with_columns([c])
            present.add(c)
    return cur


def duplicate_pairs(M: Matrix, i: int) -> list[tuple[int, int]]:
    """Index pairs of columns of M that agree everywhere except row i."""
    groups: dict[tuple, list[int]] = {}
    for j, col in enumerate(M.columns):
        groups.setdefault(col[:i] + col[i + 1:], []).append(j)
    return [pair for g in groups.values() for pair in itertools.combinations(g, 2)]


def extend_by_duplication(M: Matrix, fam: ForbiddenFamily, i: int) -> Matrix:
    """Saturated (n+1)-row matrix containing M with row i duplicated.

    Only columns (C', a, b) with a != b in row i and its copy, where both
    (C', a) and (C', b) are columns of M, can be missing from a completion;
    those candidates are scanned in id order.
    """
    _require_simple(M)
    D = duplicate_row(M, i)
    if fam.violates(D):
        raise ValueError("duplicating the row breaks admissibility")
    base = M.l + 1
    present = set(D.cols)
    cands = set()
    for a_idx, b_idx in duplicate_pairs(M, i):
        for x, y in ((a_idx, b_idx), (b_idx, a_idx)):
            col = M.columns[x] + (M.columns[y][i],)
            cid = 0
            for e in col:
                cid = cid * base + e
            if cid not in present:
                cands.add(cid)
    return close(D, fam, sorted(cands))


def find_bondy_row(M: Matrix) -> int | None:
    """A row whose deletion keeps the columns distinct (exists when e(M) <= v(M))."""
    _require_simple(M)
    for i in range(M.n):
        if delete_row(M, i).simple:
            return i
    if M.m <= M.n:
        raise AssertionError("no Bondy row although e(M) <= v(M)")
    return None


def row_balance_check(M: Matrix, k: int) -> bool:
    """Every row has at least 2^(k-1)-1 ones and as many zeros."""
    if M.l != 1:
        raise ValueError("row balance is stated for 0/1 matrices")
    need = 2 ** (k - 1) - 1
    return all(sum(r) >= need and len(r) - sum(r) >= need for r in M.rows)


@njit(cache=True)
def _row_scan(wcols, limit, proj, wp, caps, toff, table, out):
    m = wcols.shape[0]
    N = proj.shape[0]
    code = np.zeros(proj.shape[1], dtype=np.int64)
    present = np.zeros(N, dtype=np.bool_)
    hits = 0
    for r in range(1 << m):
        code[:] = 0
        ok = True
        for j in range(m):
            c = wcols[j] * 2 + ((r >> j) & 1)
            if _creates(code, c, proj, wp, caps, toff, table):
                ok = False
                break
            _add(code, c, proj, wp, caps, code)
        if not ok:
            continue
        present[:] = False
        for j in range(m):
            present[wcols[j] * 2 + ((r >> j) & 1)] = True
        extra = 0
        for c in range(N):
            if present[c] or _creates(code, c, proj, wp, caps, toff, table):
                continue
            _add(code, c, proj, wp, caps, code)
            extra += 1
            if extra > limit:
                break
        if extra <= limit:
            if hits < out.shape[0]:
                out[hits] = r
            hits += 1
    return hits


def row_extension_scan(M: Matrix, fam: MatrixFamily, max_extra: int, keep: int = 64) -> list[Matrix]:
    """Append every possible 0/1 row to M, close in id order, keep those within e(M)+max_extra.

    Bit j of the appended row is column j's entry; results are in that order.
    """
    if M.l != 1:
        raise ValueError("row extension scan is for 0/1 matrices")
    if M.m > 30:
        raise ValueError("too many columns to scan all appended rows")
    kern = kernel_for(fam, M.n + 1)
    out = np.zeros(keep, dtype=np.int64)
    hits = _row_scan(np.array(M.cols, dtype=np.int64), max_extra, *kern.arrays, out)
    res = []
    for r in out[: min(hits, keep)]:
        cols = tuple(c * 2 + ((int(r) >> j) & 1) for j, c in enumerate(M.cols))
        res.append(close(Matrix(M.n + 1, cols), fam))
    return res
