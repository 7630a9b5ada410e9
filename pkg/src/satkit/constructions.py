"""Named matrices and constructive upper bounds.

Printed matrices are stored as text assets under ``data/`` and loaded
verbatim; everything else is generated.  Row sets in docstrings are
1-based ([n] = {1..n}) to match the usual notation; the code converts.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from math import comb
from pathlib import Path

from .containment import ForbiddenFamily, MatrixFamily, family_free
from .matrix import (
    Matrix,
    build_T,
    chi,
    column_id,
    concat,
    parse_matrix,
    repeat,
)
from .saturation import close, is_saturated

DATA_ENV = "SATKIT_DATA"
_data_override: Path | None = None

FANO_LINES = ((1, 2, 4), (2, 3, 5), (3, 4, 6), (4, 5, 7), (5, 6, 1), (6, 7, 2), (7, 1, 3))


class UnsupportedError(ValueError):
    """Raised for an (id, parameters) combination outside a generator's support."""


def set_data_dir(path: str | Path | None) -> None:
    """Load gallery assets from ``path`` instead of the packaged copies."""
    global _data_override
    _data_override = None if path is None else Path(path)
    load_asset.cache_clear()


@lru_cache(maxsize=None)
def load_asset(name: str) -> Matrix:
    if _data_override is not None:
        return parse_matrix((_data_override / name).read_text())
    return parse_matrix(resources.files("satkit").joinpath("data", name).read_text())


def _cols(n: int, sets) -> list[int]:
    """Column ids of chi(Y) for 1-based sets Y."""
    return [column_id(chi([y - 1 for y in Y], n)) for Y in sets]


def _m(n: int, sets) -> Matrix:
    return Matrix(n, tuple(_cols(n, sets)))


def append_rows(M: Matrix, row, times: int) -> Matrix:
    rows = list(M.rows) + [tuple(row)] * times
    return Matrix.from_rows(rows, l=M.l, m=M.m)


def one_row_family(m: int, l: int) -> MatrixFamily:
    """F = ((0)^m, (1)^l), a single row."""
    return MatrixFamily.of(Matrix(1, tuple([0] * m + [1] * l)))


def lt22_family(l: int) -> MatrixFamily:
    return MatrixFamily.of(repeat(build_T(2, 2, 2), l))


def remark_family(l: int) -> MatrixFamily:
    """F = [l T_2^2, (0,1)^T]."""
    return MatrixFamily.of(concat(repeat(build_T(2, 2, 2), l), Matrix.from_strings("0", "1")))


def _fam(*cols_by_rows: str) -> MatrixFamily:
    return MatrixFamily.of(Matrix.from_strings(*cols_by_rows))


FAMILIES = {
    "K2": lambda: MatrixFamily.of(build_T(2, 0, 2)),
    "K3": lambda: MatrixFamily.of(build_T(3, 0, 3)),
    "K4": lambda: MatrixFamily.of(build_T(4, 0, 4)),
    "T21": lambda: MatrixFamily.of(build_T(2, 1, 1)),
    "T20T22": lambda: MatrixFamily.of(concat(build_T(2, 0, 0), build_T(2, 2, 2))),
    "T2GE1": lambda: MatrixFamily.of(build_T(2, 1, 2)),
    "COL01_T22": lambda: _fam("01", "11"),
    "T30T33": lambda: MatrixFamily.of(concat(build_T(3, 0, 0), build_T(3, 3, 3))),
    "T30T32T33": lambda: MatrixFamily.of(concat(build_T(3, 0, 0), build_T(3, 2, 3))),
    "T3LE2": lambda: MatrixFamily.of(build_T(3, 0, 2)),
    "T32": lambda: MatrixFamily.of(build_T(3, 2, 2)),
    "T32T33": lambda: MatrixFamily.of(build_T(3, 2, 3)),
}


def family(name: str) -> MatrixFamily:
    return FAMILIES[name]()


# gallery -------------------------------------------------------------------------


@dataclass(frozen=True)
class GalleryEntry:
    id: str
    params: dict
    matrix: Matrix
    families: tuple[ForbiddenFamily, ...]
    claim: str = "saturated"
    expected_size: int | None = None
    notes: str = ""

    def verify(self) -> bool:
        M = self.matrix
        if not M.simple:
            return False
        if self.expected_size is not None and M.m != self.expected_size:
            return False
        for fam in self.families:
            if self.claim == "saturated":
                if not is_saturated(M, fam).saturated:
                    return False
            elif self.claim == "free":
                if not family_free(M, fam):
                    return False
        return True


def _need(cond: bool, msg: str):
    if not cond:
        raise UnsupportedError(msg)


def k2_sat(n: int) -> GalleryEntry:
    _need(n >= 1, "K2_SAT needs n >= 1")
    return GalleryEntry("K2_SAT", {"n": n}, build_T(n, 0, 1), (family("K2"),), expected_size=n + 1)


def k3_sat(n: int) -> GalleryEntry:
    _need(n >= 4, "K3_SAT needs n >= 4")
    six = load_asset("K3_SAT_6x10.mat")
    if n == 4:
        M = load_asset("K3_SAT_4x10.mat")
    elif n == 5:
        M = Matrix.from_rows(six.rows[:5])
    elif n == 6:
        M = six
    else:
        M = append_rows(six, six.rows[5], n - 6)
    return GalleryEntry("K3_SAT", {"n": n}, M, (family("K3"),), expected_size=10)


def one_row(n: int, m: int, l: int) -> GalleryEntry:
    """Saturated matrix for F = ((0)^m, (1)^l), l >= m, n >= l-1.

    For m = 1 only l = 2^t is supported: all-ones on the first n-t rows and
    every pattern on the last t rows (l columns).  For other l with m = 1
    exact search gives l+1 rather than l.
    """
    _need(l >= m >= 0 and l >= 1, "ONE_ROW needs l >= m >= 0 and l >= 1")
    _need(n >= max(1, l - 1), "ONE_ROW needs n >= l-1 and n >= 1")
    fam = one_row_family(m, l)
    if l == 1:
        return GalleryEntry("ONE_ROW", {"n": n, "m": m, "l": l}, Matrix(n, (0,)), (fam,), expected_size=1)
    full = list(range(1, n + 1))
    if m == 0:
        if l == 2:
            M = _m(n, [[], full])
            size = 2
        else:
            sets = [[], full] + [[y for y in full if y != i] for i in range(1, l - 1)]
            sets.append(list(range(1, l - 1)))
            M = _m(n, sets)
            size = l + 1
    elif m == 1:
        t = l.bit_length() - 1
        _need(1 << t == l and t <= n, "ONE_ROW with m=1 is only constructed for l a power of two")
        ones = (1 << (n - t)) - 1
        M = Matrix(n, tuple((ones << t) | low for low in range(l)))
        size = l
    else:
        # at n = l-1 the interval column coincides with the all-ones column
        _need(n >= l, "ONE_ROW with m > 1 is constructed for n >= l")
        sets = [full] + [[i] for i in range(1, m - 1)]
        sets += [[y for y in full if y != i] for i in range(1, l)]
        sets.append(list(range(m - 1, l)))
        M = _m(n, sets)
        size = l + m - 1
    return GalleryEntry("ONE_ROW", {"n": n, "m": m, "l": l}, M, (fam,), expected_size=size)


def fano_rows(n: int = 7) -> list[list[int]]:
    """Rows = characteristic vectors of [7] minus each Fano line."""
    return [[y for y in range(1, 8) if y not in Y] for Y in FANO_LINES]


def lt22_sat(n: int, l: int, variant: str | None = None) -> GalleryEntry:
    """l T_2^2-saturated matrices; l=3 uses a design for n in {4, 7} unless variant='generic'."""
    _need(l in (1, 2, 3), "LT22_SAT is constructed for l in {1,2,3}")
    fam = lt22_family(l)
    low = build_T(n, 0, 1)
    if l == 1:
        return GalleryEntry("LT22_SAT", {"n": n, "l": l}, low, (fam,), expected_size=n + 1)
    if l == 2:
        _need(n >= 2, "LT22_SAT with l=2 needs n >= 2")
        return GalleryEntry("LT22_SAT", {"n": n, "l": l}, concat(low, build_T(n, n, n)), (fam,),
                            expected_size=n + 2)
    if variant is None:
        variant = "design" if n in (4, 7) else "generic"
    if variant == "design":
        _need(n in (4, 7), "design variant exists here only for n = 4 and 7")
        if n == 4:
            blocks = [list(Y) for Y in itertools.combinations(range(1, 5), 3)]
        else:
            blocks = fano_rows()
        # rows of the design matrix are the blocks: column j has a one in
        # row i iff j belongs to block i
        cols = [[i + 1 for i, B in enumerate(blocks) if j in B] for j in range(1, n + 1)]
        M = concat(low, _m(n, cols))
        return GalleryEntry("LT22_SAT", {"n": n, "l": l, "variant": variant}, M, (fam,),
                            expected_size=2 * n + 1)
    _need(n >= 3, "generic l=3 construction needs n >= 3")
    sets = [list(range(1, n)), list(range(1, n + 1))] + [[i, n] for i in range(1, n)]
    M = concat(low, _m(n, sets))
    return GalleryEntry("LT22_SAT", {"n": n, "l": l, "variant": "generic"}, M, (fam,),
                        expected_size=2 * n + 2)


def lt22_remark(n: int, l: int) -> GalleryEntry:
    _need(l >= 1 and n > l, "LT22_REMARK needs n > l >= 1")
    fam = remark_family(l)
    seed = _m(n, [[y for y in range(1, n + 1) if y != i] for i in range(1, l + 1)])
    M = close(seed, fam)
    return GalleryEntry("LT22_REMARK", {"n": n, "l": l}, M, (fam,), notes=f"size <= {2 * 2 ** l}")


def chain(n: int) -> GalleryEntry:
    _need(n >= 1, "CHAIN needs n >= 1")
    M = _m(n, [list(range(1, i + 1)) for i in range(n + 1)])
    return GalleryEntry("CHAIN", {"n": n}, M, (family("T21"),), expected_size=n + 1)


def sat3(n: int) -> GalleryEntry:
    _need(n >= 2, "SAT3 needs n >= 2")
    tail = list(range(3, n + 1))
    M = _m(n, [[2] + tail, [1] + tail, tail])
    return GalleryEntry("SAT3", {"n": n}, M, (family("T20T22"),), expected_size=3)


def t30t33(n: int) -> GalleryEntry:
    _need(n >= 4, "T30T33 needs n >= 4")
    if n in (4, 5):
        M = load_asset(f"T30T33_M{n}.mat")
    else:
        M6 = load_asset("T30T33_M6.mat")
        M = append_rows(M6, [0] * M6.m, n - 6)
    return GalleryEntry("T30T33", {"n": n}, M, (family("T30T33"),), expected_size=10 if n < 6 else 7)


def t30t32t33(n: int) -> GalleryEntry:
    _need(n >= 4, "T30T32T33 needs n >= 4")
    if n in (4, 5):
        M = load_asset(f"T30T32T33_M{n}.mat")
    else:
        M6 = load_asset("T30T32T33_M6.mat")
        M = append_rows(M6, M6.rows[5], n - 6)
    return GalleryEntry("T30T32T33", {"n": n}, M, (family("T30T32T33"),), expected_size=9 if n < 6 else 7)


T3LE2_EXTRA_ROW = (1, 1, 0, 0, 0, 0, 1, 0, 1, 1)


def t3le2(n: int) -> GalleryEntry:
    _need(n >= 4, "T3LE2 needs n >= 4")
    if n == 4:
        M = load_asset("T3LE2_M4.mat")
    else:
        M = append_rows(load_asset("T3LE2_M5.mat"), T3LE2_EXTRA_ROW, n - 5)
    return GalleryEntry("T3LE2", {"n": n}, M, (family("T3LE2"),), expected_size=10)


def t32_tilde(n: int) -> list[int]:
    """Columns of T_n^2 with exactly one 1 in rows 1 and n, in the printed order."""
    sets = [[1, j] for j in range(2, n)] + [[j, n] for j in range(2, n)]
    return _cols(n, sets)


def t32_sat(n: int) -> GalleryEntry:
    _need(n >= 3, "T32_SAT needs n >= 3")
    base = [[]] + [[i] for i in range(1, n + 1)] + [list(range(1, n + 1))]
    M = Matrix(n, tuple(_cols(n, base) + t32_tilde(n)))
    return GalleryEntry("T32_SAT", {"n": n}, M, (family("T32"), family("T32T33")), expected_size=3 * n - 2)


GALLERY = {
    "K2_SAT": k2_sat,
    "K3_SAT": k3_sat,
    "ONE_ROW": one_row,
    "LT22_SAT": lt22_sat,
    "LT22_REMARK": lt22_remark,
    "CHAIN": chain,
    "SAT3": sat3,
    "T30T33": t30t33,
    "T30T32T33": t30t32t33,
    "T3LE2": t3le2,
    "T32_SAT": t32_sat,
}


def gallery(id: str, n: int, **params) -> GalleryEntry:
    try:
        gen = GALLERY[id]
    except KeyError:
        raise UnsupportedError(f"unknown gallery id {id!r}") from None
    return gen(n, **params)


def gallery_cases(max_n: int = 12):
    """Every supported (id, n, params) with n <= max_n."""
    for n in range(1, max_n + 1):
        yield "K2_SAT", n, {}
        if n >= 4:
            for gid in ("K3_SAT", "T30T33", "T30T32T33", "T3LE2"):
                yield gid, n, {}
        for l in range(1, 6):
            for m in range(0, l + 1):
                if n < max(1, l - 1):
                    continue
                if m == 1 and l > 1 and (l & (l - 1) or (l.bit_length() - 1) > n):
                    continue
                if m > 1 and n < l:
                    continue
                yield "ONE_ROW", n, {"m": m, "l": l}
        for l in (1, 2, 3):
            if l == 2 and n < 2 or l == 3 and n < 3:
                continue
            yield "LT22_SAT", n, {"l": l}
            if l == 3 and n in (4, 7):
                yield "LT22_SAT", n, {"l": l, "variant": "generic"}
        for l in (1, 2, 3):
            if n > l:
                yield "LT22_REMARK", n, {"l": l}
        yield "CHAIN", n, {}
        if n >= 2:
            yield "SAT3", n, {}
        if n >= 3:
            yield "T32_SAT", n, {}


# saturated matrices of linear growth -------------------------------------------


def _layered(k: int, parts) -> Matrix:
    """Concatenate ``mult * T_k^w`` for (w, mult) in parts."""
    cols = []
    for w, mult in parts:
        for c in build_T(k, w, w).cols:
            cols.extend([c] * mult)
    return Matrix(k, tuple(cols))


def _member_bound(fam: ForbiddenFamily) -> int:
    if isinstance(fam, MatrixFamily):
        return 1 + max(F.m for F in fam.members)
    if isinstance(fam, StarFamily):
        return _member_bound(fam.base)
    raise ValueError("cannot bound member sizes of this family")


def complete_free(fam: ForbiddenFamily, k: int) -> bool:
    return not fam.violates(build_T(k, 0, k))


def family_params(fam: ForbiddenFamily, k: int, extra: int = 0) -> tuple[int, int, int]:
    """(l, d, m) used by the linear-growth construction.

    "For some / all m" is decided over m <= M* = 1 + largest member size
    (+ ``extra`` for sanity checks): multiplicities beyond the size of a
    member cannot open new embeddings of that member.
    """
    if not complete_free(fam, k):
        raise ValueError("K_k is not admissible; the forb(n, K_k) bound applies instead")
    top = _member_bound(fam) + extra
    lo = None
    for l in range(0, k + 1):
        parts = lambda m: [(w, m) for w in range(l + 1)] + [(w, 1) for w in range(l + 1, k + 1)]
        if any(fam.violates(_layered(k, parts(m))) for m in range(1, top + 1)):
            lo = l
            break
    if lo is None:
        raise AssertionError("K_k itself must be reached at l = k")
    l = lo

    def layer(m, dd):
        return _layered(k, [(w, m) for w in range(l)] + [(l, dd)] + [(w, 1) for w in range(l + 1, k + 1)])

    d = 0
    for dd in range(1, top + 1):
        if all(not fam.violates(layer(m, dd)) for m in range(1, top + 1)):
            d = dd
        else:
            break
    m_min = next((m for m in range(1, top + 1) if fam.violates(layer(m, d + 1))), None)
    if m_min is None:
        raise AssertionError("no m makes the (d+1)-layer inadmissible")
    return l, d, m_min


def hypergraph_H(n: int, l: int, d: int) -> list[tuple[int, ...]]:
    """Union over j in [d-1] of (l+1)-subsets of [n] (1-based) with sum = j mod n."""
    js = {j % n for j in range(1, d)}
    return [Y for Y in itertools.combinations(range(1, n + 1), l + 1) if sum(Y) % n in js]


def hsf_seed(n: int, fam: ForbiddenFamily, k: int) -> Matrix:
    """M' = [N, T_n^l] with N the columns of H; fam-free by construction."""
    l, d, _ = family_params(fam, k)
    if l >= k:
        raise ValueError("hsf_seed covers l < k; use hsf_saturated for l = k")
    if n < k:
        raise ValueError("need n >= k")
    N = _m(n, hypergraph_H(n, l, d))
    M = concat(N, build_T(n, l, l))
    if fam.violates(M):
        raise AssertionError("seed matrix is not admissible")
    return M


def bad_k_set_count(n: int, k: int, l: int, d: int) -> int:
    """Number of k-sets X containing an l-set A with at most d-2 H-edges above A avoiding X-A."""
    if not 0 <= l < k <= n:
        raise ValueError("need 0 <= l < k <= n")
    H = [frozenset(Y) for Y in hypergraph_H(n, l, d)]
    bad = 0
    for X in itertools.combinations(range(1, n + 1), k):
        Xs = frozenset(X)
        for A in itertools.combinations(X, l):
            As = frozenset(A)
            rest = Xs - As
            cnt = sum(1 for Y in H if As <= Y and not (Y & rest))
            if cnt <= d - 2:
                bad += 1
                break
    return bad


def bad_set_bound(n: int, k: int, l: int, d: int) -> int:
    def C(a, b):
        return comb(a, b) if b >= 0 else 0

    return 2 * (d - 1) * C(n, l - 1) * C(n, k - l) + C(n, l) * (d - 1) * C(n, k - l - 1)


def star_pad(M: Matrix, d: int) -> Matrix:
    """M*: append d zero rows."""
    return Matrix(M.n + d, tuple(c << d for c in M.cols)) if M.l == 1 else \
        Matrix.from_columns((c + (0,) * d for c in M.columns), n=M.n + d, l=M.l)


def N_matrix(s: int, d: int) -> Matrix:
    """(s+d) x d matrix with columns chi([s+d] - {i}), i in [s+1, s+d]."""
    full = range(1, s + d + 1)
    return _m(s + d, [[y for y in full if y != i] for i in range(s + 1, s + d + 1)])


@dataclass(frozen=True)
class StarFamily(ForbiddenFamily):
    """F*: M violates iff [M*, N_{v(M)}] is not F-free."""

    base: ForbiddenFamily
    d: int

    @property
    def l(self) -> int:  # type: ignore[override]
        return 1

    def lift(self, M: Matrix) -> Matrix:
        return concat(star_pad(M, self.d), N_matrix(M.n, self.d))

    def violates(self, M: Matrix) -> bool:
        return self.base.violates(self.lift(M))


def star_family(fam: ForbiddenFamily, k: int) -> StarFamily:
    l, d, _ = family_params(fam, k)
    if l != k:
        raise ValueError("the starred family is used only when l(F) = k")
    return StarFamily(fam, d)


def unstar(L: Matrix, d: int) -> Matrix:
    """M' = [L*, N_{v(L)}]."""
    return concat(star_pad(L, d), N_matrix(L.n, d))


def hsf_saturated(n: int, fam: ForbiddenFamily, k: int) -> Matrix:
    """A fam-saturated n-row matrix of linear size, built from a star-family seed."""
    empty = Matrix(n, ())
    if not complete_free(fam, k):
        return close(empty, fam)
    l, d, _ = family_params(fam, k)
    if l < k:
        if n < k:
            return close(empty, fam)
        return close(hsf_seed(n, fam, k), fam)
    if n - d < 1:
        return close(empty, fam)
    star = StarFamily(fam, d)
    L = hsf_saturated(n - d, star, k)
    return close(unstar(L, d), fam)


# computed upper bounds -------------------------------------------------------------


def row_extension_bound(M: Matrix, fam: MatrixFamily, max_extra: int) -> list[Matrix]:
    """Close [M; r] over every appended 0/1 row r; keep results within e(M)+max_extra."""
    from .saturation import row_extension_scan

    return row_extension_scan(M, fam, max_extra)
