"""Matrices over {0,...,l} stored column-wise as integer column ids.

A column of an n-row matrix over {0,...,l} is identified with the integer
whose base-(l+1) digits are its entries, row 0 being the most significant
digit.  This id order is the global enumeration order used everywhere
(closure, search, saturation checks), which keeps every run reproducible.

Row and column indices in this API are 0-based.
"""
from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from math import comb
from typing import Iterable, Sequence

Column = tuple[int, ...]


class MatrixFormatError(ValueError):
    """Malformed matrix text; carries the 1-based line/column of the fault."""

    def __init__(self, message: str, line: int | None = None, col: int | None = None):
        where = ""
        if line is not None:
            where = f"line {line}"
            if col is not None:
                where += f", column {col}"
            where += ": "
        super().__init__(where + message)
        self.line = line
        self.col = col


def column_id(column: Sequence[int], l: int = 1) -> int:
    base = l + 1
    cid = 0
    for e in column:
        if not 0 <= e <= l:
            raise ValueError(f"entry {e} outside [0,{l}]")
        cid = cid * base + e
    return cid


def column_from_id(cid: int, n: int, l: int = 1) -> Column:
    base = l + 1
    out = [0] * n
    for i in range(n - 1, -1, -1):
        cid, out[i] = divmod(cid, base)
    return tuple(out)


@dataclass(frozen=True)
class Matrix:
    """An n-row matrix over {0,...,l}; ``cols`` holds one column id per column.

    Column order is kept for storage but no predicate in the package
    depends on it.  Repeated columns are allowed (forbidden configurations
    such as ``3*T:2:2`` need them); ``simple`` reports whether there are none.
    """

    n: int
    cols: tuple[int, ...]
    l: int = 1
    _hash: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("negative order")
        if not 1 <= self.l <= 9:
            raise ValueError("alphabet bound l must lie in [1,9]")
        cols = tuple(int(c) for c in self.cols)
        top = (self.l + 1) ** self.n
        for c in cols:
            if not 0 <= c < top:
                raise ValueError(f"column id {c} out of range for n={self.n}, l={self.l}")
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "_hash", hash((self.n, cols, self.l)))

    def __hash__(self):
        return self._hash

    # construction -------------------------------------------------------

    @classmethod
    def from_columns(cls, columns: Iterable[Sequence[int]], n: int | None = None, l: int = 1) -> "Matrix":
        columns = [tuple(c) for c in columns]
        if n is None:
            if not columns:
                raise ValueError("order is ambiguous for a matrix without columns")
            n = len(columns[0])
        for c in columns:
            if len(c) != n:
                raise ValueError("columns of unequal length")
        return cls(n, tuple(column_id(c, l) for c in columns), l)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], l: int = 1, m: int | None = None) -> "Matrix":
        rows = [tuple(r) for r in rows]
        if m is None:
            m = len(rows[0]) if rows else 0
        if any(len(r) != m for r in rows):
            raise ValueError("ragged rows")
        return cls.from_columns(zip(*rows) if rows else [() for _ in range(m)], n=len(rows), l=l)

    @classmethod
    def from_strings(cls, *rows: str, l: int = 1) -> "Matrix":
        """``Matrix.from_strings("0011", "0101")`` is K_2."""
        return cls.from_rows([[int(ch) for ch in r] for r in rows], l=l)

    # views --------------------------------------------------------------

    @property
    def m(self) -> int:
        return len(self.cols)

    @property
    def shape(self) -> tuple[int, int]:
        return self.n, len(self.cols)

    @cached_property
    def simple(self) -> bool:
        return len(set(self.cols)) == len(self.cols)

    @cached_property
    def columns(self) -> tuple[Column, ...]:
        return tuple(column_from_id(c, self.n, self.l) for c in self.cols)

    @cached_property
    def rows(self) -> tuple[tuple[int, ...], ...]:
        if not self.cols:
            return tuple(() for _ in range(self.n))
        return tuple(zip(*self.columns))

    @cached_property
    def symbol_masks(self) -> tuple[tuple[int, ...], ...]:
        """``symbol_masks[r][s]`` is the bitmask of column indices j with M[r][j] == s."""
        out = []
        for row in self.rows:
            masks = [0] * (self.l + 1)
            for j, e in enumerate(row):
                masks[e] |= 1 << j
            out.append(tuple(masks))
        return tuple(out)

    def entry(self, i: int, j: int) -> int:
        return self.columns[j][i]

    def column_set(self) -> frozenset[int]:
        return frozenset(self.cols)

    def __contains__(self, column) -> bool:
        if isinstance(column, int):
            return column in self.cols
        return column_id(column, self.l) in self.cols

    def __str__(self) -> str:
        return "\n".join("".join(map(str, r)) for r in self.rows)

    def transpose(self) -> "Matrix":
        return Matrix.from_rows(self.columns, l=self.l, m=self.n)

    def with_columns(self, extra: Iterable[int]) -> "Matrix":
        return Matrix(self.n, self.cols + tuple(extra), self.l)


# construction primitives -------------------------------------------------

def _check_rows(n: int, rows: Iterable[int]) -> list[int]:
    rows = list(rows)
    for r in rows:
        if not 0 <= r < n:
            raise IndexError(f"row index {r} out of range for order {n}")
    return rows


def submatrix(M: Matrix, A: Sequence[int] | None = None, B: Sequence[int] | None = None) -> Matrix:
    """M(A,B); ``None`` selects everything.  Relative order of A and B is kept."""
    A = range(M.n) if A is None else _check_rows(M.n, A)
    B = range(M.m) if B is None else list(B)
    for j in B:
        if not 0 <= j < M.m:
            raise IndexError(f"column index {j} out of range for size {M.m}")
    cols = [tuple(M.columns[j][i] for i in A) for j in B]
    return Matrix(len(A), tuple(column_id(c, M.l) for c in cols), M.l)


def chi(Y: Iterable[int], n: int) -> Column:
    Y = set(_check_rows(n, Y))
    return tuple(1 if i in Y else 0 for i in range(n))


def build_T(k: int, lo: int, hi: int) -> Matrix:
    """All 0/1 k-columns whose number of ones lies in [lo, hi], in id order."""
    if not 0 <= lo <= hi <= k:
        raise ValueError(f"invalid weight range [{lo},{hi}] for k={k}")
    return Matrix(k, tuple(c for c in range(1 << k) if lo <= c.bit_count() <= hi))


def build_K_l(k: int, l: int) -> Matrix:
    if k < 1 or l < 1:
        raise ValueError("need k >= 1 and l >= 1")
    return Matrix(k, tuple(range((l + 1) ** k)), l)


def f(n: int, k: int) -> int:
    """C(n,0) + C(n,1) + ... + C(n,k)."""
    if k < 0:
        return 0
    return sum(comb(n, i) for i in range(k + 1))


def complement(M: Matrix) -> Matrix:
    if M.l != 1:
        raise ValueError("complement is defined for 0/1 matrices only")
    full = (1 << M.n) - 1
    return Matrix(M.n, tuple(full ^ c for c in M.cols))


def duplicate_row(M: Matrix, i: int) -> Matrix:
    """Append a copy of row i as the new last row."""
    _check_rows(M.n, [i])
    return Matrix.from_columns((c + (c[i],) for c in M.columns), n=M.n + 1, l=M.l)


def delete_row(M: Matrix, i: int) -> Matrix:
    _check_rows(M.n, [i])
    return Matrix.from_columns((c[:i] + c[i + 1:] for c in M.columns), n=M.n - 1, l=M.l)


def concat(*parts: Matrix) -> Matrix:
    if not parts:
        raise ValueError("nothing to concatenate")
    n, l = parts[0].n, parts[0].l
    for P in parts[1:]:
        if P.n != n:
            raise ValueError(f"order mismatch in concat: {n} vs {P.n}")
        if P.l != l:
            raise ValueError("alphabet mismatch in concat")
    return Matrix(n, tuple(itertools.chain.from_iterable(P.cols for P in parts)), l)


def repeat(M: Matrix, times: int) -> Matrix:
    """times*M: every column repeated ``times`` times."""
    return Matrix(M.n, tuple(c for c in M.cols for _ in range(times)), M.l)


def permute_rows(M: Matrix, order: Sequence[int]) -> Matrix:
    """Row p of the result is row ``order[p]`` of M."""
    return submatrix(M, order)


# canonical form -----------------------------------------------------------

def _refine(rows: tuple[tuple[int, ...], ...], cells: list[list[int]]) -> list[list[int]]:
    m = len(rows[0]) if rows else 0
    while True:
        col_keys = [
            tuple(tuple(sorted(rows[r][j] for r in cell)) for cell in cells)
            for j in range(m)
        ]
        new_cells: list[list[int]] = []
        for cell in cells:
            if len(cell) == 1:
                new_cells.append(cell)
                continue
            sigs: dict[tuple, list[int]] = {}
            for r in cell:
                sig = tuple(sorted(Counter((col_keys[j], rows[r][j]) for j in range(m)).items()))
                sigs.setdefault(sig, []).append(r)
            new_cells.extend(sigs[s] for s in sorted(sigs))
        if len(new_cells) == len(cells):
            return new_cells
        cells = new_cells


def canonical_form(M: Matrix) -> Matrix:
    """Canonical representative of M under row and column permutations.

    Rows are split by an equitable refinement (row symbol counts, then
    incidence with the refined column classes); every remaining tie is
    broken by individualising each candidate row in turn.  Among the
    resulting discrete row orders the one giving the lexicographically
    least sorted column-id sequence wins.  The set of leaves explored is
    invariant under isomorphism, so equal output means isomorphic input.
    """
    if M.n == 0 or M.m == 0:
        return Matrix(M.n, tuple(sorted(M.cols)), M.l)
    rows = M.rows
    best: tuple[int, ...] | None = None

    def leaf(order: list[int]) -> tuple[int, ...]:
        base = M.l + 1
        ids = []
        for j in range(M.m):
            cid = 0
            for r in order:
                cid = cid * base + rows[r][j]
            ids.append(cid)
        return tuple(sorted(ids))

    def search(cells: list[list[int]]):
        nonlocal best
        cells = _refine(rows, cells)
        for idx, cell in enumerate(cells):
            if len(cell) > 1:
                break
        else:
            cand = leaf([cell[0] for cell in cells])
            if best is None or cand < best:
                best = cand
            return
        for r in cell:
            rest = [x for x in cell if x != r]
            search(cells[:idx] + [[r], rest] + cells[idx + 1:])

    search([list(range(M.n))])
    return Matrix(M.n, best, M.l)


def isomorphic(M: Matrix, N: Matrix) -> bool:
    if (M.n, M.m, M.l) != (N.n, N.m, N.l):
        return False
    return canonical_form(M) == canonical_form(N)


# text format ------------------------------------------------------------------

def format_matrix(M: Matrix) -> str:
    lines = [f"{M.n} {M.m} {M.l}"]
    lines.extend("".join(map(str, r)) for r in M.rows)
    return "\n".join(lines) + "\n"


def _parse_lines(lines: list[str], first_line: int) -> Matrix:
    header = lines[0].split()
    if len(header) != 3 or not all(t.isdigit() for t in header):
        raise MatrixFormatError("header must be 'n m l' (three non-negative integers)", first_line)
    n, m, l = map(int, header)
    if not 1 <= l <= 9:
        raise MatrixFormatError(f"alphabet bound {l} outside [1,9]", first_line)
    body = lines[1:]
    if len(body) != n:
        raise MatrixFormatError(f"expected {n} rows, found {len(body)}", first_line + len(body))
    rows = []
    for i, text in enumerate(body):
        lineno = first_line + 1 + i
        if len(text) != m:
            raise MatrixFormatError(f"row has {len(text)} entries, expected {m}", lineno)
        row = []
        for j, ch in enumerate(text):
            if not ch.isdigit() or not ch.isascii():
                raise MatrixFormatError(f"illegal character {ch!r}", lineno, j + 1)
            if int(ch) > l:
                raise MatrixFormatError(f"digit {ch} exceeds l={l}", lineno, j + 1)
            row.append(int(ch))
        rows.append(row)
    return Matrix.from_rows(rows, l=l, m=m)


def parse_matrix(text: str) -> Matrix:
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    lines = [ln.rstrip("\r") for ln in lines]
    if not lines:
        raise MatrixFormatError("empty input", 1)
    return _parse_lines(lines, 1)


def parse_matrices(text: str) -> list[Matrix]:
    """Parse blocks of the matrix format separated by single blank lines."""
    out = []
    for start, block in _blocks(text):
        out.append(_parse_lines(block, start))
    return out


def _blocks(text: str) -> list[tuple[int, list[str]]]:
    blocks: list[tuple[int, list[str]]] = []
    cur: list[str] = []
    start = 1
    for i, line in enumerate(text.split("\n"), start=1):
        line = line.rstrip("\r")
        if line.strip() == "":
            if cur:
                blocks.append((start, cur))
                cur = []
            continue
        if not cur:
            start = i
        cur.append(line)
    if cur:
        blocks.append((start, cur))
    return blocks


def format_matrices(ms: Iterable[Matrix]) -> str:
    return "\n".join(format_matrix(M) for M in ms)
