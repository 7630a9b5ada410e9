"""Submatrix containment F ⊆ M up to row and column permutation.

Rows of F are mapped into rows of M by backtracking in lexicographic
order.  Once some rows are mapped, every column of M projects onto exactly
one partial pattern, so the column side is a bipartite matching whose
compatibility classes are disjoint; Hall's condition then reduces to
"each partial pattern of F occurs at most as often in M".  That count test
prunes every partial row map and is exact once the row map is complete.
"""
from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

from .matrix import Column, Matrix, column_id


@dataclass(frozen=True)
class ContainmentWitness:
    row_map: tuple[int, ...]
    col_map: tuple[int, ...]

    def replay(self, M: Matrix, F: Matrix) -> bool:
        """True iff the maps are injective and reproduce F entrywise."""
        if len(set(self.row_map)) != len(self.row_map) or len(set(self.col_map)) != len(self.col_map):
            return False
        if len(self.row_map) != F.n or len(self.col_map) != F.m:
            return False
        for t, j in enumerate(self.col_map):
            for i, r in enumerate(self.row_map):
                if F.columns[t][i] != M.columns[j][r]:
                    return False
        return True


def _symbol_counts(row: Sequence[int], l: int) -> list[int]:
    counts = [0] * (l + 1)
    for e in row:
        counts[e] += 1
    return counts


def contains(M: Matrix, F: Matrix, must_use: int | None = None) -> ContainmentWitness | None:
    """Return the lexicographically least witness of F ⊆ M, or None.

    With ``must_use`` set to a column index of M, only copies whose column
    map hits that column are accepted (used for incremental ``creates``).
    """
    if M.l != F.l:
        raise ValueError(f"alphabet mismatch: host l={M.l}, pattern l={F.l}")
    if F.n > M.n or F.m > M.m:
        return None
    k = F.n
    f_cols = F.columns
    if k == 0:
        # every host column projects to the empty pattern
        if must_use is None:
            return ContainmentWitness((), tuple(range(F.m)))
        if F.m == 0:
            return None
        others = [j for j in range(M.m) if j != must_use][: F.m - 1]
        return ContainmentWitness((), tuple(sorted(others + [must_use])))
    if F.m == 0 and must_use is not None:
        return None

    masks = M.symbol_masks
    f_need = [_symbol_counts(r, F.l) for r in F.rows]
    m_have = [_symbol_counts(r, M.l) for r in M.rows]
    used_col = None if must_use is None else M.columns[must_use]

    # F's partial-pattern multiplicities per depth
    f_classes: list[dict[tuple, int]] = []
    for t in range(k + 1):
        d: dict[tuple, int] = {}
        for c in f_cols:
            key = c[:t]
            d[key] = d.get(key, 0) + 1
        f_classes.append(d)

    all_cols = (1 << M.m) - 1
    row_map: list[int] = []
    taken = [False] * M.n

    def feasible(t: int, host: dict[tuple, int]) -> bool:
        for key, need in f_classes[t].items():
            if host.get(key, 0).bit_count() < need:
                return False
        if used_col is not None:
            key = tuple(used_col[r] for r in row_map)
            if key not in f_classes[t]:
                return False
        return True

    def extend(t: int, host: dict[tuple, int]) -> dict[tuple, int] | None:
        if t == k:
            return host
        need = f_need[t]
        for r in range(M.n):
            if taken[r]:
                continue
            have = m_have[r]
            if any(have[s] < need[s] for s in range(len(need))):
                continue
            nxt: dict[tuple, int] = {}
            for key in f_classes[t + 1]:
                nxt[key] = host[key[:-1]] & masks[r][key[-1]]
            taken[r] = True
            row_map.append(r)
            if feasible(t + 1, nxt):
                res = extend(t + 1, nxt)
                if res is not None:
                    return res
            row_map.pop()
            taken[r] = False
        return None

    host = extend(0, {(): all_cols})
    if host is None:
        return None

    # classes are disjoint, so each class independently takes its least
    # host columns in ascending order; the class of must_use swaps it in
    forced_key = None if used_col is None else tuple(used_col[r] for r in row_map)
    chosen: dict[tuple, list[int]] = {}
    for key, need in f_classes[k].items():
        pool = host[key]
        if key == forced_key:
            pool &= ~(1 << must_use)
            need -= 1
        picks = []
        while len(picks) < need:
            low = pool & -pool
            picks.append(low.bit_length() - 1)
            pool ^= low
        if key == forced_key:
            picks = sorted(picks + [must_use])
        chosen[key] = picks[::-1]
    col_map = [chosen[c].pop() for c in f_cols]
    return ContainmentWitness(tuple(row_map), tuple(col_map))


# families --------------------------------------------------------------------


class ForbiddenFamily(ABC):
    """Admissibility oracle: ``violates(M)`` and the incremental ``creates(M, C)``."""

    l: int = 1

    @abstractmethod
    def violates(self, M: Matrix) -> bool:
        ...

    def creates(self, M: Matrix, column: Column | int) -> bool:
        """Whether [M, C] violates; callers guarantee M itself is admissible."""
        cid = column if isinstance(column, int) else column_id(column, M.l)
        if cid in M.cols:
            raise ValueError("column already present in M")
        return self.violates(M.with_columns([cid]))

    @property
    def row_counts(self) -> frozenset[int] | None:
        """Orders of the members, or None when the family is only a predicate."""
        return None


@dataclass(frozen=True)
class MatrixFamily(ForbiddenFamily):
    """A finite list of forbidden matrices (repeated columns are meaningful)."""

    members: tuple[Matrix, ...]

    def __post_init__(self):
        members = tuple(self.members)
        if not members:
            raise ValueError("empty family")
        ls = {F.l for F in members}
        if len(ls) != 1:
            raise ValueError("family members over different alphabets")
        object.__setattr__(self, "members", members)

    @classmethod
    def of(cls, *members: Matrix) -> "MatrixFamily":
        return cls(tuple(members))

    @property
    def l(self) -> int:  # type: ignore[override]
        return self.members[0].l

    @property
    def row_counts(self) -> frozenset[int]:
        return frozenset(F.n for F in self.members)

    @cached_property
    def key(self) -> str:
        """Stable encoding, invariant under member order and isomorphism."""
        from .matrix import canonical_form, format_matrix

        return "\n".join(sorted(format_matrix(canonical_form(F)) for F in self.members))

    def witness(self, M: Matrix) -> tuple[Matrix, ContainmentWitness] | None:
        for F in self.members:
            w = contains(M, F)
            if w is not None:
                return F, w
        return None

    def violates(self, M: Matrix) -> bool:
        return self.witness(M) is not None

    def creates(self, M: Matrix, column: Column | int) -> bool:
        cid = column if isinstance(column, int) else column_id(column, M.l)
        if cid in M.cols:
            raise ValueError("column already present in M")
        host = M.with_columns([cid])
        return any(contains(host, F, must_use=M.m) is not None for F in self.members)


def family_free(M: Matrix, fam: ForbiddenFamily) -> bool:
    return not fam.violates(M)


def creates(M: Matrix, column: Column | int, fam: ForbiddenFamily) -> bool:
    return fam.creates(M, column)


def as_family(fam: ForbiddenFamily | Matrix | Iterable[Matrix]) -> ForbiddenFamily:
    if isinstance(fam, ForbiddenFamily):
        return fam
    if isinstance(fam, Matrix):
        return MatrixFamily((fam,))
    return MatrixFamily(tuple(fam))
