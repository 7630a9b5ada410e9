"""Projection kernel: fast admissibility bookkeeping for explicit families.

F (with k rows) embeds in M iff for some k-subset R of M's rows the column
multiset of M(R,) dominates the column multiset of some row permutation of
F.  The kernel keeps, for every k-subset R ("slot"), the pattern counts of
M(R,) capped at the largest multiplicity any forbidden vector asks for,
packed into one mixed-radix integer.  A lookup table over packed states
says whether the slot already holds a forbidden configuration, so adding a
column, testing "creates" and full saturation checks are a handful of
integer operations per slot.

This is an exact reformulation of the backtracking containment engine and
is cross-checked against it in the test suite.
"""
from __future__ import annotations

import itertools
from functools import lru_cache

import numpy as np
from numba import njit

from .matrix import Matrix

TABLE_LIMIT = 1 << 24
PTAB_LIMIT = 1 << 25


def all_digits(n: int, l: int) -> np.ndarray:
    """Digit array of every column id: shape ((l+1)^n, n), row 0 most significant."""
    base = l + 1
    N = base ** n
    ids = np.arange(N, dtype=np.int64)
    out = np.zeros((N, n), dtype=np.int64)
    for r in range(n - 1, -1, -1):
        out[:, r] = ids % base
        ids //= base
    return out


def _forbidden_vectors(members, k: int, l: int) -> np.ndarray:
    base = l + 1
    P = base ** k
    vecs = set()
    for F in members:
        if F.n != k:
            continue
        cols = F.columns
        for perm in itertools.permutations(range(k)):
            v = [0] * P
            for c in cols:
                pid = 0
                for i in perm:
                    pid = pid * base + c[i]
                v[pid] += 1
            vecs.add(tuple(v))
    arr = np.array(sorted(vecs), dtype=np.int64).reshape(-1, P)
    # drop vectors dominating another one
    keep = []
    for i, v in enumerate(arr):
        if not any(j != i and np.all(arr[j] <= v) and np.any(arr[j] < v) for j in range(len(arr))):
            keep.append(i)
    return arr[keep]


class Kernel:
    """Packed slot states for one explicit family at order n.

    Attributes are plain numpy arrays so the numba search loop can take them
    directly: ``proj[c, s]`` pattern of column c on slot s; ``wp[s, p]`` and
    ``caps[s, p]`` radix weight and cap of pattern p in slot s; ``toff[s]``
    offset of the slot's group table inside ``table``.
    """

    def __init__(self, members, n: int, l: int):
        self.n = n
        self.l = l
        self.N = (l + 1) ** n
        self.uniform = len({F.n for F in members if F.n <= n}) <= 1
        digits = all_digits(n, l)
        base = l + 1
        proj_blocks, wp_rows, cap_rows, toff, tables, ptabs = [], [], [], [], [], []
        self.precise = True
        self.slots: list[tuple[int, ...]] = []
        offset = 0
        pmax = max([base ** F.n for F in members if F.n <= n] + [1])
        for k in sorted({F.n for F in members}):
            if k > n:
                continue
            vecs = _forbidden_vectors(members, k, l)
            P = base ** k
            caps = vecs.max(axis=0)
            weights = np.ones(P, dtype=np.int64)
            size = 1
            for p in range(P):
                if caps[p] > 0:
                    weights[p] = size
                    size *= int(caps[p]) + 1
                    if size > TABLE_LIMIT:
                        raise ValueError(
                            f"slot state space exceeds {TABLE_LIMIT}; family too large for the kernel"
                        )
            codes = np.arange(size, dtype=np.int64)
            live = np.nonzero(caps > 0)[0]
            dig = np.zeros((size, P), dtype=np.int64)
            for p in live:
                dig[:, p] = (codes // weights[p]) % (caps[p] + 1)
            table = np.zeros(size, dtype=np.uint8)
            for v in vecs:
                table |= np.all(dig >= v, axis=1).astype(np.uint8)
            tables.append(table)
            # use[v, p]: some forbidden vector u with u[p] >= 1 fits under v + e_p
            if size * pmax <= PTAB_LIMIT:
                use = np.zeros((size, pmax), dtype=np.uint8)
                for v in vecs:
                    for q in np.nonzero(v)[0]:
                        u = v.copy()
                        u[q] -= 1
                        use[:, q] |= np.all(dig >= u, axis=1).astype(np.uint8)
                ptabs.append(use.ravel())
            else:
                self.precise = False
            wrow = np.ones(pmax, dtype=np.int64)
            wrow[:P] = weights
            crow = np.zeros(pmax, dtype=np.int64)
            crow[:P] = caps
            for R in itertools.combinations(range(n), k):
                pat = np.zeros(self.N, dtype=np.int64)
                for r in R:
                    pat = pat * base + digits[:, r]
                proj_blocks.append(pat)
                wp_rows.append(wrow)
                cap_rows.append(crow)
                toff.append(offset)
                self.slots.append(R)
            offset += size
        S = len(self.slots)
        self.S = S
        if S:
            self.proj = np.ascontiguousarray(np.stack(proj_blocks, axis=1))
            self.wp = np.stack(wp_rows)
            self.caps = np.stack(cap_rows)
        else:
            self.proj = np.zeros((self.N, 0), dtype=np.int64)
            self.wp = np.zeros((0, pmax), dtype=np.int64)
            self.caps = np.zeros((0, pmax), dtype=np.int64)
        self.toff = np.array(toff, dtype=np.int64)
        self.table = np.concatenate(tables) if tables else np.zeros(1, dtype=np.uint8)
        self.pmax = pmax
        if self.precise and ptabs:
            self.ptab = np.concatenate(ptabs)
        else:
            self.precise = False
            self.ptab = np.zeros(1, dtype=np.uint8)
        self.digits = digits

    @property
    def arrays(self):
        return self.proj, self.wp, self.caps, self.toff, self.table

    def state(self, ids) -> np.ndarray:
        code = np.zeros(self.S, dtype=np.int64)
        for c in ids:
            _add(code, int(c), self.proj, self.wp, self.caps, code)
        return code

    def add(self, code: np.ndarray, c: int) -> np.ndarray:
        out = np.empty_like(code)
        _add(code, int(c), self.proj, self.wp, self.caps, out)
        return out

    def forbidden(self, code: np.ndarray) -> bool:
        return bool(_forbidden(code, self.toff, self.table))

    def creates(self, code: np.ndarray, c: int) -> bool:
        return bool(_creates(code, int(c), *self.arrays))

    def creates_all(self, code: np.ndarray) -> np.ndarray:
        return _creates_all(code, *self.arrays)

    def m_creates_all(self, code: np.ndarray) -> np.ndarray:
        """Per column: does adding it turn some admissible slot forbidden?"""
        return _m_creates_all(code, *self.arrays)


@lru_cache(maxsize=64)
def _kernel_cached(members: tuple[Matrix, ...], n: int, l: int) -> Kernel:
    return Kernel(members, n, l)


def kernel_for(family, n: int) -> Kernel:
    return _kernel_cached(tuple(family.members), n, family.l)


# numba primitives ------------------------------------------------------------


@njit(cache=True)
def _add(code, c, proj, wp, caps, out):
    for s in range(code.shape[0]):
        p = proj[c, s]
        cap = caps[s, p]
        v = code[s]
        if cap > 0:
            w = wp[s, p]
            if (v // w) % (cap + 1) < cap:
                v += w
        out[s] = v


@njit(cache=True)
def _forbidden(code, toff, table):
    for s in range(code.shape[0]):
        if table[toff[s] + code[s]]:
            return True
    return False


@njit(cache=True)
def _creates(code, c, proj, wp, caps, toff, table):
    for s in range(code.shape[0]):
        p = proj[c, s]
        cap = caps[s, p]
        if cap == 0:
            continue
        w = wp[s, p]
        v = code[s]
        if (v // w) % (cap + 1) < cap:
            if table[toff[s] + v + w]:
                return True
    return False


@njit(cache=True)
def _may_create(code, c, proj, wp, caps, toff, table):
    """Necessary condition for c to create a copy over some sub-multiset of code.

    Unlike ``_creates`` this stays sound when ``code`` itself is forbidden
    (used with upper-bound states during search).
    """
    for s in range(code.shape[0]):
        p = proj[c, s]
        cap = caps[s, p]
        if cap == 0:
            continue
        w = wp[s, p]
        v = code[s]
        if (v // w) % (cap + 1) < cap:
            v += w
        if table[toff[s] + v]:
            return True
    return False


@njit(cache=True)
def _may_use(code, c, proj, toff, ptab, pmax):
    """Exact version of ``_may_create`` via the per-pattern table."""
    for s in range(code.shape[0]):
        if ptab[(toff[s] + code[s]) * pmax + proj[c, s]]:
            return True
    return False


@njit(cache=True)
def _creates_all(code, proj, wp, caps, toff, table):
    N = proj.shape[0]
    out = np.zeros(N, dtype=np.bool_)
    for c in range(N):
        out[c] = _creates(code, c, proj, wp, caps, toff, table)
    return out


@njit(cache=True)
def _m_creates(code, c, proj, wp, caps, toff, table):
    for s in range(code.shape[0]):
        v = code[s]
        if table[toff[s] + v]:
            continue
        p = proj[c, s]
        cap = caps[s, p]
        if cap == 0:
            continue
        w = wp[s, p]
        if (v // w) % (cap + 1) < cap:
            if table[toff[s] + v + w]:
                return True
    return False


@njit(cache=True)
def _m_creates_all(code, proj, wp, caps, toff, table):
    N = proj.shape[0]
    out = np.zeros(N, dtype=np.bool_)
    for c in range(N):
        out[c] = _m_creates(code, c, proj, wp, caps, toff, table)
    return out
