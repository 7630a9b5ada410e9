"""Exact sat / m-sat / forb by orderly depth-first search.

Column sets are grown in increasing ColumnId order.  A set is explored only
if its sorted id sequence is lexicographically least among all its row
permutation images; that property passes to prefixes, so each isomorphism
class of column sets is visited exactly once.  The check is incremental:
for every row permutation p we keep theta[p], the entry of the current
set at the first position where the sorted image under p differs
(-1 when p fixes the set), and a new column c is rejected when p maps it
below theta[p].

SAT runs one pass per target size m (ascending); the first accepting leaf
in DFS order is the witness.  FORB is a depth-first branch-and-bound.  The
hot loop lives in numba and returns to Python every ``CHUNK`` nodes so
wall-clock budgets and checkpoints can be serviced.
"""
from __future__ import annotations

import hashlib
import itertools
import logging
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np
from numba import njit

from .containment import MatrixFamily
from .kernel import _add, _creates, _m_creates, _may_create, _may_use, kernel_for
from .matrix import Matrix, format_matrix, parse_matrices
from .saturation import close

log = logging.getLogger(__name__)

SAT, MSAT, FORB = "SAT", "MSAT", "FORB"
_MODE = {SAT: 0, MSAT: 1, FORB: 2}

EXACT = "EXACT"
LOWER = "LOWER-BOUND"
UPPER = "UPPER-BOUND"

# return codes of the numba loop
DONE, FOUND, BUDGET, FRAME, CAPPED = 0, 1, 2, 3, 4

CHUNK = 1 << 20
CKPT_MAGIC = "SATKIT-CKPT 1"


class CheckpointError(ValueError):
    pass


# problem / result -------------------------------------------------------------


@dataclass
class SearchProblem:
    kind: str
    n: int
    family: MatrixFamily
    size_low: int | None = None
    size_high: int | None = None
    node_limit: int | None = None
    time_limit: float | None = None
    symmetry: bool = True
    formula_cap: bool = True

    def __post_init__(self):
        self.kind = self.kind.upper()
        if self.kind not in _MODE:
            raise ValueError(f"unknown search kind {self.kind!r}")
        if not isinstance(self.family, MatrixFamily):
            raise ValueError("search needs a family of explicit matrices")
        if self.n < 0:
            raise ValueError("negative order")
        top = (self.family.l + 1) ** self.n
        if self.size_high is not None and self.size_high > top:
            raise ValueError(f"size bound {self.size_high} exceeds {top}")
        if self.size_low is not None and self.size_high is not None and self.size_low > self.size_high:
            raise ValueError("size_low > size_high")

    @property
    def l(self) -> int:
        return self.family.l

    @property
    def fingerprint(self) -> str:
        return fingerprint(self.kind, self.n, self.family)


def fingerprint(kind: str, n: int, family: MatrixFamily) -> str:
    blob = f"{kind.upper()}\n{n}\n{family.key}".encode()
    return hashlib.sha256(blob).hexdigest()[:16]


@dataclass
class ResultRecord:
    fingerprint: str
    kind: str
    n: int
    status: str
    low: int
    high: int
    witness: Matrix | None = None
    nodes: int = 0
    seconds: float = 0.0
    witness_path: str = "-"

    @property
    def value(self) -> int | None:
        return self.low if self.status == EXACT else None

    @property
    def value_field(self) -> str:
        if self.status == EXACT:
            return f"{EXACT}:{self.low}"
        return f"{self.status}:{self.low}:{self.high}"

    def fields(self) -> list[str]:
        return [
            self.fingerprint, self.kind, str(self.n), self.value_field,
            self.witness_path, str(self.nodes), f"{self.seconds:.3f}",
        ]

    def to_line(self) -> str:
        return "\t".join(self.fields())

    def answer(self) -> tuple:
        """Everything except run statistics; equal across --jobs values."""
        wit = None if self.witness is None else format_matrix(self.witness)
        return (self.fingerprint, self.kind, self.n, self.value_field, wit)


# numba core ----------------------------------------------------------------------


@njit(cache=True)
def _canon_full(S, d, PT, th):
    img = np.empty(d, dtype=np.int64)
    for p in range(PT.shape[0]):
        for i in range(d):
            img[i] = PT[p, S[i]]
        img.sort()
        t = -1
        for i in range(d):
            if img[i] != S[i]:
                t = i
                break
        if t < 0:
            th[p] = -1
        elif img[t] < S[t]:
            return False
        else:
            th[p] = S[t]
    return True


@njit(cache=True)
def _canon_child(th, S, d, c, PT, out, buf):
    # S[:d] is canonical with state th and S[d] == c; decide S[:d+1]
    for p in range(PT.shape[0]):
        pc = PT[p, c]
        t = th[p]
        if t < 0:
            if pc < c:
                return False
            out[p] = -1 if pc == c else c
        elif pc > t:
            out[p] = t
        elif pc < t:
            return False
        else:
            for i in range(d):
                buf[i] = PT[p, S[i]]
            buf[d] = pc
            img = np.sort(buf[: d + 1])
            pos = -1
            for i in range(d + 1):
                if img[i] != S[i]:
                    pos = i
                    break
            if pos < 0:
                out[p] = -1
            elif img[pos] < S[pos]:
                return False
            else:
                out[p] = S[pos]
    return True


@njit(cache=True)
def _count_addable(code, lo, proj, wp, caps, toff, table):
    cnt = 0
    for y in range(lo, proj.shape[0]):
        if not _creates(code, y, proj, wp, caps, toff, table):
            cnt += 1
    return cnt


@njit(cache=True)
def _saturated(code, S, d, mark, proj, wp, caps, toff, table, monotone):
    for i in range(d):
        mark[S[i]] = True
    ok = True
    for x in range(proj.shape[0]):
        if mark[x]:
            continue
        if monotone:
            hit = _m_creates(code, x, proj, wp, caps, toff, table)
        else:
            hit = _creates(code, x, proj, wp, caps, toff, table)
        if not hit:
            ok = False
            break
    for i in range(d):
        mark[S[i]] = False
    return ok


@njit(cache=True)
def _reachable(code, S, d, c, m, ub, mark, proj, wp, caps, toff, table, ptab, pmax):
    # every final superset lies inside S + (addable columns above c); columns
    # skipped below c are never added later, so that superset must create them
    N = proj.shape[0]
    for s in range(code.shape[0]):
        ub[s] = code[s]
    cnt = 0
    for y in range(c + 1, N):
        if not _creates(code, y, proj, wp, caps, toff, table):
            _add(ub, y, proj, wp, caps, ub)
            cnt += 1
    if d + cnt < m:
        return False
    for i in range(d):
        mark[S[i]] = True
    ok = True
    for x in range(c):
        if mark[x]:
            continue
        if pmax > 0:
            hit = _may_use(ub, x, proj, toff, ptab, pmax)
        else:
            hit = _may_create(ub, x, proj, wp, caps, toff, table)
        if not hit:
            ok = False
            break
    for i in range(d):
        mark[S[i]] = False
    return ok


@njit(cache=True)
def _balanced(S, d, m, need, digits):
    # leaf reachability: each row needs `need` ones and zeros
    n = digits.shape[1]
    left = m - d
    for r in range(n):
        ones = 0
        for i in range(d):
            ones += digits[S[i], r]
        zeros = d - ones
        want = 0
        if ones < need:
            want += need - ones
        if zeros < need:
            want += need - zeros
        if want > left:
            return False
    return True


@njit(cache=True)
def _dfs(mode, m, base, d, stop_depth, node_limit, st, sel, nxt, codes, theta, PT,
         proj, wp, caps, toff, table, ptab, pmax, digits, rb_need, cap, best_sel, ub, buf, mark):
    """Resume the DFS at depth d.  st = [nodes, depth, best]."""
    N = proj.shape[0]
    nodes = st[0]
    while True:
        if nodes >= node_limit:
            st[0] = nodes
            st[1] = d
            return 2
        c = nxt[d]
        if c >= N:
            if d <= base:
                st[0] = nodes
                st[1] = d
                return 0
            d -= 1
            continue
        nxt[d] = c + 1
        if mode != 1 and _creates(codes[d], c, proj, wp, caps, toff, table):
            continue
        sel[d] = c
        if not _canon_child(theta[d], sel, d, c, PT, theta[d + 1], buf):
            continue
        _add(codes[d], c, proj, wp, caps, codes[d + 1])
        d += 1
        nxt[d] = c + 1
        nodes += 1
        if mode == 2:
            if d > st[2]:
                st[2] = d
                for i in range(d):
                    best_sel[i] = sel[i]
                if d >= cap:
                    st[0] = nodes
                    st[1] = d
                    return 4
            if d + _count_addable(codes[d], c + 1, proj, wp, caps, toff, table) <= st[2]:
                d -= 1
                continue
        else:
            if d == m:
                if _saturated(codes[d], sel, d, mark, proj, wp, caps, toff, table, mode == 1):
                    st[0] = nodes
                    st[1] = d
                    return 1
                d -= 1
                continue
            if d + (N - c - 1) < m:
                d -= 1
                continue
            if rb_need > 0 and not _balanced(sel, d, m, rb_need, digits):
                d -= 1
                continue
            if mode == 0 and not _reachable(codes[d], sel, d, c, m, ub, mark,
                                             proj, wp, caps, toff, table, ptab, pmax):
                d -= 1
                continue
        if d == stop_depth:
            st[0] = nodes
            st[1] = d
            return 3


# python driver ---------------------------------------------------------------------


def perm_table(n: int, l: int, symmetry: bool = True) -> np.ndarray:
    """Image of every column id under every non-identity row permutation."""
    base = l + 1
    N = base ** n
    if not symmetry or n < 2:
        return np.zeros((0, N), dtype=np.int64)
    from .kernel import all_digits

    dig = all_digits(n, l)
    rows = []
    for perm in itertools.permutations(range(n)):
        if perm == tuple(range(n)):
            continue
        img = np.zeros(N, dtype=np.int64)
        for r in perm:
            img = img * base + dig[:, r]
        rows.append(img)
    return np.stack(rows)


def _single_complete(fam: MatrixFamily) -> tuple[int, int] | None:
    """(k, l) when the family is exactly K_k^l."""
    if len(fam.members) != 1:
        return None
    F = fam.members[0]
    if F.n >= 1 and sorted(F.cols) == list(range((F.l + 1) ** F.n)):
        return F.n, F.l
    return None


class _Engine:
    """Stack arrays and kernel for one (kind, n, family)."""

    def __init__(self, p: SearchProblem, depth: int):
        self.p = p
        kern = kernel_for(p.family, p.n)
        self.kern = kern
        self.N = kern.N
        self.PT = perm_table(p.n, p.l, p.symmetry)
        D = depth + 2
        S = kern.S
        self.sel = np.zeros(D, dtype=np.int64)
        self.nxt = np.zeros(D, dtype=np.int64)
        self.codes = np.zeros((D, S), dtype=np.int64)
        self.theta = np.full((D, self.PT.shape[0]), -1, dtype=np.int64)
        self.best_sel = np.zeros(D, dtype=np.int64)
        self.ub = np.zeros(S, dtype=np.int64)
        self.buf = np.zeros(D, dtype=np.int64)
        self.mark = np.zeros(self.N, dtype=np.bool_)
        self.st = np.zeros(3, dtype=np.int64)
        self.depth = 0
        self.base = 0
        comp = _single_complete(p.family)
        self.rb_need = 0
        if comp and comp[1] == 1 and p.n >= comp[0] and p.kind != FORB:
            self.rb_need = 2 ** (comp[0] - 1) - 1
        self.cap = self.N + 1

    def load(self, prefix, nxt_levels=None):
        """Rebuild the stack for ``prefix``; nxt defaults to 'next after the chosen id'."""
        kern = self.kern
        self.codes[0] = 0
        self.theta[0] = -1
        for i, c in enumerate(prefix):
            self.sel[i] = c
            _add(self.codes[i], int(c), kern.proj, kern.wp, kern.caps, self.codes[i + 1])
            self.nxt[i] = c + 1
            if not _canon_full(self.sel, i + 1, self.PT, self.theta[i + 1]):
                raise CheckpointError("prefix is not canonical")
        d = len(prefix)
        self.nxt[d] = (prefix[-1] + 1) if prefix else 0
        if nxt_levels is not None:
            for i, v in enumerate(nxt_levels):
                self.nxt[i] = v
        self.depth = d

    def run(self, mode: int, m: int, node_limit: int, stop_depth: int = -1) -> int:
        k = self.kern
        code = _dfs(mode, m, self.base, self.depth, stop_depth, node_limit, self.st,
                    self.sel, self.nxt, self.codes, self.theta, self.PT,
                    k.proj, k.wp, k.caps, k.toff, k.table, k.ptab, k.pmax if k.precise else 0, k.digits,
                    self.rb_need, self.cap, self.best_sel, self.ub, self.buf, self.mark)
        self.depth = int(self.st[1])
        return int(code)

    def frontier(self) -> list[tuple[int, list[int]]]:
        d = self.depth
        return [(int(self.nxt[i]), [int(x) for x in self.sel[:i]]) for i in range(d + 1)]

    def matrix(self, ids) -> Matrix:
        return Matrix(self.p.n, tuple(int(c) for c in ids), self.p.l)


@dataclass
class _RunState:
    """Mutable search state, also the checkpoint payload."""

    m: int
    nodes: int = 0
    best: int = 0
    best_ids: list[int] = field(default_factory=list)
    frontier: list[tuple[int, list[int]]] | None = None  # None = fresh start
    high: int = 0


def _default_high(p: SearchProblem) -> tuple[int, Matrix | None]:
    if p.kind == SAT:
        M = close(Matrix(p.n, (), p.l), p.family)
        return M.m, M
    return (p.l + 1) ** p.n, None


def _forb_cap(p: SearchProblem) -> int:
    from .bounds import sauer_forb_l

    comp = _single_complete(p.family)
    if p.formula_cap and comp and p.n >= comp[0] - 1:
        return sauer_forb_l(p.n, comp[0], comp[1])
    return (p.l + 1) ** p.n


class _Budget:
    def __init__(self, p: SearchProblem, nodes0: int):
        self.node_cap = None if p.node_limit is None else p.node_limit
        self.deadline = None if p.time_limit is None else time.monotonic() + p.time_limit

    def next_limit(self, nodes: int) -> int | None:
        """Node count at which the next chunk stops, or None when exhausted."""
        if self.deadline is not None and time.monotonic() >= self.deadline:
            return None
        lim = nodes + CHUNK
        if self.node_cap is not None:
            if nodes >= self.node_cap:
                return None
            lim = min(lim, self.node_cap)
        return lim


def _drive(eng: _Engine, mode: int, m: int, state: _RunState, budget: _Budget, ckpt) -> int:
    """Run chunks until a terminal code or the budget runs out."""
    eng.st[0] = state.nodes
    eng.st[2] = state.best
    while True:
        lim = budget.next_limit(state.nodes)
        if lim is None:
            state.frontier = eng.frontier()
            return BUDGET
        code = eng.run(mode, m, lim)
        state.nodes = int(eng.st[0])
        if mode == _MODE[FORB] and int(eng.st[2]) > state.best:
            state.best = int(eng.st[2])
            state.best_ids = [int(x) for x in eng.best_sel[: state.best]]
        if code != BUDGET:
            return code
        if ckpt is not None:
            state.frontier = eng.frontier()
            ckpt(state)


def _search_serial(p: SearchProblem, state: _RunState | None, ckpt_path: str | None) -> ResultRecord:
    t0 = time.monotonic()
    fp = p.fingerprint
    N = (p.l + 1) ** p.n
    high, high_wit = (p.size_high, None) if p.size_high is not None else _default_high(p)
    if state is not None and state.high:
        high = state.high
    budget = _Budget(p, 0)
    mode = _MODE[p.kind]

    def ckpt(st):
        if ckpt_path:
            checkpoint_save(ckpt_path, p, st)

    def rec(status, lo, hi, wit, nodes):
        return ResultRecord(fp, p.kind, p.n, status, lo, hi, wit, nodes, time.monotonic() - t0)

    if p.kind == FORB:
        eng = _Engine(p, N)
        eng.cap = _forb_cap(p)
        cap = eng.cap
        if state is None:
            state = _RunState(m=0, high=cap)
        if state.frontier == []:
            return rec(EXACT, state.best, state.best, eng.matrix(state.best_ids), state.nodes)
        if state.frontier is None:
            eng.load([])
        else:
            _load_frontier(eng, state.frontier)
        code = _drive(eng, mode, 0, state, budget, ckpt if ckpt_path else None)
        wit = eng.matrix(state.best_ids)
        if code == BUDGET:
            ckpt(state)
            return rec(LOWER, state.best, cap, wit, state.nodes)
        state.frontier = []
        ckpt(state)
        return rec(EXACT, state.best, state.best, wit, state.nodes)

    # SAT / MSAT: one pass per size
    low = p.size_low if p.size_low is not None else 0
    if state is None:
        state = _RunState(m=low, high=high)
    eng = _Engine(p, high)
    m = state.m
    while m <= high:
        if state.frontier == []:
            break
        if m == 0:
            empty = Matrix(p.n, (), p.l)
            if _leaf_ok(p, empty):
                state.frontier = []
                ckpt(state)
                return rec(EXACT, 0, 0, empty, state.nodes)
            m = state.m = 1
            continue
        if state.frontier is None:
            eng.load([])
        else:
            _load_frontier(eng, state.frontier)
        code = _drive(eng, mode, m, state, budget, ckpt if ckpt_path else None)
        if code == FOUND:
            ids = [int(x) for x in eng.sel[:m]]
            state.best, state.best_ids = m, ids
            state.frontier = []
            ckpt(state)
            return rec(EXACT, m, m, eng.matrix(ids), state.nodes)
        if code == BUDGET:
            ckpt(state)
            wit = high_wit if high_wit is not None else (
                eng.matrix(state.best_ids) if state.best_ids else None)
            return rec(LOWER, m, high, wit, state.nodes)
        m += 1
        state.m = m
        state.frontier = None
    if state.frontier == [] and state.best_ids:
        return rec(EXACT, state.best, state.best, eng.matrix(state.best_ids), state.nodes)
    if p.size_high is not None:
        # no accepting matrix within the requested window
        return rec(LOWER, high + 1, N, None, state.nodes)
    raise AssertionError("closure bound not reproduced by the search")


def _leaf_ok(p: SearchProblem, M: Matrix) -> bool:
    from .saturation import is_m_saturated, is_saturated

    if p.kind == MSAT:
        return is_m_saturated(M, p.family).saturated
    return is_saturated(M, p.family).saturated


def _load_frontier(eng: _Engine, frontier):
    if not frontier:
        raise CheckpointError("empty frontier")
    deepest = frontier[-1][1]
    for i, (_, pre) in enumerate(frontier):
        if pre != deepest[:i]:
            raise CheckpointError("frontier records are not nested prefixes")
    eng.load(deepest, [nx for nx, _ in frontier])


# parallel ------------------------------------------------------------------------


def _collect_frames(eng: _Engine, mode: int, m: int, depth: int):
    """Frames (prefixes at ``depth``) in DFS order, and the collect node count."""
    eng.load([])
    eng.st[:] = 0
    frames = []
    found = None
    while True:
        code = eng.run(mode, m, 1 << 62, stop_depth=depth)
        if code == FRAME:
            frames.append([int(x) for x in eng.sel[: eng.depth]])
            eng.depth -= 1
            continue
        if code == FOUND:
            found = [int(x) for x in eng.sel[:m]]
        break
    return frames, found, int(eng.st[0]), int(eng.st[2]), [int(x) for x in eng.best_sel[: eng.st[2]]]


def _task(args):
    members_text, n, kind, m, prefix, floor, cap, symmetry, node_limit, deadline = args
    fam = MatrixFamily(tuple(parse_matrices(members_text)))
    p = SearchProblem(kind, n, fam, symmetry=symmetry)
    eng = _Engine(p, max(m, (p.l + 1) ** n if kind == FORB else m))
    eng.cap = cap
    eng.load(prefix)
    eng.base = len(prefix)
    eng.st[0] = 0
    eng.st[2] = floor
    mode = _MODE[kind]
    nodes = 0
    while True:
        if deadline is not None and time.time() >= deadline:
            return BUDGET, None, nodes, 0
        lim = nodes + CHUNK if node_limit is None else min(nodes + CHUNK, node_limit)
        if node_limit is not None and nodes >= node_limit:
            return BUDGET, None, nodes, 0
        code = eng.run(mode, m, lim)
        nodes = int(eng.st[0])
        if code == BUDGET:
            continue
        if code == FOUND:
            return FOUND, [int(x) for x in eng.sel[:m]], nodes, m
        best = int(eng.st[2])
        ids = [int(x) for x in eng.best_sel[:best]] if best > floor else None
        return code, ids, nodes, best


def _search_parallel(p: SearchProblem, jobs: int, split_depth: int) -> ResultRecord:
    t0 = time.monotonic()
    fp = p.fingerprint
    N = (p.l + 1) ** p.n
    mode = _MODE[p.kind]
    text = "\n".join(format_matrix(F) for F in p.family.members)
    deadline = None if p.time_limit is None else time.time() + p.time_limit
    total = 0

    def rec(status, lo, hi, wit):
        return ResultRecord(fp, p.kind, p.n, status, lo, hi, wit, total, time.monotonic() - t0)

    def left():
        if p.node_limit is None:
            return None
        return max(p.node_limit - total, 0)

    with ProcessPoolExecutor(max_workers=jobs) as pool:
        if p.kind == FORB:
            cap = _forb_cap(p)
            eng = _Engine(p, N)
            eng.cap = cap
            frames, _, nodes, floor, floor_ids = _collect_frames(eng, mode, 0, split_depth)
            total += nodes
            best, best_ids = floor, floor_ids
            # waves again: each wave starts from the incumbent of the previous
            # ones, and reaching the cap ends the search.  The first frame goes
            # alone: it holds the greedy dive that usually sets a tight incumbent
            hit_budget = False
            bounds = [0, 1] + list(range(1 + 2 * jobs, len(frames), 2 * jobs)) + [len(frames)]
            for start, stop in zip(bounds, bounds[1:]):
                if best >= cap or hit_budget:
                    break
                futs = [pool.submit(_task, (text, p.n, p.kind, 0, fr, best, cap, p.symmetry, left(), deadline))
                        for fr in frames[start:stop]]
                for f in futs:
                    code, ids, nodes, b = f.result()
                    total += nodes
                    hit_budget |= code == BUDGET
                    if ids is not None and b > best:
                        best, best_ids = b, ids
            if hit_budget:
                return rec(LOWER, best, cap, Matrix(p.n, tuple(best_ids), p.l))
            return rec(EXACT, best, best, Matrix(p.n, tuple(best_ids), p.l))

        high, high_wit = (p.size_high, None) if p.size_high is not None else _default_high(p)
        m = p.size_low if p.size_low is not None else 0
        if m == 0:
            empty = Matrix(p.n, (), p.l)
            if _leaf_ok(p, empty):
                return rec(EXACT, 0, 0, empty)
            m = 1
        eng = _Engine(p, high)
        while m <= high:
            if m <= split_depth:
                frames, found, nodes, _, _ = _collect_frames(eng, mode, m, m + 1)
                total += nodes
                if found is not None:
                    return rec(EXACT, m, m, Matrix(p.n, tuple(found), p.l))
                m += 1
                continue
            frames, _, nodes, _, _ = _collect_frames(eng, mode, m, split_depth)
            total += nodes
            # frames go out in waves so a hit early in DFS order stops the pass
            # without running every remaining subtree; the earliest hit wins
            winner = None
            budget_hit = False
            wave = 2 * jobs
            for start in range(0, len(frames), wave):
                futs = [pool.submit(_task, (text, p.n, p.kind, m, fr, 0, N + 1, p.symmetry, left(), deadline))
                        for fr in frames[start:start + wave]]
                for f in futs:
                    code, ids, nodes, _ = f.result()
                    total += nodes
                    if code == FOUND and winner is None:
                        winner = ids
                    budget_hit |= code == BUDGET
                if winner is not None or budget_hit:
                    break
            if winner is not None:
                return rec(EXACT, m, m, Matrix(p.n, tuple(winner), p.l))
            if budget_hit:
                return rec(LOWER, m, high, high_wit)
            m += 1
    if p.size_high is not None:
        return rec(LOWER, high + 1, N, None)
    raise AssertionError("closure bound not reproduced by the search")


# public entry points ---------------------------------------------------------------


def run_search(p: SearchProblem, jobs: int = 1, checkpoint: str | None = None,
               resume: str | None = None, split_depth: int = 2) -> ResultRecord:
    if jobs < 1:
        raise ValueError("jobs must be >= 1")
    state = None
    if resume is not None:
        rp, state = checkpoint_resume(resume)
        if rp.fingerprint != p.fingerprint:
            raise CheckpointError(
                f"fingerprint mismatch: checkpoint {rp.fingerprint}, problem {p.fingerprint}")
        if checkpoint is None:
            checkpoint = resume
    if jobs > 1 and state is None and checkpoint is None:
        return _search_parallel(p, jobs, split_depth)
    if jobs > 1:
        log.warning("checkpointing runs serially; ignoring --jobs %d", jobs)
    return _search_serial(p, state, checkpoint)


def min_saturated(p: SearchProblem, **kw) -> ResultRecord:
    if p.kind not in (SAT, MSAT):
        raise ValueError("min_saturated needs kind SAT or MSAT")
    return run_search(p, **kw)


def max_free(p: SearchProblem, **kw) -> ResultRecord:
    if p.kind != FORB:
        raise ValueError("max_free needs kind FORB")
    return run_search(p, **kw)


# checkpoints -----------------------------------------------------------------------


def checkpoint_save(path: str | os.PathLike, p: SearchProblem, state: _RunState) -> None:
    lines = [
        CKPT_MAGIC,
        f"fingerprint {p.fingerprint}",
        f"kind {p.kind}",
        f"n {p.n}",
        f"size_low {'-' if p.size_low is None else p.size_low}",
        f"size_high {state.high}",
        f"symmetry {int(p.symmetry)}",
        f"formula_cap {int(p.formula_cap)}",
        f"pass {state.m}",
        f"nodes {state.nodes}",
        "best " + " ".join(map(str, [state.best] + list(state.best_ids))),
        f"family {len(p.family.members)}",
    ]
    for F in p.family.members:
        lines.extend(format_matrix(F).rstrip("\n").split("\n"))
    front = state.frontier or []
    lines.append(f"frontier {len(front)}")
    for nx, pre in front:
        lines.append(" ".join(map(str, [nx] + list(pre))))
    tmp = Path(str(path) + ".tmp")
    tmp.write_text("\n".join(lines) + "\n")
    os.replace(tmp, path)


def checkpoint_resume(path: str | os.PathLike) -> tuple[SearchProblem, _RunState]:
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise CheckpointError(f"cannot read checkpoint: {e}") from e
    lines = text.split("\n")
    if not lines or lines[0] != CKPT_MAGIC:
        got = lines[0] if lines else ""
        raise CheckpointError(f"unsupported checkpoint version: {got!r}")
    pos = 1

    def take(key):
        nonlocal pos
        if pos >= len(lines):
            raise CheckpointError(f"truncated checkpoint (expected {key})")
        head, _, rest = lines[pos].partition(" ")
        if head != key:
            raise CheckpointError(f"line {pos + 1}: expected {key!r}, found {head!r}")
        pos += 1
        return rest

    try:
        fp = take("fingerprint")
        kind = take("kind")
        n = int(take("n"))
        lo_txt = take("size_low")
        high = int(take("size_high"))
        symmetry = bool(int(take("symmetry")))
        formula_cap = bool(int(take("formula_cap")))
        m = int(take("pass"))
        nodes = int(take("nodes"))
        best_f = [int(x) for x in take("best").split()]
        count = int(take("family"))
        members = []
        for _ in range(count):
            hn = int(lines[pos].split()[0])
            block = "\n".join(lines[pos: pos + hn + 1]) + "\n"
            members.extend(parse_matrices(block))
            pos += hn + 1
        fcount = int(take("frontier"))
        frontier = []
        for _ in range(fcount):
            vals = [int(x) for x in lines[pos].split()]
            frontier.append((vals[0], vals[1:]))
            pos += 1
    except (ValueError, IndexError) as e:
        raise CheckpointError(f"corrupt checkpoint near line {pos + 1}: {e}") from e
    fam = MatrixFamily(tuple(members))
    p = SearchProblem(kind, n, fam, size_low=None if lo_txt == "-" else int(lo_txt),
                      symmetry=symmetry, formula_cap=formula_cap)
    if p.fingerprint != fp:
        raise CheckpointError("checkpoint fingerprint does not match its own family")
    state = _RunState(m=m, nodes=nodes, best=best_f[0], best_ids=best_f[1:],
                      frontier=frontier, high=high)
    return p, state


# results cache ---------------------------------------------------------------------


def default_cache_path() -> Path:
    env = os.environ.get("SATKIT_CACHE")
    if env:
        return Path(env)
    return Path.home() / ".cache" / "satkit" / "results.tsv"


def cache_append(rec: ResultRecord, path: str | os.PathLike | None = None) -> ResultRecord:
    """Append one line; returns the record with ``witness_path`` filled in."""
    path = Path(path) if path is not None else default_cache_path()
    path.parent.mkdir(parents=True, exist_ok=True)
    if rec.witness is not None:
        wdir = path.parent / "witnesses"
        wdir.mkdir(exist_ok=True)
        tag = rec.value_field.replace(":", "_")
        wpath = wdir / f"{rec.fingerprint}_{tag}.mat"
        wpath.write_text(format_matrix(rec.witness))
        rec = replace(rec, witness_path=str(wpath))
    with open(path, "a") as fh:
        fh.write(rec.to_line() + "\n")
    return rec


def cache_lookup(fp: str, path: str | os.PathLike | None = None) -> list[list[str]]:
    path = Path(path) if path is not None else default_cache_path()
    if not path.exists():
        return []
    out = []
    for line in path.read_text().splitlines():
        parts = line.split("\t")
        if len(parts) == 7 and parts[0] == fp:
            out.append(parts)
    return out
