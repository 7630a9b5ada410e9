"""Closed-form forb values and the row-shifting compression."""
from __future__ import annotations

from dataclasses import dataclass
from math import comb

from .matrix import Matrix, f

FORB_FORMULA = "forb-exact-formula"
SAT_LOWER = "sat-lower"
SAT_UPPER = "sat-upper"


@dataclass(frozen=True)
class BoundValue:
    kind: str
    value: int
    provenance: str

    def __post_init__(self):
        if self.value < 0:
            raise ValueError("bound values are non-negative")


def sauer_forb(n: int, k: int) -> int:
    """forb(n, K_k) = f(n, k-1)."""
    if k < 1 or n < k - 1:
        raise ValueError("need n >= k-1 >= 0")
    return f(n, k - 1)


def sauer_forb_l(n: int, k: int, l: int) -> int:
    """forb(n, K_k^l) over {0..l}: sum over i < k of l^(n-i) C(n,i)."""
    if l < 1 or k < 1 or n < k - 1:
        raise ValueError("need l >= 1, k >= 1, n >= k-1")
    return sum(l ** (n - i) * comb(n, i) for i in range(k))


def lt22_lower(n: int) -> BoundValue:
    return BoundValue(SAT_LOWER, 2 * n + 1, "sat(n, l*T_2^2) >= 2n+1 for l >= 3")


def shift_row(M: Matrix, i: int) -> Matrix:
    """Renumber row i inside each class of columns agreeing off row i.

    A class of size s gets row-i entries 0..s-1, handed out in increasing
    order of the original entries; other rows and column positions are kept.
    """
    if not M.simple:
        raise ValueError("shift needs a simple matrix")
    if not 0 <= i < M.n:
        raise IndexError(f"row index {i} out of range for order {M.n}")
    base = M.l + 1
    w = base ** (M.n - 1 - i)
    classes: dict[int, list[int]] = {}
    for j, c in enumerate(M.cols):
        classes.setdefault(c - ((c // w) % base) * w, []).append(j)
    out = list(M.cols)
    for rest, idx in classes.items():
        idx.sort(key=lambda j: (M.cols[j] // w) % base)
        for new, j in enumerate(idx):
            out[j] = rest + new * w
    return Matrix(M.n, tuple(out), M.l)


def shift_fixpoint(M: Matrix, max_rounds: int | None = None) -> Matrix:
    """Shift rows 0..n-1 repeatedly until nothing moves.

    Each effective shift lowers the entry sum, so this terminates.
    """
    rounds = 0
    while True:
        changed = False
        for i in range(M.n):
            S = shift_row(M, i)
            if S.cols != M.cols:
                changed = True
                M = S
        rounds += 1
        if not changed or (max_rounds is not None and rounds >= max_rounds):
            return M


def entry_sum(M: Matrix) -> int:
    return sum(sum(c) for c in M.columns)


def max_top_count(M: Matrix) -> int:
    """Largest number of entries equal to l in a single column."""
    return max((sum(1 for e in c if e == M.l) for c in M.columns), default=0)
