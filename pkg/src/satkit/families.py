"""Family files: explicit matrices and a small shorthand grammar.

A family file is a sequence of blocks separated by blank lines.  A block
whose first line is a header "n m l" is a matrix in the usual text format.
Any other block holds shorthand, one member per line (or several members
separated by ``;``).  Lines starting with ``#`` are comments.

Shorthand for one member::

    member := term ("+" term)*          # horizontal concatenation
    term   := [count "*"] atom          # count*X repeats every column
    atom   := "K" k ["^" l]             # K_k, or K_k^l over {0..l}
            | "T:" k ":" j              # T_k^j, columns with exactly j ones
            | "T:" k ":" lo "-" hi      # columns with lo..hi ones
            | "C:" digits ("," digits)* # explicit columns, top entry first

Examples: ``K3``, ``T:3:2``, ``T:3:0-2``, ``3*T:2:2``, ``T:3:0+T:3:3``,
``C:01+T:2:2``.  Terms of different alphabets are lifted to the largest l.
"""
from __future__ import annotations

import re
from pathlib import Path

from .containment import MatrixFamily
from .matrix import (
    Matrix,
    MatrixFormatError,
    _blocks,
    _parse_lines,
    build_K_l,
    build_T,
    concat,
    format_matrix,
    repeat,
)

_HEADER = re.compile(r"^\s*\d+\s+\d+\s+\d+\s*$")
_TERM = re.compile(r"^(?:(\d+)\s*\*\s*)?(.+)$")
_K = re.compile(r"^K(\d+)(?:\^(\d+))?$")
_T = re.compile(r"^T:(\d+):(\d+)(?:-(\d+))?$")
_C = re.compile(r"^C:([0-9]+(?:,[0-9]+)*)$")


def _lift(M: Matrix, l: int) -> Matrix:
    if M.l == l:
        return M
    return Matrix.from_columns(M.columns, n=M.n, l=l)


def _atom(text: str, line: int) -> Matrix:
    if m := _K.match(text):
        k = int(m.group(1))
        if k < 1:
            raise MatrixFormatError(f"K needs k >= 1 in {text!r}", line)
        if m.group(2) is None:
            return build_T(k, 0, k)
        l = int(m.group(2))
        if not 1 <= l <= 9:
            raise MatrixFormatError(f"alphabet bound outside [1,9] in {text!r}", line)
        return build_K_l(k, l)
    if m := _T.match(text):
        k, lo = int(m.group(1)), int(m.group(2))
        hi = lo if m.group(3) is None else int(m.group(3))
        if not 0 <= lo <= hi <= k or k < 1:
            raise MatrixFormatError(f"bad range in {text!r}", line)
        return build_T(k, lo, hi)
    if m := _C.match(text):
        cols = m.group(1).split(",")
        if len({len(c) for c in cols}) != 1:
            raise MatrixFormatError(f"columns of different length in {text!r}", line)
        cols_t = [tuple(int(ch) for ch in c) for c in cols]
        l = max(1, max(max(c) for c in cols_t))
        return Matrix.from_columns(cols_t, n=len(cols_t[0]), l=l)
    raise MatrixFormatError(f"unknown family atom {text!r}", line)


def parse_member(expr: str, line: int = 1) -> Matrix:
    """One shorthand member, e.g. ``"3*T:2:2"`` or ``"T:3:0+T:3:3"``."""
    parts = []
    for raw in expr.split("+"):
        raw = raw.strip()
        if not raw:
            raise MatrixFormatError(f"empty term in {expr!r}", line)
        m = _TERM.match(raw)
        count, atom = m.group(1), m.group(2).strip()
        M = _atom(atom, line)
        if count is not None:
            if int(count) < 1:
                raise MatrixFormatError(f"repetition count must be >= 1 in {raw!r}", line)
            M = repeat(M, int(count))
        parts.append(M)
    l = max(P.l for P in parts)
    try:
        return concat(*(_lift(P, l) for P in parts))
    except ValueError as e:
        raise MatrixFormatError(str(e), line) from None


def parse_family(text: str) -> MatrixFamily:
    members: list[Matrix] = []
    for start, block in _blocks(text):
        block = [ln for ln in block if not ln.lstrip().startswith("#")]
        if not block:
            continue
        if _HEADER.match(block[0]):
            members.append(_parse_lines(block, start))
            continue
        for off, ln in enumerate(block):
            for expr in ln.split(";"):
                if expr.strip():
                    members.append(parse_member(expr.strip(), start + off))
    if not members:
        raise MatrixFormatError("family file has no members", 1)
    ls = {F.l for F in members}
    if len(ls) > 1:
        l = max(ls)
        members = [_lift(F, l) for F in members]
    return MatrixFamily(tuple(members))


def load_family(path: str | Path) -> MatrixFamily:
    return parse_family(Path(path).read_text())


def format_family(fam: MatrixFamily) -> str:
    return "\n".join(format_matrix(F) for F in fam.members)
