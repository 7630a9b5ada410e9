"""satkit command line.

Exit codes: 0 answer / positive verdict, 1 negative verdict, 2 usage or
input error.
"""
from __future__ import annotations

import argparse
import logging
import sys
from contextlib import contextmanager
from pathlib import Path

from . import bounds
from .constructions import GALLERY, UnsupportedError, gallery, set_data_dir
from .containment import MatrixFamily
from .families import load_family
from .matrix import MatrixFormatError, Matrix, f, format_matrix, parse_matrix
from .saturation import NOT_ADMISSIBLE, SATURATED, close, is_m_saturated, is_saturated
from .search import CheckpointError, SearchProblem, cache_append, default_cache_path, run_search

WARN_ORDER = 24


class InputError(Exception):
    pass


def _read_matrix(path: str) -> Matrix:
    try:
        return parse_matrix(Path(path).read_text())
    except OSError as e:
        raise InputError(f"{path}: {e.strerror or e}") from None
    except MatrixFormatError as e:
        raise InputError(f"{path}: {e}") from None


def _read_family(path: str) -> MatrixFamily:
    try:
        return load_family(path)
    except OSError as e:
        raise InputError(f"{path}: {e.strerror or e}") from None
    except (MatrixFormatError, ValueError) as e:
        raise InputError(f"{path}: {e}") from None


def _same_alphabet(M: Matrix, fam: MatrixFamily) -> None:
    if M.l != fam.l:
        raise InputError(f"matrix is over [0,{M.l}] but the family is over [0,{fam.l}]")
    if not M.simple:
        raise InputError("matrix has repeated columns")


@contextmanager
def _assets(data_dir):
    # main() may be called in-process, so the override must not outlive the command
    if not data_dir:
        yield
        return
    set_data_dir(data_dir)
    try:
        yield
    finally:
        set_data_dir(None)


def _digits(col) -> str:
    return "".join(map(str, col))


# subcommands ----------------------------------------------------------------------


def cmd_contain(a) -> int:
    M, fam = _read_matrix(a.matrix), _read_family(a.family)
    if M.l != fam.l:
        raise InputError(f"matrix is over [0,{M.l}] but the family is over [0,{fam.l}]")
    hit = fam.witness(M)
    if hit is None:
        print("FREE")
        return 0
    F, w = hit
    print(f"CONTAINS member {fam.members.index(F)}")
    print("rows " + " ".join(map(str, w.row_map)))
    print("cols " + " ".join(map(str, w.col_map)))
    return 1


def _check(a, monotone: bool) -> int:
    M, fam = _read_matrix(a.matrix), _read_family(a.family)
    _same_alphabet(M, fam)
    if M.n > WARN_ORDER:
        print(f"warning: {(M.l + 1) ** M.n} candidate columns at n={M.n}; this may take long",
              file=sys.stderr)
    rep = (is_m_saturated if monotone else is_saturated)(M, fam)
    if rep.verdict == SATURATED:
        print("SATURATED")
        return 0
    if rep.verdict == NOT_ADMISSIBLE:
        print("NOT-ADMISSIBLE")
    else:
        print(f"EXTENDABLE {_digits(rep.column)}")
    return 1


def cmd_close(a) -> int:
    M, fam = _read_matrix(a.matrix), _read_family(a.family)
    _same_alphabet(M, fam)
    if fam.violates(M):
        print("NOT-ADMISSIBLE")
        return 1
    sys.stdout.write(format_matrix(close(M, fam)))
    return 0


def cmd_search(a) -> int:
    fam = _read_family(a.family)
    try:
        p = SearchProblem(a.kind, a.n, fam, size_low=a.min_size, size_high=a.max_size,
                          node_limit=a.node_limit, time_limit=a.time_limit,
                          symmetry=not a.no_symmetry)
    except ValueError as e:
        raise InputError(str(e)) from None
    try:
        rec = run_search(p, jobs=a.jobs, checkpoint=a.checkpoint, resume=a.resume)
    except CheckpointError as e:
        raise InputError(f"cannot resume: {e}") from None
    if a.cache is not None:
        rec = cache_append(rec, a.cache or None)
    print(rec.to_line())
    if a.witness and rec.witness is not None:
        sys.stdout.write(format_matrix(rec.witness))
    return 0


def cmd_construct(a) -> int:
    params = {}
    if a.m is not None:
        params["m"] = a.m
    if a.l is not None:
        params["l"] = a.l
    if a.variant is not None:
        params["variant"] = a.variant
    with _assets(a.data_dir):
        try:
            entry = gallery(a.id, a.n, **params)
        except (UnsupportedError, TypeError) as e:
            raise InputError(f"unsupported construction: {e}") from None
        except (OSError, MatrixFormatError) as e:
            raise InputError(f"gallery asset: {e}") from None
        sys.stdout.write(format_matrix(entry.matrix))
        if a.verify:
            ok = entry.verify()
            print("VERIFIED" if ok else "FAILED", file=sys.stderr)
            return 0 if ok else 1
    return 0


def cmd_shift(a) -> int:
    M = _read_matrix(a.matrix)
    if not M.simple:
        raise InputError("shift needs a simple matrix")
    if a.row is not None:
        if not 0 <= a.row < M.n:
            raise InputError(f"row {a.row} out of range for order {M.n}")
        out = bounds.shift_row(M, a.row)
    else:
        out = bounds.shift_fixpoint(M)
    sys.stdout.write(format_matrix(out))
    return 0


def cmd_bound(a) -> int:
    try:
        if a.which == "f":
            v = f(a.n, a.k)
        elif a.which == "forb":
            v = bounds.sauer_forb(a.n, a.k)
        elif a.which == "forb-l":
            v = bounds.sauer_forb_l(a.n, a.k, a.l)
        else:
            v = bounds.lt22_lower(a.n).value
    except ValueError as e:
        raise InputError(str(e)) from None
    print(v)
    return 0


def cmd_verify_paper(a) -> int:
    from .reproduce import run_suite

    with _assets(a.data_dir):
        results = run_suite(a.suite, out=sys.stdout)
    return 0 if all(r.ok for r in results) else 1


# parser ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="satkit", description="Matrix saturation and forbidden configurations.")
    ap.add_argument("-v", "--verbose", action="store_true", help="log search progress")
    sub = ap.add_subparsers(dest="cmd", required=True)

    def mf(name, fn, help):
        sp = sub.add_parser(name, help=help)
        sp.add_argument("matrix")
        sp.add_argument("family")
        sp.set_defaults(fn=fn)
        return sp

    mf("contain", cmd_contain, "is some family member a submatrix?")
    mf("check-sat", lambda a: _check(a, False), "saturation verdict")
    mf("check-msat", lambda a: _check(a, True), "monotone saturation verdict")
    mf("close", cmd_close, "greedily complete to a saturated matrix")

    sp = sub.add_parser("search", help="exact sat / m-sat / forb")
    sp.add_argument("kind", type=str.upper, choices=["SAT", "MSAT", "FORB"])
    sp.add_argument("n", type=int)
    sp.add_argument("family")
    sp.add_argument("--min-size", type=int)
    sp.add_argument("--max-size", type=int)
    sp.add_argument("--checkpoint", metavar="PATH")
    sp.add_argument("--resume", metavar="PATH")
    sp.add_argument("--jobs", type=int, default=1)
    sp.add_argument("--node-limit", type=int)
    sp.add_argument("--time-limit", type=float, help="seconds")
    sp.add_argument("--cache", nargs="?", const="", metavar="PATH",
                    help=f"append the record to the results cache (default {default_cache_path()})")
    sp.add_argument("--witness", action="store_true", help="also print the witness matrix")
    sp.add_argument("--no-symmetry", action="store_true", help=argparse.SUPPRESS)
    sp.set_defaults(fn=cmd_search)

    sp = sub.add_parser("construct", help="print a gallery matrix")
    sp.add_argument("id", choices=sorted(GALLERY))
    sp.add_argument("n", type=int)
    sp.add_argument("--m", type=int)
    sp.add_argument("--l", type=int)
    sp.add_argument("--variant", choices=["design", "generic"])
    sp.add_argument("--verify", action="store_true", help="check the claimed property (verdict on stderr)")
    sp.add_argument("--data-dir", help="read gallery assets from this directory")
    sp.set_defaults(fn=cmd_construct)

    sp = sub.add_parser("shift", help="row shifting (compression)")
    sp.add_argument("matrix")
    sp.add_argument("--row", type=int, help="shift one row (0-based); default: iterate to a fixpoint")
    sp.set_defaults(fn=cmd_shift)

    sp = sub.add_parser("bound", help="closed-form values")
    sp.add_argument("which", choices=["f", "forb", "forb-l", "lt22-lower"])
    sp.add_argument("n", type=int)
    sp.add_argument("k", type=int, nargs="?", default=1)
    sp.add_argument("l", type=int, nargs="?", default=1)
    sp.set_defaults(fn=cmd_bound)

    sp = sub.add_parser("verify-paper", help="run the reproduction table")
    sp.add_argument("--suite", choices=["quick", "full"], default="quick")
    sp.add_argument("--data-dir", help="read gallery assets from this directory")
    sp.set_defaults(fn=cmd_verify_paper)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        a = ap.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    logging.basicConfig(level=logging.INFO if a.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if getattr(a, "jobs", 1) < 1:
        print("error: --jobs must be >= 1", file=sys.stderr)
        return 2
    try:
        return a.fn(a)
    except InputError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
