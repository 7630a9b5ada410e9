from __future__ import annotations

import random

import pytest

from satkit.containment import MatrixFamily
from satkit.kernel import kernel_for
from satkit.matrix import Matrix, build_K_l, build_T, repeat, concat

FAMS = [
    MatrixFamily.of(build_T(3, 0, 3)),
    MatrixFamily.of(repeat(build_T(2, 2, 2), 3)),
    MatrixFamily.of(concat(build_T(3, 0, 0), build_T(3, 2, 3))),
    MatrixFamily.of(Matrix.from_strings("01", "11")),
    MatrixFamily.of(build_T(2, 1, 1), build_T(3, 3, 3)),
    MatrixFamily.of(build_K_l(1, 2)),
    MatrixFamily.of(build_K_l(2, 2)),
]


@pytest.mark.parametrize("fam", FAMS, ids=lambda f: f"{len(f.members)}x{f.members[0].n}x{f.l}")
def test_kernel_agrees_with_engine(fam):
    rng = random.Random(3)
    l = fam.l
    for n in (3, 4):
        kern = kernel_for(fam, n)
        N = (l + 1) ** n
        for _ in range(40):
            cols = rng.sample(range(N), rng.randint(0, min(8, N)))
            M = Matrix(n, tuple(cols), l)
            code = kern.state(cols)
            assert kern.forbidden(code) == fam.violates(M)
            if kern.forbidden(code):
                continue
            made = kern.creates_all(code)
            for c in range(N):
                if c not in cols:
                    assert bool(made[c]) == fam.violates(M.with_columns([c]))
