"""Differential validation of the smoothness decision against the
finite-field oracle.

The separating-cover condition has an independent matrix-theoretic test: a
failure is witnessed by a dense rational point of a small neighbor's flag
stratum, which can be written s v z^{-1} with s in the lower-triangular
Borel of the Levi over F_p.  Scanning all such s and classifying the
products therefore decides the condition without ever invoking the
combinatorial representative machinery.
"""

import itertools

import pytest

from zipstrata.fq import Fq, mat_mul
from zipstrata.glnzip import perm_matrix, xi_classify
from zipstrata.strata import decide_smooth
from zipstrata.zipdatum import gl_zip_datum


def _levi_borel_points(F, n, r):
    """All of B_L(F_q): lower triangular within the two diagonal blocks."""
    positions = [
        (i, j)
        for i in range(n)
        for j in range(i)
        if (i < r and j < r) or (i >= r and j >= r)
    ]
    diag_units = [x for x in F.elements() if x != F.zero]
    for diag in itertools.product(diag_units, repeat=n):
        for fill in itertools.product(list(F.elements()), repeat=len(positions)):
            g = [[F.zero] * n for _ in range(n)]
            for i in range(n):
                g[i][i] = diag[i]
            for (i, j), val in zip(positions, fill):
                g[i][j] = val
            yield tuple(tuple(row) for row in g)


def _separating_by_matrix_scan(zd, F, w, w_prime):
    """True unless some Levi-Borel translate of a small-candidate neighbor
    classifies into the w'-stratum."""
    n = zd.rs.ambient_dim
    (r,) = sorted(set(zd.rs.delta_indices()) - zd.I)
    I_w = zd.canonical_type(w)
    for v in zd.lower_neighbors(I_w, w):
        if v.key == w_prime.key:
            continue
        vmat = perm_matrix(F, v)
        for s in _levi_borel_points(F, n, r):
            # membership of s v z^{-1} in a stratum is Xi of (s v z^{-1}) z
            if xi_classify(zd, F, mat_mul(F, s, vmat)) == w_prime:
                return False
    return True


@pytest.mark.parametrize("n,r,q", [(4, 2, 2), (5, 3, 2), (4, 2, 3)])
def test_separating_condition_matches_matrix_scan(n, r, q):
    zd = gl_zip_datum(n, r)
    F = Fq(q)
    checked = 0
    for w in zd.minimal_reps():
        for wp in zd.lower_neighbors(zd.I, w):
            verdict = decide_smooth(zd, w, wp)
            assert verdict.separating == _separating_by_matrix_scan(zd, F, w, wp), (
                w.one_line(), wp.one_line(),
            )
            checked += 1
    assert checked > 0


def test_full_smoothness_verdicts_by_matrix_oracle_32():
    # the complete (3,2) decision table reproduced through the matrix lane
    zd = gl_zip_datum(5, 3)
    F = Fq(2)
    W = zd.W
    w1 = W.simple(3) * W.simple(4)
    w2 = W.simple(3) * W.simple(2)
    wp = W.simple(3)
    for w, expected in ((w1, True), (w2, False)):
        verdict = decide_smooth(zd, w, wp)
        matrix_sep = _separating_by_matrix_scan(zd, F, w, wp)
        assert verdict.smooth == (verdict.bounded and matrix_sep) == expected
