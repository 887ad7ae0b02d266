"""GL_n specialization: the finite-field Dieudonne-space classifier (full Xi
on matrices), the (2,2) closed-form classifier, the (n-1,1) characteristic
polynomial invariants, the length-2 closed form, and point censuses.

A matrix f determines a pair (a, b) = (f p_1, sigma^{-m}(p_2 f^{-1})), hence
semilinear operators F = a sigma^m and V = b sigma^{-m}; the coarsest F- and
V^{-1}-stable filtration, compared with 0 < V(D) < D, recovers the stratum
label of f z^{-1}.  The classifiers here and the combinatorial map on W are
developed independently and cross-validated on permutation matrices.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from .fq import (
    Fq,
    FqSubspace,
    Matrix,
    det,
    enumerate_gl,
    gl_order,
    kernel_basis,
    mat_inv,
    mat_mul,
    mat_transpose,
    rank,
)
from .rootdata import TYPE_A_GL
from .weyl import BudgetExceeded, WeylElement
from .zipdatum import ZipDatum, ZipDatumError, gl_zip_datum


def inv_mod(x: int, n: int) -> int:
    """The unique k in {1,...,n-1} with k x = 1 mod n."""
    if math.gcd(x, n) != 1:
        raise ValueError(f"{x} is not invertible mod {n}")
    return pow(x, -1, n)


@dataclass(frozen=True)
class Signature:
    """A signature (r, s) with r >= s >= 1 and its distinguished short elements."""

    r: int
    s: int

    def __post_init__(self) -> None:
        if not self.r >= self.s >= 1:
            raise ValueError(f"need r >= s >= 1, got ({self.r}, {self.s})")

    @property
    def n(self) -> int:
        return self.r + self.s

    def zip_datum(self, budget: int | None = None) -> ZipDatum:
        return _gl_datum_cached(self.n, self.r) if budget is None else gl_zip_datum(
            self.n, self.r, budget=budget
        )

    @property
    def w_prime(self) -> WeylElement:
        """The unique length-1 element of ^I W."""
        return self.zip_datum().W.simple(self.r)

    @property
    def w1(self) -> WeylElement:
        """s_{alpha_r} s_{alpha_{r+1}} (needs s >= 2)."""
        if self.s < 2:
            raise ValueError("w1 needs s >= 2")
        W = self.zip_datum().W
        return W.simple(self.r) * W.simple(self.r + 1)

    @property
    def w2(self) -> WeylElement:
        """s_{alpha_r} s_{alpha_{r-1}} (needs r >= 2)."""
        if self.r < 2:
            raise ValueError("w2 needs r >= 2")
        W = self.zip_datum().W
        return W.simple(self.r) * W.simple(self.r - 1)


@lru_cache(maxsize=None)
def _gl_datum_cached(n: int, r: int) -> ZipDatum:
    return gl_zip_datum(n, r)


def perm_matrix(F, w: WeylElement) -> Matrix:
    """Column i carries a single 1 in row w(i)."""
    n = len(w.key)
    return tuple(
        tuple(F.one if w.key[j] == i else F.zero for j in range(n)) for i in range(n)
    )


# ---------------------------------------------------------------------------
# Dieudonne dictionary


def phi_map(F, f: Matrix, sig: Signature, m: int = 1) -> tuple[Matrix, Matrix]:
    """The pair (a, b) attached to f: a = f p_1, b = sigma^{-m}(p_2 f^{-1}).

    Validates a sigma^m(b) = sigma^m(b) a = 0, rank a = r, rank b = s and
    ker(a) = W_2; failures indicate an arithmetic bug, not bad input.
    """
    n, r, s = sig.n, sig.r, sig.s
    if len(f) != n:
        raise ValueError(f"matrix size {len(f)} does not match signature n={n}")
    finv = mat_inv(F, f)
    a = tuple(tuple(f[i][j] if j < r else F.zero for j in range(n)) for i in range(n))
    minus = (-m) % (getattr(F, "k", 1))
    b = tuple(
        tuple(
            F.frobenius_pow(finv[i][j], minus) if i >= r else F.zero
            for j in range(n)
        )
        for i in range(n)
    )
    sb = tuple(tuple(F.frobenius_pow(x, m) for x in row) for row in b)
    zero = tuple(tuple(F.zero for _ in range(n)) for _ in range(n))
    assert mat_mul(F, a, sb) == zero and mat_mul(F, sb, a) == zero, "a sigma(b) != 0"
    assert rank(F, a) == r and rank(F, b) == s, "phi_map rank condition failed"
    ker = FqSubspace.from_vectors(
        F, n, [[F.one if j == k else F.zero for j in range(n)] for k in range(r, n)]
    )
    got = FqSubspace.from_vectors(F, n, kernel_basis(F, a, n))
    assert got == ker, "ker(a) must be W_2"
    return a, b


def canonical_filtration(F, a: Matrix, b: Matrix, m: int = 1) -> list[FqSubspace]:
    """The coarsest filtration stable under F and V^{-1}, as an ascending chain.

    Closes {0, D} under M |-> span(a sigma^m M) and M |-> sigma^m{y : b y in M};
    the resulting family must be totally ordered and stabilize within 2n steps.
    """
    n = len(a)
    family: dict = {}
    for sp in (FqSubspace.zero(F, n), FqSubspace.full(F, n)):
        family[sp.rows] = sp
    for _ in range(2 * n + 1):
        new = {}
        for sp in family.values():
            img = sp.map_semilinear(a, m)
            pre = sp.preimage(b).apply_frobenius(m)
            for cand in (img, pre):
                if cand.rows not in family and cand.rows not in new:
                    new[cand.rows] = cand
        if not new:
            break
        family.update(new)
    else:
        raise AssertionError("canonical filtration failed to stabilize in 2n steps")
    chain = sorted(family.values(), key=lambda sp: sp.dim)
    for lower, upper in zip(chain, chain[1:]):
        assert lower.dim < upper.dim and lower <= upper, (
            "canonical family is not a chain; implementation bug"
        )
    return chain


def _stratum_invariant(zd: ZipDatum, F, g: Matrix, m: int) -> tuple:
    """The relative position of the canonical filtration with 0 < V(D) < D,
    recorded as the intersection-dimension profile (dim D_i, dim(V(D) /\\ D_i)).

    This profile is a complete isomorphism invariant of the Dieudonne pair of
    g, hence classifies the stratum containing g.
    """
    n = zd.rs.ambient_dim
    (rr,) = sorted(set(zd.rs.delta_indices()) - zd.I)
    a, b = _phi_pair(F, g, n, rr, m)
    chain = canonical_filtration(F, a, b, m)
    vd = FqSubspace.from_vectors(F, n, mat_transpose(b))
    return tuple((c.dim, vd.intersection_dim(c)) for c in chain)


def _model_table(zd: ZipDatum) -> dict:
    """Profile -> label lookup, built from the T-point models w z^{-1}.

    The models have 0/1 entries fixed by every Frobenius power, so one table
    (computed over F_2) serves all fields and exponents.
    """
    table = zd._extra.get("xi_model_table")
    if table is None:
        F2 = Fq(2)
        table = {}
        for w in zd.minimal_reps():
            inv = _stratum_invariant(zd, F2, perm_matrix(F2, w * zd.z.inverse()), 1)
            assert inv not in table, (
                "stratum profiles must separate ^I W; collision at "
                f"{w.one_line()} vs {table[inv].one_line()}"
            )
            table[inv] = w
        zd._extra["xi_model_table"] = table
    return table


def xi_classify(zd: ZipDatum, F, f: Matrix, m: int = 1) -> WeylElement:
    """The stratum label of f z^{-1}: full Xi on GL_n over a finite field.

    Computes the canonical filtration of the Dieudonne pair of f z^{-1}
    (with Frobenius exponent m) and matches its relative position against
    0 < V(D) < D to the T-point models of ^I W; the class is independent of
    all auxiliary choices.

    The corner convention is pinned empirically: labeling through the models
    of w z^{-1} is the unique framing for which permutation matrices of
    minimal representatives classify to themselves (validated over all of W
    against the combinatorial representative algorithm at n <= 4).
    """
    if zd.rs.realization != TYPE_A_GL:
        raise ZipDatumError("the matrix classifier is specific to GL_n data")
    if not zd.sigma.is_identity:
        raise ZipDatumError("the matrix classifier needs sigma = id (split case)")
    if m < 1:
        raise ZipDatumError("the Frobenius exponent m must be >= 1")
    g = mat_mul(F, f, perm_matrix(F, zd.z.inverse()))
    return _model_table(zd)[_stratum_invariant(zd, F, g, m)]


def _phi_pair(F, f: Matrix, n: int, r: int, m: int):
    """phi_map without the Signature wrapper (r is the parabolic cut)."""
    finv = mat_inv(F, f)
    a = tuple(tuple(f[i][j] if j < r else F.zero for j in range(n)) for i in range(n))
    minus = (-m) % (getattr(F, "k", 1))
    b = tuple(
        tuple(
            F.frobenius_pow(finv[i][j], minus) if i >= r else F.zero
            for j in range(n)
        )
        for i in range(n)
    )
    return a, b


# ---------------------------------------------------------------------------
# Schur-complement invariants and the (2,2) closed form


def blocks_of(F, g: Matrix, r: int):
    """(A, B, C, D) with A the top-left r x r block."""
    n = len(g)
    A = tuple(tuple(g[i][j] for j in range(r)) for i in range(r))
    B = tuple(tuple(g[i][j] for j in range(r, n)) for i in range(r))
    C = tuple(tuple(g[i][j] for j in range(r)) for i in range(r, n))
    D = tuple(tuple(g[i][j] for j in range(r, n)) for i in range(r, n))
    return A, B, C, D


def adjugate(F, A: Matrix) -> Matrix:
    """Transpose of the cofactor matrix; works for singular A."""
    r = len(A)
    if r == 1:
        return ((F.one,),)
    out = [[F.zero] * r for _ in range(r)]
    for i in range(r):
        for j in range(r):
            minor = tuple(
                tuple(A[a][b] for b in range(r) if b != j)
                for a in range(r)
                if a != i
            )
            cof = det(F, minor)
            if (i + j) % 2:
                cof = F.neg(cof)
            out[j][i] = cof
    return tuple(tuple(row) for row in out)


def delta(F, g: Matrix, r: int) -> Matrix:
    return blocks_of(F, g, r)[0]


def delta_prime(F, g: Matrix, r: int) -> Matrix:
    """det(A) D - C Adj(A) B, the Schur-complement companion of Delta."""
    A, B, C, D = blocks_of(F, g, r)
    dA = det(F, A)
    CAdjB = mat_mul(F, mat_mul(F, C, adjugate(F, A)), B)
    return tuple(
        tuple(F.sub(F.mul(dA, D[i][j]), CAdjB[i][j]) for j in range(len(D)))
        for i in range(len(D))
    )


def trace(F, A: Matrix):
    acc = F.zero
    for i in range(len(A)):
        acc = F.add(acc, A[i][i])
    return acc


def classify_22(F, g: Matrix) -> tuple[int, ...]:
    """The (2,2) stratum of g itself (identity-isogeny stratification).

    Evaluates Ha_0 = det(Delta), Ha_1 = Tr(Delta), Ha'_1 = Tr(Delta') and
    matches the unique applicable row; returns the one-line label.
    """
    if len(g) != 4:
        raise ValueError("classify_22 needs a 4 x 4 matrix")
    dl = delta(F, g, 2)
    ha0 = det(F, dl)
    ha1 = trace(F, dl)
    ha1p = trace(F, delta_prime(F, g, 2))
    zero = F.zero
    if ha0 != zero:
        return (3, 4, 1, 2)
    if ha1 != zero and ha1p != zero:
        return (3, 1, 4, 2)
    if ha1 != zero and ha1p == zero:
        return (1, 3, 4, 2)
    if ha1 == zero and ha1p != zero:
        return (3, 1, 2, 4)
    if any(x != zero for row in dl for x in row):
        return (1, 3, 2, 4)
    return (1, 2, 3, 4)


# ---------------------------------------------------------------------------
# (n-1, 1): characteristic-polynomial invariants and the pi formula


def _poly_add(F, a, b):
    n = max(len(a), len(b))
    a = list(a) + [F.zero] * (n - len(a))
    b = list(b) + [F.zero] * (n - len(b))
    return tuple(F.add(x, y) for x, y in zip(a, b))


def _poly_mul(F, a, b):
    out = [F.zero] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x != F.zero:
            for j, y in enumerate(b):
                if y != F.zero:
                    out[i + j] = F.add(out[i + j], F.mul(x, y))
    return tuple(out)


def _char_poly(F, A: Matrix) -> tuple:
    """Coefficients (low to high) of det(X I - A), exact over F."""
    r = len(A)
    rows = tuple(
        tuple(
            # entry is the degree<=1 polynomial  delta_ij X - A[i][j]
            ((F.neg(A[i][j]), F.one) if i == j else (F.neg(A[i][j]),))
            for j in range(r)
        )
        for i in range(r)
    )
    memo: dict = {}

    def minor(i: int, cols: tuple[int, ...]):
        if not cols:
            return (F.one,)
        key = (i, cols)
        hit = memo.get(key)
        if hit is not None:
            return hit
        acc = (F.zero,)
        for idx, j in enumerate(cols):
            entry = rows[i][j]
            if len(entry) == 1 and entry[0] == F.zero:
                continue
            sub = minor(i + 1, cols[:idx] + cols[idx + 1 :])
            term = _poly_mul(F, entry, sub)
            if idx % 2:
                term = tuple(F.neg(c) for c in term)
            acc = _poly_add(F, acc, term)
        memo[key] = acc
        return acc

    out = minor(0, tuple(range(r)))
    out = out + (F.zero,) * (r + 1 - len(out))
    assert out[r] == F.one, "characteristic polynomial must be monic"
    return out


def char_ha_coeffs(F, g: Matrix, sig: Signature) -> tuple:
    """Coefficients Ha_0,...,Ha_{n-2} of char_{Delta(g)}(X) = det(X 1 - Delta(g)).

    Only defined for signature (n-1, 1); the constant term is
    (-1)^{n-1} det(Delta(g)).
    """
    if sig.s != 1:
        raise ValueError(f"char_ha_coeffs needs signature (n-1, 1), got {sig}")
    if len(g) != sig.n:
        raise ValueError("matrix size does not match the signature")
    coeffs = _char_poly(F, delta(F, g, sig.r))
    return coeffs[: sig.n - 1]


def x_element(sig: Signature, i: int) -> WeylElement:
    """The minimal representative x_i at signature (n-1, 1); l(x_i) = n-1-i."""
    if sig.s != 1:
        raise ValueError("x_element needs signature (n-1, 1)")
    n = sig.n
    if not 0 <= i <= n - 1:
        raise ValueError(f"index {i} out of range 0..{n - 1}")
    one_line = list(range(1, i + 1)) + [n] + list(range(i + 1, n))
    return sig.zip_datum().W.from_one_line(one_line)


def pi_char_poly(sig: Signature, w: WeylElement, samples: int = 8,
                 p: int = 65521, seed: int = 0) -> int:
    """The index i with pi(w) = x_i, via the generic X-valuation of
    char_{b Delta(w z^{-1})}(X) for random b in the Levi Borel.

    Probabilistic with repetition: the generic valuation is the minimum over
    ``samples`` draws; each coefficient that is a nonzero function of b
    vanishes on a sample with probability at most deg/p (Schwartz-Zippel),
    so the failure probability is bounded by (n deg / p)^samples-ish.
    """
    if sig.s != 1:
        raise ValueError("pi_char_poly needs signature (n-1, 1)")
    zd = sig.zip_datum()
    if w.group is not zd.W:
        raise ValueError("w belongs to a different group")
    F = Fq(p)
    n = sig.n
    base = perm_matrix(F, w * zd.z.inverse())
    rng = random.Random(seed)
    best = n - 1
    for _ in range(samples):
        b = [[F.zero] * n for _ in range(n)]
        for i in range(n - 1):
            b[i][i] = rng.randrange(1, p)
            for j in range(i):
                b[i][j] = rng.randrange(p)
        b[n - 1][n - 1] = rng.randrange(1, p)
        M = mat_mul(F, tuple(tuple(row) for row in b), base)
        coeffs = _char_poly(F, delta(F, M, sig.r))
        val = next(k for k, c in enumerate(coeffs) if c != F.zero)
        best = min(best, val)
    return best


# ---------------------------------------------------------------------------
# length-2 closed form and censuses


def length2_closed_form(sig: Signature) -> dict:
    """The trichotomy for the two length-2 strata, decided arithmetically.

    gcd(r,s) > 3: neither piece is bounded; gcd in {2,3}: both smooth;
    gcd = 1: with m = inv_n(s), U_1 is smooth iff m > n/2 and U_2 iff m < n/2.
    """
    r, s, n = sig.r, sig.s, sig.n
    if s < 2:
        raise ValueError(
            "length2_closed_form needs s >= 2 (for s = 1 every stratum closure "
            "is smooth; see the signature (n-1,1) catalog)"
        )
    g = math.gcd(r, s)
    report: dict = {"r": r, "s": s, "n": n, "gcd": g}
    if g > 3:
        report["branch"] = "unbounded"
        report["U1"] = {"bounded": False, "smooth": False}
        report["U2"] = {"bounded": False, "smooth": False}
    elif g in (2, 3):
        report["branch"] = "smooth"
        report["U1"] = {"bounded": True, "smooth": True}
        report["U2"] = {"bounded": True, "smooth": True}
    else:
        m = inv_mod(s, n)
        report["branch"] = "coprime"
        report["m_inverse"] = m
        report["U1"] = {"bounded": True, "smooth": 2 * m > n}
        report["U2"] = {"bounded": True, "smooth": 2 * m < n}
    return report


def verify_length2(sig: Signature) -> dict:
    """Cross-check the closed form against the general decision procedure."""
    from .strata import decide_smooth

    closed = length2_closed_form(sig)
    zd = sig.zip_datum()
    for key, w in (("U1", sig.w1), ("U2", sig.w2)):
        verdict = decide_smooth(zd, w, sig.w_prime)
        closed[key]["decided_smooth"] = verdict.smooth
        closed[key]["decided_bounded"] = verdict.bounded
        closed[key]["agrees"] = (
            verdict.smooth == closed[key]["smooth"]
            and (closed[key]["bounded"] is verdict.bounded or closed[key]["bounded"])
        )
    return closed


def _factor_prime_power(q: int) -> tuple[int, int]:
    for p in range(2, q + 1):
        if _is_prime_int(p) and q % p == 0:
            k = 0
            t = q
            while t % p == 0:
                t //= p
                k += 1
            if t != 1:
                raise ValueError(f"{q} is not a prime power")
            return p, k
    raise ValueError(f"{q} is not a prime power")


def _is_prime_int(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


def label_of(w: WeylElement) -> tuple[int, ...]:
    return tuple(w.one_line())


def fp_point_census(sig: Signature, q: int, m_list: Sequence[int],
                    budget: int = 1_000_000) -> dict:
    """Classify every f in GL_n(F_q) for each exponent in m_list.

    Returns per-stratum counts per exponent; over a prime field the counts
    (indeed the pointwise classes) must agree across exponents.
    """
    n = sig.n
    if n > 4 or q > 9:
        raise BudgetExceeded(f"census budget is n <= 4 and q <= 9; got n={n}, q={q}")
    total = gl_order(q, n)
    if total > budget:
        raise BudgetExceeded(f"|GL_{n}(F_{q})| = {total} exceeds budget {budget}")
    p, k = _factor_prime_power(q)
    F = Fq(p, k)
    zd = sig.zip_datum()
    counts: dict[int, dict] = {m: {} for m in m_list}
    pointwise_equal = True
    for f in enumerate_gl(F, n):
        labels = []
        for m in m_list:
            lab = label_of(xi_classify(zd, F, f, m))
            labels.append(lab)
            bucket = counts[m]
            bucket[lab] = bucket.get(lab, 0) + 1
        if any(lab != labels[0] for lab in labels[1:]):
            pointwise_equal = False
    report = {
        "signature": [sig.r, sig.s],
        "q": q,
        "total": total,
        "m_list": list(m_list),
        "counts": {
            str(m): {",".join(map(str, lab)): c for lab, c in sorted(counts[m].items())}
            for m in m_list
        },
        "counts_m_independent": all(
            counts[m] == counts[m_list[0]] for m in m_list[1:]
        ),
    }
    if k == 1:
        report["pointwise_m_independent"] = pointwise_equal
    return report


def zip_pair_sample(F, sig: Signature, m: int, rng: random.Random):
    """A random element (x, y) of the exponent-m zip group over F.

    x = [[A,0],[C,D]] in P and y = [[sigma^m A, B'],[0, sigma^m D]] in Q share
    Levi parts up to sigma^m.  For m = 0 the Levi parts agree on the nose.
    """
    n, r, s = sig.n, sig.r, sig.s
    els = list(F.elements())

    def rand_invertible(size: int) -> Matrix:
        while True:
            M = tuple(
                tuple(rng.choice(els) for _ in range(size)) for _ in range(size)
            )
            if det(F, M) != F.zero:
                return M

    A = rand_invertible(r)
    D = rand_invertible(s)
    C = tuple(tuple(rng.choice(els) for _ in range(r)) for _ in range(s))
    Bp = tuple(tuple(rng.choice(els) for _ in range(s)) for _ in range(r))
    x = tuple(
        tuple(
            (A[i][j] if j < r else F.zero) if i < r else
            (C[i - r][j] if j < r else D[i - r][j - r])
            for j in range(n)
        )
        for i in range(n)
    )
    sA = tuple(tuple(F.frobenius_pow(v, m) for v in row) for row in A)
    sD = tuple(tuple(F.frobenius_pow(v, m) for v in row) for row in D)
    y = tuple(
        tuple(
            (sA[i][j] if j < r else Bp[i][j - r]) if i < r else
            (F.zero if j < r else sD[i - r][j - r])
            for j in range(n)
        )
        for i in range(n)
    )
    return x, y
