"""Decision procedures on zip strata: w-sequences, smallness, the stratum
representative map Xi, its restriction pi to small elements, and the
smoothness test for elementary pairs (w, w').

The verdict semantics: ``smooth`` means the elementary two-stratum piece
U(w, w') is smooth, equivalently normal, and the answer is independent of the
Frobenius exponent m >= 1.  When the separating condition fails, the verdict
carries a certificate: a small lower neighbor v != w' whose image pi(v) hits
w', i.e. the flag stratum that breaks the separating cover.
"""

from __future__ import annotations

from dataclasses import dataclass

from .rootdata import Root, TYPE_A_GL, is_compact
from .weyl import WeylElement
from .zipdatum import ZipDatum, ZipDatumError

_XI_NUMPY_THRESHOLD = 40_320  # switch the exhaustive a-scan to the batched path


class NotSmallError(ZipDatumError):
    """pi was asked for a non-small element; no algorithm exists for those."""


@dataclass(frozen=True)
class WSequence:
    """An orbit segment (beta_0, ..., beta_n) of beta |-> v sigma(beta).

    ``head`` is non-compact positive, the ``body`` roots are compact, and the
    segment stops at ``tail``, the first non-compact root with index >= 1.
    The sequence counts as positive or negative by the sign of its tail.
    """

    head: Root
    body: tuple[Root, ...]
    tail: Root

    @property
    def sign(self) -> int:
        return self.tail.sign

    @property
    def roots(self) -> tuple[Root, ...]:
        return (self.head, *self.body, self.tail)


def w_sequences(zd: ZipDatum, v: WeylElement):
    """All w-sequences of the operator beta |-> v sigma(beta).

    Returns ``(sequences, n_plus, n_minus)``; there is exactly one sequence
    per non-compact positive root, so n_plus + n_minus is the number of
    those roots.
    """
    rs, sigma = zd.rs, zd.sigma
    noncompact_pos = [
        a for a in rs.positive_roots if not is_compact(rs, a, zd.I)
    ]
    bound = 2 * len(rs.positive_roots) + 1
    seqs = []
    for beta0 in noncompact_pos:
        body = []
        cur = beta0
        for _ in range(bound):
            cur = v.apply(sigma.apply_root(cur))
            if not is_compact(rs, cur, zd.I):
                break
            body.append(cur)
        else:
            raise AssertionError("w-sequence failed to terminate")
        seqs.append(WSequence(beta0, tuple(body), cur))
    n_plus = sum(1 for s in seqs if s.sign > 0)
    return seqs, n_plus, len(seqs) - n_plus


def orbit_codim(zd: ZipDatum, w: WeylElement) -> tuple[int, int]:
    """(stabilizer dimension, orbit-dimension excess over dim P) for w.

    The stabilizer dimension is the number of negative w z^{-1}-sequences;
    the excess is the number of positive ones.
    """
    _, n_plus, n_minus = w_sequences(zd, w * zd.z.inverse())
    return n_minus, n_plus


def is_small(zd: ZipDatum, w: WeylElement) -> bool:
    """w is small iff |S+_{w z^-1}| = l(w).

    Smallness is independent of the Frobenius exponent, so there is no
    exponent argument.
    """
    cached = zd._small.get(w.key)
    if cached is None:
        _, n_plus, _ = w_sequences(zd, w * zd.z.inverse())
        cached = n_plus == w.length
        zd._small[w.key] = cached
    return cached


# ---------------------------------------------------------------------------
# the representative map Xi on W


def xi_of_weyl(zd: ZipDatum, w: WeylElement) -> WeylElement:
    """The unique v in ^I W whose stratum contains w z^{-1}.

    Scans a in W_I, forms a^{-1} w psi(a), splits off the minimal coset
    representative and accepts when the W_I-part lies in the canonical-type
    parabolic of the candidate.  All accepted candidates must agree; a
    disagreement would be an implementation bug, not bad input.
    """
    W = zd.W
    if (
        W.rs.realization == TYPE_A_GL
        and W.parabolic_order(zd.I) > _XI_NUMPY_THRESHOLD
    ):
        return _xi_batched_type_a(zd, w)
    accepted: dict = {}
    for a in W.parabolic_elements(zd.I):
        v = a.inverse() * w * zd.psi(a)
        u, cand = W.min_coset_rep(zd.I, v)
        if W.in_parabolic(u, zd.canonical_type(cand)):
            accepted[cand.key] = cand
    assert accepted, "Xi scan accepted nothing; the representative theory is violated"
    assert len(accepted) == 1, (
        f"Xi scan accepted distinct candidates {list(accepted)}; implementation bug"
    )
    return next(iter(accepted.values()))


def _xi_batched_type_a(zd: ZipDatum, w: WeylElement) -> WeylElement:
    """Same exhaustive scan as xi_of_weyl, vectorized over all of W_I."""
    import itertools

    import numpy as np

    W = zd.W
    n = W.n
    blocks = W.blocks(zd.I)

    per_block = [
        np.array(list(itertools.permutations(range(lo, hi))), dtype=np.int16)
        for lo, hi in blocks
    ]
    A = per_block[0]
    for nxt in per_block[1:]:
        left = np.repeat(A, len(nxt), axis=0)
        right = np.tile(nxt, (len(A), 1))
        A = np.concatenate([left, right], axis=1)

    def compose(U, V):
        return np.take_along_axis(U, V, axis=1)

    A_inv = np.argsort(A, axis=1).astype(np.int16)
    zarr = np.array(zd.z.key, dtype=np.int16)
    zinv = np.argsort(zarr).astype(np.int16)
    if zd.sigma.is_identity:
        sigA = A
    else:
        sigA = np.stack(
            [np.array(zd.sigma.apply_w(W, W._intern(tuple(row))).key, dtype=np.int16) for row in A]
        )
    # psi(a) = z^{-1} o sigma(a) o z, pointwise psi(a)[i] = zinv[sigma(a)[z[i]]]
    psiA = zinv[sigA[:, zarr]]
    warr = np.array(w.key, dtype=np.int16)
    # v = a^{-1} o w o psi(a)
    V = compose(A_inv, warr[psiA])

    # minimal coset representative: within each I-block, the values of each row
    # of V are relabeled in increasing position order
    Wmin = np.zeros_like(V)
    for lo, hi in blocks:
        mask = (V >= lo) & (V < hi)
        Wmin += np.where(mask, lo + np.cumsum(mask, axis=1) - 1, 0).astype(np.int16)
    U = compose(V, np.argsort(Wmin, axis=1).astype(np.int16))

    cands, inverse_ix = np.unique(Wmin, axis=0, return_inverse=True)
    inverse_ix = inverse_ix.reshape(-1)  # shape differs across numpy versions
    accepted: dict = {}
    for ci in range(len(cands)):
        cand = W._intern(tuple(int(x) for x in cands[ci]))
        Iw = zd.canonical_type(cand)
        block_id = np.zeros(n, dtype=np.int16)
        for b, (lo, hi) in enumerate(W.blocks(Iw)):
            block_id[lo:hi] = b
        rows = U[inverse_ix == ci]
        ok = (block_id[rows] == block_id[np.arange(n)]).all(axis=1)
        if ok.any():
            accepted[cand.key] = cand
    assert accepted, "Xi scan accepted nothing; the representative theory is violated"
    assert len(accepted) == 1, (
        f"Xi scan accepted distinct candidates {list(accepted)}; implementation bug"
    )
    return next(iter(accepted.values()))


def pi_small(zd: ZipDatum, w: WeylElement) -> WeylElement:
    """pi(w) for small w (equal to Xi(w)); rejects non-small input.

    The artifact computes pi only on the small locus, where the image is
    algorithmically known; lengths are preserved there.
    """
    if not is_small(zd, w):
        raise NotSmallError(
            f"pi is only computed on small elements; {w!r} is not small"
        )
    out = xi_of_weyl(zd, w)
    assert out.length == w.length, "pi must preserve length on small elements"
    return out


# ---------------------------------------------------------------------------
# the smoothness decision


@dataclass(frozen=True)
class StratumVerdict:
    """Decision record for an elementary pair (w, w')."""

    w: WeylElement
    w_prime: WeylElement
    I_w: frozenset[int]
    I_w_prime: frozenset[int]
    bounded: bool
    bound_violation: int | None  # a simple index in I_{w'} \ I_w, if any
    gamma: tuple[WeylElement, ...]  # Gamma_{I_w}(w)
    gamma_small: tuple[WeylElement, ...]
    separating: bool
    certificate: WeylElement | None  # v in gamma_small \ {w'} with pi(v) = w'
    flag_dim: int  # l(w) + dim P

    @property
    def smooth(self) -> bool:
        return self.bounded and self.separating

    def to_json(self) -> dict:
        lab = _label
        return {
            "w": lab(self.w),
            "w_prime": lab(self.w_prime),
            "bounded": self.bounded,
            "bound_violation": self.bound_violation,
            "I_w": sorted(self.I_w),
            "I_w_prime": sorted(self.I_w_prime),
            "gamma": [lab(v) for v in self.gamma],
            "gamma_small": [lab(v) for v in self.gamma_small],
            "separating": self.separating,
            "certificate": None if self.certificate is None else lab(self.certificate),
            "smooth": self.smooth,
            "flag_dim": self.flag_dim,
        }


def _label(w: WeylElement):
    if w.group.rs.realization == TYPE_A_GL:
        return w.one_line()
    return list(w.word)


def _dim_parabolic(zd: ZipDatum) -> int:
    phi_I_plus = sum(
        1 for a in zd.rs.positive_roots if is_compact(zd.rs, a, zd.I)
    )
    return zd.lattice.dim + len(zd.rs.positive_roots) + phi_I_plus


def decide_smooth(zd: ZipDatum, w: WeylElement, w_prime: WeylElement) -> StratumVerdict:
    """Decide smoothness (= normality) of the elementary piece U(w, w').

    Preconditions: w in ^I W and w' a lower neighbor of w in ^I W.  The piece
    is smooth iff it is w-bounded (I_{w'} inside I_w) and no other small
    lower neighbor of w in ^{I_w} W maps to w' under pi.
    """
    if not zd.in_IW(w):
        raise ZipDatumError(f"precondition failed: w = {w!r} is not in ^I W")
    if not zd.in_IW(w_prime):
        raise ZipDatumError(f"precondition failed: w' = {w_prime!r} is not in ^I W")
    if w_prime.length != w.length - 1:
        raise ZipDatumError(
            "precondition failed: l(w') = l(w) - 1 is required, got "
            f"l(w')={w_prime.length}, l(w)={w.length}"
        )
    if not zd.twisted_leq(zd.I, w_prime, w):
        raise ZipDatumError(
            "precondition failed: w' is not below w in the twisted order on ^I W"
        )

    I_w = zd.canonical_type(w)
    I_wp = zd.canonical_type(w_prime)
    bounded = I_wp <= I_w
    violation = min(I_wp - I_w) if not bounded else None

    gamma = tuple(zd.lower_neighbors(I_w, w))
    gamma_small = tuple(v for v in gamma if is_small(zd, v))
    certificate = None
    for v in gamma_small:
        if v.key == w_prime.key:
            continue
        if pi_small(zd, v).key == w_prime.key:
            certificate = v
            break
    separating = certificate is None

    return StratumVerdict(
        w=w,
        w_prime=w_prime,
        I_w=I_w,
        I_w_prime=I_wp,
        bounded=bounded,
        bound_violation=violation,
        gamma=gamma,
        gamma_small=gamma_small,
        separating=separating,
        certificate=certificate,
        flag_dim=w.length + _dim_parabolic(zd),
    )


def closure_codim1(zd: ZipDatum, w: WeylElement):
    """Is the closure of the w-stratum smooth in codimension one?

    Evaluates: I_{w'} inside I_w for every w' in Gamma_I(w), and the small
    part of Gamma_{I_w}(w) is contained in Gamma_I(w).  Also returns the
    per-neighbor elementary verdicts.
    """
    if not zd.in_IW(w):
        raise ZipDatumError(f"w = {w!r} is not in ^I W")
    gamma_I = zd.lower_neighbors(zd.I, w)
    I_w = zd.canonical_type(w)
    bounded_all = all(zd.canonical_type(wp) <= I_w for wp in gamma_I)
    gamma_small = [v for v in zd.lower_neighbors(I_w, w) if is_small(zd, v)]
    gamma_I_keys = {v.key for v in gamma_I}
    contained = all(v.key in gamma_I_keys for v in gamma_small)
    verdicts = {wp: decide_smooth(zd, w, wp) for wp in gamma_I}
    return bounded_all and contained, verdicts
