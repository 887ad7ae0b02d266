"""Weyl group arithmetic: composition, length, Bruhat order, parabolic cosets.

Elements are hash-consed per group, keyed by their action: a one-line
permutation tuple for type A systems, an integer matrix on simple-root
coordinates otherwise.  The Bruhat order is computed by the lifting
recursion and memoized on the group; reduced words are chosen greedily
(smallest simple index first) so that all enumerations are reproducible.
"""

from __future__ import annotations

import itertools
import math
from typing import Iterable, Iterator, Sequence

from .rootdata import TYPE_A_GL, CharacterLattice, Root, RootSystem

DEFAULT_BUDGET = math.factorial(10)


class BudgetExceeded(RuntimeError):
    """An enumeration would exceed the configured group-size budget."""


class WeylElement:
    """Immutable group element; compare/hash by the action key."""

    __slots__ = ("group", "key", "_length", "_word", "_inv")

    def __init__(self, group: "WeylGroup", key, length=None):
        self.group = group
        self.key = key
        self._length = length
        self._word = None
        self._inv = None

    # -- group arithmetic ---------------------------------------------------

    def __mul__(self, other: "WeylElement") -> "WeylElement":
        if other.group is not self.group:
            raise ValueError("elements belong to different Weyl groups")
        return self.group._mul(self, other)

    def inverse(self) -> "WeylElement":
        if self._inv is None:
            self._inv = self.group._inverse(self)
        return self._inv

    def apply(self, root: Root) -> Root:
        """Image of a root under the action on the root space."""
        return self.group._apply(self, root)

    def apply_weight(self, lam: Sequence[int], lattice: CharacterLattice | None = None):
        """Action on the character lattice (coordinate permutation in type A)."""
        return self.group._apply_weight(self, lam, lattice)

    # -- length / words -----------------------------------------------------

    @property
    def length(self) -> int:
        if self._length is None:
            self._length = self.group._length(self)
        return self._length

    @property
    def word(self) -> tuple[int, ...]:
        """Canonical reduced word (greedy smallest left-descent first)."""
        if self._word is None:
            w, out = self, []
            while True:
                i = self.group.first_left_descent(w)
                if i is None:
                    break
                out.append(i)
                w = self.group.simple(i) * w
            self._word = tuple(out)
        return self._word

    def one_line(self) -> list[int]:
        """One-line notation [w(1),...,w(n)] for type A elements."""
        if self.group.rs.realization != TYPE_A_GL:
            raise ValueError("one_line only makes sense for type A elements")
        return [v + 1 for v in self.key]

    def __eq__(self, other) -> bool:
        return isinstance(other, WeylElement) and self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    def __repr__(self) -> str:
        if self.group.rs.realization == TYPE_A_GL:
            return "[" + " ".join(str(v + 1) for v in self.key) + "]"
        return "w(" + " ".join(f"s{i}" for i in self.word) + ")" if self.word else "w(e)"


class WeylGroup:
    """The Weyl group of a root system, with memoized order computations."""

    def __init__(self, rs: RootSystem, budget: int = DEFAULT_BUDGET):
        self.rs = rs
        self.budget = budget
        self._elements: dict = {}
        self._bruhat: dict = {}
        self._minimal_reps: dict = {}
        if rs.realization == TYPE_A_GL:
            self.n = rs.ambient_dim
            self.identity = self._intern(tuple(range(self.n)), 0)
        else:
            self.n = rs.rank
            ident = tuple(
                tuple(1 if i == j else 0 for j in range(rs.rank)) for i in range(rs.rank)
            )
            self.identity = self._intern(ident, 0)
        self._simples = {
            k: self._make_simple(k) for k in rs.delta_indices()
        }

    # -- element construction -----------------------------------------------

    def _intern(self, key, length=None) -> WeylElement:
        el = self._elements.get(key)
        if el is None:
            el = WeylElement(self, key, length)
            self._elements[key] = el
        return el

    def _make_simple(self, k: int) -> WeylElement:
        if self.rs.realization == TYPE_A_GL:
            p = list(range(self.n))
            p[k - 1], p[k] = p[k], p[k - 1]
            return self._intern(tuple(p), 1)
        rank = self.rs.rank
        C = self.rs.cartan
        cols = []
        for j in range(rank):
            col = [1 if i == j else 0 for i in range(rank)]
            col[k - 1] -= C[j][k - 1]
            cols.append(col)
        mat = tuple(tuple(cols[j][i] for j in range(rank)) for i in range(rank))
        return self._intern(mat, 1)

    def simple(self, k: int) -> WeylElement:
        """Simple reflection s_k (1-based)."""
        return self._simples[k]

    def from_one_line(self, values: Sequence[int]) -> WeylElement:
        if self.rs.realization != TYPE_A_GL:
            raise ValueError("one-line input is only defined for type A")
        if sorted(values) != list(range(1, self.n + 1)):
            raise ValueError(f"not a permutation of 1..{self.n}: {list(values)}")
        return self._intern(tuple(v - 1 for v in values))

    def from_word(self, word: Iterable[int]) -> WeylElement:
        w = self.identity
        for k in word:
            w = w * self.simple(k)
        return w

    def reflection(self, root: Root) -> WeylElement:
        """The reflection s_alpha for an arbitrary root alpha."""
        if self.rs.realization == TYPE_A_GL:
            i = root.coords.index(1)
            j = root.coords.index(-1)
            p = list(range(self.n))
            p[i], p[j] = p[j], p[i]
            return self._intern(tuple(p))
        rank = self.rs.rank
        C = self.rs.cartan
        mat = [[1 if i == j else 0 for j in range(rank)] for i in range(rank)]
        for j in range(rank):
            # <alpha_j, alpha^vee> via the coroot expansion of alpha
            p = sum(c * C[j][k] for k, c in enumerate(root.coroot_coords))
            for i in range(rank):
                mat[i][j] -= p * root.simple_coords[i]
        return self._intern(tuple(tuple(row) for row in mat))

    # -- primitive operations -----------------------------------------------

    def _mul(self, u: WeylElement, v: WeylElement) -> WeylElement:
        if self.rs.realization == TYPE_A_GL:
            uk, vk = u.key, v.key
            return self._intern(tuple(uk[x] for x in vk))
        a, b = u.key, v.key
        rank = self.rs.rank
        mat = tuple(
            tuple(sum(a[i][k] * b[k][j] for k in range(rank)) for j in range(rank))
            for i in range(rank)
        )
        return self._intern(mat)

    def _inverse(self, w: WeylElement) -> WeylElement:
        if self.rs.realization == TYPE_A_GL:
            p = w.key
            q = [0] * self.n
            for i, v in enumerate(p):
                q[v] = i
            el = self._intern(tuple(q), w._length)
        else:
            el = self._intern(_mat_inverse(w.key), w._length)
        el._inv = w
        return el

    def _apply(self, w: WeylElement, root: Root) -> Root:
        if self.rs.realization == TYPE_A_GL:
            p = w.key
            out = [0] * self.n
            for i, c in enumerate(root.coords):
                if c:
                    out[p[i]] = c
            return self.rs.root_from_coords(tuple(out))
        coords = _mat_vec(w.key, root.simple_coords)
        return self.rs.root_from_coords(coords)

    def _apply_weight(self, w: WeylElement, lam, lattice):
        if self.rs.realization == TYPE_A_GL:
            if len(lam) != self.n:
                raise ValueError("weight has wrong dimension")
            q = w.inverse().key
            return tuple(lam[q[k]] for k in range(self.n))
        if lattice is None:
            raise ValueError("generic elements need an explicit lattice to act on weights")
        out = tuple(lam)
        for k in reversed(w.word):
            out = lattice.reflect(out, self.rs.simple(k))
        return out

    def _length(self, w: WeylElement) -> int:
        if self.rs.realization == TYPE_A_GL:
            p = w.key
            return sum(
                1
                for i in range(self.n)
                for j in range(i + 1, self.n)
                if p[i] > p[j]
            )
        return sum(1 for a in self.rs.positive_roots if not w.apply(a).is_positive)

    # -- descents -----------------------------------------------------------

    def first_left_descent(self, w: WeylElement) -> int | None:
        """Smallest k with l(s_k w) < l(w), or None for the identity."""
        if self.rs.realization == TYPE_A_GL:
            q = w.inverse().key
            for k in range(self.n - 1):
                if q[k] > q[k + 1]:
                    return k + 1
            return None
        winv = w.inverse()
        for k in self.rs.delta_indices():
            if not winv.apply(self.rs.simple(k)).is_positive:
                return k
        return None

    def has_left_descent(self, w: WeylElement, k: int) -> bool:
        if self.rs.realization == TYPE_A_GL:
            q = w.inverse().key
            return q[k - 1] > q[k]
        return not w.inverse().apply(self.rs.simple(k)).is_positive

    def has_right_descent(self, w: WeylElement, k: int) -> bool:
        if self.rs.realization == TYPE_A_GL:
            p = w.key
            return p[k - 1] > p[k]
        return not w.apply(self.rs.simple(k)).is_positive

    # -- Bruhat order ---------------------------------------------------------

    def bruhat_leq(self, v: WeylElement, w: WeylElement) -> bool:
        """Bruhat order via the lifting recursion, memoized.

        Pick a simple s with l(sw) < l(w); then v <= w iff (sv < v and
        sv <= sw) or (sv > v and v <= sw); the base case w = e forces v = e.
        """
        if v.group is not self or w.group is not self:
            raise ValueError("elements belong to a different Weyl group")
        if v.key == w.key:
            return True
        if v.length >= w.length:
            return False
        memo = self._bruhat
        key = (v.key, w.key)
        hit = memo.get(key)
        if hit is not None:
            return hit
        s = self.first_left_descent(w)
        if s is None:
            res = v.key == self.identity.key
        else:
            sref = self.simple(s)
            sw = sref * w
            sv = sref * v
            if self.has_left_descent(v, s):
                res = self.bruhat_leq(sv, sw)
            else:
                res = self.bruhat_leq(v, sw)
        memo[key] = res
        return res

    # -- parabolic machinery ---------------------------------------------------

    def blocks(self, K: frozenset[int] | set[int]) -> list[tuple[int, int]]:
        """Half-open 0-based value intervals of the standard parabolic W_K.

        Only meaningful for type A, where K subset of {1..n-1} joins value i
        with i+1 whenever alpha_i is in K.
        """
        K = set(K)
        out = []
        start = 0
        for i in range(1, self.n):
            if i not in K:
                out.append((start, i))
                start = i
        out.append((start, self.n))
        return out

    def parabolic_order(self, K) -> int:
        if self.rs.realization == TYPE_A_GL:
            return math.prod(math.factorial(hi - lo) for lo, hi in self.blocks(K))
        return sum(1 for _ in self.parabolic_elements(K))

    def parabolic_elements(self, K) -> Iterator[WeylElement]:
        """All of W_K, lazily, identity first; deterministic order."""
        if self.rs.realization == TYPE_A_GL:
            blocks = self.blocks(K)
            pools = [list(itertools.permutations(range(lo, hi))) for lo, hi in blocks]
            for combo in itertools.product(*pools):
                p = []
                for piece in combo:
                    p.extend(piece)
                yield self._intern(tuple(p))
        else:
            gens = [self.simple(k) for k in sorted(K)]
            yield from self._closure(gens)

    def _closure(self, gens) -> Iterator[WeylElement]:
        seen = {self.identity.key}
        frontier = [self.identity]
        yield self.identity
        while frontier:
            nxt = []
            for w in frontier:
                for g in gens:
                    u = w * g
                    if u.key not in seen:
                        if len(seen) >= self.budget:
                            raise BudgetExceeded(
                                f"group enumeration exceeds budget {self.budget}"
                            )
                        seen.add(u.key)
                        nxt.append(u)
                        yield u
            frontier = nxt

    def in_parabolic(self, u: WeylElement, K) -> bool:
        """True iff u lies in W_K (every inversion of u is inside Phi_K+)."""
        if self.rs.realization == TYPE_A_GL:
            block_id = [0] * self.n
            for b, (lo, hi) in enumerate(self.blocks(K)):
                for v in range(lo, hi):
                    block_id[v] = b
            p = u.key
            return all(block_id[p[i]] == block_id[i] for i in range(self.n))
        Kset = frozenset(K)
        for a in self.rs.positive_roots:
            if not u.apply(a).is_positive and not a.support() <= Kset:
                return False
        return True

    def longest_element(self, K) -> WeylElement:
        """The longest element of W_K; identity for K = {}."""
        if self.rs.realization == TYPE_A_GL:
            p = list(range(self.n))
            for lo, hi in self.blocks(K):
                p[lo:hi] = reversed(p[lo:hi])
            return self._intern(tuple(p))
        w = self.identity
        K = sorted(K)
        while True:
            for k in K:
                if not self.has_right_descent(w, k):
                    w = w * self.simple(k)
                    break
            else:
                return w

    def min_coset_rep(self, K, w: WeylElement) -> tuple[WeylElement, WeylElement]:
        """Decompose w = u * w_min with u in W_K and w_min minimal in W_K w."""
        if self.rs.realization == TYPE_A_GL:
            p = w.key
            wmin = [0] * self.n
            for lo, hi in self.blocks(K):
                nxt = lo
                for i in range(self.n):
                    if lo <= p[i] < hi:
                        wmin[i] = nxt
                        nxt += 1
            wmin_el = self._intern(tuple(wmin))
            q = wmin_el.inverse().key
            u = self._intern(tuple(p[q[i]] for i in range(self.n)))
            return u, wmin_el
        wmin = w
        u = self.identity
        K = sorted(K)
        while True:
            for k in K:
                if self.has_left_descent(wmin, k):
                    wmin = self.simple(k) * wmin
                    u = u * self.simple(k)
                    break
            else:
                return u, wmin

    def is_minimal_rep(self, w: WeylElement, K) -> bool:
        """w in ^K W, i.e. w is shortest in W_K w (no left descent inside K)."""
        return all(not self.has_left_descent(w, k) for k in K)

    def minimal_reps(self, K) -> list[WeylElement]:
        """All of ^K W, sorted by (length, canonical word)."""
        key = frozenset(K)
        cached = self._minimal_reps.get(key)
        if cached is not None:
            return cached
        if self.rs.realization == TYPE_A_GL:
            blocks = self.blocks(key)
            count = math.factorial(self.n)
            for lo, hi in blocks:
                count //= math.factorial(hi - lo)
            if count > self.budget:
                raise BudgetExceeded(f"|^K W| = {count} exceeds budget {self.budget}")
            labels = []
            for b, (lo, hi) in enumerate(blocks):
                labels.extend([b] * (hi - lo))
            out = []
            seen = set()
            for arrangement in itertools.permutations(labels):
                if arrangement in seen:
                    continue
                seen.add(arrangement)
                counters = [lo for lo, _ in blocks]
                p = []
                for b in arrangement:
                    p.append(counters[b])
                    counters[b] += 1
                out.append(self._intern(tuple(p)))
        else:
            out = [w for w in self.elements() if self.is_minimal_rep(w, key)]
        out.sort(key=lambda w: (w.length, w.word))
        self._minimal_reps[key] = out
        return out

    # -- enumerations ---------------------------------------------------------

    def order(self) -> int:
        if self.rs.realization == TYPE_A_GL:
            return math.factorial(self.n)
        return sum(1 for _ in self.elements())

    def elements(self) -> Iterator[WeylElement]:
        if self.rs.realization == TYPE_A_GL:
            if math.factorial(self.n) > self.budget:
                raise BudgetExceeded(f"|W| = {self.n}! exceeds budget {self.budget}")
            for p in itertools.permutations(range(self.n)):
                yield self._intern(p)
        else:
            yield from self._closure([self.simple(k) for k in self.rs.delta_indices()])

    def elements_of_length(self, length: int) -> Iterator[WeylElement]:
        """All w with l(w) = length, without enumerating the whole group (type A)."""
        if self.rs.realization == TYPE_A_GL:
            n = self.n
            code = [0] * n

            def rec(i: int, remaining: int) -> Iterator[tuple[int, ...]]:
                if i == n:
                    if remaining == 0:
                        yield tuple(code)
                    return
                cap = n - 1 - i
                for c in range(min(cap, remaining) + 1):
                    code[i] = c
                    yield from rec(i + 1, remaining - c)
                code[i] = 0

            for lehmer in rec(0, length):
                avail = list(range(n))
                p = tuple(avail.pop(c) for c in lehmer)
                yield self._intern(p, length)
        else:
            for w in self.elements():
                if w.length == length:
                    yield w


def _mat_vec(m, v):
    rank = len(v)
    return tuple(sum(m[i][k] * v[k] for k in range(rank)) for i in range(rank))


def _mat_inverse(m):
    """Inverse of a Weyl action matrix; exact, and integral because det = +-1."""
    from fractions import Fraction

    rank = len(m)
    aug = [
        [Fraction(x) for x in m[i]] + [Fraction(1 if j == i else 0) for j in range(rank)]
        for i in range(rank)
    ]
    for col in range(rank):
        piv = next(r for r in range(col, rank) if aug[r][col])
        aug[col], aug[piv] = aug[piv], aug[col]
        d = aug[col][col]
        aug[col] = [x / d for x in aug[col]]
        for r in range(rank):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[col])]
    out = []
    for row in aug:
        ints = []
        for x in row[rank:]:
            assert x.denominator == 1, "Weyl action matrices are unimodular"
            ints.append(int(x))
        out.append(tuple(ints))
    return tuple(out)
