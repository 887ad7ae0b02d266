"""Finite reduced root systems, character lattices and compact/non-compact splits.

Two realizations are supported.  ``TYPE_A_GL`` keeps roots in the ambient
lattice Z^n (so e_i - e_j is stored with a literal +1/-1 pair), which matches
the coordinate conventions of the GL_n catalogs.  ``GENERIC`` stores roots in
simple-root coordinates and is driven entirely by a user-supplied Cartan
matrix.  Everything is exact integer arithmetic; no floats anywhere.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

TYPE_A_GL = "TYPE_A_GL"
GENERIC = "GENERIC"

_MAX_ROOTS = 10_000


class RootDataError(ValueError):
    """Invalid root datum input (bad Cartan matrix, inconsistent lattice...)."""


@dataclass(frozen=True)
class Root:
    """A root as an exact integer vector.

    ``coords`` is realization dependent (ambient Z^n for type A, simple-root
    basis otherwise); ``simple_coords`` and ``coroot_coords`` are the
    expansions of the root / its coroot in the simple (co)root basis and are
    realization independent.
    """

    coords: tuple[int, ...]
    simple_coords: tuple[int, ...]
    coroot_coords: tuple[int, ...]

    def __post_init__(self) -> None:
        if not any(self.coords):
            raise RootDataError("the zero vector is not a root")

    @property
    def sign(self) -> int:
        for c in self.coords:
            if c:
                return 1 if c > 0 else -1
        raise AssertionError("unreachable: zero root")

    @property
    def is_positive(self) -> bool:
        return self.sign > 0

    def __neg__(self) -> "Root":
        return Root(
            tuple(-c for c in self.coords),
            tuple(-c for c in self.simple_coords),
            tuple(-c for c in self.coroot_coords),
        )

    def support(self) -> frozenset[int]:
        """1-based indices of simple roots appearing in the expansion."""
        return frozenset(k + 1 for k, c in enumerate(self.simple_coords) if c)

    def __repr__(self) -> str:
        return f"Root{self.coords}"


@dataclass(frozen=True)
class CharacterLattice:
    """Character lattice X*(T): a free Z-module with coroot pairings.

    ``coroot_pairing[d][k]`` is <basis_d, alpha_k^vee> and ``root_embedding[k]``
    expresses the simple root alpha_k as a lattice vector; composing the two
    must reproduce the Cartan pairing.
    """

    dim: int
    coroot_pairing: tuple[tuple[int, ...], ...]
    root_embedding: tuple[tuple[int, ...], ...]

    def pairing_simple(self, lam: Sequence[int], k: int) -> int:
        """<lam, alpha_k^vee> for the k-th simple coroot (1-based k)."""
        col = k - 1
        return sum(lam[d] * self.coroot_pairing[d][col] for d in range(self.dim))

    def pairing(self, lam, root: Root):
        """<lam, alpha^vee> for an arbitrary root, via its coroot expansion."""
        return sum(
            c * self.pairing_simple(lam, k + 1)
            for k, c in enumerate(root.coroot_coords)
            if c
        )

    def embed_root(self, root: Root) -> tuple:
        """The root as a lattice vector (needed for reflections on X*(T))."""
        vec = [0] * self.dim
        for k, c in enumerate(root.simple_coords):
            if c:
                emb = self.root_embedding[k]
                for d in range(self.dim):
                    vec[d] += c * emb[d]
        return tuple(vec)

    def reflect(self, lam, root: Root) -> tuple:
        """s_alpha(lam) = lam - <lam, alpha^vee> alpha."""
        p = self.pairing(lam, root)
        alpha = self.embed_root(root)
        return tuple(lam[d] - p * alpha[d] for d in range(self.dim))


@dataclass(frozen=True)
class RootSystem:
    rank: int
    realization: str
    ambient_dim: int
    simple_roots: tuple[Root, ...]
    positive_roots: tuple[Root, ...]
    cartan: tuple[tuple[int, ...], ...]  # cartan[i][j] = <alpha_i, alpha_j^vee>
    _by_coords: dict = field(repr=False, hash=False, compare=False, default_factory=dict)

    def __post_init__(self) -> None:
        for r in self.positive_roots:
            self._by_coords[r.coords] = r
            self._by_coords[(-r).coords] = -r

    @property
    def roots(self) -> list[Root]:
        return list(self.positive_roots) + [-r for r in self.positive_roots]

    def root_from_coords(self, coords: Sequence[int]) -> Root:
        try:
            return self._by_coords[tuple(coords)]
        except KeyError:
            raise RootDataError(f"{tuple(coords)} is not a root") from None

    def is_root(self, coords: Sequence[int]) -> bool:
        return tuple(coords) in self._by_coords

    def delta_indices(self) -> range:
        """1-based simple root indices."""
        return range(1, self.rank + 1)

    def simple(self, k: int) -> Root:
        """The simple root alpha_k (1-based)."""
        return self.simple_roots[k - 1]


def is_compact(rs: RootSystem, root: Root, I: frozenset[int] | set[int]) -> bool:
    """True iff the root lies in Phi_I, i.e. its simple support is inside I."""
    if root.coords not in rs._by_coords:
        raise RootDataError(f"{root.coords} is not a root of this system")
    return root.support() <= frozenset(I)


def pairing(lattice: CharacterLattice, lam, root: Root):
    return lattice.pairing(lam, root)


# ---------------------------------------------------------------------------
# type A_{n-1} realized in Z^n (GL_n)

def _gl_root(n: int, i: int, j: int) -> Root:
    """e_i - e_j, 0-based i != j."""
    coords = [0] * n
    coords[i], coords[j] = 1, -1
    lo, hi = (i, j) if i < j else (j, i)
    sgn = 1 if i < j else -1
    simple = [0] * (n - 1)
    for k in range(lo, hi):
        simple[k] = sgn
    return Root(tuple(coords), tuple(simple), tuple(simple))


def build_gl(n: int, r: int):
    """Root datum of GL_n with parabolic type I = Delta \\ {alpha_r}.

    Returns ``(RootSystem, CharacterLattice, I)`` with X*(T) = Z^n and the
    simple roots alpha_i = e_i - e_{i+1}.

    >>> rs, lat, I = build_gl(4, 2)
    >>> len(rs.positive_roots), sorted(I)
    (6, [1, 3])
    """
    if n < 2:
        raise RootDataError(f"need n >= 2, got n={n}")
    if not 1 <= r < n:
        raise RootDataError(f"need 1 <= r < n, got r={r}, n={n}")
    simples = tuple(_gl_root(n, i, i + 1) for i in range(n - 1))
    positives = tuple(_gl_root(n, i, j) for i in range(n) for j in range(i + 1, n))
    cartan = tuple(
        tuple(2 if i == j else (-1 if abs(i - j) == 1 else 0) for j in range(n - 1))
        for i in range(n - 1)
    )
    pair = tuple(
        tuple((1 if d == k else 0) - (1 if d == k + 1 else 0) for k in range(n - 1))
        for d in range(n)
    )
    emb = tuple(
        tuple((1 if d == k else 0) - (1 if d == k + 1 else 0) for d in range(n))
        for k in range(n - 1)
    )
    lattice = CharacterLattice(n, pair, emb)
    _check_lattice(cartan, lattice)
    rs = RootSystem(n - 1, TYPE_A_GL, n, simples, positives, cartan)
    I = frozenset(k for k in range(1, n) if k != r)
    return rs, lattice, I


# ---------------------------------------------------------------------------
# generic finite-type systems from a Cartan matrix

def _validate_cartan(cartan: Sequence[Sequence[int]]) -> tuple[tuple[int, ...], ...]:
    m = len(cartan)
    if m == 0 or any(len(row) != m for row in cartan):
        raise RootDataError("Cartan matrix must be square and nonempty")
    C = tuple(tuple(int(x) for x in row) for row in cartan)
    for i in range(m):
        if C[i][i] != 2:
            raise RootDataError("Cartan matrix needs 2 on the diagonal")
        for j in range(m):
            if i != j:
                if C[i][j] > 0:
                    raise RootDataError("off-diagonal Cartan entries must be <= 0")
                if (C[i][j] == 0) != (C[j][i] == 0):
                    raise RootDataError("Cartan zero pattern must be symmetric")
    # Symmetrize: find d_i > 0 with d_i C[i][j] = d_j C[j][i], then demand
    # positive definiteness (finite type) via leading principal minors.
    d = [Fraction(0)] * m
    for start in range(m):
        if d[start]:
            continue
        d[start] = Fraction(1)
        stack = [start]
        while stack:
            i = stack.pop()
            for j in range(m):
                if C[i][j] and i != j:
                    dj = d[i] * C[i][j] / C[j][i]
                    if d[j] == 0:
                        d[j] = dj
                        stack.append(j)
                    elif d[j] != dj:
                        raise RootDataError("Cartan matrix is not symmetrizable")
    S = [[d[i] * C[i][j] for j in range(m)] for i in range(m)]
    for k in range(1, m + 1):
        if _det_fraction([row[:k] for row in S[:k]]) <= 0:
            raise RootDataError("Cartan matrix is not of finite type")
    return C


def _det_fraction(mat) -> Fraction:
    m = [list(map(Fraction, row)) for row in mat]
    n = len(m)
    det = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col]), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            det = -det
        det *= m[col][col]
        inv = 1 / m[col][col]
        for r in range(col + 1, n):
            f = m[r][col] * inv
            for c in range(col, n):
                m[r][c] -= f * m[col][c]
    return det


def _generate_positive_roots(C) -> list[Root]:
    rank = len(C)
    simples = {}
    for k in range(rank):
        e = tuple(1 if i == k else 0 for i in range(rank))
        simples[e] = Root(e, e, e)
    # close under simple reflections, tracking root and coroot coordinates
    seen = dict(simples)
    frontier = list(simples.values())
    while frontier:
        nxt = []
        for root in frontier:
            for j in range(rank):
                p = sum(c * C[k][j] for k, c in enumerate(root.simple_coords))
                new = list(root.simple_coords)
                new[j] -= p
                key = tuple(new)
                if key in seen:
                    continue
                q = sum(c * C[j][k] for k, c in enumerate(root.coroot_coords))
                cnew = list(root.coroot_coords)
                cnew[j] -= q
                r = Root(key, key, tuple(cnew))
                seen[key] = r
                nxt.append(r)
                if len(seen) > _MAX_ROOTS:
                    raise RootDataError("root generation exceeded budget")
        frontier = nxt
    return sorted(
        (r for r in seen.values() if r.is_positive),
        key=lambda r: (sum(r.simple_coords), r.simple_coords),
    )


def _check_lattice(cartan, lattice: CharacterLattice) -> None:
    rank = len(cartan)
    for i in range(rank):
        for j in range(rank):
            got = sum(
                lattice.root_embedding[i][d] * lattice.coroot_pairing[d][j]
                for d in range(lattice.dim)
            )
            if got != cartan[i][j]:
                raise RootDataError(
                    "lattice is inconsistent: root_embedding o coroot_pairing "
                    f"gives {got} at ({i + 1},{j + 1}), Cartan says {cartan[i][j]}"
                )


def build_generic(cartan: Sequence[Sequence[int]], lattice_spec: dict | None = None):
    """Root system from a finite-type Cartan matrix, plus a character lattice.

    ``lattice_spec`` is ``{"dim": d, "pairing": [[...]], "root_embedding":
    [[...]]}``; when omitted the root lattice itself is used.

    >>> rs, _ = build_generic([[2, -1], [-1, 2]])
    >>> len(rs.positive_roots)
    3
    """
    C = _validate_cartan(cartan)
    rank = len(C)
    positives = _generate_positive_roots(C)
    by_coords = {r.simple_coords: r for r in positives}
    simples = tuple(
        by_coords[tuple(1 if i == k else 0 for i in range(rank))] for k in range(rank)
    )
    if lattice_spec is None:
        pair = tuple(tuple(C[d]) for d in range(rank))
        emb = tuple(
            tuple(1 if d == k else 0 for d in range(rank)) for k in range(rank)
        )
        lattice = CharacterLattice(rank, pair, emb)
    else:
        lattice = CharacterLattice(
            int(lattice_spec["dim"]),
            tuple(tuple(int(x) for x in row) for row in lattice_spec["pairing"]),
            tuple(tuple(int(x) for x in row) for row in lattice_spec["root_embedding"]),
        )
        if len(lattice.coroot_pairing) != lattice.dim:
            raise RootDataError("coroot_pairing must have `dim` rows")
        if len(lattice.root_embedding) != rank:
            raise RootDataError("root_embedding must have `rank` rows")
    _check_lattice(C, lattice)
    rs = RootSystem(rank, GENERIC, rank, simples, tuple(positives), C)
    return rs, lattice


def load_generic_json(doc: str | dict):
    """Build a generic system from the JSON document format.

    ``{"cartan": [[...]], "lattice": {"dim": d, "pairing": [[...]],
    "root_embedding": [[...]]}}`` -- the lattice block is optional.
    """
    if isinstance(doc, str):
        doc = json.loads(doc)
    return build_generic(doc["cartan"], doc.get("lattice"))


if __name__ == "__main__":
    import doctest

    doctest.testmod()
