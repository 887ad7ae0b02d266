"""Small finite fields F_{p^k} (k <= 3) and exact linear algebra over them.

Field elements are integers 0..q-1 encoding polynomials over F_p in base-p
digits (little endian).  Extensions are table-driven, so they stay small by
construction; prime fields work for any p (arithmetic mod p, no tables).
Subspaces are kept in row-reduced echelon form, which is canonical, so
equality of subspaces is tuple equality.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

_TABLE_LIMIT = 2048


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


class Fq:
    """The finite field with q = p^k elements."""

    def __init__(self, p: int, k: int = 1, modulus: Sequence[int] | None = None):
        if not _is_prime(p):
            raise ValueError(f"{p} is not prime")
        if not 1 <= k <= 3:
            raise ValueError("extension degree k must be 1, 2 or 3")
        self.p = p
        self.k = k
        self.q = p**k
        if k == 1:
            self.modulus = (0, 1) if modulus is None else tuple(modulus)
            self._mul_table = None
            self._inv_table = None
            self._frob_table = None
        else:
            if self.q > _TABLE_LIMIT:
                raise ValueError(f"extension field with q = {self.q} exceeds table limit")
            if modulus is None:
                modulus = self._find_irreducible()
            self.modulus = tuple(int(c) % p for c in modulus)
            if len(self.modulus) != k + 1 or self.modulus[-1] != 1:
                raise ValueError("modulus must be monic of degree k")
            if self._has_root(self.modulus):
                raise ValueError("modulus is reducible (has a root in F_p)")
            self._build_tables()
        self.zero = 0
        self.one = 1

    # -- construction helpers -------------------------------------------------

    def _has_root(self, poly: Sequence[int]) -> bool:
        # degree <= 3: irreducible iff no root in F_p
        for x in range(self.p):
            acc = 0
            for c in reversed(poly):
                acc = (acc * x + c) % self.p
            if acc == 0:
                return True
        return False

    def _find_irreducible(self) -> tuple[int, ...]:
        for tail in range(self.p**self.k):
            digits = []
            t = tail
            for _ in range(self.k):
                digits.append(t % self.p)
                t //= self.p
            poly = tuple(digits) + (1,)
            if not self._has_root(poly):
                return poly
        raise AssertionError("no irreducible polynomial found")

    def _poly_of(self, a: int) -> list[int]:
        out = []
        for _ in range(self.k):
            out.append(a % self.p)
            a //= self.p
        return out

    def _of_poly(self, coeffs: Sequence[int]) -> int:
        acc = 0
        for c in reversed(coeffs):
            acc = acc * self.p + (c % self.p)
        return acc

    def _poly_mul_mod(self, a: Sequence[int], b: Sequence[int]) -> list[int]:
        p, k = self.p, self.k
        prod = [0] * (2 * k - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    prod[i + j] = (prod[i + j] + ai * bj) % p
        for d in range(2 * k - 2, k - 1, -1):
            c = prod[d]
            if c:
                prod[d] = 0
                for j in range(k):
                    prod[d - k + j] = (prod[d - k + j] - c * self.modulus[j]) % p
        return prod[:k]

    def _build_tables(self) -> None:
        q = self.q
        polys = [self._poly_of(a) for a in range(q)]
        mul = [[0] * q for _ in range(q)]
        for a in range(q):
            for b in range(a, q):
                v = self._of_poly(self._poly_mul_mod(polys[a], polys[b]))
                mul[a][b] = v
                mul[b][a] = v
        self._mul_table = mul
        inv = [0] * q
        for a in range(1, q):
            for b in range(1, q):
                if mul[a][b] == 1:
                    inv[a] = b
                    break
            else:
                raise AssertionError("modulus is not irreducible")
        self._inv_table = inv
        frob = [0] * q
        for a in range(q):
            acc = 1
            for _ in range(self.p):
                acc = mul[acc][a]
            frob[a] = acc
        self._frob_table = frob
        fixed = [a for a in range(q) if frob[a] == a]
        assert len(fixed) == self.p, "Frobenius must fix exactly F_p"
        cur = list(range(q))
        for _ in range(self.k):
            cur = [frob[a] for a in cur]
        assert cur == list(range(q)), "sigma^k must be the identity"

    # -- arithmetic -----------------------------------------------------------

    def add(self, a: int, b: int) -> int:
        if self.k == 1:
            return (a + b) % self.p
        p = self.p
        out = 0
        mult = 1
        for _ in range(self.k):
            out += ((a + b) % p) * mult
            a //= p
            b //= p
            mult *= p
        return out

    def neg(self, a: int) -> int:
        if self.k == 1:
            return (-a) % self.p
        p = self.p
        out = 0
        mult = 1
        for _ in range(self.k):
            out += ((-a) % p) * mult
            a //= p
            mult *= p
        return out

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.k == 1:
            return (a * b) % self.p
        return self._mul_table[a][b]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of 0")
        if self.k == 1:
            return pow(a, self.p - 2, self.p)
        return self._inv_table[a]

    def frobenius(self, a: int) -> int:
        """x |-> x^p, the arithmetic Frobenius generator."""
        if self.k == 1:
            return a
        return self._frob_table[a]

    def frobenius_pow(self, a: int, m: int) -> int:
        """x |-> x^{p^m}; only m mod k matters."""
        if self.k == 1:
            return a
        for _ in range(m % self.k):
            a = self._frob_table[a]
        return a

    def elements(self) -> range:
        return range(self.q)

    def __repr__(self) -> str:
        return f"Fq(p={self.p}, k={self.k})"


class RationalField:
    """The rationals with the same little protocol as Fq (for exact checks)."""

    zero = Fraction(0)
    one = Fraction(1)

    @staticmethod
    def add(a, b):
        return a + b

    @staticmethod
    def sub(a, b):
        return a - b

    @staticmethod
    def neg(a):
        return -a

    @staticmethod
    def mul(a, b):
        return a * b

    @staticmethod
    def inv(a):
        if a == 0:
            raise ZeroDivisionError("inverse of 0")
        return 1 / Fraction(a)

    @staticmethod
    def frobenius(a):
        return a

    @staticmethod
    def frobenius_pow(a, m):
        return a


QQ = RationalField()


# ---------------------------------------------------------------------------
# matrices (tuples of row tuples) and canonical subspaces

Matrix = tuple


def mat_identity(F, n: int) -> Matrix:
    return tuple(tuple(F.one if i == j else F.zero for j in range(n)) for i in range(n))


def mat_mul(F, A: Matrix, B: Matrix) -> Matrix:
    inner = len(B)
    cols = len(B[0])
    out = []
    for row in A:
        new = []
        for j in range(cols):
            acc = F.zero
            for k in range(inner):
                if row[k] != F.zero and B[k][j] != F.zero:
                    acc = F.add(acc, F.mul(row[k], B[k][j]))
            new.append(acc)
        out.append(tuple(new))
    return tuple(out)


def mat_vec(F, A: Matrix, v: Sequence) -> tuple:
    return tuple(
        _dot(F, row, v)
        for row in A
    )


def _dot(F, row, v):
    acc = F.zero
    for a, b in zip(row, v):
        if a != F.zero and b != F.zero:
            acc = F.add(acc, F.mul(a, b))
    return acc


def mat_transpose(A: Matrix) -> Matrix:
    return tuple(zip(*A))


def rref(F, rows: Iterable[Sequence]) -> tuple:
    """Canonical row-reduced echelon form; zero rows dropped."""
    work = [list(r) for r in rows]
    ncols = len(work[0]) if work else 0
    out = []
    col = 0
    while work and col < ncols:
        piv = next((i for i, r in enumerate(work) if r[col] != F.zero), None)
        if piv is None:
            col += 1
            continue
        row = work.pop(piv)
        inv = F.inv(row[col])
        row = [F.mul(inv, x) for x in row]
        for r in work:
            if r[col] != F.zero:
                f = r[col]
                for j in range(ncols):
                    r[j] = F.sub(r[j], F.mul(f, row[j]))
        for r in out:
            if r[col] != F.zero:
                f = r[col]
                for j in range(ncols):
                    r[j] = F.sub(r[j], F.mul(f, row[j]))
        out.append(row)
        col += 1
    out = [tuple(r) for r in out if any(x != F.zero for x in r)]
    out.sort(key=lambda r: next(j for j, x in enumerate(r) if x != F.zero))
    return tuple(out)


def rank(F, A: Matrix) -> int:
    return len(rref(F, A))


def mat_inv(F, A: Matrix) -> Matrix:
    n = len(A)
    work = [list(A[i]) + [F.one if j == i else F.zero for j in range(n)] for i in range(n)]
    for col in range(n):
        piv = next((r for r in range(col, n) if work[r][col] != F.zero), None)
        if piv is None:
            raise ZeroDivisionError("matrix is singular")
        work[col], work[piv] = work[piv], work[col]
        inv = F.inv(work[col][col])
        work[col] = [F.mul(inv, x) for x in work[col]]
        for r in range(n):
            if r != col and work[r][col] != F.zero:
                f = work[r][col]
                work[r] = [F.sub(a, F.mul(f, b)) for a, b in zip(work[r], work[col])]
    return tuple(tuple(row[n:]) for row in work)


def det(F, A: Matrix):
    n = len(A)
    work = [list(r) for r in A]
    d = F.one
    for col in range(n):
        piv = next((r for r in range(col, n) if work[r][col] != F.zero), None)
        if piv is None:
            return F.zero
        if piv != col:
            work[col], work[piv] = work[piv], work[col]
            d = F.neg(d)
        d = F.mul(d, work[col][col])
        inv = F.inv(work[col][col])
        for r in range(col + 1, n):
            if work[r][col] != F.zero:
                f = F.mul(work[r][col], inv)
                for j in range(col, n):
                    work[r][j] = F.sub(work[r][j], F.mul(f, work[col][j]))
    return d


def kernel_basis(F, A: Matrix, ncols: int | None = None) -> list[tuple]:
    """Basis of {x : A x = 0}."""
    if not A:
        n = ncols if ncols is not None else 0
        return [tuple(F.one if i == j else F.zero for j in range(n)) for i in range(n)]
    n = len(A[0])
    red = rref(F, A)
    pivots = [next(j for j, x in enumerate(r) if x != F.zero) for r in red]
    free = [j for j in range(n) if j not in pivots]
    basis = []
    for fc in free:
        vec = [F.zero] * n
        vec[fc] = F.one
        for i, pc in enumerate(pivots):
            vec[pc] = F.neg(red[i][fc])
        basis.append(tuple(vec))
    return basis


@dataclass(frozen=True)
class FqSubspace:
    """Subspace of F_q^n in canonical echelon form."""

    field: Fq
    n: int
    rows: tuple

    @classmethod
    def from_vectors(cls, F, n: int, vectors: Iterable[Sequence]) -> "FqSubspace":
        vecs = [tuple(v) for v in vectors]
        return cls(F, n, rref(F, vecs) if vecs else ())

    @classmethod
    def zero(cls, F, n: int) -> "FqSubspace":
        return cls(F, n, ())

    @classmethod
    def full(cls, F, n: int) -> "FqSubspace":
        return cls(F, n, mat_identity(F, n))

    @property
    def dim(self) -> int:
        return len(self.rows)

    def contains(self, vec: Sequence) -> bool:
        F = self.field
        v = list(vec)
        for row in self.rows:
            piv = next(j for j, x in enumerate(row) if x != F.zero)
            if v[piv] != F.zero:
                f = v[piv]
                v = [F.sub(a, F.mul(f, b)) for a, b in zip(v, row)]
        return all(x == F.zero for x in v)

    def __le__(self, other: "FqSubspace") -> bool:
        return all(other.contains(r) for r in self.rows)

    def sum(self, other: "FqSubspace") -> "FqSubspace":
        return FqSubspace.from_vectors(self.field, self.n, self.rows + other.rows)

    def intersection_dim(self, other: "FqSubspace") -> int:
        return self.dim + other.dim - self.sum(other).dim

    def map_semilinear(self, A: Matrix, frob_m: int) -> "FqSubspace":
        """Image under v |-> A sigma^m(v)."""
        F = self.field
        imgs = [
            mat_vec(F, A, [F.frobenius_pow(x, frob_m) for x in row])
            for row in self.rows
        ]
        return FqSubspace.from_vectors(F, self.n, imgs)

    def preimage(self, A: Matrix) -> "FqSubspace":
        """{x : A x in self}."""
        F = self.field
        n = self.n
        reducer = []
        for k in range(n):
            e = [F.zero] * n
            e[k] = F.one
            v = list(e)
            for row in self.rows:
                piv = next(j for j, x in enumerate(row) if x != F.zero)
                if v[piv] != F.zero:
                    f = v[piv]
                    v = [F.sub(a, F.mul(f, b)) for a, b in zip(v, row)]
            reducer.append(v)
        R = mat_transpose(tuple(tuple(r) for r in reducer))  # y |-> y mod self
        RA = mat_mul(F, R, A)
        return FqSubspace.from_vectors(F, n, kernel_basis(F, RA, n))

    def apply_frobenius(self, m: int) -> "FqSubspace":
        F = self.field
        return FqSubspace.from_vectors(
            F, self.n, [[F.frobenius_pow(x, m) for x in row] for row in self.rows]
        )


def enumerate_gl(F, n: int) -> Iterator[Matrix]:
    """All invertible n x n matrices over F, by extending independent rows."""
    vectors = list(_all_vectors(F, n))

    def rec(rows: list, space: FqSubspace):
        if len(rows) == n:
            yield tuple(rows)
            return
        for v in vectors:
            if not space.contains(v):
                yield from rec(rows + [v], space.sum(FqSubspace.from_vectors(F, n, [v])))

    yield from rec([], FqSubspace.zero(F, n))


def _all_vectors(F, n: int) -> Iterator[tuple]:
    if n == 0:
        yield ()
        return
    for rest in _all_vectors(F, n - 1):
        for x in F.elements():
            yield (x,) + rest


def gl_order(q: int, n: int) -> int:
    out = 1
    for i in range(n):
        out *= q**n - q**i
    return out
