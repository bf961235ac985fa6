"""Exact linear algebra over GF(2) and field arithmetic in GF(2^m).

Bit vectors are plain Python ints: bit i holds coordinate i+1, so the
vector (1,0,0) is 0b001 = 1 and (0,1,1) is 0b110 = 6.  Matrices act on
the right of row vectors, x |-> x*M, and row i of a matrix is itself an
int in the same encoding.

Field elements of GF(2^m) are ints with the "ascending" encoding: bit i
is the coefficient of a^i, where a is a root of the modulus polynomial.
The modulus is an int too (bit i = coefficient of x^i), e.g. 0b1011 is
x^3 + x + 1.
"""

from __future__ import annotations

import itertools
from typing import Iterable, Iterator, Sequence


def dot(a: int, b: int) -> int:
    """Scalar product of two bit vectors over F_2 (parity of a & b)."""
    return (a & b).bit_count() & 1


def vec_to_str(v: int, width: int) -> str:
    """Render a vector as '0'/'1' characters in coordinate order."""
    return "".join("1" if (v >> i) & 1 else "0" for i in range(width))


def vec_from_str(s: str) -> int:
    """Parse a '0'/'1' coordinate string (inverse of vec_to_str)."""
    v = 0
    for i, c in enumerate(s):
        if c == "1":
            v |= 1 << i
        elif c != "0":
            raise ValueError(f"invalid bit character {c!r}")
    return v


def vec_to_tuple(v: int, width: int) -> tuple[int, ...]:
    return tuple((v >> i) & 1 for i in range(width))


def vec_from_tuple(bits: Iterable[int]) -> int:
    v = 0
    for i, b in enumerate(bits):
        if b:
            v |= 1 << i
    return v


class SingularMatrixError(ValueError):
    """Raised when an inverse of a singular matrix is requested."""

    def __init__(self, rank: int, size: int):
        self.rank = rank
        self.size = size
        super().__init__(f"matrix is singular: rank {rank} < {size}")


class BinMatrix:
    """A square matrix over F_2, stored as one int per row.

    Invertibility and the inverse are computed on demand by Gaussian
    elimination and cached; instances are immutable.
    """

    __slots__ = ("rows", "size", "_rank", "_inverse")

    def __init__(self, rows: Sequence[int]):
        size = len(rows)
        mask = (1 << size) - 1
        for r in rows:
            if r < 0 or r > mask:
                raise ValueError(f"row 0b{r:b} does not fit in width {size}")
        self.rows: tuple[int, ...] = tuple(rows)
        self.size = size
        self._rank: int | None = None
        self._inverse: BinMatrix | None = None

    @classmethod
    def identity(cls, size: int) -> BinMatrix:
        return cls([1 << i for i in range(size)])

    @classmethod
    def from_text(cls, text: str) -> BinMatrix:
        """Parse the one-row-per-line '0'/'1' matrix format."""
        rows = [vec_from_str(line.strip()) for line in text.strip().splitlines()]
        widths = {len(line.strip()) for line in text.strip().splitlines()}
        if widths != {len(rows)}:
            raise ValueError("matrix text is not square")
        return cls(rows)

    def to_text(self) -> str:
        return "\n".join(vec_to_str(r, self.size) for r in self.rows)

    def apply(self, x: int) -> int:
        """Row vector times matrix: XOR of the rows selected by x's bits."""
        if x < 0 or x >> self.size:
            raise ValueError(f"vector 0b{x:b} does not fit in width {self.size}")
        out = 0
        rows = self.rows
        while x:
            i = (x & -x).bit_length() - 1
            out ^= rows[i]
            x &= x - 1
        return out

    def __matmul__(self, other: BinMatrix) -> BinMatrix:
        if self.size != other.size:
            raise ValueError("matrix size mismatch")
        return BinMatrix([other.apply(r) for r in self.rows])

    def transpose(self) -> BinMatrix:
        n = self.size
        return BinMatrix(
            [vec_from_tuple((self.rows[i] >> j) & 1 for i in range(n)) for j in range(n)]
        )

    def _eliminate(self) -> tuple[int, list[int]]:
        """Gauss-Jordan on [self | I]; returns (rank, reduced augmented rows)."""
        n = self.size
        aug = [self.rows[i] | (1 << (n + i)) for i in range(n)]
        rank = 0
        for col in range(n):
            pivot = next((r for r in range(rank, n) if (aug[r] >> col) & 1), None)
            if pivot is None:
                continue
            aug[rank], aug[pivot] = aug[pivot], aug[rank]
            for r in range(n):
                if r != rank and (aug[r] >> col) & 1:
                    aug[r] ^= aug[rank]
            rank += 1
        return rank, aug

    def rank(self) -> int:
        if self._rank is None:
            self._rank, _ = self._eliminate()
        return self._rank

    def is_invertible(self) -> bool:
        return self.rank() == self.size

    def inverse(self) -> BinMatrix:
        if self._inverse is None:
            rank, aug = self._eliminate()
            self._rank = rank
            if rank != self.size:
                raise SingularMatrixError(rank, self.size)
            n = self.size
            mask = (1 << n) - 1
            # After Gauss-Jordan the left block is I, so row i of the right
            # block is row i of the inverse.
            self._inverse = BinMatrix([(aug[i] >> n) & mask for i in range(n)])
            self._inverse._inverse = self
        return self._inverse

    def __eq__(self, other: object) -> bool:
        return isinstance(other, BinMatrix) and self.rows == other.rows

    def __hash__(self) -> int:
        return hash(self.rows)

    def __repr__(self) -> str:
        return f"BinMatrix({list(self.rows)!r})"


def mat_vec_mul(x: int, m: BinMatrix) -> int:
    """x * M in the row-vector convention."""
    return m.apply(x)


def mat_inverse(m: BinMatrix) -> BinMatrix:
    return m.inverse()


# ---------------------------------------------------------------------------
# Subspaces and cosets of (F_2)^d
# ---------------------------------------------------------------------------


def span_basis(vectors: Iterable[int]) -> tuple[int, ...]:
    """Reduced row-echelon basis of the F_2-span of the given vectors.

    Basis rows are returned with strictly decreasing leading bits, and each
    leading bit occurs in exactly one row, so equal spans give equal tuples.
    """
    basis: list[int] = []  # kept sorted by leading bit, descending
    for v in vectors:
        for b in basis:
            if v ^ b < v:
                v ^= b
        if v:
            basis.append(v)
            basis.sort(reverse=True)
    # back-substitute to reduced form
    for i in range(len(basis)):
        for j in range(i):
            if basis[j] ^ basis[i] < basis[j]:
                basis[j] ^= basis[i]
    return tuple(basis)


def span_contains(basis: Sequence[int], v: int) -> bool:
    for b in basis:
        if v ^ b < v:
            v ^= b
    return v == 0


def span_reduce(basis: Sequence[int], v: int) -> int:
    """Minimal representative of v modulo the span of an echelon basis."""
    for b in basis:
        if v ^ b < v:
            v ^= b
    return v


class Subspace:
    """A linear subspace of (F_2)^width, canonicalized by its echelon basis."""

    __slots__ = ("basis", "width")

    def __init__(self, vectors: Iterable[int], width: int):
        self.basis = span_basis(vectors)
        self.width = width

    @property
    def dim(self) -> int:
        return len(self.basis)

    def __len__(self) -> int:
        return 1 << self.dim

    def __contains__(self, v: int) -> bool:
        return span_contains(self.basis, v)

    def elements(self) -> Iterator[int]:
        for picks in itertools.product((0, 1), repeat=self.dim):
            v = 0
            for take, b in zip(picks, self.basis):
                if take:
                    v ^= b
            yield v

    def orthogonal_complement(self) -> Subspace:
        """All v with dot(v, b) = 0 for every basis vector b."""
        perp = [v for v in range(1 << self.width) if all(dot(v, b) == 0 for b in self.basis)]
        return Subspace(perp, self.width)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Subspace)
            and self.width == other.width
            and self.basis == other.basis
        )

    def __hash__(self) -> int:
        return hash((self.width, self.basis))

    def __repr__(self) -> str:
        return f"Subspace(dim={self.dim}, basis={list(self.basis)})"


class AffineSubspace:
    """A coset base + W of a linear subspace W, stored in canonical form.

    The stored base point is the minimal element of the coset, so two
    AffineSubspace values compare equal exactly when they are the same
    point set.
    """

    __slots__ = ("base", "space")

    def __init__(self, base: int, space: Subspace):
        self.space = space
        self.base = span_reduce(space.basis, base)

    @property
    def dim(self) -> int:
        return self.space.dim

    def __len__(self) -> int:
        return len(self.space)

    def __contains__(self, v: int) -> bool:
        return (v ^ self.base) in self.space

    def elements(self) -> Iterator[int]:
        for w in self.space.elements():
            yield w ^ self.base

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, AffineSubspace)
            and self.base == other.base
            and self.space == other.space
        )

    def __hash__(self) -> int:
        return hash((self.base, self.space))

    def __repr__(self) -> str:
        return f"AffineSubspace(base={self.base}, dim={self.dim})"


# ---------------------------------------------------------------------------
# GF(2^m)
# ---------------------------------------------------------------------------


def _poly_degree(p: int) -> int:
    return p.bit_length() - 1


def _poly_mod(a: int, b: int) -> int:
    db = _poly_degree(b)
    while a.bit_length() - 1 >= db and a:
        a ^= b << (a.bit_length() - 1 - db)
    return a


class FieldSpec:
    """GF(2^m) described by its extension degree and modulus polynomial.

    The modulus must be irreducible of degree exactly m; this is verified
    at construction by trial division against every polynomial of degree
    up to m // 2.
    """

    __slots__ = ("m", "modulus")

    def __init__(self, m: int, modulus: int):
        if m < 1:
            raise ValueError("extension degree must be positive")
        if _poly_degree(modulus) != m:
            raise ValueError(f"modulus 0b{modulus:b} does not have degree {m}")
        for deg in range(1, m // 2 + 1):
            for q in range(1 << deg, 1 << (deg + 1)):
                if _poly_mod(modulus, q) == 0:
                    raise ValueError(
                        f"modulus 0b{modulus:b} is divisible by 0b{q:b}, not irreducible"
                    )
        self.m = m
        self.modulus = modulus

    @classmethod
    def from_modulus_str(cls, bits: str) -> FieldSpec:
        """Parse a binary literal like '1011' for x^3 + x + 1 (MSB first)."""
        modulus = int(bits, 2)
        return cls(_poly_degree(modulus), modulus)

    @property
    def order(self) -> int:
        return 1 << self.m

    def __eq__(self, other: object) -> bool:
        return isinstance(other, FieldSpec) and self.modulus == other.modulus

    def __hash__(self) -> int:
        return hash(self.modulus)

    def __repr__(self) -> str:
        return f"FieldSpec(m={self.m}, modulus=0b{self.modulus:b})"


def gf_mul(a: int, b: int, fs: FieldSpec) -> int:
    """Carry-less product of a and b, reduced by the field modulus."""
    top = 1 << fs.m
    if a < 0 or a >= top or b < 0 or b >= top:
        raise ValueError(f"operands must be {fs.m}-bit field elements")
    r = 0
    while b:
        if b & 1:
            r ^= a
        a <<= 1
        if a & top:
            a ^= fs.modulus
        b >>= 1
    return r


def gf_pow(a: int, k: int, fs: FieldSpec) -> int:
    """a^k by square-and-multiply; a^0 = 1 for every a, including 0."""
    if k < 0:
        raise ValueError("exponent must be non-negative")
    r = 1
    base = a
    while k:
        if k & 1:
            r = gf_mul(r, base, fs)
        base = gf_mul(base, base, fs)
        k >>= 1
    return r


def field_to_vec(a: int, basis: BinMatrix) -> int:
    """Map a field element to coordinates through an invertible basis matrix."""
    if not basis.is_invertible():
        raise SingularMatrixError(basis.rank(), basis.size)
    return basis.apply(a)


def vec_to_field(v: int, basis: BinMatrix) -> int:
    """Inverse of field_to_vec."""
    return basis.inverse().apply(v)


# ---------------------------------------------------------------------------
# Group operation handles
# ---------------------------------------------------------------------------


class XorSum:
    """The standard sum on (F_2)^width, as a group-operation handle.

    Handles expose op(x, y), neg(x) and width; alternative sums built from
    regular group actions satisfy the same protocol.
    """

    __slots__ = ("width",)

    is_xor = True

    def __init__(self, width: int):
        self.width = width

    def op(self, x: int, y: int) -> int:
        return x ^ y

    def neg(self, x: int) -> int:
        return x

    def __repr__(self) -> str:
        return f"XorSum(width={self.width})"
