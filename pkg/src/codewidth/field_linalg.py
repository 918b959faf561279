"""Prime-field arithmetic and exact row reduction.

Matrices are small and dense.  Over GF(2) rows are packed into Python ints
(bit ``j`` holds column ``j``) and eliminated with XOR; every other prime
goes through a plain Gauss-Jordan loop on lists of residues.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import NotPrimeError, OutOfRangeError

MAX_MODULUS = 1 << 16


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class PrimeField:
    p: int

    def __post_init__(self):
        if not isinstance(self.p, int) or not 2 <= self.p < MAX_MODULUS:
            raise OutOfRangeError(f"field modulus must satisfy 2 <= p < {MAX_MODULUS}, got {self.p!r}")
        if not _is_prime(self.p):
            raise NotPrimeError(self.p)

    def inv(self, a: int) -> int:
        a %= self.p
        if a == 0:
            raise ZeroDivisionError("0 has no inverse")
        return pow(a, self.p - 2, self.p)

    def __repr__(self) -> str:
        return f"GF({self.p})"


def field_new(p: int) -> PrimeField:
    return PrimeField(p)


GF2 = PrimeField(2)


@dataclass(frozen=True)
class Matrix:
    """Dense matrix over a prime field, stored as a tuple of row tuples."""

    field: PrimeField
    entries: tuple[tuple[int, ...], ...]
    ncols: int

    def __post_init__(self):
        p = self.field.p
        for i, row in enumerate(self.entries):
            if len(row) != self.ncols:
                raise ValueError(f"row {i} has {len(row)} entries, expected {self.ncols}")
            for x in row:
                if not 0 <= x < p:
                    raise ValueError(f"entry {x} in row {i} outside [0, {p})")

    @classmethod
    def from_rows(cls, field: PrimeField, rows: Iterable[Sequence[int]], ncols: int | None = None) -> Matrix:
        """Build a matrix, reducing every entry into [0, p)."""
        p = field.p
        entries = tuple(tuple(int(x) % p for x in row) for row in rows)
        if ncols is None:
            if not entries:
                raise ValueError("ncols is required for a matrix with no rows")
            ncols = len(entries[0])
        return cls(field, entries, ncols)

    @classmethod
    def zeros(cls, field: PrimeField, nrows: int, ncols: int) -> Matrix:
        return cls(field, tuple((0,) * ncols for _ in range(nrows)), ncols)

    @classmethod
    def identity(cls, field: PrimeField, n: int) -> Matrix:
        return cls(field, tuple(tuple(int(i == j) for j in range(n)) for i in range(n)), n)

    @property
    def nrows(self) -> int:
        return len(self.entries)

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    def transpose(self) -> Matrix:
        return Matrix(self.field, tuple(zip(*self.entries)) if self.entries else
                      tuple(() for _ in range(self.ncols)), self.nrows)

    def columns(self, cols: Sequence[int]) -> Matrix:
        return Matrix(self.field, tuple(tuple(row[c] for c in cols) for row in self.entries), len(cols))

    def vstack(self, other: Matrix) -> Matrix:
        if other.field != self.field or other.ncols != self.ncols:
            raise ValueError("vstack needs matching field and column count")
        return Matrix(self.field, self.entries + other.entries, self.ncols)

    def is_zero(self) -> bool:
        return all(x == 0 for row in self.entries for x in row)


# -- GF(2) bit-packed path ------------------------------------------------

def pack_rows(rows: Iterable[Sequence[int]]) -> list[int]:
    packed = []
    for row in rows:
        word = 0
        for j, x in enumerate(row):
            if x & 1:
                word |= 1 << j
        packed.append(word)
    return packed


def unpack_row(word: int, ncols: int) -> tuple[int, ...]:
    return tuple((word >> j) & 1 for j in range(ncols))


def gf2_rank_packed(words: Iterable[int]) -> int:
    """Rank of a set of packed GF(2) rows.

    The basis is kept sorted in decreasing order, so its leading bits are
    distinct and decreasing; ``min(x, x ^ b)`` then clears b's leading bit
    from x exactly when it is set.
    """
    basis: list[int] = []
    for x in words:
        for b in basis:
            x = min(x, x ^ b)
        if x:
            basis.append(x)
            basis.sort(reverse=True)
    return len(basis)


def gf2_rref_packed(words: Sequence[int], ncols: int) -> tuple[list[int], list[int]]:
    """Gauss-Jordan over packed rows: leftmost column first, topmost pivot row."""
    work = list(words)
    pivots: list[int] = []
    top = 0
    for col in range(ncols):
        if top == len(work):
            break
        bit = 1 << col
        pivot = next((r for r in range(top, len(work)) if work[r] & bit), None)
        if pivot is None:
            continue
        work[top], work[pivot] = work[pivot], work[top]
        row = work[top]
        for r in range(len(work)):
            if r != top and work[r] & bit:
                work[r] ^= row
        pivots.append(col)
        top += 1
    return work, pivots


# -- generic GF(p) path ---------------------------------------------------

def _rref_lists(rows: list[list[int]], ncols: int, p: int) -> list[int]:
    """In-place Gauss-Jordan on ``rows``; returns pivot columns."""
    pivots: list[int] = []
    top = 0
    for col in range(ncols):
        if top == len(rows):
            break
        pivot = next((r for r in range(top, len(rows)) if rows[r][col]), None)
        if pivot is None:
            continue
        rows[top], rows[pivot] = rows[pivot], rows[top]
        inv = pow(rows[top][col], p - 2, p)
        prow = [(x * inv) % p for x in rows[top]]
        rows[top] = prow
        for r in range(len(rows)):
            f = rows[r][col]
            if r != top and f:
                rows[r] = [(x - f * y) % p for x, y in zip(rows[r], prow)]
        pivots.append(col)
        top += 1
    return pivots


def rank_generic(M: Matrix) -> int:
    """Rank through the list-based elimination, whatever the field."""
    rows = [list(r) for r in M.entries]
    return len(_rref_lists(rows, M.ncols, M.field.p))


def rank(M: Matrix) -> int:
    if M.nrows == 0 or M.ncols == 0:
        return 0
    if M.field.p == 2:
        return gf2_rank_packed(pack_rows(M.entries))
    return rank_generic(M)


def rref(M: Matrix) -> tuple[Matrix, tuple[int, ...]]:
    """Reduced row-echelon form (same shape, zero rows last) and pivot columns."""
    if M.field.p == 2:
        words, pivots = gf2_rref_packed(pack_rows(M.entries), M.ncols)
        entries = tuple(unpack_row(w, M.ncols) for w in words)
    else:
        rows = [list(r) for r in M.entries]
        pivots = _rref_lists(rows, M.ncols, M.field.p)
        entries = tuple(tuple(r) for r in rows)
    return Matrix(M.field, entries, M.ncols), tuple(pivots)
