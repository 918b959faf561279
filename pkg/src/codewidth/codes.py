"""Linear codes over prime fields and their support/dimension profiles.

A code is held as the reduced row-echelon form of a full-rank generator.
Coordinate subsets travel as int bitmasks (bit ``j`` is coordinate ``j``);
the public functions also accept any iterable of indices.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import comb
from pathlib import Path
from typing import Iterable, Sequence

from .errors import (
    CodeFileError,
    EmptyMatrixError,
    InvalidParamsError,
    MalformedProfileError,
    OutOfRangeError,
    TooLargeError,
)
from .field_linalg import GF2, Matrix, PrimeField, gf2_rank_packed, pack_rows, rank, rank_generic, rref

U_PROFILE_GATE = 20
MAX_LENGTH = 64


@dataclass(frozen=True, eq=False)
class LinearCode:
    """Code spanned by the rows of ``gen``, which must have full row rank.

    Equality and hashing go through the reduced row-echelon form, so two
    generators of the same row space give equal codes.
    """

    field: PrimeField
    gen: Matrix
    _dims: dict = field(default_factory=dict, init=False, repr=False)
    _profile: dict = field(default_factory=dict, init=False, repr=False)

    def __post_init__(self):
        if self.gen.field != self.field:
            raise ValueError("generator field does not match code field")
        if self.gen.ncols > MAX_LENGTH:
            raise InvalidParamsError(f"block length {self.gen.ncols} exceeds {MAX_LENGTH}")
        R, pivots = rref(self.gen)
        if len(pivots) != self.gen.nrows:
            raise ValueError(f"generator has rank {len(pivots)} < {self.gen.nrows} rows")
        self._profile["rref"] = R

    @property
    def rref(self) -> Matrix:
        return self._profile["rref"]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LinearCode):
            return NotImplemented
        return self.field == other.field and self.rref == other.rref

    def __hash__(self) -> int:
        return hash((self.field, self.rref))

    @property
    def q(self) -> int:
        return self.field.p

    @property
    def n(self) -> int:
        return self.gen.ncols

    @property
    def k(self) -> int:
        return self.gen.nrows

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    def __repr__(self) -> str:
        return f"LinearCode(q={self.q}, n={self.n}, k={self.k})"

    def codewords(self) -> Iterable[tuple[int, ...]]:
        """All q^k codewords; only sensible for tiny codes."""
        p = self.q
        rows = self.gen.entries
        for coeffs in itertools.product(range(p), repeat=self.k):
            yield tuple(sum(c * row[j] for c, row in zip(coeffs, rows)) % p for j in range(self.n))

    def _packed(self) -> list[int]:
        packed = self._profile.get("packed")
        if packed is None:
            packed = self._profile["packed"] = pack_rows(self.gen.entries)
        return packed

    def _dim_uncached(self, mask: int) -> int:
        off = self.full_mask & ~mask
        if self.q == 2:
            r = gf2_rank_packed(w & off for w in self._packed())
        else:
            cols = [j for j in range(self.n) if off >> j & 1]
            r = rank_generic(self.gen.columns(cols)) if cols else 0
        return self.k - r

    def dim_shortened_mask(self, mask: int) -> int:
        """dim C_J for J given as a bitmask (memoized per code)."""
        dim = self._dims.get(mask)
        if dim is None:
            dim = self._dims[mask] = self._dim_uncached(mask)
        return dim


def to_mask(J: Iterable[int] | int, n: int) -> int:
    if isinstance(J, int):
        if J < 0 or J >> n:
            raise IndexError(f"coordinate mask {J:#x} has bits outside [0, {n})")
        return J
    mask = 0
    for j in J:
        if not 0 <= j < n:
            raise IndexError(f"coordinate {j} outside [0, {n})")
        mask |= 1 << j
    return mask


def mask_to_list(mask: int) -> list[int]:
    out = []
    j = 0
    while mask:
        if mask & 1:
            out.append(j)
        mask >>= 1
        j += 1
    return out


def code_from_generator(q: int | PrimeField, G: Matrix | Sequence[Sequence[int]]) -> LinearCode:
    F = q if isinstance(q, PrimeField) else PrimeField(q)
    if not isinstance(G, Matrix):
        rows = [list(r) for r in G]
        if not rows or not rows[0]:
            raise EmptyMatrixError("generator matrix is empty")
        G = Matrix.from_rows(F, rows)
    elif G.field != F:
        G = Matrix.from_rows(F, G.entries, G.ncols)
    if G.nrows == 0 or G.ncols == 0:
        raise EmptyMatrixError("generator matrix is empty")
    if G.is_zero():
        raise EmptyMatrixError("generator matrix is zero")
    R, pivots = rref(G)
    gen = Matrix(F, R.entries[: len(pivots)], G.ncols)
    return LinearCode(F, gen)


def reed_muller(r: int, m: int) -> LinearCode:
    """RM(r, m) with coordinates in standard bit order.

    Coordinate ``i`` is the evaluation point whose bit ``j`` is b_j(i); rows are
    the monomials of degree <= r, grouped by degree.
    """
    if m < 1 or not 0 <= r <= m:
        raise InvalidParamsError(f"need 0 <= r <= m and m >= 1, got r={r}, m={m}")
    n = 1 << m
    rows = []
    for deg in range(r + 1):
        for vars_ in itertools.combinations(range(m), deg):
            rows.append([int(all(i >> v & 1 for v in vars_)) for i in range(n)])
    return LinearCode(GF2, Matrix.from_rows(GF2, rows, n))


def reed_solomon(n: int, k: int, p: int) -> LinearCode:
    """Vandermonde generator with evaluation points 0, 1, ..., n-1 in GF(p)."""
    F = PrimeField(p)
    if not 1 <= k <= n <= p:
        raise InvalidParamsError(f"need 1 <= k <= n <= p, got n={n}, k={k}, p={p}")
    rows = [[pow(a, i, p) for a in range(n)] for i in range(k)]  # 0**0 == 1
    return LinearCode(F, Matrix.from_rows(F, rows, n))


def repetition(n: int, q: int = 2) -> LinearCode:
    return code_from_generator(q, [[1] * n])


def dim_shortened(C: LinearCode, J: Iterable[int] | int) -> int:
    return C.dim_shortened_mask(to_mask(J, C.n))


# -- profiles -------------------------------------------------------------

@dataclass(frozen=True)
class UProfile:
    """U_0..U_n: largest dimension of a subcode supported on at most s coordinates."""

    u: tuple[int, ...]

    def __post_init__(self):
        u = self.u
        if not u or u[0] != 0:
            raise MalformedProfileError(f"U_0 must be 0, got {u[:1]}")
        for s in range(len(u) - 1):
            if u[s + 1] - u[s] not in (0, 1):
                raise MalformedProfileError(f"U_{s + 1} - U_{s} = {u[s + 1] - u[s]} not in {{0, 1}}")

    @property
    def n(self) -> int:
        return len(self.u) - 1

    @property
    def k(self) -> int:
        return self.u[-1]

    def __getitem__(self, s: int) -> int:
        return self.u[s]

    def __len__(self) -> int:
        return len(self.u)


@dataclass(frozen=True)
class GhwProfile:
    """d_1..d_k; ``d[p - 1]`` is the p-th generalized Hamming weight."""

    d: tuple[int, ...]
    n: int

    def __post_init__(self):
        prev = 0
        for p, dp in enumerate(self.d, 1):
            if dp <= prev:
                raise MalformedProfileError(f"d_{p} = {dp} does not exceed d_{p - 1} = {prev}")
            prev = dp
        if prev > self.n:
            raise MalformedProfileError(f"d_k = {prev} exceeds n = {self.n}")

    @property
    def k(self) -> int:
        return len(self.d)

    def weight(self, p: int) -> int:
        """d_p with the conventions d_0 = 0 and d_{k+1} = n + 1."""
        if p == 0:
            return 0
        if p == self.k + 1:
            return self.n + 1
        return self.d[p - 1]


def u_profile_bruteforce(C: LinearCode, force: bool = False) -> UProfile:
    """U_s as the largest dim C_J over all |J| = s (every subset is visited)."""
    if C.n > U_PROFILE_GATE and not force:
        raise TooLargeError("u_profile_bruteforce", C.n, U_PROFILE_GATE)
    cached = C._profile.get("U")
    if cached is not None:
        return cached
    # Past 2^16 subsets the memo would cost more memory than it saves.
    dim = C.dim_shortened_mask if C.n <= 16 else C._dim_uncached
    best = [0] * (C.n + 1)
    for mask in range(1 << C.n):
        s = mask.bit_count()
        d = dim(mask)
        if d > best[s]:
            best[s] = d
    prof = C._profile["U"] = UProfile(tuple(best))
    return prof


def ghw_from_uprofile(U: UProfile) -> GhwProfile:
    d = []
    for s in range(1, U.n + 1):
        if U[s] > U[s - 1]:
            d.append(s)
    return GhwProfile(tuple(d), U.n)


def uprofile_from_ghw(G: GhwProfile) -> UProfile:
    """U_s = u such that d_u <= s < d_{u+1}."""
    u = []
    p = 0
    for s in range(G.n + 1):
        while p < G.k and G.weight(p + 1) <= s:
            p += 1
        u.append(p)
    return UProfile(tuple(u))


def ghw_bruteforce(C: LinearCode, force: bool = False) -> GhwProfile:
    return ghw_from_uprofile(u_profile_bruteforce(C, force))


def ghw_mds(n: int, k: int) -> GhwProfile:
    if not 1 <= k <= n:
        raise InvalidParamsError(f"need 1 <= k <= n, got n={n}, k={k}")
    return GhwProfile(tuple(n - k + p for p in range(1, k + 1)), n)


def u_mds(n: int, k: int) -> UProfile:
    return UProfile(tuple(max(0, s - (n - k)) for s in range(n + 1)))


# -- Reed-Muller closed forms --------------------------------------------

def k_rm(r: int, m: int) -> int:
    """sum_{j<=r} C(m, j); equals 2^m whenever r >= m."""
    if r < 0 or m < 0:
        raise InvalidParamsError(f"need r, m >= 0, got r={r}, m={m}")
    return sum(comb(m, j) for j in range(min(r, m) + 1))


@dataclass(frozen=True)
class CanonicalRep:
    """u = sum k(r_i, m_i) with r > r_1 >= r_2 >= ..., m > m_1 >= ..., m_i - r_i = m - r + 1 - i."""

    r: int
    m: int
    terms: tuple[tuple[int, int], ...]

    def __post_init__(self):
        pr, pm = self.r - 1, self.m - 1
        for i, (ri, mi) in enumerate(self.terms, 1):
            if not (0 <= ri <= pr and 0 <= mi <= pm):
                raise MalformedProfileError(f"term {i} = {(ri, mi)} breaks the ordering constraints")
            if mi - ri != self.m - self.r + 1 - i:
                raise MalformedProfileError(f"term {i} = {(ri, mi)} has the wrong offset m_i - r_i")
            pr, pm = ri, mi

    @property
    def value(self) -> int:
        return sum(k_rm(ri, mi) for ri, mi in self.terms)


def canonical_rep(u: int, r: int, m: int) -> CanonicalRep:
    if r < 0 or m < 0:
        raise OutOfRangeError(f"need r, m >= 0, got r={r}, m={m}")
    if not 0 <= u < k_rm(r, m):
        raise OutOfRangeError(f"need 0 <= u < k({r},{m}) = {k_rm(r, m)}, got u={u}")
    terms = []
    rest, cr, cm = u, r, m
    # Each step keeps rest < k(cr, cm); the next term lives in RM(r_i + 1, m_i).
    while rest:
        off = cm - cr
        ri = max(t for t in range(cr) if t + off >= 0 and k_rm(t, t + off) <= rest)
        mi = ri + off
        terms.append((ri, mi))
        rest -= k_rm(ri, mi)
        cr, cm = ri + 1, mi
    rep = CanonicalRep(r, m, tuple(terms))
    assert rep.value == u
    return rep


def ghw_rm(u: int, r: int, m: int) -> int:
    """d_u(RM(r, m)) from the canonical representation of u.

    Defined for 0 <= u < k(r, m); u = k(r, m) returns 2^m, the support size of
    the whole code.
    """
    k = k_rm(r, m)
    if u == k:
        return 1 << m
    return sum(1 << mi for _, mi in canonical_rep(u, r, m).terms)


def ghw_rm_profile(r: int, m: int) -> GhwProfile:
    return GhwProfile(tuple(ghw_rm(u, r, m) for u in range(1, k_rm(r, m) + 1)), 1 << m)


def alpha_beta(m: int) -> tuple[int, int]:
    """Largest integers in [0, 2n/3] and [0, n/3] for n = 2^m."""
    if m < 1:
        raise InvalidParamsError(f"need m >= 1, got {m}")
    if m % 2:
        alpha, beta = ((1 << (m + 1)) - 1) // 3, ((1 << m) - 2) // 3
    else:
        alpha, beta = ((1 << (m + 1)) - 2) // 3, ((1 << m) - 1) // 3
    assert alpha == (2 << m) // 3 and beta == (1 << m) // 3
    return alpha, beta


def u_alpha_beta_closed(r: int, m: int) -> tuple[int, int]:
    """(U_alpha, U_beta) of RM(r, m) for 1 <= r <= m - 1."""
    if not 1 <= r <= m - 1:
        raise InvalidParamsError(f"need 1 <= r <= m - 1, got r={r}, m={m}")
    if m >= 2 * r:
        ua = sum(k_rm(r - 1 - i, m - 1 - 2 * i) for i in range(r))
        ub = sum(k_rm(r - 1 - i, m - 2 * i) for i in range(1, r))
    elif m % 2:
        ua = sum(k_rm(r - 1 - i, m - 1 - 2 * i) for i in range((m - 1) // 2 + 1))
        ub = sum(k_rm(r - 1 - i, m - 2 * i) for i in range(1, (m - 1) // 2 + 1))
    else:
        ua = sum(k_rm(r - 1 - i, m - 1 - 2 * i) for i in range((m - 2) // 2 + 1))
        ub = sum(k_rm(r - 1 - i, m - 2 * i) for i in range(1, m // 2 + 1))
    return ua, ub


# -- code files -----------------------------------------------------------

def parse_code_text(text: str) -> LinearCode:
    """Parse ``q n k`` followed by k rows of n symbols in [0, q)."""
    lines = [(no, ln) for no, ln in enumerate(text.splitlines(), 1) if ln.strip()]
    if not lines:
        raise CodeFileError("empty code file")

    def ints(no: int, ln: str) -> list[tuple[int, int]]:
        out = []
        col = 0
        for tok in ln.split():
            col = ln.index(tok, col) + 1
            try:
                out.append((int(tok), col))
            except ValueError:
                raise CodeFileError(f"not an integer: {tok!r}", no, col) from None
            col += len(tok) - 1
        return out

    no, ln = lines[0]
    header = ints(no, ln)
    if len(header) != 3:
        raise CodeFileError(f"header must be 'q n k', got {len(header)} fields", no)
    (q, _), (n, ncol), (k, kcol) = header
    try:
        F = PrimeField(q)
    except InvalidParamsError as exc:
        raise CodeFileError(str(exc), no, 1) from None
    if n < 1:
        raise CodeFileError(f"n must be positive, got {n}", no, ncol)
    if not 1 <= k <= n:
        raise CodeFileError(f"k must satisfy 1 <= k <= n, got {k}", no, kcol)
    body = lines[1:]
    if len(body) != k:
        where = body[k][0] if len(body) > k else (body[-1][0] if body else no)
        raise CodeFileError(f"expected {k} generator rows, found {len(body)}", where)
    rows = []
    for no, ln in body:
        vals = ints(no, ln)
        if len(vals) != n:
            raise CodeFileError(f"expected {n} symbols, found {len(vals)}", no)
        for v, col in vals:
            if not 0 <= v < q:
                raise CodeFileError(f"symbol {v} outside [0, {q})", no, col)
        rows.append([v for v, _ in vals])
    G = Matrix.from_rows(F, rows, n)
    rk = rank(G)
    if rk != k:
        raise CodeFileError(f"declared k = {k} but the generator rows have rank {rk}")
    return LinearCode(F, G)


def load_code(path: str | Path) -> LinearCode:
    return parse_code_text(Path(path).read_text())


def format_code(C: LinearCode) -> str:
    lines = [f"{C.q} {C.n} {C.k}"]
    lines += [" ".join(map(str, row)) for row in C.gen.entries]
    return "\n".join(lines) + "\n"
