"""Minimal-trellis dimension profiles and trelliswidth.

Two engines produce a :class:`TrellisProfile`:

* :func:`trellis_profile` works for any code and coordinate order and gets
  every dimension from a rank computation;
* :func:`profile_from_gain_fall` only needs the points of gain and fall,
  which for Reed-Muller codes in standard bit order come from a popcount
  test (:func:`rm_gain_fall`), so it scales to lengths where rank calls do not.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import comb
from typing import Sequence

from .codes import LinearCode, UProfile, k_rm
from .errors import InvalidParamsError, OutOfRangeError, TooLargeError

TRELLISWIDTH_GATE = 10


@dataclass(frozen=True)
class CoordinateOrder:
    """``perm[i]`` is the coordinate placed at depth i of the path."""

    perm: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.perm) != list(range(len(self.perm))):
            raise ValueError(f"{self.perm} is not a permutation of range({len(self.perm)})")

    @classmethod
    def identity(cls, n: int) -> CoordinateOrder:
        return cls(tuple(range(n)))

    @classmethod
    def of(cls, perm: Sequence[int]) -> CoordinateOrder:
        return cls(tuple(int(x) for x in perm))

    @property
    def n(self) -> int:
        return len(self.perm)

    def reversed(self) -> CoordinateOrder:
        return CoordinateOrder(self.perm[::-1])

    def prefix_masks(self) -> list[int]:
        """Bitmask of the first i coordinates, for i = 0..n."""
        masks = [0]
        for c in self.perm:
            masks.append(masks[-1] | 1 << c)
        return masks


@dataclass(frozen=True)
class TrellisProfile:
    state_dims: tuple[int, ...]
    branch_dims: tuple[int, ...]
    order: CoordinateOrder

    @property
    def state_complexity(self) -> int:
        return max(self.state_dims)

    @property
    def branch_complexity(self) -> int:
        return max(self.branch_dims, default=0)

    def check_local_behavior(self) -> None:
        """Raise if the profile breaks the shape every minimal trellis has."""
        s, b = self.state_dims, self.branch_dims
        if len(s) != len(b) + 1 or s[0] != 0 or s[-1] != 0:
            raise AssertionError(f"state profile {s} must start and end at 0")
        for i, t in enumerate(b):
            if abs(s[i + 1] - s[i]) > 1:
                raise AssertionError(f"state jump at depth {i}: {s[i]} -> {s[i + 1]}")
            if t not in (s[i], s[i] + 1) or t not in (s[i + 1], s[i + 1] + 1):
                raise AssertionError(f"branch dim {t} at depth {i} incompatible with states {s[i]}, {s[i + 1]}")


@dataclass(frozen=True)
class GainFallProfile:
    """Depths (positions in the order, not coordinate labels) of gains and falls."""

    gains: frozenset[int]
    falls: frozenset[int]
    n: int


def _as_order(order: CoordinateOrder | Sequence[int] | None, n: int) -> CoordinateOrder:
    if order is None:
        return CoordinateOrder.identity(n)
    if not isinstance(order, CoordinateOrder):
        order = CoordinateOrder.of(order)
    if order.n != n:
        raise ValueError(f"order has length {order.n}, code has length {n}")
    return order


def trellis_profile(C: LinearCode, order: CoordinateOrder | Sequence[int] | None = None) -> TrellisProfile:
    order = _as_order(order, C.n)
    n, k = C.n, C.k
    pre = order.prefix_masks()
    full = C.full_mask
    past = [C.dim_shortened_mask(pre[i]) for i in range(n + 1)]           # dim C_{pi[0, i-1]}
    future = [C.dim_shortened_mask(full ^ pre[i]) for i in range(n + 1)]  # dim C_{pi[i, n-1]}
    states = tuple(k - past[i] - future[i] for i in range(n + 1))
    branches = tuple(k - past[i] - future[i + 1] for i in range(n))
    return TrellisProfile(states, branches, order)


def points_of_gain_fall(C: LinearCode, order: CoordinateOrder | Sequence[int] | None = None) -> GainFallProfile:
    """Gain at depth i: the future code loses a dimension when depth i leaves it.
    Fall at depth i: the past code gains one when depth i joins it."""
    order = _as_order(order, C.n)
    pre = order.prefix_masks()
    full = C.full_mask
    gains = frozenset(
        i for i in range(C.n)
        if C.dim_shortened_mask(full ^ pre[i]) - C.dim_shortened_mask(full ^ pre[i + 1]) == 1
    )
    falls = frozenset(
        i for i in range(C.n)
        if C.dim_shortened_mask(pre[i + 1]) - C.dim_shortened_mask(pre[i]) == 1
    )
    return GainFallProfile(gains, falls, C.n)


def profile_from_gain_fall(gf: GainFallProfile, order: CoordinateOrder | None = None) -> TrellisProfile:
    """State dim at depth i is (#gains before i) - (#falls before i); a branch adds
    one more when its depth is a gain."""
    n = gf.n
    states = [0]
    branches = []
    s = 0
    for i in range(n):
        branches.append(s + (i in gf.gains))
        s += (i in gf.gains) - (i in gf.falls)
        states.append(s)
    return TrellisProfile(tuple(states), tuple(branches), order or CoordinateOrder.identity(n))


def rm_gain_fall_predicate(i: int, r: int, m: int) -> tuple[bool, bool]:
    if not 0 <= i < 1 << m:
        raise OutOfRangeError(f"depth {i} outside [0, 2^{m})")
    ones = i.bit_count()
    return ones <= r, m - ones <= r


def rm_gain_fall(r: int, m: int) -> GainFallProfile:
    if m < 0 or not 0 <= r <= m:
        raise InvalidParamsError(f"need 0 <= r <= m, got r={r}, m={m}")
    gains, falls = set(), set()
    for i in range(1 << m):
        g, f = rm_gain_fall_predicate(i, r, m)
        if g:
            gains.add(i)
        if f:
            falls.add(i)
    return GainFallProfile(frozenset(gains), frozenset(falls), 1 << m)


def rm_u_profile(r: int, m: int) -> UProfile:
    """U_s of RM(r, m) as the number of points of fall in [0, s - 1].

    Holds because the standard bit order attains every U_s on its prefixes.
    """
    gf = rm_gain_fall(r, m)
    u = [0]
    for i in range(gf.n):
        u.append(u[-1] + (i in gf.falls))
    return UProfile(tuple(u))


def rm_standard_profile(r: int, m: int) -> TrellisProfile:
    """Minimal trellis profile of RM(r, m) in standard bit order, without linear algebra."""
    return profile_from_gain_fall(rm_gain_fall(r, m))


# -- closed forms ---------------------------------------------------------

def _check_rm(r: int, m: int) -> None:
    if m < 0 or not 0 <= r <= m:
        raise InvalidParamsError(f"need 0 <= r <= m, got r={r}, m={m}")


def sigma_rm(r: int, m: int) -> int:
    """State complexity of RM(r, m) in standard bit order (Berger-Be'ery)."""
    _check_rm(r, m)
    return sum(comb(m - 2 * j - 1, r - j) for j in range(min(r, m - r - 1) + 1))


def tau_rm(r: int, m: int) -> int:
    """Trelliswidth of RM(r, m)."""
    _check_rm(r, m)
    if m >= 2 * r + 1:
        return sum(comb(m - 2 * j - 1, r - j) for j in range(r + 1))
    return 1 + sum(comb(m - 2 * j - 1, r - j) for j in range(m - r))


def tau_sigma_gap(r: int, m: int) -> int:
    _check_rm(r, m)
    return int(m <= 2 * r)


def srm_gap(r: int, m: int) -> int:
    """k(r, m) - tau(r, m) written as a sum of k(., .) terms."""
    if not 1 <= r <= m:
        raise InvalidParamsError(f"need 1 <= r <= m, got r={r}, m={m}")
    top = min(2 * (r - 1), m - 1)
    return sum(k_rm(r - 1 - (i + 1) // 2, m - 1 - i) for i in range(top + 1))


def tau_mds(n: int, k: int) -> int:
    if not 1 <= k <= n:
        raise InvalidParamsError(f"need 1 <= k <= n, got n={n}, k={k}")
    return min(k, n - k + 1)


# -- exhaustive search ----------------------------------------------------

def _gate(C: LinearCode, force: bool) -> None:
    if C.n > TRELLISWIDTH_GATE and not force:
        raise TooLargeError("trelliswidth_exhaustive", C.n, TRELLISWIDTH_GATE)


def trelliswidth_exhaustive(C: LinearCode, force: bool = False) -> tuple[int, CoordinateOrder]:
    """Least max-branch-dimension over all n! coordinate orders.

    The branch dimension at a depth depends only on the set of coordinates
    already placed and the one being placed, so the minimax is a dynamic
    program over subsets.  ``best[S]`` is the smallest achievable max over the
    remaining depths once S is placed; the witness takes, at every depth, the
    smallest coordinate that still allows the optimum, which makes it the
    lexicographically least optimal order.
    """
    _gate(C, force)
    n, k = C.n, C.k
    full = C.full_mask
    dim = [C.dim_shortened_mask(S) for S in range(1 << n)]

    def cost(S: int, x: int) -> int:
        return k - dim[S] - dim[full ^ S ^ (1 << x)]

    best = [0] * (1 << n)
    for S in range(full - 1, -1, -1):
        best[S] = min(
            max(cost(S, x), best[S | 1 << x]) for x in range(n) if not S >> x & 1
        )
    value = best[0]
    perm = []
    S = 0
    for _ in range(n):
        x = next(x for x in range(n) if not S >> x & 1 and max(cost(S, x), best[S | 1 << x]) <= value)
        perm.append(x)
        S |= 1 << x
    return value, CoordinateOrder(tuple(perm))


def trelliswidth_bruteforce(C: LinearCode, force: bool = False) -> tuple[int, CoordinateOrder]:
    """Same contract as :func:`trelliswidth_exhaustive`, by walking permutations.

    An order and its reversal have mirrored profiles, so only orders with
    ``perm[0] < perm[-1]`` are scored; in lexicographic order that half
    contains the lesser of every pair, so the first optimum is still the
    lexicographically least one.
    """
    _gate(C, force)
    n, k = C.n, C.k
    if n == 1:
        return max(trellis_profile(C).branch_dims), CoordinateOrder((0,))
    full = C.full_mask
    best, witness = None, None
    for perm in itertools.permutations(range(n)):
        if perm[0] > perm[-1]:
            continue
        worst = 0
        S = 0
        for x in perm:
            worst = max(worst, k - C.dim_shortened_mask(S) - C.dim_shortened_mask(full ^ S ^ (1 << x)))
            if best is not None and worst >= best:
                break
            S |= 1 << x
        else:
            best, witness = worst, perm
    return best, CoordinateOrder(witness)
