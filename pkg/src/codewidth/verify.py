"""Desk-scale checks of the treewidth = trelliswidth results.

Every ``check_*`` function returns a :class:`VerificationReport`.  A failing
report carries a counterexample whose fields can be fed back to the matching
single-case helper (``appendix_b_pair``, ``lemma_u_ineq_pair``, ...) to
reproduce the failure on its own.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Any, Callable

import numpy as np

from .codes import (
    LinearCode,
    UProfile,
    alpha_beta,
    ghw_bruteforce,
    ghw_rm,
    k_rm,
    reed_muller,
    reed_solomon,
    u_alpha_beta_closed,
    u_profile_bruteforce,
)
from .errors import OutOfRangeError, TooLargeError
from .trellis import (
    rm_standard_profile,
    rm_u_profile,
    sigma_rm,
    srm_gap,
    tau_mds,
    tau_rm,
    tau_sigma_gap,
    trelliswidth_exhaustive,
)
from .treedecomp import (
    TREEWIDTH_GATE,
    _enumerate_edges,
    CubicTree,
    node_split,
    tree_to_string,
    treewidth_exhaustive,
)


@dataclass
class VerificationReport:
    check: str
    params: dict[str, Any]
    passed: bool
    counterexample: dict[str, Any] | None = None
    cases: int = 0
    millis: float = 0.0

    def __post_init__(self):
        if not self.passed and self.counterexample is None:
            raise ValueError(f"failing report {self.check} needs a counterexample")

    def to_dict(self, timing: bool = False) -> dict[str, Any]:
        out: dict[str, Any] = {"check": self.check, "params": self.params, "pass": self.passed}
        if self.counterexample is not None:
            out["counterexample"] = self.counterexample
        if timing:
            out["millis"] = round(self.millis, 3)
        return out


def _timed(fn: Callable[..., VerificationReport]) -> Callable[..., VerificationReport]:
    def wrapper(*args, **kwargs):
        t0 = time.perf_counter()
        report = fn(*args, **kwargs)
        report.millis = (time.perf_counter() - t0) * 1000.0
        return report

    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    wrapper.__wrapped__ = fn
    return wrapper


# -- weight vectors -------------------------------------------------------

@dataclass(frozen=True)
class WeightVector:
    """``counts[i - 1]`` = how many members of S have at least i ones.

    Sums of these and 0/1 indicators are allowed too, so only non-negativity
    is enforced.
    """

    m: int
    counts: tuple[int, ...]

    def __post_init__(self):
        if len(self.counts) != self.m:
            raise ValueError(f"expected {self.m} components, got {len(self.counts)}")
        if any(c < 0 for c in self.counts):
            raise ValueError(f"weight vector {self.counts} has a negative component")

    def __add__(self, other: WeightVector) -> WeightVector:
        if other.m != self.m:
            raise ValueError("weight vectors of different widths")
        return WeightVector(self.m, tuple(a + b for a, b in zip(self.counts, other.counts)))

    def dominates(self, other: WeightVector) -> bool:
        return all(a >= b for a, b in zip(self.counts, other.counts))


def weight_vector(lo: int, hi: int, m: int) -> WeightVector:
    """Weight vector of the integer interval [lo, hi] (empty when lo > hi)."""
    if lo <= hi and not (0 <= lo and hi < 1 << m):
        raise OutOfRangeError(f"interval [{lo}, {hi}] not inside [0, 2^{m})")
    counts = [0] * m
    for x in range(lo, hi + 1):
        for i in range(x.bit_count()):
            counts[i] += 1
    return WeightVector(m, tuple(counts))


def indicator(a: int, b: int, m: int) -> WeightVector:
    """The 0/1 vector with ones in components a..b (1-based)."""
    return WeightVector(m, tuple(int(a <= i <= b) for i in range(1, m + 1)))


def appendix_b_pair(m: int, i: int, j: int) -> tuple[WeightVector, WeightVector]:
    """(left side, right side) of the weight inequality for one (i, j)."""
    alpha, beta = alpha_beta(m)
    lhs = weight_vector(alpha - i, alpha - 1, m) + weight_vector(beta - j, beta - 1, m)
    return lhs, weight_vector(1, i + j, m)


def ell(m: int) -> int:
    return alpha_beta(m)[0] - (1 << (m - 1))


@_timed
def check_appendix_b(m: int, limit: int | None = None) -> VerificationReport:
    """Componentwise weight inequality for all i, j in [0, limit], limit = ell(m) by default."""
    if not 2 <= m <= 14:
        raise OutOfRangeError(f"need 2 <= m <= 14, got {m}")
    alpha, beta = alpha_beta(m)
    top = ell(m) if limit is None else limit
    n = 1 << m
    # prefix[t][x] = #{y < x : wt(y) >= t + 1}
    wt = np.array([x.bit_count() for x in range(n)])
    ge = wt[None, :] >= np.arange(1, m + 1)[:, None]
    prefix = np.concatenate([np.zeros((m, 1), dtype=np.int64), np.cumsum(ge, axis=1)], axis=1)
    idx = np.arange(top + 1)
    if alpha - top < 0 or beta - top < 0 or 2 * top >= n:
        raise OutOfRangeError(f"limit {top} reaches outside [0, 2^{m})")
    ij = idx[:, None] + idx[None, :]
    bad = np.zeros((top + 1, top + 1), dtype=bool)
    for row in prefix:
        a_part = row[alpha] - row[alpha - idx]        # indexed by i
        b_part = row[beta] - row[beta - idx]          # indexed by j
        rhs = row[ij + 1] - row[1]
        bad |= (a_part[:, None] + b_part[None, :]) < rhs
    params = {"m": m, "ell": ell(m), "limit": top}
    viol = np.argwhere(bad)
    if len(viol):
        i, j = (int(x) for x in viol[0])
        lhs, rhs_v = appendix_b_pair(m, i, j)
        cx = {"m": m, "i": i, "j": j, "lhs": list(lhs.counts), "rhs": list(rhs_v.counts)}
        return VerificationReport("appendix-b", params, False, cx, cases=(top + 1) ** 2)
    return VerificationReport("appendix-b", params, True, cases=(top + 1) ** 2)


# -- U-profile lemmas -----------------------------------------------------

def _rm_profile(r: int, m: int) -> UProfile:
    return u_profile_bruteforce(reed_muller(r, m))


def lemma_u_ineq_pair(U: UProfile, m: int, i: int, j: int) -> tuple[int, int]:
    alpha, beta = alpha_beta(m)
    return (U[alpha] - U[alpha - i]) + (U[beta] - U[beta - j]), U[i + j + 1] - U[1]


def lemma_u_ineq_ranges(m: int) -> tuple[int, int]:
    """Upper ends of the i and j ranges; a negative end means the range is empty."""
    alpha, beta = alpha_beta(m)
    half = 1 << (m - 1)
    return alpha - half, beta - (alpha - half + 1)


@_timed
def check_lemma_u_ineq(r: int, m: int, U: UProfile | None = None) -> VerificationReport:
    if not (1 <= r <= m - 1 and m <= 4) and U is None:
        raise OutOfRangeError(f"need 1 <= r <= m - 1 and m <= 4 for the brute-force profile, got r={r}, m={m}")
    if U is None:
        U = _rm_profile(r, m)
    i_top, j_top = lemma_u_ineq_ranges(m)
    params = {"r": r, "m": m, "i_max": i_top, "j_max": j_top}
    if i_top < 0 or j_top < 0:
        params["vacuous"] = True
        return VerificationReport("lemma-u-ineq", params, True)
    cases = 0
    for i in range(i_top + 1):
        for j in range(j_top + 1):
            cases += 1
            lhs, rhs = lemma_u_ineq_pair(U, m, i, j)
            if lhs < rhs:
                cx = {"r": r, "m": m, "i": i, "j": j, "lhs": lhs, "rhs": rhs}
                return VerificationReport("lemma-u-ineq", params, False, cx, cases=cases)
    return VerificationReport("lemma-u-ineq", params, True, cases=cases)


def wei_u(s: int, r: int, m: int) -> int:
    """U_s of RM(r, m) read off Wei's weight hierarchy (binary search on d_u)."""
    lo, hi = 0, k_rm(r, m)
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if ghw_rm(mid, r, m) <= s:
            lo = mid
        else:
            hi = mid - 1
    return lo


@_timed
def check_lemma_uab(r: int, m: int) -> VerificationReport:
    """U_alpha + U_beta + U_1 against k(r, m) - tau(r, m), with U from the closed forms.

    U_1 = 0 is derived from d_1 >= 2.  The closed forms are also compared to the
    fall-count profile and to Wei's hierarchy, and for m <= 4 to brute force.
    """
    if not 1 <= r <= m - 1:
        raise OutOfRangeError(f"need 1 <= r <= m - 1, got r={r}, m={m}")
    alpha, beta = alpha_beta(m)
    ua, ub = u_alpha_beta_closed(r, m)
    d1 = ghw_rm(1, r, m)
    u1 = 0 if d1 >= 2 else 1
    lhs, rhs = ua + ub + u1, k_rm(r, m) - tau_rm(r, m)
    params = {"r": r, "m": m, "alpha": alpha, "beta": beta}
    cx: dict[str, Any] = {"r": r, "m": m, "U_alpha": ua, "U_beta": ub, "U_1": u1, "lhs": lhs, "rhs": rhs}
    if d1 < 2:
        return VerificationReport("lemma-uab", params, False, {**cx, "reason": "d_1 < 2", "d_1": d1})
    if lhs != rhs:
        return VerificationReport("lemma-uab", params, False, {**cx, "reason": "sum mismatch"})
    sources = {"falls": rm_u_profile(r, m) if m <= 16 else None}
    if m <= 4:
        sources["bruteforce"] = _rm_profile(r, m)
    for name, U in sources.items():
        if U is not None and (U[alpha], U[beta], U[1]) != (ua, ub, 0):
            return VerificationReport("lemma-uab", params, False,
                                      {**cx, "reason": f"closed form disagrees with {name}",
                                       name: [U[alpha], U[beta], U[1]]})
    wa, wb = wei_u(alpha, r, m), wei_u(beta, r, m)
    if (wa, wb) != (ua, ub):
        return VerificationReport("lemma-uab", params, False,
                                  {**cx, "reason": "closed form disagrees with Wei hierarchy", "wei": [wa, wb]})
    return VerificationReport("lemma-uab", params, True, cases=1)


# -- code-level checks ----------------------------------------------------

def prop1_qualifying_node(U: UProfile, T: CubicTree, budget: int) -> int | None:
    """First internal node whose branch leaf counts satisfy sum U_{n_i} <= budget."""
    for v in T.internal_nodes:
        if sum(U[c] for c in node_split(T, v).counts) <= budget:
            return v
    return None


@_timed
def check_prop1_hypothesis(C: LinearCode, force: bool = False, label: dict | None = None) -> VerificationReport:
    """Every cubic tree on n leaves has a node with U_{n1} + U_{n2} + U_{n3} <= k - tau."""
    if C.n > TREEWIDTH_GATE and not force:
        raise TooLargeError("check_prop1_hypothesis", C.n, TREEWIDTH_GATE)
    U = u_profile_bruteforce(C)
    tau, _ = trelliswidth_exhaustive(C)
    budget = C.k - tau
    params = {**(label or {}), "q": C.q, "n": C.n, "k": C.k, "tau": tau, "budget": budget}
    if C.n < 3:
        params["vacuous"] = True
        return VerificationReport("prop1", params, True)
    count = 0
    for idx, edges in enumerate(_enumerate_edges(C.n)):
        T = CubicTree.from_edges(C.n, edges)
        count += 1
        if prop1_qualifying_node(U, T, budget) is None:
            sums = {v: [node_split(T, v).counts, sum(U[c] for c in node_split(T, v).counts)]
                    for v in T.internal_nodes}
            cx = {"tree_index": idx, "tree": tree_to_string(T), "node_sums": {str(v): s for v, s in sums.items()}}
            return VerificationReport("prop1", params, False, cx, cases=count)
    return VerificationReport("prop1", params, True, cases=count)


@_timed
def check_mds_theorem(n: int, k: int, p: int, workers: int = 1) -> VerificationReport:
    if n > TREEWIDTH_GATE:
        raise TooLargeError("check_mds_theorem", n, TREEWIDTH_GATE)
    C = reed_solomon(n, k, p)
    tw, tree = treewidth_exhaustive(C, workers=workers)
    tl, order = trelliswidth_exhaustive(C)
    formula = tau_mds(n, k)
    params = {"n": n, "k": k, "p": p}
    if not tw == tl == formula:
        cx = {"n": n, "k": k, "p": p, "treewidth": tw, "trelliswidth": tl, "formula": formula,
              "tree": tree_to_string(tree), "order": list(order.perm)}
        return VerificationReport("mds", params, False, cx, cases=1)
    return VerificationReport("mds", params, True, cases=1)


def rm_theorem_formula(r: int, m: int) -> int:
    """The case formula for kappa(r, m) = tau(r, m), in terms of the state complexity."""
    return sigma_rm(r, m) + (0 if m >= 2 * r + 1 else 1)


@_timed
def check_rm_theorem(r: int, m: int, workers: int = 1) -> VerificationReport:
    """Exhaustive treewidth and trelliswidth for m <= 3; closed-form consistency for m <= 16."""
    if not (1 <= m <= 16 and 0 <= r <= m):
        raise OutOfRangeError(f"need 0 <= r <= m and 1 <= m <= 16, got r={r}, m={m}")
    params = {"r": r, "m": m, "exhaustive": m <= 3}
    tau = tau_rm(r, m)
    fails: dict[str, Any] = {}
    if tau != rm_theorem_formula(r, m):
        fails["formula"] = rm_theorem_formula(r, m)
    if m <= 12:
        prof = rm_standard_profile(r, m).branch_complexity
        if prof != tau:
            fails["standard_order_branch_complexity"] = prof
    if m <= 2 or r == m:
        if tau != tau_mds(1 << m, k_rm(r, m)):
            fails["tau_mds"] = tau_mds(1 << m, k_rm(r, m))
    cases = 1
    if m <= 3:
        C = reed_muller(r, m)
        tw, tree = treewidth_exhaustive(C, workers=workers)
        tl, order = trelliswidth_exhaustive(C)
        if tw != tau or tl != tau:
            fails.update(treewidth=tw, trelliswidth=tl, tree=tree_to_string(tree), order=list(order.perm))
        if m == 3 and r <= m - 1:
            p1 = check_prop1_hypothesis(C)
            cases += p1.cases
            if not p1.passed:
                fails["prop1"] = p1.counterexample
    if fails:
        return VerificationReport("rm", params, False, {"r": r, "m": m, "tau_rm": tau, **fails}, cases=cases)
    return VerificationReport("rm", params, True, cases=cases)


@_timed
def check_srm_identity(max_m: int) -> VerificationReport:
    if not 1 <= max_m <= 24:
        raise OutOfRangeError(f"need 1 <= max_m <= 24, got {max_m}")
    covered = {"m>=2r+1": 0, "m=2r": 0, "m<=2r-1": 0}
    for m in range(1, max_m + 1):
        for r in range(1, m + 1):
            case = "m>=2r+1" if m >= 2 * r + 1 else ("m=2r" if m == 2 * r else "m<=2r-1")
            covered[case] += 1
            lhs, rhs = srm_gap(r, m), k_rm(r, m) - tau_rm(r, m)
            if lhs != rhs:
                return VerificationReport("srm", {"max_m": max_m}, False,
                                          {"r": r, "m": m, "case": case, "srm_gap": lhs, "k_minus_tau": rhs})
    return VerificationReport("srm", {"max_m": max_m, "cases": covered}, True, cases=sum(covered.values()))


@_timed
def check_tau_sigma_gap(max_m: int) -> VerificationReport:
    cases = 0
    for m in range(max_m + 1):
        for r in range(m + 1):
            cases += 1
            if tau_rm(r, m) - sigma_rm(r, m) != tau_sigma_gap(r, m):
                return VerificationReport("tau-sigma-gap", {"max_m": max_m}, False,
                                          {"r": r, "m": m, "tau": tau_rm(r, m), "sigma": sigma_rm(r, m)})
    return VerificationReport("tau-sigma-gap", {"max_m": max_m}, True, cases=cases)


def std_bit_order_dims(C: LinearCode) -> tuple[list[int], list[int]]:
    """dim C_[0,i] and dim C_[i,n-1] for i = 0..n-1, by rank."""
    n = C.n
    prefix = [C.dim_shortened_mask((1 << (i + 1)) - 1) for i in range(n)]
    suffix = [C.dim_shortened_mask(C.full_mask ^ ((1 << i) - 1)) for i in range(n)]
    return prefix, suffix


@_timed
def check_std_bit_order(r: int, m: int) -> VerificationReport:
    if not (1 <= m <= 4 and 0 <= r <= m):
        raise OutOfRangeError(f"need 0 <= r <= m, 1 <= m <= 4, got r={r}, m={m}")
    C = reed_muller(r, m)
    U = u_profile_bruteforce(C)
    n = C.n
    prefix, suffix = std_bit_order_dims(C)
    for i in range(n):
        if prefix[i] != U[i + 1] or suffix[i] != U[n - i]:
            cx = {"r": r, "m": m, "i": i, "prefix_dim": prefix[i], "U_i+1": U[i + 1],
                  "suffix_dim": suffix[i], "U_n-i": U[n - i]}
            return VerificationReport("std-order", {"r": r, "m": m}, False, cx, cases=i + 1)
    return VerificationReport("std-order", {"r": r, "m": m}, True, cases=n)


@_timed
def check_ghw_rm(r: int, m: int) -> VerificationReport:
    """Wei's hierarchy against brute-force subset ranks, all u."""
    C = reed_muller(r, m)
    brute = ghw_bruteforce(C)
    for u in range(1, C.k + 1):
        if ghw_rm(u, r, m) != brute.weight(u):
            return VerificationReport("ghw-rm", {"r": r, "m": m}, False,
                                      {"r": r, "m": m, "u": u, "wei": ghw_rm(u, r, m), "bruteforce": brute.weight(u)})
    return VerificationReport("ghw-rm", {"r": r, "m": m}, True, cases=C.k)


@_timed
def check_ghw_mds(n: int, k: int, p: int) -> VerificationReport:
    brute = ghw_bruteforce(reed_solomon(n, k, p))
    expect = tuple(n - k + q for q in range(1, k + 1))
    if brute.d != expect:
        return VerificationReport("ghw-mds", {"n": n, "k": k, "p": p}, False,
                                  {"n": n, "k": k, "p": p, "bruteforce": list(brute.d), "formula": list(expect)})
    return VerificationReport("ghw-mds", {"n": n, "k": k, "p": p}, True, cases=k)


def sweep_appendix_c(max_m: int) -> list[VerificationReport]:
    """Closed forms for U_alpha, U_beta over 1 <= r <= m - 1 <= max_m - 1, plus
    Wei against brute force wherever the brute force is affordable."""
    reports = [check_lemma_uab(r, m) for m in range(2, max_m + 1) for r in range(1, m)]
    reports += [check_ghw_rm(r, m) for m in range(1, min(max_m, 4) + 1) for r in range(m + 1)]
    return reports
