import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from codewidth.codes import code_from_generator, k_rm, reed_muller, reed_solomon, repetition
from codewidth.errors import InvalidParamsError, OutOfRangeError, TooLargeError
from codewidth.trellis import (
    CoordinateOrder, GainFallProfile, points_of_gain_fall, profile_from_gain_fall, rm_gain_fall,
    rm_gain_fall_predicate, rm_standard_profile, rm_u_profile, sigma_rm, srm_gap, tau_mds, tau_rm,
    tau_sigma_gap, trellis_profile, trelliswidth_bruteforce, trelliswidth_exhaustive,
)


def small_codes():
    @st.composite
    def build(draw):
        q = draw(st.sampled_from([2, 3]))
        n = draw(st.integers(1, 6))
        k = draw(st.integers(1, n))
        rows = draw(st.lists(st.lists(st.integers(0, q - 1), min_size=n, max_size=n), min_size=k, max_size=k))
        rows[0][0] = 1
        return code_from_generator(q, rows)
    return build()


def test_rm13_identity_profile():
    p = trellis_profile(reed_muller(1, 3))
    assert p.state_dims == (0, 1, 2, 3, 2, 3, 2, 1, 0)
    assert p.branch_dims == (1, 2, 3, 3, 3, 3, 2, 1)
    assert (p.state_complexity, p.branch_complexity) == (3, 3)


def test_rm13_gain_fall_points():
    gf = points_of_gain_fall(reed_muller(1, 3))
    assert sorted(gf.gains) == [0, 1, 2, 4]
    assert sorted(gf.falls) == [3, 5, 6, 7]
    assert gf == rm_gain_fall(1, 3)


def test_repetition_profile():
    p = trellis_profile(repetition(4))
    assert p.state_dims == (0, 1, 1, 1, 0)
    assert p.branch_dims == (1, 1, 1, 1)


def test_order_validation():
    with pytest.raises(ValueError):
        CoordinateOrder((0, 0, 1))
    with pytest.raises(ValueError):
        trellis_profile(reed_muller(1, 2), [0, 1, 2])


@settings(max_examples=100, deadline=None)
@given(small_codes(), st.randoms(use_true_random=False))
def test_profile_shape_and_engines_agree(C, rnd):
    perm = list(range(C.n))
    rnd.shuffle(perm)
    p = trellis_profile(C, perm)
    p.check_local_behavior()
    assert p == profile_from_gain_fall(points_of_gain_fall(C, perm), CoordinateOrder.of(perm))
    gf = points_of_gain_fall(C, perm)
    assert len(gf.gains) == len(gf.falls) == C.k


@settings(max_examples=60, deadline=None)
@given(small_codes(), st.randoms(use_true_random=False))
def test_reversal_mirrors_profile(C, rnd):
    perm = list(range(C.n))
    rnd.shuffle(perm)
    p = trellis_profile(C, perm)
    q = trellis_profile(C, perm[::-1])
    assert q.state_dims == p.state_dims[::-1]
    assert q.branch_dims == p.branch_dims[::-1]


def test_predicate():
    assert rm_gain_fall_predicate(0, 1, 3) == (True, False)
    assert rm_gain_fall_predicate(7, 1, 3) == (False, True)
    with pytest.raises(OutOfRangeError):
        rm_gain_fall_predicate(8, 1, 3)


@pytest.mark.parametrize("r,m", [(r, m) for m in range(1, 5) for r in range(m + 1)])
def test_counting_engine_matches_rank_engine(r, m):
    assert rm_standard_profile(r, m) == trellis_profile(reed_muller(r, m))


def test_counting_engine_length_one():
    p = rm_standard_profile(0, 0)
    assert (p.state_dims, p.branch_dims) == ((0, 0), (1,))


def test_rm_u_profile_counts_falls():
    assert rm_u_profile(1, 3).u == (0, 0, 0, 0, 1, 1, 2, 3, 4)


@pytest.mark.parametrize("r,m,sigma,tau", [
    (1, 3, 3, 3), (1, 4, 4, 4), (2, 4, 4, 5), (0, 3, 1, 1), (3, 3, 0, 1), (2, 3, 1, 2), (1, 5, 5, 5),
])
def test_closed_form_values(r, m, sigma, tau):
    assert (sigma_rm(r, m), tau_rm(r, m)) == (sigma, tau)


@pytest.mark.parametrize("m", range(0, 9))
def test_closed_forms_match_counting(m):
    for r in range(m + 1):
        p = rm_standard_profile(r, m)
        assert p.state_complexity == sigma_rm(r, m)
        assert p.branch_complexity == tau_rm(r, m)
        assert tau_rm(r, m) - sigma_rm(r, m) == tau_sigma_gap(r, m)


@pytest.mark.parametrize("m", range(1, 13))
def test_srm_gap(m):
    for r in range(1, m + 1):
        assert srm_gap(r, m) == k_rm(r, m) - tau_rm(r, m)


def test_closed_form_domain():
    with pytest.raises(InvalidParamsError):
        tau_rm(3, 2)
    with pytest.raises(InvalidParamsError):
        srm_gap(0, 3)
    with pytest.raises(InvalidParamsError):
        tau_mds(3, 4)


def test_trelliswidth_rm13():
    v, order = trelliswidth_exhaustive(reed_muller(1, 3))
    assert v == 3 and order == CoordinateOrder.identity(8)


@pytest.mark.parametrize("n", range(1, 8))
def test_trelliswidth_rs(n):
    for k in range(1, n + 1):
        C = reed_solomon(n, k, 11)
        v, order = trelliswidth_exhaustive(C)
        assert v == tau_mds(n, k)
        assert trellis_profile(C, order).branch_complexity == v


@settings(max_examples=60, deadline=None)
@given(small_codes())
def test_dp_matches_permutation_oracle(C):
    assert trelliswidth_exhaustive(C) == trelliswidth_bruteforce(C)


@pytest.mark.parametrize("seed", range(5))
def test_dp_witness_is_lex_least(seed):
    rng = random.Random(seed)
    rows = [[rng.randrange(2) for _ in range(6)] for _ in range(3)]
    rows[0][0] = 1
    C = code_from_generator(2, rows)
    v, order = trelliswidth_exhaustive(C)
    first = next(p for p in itertools.permutations(range(C.n)) if trellis_profile(C, p).branch_complexity == v)
    assert order.perm == first


def test_trelliswidth_gate():
    C = reed_muller(1, 4)
    with pytest.raises(TooLargeError) as exc:
        trelliswidth_exhaustive(C)
    assert "10" in str(exc.value) and "force" in str(exc.value)


def test_gain_fall_record():
    gf = GainFallProfile(frozenset({0}), frozenset({1}), 2)
    assert profile_from_gain_fall(gf).state_dims == (0, 1, 0)
