import itertools
import random
from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from codewidth.codes import (
    CanonicalRep, GhwProfile, LinearCode, UProfile, alpha_beta, canonical_rep, code_from_generator,
    dim_shortened, format_code, ghw_bruteforce, ghw_from_uprofile, ghw_mds, ghw_rm, k_rm, load_code,
    parse_code_text, reed_muller, reed_solomon, repetition, u_alpha_beta_closed, u_mds,
    u_profile_bruteforce, uprofile_from_ghw,
)
from codewidth.errors import (
    CodeFileError, EmptyMatrixError, MalformedProfileError, OutOfRangeError, TooLargeError,
)
from codewidth.field_linalg import GF2, Matrix


def count_supported(C, J):
    """Codewords with every nonzero symbol inside J."""
    J = set(J)
    return sum(1 for w in C.codewords() if all(x == 0 or i in J for i, x in enumerate(w)))


def random_code(seed, q=2, n_max=7):
    rng = random.Random(seed)
    n = rng.randint(1, n_max)
    k = rng.randint(1, n)
    rows = [[rng.randrange(q) for _ in range(n)] for _ in range(k)]
    rows[0][0] = 1  # never the zero matrix
    return code_from_generator(q, rows)


def test_rm_shapes():
    for m in range(1, 7):
        for r in range(m + 1):
            C = reed_muller(r, m)
            assert (C.q, C.n, C.k) == (2, 1 << m, k_rm(r, m))


def test_rm13_generator_rows():
    C = reed_muller(1, 3)
    assert C.gen.entries[0] == (1,) * 8
    # degree-1 monomials x_j evaluate to bit j of the point index
    assert C.gen.entries[1] == (0, 1, 0, 1, 0, 1, 0, 1)
    assert C.gen.entries[3] == (0, 0, 0, 0, 1, 1, 1, 1)


def test_rm_min_distance_by_codewords():
    for r, m in [(0, 3), (1, 3), (2, 3), (1, 4), (2, 4)]:
        C = reed_muller(r, m)
        wt = min(sum(w) for w in C.codewords() if any(w))
        assert wt == 1 << (m - r)


@pytest.mark.parametrize("n,k,p", [(4, 2, 5), (5, 3, 7), (6, 2, 7), (3, 3, 3)])
def test_rs_is_mds_by_codewords(n, k, p):
    C = reed_solomon(n, k, p)
    wt = min(sum(1 for x in w if x) for w in C.codewords() if any(w))
    assert wt == n - k + 1


def test_rs_rejects_bad_params():
    with pytest.raises(ValueError):
        reed_solomon(6, 3, 5)  # needs n distinct points
    with pytest.raises(ValueError):
        reed_solomon(4, 5, 7)


def test_code_equality_by_row_space():
    a = code_from_generator(2, [[1, 1, 0], [0, 1, 1]])
    b = code_from_generator(2, [[1, 0, 1], [0, 1, 1]])
    c = code_from_generator(2, [[1, 1, 0], [0, 0, 1]])
    assert a == b and hash(a) == hash(b)
    assert a != c


def test_dependent_rows_dropped_and_empty_rejected():
    C = code_from_generator(2, [[1, 1, 0], [1, 1, 0], [0, 1, 1]])
    assert C.k == 2
    with pytest.raises(EmptyMatrixError):
        code_from_generator(2, [[0, 0, 0]])
    with pytest.raises(ValueError):
        LinearCode(GF2, Matrix.from_rows(GF2, [[1, 1], [1, 1]], 2))


@pytest.mark.parametrize("seed", range(25))
def test_dim_shortened_counts_codewords(seed):
    rng = random.Random(seed)
    C = random_code(seed, q=rng.choice([2, 3]), n_max=6)
    for J in itertools.chain.from_iterable(itertools.combinations(range(C.n), s) for s in range(C.n + 1)):
        assert C.q ** dim_shortened(C, J) == count_supported(C, J)


def test_u_profiles_frozen():
    assert u_profile_bruteforce(reed_muller(1, 3)).u == (0, 0, 0, 0, 1, 1, 2, 3, 4)
    assert u_profile_bruteforce(reed_solomon(4, 2, 5)).u == (0, 0, 0, 1, 2)
    assert u_profile_bruteforce(repetition(4)).u == (0, 0, 0, 0, 1)
    assert ghw_bruteforce(reed_muller(1, 3)).d == (4, 6, 7, 8)


def test_u_profile_gate():
    C = reed_muller(1, 5)
    with pytest.raises(TooLargeError) as exc:
        u_profile_bruteforce(C)
    assert "20" in str(exc.value)


@pytest.mark.parametrize("n,k,p", [(n, k, 11) for n in range(1, 7) for k in range(1, n + 1)])
def test_mds_profiles_match_bruteforce(n, k, p):
    C = reed_solomon(n, k, p)
    assert u_profile_bruteforce(C) == u_mds(n, k)
    assert ghw_bruteforce(C) == ghw_mds(n, k)


@pytest.mark.parametrize("r,m", [(r, m) for m in range(1, 4) for r in range(m + 1)])
def test_wei_matches_bruteforce_small(r, m):
    C = reed_muller(r, m)
    assert ghw_bruteforce(C).d == tuple(ghw_rm(u, r, m) for u in range(1, C.k + 1))


def test_ghw_examples():
    assert canonical_rep(5, 2, 4).terms == ((1, 3), (0, 1))
    assert ghw_rm(5, 2, 4) == 10
    assert ghw_rm(1, 1, 3) == 4
    assert ghw_rm(k_rm(1, 3), 1, 3) == 8


def _all_reps(r, m):
    """Every term sequence obeying the CanonicalRep constraints, with its value."""
    out = []

    def go(i, pr, pm, terms, value):
        out.append((tuple(terms), value))
        off = m - r + 1 - i
        for ri in range(pr + 1):
            mi = ri + off
            if 0 <= mi <= pm:
                go(i + 1, ri, mi, terms + [(ri, mi)], value + k_rm(ri, mi))

    go(1, r - 1, m - 1, [], 0)
    return out


@pytest.mark.parametrize("m", range(0, 7))
def test_canonical_rep_exists_and_unique(m):
    for r in range(m + 1):
        reps = {}
        for terms, value in _all_reps(r, m):
            reps.setdefault(value, []).append(terms)
        for u in range(k_rm(r, m)):
            assert len(reps.get(u, [])) == 1, (u, r, m, reps.get(u))
            assert canonical_rep(u, r, m).terms == reps[u][0]


def test_canonical_rep_validation():
    with pytest.raises(MalformedProfileError):
        CanonicalRep(2, 4, ((0, 1),))  # offset must be m - r = 2 for the first term
    with pytest.raises(OutOfRangeError):
        canonical_rep(11, 2, 4)


@settings(max_examples=200, deadline=None)
@given(st.lists(st.booleans(), max_size=20))
def test_uprofile_ghw_roundtrip(steps):
    u = [0]
    for b in steps:
        u.append(u[-1] + b)
    U = UProfile(tuple(u))
    G = ghw_from_uprofile(U)
    assert G.k == U.k
    assert uprofile_from_ghw(G) == U


def test_profile_validation():
    with pytest.raises(MalformedProfileError):
        UProfile((0, 2))
    with pytest.raises(MalformedProfileError):
        UProfile((1, 1))
    with pytest.raises(MalformedProfileError):
        GhwProfile((3, 3), 4)
    G = GhwProfile((2, 4), 4)
    assert (G.weight(0), G.weight(2), G.weight(3)) == (0, 4, 5)


@pytest.mark.parametrize("m", range(1, 20))
def test_alpha_beta(m):
    n = 1 << m
    a, b = alpha_beta(m)
    assert 3 * a <= 2 * n < 3 * (a + 1)
    assert 3 * b <= n < 3 * (b + 1)


@pytest.mark.parametrize("m", range(1, 12))
def test_alpha_beta_doubling(m):
    a0, _ = alpha_beta(m)
    a1, _ = alpha_beta(m + 1)
    # lengths of the checked ranges double, plus one after even m
    assert a1 - (1 << m) == 2 * (a0 - (1 << (m - 1))) + (m % 2 == 0)


@pytest.mark.parametrize("r,m", [(1, 3), (1, 4), (2, 4), (2, 3), (3, 4)])
def test_u_alpha_beta_closed_bruteforce(r, m):
    U = u_profile_bruteforce(reed_muller(r, m))
    a, b = alpha_beta(m)
    assert u_alpha_beta_closed(r, m) == (U[a], U[b])


def test_k_rm():
    assert [k_rm(r, 4) for r in range(6)] == [1, 5, 11, 15, 16, 16]
    assert k_rm(3, 10) == sum(comb(10, j) for j in range(4))


# -- code files -----------------------------------------------------------

def test_code_file_roundtrip(tmp_path):
    for C in (reed_muller(1, 3), reed_solomon(5, 3, 7)):
        path = tmp_path / "c.code"
        path.write_text(format_code(C))
        D = load_code(path)
        assert D == C and D.gen == C.gen


@pytest.mark.parametrize("text,line,column", [
    ("", None, None),
    ("2 3", 1, None),
    ("4 3 1\n1 1 1\n", 1, 1),
    ("2 3 1\n1 x 1\n", 2, 3),
    ("2 3 1\n1 1\n", 2, None),
    ("2 3 1\n1 2 1\n", 2, 3),
    ("2 3 2\n1 1 1\n", 2, None),
    ("2 3 4\n1 1 1\n", 1, 5),
    ("2 2 2\n1 1\n1 1\n", None, None),
])
def test_code_file_errors(text, line, column):
    with pytest.raises(CodeFileError) as exc:
        parse_code_text(text)
    assert exc.value.line == line
    assert exc.value.column == column
    if line is not None:
        assert str(exc.value).startswith(f"line {line}")
