import pytest
from hypothesis import given
from hypothesis import strategies as st

from fairmatch.fairness import ORACLE_MAX_LEN, SizeMismatchError, assignment_oracle, sanction_score, sanction_score_lobbies
from fairmatch.model import Lobby

indices = st.integers(0, 9)


def index_lists(n):
    return st.lists(indices, min_size=n, max_size=n)


equal_length_pair = st.integers(1, 6).flatmap(
    lambda n: st.tuples(index_lists(n), index_lists(n)))

equal_length_triple = st.integers(1, 6).flatmap(
    lambda n: st.tuples(index_lists(n), index_lists(n), index_lists(n)))


class TestSanctionScore:
    def test_same_multiset_scores_zero(self):
        assert sanction_score([1, 2, 3], [3, 2, 1]) == 0

    def test_uniform_gap(self):
        assert sanction_score([0, 0, 0, 0, 0], [2, 2, 2, 2, 2]) == 10

    def test_mixed(self):
        # sorted pairs (1,2), (2,2), (3,5) -> 1 + 0 + 2
        assert sanction_score([1, 2, 3], [2, 2, 5]) == 3

    def test_inputs_not_mutated(self):
        u, v = [3, 1, 2], [5, 2, 2]
        sanction_score(u, v)
        assert u == [3, 1, 2] and v == [5, 2, 2]

    def test_unequal_lengths_rejected(self):
        with pytest.raises(SizeMismatchError):
            sanction_score([1, 2], [1, 2, 3])

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            sanction_score([], [])

    @given(equal_length_pair)
    def test_nonnegative_and_symmetric(self, pair):
        u, v = pair
        score = sanction_score(u, v)
        assert score >= 0
        assert score == sanction_score(v, u)

    @given(equal_length_pair)
    def test_zero_iff_equal_multisets(self, pair):
        u, v = pair
        assert (sanction_score(u, v) == 0) == (sorted(u) == sorted(v))

    @given(equal_length_triple)
    def test_triangle_inequality(self, triple):
        u, v, w = triple
        assert sanction_score(u, w) <= sanction_score(u, v) + sanction_score(v, w)

    @given(equal_length_pair, st.permutations(range(6)))
    def test_input_order_invariance(self, pair, perm):
        u, v = pair
        order = sorted(range(len(u)), key=lambda i: perm[i])
        shuffled = [u[i] for i in order]
        assert sanction_score(shuffled, v) == sanction_score(u, v)

    @given(equal_length_pair)
    def test_monotone_shift_bound(self, pair):
        u, v = pair
        shifted = [x + 1 for x in u]
        assert abs(sanction_score(shifted, v) - sanction_score(u, v)) <= len(u)

    @given(equal_length_pair)
    def test_matches_assignment_oracle(self, pair):
        u, v = pair
        assert sanction_score(u, v) == assignment_oracle(u, v)


class TestAssignmentOracle:
    def test_worked_example(self):
        assert assignment_oracle([1, 2, 3], [2, 2, 5]) == 3

    def test_single_pair(self):
        assert assignment_oracle([4], [7]) == 3

    def test_same_multiset(self):
        assert assignment_oracle([0, 9], [9, 0]) == 0

    def test_length_cap(self):
        long = list(range(ORACLE_MAX_LEN + 1))
        with pytest.raises(ValueError):
            assignment_oracle(long, long)

    def test_unequal_lengths_rejected(self):
        with pytest.raises(SizeMismatchError):
            assignment_oracle([1], [1, 2])


class TestSanctionScoreLobbies:
    def test_self_score_zero(self, cfg3, scheme3):
        lobby = Lobby("a", (100.0, 600.0, 900.0))
        assert sanction_score_lobbies(lobby, lobby, scheme3) == 0

    def test_same_bucket_scores_zero(self, scheme3):
        a = Lobby("a", (460.0, 500.0, 540.0))
        b = Lobby("b", (451.0, 549.0, 500.0))
        assert sanction_score_lobbies(a, b, scheme3) == 0

    def test_cap_to_cap(self, scheme3):
        a = Lobby("a", (0.0, 0.0, 0.0))
        b = Lobby("b", (1000.0, 1000.0, 1000.0))
        assert sanction_score_lobbies(a, b, scheme3) == 6

    def test_size_mismatch_names_both_lobbies(self, scheme3):
        a = Lobby("small-team", (100.0, 200.0))
        b = Lobby("big-team", (100.0, 200.0, 300.0))
        with pytest.raises(SizeMismatchError) as excinfo:
            sanction_score_lobbies(a, b, scheme3)
        message = str(excinfo.value)
        assert "small-team" in message and "big-team" in message
