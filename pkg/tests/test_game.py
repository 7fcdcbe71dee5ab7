from __future__ import annotations

import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from congestlab.errors import AlphaOutOfRange, InputError, InvalidGame, InvalidState, MixedSignTable
from congestlab.game import (
    CongestionGame,
    DelayTable,
    check_alpha_bounded,
    classify,
    congestion,
    parse_rational,
    player_cost,
    tightest_alpha,
)
from congestlab.oracle import GeneratorSpec, generate

from reference import ref_congestion, ref_cost


def one_edge(values, n=None) -> CongestionGame:
    n = n or len(values)
    return CongestionGame.symmetric(n, {"x": values}, [["x"]])


class TestParseRational:
    @pytest.mark.parametrize(
        "text, expected",
        [("3", Fraction(3)), ("-4", Fraction(-4)), ("6/4", Fraction(3, 2)), (" -1/3 ", Fraction(-1, 3))],
    )
    def test_accepts(self, text, expected):
        assert parse_rational(text) == expected

    @pytest.mark.parametrize("text", ["0.5", "1e3", "1/0", "", "a", "1/-2", 0.5, True, None])
    def test_rejects(self, text):
        with pytest.raises(InputError):
            parse_rational(text)

    def test_canonical_form(self):
        r = parse_rational("-6/4")
        assert (r.numerator, r.denominator) == (-3, 2)


class TestDelayTable:
    def test_one_based_lookup(self):
        tab = DelayTable((1, 3))
        assert tab(1) == 1 and tab(2) == 3
        with pytest.raises(IndexError):
            tab(0)

    def test_decreasing_rejected(self):
        with pytest.raises(InvalidGame, match="decreases"):
            DelayTable((3, 1))

    def test_empty_rejected(self):
        with pytest.raises(InvalidGame):
            DelayTable(())


class TestGameConstruction:
    def test_needs_two_players(self):
        with pytest.raises(InvalidGame):
            CongestionGame.symmetric(1, {"a": [1]}, [["a"]])

    def test_table_length_must_match(self):
        with pytest.raises(InvalidGame, match="expected 2"):
            CongestionGame.symmetric(2, {"a": [1, 2, 3]}, [["a"]])

    def test_unknown_edge(self):
        with pytest.raises(InvalidGame, match="unknown"):
            CongestionGame.symmetric(2, {"a": [1, 2]}, [["b"]])

    def test_duplicate_edge(self):
        with pytest.raises(InvalidGame, match="duplicate"):
            CongestionGame.symmetric(2, [("a", [1, 2]), ("a", [1, 2])], [["a"]])

    def test_empty_strategy_allowed(self):
        g = CongestionGame.symmetric(2, {"a": [1, 2]}, [[], ["a"]])
        assert player_cost(g, (0, 1), 0) == 0

    def test_per_player_with_equal_sets_is_symmetric(self, g2_sym):
        g = CongestionGame.per_player({"a": [1, 3], "b": [2, 5]}, [[["a"], ["b"]]] * 2)
        assert g.is_symmetric and not g.shared

    def test_asymmetric(self, g2):
        assert not g2.is_symmetric


class TestCongestionAndCost:
    def test_full_overlap(self, g1):
        assert congestion(g1, (2, 2)) == {"a": 2, "b": 2}

    def test_disjoint(self, g1):
        assert congestion(g1, (0, 1)) == {"a": 1, "b": 1}

    def test_all_empty(self):
        g = CongestionGame.symmetric(3, {"a": [1, 2, 3], "b": [1, 1, 1]}, [[], ["a"]])
        assert congestion(g, (0, 0, 0)) == {"a": 0, "b": 0}
        assert all(player_cost(g, (0, 0, 0), i) == 0 for i in range(3))

    def test_cost_shared(self, g1):
        assert player_cost(g1, (2, 2), 0) == -5

    def test_cost_alone(self, g1):
        assert player_cost(g1, (0, 1), 1) == -6

    @pytest.mark.parametrize("state", [(0,), (0, 3), (0, -1), (0, "1")])
    def test_invalid_state(self, g1, state):
        with pytest.raises(InvalidState):
            congestion(g1, state)

    def test_invalid_player(self, g1):
        with pytest.raises(InvalidState):
            player_cost(g1, (0, 0), 2)

    @settings(max_examples=40, deadline=None)
    @given(seed=st.integers(0, 10**6), n=st.integers(2, 5), m=st.integers(1, 6))
    def test_matches_reference_and_load_identity(self, seed, n, m):
        g = generate(GeneratorSpec("negative", n, m, min(4, 2**m - 1), 2, 9, seed))
        rng = random.Random(seed)
        state = tuple(rng.randrange(len(p)) for p in g.strategies)
        f = congestion(g, state)
        assert f == ref_congestion(g, state)
        assert sum(f.values()) == sum(len(g.strategies[i][k]) for i, k in enumerate(state))
        assert all(0 <= v <= n for v in f.values())
        for i in range(n):
            assert player_cost(g, state, i) == ref_cost(g, state, i)

    def test_permutation_covariance(self):
        g = generate(GeneratorSpec("positive", 4, 5, 6, 2, 10, 3))
        state = (0, 3, 5, 1)
        base = congestion(g, state)
        for perm in itertools.permutations(state):
            assert congestion(g, perm) == base


class TestClassify:
    def test_g1(self, g1):
        c = classify(g1)
        assert (c.positive, c.negative, c.non_alternating, c.flip) == (False, True, True, False)

    def test_flip_step(self):
        assert classify(one_edge([-1, -1, 1, 1])).flip

    def test_zero_breaks_templates(self):
        c = classify(one_edge([-1, 0, 1]))
        assert not c.non_alternating and not c.flip

    def test_flip_rational_c(self):
        assert classify(one_edge(["-3/2", "3/2"])).flip

    def test_all_negative_is_not_flip(self):
        assert not classify(one_edge([-2, -2])).flip

    def test_flip_with_k1_is_constant_positive(self):
        c = classify(one_edge([2, 2, 2]))
        assert c.flip and c.non_alternating and c.positive

    def test_positive_allows_zero(self):
        c = classify(one_edge([0, 2]))
        assert c.positive and not c.non_alternating


class TestAlphaBounded:
    def test_g1(self, g1):
        assert check_alpha_bounded(g1, 2)

    def test_positive_jump(self):
        g = one_edge([1, 3])
        assert not check_alpha_bounded(g, 2)
        assert check_alpha_bounded(g, 3)

    def test_constant_positive_alpha_one(self):
        assert check_alpha_bounded(one_edge([4, 4, 4]), 1)

    def test_zero_fails(self):
        assert not check_alpha_bounded(one_edge([0, 1]), 5)

    def test_mixed_sign_raises(self):
        with pytest.raises(MixedSignTable):
            check_alpha_bounded(one_edge([-1, 1]), 2)

    def test_alpha_below_one(self):
        with pytest.raises(AlphaOutOfRange):
            check_alpha_bounded(one_edge([1, 1]), "1/2")

    @settings(max_examples=60, deadline=None)
    @given(st.lists(st.integers(1, 6), min_size=2, max_size=4), st.booleans())
    def test_alpha_one_iff_constant(self, raw, negative):
        vals = sorted(raw)
        if negative:
            vals = sorted(-v for v in raw)
        g = one_edge(vals)
        assert check_alpha_bounded(g, 1) == (len(set(vals)) == 1)

    def test_tightest_alpha(self, g1):
        # 6/3 and 4/2 are both 2
        assert tightest_alpha(g1) == 2
        assert tightest_alpha(one_edge([2, 3, 6])) == 2
        assert tightest_alpha(one_edge([0, 1])) is None
