from __future__ import annotations

import pytest

from congestlab.dynamics import epsilon_moves
from congestlab.errors import AlphaOutOfRange, InfeasibleSpec, InputError, StateSpaceTooLarge
from congestlab.game import CongestionGame, check_alpha_bounded, classify, every_edge_used
from congestlab.oracle import (
    GeneratorSpec,
    Kind,
    all_states,
    enumerate_equilibria,
    generate,
    is_eps_equilibrium,
    violating_moves,
)
from congestlab.potentials import rosenthal_phi

from reference import ref_moves


class TestIsEpsEquilibrium:
    @pytest.mark.parametrize("eps", ["0", "1/100", "1/2", "99/100"])
    def test_g1_full_overlap(self, g1, eps):
        assert is_eps_equilibrium(g1, (2, 2), eps)

    def test_g1_start(self, g1):
        assert not is_eps_equilibrium(g1, (0, 0), "1/2")
        assert (0, 2, 6) in violating_moves(g1, (0, 0), "1/2")

    def test_single_strategy(self):
        g = CongestionGame.symmetric(3, {"a": [1, 5, 9]}, [["a"]])
        assert is_eps_equilibrium(g, (0, 0, 0), "1/10")
        assert is_eps_equilibrium(g, (0, 0, 0), 0)

    def test_violations_match_reference(self, g1):
        for s in all_states(g1):
            assert violating_moves(g1, s, "1/4") == ref_moves(g1, s, "1/4")

    def test_negative_epsilon(self, g1):
        with pytest.raises(InputError):
            is_eps_equilibrium(g1, (0, 0), "-1/2")


class TestEnumerate:
    def test_g1_pure(self, g1):
        eq = enumerate_equilibria(g1, 0)
        assert (2, 2) in eq
        assert eq == sorted(eq)

    def test_monotone_in_epsilon(self, g1, g2):
        for g in (g1, g2):
            assert set(enumerate_equilibria(g, "1/4")) <= set(enumerate_equilibria(g, "1/2"))

    def test_cap(self, g1):
        with pytest.raises(StateSpaceTooLarge):
            enumerate_equilibria(g1, "1/2", cap=8)
        assert enumerate_equilibria(g1, "1/2", cap=9)

    @pytest.mark.parametrize("seed", range(10))
    def test_pure_equals_local_minima_of_phi(self, seed):
        kind = "positive" if seed % 2 else "negative"
        g = generate(GeneratorSpec(kind, 3, 3, 4, 2, 10, seed))
        minima = []
        for s in all_states(g):
            here = rosenthal_phi(g, s)
            neighbours = (
                s[:i] + (t,) + s[i + 1 :] for i in range(g.n) for t in range(len(g.strategies[i]))
            )
            if all(rosenthal_phi(g, s2) >= here for s2 in neighbours):
                minima.append(s)
        assert enumerate_equilibria(g, 0) == minima

    @pytest.mark.parametrize("seed", range(5))
    def test_equilibria_have_no_moves(self, seed):
        g = generate(GeneratorSpec("negative", 3, 4, 5, 2, 12, seed))
        for s in enumerate_equilibria(g, "1/2"):
            assert epsilon_moves(g, s, "1/2") == []


class TestGenerate:
    @pytest.mark.parametrize("seed", range(5))
    def test_negative_example(self, seed):
        g = generate(GeneratorSpec("negative", 2, 2, 3, 2, 6, seed))
        assert classify(g).negative and check_alpha_bounded(g, 2)
        assert all(-tab.values[0] <= 6 for tab in g.tables)

    @pytest.mark.parametrize("alpha", ["1", "3/2", "2", "3"])
    @pytest.mark.parametrize("kind", ["positive", "negative"])
    def test_predicates(self, kind, alpha):
        for seed in range(10):
            g = generate(GeneratorSpec(kind, 4, 5, 7, alpha, 20, seed))
            c = classify(g)
            assert c.positive if kind == "positive" else c.negative
            assert check_alpha_bounded(g, alpha)
            assert g.is_symmetric and every_edge_used(g)
            zs = g.strategies[0]
            assert len(zs) == 7 and len(set(zs)) == 7 and all(zs)
            if kind == "positive":
                assert all(0 < tab.values[0] and tab.values[-1] <= 20 for tab in g.tables)

    def test_deterministic(self):
        spec = GeneratorSpec("positive", 3, 4, 5, "3/2", 9, 42)
        assert generate(spec) == generate(spec)
        assert generate(spec) != generate(GeneratorSpec("positive", 3, 4, 5, "3/2", 9, 43))

    def test_unit_magnitude(self):
        g = generate(GeneratorSpec("positive", 4, 3, 3, 3, 1, 0))
        assert all(list(tab.values) == [1, 1, 1, 1] for tab in g.tables)

    def test_too_many_strategies(self):
        with pytest.raises(InfeasibleSpec):
            generate(GeneratorSpec("negative", 2, 2, 4, 2, 6, 0))

    def test_all_subsets(self):
        g = generate(GeneratorSpec("negative", 2, 3, 7, 2, 6, 0))
        assert len(g.strategies[0]) == 7

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"kind": "mixed"},
            {"n": 1},
            {"m": 0},
            {"strategy_count": 0},
            {"max_magnitude": 0},
            {"seed": "x"},
            {"n": True},
        ],
    )
    def test_invalid_spec(self, kwargs):
        base = {"kind": "negative", "n": 2, "m": 2, "strategy_count": 2, "alpha": 2,
                "max_magnitude": 5, "seed": 0}
        with pytest.raises(InputError):
            GeneratorSpec(**{**base, **kwargs})

    def test_alpha_below_one(self):
        with pytest.raises(AlphaOutOfRange):
            GeneratorSpec(Kind.NEGATIVE, 2, 2, 2, "1/2", 5, 0)
