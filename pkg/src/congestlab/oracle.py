"""Brute-force equilibrium checks and seeded game generators.

The checks here recompute every cost from its definition via
``player_cost`` on the deviated state. They deliberately share no code
with the incremental deviation costs in :mod:`congestlab.dynamics`, so the
two can be used to cross-check each other.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterator, Sequence

from .dynamics import check_epsilon
from .errors import InfeasibleSpec, InputError, StateSpaceTooLarge
from .game import (
    CongestionGame,
    RationalLike,
    State,
    check_alpha,
    check_state,
    player_cost,
)

DEFAULT_STATE_CAP = 10**6


def _oracle_epsilon(epsilon: RationalLike) -> Fraction:
    return check_epsilon(epsilon, allow_zero=True)


def _deviate(state: State, i: int, t: int) -> State:
    return state[:i] + (t,) + state[i + 1 :]


def violating_moves(
    game: CongestionGame, state: Sequence[int], epsilon: RationalLike
) -> list[tuple[int, int, Fraction]]:
    """Every ``(player, strategy, gain)`` whose gain exceeds ``epsilon * |cost|``."""
    eps = _oracle_epsilon(epsilon)
    st = check_state(game, state)
    found = []
    for i in range(game.n):
        current = player_cost(game, st, i)
        for t in range(len(game.strategies[i])):
            gain = current - player_cost(game, _deviate(st, i, t), i)
            if gain > eps * abs(current):
                found.append((i, t, gain))
    return found


def is_eps_equilibrium(game: CongestionGame, state: Sequence[int], epsilon: RationalLike) -> bool:
    """True iff no player has an epsilon-move. ``epsilon = 0`` tests pure Nash."""
    eps = _oracle_epsilon(epsilon)
    st = check_state(game, state)
    for i in range(game.n):
        current = player_cost(game, st, i)
        threshold = eps * abs(current)
        for t in range(len(game.strategies[i])):
            if t != st[i] and current - player_cost(game, _deviate(st, i, t), i) > threshold:
                return False
    return True


def all_states(game: CongestionGame) -> Iterator[State]:
    """Every state, in lexicographic order of strategy indices."""
    return itertools.product(*(range(len(per)) for per in game.strategies))


def enumerate_equilibria(
    game: CongestionGame, epsilon: RationalLike, cap: int = DEFAULT_STATE_CAP
) -> list[State]:
    eps = _oracle_epsilon(epsilon)
    if game.state_space_size > cap:
        raise StateSpaceTooLarge(
            f"{game.state_space_size} states exceed the cap of {cap}"
        )
    return [s for s in all_states(game) if is_eps_equilibrium(game, s, eps)]


# -- generators -------------------------------------------------------------


class Kind(str, Enum):
    POSITIVE = "positive"
    NEGATIVE = "negative"


@dataclass(frozen=True)
class GeneratorSpec:
    kind: Kind
    n: int
    m: int
    strategy_count: int
    alpha: Fraction
    max_magnitude: int
    seed: int

    def __post_init__(self) -> None:
        try:
            object.__setattr__(self, "kind", Kind(self.kind))
        except ValueError:
            raise InputError(f"unknown kind {self.kind!r}") from None
        object.__setattr__(self, "alpha", check_alpha(self.alpha))
        for name, low in (("n", 2), ("m", 1), ("strategy_count", 1), ("max_magnitude", 1)):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, int) or value < low:
                raise InputError(f"{name} must be an integer >= {low}, got {value!r}")
        if isinstance(self.seed, bool) or not isinstance(self.seed, int):
            raise InputError(f"seed must be an integer, got {self.seed!r}")


def _positive_table(rng: random.Random, n: int, alpha: Fraction, big_d: int) -> list[int]:
    d = rng.randint(1, big_d)
    vals = [d]
    for _ in range(n - 1):
        d = rng.randint(d, min(math.floor(alpha * d), big_d))
        vals.append(d)
    return vals


def _negative_table(rng: random.Random, n: int, alpha: Fraction, big_d: int) -> list[int]:
    # floor(d / alpha) lies in [d, -1] for any integer d <= -1 and alpha >= 1,
    # so an integer successor always exists
    d = rng.randint(-big_d, -1)
    vals = [d]
    for _ in range(n - 1):
        d = rng.randint(d, math.floor(Fraction(d) / alpha))
        vals.append(d)
    return vals


def _strategy_masks(rng: random.Random, m: int, count: int) -> list[int]:
    if count > 2**m - 1:
        raise InfeasibleSpec(
            f"{count} distinct non-empty strategies impossible over {m} edges"
        )
    for _ in range(1000):
        masks = rng.sample(range(1, 2**m), count)
        covered = 0
        for mask in masks:
            covered |= mask
        for e in range(m):
            if not covered >> e & 1:
                masks[rng.randrange(count)] |= 1 << e
        if len(set(masks)) == count:
            return masks
    raise InfeasibleSpec(f"could not cover {m} edges with {count} distinct strategies")


def generate(spec: GeneratorSpec) -> CongestionGame:
    """A random symmetric game with the sign and jump bound requested by ``spec``.

    Tables are integer valued. Every edge belongs to at least one strategy
    and strategies are distinct and non-empty. The result depends only on
    the spec.
    """
    rng = random.Random(spec.seed)
    make = _positive_table if spec.kind is Kind.POSITIVE else _negative_table
    edges = [
        (f"e{k}", make(rng, spec.n, spec.alpha, spec.max_magnitude))
        for k in range(spec.m)
    ]
    masks = _strategy_masks(rng, spec.m, spec.strategy_count)
    strategies = [[f"e{k}" for k in range(spec.m) if mask >> k & 1] for mask in masks]
    return CongestionGame.symmetric(spec.n, edges, strategies)
