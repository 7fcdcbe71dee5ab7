"""epsilon-moves and the largest-gain epsilon-Nash dynamics.

A switch of player ``i`` to strategy ``t`` is an epsilon-move when it lowers
the player's cost by strictly more than ``epsilon * |c_i(s)|``. The
dynamics repeatedly applies the move with the largest absolute gain; ties
go to the lowest player index, then the lowest strategy index.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterator, Sequence

from .errors import EpsilonOutOfRange, NotAlphaBounded, NotNegativeGame, NotSymmetric
from .game import (
    CongestionGame,
    RationalLike,
    State,
    check_alpha_bounded,
    check_state,
    classify,
    every_edge_used,
    loads,
    parse_rational,
)
from .potentials import psi_of_loads


@dataclass(frozen=True)
class Move:
    player: int
    new_strategy: int
    gain: Fraction


def check_epsilon(epsilon: RationalLike, allow_zero: bool = False) -> Fraction:
    eps = parse_rational(epsilon)
    low_ok = eps >= 0 if allow_zero else eps > 0
    if not (low_ok and eps < 1):
        bound = "[0, 1)" if allow_zero else "(0, 1)"
        raise EpsilonOutOfRange(f"epsilon must lie in {bound}, got {eps}")
    return eps


def deviation_costs(game: CongestionGame, state: State, i: int, f: list[int]) -> list[Fraction]:
    """Cost player ``i`` would pay for each of its strategies, others fixed.

    ``f`` is the congestion vector of ``state``; it is not modified.
    """
    sidx = game.strategy_indices[i]
    others = list(f)
    for e in sidx[state[i]]:
        others[e] -= 1
    vals = [tab.values for tab in game.tables]
    # joining an edge used by `others[e]` players puts it at others[e] + 1
    return [sum((vals[e][others[e]] for e in strat), Fraction(0)) for strat in sidx]


def _moves(game: CongestionGame, state: State, eps: Fraction, f: list[int]) -> Iterator[Move]:
    for i in range(game.n):
        costs = deviation_costs(game, state, i, f)
        current = costs[state[i]]
        threshold = eps * abs(current)
        for t, c in enumerate(costs):
            gain = current - c
            if gain > threshold:
                yield Move(i, t, gain)


def epsilon_moves(game: CongestionGame, state: Sequence[int], epsilon: RationalLike) -> list[Move]:
    """All epsilon-moves, sorted by gain (desc), then player, then strategy."""
    eps = check_epsilon(epsilon)
    st = check_state(game, state)
    moves = list(_moves(game, st, eps, loads(game, st)))
    moves.sort(key=lambda mv: (-mv.gain, mv.player, mv.new_strategy))
    return moves


def _best_move(game: CongestionGame, state: State, eps: Fraction, f: list[int]) -> Move | None:
    best = None
    # strict > keeps the earliest (lowest player, lowest strategy) among ties
    for mv in _moves(game, state, eps, f):
        if best is None or mv.gain > best.gain:
            best = mv
    return best


def _apply(state: State, move: Move) -> State:
    lst = list(state)
    lst[move.player] = move.new_strategy
    return tuple(lst)


def step_largest_gain(
    game: CongestionGame, state: Sequence[int], epsilon: RationalLike
) -> tuple[Move, State] | None:
    eps = check_epsilon(epsilon)
    st = check_state(game, state)
    mv = _best_move(game, st, eps, loads(game, st))
    if mv is None:
        return None
    return mv, _apply(st, mv)


class Outcome(str, Enum):
    CONVERGED = "converged"
    STEP_LIMIT = "step_limit"


@dataclass(frozen=True)
class Step:
    move: Move
    old_strategy: int
    psi_before: Fraction
    psi_after: Fraction


@dataclass(frozen=True)
class DynamicsTrace:
    initial: State
    steps: tuple[Step, ...]
    outcome: Outcome
    final: State

    @property
    def converged(self) -> bool:
        return self.outcome is Outcome.CONVERGED

    def states(self) -> Iterator[State]:
        """Every visited state, initial first."""
        st = self.initial
        yield st
        for step in self.steps:
            st = _apply(st, step.move)
            yield st

    def contraction_ratios(self) -> list[Fraction | None]:
        """``psi_after / psi_before`` per step; None where psi_before <= 0."""
        return [
            s.psi_after / s.psi_before if s.psi_before > 0 else None
            for s in self.steps
        ]

    def max_contraction_ratio(self) -> Fraction | None:
        ratios = [r for r in self.contraction_ratios() if r is not None]
        return max(ratios) if ratios else None


def default_state(game: CongestionGame) -> State:
    return (0,) * game.n


def random_state(game: CongestionGame, seed: int) -> State:
    rng = random.Random(seed)
    return tuple(rng.randrange(len(per)) for per in game.strategies)


def run_dynamics(
    game: CongestionGame,
    initial: Sequence[int] | None,
    epsilon: RationalLike,
    max_steps: int,
) -> DynamicsTrace:
    """Run the largest-gain epsilon-dynamics until no epsilon-move is left.

    ``initial=None`` starts every player on strategy 0. The run stops early
    with ``Outcome.STEP_LIMIT`` after ``max_steps`` moves. ``psi`` is
    recomputed from scratch after every move rather than updated by the
    gain, so traces can be used to check the potential identity.
    """
    eps = check_epsilon(epsilon)
    if max_steps < 0:
        raise ValueError(f"max_steps must be >= 0, got {max_steps}")
    st = default_state(game) if initial is None else check_state(game, initial)
    start = st
    f = loads(game, st)
    psi_now = psi_of_loads(game, f)
    steps: list[Step] = []
    while True:
        mv = _best_move(game, st, eps, f)
        if mv is None:
            return DynamicsTrace(start, tuple(steps), Outcome.CONVERGED, st)
        if len(steps) >= max_steps:
            return DynamicsTrace(start, tuple(steps), Outcome.STEP_LIMIT, st)
        sidx = game.strategy_indices[mv.player]
        old = st[mv.player]
        for e in sidx[old]:
            f[e] -= 1
        for e in sidx[mv.new_strategy]:
            f[e] += 1
        st = _apply(st, mv)
        psi_next = psi_of_loads(game, f)
        steps.append(Step(mv, old, psi_now, psi_next))
        psi_now = psi_next


# -- convergence bound for negative games -------------------------------------


def contraction_factor(n: int, m: int, alpha: RationalLike, epsilon: RationalLike) -> Fraction:
    """Per-step bound on ``psi_after / psi_before``: ``1 - eps / (4(alpha n^2 + n m))``."""
    a = parse_rational(alpha)
    eps = parse_rational(epsilon)
    return 1 - eps / (4 * (a * n * n + n * m))


def convergence_step_bound(
    n: int, m: int, magnitude: RationalLike, alpha: RationalLike, epsilon: RationalLike
) -> int:
    """``ceil(4(alpha n^2 + n m) / eps * ln(n m magnitude)) + 1``.

    With integer delays psi is a non-negative integer at most ``n m D``, so
    per-step contraction allows at most this many moves. Diagnostic only:
    the logarithm is evaluated in floating point.
    """
    a = parse_rational(alpha)
    eps = parse_rational(epsilon)
    mag = parse_rational(magnitude)
    log_term = math.log(n * m * mag) if n * m * mag > 1 else 0.0
    return math.ceil(float(4 * (a * n * n + n * m) / eps) * log_term) + 1


def contraction_hypotheses_hold(game: CongestionGame, alpha: RationalLike) -> bool:
    """Negative, symmetric, alpha-bounded, and every edge used by some strategy."""
    cls = classify(game)
    return (
        cls.negative
        and game.is_symmetric
        and check_alpha_bounded(game, alpha)
        and every_edge_used(game)
    )


def step_bound_estimate(game: CongestionGame, epsilon: RationalLike, alpha: RationalLike) -> int:
    """Upper estimate on dynamics length for a negative symmetric alpha-bounded game.

    ``D`` is the largest ``-d_e(1)``. Rational delays with common
    denominator ``q`` make psi a multiple of ``1/q``, so the logarithm uses
    ``n m D q``; for integer games this is the plain ``n m D``.
    """
    eps = check_epsilon(epsilon)
    if not classify(game).negative:
        raise NotNegativeGame("step bound needs every delay negative")
    if not game.is_symmetric:
        raise NotSymmetric("step bound needs a symmetric game")
    if not check_alpha_bounded(game, alpha):
        raise NotAlphaBounded(f"game is not {alpha}-bounded")
    big_d = max(-tab.values[0] for tab in game.tables)
    q = 1
    for tab in game.tables:
        for v in tab.values:
            q = q * v.denominator // math.gcd(q, v.denominator)
    return convergence_step_bound(game.n, game.m, big_d * q, alpha, eps)
