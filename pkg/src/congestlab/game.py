"""Exact congestion games: delay tables, games, states, congestion and costs.

Players are indexed from 0. Congestion levels (the argument of a delay
function) run from 1 to n, so ``table(t)`` is the delay when ``t`` players
share the edge. All numbers are ``fractions.Fraction``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping, Sequence, Union

from .errors import (
    AlphaOutOfRange,
    InputError,
    InvalidGame,
    InvalidState,
    MixedSignTable,
)

RationalLike = Union[int, Fraction, str]
Strategy = frozenset  # frozenset[str] of edge ids
State = tuple  # tuple[int, ...], one strategy index per player

_RATIONAL_RE = re.compile(r"[+-]?\d+(?:/\d+)?")


def parse_rational(value: RationalLike) -> Fraction:
    """Parse an exact rational from an int, a Fraction or a ``"p/q"`` string.

    Decimal and float inputs are rejected on purpose.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int) and not isinstance(value, bool):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if _RATIONAL_RE.fullmatch(text):
            try:
                return Fraction(text)
            except ZeroDivisionError:
                raise InputError(f"zero denominator in {value!r}") from None
    raise InputError(f"not an exact rational: {value!r}")


def format_rational(value: Fraction) -> str:
    return str(Fraction(value))


@dataclass(frozen=True)
class DelayTable:
    """Non-decreasing delay values ``d(1), ..., d(n)``."""

    values: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        vals = tuple(parse_rational(v) for v in self.values)
        object.__setattr__(self, "values", vals)
        if not vals:
            raise InvalidGame("delay table must not be empty")
        for t in range(1, len(vals)):
            if vals[t] < vals[t - 1]:
                raise InvalidGame(
                    f"delay table decreases between congestion {t} and {t + 1}"
                )

    def __call__(self, t: int) -> Fraction:
        if not 1 <= t <= len(self.values):
            raise IndexError(f"congestion {t} outside 1..{len(self.values)}")
        return self.values[t - 1]

    def __len__(self) -> int:
        return len(self.values)

    @property
    def is_positive(self) -> bool:
        return self.values[0] >= 0

    @property
    def is_negative(self) -> bool:
        return self.values[-1] < 0

    @property
    def is_single_signed(self) -> bool:
        """Entirely > 0 or entirely < 0 (zero breaks both)."""
        return self.values[0] > 0 or self.values[-1] < 0

    @property
    def is_flip(self) -> bool:
        # non-decreasing, so every value in {-c, c} with d(n) = c > 0 means
        # -c up to some level and c afterwards (possibly c throughout)
        c = self.values[-1]
        return c > 0 and all(v == c or v == -c for v in self.values)

    def scaled(self, factor: Fraction) -> DelayTable:
        return DelayTable(tuple(v * factor for v in self.values))


def _as_table(values: DelayTable | Sequence[RationalLike]) -> DelayTable:
    if isinstance(values, DelayTable):
        return values
    return DelayTable(tuple(values))


@dataclass(frozen=True)
class CongestionGame:
    """An n-player congestion game with explicitly enumerated strategies.

    ``strategies[i]`` lists the strategies available to player ``i``. When
    ``shared`` is true the game was declared symmetric and every player
    holds the same sequence. Use :meth:`symmetric` or :meth:`per_player`
    rather than the raw constructor.
    """

    n: int
    edges: tuple[tuple[str, DelayTable], ...]
    strategies: tuple[tuple[Strategy, ...], ...]
    shared: bool = False

    def __post_init__(self) -> None:
        if isinstance(self.n, bool) or not isinstance(self.n, int) or self.n < 2:
            raise InvalidGame(f"player count must be an integer >= 2, got {self.n!r}")
        edges = tuple((eid, _as_table(tab)) for eid, tab in self.edges)
        object.__setattr__(self, "edges", edges)
        seen: set[str] = set()
        for eid, tab in edges:
            if not isinstance(eid, str) or not eid:
                raise InvalidGame(f"edge ids must be non-empty strings, got {eid!r}")
            if eid in seen:
                raise InvalidGame(f"duplicate edge id {eid!r}")
            seen.add(eid)
            if len(tab) != self.n:
                raise InvalidGame(
                    f"edge {eid!r} has {len(tab)} delays, expected {self.n}"
                )
        sets = tuple(tuple(frozenset(s) for s in per) for per in self.strategies)
        object.__setattr__(self, "strategies", sets)
        if len(sets) != self.n:
            raise InvalidGame(f"expected {self.n} strategy sets, got {len(sets)}")
        for i, per in enumerate(sets):
            if not per:
                raise InvalidGame(f"player {i} has no strategies")
            for s in per:
                unknown = s - seen
                if unknown:
                    raise InvalidGame(f"strategy uses unknown edges {sorted(unknown)}")
        if self.shared and any(per != sets[0] for per in sets):
            raise InvalidGame("shared game with differing strategy sets")

    @classmethod
    def symmetric(
        cls,
        n: int,
        edges: Mapping[str, Sequence[RationalLike]] | Iterable[tuple[str, Sequence[RationalLike]]],
        strategies: Iterable[Iterable[str]],
    ) -> CongestionGame:
        pairs = tuple(edges.items()) if isinstance(edges, Mapping) else tuple(edges)
        z = tuple(frozenset(s) for s in strategies)
        return cls(n, pairs, (z,) * n, shared=True)

    @classmethod
    def per_player(
        cls,
        edges: Mapping[str, Sequence[RationalLike]] | Iterable[tuple[str, Sequence[RationalLike]]],
        strategy_sets: Sequence[Iterable[Iterable[str]]],
    ) -> CongestionGame:
        pairs = tuple(edges.items()) if isinstance(edges, Mapping) else tuple(edges)
        sets = tuple(tuple(frozenset(s) for s in per) for per in strategy_sets)
        return cls(len(sets), pairs, sets, shared=False)

    # -- derived data, computed once per game ------------------------------

    @property
    def m(self) -> int:
        return len(self.edges)

    @cached_property
    def edge_ids(self) -> tuple[str, ...]:
        return tuple(eid for eid, _ in self.edges)

    @cached_property
    def edge_index(self) -> dict[str, int]:
        return {eid: k for k, eid in enumerate(self.edge_ids)}

    @cached_property
    def tables(self) -> tuple[DelayTable, ...]:
        return tuple(tab for _, tab in self.edges)

    @cached_property
    def strategy_indices(self) -> tuple[tuple[tuple[int, ...], ...], ...]:
        """Per player, per strategy: sorted edge indices."""
        idx = self.edge_index
        return tuple(
            tuple(tuple(sorted(idx[e] for e in s)) for s in per)
            for per in self.strategies
        )

    @cached_property
    def prefix_sums(self) -> tuple[tuple[Fraction, ...], ...]:
        """``prefix_sums[e][f] = d_e(1) + ... + d_e(f)``."""
        out = []
        for tab in self.tables:
            acc = [Fraction(0)]
            for v in tab.values:
                acc.append(acc[-1] + v)
            out.append(tuple(acc))
        return tuple(out)

    @cached_property
    def k_const(self) -> Fraction:
        """The state-independent gap ``psi - phi``: minus the sum of all delays."""
        return -sum((p[-1] for p in self.prefix_sums), Fraction(0))

    @cached_property
    def is_symmetric(self) -> bool:
        return self.shared or all(per == self.strategies[0] for per in self.strategies)

    @cached_property
    def state_space_size(self) -> int:
        size = 1
        for per in self.strategies:
            size *= len(per)
        return size

    def table(self, edge_id: str) -> DelayTable:
        return self.tables[self.edge_index[edge_id]]

    def scaled(self, factor: RationalLike) -> CongestionGame:
        """The same game with every delay multiplied by ``factor``."""
        f = parse_rational(factor)
        edges = tuple((eid, tab.scaled(f)) for eid, tab in self.edges)
        return CongestionGame(self.n, edges, self.strategies, self.shared)


# -- states -----------------------------------------------------------------


def check_state(game: CongestionGame, state: Sequence[int]) -> State:
    """Validate ``state`` against ``game`` and return it as a tuple."""
    st = tuple(state)
    if len(st) != game.n:
        raise InvalidState(f"state has {len(st)} entries, game has {game.n} players")
    for i, k in enumerate(st):
        if isinstance(k, bool) or not isinstance(k, int) or not 0 <= k < len(game.strategies[i]):
            raise InvalidState(f"player {i}: strategy index {k!r} out of range")
    return st


def _check_player(game: CongestionGame, i: int) -> None:
    if not 0 <= i < game.n:
        raise InvalidState(f"player index {i} outside 0..{game.n - 1}")


def loads(game: CongestionGame, state: State) -> list[int]:
    """Congestion per edge index. ``state`` must already be valid."""
    f = [0] * game.m
    sidx = game.strategy_indices
    for i, k in enumerate(state):
        for e in sidx[i][k]:
            f[e] += 1
    return f


def congestion(game: CongestionGame, state: Sequence[int]) -> dict[str, int]:
    st = check_state(game, state)
    return dict(zip(game.edge_ids, loads(game, st)))


def strategy_of(game: CongestionGame, state: Sequence[int], i: int) -> Strategy:
    st = check_state(game, state)
    _check_player(game, i)
    return game.strategies[i][st[i]]


def player_cost(game: CongestionGame, state: Sequence[int], i: int) -> Fraction:
    """Sum of the delays, at current congestion, of the edges player ``i`` uses."""
    st = check_state(game, state)
    _check_player(game, i)
    f = loads(game, st)
    tabs = game.tables
    return sum((tabs[e].values[f[e] - 1] for e in game.strategy_indices[i][st[i]]), Fraction(0))


def all_costs(game: CongestionGame, state: Sequence[int]) -> list[Fraction]:
    st = check_state(game, state)
    f = loads(game, st)
    tabs = game.tables
    sidx = game.strategy_indices
    return [
        sum((tabs[e].values[f[e] - 1] for e in sidx[i][k]), Fraction(0))
        for i, k in enumerate(st)
    ]


# -- game classes -------------------------------------------------------------


@dataclass(frozen=True)
class GameClass:
    positive: bool
    negative: bool
    non_alternating: bool
    flip: bool


def classify(game: CongestionGame) -> GameClass:
    tabs = game.tables
    return GameClass(
        positive=all(t.is_positive for t in tabs),
        negative=all(t.is_negative for t in tabs),
        non_alternating=all(t.is_single_signed for t in tabs),
        flip=all(t.is_flip for t in tabs),
    )


def check_alpha(alpha: RationalLike) -> Fraction:
    a = parse_rational(alpha)
    if a < 1:
        raise AlphaOutOfRange(f"alpha must be >= 1, got {a}")
    return a


def _table_alpha_bounded(tab: DelayTable, alpha: Fraction) -> bool:
    vals = tab.values
    if vals[-1] < 0:
        return all(vals[t + 1] <= vals[t] / alpha for t in range(len(vals) - 1))
    if vals[0] < 0:
        raise MixedSignTable(f"delay table {[str(v) for v in vals]} changes sign")
    if vals[0] == 0:
        return False
    return all(vals[t + 1] <= alpha * vals[t] for t in range(len(vals) - 1))


def check_alpha_bounded(game: CongestionGame, alpha: RationalLike) -> bool:
    """Whether every delay table has alpha-bounded jump.

    Positive tables need ``d(t+1) <= alpha*d(t)`` and must avoid 0; negative
    tables need ``d(t+1) <= d(t)/alpha``. Sign-changing tables have no
    agreed definition and raise ``MixedSignTable``.
    """
    a = check_alpha(alpha)
    results = [_table_alpha_bounded(tab, a) for tab in game.tables]
    return all(results)


def tightest_alpha(game: CongestionGame) -> Fraction | None:
    """Smallest alpha >= 1 for which the game is alpha-bounded, if any."""
    best = Fraction(1)
    for tab in game.tables:
        vals = tab.values
        if vals[-1] < 0:
            ratios = [vals[t] / vals[t + 1] for t in range(len(vals) - 1)]
        elif vals[0] > 0:
            ratios = [vals[t + 1] / vals[t] for t in range(len(vals) - 1)]
        elif vals[0] < 0:
            raise MixedSignTable(f"delay table {[str(v) for v in vals]} changes sign")
        else:
            return None
        best = max([best, *ratios])
    return best


def every_edge_used(game: CongestionGame) -> bool:
    used: set[str] = set()
    for per in game.strategies:
        for s in per:
            used |= s
    return len(used) == game.m
