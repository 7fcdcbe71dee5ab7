"""Game transformations that carry approximate equilibria back to the source.

* :func:`symmetrize` turns a positive game into a symmetric one by tagging
  each player's strategies with a private edge that is free alone and
  prohibitively expensive when shared.
* :func:`split_non_alternating` replaces each edge of a symmetric positive
  game by a bundle of single-signed, alpha-bounded edges whose delays add
  up to the original table.
* :func:`split_flip` does the same with flip tables, on the source delays
  doubled.

Gadget edge ids are ``<source>::1``, ``<source>::<k>+``, ``<source>::<k>-``
and ``@tag<i>``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Mapping, Sequence

from .dynamics import check_epsilon
from .errors import (
    AlphaOutOfRange,
    AmbiguousAssignment,
    BackMapMismatch,
    InvalidGame,
    NotPositiveGame,
    NotSymmetric,
)
from .game import (
    CongestionGame,
    DelayTable,
    RationalLike,
    State,
    all_costs,
    check_state,
    classify,
    parse_rational,
)
from .oracle import all_states, enumerate_equilibria


class BackMap(str, Enum):
    IDENTITY = "identity"
    TAG_PULLBACK = "tag_pullback"


@dataclass(frozen=True)
class EdgeOrigin:
    """Where an edge of a transformed game comes from.

    ``role`` is ``"copy"`` (edge kept unchanged), ``"e1"``, ``"plus"``,
    ``"minus"`` or ``"tag"``. ``k`` is the congestion level a gadget edge
    emulates; ``player`` is the source player a tag edge belongs to.
    """

    source: str | None
    role: str
    k: int | None = None
    player: int | None = None


@dataclass(frozen=True)
class ReductionOutput:
    transformed: CongestionGame
    provenance: Mapping[str, EdgeOrigin]
    back_map_kind: BackMap
    scale: Fraction = Fraction(1)
    # for TAG_PULLBACK: (source player, index in that player's strategy set)
    # of every shared strategy of the transformed game
    tag_owners: tuple[tuple[int, int], ...] = field(default=())

    def __post_init__(self) -> None:
        ids = set(self.transformed.edge_ids)
        if set(self.provenance) != ids:
            raise InvalidGame("provenance must cover exactly the transformed edges")


def tag_edge(i: int) -> str:
    return f"@tag{i}"


def symmetrize(game: CongestionGame, epsilon: RationalLike) -> ReductionOutput:
    """Symmetric positive game whose epsilon-equilibria pull back to ``game``'s.

    Every strategy of player ``i`` gets the tag edge ``@tag<i>``, with delay
    0 when used alone and ``D / (1 - epsilon)`` when shared, where ``D`` is
    the sum over edges of ``d_e(n)``.
    """
    eps = check_epsilon(epsilon)
    if not classify(game).positive:
        raise NotPositiveGame("symmetrize needs non-negative delays")
    n = game.n
    big_d = sum((tab.values[-1] for tab in game.tables), Fraction(0))
    shared_delay = big_d / (1 - eps)
    tags = [tag_edge(i) for i in range(n)]
    clash = set(tags) & set(game.edge_ids)
    if clash:
        raise InvalidGame(f"edge ids {sorted(clash)} collide with tag edges")
    edges = list(game.edges)
    edges += [(tag, DelayTable((Fraction(0),) + (shared_delay,) * (n - 1))) for tag in tags]
    strategies = []
    owners = []
    for i, per in enumerate(game.strategies):
        for k, s in enumerate(per):
            strategies.append(s | {tags[i]})
            owners.append((i, k))
    provenance = {eid: EdgeOrigin(eid, "copy") for eid in game.edge_ids}
    provenance.update({tag: EdgeOrigin(None, "tag", player=i) for i, tag in enumerate(tags)})
    return ReductionOutput(
        transformed=CongestionGame.symmetric(n, edges, strategies),
        provenance=provenance,
        back_map_kind=BackMap.TAG_PULLBACK,
        tag_owners=tuple(owners),
    )


def pull_back_symmetric(output: ReductionOutput, state_prime: Sequence[int]) -> State:
    """Source state whose player ``i`` plays what the holder of ``@tag<i>`` plays.

    Raises ``AmbiguousAssignment`` unless every tag is carried by exactly
    one player, which is guaranteed only at epsilon-equilibria.
    """
    if output.back_map_kind is not BackMap.TAG_PULLBACK:
        raise BackMapMismatch("pull-back needs a tag_pullback reduction")
    st = check_state(output.transformed, state_prime)
    n = output.transformed.n
    holders: list[list[int]] = [[] for _ in range(n)]
    for j, k in enumerate(st):
        holders[output.tag_owners[k][0]].append(j)
    source = []
    for i, carriers in enumerate(holders):
        if len(carriers) != 1:
            raise AmbiguousAssignment(
                f"tag edge {tag_edge(i)} carried by {len(carriers)} players"
            )
        source.append(output.tag_owners[st[carriers[0]]][1])
    return tuple(source)


# -- edge splitting -----------------------------------------------------------


def _check_splittable(game: CongestionGame) -> None:
    if not classify(game).positive:
        raise NotPositiveGame("splitting needs non-negative delays")
    if not game.is_symmetric:
        raise NotSymmetric("splitting needs a symmetric game")


def _split(game: CongestionGame, gadget, scale: Fraction) -> ReductionOutput:
    n = game.n
    edges: list[tuple[str, DelayTable]] = []
    provenance: dict[str, EdgeOrigin] = {}
    bundles: dict[str, list[str]] = {}
    for eid, tab in game.edges:
        d = [v * scale for v in tab.values]
        bundle = []
        # zero tables are neither positive nor negative: leave them out,
        # which keeps the column sums unchanged
        if d[0] != 0:
            bundle.append((f"{eid}::1", EdgeOrigin(eid, "e1", k=1), (d[0],) * n))
        for k in range(2, n + 1):
            jump = d[k - 1] - d[k - 2]
            if jump == 0:
                continue
            plus, minus = gadget(jump, k, n)
            bundle.append((f"{eid}::{k}+", EdgeOrigin(eid, "plus", k=k), plus))
            bundle.append((f"{eid}::{k}-", EdgeOrigin(eid, "minus", k=k), minus))
        for new_id, origin, values in bundle:
            edges.append((new_id, DelayTable(values)))
            provenance[new_id] = origin
        bundles[eid] = [b[0] for b in bundle]
    if len(provenance) != len(edges):
        raise InvalidGame("gadget edge ids collide; rename source edges")
    strategies = [
        frozenset(x for e in z for x in bundles[e]) for z in game.strategies[0]
    ]
    return ReductionOutput(
        transformed=CongestionGame.symmetric(n, edges, strategies),
        provenance=provenance,
        back_map_kind=BackMap.IDENTITY,
        scale=scale,
    )


def split_non_alternating(game: CongestionGame, alpha: RationalLike) -> ReductionOutput:
    """Symmetric non-alternating alpha-bounded game with identical costs."""
    a = parse_rational(alpha)
    if a <= 1:
        raise AlphaOutOfRange(f"splitting needs alpha > 1, got {a}")
    _check_splittable(game)
    denom = a * a - 1

    def gadget(jump: Fraction, k: int, n: int):
        plus = tuple(jump * a / denom if t < k else jump * a * a / denom for t in range(1, n + 1))
        minus = tuple(-jump * a / denom if t < k else -jump / denom for t in range(1, n + 1))
        return plus, minus

    return _split(game, gadget, Fraction(1))


def split_flip(game: CongestionGame) -> ReductionOutput:
    """Symmetric flip game whose costs are exactly twice the source costs."""
    _check_splittable(game)

    def gadget(jump: Fraction, k: int, n: int):
        half = jump / 2
        plus = (half,) * n
        minus = tuple(-half if t < k else half for t in range(1, n + 1))
        return plus, minus

    return _split(game, gadget, Fraction(2))


# -- verification -------------------------------------------------------------


def cost_preservation_failures(
    game: CongestionGame,
    output: ReductionOutput,
    samples: int | str = "exhaustive",
    seed: int = 0,
) -> list[str]:
    """Describe every broken column-sum or cost equality (empty list: all hold).

    Column sums: for each source edge and level ``t``, the delays of its
    gadget edges add up to ``scale * d_e(t)``. Costs: every player pays
    ``scale`` times the source cost in the corresponding state. States are
    all of them for ``samples="exhaustive"``, else that many random ones.
    """
    if output.back_map_kind is not BackMap.IDENTITY:
        raise BackMapMismatch("cost preservation needs an identity-mapped reduction")
    g2 = output.transformed
    failures = []
    if g2.n != game.n or [len(p) for p in g2.strategies] != [len(p) for p in game.strategies]:
        return ["state spaces differ in shape"]
    for eid, origin in output.provenance.items():
        if origin.source not in game.edge_index:
            failures.append(f"edge {eid} has unknown source {origin.source!r}")
    for eid, tab in game.edges:
        parts = [g2.table(x) for x, o in output.provenance.items() if o.source == eid]
        for t in range(1, game.n + 1):
            total = sum((p(t) for p in parts), Fraction(0))
            if total != output.scale * tab(t):
                failures.append(f"edge {eid}, t={t}: gadget sum {total} != {output.scale * tab(t)}")
    if samples == "exhaustive":
        states = all_states(game)
    else:
        rng = random.Random(seed)
        states = (
            tuple(rng.randrange(len(per)) for per in game.strategies)
            for _ in range(int(samples))
        )
    for s in states:
        c, c2 = all_costs(game, s), all_costs(g2, s)
        for i in range(game.n):
            if c2[i] != output.scale * c[i]:
                failures.append(f"state {s}, player {i}: cost {c2[i]} != {output.scale * c[i]}")
    return failures


def verify_cost_preservation(
    game: CongestionGame,
    output: ReductionOutput,
    samples: int | str = "exhaustive",
    seed: int = 0,
) -> bool:
    return not cost_preservation_failures(game, output, samples, seed)


@dataclass(frozen=True)
class CorrespondenceReport:
    """Oracle comparison of epsilon-equilibria across a reduction.

    ``forward`` lists transformed-game equilibria that do not map to source
    equilibria (for tag reductions: that fail to pull back or pull back to
    a non-equilibrium); ``reverse`` lists source equilibria whose image is
    not an equilibrium (identity reductions only).
    """

    forward: tuple[State, ...]
    reverse: tuple[State, ...]

    @property
    def ok(self) -> bool:
        return not self.forward and not self.reverse


def equilibrium_correspondence(
    game: CongestionGame, output: ReductionOutput, epsilon: RationalLike
) -> CorrespondenceReport:
    eq_prime = enumerate_equilibria(output.transformed, epsilon)
    eq_source = set(enumerate_equilibria(game, epsilon))
    if output.back_map_kind is BackMap.IDENTITY:
        forward = tuple(s for s in eq_prime if s not in eq_source)
        prime_set = set(eq_prime)
        reverse = tuple(s for s in sorted(eq_source) if s not in prime_set)
        return CorrespondenceReport(forward, reverse)
    bad = []
    for s in eq_prime:
        try:
            pulled = pull_back_symmetric(output, s)
        except AmbiguousAssignment:
            bad.append(s)
            continue
        if pulled not in eq_source:
            bad.append(s)
    return CorrespondenceReport(tuple(bad), ())
