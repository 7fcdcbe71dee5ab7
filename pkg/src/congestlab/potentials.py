"""Rosenthal's potential and the shifted potentials used for negative games.

``phi`` sums each edge's delays up to its congestion; ``psi`` sums (with a
minus sign) the delays above it, so ``psi - phi`` is the same constant for
every state and both are exact potentials. ``psi_prime`` is ``psi``
restricted to edges that carry at least one player.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .game import CongestionGame, check_state, loads


@dataclass(frozen=True)
class PotentialReport:
    phi: Fraction
    psi: Fraction
    psi_prime: Fraction
    k_const: Fraction


def phi_of_loads(game: CongestionGame, f: list[int]) -> Fraction:
    pre = game.prefix_sums
    return sum((pre[e][f[e]] for e in range(game.m)), Fraction(0))


def psi_of_loads(game: CongestionGame, f: list[int], congested_only: bool = False) -> Fraction:
    pre = game.prefix_sums
    n = game.n
    total = Fraction(0)
    for e in range(game.m):
        if congested_only and f[e] == 0:
            continue
        # f = n gives the empty sum
        total += pre[e][n] - pre[e][f[e]]
    return -total


def rosenthal_phi(game: CongestionGame, state: Sequence[int]) -> Fraction:
    return phi_of_loads(game, loads(game, check_state(game, state)))


def psi(game: CongestionGame, state: Sequence[int]) -> Fraction:
    return psi_of_loads(game, loads(game, check_state(game, state)))


def psi_prime(game: CongestionGame, state: Sequence[int]) -> Fraction:
    return psi_of_loads(game, loads(game, check_state(game, state)), congested_only=True)


def potential_report(game: CongestionGame, state: Sequence[int]) -> PotentialReport:
    f = loads(game, check_state(game, state))
    return PotentialReport(
        phi=phi_of_loads(game, f),
        psi=psi_of_loads(game, f),
        psi_prime=psi_of_loads(game, f, congested_only=True),
        k_const=game.k_const,
    )
