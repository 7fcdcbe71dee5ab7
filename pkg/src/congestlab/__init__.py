"""Exact congestion games with epsilon-Nash dynamics and reduction gadgets."""

from .dynamics import (
    DynamicsTrace,
    Move,
    Outcome,
    Step,
    contraction_factor,
    epsilon_moves,
    run_dynamics,
    step_bound_estimate,
    step_largest_gain,
)
from .errors import CongestionError, InputError, PreconditionError
from .game import (
    CongestionGame,
    DelayTable,
    GameClass,
    check_alpha_bounded,
    classify,
    congestion,
    parse_rational,
    player_cost,
)
from .oracle import GeneratorSpec, Kind, enumerate_equilibria, generate, is_eps_equilibrium
from .potentials import PotentialReport, potential_report, psi, psi_prime, rosenthal_phi
from .reductions import (
    BackMap,
    ReductionOutput,
    pull_back_symmetric,
    split_flip,
    split_non_alternating,
    symmetrize,
    verify_cost_preservation,
)

__version__ = "0.1.0"
