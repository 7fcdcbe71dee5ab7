"""Command-line interface.

Exit codes: 0 success, 1 dynamics hit the step limit, 2 invalid arguments
or input files, 3 precondition failure, 4 verification failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Sequence

from . import serialization as ser
from .dynamics import (
    check_epsilon,
    contraction_hypotheses_hold,
    random_state,
    run_dynamics,
    step_bound_estimate,
)
from .errors import InputError, InvalidGame, PreconditionError
from .experiment import ExperimentConfig, results_to_csv, run_experiment
from .game import classify, format_rational, parse_rational, tightest_alpha
from .oracle import (
    DEFAULT_STATE_CAP,
    GeneratorSpec,
    enumerate_equilibria,
    generate,
    is_eps_equilibrium,
    violating_moves,
)
from .potentials import psi
from .reductions import (
    BackMap,
    cost_preservation_failures,
    equilibrium_correspondence,
    split_flip,
    split_non_alternating,
    symmetrize,
)

EXIT_OK = 0
EXIT_STEP_LIMIT = 1
EXIT_USAGE = 2
EXIT_PRECONDITION = 3
EXIT_VERIFY = 4


def _rational_arg(text: str):
    try:
        return parse_rational(text)
    except InputError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _write(path: str, text: str) -> None:
    Path(path).write_text(text)


def cmd_generate(args: argparse.Namespace) -> int:
    spec = GeneratorSpec(
        kind=args.kind,
        n=args.players,
        m=args.edges,
        strategy_count=args.strategies,
        alpha=args.alpha,
        max_magnitude=args.max_delay,
        seed=args.seed,
    )
    game = generate(spec)
    _write(args.out, ser.game_to_json(game))
    print(f"wrote {args.out}: {game.n} players, {game.m} edges, {len(game.strategies[0])} strategies")
    return EXIT_OK


def _initial_state(game, init: str):
    if init == "default":
        return None
    kind, _, seed = init.partition(":")
    if kind != "random" or not seed.lstrip("-").isdigit():
        raise InputError(f"--init must be 'default' or 'random:<seed>', got {init!r}")
    return random_state(game, int(seed))


def cmd_run(args: argparse.Namespace) -> int:
    game = ser.load_game(args.game)
    eps = check_epsilon(args.epsilon)
    initial = _initial_state(game, args.init)
    trace = run_dynamics(game, initial, eps, args.max_steps)
    if args.trace:
        _write(args.trace, ser.trace_to_csv(trace))
    print(f"outcome: {trace.outcome.value}")
    print(f"steps: {len(trace.steps)}")
    print(f"final_state: {ser.format_state(trace.final)}")
    print(f"psi_initial: {format_rational(psi(game, trace.initial))}")
    print(f"psi_final: {format_rational(psi(game, trace.final))}")
    if classify(game).negative:
        alpha = args.alpha if args.alpha is not None else tightest_alpha(game)
        if alpha >= 1 and contraction_hypotheses_hold(game, alpha):
            print(f"alpha: {format_rational(alpha)}")
            print(f"step_bound_estimate: {step_bound_estimate(game, eps, alpha)}")
    return EXIT_OK if trace.converged else EXIT_STEP_LIMIT


def cmd_reduce(args: argparse.Namespace) -> int:
    game = ser.load_game(args.game)
    if args.method == "symmetrize":
        if args.epsilon is None:
            raise InputError("--epsilon is required for symmetrize")
        output = symmetrize(game, args.epsilon)
    elif args.method == "nonalt":
        if args.alpha is None:
            raise InputError("--alpha is required for nonalt")
        output = split_non_alternating(game, args.alpha)
    else:
        output = split_flip(game)
    _write(args.out, ser.game_to_json(output.transformed))
    _write(args.map, ser.dumps_json(ser.map_to_dict(output)))
    print(f"wrote {args.out} ({output.transformed.m} edges) and {args.map}")
    return EXIT_OK


def _verify_state(args: argparse.Namespace) -> int:
    game = ser.load_game(args.game)
    state = ser.parse_state(args.state)
    eps = check_epsilon(args.epsilon, allow_zero=True)
    if is_eps_equilibrium(game, state, eps):
        print("verdict: equilibrium")
        return EXIT_OK
    print("verdict: not an equilibrium")
    for player, strategy, gain in violating_moves(game, state, eps):
        print(f"  player {player} -> strategy {strategy}: gain {format_rational(gain)}")
    return EXIT_VERIFY


def _verify_reduction(args: argparse.Namespace) -> int:
    game = ser.load_game(args.game)
    reduced = ser.load_game(args.reduced)
    try:
        map_data = json.loads(Path(args.map).read_text())
    except json.JSONDecodeError as exc:
        raise InvalidGame(f"invalid map JSON: {exc}") from None
    output = ser.map_from_dict(map_data, reduced)
    ok = True
    if output.back_map_kind is BackMap.IDENTITY:
        samples = args.samples
        if samples != "exhaustive":
            if not samples.isdigit():
                raise InputError(f"--samples must be 'exhaustive' or a count, got {samples!r}")
            samples = int(samples)
        failures = cost_preservation_failures(game, output, samples)
        for line in failures:
            print(f"  {line}")
        print(f"cost preservation: {'ok' if not failures else 'FAILED'}")
        ok = not failures
    elif args.epsilon is None:
        raise InputError("--epsilon is required to verify a tag_pullback reduction")
    if args.epsilon is not None:
        eps = check_epsilon(args.epsilon)
        report = equilibrium_correspondence(game, output, eps)
        for s in report.forward:
            print(f"  transformed equilibrium {ser.format_state(s)} does not map back")
        for s in report.reverse:
            print(f"  source equilibrium {ser.format_state(s)} has no image")
        print(f"equilibrium correspondence: {'ok' if report.ok else 'FAILED'}")
        ok = ok and report.ok
    return EXIT_OK if ok else EXIT_VERIFY


def cmd_verify(args: argparse.Namespace) -> int:
    if args.reduced is not None:
        if args.map is None:
            raise InputError("--map is required with --reduced")
        return _verify_reduction(args)
    if args.state is None or args.epsilon is None:
        raise InputError("verify needs --state and --epsilon, or --reduced and --map")
    return _verify_state(args)


def cmd_oracle(args: argparse.Namespace) -> int:
    game = ser.load_game(args.game)
    eps = check_epsilon(args.epsilon, allow_zero=True)
    found = enumerate_equilibria(game, eps, cap=args.cap)
    print(f"equilibria: {len(found)} of {game.state_space_size} states")
    for s in found if args.all else found[:1]:
        print(ser.format_state(s))
    return EXIT_OK


def cmd_experiment(args: argparse.Namespace) -> int:
    try:
        data = json.loads(Path(args.config).read_text())
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid config JSON: {exc}") from None
    if not isinstance(data, dict):
        raise InputError("experiment config must be a JSON object")
    config = ExperimentConfig.from_dict(data)
    rows = run_experiment(config, jobs=args.jobs)
    _write(args.out, results_to_csv(rows))
    print(f"wrote {len(rows)} rows to {args.out}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="congestlab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="write a random symmetric game")
    p.add_argument("--kind", choices=["positive", "negative"], required=True)
    p.add_argument("--players", type=int, required=True)
    p.add_argument("--edges", type=int, required=True)
    p.add_argument("--strategies", type=int, required=True)
    p.add_argument("--alpha", type=_rational_arg, required=True)
    p.add_argument("--max-delay", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("run", help="run the largest-gain epsilon-dynamics")
    p.add_argument("--game", required=True)
    p.add_argument("--epsilon", type=_rational_arg, required=True)
    p.add_argument("--init", default="default", help="default | random:<seed>")
    p.add_argument("--max-steps", type=int, default=100_000)
    p.add_argument("--trace", help="write the step trace as CSV")
    p.add_argument("--alpha", type=_rational_arg, help="jump bound for the step estimate")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("reduce", help="apply a reduction gadget")
    p.add_argument("--game", required=True)
    p.add_argument("--method", choices=["symmetrize", "nonalt", "flip"], required=True)
    p.add_argument("--alpha", type=_rational_arg)
    p.add_argument("--epsilon", type=_rational_arg)
    p.add_argument("--out", required=True)
    p.add_argument("--map", required=True)
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("verify", help="check a state, or check a reduction")
    p.add_argument("--game", required=True)
    p.add_argument("--state", help="comma-separated strategy indices")
    p.add_argument("--epsilon", type=_rational_arg)
    p.add_argument("--reduced", help="transformed game written by 'reduce'")
    p.add_argument("--map", help="map written by 'reduce'")
    p.add_argument("--samples", default="exhaustive", help="exhaustive | number of random states")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("oracle", help="enumerate epsilon-equilibria by brute force")
    p.add_argument("--game", required=True)
    p.add_argument("--epsilon", type=_rational_arg, required=True)
    p.add_argument("--all", action="store_true", help="print every equilibrium")
    p.add_argument("--cap", type=int, default=DEFAULT_STATE_CAP)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("experiment", help="run a parameter sweep to CSV")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_experiment)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse already printed usage; report its code instead of exiting
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except PreconditionError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
