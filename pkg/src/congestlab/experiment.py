"""Parameter sweeps over generated games, one dynamics run per cell and seed."""

from __future__ import annotations

import csv
import io
import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Iterator, Sequence

from .dynamics import (
    check_epsilon,
    contraction_hypotheses_hold,
    random_state,
    run_dynamics,
    step_bound_estimate,
)
from .errors import InputError
from .game import format_rational, parse_rational
from .oracle import GeneratorSpec, Kind, generate

RESULT_COLUMNS = [
    "n", "m", "alpha", "epsilon", "D", "seed",
    "steps", "converged", "bound_estimate", "max_contraction_ratio",
]


@dataclass(frozen=True)
class Cell:
    spec: GeneratorSpec
    epsilon: Fraction
    max_steps: int
    init: str


@dataclass(frozen=True)
class ExperimentConfig:
    """Cartesian sweep. ``seeds`` is the list of generator seeds per cell.

    With ``init="random"`` each run starts from a random state drawn with the
    run's seed; ``"default"`` starts everyone on strategy 0.
    """

    n: tuple[int, ...]
    m: tuple[int, ...]
    strategy_count: tuple[int, ...]
    alpha: tuple[Fraction, ...]
    epsilon: tuple[Fraction, ...]
    D: tuple[int, ...]
    seeds: tuple[int, ...]
    max_steps: int = 100_000
    kind: Kind = Kind.NEGATIVE
    init: str = "default"

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> ExperimentConfig:
        def ints(key: str) -> tuple[int, ...]:
            value = data[key]
            values = value if isinstance(value, list) else [value]
            if not all(isinstance(v, int) and not isinstance(v, bool) for v in values):
                raise InputError(f"{key} must be integers, got {value!r}")
            return tuple(values)

        def rationals(key: str) -> tuple[Fraction, ...]:
            value = data[key]
            values = value if isinstance(value, list) else [value]
            return tuple(parse_rational(v) for v in values)

        try:
            seeds = data.get("seeds", 1)
            seed_list = tuple(range(seeds)) if isinstance(seeds, int) else tuple(seeds)
            cfg = cls(
                n=ints("n"),
                m=ints("m"),
                strategy_count=ints("strategy_count"),
                alpha=rationals("alpha"),
                epsilon=rationals("epsilon"),
                D=ints("D"),
                seeds=seed_list,
                max_steps=int(data.get("max_steps", 100_000)),
                kind=Kind(data.get("kind", "negative")),
                init=data.get("init", "default"),
            )
        except KeyError as exc:
            raise InputError(f"experiment config misses {exc}") from None
        except (TypeError, ValueError) as exc:
            if isinstance(exc, InputError):
                raise
            raise InputError(f"bad experiment config: {exc}") from None
        if cfg.init not in ("default", "random"):
            raise InputError(f"init must be 'default' or 'random', got {cfg.init!r}")
        if cfg.max_steps < 0:
            raise InputError("max_steps must be >= 0")
        for eps in cfg.epsilon:
            check_epsilon(eps)
        # validates every cell against the generator's invariants
        list(cfg.cells())
        return cfg

    def cells(self) -> Iterator[Cell]:
        grid = itertools.product(
            self.n, self.m, self.strategy_count, self.alpha, self.epsilon, self.D, self.seeds
        )
        for n, m, count, alpha, eps, big_d, seed in grid:
            spec = GeneratorSpec(self.kind, n, m, count, alpha, big_d, seed)
            yield Cell(spec, eps, self.max_steps, self.init)


def run_cell(cell: Cell) -> dict[str, str]:
    spec = cell.spec
    game = generate(spec)
    initial = random_state(game, spec.seed) if cell.init == "random" else None
    trace = run_dynamics(game, initial, cell.epsilon, cell.max_steps)
    bound = ""
    if contraction_hypotheses_hold(game, spec.alpha):
        bound = str(step_bound_estimate(game, cell.epsilon, spec.alpha))
    ratio = trace.max_contraction_ratio()
    return {
        "n": str(spec.n),
        "m": str(spec.m),
        "alpha": format_rational(spec.alpha),
        "epsilon": format_rational(cell.epsilon),
        "D": str(spec.max_magnitude),
        "seed": str(spec.seed),
        "steps": str(len(trace.steps)),
        "converged": "true" if trace.converged else "false",
        "bound_estimate": bound,
        "max_contraction_ratio": "" if ratio is None else format_rational(ratio),
    }


def run_experiment(config: ExperimentConfig, jobs: int = 1) -> list[dict[str, str]]:
    """Rows in sweep order, whatever the number of worker processes."""
    cells = list(config.cells())
    if jobs <= 1:
        return [run_cell(c) for c in cells]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(run_cell, cells))


def results_to_csv(rows: Sequence[dict[str, str]]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=RESULT_COLUMNS, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return buf.getvalue()
