"""File formats: game JSON, reduction map JSON and dynamics trace CSV.

Rationals are always written as ``"p"`` or ``"p/q"`` strings.
"""

from __future__ import annotations

import csv
import io
import json
from pathlib import Path
from typing import Any

from .dynamics import DynamicsTrace
from .errors import InvalidGame, InvalidState
from .game import CongestionGame, format_rational, parse_rational
from .reductions import BackMap, EdgeOrigin, ReductionOutput

TRACE_HEADER = ["step", "player", "old_strategy", "new_strategy", "gain", "psi_before", "psi_after"]


def _ordered(game: CongestionGame, strategy: frozenset) -> list[str]:
    return [eid for eid in game.edge_ids if eid in strategy]


def game_to_dict(game: CongestionGame) -> dict[str, Any]:
    out: dict[str, Any] = {
        "players": game.n,
        "edges": [
            {"id": eid, "delays": [format_rational(v) for v in tab.values]}
            for eid, tab in game.edges
        ],
    }
    if game.shared:
        out["strategies"] = {"shared": [_ordered(game, s) for s in game.strategies[0]]}
    else:
        out["strategies"] = {
            "per_player": [[_ordered(game, s) for s in per] for per in game.strategies]
        }
    return out


def game_from_dict(data: Any) -> CongestionGame:
    try:
        n = data["players"]
        edges = [(e["id"], [parse_rational(v) for v in e["delays"]]) for e in data["edges"]]
        strategies = data["strategies"]
        keys = set(strategies)
        if keys == {"shared"}:
            return CongestionGame.symmetric(n, edges, strategies["shared"])
        if keys == {"per_player"}:
            game = CongestionGame.per_player(edges, strategies["per_player"])
            if game.n != n:
                raise InvalidGame(f"players={n} but {game.n} strategy sets given")
            return game
    except (KeyError, TypeError) as exc:
        raise InvalidGame(f"malformed game document: {exc!r}") from None
    raise InvalidGame("strategies must hold exactly one of 'shared' or 'per_player'")


def dumps_json(data: Any) -> str:
    return json.dumps(data, indent=2) + "\n"


def game_to_json(game: CongestionGame) -> str:
    return dumps_json(game_to_dict(game))


def game_from_json(text: str) -> CongestionGame:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidGame(f"invalid JSON: {exc}") from None
    return game_from_dict(data)


def load_game(path: str | Path) -> CongestionGame:
    return game_from_json(Path(path).read_text())


def save_game(game: CongestionGame, path: str | Path) -> None:
    Path(path).write_text(game_to_json(game))


# -- reduction maps -----------------------------------------------------------


def _origin_to_dict(origin: EdgeOrigin) -> dict[str, Any]:
    out: dict[str, Any] = {"source": origin.source, "role": origin.role}
    if origin.k is not None:
        out["k"] = origin.k
    if origin.player is not None:
        out["player"] = origin.player
    return out


def map_to_dict(output: ReductionOutput) -> dict[str, Any]:
    out: dict[str, Any] = {
        "edges": {eid: _origin_to_dict(o) for eid, o in output.provenance.items()},
        "back_map": output.back_map_kind.value,
        "scale": format_rational(output.scale),
    }
    if output.back_map_kind is BackMap.TAG_PULLBACK:
        out["tag_owners"] = [list(pair) for pair in output.tag_owners]
    return out


def map_from_dict(data: Any, transformed: CongestionGame) -> ReductionOutput:
    try:
        provenance = {
            eid: EdgeOrigin(o["source"], o["role"], o.get("k"), o.get("player"))
            for eid, o in data["edges"].items()
        }
        kind = BackMap(data["back_map"])
        scale = parse_rational(data.get("scale", "1"))
        owners = tuple(tuple(pair) for pair in data.get("tag_owners", ()))
    except (KeyError, TypeError, ValueError, AttributeError) as exc:
        raise InvalidGame(f"malformed reduction map: {exc!r}") from None
    return ReductionOutput(transformed, provenance, kind, scale, owners)


# -- traces -------------------------------------------------------------------


def trace_to_csv(trace: DynamicsTrace) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(TRACE_HEADER)
    for k, step in enumerate(trace.steps, start=1):
        writer.writerow([
            k,
            step.move.player,
            step.old_strategy,
            step.move.new_strategy,
            format_rational(step.move.gain),
            format_rational(step.psi_before),
            format_rational(step.psi_after),
        ])
    return buf.getvalue()


def read_trace_csv(text: str) -> list[dict[str, Any]]:
    """Parse a trace back into rows of ints and Fractions."""
    rows = []
    for row in csv.DictReader(io.StringIO(text)):
        rows.append({
            "step": int(row["step"]),
            "player": int(row["player"]),
            "old_strategy": int(row["old_strategy"]),
            "new_strategy": int(row["new_strategy"]),
            "gain": parse_rational(row["gain"]),
            "psi_before": parse_rational(row["psi_before"]),
            "psi_after": parse_rational(row["psi_after"]),
        })
    return rows


def parse_state(text: str) -> tuple[int, ...]:
    """``"0,2,1"`` -> ``(0, 2, 1)``."""
    try:
        return tuple(int(part) for part in text.split(","))
    except ValueError:
        raise InvalidState(f"state must be comma-separated indices, got {text!r}") from None


def format_state(state: tuple[int, ...]) -> str:
    return ",".join(str(k) for k in state)

