"""Reading and writing games as JSON.

Layout::

    {
      "schema_version": 1,
      "states": ["1", "2", ...],
      "initial": "1",
      "act1": ["a", "b"], "act2": ["x", "y"],
      "enabled1": {"1": ["a", "b"], ...},
      "enabled2": {"1": ["x", "y"], ...},
      "moves": [{"from": "1", "a1": "a", "a2": "x", "to": ["smiley"]}, ...],
      "goals": ["smiley"]
    }
"""
from __future__ import annotations

import json
from importlib import resources
from pathlib import Path
from typing import Any, Union

import jsonschema

from .game import ConcurrentGame, GameError, Joker, check

SCHEMA_VERSION = 1

_str_list = {"type": "array", "items": {"type": "string"}}

GAME_SCHEMA: dict[str, Any] = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "Concurrent game",
    "type": "object",
    "required": ["states", "initial", "act1", "act2", "enabled1", "enabled2", "moves"],
    "properties": {
        "schema_version": {"type": "integer"},
        "name": {"type": "string"},
        "description": {"type": "string"},
        "states": {**_str_list, "minItems": 1},
        "initial": {"type": "string"},
        "act1": {**_str_list, "minItems": 1},
        "act2": {**_str_list, "minItems": 1},
        "enabled1": {"type": "object", "additionalProperties": _str_list},
        "enabled2": {"type": "object", "additionalProperties": _str_list},
        "moves": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["from", "a1", "a2", "to"],
                "properties": {
                    "from": {"type": "string"},
                    "a1": {"type": "string"},
                    "a2": {"type": "string"},
                    "to": {**_str_list, "minItems": 1},
                },
                "additionalProperties": False,
            },
        },
        "goals": _str_list,
    },
    "additionalProperties": False,
}


def game_from_dict(data: dict) -> ConcurrentGame:
    try:
        jsonschema.validate(data, GAME_SCHEMA)
    except jsonschema.ValidationError as exc:
        raise GameError(f"schema violation: {exc.message}") from None
    moves: dict[tuple[str, str, str], list[str]] = {}
    for m in data["moves"]:
        moves.setdefault((m["from"], m["a1"], m["a2"]), []).extend(m["to"])
    return ConcurrentGame.build(
        data["states"], data["initial"], data["act1"], data["act2"],
        data["enabled1"], data["enabled2"], moves, data.get("goals", []),
    )


def game_to_dict(game: ConcurrentGame) -> dict:
    moves = [
        {"from": q, "a1": a, "a2": x, "to": list(game.succ(q, a, x))}
        for q in game.states
        for a in game.gamma1(q)
        for x in game.gamma2(q)
        if game.succ(q, a, x)
    ]
    # moves outside the enabling (invalid games) are kept so that round-trips are lossless
    listed = {(m["from"], m["a1"], m["a2"]) for m in moves}
    for (q, a, x), succ in game.moves.items():
        if (q, a, x) not in listed:
            moves.append({"from": q, "a1": a, "a2": x, "to": list(succ)})
    return {
        "schema_version": SCHEMA_VERSION,
        "states": list(game.states),
        "initial": game.initial,
        "act1": list(game.act1),
        "act2": list(game.act2),
        "enabled1": {q: list(game.gamma1(q)) for q in game.states if q in game.enabled1},
        "enabled2": {q: list(game.gamma2(q)) for q in game.states if q in game.enabled2},
        "moves": moves,
        "goals": game.order(game.goals) if game.goals <= set(game.states) else sorted(game.goals),
    }


def load_game(path: Union[str, Path], validate: bool = True) -> ConcurrentGame:
    with open(path, encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise GameError(f"{path}: not valid JSON ({exc})") from None
    try:
        game = game_from_dict(data)
        return check(game) if validate else game
    except GameError as exc:
        raise GameError(f"{path}: {exc}") from None


def dumps_game(game: ConcurrentGame) -> str:
    return json.dumps(game_to_dict(game), indent=2) + "\n"


def save_game(game: ConcurrentGame, path: Union[str, Path]) -> None:
    Path(path).write_text(dumps_game(game), encoding="utf-8")


FIXTURES = ("g_avb", "costless", "g_cost", "penny", "adm_left", "adm_middle", "adm_right")


def fixture_path(name: str) -> Path:
    return Path(str(resources.files("jokergames") / "fixtures" / f"{name}.json"))


def load_fixture(name: str) -> ConcurrentGame:
    return load_game(fixture_path(name))


def action_to_json(action) -> Any:
    if isinstance(action, Joker):
        return {"a": action.a, "x": action.x, "to": action.to}
    return action


def action_from_json(data: Any):
    if isinstance(data, dict):
        return Joker(data["a"], data["x"], data["to"])
    return data
