"""JSON schemas for complexes, replays, experiment configs and result documents."""
from __future__ import annotations

import json
from functools import lru_cache
from importlib import resources

from jsonschema import Draft202012Validator
from jsonschema.exceptions import best_match

from ..errors import ConfigurationError

KINDS = ("complex", "replay", "config", "results")


@lru_cache(maxsize=None)
def load(kind: str) -> dict:
    if kind not in KINDS:
        raise KeyError(kind)
    return json.loads(resources.files(__name__).joinpath(f"{kind}.schema.json").read_text())


def validate(kind: str, document) -> None:
    """Raise :class:`ConfigurationError` naming the offending field path."""
    validator = Draft202012Validator(load(kind))
    err = best_match(validator.iter_errors(document))
    if err is not None:
        path = "$" + "".join(f"[{p}]" if isinstance(p, int) else f".{p}" for p in err.absolute_path)
        message = "field is not allowed here" if err.validator == "not" and err.validator_value == {} else err.message
        raise ConfigurationError(message, path=path)
