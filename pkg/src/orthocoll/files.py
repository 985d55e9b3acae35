"""Fan and divisor files (JSON).

Fan file::

    {"rays": [[49, -9], [-5, 1], [-5, -9]], "names": ["rho1", "rho2", "rho4"], "complete": true}

Divisor file: ray label to integer, or to an exact rational string ``"p/q"``.
"""

from __future__ import annotations

import json
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Any, Union

from .toric import Fan2, FanError, QDivisor

PathLike = Union[str, Path]


class InputError(ValueError):
    """A malformed input file; the message names the file and field."""


def _read_json(path: PathLike) -> Any:
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise InputError(f"{path}: {e.strerror or e}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError(f"{path}: line {e.lineno}, column {e.colno}: {e.msg}") from None


def fan_from_dict(data: Any, where: str = "fan") -> Fan2:
    if not isinstance(data, dict):
        raise InputError(f"{where}: expected an object with a 'rays' field")
    unknown = set(data) - {"rays", "names", "complete"}
    if unknown:
        raise InputError(f"{where}: unknown field(s) {sorted(unknown)}")
    rays = data.get("rays")
    if not isinstance(rays, list):
        raise InputError(f"{where}: 'rays' must be a list of integer pairs")
    clean = []
    for i, r in enumerate(rays):
        if not (isinstance(r, list) and len(r) == 2 and all(type(x) is int for x in r)):
            raise InputError(f"{where}: rays[{i}] = {r!r} is not a pair of integers")
        clean.append(tuple(r))
    names = data.get("names", [])
    if not (isinstance(names, list) and all(isinstance(n, str) for n in names)):
        raise InputError(f"{where}: 'names' must be a list of strings")
    complete = data.get("complete", True)
    if not isinstance(complete, bool):
        raise InputError(f"{where}: 'complete' must be true or false")
    try:
        return Fan2(tuple(clean), tuple(names), complete)
    except FanError as e:
        raise InputError(f"{where}: {e}") from None


def fan_to_dict(f: Fan2) -> dict:
    return {"rays": [list(r) for r in f.rays], "names": list(f.names), "complete": f.complete}


def load_fan(path: PathLike) -> Fan2:
    return fan_from_dict(_read_json(path), str(path))


def divisor_from_dict(data: Any, fan: Fan2, where: str = "divisor") -> QDivisor:
    if not isinstance(data, dict):
        raise InputError(f"{where}: expected an object mapping ray labels to coefficients")
    out = {}
    for k, v in data.items():
        if k not in fan.names:
            raise InputError(f"{where}: label {k!r} is not a ray of the fan {list(fan.names)}")
        if type(v) is int:
            out[k] = Fraction(v)
        elif isinstance(v, str):
            try:
                out[k] = Fraction(v)
            except ValueError:
                raise InputError(f"{where}: {k} = {v!r} is not an exact rational") from None
            if "." in v or "e" in v.lower():
                raise InputError(f"{where}: {k} = {v!r}; write rationals as 'p/q'")
        else:
            raise InputError(f"{where}: {k} = {v!r} must be an integer or a 'p/q' string")
    return QDivisor(out)


def load_divisor(path: PathLike, fan: Fan2) -> QDivisor:
    return divisor_from_dict(_read_json(path), fan, str(path))


def builtin(name: str) -> Any:
    """Parsed JSON of a shipped fixture in ``orthocoll/data``."""
    return json.loads(resources.files("orthocoll").joinpath("data").joinpath(name).read_text())
