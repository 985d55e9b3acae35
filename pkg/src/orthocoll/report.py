"""Exact serialization of command results.

A report is a tree of dicts, lists and scalars.  Every rational is written as
a ``"p/q"`` string (integers stay integers), so no float ever reaches the
output.  The human rendering is derived from the same tree.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any, List

from .hjfrac import CyclicQuotient, TDecomposition
from .link import GammaValue
from .markov import MarkovTriple
from .toric import QDivisor


def exact(x: Fraction) -> Any:
    x = Fraction(x)
    return x.numerator if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def to_jsonable(obj: Any) -> Any:
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, Fraction):
        return exact(obj)
    if isinstance(obj, float):
        raise TypeError("floating point values are not allowed in reports")
    if isinstance(obj, QDivisor):
        return {k: exact(v) for k, v in obj.items()}
    if isinstance(obj, CyclicQuotient):
        return [obj.m, obj.q]
    if isinstance(obj, TDecomposition):
        return [obj.d, obj.n, obj.a]
    if isinstance(obj, GammaValue):
        return {"coords": list(obj.coords), "moduli": list(obj.moduli)}
    if isinstance(obj, MarkovTriple):
        return list(obj.r)
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(report: Any) -> str:
    """Canonical JSON: sorted keys, fixed indentation, byte-identical on replay."""
    return json.dumps(to_jsonable(report), indent=2, sort_keys=True) + "\n"


def _scalar(v: Any) -> bool:
    return not isinstance(v, (dict, list))


def _is_matrix(v: Any) -> bool:
    return isinstance(v, list) and v and all(isinstance(r, list) and all(map(_scalar, r)) for r in v)


def render(report: Any) -> str:
    """Indented text view of a report."""
    lines: List[str] = []
    _render(to_jsonable(report), 0, lines)
    return "\n".join(lines) + "\n"


def _fmt(v: Any) -> str:
    if isinstance(v, bool):
        return "yes" if v else "no"
    if v is None:
        return "-"
    return str(v)


def _render(v: Any, depth: int, lines: List[str]) -> None:
    pad = "  " * depth
    if isinstance(v, dict):
        for k, x in v.items():
            if _scalar(x):
                lines.append(f"{pad}{k}: {_fmt(x)}")
            elif isinstance(x, list) and all(map(_scalar, x)):
                lines.append(f"{pad}{k}: ({', '.join(map(_fmt, x))})")
            elif _is_matrix(x):
                lines.append(f"{pad}{k}:")
                width = max(len(_fmt(c)) for r in x for c in r)
                for r in x:
                    lines.append(f"{pad}  " + " ".join(_fmt(c).rjust(width) for c in r))
            else:
                lines.append(f"{pad}{k}:")
                _render(x, depth + 1, lines)
    elif isinstance(v, list):
        for x in v:
            if _scalar(x):
                lines.append(f"{pad}- {_fmt(x)}")
            elif isinstance(x, dict) and all(map(_scalar, x.values())):
                lines.append(f"{pad}- " + ", ".join(f"{k}={_fmt(y)}" for k, y in x.items()))
            elif isinstance(x, list) and all(map(_scalar, x)):
                lines.append(f"{pad}- ({', '.join(map(_fmt, x))})")
            else:
                lines.append(f"{pad}-")
                _render(x, depth + 1, lines)
    else:
        lines.append(f"{pad}{_fmt(v)}")
