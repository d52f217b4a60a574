"""Conference key rates, spanning-tree packings and the XOR propagation
protocol for networks of pairwise QKD links.

Graphs may be given as a dict in the canonical schema, a JSON string, or a
path to a JSON file. Every exact rational in a result comes back as a
``fractions.Fraction``.
"""

from __future__ import annotations

import json
import os
import re
from fractions import Fraction
from typing import Any, Iterable

from . import _core

__all__ = [
    "QnetError",
    "rate",
    "length",
    "solve_lp",
    "pack",
    "rates_from_packing",
    "simulate",
    "analyze",
    "add_link",
    "plan",
    "to_dot",
]

_RATIONAL = re.compile(r"^-?\d+/\d+$")


class QnetError(Exception):
    """Raised for every library error; ``code`` is the error name, e.g. "Disconnected"."""

    def __init__(self, code: str, message: str, partial: Any = None):
        super().__init__(message)
        self.code = code
        self.partial = partial


def _document(graph: Any) -> str:
    if isinstance(graph, dict):
        return json.dumps(graph)
    if isinstance(graph, os.PathLike) or (isinstance(graph, str) and not graph.lstrip().startswith("{")):
        with open(graph, encoding="utf-8") as fh:
            return fh.read()
    return graph


def _fractions(value: Any) -> Any:
    if isinstance(value, str) and _RATIONAL.match(value):
        return Fraction(value)
    if isinstance(value, list):
        return [_fractions(v) for v in value]
    if isinstance(value, dict):
        return {k: _fractions(v) for k, v in value.items()}
    return value


def _call(fn, *args, **kwargs) -> Any:
    try:
        text = fn(*args, **kwargs)
    except _core.Error as exc:
        partial = json.loads(exc.detail) if getattr(exc, "detail", "") else None
        raise QnetError(exc.code, str(exc), partial) from None
    return _fractions(json.loads(text))


def rate(graph: Any, caps: str = "") -> dict:
    """Optimal conference key rate with its minimizing partition."""
    return _call(_core.rate, _document(graph), caps)


def length(graph: Any, rounds: int, caps: str = "") -> int:
    """Number of edge-disjoint spanning trees available after ``rounds`` rounds."""
    return _call(_core.length, _document(graph), rounds, caps)["length"]


def solve_lp(graph: Any, caps: str = "") -> dict:
    """Communication-for-omniscience LP solved exactly; ``z`` equals the rate."""
    return _call(_core.lp, _document(graph), caps)


def pack(graph: Any, method: str = "general", rounds: int = 0, caps: str = "") -> dict:
    """Spanning-tree packing by ``basic``, ``general`` or ``oracle``."""
    return _call(_core.pack, _document(graph), method, rounds, caps)


def rates_from_packing(graph: Any, packing: dict) -> dict:
    """Per-node announcement rates implied by a packing."""
    return _call(_core.rates_from_packing, _document(graph), json.dumps(packing, default=str))


def simulate(graph: Any, rounds: int = 0, seed: int = 1, audit: bool = False, caps: str = "") -> dict:
    """Runs the propagation protocol; ``rounds`` > 0 uses the exhaustive packing."""
    return _call(_core.simulate, _document(graph), rounds, seed, audit, caps)


def analyze(graph: Any, caps: str = "") -> dict:
    """Bottleneck report: minimizing partition, contraction and certificate."""
    return _call(_core.analyze, _document(graph), caps)


def add_link(graph: Any, u: str, v: str, rate: Fraction | int | str = 1, caps: str = "") -> dict:
    """Exact effect of adding (or strengthening) the link u-v."""
    return _call(_core.add_link, _document(graph), str(u), str(v), str(Fraction(rate)), caps)


def plan(
    graph: Any,
    candidates: Iterable[tuple],
    budget: int = 1,
    exhaustive: bool = False,
    caps: str = "",
) -> dict:
    """Greedy (or exhaustive) choice of links to add; candidates are (u, v) or (u, v, rate)."""
    cands = []
    for c in candidates:
        u, v = str(c[0]), str(c[1])
        r = str(Fraction(c[2])) if len(c) > 2 else "1"
        cands.append((u, v, r))
    return _call(_core.plan, _document(graph), cands, budget, exhaustive, caps)


def to_dot(graph: Any) -> str:
    return _core.to_dot(_document(graph))
