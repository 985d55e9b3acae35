"""Markov-type equations ``d1 r1^2 + d2 r2^2 + d3 r3^2 = lam r1 r2 r3``.

>>> eq = make_equation(1, 2, 6, 3)
>>> eq.lam
6
>>> mutate(eq, MarkovTriple((2, 5, 1)), 3)
MarkovTriple(r=(2, 5, 9))
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from math import isqrt
from typing import Dict, List, Sequence, Tuple

from .hjfrac import InvariantError


@dataclass(frozen=True)
class MarkovEquation:
    d: Tuple[int, int, int]
    Ksq: int
    lam: int

    def __post_init__(self):
        object.__setattr__(self, "d", tuple(int(x) for x in self.d))
        if len(self.d) != 3 or min(self.d) < 1 or self.Ksq < 1 or self.lam < 1:
            raise ValueError("need three positive weights and positive K^2, lambda")
        d1, d2, d3 = self.d
        if self.lam**2 != self.Ksq * d1 * d2 * d3:
            raise ValueError(f"lambda^2 = {self.lam**2} != K^2 d1 d2 d3 = {self.Ksq * d1 * d2 * d3}")


@dataclass(frozen=True, order=True)
class MarkovTriple:
    r: Tuple[int, int, int]

    def __post_init__(self):
        object.__setattr__(self, "r", tuple(int(x) for x in self.r))
        if len(self.r) != 3 or min(self.r) < 1:
            raise ValueError(f"need three positive integers, got {self.r}")

    def __iter__(self):
        return iter(self.r)


def make_equation(d1: int, d2: int, d3: int, Ksq: int) -> MarkovEquation:
    if min(d1, d2, d3, Ksq) < 1:
        raise ValueError("all inputs must be positive")
    p = Ksq * d1 * d2 * d3
    lam = isqrt(p)
    if lam * lam != p:
        raise ValueError(f"no integral lambda: K^2 d1 d2 d3 = {p} is not a square")
    return MarkovEquation((d1, d2, d3), Ksq, lam)


def verify(eq: MarkovEquation, t: MarkovTriple) -> bool:
    r1, r2, r3 = t.r
    d1, d2, d3 = eq.d
    return d1 * r1 * r1 + d2 * r2 * r2 + d3 * r3 * r3 == eq.lam * r1 * r2 * r3


def mutate(eq: MarkovEquation, t: MarkovTriple, i: int) -> MarkovTriple:
    """Replace ``r_i`` (1-based) by the other root ``(d_j r_j^2 + d_k r_k^2) / (d_i r_i)``."""
    if i not in (1, 2, 3):
        raise ValueError(f"index must be 1, 2 or 3, got {i}")
    if not verify(eq, t):
        raise ValueError(f"{t.r} does not solve the equation")
    k = i - 1
    j, l = (x for x in range(3) if x != k)
    num = eq.d[j] * t.r[j] ** 2 + eq.d[l] * t.r[l] ** 2
    den = eq.d[k] * t.r[k]
    if num % den:
        raise InvariantError(f"companion root {num}/{den} is not an integer")
    r = list(t.r)
    r[k] = num // den
    out = MarkovTriple(tuple(r))
    if not verify(eq, out):
        raise InvariantError(f"mutation produced a non-solution {out.r}")
    return out


@dataclass(frozen=True)
class MarkovTree:
    """Solutions reached from a seed, sorted, with the mutation edges used."""

    triples: Tuple[MarkovTriple, ...]
    edges: Tuple[Tuple[MarkovTriple, int, MarkovTriple], ...]

    def __contains__(self, t) -> bool:
        if not isinstance(t, MarkovTriple):
            t = MarkovTriple(tuple(t))
        return t in set(self.triples)

    def __iter__(self):
        return iter(self.triples)

    def __len__(self):
        return len(self.triples)


def enumerate_solutions(
    eq: MarkovEquation, seed: MarkovTriple, bound: int, order: Sequence[int] = (1, 2, 3)
) -> MarkovTree:
    """Breadth-first closure of ``seed`` under mutation, pruned above ``bound``.

    ``order`` only changes the traversal; the result does not depend on it.
    """
    if not verify(eq, seed):
        raise ValueError(f"seed {seed.r} does not solve the equation")
    if max(seed.r) > bound:
        return MarkovTree((), ())
    seen = {seed}
    edges = set()
    queue = deque([seed])
    while queue:
        t = queue.popleft()
        for i in order:
            u = mutate(eq, t, i)
            if max(u.r) > bound:
                continue
            if u != t:
                edges.add((t, i, u))
            if u not in seen:
                seen.add(u)
                queue.append(u)
    return MarkovTree(tuple(sorted(seen)), tuple(sorted(edges)))


enumerate = enumerate_solutions  # noqa: A001  (name used by the command line and docs)


def path(tree: MarkovTree, start: MarkovTriple, end: MarkovTriple) -> List[Tuple[MarkovTriple, int]]:
    """Shortest mutation path in ``tree`` as ``[(triple, index applied), ...]``."""
    adj: Dict[MarkovTriple, List[Tuple[int, MarkovTriple]]] = {}
    for a, i, b in tree.edges:
        adj.setdefault(a, []).append((i, b))
    prev = {start: None}
    queue = deque([start])
    while queue:
        t = queue.popleft()
        if t == end:
            break
        for i, u in adj.get(t, ()):
            if u not in prev:
                prev[u] = (t, i)
                queue.append(u)
    if end not in prev:
        raise KeyError(f"{end.r} is not reachable from {start.r}")
    steps = []
    cur = end
    while prev[cur] is not None:
        t, i = prev[cur]
        steps.append((t, i))
        cur = t
    return steps[::-1]


def parse_triple(text: str) -> Tuple[int, int, int]:
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 3:
        raise ValueError(f"expected three comma-separated integers, got {text!r}")
    return tuple(int(p) for p in parts)
