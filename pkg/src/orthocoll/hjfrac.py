"""Hirzebruch-Jung continued fractions and class T arithmetic.

A cyclic quotient singularity ``1/m(1,q)`` is stored as a :class:`CyclicQuotient`.
Its minimal resolution is a chain of rational curves with self-intersections
``-b_1, ..., -b_r`` where ``m/q = [b_1, ..., b_r]``.

>>> hj_expand(50, 9)
(6, 3, 2, 2, 2)
>>> hj_evaluate((6, 3, 2, 2, 2))
(50, 9)
>>> classify_class_t(CyclicQuotient(486, 107))
TDecomposition(d=6, n=9, a=2)
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd, isqrt
from typing import Optional, Sequence, Tuple


class InvariantError(AssertionError):
    """An internal invariant that the mathematics guarantees was violated."""


@dataclass(frozen=True)
class CyclicQuotient:
    """The germ ``C^2 / (1/m)(1, q)``.

    ``(1, 0)`` is accepted as the marker for a smooth point.
    """

    m: int
    q: int

    def __post_init__(self):
        if (self.m, self.q) == (1, 0):
            return
        if not (0 < self.q < self.m):
            raise ValueError(f"need 0 < q < m, got (m, q) = ({self.m}, {self.q})")
        if gcd(self.m, self.q) != 1:
            raise ValueError(f"m and q must be coprime, got ({self.m}, {self.q})")

    @property
    def is_smooth(self) -> bool:
        return self.m == 1

    @property
    def q_dual(self) -> int:
        """The inverse ``q'`` of ``q`` modulo ``m`` (reverse chain)."""
        if self.m == 1:
            return 0
        return pow(self.q, -1, self.m)

    def __str__(self):
        return "smooth" if self.is_smooth else f"1/{self.m}(1,{self.q})"


@dataclass(frozen=True)
class TDecomposition:
    """Class T data: ``m = d n^2`` and ``q = d n a - 1``.

    ``n = a = 1`` is the ``A_{d-1}`` case; ``(1, 1, 1)`` is a smooth point.
    """

    d: int
    n: int
    a: int

    def __post_init__(self):
        if min(self.d, self.n, self.a) < 1:
            raise ValueError("d, n, a must be positive")
        if gcd(self.n, self.a) != 1:
            raise ValueError(f"gcd(n, a) must be 1, got n={self.n}, a={self.a}")
        if self.a > self.n or (self.n > 1 and self.a == self.n):
            raise ValueError(f"need a < n (or n = a = 1), got n={self.n}, a={self.a}")

    @property
    def m(self) -> int:
        return self.d * self.n * self.n

    @property
    def q(self) -> int:
        return self.d * self.n * self.a - 1

    def singularity(self) -> CyclicQuotient:
        return CyclicQuotient(self.m, self.q)

    @property
    def is_wahl(self) -> bool:
        return self.d == 1 and self.n > 1


@dataclass(frozen=True)
class VersalFamilyDescriptor:
    """Shape of ``xy = z^{dn} + t_{d-1} z^{(d-1)n} + ... + t_0`` in ``C^3 / (1/n)(1,-1,a)``."""

    d: int
    n: int
    a: int
    exponents: Tuple[int, ...]
    weights: Tuple[int, int, int]


def hj_expand(m: int, q: int) -> Tuple[int, ...]:
    """Expand ``m/q = b_1 - 1/(b_2 - ...)`` with every ``b_i >= 2``.

    Repeated ceiling division: ``b = ceil(m/q)``, then continue with
    ``(q, b q - m)`` until the remainder is zero.
    """
    if not (0 < q < m) or gcd(m, q) != 1:
        raise ValueError(f"need coprime 0 < q < m, got ({m}, {q})")
    out = []
    while q:
        b = -(-m // q)
        out.append(b)
        m, q = q, b * q - m
    return tuple(out)


def tridiag_det(b: Sequence[int]) -> int:
    """``det A(b_1, ..., b_k)`` for the chain matrix with ``-1`` off the diagonal.

    Uses ``det A(b_1..b_k) = b_k det A(b_1..b_{k-1}) - det A(b_1..b_{k-2})``
    with ``det A() = 1``.
    """
    prev, cur = 0, 1
    for bk in b:
        prev, cur = cur, bk * cur - prev
    return cur


def hj_evaluate(b: Sequence[int]) -> Tuple[int, int]:
    """Inverse of :func:`hj_expand`: ``(det A(b_1..b_r), det A(b_2..b_r))``."""
    b = tuple(b)
    if not b:
        raise ValueError("empty expansion")
    if any(x < 2 for x in b):
        raise ValueError(f"every coefficient must be >= 2, got {list(b)}")
    return tridiag_det(b), tridiag_det(b[1:])


def classify_class_t(s: CyclicQuotient) -> Optional[TDecomposition]:
    """Return the unique ``(d, n, a)`` with ``(m, q) = (d n^2, d n a - 1)``, or None."""
    m, q = s.m, s.q
    found = []
    for n in range(1, isqrt(m) + 1):
        if m % (n * n):
            continue
        d = m // (n * n)
        if (q + 1) % (d * n):
            continue
        a = (q + 1) // (d * n)
        if a < 1 or gcd(n, a) != 1 or a > n or (n > 1 and a == n):
            continue
        found.append(TDecomposition(d, n, a))
    if len(found) > 1:
        raise InvariantError(f"{s} has several class T decompositions: {found}")
    return found[0] if found else None


def is_wahl(s: CyclicQuotient) -> bool:
    t = classify_class_t(s)
    return t is not None and t.is_wahl


def versal_family(t: TDecomposition) -> VersalFamilyDescriptor:
    exps = tuple(k * t.n for k in range(t.d, -1, -1))
    weights = (1 % t.n, -1 % t.n, t.a % t.n)
    return VersalFamilyDescriptor(t.d, t.n, t.a, exps, weights)


def milnor_invariants(t: TDecomposition) -> Tuple[int, int]:
    """Rank of ``H_2`` and order of ``H_1`` of the Milnor fibre of a smoothing."""
    return t.d - 1, t.n
