"""First homology of links of surface singularities.

``H_1(L; Z)`` is presented by the loops ``alpha_j`` around the exceptional curves
of a resolution, subject to ``sum_j (E_i . E_j) alpha_j = 0``.  The cycle map
``gamma`` sends a divisor ``D`` to ``sum_j (D' . E_j) alpha_j`` where ``D'`` is
any divisor on the resolution pushing forward to ``D``.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Optional, Sequence, Tuple

from . import _exact
from .hjfrac import tridiag_det


class NotAGeneratorError(ValueError):
    """A residue that should be a unit modulo ``n^2`` is not."""


@dataclass(frozen=True)
class IntersectionMatrix:
    """Symmetric negative definite intersection matrix of exceptional curves."""

    entries: Tuple[Tuple[int, ...], ...]
    labels: Tuple[str, ...] = ()

    def __post_init__(self):
        rows = tuple(tuple(int(x) for x in r) for r in self.entries)
        object.__setattr__(self, "entries", rows)
        if not self.labels:
            object.__setattr__(self, "labels", tuple(f"E{i + 1}" for i in range(len(rows))))
        if len(self.labels) != len(rows):
            raise ValueError("one label per row")
        if not _exact.is_symmetric(rows):
            raise ValueError("intersection matrix must be square and symmetric")
        if not _exact.is_negative_definite(rows):
            raise ValueError("intersection matrix must be negative definite")

    @classmethod
    def chain(cls, b: Sequence[int], labels: Sequence[str] = ()) -> "IntersectionMatrix":
        """Chain of curves with self-intersections ``-b_i``, adjacent pairs meeting once."""
        r = len(b)
        rows = [[0] * r for _ in range(r)]
        for i, bi in enumerate(b):
            rows[i][i] = -bi
            if i + 1 < r:
                rows[i][i + 1] = rows[i + 1][i] = 1
        return cls(tuple(map(tuple, rows)), tuple(labels))

    def __len__(self):
        return len(self.entries)

    def column(self, j: int) -> Tuple[int, ...]:
        return tuple(row[j] for row in self.entries)


@dataclass(frozen=True)
class GammaValue:
    """An element of ``prod Z/moduli[i]``, coordinates reduced canonically."""

    coords: Tuple[int, ...]
    moduli: Tuple[int, ...]

    def __post_init__(self):
        if len(self.coords) != len(self.moduli):
            raise ValueError("one coordinate per invariant factor")
        red = tuple(c % m if m else c for c, m in zip(self.coords, self.moduli))
        object.__setattr__(self, "coords", red)

    def __add__(self, other: "GammaValue") -> "GammaValue":
        if self.moduli != other.moduli:
            raise ValueError("adding elements of different groups")
        return GammaValue(tuple(a + b for a, b in zip(self.coords, other.coords)), self.moduli)

    def __mul__(self, k: int) -> "GammaValue":
        return GammaValue(tuple(k * c for c in self.coords), self.moduli)

    __rmul__ = __mul__

    @property
    def is_zero(self) -> bool:
        return not any(self.coords)

    @property
    def residue(self) -> int:
        """The single coordinate of an element of a cyclic group."""
        if len(self.coords) != 1:
            raise ValueError(f"not a cyclic group: invariant factors {self.moduli}")
        return self.coords[0]

    @property
    def modulus(self) -> int:
        if len(self.moduli) != 1:
            raise ValueError(f"not a cyclic group: invariant factors {self.moduli}")
        return self.moduli[0]


@dataclass(frozen=True)
class LinkGroup:
    """``H_1(L; Z)`` as ``prod Z/invariant_factors[i]`` with generator images.

    ``generator_images[j]`` gives the coordinates of ``alpha_{j+1}``.  When the
    group is cyclic and ``alpha_1`` generates it, coordinates are rescaled so
    that ``alpha_1 = 1``.
    """

    invariant_factors: Tuple[int, ...]
    generator_images: Tuple[Tuple[int, ...], ...]

    @property
    def order(self) -> int:
        out = 1
        for d in self.invariant_factors:
            out *= d
        return out

    @property
    def is_cyclic(self) -> bool:
        return len(self.invariant_factors) <= 1

    def element(self, coords: Sequence[int]) -> GammaValue:
        return GammaValue(tuple(coords), self.invariant_factors)

    def alpha(self, j: int) -> GammaValue:
        """The generator ``alpha_j`` (1-based)."""
        return self.element(self.generator_images[j - 1])


def link_group(M: IntersectionMatrix) -> LinkGroup:
    """Abelian group generated by ``alpha_j`` with relations ``M alpha = 0``."""
    rows = [list(r) for r in M.entries]
    _, D, V = _exact.smith_normal_form(rows)
    r = len(rows)
    diag = [D[i][i] for i in range(r)]
    keep = [i for i, d in enumerate(diag) if d != 1]
    factors = tuple(diag[i] for i in keep)
    images = [[V[j][i] % diag[i] for i in keep] for j in range(r)]
    if len(factors) == 1 and r:
        u = images[0][0]
        if gcd(u, factors[0]) == 1:
            inv = pow(u, -1, factors[0])
            images = [[(x[0] * inv) % factors[0]] for x in images]
    return LinkGroup(factors, tuple(tuple(x) for x in images))


def alpha_coefficients(b: Sequence[int]) -> Tuple[int, ...]:
    """``n_k`` with ``alpha_k = n_k alpha_1`` along the chain ``[b_1, ..., b_r]``."""
    b = tuple(b)
    return tuple(tridiag_det(b[: k - 1]) for k in range(1, len(b) + 1))


def gamma(intersections: Sequence[int], g: LinkGroup) -> GammaValue:
    """The class ``sum_j k_j alpha_j`` where ``k_j = (D' . E_j)``."""
    if len(intersections) != len(g.generator_images):
        raise ValueError(
            f"{len(intersections)} intersection numbers for {len(g.generator_images)} generators"
        )
    coords = [0] * len(g.invariant_factors)
    for k, img in zip(intersections, g.generator_images):
        if k != int(k):
            raise ValueError(f"intersection numbers must be integers, got {k}")
        for i, x in enumerate(img):
            coords[i] += int(k) * x
    return g.element(coords)


def gamma_invariance_check(M: IntersectionMatrix, d1: Sequence[int], d2: Sequence[int]) -> bool:
    g = link_group(M)
    return gamma(d1, g) == gamma(d2, g)


def adjust_divisor(
    dprime: Sequence[int], target: Sequence[int], M: IntersectionMatrix
) -> Optional[Tuple[int, ...]]:
    """Integer ``a`` with ``dprime + M a = target``, or None if none exists.

    ``M`` is negative definite, so the rational solution is unique; it is
    integral exactly when ``gamma(dprime) == gamma(target)``.
    """
    if not (len(dprime) == len(target) == len(M)):
        raise ValueError("dimension mismatch")
    rhs = [t - d for t, d in zip(target, dprime)]
    sol = _exact.solve([list(r) for r in M.entries], rhs)
    if any(Fraction(x).denominator != 1 for x in sol):
        return None
    return tuple(int(x) for x in sol)


def lifts_to_general_fiber(v: GammaValue, n: int) -> bool:
    """Whether ``v`` is ``n`` times an element of its group."""
    for c, m in zip(v.coords, v.moduli):
        if m and m % n:
            warnings.warn(f"n={n} does not divide the group order {m}", stacklevel=2)
        g = gcd(n, m) if m else n
        if c % g:
            return False
    return True


def inverse_mod(g: int, modulus: int) -> int:
    """Least positive ``m`` with ``m g = 1 (mod modulus)``."""
    if modulus < 1:
        raise ValueError("modulus must be positive")
    if gcd(g, modulus) != 1:
        raise NotAGeneratorError(f"{g} is not a unit modulo {modulus}")
    if modulus == 1:
        return 1
    return pow(g, -1, modulus)


def is_generator_mod_square(v: GammaValue, n: int) -> bool:
    """Whether ``v`` generates ``H_1(L)/n^2`` for a cyclic link group."""
    if n == 1 or not v.moduli:
        return True
    return gcd(v.residue % (n * n), n) == 1


def chain_group(b: Sequence[int]) -> LinkGroup:
    return link_group(IntersectionMatrix.chain(b))

