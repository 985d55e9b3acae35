"""Chern class bookkeeping for exceptional bundles from class T points.

Bundles are never constructed.  A :class:`BundleLedger` records rank, the
specialized first Chern class (a divisor on the central surface) and ``c2``;
Euler pairings follow from Riemann-Roch using the rational intersection form.

The ``c2`` of an exceptional bundle is pinned by ``chi(F, F) = 1``:

>>> c2_exceptional(2, 1)
Fraction(1, 1)
>>> c2_exceptional(9, -162)
Fraction(-608, 9)
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Tuple, Union

from .hjfrac import InvariantError, TDecomposition, classify_class_t
from .link import (
    GammaValue,
    NotAGeneratorError,
    adjust_divisor,
    inverse_mod,
    lifts_to_general_fiber,
)
from .toric import (
    MBlock,
    QDivisor,
    SurfaceModel,
    canonical_class,
    mumford_intersect,
)

Number = Union[int, Fraction]
Pairing = Callable[[QDivisor, QDivisor], Fraction]


class StabilityError(ArithmeticError):
    """``K . c1`` is not a unit modulo the rank."""


@dataclass(frozen=True)
class BundleLedger:
    """Rank, specialized ``c1`` and ``c2`` of a (virtual) bundle."""

    rank: int
    c1: QDivisor
    c2: Fraction

    def __post_init__(self):
        if self.rank < 1:
            raise ValueError(f"rank must be positive, got {self.rank}")
        object.__setattr__(self, "c2", Fraction(self.c2))

    def dual(self) -> "BundleLedger":
        return BundleLedger(self.rank, -self.c1, self.c2)


@dataclass(frozen=True)
class SurfaceNumerics:
    """What Riemann-Roch needs: ``chi(O)``, ``K`` and the intersection pairing."""

    K: QDivisor
    pairing: Pairing = field(compare=False)
    chi_o: int = 1

    @classmethod
    def from_model(cls, s: SurfaceModel, chi_o: int = 1) -> "SurfaceNumerics":
        return cls(canonical_class(s), lambda a, b: mumford_intersect(s, a, b), chi_o)

    @classmethod
    def from_gram(
        cls, gram: Mapping[Tuple[str, str], Number], K: QDivisor, chi_o: int = 1
    ) -> "SurfaceNumerics":
        """A symbolic surface given by a symmetric table of pairings.

        Missing entries count as zero; ``(x, y)`` and ``(y, x)`` are the same.
        """
        table: Dict[Tuple[str, str], Fraction] = {}
        for (x, y), v in gram.items():
            v = Fraction(v)
            if table.get((y, x), v) != v:
                raise ValueError(f"asymmetric entry for ({x}, {y})")
            table[(x, y)] = table[(y, x)] = v

        def pair(a: QDivisor, b: QDivisor) -> Fraction:
            return sum(
                (ca * cb * table.get((x, y), Fraction(0)) for x, ca in a.items() for y, cb in b.items()),
                Fraction(0),
            )

        return cls(K, pair, chi_o)

    def square(self, D: QDivisor) -> Fraction:
        return self.pairing(D, D)


def c2_exceptional(n: int, c1sq: Number, alt_constant: bool = False) -> Fraction:
    """``c2`` of a rank ``n`` bundle with ``chi(F, F) = 1`` and ``c1^2 = c1sq``.

    The closed form is ``(n-1)(c1^2 + n + 1) / 2n``.  ``alt_constant=True``
    swaps ``n + 1`` for ``n^2 + 1``; that variant breaks ``chi(F, F) = 1`` for
    ``n > 1`` and is kept only for side-by-side output.
    """
    if n < 1:
        raise ValueError("rank must be positive")
    const = n * n + 1 if alt_constant else n + 1
    return Fraction(n - 1) * (Fraction(c1sq) + const) / (2 * n)


def c2_tensor(
    e: int, c1e_sq: Number, c2e: Number, g: int, c1g_sq: Number, c2g: Number, cross: Number
) -> Fraction:
    """``c2(E (x) G)`` from ranks, ``c1^2``, ``c2`` and ``cross = c1(E).c1(G)``."""
    F = Fraction
    return (
        F(g * (g - 1), 2) * F(c1e_sq)
        + (e * g - 1) * F(cross)
        + F(e * (e - 1), 2) * F(c1g_sq)
        + g * F(c2e)
        + e * F(c2g)
    )


def tensor_dual(a: BundleLedger, b: BundleLedger, s: SurfaceNumerics) -> BundleLedger:
    """Ledger of ``a^dual (x) b``."""
    ad = a.dual()
    c1 = b.rank * ad.c1 + ad.rank * b.c1
    c2 = c2_tensor(
        ad.rank, s.square(ad.c1), ad.c2, b.rank, s.square(b.c1), b.c2, s.pairing(ad.c1, b.c1)
    )
    return BundleLedger(ad.rank * b.rank, c1, c2)


def rr_chi(a: BundleLedger, b: BundleLedger, s: SurfaceNumerics) -> Fraction:
    """``chi(a, b) = chi(a^dual (x) b)`` by Riemann-Roch on the surface."""
    t = tensor_dual(a, b, s)
    return t.rank * s.chi_o + (s.square(t.c1) - s.pairing(s.K, t.c1)) / 2 - t.c2


def chi_matrix(ledgers: Sequence[BundleLedger], s: SurfaceNumerics) -> List[List[int]]:
    """``chi(ledgers[i], ledgers[j])``; the identity certifies orthogonality."""
    out = []
    for i, a in enumerate(ledgers):
        row = []
        for j, b in enumerate(ledgers):
            v = rr_chi(a, b, s)
            if v.denominator != 1:
                raise InvariantError(f"chi({i + 1}, {j + 1}) = {v} is not an integer")
            row.append(int(v))
        out.append(row)
    return out


def ow_generators(n: int, a: int) -> Tuple[int, int]:
    """``(p, q)`` with ``p a + q n = 1`` and ``0 <= p < n``."""
    if n < 1 or a < 1:
        raise ValueError("n and a must be positive")
    if gcd(n, a) != 1:
        raise ValueError(f"gcd(n, a) = {gcd(n, a)} != 1")
    p = pow(a, -1, n) if n > 1 else 0
    q = (1 - p * a) // n
    if (p * a + q * n) * (n * a - 1) != n * a - 1:
        raise InvariantError("degree check failed")
    return p, q


# --- normalization over an M-resolved class T point -------------------------


def _residue(v: GammaValue) -> int:
    return v.residue if v.moduli else 0


def _block_gammas(s: SurfaceModel, D: QDivisor, block: MBlock) -> Tuple[GammaValue, ...]:
    return tuple(s.gamma_at(D, c) for c in block.cones)


def _check_block(s: SurfaceModel, block: MBlock) -> None:
    for c in block.cones:
        i, j = s.fan.cone_indices[c]
        if (s.fan.names[i], s.fan.names[j]) != tuple(block.rays[c - block.cones[0] : c - block.cones[0] + 2]):
            raise ValueError(f"block does not match the fan at cone {c + 1}")


@dataclass(frozen=True)
class Normalization:
    """``divisor = m D + sum a_k A_k`` with ``gamma = (alpha_11, 0, ..., 0)``.

    ``corrections`` are the exceptional multiples ``e_ij`` that make the proper
    transform meet the chains exactly in ``(1, 0, ..., 0), 0, ...``; they do not
    change any ``gamma`` value.
    """

    m: int
    divisor: QDivisor
    adjustments: Tuple[int, ...]
    corrections: QDivisor
    generator: int


def normalize_divisor(s: SurfaceModel, D: QDivisor, block: MBlock) -> Normalization:
    """Find ``m`` and ``a_k`` so that ``gamma(m D + sum a_k A_k) = (alpha_11, 0, ...)``.

    ``s`` is the resolved model of the M-resolved fan and ``block`` one of its
    class T blocks.  Raises :class:`NotAGeneratorError` when ``gamma_P(D)``
    does not generate ``H_1(L_P)/n^2``.
    """
    _check_block(s, block)
    t = block.t
    n, d = t.n, t.d
    nn = n * n
    for name, c in D.items():
        if c.denominator != 1:
            raise ValueError(f"coefficient of {name} is not an integer")
    if n == 1:
        return Normalization(1, D, (0,) * (d - 1), QDivisor(), 0)

    gD = [_residue(g) for g in _block_gammas(s, D, block)]
    A = block.curves
    # gA[i][k]: residue of A_k at P_i; A_k is the last ray of P_k and the first of P_{k+1}
    gA = [[_residue(s.gamma_at(QDivisor.curve(a), c)) for a in A] for c in block.cones]
    # a_k = m b_k; solve the points P_d, ..., P_2 backwards with m = 1
    b = [0] * (d - 1)
    for i in range(d - 1, 0, -1):
        rest = gD[i] + (b[i] * gA[i][i] if i < d - 1 else 0)
        b[i - 1] = (-rest * inverse_mod(gA[i][i - 1], nn)) % nn
    g = (gD[0] + (b[0] * gA[0][0] if d > 1 else 0)) % nn
    if gcd(g, n) != 1:
        raise NotAGeneratorError(f"gamma_P(D) = {g} does not generate H_1(L_P)/{nn}")
    m = inverse_mod(g, nn)
    a = tuple((m * bk) % nn for bk in b)
    D0 = m * D + QDivisor(dict(zip(A, a)))

    got = tuple(_residue(v) for v in _block_gammas(s, D0, block))
    if got != (1,) + (0,) * (d - 1):
        raise InvariantError(f"normalization produced gamma = {got}")

    corr: Dict[str, int] = {}
    for idx, c in enumerate(block.cones):
        ch = s.chain(c)
        target = [0] * len(ch.names)
        if idx == 0:
            target[0] = 1
        sol = adjust_divisor(s.proper_transform_intersections(D0, c), target, s.chain_matrix(c))
        if sol is None:
            raise InvariantError(f"no integral exceptional correction at cone {c + 1}")
        corr.update(zip(ch.names, sol))
    return Normalization(m, D0, a, QDivisor(corr), g)


def is_normalized(s: SurfaceModel, D0: QDivisor, block: MBlock) -> bool:
    if block.t.n == 1:
        return True
    got = tuple(_residue(v) for v in _block_gammas(s, D0, block))
    return got == (1,) + (0,) * (block.t.d - 1)


def block_divisors(D0: QDivisor, block: MBlock) -> List[QDivisor]:
    """``D_k = D_0 + A_1 + ... + A_k`` for ``k = 0, ..., d-1``."""
    out = [D0]
    for a in block.curves:
        out.append(out[-1] + QDivisor.curve(a))
    return out


def gamma_of_block_divisors(
    s: SurfaceModel, D0: QDivisor, block: MBlock
) -> List[Tuple[GammaValue, ...]]:
    """``gamma(D_k)`` over the ``d`` Wahl points, for each ``k``.

    Components before ``k + 1`` must lie in ``n H_1``, component ``k + 1`` must
    be ``alpha_{k+1,1}`` and the rest must vanish.
    """
    if not is_normalized(s, D0, block):
        raise ValueError("D0 is not normalized")
    n = block.t.n
    out = []
    for k, Dk in enumerate(block_divisors(D0, block)):
        vals = _block_gammas(s, Dk, block)
        if n > 1:
            for i, v in enumerate(vals):
                if i < k and not lifts_to_general_fiber(v, n):
                    raise InvariantError(f"gamma(D_{k}) at P_{i + 1} is not divisible by {n}")
                if i == k and v.residue != 1:
                    raise InvariantError(f"gamma(D_{k}) at P_{k + 1} is {v.residue}, not alpha_1")
                if i > k and not v.is_zero:
                    raise InvariantError(f"gamma(D_{k}) at P_{i + 1} is nonzero")
        out.append(vals)
    return out


def make_block_ledgers(
    s: SurfaceModel, D0: QDivisor, block: MBlock, alt_c2: bool = False
) -> List[BundleLedger]:
    """Ledgers ``F_1, ..., F_d`` with ``c1(F_k) = n (D_0 + A_1 + ... + A_{k-1})``."""
    if not is_normalized(s, D0, block):
        raise ValueError("D0 is not normalized")
    n = block.t.n
    num = SurfaceNumerics.from_model(s)
    out = []
    for Dk in block_divisors(D0, block):
        c1 = n * Dk
        out.append(BundleLedger(n, c1, c2_exceptional(n, num.square(c1), alt_c2)))
    return out


def _mod(x: Fraction, n: int) -> int:
    if n == 1:
        return 0
    if gcd(x.denominator, n) != 1:
        raise StabilityError(f"{x} has no residue modulo {n}")
    return x.numerator * pow(x.denominator, -1, n) % n


def stability_residue(s: SurfaceModel, ledger: BundleLedger, t: TDecomposition) -> int:
    """``(K . c1) mod n``; it must be a unit for the stability argument."""
    if not s.fan.complete:
        raise ValueError("stability residue needs a complete surface")
    r = _mod(mumford_intersect(s, canonical_class(s), ledger.c1), t.n)
    if t.n > 1 and gcd(r, t.n) != 1:
        raise StabilityError(f"K.c1 = {r} mod {t.n} is not a unit")
    return r


# --- hypotheses of the existence theorem -------------------------------------


@dataclass(frozen=True)
class PointVerdict:
    """Conditions (1)-(3) at one singular point; None where not applicable."""

    cone: int
    rays: Tuple[str, str]
    m: int
    q: int
    t: Optional[TDecomposition]
    gamma: GammaValue
    generates: Optional[bool]
    divisible: Optional[bool]
    vanishes: bool


@dataclass(frozen=True)
class HypothesisReport:
    points: Tuple[PointVerdict, ...]
    target: Optional[int]
    multiplier: Optional[int]
    adjustment: Optional[Tuple[int, ...]]

    @property
    def holds(self) -> bool:
        return self.target is not None

    def label(self, cone: int) -> str:
        """``"(1)"``, ``"(2)"``, ``"(3)"`` or ``"fail"`` at the cone's point."""
        for p in self.points:
            if p.cone == cone:
                return _label(p, self.target)
        raise KeyError(f"cone {cone + 1} is smooth")

    @property
    def labels(self) -> Dict[int, str]:
        return {p.cone: _label(p, self.target) for p in self.points}


def _label(p: PointVerdict, target: Optional[int]) -> str:
    if target is not None and p.cone == target:
        return "(1)"
    if p.divisible and not p.vanishes:
        return "(2)"
    if p.vanishes:
        return "(3)"
    return "fail"


def _satisfied_elsewhere(p: PointVerdict) -> bool:
    if p.t is not None and p.t.is_wahl:
        return bool(p.divisible)
    return p.vanishes


def check_main_hypotheses(s: SurfaceModel, D: QDivisor) -> HypothesisReport:
    """Evaluate conditions (1)-(3) at every singular point of ``s.fan``.

    A point ``P`` of class T is the target when ``gamma_P(D)`` generates
    ``H_1(L_P)/n^2`` and every other point satisfies (2) (Wahl) or (3).
    """
    points = []
    for ch in s.chains:
        c = ch.cone
        i, j = s.fan.cone_indices[c]
        t = classify_class_t(ch.singularity)
        g = s.gamma_at(D, c)
        r = _residue(g)
        gen = None if t is None else (t.n == 1 or gcd(r % (t.n**2), t.n) == 1)
        div = lifts_to_general_fiber(g, t.n) if t is not None and t.is_wahl else None
        points.append(
            PointVerdict(
                c, (s.fan.names[i], s.fan.names[j]), ch.singularity.m, ch.singularity.q,
                t, g, gen, div, g.is_zero,
            )
        )
    target = None
    for p in points:
        if p.generates and all(_satisfied_elsewhere(o) for o in points if o is not p):
            target = p
            break
    if target is None:
        return HypothesisReport(tuple(points), None, None, None)
    nn = target.t.n ** 2
    mult = inverse_mod(_residue(target.gamma) % nn, nn)
    adj = None
    if target.t.d == 1:
        ch = s.chain(target.cone)
        rhs = [0] * len(ch.names)
        rhs[0] = 1
        M = s.chain_matrix(target.cone)
        adj = adjust_divisor(
            [mult * x for x in s.proper_transform_intersections(D, target.cone)], rhs, M
        )
    return HypothesisReport(tuple(points), target.cone, mult, adj)
