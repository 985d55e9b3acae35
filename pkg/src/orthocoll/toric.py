"""Two-dimensional fans, their resolutions and rational intersection theory.

Rays are primitive vectors of ``Z^2`` listed counterclockwise.  A cone spanned
by consecutive rays ``(v0, v1)`` is put in normal form by a lattice map sending
``v0`` to ``(0, 1)`` and ``v1`` to ``(m, -q)``, which identifies it with the
cyclic quotient ``1/m(1, q)``.

Divisors on a singular surface are pulled back numerically (Mumford) to the
minimal resolution, where intersection numbers come from the smooth fan.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import gcd
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

from . import _exact
from .hjfrac import CyclicQuotient, TDecomposition, classify_class_t, hj_expand
from .link import GammaValue, IntersectionMatrix, LinkGroup, gamma, link_group

Vector = Tuple[int, int]
Number = Union[int, Fraction]


class FanError(ValueError):
    """Invalid fan data; the message names the offending ray or cone."""


def _det(u: Sequence[int], v: Sequence[int]) -> int:
    return u[0] * v[1] - u[1] * v[0]


def _egcd(a: int, b: int) -> Tuple[int, int, int]:
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        k, r = divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - k * x1
        y0, y1 = y1, y0 - k * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


class QDivisor(Mapping[str, Fraction]):
    """Finite rational combination of named curves.

    Zero coefficients are dropped, so two divisors compare equal exactly when
    they have the same support and coefficients.
    """

    __slots__ = ("_c",)

    def __init__(self, coeffs: Union[Mapping[str, Number], Iterable[Tuple[str, Number]]] = ()):
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        c: Dict[str, Fraction] = {}
        for k, v in items:
            c[k] = c.get(k, Fraction(0)) + Fraction(v)
        self._c = {k: v for k, v in sorted(c.items()) if v}

    @classmethod
    def curve(cls, name: str) -> "QDivisor":
        return cls({name: 1})

    def __getitem__(self, k):
        return self._c.get(k, Fraction(0))

    def __iter__(self) -> Iterator[str]:
        return iter(self._c)

    def __len__(self):
        return len(self._c)

    def __contains__(self, k):
        return k in self._c

    def __add__(self, other: "QDivisor") -> "QDivisor":
        return QDivisor(list(self._c.items()) + list(other.items()))

    def __neg__(self) -> "QDivisor":
        return QDivisor({k: -v for k, v in self._c.items()})

    def __sub__(self, other: "QDivisor") -> "QDivisor":
        return self + (-other)

    def __mul__(self, k: Number) -> "QDivisor":
        return QDivisor({n: k * v for n, v in self._c.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, QDivisor):
            return self._c == other._c
        return NotImplemented

    def __hash__(self):
        return hash(tuple(self._c.items()))

    def __repr__(self):
        return f"QDivisor({ {k: str(v) for k, v in self._c.items()} })"

    def __str__(self):
        if not self._c:
            return "0"
        return " + ".join(f"{v}*{k}" for k, v in self._c.items())


@dataclass(frozen=True)
class Fan2:
    """Fan in ``Z^2``: primitive rays in circular order, cones between neighbours.

    Complete fans list their rays counterclockwise.  A local (non-complete)
    fan may run either way, as long as every cone has the same orientation.
    """

    rays: Tuple[Vector, ...]
    names: Tuple[str, ...] = ()
    complete: bool = True

    def __post_init__(self):
        rays = tuple((int(x), int(y)) for x, y in self.rays)
        object.__setattr__(self, "rays", rays)
        names = tuple(self.names) or tuple(f"rho{i + 1}" for i in range(len(rays)))
        object.__setattr__(self, "names", names)
        if len(names) != len(rays):
            raise FanError(f"{len(names)} names for {len(rays)} rays")
        if len(set(names)) != len(names):
            raise FanError("ray names must be distinct")
        for i, v in enumerate(rays):
            if gcd(*v) != 1:
                raise FanError(f"ray {i + 1} {v} is not primitive")
        need = 3 if self.complete else 2
        if len(rays) < need:
            raise FanError(f"a {'complete' if self.complete else 'local'} fan needs >= {need} rays")
        sign = self.orientation
        if self.complete and sign < 0:
            raise FanError("rays of a complete fan must be listed counterclockwise")
        for i, j in self.cone_indices:
            if sign * _det(rays[i], rays[j]) <= 0:
                raise FanError(
                    f"cone {i + 1}: rays {i + 1} {rays[i]} and {j + 1} {rays[j]} "
                    "break the orientation (or are parallel)"
                )
        # winding check on the mirror image when the local fan runs clockwise
        keys = [_angle_key((x, sign * y)) for x, y in rays]
        descents = sum(keys[i + 1] < keys[i] for i in range(len(keys) - 1))
        if self.complete:
            descents += keys[0] < keys[-1]
            if descents != 1:
                raise FanError("rays wind around the origin more than once")
        elif descents > 1 or (descents == 1 and keys[-1] >= keys[0]):
            raise FanError("rays of a local fan must span less than a full turn")

    @property
    def orientation(self) -> int:
        """+1 for counterclockwise rays, -1 for clockwise (local fans only)."""
        return 1 if _det(self.rays[0], self.rays[1]) > 0 else -1

    @property
    def cone_indices(self) -> List[Tuple[int, int]]:
        n = len(self.rays)
        pairs = [(i, i + 1) for i in range(n - 1)]
        if self.complete:
            pairs.append((n - 1, 0))
        return pairs

    @property
    def cones(self) -> List[Tuple[Vector, Vector]]:
        return [(self.rays[i], self.rays[j]) for i, j in self.cone_indices]

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(f"unknown ray {name!r}") from None

    def renamed(self, mapping: Mapping[str, str]) -> "Fan2":
        return Fan2(self.rays, tuple(mapping.get(n, n) for n in self.names), self.complete)


def _angle_key(v: Vector) -> Tuple[int, Fraction]:
    # exact angular order: half plane first, then -cot(angle) which increases with the angle
    x, y = v
    half = 0 if (y > 0 or (y == 0 and x > 0)) else 1
    return (half, Fraction(-x, y) if y else Fraction(-abs(x) * 10**40))


def cone_normal_form(v0: Vector, v1: Vector) -> Tuple[int, int, Tuple[Vector, Vector]]:
    """Return ``(m, q, g)`` with ``g v0 = (0, 1)``, ``g v1 = (m, -q)``, ``0 <= q < m``.

    ``g`` is a unimodular integer matrix given by its rows.
    """
    if gcd(*v0) != 1 or gcd(*v1) != 1:
        raise FanError(f"rays {v0}, {v1} must be primitive")
    dt = _det(v0, v1)
    if dt == 0:
        raise FanError(f"rays {v0} and {v1} are parallel")
    m = abs(dt)
    s = -1 if dt > 0 else 1
    r1 = (s * v0[1], -s * v0[0])
    _, x, y = _egcd(v0[0], v0[1])
    r2 = (x, y)
    y1 = r2[0] * v1[0] + r2[1] * v1[1]
    q = (-y1) % m
    t = (-q - y1) // m
    r2 = (r2[0] + t * r1[0], r2[1] + t * r1[1])
    return m, q, (r1, r2)


def _apply(g: Tuple[Vector, Vector], v: Vector) -> Vector:
    return (g[0][0] * v[0] + g[0][1] * v[1], g[1][0] * v[0] + g[1][1] * v[1])


def _inverse(g: Tuple[Vector, Vector]) -> Tuple[Vector, Vector]:
    (a, b), (c, d) = g
    dt = a * d - b * c
    return ((dt * d, -dt * b), (-dt * c, dt * a))


def cone_singularity(v0: Vector, v1: Vector) -> CyclicQuotient:
    """Type ``1/m(1, q)`` of the cone spanned by ``v0`` then ``v1``."""
    m, q, _ = cone_normal_form(v0, v1)
    if m == 1:
        return CyclicQuotient(1, 0)
    return CyclicQuotient(m, q)


def m_resolution(v0: Vector, v1: Vector) -> Fan2:
    """Split a class T cone into ``d`` Wahl cones by the rays ``(k n^2, 1 - k n a)``."""
    s = cone_singularity(v0, v1)
    t = classify_class_t(s)
    if t is None:
        raise FanError(f"cone {v0}, {v1} of type {s} is not of class T")
    inv = _inverse(cone_normal_form(v0, v1)[2])
    inserted = [_apply(inv, (k * t.n**2, 1 - k * t.n * t.a)) for k in range(1, t.d)]
    return Fan2((v0, *inserted, v1), complete=False)


@dataclass(frozen=True)
class MBlock:
    """The ``d`` Wahl points over one class T point of the original fan.

    ``rays`` are the names ``rho_0, A_1, ..., A_{d-1}, rho_d`` in the refined fan
    and ``cones`` the indices of the Wahl cones ``P_1, ..., P_d`` there.
    """

    cone: int
    t: TDecomposition
    rays: Tuple[str, ...]
    cones: Tuple[int, ...]

    @property
    def curves(self) -> Tuple[str, ...]:
        """The inserted curves ``A_1, ..., A_{d-1}``."""
        return self.rays[1:-1]


@dataclass(frozen=True)
class MResolution:
    fan: Fan2
    blocks: Tuple[MBlock, ...]
    inserted: Tuple[Tuple[str, Vector], ...]
    untouched: Tuple[int, ...] = ()

    def block_for_cone(self, cone: int) -> MBlock:
        for b in self.blocks:
            if b.cone == cone:
                return b
        raise KeyError(f"cone {cone + 1} is not a class T cone")


def m_resolve_fan(f: Fan2) -> MResolution:
    """M-resolve every class T cone of ``f``; other singular cones are flagged.

    Inserted rays of cone ``c`` (1-based) are named ``A[c][k]``.  Cone indices
    in the result are 0-based.
    """
    rays: List[Vector] = []
    names: List[str] = []
    pending = []
    inserted = []
    untouched = []
    for c, (i, j) in enumerate(f.cone_indices):
        v0, v1 = f.rays[i], f.rays[j]
        rays.append(v0)
        names.append(f.names[i])
        s = cone_singularity(v0, v1)
        t = None if s.is_smooth else classify_class_t(s)
        if t is None:
            if not s.is_smooth:
                untouched.append(c)
            continue
        local = m_resolution(v0, v1)
        new = [f"A[{c + 1}][{k}]" for k in range(1, t.d)]
        start = len(rays) - 1
        rays.extend(local.rays[1:-1])
        names.extend(new)
        inserted.extend(zip(new, local.rays[1:-1]))
        pending.append((c, t, [f.names[i], *new, f.names[j]], start))
    if not f.complete:
        rays.append(f.rays[-1])
        names.append(f.names[-1])
    fan = Fan2(tuple(rays), tuple(names), f.complete)
    blocks = tuple(
        MBlock(c, t, tuple(rn), tuple(range(start, start + t.d))) for c, t, rn, start in pending
    )
    return MResolution(fan, blocks, tuple(inserted), tuple(untouched))


@dataclass(frozen=True)
class Chain:
    """Exceptional chain of one cone: curve names from the ``v0`` side and HJ data."""

    cone: int
    singularity: CyclicQuotient
    coefficients: Tuple[int, ...]
    names: Tuple[str, ...]


@dataclass(frozen=True)
class SurfaceModel:
    """A toric surface together with its minimal resolution.

    Divisors may name rays of ``fan`` (curves on the singular surface, pulled
    back numerically) and exceptional curves ``E[c][j]`` of the resolution.
    """

    fan: Fan2
    resolved: Fan2
    chains: Tuple[Chain, ...]
    _pos: Dict[str, int] = field(default_factory=dict, repr=False, compare=False)
    _pulled: Dict[QDivisor, QDivisor] = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        self._pos.update({n: i for i, n in enumerate(self.resolved.names)})
        for i, j in self.resolved.cone_indices:
            if _det(self.resolved.rays[i], self.resolved.rays[j]) != self.resolved.orientation:
                raise AssertionError("resolution is not smooth")

    @cached_property
    def exceptional(self) -> Tuple[str, ...]:
        return tuple(n for c in self.chains for n in c.names)

    @cached_property
    def _self_int(self) -> Dict[int, int]:
        rays = self.resolved.rays
        k = len(rays)
        out = {}
        for i in range(k):
            if not self.resolved.complete and i in (0, k - 1):
                continue
            out[i] = -self.resolved.orientation * _det(rays[(i - 1) % k], rays[(i + 1) % k])
        return out

    def is_compact(self, name: str) -> bool:
        return self._pos[self._check(name)] in self._self_int

    def _check(self, name: str) -> str:
        if name not in self._pos:
            raise KeyError(f"unknown curve {name!r}")
        return name

    def _pair(self, i: int, j: int) -> int:
        k = len(self.resolved.rays)
        if i == j:
            if i not in self._self_int:
                raise ValueError(
                    f"self-intersection of non-compact curve {self.resolved.names[i]!r} is undefined"
                )
            return self._self_int[i]
        if (i - j) % k in (1, k - 1) and (self.resolved.complete or abs(i - j) == 1):
            return 1
        return 0

    def smooth_intersect(self, D1: QDivisor, D2: QDivisor) -> Fraction:
        """Intersection of two divisors on the resolution, no pullback."""
        total = Fraction(0)
        k = len(self.resolved.rays)
        idx2 = {self._pos[self._check(n)]: c for n, c in D2.items()}
        for n, c in D1.items():
            i = self._pos[self._check(n)]
            for j in {i, (i - 1) % k, (i + 1) % k}:
                if j in idx2:
                    total += c * idx2[j] * self._pair(i, j)
        return total

    @cached_property
    def _chain_matrices(self) -> Tuple[IntersectionMatrix, ...]:
        return tuple(IntersectionMatrix.chain(c.coefficients, c.names) for c in self.chains)

    def pullback(self, D: QDivisor) -> QDivisor:
        """Numerical pullback: rays of ``fan`` get exceptional corrections.

        Exceptional components of ``D`` are kept as they are.
        """
        if D not in self._pulled:
            if len(self._pulled) > 4096:
                self._pulled.clear()
            self._pulled[D] = self._pullback(D)
        return self._pulled[D]

    def _pullback(self, D: QDivisor) -> QDivisor:
        exc = set(self.exceptional)
        orig = QDivisor({n: c for n, c in D.items() if n not in exc})
        for n in orig:
            self._check(n)
        out = dict(D.items())
        for ch, M in zip(self.chains, self._chain_matrices):
            rhs = [-self.smooth_intersect(orig, QDivisor.curve(e)) for e in ch.names]
            if not any(rhs):
                continue
            sol = _exact.solve([list(r) for r in M.entries], rhs)
            for e, a in zip(ch.names, sol):
                out[e] = out.get(e, Fraction(0)) + a
        return QDivisor(out)

    def proper_transform_intersections(self, D: QDivisor, cone: int) -> Tuple[int, ...]:
        """``(D' . E_j)`` along the chain of ``cone`` for the proper transform ``D'``."""
        ch = self.chain(cone)
        vals = tuple(self.smooth_intersect(D, QDivisor.curve(e)) for e in ch.names)
        for v in vals:
            if v.denominator != 1:
                raise ValueError("gamma needs an integral divisor")
        return tuple(int(v) for v in vals)

    def chain(self, cone: int) -> Chain:
        for c in self.chains:
            if c.cone == cone:
                return c
        raise KeyError(f"cone {cone + 1} is smooth")

    def chain_matrix(self, cone: int) -> IntersectionMatrix:
        return self._chain_matrices[self.chains.index(self.chain(cone))]

    def link_group_at(self, cone: int) -> LinkGroup:
        ch = self.chain(cone)
        return _chain_group(ch.coefficients)

    def gamma_at(self, D: QDivisor, cone: int) -> GammaValue:
        """``gamma`` of ``D`` at the singular point of ``cone`` (0-based).

        Smooth cones give the element of the trivial group.
        """
        if not any(c.cone == cone for c in self.chains):
            return GammaValue((), ())
        return gamma(self.proper_transform_intersections(D, cone), self.link_group_at(cone))


_GROUP_CACHE: Dict[Tuple[int, ...], LinkGroup] = {}


def _chain_group(b: Tuple[int, ...]) -> LinkGroup:
    if b not in _GROUP_CACHE:
        _GROUP_CACHE[b] = link_group(IntersectionMatrix.chain(b))
    return _GROUP_CACHE[b]


def minimal_resolution(f: Fan2) -> SurfaceModel:
    """Refine every singular cone by its Hirzebruch-Jung chain of rays.

    In normal form the inserted rays are ``u_1 = (1, 0)`` and
    ``u_{j+1} = b_j u_j - u_{j-1}`` starting from ``u_0 = (0, 1)``.
    """
    rays: List[Vector] = []
    names: List[str] = []
    chains = []
    for c, (i, j) in enumerate(f.cone_indices):
        v0, v1 = f.rays[i], f.rays[j]
        rays.append(v0)
        names.append(f.names[i])
        m, q, g = cone_normal_form(v0, v1)
        if m == 1:
            continue
        b = hj_expand(m, q)
        inv = _inverse(g)
        prev, cur = (0, 1), (1, 0)
        new = []
        for bj in b:
            new.append(_apply(inv, cur))
            prev, cur = cur, (bj * cur[0] - prev[0], bj * cur[1] - prev[1])
        if cur != (m, -q):
            raise AssertionError(f"HJ insertion failed for cone {c + 1}")
        enames = tuple(f"E[{c + 1}][{k}]" for k in range(1, len(b) + 1))
        rays.extend(new)
        names.extend(enames)
        chains.append(Chain(c, CyclicQuotient(m, q), b, enames))
    if not f.complete:
        rays.append(f.rays[-1])
        names.append(f.names[-1])
    return SurfaceModel(f, Fan2(tuple(rays), tuple(names), f.complete), tuple(chains))


def intersection_matrix(s: SurfaceModel, curves: Sequence[str]) -> IntersectionMatrix:
    """Integer intersection matrix of compact curves on the resolution."""
    for c in curves:
        if not s.is_compact(c):
            raise ValueError(f"curve {c!r} is not compact")
    rows = tuple(
        tuple(int(s.smooth_intersect(QDivisor.curve(a), QDivisor.curve(b))) for b in curves)
        for a in curves
    )
    return IntersectionMatrix(rows, tuple(curves))


def intersection_form(s: SurfaceModel, curves: Sequence[str]) -> List[List[int]]:
    """Like :func:`intersection_matrix` but without the definiteness check."""
    return [
        [int(s.smooth_intersect(QDivisor.curve(a), QDivisor.curve(b))) for b in curves]
        for a in curves
    ]


def mumford_intersect(s: SurfaceModel, D1: QDivisor, D2: QDivisor) -> Fraction:
    """Rational intersection number on the (possibly singular) surface."""
    return s.smooth_intersect(s.pullback(D1), s.pullback(D2))


def canonical_class(s: SurfaceModel) -> QDivisor:
    """``K = -sum D_rho`` over the rays of the surface's own fan.

    Its Mumford pullback is ``pi^* K``; by the projection formula it pairs with
    pulled-back divisors exactly as ``K_Y`` of the resolution does.
    """
    return QDivisor({n: -1 for n in s.fan.names})


def resolution_canonical_class(s: SurfaceModel) -> QDivisor:
    """``K_Y = -sum D_rho`` over every ray of the smooth resolution fan."""
    return QDivisor({n: -1 for n in s.resolved.names})


def classify_fan(f: Fan2) -> List[Tuple[Tuple[Vector, Vector], CyclicQuotient, Optional[TDecomposition]]]:
    out = []
    for cone in f.cones:
        s = cone_singularity(*cone)
        out.append((cone, s, classify_class_t(s)))
    return out


def local_model(t: TDecomposition) -> Tuple[SurfaceModel, MBlock]:
    """M-resolution of the germ ``1/dn^2(1, dna-1)`` in normal form, resolved.

    Rays are named ``rho0``, ``A1``, ..., ``A{d-1}``, ``rho{d}``.
    """
    local = m_resolution((0, 1), (t.m, -t.q))
    names = ("rho0", *(f"A{k}" for k in range(1, t.d)), f"rho{t.d}")
    fan = Fan2(local.rays, names, complete=False)
    return minimal_resolution(fan), MBlock(0, t, names, tuple(range(t.d)))
