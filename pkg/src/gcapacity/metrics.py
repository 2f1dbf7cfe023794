"""Distances on moduli data: polygons under a density, Taylor truncations, ingredient lists."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import inf

from .delzant import d_P
from .geometry import ConvexPolytope, difference_pieces, volume
from .semitoric import (
    PrimitiveSemitoricPolygon, SemitoricHeights, SemitoricPolygonOrbit, Shear,
    canonical_orbit, shear_pieces, slab_pieces,
)
from .symbolic import PiLinear, fmt_rat

__all__ = [
    "WeightSequence", "TaylorTruncation", "AdmissibleDensity", "IngredientList",
    "MetricValue", "DegreeMismatch", "d_taylor", "nu_volume", "d_st_polygon",
    "d_ingredients", "d_P", "unfolded_image",
]

TWO_PI = PiLinear(Fraction(0), Fraction(2))


class DegreeMismatch(ValueError):
    pass


@dataclass(frozen=True)
class WeightSequence:
    """Positive weights ``b_n`` with ``sum n*b_n`` finite.

    ``geometric`` is ``2^-n``, ``quartic`` is ``(n+1)^-4``.
    """

    kind: str = "geometric"

    def __post_init__(self):
        if self.kind not in ("geometric", "quartic"):
            raise ValueError(f"unknown weight sequence {self.kind!r}")

    def __call__(self, n: int) -> Fraction:
        if self.kind == "geometric":
            return Fraction(1, 2 ** n)
        return Fraction(1, (n + 1) ** 4)

    def tail_bound(self, degree: int) -> Fraction:
        """Bound on ``sum_{n > D} (n+1) b_n``: degree n has n+1 coefficients."""
        D = degree
        if self.kind == "geometric":
            return Fraction(D + 3, 2 ** D)
        # sum_{m >= D+2} m^-3 <= integral from D+1 of x^-3
        return Fraction(1, 2 * (D + 1) ** 2)


@dataclass(frozen=True)
class TaylorTruncation:
    """Coefficients ``sigma_ij`` for ``i + j <= degree``; missing ones are 0."""

    degree: int
    coeffs: tuple = ()      # sorted ((i, j), PiLinear) pairs, zeros dropped

    @classmethod
    def make(cls, degree: int, coeffs) -> "TaylorTruncation":
        items = coeffs.items() if isinstance(coeffs, dict) else coeffs
        out = {}
        for key, val in items:
            i, j = key
            if i < 0 or j < 0 or i + j > degree:
                raise ValueError(f"coefficient ({i}, {j}) outside degree {degree}")
            val = PiLinear.of(val)
            if (i, j) == (0, 0) and val != 0:
                raise ValueError("sigma_00 must be 0")
            if (i, j) == (0, 1) and (val.sign() < 0 or not val < TWO_PI):
                raise ValueError(f"sigma_01 = {val} is outside [0, 2*pi)")
            if val != 0:
                out[(i, j)] = val
        return cls(degree, tuple(sorted(out.items())))

    def get(self, i: int, j: int) -> PiLinear:
        for key, val in self.coeffs:
            if key == (i, j):
                return val
        return PiLinear()


@dataclass(frozen=True)
class AdmissibleDensity:
    """Piecewise-constant ``g(x)``; ``values[k]`` holds between breaks k-1 and k."""

    breaks: tuple = ()
    values: tuple = (Fraction(1),)

    def __post_init__(self):
        if len(self.values) != len(self.breaks) + 1:
            raise ValueError("need one density value per slab")
        if any(Fraction(v) <= 0 for v in self.values):
            raise ValueError("density must be bounded away from zero")
        if list(self.breaks) != sorted(set(self.breaks)):
            raise ValueError("density breakpoints must be strictly increasing")

    @property
    def g_min(self) -> Fraction:
        return min(Fraction(v) for v in self.values)

    @property
    def g_max(self) -> Fraction:
        return max(Fraction(v) for v in self.values)

    def __call__(self, x) -> Fraction:
        k = sum(1 for b in self.breaks if b <= x)
        return Fraction(self.values[k])


@dataclass(frozen=True)
class IngredientList:
    orbit: SemitoricPolygonOrbit
    heights: SemitoricHeights
    taylor: tuple = ()

    def __post_init__(self):
        if len(self.heights.h) != self.orbit.mf or len(self.taylor) != self.orbit.mf:
            raise ValueError("need one height and one Taylor truncation per cut")

    @property
    def mf(self) -> int:
        return self.orbit.mf


@dataclass(frozen=True)
class MetricValue:
    """Exact distance ``a + b*pi`` (or ``+inf``) with a truncation tail bound."""

    value: object
    tail: Fraction = Fraction(0)

    @property
    def is_infinite(self) -> bool:
        return self.value == inf

    def bounds(self, level: int = 0):
        if self.is_infinite:
            return inf, inf
        return self.value.bounds(level)

    def __str__(self):
        s = "+inf" if self.is_infinite else str(self.value)
        if self.tail:
            s += f" (tail <= {fmt_rat(self.tail)})"
        return s


def d_taylor(s1: TaylorTruncation, s2: TaylorTruncation, weights=None, degree=None) -> MetricValue:
    weights = weights or WeightSequence()
    if s1.degree != s2.degree:
        raise DegreeMismatch(f"degrees {s1.degree} and {s2.degree} differ")
    D = s1.degree if degree is None else degree
    if D > s1.degree:
        raise DegreeMismatch(f"degree {D} exceeds the truncation degree {s1.degree}")
    total = PiLinear()
    for n in range(D + 1):
        b = weights(n)
        for i in range(n + 1):
            j = n - i
            diff = abs(s1.get(i, j) - s2.get(i, j))
            if (i, j) == (0, 1):
                total += min(diff, TWO_PI - diff, PiLinear.of(b))
            else:
                total += min(diff, PiLinear.of(b))
    return MetricValue(total, weights.tail_bound(D))


def _pieces(region):
    if isinstance(region, ConvexPolytope):
        return [region]
    return list(region)


def nu_volume(region, g: AdmissibleDensity | None = None):
    """Integral of ``g(x)`` over a union of convex pieces with disjoint interiors."""
    g = g or AdmissibleDensity()
    total = Fraction(0)
    for p in _pieces(region):
        if not p.full_dimensional:
            continue
        if not p.bounded:
            return inf
        for q in slab_pieces(p, g.breaks):
            xs = [v[0] for v in q.vertices]
            total += g((min(xs) + max(xs)) / 2) * volume(q)
    return total


def _subtract(pieces, others):
    out = list(pieces)
    for q in others:
        nxt = []
        for p in out:
            nxt.extend(difference_pieces(p, q))
        out = nxt
    return out


def symdiff_nu(a, b, g: AdmissibleDensity | None = None):
    """``nu(A sym-diff B)`` for unions of pieces; fine for unbounded operands."""
    a, b = _pieces(a), _pieces(b)
    return _add_inf(nu_volume(_subtract(a, b), g), nu_volume(_subtract(b, a), g))


def _add_inf(x, y):
    return inf if inf in (x, y) else x + y


def _orbit(x) -> SemitoricPolygonOrbit:
    if isinstance(x, SemitoricPolygonOrbit):
        return canonical_orbit(x.representative)
    return canonical_orbit(x)


def unfolded_image(prim: PrimitiveSemitoricPolygon, u) -> list[ConvexPolytope]:
    pieces = slab_pieces(prim.polygon, prim.lams)
    return shear_pieces(pieces, Shear(0, tuple(zip(prim.lams, u))), prim.lams)


def d_st_polygon(o1, o2, g: AdmissibleDensity | None = None):
    """Sum over unfoldings of ``nu`` of the symmetric difference of the images."""
    p1, p2 = _orbit(o1).representative, _orbit(o2).representative
    if p1.mf != p2.mf or p1.ks != p2.ks:
        raise ValueError("polygon distance needs matching cut count and twisting indices")
    total = Fraction(0)
    for u in itertools.product((0, 1), repeat=p1.mf):
        total = _add_inf(total, symdiff_nu(unfolded_image(p1, u), unfolded_image(p2, u), g))
        if total == inf:
            return inf
    return total


def d_ingredients(i1: IngredientList, i2: IngredientList, weights=None,
                  g: AdmissibleDensity | None = None, degree=None) -> MetricValue:
    """Polygon distance plus Taylor and height terms; exactly 1 across classes."""
    k1, k2 = _orbit(i1.orbit).twisting, _orbit(i2.orbit).twisting
    if i1.mf != i2.mf or k1 != k2:
        return MetricValue(PiLinear.of(1))
    poly = d_st_polygon(i1.orbit, i2.orbit, g)
    if poly == inf:
        return MetricValue(inf)
    total = PiLinear.of(poly)
    tail = Fraction(0)
    for s1, s2, h1, h2 in zip(i1.taylor, i2.taylor, i1.heights.h, i2.heights.h):
        t = d_taylor(s1, s2, weights, degree)
        total += t.value + abs(h1 - h2)
        tail += t.tail
    return MetricValue(total, tail)
