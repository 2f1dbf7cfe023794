"""Semitoric polygons: cut-line shears, corner kinds, the group action, chops.

Every map used here has the form ``(x, y) -> (x, y + f(x))`` with ``f``
continuous and piecewise linear, so all of them commute and each is affine
on the vertical slabs between cut lines. :class:`Shear` stores ``f`` as a
global slope ``k`` (the power of ``T``) plus one slope change per cut.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import inf, isqrt

from .delzant import EpsilonTooLarge, edge_frame
from .geometry import (
    ConvexPolytope, GeometryError, HalfSpace, affine_image, as_point, det, dot,
    polytope_from_generators, polytope_from_halfspaces, primitive, rank, volume,
)

__all__ = [
    "T", "SemitoricError", "NotFiniteHeight", "BadCuts", "CornerViolation",
    "WrongCornerKind", "CutLine", "Shear", "T_power_transform",
    "multi_cut_transform", "slab_pieces", "classify_corner", "corner_kind_of",
    "PrimitiveSemitoricPolygon", "LabeledWeightedPolygon", "SemitoricHeights",
    "SemitoricPolygonOrbit", "validate_primitive", "check_primitive",
    "group_action", "canonical_orbit", "st_corner_chop", "st_hidden_corner_chop",
    "SmoothAngle", "smooth_angles_near", "region_area",
]

T = ((1, 0), (1, 1))


class SemitoricError(ValueError):
    pass


class NotFiniteHeight(SemitoricError):
    pass


class BadCuts(SemitoricError):
    pass


class CornerViolation(SemitoricError):
    def __init__(self, vertex, reason):
        self.vertex = vertex
        super().__init__(f"corner at ({', '.join(str(c) for c in vertex)}): {reason}")


class WrongCornerKind(SemitoricError):
    pass


@dataclass(frozen=True, order=True)
class CutLine:
    lam: Fraction
    epsilon: int = 1
    k: int = 0

    def __post_init__(self):
        object.__setattr__(self, "lam", Fraction(self.lam))
        if self.epsilon not in (1, -1):
            raise BadCuts(f"epsilon must be +1 or -1, got {self.epsilon}")
        object.__setattr__(self, "k", int(self.k))


# -- shears -------------------------------------------------------------------

@dataclass(frozen=True)
class Shear:
    """``y += k*x + sum(u * max(0, x - lam))`` over ``(lam, u)`` pairs."""

    k: int = 0
    kinks: tuple = ()

    def __post_init__(self):
        merged = {}
        for lam, u in self.kinks:
            merged[Fraction(lam)] = merged.get(Fraction(lam), 0) + int(u)
        object.__setattr__(self, "kinks", tuple(sorted((l, u) for l, u in merged.items() if u)))

    def f(self, x) -> Fraction:
        return self.k * x + sum((u * (x - lam) for lam, u in self.kinks if x > lam), Fraction(0))

    def __call__(self, p):
        x, y = as_point(p)
        return (x, y + self.f(x))

    def inverse(self) -> "Shear":
        return Shear(-self.k, tuple((l, -u) for l, u in self.kinks))

    def compose(self, other: "Shear") -> "Shear":
        return Shear(self.k + other.k, self.kinks + other.kinks)

    def slope_right(self, x) -> int:
        return self.k + sum(u for lam, u in self.kinks if lam <= x)

    def slope_left(self, x) -> int:
        return self.k + sum(u for lam, u in self.kinks if lam < x)

    def on_slab(self, a, b):
        """Affine form ``(s, c)`` with ``f(x) = s*x + c`` on ``[a, b]``."""
        mid = _slab_probe(a, b)
        s = self.slope_right(mid) if mid is not None else self.k
        return s, self.f(mid) - s * mid

    def map_direction(self, d, at_x):
        dx, dy = d
        if dx == 0:
            return (dx, dy)
        s = self.slope_right(at_x) if dx > 0 else self.slope_left(at_x)
        return (dx, dy + s * dx)

    def breakpoints(self):
        return tuple(l for l, _ in self.kinks)


def _slab_probe(a, b):
    if a == -inf and b == inf:
        return Fraction(0)
    if a == -inf:
        return b - 1
    if b == inf:
        return a + 1
    return (a + b) / 2


def T_power_transform(k: int, lam, p):
    """Identity left of ``x = lam``; ``T^k`` based on the line to its right."""
    return Shear(0, ((lam, k),))(p)


def _slabs(breaks):
    pts = [-inf] + sorted(set(Fraction(b) for b in breaks)) + [inf]
    return list(zip(pts, pts[1:]))


def slab_pieces(poly: ConvexPolytope, breaks) -> list[ConvexPolytope]:
    """Full-dimensional pieces of ``poly`` cut by the vertical lines ``x = b``."""
    out = []
    for a, b in _slabs(breaks):
        hs = list(poly.facets)
        if a != -inf:
            hs.append(HalfSpace((1, 0), Fraction(a)))
        if b != inf:
            hs.append(HalfSpace((-1, 0), -Fraction(b)))
        piece = poly if len(hs) == len(poly.facets) else polytope_from_halfspaces(hs, 2)
        if piece.full_dimensional:
            out.append(piece)
    return out


def _piece_slab(piece: ConvexPolytope, breaks):
    xs = [v[0] for v in piece.vertices]
    lo = min(xs) if not any(r[0] < 0 for r in piece.rays) else -inf
    hi = max(xs) if not any(r[0] > 0 for r in piece.rays) else inf
    for a, b in _slabs(breaks):
        if a <= lo and hi <= b:
            return a, b
    raise GeometryError("piece straddles a cut line")


def shear_pieces(pieces, shear: Shear, extra_breaks=()) -> list[ConvexPolytope]:
    """Apply a shear to slab-aligned convex pieces (re-split where needed)."""
    breaks = sorted(set(shear.breakpoints()) | set(Fraction(b) for b in extra_breaks))
    out = []
    for p in pieces:
        for q in slab_pieces(p, breaks):
            a, b = _piece_slab(q, breaks)
            s, c = shear.on_slab(a, b)
            out.append(affine_image(q, ((1, 0), (s, 1)), (0, c)))
    return out


def multi_cut_transform(u, lams, region, k: int = 0) -> list[ConvexPolytope]:
    """``t^u_lam`` (after ``T^k``) applied to a convex region or list of pieces."""
    if len(u) != len(lams):
        raise ValueError("u and lambda vectors differ in length")
    if any(b <= a for a, b in zip(lams, lams[1:])):
        raise BadCuts("cut positions must be strictly increasing")
    pieces = [region] if isinstance(region, ConvexPolytope) else list(region)
    return shear_pieces(pieces, Shear(k, tuple(zip(lams, u))), lams)


def region_area(pieces) -> Fraction:
    return sum((volume(p) for p in pieces), Fraction(0))


def _hull_of_pieces(pieces) -> ConvexPolytope:
    pts = sorted({v for p in pieces for v in p.vertices})
    rays = sorted({r for p in pieces for r in p.rays})
    return polytope_from_generators(pts, rays)


# -- corners ------------------------------------------------------------------

def _ordered(d1, d2):
    return (d1, d2) if det((d1, d2)) > 0 else (d2, d1)


def corner_kind_of(u, w, on_cut_top: bool) -> str:
    """Corner type from primitive edge vectors (any order)."""
    u, w = _ordered(tuple(u), tuple(w))
    if det((u, w)) == 0:
        return "flat"
    if on_cut_top:
        tw = (w[0], w[0] + w[1])
        d = det((u, tw))
        return {1: "hidden", 0: "fake"}.get(d, "nonsmooth")
    return "delzant" if det((u, w)) == 1 else "nonsmooth"


def _edge_dirs(poly: ConvexPolytope, v):
    frame, _ = edge_frame(poly, v)
    return frame.edge_dirs


def _slice(poly: ConvexPolytope, lam):
    """``(bottom, top)`` of ``poly`` on the line ``x = lam``; None if empty."""
    line = polytope_from_halfspaces(
        list(poly.facets) + [HalfSpace((1, 0), lam), HalfSpace((-1, 0), -lam)], 2)
    if line.is_empty:
        return None
    if line.rays or line.lineality:
        return (-inf if any(r[1] < 0 for r in line.rays) or line.lineality else min(v[1] for v in line.vertices),
                inf)
    ys = [v[1] for v in line.vertices]
    return min(ys), max(ys)


# -- polygon types ------------------------------------------------------------

@dataclass(frozen=True)
class PrimitiveSemitoricPolygon:
    polygon: ConvexPolytope
    cuts: tuple
    kinds: tuple = field(default=(), compare=False)  # (vertex, kind) pairs

    @property
    def mf(self) -> int:
        return len(self.cuts)

    @property
    def lams(self) -> tuple:
        return tuple(c.lam for c in self.cuts)

    @property
    def ks(self) -> tuple:
        return tuple(c.k for c in self.cuts)

    @property
    def vertices(self) -> tuple:
        return self.polygon.vertices

    def kind(self, v) -> str:
        v = as_point(v)
        for w, k in self.kinds:
            if w == v:
                return k
        raise SemitoricError(f"{v} is not a vertex")

    @property
    def non_fake(self) -> tuple:
        return tuple(v for v, k in self.kinds if k != "fake")

    def slice(self, j: int):
        return _slice(self.polygon, self.cuts[j].lam)

    def key(self):
        return (self.polygon.key(), self.cuts)

    def __repr__(self):
        vs = ", ".join("(" + ", ".join(str(c) for c in v) + ")" for v in self.vertices)
        cs = ", ".join(f"x={c.lam} k={c.k}" for c in self.cuts)
        return f"PrimitiveSemitoricPolygon([{vs}], cuts=[{cs}])"


@dataclass(frozen=True)
class LabeledWeightedPolygon:
    """A member of an orbit: slab pieces of the (possibly non-convex) image."""

    pieces: tuple
    cuts: tuple

    @property
    def mf(self) -> int:
        return len(self.cuts)

    def area(self) -> Fraction:
        return region_area(self.pieces)


@dataclass(frozen=True)
class SemitoricHeights:
    h: tuple

    @classmethod
    def make(cls, prim: PrimitiveSemitoricPolygon, hs) -> "SemitoricHeights":
        hs = tuple(Fraction(x) for x in hs)
        if len(hs) != prim.mf:
            raise SemitoricError(f"expected {prim.mf} heights, got {len(hs)}")
        for j, h in enumerate(hs):
            lo, hi = prim.slice(j)
            if not 0 < h < hi - lo:
                raise SemitoricError(f"height h_{j + 1}={h} outside (0, {hi - lo})")
        return cls(hs)

    def focus(self, prim: PrimitiveSemitoricPolygon, j: int):
        lo, _ = prim.slice(j)
        return (prim.cuts[j].lam, lo + self.h[j])


@dataclass(frozen=True)
class SemitoricPolygonOrbit:
    representative: PrimitiveSemitoricPolygon

    @property
    def mf(self) -> int:
        return self.representative.mf

    @property
    def twisting(self) -> tuple:
        return self.representative.ks


def _x_range(poly: ConvexPolytope):
    xs = [v[0] for v in poly.vertices]
    lo = -inf if any(r[0] < 0 for r in poly.rays) else min(xs)
    hi = inf if any(r[0] > 0 for r in poly.rays) else max(xs)
    return lo, hi


def _has_vertical_recession(poly: ConvexPolytope) -> bool:
    rays = poly.rays
    for target in ((0, 1), (0, -1)):
        if any(rank([r, target]) == 1 and dot(r, target) > 0 for r in rays):
            return True
        if len(rays) == 2:
            sol = _cone_coeffs(rays[0], rays[1], target)
            if sol is not None and sol[0] >= 0 and sol[1] >= 0:
                return True
    return False


def _cone_coeffs(r1, r2, t):
    d = det((r1, r2))
    if d == 0:
        return None
    a = Fraction(det((t, r2))) / d
    b = Fraction(det((r1, t))) / d
    return a, b


def validate_primitive(polygon, cuts=()) -> PrimitiveSemitoricPolygon:
    """Check the primitive conditions and classify every vertex.

    Raises the first violation: finite height, cut signs and order, corner
    conditions. Top points of cut lines that are not vertices are rejected
    (they meet neither corner condition).
    """
    if not isinstance(polygon, ConvexPolytope):
        polygon = polytope_from_generators(polygon)
    if polygon.dim != 2 or not polygon.full_dimensional:
        raise SemitoricError("need a full-dimensional planar polygon")
    if polygon.lineality or not polygon.vertices:
        raise NotFiniteHeight("polygon contains a line; it must have a vertex")
    if _has_vertical_recession(polygon):
        raise NotFiniteHeight("polygon is not of everywhere finite height")
    cuts = tuple(c if isinstance(c, CutLine) else CutLine(*c) for c in cuts)
    if any(c.epsilon != 1 for c in cuts):
        raise BadCuts("primitive polygons have all cut signs equal to +1")
    lo, hi = _x_range(polygon)
    lams = [c.lam for c in cuts]
    if any(b <= a for a, b in zip(lams, lams[1:])):
        raise BadCuts("cut positions must be strictly increasing")
    if lams and not (lo < lams[0] and lams[-1] < hi):
        raise BadCuts(f"cuts must lie strictly inside the x-range ({lo}, {hi})")
    kinds = []
    for c in cuts:
        _, top = _slice(polygon, c.lam)
        if (c.lam, top) not in polygon.vertices:
            raise CornerViolation((c.lam, top), "top point of a cut is not a corner")
    for v in polygon.vertices:
        u, w = _edge_dirs(polygon, v)
        on_cut = [c for c in cuts if c.lam == v[0]]
        if on_cut:
            _, top = _slice(polygon, v[0])
            is_top = v[1] == top
        else:
            is_top = False
        kind = corner_kind_of(u, w, is_top)
        if kind in ("nonsmooth", "flat"):
            where = "top of a cut" if is_top else ("cut line" if on_cut else "off cuts")
            raise CornerViolation(v, f"not smooth ({where}; edges {u}, {w})")
        kinds.append((v, kind))
    return PrimitiveSemitoricPolygon(polygon, cuts, tuple(kinds))


def check_primitive(polygon, cuts=()):
    try:
        return validate_primitive(polygon, cuts), None
    except (SemitoricError, GeometryError) as exc:
        return None, exc


def classify_corner(prim: PrimitiveSemitoricPolygon, v) -> str:
    return prim.kind(v)


# -- the group action ---------------------------------------------------------

def _as_member(x):
    if isinstance(x, PrimitiveSemitoricPolygon):
        return LabeledWeightedPolygon(tuple(slab_pieces(x.polygon, x.lams)), x.cuts)
    return x


def group_action(eps_prime, k: int, member) -> LabeledWeightedPolygon:
    """``((eps'_j), T^k)`` acting on a labeled weighted polygon."""
    m = _as_member(member)
    eps_prime = tuple(int(e) for e in eps_prime)
    if len(eps_prime) != m.mf or any(e not in (1, -1) for e in eps_prime):
        raise ValueError(f"need {m.mf} signs in {{+1, -1}}")
    us = [(c.epsilon - c.epsilon * e) // 2 for c, e in zip(m.cuts, eps_prime)]
    shear = Shear(int(k), tuple((c.lam, u) for c, u in zip(m.cuts, us)))
    lams = [c.lam for c in m.cuts]
    pieces = shear_pieces(m.pieces, shear, lams)
    cuts = tuple(CutLine(c.lam, e * c.epsilon, k + c.k) for c, e in zip(m.cuts, eps_prime))
    return LabeledWeightedPolygon(tuple(pieces), cuts)


def canonical_orbit(member) -> SemitoricPolygonOrbit:
    """All signs +1 and twisting indices shifted so the smallest is 0.

    With no cuts the representative is the polygon itself.
    """
    m = _as_member(member)
    if m.mf:
        eps = tuple(c.epsilon for c in m.cuts)
        shift = -min(c.k for c in m.cuts)
        m = group_action(eps, shift, m)
    hull = _hull_of_pieces(m.pieces)
    if region_area(m.pieces) != (volume(hull) if hull.bounded else region_area(m.pieces)):
        raise SemitoricError("member does not unfold to a convex polygon")
    return SemitoricPolygonOrbit(validate_primitive(hull, m.cuts))


# -- chops --------------------------------------------------------------------

def _chop_polygon(poly: ConvexPolytope, v, eps):
    u, w = _edge_dirs(poly, v)
    if abs(det((u, w))) != 1:
        raise WrongCornerKind("chop needs a Delzant corner")
    for d in (u, w):
        length = _edge_length(poly, v, d)
        if eps >= length:
            raise EpsilonTooLarge(f"eps={eps} reaches the end of an edge of lattice length {length}")
    # inward normals summed: the dual basis of (u, w), summed
    a = (w[1] - u[1], u[0] - w[0]) if det((u, w)) > 0 else (u[1] - w[1], w[0] - u[0])
    h = HalfSpace.make(a, dot(a, v) + eps)
    return h


def _edge_length(poly, v, d):
    best = inf
    for w in poly.vertices:
        e = (w[0] - v[0], w[1] - v[1])
        if w != v and rank([e, d]) == 1:
            i = 0 if d[0] else 1
            t = e[i] / d[i]
            if 0 < t < best:
                best = t
    return best


def st_corner_chop(prim: PrimitiveSemitoricPolygon, v, eps) -> PrimitiveSemitoricPolygon:
    v, eps = as_point(v), Fraction(eps)
    if eps <= 0:
        raise EpsilonTooLarge("chop parameter must be positive")
    if prim.kind(v) != "delzant":
        raise WrongCornerKind(f"{v} is {prim.kind(v)}, not a Delzant corner")
    h = _chop_polygon(prim.polygon, v, eps)
    return validate_primitive(polytope_from_halfspaces(list(prim.polygon.facets) + [h], 2), prim.cuts)


def st_hidden_corner_chop(prim: PrimitiveSemitoricPolygon, v, eps) -> PrimitiveSemitoricPolygon:
    """Unfold the cut through ``v``, chop the now-Delzant corner, fold back."""
    v, eps = as_point(v), Fraction(eps)
    if eps <= 0:
        raise EpsilonTooLarge("chop parameter must be positive")
    if prim.kind(v) != "hidden":
        raise WrongCornerKind(f"{v} is {prim.kind(v)}, not a hidden corner")
    unfold = Shear(0, ((v[0], 1),))
    pieces = shear_pieces([prim.polygon], unfold, prim.lams)
    opened = _hull_of_pieces(pieces)
    if opened.bounded and volume(opened) != region_area(pieces):
        raise SemitoricError("unfolded polygon is not convex")
    h = _chop_polygon(opened, unfold(v), eps)
    cut = [polytope_from_halfspaces(list(p.facets) + [h], 2) for p in pieces]
    back = shear_pieces([p for p in cut if p.full_dimensional], unfold.inverse(), prim.lams)
    return validate_primitive(_hull_of_pieces(back), prim.cuts)


# -- smooth angles ------------------------------------------------------------

@dataclass(frozen=True, order=True)
class SmoothAngle:
    """Angle ``arccot(cot)`` between primitive ``u, w`` with ``det(u, w) = 1``.

    Since ``|u|^2 |w|^2 = <u,w>^2 + det^2``, the angle is fixed by the
    integer ``cot = <u, w>``: ``sin^2 = 1/(1+cot^2)``, ``cos^2 = cot^2/(1+cot^2)``.
    """

    neg_cot: int
    u: tuple = field(compare=False)
    w: tuple = field(compare=False)

    @property
    def cot(self) -> int:
        return -self.neg_cot

    @property
    def cos2(self) -> Fraction:
        return Fraction(self.cot ** 2, 1 + self.cot ** 2)

    @property
    def sin2(self) -> Fraction:
        return Fraction(1, 1 + self.cot ** 2)

    def __str__(self):
        named = {0: "pi/2", 1: "pi/4", -1: "3*pi/4"}
        return named.get(self.cot, f"arccot({self.cot})")


def _primitive_vectors(bound2: int):
    r = isqrt(bound2)
    out = []
    for a in range(-r, r + 1):
        for b in range(-r, r + 1):
            if (a or b) and a * a + b * b <= bound2 and primitive((a, b)) == (a, b):
                out.append((a, b))
    return out


def smooth_angles_near(bound) -> list[SmoothAngle]:
    """Angles at Delzant corners whose edge vectors have norm at most ``bound``.

    Sorted by increasing angle, one witness pair each.
    """
    b2 = Fraction(bound) ** 2
    if b2 < 1:
        raise ValueError("bound must be at least 1")
    vecs = _primitive_vectors(int(b2))
    found = {}
    for u, w in product(vecs, repeat=2):
        if det((u, w)) == 1:
            c = dot(u, w)
            cand = (sorted((u, w)), u, w)
            if c not in found or cand[0] < found[c][0]:
                found[c] = cand
    return sorted(SmoothAngle(-c, u, w) for c, (_, u, w) in found.items())
