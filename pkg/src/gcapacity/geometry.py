"""Exact rational convex geometry.

Every coordinate is a :class:`fractions.Fraction` and every predicate is
decided exactly. Polytopes carry both a vertex description and an
irredundant list of inward facet halfspaces ``<normal, x> >= offset`` with
primitive integer normals.

The kernel is written for any ambient dimension but only dimensions 2 and 3
are exercised; the enumeration-based hull routines are meant for desk-scale
inputs (a few dozen generators).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import gcd, inf, lcm
from typing import Iterable, Sequence

Rat = Fraction
Point = tuple  # tuple[Fraction, ...]

__all__ = [
    "Rat", "GeometryError", "EmptyPolytopeError", "UnboundedError",
    "HalfSpace", "ConvexPolytope", "as_rat", "as_point", "det", "rank",
    "solve", "nullspace", "primitive", "is_primitive", "dot",
    "polytope_from_vertices", "polytope_from_halfspaces",
    "polytope_from_generators", "volume", "intersect", "symdiff_volume",
    "disjoint_interiors", "difference_pieces", "affine_image",
]


class GeometryError(ValueError):
    pass


class EmptyPolytopeError(GeometryError):
    pass


class UnboundedError(GeometryError):
    pass


def as_rat(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise TypeError("floats are not accepted; pass int, Fraction or 'p/q'")
    return Fraction(x)


def as_point(p: Iterable) -> Point:
    return tuple(as_rat(c) for c in p)


def dot(a: Sequence, b: Sequence):
    return sum(x * y for x, y in zip(a, b))


def _sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def _add(a, b):
    return tuple(x + y for x, y in zip(a, b))


def _scale(s, a):
    return tuple(s * x for x in a)


# -- small exact linear algebra ---------------------------------------------

def _echelon(rows):
    """Row-reduce a copy of ``rows``; return (reduced rows, pivot columns)."""
    m = [list(map(Fraction, r)) for r in rows]
    if not m:
        return m, []
    ncols = len(m[0])
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def rank(rows) -> int:
    return len(_echelon(rows)[1])


def nullspace(rows, ncols: int | None = None) -> list[tuple]:
    """Basis of ``{x : rows @ x = 0}``."""
    if not rows:
        n = ncols
        return [tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n)]
    m, pivots = _echelon(rows)
    n = len(rows[0])
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        x = [Fraction(0)] * n
        x[f] = Fraction(1)
        for i, p in enumerate(pivots):
            x[p] = -m[i][f]
        basis.append(tuple(x))
    return basis


def solve(a_rows, b) -> tuple | None:
    """Unique solution of a square system, or ``None`` when singular."""
    n = len(a_rows)
    aug = [list(r) + [bi] for r, bi in zip(a_rows, b)]
    m, pivots = _echelon(aug)
    if pivots != list(range(n)):
        return None
    return tuple(m[i][n] for i in range(n))


def det(vectors: Sequence[Sequence]) -> Fraction | int:
    """Determinant of the matrix whose columns are ``vectors``.

    Integer input gives an integer result.
    """
    n = len(vectors)
    if any(len(v) != n for v in vectors):
        raise GeometryError(f"det needs {n} vectors of dimension {n}")
    m = [[Fraction(vectors[c][r]) for c in range(n)] for r in range(n)]
    sign = 1
    result = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c] != 0), None)
        if piv is None:
            return 0
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            sign = -sign
        result *= m[c][c]
        for i in range(c + 1, n):
            f = m[i][c] / m[c][c]
            if f:
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    value = sign * result
    if all(isinstance(x, int) for v in vectors for x in v):
        return int(value)
    return value


def primitive(v: Sequence) -> tuple[int, ...]:
    """Scale a nonzero rational vector to the primitive integer vector on its ray."""
    fr = [Fraction(x) for x in v]
    if all(x == 0 for x in fr):
        raise GeometryError("zero vector has no primitive direction")
    den = lcm(*(x.denominator for x in fr))
    ints = [int(x * den) for x in fr]
    g = 0
    for x in ints:
        g = gcd(g, x)
    return tuple(x // g for x in ints)


def is_primitive(v: Sequence[int]) -> bool:
    g = 0
    for x in v:
        g = gcd(g, int(x))
    return g == 1


# -- halfspaces and polytopes ----------------------------------------------

@dataclass(frozen=True, order=True)
class HalfSpace:
    """Closed halfspace ``<normal, x> >= offset`` with primitive integer normal."""

    normal: tuple
    offset: Fraction

    @classmethod
    def make(cls, normal, offset) -> "HalfSpace":
        fr = [Fraction(x) for x in normal]
        prim = primitive(fr)
        # the scale factor is positive, so the inequality direction is kept
        k = next(Fraction(p) / x for p, x in zip(prim, fr) if x != 0)
        return cls(prim, Fraction(offset) * k)

    def slack(self, x) -> Fraction:
        return dot(self.normal, x) - self.offset

    def contains(self, x) -> bool:
        return self.slack(x) >= 0

    def flipped(self) -> "HalfSpace":
        return HalfSpace(tuple(-a for a in self.normal), -self.offset)


@dataclass(frozen=True)
class ConvexPolytope:
    """Convex polyhedron with synchronized vertex and facet descriptions.

    ``rays`` lists extreme recession directions for unbounded inputs.
    Lower-dimensional (or empty) results of intersections are kept with
    ``affine_dim < dim``; their ``facets`` are then the defining
    halfspaces rather than an irredundant facet list.
    """

    dim: int
    vertices: tuple
    facets: tuple
    rays: tuple = ()
    affine_dim: int = -2
    lineality: bool = field(default=False)

    def __post_init__(self):
        if self.affine_dim == -2:
            object.__setattr__(self, "affine_dim", self.dim)

    @property
    def bounded(self) -> bool:
        return not self.rays and not self.lineality

    @property
    def is_empty(self) -> bool:
        return self.affine_dim < 0

    @property
    def full_dimensional(self) -> bool:
        return self.affine_dim == self.dim

    def contains(self, x) -> bool:
        return all(h.contains(x) for h in self.facets)

    def key(self):
        return (self.dim, tuple(sorted(self.vertices)), tuple(sorted(self.rays)))

    def __eq__(self, other):
        if not isinstance(other, ConvexPolytope):
            return NotImplemented
        return self.key() == other.key() and self.lineality == other.lineality

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        def fmt(p):
            return "(" + ", ".join(str(c) for c in p) + ")"
        vs = ", ".join(fmt(v) for v in self.vertices)
        extra = f", rays=[{', '.join(fmt(r) for r in self.rays)}]" if self.rays else ""
        return f"ConvexPolytope(dim={self.dim}, vertices=[{vs}]{extra})"


def _empty(dim, halfspaces=()) -> ConvexPolytope:
    return ConvexPolytope(dim, (), tuple(halfspaces), affine_dim=-1)


def _affine_dim(points) -> int:
    if not points:
        return -1
    p0 = points[0]
    return rank([_sub(p, p0) for p in points[1:]]) if len(points) > 1 else 0


def _hull_2d(points):
    """Counterclockwise extreme points (Andrew monotone chain, collinear dropped)."""
    pts = sorted(set(points))

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower, upper = [], []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def _hyperplane_through(points, directions=()):
    """Normal of the hyperplane spanned by points (and parallel to directions)."""
    p0 = points[0]
    rows = [_sub(p, p0) for p in points[1:]] + [tuple(d) for d in directions]
    ns = nullspace(rows, len(p0))
    if len(ns) != 1:
        return None
    return ns[0]


def _facets_from_generators(points, rays, dim):
    """Irredundant inward facets of conv(points) + cone(rays), full-dimensional."""
    facets = {}
    gens = [("p", p) for p in points] + [("r", r) for r in rays]
    if not points:
        return []
    for combo in combinations(range(len(gens)), dim):
        ps = [gens[i][1] for i in combo if gens[i][0] == "p"]
        rs = [gens[i][1] for i in combo if gens[i][0] == "r"]
        if not ps:
            continue
        nrm = _hyperplane_through(ps, rs)
        if nrm is None:
            continue
        h = HalfSpace.make(nrm, dot(nrm, ps[0]))
        vals_p = [h.slack(p) for p in points]
        vals_r = [dot(h.normal, r) for r in rays]
        if all(v >= 0 for v in vals_p) and all(v >= 0 for v in vals_r):
            pass
        elif all(v <= 0 for v in vals_p) and all(v <= 0 for v in vals_r):
            h = h.flipped()
        else:
            continue
        facets[h] = None
    # keep only genuine facets: generators on the hyperplane span dim-1
    out = []
    for h in facets:
        on_p = [p for p in points if h.slack(p) == 0]
        on_r = [r for r in rays if dot(h.normal, r) == 0]
        if not on_p:
            continue
        rows = [_sub(p, on_p[0]) for p in on_p[1:]] + list(on_r)
        if rank(rows) == dim - 1 if rows else dim == 1:
            out.append(h)
    return sorted(out)


def _extreme(points, facets, dim):
    out = []
    for p in points:
        active = [h.normal for h in facets if h.slack(p) == 0]
        if len(active) >= dim and rank(active) == dim:
            out.append(p)
    return out


def polytope_from_vertices(points) -> ConvexPolytope:
    """Convex hull of finitely many rational points."""
    pts = sorted(set(as_point(p) for p in points))
    if not pts:
        raise EmptyPolytopeError("no points given")
    dim = len(pts[0])
    adim = _affine_dim(pts)
    if adim < dim:
        return ConvexPolytope(dim, tuple(pts), (), affine_dim=adim)
    if dim == 2:
        hull = _hull_2d(pts)
        facets = []
        for a, b in zip(hull, hull[1:] + hull[:1]):
            e = _sub(b, a)
            facets.append(HalfSpace.make((-e[1], e[0]), -e[1] * a[0] + e[0] * a[1]))
        return ConvexPolytope(2, tuple(hull), tuple(sorted(facets)))
    facets = _facets_from_generators(pts, [], dim)
    verts = _extreme(pts, facets, dim)
    return ConvexPolytope(dim, tuple(verts), tuple(facets))


def _recession_rays(normals, dim):
    """Extreme rays of ``{d : <a, d> >= 0}``; ``None`` if the cone has a line."""
    if rank(normals) < dim:
        return None
    rays = set()
    for combo in combinations(normals, dim - 1):
        ns = nullspace(list(combo), dim)
        if len(ns) != 1:
            continue
        d = ns[0]
        for cand in (d, _scale(-1, d)):
            if all(dot(a, cand) >= 0 for a in normals):
                rays.add(primitive(cand))
    return sorted(tuple(Fraction(x) for x in r) for r in rays)


def polytope_from_halfspaces(halfspaces, dim: int | None = None) -> ConvexPolytope:
    """Polyhedron ``{x : <a, x> >= b}``; may be unbounded, degenerate or empty."""
    hs = []
    for h in halfspaces:
        if not isinstance(h, HalfSpace):
            nrm, off = h
            h = HalfSpace.make(nrm, off)
        hs.append(h)
    hs = sorted(set(hs))
    if not hs:
        raise GeometryError("no halfspaces given")
    dim = dim or len(hs[0].normal)
    normals = [h.normal for h in hs]
    pts = set()
    for combo in combinations(hs, dim):
        x = solve([h.normal for h in combo], [h.offset for h in combo])
        if x is not None and all(h.slack(x) >= 0 for h in hs):
            pts.add(x)
    pts = sorted(pts)
    rays = _recession_rays(normals, dim)
    if rays is None:
        # lineality: no vertices; keep the input description
        return ConvexPolytope(dim, (), tuple(hs), lineality=True)
    if not rays:
        if not pts:
            return _empty(dim, hs)
        poly = polytope_from_vertices(pts)
        if not poly.full_dimensional:
            return ConvexPolytope(dim, poly.vertices, tuple(hs), affine_dim=poly.affine_dim)
        return poly
    if not pts:
        return _empty(dim, hs)
    adim = rank([_sub(p, pts[0]) for p in pts[1:]] + list(rays))
    if adim < dim:
        return ConvexPolytope(dim, tuple(pts), tuple(hs), tuple(rays), affine_dim=adim)
    facets = [h for h in hs if _is_facet(h, pts, rays, dim)]
    return ConvexPolytope(dim, tuple(pts), tuple(facets), tuple(rays))


def _is_facet(h, pts, rays, dim):
    on_p = [p for p in pts if h.slack(p) == 0]
    on_r = [r for r in rays if dot(h.normal, r) == 0]
    if not on_p:
        return False
    rows = [_sub(p, on_p[0]) for p in on_p[1:]] + list(on_r)
    return rank(rows) == dim - 1 if rows else dim == 1


def polytope_from_generators(points, rays=()) -> ConvexPolytope:
    """``conv(points) + cone(rays)``; reduces to the vertex hull without rays."""
    pts = sorted(set(as_point(p) for p in points))
    if not rays:
        return polytope_from_vertices(pts)
    rs = sorted(set(tuple(Fraction(x) for x in primitive(r)) for r in rays))
    dim = len(pts[0])
    facets = _facets_from_generators(pts, rs, dim)
    return polytope_from_halfspaces(facets, dim)


# -- measures ----------------------------------------------------------------

def _volume_full(vertices, facets, dim) -> Fraction:
    if dim == 1:
        xs = [v[0] for v in vertices]
        return max(xs) - min(xs)
    if dim == 2:
        pts = _hull_2d(list(vertices))
        s = Fraction(0)
        for a, b in zip(pts, pts[1:] + pts[:1]):
            s += a[0] * b[1] - a[1] * b[0]
        return abs(s) / 2
    # cone from the vertex centroid over every facet; each facet measured by
    # its projection onto a coordinate hyperplane (rescaled by the normal)
    c = tuple(sum(v[i] for v in vertices) / len(vertices) for i in range(dim))
    total = Fraction(0)
    for h in facets:
        on = [v for v in vertices if h.slack(v) == 0]
        k = next(i for i, a in enumerate(h.normal) if a != 0)
        proj = [tuple(x for i, x in enumerate(v) if i != k) for v in on]
        sub = polytope_from_vertices(proj)
        area = _volume_full(sub.vertices, sub.facets, dim - 1)
        total += h.slack(c) * area / abs(h.normal[k])
    return total / dim


def volume(p: ConvexPolytope) -> Fraction:
    """Exact Lebesgue volume; zero for lower-dimensional polytopes."""
    if not p.full_dimensional:
        return Fraction(0)
    if not p.bounded:
        raise UnboundedError("volume of an unbounded polyhedron")
    return _volume_full(p.vertices, p.facets, p.dim)


def measure(p: ConvexPolytope):
    """Volume, with ``math.inf`` for unbounded full-dimensional regions."""
    if p.full_dimensional and not p.bounded:
        return inf
    return volume(p)


def intersect(p: ConvexPolytope, q: ConvexPolytope) -> ConvexPolytope:
    if p.dim != q.dim:
        raise GeometryError("dimension mismatch")
    if p.is_empty or q.is_empty:
        return _empty(p.dim)
    for x in (p, q):
        if not x.full_dimensional:
            raise GeometryError("intersect needs full-dimensional operands")
    return polytope_from_halfspaces(list(p.facets) + list(q.facets), p.dim)


def symdiff_volume(p: ConvexPolytope, q: ConvexPolytope) -> Fraction:
    """``vol(P) + vol(Q) - 2 vol(P n Q)`` for bounded polytopes."""
    if not (p.bounded and q.bounded):
        raise UnboundedError("symmetric difference of unbounded polytopes")
    return volume(p) + volume(q) - 2 * volume(intersect(p, q))


def disjoint_interiors(p: ConvexPolytope, q: ConvexPolytope) -> bool:
    if not (p.full_dimensional and q.full_dimensional):
        return True
    return not intersect(p, q).full_dimensional


def difference_pieces(p: ConvexPolytope, q: ConvexPolytope) -> list[ConvexPolytope]:
    """Full-dimensional convex pieces (disjoint interiors) covering ``P \\ Q``.

    Works for unbounded operands; used where ``vol(P) - vol(P n Q)`` would
    be ``inf - inf``.
    """
    if not q.full_dimensional:
        return [p] if p.full_dimensional else []
    pieces = []
    kept = list(p.facets)
    for h in q.facets:
        cand = polytope_from_halfspaces(kept + [h.flipped()], p.dim)
        if cand.full_dimensional:
            pieces.append(cand)
        kept.append(h)
    return pieces


def affine_image(p: ConvexPolytope, matrix, shift) -> ConvexPolytope:
    """Image of ``P`` under ``x -> matrix @ x + shift`` (matrix invertible)."""
    m = [[Fraction(x) for x in row] for row in matrix]
    t = as_point(shift)
    n = p.dim

    def apply(x):
        return tuple(sum(m[i][j] * x[j] for j in range(n)) + t[i] for i in range(n))

    def apply_lin(x):
        return tuple(sum(m[i][j] * x[j] for j in range(n)) for i in range(n))

    if det(m) == 0:
        raise GeometryError("affine map is not invertible")
    if p.bounded and p.full_dimensional:
        return polytope_from_vertices([apply(v) for v in p.vertices])
    # <a, x> >= b with x = M^-1 (y - t): normal M^-T a
    minv = [[None] * n for _ in range(n)]
    for k in range(n):
        col = solve(m, [Fraction(int(i == k)) for i in range(n)])
        for i in range(n):
            minv[i][k] = col[i]
    hs = []
    for h in p.facets:
        a = h.normal
        new_a = tuple(sum(minv[i][j] * a[i] for i in range(n)) for j in range(n))
        new_b = h.offset + dot(new_a, t)
        hs.append(HalfSpace.make(new_a, new_b))
    if p.lineality:
        return ConvexPolytope(n, (), tuple(sorted(hs)), lineality=True)
    verts = tuple(sorted(apply(v) for v in p.vertices))
    rays = tuple(sorted(tuple(Fraction(x) for x in primitive(apply_lin(r))) for r in p.rays))
    return ConvexPolytope(n, verts, tuple(sorted(hs)), rays, affine_dim=p.affine_dim)
