"""Delzant polytopes: validation, vertex frames, corner chops, admissible simplices."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import inf

from .geometry import (
    ConvexPolytope, GeometryError, HalfSpace, affine_image, as_point, det, dot,
    primitive,
    polytope_from_halfspaces, polytope_from_vertices, rank, solve,
    symdiff_volume, volume,
)

__all__ = [
    "DelzantError", "NotSimple", "NotSmooth", "NotRational", "EpsilonTooLarge",
    "InvalidVertex", "VertexFrame", "DelzantPolytope", "ValidationReport",
    "edge_frame", "validate_delzant", "check_delzant", "corner_chop",
    "corner_chop_with_map", "chop_all_corners", "d_P", "admissible_simplex",
    "max_admissible_radius", "edge_lattice_length", "is_unimodular",
    "apply_unimodular",
]


class DelzantError(ValueError):
    pass


class NotSimple(DelzantError):
    def __init__(self, vertex, n_facets):
        self.vertex = vertex
        self.n_facets = n_facets
        super().__init__(f"not simple at {_fmt(vertex)}: {n_facets} facets meet there")


class NotSmooth(DelzantError):
    def __init__(self, vertex, det_value):
        self.vertex = vertex
        self.det = det_value
        super().__init__(f"not smooth at {_fmt(vertex)}: edge frame has det {det_value}")


class NotRational(DelzantError):
    # Normals are stored as primitive integer vectors, so rational input can
    # never trigger this; it exists for callers building HalfSpace by hand.
    def __init__(self, facet):
        self.facet = facet
        super().__init__(f"facet normal {facet.normal} is not integral")


class EpsilonTooLarge(DelzantError):
    pass


class InvalidVertex(DelzantError):
    pass


def _fmt(p):
    return "(" + ", ".join(str(c) for c in p) + ")"


def is_unimodular(columns) -> bool:
    return abs(det(columns)) == 1


@dataclass(frozen=True)
class VertexFrame:
    vertex: tuple
    edge_dirs: tuple  # primitive integer vectors, ordered as the active facets

    @property
    def det(self) -> int:
        return det(self.edge_dirs)

    @property
    def dual_rows(self) -> tuple:
        """Rows of the inverse frame matrix; integral when the frame is unimodular."""
        n = len(self.edge_dirs)
        rows = [[None] * n for _ in range(n)]
        # solve U x = e_k for each column of U^-1
        u_rows = [[self.edge_dirs[c][r] for c in range(n)] for r in range(n)]
        for k in range(n):
            col = solve(u_rows, [Fraction(int(i == k)) for i in range(n)])
            for i in range(n):
                rows[i][k] = col[i]
        return tuple(tuple(r) for r in rows)


def edge_frame(body: ConvexPolytope, v) -> tuple[VertexFrame, tuple]:
    """Frame of primitive edge directions at ``v`` and the active facets.

    The i-th direction keeps every active facet tight except the i-th,
    which it increases.
    """
    v = as_point(v)
    n = body.dim
    active = [h for h in body.facets if h.slack(v) == 0]
    if len(active) != n:
        raise NotSimple(v, len(active))
    rows = [h.normal for h in active]
    dirs = []
    for i in range(n):
        rhs = [Fraction(int(j == i)) for j in range(n)]
        d = solve(rows, rhs)
        if d is None:
            raise NotSimple(v, len(active))
        dirs.append(primitive(d))
    return VertexFrame(v, tuple(dirs)), tuple(active)


@dataclass(frozen=True)
class DelzantPolytope:
    body: ConvexPolytope
    frames: tuple

    @property
    def dim(self) -> int:
        return self.body.dim

    @property
    def vertices(self) -> tuple:
        return self.body.vertices

    @property
    def n_vertices(self) -> int:
        return len(self.body.vertices)

    def frame(self, v) -> VertexFrame:
        v = resolve_vertex(self, v)
        for f in self.frames:
            if f.vertex == v:
                return f
        raise InvalidVertex(f"{_fmt(v)} is not a vertex")

    def index(self, v) -> int:
        return self.vertices.index(resolve_vertex(self, v))

    def volume(self) -> Fraction:
        return volume(self.body)

    def __repr__(self):
        return f"DelzantPolytope({', '.join(_fmt(v) for v in self.vertices)})"


def resolve_vertex(delta: DelzantPolytope, v):
    """Accept a vertex index or exact coordinates."""
    if isinstance(v, int):
        if not 0 <= v < len(delta.vertices):
            raise InvalidVertex(f"vertex index {v} out of range 0..{len(delta.vertices) - 1}")
        return delta.vertices[v]
    p = as_point(v)
    if p not in delta.vertices:
        raise InvalidVertex(f"{_fmt(p)} is not a vertex")
    return p


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    polytope: DelzantPolytope | None
    violation: DelzantError | None

    @property
    def message(self) -> str:
        if self.ok:
            return f"delzant: ok, vertices: {self.polytope.n_vertices}"
        return f"delzant: {type(self.violation).__name__}: {self.violation}"


def validate_delzant(body) -> DelzantPolytope:
    """Raise the first violation found, else return the validated polytope."""
    if not isinstance(body, ConvexPolytope):
        body = polytope_from_vertices(body)
    if not body.full_dimensional:
        raise DelzantError("polytope is not full-dimensional")
    if not body.bounded:
        raise DelzantError("polytope is unbounded")
    for h in body.facets:
        if not all(isinstance(a, int) for a in h.normal):
            raise NotRational(h)
    frames = []
    for v in body.vertices:
        frame, _ = edge_frame(body, v)
        d = frame.det
        if abs(d) != 1:
            raise NotSmooth(v, d)
        frames.append(frame)
    return DelzantPolytope(body, tuple(frames))


def check_delzant(body) -> ValidationReport:
    try:
        return ValidationReport(True, validate_delzant(body), None)
    except DelzantError as exc:
        return ValidationReport(False, None, exc)


def edge_lattice_length(delta: DelzantPolytope, v, k: int) -> Fraction:
    """Lattice length of the edge leaving ``v`` along its k-th frame direction."""
    v = resolve_vertex(delta, v)
    u = delta.frame(v).edge_dirs[k]
    best = None
    for w in delta.vertices:
        if w == v:
            continue
        d = tuple(a - b for a, b in zip(w, v))
        if rank([d, u]) != 1:
            continue
        i = next(j for j, c in enumerate(u) if c != 0)
        t = d[i] / u[i]
        if t > 0 and (best is None or t < best):
            best = t
    if best is None:
        raise GeometryError("edge has no second endpoint")
    return best


def admissible_simplex(delta: DelzantPolytope, v, rho) -> ConvexPolytope:
    """``conv{v, v + rho u_1, ..., v + rho u_n}`` for the frame at ``v``."""
    rho = Fraction(rho)
    if rho <= 0:
        raise ValueError("simplex radius must be positive")
    f = delta.frame(v)
    pts = [f.vertex] + [tuple(a + rho * b for a, b in zip(f.vertex, u)) for u in f.edge_dirs]
    return polytope_from_vertices(pts)


def radius_limit(facets, v, dirs):
    """Largest rho with every ``v + rho u`` inside all facets (``inf`` if none binds)."""
    best = inf
    for h in facets:
        s = h.slack(v)
        for u in dirs:
            au = dot(h.normal, u)
            if au < 0:
                r = s / -au
                if r < best:
                    best = r
    return best


def max_admissible_radius(delta: DelzantPolytope, v):
    f = delta.frame(v)
    return radius_limit(delta.body.facets, f.vertex, f.edge_dirs)


def _chop_halfspace(frame: VertexFrame, eps) -> HalfSpace:
    dual = frame.dual_rows
    n = len(dual)
    a = tuple(sum(dual[i][j] for i in range(n)) for j in range(n))
    return HalfSpace.make(a, dot(a, frame.vertex) + eps)


def corner_chop_with_map(delta: DelzantPolytope, v, eps):
    """Chop ``v`` by ``eps``; also return old vertex -> surviving vertices."""
    eps = Fraction(eps)
    v = resolve_vertex(delta, v)
    if eps <= 0:
        raise EpsilonTooLarge("chop parameter must be positive")
    for k in range(delta.dim):
        length = edge_lattice_length(delta, v, k)
        if eps >= length:
            raise EpsilonTooLarge(
                f"eps={eps} reaches the end of edge {k} at {_fmt(v)} (lattice length {length})")
    h = _chop_halfspace(delta.frame(v), eps)
    body = polytope_from_halfspaces(list(delta.body.facets) + [h], delta.dim)
    new = validate_delzant(body)
    frame = delta.frame(v)
    mapping = {w: (w,) for w in delta.vertices if w != v}
    mapping[v] = tuple(sorted(tuple(a + eps * b for a, b in zip(v, u)) for u in frame.edge_dirs))
    return new, mapping


def corner_chop(delta: DelzantPolytope, v, eps) -> DelzantPolytope:
    return corner_chop_with_map(delta, v, eps)[0]


def chop_all_corners(delta: DelzantPolytope, eps) -> DelzantPolytope:
    """Chop every original vertex by the same ``eps``."""
    eps = Fraction(eps)
    for v in delta.vertices:
        for k in range(delta.dim):
            length = edge_lattice_length(delta, v, k)
            # two chops share each edge
            if 2 * eps >= length:
                raise EpsilonTooLarge(f"eps={eps} too large for edge at {_fmt(v)}")
    hs = list(delta.body.facets) + [_chop_halfspace(f, eps) for f in delta.frames]
    return validate_delzant(polytope_from_halfspaces(hs, delta.dim))


def d_P(a, b) -> Fraction:
    """Volume of the symmetric difference of two Delzant polytopes (or bodies)."""
    pa = a.body if isinstance(a, DelzantPolytope) else a
    pb = b.body if isinstance(b, DelzantPolytope) else b
    if pa.dim != pb.dim:
        raise GeometryError("dimension mismatch")
    return symdiff_volume(pa, pb)


def apply_unimodular(delta: DelzantPolytope, matrix, shift) -> DelzantPolytope:
    if abs(det([[row[j] for row in matrix] for j in range(len(matrix))])) != 1:
        raise ValueError("matrix is not unimodular")
    return validate_delzant(affine_image(delta.body, matrix, shift))
