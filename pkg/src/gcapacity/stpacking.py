"""Admissible semitoric simplices, their radii, packings and capacities.

A simplex at a non-fake vertex ``v`` is chosen together with an unfolding
``u`` in ``{0,1}^mf``: in the plane sheared by ``t^u`` the vertex must be a
Delzant corner, the simplex ``conv{v', v' + rho f1, v' + rho f2}`` is built
on its edge frame there, and its preimage must lie in the polygon without
meeting the cut segments fixed by the heights. For cut ``j`` the removed
segment is the part of ``x = lam_j`` above the focus point
``(lam_j, bottom_j + h_j)`` when ``u_j = 0`` and below it when ``u_j = 1``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import inf

from .geometry import (
    ConvexPolytope, as_point, det, dot, polytope_from_vertices, volume,
    disjoint_interiors,
)
from .packing import (
    DEFAULT_TOL, PackingConfiguration, _solve,
)
from .semitoric import (
    PrimitiveSemitoricPolygon, SemitoricError, SemitoricHeights,
    SemitoricPolygonOrbit, Shear, _edge_dirs, shear_pieces, slab_pieces,
)
from .symbolic import Radical, RadicalInterval

__all__ = [
    "FakeCorner", "StSimplexFrame", "unfolded_frame", "unfolding_options", "radius_for_frame",
    "max_st_radius", "st_simplex_pieces", "st_simplex_admissible",
    "SemitoricPackingProblem", "SemitoricPackingCertificate", "pack_semitoric",
    "capacity_ST", "capacity_ST_rad",
]


class FakeCorner(SemitoricError):
    pass


@dataclass(frozen=True)
class StSimplexFrame:
    vertex: tuple       # in the polygon
    u: tuple            # unfolding vector
    apex: tuple         # t^u(vertex)
    f1: tuple
    f2: tuple

    @property
    def shear(self) -> Shear:
        return Shear(0, tuple(zip(self._lams, self.u)))


def _shear(prim: PrimitiveSemitoricPolygon, u) -> Shear:
    return Shear(0, tuple(zip(prim.lams, u)))


def unfolded_frame(prim: PrimitiveSemitoricPolygon, v, u):
    """Edge frame at ``t^u(v)``, or ``None`` if it is not a Delzant corner there."""
    v = as_point(v)
    sh = _shear(prim, u)
    d1, d2 = _edge_dirs(prim.polygon, v)
    e1, e2 = sh.map_direction(d1, v[0]), sh.map_direction(d2, v[0])
    if det((e1, e2)) < 0:
        e1, e2 = e2, e1
    if det((e1, e2)) != 1:
        return None
    fr = StSimplexFrame(v, tuple(u), sh(v), e1, e2)
    object.__setattr__(fr, "_lams", prim.lams)
    return fr


def unfolding_options(prim: PrimitiveSemitoricPolygon, v):
    if prim.kind(v) == "fake":
        raise FakeCorner(f"no admissible simplex at the fake corner {v}")
    out = []
    for u in itertools.product((0, 1), repeat=prim.mf):
        fr = unfolded_frame(prim, v, u)
        if fr is not None:
            out.append(fr)
    return out


# -- affine-in-rho points -------------------------------------------------------

def _simplex_generators(fr: StSimplexFrame):
    zero = (Fraction(0), Fraction(0))
    return [(fr.apex, zero), (fr.apex, fr.f1), (fr.apex, fr.f2)]


def _at(p, rho):
    c, l = p
    return (c[0] + rho * l[0], c[1] + rho * l[1])


def _edge_line_point(a, b, x):
    """Where edge ``a -> b`` meets ``x = const``; both endpoints affine in rho.

    All simplex vertices are ``apex + rho * e``, so the crossing point is
    affine in rho as well.
    """
    (c, la), (_, lb) = a, b
    d = (Fraction(lb[0] - la[0]), Fraction(lb[1] - la[1]))
    t0 = (x - c[0]) / d[0]
    const = (c[0] + t0 * d[0], c[1] + t0 * d[1])
    s = la[0] / d[0]
    lin = (la[0] - s * d[0], la[1] - s * d[1])
    return (const, lin)


def _thresholds(fr: StSimplexFrame, lams):
    ts = set()
    for f in (fr.f1, fr.f2):
        if f[0]:
            for lam in lams:
                t = (lam - fr.apex[0]) / f[0]
                if t > 0:
                    ts.add(t)
    return sorted(ts)


def _intervals(ts):
    pts = [Fraction(0)] + list(ts)
    out = []
    for a, b in zip(pts, pts[1:]):
        out.append((a, b, (a + b) / 2))
    out.append((pts[-1], inf, pts[-1] + 1))
    return out


def _slab_points(gens, a, b, rho):
    """Affine vertices of ``simplex ∩ {a <= x <= b}`` (combinatorics at ``rho``)."""
    pts = [g for g in gens if a <= _at(g, rho)[0] <= b]
    for g, h in itertools.combinations(gens, 2):
        xg, xh = _at(g, rho)[0], _at(h, rho)[0]
        for line in (a, b):
            if line in (-inf, inf):
                continue
            if min(xg, xh) < line < max(xg, xh):
                pts.append(_edge_line_point(g, h, line))
    return pts


def _line_points(gens, x, rho):
    pts = [g for g in gens if g[1][0] == 0 and g[0][0] == x]
    for g, h in itertools.combinations(gens, 2):
        xg, xh = _at(g, rho)[0], _at(h, rho)[0]
        if min(xg, xh) < x < max(xg, xh):
            pts.append(_edge_line_point(g, h, x))
    return pts


def _focus_levels(prim, heights):
    out = []
    for j in range(prim.mf):
        out.append(heights.focus(prim, j)[1])
    return out


def _radius_constraints(prim, heights, fr: StSimplexFrame, rho_probe, unfolded):
    """Linear constraints ``a + b*rho >= 0`` valid on the probe's interval."""
    gens = _simplex_generators(fr)
    sh = _shear(prim, fr.u)
    cons = []
    lams = prim.lams
    for (a, b), piece in unfolded:
        pts = _slab_points(gens, a, b, rho_probe)
        for h in piece.facets:
            for c, l in pts:
                cons.append((dot(h.normal, c) - h.offset, dot(h.normal, l)))
    levels = _focus_levels(prim, heights)
    for j, lam in enumerate(lams):
        pts = _line_points(gens, lam, rho_probe)
        if len(pts) < 2:
            continue
        shift = sh.f(lam)
        ys = sorted(pts, key=lambda p: _at(p, rho_probe)[1])
        lo, hi = ys[0], ys[-1]
        if _at(lo, rho_probe)[1] == _at(hi, rho_probe)[1]:
            continue
        Y = levels[j]
        if fr.u[j] == 0:
            # top of slice below the focus: Y - (y_hi - shift) >= 0
            cons.append((Y - (hi[0][1] - shift), -hi[1][1]))
        else:
            cons.append((lo[0][1] - shift - Y, lo[1][1]))
    return cons


def _unfolded_pieces(prim, u):
    sh = _shear(prim, u)
    lams = prim.lams
    out = []
    bounds = list(zip([-inf] + list(lams), list(lams) + [inf]))
    for a, b in bounds:
        ps = slab_pieces(prim.polygon, [x for x in (a, b) if x not in (-inf, inf)])
        for p in ps:
            xs = [v[0] for v in p.vertices]
            lo = -inf if any(r[0] < 0 for r in p.rays) else min(xs)
            hi = inf if any(r[0] > 0 for r in p.rays) else max(xs)
            if a <= lo and hi <= b:
                out.extend(((a, b), q) for q in shear_pieces([p], sh, lams))
    return out


def _center_blocked(prim, heights, fr):
    levels = _focus_levels(prim, heights)
    for j, lam in enumerate(prim.lams):
        if fr.vertex[0] == lam:
            y = fr.vertex[1]
            if (fr.u[j] == 0 and y >= levels[j]) or (fr.u[j] == 1 and y <= levels[j]):
                return True
    return False


def radius_for_frame(prim, heights, fr: StSimplexFrame):
    """Largest admissible rho for one unfolding (``inf`` when unbounded)."""
    if _center_blocked(prim, heights, fr):
        return Fraction(0)
    unfolded = _unfolded_pieces(prim, fr.u)
    for lo, hi, probe in _intervals(_thresholds(fr, prim.lams)):
        cons = _radius_constraints(prim, heights, fr, probe, unfolded)
        limit = hi
        for a, b in cons:
            if b < 0:
                r = a / -b
                if r < limit:
                    limit = r
            elif a + b * lo < 0:
                return lo
        if limit < hi:
            return max(limit, lo)
    return inf


def max_st_radius(prim: PrimitiveSemitoricPolygon, heights: SemitoricHeights, v, with_frame=False):
    """Largest simplex radius at ``v`` over all unfoldings."""
    best, best_fr = Fraction(0), None
    for fr in unfolding_options(prim, v):
        r = radius_for_frame(prim, heights, fr)
        if best_fr is None or r > best:
            best, best_fr = r, fr
    return (best, best_fr) if with_frame else best


def st_simplex_pieces(prim, fr: StSimplexFrame, rho) -> list[ConvexPolytope]:
    """The simplex of radius ``rho`` folded back into the polygon, as slab pieces."""
    rho = Fraction(rho)
    tri = polytope_from_vertices([_at(g, rho) for g in _simplex_generators(fr)])
    return shear_pieces([tri], _shear(prim, fr.u).inverse(), prim.lams)


def st_simplex_admissible(prim, heights, fr, rho) -> bool:
    """Direct check with polytope operations (independent of the radius solver)."""
    pieces = st_simplex_pieces(prim, fr, rho)
    if _center_blocked(prim, heights, fr):
        return False
    for p in pieces:
        if not all(prim.polygon.contains(q) for q in p.vertices):
            return False
    levels = _focus_levels(prim, heights)
    xs = [q[0] for p in pieces for q in p.vertices]
    for j, lam in enumerate(prim.lams):
        # a cut only matters where it crosses the interior of the simplex
        if not min(xs) < lam < max(xs):
            continue
        ys = []
        for p in pieces:
            ys.extend(q[1] for q in p.vertices if q[0] == lam)
        if len(ys) < 2 or min(ys) == max(ys):
            continue
        if fr.u[j] == 0 and max(ys) > levels[j]:
            return False
        if fr.u[j] == 1 and min(ys) < levels[j]:
            return False
    return True


# -- packing ------------------------------------------------------------------

class SemitoricPackingProblem:
    """Same interface as the toric problem, one fixed unfolding per vertex."""

    pair_steps = 8

    def __init__(self, prim, frames, radii, vol):
        self.prim = prim
        self.frames = frames
        self.N = len(frames)
        self.n = 2
        self.R = list(radii)
        self.vol = vol
        self._cap = {}

    def g(self, r):
        return r * r / 2

    def value(self, radii):
        return sum((self.g(r) for r in radii), Fraction(0))

    def cap(self, i, j, y):
        if y == 0:
            return inf
        key = (i, j, y)
        if key not in self._cap:
            self._cap[key] = self._compute_cap(i, j, y)
        return self._cap[key]

    def _compute_cap(self, i, j, y):
        fi, fj = self.frames[i], self.frames[j]
        pieces = st_simplex_pieces(self.prim, fj, y)
        to_i = _shear(self.prim, fi.u)
        qs = [q for q in shear_pieces(pieces, to_i, self.prim.lams) if q.full_dimensional]
        rows = _dual_rows(fi.f1, fi.f2)
        simplex_axes = [rows[0], rows[1], (-rows[0][0] - rows[1][0], -rows[0][1] - rows[1][1])]
        best_total = inf
        for q in qs:
            axes = set(simplex_axes)
            for h in q.facets:
                axes.add(tuple(h.normal))
                axes.add(tuple(-a for a in h.normal))
            best = Fraction(0)
            for a in axes:
                alpha = max(Fraction(0), Fraction(dot(a, fi.f1)), Fraction(dot(a, fi.f2)))
                m = min(dot(a, p) for p in q.vertices)
                if any(dot(a, r) < 0 for r in q.rays):
                    continue
                room = m - dot(a, fi.apex)
                if room < 0:
                    continue
                if alpha == 0:
                    best = inf
                    break
                if room / alpha > best:
                    best = room / alpha
            best_total = min(best_total, best)
        return best_total

    def pair_ok(self, i, j, x, y):
        if x == 0 or y == 0:
            return True
        return x <= self.cap(i, j, y)

    def is_feasible(self, radii):
        if any(r < 0 or r > R for r, R in zip(radii, self.R)):
            return False
        return all(self.pair_ok(i, j, radii[i], radii[j])
                   for i, j in itertools.combinations(range(self.N), 2))

    def pair_max(self, i, j, lx, hx, ly, hy):
        """Upper bound on g(x)+g(y) over the feasible part of the rectangle.

        ``cap(i, j, .)`` is nonincreasing, so on ``[y_k, y_k+1]`` the pair is
        bounded by ``g(min(hx, cap(y_k))) + g(y_k+1)``.
        """
        best = None
        steps = self.pair_steps
        for k in range(steps):
            y0 = ly + (hy - ly) * k / steps
            y1 = ly + (hy - ly) * (k + 1) / steps
            c = self.cap(i, j, y0)
            x = hx if c >= hx else c
            if x < lx:
                continue
            v = self.g(x) + self.g(y1)
            if best is None or v > best:
                best = v
        if lx == 0:
            v = self.g(hy)
            best = v if best is None or v > best else best
        return best if best is not None else self.g(lx) + self.g(ly)


def _dual_rows(f1, f2):
    d = det((f1, f2))
    return ((Fraction(f2[1], d), Fraction(-f2[0], d)), (Fraction(-f1[1], d), Fraction(f1[0], d)))


@dataclass(frozen=True)
class SemitoricPackingCertificate:
    lower: Fraction
    upper: Fraction
    tolerance: Fraction
    vertices: tuple
    frames: tuple          # chosen unfolding per vertex (None when unused)
    best_config: PackingConfiguration | None
    witness_ok: bool
    nodes: int = 0
    converged: bool = True

    @property
    def is_infinite(self) -> bool:
        return self.upper == inf

    def __str__(self):
        from .symbolic import fmt_rat
        if self.is_infinite:
            return "pack = +inf"
        return f"pack in [{fmt_rat(self.lower)}, {fmt_rat(self.upper)}]"


def _as_primitive(x) -> PrimitiveSemitoricPolygon:
    if isinstance(x, SemitoricPolygonOrbit):
        return x.representative
    return x


def pack_semitoric(orbit, heights, tol=DEFAULT_TOL, exclude=(), max_nodes=50_000):
    """Certified optimal semitoric packing; every unfolding choice is searched.

    With no cuts this is the toric problem and is delegated to it.
    """
    prim = _as_primitive(orbit)
    tol = Fraction(tol)
    if not isinstance(heights, SemitoricHeights):
        heights = SemitoricHeights.make(prim, heights)
    verts = prim.non_fake
    excluded = {as_point(e) if not isinstance(e, int) else verts[e] for e in exclude}
    options = []
    for v in verts:
        if v in excluded:
            options.append([(None, Fraction(0))])
            continue
        opts = [(fr, radius_for_frame(prim, heights, fr)) for fr in unfolding_options(prim, v)]
        opts = [o for o in opts if o[1] > 0] or [(None, Fraction(0))]
        if any(r == inf for _, r in opts):
            return SemitoricPackingCertificate(inf, inf, tol, verts, (), None, True)
        options.append(opts)
    area = volume(prim.polygon) if prim.polygon.bounded else inf
    if prim.mf == 0 and prim.polygon.bounded:
        return _delegate_toric(prim, verts, excluded, tol, max_nodes)
    best = None
    upper = Fraction(0)
    nodes = 0
    converged = True
    for combo in itertools.product(*options):
        frames = [fr for fr, _ in combo]
        radii = [r for _, r in combo]
        live = [i for i, fr in enumerate(frames) if fr is not None]
        P = SemitoricPackingProblem(prim, [frames[i] for i in live], [radii[i] for i in live], area)
        x, lo, up, nd, conv = _solve(P, tol, max_nodes)
        nodes += nd
        converged &= conv
        upper = max(upper, up)
        if best is None or lo > best[0]:
            full = [Fraction(0)] * len(verts)
            for i, r in zip(live, x):
                full[i] = r
            best = (lo, tuple(frames), full)
    lower, frames, radii = best
    ok = _witness_ok(prim, heights, frames, radii)
    return SemitoricPackingCertificate(lower, max(upper, lower), tol, verts, frames,
                                       PackingConfiguration(radii), ok, nodes,
                                       converged and max(upper, lower) - lower <= tol)


def _delegate_toric(prim, verts, excluded, tol, max_nodes):
    from .delzant import validate_delzant
    from .packing import pack_toric
    delta = validate_delzant(prim.polygon)
    ex = tuple(delta.index(v) for v in excluded)
    c = pack_toric(delta, tol, exclude=ex, max_nodes=max_nodes)
    order = [delta.index(v) for v in verts]
    radii = tuple(c.best_config.radii[i] for i in order)
    return SemitoricPackingCertificate(c.lower, c.upper, c.tolerance, verts, (),
                                       PackingConfiguration(radii), c.witness.ok,
                                       c.nodes, c.converged)


def _witness_ok(prim, heights, frames, radii) -> bool:
    pieces = []
    for fr, r in zip(frames, radii):
        if fr is None or r == 0:
            continue
        if not st_simplex_admissible(prim, heights, fr, r):
            return False
        pieces.append(st_simplex_pieces(prim, fr, r))
    for a, b in itertools.combinations(pieces, 2):
        for p in a:
            for q in b:
                if not disjoint_interiors(p, q):
                    return False
    return True


def capacity_ST(orbit, heights, tol=DEFAULT_TOL, cert=None) -> RadicalInterval:
    cert = cert or pack_semitoric(orbit, heights, tol)
    return RadicalInterval(Radical.of(2 * cert.lower, 4), Radical.of(2 * cert.upper, 4))


def capacity_ST_rad(orbit, heights) -> Radical:
    prim = _as_primitive(orbit)
    if not isinstance(heights, SemitoricHeights):
        heights = SemitoricHeights.make(prim, heights)
    return Radical.of(max(max_st_radius(prim, heights, v) for v in prim.non_fake), 2)
