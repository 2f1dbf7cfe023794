"""Optimal admissible packings of Delzant polytopes and toric capacities.

A packing puts one admissible simplex of radius ``rho_i >= 0`` at each
vertex (zero means no simplex). The value is ``sum(rho_i**n) / n!``.

Feasibility is downward closed in ``rho``. Two simplices
``S_i = conv{v_i, v_i + rho_i u_ik}`` have disjoint interiors iff some axis
``a`` from a fixed finite list (facet normals of either simplex, plus
cross products of edge directions in 3D) separates them, and for a fixed
axis that condition is linear in the radii::

    alpha * rho_i + beta * rho_j <= <a, v_j - v_i>,
    alpha = max(0, max_k <a, u_ik>),  beta = -min(0, min_k <a, u_jk>).

The solver is a best-first branch and bound over the radius box, with
upper bounds from a pair decomposition of the objective (exact maximum of
each matched pair over its feasible region) and the volume of the polytope.
"""
from __future__ import annotations

import heapq
import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial, inf

from .delzant import (
    DelzantPolytope, admissible_simplex, max_admissible_radius, resolve_vertex,
)
from .geometry import dot, disjoint_interiors, polytope_from_vertices, volume
from .symbolic import PiLinear, Radical, RadicalInterval, pi_bounds

__all__ = [
    "PackingConfiguration", "PackingCertificate", "FeasibilityWitness",
    "PackingProblem", "feasible", "pack_toric", "pack_toric_excluding",
    "capacity_T", "capacity_cB", "emb_count", "capacity_Er", "ErValue",
    "ContinuityReport", "VertexComparison", "continuity_certificate",
    "DEFAULT_TOL",
]

DEFAULT_TOL = Fraction(1, 1000)


@dataclass(frozen=True)
class PackingConfiguration:
    radii: tuple

    def __post_init__(self):
        object.__setattr__(self, "radii", tuple(Fraction(r) for r in self.radii))
        if any(r < 0 for r in self.radii):
            raise ValueError("radii must be nonnegative")

    def value(self, n: int) -> Fraction:
        return sum((r ** n for r in self.radii), Fraction(0)) / factorial(n)

    def __len__(self):
        return len(self.radii)


@dataclass(frozen=True)
class FeasibilityWitness:
    """Verdicts from the polytope kernel, independent of the solver's constraints."""

    containment: tuple  # (vertex index, radius, max radius, contained)
    pairs: tuple        # (i, j, disjoint interiors)

    @property
    def ok(self) -> bool:
        return all(c[3] for c in self.containment) and all(p[2] for p in self.pairs)

    def lines(self):
        for i, r, m, ok in self.containment:
            yield f"contain v{i} rho={r} max={m} {'ok' if ok else 'FAIL'}"
        for i, j, ok in self.pairs:
            yield f"disjoint v{i} v{j} {'ok' if ok else 'FAIL'}"


@dataclass(frozen=True)
class PackingCertificate:
    best_config: PackingConfiguration
    lower: Fraction
    upper: Fraction
    tolerance: Fraction
    witness: FeasibilityWitness | None
    nodes: int = 0
    converged: bool = True
    excluded: tuple = ()

    @property
    def is_infinite(self) -> bool:
        return self.upper == inf

    def __str__(self):
        from .symbolic import fmt_rat
        if self.is_infinite:
            return "pack = +inf"
        return f"pack in [{fmt_rat(self.lower)}, {fmt_rat(self.upper)}]"


def witness_for(delta: DelzantPolytope, config: PackingConfiguration) -> FeasibilityWitness:
    cont = []
    simplices = {}
    for i, (v, r) in enumerate(zip(delta.vertices, config.radii)):
        if r == 0:
            continue
        s = admissible_simplex(delta, v, r)
        simplices[i] = s
        ok = all(delta.body.contains(p) for p in s.vertices)
        cont.append((i, r, max_admissible_radius(delta, v), ok))
    pairs = []
    for i, j in itertools.combinations(sorted(simplices), 2):
        pairs.append((i, j, disjoint_interiors(simplices[i], simplices[j])))
    return FeasibilityWitness(tuple(cont), tuple(pairs))


def feasible(delta: DelzantPolytope, config) -> tuple[bool, FeasibilityWitness]:
    """Exact feasibility of a radius vector, with the full check transcript."""
    if not isinstance(config, PackingConfiguration):
        config = PackingConfiguration(config)
    if len(config) != delta.n_vertices:
        raise ValueError(f"expected {delta.n_vertices} radii, got {len(config)}")
    w = witness_for(delta, config)
    return w.ok, w


# -- the constraint model -----------------------------------------------------

def _cross(a, b):
    return (a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0])


def _axes(fi, fj, n):
    axes = set()
    for f in (fi, fj):
        rows = f.dual_rows
        for r in rows:
            axes.add(tuple(r))
        axes.add(tuple(-sum(r[k] for r in rows) for k in range(n)))
    if n == 3:
        def edges(f):
            us = f.edge_dirs
            out = list(us)
            for a, b in itertools.combinations(us, 2):
                out.append(tuple(x - y for x, y in zip(a, b)))
            return out
        for e1 in edges(fi):
            for e2 in edges(fj):
                c = _cross(e1, e2)
                if any(c):
                    axes.add(c)
    elif n != 2:
        raise NotImplementedError("separating axes are implemented for n = 2, 3")
    out = set()
    for a in axes:
        out.add(a)
        out.add(tuple(-x for x in a))
    return sorted(out)


class PackingProblem:
    """Radius box, pairwise linear separation constraints and the objective."""

    def __init__(self, delta: DelzantPolytope, exclude=()):
        self.delta = delta
        self.n = delta.dim
        self.N = delta.n_vertices
        self.fact = factorial(self.n)
        self.excluded = tuple(sorted(delta.index(e) if not isinstance(e, int) else e
                                     for e in exclude))
        self.R = [Fraction(0) if i in self.excluded else max_admissible_radius(delta, v)
                  for i, v in enumerate(delta.vertices)]
        self.vol = delta.volume()
        self.cons = {}
        frames = delta.frames
        for i, j in itertools.permutations(range(self.N), 2):
            if i > j:
                continue
            fi, fj = frames[i], frames[j]
            d = tuple(b - a for a, b in zip(fi.vertex, fj.vertex))
            rows = set()
            for a in _axes(fi, fj, self.n):
                alpha = max([Fraction(0)] + [Fraction(dot(a, u)) for u in fi.edge_dirs])
                beta = -min([Fraction(0)] + [Fraction(dot(a, u)) for u in fj.edge_dirs])
                rows.add((alpha, beta, Fraction(dot(a, d))))
            rows = _prune_rows(rows)
            self.cons[(i, j)] = rows
            self.cons[(j, i)] = [(b, a, c) for a, b, c in rows]

    def g(self, r) -> Fraction:
        return r ** self.n / self.fact

    def value(self, radii) -> Fraction:
        return sum((self.g(r) for r in radii), Fraction(0))

    def pair_ok(self, i, j, x, y) -> bool:
        if x == 0 or y == 0:
            return True
        return any(a * x + b * y <= c for a, b, c in self.cons[(i, j)])

    def cap(self, i, j, y):
        """Largest rho_i compatible with rho_j = y (``inf`` if unconstrained)."""
        if y == 0:
            return inf
        best = Fraction(0)
        for a, b, c in self.cons[(i, j)]:
            if b * y > c:
                continue
            if a == 0:
                return inf
            t = (c - b * y) / a
            if t > best:
                best = t
        return best

    def is_feasible(self, radii) -> bool:
        if any(r < 0 or r > R for r, R in zip(radii, self.R)):
            return False
        return all(self.pair_ok(i, j, radii[i], radii[j])
                   for i, j in itertools.combinations(range(self.N), 2))

    def pair_max(self, i, j, lx, hx, ly, hy):
        """Exact max of g(x)+g(y) over the feasible part of a rectangle."""
        g = self.g
        best = None

        def consider(x, y):
            nonlocal best
            v = g(x) + g(y)
            if best is None or v > best:
                best = v

        if lx == 0:
            consider(Fraction(0), hy)
        if ly == 0:
            consider(hx, Fraction(0))
        for a, b, c in self.cons[(i, j)]:
            cands = [(lx, ly), (hx, ly), (lx, hy), (hx, hy)]
            if b:
                for x in (lx, hx):
                    cands.append((x, (c - a * x) / b))
            if a:
                for y in (ly, hy):
                    cands.append(((c - b * y) / a, y))
            for x, y in cands:
                if lx <= x <= hx and ly <= y <= hy and a * x + b * y <= c:
                    consider(x, y)
        return best


def _prune_rows(rows):
    """Drop constraints implied by another one (smaller alpha, beta and larger c)."""
    rows = sorted(rows)
    keep = []
    for r in rows:
        if any(o[0] <= r[0] and o[1] <= r[1] and o[2] >= r[2] and o != r for o in rows):
            continue
        keep.append(r)
    return keep


# -- branch and bound ---------------------------------------------------------

@dataclass(order=True)
class _Node:
    neg_upper: Fraction
    seq: int
    lo: tuple = field(compare=False)
    hi: tuple = field(compare=False)


def _propagate(P: PackingProblem, lo, hi):
    lo, hi = list(lo), list(hi)
    for i, j in itertools.permutations(range(P.N), 2):
        if lo[i] > 0 and lo[j] > 0 and not P.pair_ok(i, j, lo[i], lo[j]):
            return None
    changed = True
    while changed:
        changed = False
        for i in range(P.N):
            for j in range(P.N):
                if i == j or lo[j] == 0:
                    continue
                c = P.cap(i, j, lo[j])
                if c < hi[i]:
                    hi[i] = c
                    changed = True
            if hi[i] < lo[i]:
                return None
    return tuple(lo), tuple(hi)


def _greedy(P: PackingProblem, lo, hi):
    x = list(lo)
    order = sorted(range(P.N), key=lambda i: (-hi[i], i))
    for i in order:
        t = hi[i]
        for j in range(P.N):
            if j != i and x[j] > 0:
                c = P.cap(i, j, x[j])
                if c < t:
                    t = c
        if t > x[i]:
            x[i] = t
    return tuple(x)


def _matching_bound(P: PackingProblem, lo, hi):
    N = P.N
    single = [P.g(h) for h in hi]
    save = {}
    for i, j in itertools.combinations(range(N), 2):
        if P.pair_ok(i, j, hi[i], hi[j]):
            continue
        pm = P.pair_max(i, j, lo[i], hi[i], lo[j], hi[j])
        s = single[i] + single[j] - pm
        if s > 0:
            save[(i, j)] = s
    total = sum(single, Fraction(0))
    if not save:
        return total
    if N <= 14:
        return total - _best_matching(N, save)
    # greedy matching on savings for larger vertex sets
    used = set()
    gain = Fraction(0)
    for (i, j), s in sorted(save.items(), key=lambda kv: -kv[1]):
        if i not in used and j not in used:
            used.update((i, j))
            gain += s
    return total - gain


def _best_matching(N, save):
    nbrs = {}
    for (i, j), s in save.items():
        nbrs.setdefault(i, []).append((j, s))
        nbrs.setdefault(j, []).append((i, s))
    memo = {}

    def rec(mask):
        if mask in memo:
            return memo[mask]
        i = next((k for k in range(N) if not mask >> k & 1 and k in nbrs), None)
        if i is None:
            return Fraction(0)
        m2 = mask | 1 << i
        best = rec(m2)
        for j, s in nbrs[i]:
            if not m2 >> j & 1:
                v = s + rec(m2 | 1 << j)
                if v > best:
                    best = v
        memo[mask] = best
        return best

    return rec(0)


def _solve(P: PackingProblem, tol, max_nodes):
    zero = tuple(Fraction(0) for _ in range(P.N))
    best_x = zero
    best = Fraction(0)
    heap = []
    seq = itertools.count()
    nodes = 0

    def push(lo, hi):
        nonlocal best_x, best
        r = _propagate(P, lo, hi)
        if r is None:
            return
        lo, hi = r
        if P.is_feasible(hi):
            v = P.value(hi)
            if v > best:
                best, best_x = v, hi
            return
        x = _greedy(P, lo, hi)
        v = P.value(x)
        if v > best:
            best, best_x = v, x
        ub = min(_matching_bound(P, lo, hi), P.vol)
        if ub > best:
            heapq.heappush(heap, _Node(-ub, next(seq), lo, hi))

    push(zero, tuple(P.R))
    while heap:
        top = heap[0]
        if -top.neg_upper - best <= tol:
            break
        if nodes >= max_nodes:
            break
        heapq.heappop(heap)
        nodes += 1
        lo, hi = top.lo, top.hi
        k = max(range(P.N), key=lambda i: (hi[i] - lo[i], -i))
        mid = (lo[k] + hi[k]) / 2
        push(lo, hi[:k] + (mid,) + hi[k + 1:])
        push(lo[:k] + (mid,) + lo[k + 1:], hi)
    # drop nodes that can no longer beat the incumbent
    while heap and -heap[0].neg_upper <= best:
        heapq.heappop(heap)
    upper = max(best, -heap[0].neg_upper) if heap else best
    converged = upper - best <= tol
    return best_x, best, upper, nodes, converged


def pack_toric(delta: DelzantPolytope, tol=DEFAULT_TOL, exclude=(), max_nodes=200_000,
               with_witness=True) -> PackingCertificate:
    """Certified enclosure of the optimal admissible packing volume."""
    tol = Fraction(tol)
    if tol <= 0:
        raise ValueError("tolerance must be positive")
    if isinstance(exclude, int):
        exclude = (exclude,)
    exclude = tuple(delta.index(resolve_vertex(delta, e)) for e in exclude)
    P = PackingProblem(delta, exclude)
    x, lower, upper, nodes, conv = _solve(P, tol, max_nodes)
    config = PackingConfiguration(x)
    w = witness_for(delta, config) if with_witness else None
    if w is not None and not w.ok:
        raise AssertionError("solver configuration failed the exact witness check")
    return PackingCertificate(config, lower, upper, tol, w, nodes, conv, exclude)


def pack_toric_excluding(delta: DelzantPolytope, i, tol=DEFAULT_TOL, **kw) -> PackingCertificate:
    return pack_toric(delta, tol, exclude=(resolve_vertex(delta, i),), **kw)


# -- capacities ---------------------------------------------------------------

def capacity_T(delta: DelzantPolytope, tol=DEFAULT_TOL, cert: PackingCertificate | None = None):
    """Enclosure of ``(n! pack)^(1/2n)`` as a pair of radicals."""
    cert = cert or pack_toric(delta, tol)
    n = delta.dim
    k = factorial(n)
    return RadicalInterval(Radical.of(k * cert.lower, 2 * n), Radical.of(k * cert.upper, 2 * n))


def capacity_cB(delta: DelzantPolytope) -> Radical:
    """Largest equivariant ball: square root of the largest vertex radius."""
    return Radical.of(max(max_admissible_radius(delta, v) for v in delta.vertices), 2)


def emb_count(delta: DelzantPolytope, r) -> int:
    """``n!`` times the number of vertices admitting a simplex of radius ``r**2``."""
    r = Fraction(r)
    n = delta.dim
    return factorial(n) * sum(1 for v in delta.vertices if max_admissible_radius(delta, v) >= r * r)


@dataclass(frozen=True)
class ErValue:
    """``count * (n! vol_P)^(1/n) * pi``."""

    count: int
    scale: Radical

    def __str__(self):
        if self.count == 0:
            return "0"
        return f"{self.count}*{self.scale}*pi"

    def bounds(self, digits: int = 20):
        lo, hi = self.scale.bounds(digits)
        pl, ph = PiLinear(0, 1).bounds(3)
        return self.count * lo * pl, self.count * hi * ph


def capacity_Er(delta: DelzantPolytope, r) -> ErValue:
    """``vol(M)^(1/n) Emb(vol(M)^(1/n) r)`` with ``vol(M) = n! pi^n vol_P``.

    Emb is evaluated at ``s = (n! vol_P)^(1/n) pi r``; the vertex test
    ``R_v >= s**2`` becomes ``R_v**n >= (n! vol_P)**2 * (pi r)**(2n)``, decided
    with rational enclosures of pi (equality is impossible for ``r > 0``).
    """
    r = Fraction(r)
    if r < 0:
        raise ValueError("r must be nonnegative")
    n = delta.dim
    q = factorial(n) * delta.volume()
    count = 0
    for v in delta.vertices:
        R = max_admissible_radius(delta, v)
        if r == 0:
            count += 1
            continue
        level = 0
        while True:
            plo, phi = pi_bounds(level)
            rhs_lo = q ** 2 * (plo * r) ** (2 * n)
            rhs_hi = q ** 2 * (phi * r) ** (2 * n)
            if R ** n >= rhs_hi:
                count += 1
                break
            if R ** n < rhs_lo:
                break
            level += 1
    return ErValue(factorial(n) * count, Radical.of(q, n))


# -- largest-neighborhood test -----------------------------------------------

@dataclass(frozen=True)
class VertexComparison:
    index: int
    vertex: tuple
    verdict: str  # "strict", "equal" or "undecided"
    excluded: PackingCertificate


@dataclass(frozen=True)
class ContinuityReport:
    pack: PackingCertificate
    vertices: tuple
    is_largest_nbhd: str  # "yes", "no" or "undecided"


def continuity_certificate(delta: DelzantPolytope, tol=DEFAULT_TOL, **kw) -> ContinuityReport:
    """Compare the packing supremum with and without each vertex.

    "equal" is reported only when a configuration avoiding the vertex attains
    the upper bound of the unrestricted problem exactly.
    """
    full = pack_toric(delta, tol, **kw)
    rows = []
    for i, v in enumerate(delta.vertices):
        ex = pack_toric(delta, tol, exclude=(i,), **kw)
        if ex.upper < full.lower:
            verdict = "strict"
        elif ex.lower == full.upper:
            verdict = "equal"
        else:
            verdict = "undecided"
        rows.append(VertexComparison(i, v, verdict, ex))
    verdicts = [r.verdict for r in rows]
    if all(x == "strict" for x in verdicts):
        summary = "yes"
    elif "equal" in verdicts:
        summary = "no"
    else:
        summary = "undecided"
    return ContinuityReport(full, tuple(rows), summary)
