"""Independent reference computations used only by the tests.

They share no code with the package beyond plain data: polygons are lists
of Fraction points, simplices are built from explicit corner frames.
"""
import itertools
import math
from fractions import Fraction


def shoelace(pts):
    n = len(pts)
    s = sum(pts[i][0] * pts[(i + 1) % n][1] - pts[(i + 1) % n][0] * pts[i][1] for i in range(n))
    return abs(Fraction(s)) / 2


def _cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def ccw_hull(points):
    pts = sorted(set((Fraction(x), Fraction(y)) for x, y in points))
    if len(pts) < 3:
        return pts
    lower, upper = [], []
    for p in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    for p in reversed(pts):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def clip(subject, clipper):
    """Sutherland-Hodgman: convex ``subject`` cut by convex ccw ``clipper``."""
    out = list(subject)
    m = len(clipper)
    for i in range(m):
        a, b = clipper[i], clipper[(i + 1) % m]
        inp, out = out, []
        if not inp:
            break
        for j in range(len(inp)):
            p, q = inp[j], inp[(j + 1) % len(inp)]
            pin, qin = _cross(a, b, p) >= 0, _cross(a, b, q) >= 0
            if pin:
                out.append(p)
            if pin != qin:
                d1, d2 = _cross(a, b, p), _cross(a, b, q)
                t = d1 / (d1 - d2)
                out.append((p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])))
    return out


def symdiff_area(p, q):
    """Area of the symmetric difference of two convex ccw polygons."""
    inter = clip(p, q)
    common = shoelace(inter) if len(inter) >= 3 else Fraction(0)
    return shoelace(p) + shoelace(q) - 2 * common


def corner_frame(vertices, k):
    """Primitive edge directions at vertex k of a ccw lattice polygon."""
    n = len(vertices)
    v = vertices[k]
    out = []
    for w in (vertices[(k + 1) % n], vertices[(k - 1) % n]):
        d = (w[0] - v[0], w[1] - v[1])
        den = math.lcm(Fraction(d[0]).denominator, Fraction(d[1]).denominator)
        a, b = int(d[0] * den), int(d[1] * den)
        g = math.gcd(a, b)
        out.append((a // g, b // g))
    return v, out


def simplex(vertices, k, rho):
    v, (e1, e2) = corner_frame(vertices, k)
    return ccw_hull([v, (v[0] + rho * e1[0], v[1] + rho * e1[1]),
                     (v[0] + rho * e2[0], v[1] + rho * e2[1])])


def inside(poly, pts):
    m = len(poly)
    return all(_cross(poly[i], poly[(i + 1) % m], p) >= 0 for i in range(m) for p in pts)


def max_radius(vertices, k):
    """Largest rho keeping the corner simplex inside, by exact bisection on a doubling bracket."""
    lo, hi = Fraction(0), Fraction(1)
    while inside(vertices, simplex(vertices, k, hi)):
        lo, hi = hi, 2 * hi
    for _ in range(60):
        mid = (lo + hi) / 2
        if inside(vertices, simplex(vertices, k, mid)):
            lo = mid
        else:
            hi = mid
    # corner radii are lattice lengths, so snap to the best small-denominator value
    for den in range(1, 65):
        cand = Fraction(round(lo * den), den)
        if abs(cand - lo) < Fraction(1, 2 ** 40) and inside(vertices, simplex(vertices, k, cand)):
            return cand
    return lo


def overlap(p, q):
    inter = clip(p, q)
    return len(inter) >= 3 and shoelace(inter) > 0


def grid_pack(vertices, steps=64):
    """Best packing with each radius on the grid ``R_k * i / steps``.

    Pairwise tables of the largest compatible level are built from explicit
    simplex overlap tests; a depth-first search with an optimistic bound
    then finds the exact grid optimum.
    """
    n = len(vertices)
    R = [max_radius(vertices, k) for k in range(n)]
    levels = [[R[k] * i / steps for i in range(steps + 1)] for k in range(n)]
    tris = {}

    def tri(k, i):
        if (k, i) not in tris:
            tris[(k, i)] = simplex(vertices, k, levels[k][i])
        return tris[(k, i)]

    table = {}
    for a, b in itertools.permutations(range(n), 2):
        row = []
        for i in range(steps + 1):
            if i == 0:
                row.append(steps)
                continue
            lo, hi = 0, steps      # largest j with no overlap; monotone in j
            while lo < hi:
                mid = (lo + hi + 1) // 2
                if overlap(tri(a, i), tri(b, mid)):
                    hi = mid - 1
                else:
                    lo = mid
            row.append(lo)
        table[(a, b)] = row

    val = [[x * x / 2 for x in levels[k]] for k in range(n)]
    best = [Fraction(0), None]

    def dfs(k, chosen, cap, acc):
        rest = sum(val[m][cap[m]] for m in range(k, n))
        if acc + rest <= best[0]:
            return
        if k == n:
            best[0], best[1] = acc, tuple(chosen)
            return
        for i in range(cap[k], -1, -1):
            new = list(cap)
            for m in range(k + 1, n):
                new[m] = min(new[m], table[(k, m)][i])
            dfs(k + 1, chosen + [i], new, acc + val[k][i])

    dfs(0, [], [steps] * n, Fraction(0))
    return best[0], [levels[k][i] for k, i in enumerate(best[1])]


def smooth_angles(bound, box=6):
    """Distinct angles between primitive u, w of norm <= bound with det(u, w) = 1."""
    vecs = [(a, b) for a in range(-box, box + 1) for b in range(-box, box + 1)
            if (a, b) != (0, 0) and math.gcd(a, b) == 1 and a * a + b * b <= bound * bound]
    angles = set()
    for u in vecs:
        for w in vecs:
            if u[0] * w[1] - u[1] * w[0] != 1:
                continue
            ang = math.atan2(1, u[0] * w[0] + u[1] * w[1])      # tan = det / dot
            angles.add(round(ang, 12))
    return sorted(angles)
