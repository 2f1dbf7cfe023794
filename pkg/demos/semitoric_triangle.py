"""Pack a one-cut triangle, then check that every orbit member gives the same answer."""
import random
from fractions import Fraction as F

from gcapacity.geometry import polytope_from_vertices
from gcapacity.semitoric import (
    CutLine, SemitoricHeights, canonical_orbit, group_action, validate_primitive,
)
from gcapacity.stpacking import capacity_ST, pack_semitoric

prim = validate_primitive(polytope_from_vertices([(0, 0), (2, 0), (1, 1)]), [CutLine(F(1))])
for h in (F(1, 4), F(1, 2), F(3, 4)):
    hs = SemitoricHeights.make(prim, [h])
    cert = pack_semitoric(prim, hs)
    print(f"h = {h}: {cert}, capacity {capacity_ST(prim, hs, cert=cert)}")

rng = random.Random(0)
hs = SemitoricHeights.make(prim, [F(1, 2)])
for _ in range(3):
    g = ((rng.choice([1, -1]),), rng.randint(-3, 3))
    member = group_action(*g, prim)
    print("member", g, "->", pack_semitoric(canonical_orbit(member), hs))
