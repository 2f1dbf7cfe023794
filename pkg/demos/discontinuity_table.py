"""Chop all four corners of the 2x2 square and watch pack fall while d_P -> 0."""
from fractions import Fraction as F

from gcapacity.delzant import chop_all_corners, d_P, validate_delzant
from gcapacity.packing import capacity_T, pack_toric

square = validate_delzant([(0, 0), (2, 0), (2, 2), (0, 2)])
print(f"{'eps':>6} {'d_P':>8} {'pack':>22} capacity")
for k in range(1, 7):
    eps = F(1, 2 ** k)
    chopped = chop_all_corners(square, eps)
    cert = pack_toric(chopped, F(1, 1000))
    print(f"{str(eps):>6} {str(d_P(square, chopped)):>8} {str(cert):>22} {capacity_T(chopped, cert=cert)}")
print("unchopped:", pack_toric(square))
