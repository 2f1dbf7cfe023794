"""Exact equivariant capacities of toric and semitoric systems from polytope data."""

__version__ = "0.1.0"

from .geometry import (  # noqa: E402
    ConvexPolytope, HalfSpace, polytope_from_halfspaces, polytope_from_vertices,
    symdiff_volume, volume,
)
from .delzant import (  # noqa: E402
    DelzantPolytope, EpsilonTooLarge, NotSimple, NotSmooth, admissible_simplex,
    check_delzant, chop_all_corners, corner_chop, d_P, max_admissible_radius,
    validate_delzant,
)
from .packing import (  # noqa: E402
    PackingCertificate, capacity_cB, capacity_Er, capacity_T, continuity_certificate,
    pack_toric, pack_toric_excluding,
)
from .semitoric import (  # noqa: E402
    CutLine, SemitoricHeights, canonical_orbit, group_action, smooth_angles_near,
    st_corner_chop, st_hidden_corner_chop, validate_primitive,
)
from .stpacking import capacity_ST, capacity_ST_rad, max_st_radius, pack_semitoric  # noqa: E402
from .metrics import (  # noqa: E402
    AdmissibleDensity, IngredientList, TaylorTruncation, WeightSequence,
    d_ingredients, d_st_polygon, d_taylor, nu_volume,
)
