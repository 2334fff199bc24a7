"""Exact mixed volumes of two-parameter permutahedral families.

Two independent routes are provided: a brute-force polytope oracle
(:mod:`permix.geometry`) and an absorbing particle walk
(:mod:`permix.walk`) that yields each mixed volume as a multiple of a
single normalizer.
"""

from .core import (KILL, Breakpoint, BreakpointTable, DomainError, FamilySpec,
                   breakpoints, embed_config, is_zone, make_config, target_multiset)
from .geometry import (HPolytope, MixedVolumeResult, VPolytope, build_hrep,
                       enumerate_vertices, minkowski_sum, mixed_volume, normalizer_V,
                       superaffine_check, volume)
from .walk import (WalkOutcome, guess_check, product_formula, shift_sum,
                   walk_mixed_volume, walk_probability)

__version__ = "0.1.0"
