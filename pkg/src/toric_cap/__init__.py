"""Exact capacities of star-shaped toric domains from filtered homology of linear-form sublevels."""

from .boundary import (
    CriticalPoint,
    NicenessReport,
    SpectrumEntry,
    check_nice,
    corner_slopes,
    critical_points,
    min_spec,
    spectrum,
    spectrum_values,
)
from .capacities import (
    CapacityResult,
    asymptotic_limit,
    c_k,
    c_k_concave,
    c_k_convex,
    c_k_general,
    capacity_sequence,
    verify_properties,
)
from .domain import (
    DomainClass,
    LinearForm,
    ToricProfile,
    classify,
    contains,
    from_preset,
    includes,
    load_profile,
    make_ellipsoid,
    make_polydisk,
    scale,
)
from .errors import ToricCapError
from .homology import BettiTable, E1Page, assemble_e1, betti, differential, u_map_homology, window_map
from .sublevel import RelativeHomology, decompose, inclusion_map, relative_homology

__all__ = [name for name in dir() if not name.startswith("_")]
