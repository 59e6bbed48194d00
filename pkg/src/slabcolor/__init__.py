"""Exact chromatic and slab-chromatic numbers of distance graphs on the real line."""

__version__ = "0.1.0"

from .certify import Certificate, certify_no_t_slab, replay_certificate
from .distset import DistanceSet, analyze_distance_set, generate_theorem_family, parse_distance_set
from .exact import QuadExt, lattice_hnf, quad_arith, quad_ceil_div, quad_compare
from .lattice import (
    LinearColoring,
    PartialColoring,
    Window,
    adjacent,
    density_gap,
    find_clique,
    find_linear_coloring,
    propagate_forced,
    window_chromatic,
)
from .slab import (
    SlabColoring,
    chi_m_bounds,
    integer_slab_from_periodic,
    unit_slab_coloring,
    verify_slab,
)
from .zgraph import PeriodicColoring, chi_integer, clique_number_integer, is_t_colorable_integer

__all__ = [
    "Certificate",
    "DistanceSet",
    "LinearColoring",
    "PartialColoring",
    "PeriodicColoring",
    "QuadExt",
    "SlabColoring",
    "Window",
    "adjacent",
    "analyze_distance_set",
    "certify_no_t_slab",
    "chi_integer",
    "chi_m_bounds",
    "clique_number_integer",
    "density_gap",
    "find_clique",
    "find_linear_coloring",
    "generate_theorem_family",
    "integer_slab_from_periodic",
    "is_t_colorable_integer",
    "lattice_hnf",
    "parse_distance_set",
    "propagate_forced",
    "quad_arith",
    "quad_ceil_div",
    "quad_compare",
    "replay_certificate",
    "unit_slab_coloring",
    "verify_slab",
    "window_chromatic",
]
