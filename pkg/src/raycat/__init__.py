"""raycat: a workbench for finite ray categories presented by quivers with
relations."""

from .contours import Contour, check_path_uniqueness, find_contours, interlaced
from .families import diamond, dumbbell, penny_farthing
from .morphology import pi_hom, pi_loop, supports, transit_class
from .presentation import (
    Presentation,
    parse_presentation,
    presentation_from_json,
    presentation_to_json,
    print_presentation,
)
from .raycore import (
    NotFiniteError,
    RayCategory,
    RayMorphism,
    build_ray_category,
    verify_axioms,
)

__version__ = "0.1.0"

__all__ = [
    "Contour",
    "NotFiniteError",
    "Presentation",
    "RayCategory",
    "RayMorphism",
    "build_ray_category",
    "check_path_uniqueness",
    "diamond",
    "dumbbell",
    "find_contours",
    "interlaced",
    "parse_presentation",
    "penny_farthing",
    "pi_hom",
    "pi_loop",
    "presentation_from_json",
    "presentation_to_json",
    "print_presentation",
    "supports",
    "transit_class",
    "verify_axioms",
]
