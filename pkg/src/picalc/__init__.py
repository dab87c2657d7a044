"""Pictures over group presentations, with the combinatorial group theory
they rest on: free-group words, relator hygiene, small cancellation,
Smith normal form, free products and relative presentations."""

from .abelian import AbelianInvariants, abelianization, lattice_membership, smith_normal_form
from .builder import (
    Factor,
    Found,
    NotFoundWithin,
    RefutedByAbelianization,
    evaluate,
    glue,
    picture_from_certificate,
    witness_search,
)
from .freeprod import FiniteGroup, FiniteOrder, FPElement, FreeProduct, Infinite, InfiniteCyclic, fp_torsion_witness
from .moves import XSet, apply, build_xset, inverse, reduce_spherical
from .picture import Picture, basic_corners, boundary_label, corner_word, find_dipoles, validate
from .presentation import Presentation, check_rc, check_small_cancellation, pieces
from .relative import RelativeWord, augment, check_orientable, rel_cyclic_reduce
from .words import Word, are_conjugate, cyclic_reduce, parse_word, root_and_period

__version__ = "0.1.0"

__all__ = [
    "AbelianInvariants",
    "FPElement",
    "Factor",
    "FiniteGroup",
    "FiniteOrder",
    "Found",
    "FreeProduct",
    "Infinite",
    "InfiniteCyclic",
    "NotFoundWithin",
    "Picture",
    "Presentation",
    "RefutedByAbelianization",
    "RelativeWord",
    "Word",
    "XSet",
    "abelianization",
    "apply",
    "are_conjugate",
    "augment",
    "basic_corners",
    "boundary_label",
    "build_xset",
    "check_orientable",
    "check_rc",
    "check_small_cancellation",
    "corner_word",
    "cyclic_reduce",
    "evaluate",
    "find_dipoles",
    "fp_torsion_witness",
    "glue",
    "inverse",
    "lattice_membership",
    "parse_word",
    "picture_from_certificate",
    "pieces",
    "reduce_spherical",
    "rel_cyclic_reduce",
    "root_and_period",
    "smith_normal_form",
    "validate",
    "witness_search",
]
