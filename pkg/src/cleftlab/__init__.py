"""Finite-dimensional Hopf algebroid toolkit with exact arithmetic."""
from .linalg import Field, Matrix, Subspace, FieldError, DimensionError
from .algebra import Algebra, validate_algebra
from .bialgebroid import LeftBialgebroid, RightBialgebroid, validate_left_bialgebroid, validate_right_bialgebroid
from .hopf import HopfAlgebroid, validate_hopf_algebroid, solve_antipode
from .comodule import ComoduleAlgebra, validate_comodule_algebra, canonical_map
from .convolution import CleftExtension, verify_cleft, galois_normal_basis_side
from .crossed import (Measuring, Cocycle, validate_cocycle, build_crossed_product,
                      extract_measuring_cocycle, crossed_from_cleft, cleft_from_crossed,
                      gauge_transform, check_equivalence)
from .weak import WeakCocycle, validate_weak_cocycle, build_weak_crossed_product
from .gallery import build_gallery, GALLERY_IDS
from .fileformat import (load_structure, serialize_structure, ParseError,
                         UnresolvedBindingError, DimensionMismatchError)
from .suites import run_suite, SUITE_NAMES
from .report import Report

__version__ = "0.1.0"
