"""Certified n-th roots of nonvanishing functions on finite simplicial complexes.

The package computes integer (co)homology by Smith normal form, decides when
the winding class of a function is n-divisible, builds the cyclic covers
on which a root always exists, checks the transfer identity for those
covers, and assembles finite towers of covers.
"""

from .complex import (
    SimplicialComplex, SimplicialMap, boundary_matrix, coboundary_matrix, complex_from_json,
    complex_to_json, full_subcomplex, induced_chain_map, validate_complex,
)
from .covers import (
    CyclicCover, build_cover, build_cyclic_cover, cover_from_json, fiber_product, lift_root,
    natural_iso_check, pullback_divisibility_certificate,
)
from .errors import (
    CocycleViolation, DomainMismatch, ExplosionGuard, InvalidCoordinates, InvalidMap,
    InvalidModulus, InvalidSimplex, MeshTooCoarse, MismatchedCover, NonComposable, RootResError,
)
from .functions import (
    LogFunction, SampledFunction, evaluate, from_cocycle, make_log_function, pullback,
    radial_retract, winding_class,
)
from .homology import (
    DivisibilityWitness, FgAbelianGroup, NotDivisible, cohomology, cohomology_class,
    divisible_by, homology, induced_cohomology_map,
)
from .roots import (
    ApproxRoot, ObstructionCertificate, ObstructionOnA, RootCertificate, approx_root,
    closedness_audit, exact_root,
)
from .snf import NO_SOLUTION, integer_solve, smith_normal_form
from .tower import Tower, build_tower, dimension_witness, tower_divisibility_check
from .transfer import monomorphism_certificate, verify_transfer_identity

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
