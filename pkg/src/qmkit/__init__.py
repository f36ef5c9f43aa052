"""qmkit: strong-modularity analysis for a family of QM abelian surfaces.

The package decides strong modularity of the quaternionic-multiplication
surfaces B_j over multiquadratic Galois fields by explicit Galois 2-cocycle
computations, and verifies the decisions against published local L-factor
tables by counting points on genus-2 reductions over finite fields.
"""

from .arith import QuadElem, QuarticElem, Rat, SquareClass, legendre, squarefree_class
from .brauer import (
    BrauerClass2,
    character_obstruction_class,
    hilbert_symbol,
    local_square_class_degree,
    quaternion_class,
    splits_over_multiquadratic,
)
from .characters import DirichletCharacter, epsilon8, psi16
from .cohomology import (
    CocycleTable,
    DegreeMap,
    MultiquadGroup,
    SignDegreeClass,
    candidates_over_K,
    char_sqrt_cocycle,
    class_decompose,
    cup_cocycle,
    degree_fixed_field,
    inflate_sign_to_brauer,
    strongly_modular_verdict,
    twist_extension_class,
)
from .algebra import (
    EtaleFactor,
    TwistedAlgebra,
    build_algebra,
    decompose_commutative,
    is_commutative,
    restriction_endomorphism_description,
)
from .family import (
    JContext,
    ModuliFields,
    absolute_class,
    analyze,
    curve_model,
    find_prime_for_order,
    moduli_fields,
    splitting_order_bound,
)
from .finitefield import FiniteField, QuadraticExtension, ReductionMap, build_field, reduction_maps
from .lfactor import (
    HyperellipticModel,
    LocalFactor,
    compare_tables,
    count_points,
    lfactor_over_K,
    quartic_lfactor,
    twist_model,
)
from .newforms import NewformData, euler_factor, load_newform_g, newform_f, newform_h

__version__ = "0.1.0"
