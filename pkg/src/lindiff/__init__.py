"""Exact linear difference operators over Q(x): factoring over the algebraic
closure and reducing third-order equations to second-order ones."""

from .absfact import (
    AbsFactorResult,
    ReducibleOperatorError,
    abs_factorization,
    abs_irreducibility,
    extract_subfactors_p2,
    twist_hom,
)
from .conic import ConicForm, NoPoint, conic_point, diagonalize_conic, solve_conic
from .constructions import (
    GaugeMap,
    apply_gauge,
    invert_gauge,
    section_operator,
    symmetric_product,
    symmetric_square,
)
from .field import QuadExtElement, RationalFunction
from .ore import OreOperator, gcrd, gcrd_ext, lclm, rdivide, rem
from .parser import ParseError, parse_operator, parse_rational_function
from .reduce_order import (
    ReduceOrderResult,
    SimpleCaseResult,
    build_g2_ansatz,
    conic_from_kernel,
    decompose_simple,
    reduce_order,
    sym_square_invariant,
)
from .sequences import IdentitySpec, SequenceGrid, fetch_bfile, unroll, verify_identity
from .solve import (
    eigenring_decompose,
    eigenring_split,
    hom_space,
    hypergeometric_right_factors,
    poly_solutions,
    rational_solutions,
)

__version__ = "0.1.0"
