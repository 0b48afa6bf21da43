"""Symplectic SR factorization, J-Hessenberg reduction with breakdown curing,
and an explicit SR eigenvalue iteration for real 2n x 2n matrices."""
from .core import (
    DimensionError,
    StructureReport,
    apply_j,
    check_structure,
    even_leading_minor,
    j_hessenberg_zero_mask,
    j_matrix,
    j_triangular_zero_mask,
    pattern_defect,
    permutation_order,
    permutation_p,
    skew_inner,
    symplectic_adjoint,
    symplecticity_defect,
)
from .eigen import EigenConfig, RestartBudgetExhausted, Spectrum, solve_spectrum
from .fixtures import a6, a6_givens_cured, a12
from .io import read_matrix, write_matrix
from .jhessenberg import (
    CureBudgetExhausted,
    ReductionConfig,
    diag_equivalence,
    jhess,
    jhm2sh,
    jhmsh,
    mjhess,
    reduce,
)
from .reproduce import reproduce_tables
from .srfact import NearBreakdownWarning, diagnose_existence, sr_factor, srdeco, srmsh
from .transforms import BreakdownError

__version__ = "0.1.0"
