"""Exact closest-vector solver for zonotopal lattices.

A zonotopal lattice is the set of integer points in the kernel of a
totally unimodular matrix, measured by a weighted inner product.  The
package provides constructors for the classic families (graphic and
cographic lattices, lattices of Voronoi's first kind, A_n and the tensor
products A_m (x) A_n), an iterative exact solver driven by minimum mean
cost improvement steps, and an independent brute-force oracle that
certifies every answer.
"""

__version__ = "0.1.0"

from .core import (
    Chain,
    PrimitiveChain,
    Rational,
    TUMatrix,
    ZonotopalLattice,
    chain,
    conformal_decompose,
    inner_product,
    kernel_basis,
    matrix_rank,
    primitive_chain,
    project_onto_span,
    support,
    tu_matrix,
)
from .constructions import (
    Digraph,
    ObtuseSuperbasisGram,
    a_n_lattice,
    cographic_lattice,
    digraph,
    graphic_lattice,
    incidence_matrix,
    minor,
    obtuse_superbasis_gram,
    tensor_lattice,
    voronoi_first_kind,
)
from .simplex import LPProblem, LPResult, lp_problem, solve_lp, solve_with_fixed_zero
from .mmcc import (
    CVPInstance,
    CVPSolution,
    IterationRecord,
    SolveOptions,
    compute_lambda,
    cost,
    cvp_instance,
    left_derivative,
    min_mean_voronoi_vector,
    right_derivative,
    saturating_step,
    solve_cvp,
    step_size,
    stopping_data,
)
from .oracle import (
    VoronoiCellDescription,
    brute_force_cvp,
    certify_closest,
    check_projection_theorem,
    check_tu,
    enumerate_primitive_chains,
    is_strict_voronoi_by_coset,
    voronoi_cell,
    voronoi_relevant_count,
)
from .errors import (
    DimensionError,
    InternalInvariantError,
    InvalidInputError,
    OracleFailureError,
    SizeCapError,
    StepSizeError,
    ZonolatError,
)
