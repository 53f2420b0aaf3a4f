"""Exact edge-isoperimetric computations on generalized Sierpinski graphs S(n,m).

Vertices of S(n,m) are words over {0..m-1} indexed by their Lex rank; vertex
sets are Python ints used as bitmasks.
"""

__version__ = "0.1.0"

from .eip import (
    OMEGA,
    DecoratedContext,
    PermutationOrder,
    ProfileTable,
    VertexSet,
    boundary,
    decorated_boundary,
    eta_inverse,
    lambda_at,
    lex_profile,
    lex_segment,
    profile_closed_form,
    profile_recursive_m3,
)
from .errors import BudgetExceeded, DefectError, ParameterError
from .graphs import (
    Graph,
    GraphSpec,
    VertexWord,
    cartesian_product,
    complete_graph,
    hamming_graph,
    quotient_graph,
    sierpinski_graph,
)
from .kernels import BACKEND
from .oracle import (
    SearchBudget,
    VerificationReport,
    enumerate_cases,
    exact_profile,
    exact_profile_ideals,
    nested_solutions_exists,
    verify_conjecture,
)
from .posets import build_quotient_stab_order, build_stab_order, enumerate_ideals
from .steiner import (
    compress,
    compress_fix,
    stabilize,
    stabilize_fix,
    subadd_step,
    subadditivate,
)

__all__ = [
    "BACKEND",
    "OMEGA",
    "BudgetExceeded",
    "DecoratedContext",
    "DefectError",
    "Graph",
    "GraphSpec",
    "ParameterError",
    "PermutationOrder",
    "ProfileTable",
    "SearchBudget",
    "VerificationReport",
    "VertexSet",
    "VertexWord",
    "boundary",
    "build_quotient_stab_order",
    "build_stab_order",
    "cartesian_product",
    "complete_graph",
    "compress",
    "compress_fix",
    "decorated_boundary",
    "enumerate_cases",
    "enumerate_ideals",
    "eta_inverse",
    "exact_profile",
    "exact_profile_ideals",
    "hamming_graph",
    "lambda_at",
    "lex_profile",
    "lex_segment",
    "nested_solutions_exists",
    "profile_closed_form",
    "profile_recursive_m3",
    "quotient_graph",
    "sierpinski_graph",
    "stabilize",
    "stabilize_fix",
    "subadd_step",
    "subadditivate",
    "verify_conjecture",
]
