"""Dimensions of secant varieties of Chow varieties over prime fields."""
from .ff_linalg import BACKEND, DEFAULT_PRIME, PrimeModulus, rank, sample_uniform
from .monomials import MonomialBasis, PolyVector, basis_size, expand_product, multiply_by_linear
from .terracini import (
    Statement,
    a_value,
    build_statement_matrix,
    check_statement,
    d2_dimension,
    expected_dimension,
    is_subabundant,
    secant_dimension,
)
from .inductor import (
    BasePolicy,
    Certificate,
    Method,
    Splitting,
    extend_n,
    lemma_f_consequence,
    prove,
    split_children,
    verify_certificate,
)
from .conjecture import (
    enumerate_cases,
    generic_chow_rank,
    generic_chow_rank_d2,
    s1,
    s2,
    verify_conjecture,
)

__version__ = "0.1.0"
