"""Generalized k-length functions, Bernoulli p_k-measures and k-KC coding."""

from .algebraic import (AlgebraicReal, RealApprox, RootSpec, classify_bernoulli,
                        conversion_factor, emit_tables, entropy, lambda_measure,
                        partial_sum_identity, solve_root)
from .lengths import (KLengthSpec, LevelTooLarge, count_level, enumerate_level,
                      k_length, level_bounds_check, llex_compare, llex_rank,
                      llex_unrank)

__version__ = "0.1.0"
