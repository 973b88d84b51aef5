"""Completion algorithms for partial Latin squares with two filled rows and
three filled columns: matching-based completers, Smetaniuk-style lifts, a
reduction calculus, a constructive completer for the {(111,1),(00,m)} cycle
type, exhaustive family searches and an exact oracle."""

from .core import (AUGMENTED, CONJUGATE_KINDS, FORWARD, CycleType,
                   DiagonalSpec, Intercalate, Isotopy, LatinError,
                   PartialLatinSquare, apply_isotopy, canonical_rotation,
                   conjugate, cycle_type, diagonal, find_intercalates,
                   relabel_symbols, row_permutation, swap_intercalate,
                   validate)
from .matching import (BipartiteGraph, complete_columns_plus_partial,
                       complete_filled_columns, perfect_matching,
                       ryser_condition)
from .pipeline import complete_ct111
from .reduction import (apply_reduction, classify_terminal, compose,
                        find_replacements, is_completely_reduced,
                        proper_reduction, successive_reduce)
from .search import (complete_latin_corner, enumerate_family, sample_family,
                     verify_family)
from .smetaniuk import (T2Square, smetaniuk_complete_t2, t2_construct,
                        t_construct, verify_observations)
from .solver import (CellConstraint, CompletionCertificate,
                     complete_with_constraints, count_completions,
                     is_completable)

__version__ = "0.1.0"
