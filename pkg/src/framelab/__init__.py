"""Total coherence, total volume and nuclear energy of finite frames.

Compute, bound, optimize and numerically verify frame-quality functionals
over Parseval and equal-norm frames.
"""

__version__ = "0.1.0"

from .core import (Frame, FramePredicates, ScalarField, SubsetSelector, Tolerances, gram,
                   inv_sqrt_psd, partial_frame, predicates, singular_values, subsets,
                   welch_constant)
from .constructors import (harmonic_frame, mercedes_benz, naimark_complement, onb_padded,
                           paper_4_2, random_equal_norm, random_parseval, simplex_etf, split_zero)
from .measures import (analyze, angular_deviation, coherence, comp_volume, equal_volume_constant,
                       equiangular_constants, equiangular_distance, gram_variance, nuclear_energy,
                       nuclear_variance, plucker, plucker_relation_42, spark, sum_sq_volume,
                       total_comp_volume, total_coherence, total_volume, volume, volume_variance,
                       welch_bound)
from .optimize import (Manifold, Objective, ObjectiveKind, OptimizerConfig, gradcheck, maximize,
                       objective_eval, objective_grad, retract, smooth_abs)
from .verify import REGISTRY, SuiteConfig, run_check, run_suite
