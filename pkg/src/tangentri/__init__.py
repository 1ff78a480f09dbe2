"""Exact finite-space checks for decoupling inequalities and K-interpolation.

Finite laws, Orlicz and Lorentz norms, K-functionals, dyadic adapted
sequences with their decoupled versions, and seeded harnesses built on
them.
"""

__version__ = "0.1.0"

from .kernels import BACKEND
from .measure import (DiscreteRandomVariable, SizingError, StepFunction,
                      decreasing_rearrangement, p_norm, tail_prob)
from .orlicz import (OrliczFunction, custom, hinge, min_pair, orlicz_norm,
                     orlicz_norm_info, phi_t, power, scaled, split_infimum,
                     verify_growth_class, verify_lemma31)
from .lorentz import (a_norm, b_norm, dilate, hardy_h1, hardy_h2, k_functional,
                      lorentz_norm, verify_k_interpolation, verify_lemma32)
from .tangent import (AdaptedSequence, DecoupledPair, DyadicSpace,
                      PredictableMultiplier, check_ci, check_tangent,
                      conditional_distribution, decouple, maximal_function,
                      monte_carlo, sum_distribution, verify_kolmogorov_converse,
                      verify_levy, verify_tail_comparison)
from .experiments import (CorpusSpec, RatioReport, counterexample_prop23,
                          estimate_constants, run_corollary15,
                          run_moment_inequality, run_theorem11,
                          run_theorem13_chain)
