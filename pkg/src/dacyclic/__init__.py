"""Numerical toolkit for Drury-Arveson and radially weighted Besov spaces.

The package computes coefficient norms, applies the iterated-logarithm
ladder ``G_{k+1} = log(1 + G_k)`` to ``log(1/f)`` for stable polynomials,
and checks the integral and argument bounds that make those functions
belong to the spaces.  See the README for a tour.
"""
from .errors import BranchError, InstabilityError
from .norms import (SpaceSpec, TailProfile, besov_norm_sq, bloch_seminorm_estimate, dirichlet_norm_sq_integral,
                    h2d_norm_sq, hardy_sphere_norm_sq, parse_space, tail_profile)
from .quadrature import (QuadResult, dirichlet_integral_F, disk_integral, lemma_h_integral, mc_disk_integral,
                         slice_besov_integral)
from .sampling import SampleConfig, radial_grid, sphere_samples
from .series import (HomogeneousPart, MultiIndex, TruncatedSeries, evaluate, exp_series, homogeneous_parts,
                     log_series, multiply, radial_derivative, reciprocal, substitute)
from .transforms import (StablePolynomial, bounded_argument_estimate, iterated_log, normalize_stable, slice,
                         stability_check, sup_norm_estimate)
from .weights import RadialMeasure, WeightSequence, moment, omega, parse_measure

__version__ = "0.1.0"
