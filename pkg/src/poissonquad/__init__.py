"""The trapezoidal rule on the real line viewed through Poisson summation.

Exact remainders on both sides of the summation formula, the smoothness
and distance based error bounds, fractional Riesz derivatives, Moebius
recovery of spectral values, and an extremal function showing sharpness.
"""
from .corpus import (DecayHint, FunctionPair, RealFunction, SpectralFunction, available, builtin_corpus,
                     even_part, get_pair, numeric_fourier, odd_part, register, translate)
from .quadrature import QuadratureResult, remainder_exact, trapezoidal_sum, truncation_bound
from .spectral import SpectralRemainder, remainder_even, remainder_spectral
from .smoothness import (central_difference, forward_difference, l1_norm, lipschitz_order_estimate,
                         modulus, modulus_profile)
from .bounds import (RemainderBound, bound_distance, bound_fractional, bound_modulus_series, bound_sobolev,
                     zeta)
from .fractional import RieszSpec, c_alpha_2j, riesz_difference, riesz_fourier, riesz_function
from .distance import DistanceEstimate, DistanceQuery, dist_bernstein
from .moebius import (equivalence_order_check, mobius_mu, parseval_check, recover_spectrum,
                      remainder_sequence, translation_sweep)
from .extremal import ExtremalFunction, phi_freq, phi_time, psi_freq, psi_time, scale, sharpness_check, verify_properties

__version__ = "0.1.0"
