"""Exact and numeric toolkit for quantum polydisk and ball algebras, their free
power-series parents, the deformation algebra over the punctured plane and the
formal star product."""

from .combinatorics import (
    delta,
    enumerate_preimage,
    inversions,
    multinomial,
    q_ratio,
    sigma,
    word_stats,
)
from .deformation import (
    DefoSeries,
    alpha_with_inversions,
    canonical_split,
    dmul,
    dnorm,
    fiber_eval,
    fiber_norm_profile,
    omega,
)
from .free_series import FreeSeries, evaluate_free, fmul, fnorm, fock_tuple, opnorm, sprad_profile
from .io import format_series, parse_series, read_series
from .quantum_series import QContext, QSeries, normal_order, qmul, qnorm, weight
from .quotient import QuotientProblem, quotient_norm, section_kappa, verify_ideal
from .scalars import GaussianRational, HPoly, LaurentPoly, laurent_norm, parse_scalar
from .starprod import poisson, rieffel_defect, star, star_fiber_compare, u_section_check

__version__ = "0.1.0"
