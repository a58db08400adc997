"""Exact intersection numbers for Veronese quotient and sl_2 conformal-block divisors on M_{0,n}."""

from .core import (
    FCurve,
    IntersectionVector,
    OutOfScopeError,
    PreconditionError,
    Rational,
    SymmetricDivisorClass,
    SymmetricFCurve,
    basis_curve,
    fcurve_from_profile,
    format_rational,
    symmetric_basis,
)
from .veronese import (
    LegDegrees,
    WeightData,
    hassett_contracts,
    intersect,
    jensen_app_class,
    jensen_closed_form,
    jensen_vector,
    leg_degrees,
    phi,
    sigma,
    standard_weights,
    symmetric_class,
    veronese_contracts,
)
from .confblocks import (
    SL2WeightVector,
    cb_intersect_kequalsell,
    cb_intersect_omega1,
    critical_level,
    deg4_nonzero_sufficient,
    fcurve_zero_criterion,
    fusion3,
    nonzero_criterion,
    rank,
    rank_recurrence,
    zero_criterion_kpattern,
)

__version__ = "0.1.0"
