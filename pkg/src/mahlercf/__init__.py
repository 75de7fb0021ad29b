"""Exact continued fractions and p-adic approximation witnesses for the
generalized Thue-Morse Laurent series f_d(x) = prod_{t>=0} (1 - x^{-d^t}) and
its companions g_d = x^{1-d} f_d, h_d = x^{-1} f_d, u_d = (1 - x^{-1}) f_d.

All arithmetic is exact (rational coefficients, certified truncation floors);
every numeric claim the library makes is decided by integer comparisons.
"""

from .approx import (
    CertifiedValue,
    IrrationalityReport,
    IteratedApproximant,
    divisibility_ladder,
    eval_mahler,
    irrationality_witness,
    iterated_approximants,
    iterated_pair_polynomials,
    locate_as_convergent,
    partial_product_value,
    quality_sup,
    real_cf_prefix,
)
from .contfrac import (
    CFExpansion,
    Convergent,
    MonicCF,
    cf_expand,
    convergent_soundness,
    default_floor,
    expand_family,
    family_series,
    monic_normalize,
)
from .errors import (
    ClassificationFailure,
    DivisionByZeroPoly,
    HypothesisFailed,
    IdentityFailure,
    InsufficientPrecision,
    InvalidParameter,
    MahlerCFError,
    MismatchAt,
    NotCoprime,
    NotFound,
    PrecisionCascade,
    RateViolation,
    ScaleNotInvertible,
    SearchExhausted,
    ShapeViolation,
    ZeroDenominator,
    ZeroSoFarDivision,
)
from .laurent import (
    FunctionalEquationReport,
    SeriesFamily,
    TruncatedLaurentSeries,
    generate,
    generate_series,
    partial_product,
    rate_of_approximation,
    verify_functional_equations,
)
from .padic import (
    BadApproxWitness,
    ConditionCheck,
    HenselDemo,
    OrbitRow,
    check_conditions,
    convergent_denominators,
    exact_divisibility,
    fermat_quotient_nonzero,
    enumerate_orbit_hits,
    gamma_growth,
    hensel_divisibility_demo,
    mult_order,
    orbit_table,
    orbit_table_csv,
    order_growth_check,
    power_tower_residue,
    revalidate_witness,
    wieferich_scan,
    witness_from_check,
    witness_search,
)
from .polys import IntPolyWithContent, RatPoly, poly_eval_mod, poly_normalize_integer
from .structure import (
    BetaSequence,
    IDENTITY_NAMES,
    IdentityReport,
    beta_closed_form,
    beta_sequence,
    classify_all,
    classify_convergent,
    companion_map,
    first_shape_violation,
    transport,
    verify_identity,
    well_approx_rate,
    well_approx_report,
)

__version__ = "0.1.0"
