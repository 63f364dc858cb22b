"""Critical-orbit arithmetic, Galois tower certificates, and prime-divisor
density for one-parameter quadratic families (x - gamma(t))^2 + c(t)."""

from quadtower.bigpoly import (
    IntPolynomial,
    ZeroPolynomialError,
    discriminant_direct,
    height_int,
    is_perfect_square,
    poly_height,
    resultant,
)
from quadtower.density import DensityCurve, density_curve, orbit_hits_zero_mod_p, primes_up_to
from quadtower.factor import (
    Budget,
    Factorization,
    IncompleteFactorizationError,
    PreconditionError,
    PrimitiveDivisorReport,
    SquareFreeDecomposition,
    ZeroInputError,
    doubling_check,
    factorize,
    is_probable_prime,
    primitive_divisor_certificate,
    primitive_divisor_exact,
    squarefree_decompose,
    stripped_cofactor,
)
from quadtower.family import (
    BoundConstants,
    HallLangConstants,
    InvalidConstantsError,
    IsotrivialError,
    NphiReport,
    QuadraticFamily,
    SpecializedMap,
    index_bound,
)
from quadtower.galois import (
    CERTIFIED_MAXIMAL,
    FAILED_SQUARE_OVER_Q,
    UNKNOWN,
    CurveModel,
    IntegralPoint,
    MaximalityCertificate,
    SingularModelError,
    StabilityReport,
    TowerReport,
    certify_level_maximal,
    certify_tower,
    curve_model,
    discriminant_recurrence,
    search_integral_points,
    stability_scan,
    verify_forced_point,
)
from quadtower.orbit import (
    DEFAULT_MAX_BITS,
    CriticalOrbit,
    DigitBudgetError,
    OrbitSlice,
    PostCriticallyFiniteError,
    canonical_height,
    check_ingram_lower_bound,
    critical_orbit,
    is_postcritically_finite,
    orbit,
    sigma_orbit_identity,
)

__version__ = "0.1.0"
