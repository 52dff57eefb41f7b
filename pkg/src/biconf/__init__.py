"""biconf: numerical verification of conformally biharmonic hypersurfaces.

The package evaluates the fourth-order equation systems characterizing
biharmonic conformal immersions of hypersurfaces into space forms, at
arbitrary chart points, through exact jet arithmetic.  It ships the
example families with their expected constants, an independent
from-the-definition bitension oracle, isoparametric profile detection,
and exact integer certificates for the umbilic nonexistence argument.
"""

__version__ = "0.1.0"

from . import jets  # noqa: F401
from .errors import (  # noqa: F401
    BiconfError,
    ConfigError,
    DomainError,
    FitError,
    FlagError,
    InadmissiblePointError,
    PreconditionError,
    RankDeficiencyError,
    SingularMetricError,
)
from .geometry import (  # noqa: F401
    ChartMetric,
    FieldPackage,
    MetricJets,
    SpaceForm,
    christoffel,
    field_package,
    ricci_intrinsic,
    rng_from_seed,
    sample_points,
    space_form_chart,
)
from .hypersurface import (  # noqa: F401
    GeometryPackage,
    Immersion,
    ImmersionFrame,
    first_fundamental,
    gauss_ricci,
    normal_and_shape,
)
from .residuals import (  # noqa: F401
    ResidualReport,
    bitension_oracle,
    oracle_report,
    residual_general,
    residual_minimal,
    residual_surface,
    residual_totally_geodesic,
    residual_umbilic,
)
from .isoparametric import (  # noqa: F401
    BochnerReport,
    IsoparametricFit,
    bochner_check,
    fit_power_ansatz,
    geodesic_ode_residual,
    profile_fit,
    umbilic_profile,
)
from .umbilic import (  # noqa: F401
    UmbilicCoefficients,
    inequality_at_k_bound,
    inequality_coefficients,
    inequality_quadratic,
    positivity_suite,
    sign_certificate,
    solve_umbilic_sphere,
)
from .catalog import (  # noqa: F401
    CatalogMember,
    ExampleSpec,
    build_example,
    condition_polynomial,
    condition_roots,
    with_conformal_factor,
)
