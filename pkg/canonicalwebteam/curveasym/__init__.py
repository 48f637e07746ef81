from canonicalwebteam.curveasym.app import CurveReports  # noqa
from canonicalwebteam.curveasym.arclength import (  # noqa
    ArcLength,  # noqa
    arc_ratio_trace,  # noqa
    eq6_check,  # noqa
    explore_conjecture,  # noqa
)
from canonicalwebteam.curveasym.asymptote import (  # noqa
    check_bound,  # noqa
    check_universal_bound,  # noqa
    closed_form_limit,  # noqa
    closed_form_ratio,  # noqa
    limsup_estimate,  # noqa
    make_sequence,  # noqa
    ratio_trace,  # noqa
)
from canonicalwebteam.curveasym.curve import (  # noqa
    Curve,  # noqa
    arc_length,  # noqa
    distance_from_start,  # noqa
    eval_derivative,  # noqa
    eval_point,  # noqa
    reparameterized,  # noqa
    transformed,  # noqa
)
from canonicalwebteam.curveasym.meanvalue import (  # noqa
    FunctionPair,  # noqa
    MeanValueProblem,  # noqa
    estimate_C,  # noqa
    estimate_C_weight,  # noqa
    eta_integral,  # noqa
    integral_mean_function,  # noqa
    meanvalue_trace,  # noqa
    mu_point,  # noqa
    quantile_ratio_trace,  # noqa
    xi_cauchy,  # noqa
    xi_lagrange,  # noqa
)
from canonicalwebteam.curveasym.models import (  # noqa
    Domain,  # noqa
    SequenceSpec,  # noqa
    Verdict,  # noqa
)
from canonicalwebteam.curveasym.parsers import (  # noqa
    ConfigParser,  # noqa
    eval_expr,  # noqa
    parse,  # noqa
)
from canonicalwebteam.curveasym.support import (  # noqa
    SupportConfig,  # noqa
    find_support_set,  # noqa
    find_tangent_set,  # noqa
    phi_value,  # noqa
    support_report,  # noqa
    tangent_set_polar,  # noqa
)
