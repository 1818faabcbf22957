"""Closed-form end-to-end metrics: outage probability, ABER, asymptotics."""

from .aber import (  # noqa: F401
    FsoAber,
    RfAber,
    ThzAber,
    aber_e2e_hard,
    aber_e2e_hard_expanded,
    aber_e2e_soft,
    aber_e2e_soft_expanded,
    aber_fso,
    aber_fso_quad,
    aber_hybrid_hard,
    aber_hybrid_soft,
    aber_rf,
    aber_rf_quad,
    aber_thz,
    aber_thz_quad,
    c_a,
    c_a_quad,
    c_b,
    c_b_quad,
    c_c,
    c_c_quad,
    c_d,
    c_d_quad,
    c_e,
    c_e_quad,
    c_f,
    c_f_quad,
    combine_df,
)
from .asymptotic import AsymptoticResult, asymptotic_op  # noqa: F401
from .modulation import ModulationScheme, modulation_params  # noqa: F401
from .outage import (  # noqa: F401
    RF_READINGS,
    ThresholdSet,
    op_hard,
    op_hard_expanded,
    op_soft,
    op_soft_expanded,
    rf_outage,
)
