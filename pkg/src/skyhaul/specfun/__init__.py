"""Special-function engine: gammas, erfc, 1F1, and the Meijer G-function."""

from .gammafn import (  # noqa: F401
    erfc,
    gamma_fn,
    kummer_1f1,
    log_gamma,
    lower_inc_gamma,
    upper_inc_gamma,
)
from .meijerg import MeijerGParams, meijer_g, residue_leading_coeffs  # noqa: F401
from .mellin import (  # noqa: F401
    MeijerGTerm,
    incomplete_integral,
    merge_product_integral,
)
