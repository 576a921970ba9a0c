"""Norm inequalities for sums of matrices versus sums of their absolute values.

Compare ``||A_1 + ... + A_m||_p`` with ``|| |A_1| + ... + |A_m| ||_p`` for
Schatten norms: the sharp Frobenius constant, the equiangular families that
attain it, the universal bound ``sqrt(m)^(1 - 1/p)``, a closed-form candidate
for the best constant at general ``p``, and searches for large ratios.
"""

__version__ = "0.1.0"

from .conjecture import ConjectureResult, conjectured_constant, cross_check_scan, limit_checks, solve_root
from .extremal import (
    EquiangularFamily,
    build_family,
    build_gram,
    family_ratio,
    frobenius_ratio_sq,
    optimal_overlap,
    ratio_in_spectral_form,
)
from .inequality import (
    BoundCheck,
    RatioReport,
    frobenius_bound_check,
    frobenius_constant,
    ratio,
    universal_bound,
)
from .matlin import abs_value, gram_factor, hermitian_eig, polar, psd_power, svd
from .schatten import PExponent, direct_sum, frobenius, schatten_norm
from .search import SearchConfig, SearchReport, scan_family, search
