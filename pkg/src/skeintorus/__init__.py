"""Exact multiplication in the Kauffman bracket skein algebra of the
one-holed torus: Laurent-polynomial arithmetic, Chebyshev/multicurve bases,
a polynomial-time discrepancy engine, closed-form cross-checks, and a
brute-force state-sum oracle.
"""

from .laurent import A, A_INV, ONE, ZERO, LaurentPoly, exact_div, quantum_int
from .skein import (
    PQ,
    BasisKey,
    MulticurveElement,
    MulticurveKey,
    SkeinElement,
    canonicalize,
    chebyshev_S,
    chebyshev_T,
    chebyshev_T_prime,
    from_multicurve,
    intersection_number,
    render_s_basis,
    to_multicurve,
    to_s_basis,
)
from .mapping import (
    MappingClass,
    act_on_pq,
    act_on_skein,
    opp,
    reduce_pair,
    rev,
    tw,
    tw_inv,
    tw_pow,
)
from .discrepancy import (
    CacheCorruptError,
    CacheVersionError,
    DiscrepancyEngine,
    MemoTable,
    MissingTableEntryError,
    discrepancy,
    load_table,
    multiply,
    save_table,
)

__version__ = "0.1.0"
