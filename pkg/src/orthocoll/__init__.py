"""Orthogonal collections of exceptional bundles from class T degenerations.

Exact arithmetic throughout: continued fractions and class T data
(:mod:`~orthocoll.hjfrac`), link homology (:mod:`~orthocoll.link`), toric
surfaces and rational intersection numbers (:mod:`~orthocoll.toric`), Chern
class ledgers and Euler pairings (:mod:`~orthocoll.bundles`) and Markov-type
equations (:mod:`~orthocoll.markov`).
"""

from .bundles import (
    BundleLedger,
    HypothesisReport,
    Normalization,
    SurfaceNumerics,
    c2_exceptional,
    c2_tensor,
    check_main_hypotheses,
    chi_matrix,
    gamma_of_block_divisors,
    make_block_ledgers,
    normalize_divisor,
    ow_generators,
    rr_chi,
    stability_residue,
)
from .hjfrac import (
    CyclicQuotient,
    InvariantError,
    TDecomposition,
    classify_class_t,
    hj_evaluate,
    hj_expand,
    is_wahl,
    milnor_invariants,
    tridiag_det,
    versal_family,
)
from .link import (
    GammaValue,
    IntersectionMatrix,
    LinkGroup,
    NotAGeneratorError,
    adjust_divisor,
    alpha_coefficients,
    gamma,
    inverse_mod,
    is_generator_mod_square,
    lifts_to_general_fiber,
    link_group,
)
from .markov import MarkovEquation, MarkovTriple, make_equation, mutate, verify
from .toric import (
    Fan2,
    FanError,
    MBlock,
    QDivisor,
    SurfaceModel,
    canonical_class,
    classify_fan,
    cone_singularity,
    intersection_matrix,
    local_model,
    m_resolution,
    m_resolve_fan,
    minimal_resolution,
    mumford_intersect,
)

__version__ = "0.1.0"
