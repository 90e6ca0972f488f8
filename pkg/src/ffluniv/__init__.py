"""Exact Dirichlet L-functions over F_q[x] and approximation experiments.

The package computes character families modulo a polynomial, their
L-polynomials by exact root-of-unity sums, truncation and mean-value
experiments for peaked trigonometric weights, and sup-norm
approximation searches across a family.
"""

from .algebra import (
    FieldSpec,
    FieldElement,
    Poly,
    Factorization,
    PhiBoundReport,
    ResidueRing,
    field,
    parse_field_text,
    poly_gcd,
    monics_of_degree,
    primes_of_degree,
    irreducible_test,
    prime_count,
    factorize,
    von_mangoldt,
    von_mangoldt_degree,
    euler_phi,
    phi_lower_bound_check,
)
from .characters import (
    UnitGroup,
    Character,
    character_from_text,
    orthogonality_mean_value,
)
from .lfunctions import (
    LPolynomial,
    RegionGrid,
    TruncationReport,
    CharacterRootRecord,
    l_coeffs,
    l_coeffs_all,
    l_eval_s,
    zeta_q,
    principal_inverse_roots,
    classify_roots,
    roots,
    u_of_s,
    s_of_u,
    default_annulus_grid,
    rectangle_grid,
    euler_product_truncated,
    von_mangoldt_character_sum,
    p_k,
    z_k,
    hybrid_check,
    pk_ratio_check,
    rh_family_sweep,
)
from .approximation import (
    PeakPolynomial,
    PhaseAssignment,
    GMeanReport,
    HMeanReport,
    TailReport,
    CountingRow,
    CountingReport,
    ParamSet,
    peak_poly,
    kappa,
    default_epsilon,
    g_func,
    h_func,
    mv_g_experiment,
    mv_h_experiment,
    mv_tail_experiment,
    n_lambda,
    counting_checks,
    fit_phases,
)
from .universality import (
    TargetFunction,
    SearchReport,
    SplitReport,
    EXHAUSTIVE_FAMILY_LIMIT,
    decompose_logL,
    character_sieve,
    sup_distance,
    universality_search,
    guided_search,
    good_bad_split,
)

__version__ = "0.1.0"

__all__ = [
    "FieldSpec",
    "FieldElement",
    "Poly",
    "Factorization",
    "PhiBoundReport",
    "ResidueRing",
    "field",
    "parse_field_text",
    "poly_gcd",
    "monics_of_degree",
    "primes_of_degree",
    "irreducible_test",
    "prime_count",
    "factorize",
    "von_mangoldt",
    "von_mangoldt_degree",
    "euler_phi",
    "phi_lower_bound_check",
    "UnitGroup",
    "Character",
    "character_from_text",
    "orthogonality_mean_value",
    "LPolynomial",
    "RegionGrid",
    "TruncationReport",
    "CharacterRootRecord",
    "l_coeffs",
    "l_coeffs_all",
    "l_eval_s",
    "zeta_q",
    "principal_inverse_roots",
    "classify_roots",
    "roots",
    "u_of_s",
    "s_of_u",
    "default_annulus_grid",
    "rectangle_grid",
    "euler_product_truncated",
    "von_mangoldt_character_sum",
    "p_k",
    "z_k",
    "hybrid_check",
    "pk_ratio_check",
    "rh_family_sweep",
    "PeakPolynomial",
    "PhaseAssignment",
    "GMeanReport",
    "HMeanReport",
    "TailReport",
    "CountingRow",
    "CountingReport",
    "ParamSet",
    "peak_poly",
    "kappa",
    "default_epsilon",
    "g_func",
    "h_func",
    "mv_g_experiment",
    "mv_h_experiment",
    "mv_tail_experiment",
    "n_lambda",
    "counting_checks",
    "fit_phases",
    "TargetFunction",
    "SearchReport",
    "SplitReport",
    "EXHAUSTIVE_FAMILY_LIMIT",
    "decompose_logL",
    "character_sieve",
    "sup_distance",
    "universality_search",
    "guided_search",
    "good_bad_split",
]
