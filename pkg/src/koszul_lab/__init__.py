"""koszul-lab: exact computations with quadratic algebras over prime
fields -- PBW certification by the rewriting method, colon-ideal calculus,
Koszul filtrations and flags, strong and universal Koszulity, minimal free
resolutions and Betti tables.
"""

__version__ = "1.0.0"

from .config import Budget
from .constructions import (
    ConstructorTree,
    build_tree,
    c2_cohomology,
    demushkin,
    demushkin1,
    demushkin2,
    demushkin3,
    direct_sum,
    exterior_algebra,
    free_cohomology,
    opposite,
    poly_t,
    preset,
    rigid_level2,
    skew_tensor,
    superpythagorean,
    t_mod_t2,
    twisted_extension,
)
from .errors import (
    BudgetExceededError,
    DegreeOverflowError,
    HeartPropertyError,
    InvalidParamsError,
    InvalidTwistError,
    KoszulLabError,
    MismatchedAlgebraError,
    ScriptError,
)
from .freealg import (
    MonomialOrder,
    NcPoly,
    QuadraticPresentation,
    normalize_relators,
    parse_poly,
    poly_text,
    presentation_from_texts,
)
from .graded import (
    Element,
    GradedAlgebra,
    algebra_from_json,
    default_truncation,
    element_from_poly,
    element_from_vector,
    identity_element,
    multiply,
    realize,
    realize_cyclic_quotient,
    word_class,
)
from .ideals import (
    ColonResult,
    GenerationVerdict,
    LinearIdeal,
    augmentation_ideal,
    colon,
    generated_by_subset_of,
    generated_in_degree_one,
    ideal_equal,
    ideal_from_subspace,
    membership,
    opposite_algebra,
)
from .koszul import (
    FiltrationWitness,
    build_direct_sum_filtration,
    build_twisted_extension_filtration,
    koszul_flag_check,
    lattice_family,
    replay_universal_witness,
    strong_koszulity,
    strong_koszulity_search,
    universal_koszulity,
    verify_koszul_filtration,
)
from .linalg import (
    Matrix,
    Subspace,
    enumerate_bases,
    enumerate_subspaces,
    gaussian_binomial,
    kernel_basis,
    rref,
)
from .resolutions import (
    BettiTable,
    Verdict,
    betti_table,
    linear_resolution_check,
    module_augmentation,
    module_ideal,
    module_quotient,
    module_trivial,
    poincare_from_hilbert,
)
from .rewriting import (
    ConfluenceGraph,
    PbwCertificate,
    RewritingSystem,
    certify_pbw,
    confluence_graph,
    critical_monomials,
    graph_to_dot,
    reduce_poly,
)
from .runner import RunOptions, RunResult, run_script
