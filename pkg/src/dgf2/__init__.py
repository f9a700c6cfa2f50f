"""dgf2: homological algebra over GF(2).

Minimal twisted models of differential graded modules over a degree -1
polynomial ring, chain complexes of free (Z/2)^r cell complexes and
their Borel-side models, the rank lower bound 2^r in the single-parity
case, and planar-tree operad calculus (monomial bases, rewriting, bar
homology).
"""

from .complexes import Contraction, GradedKComplex, build_contraction, random_complex
from .dgmodules import (
    DgLambdaModule,
    DgSModule,
    HomologyModule,
    SWindow,
    euler_identity_check,
    freeness_certificate,
    homology_of_lambda_module,
    homology_of_s_module,
    reduce_lambda_mod_augmentation,
    reduce_mod_augmentation,
)
from .errors import (
    Dgf2Error,
    InternalCheckError,
    TerminationError,
    ValidationError,
    WindowError,
)
from .gcomplex import (
    FreeGComplex,
    aw_coproduct,
    builtin,
    cochain_algebra,
    parse_complex,
    random_free_complex,
    simplicial_circle,
)
from .gf2 import Gf2Matrix, rank_oracle_minors
from .models import (
    BarComplex,
    Perturbation,
    TwistedModel,
    bar_beta,
    bar_twist_perturbation,
    build_bar,
    carlsson_minimal,
    cobar_omega,
    minimal_hirsch_brown,
    perturbed_transfer,
    tensor_contraction,
    transfer_ainfty_products,
    transferred_twist,
)
from .operads import (
    AssociativeTable,
    ExteriorTable,
    PathSequence,
    WtildeTable,
    bar_homology,
    basis_crosscheck,
    enumerate_free,
    graft,
    normal_form,
    pbw_certificate,
    wtilde_basis,
    wtilde_compose,
)
from .polyalg import (
    ExtElement,
    GradedPoly,
    ext_parse,
    group_to_t_basis,
    lambda_action_matrices,
    poly_parse,
    sigma,
    t_to_group_basis,
)
from .ranklab import (
    RankReport,
    conjugated_koszul,
    family_instance,
    generate_semifree,
    koszul_module,
    parity_equality_check,
    rank_check,
    run_rank_batch,
)

__version__ = "0.1.0"
