"""Fragment recognizers, constructors and the classical Horn translation."""

from .classify import (
    ATOMIC,
    B_COMBINATION,
    BP_SENTENCE,
    CLASSICAL_HORN,
    CLASSICAL_HORN_CLAUSE,
    CLASSICAL_PALYUTIN,
    HORN,
    HP_SENTENCE,
    LABELS,
    PALYUTIN,
    PP_SENTENCE,
    PRIMITIVE_HORN,
    classify_fragment,
    is_b_combination,
    is_bp_sentence,
    is_classical_horn,
    is_classical_horn_clause,
    is_classical_palyutin,
    is_horn,
    is_hp_sentence,
    is_palyutin,
    is_pp_sentence,
    is_primitive_horn,
    match_classical_h,
    match_h_shape,
)
from .constructions import (
    NONDECREASING,
    NONINCREASING,
    ApproxGrid,
    FragmentError,
    affine_grid,
    approximate_by_grid,
    eliminate_inf_step,
    mk_h_node,
    mk_scp_instance,
    mk_scp_instance_classical,
    stability_criterion,
)
from .translate import TO_BOOLEAN, encode_classical, impl_to_horn, palyutin_to_horn, prenex_horn
