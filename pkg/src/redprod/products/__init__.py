"""Filters, reduced products and preservation checks."""

from .enumeration import DEFAULT_BASIS, UnknownFragment, atoms, enumerate_fragment_formulas, enumerate_fragment_sentences
from .enumeration import classical_atoms, enumerate_classical_palyutin
from .equivalence import EquivalenceResult, palyutin_equiv_bounded
from .filters import (
    FiniteFilter,
    ImproperFilter,
    UPSeq,
    all_filters,
    filter_from_generators,
    limits_along,
    limits_frechet,
    principal_ultrafilter,
    trivial_filter,
)
from .preservation import (
    PreconditionError,
    PreservationReport,
    PreservationRow,
    TheoryReport,
    check_bipreservation,
    check_los,
    check_theory_preservation,
)
from .product import (
    DEFAULT_CAP,
    ProductTooLarge,
    ReducedProduct,
    SignatureMismatch,
    classical_reduced_product,
    reduced_product,
)
