"""Checks of preservation, bipreservation and the Los equation on concrete products."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from ..semantics.evaluate import satisfies_theory
from ..semantics.tables import value_table
from ..syntax.analysis import free_vars
from .filters import FiniteFilter
from .product import DEFAULT_CAP, reduced_product


@dataclass(frozen=True)
class PreservationRow:
    """One product tuple: kernel-indexed coordinates per free variable, and both sides."""

    tuple_id: tuple
    product_value: Fraction
    limsup: Fraction

    @property
    def preserved(self) -> bool:
        return self.product_value <= self.limsup

    @property
    def copreserved(self) -> bool:
        return self.limsup <= self.product_value


@dataclass(frozen=True)
class PreservationReport:
    formula: object
    variables: tuple
    rows: tuple

    @property
    def preserved(self) -> bool:
        return all(r.preserved for r in self.rows)

    @property
    def copreserved(self) -> bool:
        return all(r.copreserved for r in self.rows)

    @property
    def bipreserved(self) -> bool:
        return self.preserved and self.copreserved

    def failures(self):
        return [r for r in self.rows if not (r.preserved and r.copreserved)]


def check_bipreservation(formula, factors, filt: FiniteFilter, cap: int | None = DEFAULT_CAP) -> PreservationReport:
    """Compare the product value at every tuple with the limsup of the factor values.

    Tuples range over product points for each free variable (sorted by name),
    in lexicographic order of kernel coordinates.
    """
    rp = reduced_product(factors, filt, cap)
    variables = tuple(sorted(free_vars(formula)))
    prod_table = value_table(rp.result, formula, variables)
    factor_tables = {i: value_table(rp.factors[i], formula, variables) for i in rp.kernel}
    rows = []
    for a in itertools.product(range(rp.result.size), repeat=len(variables)):
        coords = [rp.points[p] for p in a]
        limsup = max(factor_tables[i][tuple(c[j] for c in coords)] for j, i in enumerate(rp.kernel))
        rows.append(PreservationRow(tuple(coords), prod_table[a], limsup))
    return PreservationReport(formula, variables, tuple(rows))


@dataclass(frozen=True)
class TheoryReport:
    factor_models: tuple  # per factor: does it model the theory
    product_models: bool
    violated: object  # first violated condition in the product, or None
    kernel_in_models: bool
    preserved: bool | None  # None when the kernel is not inside the set of models
    cartesian_factors: bool | None  # trivial filter only: product model implies every factor a model
    reduced_root: bool | None  # identical factors only: product model implies the root a model


class PreconditionError(ValueError):
    pass


def check_theory_preservation(theory, factors, filt: FiniteFilter, waive: bool = False, cap: int | None = DEFAULT_CAP) -> TheoryReport:
    """Does the product model a theory that the kernel factors model?

    Without ``waive`` the kernel must lie inside the set of factor indices
    modeling the theory.  Also reports the converse directions for cartesian
    factors (trivial filter) and reduced roots (all factors equal).
    """
    factors = tuple(factors)
    models = tuple(satisfies_theory(m, theory)[0] for m in factors)
    kernel_ok = all(models[i] for i in filt.kernel)
    if not kernel_ok and not waive:
        raise PreconditionError("some kernel factor does not model the theory")
    rp = reduced_product(factors, filt, cap)
    ok, violated = satisfies_theory(rp.result, theory)
    cartesian = (not ok or all(models)) if filt.is_trivial else None
    identical = all(m is factors[0] for m in factors)
    root = (not ok or models[0]) if identical else None
    return TheoryReport(models, ok, violated, kernel_ok, ok if kernel_ok else None, cartesian, root)


def check_los(formula, factors, filt: FiniteFilter, cap: int | None = DEFAULT_CAP) -> bool:
    """Over a singleton kernel {i}, the product agrees with factor i at every tuple."""
    if not filt.is_ultrafilter:
        raise ValueError("check_los needs a filter with a singleton kernel")
    rp = reduced_product(factors, filt, cap)
    (i0,) = rp.kernel
    variables = tuple(sorted(free_vars(formula)))
    prod_table = value_table(rp.result, formula, variables)
    factor_table = value_table(rp.factors[i0], formula, variables)
    return all(prod_table[a] == factor_table[tuple(rp.points[p][0] for p in a)] for a in prod_table)
