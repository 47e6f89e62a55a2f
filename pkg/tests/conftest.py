import itertools
import sys
from fractions import Fraction

import pytest
from hypothesis import settings

from redprod.semantics import enumerate_structures, make_classical, make_structure
from redprod.syntax import Signature

settings.register_profile("default", deadline=None, max_examples=200)
settings.load_profile("default")

HALF = Fraction(1, 2)


@pytest.fixture(scope="session")
def sig_p():
    return Signature.build(predicates={"P": 1})


@pytest.fixture(scope="session")
def sig_pq():
    return Signature.build(predicates={"P": 1, "Q": 1})


@pytest.fixture(scope="session")
def small_p_structures(sig_p):
    """P-structures with <= 3 points, values in {0, 1/2, 1}, distances in {1/2, 1}."""
    return enumerate_structures(sig_p, distances=(HALF, 1))


def discrete(sig, labels, preds):
    n = len(labels)
    dist = [[0 if a == b else 1 for b in range(n)] for a in range(n)]
    return make_structure(sig, labels, dist, preds)


def two_point_classical():
    from redprod.semantics import classical_signature

    return make_classical(classical_signature({}), [1, 2])


def families(universe, max_size):
    """Multisets of indices into universe, sizes 1..max_size."""
    for k in range(1, max_size + 1):
        yield from itertools.combinations_with_replacement(range(len(universe)), k)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.RESULTS:
        terminalreporter.write_line(line)
