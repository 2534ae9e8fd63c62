import pytest

from vdclab.core import Bounds
from vdclab.presented import (quantale_avdc, rel_avdc, small_rel_universe,
                              two_element_quantale)
from vdclab.constructions import EnrichedCategory


@pytest.fixture(scope="session")
def q2():
    return quantale_avdc(two_element_quantale())


@pytest.fixture(scope="session")
def rel2():
    return rel_avdc(small_rel_universe(2))


@pytest.fixture(scope="session")
def bounds():
    return Bounds(K=2, max_loose_per_hom=4)


def preorder_cat(tag, n, rel):
    """A preorder on n elements as a category enriched over q2."""
    objs = [(f"{tag}{i}", "*") for i in range(n)]
    homs = [((f"{tag}{i}", f"{tag}{j}"), 1 if (i, j) in rel else 0)
            for i in range(n) for j in range(n)]
    return EnrichedCategory.of(objs, homs)
