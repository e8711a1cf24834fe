import pytest

from khlab.frobenius import TheoryTriple
from khlab.linkio import build_diagram, mirror, parse_braid, parse_pd

TREFOIL_PD = "PD[X[1,5,2,4], X[3,1,4,6], X[5,3,6,2]]"  # positive (right-handed) trefoil
FIGURE_EIGHT_PD = "PD[X[4,2,5,1], X[8,6,1,5], X[6,3,7,4], X[2,7,3,8]]"


@pytest.fixture
def unknot():
    return build_diagram([], name="0_1")


@pytest.fixture
def trefoil():
    return parse_pd(TREFOIL_PD, name="3_1")


@pytest.fixture
def mirror_trefoil(trefoil):
    return mirror(trefoil)


@pytest.fixture
def figure_eight():
    return parse_pd(FIGURE_EIGHT_PD, name="4_1")


@pytest.fixture
def hopf():
    return parse_braid([1, 1], 2, name="hopf")


@pytest.fixture
def r2_unknot():
    return parse_braid([1, -2], 3, name="r2-unknot")


def triple(spec):
    return TheoryTriple.parse(spec)
