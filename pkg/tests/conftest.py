import pytest

from artinian import random_monomial_ideal as make_random_monomial_ideal
from groebner import IdealHandle
from polyring import RingPresentation


@pytest.fixture
def plane2():
    return RingPresentation.from_strings(2, ("x", "y"), label="F_2[x,y]")


@pytest.fixture
def plane3():
    return RingPresentation.from_strings(3, ("x", "y"), label="F_3[x,y]")


@pytest.fixture
def space2():
    return RingPresentation.from_strings(2, ("x", "y", "z"), label="F_2[x,y,z]")


@pytest.fixture
def a1():
    return RingPresentation.from_strings(3, ("x", "y", "z"), ["x*y - z^2"], "a1")


@pytest.fixture
def twisted_cubic():
    return RingPresentation.from_strings(
        2, ("a", "b", "c", "d"), ["a*c - b^2", "a*d - b*c", "b*d - c^2"], "twisted-cubic")


@pytest.fixture
def three_lines():
    return RingPresentation.from_strings(2, ("x", "y", "z"), ["x*y", "x*z", "y*z"], "three-lines")


@pytest.fixture
def ideal():
    def make(ring, *texts, label=""):
        return IdealHandle.from_strings(ring, texts, label)
    return make


@pytest.fixture
def random_monomial_ideal():
    return make_random_monomial_ideal
