import pytest

from spreclone import finite_monoid as fm
from spreclone import relations as R
from spreclone import signed_ops as so


@pytest.fixture
def z2():
    return fm.builtin("z2")


@pytest.fixture
def sprime():
    return fm.builtin("sprime")


@pytest.fixture
def shat():
    return fm.builtin("shat")


@pytest.fixture
def z3():
    return fm.builtin("z3")


@pytest.fixture
def leq_geq():
    return R.s_relation(2, [[(0, 0), (0, 1), (1, 1)], [(0, 0), (1, 0), (1, 1)]])


@pytest.fixture
def neg_minus():
    return so.from_values(2, (1,), [1, 0])


@pytest.fixture
def neg_plus():
    return so.from_values(2, (0,), [1, 0])
