import pytest

from medianvoting.lattice import (
    build_boolean_hypercube,
    build_chain,
    build_from_covers,
    build_product,
)


@pytest.fixture(scope="session")
def square():
    return build_from_covers(["0", "x", "y", "1"],
                             [("0", "x"), ("0", "y"), ("x", "1"), ("y", "1")])


@pytest.fixture(scope="session")
def chain4():
    """Four-element chain a < b < d < c."""
    return build_from_covers(["a", "b", "d", "c"],
                             [("a", "b"), ("b", "d"), ("d", "c")])


@pytest.fixture(scope="session")
def cube3():
    return build_boolean_hypercube(3)


@pytest.fixture(scope="session")
def grid3x3():
    return build_product(build_chain(3), build_chain(3))


@pytest.fixture(scope="session")
def corner_square():
    """The square relabelled with d at the bottom, atoms b and c, top a."""
    return build_from_covers(["d", "b", "c", "a"],
                             [("d", "b"), ("d", "c"), ("b", "a"), ("c", "a")])
