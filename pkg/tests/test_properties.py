"""Hypothesis checks of the algebraic laws that every build must satisfy."""

import itertools

from hypothesis import given, settings, strategies as st

from medianvoting.lattice import (
    build_boolean_hypercube,
    build_chain,
    build_from_covers,
    build_product,
)
from medianvoting.preorders import (
    build_lsu_witness,
    build_three_class_witness,
    is_locally_strictly_unimodal,
    is_unimodal,
)
from medianvoting.rules import (
    CommitteeRule,
    build_canonical_median_tree,
    corners,
    tabulate,
)
from medianvoting.verify import find_monotonicity_violation

LATTICES = [
    build_from_covers(["0", "x", "y", "1"],
                      [("0", "x"), ("0", "y"), ("x", "1"), ("y", "1")]),
    build_from_covers(["a", "b", "d", "c"],
                      [("a", "b"), ("b", "d"), ("d", "c")]),
    build_chain(5),
    build_boolean_hypercube(3),
    build_product(build_chain(3), build_chain(3)),
]

lattices = st.sampled_from(LATTICES)


def element(draw, lat):
    return draw(st.integers(min_value=0, max_value=lat.m - 1))


@given(st.data())
def test_median_is_symmetric(data):
    lat = data.draw(lattices)
    a, b, c = (element(data.draw, lat) for _ in range(3))
    values = {lat.median(*perm) for perm in itertools.permutations((a, b, c))}
    assert len(values) == 1


@given(st.data())
def test_median_lies_between_each_pair(data):
    lat = data.draw(lattices)
    a, b, c = (element(data.draw, lat) for _ in range(3))
    m = lat.median(a, b, c)
    assert lat.between(a, m, b) and lat.between(b, m, c) and lat.between(a, m, c)


@given(st.data())
def test_valuation_identity_and_triangle(data):
    lat = data.draw(lattices)
    v = lat.rank_valuation()
    x, y, z = (element(data.draw, lat) for _ in range(3))
    assert v[lat.join(x, y)] + v[lat.meet(x, y)] == v[x] + v[y]
    assert v.distance(x, z) <= v.distance(x, y) + v.distance(y, z)


@given(st.data())
def test_betweenness_has_three_equivalent_forms(data):
    lat = data.draw(lattices)
    v = lat.rank_valuation()
    x, y, z = (element(data.draw, lat) for _ in range(3))
    order_form = lat.between(x, y, z)
    median_form = lat.median(x, z, y) == y
    metric_form = v.distance(x, z) == v.distance(x, y) + v.distance(y, z)
    assert order_form == median_form == metric_form


@given(st.data())
def test_witness_preorders_land_in_their_domains(data):
    lat = data.draw(lattices)
    peak = element(data.draw, lat)
    ref = element(data.draw, lat)
    assert is_unimodal(build_three_class_witness(lat, peak, ref), lat)
    lsu = build_lsu_witness(lat, peak, ref)
    assert lsu.top == peak
    assert is_locally_strictly_unimodal(lsu, lat)


@settings(max_examples=40)
@given(st.data())
def test_committee_rules_are_monotone_and_tree_representable(data):
    lat = data.draw(lattices)
    n = data.draw(st.integers(min_value=1, max_value=2))
    terms = data.draw(st.lists(
        st.tuples(
            st.frozensets(st.integers(min_value=0, max_value=n - 1), max_size=n),
            st.integers(min_value=0, max_value=lat.m - 1)),
        max_size=4))
    rule = CommitteeRule(n, terms)
    assert find_monotonicity_violation(rule, lat) is None
    spaces, table = tabulate(rule, lat)
    tree = build_canonical_median_tree(corners(rule, lat), n)
    assert tabulate(tree, lat, spaces)[1] == table
