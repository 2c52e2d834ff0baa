import itertools
import random

import pytest

from medianvoting.errors import (
    ArityMismatchError,
    BadLeafIndexError,
    BallotOutOfSpaceError,
    CornerNotInBallotSpaceError,
    MalformedTreeError,
    UnboundVariableError,
)
from medianvoting.lattice import build_boolean_hypercube, build_chain
from medianvoting.rules import (
    BallotLeaf,
    CommitteeRule,
    ConstLeaf,
    ExplicitRule,
    MedianNode,
    MedianTree,
    Signature,
    Term,
    TreeAutomaton,
    build_canonical_median_tree,
    canonical_median_term,
    corners,
    extended_median,
    extended_median_rule,
    full_spaces,
    median_automaton,
    run_tree_automaton,
    tabulate,
    tree_to_committee,
)

CORNER_RULE_TABLE = {
    # two-voter table generated by corner values (a, b, c, d) on the
    # relabelled square; f(d, c) = c comes from the median-tree expansion
    ("a", "a"): "a", ("a", "b"): "b", ("a", "c"): "a", ("a", "d"): "b",
    ("b", "a"): "a", ("b", "b"): "b", ("b", "c"): "a", ("b", "d"): "b",
    ("c", "a"): "c", ("c", "b"): "d", ("c", "c"): "c", ("c", "d"): "d",
    ("d", "a"): "c", ("d", "b"): "d", ("d", "c"): "c", ("d", "d"): "d",
}


class TestExplicitRule:
    def test_lookup_and_bounds(self, chain4):
        a, d = chain4.element("a"), chain4.element("d")
        rule = ExplicitRule(((a, d), (a, d)), (0, 1, 2, 3))
        assert rule.evaluate(chain4, (a, d)) == 1
        assert rule.evaluate(chain4, (d, a)) == 2
        with pytest.raises(BallotOutOfSpaceError):
            rule.evaluate(chain4, (chain4.element("b"), a))
        with pytest.raises(ArityMismatchError):
            rule.evaluate(chain4, (a,))

    def test_projection_and_constant(self, square):
        spaces = full_spaces(square, 3)
        proj = ExplicitRule.from_function(spaces, lambda b: b[0])
        const = ExplicitRule.from_function(spaces, lambda b: square.top)
        for ballots in itertools.product(range(4), repeat=3):
            assert proj.evaluate(square, ballots) == ballots[0]
            assert const.evaluate(square, ballots) == square.top


class TestCommitteeRule:
    def test_majority_values(self, square):
        o, x, y, i = (square.element(s) for s in "0xy1")
        maj5 = extended_median_rule(square, 5)
        assert maj5.evaluate(square, (x, x, y, y, o)) == o
        assert maj5.evaluate(square, (i, i, i, i, o)) == i
        for a in range(4):
            assert maj5.evaluate(square, (a,) * 5) == a

    def test_empty_conventions(self, square):
        empty_rule = CommitteeRule(2, [])
        assert empty_rule.evaluate(square, (square.top, square.top)) == square.bottom
        floor_rule = CommitteeRule(2, [(frozenset(), square.element("x"))])
        assert floor_rule.evaluate(square, (square.bottom,) * 2) == square.element("x")

    def test_flags(self, square):
        maj = extended_median_rule(square, 3)
        assert maj.is_order_filter()
        assert maj.constants_monotone(square)
        skewed = CommitteeRule(2, [(frozenset({0}), square.top)])
        assert not skewed.is_order_filter()

    def test_arity_validation(self, square):
        with pytest.raises(ArityMismatchError):
            CommitteeRule(2, [(frozenset({5}), square.top)])

    def test_evaluation_isotone(self, square):
        rng = random.Random(3)
        for _ in range(20):
            terms = [(frozenset(rng.sample(range(3), rng.randint(0, 3))),
                      rng.randrange(4)) for _ in range(4)]
            rule = CommitteeRule(3, terms)
            for ballots in itertools.product(range(4), repeat=3):
                out = rule.evaluate(square, ballots)
                for i in range(3):
                    for lifted in range(4):
                        if square.leq(ballots[i], lifted):
                            moved = list(ballots)
                            moved[i] = lifted
                            assert square.leq(out, rule.evaluate(square, moved))


class TestExtendedMedian:
    def test_strict_majority_quota(self, square):
        o, x, y, i = (square.element(s) for s in "0xy1")
        assert extended_median(square, (i, x, y)) == i
        assert extended_median(square, (x, x, y)) == x
        # n = 3 coincides with the ternary median
        for ballots in itertools.product(range(4), repeat=3):
            assert extended_median(square, ballots) == square.median(*ballots)

    def test_one_and_two_voters(self, square):
        for a in range(4):
            assert extended_median(square, (a,)) == a
            for b in range(4):
                assert extended_median(square, (a, b)) == square.meet(a, b)


class TestMedianTree:
    def test_single_voter_expansion(self, square):
        for p, q in itertools.product(range(4), repeat=2):
            if not square.leq(p, q):
                continue
            tree = build_canonical_median_tree([p, q], 1)
            for ballot in range(4):
                expected = square.join(p, square.meet(ballot, q))
                assert tree.evaluate(square, (ballot,)) == expected

    def test_corner_rule_table(self, corner_square):
        ids = {s: corner_square.element(s) for s in "abcd"}
        tree = build_canonical_median_tree(
            [ids["d"], ids["c"], ids["b"], ids["a"]], 2)
        for (s1, s2), out in CORNER_RULE_TABLE.items():
            got = tree.evaluate(corner_square, (ids[s1], ids[s2]))
            assert corner_square.names[got] == out

    def test_constant_tree(self, square):
        tree = build_canonical_median_tree([2] * 8, 3)
        for ballots in itertools.product(range(4), repeat=3):
            assert tree.evaluate(square, ballots) == 2

    def test_three_voter_shape(self, square):
        tree = build_canonical_median_tree(list(range(4)) + list(range(4)), 3)
        node = tree.root
        for depth in range(3):
            assert isinstance(node, MedianNode)
            assert isinstance(node.mid, BallotLeaf) and node.mid.voter == depth
            node = node.left
        assert isinstance(node, ConstLeaf)
        assert tree.corner_values() == (0, 1, 2, 3, 0, 1, 2, 3)

    def test_bad_leaf(self, square):
        tree = MedianTree(1, MedianNode(ConstLeaf(0), BallotLeaf(4), ConstLeaf(1)))
        with pytest.raises(BadLeafIndexError):
            tree.evaluate(square, (0,))


class TestCornersAndConversion:
    def test_corners_of_corner_rule(self, corner_square):
        ids = {s: corner_square.element(s) for s in "abcd"}
        rule = ExplicitRule.from_function(
            full_spaces(corner_square, 2),
            lambda b: corner_square.element(
                CORNER_RULE_TABLE[(corner_square.names[b[0]],
                                   corner_square.names[b[1]])]))
        assert corners(rule, corner_square) == (ids["d"], ids["c"],
                                                ids["b"], ids["a"])

    def test_corners_constant(self, square):
        rule = ExplicitRule.from_function(full_spaces(square, 2), lambda b: 2)
        assert corners(rule, square) == (2, 2, 2, 2)

    def test_majority_corners_are_bit_majorities(self, square):
        # corner ballots are bottom/top, so each corner value is top exactly
        # when a strict majority votes top
        rule = extended_median_rule(square, 3)
        values = corners(rule, square)
        for idx, bits in enumerate(itertools.product((0, 1), repeat=3)):
            expected = square.top if sum(bits) >= 2 else square.bottom
            assert values[idx] == expected

    def test_corner_needs_bounds_in_space(self, chain4):
        a, b = chain4.element("a"), chain4.element("b")
        rule = ExplicitRule(((a, b), (a, b)), (0, 0, 0, 0))
        with pytest.raises(CornerNotInBallotSpaceError):
            corners(rule, chain4)

    def test_single_voter_committee_form(self, square):
        for p, q in itertools.product(range(4), repeat=2):
            if not square.leq(p, q):
                continue
            tree = build_canonical_median_tree([p, q], 1)
            committee = tree_to_committee(tree, square)
            by_coalition = dict(committee.terms)
            assert by_coalition[frozenset()] == p
            assert by_coalition[frozenset({0})] == q
            for ballot in range(4):
                assert committee.evaluate(square, (ballot,)) == \
                    tree.evaluate(square, (ballot,))

    def test_majority_committee_constants(self, square):
        tree = build_canonical_median_tree(
            corners(extended_median_rule(square, 3), square), 3)
        committee = tree_to_committee(tree, square)
        for coalition, constant in committee.terms:
            expected = square.top if len(coalition) >= 2 else square.bottom
            assert constant == expected

    @pytest.mark.parametrize("fixture,n", [("square", 1), ("square", 2),
                                           ("square", 3), ("cube3", 2)])
    def test_committee_roundtrip(self, fixture, n, request):
        lat = request.getfixturevalue(fixture)
        rng = random.Random(n * 17 + lat.m)
        for _ in range(12):
            terms = [(frozenset(rng.sample(range(n), rng.randint(0, n))),
                      rng.randrange(lat.m)) for _ in range(rng.randint(0, 5))]
            rule = CommitteeRule(n, terms)
            spaces, table = tabulate(rule, lat)
            tree = build_canonical_median_tree(corners(rule, lat), n)
            assert tabulate(tree, lat, spaces)[1] == table
            back = tree_to_committee(tree, lat)
            assert tabulate(back, lat, spaces)[1] == table

    def test_corner_monotonicity_for_monotone_rules(self, square):
        rule = extended_median_rule(square, 3)
        committee = tree_to_committee(
            build_canonical_median_tree(corners(rule, square), 3), square)
        by_coalition = dict(committee.terms)
        for small, value in by_coalition.items():
            for big, other in by_coalition.items():
                if small < big:
                    assert square.leq(value, other)


class TestTreeAutomaton:
    def test_degenerate_variable(self, square):
        sig = Signature({"or": 2})
        auto = TreeAutomaton(sig, {"or": square.join}, variables=["z"])
        assert run_tree_automaton(auto, {"z": 2}, Term("z")) == 2

    def test_join_symbol(self, square):
        x, y = square.element("x"), square.element("y")
        sig = Signature({"or": 2})
        auto = TreeAutomaton(sig, {"or": square.join}, variables=["z1", "z2"])
        result = run_tree_automaton(auto, {"z1": x, "z2": y},
                                    Term("or", [Term("z1"), Term("z2")]))
        assert result == square.top

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_median_automaton_matches_tree(self, square, n):
        rng = random.Random(n)
        values = [rng.randrange(4) for _ in range(2 ** n)]
        tree = build_canonical_median_tree(values, n)
        auto = median_automaton(square, values, n)
        term = canonical_median_term(n)
        for ballots in itertools.product(range(4), repeat=n):
            init = {f"x{i}": ballots[i] for i in range(n)}
            assert run_tree_automaton(auto, init, term) == \
                tree.evaluate(square, ballots)

    def test_homomorphism_property(self, square):
        sig = Signature({"or": 2, "and": 2, "bot": 0})
        auto = TreeAutomaton(sig, {"or": square.join, "and": square.meet,
                                   "bot": lambda: square.bottom},
                             variables=["u", "v"])
        init = {"u": 1, "v": 2}
        left = Term("or", [Term("u"), Term("v")])
        right = Term("and", [Term("v"), Term("bot")])
        combined = Term("or", [left, right])
        assert run_tree_automaton(auto, init, combined) == square.join(
            run_tree_automaton(auto, init, left),
            run_tree_automaton(auto, init, right))

    def test_malformed_inputs(self, square):
        sig = Signature({"or": 2})
        auto = TreeAutomaton(sig, {"or": square.join}, variables=["z"])
        with pytest.raises(UnboundVariableError):
            run_tree_automaton(auto, {}, Term("z"))
        with pytest.raises(MalformedTreeError):
            run_tree_automaton(auto, {"z": 0}, Term("or", [Term("z")]))
        with pytest.raises(MalformedTreeError):
            run_tree_automaton(auto, {"z": 0}, Term("xor", [Term("z"), Term("z")]))
