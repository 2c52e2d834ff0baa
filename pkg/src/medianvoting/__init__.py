"""Workbench for finite bounded distributive lattices and strategy-proof
voting rules: single-peaked preference domains, committee lattice
polynomials, nested-median trees, and exhaustive verification suites."""

from .errors import MedianVotingError
from .lattice import (
    Lattice,
    Valuation,
    build_boolean_hypercube,
    build_chain,
    build_from_covers,
    build_ideal_lattice,
    build_product,
)
from .preorders import (
    PreferenceProfile,
    StrictRelation,
    TotalPreorder,
    build_lsu_witness,
    build_three_class_witness,
    enumerate_lsu,
    enumerate_topped_preorders,
    enumerate_unimodal,
    extend_to_total_preorder,
    is_locally_strictly_unimodal,
    is_s_consistent,
    is_separable,
    is_unimodal,
    strict_top_betweenness,
)
from .rules import (
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
    corners,
    extended_median,
    extended_median_rule,
    run_tree_automaton,
    tree_to_committee,
)
from .verify import (
    DomainDescriptor,
    ManipulationWitness,
    check_axioms,
    find_coalitional_manipulation,
    find_monotonicity_violation,
    find_strategy_violation,
    is_b_monotonic,
    is_strategy_proof,
)

__version__ = "0.1.0"
