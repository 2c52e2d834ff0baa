"""Verification suites over the workbench's headline facts.

Each suite re-derives one cluster of results by exhaustive computation and
returns a ``VerificationReport``: betweenness/median axioms, the equivalence
of interval monotonicity with strategy-proofness on both single-peaked
domains, median closure of monotone rules, the representation round-trips,
the strategy-proof-but-coalitionally-manipulable constructions, the
anonymous-rule impossibility, the chain equivalence, and the Boolean-square
golden values.
"""

from __future__ import annotations

import itertools
import random
import time

from .errors import NoSuitableSublatticeError, NotAChainError, NotEnoughAtomsError
from .lattice import Lattice, build_chain, build_from_covers, build_boolean_hypercube
from .preorders import (
    TotalPreorder,
    enumerate_lsu,
    enumerate_topped_preorders,
    enumerate_unimodal,
    is_locally_strictly_unimodal,
    is_separable,
    is_unimodal,
)
from .rules import (
    CommitteeRule,
    ExplicitRule,
    build_canonical_median_tree,
    corners,
    extended_median,
    extended_median_rule,
    full_spaces,
    tabulate,
    tree_to_committee,
)
from .verify import (
    CheckResult,
    DomainDescriptor,
    ManipulationWitness,
    VerificationReport,
    enumerate_quota_rules,
    find_coalitional_manipulation,
    find_monotonicity_violation,
    find_strategy_violation,
    check_axioms,
    nondecreasing_tuples,
    random_explicit_rule,
    sample_monotone_rule,
)


def _finish(name, checks, t0):
    return VerificationReport(name, checks, (time.perf_counter() - t0) * 1000.0)


def _names(lat, elements):
    return [lat.names[e] for e in elements]


# -- betweenness and median axioms -----------------------------------------------------


def claim1_suite(lat: Lattice, label: str = "") -> VerificationReport:
    """Exhaustive betweenness axioms, median laws, and the metric picture."""
    t0 = time.perf_counter()
    m = lat.m
    rng = range(m)
    checks = []

    def add(claim, witness):
        checks.append(CheckResult(claim, witness is None,
                                  witness=witness, detail=f"{m} elements"))

    w = None
    for x, z, y in itertools.product(rng, repeat=3):
        if lat.between(x, z, y) and not lat.between(y, z, x):
            w = _names(lat, (x, z, y))
            break
    add("betweenness-symmetry", w)

    w = None
    for x, y in itertools.product(rng, repeat=2):
        if not (lat.between(x, x, y) and lat.between(x, y, y)):
            w = _names(lat, (x, y))
            break
    add("betweenness-closure", w)

    w = None
    for x, y in itertools.product(rng, repeat=2):
        if lat.between(x, y, x) and y != x:
            w = _names(lat, (x, y))
            break
    add("betweenness-idempotence", w)

    w = None
    for x, y in itertools.product(rng, repeat=2):
        seg = lat.interval(x, y)
        for u, v in itertools.product(seg, repeat=2):
            for z in lat.interval(u, v):
                if not lat.between(x, z, y):
                    w = _names(lat, (x, u, v, z, y))
                    break
            if w:
                break
        if w:
            break
    add("betweenness-convexity", w)

    w = None
    for x, y, z in itertools.product(rng, repeat=3):
        if lat.between(x, y, z) and lat.between(y, x, z) and x != y:
            w = _names(lat, (x, y, z))
            break
    add("betweenness-antisymmetry", w)

    med = [[[lat.median(a, b, c) for c in rng] for b in rng] for a in rng]

    w = None
    for a in rng:
        if med[lat.bottom][a][lat.top] != a:
            w = _names(lat, (a,))
            break
    add("median-absorbs-bounds", w)

    w = None
    for a, b in itertools.product(rng, repeat=2):
        if med[a][b][a] != a:
            w = _names(lat, (a, b))
            break
    add("median-majority-of-repeats", w)

    w = None
    for a, b, c in itertools.product(rng, repeat=3):
        if not med[a][b][c] == med[b][a][c] == med[b][c][a]:
            w = _names(lat, (a, b, c))
            break
    add("median-symmetry", w)

    w = None
    for a, b, c in itertools.product(rng, repeat=3):
        if w:
            break
        mabc = med[a][b][c]
        for d, e in itertools.product(rng, repeat=2):
            if med[mabc][d][e] != med[med[a][d][e]][b][med[c][d][e]]:
                w = _names(lat, (a, b, c, d, e))
                break
    add("median-redistribution", w)

    w = None
    for x, z, y in itertools.product(rng, repeat=3):
        if lat.between(x, z, y) != (med[x][y][z] == z):
            w = _names(lat, (x, z, y))
            break
    add("median-defines-betweenness", w)

    w = None
    for a, b in itertools.product(rng, repeat=2):
        if med[a][b][lat.top] != lat.join(a, b) or med[a][b][lat.bottom] != lat.meet(a, b):
            w = _names(lat, (a, b))
            break
    add("join-meet-are-medians", w)

    val = lat.rank_valuation()
    w = None
    for x, y, z in itertools.product(rng, repeat=3):
        geodesic = val.distance(x, z) == val.distance(x, y) + val.distance(y, z)
        if lat.between(x, y, z) != geodesic:
            w = _names(lat, (x, y, z))
            break
    add("valuation-metric-geodesics", w)

    name = f"claim1:{label}" if label else "claim1"
    return _finish(name, checks, t0)


# -- monotonicity <-> strategy-proofness, and representations -----------------------------


def _rule_pool(lat, n, samples, seed):
    rng = random.Random(seed)
    pool = [("random", random_explicit_rule(lat, n, rng)) for _ in range(samples)]
    pool += [("projection", ExplicitRule.from_function(
        full_spaces(lat, n), lambda b, i=i: b[i])) for i in range(n)]
    pool += [("constant", ExplicitRule.from_function(
        full_spaces(lat, n), lambda b, c=c: c)) for c in range(lat.m)]
    return pool


def _roundtrips_exact(rule, lat):
    """Whether the median-tree and committee normal forms replay the table."""
    spaces, table = tabulate(rule, lat)
    values = corners(rule, lat)
    tree = build_canonical_median_tree(values, rule.n)
    _, tree_table = tabulate(tree, lat, spaces)
    if tree_table != table:
        return False, False
    committee = tree_to_committee(tree, lat)
    _, committee_table = tabulate(committee, lat, spaces)
    return True, committee_table == table


def lemma1_suite(lat: Lattice, n: int = 2, samples: int = 120,
                 seed: int = 0) -> VerificationReport:
    """Interval monotonicity iff strategy-proofness, on both full domains."""
    t0 = time.perf_counter()
    dom_u = DomainDescriptor.full_unimodal(lat, n)
    dom_s = DomainDescriptor.full_lsu(lat, n)
    bad_u = bad_s = None
    monotone_count = 0
    pool = _rule_pool(lat, n, samples, seed)
    for kind, rule in pool:
        monotone = find_monotonicity_violation(rule, lat) is None
        monotone_count += monotone
        if monotone != (find_strategy_violation(rule, dom_u) is None) and bad_u is None:
            bad_u = kind
        if monotone != (find_strategy_violation(rule, dom_s) is None) and bad_s is None:
            bad_s = kind
    detail = f"{len(pool)} rules, {monotone_count} monotone"
    checks = [
        CheckResult("monotone-iff-sp-on-unimodal", bad_u is None, bad_u, detail),
        CheckResult("monotone-iff-sp-on-strict", bad_s is None, bad_s, detail),
    ]
    return _finish("lemma1", checks, t0)


def lemma2_suite(lat: Lattice, n: int = 3, label: str = "") -> VerificationReport:
    """Pointwise medians of monotone rules stay monotone."""
    t0 = time.perf_counter()
    spaces = full_spaces(lat, n)
    pool = [tabulate(ExplicitRule.from_function(spaces, lambda b, i=i: b[i]), lat)[1]
            for i in range(n)]
    pool += [tuple([c] * (lat.m ** n)) for c in range(lat.m)]
    pool.append(tabulate(extended_median_rule(lat, n), lat)[1])
    witness = None
    tested = 0
    for fa, fb, fc in itertools.combinations_with_replacement(pool, 3):
        mixed = ExplicitRule(spaces, [lat.median(a, b, c)
                                      for a, b, c in zip(fa, fb, fc)])
        tested += 1
        violation = find_monotonicity_violation(mixed, lat)
        if violation is not None:
            witness = violation.describe(lat)
            break
    checks = [CheckResult("median-of-monotone-rules-is-monotone",
                          witness is None, witness,
                          f"{tested} rule triples, {len(pool)} base rules")]
    name = f"lemma2:{label}" if label else "lemma2"
    return _finish(name, checks, t0)


def _blocked_pair_rule(lat=None):
    """The four-chain rule that freezes a blocked ballot pair: on ballots
    restricted to the ends of the chain's middle segment it returns interior
    elements crosswise, which breaks interval monotonicity."""
    chain = build_from_covers(["a", "b", "d", "c"],
                              [("a", "b"), ("b", "d"), ("d", "c")])
    a, b, d, c = (chain.element(s) for s in "abdc")
    value = {(a, a): a, (a, d): b, (d, a): c, (d, d): d}

    def clamp(e):
        return a if chain.leq(e, b) else d

    full = ExplicitRule.from_function(
        full_spaces(chain, 2), lambda ballots: value[(clamp(ballots[0]), clamp(ballots[1]))])
    return chain, full


def theorem1_suite(lat: Lattice, n: int = 2, samples: int = 200, seed: int = 0,
                   committee_max_n: int = 3) -> VerificationReport:
    """Five-way equivalence sweep: monotonicity, strategy-proofness on both
    domains, median-tree representability, committee representability."""
    t0 = time.perf_counter()
    checks = []
    dom_u = DomainDescriptor.full_unimodal(lat, n)
    dom_s = DomainDescriptor.full_lsu(lat, n)
    pool = _rule_pool(lat, n, samples, seed)
    bad = {key: None for key in
           ("sp-unimodal", "sp-strict", "tree-form", "committee-form")}
    monotone_count = 0
    for kind, rule in pool:
        monotone = find_monotonicity_violation(rule, lat) is None
        monotone_count += monotone
        sp_u = find_strategy_violation(rule, dom_u) is None
        sp_s = find_strategy_violation(rule, dom_s) is None
        tree_ok, committee_ok = _roundtrips_exact(rule, lat)
        for key, value in (("sp-unimodal", sp_u), ("sp-strict", sp_s),
                           ("tree-form", tree_ok), ("committee-form", committee_ok)):
            if value != monotone and bad[key] is None:
                bad[key] = kind
    detail = f"{len(pool)} sampled rules, {monotone_count} monotone"
    for key, offender in bad.items():
        checks.append(CheckResult(f"monotone-iff-{key}", offender is None,
                                  offender, detail))

    quota_bad = None
    quota_count = 0
    for nn in range(1, committee_max_n + 1):
        d_u = DomainDescriptor.full_unimodal(lat, nn)
        d_s = DomainDescriptor.full_lsu(lat, nn)
        for constants, rule in enumerate_quota_rules(lat, nn):
            quota_count += 1
            results = (find_monotonicity_violation(rule, lat) is None,
                       find_strategy_violation(rule, d_u) is None,
                       find_strategy_violation(rule, d_s) is None,
                       *_roundtrips_exact(rule, lat))
            if not all(results):
                quota_bad = {"n": nn, "constants": _names(lat, constants),
                             "results": results}
                break
        if quota_bad:
            break
    checks.append(CheckResult("quota-rules-satisfy-all-five", quota_bad is None,
                              quota_bad, f"{quota_count} quota rules, n <= {committee_max_n}"))

    chain, blocked = _blocked_pair_rule()
    b_dom_u = DomainDescriptor.full_unimodal(chain, 2)
    b_dom_s = DomainDescriptor.full_lsu(chain, 2)
    flags = (find_monotonicity_violation(blocked, chain) is None,
             find_strategy_violation(blocked, b_dom_u) is None,
             find_strategy_violation(blocked, b_dom_s) is None,
             *_roundtrips_exact(blocked, chain))
    checks.append(CheckResult("blocked-pair-rule-fails-all-five",
                              not any(flags), flags,
                              "crosswise four-chain rule on full ballot spaces"))
    return _finish("theorem1", checks, t0)


# -- strategy-proof but coalitionally manipulable -------------------------------------------


_CORNER_TABLE = {
    ("a", "a"): "a", ("a", "b"): "b", ("a", "c"): "a", ("a", "d"): "b",
    ("b", "a"): "a", ("b", "b"): "b", ("b", "c"): "a", ("b", "d"): "b",
    ("c", "a"): "c", ("c", "b"): "d", ("c", "c"): "c", ("c", "d"): "d",
    ("d", "a"): "c", ("d", "b"): "d", ("d", "c"): "c", ("d", "d"): "d",
}


def _four_chain_labels(lat):
    """Lexicographically first four-element cover path, labelled bottom-up."""
    for z0 in range(lat.m):
        for z1 in lat.upper_covers(z0):
            for z2 in lat.upper_covers(z1):
                for z3 in lat.upper_covers(z2):
                    return z0, z1, z2, z3
    return None


def _diamond_labels(lat):
    """First incomparable pair with its meet and join: (meet, u, v, join)."""
    for u in range(lat.m):
        for v in range(u + 1, lat.m):
            if not lat.comparable(u, v):
                return lat.meet(u, v), u, v, lat.join(u, v)
    return None


def _ranked(lat, ordered_classes):
    """Total preorder from ordered element classes; leftovers share the last."""
    ranks = [None] * lat.m
    for r, cls in enumerate(ordered_classes):
        for e in cls:
            ranks[e] = r
    worst = len(ordered_classes)
    tail = [e for e in range(lat.m) if ranks[e] is None]
    for e in tail:
        ranks[e] = worst
    used = sorted(set(ranks))
    remap = {r: i for i, r in enumerate(used)}
    return TotalPreorder([remap[r] for r in ranks])


def _dummy_pool(lat):
    if lat.m <= 7:
        return enumerate_unimodal(lat)
    # indifference-except-top preorders; always unimodal, keeps big carriers cheap
    return [_ranked(lat, [[t]]) for t in range(lat.m)]


def theorem2_suite(lat: Lattice) -> VerificationReport:
    """Constructions that are strategy-proof yet coalitionally manipulable:
    a restricted two-ballot rule over a blocked pair, and (off chains) the
    diamond-sublattice rule built from its corner values."""
    t0 = time.perf_counter()
    if lat.m < 4:
        raise NoSuitableSublatticeError("need at least four elements")
    checks = []

    chain_labels = _four_chain_labels(lat)
    if chain_labels is not None:
        a, b, d, c = chain_labels    # chain a < b < d < c
    else:
        diamond = _diamond_labels(lat)
        if diamond is None:
            checks.append(CheckResult("restricted-rule-construction", False,
                                      detail="no four-element sublattice found"))
            return _finish("theorem2", checks, t0)
        d, b, c, a = diamond         # bottom, the two incomparables, their join
    name_of = {x: s for x, s in zip((a, b, c, d), "abcd")}
    table4 = {(u, v): next(e for e in (a, b, c, d)
                           if name_of[e] == _CORNER_TABLE[(name_of[u], name_of[v])])
              for u in (a, b, c, d) for v in (a, b, c, d)}

    pair = tuple(sorted((a, d)))
    carrier = tuple(range(lat.m))
    restricted = ExplicitRule.from_function(
        (pair, pair, carrier), lambda ballots: table4[(ballots[0], ballots[1])])

    p_top_a = _ranked(lat, [[a], [b]])
    p_top_d = _ranked(lat, [[d], [b]])
    q_top_a = _ranked(lat, [[a], [b], [c]])
    q_top_d = _ranked(lat, [[d], [b], [c]])
    pool = _dummy_pool(lat)
    dom_u = DomainDescriptor.custom(lat, (pair, pair, carrier),
                                    ((p_top_a, p_top_d), (p_top_a, p_top_d), pool))
    dom_s = DomainDescriptor.custom(lat, (pair, pair, carrier),
                                    ((q_top_a, q_top_d), (q_top_a, q_top_d), pool))

    checks.append(CheckResult(
        "restricted-subdomain-preferences-unimodal",
        is_unimodal(p_top_a, lat) and is_unimodal(p_top_d, lat),
        detail=f"pair ballots {{{lat.names[a]}, {lat.names[d]}}}"))
    violation = find_monotonicity_violation(restricted, lat)
    if chain_labels is not None:
        # on a chain host the crosswise values land outside [d, a]
        checks.append(CheckResult(
            "restricted-rule-not-interval-monotone", violation is not None,
            None if violation else "no violation",
            "" if violation is None else str(violation.describe(lat))))
    else:
        checks.append(CheckResult(
            "restricted-rule-interval-monotone", violation is None,
            violation.describe(lat) if violation else None,
            "diamond host: the corner rule restricts a monotone rule"))
    checks.append(CheckResult(
        "restricted-rule-sp-on-unimodal-subdomain",
        find_strategy_violation(restricted, dom_u) is None))
    checks.append(CheckResult(
        "restricted-rule-sp-on-strict-subdomain",
        find_strategy_violation(restricted, dom_s) is None))
    for tag, dom in (("unimodal", dom_u), ("strict", dom_s)):
        witness = find_coalitional_manipulation(restricted, dom)
        good = witness is not None and witness.validate(restricted, lat)
        checks.append(CheckResult(
            f"restricted-rule-coalition-witness-{tag}", good,
            None if good else "no witness",
            str(witness.describe(lat)) if witness else ""))

    if lat.is_chain():
        checks.append(CheckResult(
            "diamond-rule", True,
            detail="chain carrier: coalition equivalence holds, construction exempt"))
        return _finish("theorem2", checks, t0)

    dd, bb, cc, aa = _diamond_labels(lat)
    sub = lat.sublattice([dd, bb, cc, aa])
    sname = {sub.element(lat.names[e]): s
             for e, s in ((aa, "a"), (bb, "b"), (cc, "c"), (dd, "d"))}
    by_letter = {s: e for e, s in sname.items()}
    sa, sb, sc, sd = (by_letter[s] for s in "abcd")
    tree = build_canonical_median_tree([sd, sc, sb, sa], 2)
    table_ok = all(
        tree.evaluate(sub, (u, v))
        == by_letter[_CORNER_TABLE[(sname[u], sname[v])]]
        for u in range(4) for v in range(4))
    checks.append(CheckResult(
        "diamond-rule-table-matches-corner-expansion", table_ok,
        detail=f"sublattice {{{', '.join(sub.names)}}}"))
    checks.append(CheckResult(
        "diamond-rule-interval-monotone",
        find_monotonicity_violation(tree, sub) is None))
    sdom_u = DomainDescriptor.full_unimodal(sub, 2)
    sdom_s = DomainDescriptor.full_lsu(sub, 2)
    checks.append(CheckResult(
        "diamond-rule-sp-on-unimodal",
        find_strategy_violation(tree, sdom_u) is None))
    checks.append(CheckResult(
        "diamond-rule-sp-on-strict",
        find_strategy_violation(tree, sdom_s) is None))
    for tag, dom in (("unimodal", sdom_u), ("strict", sdom_s)):
        witness = find_coalitional_manipulation(tree, dom)
        good = witness is not None and witness.validate(tree, sub)
        checks.append(CheckResult(
            f"diamond-rule-coalition-witness-{tag}", good,
            None if good else "no witness",
            str(witness.describe(sub)) if witness else ""))
    return _finish("theorem2", checks, t0)


# -- impossibility for anonymous rules --------------------------------------------------------


def _local_filter(table, strides, lat, local, n):
    """Local sovereignty and join-irreducible neutrality on ``local``."""
    reached = set()
    for ballots in itertools.product(local, repeat=n):
        reached.add(table[sum(b * s for b, s in zip(ballots, strides))])
    sovereign = all(z in reached for z in local)
    ji = sorted(lat.join_irreducibles & set(local))
    neutral = True
    for j, k in itertools.combinations(ji, 2):
        swap = list(range(lat.m))
        swap[j], swap[k] = k, j
        for ballots in itertools.product(local, repeat=n):
            direct = table[sum(b * s for b, s in zip(ballots, strides))]
            image = table[sum(swap[b] * s for b, s in zip(ballots, strides))]
            if image != swap[direct]:
                neutral = False
                break
        if not neutral:
            break
    return sovereign, neutral


def _quota_tables(lat, n):
    """(constants, full table) per quota rule, sharing the subset-meet sweep."""
    m = lat.m
    vectors = nondecreasing_tuples(lat, n + 1)
    tables = {v: [] for v in vectors}
    sizes = list(range(1, n + 1))
    for ballots in itertools.product(range(m), repeat=n):
        meet_by_mask = [lat.top] * (1 << n)
        best = [lat.bottom] * (n + 1)
        for mask in range(1, 1 << n):
            low = mask & -mask
            voter = low.bit_length() - 1
            value = lat.meet(meet_by_mask[mask ^ low], ballots[voter])
            meet_by_mask[mask] = value
            count = bin(mask).count("1")
            best[count] = lat.join(best[count], value)
        for vector in vectors:
            out = vector[0]
            for s in sizes:
                out = lat.join(out, lat.meet(best[s], vector[s]))
            tables[vector].append(out)
    return [(v, tuple(tables[v])) for v in vectors]


def _targeted_prefs(lat, x, z, branch, domain):
    """The impossibility proof's hand-built profiles for the quota branch."""
    bottom, xz = lat.bottom, lat.join(x, z)
    if domain == "unimodal":
        if branch == "low":          # quota at most half the voters
            first = _ranked(lat, [[x], [bottom]])
            second = _ranked(lat, [[z], [bottom]])
        else:
            first = _ranked(lat, [[x], [xz]])
            second = _ranked(lat, [[z], [xz]])
        third = _ranked(lat, [[bottom]])
    else:
        if branch == "low":
            first = _ranked(lat, [[x], [bottom], [xz], [z]])
            second = _ranked(lat, [[z], [bottom], [xz], [x]])
        else:
            first = _ranked(lat, [[x], [xz], [bottom], [z]])
            second = _ranked(lat, [[z], [xz], [bottom], [x]])
        third = _ranked(lat, [[bottom], [x], [z], [xz]])
    return first, second, third


def _targeted_witness(lat, rule, n, q, x, z, domain):
    """Try the proof's profile and joint deviation; None when inapplicable."""
    bottom, xz = lat.bottom, lat.join(x, z)
    branch = "low" if 2 * q <= n else "high"
    first, second, third = _targeted_prefs(lat, x, z, branch, domain)
    valid = (is_unimodal if domain == "unimodal" else is_locally_strictly_unimodal)
    if not all(valid(p, lat) for p in (first, second, third)):
        return None
    k = n // 2
    if branch == "low":
        if n % 2:
            profile = (first,) * k + (second,) * k + (third,)
            coalition = tuple(range(n - 1))
        else:
            profile = (first,) * k + (second,) * k
            coalition = tuple(range(n))
        deviation = (bottom,) * len(coalition)
    else:
        if n % 2:
            profile = (first,) * k + (second,) * k + (third,)
        else:
            profile = (first,) * k + (second,) * (k - 1) + (third,)
        coalition = tuple(range(n - 1))
        deviation = (xz,) * len(coalition)
    tops = tuple(p.top for p in profile)
    truthful = rule.evaluate(lat, tops)
    ballots = list(tops)
    for i, b in zip(coalition, deviation):
        ballots[i] = b
    deviant = rule.evaluate(lat, ballots)
    witness = ManipulationWitness(
        profile=profile, coalition=coalition,
        context_ballots=tuple(tops[j] for j in range(n) if j not in coalition),
        deviation=deviation, outcome_truthful=truthful, outcome_deviant=deviant)
    return witness if witness.validate(rule, lat) else None


def theorem3_suite(lat: Lattice, n: int = 5) -> VerificationReport:
    """No anonymous quota rule that is locally sovereign and neutral on the
    four-element sublattice over two atoms survives the coalition search."""
    t0 = time.perf_counter()
    atoms = sorted(lat.atoms)
    if len(atoms) < 2:
        raise NotEnoughAtomsError("need at least two atoms")
    x, z = atoms[:2]
    xz = lat.join(x, z)
    local = [lat.bottom, x, z, xz]
    strides = tuple(lat.m ** (n - 1 - i) for i in range(n))

    survivors = []
    total = 0
    for constants, table in _quota_tables(lat, n):
        total += 1
        sovereign, neutral = _local_filter(table, strides, lat, local, n)
        if sovereign and neutral:
            survivors.append((constants, ExplicitRule(full_spaces(lat, n), table)))

    checks = [CheckResult(
        "quota-enumeration",
        bool(survivors),
        detail=f"{total} quota rules, {len(survivors)} locally sovereign+neutral "
               f"on {{{', '.join(_names(lat, local))}}}")]

    majority = n // 2 + 1
    for constants, rule in survivors:
        q = next((s for s in range(1, n + 1)
                  if lat.leq(x, rule.evaluate(
                      lat, tuple(x if i < s else lat.bottom for i in range(n))))
                  and lat.leq(z, rule.evaluate(
                      lat, tuple(z if i < s else lat.bottom for i in range(n))))),
                 None)
        tag = f"q{q}" if q is not None else "q-none"
        for domain in ("unimodal", "strict"):
            witness = None
            how = "targeted-profile"
            if q is not None:
                witness = _targeted_witness(lat, rule, n, q, x, z, domain)
            if witness is None:
                how = "fallback-search"
                dom = (DomainDescriptor.full_unimodal(lat, n) if domain == "unimodal"
                       else DomainDescriptor.full_lsu(lat, n))
                witness = find_coalitional_manipulation(rule, dom)
            found = witness is not None and witness.validate(rule, lat)
            must_be_targeted = q == majority
            passed = found and (how == "targeted-profile" or not must_be_targeted)
            checks.append(CheckResult(
                f"{tag}-manipulable-{domain}", passed,
                None if passed else "no witness or fallback needed at majority quota",
                f"{how}; constants {_names(lat, constants)}"
                + (f"; {witness.describe(lat)}" if witness else "")))
    return _finish("theorem3", checks, t0)


# -- chains: individual and coalitional strategy-proofness coincide ----------------------------


def chain_equivalence_suite(lat: Lattice, n: int = 2, samples: int = 100,
                            seed: int = 0) -> VerificationReport:
    """On a chain, no monotone rule admits any coalition manipulation."""
    t0 = time.perf_counter()
    if not lat.is_chain():
        raise NotAChainError("carrier is not a chain")
    rng = random.Random(seed)
    pool = [(f"quota{_names(lat, constants)}", rule)
            for constants, rule in enumerate_quota_rules(lat, n)]
    pool += [(f"sampled-{i}", sample_monotone_rule(lat, n, rng))
             for i in range(samples)]
    dom_u = DomainDescriptor.full_unimodal(lat, n)
    dom_s = DomainDescriptor.full_lsu(lat, n)
    not_monotone = None
    witnesses = {"unimodal": None, "strict": None}
    for tag, rule in pool:
        if find_monotonicity_violation(rule, lat) is not None:
            not_monotone = tag
            break
        for domain, dom in (("unimodal", dom_u), ("strict", dom_s)):
            if witnesses[domain] is None:
                found = find_coalitional_manipulation(rule, dom)
                if found is not None:
                    witnesses[domain] = {"rule": tag, **found.describe(lat)}
    detail = f"{len(pool)} monotone rules, n={n}"
    checks = [CheckResult("pool-is-interval-monotone", not_monotone is None,
                          not_monotone, detail)]
    for domain in ("unimodal", "strict"):
        checks.append(CheckResult(
            f"no-coalition-witness-{domain}", witnesses[domain] is None,
            witnesses[domain], detail))
    return _finish("corollary1", checks, t0)


# -- the Boolean-square walkthrough ------------------------------------------------------------


_SQUARE_BETWEENNESS = [
    ("0", "x", "1"), ("0", "y", "1"), ("0", "0", "1"), ("0", "1", "1"),
    ("1", "x", "0"), ("1", "y", "0"), ("1", "0", "0"), ("1", "1", "0"),
    ("x", "0", "y"), ("x", "1", "y"), ("x", "x", "y"), ("x", "y", "y"),
    ("y", "0", "x"), ("y", "1", "x"), ("y", "x", "x"), ("y", "y", "x"),
    ("0", "0", "x"), ("0", "x", "x"), ("x", "0", "0"), ("x", "x", "0"),
    ("0", "0", "y"), ("0", "y", "y"), ("y", "0", "0"), ("y", "y", "0"),
    ("x", "x", "1"), ("x", "1", "1"), ("1", "x", "x"), ("1", "1", "x"),
    ("y", "y", "1"), ("y", "1", "1"), ("1", "y", "y"), ("1", "1", "y"),
]


def boolean_square() -> Lattice:
    return build_from_covers(["0", "x", "y", "1"],
                             [("0", "x"), ("0", "y"), ("x", "1"), ("y", "1")])


def square_templates(lat: Lattice, strict: bool):
    """The twelve single-peaked preorders of each family, three per top."""
    out = set()
    for top in range(lat.m):
        anti = lat.complement(top)
        b, b2 = sorted(set(range(lat.m)) - {top, anti})
        if strict:
            out.add(_ranked(lat, [[top], [b], [b2], [anti]]))
            out.add(_ranked(lat, [[top], [b2], [b], [anti]]))
            out.add(_ranked(lat, [[top], [b, b2], [anti]]))
        else:
            out.add(_ranked(lat, [[top], [b], [b2, anti]]))
            out.add(_ranked(lat, [[top], [b2], [b, anti]]))
            out.add(_ranked(lat, [[top], [b, b2, anti]]))
    return out


def boolean_square_suite() -> VerificationReport:
    """Golden values for the four-element Boolean square walkthrough."""
    t0 = time.perf_counter()
    lat = boolean_square()
    O, X, Y, I = (lat.element(s) for s in "0xy1")
    checks = []

    unimodal = enumerate_unimodal(lat)
    strict = enumerate_lsu(lat)
    per_top = {t: sum(1 for p in unimodal if p.top == t) for t in range(4)}
    checks.append(CheckResult(
        "twelve-unimodal-three-per-top",
        len(unimodal) == 12 and set(per_top.values()) == {3}
        and set(unimodal) == square_templates(lat, strict=False),
        detail=f"{len(unimodal)} unimodal"))
    per_top_s = {t: sum(1 for p in strict if p.top == t) for t in range(4)}
    checks.append(CheckResult(
        "twelve-strict-three-per-top",
        len(strict) == 12 and set(per_top_s.values()) == {3}
        and set(strict) == square_templates(lat, strict=True),
        detail=f"{len(strict)} locally strictly unimodal"))
    checks.append(CheckResult(
        "families-disjoint", not set(unimodal) & set(strict)))
    separable = {p for p in enumerate_topped_preorders(lat) if is_separable(p, lat)}
    checks.append(CheckResult(
        "separable-equals-strict-family", separable == set(strict),
        detail=f"{len(separable)} separable"))

    golden = {tuple(lat.element(s) for s in triple)
              for triple in _SQUARE_BETWEENNESS}
    trivial = {(u, w, v) for u, w, v in itertools.product(range(4), repeat=3)
               if u == w or v == w}
    computed = {(u, w, v) for u, w, v in itertools.product(range(4), repeat=3)
                if lat.between(u, w, v)}
    checks.append(CheckResult(
        "betweenness-golden-set", computed == golden | trivial,
        detail=f"{len(computed)} triples, {len(golden)} listed, "
               f"{len(trivial)} trivial"))

    maj5 = extended_median_rule(lat, 5)
    dom_u = DomainDescriptor.full_unimodal(lat, 5)
    dom_s = DomainDescriptor.full_lsu(lat, 5)
    checks.append(CheckResult(
        "majority-interval-monotone",
        find_monotonicity_violation(maj5, lat) is None))
    checks.append(CheckResult(
        "majority-sp-unimodal", find_strategy_violation(maj5, dom_u) is None))
    checks.append(CheckResult(
        "majority-sp-strict", find_strategy_violation(maj5, dom_s) is None))
    witness = find_coalitional_manipulation(maj5, dom_u)
    shape_ok = (witness is not None and witness.validate(maj5, lat)
                and witness.outcome_truthful == O and witness.outcome_deviant == I
                and len(witness.coalition) == 4
                and sorted(witness.profile[i].top for i in witness.coalition)
                == [X, X, Y, Y])
    checks.append(CheckResult(
        "majority-coalition-witness", shape_ok,
        None if shape_ok else (witness.describe(lat) if witness else "none"),
        str(witness.describe(lat)) if witness else ""))

    spaces, table = tabulate(maj5, lat)
    cast_only = all(table[idx] in ballots for idx, ballots in
                    enumerate(itertools.product(range(4), repeat=5)))
    checks.append(CheckResult(
        "majority-output-always-among-ballots", cast_only,
        detail="4^5 ballot profiles"))
    axioms = check_axioms(maj5, lat, range(4), unimodal_pool=unimodal)
    checks.append(CheckResult(
        "majority-axioms-all-hold", axioms.all_hold(), axioms.witnesses or None,
        "anonymous, locally neutral/sovereign/idempotent, efficient"))

    med = extended_median(lat, (I, X, Y))
    below = sum(1 for v in (I, X, Y) if lat.leq(v, med))
    above = sum(1 for v in (I, X, Y) if lat.leq(med, v))
    checks.append(CheckResult(
        "support-balance-fails-on-square",
        med == I and below == 3 and above == 1,
        detail=f"median(1,x,y)={lat.names[med]}, counts ({below},{above}), "
               "majority threshold 2"))

    chain = build_from_covers(["a", "b", "d", "c"],
                              [("a", "b"), ("b", "d"), ("d", "c")])
    balanced = True
    for ballots in itertools.product(range(4), repeat=3):
        cm = extended_median(chain, ballots)
        lo = sum(1 for v in ballots if chain.leq(v, cm))
        hi = sum(1 for v in ballots if chain.leq(cm, v))
        if min(lo, hi) < 2:
            balanced = False
            break
    checks.append(CheckResult(
        "support-balance-holds-on-four-chain", balanced, detail="4^3 profiles"))

    square2 = build_from_covers(["d", "b", "c", "a"],
                                [("d", "b"), ("d", "c"), ("b", "a"), ("c", "a")])
    A, B, C, D = (square2.element(s) for s in "abcd")
    checks.append(CheckResult(
        "interval-transitivity-fails",
        square2.between(A, B, D) and square2.between(B, A, C)
        and not square2.between(C, B, D),
        detail="b in [a,d], a in [b,c], b not in [c,d]"))

    cube = build_boolean_hypercube(3)
    ballots = tuple(cube.element(s) for s in ("110", "011", "101"))
    med3 = cube.median(*ballots)
    checks.append(CheckResult(
        "cube-median-can-leave-ballots",
        cube.names[med3] == "111" and med3 not in ballots,
        detail=f"median(110,011,101)={cube.names[med3]}"))

    return _finish("boolean-square", checks, t0)


def run_all(seed: int = 0) -> list:
    """Every suite on the bundled lattices; the full battery."""
    square = boolean_square()
    chain4 = build_from_covers(["a", "b", "d", "c"],
                               [("a", "b"), ("b", "d"), ("d", "c")])
    cube = build_boolean_hypercube(3)
    grid = _grid3x3()
    reports = [
        claim1_suite(square, "square"),
        claim1_suite(chain4, "chain4"),
        claim1_suite(cube, "cube"),
        claim1_suite(grid, "grid3x3"),
        lemma1_suite(square, n=2, samples=120, seed=seed),
        lemma2_suite(square, n=3, label="square"),
        lemma2_suite(cube, n=3, label="cube"),
        theorem1_suite(square, n=2, samples=200, seed=seed),
        theorem2_suite(square),
        theorem2_suite(chain4),
        theorem2_suite(cube),
        theorem3_suite(square, n=3),
        theorem3_suite(square, n=4),
        theorem3_suite(square, n=5),
        chain_equivalence_suite(chain4, n=2, samples=100, seed=seed),
        chain_equivalence_suite(chain4, n=3, samples=0, seed=seed),
        boolean_square_suite(),
    ]
    return reports


def _grid3x3() -> Lattice:
    from .lattice import build_product
    return build_product(build_chain(3), build_chain(3))
