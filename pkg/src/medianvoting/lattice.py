"""Finite bounded distributive lattices with fully tabulated order, join and meet.

Elements are dense integer ids into a name list.  The order is kept as one
bitmask per element (``up[a]`` holds every b with a <= b), so comparisons,
joins, meets, medians and betweenness are O(1) table lookups after
construction.  Every constructor validates the full axiom set and raises a
witness-carrying error on the first violation.
"""

from __future__ import annotations

import itertools

from .errors import (
    InvalidSizeError,
    NotALatticeError,
    NotAPosetError,
    NotBoundedError,
    NotDistributiveError,
    TooLargeError,
)

DEFAULT_SIZE_CAP = 4096

# Above this many elements the distributivity check switches from the direct
# triple scan (which reports the lexicographically first failing triple) to
# the join-prime criterion, whose witness is derived rather than first.
_DIRECT_TRIPLE_LIMIT = 64


def _bits(mask):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class Valuation:
    """Integer valuation: v(x v y) = v(x) + v(y) - v(x ^ y), strictly increasing."""

    __slots__ = ("lattice", "values")

    def __init__(self, lattice: "Lattice", values):
        values = tuple(int(v) for v in values)
        if len(values) != lattice.m:
            raise InvalidSizeError("valuation must assign a value to every element")
        for a in range(lattice.m):
            for b in range(lattice.m):
                j, m = lattice.join(a, b), lattice.meet(a, b)
                if values[j] + values[m] != values[a] + values[b]:
                    raise NotALatticeError(
                        "valuation identity fails", witness=(a, b))
                if lattice.lt(a, b) and not values[a] < values[b]:
                    raise NotALatticeError(
                        "valuation is not strictly increasing", witness=(a, b))
        self.lattice = lattice
        self.values = values

    def __getitem__(self, element: int) -> int:
        return self.values[element]

    def distance(self, x: int, y: int) -> int:
        """Metric induced by the valuation: v(x v y) - v(x ^ y)."""
        lat = self.lattice
        return self.values[lat.join(x, y)] - self.values[lat.meet(x, y)]


class Lattice:
    """A validated finite bounded distributive lattice."""

    __slots__ = ("names", "m", "covers", "bottom", "top", "atoms",
                 "join_irreducibles", "_index", "_up", "_down",
                 "_join", "_meet")

    def __init__(self, names, covers, size_cap: int = DEFAULT_SIZE_CAP):
        names = list(names)
        if not names:
            raise InvalidSizeError("a lattice needs at least one element")
        if len(names) > size_cap:
            raise TooLargeError(f"{len(names)} elements exceeds cap {size_cap}")
        if len(set(names)) != len(names):
            raise NotAPosetError("duplicate element names")
        self.names = tuple(str(n) for n in names)
        self.m = len(names)
        self._index = {n: i for i, n in enumerate(self.names)}

        cover_ids = []
        for lo, hi in covers:
            a = lo if isinstance(lo, int) else self._index.get(str(lo))
            b = hi if isinstance(hi, int) else self._index.get(str(hi))
            if a is None or b is None or not (0 <= a < self.m and 0 <= b < self.m):
                raise NotAPosetError(f"cover ({lo}, {hi}) names an unknown element")
            if a == b:
                raise NotAPosetError(f"cover ({lo}, {hi}) is a self-loop")
            cover_ids.append((a, b))
        if len(set(cover_ids)) != len(cover_ids):
            raise NotAPosetError("duplicate cover")
        self.covers = tuple(cover_ids)

        self._up = self._close(cover_ids)
        self._down = [0] * self.m
        for a in range(self.m):
            for b in _bits(self._up[a]):
                self._down[b] |= 1 << a
        self._reject_redundant_covers()
        self._find_bounds()
        self._build_tables()
        self._check_distributive()
        self._find_irreducibles()

    # -- construction internals -------------------------------------------

    def _close(self, cover_ids):
        succ = [[] for _ in range(self.m)]
        indeg = [0] * self.m
        for a, b in cover_ids:
            succ[a].append(b)
            indeg[b] += 1
        order = [v for v in range(self.m) if indeg[v] == 0]
        queue = list(order)
        while queue:
            v = queue.pop()
            for w in succ[v]:
                indeg[w] -= 1
                if indeg[w] == 0:
                    order.append(w)
                    queue.append(w)
        if len(order) != self.m:
            cyc = [self.names[v] for v in range(self.m) if indeg[v] > 0]
            raise NotAPosetError("cover relation has a cycle", witness=cyc)
        up = [1 << v for v in range(self.m)]
        for v in reversed(order):
            for w in succ[v]:
                up[v] |= up[w]
        return up

    def _reject_redundant_covers(self):
        for a, b in self.covers:
            between = self._up[a] & self._down[b] & ~(1 << a) & ~(1 << b)
            if between:
                raise NotAPosetError(
                    f"({self.names[a]}, {self.names[b]}) is not a cover: "
                    f"{self.names[next(_bits(between))]} lies strictly between",
                    witness=(a, b))

    def _find_bounds(self):
        full = (1 << self.m) - 1
        bottoms = [v for v in range(self.m) if self._up[v] == full]
        tops = [v for v in range(self.m) if self._down[v] == full]
        if not bottoms or not tops:
            raise NotBoundedError("no global bottom or no global top")
        self.bottom = bottoms[0]
        self.top = tops[0]

    def _build_tables(self):
        m, up, down = self.m, self._up, self._down
        join = [0] * (m * m)
        meet = [0] * (m * m)
        for a in range(m):
            row = a * m
            for b in range(m):
                uppers = up[a] & up[b]
                for u in _bits(uppers):
                    if uppers & ~up[u] == 0:
                        join[row + b] = u
                        break
                else:
                    raise NotALatticeError(
                        f"({self.names[a]}, {self.names[b]}) has no least upper bound",
                        witness=(a, b))
                lowers = down[a] & down[b]
                glb = None
                for u in _bits(lowers):
                    if lowers & ~down[u] == 0:
                        glb = u
                if glb is None:
                    raise NotALatticeError(
                        f"({self.names[a]}, {self.names[b]}) has no greatest lower bound",
                        witness=(a, b))
                meet[row + b] = glb
        self._join = join
        self._meet = meet

    def _check_distributive(self):
        m, join, meet = self.m, self._join, self._meet
        if m <= _DIRECT_TRIPLE_LIMIT:
            rng = range(m)
            for a in rng:
                for b in rng:
                    for c in rng:
                        bc = join[b * m + c]
                        lhs = meet[a * m + bc]
                        rhs = join[meet[a * m + b] * m + meet[a * m + c]]
                        if lhs != rhs:
                            raise NotDistributiveError(
                                "meet does not distribute over join at "
                                f"({self.names[a]}, {self.names[b]}, {self.names[c]})",
                                witness=(a, b, c))
            return
        # Join-prime criterion: distributive iff j <= a v b implies
        # j <= a or j <= b for every join-irreducible j.
        for j in self._scan_irreducibles():
            upj = self._up[j]
            for a in range(m):
                if upj >> a & 1:
                    continue
                for b in range(m):
                    if upj >> b & 1:
                        continue
                    if upj >> join[a * m + b] & 1:
                        raise NotDistributiveError(
                            "meet does not distribute over join at "
                            f"({self.names[j]}, {self.names[a]}, {self.names[b]})",
                            witness=(j, a, b))

    def _scan_irreducibles(self):
        out = []
        for x in range(self.m):
            if x == self.bottom:
                continue
            below = self._down[x] & ~(1 << x)
            lower_covers = [c for c in _bits(below)
                            if self._up[c] & below == 1 << c]
            if len(lower_covers) == 1:
                out.append(x)
        return out

    def _find_irreducibles(self):
        self.join_irreducibles = frozenset(self._scan_irreducibles())
        self.atoms = frozenset(
            x for x in self.join_irreducibles
            if self._down[x] == (1 << x) | (1 << self.bottom))

    # -- names --------------------------------------------------------------

    def name(self, element: int) -> str:
        return self.names[element]

    def element(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise KeyError(f"unknown element name {name!r}") from None

    def elements(self):
        return range(self.m)

    def __repr__(self):
        return f"Lattice({self.m} elements, bottom={self.names[self.bottom]}, top={self.names[self.top]})"

    # -- order and operations ------------------------------------------------

    def leq(self, a: int, b: int) -> bool:
        return bool(self._up[a] >> b & 1)

    def lt(self, a: int, b: int) -> bool:
        return a != b and bool(self._up[a] >> b & 1)

    def comparable(self, a: int, b: int) -> bool:
        return bool(self._up[a] >> b & 1 or self._up[b] >> a & 1)

    def join(self, a: int, b: int) -> int:
        return self._join[a * self.m + b]

    def meet(self, a: int, b: int) -> int:
        return self._meet[a * self.m + b]

    def join_all(self, elements) -> int:
        out = self.bottom
        for e in elements:
            out = self._join[out * self.m + e]
        return out

    def meet_all(self, elements) -> int:
        out = self.top
        for e in elements:
            out = self._meet[out * self.m + e]
        return out

    def median(self, a: int, b: int, c: int) -> int:
        m, join, meet = self.m, self._join, self._meet
        return join[join[meet[a * m + b] * m + meet[b * m + c]] * m + meet[a * m + c]]

    def between(self, x: int, z: int, y: int) -> bool:
        """True iff z lies in the interval [x, y], i.e. x^y <= z <= xvy."""
        m = self.m
        return bool(self._up[self._meet[x * m + y]] >> z & 1
                    and self._down[self._join[x * m + y]] >> z & 1)

    def interval(self, x: int, y: int) -> tuple:
        m = self.m
        mask = self._up[self._meet[x * m + y]] & self._down[self._join[x * m + y]]
        return tuple(_bits(mask))

    def interval_mask(self, x: int, y: int) -> int:
        m = self.m
        return self._up[self._meet[x * m + y]] & self._down[self._join[x * m + y]]

    def upset_mask(self, x: int) -> int:
        return self._up[x]

    def downset_mask(self, x: int) -> int:
        return self._down[x]

    # -- derived structure ----------------------------------------------------

    def is_chain(self) -> bool:
        return all(self.comparable(a, b)
                   for a, b in itertools.combinations(range(self.m), 2))

    def complement(self, x: int):
        """The complement of x if one exists, else None (unique if any)."""
        for y in range(self.m):
            if self.join(x, y) == self.top and self.meet(x, y) == self.bottom:
                return y
        return None

    def is_boolean(self) -> bool:
        return all(self.complement(x) is not None for x in range(self.m))

    def upper_covers(self, x: int) -> tuple:
        above = self._up[x] & ~(1 << x)
        return tuple(c for c in _bits(above) if self._down[c] & above == 1 << c)

    def lower_covers(self, x: int) -> tuple:
        below = self._down[x] & ~(1 << x)
        return tuple(c for c in _bits(below) if self._up[c] & below == 1 << c)

    def height(self) -> int:
        """Number of elements on a longest chain."""
        depth = [0] * self.m
        for x in self._topo_order():
            for c in self.lower_covers(x):
                depth[x] = max(depth[x], depth[c] + 1)
        return max(depth) + 1

    def _topo_order(self):
        return sorted(range(self.m), key=lambda v: bin(self._down[v]).count("1"))

    def rank_valuation(self) -> Valuation:
        """Count of join-irreducibles below each element; always a valid valuation here."""
        ji = sorted(self.join_irreducibles)
        values = [sum(1 for j in ji if self._up[j] >> x & 1) for x in range(self.m)]
        return Valuation(self, values)

    def metric_distance(self, valuation: Valuation, x: int, y: int) -> int:
        return valuation.distance(x, y)

    def sublattice(self, elements) -> "Lattice":
        """The induced lattice on a join/meet-closed subset, keeping names."""
        subset = sorted(elements)
        pos = {e: i for i, e in enumerate(subset)}
        for a in subset:
            for b in subset:
                if self.join(a, b) not in pos or self.meet(a, b) not in pos:
                    raise NotALatticeError(
                        "subset is not closed under join and meet", witness=(a, b))
        sub_covers = []
        for a in subset:
            for b in subset:
                if not self.lt(a, b):
                    continue
                if any(self.lt(a, c) and self.lt(c, b) for c in subset):
                    continue
                sub_covers.append((pos[a], pos[b]))
        return Lattice([self.names[e] for e in subset], sub_covers)


# -- constructors --------------------------------------------------------------


def build_from_covers(names, covers, size_cap: int = DEFAULT_SIZE_CAP) -> Lattice:
    """Build and validate a lattice from its named cover (Hasse) relation."""
    return Lattice(names, covers, size_cap=size_cap)


def build_chain(m: int, size_cap: int = DEFAULT_SIZE_CAP) -> Lattice:
    if m < 1:
        raise InvalidSizeError("a chain needs at least one element")
    names = [str(i) for i in range(m)]
    return Lattice(names, [(i, i + 1) for i in range(m - 1)], size_cap=size_cap)


def build_boolean_hypercube(k: int, size_cap: int = DEFAULT_SIZE_CAP) -> Lattice:
    """All k-bit vectors under the componentwise order; names are bitstrings."""
    if k < 1:
        raise InvalidSizeError("dimension must be at least 1")
    if 2 ** k > size_cap:
        raise TooLargeError(f"2^{k} elements exceeds cap {size_cap}")
    names = [format(v, f"0{k}b") for v in range(2 ** k)]
    covers = [(v, v | 1 << i)
              for v in range(2 ** k) for i in range(k) if not v >> i & 1]
    return Lattice(names, covers, size_cap=size_cap)


def build_product(a: Lattice, b: Lattice, size_cap: int = DEFAULT_SIZE_CAP) -> Lattice:
    """Componentwise-ordered product; element (i, j) gets id i*|b| + j."""
    if a.m * b.m > size_cap:
        raise TooLargeError(f"{a.m * b.m} elements exceeds cap {size_cap}")
    names = [f"{na}.{nb}" for na in a.names for nb in b.names]
    covers = []
    for i in range(a.m):
        for j in range(b.m):
            e = i * b.m + j
            for i2 in a.upper_covers(i):
                covers.append((e, i2 * b.m + j))
            for j2 in b.upper_covers(j):
                covers.append((e, i * b.m + j2))
    return Lattice(names, covers, size_cap=size_cap)


def build_ideal_lattice(poset_names, leq_pairs,
                        size_cap: int = DEFAULT_SIZE_CAP) -> Lattice:
    """Lattice of order ideals (downward-closed sets) of a finite poset.

    ``leq_pairs`` lists (lower, upper) name pairs generating the order; the
    reflexive-transitive closure is taken.  Join is union, meet intersection,
    so the result is distributive by construction (still validated).
    """
    poset_names = [str(n) for n in poset_names]
    if len(set(poset_names)) != len(poset_names):
        raise NotAPosetError("duplicate poset element names")
    p = len(poset_names)
    index = {n: i for i, n in enumerate(poset_names)}
    below = [1 << i for i in range(p)]  # below[i]: everything <= i, as a mask
    edges = []
    for lo, hi in leq_pairs:
        if str(lo) not in index or str(hi) not in index:
            raise NotAPosetError(f"pair ({lo}, {hi}) names an unknown element")
        edges.append((index[str(lo)], index[str(hi)]))
    changed = True
    while changed:
        changed = False
        for lo, hi in edges:
            merged = below[hi] | below[lo]
            if merged != below[hi]:
                below[hi] = merged
                changed = True
    for i in range(p):
        for j in range(p):
            if i != j and below[i] >> j & 1 and below[j] >> i & 1:
                raise NotAPosetError(
                    "relation is not antisymmetric",
                    witness=(poset_names[i], poset_names[j]))

    ideals = {0}
    frontier = [0]
    while frontier:
        ideal = frontier.pop()
        for i in range(p):
            if ideal >> i & 1:
                continue
            if below[i] & ~(ideal | 1 << i):
                continue  # some strict predecessor of i is missing
            grown = ideal | 1 << i
            if grown not in ideals:
                if len(ideals) >= size_cap:
                    raise TooLargeError(f"more than {size_cap} order ideals")
                ideals.add(grown)
                frontier.append(grown)

    ordered = sorted(ideals, key=lambda s: (bin(s).count("1"), s))
    pos = {s: i for i, s in enumerate(ordered)}

    def ideal_name(mask):
        return "{" + ",".join(poset_names[i] for i in _bits(mask)) + "}"

    covers = []
    for s in ordered:
        for i in range(p):
            if not s >> i & 1 and (s | 1 << i) in pos and not below[i] & ~(s | 1 << i):
                covers.append((pos[s], pos[s | 1 << i]))
    return Lattice([ideal_name(s) for s in ordered], covers, size_cap=size_cap)
