"""Subalgebra lattices over prime fields.

Nodes are canonical :class:`~leibniz.algcore.Subspace` objects sorted by
``(dim, basis)``, so node 0 is the zero subalgebra and the last node is L.
Order queries run on Python-int bitsets: each node carries the bitmask of the
points of F_p^n it contains (for containment and meets) and the bitsets of the
node indices below/above it (for joins and covers).

Lattice isomorphisms are searched on the abstract order only.  Dimension and
ideal status never enter the search, since a lattice isomorphism need not
respect either.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, product
from typing import Iterator, NamedTuple, Sequence

from .algcore import (
    StructureTable,
    Subspace,
    _bracket,
    generated_subalgebra,
    is_ideal,
)
from .errors import CapExceeded, RequiresFiniteField
from .exactfield import FieldSpec

DEFAULT_MAX_DIM = 6
DEFAULT_MAX_P = 7
DEFAULT_MAX_NODES = 5000
# hard guard on the number of subspaces a single enumeration may produce
MAX_SUBSPACES = 2_000_000


def gaussian_binomial(n: int, k: int, q: int) -> int:
    if k < 0 or k > n:
        return 0
    num = den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def count_subspaces(n: int, p: int) -> int:
    return sum(gaussian_binomial(n, k, p) for k in range(n + 1))


def _check_caps(n: int, p: int, max_dim: int, max_p: int):
    total = count_subspaces(n, p)
    if n > max_dim or p > max_p or total > MAX_SUBSPACES:
        raise CapExceeded(
            f"F_{p}^{n} exceeds caps (dim <= {max_dim}, p <= {max_p}); "
            f"projected subspace count {total}"
        )


def enumerate_subspaces(n: int, p: int, max_dim: int = DEFAULT_MAX_DIM,
                        max_p: int = DEFAULT_MAX_P) -> Iterator[tuple[tuple[int, ...], ...]]:
    """Every subspace of F_p^n exactly once as an rref matrix, in (dim, lex) order.

    Pivot-pattern iteration: choose pivot columns, then fill the free entries
    (right of each pivot, outside pivot columns) with all field values.
    """
    _check_caps(n, p, max_dim, max_p)
    for k in range(n + 1):
        layer = []
        for piv in combinations(range(n), k):
            pivset = set(piv)
            slots = [(r, c) for r, pc in enumerate(piv) for c in range(pc + 1, n) if c not in pivset]
            for vals in product(range(p), repeat=len(slots)):
                rows = [[0] * n for _ in range(k)]
                for r, pc in enumerate(piv):
                    rows[r][pc] = 1
                for (r, c), v in zip(slots, vals):
                    rows[r][c] = v
                layer.append(tuple(map(tuple, rows)))
        layer.sort()
        yield from layer


def _require_prime_field(L: StructureTable):
    if not L.field.is_prime_field:
        raise RequiresFiniteField("subalgebra enumeration needs a prime field")


def _closed(L: StructureTable, U: Subspace) -> bool:
    b = U.basis
    for u in b:
        for v in b:
            if not U.contains(_bracket(L, u, v)):
                return False
    return True


def _points_mask(p: int, n: int, basis: Sequence[Sequence[int]]) -> int:
    """Bitmask of all points of the span, indexing vectors by their base-p value."""
    weights = [p ** (n - 1 - i) for i in range(n)]
    codes = {0}
    for row in basis:
        rc = sum(w * x for w, x in zip(weights, row))
        if not rc:
            continue
        # adding c*row coordinatewise mod p: work on digit tuples
        new = set()
        for code in codes:
            digits = [(code // w) % p for w in weights]
            for c in range(p):
                new.add(sum(w * ((d + c * x) % p) for w, d, x in zip(weights, digits, row)))
        codes = new
    mask = 0
    for c in codes:
        mask |= 1 << c
    return mask


def _iter_bits(x: int) -> Iterator[int]:
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


def _lowest(x: int) -> int:
    return (x & -x).bit_length() - 1


class Fingerprint(NamedTuple):
    nodes: int
    levels: tuple[int, ...]
    degrees: tuple[tuple[int, int], ...]
    atoms: int
    coatoms: int
    distributive: bool
    modular: bool


@dataclass(eq=False)
class SubalgebraLattice:
    algebra: StructureTable | None
    nodes: tuple[Subspace, ...]
    covers: tuple[tuple[int, int], ...]
    node_meta: tuple[tuple[int, bool], ...]
    below: tuple[int, ...]  # below[v]: bitset of u with u <= v
    above: tuple[int, ...]  # above[v]: bitset of u with u >= v
    masks: tuple[int, ...] = ()

    def __post_init__(self):
        n = len(self.below)
        self.size = n
        self.up = [0] * n
        self.down = [0] * n
        for i, j in self.covers:
            self.up[i] |= 1 << j
            self.down[j] |= 1 << i
        self._mask_index = {m: i for i, m in enumerate(self.masks)}
        self._index = {U: i for i, U in enumerate(self.nodes)}

    @property
    def bottom(self) -> int:
        return 0

    @property
    def top(self) -> int:
        return self.size - 1

    def leq(self, u: int, v: int) -> bool:
        return bool(self.below[v] >> u & 1)

    def covered_by(self, u: int, v: int) -> bool:
        return bool(self.up[u] >> v & 1)

    def meet(self, i: int, j: int) -> int:
        """Index of the greatest lower bound."""
        if self.masks:
            return self._mask_index[self.masks[i] & self.masks[j]]
        return _greatest(self, self.below[i] & self.below[j])

    def join(self, i: int, j: int) -> int:
        """Index of the least upper bound (order-theoretic)."""
        if self.masks:
            # nodes are sorted by dimension, so the least upper bound has the lowest index
            return _lowest(self.above[i] & self.above[j])
        return _least(self, self.above[i] & self.above[j])

    def index_of(self, U: Subspace) -> int:
        return self._index[U]

    def atoms(self) -> list[int]:
        return sorted(_iter_bits(self.up[0])) if self.size > 1 else []

    def coatoms(self) -> list[int]:
        return sorted(_iter_bits(self.down[self.top])) if self.size > 1 else []


def _greatest(lat: SubalgebraLattice, bits: int) -> int:
    for v in sorted(_iter_bits(bits), reverse=True):
        if lat.below[v] & bits == bits:
            return v
    raise ValueError("no greatest element")


def _build(algebra, nodes, masks, ideal_flags) -> SubalgebraLattice:
    n = len(nodes)
    below = [0] * n
    above = [0] * n
    for j in range(n):
        mj = masks[j]
        bj = 1 << j
        for i in range(j + 1):
            if masks[i] & ~mj == 0:
                below[j] |= 1 << i
                above[i] |= bj
    covers = []
    for j in range(n):
        strict = below[j] & ~(1 << j)
        shadow = 0
        for k in _iter_bits(strict):
            shadow |= below[k] & ~(1 << k)
        for i in _iter_bits(strict & ~shadow):
            covers.append((i, j))
    covers.sort()
    meta = tuple((U.dim, f) for U, f in zip(nodes, ideal_flags))
    return SubalgebraLattice(algebra, tuple(nodes), tuple(covers), meta, tuple(below), tuple(above), tuple(masks))


@lru_cache(maxsize=512)
def subalgebra_lattice(L: StructureTable, max_dim: int = DEFAULT_MAX_DIM,
                       max_p: int = DEFAULT_MAX_P) -> SubalgebraLattice:
    """All subalgebras of L with their Hasse diagram."""
    _require_prime_field(L)
    p, n = L.field.modulus, L.dim
    nodes, masks, flags = [], [], []
    for rows in enumerate_subspaces(n, p, max_dim, max_p):
        U = Subspace(L.field, n, rows)
        if _closed(L, U):
            nodes.append(U)
            masks.append(_points_mask(p, n, rows))
            flags.append(is_ideal(L, U))
    return _build(L, nodes, masks, flags)


@lru_cache(maxsize=512)
def ideal_list(L: StructureTable, max_dim: int = DEFAULT_MAX_DIM,
               max_p: int = DEFAULT_MAX_P) -> tuple[Subspace, ...]:
    """All two-sided ideals of L, in (dim, lex) order."""
    _require_prime_field(L)
    lat = subalgebra_lattice(L, max_dim, max_p)
    return tuple(U for U, (_, ideal) in zip(lat.nodes, lat.node_meta) if ideal)


def abstract_lattice(n: int, covers: Sequence[tuple[int, int]]) -> SubalgebraLattice:
    """A lattice given only by its cover relation on nodes 0..n-1.

    Nodes must be numbered along a linear extension with 0 the bottom and
    n-1 the top, and every node must sit at a level no lower than its index
    suggests (index order refines height).  Used for tests and for lattices
    that do not come from an algebra.
    """
    up = [0] * n
    for i, j in covers:
        if not i < j:
            raise ValueError("covers must go from lower to higher index")
        up[i] |= 1 << j
    above = [0] * n
    for v in range(n - 1, -1, -1):
        acc = 1 << v
        for w in _iter_bits(up[v]):
            acc |= above[w]
        above[v] = acc
    below = [0] * n
    for v in range(n):
        for w in _iter_bits(above[v]):
            below[w] |= 1 << v
    return SubalgebraLattice(None, (), tuple(sorted(covers)), tuple((0, False) for _ in range(n)),
                             tuple(below), tuple(above))


def _least(lat: SubalgebraLattice, bits: int) -> int:
    for v in sorted(_iter_bits(bits)):
        if lat.above[v] & bits == bits:
            return v
    raise ValueError("no least element")


# ---------------------------------------------------------------------------
# queries


def join(lat: SubalgebraLattice, i: int, j: int) -> int:
    """Node generated by the union of nodes i and j."""
    if lat.algebra is None:
        return lat.join(i, j)
    U = generated_subalgebra(lat.algebra, lat.nodes[i].basis + lat.nodes[j].basis)
    return lat.index_of(U)


def meet(lat: SubalgebraLattice, i: int, j: int) -> int:
    """Node equal to the intersection of nodes i and j."""
    if lat.algebra is None:
        return lat.meet(i, j)
    return lat.index_of(lat.nodes[i] & lat.nodes[j])


def heights(lat: SubalgebraLattice) -> list[int]:
    """Length of the longest chain from the bottom to each node."""
    h = [0] * lat.size
    for v in range(lat.size):
        d = lat.down[v]
        if d:
            h[v] = 1 + max(h[u] for u in _iter_bits(d))
    return h


def coheights(lat: SubalgebraLattice) -> list[int]:
    h = [0] * lat.size
    for v in range(lat.size - 1, -1, -1):
        u = lat.up[v]
        if u:
            h[v] = 1 + max(h[w] for w in _iter_bits(u))
    return h


def maximal_chain_lengths(lat: SubalgebraLattice) -> tuple[int, int]:
    """(shortest, longest) edge count over maximal chains from bottom to top."""
    short = [0] * lat.size
    long_ = [0] * lat.size
    for v in range(1, lat.size):
        d = list(_iter_bits(lat.down[v]))
        short[v] = 1 + min(short[u] for u in d)
        long_[v] = 1 + max(long_[u] for u in d)
    return short[lat.top], long_[lat.top]


def is_upper_semimodular_element(lat: SubalgebraLattice, u: int) -> bool:
    """U is maximal in <U, B> for every B with U ∩ B maximal in B."""
    for b in range(lat.size):
        if lat.covered_by(lat.meet(u, b), b) and not lat.covered_by(u, lat.join(u, b)):
            return False
    return True


def is_lower_semimodular_element(lat: SubalgebraLattice, u: int) -> bool:
    """U ∩ B is maximal in B for every B with U maximal in <U, B>."""
    for b in range(lat.size):
        if lat.covered_by(u, lat.join(u, b)) and not lat.covered_by(lat.meet(u, b), b):
            return False
    return True


def is_lower_semimodular(lat: SubalgebraLattice) -> bool:
    """Every node is lower semimodular in the lattice."""
    return all(is_lower_semimodular_element(lat, u) for u in range(lat.size))


def _is_modular(lat: SubalgebraLattice) -> bool:
    # finite length: modular iff upper and lower semimodular (cover form)
    cov = lat.covered_by
    for a in range(lat.size):
        for b in range(a + 1, lat.size):
            m, j = lat.meet(a, b), lat.join(a, b)
            if cov(m, a) != cov(b, j) or cov(m, b) != cov(a, j):
                return False
    return True


def _is_distributive(lat: SubalgebraLattice) -> bool:
    # the map x -> {join-irreducibles below x} must turn joins into unions
    jmask = 0
    for v in range(lat.size):
        if bin(lat.down[v]).count("1") == 1:
            jmask |= 1 << v
    jset = [lat.below[v] & jmask for v in range(lat.size)]
    for a in range(lat.size):
        for b in range(a + 1, lat.size):
            if jset[lat.join(a, b)] != jset[a] | jset[b]:
                return False
    return True


def lattice_fingerprint(lat: SubalgebraLattice) -> Fingerprint:
    """Isomorphism-invariant summary; equal fingerprints are necessary for isomorphism."""
    h = heights(lat)
    levels = [0] * (max(h) + 1 if h else 1)
    for x in h:
        levels[x] += 1
    degrees = sorted(
        (bin(lat.down[v]).count("1"), bin(lat.up[v]).count("1")) for v in range(lat.size)
    )
    return Fingerprint(
        lat.size,
        tuple(levels),
        tuple(degrees),
        len(lat.atoms()),
        len(lat.coatoms()),
        _is_distributive(lat),
        _is_modular(lat),
    )


# ---------------------------------------------------------------------------
# isomorphism search


@dataclass(frozen=True, eq=False)
class LatticeMap:
    """A join- and meet-preserving bijection between two lattices' node sets."""

    source: SubalgebraLattice
    target: SubalgebraLattice
    map: tuple[int, ...]

    def __post_init__(self):
        if not preserves_operations(self.source, self.target, self.map):
            raise ValueError("map does not preserve joins and meets")

    def __call__(self, i: int) -> int:
        return self.map[i]

    def inverse(self) -> LatticeMap:
        inv = [0] * len(self.map)
        for i, j in enumerate(self.map):
            inv[j] = i
        return LatticeMap(self.target, self.source, tuple(inv))


def preserves_operations(src: SubalgebraLattice, tgt: SubalgebraLattice, f: Sequence[int]) -> bool:
    """Exhaustive check that f is a bijection preserving joins and meets on all pairs."""
    n = src.size
    if tgt.size != n or sorted(f) != list(range(n)):
        return False
    for a in range(n):
        fa = f[a]
        for b in range(a, n):
            fb = f[b]
            if f[src.join(a, b)] != tgt.join(fa, fb) or f[src.meet(a, b)] != tgt.meet(fa, fb):
                return False
    return True


def _refined_colors(lats: Sequence[SubalgebraLattice]) -> list[list[int]]:
    """Joint colour refinement on the Hasse diagrams (no dimension or ideal data)."""
    cols = []
    for lat in lats:
        h, ch = heights(lat), coheights(lat)
        cols.append([
            (h[v], ch[v], bin(lat.down[v]).count("1"), bin(lat.up[v]).count("1"))
            for v in range(lat.size)
        ])
    cols = _relabel(cols)
    while True:
        sigs = []
        for lat, c in zip(lats, cols):
            sigs.append([
                (c[v], tuple(sorted(c[u] for u in _iter_bits(lat.down[v]))),
                 tuple(sorted(c[u] for u in _iter_bits(lat.up[v]))))
                for v in range(lat.size)
            ])
        new = _relabel(sigs)
        if len({x for c in new for x in c}) == len({x for c in cols for x in c}):
            return new
        cols = new


def _relabel(sigs):
    keys = sorted({s for c in sigs for s in c})
    index = {k: i for i, k in enumerate(keys)}
    return [[index[s] for s in c] for c in sigs]


def _search(A: SubalgebraLattice, B: SubalgebraLattice, fixed: dict[int, int] | None,
            find_all: bool, limit: int | None):
    if A.size != B.size:
        return
    if lattice_fingerprint(A) != lattice_fingerprint(B):
        return
    colA, colB = _refined_colors([A, B])
    if sorted(colA) != sorted(colB):
        return
    by_color: dict[int, list[int]] = {}
    for w in range(B.size):
        by_color.setdefault(colB[w], []).append(w)
    class_size = {c: len(ws) for c, ws in by_color.items()}
    fixed = dict(fixed or {})
    for v, w in fixed.items():
        if colA[v] != colB[w]:
            return
    order = list(fixed) + sorted(
        (v for v in range(A.size) if v not in fixed), key=lambda v: (class_size[colA[v]], v)
    )
    n = A.size
    f = [-1] * n
    used = [False] * n
    assigned: list[int] = []
    found = 0

    def consistent(v, w):
        bA, aA, bB, aB = A.below[v], A.above[v], B.below[w], B.above[w]
        for u in assigned:
            fu = f[u]
            if (bA >> u & 1) != (bB >> fu & 1) or (aA >> u & 1) != (aB >> fu & 1):
                return False
        return True

    def rec(k):
        nonlocal found
        if k == n:
            found += 1
            yield tuple(f)
            return
        v = order[k]
        cands = [fixed[v]] if v in fixed else by_color[colA[v]]
        for w in cands:
            if used[w] or not consistent(v, w):
                continue
            f[v] = w
            used[w] = True
            assigned.append(v)
            yield from rec(k + 1)
            assigned.pop()
            used[w] = False
            f[v] = -1
            if not find_all and found:
                return
            if limit is not None and found >= limit:
                return

    yield from rec(0)


def lattice_isomorphism(lat1: SubalgebraLattice, lat2: SubalgebraLattice,
                        fixed: dict[int, int] | None = None) -> LatticeMap | None:
    """A verified lattice isomorphism, or None when none exists.

    ``fixed`` prescribes images of some nodes.
    """
    for f in _search(lat1, lat2, fixed, False, 1):
        return LatticeMap(lat1, lat2, f)
    return None


def lattice_isomorphisms(lat1: SubalgebraLattice, lat2: SubalgebraLattice,
                         limit: int | None = None) -> Iterator[LatticeMap]:
    for f in _search(lat1, lat2, None, True, limit):
        yield LatticeMap(lat1, lat2, f)


def lattice_automorphisms(lat: SubalgebraLattice, max_nodes: int = DEFAULT_MAX_NODES,
                          limit: int | None = None) -> list[LatticeMap]:
    """All join/meet preserving bijections of the lattice onto itself."""
    if lat.size > max_nodes:
        raise CapExceeded(f"{lat.size} nodes exceeds the automorphism cap of {max_nodes}")
    return list(lattice_isomorphisms(lat, lat, limit))


def induced_map(lat1: SubalgebraLattice, lat2: SubalgebraLattice, g: Sequence[Sequence]) -> LatticeMap:
    """Lattice map induced by an algebra isomorphism whose matrix sends b_i to row g[i]."""
    fld: FieldSpec = lat1.algebra.field
    n = lat1.algebra.dim
    images = []
    for U in lat1.nodes:
        rows = [tuple(fld.norm(sum(u[a] * g[a][k] for a in range(n))) for k in range(n)) for u in U.basis]
        images.append(lat2.index_of(Subspace.span(fld, n, rows)))
    return LatticeMap(lat1, lat2, tuple(images))


# ---------------------------------------------------------------------------
# export


def to_dot(lat: SubalgebraLattice) -> str:
    """Hasse diagram as a DOT digraph, nodes labelled ``dim:basis-matrix``."""
    L = lat.algebra
    lines = ["digraph lattice {", "  rankdir=BT;"]
    for i, U in enumerate(lat.nodes):
        rows = ";".join(",".join(L.field.format(x) for x in r) for r in U.basis)
        lines.append(f'  n{i} [label="{U.dim}:[{rows}]"];')
    for i, j in lat.covers:
        lines.append(f"  n{i} -> n{j};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def to_document(lat: SubalgebraLattice) -> dict:
    """Structured form: nodes (dim, basis, ideal flag), covers and fingerprint."""
    fmt = lat.algebra.field.format
    fp = lattice_fingerprint(lat)
    return {
        "field": str(lat.algebra.field),
        "nodes": [
            {"index": i, "dim": U.dim, "basis": [[fmt(x) for x in r] for r in U.basis], "ideal": ideal}
            for i, (U, (_, ideal)) in enumerate(zip(lat.nodes, lat.node_meta))
        ],
        "covers": [list(c) for c in lat.covers],
        "fingerprint": {
            "nodes": fp.nodes,
            "levels": list(fp.levels),
            "degrees": [list(d) for d in fp.degrees],
            "atoms": fp.atoms,
            "coatoms": fp.coatoms,
            "distributive": fp.distributive,
            "modular": fp.modular,
        },
    }
