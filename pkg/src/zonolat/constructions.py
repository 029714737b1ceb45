"""Constructors for the standard zonotopal lattice families.

Graphic lattices (integral circulations of a digraph), cographic lattices
(integral cuts, represented through a fundamental-cycle matrix), lattices
of Voronoi's first kind from an obtuse-superbasis Gram matrix, the root
lattices A_n, tensor products A_m (x) A_n as complete bipartite graphic
lattices, and deletion/contraction minors.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .core import (
    FracVec,
    IntVec,
    TUMatrix,
    ZonotopalLattice,
    frac_vec,
    inner_product,
    tu_matrix,
)
from .errors import (
    DimensionError,
    InternalInvariantError,
    InvalidInputError,
)


@dataclass(frozen=True)
class Digraph:
    """Directed multigraph without self-loops; vertices are 0..vertex_count-1."""

    vertex_count: int
    arcs: tuple[tuple[int, int], ...]
    arc_weights: FracVec | None = None

    def __post_init__(self):
        for tail, head in self.arcs:
            if tail == head:
                raise InvalidInputError(f"self-loop at vertex {tail} is not allowed")
            if not (0 <= tail < self.vertex_count and 0 <= head < self.vertex_count):
                raise InvalidInputError(f"arc ({tail}, {head}) leaves the vertex range")
        if self.arc_weights is not None:
            object.__setattr__(self, "arc_weights", frac_vec(self.arc_weights))
            if len(self.arc_weights) != len(self.arcs):
                raise DimensionError("arc weight count does not match the arc count")
            if any(w <= 0 for w in self.arc_weights):
                raise InvalidInputError("arc weights must be positive")


def digraph(vertex_count: int, arcs: Sequence[tuple[int, int]],
            arc_weights: Sequence | None = None) -> Digraph:
    return Digraph(
        vertex_count=vertex_count,
        arcs=tuple((int(t), int(h)) for t, h in arcs),
        arc_weights=None if arc_weights is None else frac_vec(arc_weights),
    )


def _default_weights(d: Digraph) -> FracVec:
    if d.arc_weights is not None:
        return d.arc_weights
    return tuple(Fraction(1) for _ in d.arcs)


def component_count(vertex_count: int, arcs: Sequence[tuple[int, int]]) -> int:
    parent = list(range(vertex_count))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for t, h in arcs:
        rt, rh = find(t), find(h)
        if rt != rh:
            parent[rt] = rh
    return len({find(v) for v in range(vertex_count)})


def incidence_matrix(d: Digraph) -> TUMatrix:
    """Vertex-arc incidence matrix: -1 at the tail, +1 at the head.

    Verified totally unimodular up to the exhaustive cap, asserted beyond.
    """
    rows = [[0] * len(d.arcs) for _ in range(d.vertex_count)]
    for j, (tail, head) in enumerate(d.arcs):
        rows[tail][j] = -1
        rows[head][j] = 1
    return tu_matrix(rows, mode="auto", width=len(d.arcs))


def graphic_lattice(d: Digraph, g: Sequence | None = None) -> ZonotopalLattice:
    """Lattice of integral circulations of d; primitive chains are the
    signed simple cycles of the underlying graph."""
    weights = frac_vec(g) if g is not None else _default_weights(d)
    if len(weights) != len(d.arcs):
        raise DimensionError("weight length does not match the arc count")
    return ZonotopalLattice(matrix=incidence_matrix(d), weights=weights)


def _dfs_forest(d: Digraph) -> list[int]:
    """Spanning forest arc indices, chosen by lowest-index depth-first search."""
    adj: list[list[tuple[int, int]]] = [[] for _ in range(d.vertex_count)]
    for idx, (tail, head) in enumerate(d.arcs):
        adj[tail].append((idx, head))
        adj[head].append((idx, tail))
    for lst in adj:
        lst.sort()
    visited = [False] * d.vertex_count
    tree: list[int] = []

    def visit(v: int):
        visited[v] = True
        for idx, w in adj[v]:
            if not visited[w]:
                tree.append(idx)
                visit(w)

    for root in range(d.vertex_count):
        if not visited[root]:
            visit(root)
    return sorted(tree)


def _tree_path(d: Digraph, tree: list[int], start: int, goal: int
               ) -> list[tuple[int, int]]:
    """Forest path as (arc index, +-1 traversal direction) pairs."""
    adj: list[list[tuple[int, int, int]]] = [[] for _ in range(d.vertex_count)]
    for idx in tree:
        tail, head = d.arcs[idx]
        adj[tail].append((idx, head, 1))
        adj[head].append((idx, tail, -1))
    for lst in adj:
        lst.sort()
    prev: dict[int, tuple[int, int, int]] = {}
    stack = [start]
    seen = {start}
    while stack:
        v = stack.pop()
        if v == goal:
            break
        for idx, w, sgn in adj[v]:
            if w not in seen:
                seen.add(w)
                prev[w] = (v, idx, sgn)
                stack.append(w)
    if goal not in seen:
        raise InternalInvariantError("forest path lookup failed")
    path = []
    v = goal
    while v != start:
        pv, idx, sgn = prev[v]
        path.append((idx, sgn))
        v = pv
    path.reverse()
    return path


def cographic_lattice(d: Digraph, g: Sequence | None = None) -> ZonotopalLattice:
    """Lattice of integral cuts of d, as ker C for the fundamental-cycle
    matrix C of a deterministic spanning forest.

    C has one row per non-forest arc (a network matrix, hence totally
    unimodular) and its kernel is the orthogonal complement of the cycle
    space; primitive chains are the signed bonds of d.
    """
    weights = frac_vec(g) if g is not None else _default_weights(d)
    if len(weights) != len(d.arcs):
        raise DimensionError("weight length does not match the arc count")
    m = len(d.arcs)
    tree = _dfs_forest(d)
    tree_set = set(tree)
    rows = []
    inc = incidence_matrix(d)
    for idx, (tail, head) in enumerate(d.arcs):
        if idx in tree_set:
            continue
        row = [0] * m
        row[idx] = 1
        for aidx, sgn in _tree_path(d, tree, head, tail):
            row[aidx] = sgn
        if any(s != 0 for s in inc.apply(row)):
            raise InternalInvariantError("fundamental cycle is not a circulation")
        rows.append(row)
    matrix = tu_matrix(rows, mode="auto", width=m)
    return ZonotopalLattice(matrix=matrix, weights=weights)


# ---------------------------------------------------------------------------
# Lattices of Voronoi's first kind
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ObtuseSuperbasisGram:
    """Gram matrix of n+1 superbasis vectors: rows sum to zero, off-diagonal
    entries are nonpositive, and the minor on rows/columns 1..n is positive
    definite."""

    gram: tuple[FracVec, ...]

    @property
    def size(self) -> int:
        return len(self.gram)


def obtuse_superbasis_gram(rows: Sequence[Sequence]) -> ObtuseSuperbasisGram:
    gram = tuple(frac_vec(r) for r in rows)
    k = len(gram)
    if k < 2 or any(len(r) != k for r in gram):
        raise InvalidInputError("Gram matrix must be square of size at least 2")
    for i in range(k):
        for j in range(k):
            if gram[i][j] != gram[j][i]:
                raise InvalidInputError("Gram matrix must be symmetric")
    for i in range(k):
        if sum(gram[i]) != 0:
            raise InvalidInputError(
                "superbasis condition violated: rows must sum to zero"
            )
    for i in range(k):
        for j in range(k):
            if i != j and gram[i][j] > 0:
                raise InvalidInputError(
                    "superbasis condition violated: off-diagonal entries "
                    "must be nonpositive"
                )
    minor = [list(gram[i][1:]) for i in range(1, k)]
    if not _positive_definite(minor):
        raise InvalidInputError(
            "superbasis condition violated: basis minor is not positive definite"
        )
    return ObtuseSuperbasisGram(gram=gram)


def _positive_definite(rows: list[list[Fraction]]) -> bool:
    """Sylvester criterion with exact leading principal minors."""
    n = len(rows)
    for k in range(1, n + 1):
        if _determinant([row[:k] for row in rows[:k]]) <= 0:
            return False
    return True


def _determinant(rows: list[list[Fraction]]) -> Fraction:
    n = len(rows)
    a = [[Fraction(x) for x in row] for row in rows]
    det = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            det = -det
        det *= a[col][col]
        inv = 1 / a[col][col]
        for r in range(col + 1, n):
            if a[r][col]:
                f = a[r][col] * inv
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return det


def voronoi_first_kind(gram: ObtuseSuperbasisGram
                       ) -> tuple[ZonotopalLattice, tuple[IntVec, ...]]:
    """Cographic realization of the lattice described by an obtuse-superbasis
    Gram matrix.

    The Delone graph gets an arc i -> j for every i < j with G_ij < 0,
    weighted by -G_ij; the rows of its incidence matrix form a superbasis of
    the cut lattice whose Gram matrix under ( , )_g reproduces G exactly.
    """
    g = gram.gram
    k = gram.size
    arcs = []
    weights = []
    for i in range(k):
        for j in range(i + 1, k):
            if g[i][j] < 0:
                arcs.append((i, j))
                weights.append(-g[i][j])
    if component_count(k, arcs) != 1:
        raise InternalInvariantError(
            "Delone graph of a valid obtuse superbasis must be connected"
        )
    d = digraph(k, arcs, arc_weights=weights)
    lattice = cographic_lattice(d)
    inc = incidence_matrix(d)
    superbasis = tuple(inc.entries)
    for row in superbasis:
        if not lattice.contains(row):
            raise InternalInvariantError("superbasis row is not in the cut lattice")
    for i in range(k):
        for j in range(k):
            got = inner_product(superbasis[i], superbasis[j], lattice.weights)
            if got != g[i][j]:
                raise InternalInvariantError(
                    f"image Gram mismatch at ({i}, {j}): {got} != {g[i][j]}"
                )
    return lattice, superbasis


# ---------------------------------------------------------------------------
# Root lattices A_n and their tensor products
# ---------------------------------------------------------------------------


def a_n_lattice(n: int, g: Sequence | None = None) -> ZonotopalLattice:
    """A_n = sum-zero integer vectors in Z^{n+1}; one all-ones constraint row."""
    if n < 1:
        raise InvalidInputError("n must be at least 1")
    weights = frac_vec(g) if g is not None else (Fraction(1),) * (n + 1)
    matrix = tu_matrix([[1] * (n + 1)], mode="verify")
    return ZonotopalLattice(matrix=matrix, weights=weights)


def tensor_basis_vector(m: int, n: int, i: int, j: int) -> IntVec:
    """The (i, j) product basis vector on the (m+1)(n+1) arc coordinates:
    +1 at (i, j) and (i+1, j+1), -1 at (i, j+1) and (i+1, j)."""
    vec = [0] * ((m + 1) * (n + 1))
    w = n + 1
    vec[i * w + j] = 1
    vec[i * w + j + 1] = -1
    vec[(i + 1) * w + j] = -1
    vec[(i + 1) * w + j + 1] = 1
    return tuple(vec)


def tensor_lattice(m: int, n: int, g: Sequence | None = None) -> ZonotopalLattice:
    """A_m (x) A_n as the graphic lattice of K_{m+1,n+1}.

    Arc (i, j) runs from left vertex i to right vertex j for all i, j; under
    this uniform orientation every product basis vector is a circulation,
    which is asserted at build time.  The rank is m * n.
    """
    if m < 1 or n < 1:
        raise InvalidInputError("m and n must be at least 1")
    arcs = []
    for i in range(m + 1):
        for j in range(n + 1):
            arcs.append((i, m + 1 + j))
    d = digraph(m + n + 2, arcs)
    weights = frac_vec(g) if g is not None else (Fraction(1),) * len(arcs)
    lattice = graphic_lattice(d, weights)
    for i in range(m):
        for j in range(n):
            if not lattice.contains(tensor_basis_vector(m, n, i, j)):
                raise InternalInvariantError(
                    f"product basis vector ({i}, {j}) is not a circulation"
                )
    if lattice.rank() != m * n:
        raise InternalInvariantError(
            f"tensor lattice rank {lattice.rank()} != {m * n}"
        )
    return lattice


# ---------------------------------------------------------------------------
# Minors
# ---------------------------------------------------------------------------


def minor(lattice: ZonotopalLattice, delete: Sequence[int] = (),
          contract: Sequence[int] = ()) -> ZonotopalLattice:
    """Deletion and contraction of coordinate sets (disjoint, 0-based).

    Deletion drops the columns; contraction pivots each column to a single
    +-1 entry (total unimodularity is preserved by pivoting) and removes
    the pivot row together with the column.  A coordinate whose column is
    identically zero is free, so contraction simply drops it.
    """
    dset = set(int(i) for i in delete)
    cset = set(int(i) for i in contract)
    if dset & cset:
        raise InvalidInputError("deletion and contraction sets must be disjoint")
    m = lattice.m
    for i in dset | cset:
        if not 0 <= i < m:
            raise InvalidInputError(f"coordinate {i} out of range")
    alive = [j for j in range(m) if j not in dset]
    rows = [[row[j] for j in alive] for row in lattice.matrix.entries]
    for target in sorted(cset, reverse=True):
        p = alive.index(target)
        prow = next((r for r in range(len(rows)) if rows[r][p] != 0), None)
        if prow is None:
            for row in rows:
                del row[p]
            del alive[p]
            continue
        s = rows[prow][p]
        for r in range(len(rows)):
            if r != prow and rows[r][p]:
                f = rows[r][p] * s
                rows[r] = [a - f * b for a, b in zip(rows[r], rows[prow])]
        del rows[prow]
        for row in rows:
            del row[p]
        del alive[p]
    rows = [row for row in rows if any(row)]
    matrix = tu_matrix(rows, mode="auto", width=len(alive))
    weights = tuple(lattice.weights[j] for j in alive)
    return ZonotopalLattice(matrix=matrix, weights=weights)
