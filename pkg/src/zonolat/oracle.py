"""Independent brute-force ground truth for every other module.

Primitive-chain enumeration by exhaustive ternary scan, Voronoi's coset
characterization of strict Voronoi vectors, enumeration CVP with facet
certification, cube-projection sampling for the Voronoi cell, and the
exhaustive totally-unimodular check.  Nothing here relies on the simplex
or on the iterative solver, so agreement between the two routes is a real
cross-check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .core import (
    IntVec,
    PrimitiveChain,
    TUMatrix,
    VERIFY_ROW_CAP,
    ZonotopalLattice,
    ghouila_houri_ok,
    inner_product,
    int_vec,
    invert_matrix,
    kernel_basis,
    primitive_chain,
    project_onto_span,
    solve_linear_system,
)
from .errors import (
    InternalInvariantError,
    InvalidInputError,
    OracleFailureError,
    SizeCapError,
)
from .mmcc import CVPInstance

#: Ternary scans are refused beyond this many coordinates (3^m candidates).
ENUMERATION_CAP = 14
#: Coefficient-box CVP enumeration is refused beyond this lattice rank.
COEFF_BOX_CAP = 8


# ---------------------------------------------------------------------------
# Primitive chain enumeration
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def _ternary_kernel_vectors(matrix: TUMatrix) -> tuple[IntVec, ...]:
    """All nonzero x in {-1,0,+1}^m with M x = 0, in lexicographic order."""
    n, m = matrix.n, matrix.m
    rows = matrix.entries
    # suffix[k][i] = sum_{j >= k} |M[i][j]|: the most a partial row sum can
    # still change, used to prune the depth-first scan
    suffix = [[0] * n for _ in range(m + 1)]
    for k in range(m - 1, -1, -1):
        for i in range(n):
            suffix[k][i] = suffix[k + 1][i] + abs(rows[i][k])
    out: list[IntVec] = []
    x = [0] * m
    sums = [0] * n

    def rec(k: int):
        if k == m:
            if any(x) and all(s == 0 for s in sums):
                out.append(tuple(x))
            return
        rem = suffix[k + 1]
        for val in (-1, 0, 1):
            x[k] = val
            ok = True
            if val:
                for i in range(n):
                    sums[i] += val * rows[i][k]
            for i in range(n):
                if abs(sums[i]) > rem[i]:
                    ok = False
                    break
            if ok:
                rec(k + 1)
            if val:
                for i in range(n):
                    sums[i] -= val * rows[i][k]
        x[k] = 0

    rec(0)
    return tuple(out)


@lru_cache(maxsize=None)
def _primitive_chain_coords(matrix: TUMatrix) -> tuple[IntVec, ...]:
    candidates = _ternary_kernel_vectors(matrix)
    masks = []
    for vec in candidates:
        mask = 0
        for i, c in enumerate(vec):
            if c:
                mask |= 1 << i
        masks.append(mask)
    keep = []
    for i, (vec, mask) in enumerate(zip(candidates, masks)):
        minimal = True
        for other in masks:
            if other != mask and other & mask == other:
                minimal = False
                break
        if minimal:
            keep.append(vec)
    return tuple(keep)


def enumerate_primitive_chains(lattice: ZonotopalLattice,
                               cap: int = ENUMERATION_CAP) -> list[PrimitiveChain]:
    """All primitive chains (= strict Voronoi vectors) by exhaustive scan.

    Output is sorted lexicographically and closed under negation; supports
    are pairwise incomparable by construction.
    """
    if lattice.m > cap:
        raise SizeCapError(
            f"ternary enumeration capped at {cap} coordinates (got {lattice.m})"
        )
    return [primitive_chain(c, lattice) for c in _primitive_chain_coords(lattice.matrix)]


def voronoi_relevant_count(lattice: ZonotopalLattice) -> int:
    """Number of strict Voronoi vectors; a function of the matrix alone,
    independent of the weights."""
    return len(enumerate_primitive_chains(lattice))


# ---------------------------------------------------------------------------
# Voronoi cell description and membership
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class VoronoiCellDescription:
    """Facet data of the Voronoi cell: one inequality per relevant vector."""

    lattice: ZonotopalLattice
    relevant_vectors: tuple[PrimitiveChain, ...]
    facet_bounds: tuple[Fraction, ...]

    def contains(self, x: Sequence) -> bool:
        """Exact membership: |(x, v)_g| <= (v, v)_g / 2 for every facet."""
        g = self.lattice.weights
        for chain, bound in zip(self.relevant_vectors, self.facet_bounds):
            val = Fraction(0)
            for i in chain.support:
                val += g[i] * chain.coords[i] * Fraction(x[i])
            if val > bound or -val > bound:
                return False
        return True


def voronoi_cell(lattice: ZonotopalLattice,
                 cap: int = ENUMERATION_CAP) -> VoronoiCellDescription:
    chains = enumerate_primitive_chains(lattice, cap=cap)
    bounds = tuple(lattice.norm_sq(c.coords) / 2 for c in chains)
    return VoronoiCellDescription(
        lattice=lattice, relevant_vectors=tuple(chains), facet_bounds=bounds
    )


# ---------------------------------------------------------------------------
# Voronoi's coset characterization
# ---------------------------------------------------------------------------


def is_strict_voronoi_by_coset(v: Sequence, lattice: ZonotopalLattice) -> bool:
    """True iff +-v are the unique shortest vectors of the coset v + 2L.

    The enumeration box is certified exactly: writing coset members as
    v + 2 B a for the kernel basis B, the norm is a positive definite
    quadratic q(a), and any a with q(a) <= (v, v)_g satisfies
    (a_i - a*_i)^2 <= (q(v) - q_min) (H^{-1})_ii for H the quadratic's
    Hessian and a* its rational minimizer, so scanning those integer
    ranges sees every candidate at least as short as v.
    """
    vv = int_vec(v)
    if not any(vv):
        return False
    if not lattice.contains(vv):
        raise InvalidInputError(f"{vv} is not a lattice member")
    basis = kernel_basis(lattice.matrix)
    r = len(basis)
    if r == 0:
        return False
    g = lattice.weights
    target = inner_product(vv, vv, g)
    doubled = [tuple(2 * e for e in b) for b in basis]
    hess = [[inner_product(doubled[i], doubled[j], g) for j in range(r)]
            for i in range(r)]
    lin = [inner_product(vv, doubled[i], g) for i in range(r)]
    center = solve_linear_system(hess, [-w for w in lin])
    qmin = target + sum(w * a for w, a in zip(lin, center))
    hinv = invert_matrix(hess)
    spread = target - qmin
    ranges = []
    for i in range(r):
        rho = spread * hinv[i][i]
        lo = center[i]
        ks = []
        k = math.floor(lo)
        while (k - lo) * (k - lo) <= rho:
            ks.append(k)
            k -= 1
        k = math.floor(lo) + 1
        while (k - lo) * (k - lo) <= rho:
            ks.append(k)
            k += 1
        ranges.append(sorted(ks))
    neg = tuple(-c for c in vv)
    for alpha in _product(ranges):
        u = list(vv)
        for ai, b in zip(alpha, doubled):
            if ai:
                for idx in range(len(u)):
                    u[idx] += ai * b[idx]
        norm = inner_product(u, u, g)
        if norm <= target and tuple(u) not in (tuple(vv), neg):
            return False
    return True


def _product(ranges: list[list[int]]):
    if not ranges:
        yield ()
        return
    for head in ranges[0]:
        for tail in _product(ranges[1:]):
            yield (head,) + tail


# ---------------------------------------------------------------------------
# Brute-force CVP and certification
# ---------------------------------------------------------------------------


def certify_closest(u: Sequence, instance: CVPInstance,
                    cap: int = ENUMERATION_CAP) -> bool:
    """u is closest iff the residual t - u lies in the Voronoi cell."""
    uu = int_vec(u)
    residual = [t - c for t, c in zip(instance.target, uu)]
    return voronoi_cell(instance.lattice, cap=cap).contains(residual)


def brute_force_cvp(instance: CVPInstance, radius: int = 1,
                    max_radius: int = 8) -> IntVec:
    """Closest lattice vector by coefficient-box enumeration.

    Scans integer coefficient vectors within `radius` of the rounded exact
    least-squares coefficients, keeps the g-closest point (ties go to the
    lexicographically smallest vector), and insists the winner passes the
    facet certificate; the box is doubled on certification failure.
    """
    lattice = instance.lattice
    basis = kernel_basis(lattice.matrix)
    r = len(basis)
    if r > COEFF_BOX_CAP:
        raise SizeCapError(
            f"coefficient enumeration capped at rank {COEFF_BOX_CAP} (got {r})"
        )
    if r == 0:
        zero = (0,) * lattice.m
        if not certify_closest(zero, instance):
            raise OracleFailureError("origin failed certification in a rank-0 lattice")
        return zero
    g = lattice.weights
    gram = [[inner_product(basis[i], basis[j], g) for j in range(r)] for i in range(r)]
    rhs = [inner_product(basis[i], instance.target, g) for i in range(r)]
    alpha_star = solve_linear_system(gram, rhs)
    # the target is in the span, so the least-squares coefficients are exact
    recon = [Fraction(0)] * lattice.m
    for a, b in zip(alpha_star, basis):
        for idx in range(lattice.m):
            recon[idx] += a * b[idx]
    if tuple(recon) != instance.target:
        raise InternalInvariantError("target left the lattice span")
    centers = [math.floor(a + Fraction(1, 2)) for a in alpha_star]
    while radius <= max_radius:
        best: tuple[Fraction, IntVec] | None = None
        for alpha in _product([[c + d for d in range(-radius, radius + 1)]
                               for c in centers]):
            u = [0] * lattice.m
            for ai, b in zip(alpha, basis):
                if ai:
                    for idx in range(lattice.m):
                        u[idx] += ai * b[idx]
            cand = (instance.distance_sq(u), tuple(u))
            if best is None or cand < best:
                best = cand
        assert best is not None
        if certify_closest(best[1], instance):
            return best[1]
        radius *= 2
    raise OracleFailureError(
        f"no certified closest vector within coefficient radius {max_radius}"
    )


# ---------------------------------------------------------------------------
# Projection theorem sampling
# ---------------------------------------------------------------------------

_MASK64 = (1 << 64) - 1


def _splitmix64(state: int) -> tuple[int, int]:
    state = (state + 0x9E3779B97F4A7C15) & _MASK64
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31), state


def dyadic_cube_samples(m: int, samples: int, seed: int, bits: int = 16):
    """Deterministic dyadic points of [-1/2, 1/2)^m from a splitmix64 stream."""
    state = seed & _MASK64
    denom = 1 << bits
    half = Fraction(1, 2)
    for _ in range(samples):
        point = []
        for _ in range(m):
            z, state = _splitmix64(state)
            point.append(Fraction(z & (denom - 1), denom) - half)
        yield tuple(point)


def check_projection_theorem(lattice: ZonotopalLattice, samples: int = 1000,
                             seed: int = 0, cube_scale: int = 1,
                             cap: int = ENUMERATION_CAP) -> bool:
    """Sample the cube [-scale/2, scale/2)^m and test that every projection
    lands in the Voronoi cell.  At scale 1 this is a theorem; larger scales
    serve as a negative control."""
    cell = voronoi_cell(lattice, cap=cap)
    for point in dyadic_cube_samples(lattice.m, samples, seed):
        scaled = [cube_scale * x for x in point]
        if not cell.contains(project_onto_span(scaled, lattice)):
            return False
    return True


# ---------------------------------------------------------------------------
# Totally unimodular verification
# ---------------------------------------------------------------------------


def check_tu(matrix: TUMatrix | Sequence[Sequence[int]],
             cap: int = VERIFY_ROW_CAP) -> bool:
    """Exhaustive Ghouila-Houri verdict; refuses above the row cap."""
    rows = matrix.entries if isinstance(matrix, TUMatrix) else tuple(
        tuple(int(e) for e in row) for row in matrix
    )
    if len(rows) > cap:
        raise SizeCapError(
            f"exhaustive TU verification capped at {cap} rows (got {len(rows)})"
        )
    if any(e not in (-1, 0, 1) for row in rows for e in row):
        return False
    return ghouila_houri_ok(rows)
