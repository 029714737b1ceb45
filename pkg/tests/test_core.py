"""Core arithmetic, kernel bases, projection, conformal decomposition."""

from __future__ import annotations

import itertools
import random
from fractions import Fraction as F

import pytest

from conftest import a2, corpus_small, triangle_digraph
from zonolat import (
    DimensionError,
    InvalidInputError,
    SizeCapError,
    chain,
    conformal_decompose,
    enumerate_primitive_chains,
    incidence_matrix,
    inner_product,
    kernel_basis,
    matrix_rank,
    project_onto_span,
    support,
    tu_matrix,
)
from zonolat.core import ghouila_houri_ok


def test_inner_product_examples():
    assert inner_product((1, 0, -1), (1, 0, -1), (1, 1, 1)) == 2
    assert inner_product((1, -1), (1, 1), (1, 3)) == -2
    assert inner_product((0, 0, 0), (F(2, 3), 5, -1), (1, 7, F(1, 2))) == 0


def test_inner_product_dimension_error():
    with pytest.raises(DimensionError):
        inner_product((1, 0), (1, 0, 1), (1, 1, 1))


def test_inner_product_bilinear_symmetric_positive():
    rng = random.Random(11)
    for _ in range(50):
        m = rng.randint(1, 6)
        g = [F(rng.randint(1, 8), rng.randint(1, 4)) for _ in range(m)]
        x = [F(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(m)]
        y = [F(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(m)]
        z = [F(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(m)]
        a = F(rng.randint(-4, 4), rng.randint(1, 3))
        assert inner_product(x, y, g) == inner_product(y, x, g)
        lhs = inner_product([a * xi + zi for xi, zi in zip(x, z)], y, g)
        assert lhs == a * inner_product(x, y, g) + inner_product(z, y, g)
        if any(x):
            assert inner_product(x, x, g) > 0


def test_support_examples():
    assert support((1, 0, -1)) == {0, 2}
    assert support((0, 0, 0)) == frozenset()
    assert support((2, -1, -1)) == {0, 1, 2}


def test_kernel_basis_triangle():
    m = incidence_matrix(triangle_digraph())
    basis = kernel_basis(m)
    assert len(basis) == 1  # |A| - |V| + k = 3 - 3 + 1
    assert basis[0] in ((1, 1, 1), (-1, -1, -1))


def test_kernel_basis_identity_empty():
    m = tu_matrix([[1, 0], [0, 1]])
    assert kernel_basis(m) == ()
    assert matrix_rank(m) == 2


def test_kernel_basis_sum_zero_integral_span():
    m = tu_matrix([[1, 1, 1]])
    basis = kernel_basis(m)
    assert len(basis) == 2
    for b in basis:
        assert sum(b) == 0
    # both difference vectors must be integer combinations of the basis
    for target in ((1, -1, 0), (0, 1, -1)):
        found = False
        for a0 in range(-3, 4):
            for a1 in range(-3, 4):
                v = tuple(a0 * basis[0][i] + a1 * basis[1][i] for i in range(3))
                if v == target:
                    found = True
        assert found, target


def test_kernel_vectors_satisfy_mx_zero():
    for lat in corpus_small():
        for b in kernel_basis(lat.matrix):
            assert all(s == 0 for s in lat.matrix.apply(b))
        assert len(kernel_basis(lat.matrix)) == lat.m - matrix_rank(lat.matrix)


def test_project_examples():
    lat = a2()
    assert project_onto_span((1, 1, 1), lat) == (0, 0, 0)

    m = tu_matrix([[1, 1]])
    from zonolat import ZonotopalLattice

    lat2 = ZonotopalLattice(matrix=m, weights=(1, 3))
    assert project_onto_span((1, 0), lat2) == (F(1, 4), F(-1, 4))

    v = (2, -1, -1)
    assert project_onto_span(v, lat) == v


def test_project_idempotent_and_orthogonal():
    rng = random.Random(5)
    for lat in corpus_small():
        for _ in range(5):
            t = [F(rng.randint(-20, 20), rng.randint(1, 8)) for _ in range(lat.m)]
            p = project_onto_span(t, lat)
            assert project_onto_span(p, lat) == p
            assert all(s == 0 for s in lat.matrix.apply(p))
            residual = [a - b for a, b in zip(t, p)]
            for b in kernel_basis(lat.matrix):
                assert inner_product(residual, b, lat.weights) == 0


def test_project_zero_kernel_returns_zero():
    from zonolat import ZonotopalLattice

    lat = ZonotopalLattice(matrix=tu_matrix([[1, 0], [0, 1]]), weights=(1, 1))
    assert project_onto_span((F(5, 7), -3), lat) == (0, 0)


# ---------------------------------------------------------------------------
# Conformal decomposition
# ---------------------------------------------------------------------------


def _conformal_brute_force(v, lattice):
    """All multisets of primitive chains that sum to v sign-compatibly."""
    chains = [c.coords for c in enumerate_primitive_chains(lattice)]
    compatible = [
        c for c in chains
        if all(ci * vi >= 0 for ci, vi in zip(c, v))
        and all(vi != 0 for ci, vi in zip(c, v) if ci != 0)
    ]
    total = sum(abs(x) for x in v)
    results = []
    for s in range(0, total + 1):
        for combo in itertools.combinations_with_replacement(compatible, s):
            if all(sum(c[i] for c in combo) == v[i] for i in range(len(v))):
                results.append(sorted(combo))
    return results


def test_conformal_examples():
    lat = a2()
    assert conformal_decompose((0, 0, 0), lat) == []
    only = conformal_decompose((1, 0, -1), lat)
    assert [c.coords for c in only] == [(1, 0, -1)]
    parts = sorted(c.coords for c in conformal_decompose((2, -1, -1), lat))
    assert parts == [(1, -1, 0), (1, 0, -1)]
    assert parts in _conformal_brute_force((2, -1, -1), lat)


def test_conformal_properties_random():
    rng = random.Random(23)
    for lat in corpus_small():
        basis = kernel_basis(lat.matrix)
        chain_set = {c.coords for c in enumerate_primitive_chains(lat)}
        for _ in range(6):
            v = [0] * lat.m
            for b in basis:
                a = rng.randint(-2, 2)
                for i in range(lat.m):
                    v[i] += a * b[i]
            parts = conformal_decompose(v, lat)
            assert (len(parts) == 0) == (not any(v))
            total = [0] * lat.m
            for p in parts:
                assert p.coords in chain_set
                assert all(c * vi >= 0 for c, vi in zip(p.coords, v))
                for q in parts:
                    assert all(a * b >= 0 for a, b in zip(p.coords, q.coords))
                for i in range(lat.m):
                    total[i] += p.coords[i]
            assert tuple(total) == tuple(v)
            assert len(parts) <= sum(abs(x) for x in v)


def test_conformal_rejects_non_member():
    with pytest.raises(InvalidInputError):
        conformal_decompose((1, 0, 0), a2())


# ---------------------------------------------------------------------------
# TU matrices
# ---------------------------------------------------------------------------


def test_tu_matrix_entry_validation():
    with pytest.raises(InvalidInputError):
        tu_matrix([[2, 0]], mode="assert")


def test_tu_matrix_verify_rejects_bad_matrix():
    with pytest.raises(InvalidInputError, match="not totally unimodular"):
        tu_matrix([[1, 1], [-1, 1]], mode="verify")


def test_tu_matrix_assert_mode_keeps_status():
    m = tu_matrix([[1, 1], [-1, 1]], mode="assert")
    assert m.tu_status == "asserted"


def test_tu_matrix_verify_cap():
    rows = [[0] * 3 for _ in range(25)]
    with pytest.raises(SizeCapError):
        tu_matrix(rows, mode="verify")
    assert tu_matrix(rows, mode="auto").tu_status == "asserted"


def _det(rows):
    n = len(rows)
    if n == 0:
        return 1
    a = [[F(x) for x in r] for r in rows]
    det = F(1)
    for c in range(n):
        p = next((r for r in range(c, n) if a[r][c] != 0), None)
        if p is None:
            return F(0)
        if p != c:
            a[c], a[p] = a[p], a[c]
            det = -det
        det *= a[c][c]
        for r in range(c + 1, n):
            if a[r][c]:
                f = a[r][c] / a[c][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return det


def _tu_by_minors(rows):
    """Independent oracle: every square submatrix has determinant in {-1,0,1}."""
    n, m = len(rows), len(rows[0])
    for k in range(1, min(n, m) + 1):
        for ri in itertools.combinations(range(n), k):
            for ci in itertools.combinations(range(m), k):
                sub = [[rows[r][c] for c in ci] for r in ri]
                if _det(sub) not in (-1, 0, 1):
                    return False
    return True


def test_ghouila_houri_matches_minor_oracle():
    rng = random.Random(99)
    for _ in range(60):
        n = rng.randint(1, 4)
        m = rng.randint(1, 4)
        rows = [[rng.choice([-1, 0, 1]) for _ in range(m)] for _ in range(n)]
        assert ghouila_houri_ok(rows) == _tu_by_minors(rows), rows


def test_chain_membership_checked():
    lat = a2()
    assert chain((1, 0, -1), lat).coords == (1, 0, -1)
    with pytest.raises(InvalidInputError):
        chain((1, 0, 0), lat)
