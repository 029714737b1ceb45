"""Lattice family constructors: incidence, cuts, superbases, tensors, minors."""

from __future__ import annotations

import random
from fractions import Fraction as F

import pytest

from conftest import k4_digraph, triangle_digraph
from zonolat import (
    InvalidInputError,
    a_n_lattice,
    cographic_lattice,
    digraph,
    enumerate_primitive_chains,
    graphic_lattice,
    incidence_matrix,
    inner_product,
    kernel_basis,
    minor,
    obtuse_superbasis_gram,
    tensor_lattice,
    voronoi_first_kind,
)
from zonolat.constructions import component_count, tensor_basis_vector


def test_incidence_single_arc():
    m = incidence_matrix(digraph(2, [(0, 1)]))
    assert m.column(0) == (-1, 1)
    assert m.tu_status == "verified"


def test_incidence_triangle_kernel_dim():
    m = incidence_matrix(triangle_digraph())
    assert len(kernel_basis(m)) == 1  # 3 - 3 + 1


def test_incidence_disjoint_arcs_trivial_kernel():
    m = incidence_matrix(digraph(4, [(0, 1), (2, 3)]))
    assert len(kernel_basis(m)) == 0  # 2 - 4 + 2


def test_self_loop_rejected():
    with pytest.raises(InvalidInputError):
        digraph(2, [(1, 1)])


def test_graphic_four_cycle_rank_one():
    d = digraph(4, [(0, 1), (1, 2), (2, 3), (3, 0)])
    lat = graphic_lattice(d)
    assert lat.rank() == 1
    chains = enumerate_primitive_chains(lat)
    assert len(chains) == 2
    assert all(set(c.coords) <= {-1, 1} for c in chains)


def test_graphic_tree_rank_zero():
    d = digraph(4, [(0, 1), (1, 2), (1, 3)])
    assert graphic_lattice(d).rank() == 0


def test_graphic_triangle_chains():
    lat = graphic_lattice(triangle_digraph())
    assert {c.coords for c in enumerate_primitive_chains(lat)} == {
        (1, 1, 1), (-1, -1, -1)
    }


def test_cographic_single_arc_is_z1():
    lat = cographic_lattice(digraph(2, [(0, 1)]))
    assert lat.m == 1 and lat.rank() == 1
    assert {c.coords for c in enumerate_primitive_chains(lat)} == {(1,), (-1,)}


def test_cographic_triangle_six_bonds():
    lat = cographic_lattice(triangle_digraph())
    assert len(enumerate_primitive_chains(lat)) == 6


def test_cographic_k4_fourteen_bonds():
    lat = cographic_lattice(k4_digraph())
    assert len(enumerate_primitive_chains(lat)) == 14
    assert lat.rank() == 3  # |V| - k


def test_cographic_rank_disconnected():
    two_triangles = digraph(6, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)])
    assert cographic_lattice(two_triangles).rank() == 4  # |V| - k = 6 - 2


def test_cographic_orthogonal_to_cycles():
    d = k4_digraph()
    cyc = graphic_lattice(d)
    cut = cographic_lattice(d)
    ones = tuple(F(1) for _ in range(cut.m))
    for u in kernel_basis(cut.matrix):
        for v in kernel_basis(cyc.matrix):
            assert inner_product(u, v, ones) == 0
    assert cut.rank() + cyc.rank() == cut.m


# ---------------------------------------------------------------------------
# Voronoi's first kind
# ---------------------------------------------------------------------------

A2_GRAM = [[1, F(-1, 2), F(-1, 2)],
           [F(-1, 2), 1, F(-1, 2)],
           [F(-1, 2), F(-1, 2), 1]]


def test_vfk_a2_gram_roundtrip():
    lattice, rows = voronoi_first_kind(obtuse_superbasis_gram(A2_GRAM))
    assert lattice.m == 3  # Delone graph C_3
    assert lattice.weights == (F(1, 2), F(1, 2), F(1, 2))
    for i in range(3):
        for j in range(3):
            assert inner_product(rows[i], rows[j], lattice.weights) == A2_GRAM[i][j]


def test_vfk_z1():
    lattice, rows = voronoi_first_kind(obtuse_superbasis_gram([[1, -1], [-1, 1]]))
    assert lattice.m == 1 and lattice.rank() == 1
    assert len(rows) == 2


def test_vfk_a2_dual_complete_delone_graph():
    gram = [[F(2, 3), F(-1, 3), F(-1, 3)],
            [F(-1, 3), F(2, 3), F(-1, 3)],
            [F(-1, 3), F(-1, 3), F(2, 3)]]
    lattice, rows = voronoi_first_kind(obtuse_superbasis_gram(gram))
    assert lattice.m == 3  # K_3 on the three superbasis vectors
    for i in range(3):
        for j in range(3):
            assert inner_product(rows[i], rows[j], lattice.weights) == gram[i][j]


def test_vfk_gram_validation_messages():
    with pytest.raises(InvalidInputError, match="sum to zero"):
        obtuse_superbasis_gram([[1, 0], [0, 1]])
    with pytest.raises(InvalidInputError, match="nonpositive"):
        obtuse_superbasis_gram([[1, 1, -2], [1, 1, -2], [-2, -2, 4]])
    with pytest.raises(InvalidInputError, match="positive definite"):
        obtuse_superbasis_gram([[0, 0], [0, 0]])
    with pytest.raises(InvalidInputError, match="symmetric"):
        obtuse_superbasis_gram([[1, -1], [0, 0]])


# ---------------------------------------------------------------------------
# A_n and tensor products
# ---------------------------------------------------------------------------


def test_an_examples():
    assert {c.coords for c in enumerate_primitive_chains(a_n_lattice(1))} == {
        (1, -1), (-1, 1)
    }
    assert len(enumerate_primitive_chains(a_n_lattice(2))) == 6
    lat3 = a_n_lattice(3)
    assert lat3.rank() == 3
    assert len(enumerate_primitive_chains(lat3)) == 12


def test_tensor_ranks():
    assert tensor_lattice(1, 1).rank() == 1
    lat21 = tensor_lattice(2, 1)
    assert lat21.rank() == 2 and lat21.m == 6
    assert tensor_lattice(2, 2).rank() == 4


def test_tensor_basis_in_kernel_and_independent():
    for m, n in [(1, 1), (2, 1), (1, 2), (2, 2), (3, 2)]:
        lat = tensor_lattice(m, n)
        vecs = [tensor_basis_vector(m, n, i, j) for i in range(m) for j in range(n)]
        for v in vecs:
            assert lat.contains(v)
        # leading coordinates are distinct, so the family is independent
        leads = [next(i for i, c in enumerate(v) if c) for v in vecs]
        assert len(set(leads)) == len(vecs) == m * n


def test_tensor_weight_length_checked():
    with pytest.raises(Exception):
        tensor_lattice(1, 1, (1, 1))


# ---------------------------------------------------------------------------
# Minors
# ---------------------------------------------------------------------------


def test_minor_identity():
    lat = graphic_lattice(triangle_digraph())
    same = minor(lat)
    assert same.matrix.entries == lat.matrix.entries
    assert same.weights == lat.weights


def test_minor_triangle_delete_and_contract():
    lat = graphic_lattice(triangle_digraph())
    assert minor(lat, delete=[0]).rank() == 0
    contracted = minor(lat, contract=[0])
    assert contracted.rank() == 1
    assert {c.coords for c in enumerate_primitive_chains(contracted)} == {
        (1, 1), (-1, -1)
    }


def test_minor_disjointness_required():
    lat = graphic_lattice(triangle_digraph())
    with pytest.raises(InvalidInputError):
        minor(lat, delete=[0], contract=[0])


def _chain_set(lat):
    return (lat.m, frozenset(c.coords for c in enumerate_primitive_chains(lat)))


def _shift(indices, removed):
    """Re-express original coordinate indices after `removed` were dropped."""
    removed = sorted(removed)
    out = []
    for i in indices:
        out.append(i - sum(1 for r in removed if r < i))
    return out


def test_deletion_composition():
    rng = random.Random(3)
    lat = cographic_lattice(k4_digraph())
    for _ in range(10):
        s1 = set(rng.sample(range(lat.m), rng.randint(0, 2)))
        rest = [i for i in range(lat.m) if i not in s1]
        s2 = set(rng.sample(rest, rng.randint(0, 2)))
        once = minor(lat, delete=sorted(s1 | s2))
        twice = minor(minor(lat, delete=sorted(s1)), delete=_shift(sorted(s2), s1))
        assert _chain_set(once) == _chain_set(twice)


def test_delete_contract_commute():
    rng = random.Random(17)
    lat = cographic_lattice(k4_digraph())
    for _ in range(10):
        s = set(rng.sample(range(lat.m), rng.randint(1, 2)))
        rest = [i for i in range(lat.m) if i not in s]
        t = set(rng.sample(rest, rng.randint(1, 2)))
        both = minor(lat, delete=sorted(s), contract=sorted(t))
        d_then_c = minor(minor(lat, delete=sorted(s)),
                         contract=_shift(sorted(t), s))
        c_then_d = minor(minor(lat, contract=sorted(t)),
                         delete=_shift(sorted(s), t))
        assert _chain_set(both) == _chain_set(d_then_c) == _chain_set(c_then_d)


def test_minor_preserves_weights():
    lat = cographic_lattice(triangle_digraph(), (F(1, 2), 1, 2))
    sub = minor(lat, delete=[1])
    assert sub.weights == (F(1, 2), F(2))


def test_component_count():
    assert component_count(4, [(0, 1), (2, 3)]) == 2
    assert component_count(3, [(0, 1), (1, 2)]) == 1
