from functools import reduce
from itertools import combinations
from math import gcd

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy import Matrix

from shabrauer.algebra.linalg import (
    AbelianGroupStructure,
    IntMatrix,
    LatticeBasis,
    Subquotient,
    canonical_coordinates,
    cokernel_structure,
    hom_kernel,
    kernel_basis,
    same_subgroup,
    smith_normal_form,
    solve_integer,
)
from shabrauer.errors import DimensionMismatch

matrices = st.integers(1, 4).flatmap(
    lambda cols: st.lists(st.lists(st.integers(-9, 9), min_size=cols, max_size=cols), min_size=1, max_size=4)
)
wide_matrices = st.integers(1, 8).flatmap(
    lambda cols: st.lists(st.lists(st.integers(-20, 20), min_size=cols, max_size=cols), min_size=1, max_size=8)
)


def _assert_smith_decomposition(rows):
    M = IntMatrix.from_rows(rows)
    U, D, V = smith_normal_form(M)
    assert U @ M @ V == D
    assert abs(Matrix(U.to_rows()).det()) == 1
    assert abs(Matrix(V.to_rows()).det()) == 1
    diagonal = [D[i, i] for i in range(min(D.rows, D.cols))]
    assert all(d >= 0 for d in diagonal)
    for a, b in zip(diagonal, diagonal[1:]):
        assert (b == 0) if a == 0 else (b % a == 0)
    off_diagonal = [D[i, j] for i in range(D.rows) for j in range(D.cols) if i != j]
    assert not any(off_diagonal)


@given(matrices)
@settings(max_examples=60, deadline=None)
def test_smith_normal_form_property(rows):
    """
    D = U·M·V with unimodular U, V and a divisibility chain on the diagonal.
    """
    _assert_smith_decomposition(rows)


@given(wide_matrices)
@settings(max_examples=30, deadline=None)
def test_smith_normal_form_wide_entries(rows):
    _assert_smith_decomposition(rows)


@given(st.lists(st.lists(st.integers(-7, 7), min_size=3, max_size=3), min_size=3, max_size=3))
@settings(max_examples=60, deadline=None)
def test_cokernel_order_matches_sympy_determinant(rows):
    """
    For a nonsingular square matrix the cokernel has order |det|.
    """
    det = Matrix(rows).det()
    structure = cokernel_structure(IntMatrix.from_rows(rows))
    if det == 0:
        assert structure.free_rank > 0
    else:
        assert structure.order == abs(det)
    assert IntMatrix.from_rows(rows).determinant() == det


def test_cokernel_structure_examples():
    assert cokernel_structure(IntMatrix.diagonal([2, 3])) == AbelianGroupStructure(0, (6,))
    assert cokernel_structure(IntMatrix.diagonal([4, 6])) == AbelianGroupStructure(0, (2, 12))
    assert cokernel_structure(IntMatrix.zeros(2, 0)) == AbelianGroupStructure(2)
    assert cokernel_structure(IntMatrix.from_rows([[2, 4], [4, 8]])) == AbelianGroupStructure(1, (2,))


def test_structure_invariants():
    with pytest.raises(ValueError):
        AbelianGroupStructure(0, (4, 6))
    with pytest.raises(ValueError):
        AbelianGroupStructure(0, (1,))
    assert AbelianGroupStructure.from_cyclic_orders([2, 3]) == AbelianGroupStructure(0, (6,))
    assert AbelianGroupStructure.from_cyclic_orders([0, 2, 1]) == AbelianGroupStructure(1, (2,))
    structure = AbelianGroupStructure(1, (2, 4))
    assert structure.moduli == (2, 4, 0)
    assert structure.order is None
    assert str(structure) == "Z x Z/2 x Z/4"
    assert str(AbelianGroupStructure.zero()) == "0"
    assert AbelianGroupStructure.from_dict(structure.to_dict()) == structure


def test_canonical_coordinates_invert():
    R = IntMatrix.from_rows([[2, 0], [4, 6], [0, 0]])
    structure, P, Q = canonical_coordinates(R)
    assert structure == AbelianGroupStructure(1, (2, 6))
    assert P @ Q == IntMatrix.identity(structure.rank)


def test_solve_integer():
    A = IntMatrix.from_rows([[2, 0], [0, 3]])
    assert solve_integer(A, (4, 9)) == (2, 3)
    assert solve_integer(A, (1, 0)) is None
    B = IntMatrix.from_rows([[1, 1]])
    x = solve_integer(B, (5,))
    assert B @ x == (5,)
    with pytest.raises(DimensionMismatch):
        solve_integer(A, (1,))


def test_kernel_basis():
    A = IntMatrix.from_rows([[1, 1, 0], [0, 0, 0]])
    K = kernel_basis(A)
    assert K.shape == (3, 2)
    assert (A @ K).is_zero()


def test_lattice_membership():
    lattice = LatticeBasis([{0: 2}, {1: 3}, {0: 4, 1: 3}], 2)
    assert lattice.rank == 2
    assert lattice.contains({0: 4, 1: 3})
    assert not lattice.contains({0: 1})
    coords = lattice.coordinates({0: 6, 1: -3})
    assert lattice.combine(coords) == {0: 6, 1: -3}


def test_subquotient():
    quotient = Subquotient(LatticeBasis([{0: 1}], 1), [{0: 4}])
    assert quotient.structure == AbelianGroupStructure(0, (4,))
    assert quotient.coordinates({0: 4}) == (0,)
    assert quotient.coordinates(quotient.combine((3,))) == (3,)


def test_hom_kernel():
    # Z/4 -> Z/2, 1 -> 1
    kernel = hom_kernel(IntMatrix.from_rows([[1]]), AbelianGroupStructure(0, (4,)), [2])
    assert kernel.structure == AbelianGroupStructure(0, (2,))
    # no target: everything is in the kernel
    kernel = hom_kernel(IntMatrix.zeros(0, 1), AbelianGroupStructure(0, (3,)), [])
    assert kernel.structure == AbelianGroupStructure(0, (3,))
    # Z -> Z/2 + Z/3 diagonally has kernel 6Z
    kernel = hom_kernel(IntMatrix.from_rows([[1], [1]]), AbelianGroupStructure(1), [2, 3])
    assert kernel.structure == AbelianGroupStructure(1)
    with pytest.raises(DimensionMismatch):
        hom_kernel(IntMatrix.zeros(2, 1), AbelianGroupStructure(1), [2])


def test_same_subgroup():
    ambient = AbelianGroupStructure(0, (6,))
    assert same_subgroup([{0: 2}], [{0: 4}], ambient)
    assert not same_subgroup([{0: 2}], [{0: 3}], ambient)


def test_matrix_shapes():
    with pytest.raises(DimensionMismatch):
        IntMatrix.from_rows([[1, 2], [3]])
    with pytest.raises(DimensionMismatch):
        IntMatrix.identity(2) @ IntMatrix.identity(3)
    M = IntMatrix.from_rows([[1, 2], [3, 4]])
    assert M.T.to_rows() == [[1, 3], [2, 4]]
    assert M.determinant() == -2
    assert IntMatrix.vstack(M, M).shape == (4, 2)
    assert IntMatrix.block_diagonal(M, IntMatrix.identity(1)).to_rows() == [[1, 2, 0], [3, 4, 0], [0, 0, 1]]


@given(st.integers(1, 6).flatmap(
    lambda cols: st.lists(st.lists(st.integers(-6, 6), min_size=cols, max_size=cols), min_size=1, max_size=4)
))
@settings(max_examples=40, deadline=None)
def test_kernel_basis_is_saturated(rows):
    """
    The columns span every integer solution of A·x = 0, not a sublattice of it.
    """
    A = IntMatrix.from_rows(rows)
    K = kernel_basis(A)
    assert (A @ K).is_zero()
    assert K.cols == A.cols - Matrix(rows).rank()
    if not K.cols:
        return
    basis = Matrix(K.to_rows())
    minors = [basis.extract(list(picked), list(range(K.cols))).det() for picked in combinations(range(K.rows), K.cols)]
    assert reduce(gcd, (abs(int(m)) for m in minors), 0) == 1
    for v in Matrix(rows).nullspace():
        scale = reduce(lambda a, b: a * b // gcd(a, b), (int(x.q) for x in v), 1)
        assert solve_integer(K, [int(x * scale) for x in v]) is not None


def test_kernel_basis_examples():
    assert kernel_basis(IntMatrix.from_rows([[1, 0]])).to_rows() in ([[0], [1]], [[0], [-1]])
    K = kernel_basis(IntMatrix.from_rows([[2, -2]]))
    assert K.to_rows() in ([[1], [1]], [[-1], [-1]])
    assert kernel_basis(IntMatrix.from_rows([[1, 2], [3, 4]])).cols == 0
