import pytest

from shabrauer.algebra.fingroup import quotient_map
from shabrauer.algebra.gmodule import (
    GModule,
    TwoTermComplex,
    coset_permutation_module,
    direct_sum,
    dual_of_finite,
    inflate_module,
    norm_quotient,
    permutation_module,
    reduce_mod,
    regular_module,
    restrict_module,
    trivial_module,
    validate_complex,
    validate_module,
)
from shabrauer.algebra.linalg import AbelianGroupStructure, IntMatrix
from shabrauer.cohomology.groups import cohomology_group
from shabrauer.errors import ModuleValidationError, NotAHomomorphism, NotFinite, SchemaError
from tests.conftest import cyclic_coefficients, integers, sign_module


def test_trivial_and_regular_modules(c4, v4):
    M = cyclic_coefficients(c4, 6)
    assert M.structure == AbelianGroupStructure(0, (6,))
    assert validate_module(M).valid
    R = regular_module(v4)
    assert R.structure == AbelianGroupStructure(4)
    assert R.is_torsion_free
    assert validate_module(R).valid


def test_norm_quotient_is_a_lattice(v4, s3):
    for G in (v4, s3):
        J = norm_quotient(G)
        assert J.structure == AbelianGroupStructure(G.order - 1)
        assert validate_module(J).valid


def test_element_actions(c4):
    M = sign_module(c4)
    assert M.element_action(1).to_rows() == [[-1]]
    assert M.element_action(2).to_rows() == [[1]]
    assert M.element_action(c4.identity) == IntMatrix.identity(1)


def test_action_not_a_homomorphism(c2):
    M = GModule(c2, 1, IntMatrix.zeros(1, 0), (IntMatrix.from_rows([[2]]),), "bad")
    diagnostics = validate_module(M)
    assert not diagnostics.valid
    assert "generator #0" in diagnostics.failures[0]
    with pytest.raises(ModuleValidationError) as excinfo:
        diagnostics.raise_if_invalid()
    assert excinfo.value.exit_code == 3


def test_action_must_preserve_relations(c2):
    swap = IntMatrix.from_rows([[0, 1], [1, 0]])
    M = GModule(c2, 2, IntMatrix.from_rows([[2], [0]]), (swap,), "bad")
    diagnostics = validate_module(M)
    assert not diagnostics.valid
    assert "does not preserve relation" in diagnostics.failures[0]


def test_shape_errors(c2):
    with pytest.raises(SchemaError):
        GModule(c2, 1, IntMatrix.zeros(1, 0), (IntMatrix.identity(1), IntMatrix.identity(1)))
    with pytest.raises(SchemaError):
        GModule(c2, 1, IntMatrix.zeros(1, 0), (IntMatrix.identity(2),))
    with pytest.raises(SchemaError):
        GModule(c2, 2, IntMatrix.zeros(1, 0), (IntMatrix.identity(2),))


def test_canonical_form(c2):
    M = GModule(c2, 2, IntMatrix.from_rows([[2], [4]]), (IntMatrix.identity(2),))
    canonical = M.canonical
    assert canonical.structure == AbelianGroupStructure(1, (2,))
    assert canonical.to_canonical @ canonical.from_canonical == IntMatrix.identity(2)
    assert canonical.moduli == (2, 0)


def test_constructors(c4, s3):
    Z = integers(c4)
    assert reduce_mod(Z, 3).structure == AbelianGroupStructure(0, (3,))
    assert direct_sum(Z, cyclic_coefficients(c4, 2)).structure == AbelianGroupStructure(1, (2,))
    b = next(x for x in s3.elements if s3.element_order(x) == 2)
    cosets = coset_permutation_module(s3, s3.subgroup([b]))
    assert cosets.ambient_rank == 3
    assert validate_module(cosets).valid
    assert GModule.zero(s3).structure.is_zero


def test_permutation_module_rejects_non_permutations(c2):
    with pytest.raises(NotAHomomorphism):
        permutation_module(c2, [[0, 0]])
    # a 3-cycle is not an action of Z/2
    with pytest.raises(NotAHomomorphism):
        permutation_module(c2, [[1, 2, 0]])


def test_restrict_and_inflate(c4, c2):
    R = regular_module(c4)
    H = c4.subgroup([2])
    restricted = restrict_module(R, H)
    assert restricted.group.order == 2
    assert validate_module(restricted).valid

    projection = quotient_map(c4, H)
    sign = sign_module(projection.group)
    inflated = inflate_module(sign, projection)
    assert inflated.group is c4
    assert validate_module(inflated).valid
    assert inflated.element_action(2).to_rows() == [[1]]


def test_dual_of_finite(c4):
    M = GModule(c4, 1, IntMatrix.from_rows([[5]]), (IntMatrix.from_rows([[2]]),), "Z/5 twisted")
    assert validate_module(M).valid
    dual = dual_of_finite(M)
    assert dual.structure == M.structure
    assert validate_module(dual).valid
    with pytest.raises(NotFinite):
        dual_of_finite(integers(c4))


def test_complex_validation(c2):
    Z = integers(c2)
    sign = sign_module(c2)
    assert validate_complex(TwoTermComplex(Z, Z, IntMatrix.from_rows([[3]]))).valid
    not_equivariant = validate_complex(TwoTermComplex(Z, sign, IntMatrix.from_rows([[1]])))
    assert not not_equivariant.valid
    assert "not equivariant" in not_equivariant.failures[0]
    torsion = trivial_module(c2, AbelianGroupStructure(0, (2,)))
    assert not validate_complex(TwoTermComplex(torsion, Z, IntMatrix.from_rows([[1]]))).valid
    # Z(-1) -> Z/2 is equivariant modulo 2
    assert validate_complex(TwoTermComplex(sign, torsion, IntMatrix.from_rows([[1]]))).valid
    with pytest.raises(SchemaError):
        TwoTermComplex(Z, sign, IntMatrix.identity(2))


def test_dual_of_sign_twisted_z4(c2):
    M = GModule(c2, 1, IntMatrix.from_rows([[4]]), (IntMatrix.from_rows([[-1]]),), "Z/4(-1)")
    dual = dual_of_finite(M)
    assert dual.structure == AbelianGroupStructure(0, (4,))
    # the contragredient of -1 is -1
    assert dual.action[0].to_rows() == [[3]]
    assert validate_module(dual).valid
    trivial = dual_of_finite(trivial_module(c2, AbelianGroupStructure(0, (2, 2))))
    assert all(rho == IntMatrix.identity(2) for rho in trivial.action)


def _finite_modules(c2, c4, v4, s3):
    b = next(x for x in s3.elements if s3.element_order(x) == 2)
    return [
        GModule(c2, 1, IntMatrix.from_rows([[4]]), (IntMatrix.from_rows([[-1]]),), "Z/4(-1)"),
        GModule(c4, 1, IntMatrix.from_rows([[5]]), (IntMatrix.from_rows([[2]]),), "Z/5(2)"),
        GModule(v4, 2, IntMatrix.identity(2).scale(2),
                (IntMatrix.from_rows([[1, 1], [0, 1]]), IntMatrix.identity(2)), "unipotent"),
        reduce_mod(coset_permutation_module(s3, s3.subgroup([b])), 2),
        direct_sum(cyclic_coefficients(c4, 2), GModule(c4, 1, IntMatrix.from_rows([[4]]),
                                                       (IntMatrix.from_rows([[3]]),), "Z/4(-1)")),
    ]


def test_dual_is_an_involution(c2, c4, v4, s3):
    for M in _finite_modules(c2, c4, v4, s3):
        dual = dual_of_finite(M)
        twice = dual_of_finite(dual)
        assert validate_module(dual).valid and validate_module(twice).valid, M.name
        assert dual.structure == twice.structure == M.structure, M.name
        for n in (0, 1, 2):
            expected = cohomology_group(M.group, M, n).structure
            assert cohomology_group(M.group, twice, n).structure == expected, (M.name, n)
