import itertools
from math import gcd

import numpy as np
import pytest

from shabrauer.algebra.fingroup import all_subgroups, cyclic_group
from shabrauer.algebra.gmodule import (
    GModule,
    TwoTermComplex,
    coset_permutation_module,
    direct_sum,
    norm_quotient,
    reduce_mod,
    regular_module,
    validate_module,
)
from shabrauer.algebra.linalg import AbelianGroupStructure, IntMatrix
from shabrauer.cohomology.groups import cohomology_group
from shabrauer.config import Config
from shabrauer.errors import BudgetExceeded, DegreeUnsupported, NotALattice, NotFinite
from shabrauer.oracle import (
    OracleBudget,
    brute_force_cohomology,
    cross_check_cohomology,
    cross_check_hypercohomology,
    dimension_shift_cohomology,
    oracle_cohomology,
)
from tests.conftest import cyclic_coefficients, integers, sign_module


def structure(*factors, free_rank=0):
    return AbelianGroupStructure(free_rank, tuple(factors))


def test_brute_force_values(c2, c4, v4, s3):
    assert brute_force_cohomology(c2, cyclic_coefficients(c2, 2), 1) == structure(2)
    assert brute_force_cohomology(c2, cyclic_coefficients(c2, 2), 2) == structure(2)
    assert brute_force_cohomology(c4, cyclic_coefficients(c4, 4), 2) == structure(4)
    assert brute_force_cohomology(c4, cyclic_coefficients(c4, 2), 1) == structure(2)
    assert brute_force_cohomology(v4, cyclic_coefficients(v4, 2), 1) == structure(2, 2)
    assert brute_force_cohomology(v4, cyclic_coefficients(v4, 2), 2) == structure(2, 2, 2)
    assert brute_force_cohomology(s3, cyclic_coefficients(s3, 2), 1) == structure(2)
    assert brute_force_cohomology(s3, cyclic_coefficients(s3, 3), 1).is_zero
    C3 = cyclic_group(3)
    assert brute_force_cohomology(C3, cyclic_coefficients(C3, 3), 1) == structure(3)
    # a separately built copy of the group is accepted
    assert brute_force_cohomology(cyclic_group(3), cyclic_coefficients(C3, 3), 2) == structure(3)
    assert dimension_shift_cohomology(cyclic_group(3), integers(C3), 2) == structure(3)


def test_brute_force_degenerate_inputs():
    trivial = cyclic_group(1)
    assert brute_force_cohomology(trivial, cyclic_coefficients(trivial, 5), 2).is_zero
    G = cyclic_group(3)
    assert brute_force_cohomology(G, GModule.zero(G), 1).is_zero


def test_brute_force_errors(c2, c4, v4):
    with pytest.raises(DegreeUnsupported):
        brute_force_cohomology(c2, cyclic_coefficients(c2, 2), 3)
    with pytest.raises(NotFinite):
        brute_force_cohomology(c2, integers(c2), 1)
    with pytest.raises(BudgetExceeded) as excinfo:
        brute_force_cohomology(c4, cyclic_coefficients(c4, 2), 1, OracleBudget(max_group_order=3))
    assert excinfo.value.exit_code == 4
    with pytest.raises(BudgetExceeded):
        brute_force_cohomology(v4, cyclic_coefficients(v4, 2), 2, OracleBudget(max_enumeration=10))


def test_budget():
    with pytest.raises(ValueError):
        OracleBudget(max_enumeration=0)
    budget = OracleBudget.from_config(Config(oracle_max_enumeration=99, oracle_max_group_order=5))
    assert budget == OracleBudget(99, 5)


def test_dimension_shift_values(c2, v4, s3):
    for n in (2, 3, 4, 6):
        G = cyclic_group(n)
        assert dimension_shift_cohomology(G, integers(G), 2) == structure(n)
        assert dimension_shift_cohomology(G, integers(G), 1).is_zero
    assert dimension_shift_cohomology(c2, sign_module(c2), 1) == structure(2)
    assert dimension_shift_cohomology(c2, sign_module(c2), 2).is_zero
    assert dimension_shift_cohomology(v4, integers(v4), 2) == structure(2, 2)
    J = norm_quotient(v4)
    assert dimension_shift_cohomology(v4, J, 1) == structure(2, 2)
    assert dimension_shift_cohomology(v4, J, 2) == structure(2)
    assert dimension_shift_cohomology(s3, norm_quotient(s3), 1) == structure(2)
    assert dimension_shift_cohomology(s3, regular_module(s3), 2).is_zero


def test_dimension_shift_errors(c2):
    with pytest.raises(NotALattice):
        dimension_shift_cohomology(c2, cyclic_coefficients(c2, 2), 1)
    with pytest.raises(DegreeUnsupported):
        dimension_shift_cohomology(c2, integers(c2), 0)
    mixed = direct_sum(integers(c2), cyclic_coefficients(c2, 2))
    with pytest.raises(NotALattice):
        oracle_cohomology(c2, mixed, 1)


def test_oracle_dispatch(c2):
    assert oracle_cohomology(c2, cyclic_coefficients(c2, 2), 1)[0] == "brute_force"
    assert oracle_cohomology(c2, integers(c2), 2) == ("dimension_shift", structure(2))


def test_cross_checks(v4):
    J = norm_quotient(v4)
    report = cross_check_cohomology(v4, J, 2, structure(2))
    assert report.agrees
    wrong = cross_check_cohomology(v4, J, 2, structure(4))
    assert not wrong.agrees
    assert wrong.structure == structure(2)

    C = TwoTermComplex(J, GModule.zero(v4), IntMatrix.zeros(0, J.ambient_rank))
    hyper = cross_check_hypercohomology(v4, C, structure(2))
    assert hyper.agrees and hyper.oracle == "dimension_shift"
    C = TwoTermComplex(integers(v4), J, IntMatrix.zeros(J.ambient_rank, 1))
    split = cross_check_hypercohomology(v4, C, cohomology_group(v4, J, 1).structure)
    # H^1(J) + H^2(Z) = (Z/2)^2 + (Z/2)^2
    assert split.structure == structure(2, 2, 2, 2)
    assert split.oracle == "dimension_shift+dimension_shift"
    assert not split.agrees
    R = regular_module(v4)
    norm = TwoTermComplex(integers(v4), R, IntMatrix.from_rows([[1] for _ in v4.elements]))
    assert cross_check_hypercohomology(v4, norm, structure()) is None


def test_shapiro(s3):
    for H in all_subgroups(s3):
        assert dimension_shift_cohomology(s3, coset_permutation_module(s3, H), 1).is_zero


def _grid_modules(G):
    out = [integers(G), regular_module(G), norm_quotient(G), cyclic_coefficients(G, 2), cyclic_coefficients(G, 3)]
    if G.is_abelian and all(G.element_order(g) == 2 for g in G.generator_indices):
        out.append(sign_module(G))
    return out


def _check_agreement(G, degrees):
    for M in _grid_modules(G):
        for n in degrees:
            engine = cohomology_group(G, M, n).structure
            report = cross_check_cohomology(G, M, n, engine)
            assert report.agrees, (G.name, M.name, n, engine, report.structure)


@pytest.mark.parametrize("order", [2, 3])
def test_engine_matches_oracles(order):
    _check_agreement(cyclic_group(order), (1, 2))


def test_engine_matches_oracles_klein(v4):
    _check_agreement(v4, (1, 2))


@pytest.mark.slow
@pytest.mark.parametrize("name", ["c4", "s3"])
def test_engine_matches_oracles_grid(name, request):
    G = request.getfixturevalue(name)
    _check_agreement(G, (1, 2))
    # finite modules large enough to need the search, degree 1 only
    M = reduce_mod(norm_quotient(G), 2)
    assert cross_check_cohomology(G, M, 1, cohomology_group(G, M, 1).structure).agrees


@pytest.mark.slow
def test_engine_matches_brute_force_on_twisted_cyclic_coefficients():
    for n in range(2, 7):
        G = cyclic_group(n)
        for d in range(2, 10):
            for u in range(1, d):
                if gcd(u, d) != 1 or pow(u, n, d) != 1:
                    continue
                M = GModule(G, 1, IntMatrix.from_rows([[d]]), (IntMatrix.from_rows([[u]]),), f"Z/{d}({u})")
                for degree in (1, 2):
                    engine = cohomology_group(G, M, degree).structure
                    assert brute_force_cohomology(G, M, degree) == engine, (n, d, u, degree)


def test_oracles_read_only_the_presentation(c2, v4, monkeypatch):
    J = norm_quotient(v4)
    Z2 = cyclic_coefficients(v4, 2)
    sign = sign_module(c2)
    # Z^2 / <(2, 0), (1, 3)> is Z/6 with a non-diagonal presentation
    six = GModule(c2, 2, IntMatrix.from_columns([[2, 0], [1, 3]]), (IntMatrix.identity(2),), "Z/6")

    def refuse(self):
        raise AssertionError(f"derived data of {self.name} was requested")

    monkeypatch.setattr(GModule, "_build_canonical", refuse)
    monkeypatch.setattr(GModule, "_build_element_actions", refuse)
    monkeypatch.setattr(GModule, "relation_lattice", refuse)

    assert brute_force_cohomology(v4, Z2, 1) == structure(2, 2)
    assert brute_force_cohomology(c2, six, 1) == structure(2)
    assert brute_force_cohomology(c2, six, 2) == structure(2)
    assert dimension_shift_cohomology(v4, J, 1) == structure(2, 2)
    assert dimension_shift_cohomology(v4, J, 2) == structure(2)
    assert dimension_shift_cohomology(c2, sign, 1) == structure(2)


def test_non_diagonal_presentation_agrees_with_engine(c2, s3):
    six = GModule(c2, 2, IntMatrix.from_columns([[2, 0], [1, 3]]), (IntMatrix.identity(2),), "Z/6")
    for n in (1, 2):
        assert brute_force_cohomology(c2, six, n) == cohomology_group(c2, six, n).structure
    # J over S3 presented with a relation, shifted twice
    J = norm_quotient(s3)
    for n in (1, 2):
        assert dimension_shift_cohomology(s3, J, n) == cohomology_group(s3, J, n).structure


def _all_actions(G, k, d):
    """Every action of G on (Z/d)^k by matrices, one module per homomorphism."""
    identity = np.eye(k, dtype=np.int64)
    matrices = [np.array(entries, dtype=np.int64).reshape(k, k)
                for entries in itertools.product(range(d), repeat=k * k)]
    candidates = [
        [A for A in matrices if np.array_equal(np.linalg.matrix_power(A, G.element_order(g)) % d, identity)]
        for g in G.generator_indices
    ]
    relations = IntMatrix.identity(k).scale(d)
    out = []
    for choice in itertools.product(*candidates):
        action = tuple(IntMatrix.from_rows(A.tolist()) for A in choice)
        M = GModule(G, k, relations, action, f"(Z/{d})^{k} #{len(out)}")
        if validate_module(M).valid:
            out.append(M)
    return out


def _check_every_action(G, k, d):
    modules = _all_actions(G, k, d)
    for M in modules:
        for n in (1, 2):
            assert brute_force_cohomology(G, M, n) == cohomology_group(G, M, n).structure, (G.name, M.action, n)
    return modules


def test_every_klein_four_action_on_two_dimensional_f2(v4):
    assert len(_check_every_action(v4, 2, 2)) == 10


def test_every_s3_action_on_z3(s3):
    # trivial and sign-twisted
    assert len(_check_every_action(s3, 1, 3)) == 2


@pytest.mark.slow
def test_every_s3_action_on_two_dimensional_modules(s3):
    assert len(_check_every_action(s3, 2, 2)) == 10
    assert len(_check_every_action(s3, 2, 3)) > 2
