# tests/conftest.py

import logging

import numpy as np
import pytest

from shabrauer.algebra.fingroup import (
    all_subgroups,
    cyclic_group,
    dihedral_group,
    klein_four_group,
    quaternion_group,
    symmetric_group,
)
from shabrauer.algebra.gmodule import (
    GModule,
    TwoTermComplex,
    coset_permutation_module,
    direct_sum,
    norm_quotient,
    permutation_module,
    reduce_mod,
    regular_module,
    trivial_module,
    validate_module,
)
from shabrauer.algebra.linalg import AbelianGroupStructure, IntMatrix


@pytest.fixture
def c2():
    return cyclic_group(2)


@pytest.fixture
def c4():
    return cyclic_group(4)


@pytest.fixture
def v4():
    return klein_four_group()


@pytest.fixture
def s3():
    return symmetric_group(3)


@pytest.fixture
def d4():
    return dihedral_group(4)


@pytest.fixture
def q8():
    return quaternion_group()


def integers(G):
    """Z with trivial action."""
    return trivial_module(G, AbelianGroupStructure(1), "Z")


def cyclic_coefficients(G, d):
    """Z/d with trivial action."""
    return trivial_module(G, AbelianGroupStructure(0, (d,)), f"Z/{d}")


def sign_module(G):
    """Z on which every generator acts by -1; only a module when that is a homomorphism."""
    return GModule(G, 1, IntMatrix.zeros(1, 0), tuple(IntMatrix.from_rows([[-1]]) for _ in G.generator_indices),
                   "Z(-1)")


@pytest.fixture
def modules():
    """Named constructors shared by the test modules."""
    return {
        "integers": integers,
        "cyclic": cyclic_coefficients,
        "sign": sign_module,
        "regular": regular_module,
        "norm_quotient": norm_quotient,
    }


def _orbit_module(G, rng, max_rank):
    """A permutation lattice for a cyclic group: orbits whose sizes divide the group order."""
    n = G.order
    if n == 1:
        return trivial_module(G, AbelianGroupStructure(int(rng.integers(1, max_rank + 1))), "Z^k")
    sizes = [k for k in range(1, min(n, max_rank) + 1) if n % k == 0]
    images, offset = [], 0
    while offset < max_rank:
        k = int(rng.choice(sizes))
        if offset + k > max_rank:
            break
        images.extend(offset + (i + 1) % k for i in range(k))
        offset += k
        if rng.random() < 0.4:
            break
    return permutation_module(G, [images])


def random_cyclic_module(G, rng, max_rank=4):
    """Random module over a cyclic group: sums of permutation lattices, Z(-1) and trivial Z/d."""
    pieces = []
    rank = 0
    while rank < max_rank:
        kind = rng.integers(3)
        if kind == 0:
            piece = _orbit_module(G, rng, max_rank - rank)
        elif kind == 1 and G.order % 2 == 0:
            piece = sign_module(G)
        else:
            piece = cyclic_coefficients(G, int(rng.integers(2, 9)))
        pieces.append(piece)
        rank += piece.ambient_rank
        if rng.random() < 0.5:
            break
    module = pieces[0]
    for piece in pieces[1:]:
        module = direct_sum(module, piece)
    return module


def random_cyclic_complex(G, rng, max_rank=4):
    """[A -> B] over a cyclic group: either the zero map or the diagonal Z -> Z[X]."""
    if rng.random() < 0.3:
        B = _orbit_module(G, rng, max_rank)
        f = IntMatrix.from_rows([[1] for _ in range(B.ambient_rank)], 1)
        return TwoTermComplex(integers(G), B, f, "[Z -> Z[X]]")
    A = random_cyclic_module(G, rng, max_rank)
    B = random_cyclic_module(G, rng, max_rank)
    return TwoTermComplex(A, B, IntMatrix.zeros(B.ambient_rank, A.ambient_rank), "[A -0-> B]")


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def random_complexes():
    """Factory: count seeded random complexes over cyclic groups of order at most max_order."""
    def build(count, max_order, seed=7, max_rank=4):
        generator = np.random.default_rng(seed)
        out = []
        for _ in range(count):
            G = cyclic_group(int(generator.integers(1, max_order + 1)))
            out.append((G, random_cyclic_complex(G, generator, max_rank)))
        return out
    return build


def sign_twists(G):
    """Z(χ) for every nontrivial character χ: G -> {±1} seen on the generators."""
    out = []
    k = len(G.generator_indices)
    for mask in range(1, 2 ** k):
        action = tuple(IntMatrix.from_rows([[-1 if mask >> pos & 1 else 1]]) for pos in range(k))
        M = GModule(G, 1, IntMatrix.zeros(1, 0), action, f"Z(chi{mask})")
        if validate_module(M).valid:
            out.append(M)
    return out


def random_lattice(G, rng, max_rank=3):
    """Sum of trivial, sign-twisted and coset permutation lattices, no relations."""
    small = [H for H in all_subgroups(G) if G.order // H.order <= max_rank]
    twists = sign_twists(G)
    pieces, rank = [], 0
    while rank < max_rank:
        kind = rng.integers(3)
        if kind == 0 and twists:
            piece = twists[int(rng.integers(len(twists)))]
        elif kind == 1:
            H = small[int(rng.integers(len(small)))]
            if G.order // H.order > max_rank - rank:
                continue
            piece = coset_permutation_module(G, H)
        else:
            piece = integers(G)
        pieces.append(piece)
        rank += piece.ambient_rank
        if rng.random() < 0.5:
            break
    module = pieces[0]
    for piece in pieces[1:]:
        module = direct_sum(module, piece)
    return module


def random_target(G, rng, max_rank=3):
    """A lattice, trivial Z/d, or a permutation lattice reduced modulo a prime."""
    kind = rng.integers(3)
    if kind == 0:
        return cyclic_coefficients(G, int(rng.integers(2, 7)))
    if kind == 1:
        return reduce_mod(random_lattice(G, rng, max_rank), int(rng.choice([2, 3])))
    return random_lattice(G, rng, max_rank)


def random_equivariant_map(A, B, rng):
    """Averages a random integer matrix X over the group: f = sum_g ρ_B(g) X ρ_A(g^-1)."""
    G = A.group
    X = IntMatrix.from_rows(rng.integers(-2, 3, size=(B.ambient_rank, A.ambient_rank)).tolist(),
                            A.ambient_rank)
    f = IntMatrix.zeros(B.ambient_rank, A.ambient_rank)
    for g in G.elements:
        f = f + B.element_action(g) @ X @ A.element_action(G.inverse(g))
    return f


@pytest.fixture
def random_equivariant_complexes():
    """Factory: count seeded complexes [A -> B] over G with A a lattice and f averaged to be equivariant."""
    def build(G, count, seed=13, max_rank=3):
        generator = np.random.default_rng(seed)
        out = []
        while len(out) < count:
            A = random_lattice(G, generator, max_rank)
            B = random_target(G, generator, max_rank)
            f = random_equivariant_map(A, B, generator)
            if f.is_zero() and generator.random() < 0.8:
                continue
            out.append(TwoTermComplex(A, B, f, f"[{A.name} -> {B.name}]"))
        return out
    return build


@pytest.fixture(autouse=True)
def reset_package_logger():
    """Drops handlers that setup_logger attached to pytest's captured streams."""
    yield
    logger = logging.getLogger("shabrauer")
    for handler in list(logger.handlers):
        logger.removeHandler(handler)
        handler.close()
    logger.setLevel(logging.NOTSET)
