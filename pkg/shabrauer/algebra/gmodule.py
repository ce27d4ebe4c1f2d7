# shabrauer/algebra/gmodule.py

"""
Finitely generated abelian groups with an action of a finite group.

A module is presented as M = Z^m / im(relations); the action is given by one
m x m integer matrix per group generator. Per-element matrices and the
canonical (Smith) coordinates are derived once and then shared.
"""

import logging
import threading
from collections import deque
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from shabrauer.algebra.fingroup import FinGroup, QuotientMap, Subgroup
from shabrauer.algebra.linalg import (
    AbelianGroupStructure,
    IntMatrix,
    LatticeBasis,
    canonical_coordinates,
)
from shabrauer.errors import ModuleValidationError, NotAHomomorphism, NotFinite, SchemaError

logger = logging.getLogger(__name__)

# Guards the lazily built per-element tables shared between threads
_CACHE_LOCK = threading.RLock()


@dataclass(frozen=True)
class CanonicalForm:
    """
    A module rewritten in Smith coordinates: M ≅ Z/d1 + ... + Z/dk + Z^r.

    `to_canonical` maps presentation vectors to canonical coordinates,
    `from_canonical` lifts them back. `actions[g]` is the canonical matrix of
    element g as nested lists, rows reduced modulo their coordinate's modulus.
    """

    structure: AbelianGroupStructure
    to_canonical: IntMatrix
    from_canonical: IntMatrix
    actions: Tuple[Tuple[Tuple[int, ...], ...], ...]

    @property
    def rank(self) -> int:
        return self.structure.rank

    @property
    def moduli(self) -> Tuple[int, ...]:
        return self.structure.moduli


@dataclass(frozen=True, eq=False)
class GModule:
    group: FinGroup
    ambient_rank: int
    relations: IntMatrix
    action: Tuple[IntMatrix, ...]
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "action", tuple(self.action))
        m = self.ambient_rank
        if self.relations.rows != m:
            raise SchemaError(
                f"relations have {self.relations.rows} rows but the ambient rank is {m}",
                location=self.name,
            )
        if len(self.action) != len(self.group.generator_indices):
            raise SchemaError(
                f"{len(self.action)} action matrices for {len(self.group.generator_indices)} generators",
                location=self.name,
            )
        for pos, matrix in enumerate(self.action):
            if matrix.shape != (m, m):
                raise SchemaError(
                    f"action matrix of generator {self._generator_label(pos)} has shape "
                    f"{matrix.rows}x{matrix.cols}, expected {m}x{m}",
                    location=self.name,
                )

    def _generator_label(self, pos: int) -> str:
        return f"#{pos} (element {self.group.label(self.group.generator_indices[pos])})"

    @classmethod
    def zero(cls, G: FinGroup) -> "GModule":
        return cls(G, 0, IntMatrix.zeros(0, 0), tuple(IntMatrix.zeros(0, 0) for _ in G.generator_indices), "0")

    def _cached(self, key: str, build):
        value = self.__dict__.get(key)
        if value is None:
            with _CACHE_LOCK:
                value = self.__dict__.get(key)
                if value is None:
                    value = build()
                    self.__dict__[key] = value
        return value

    @property
    def element_actions(self) -> Tuple[IntMatrix, ...]:
        """ρ(g) for every element, composed along shortest generator words."""
        return self._cached("_element_actions", self._build_element_actions)

    def _build_element_actions(self) -> Tuple[IntMatrix, ...]:
        G = self.group
        mats: Dict[int, IntMatrix] = {G.identity: IntMatrix.identity(self.ambient_rank)}
        queue = deque([G.identity])
        while queue:
            x = queue.popleft()
            for pos, g in enumerate(G.generator_indices):
                y = G.table[x][g]
                if y not in mats:
                    mats[y] = mats[x] @ self.action[pos]
                    queue.append(y)
        if len(mats) != G.order:
            raise SchemaError(f"generators of {G.name} do not reach every element")
        return tuple(mats[a] for a in G.elements)

    def element_action(self, g: int) -> IntMatrix:
        return self.element_actions[g]

    @property
    def canonical(self) -> CanonicalForm:
        return self._cached("_canonical", self._build_canonical)

    def _build_canonical(self) -> CanonicalForm:
        structure, P, Q = canonical_coordinates(self.relations)
        moduli = structure.moduli
        actions = []
        for rho in self.element_actions:
            A = P @ rho @ Q
            actions.append(tuple(
                tuple(x % d for x in A.row(i)) if d else A.row(i) for i, d in enumerate(moduli)
            ))
        return CanonicalForm(structure, P, Q, tuple(actions))

    @property
    def structure(self) -> AbelianGroupStructure:
        return self.canonical.structure

    @property
    def is_torsion_free(self) -> bool:
        return not self.structure.invariant_factors

    def relation_lattice(self) -> LatticeBasis:
        return self._cached(
            "_relation_lattice",
            lambda: LatticeBasis(self.relations.to_sparse_columns(), self.ambient_rank),
        )

    def congruent(self, a: IntMatrix, b: IntMatrix) -> Optional[int]:
        """Index of the first column where a and b differ modulo relations, None if congruent."""
        lattice = self.relation_lattice()
        diff = a - b
        for j, column in enumerate(diff.to_sparse_columns()):
            if column and not lattice.contains(column):
                return j
        return None

    def __repr__(self) -> str:
        return f"GModule({self.name or 'unnamed'}, rank={self.ambient_rank}, structure={self.structure})"


@dataclass(frozen=True)
class ModuleDiagnostics:
    valid: bool
    failures: Tuple[str, ...] = ()
    witness: Tuple = ()

    def raise_if_invalid(self) -> None:
        if not self.valid:
            raise ModuleValidationError("; ".join(self.failures), witness=self.witness)


def validate_module(M: GModule) -> ModuleDiagnostics:
    """
    Checks that the action is well defined on M and is a homomorphism.

    Returns:
        ModuleDiagnostics: The first violation found, with its witness.
    """
    lattice = M.relation_lattice()
    label = M.name or "module"
    for pos, rho in enumerate(M.action):
        image = rho @ M.relations
        for j, column in enumerate(image.to_sparse_columns()):
            if column and not lattice.contains(column):
                return ModuleDiagnostics(False, (
                    f"{label}: action of generator {M._generator_label(pos)} does not preserve relation column {j}",
                ), (pos, j))

    G = M.group
    mats = M.element_actions
    for x in G.elements:
        for pos, g in enumerate(G.generator_indices):
            y = G.table[x][g]
            bad = M.congruent(mats[x] @ M.action[pos], mats[y])
            if bad is not None:
                return ModuleDiagnostics(False, (
                    f"{label}: action of generator {M._generator_label(pos)} is not compatible with the "
                    f"group law (element {G.label(x)} times the generator, column {bad})",
                ), (pos, x, bad))
    return ModuleDiagnostics(True)


# Constructors

def trivial_module(G: FinGroup, structure: AbelianGroupStructure, name: str = "") -> GModule:
    """Free coordinates first, then one coordinate per invariant factor."""
    m = structure.rank
    k = len(structure.invariant_factors)
    relations = [[0] * k for _ in range(m)]
    for t, d in enumerate(structure.invariant_factors):
        relations[structure.free_rank + t][t] = d
    identity = IntMatrix.identity(m)
    return GModule(G, m, IntMatrix.from_rows(relations, k), tuple(identity for _ in G.generator_indices),
                   name or str(structure))


def permutation_matrix(images: Sequence[int]) -> IntMatrix:
    n = len(images)
    data = [[0] * n for _ in range(n)]
    for x, y in enumerate(images):
        data[y][x] = 1
    return IntMatrix.from_rows(data, n)


def permutation_module(G: FinGroup, action: Sequence[Sequence[int]], name: str = "") -> GModule:
    """
    The permutation lattice Z[X] for an action of G on X = {0, ..., k-1}.

    Args:
        G (FinGroup): Acting group.
        action (Sequence[Sequence[int]]): Image list of each generator of G.
        name (str): Display name.

    Returns:
        GModule: Z^k with permutation matrices e_x -> e_(g x).
    """
    action = [tuple(images) for images in action]
    if len(action) != len(G.generator_indices):
        raise SchemaError(f"{len(action)} permutations for {len(G.generator_indices)} generators")
    k = len(action[0]) if action else 0
    for pos, images in enumerate(action):
        if sorted(images) != list(range(k)):
            raise NotAHomomorphism(f"image list of generator {pos} is not a permutation of 0..{k - 1}",
                                   witness=(pos,))

    perms: Dict[int, Tuple[int, ...]] = {G.identity: tuple(range(k))}
    queue = deque([G.identity])
    while queue:
        x = queue.popleft()
        for pos, g in enumerate(G.generator_indices):
            y = G.table[x][g]
            composed = tuple(perms[x][action[pos][p]] for p in range(k))
            if y not in perms:
                perms[y] = composed
                queue.append(y)
            elif perms[y] != composed:
                raise NotAHomomorphism(
                    f"permutation action is not a homomorphism at element {G.label(x)} times generator {pos}",
                    witness=(x, pos),
                )
    return GModule(G, k, IntMatrix.zeros(k, 0), tuple(permutation_matrix(p) for p in action),
                   name or f"Z[X], |X| = {k}")


def _left_cosets(G: FinGroup, H: Subgroup) -> Tuple[List[int], Dict[int, int]]:
    coset_of: Dict[int, int] = {}
    representatives: List[int] = []
    for a in G.elements:
        if a not in coset_of:
            for h in H.element_indices:
                coset_of[G.table[a][h]] = len(representatives)
            representatives.append(a)
    return representatives, coset_of


def coset_permutation_module(G: FinGroup, H: Subgroup, name: str = "") -> GModule:
    """Z[G/H] with cosets ordered by their smallest element."""
    representatives, coset_of = _left_cosets(G, H)
    action = [
        [coset_of[G.table[g][r]] for r in representatives] for g in G.generator_indices
    ]
    return permutation_module(G, action, name or f"Z[G/H], [G:H] = {len(representatives)}")


def regular_module(G: FinGroup) -> GModule:
    return coset_permutation_module(G, G.trivial_subgroup(), "Z[G]")


def norm_quotient(G: FinGroup) -> GModule:
    """J = Z[G] / Z·(sum of all g), the character lattice of the norm-one torus."""
    regular = regular_module(G)
    ones = IntMatrix.from_rows([[1] for _ in G.elements], 1)
    return GModule(G, G.order, ones, regular.action, "J")


def direct_sum(M: GModule, N: GModule) -> GModule:
    if M.group != N.group:
        raise SchemaError("direct sum of modules over different groups")
    return GModule(
        M.group,
        M.ambient_rank + N.ambient_rank,
        IntMatrix.block_diagonal(M.relations, N.relations),
        tuple(IntMatrix.block_diagonal(a, b) for a, b in zip(M.action, N.action)),
        f"{M.name} + {N.name}",
    )


def reduce_mod(M: GModule, n: int) -> GModule:
    """M / nM."""
    relations = IntMatrix.hstack(M.relations, IntMatrix.identity(M.ambient_rank).scale(n))
    return GModule(M.group, M.ambient_rank, relations, M.action, f"{M.name}/{n}")


def restrict_module(M: GModule, H: Subgroup) -> GModule:
    """Same presentation, acted on by H (relabelled through `H.as_group`)."""
    if H.parent != M.group:
        raise SchemaError("subgroup does not belong to the module's group")
    sub = H.as_group
    action = tuple(M.element_action(H.embedding[g]) for g in sub.generator_indices)
    return GModule(sub, M.ambient_rank, M.relations, action, M.name)


def inflate_module(M: GModule, projection: QuotientMap) -> GModule:
    """M viewed over the larger group, acting through the projection."""
    if projection.group != M.group:
        raise SchemaError("projection does not land in the module's group")
    action = tuple(M.element_action(projection(g)) for g in projection.parent.generator_indices)
    return GModule(projection.parent, M.ambient_rank, M.relations, action, M.name)


def dual_of_finite(M: GModule) -> GModule:
    """
    Hom(M, Q/Z) with action (g·φ)(m) = φ(g^-1 m), presented on the coordinate characters.

    Character i sends canonical coordinate i to 1/d_i, so the dual has the same
    invariant factors and the action matrix of g is built from the canonical
    matrix A of g^-1 as B[j][i] = A[i][j]·d_j/d_i.
    """
    canonical = M.canonical
    if not canonical.structure.is_finite:
        raise NotFinite(f"{M.name or 'module'} has free rank {canonical.structure.free_rank}")
    d = canonical.moduli
    k = len(d)
    G = M.group
    action = []
    for g in G.generator_indices:
        A = canonical.actions[G.inverse(g)]
        action.append(IntMatrix.from_rows(
            [[(A[i][j] * d[j] // d[i]) % d[j] for i in range(k)] for j in range(k)], k
        ))
    return GModule(G, k, IntMatrix.diagonal(d), tuple(action), f"dual({M.name})")


# Complexes

@dataclass(frozen=True, eq=False)
class TwoTermComplex:
    """[A -> B] with A in degree -1 and B in degree 0."""

    A: GModule
    B: GModule
    f: IntMatrix
    name: str = field(default="")

    def __post_init__(self):
        if self.A.group != self.B.group:
            raise SchemaError("complex terms live over different groups")
        if self.f.shape != (self.B.ambient_rank, self.A.ambient_rank):
            raise SchemaError(
                f"map has shape {self.f.rows}x{self.f.cols}, expected "
                f"{self.B.ambient_rank}x{self.A.ambient_rank}"
            )

    @property
    def group(self) -> FinGroup:
        return self.A.group

    def canonical_map(self) -> Tuple[Tuple[int, ...], ...]:
        """f in canonical coordinates of A and B, rows reduced modulo B's moduli."""
        F = self.B.canonical.to_canonical @ self.f @ self.A.canonical.from_canonical
        return tuple(
            tuple(x % d for x in F.row(i)) if d else F.row(i) for i, d in enumerate(self.B.canonical.moduli)
        )


def validate_complex(C: TwoTermComplex) -> ModuleDiagnostics:
    for M in (C.A, C.B):
        diagnostics = validate_module(M)
        if not diagnostics.valid:
            return diagnostics
    image = C.f @ C.A.relations
    bad = C.B.congruent(image, IntMatrix.zeros(image.rows, image.cols))
    if bad is not None:
        return ModuleDiagnostics(False, (f"map does not send relation column {bad} of A into relations of B",),
                                 (bad,))
    for pos in range(len(C.group.generator_indices)):
        bad = C.B.congruent(C.f @ C.A.action[pos], C.B.action[pos] @ C.f)
        if bad is not None:
            return ModuleDiagnostics(False, (
                f"map is not equivariant for generator {C.A._generator_label(pos)} (column {bad})",
            ), (pos, bad))
    return ModuleDiagnostics(True)


def restrict_complex(C: TwoTermComplex, H: Subgroup) -> TwoTermComplex:
    return TwoTermComplex(restrict_module(C.A, H), restrict_module(C.B, H), C.f, C.name)


def inflate_complex(C: TwoTermComplex, projection: QuotientMap) -> TwoTermComplex:
    return TwoTermComplex(inflate_module(C.A, projection), inflate_module(C.B, projection), C.f, C.name)
