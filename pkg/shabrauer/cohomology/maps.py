# shabrauer/cohomology/maps.py

"""Maps between cohomology groups: restriction, inflation and the five-term sequence."""

import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Dict, List, Tuple

from shabrauer.algebra.fingroup import FinGroup, QuotientMap, Subgroup
from shabrauer.algebra.gmodule import (
    TwoTermComplex,
    inflate_complex,
    inflate_module,
    restrict_complex,
    restrict_module,
)
from shabrauer.algebra.linalg import IntMatrix, SparseVector, Subquotient, hom_kernel, same_subgroup, sparse
from shabrauer.cohomology.cochains import Cochain
from shabrauer.cohomology.groups import CohomologyGroup, cohomology_group, hypercohomology_h1
from shabrauer.errors import MembershipFailure, SchemaError

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class CohomologyMap:
    """A homomorphism of cohomology groups; column i is the image of source generator i."""

    source: CohomologyGroup
    target: CohomologyGroup
    matrix: IntMatrix

    def __iter__(self):
        # unpacks as (target, matrix)
        return iter((self.target, self.matrix))

    def apply(self, coordinates) -> Tuple[int, ...]:
        return self.target.structure.reduce(self.matrix.apply(coordinates))

    @cached_property
    def kernel(self) -> Subquotient:
        return hom_kernel(self.matrix, self.source.structure, self.target.structure.moduli)

    def image_vectors(self) -> List[SparseVector]:
        return [sparse(self.target.structure.reduce(self.matrix.column(j))) for j in range(self.matrix.cols)]

    def is_injective(self) -> bool:
        return self.kernel.structure.is_zero

    def is_zero(self) -> bool:
        return not any(self.image_vectors())

    def is_surjective(self) -> bool:
        units = [{i: 1} for i in range(self.target.structure.rank)]
        return same_subgroup(self.image_vectors(), units, self.target.structure)


def induced_map(source: CohomologyGroup, target: CohomologyGroup,
                cochain_map: Callable[[Cochain], Cochain]) -> CohomologyMap:
    """Matrix of the map on cohomology induced by a cochain-level map."""
    columns = []
    for i, generator in enumerate(source.generators):
        coords = target.coordinates(cochain_map(generator))
        if coords is None:
            raise MembershipFailure(f"image of generator {i} is not a cocycle of the target")
        columns.append(coords)
    matrix = IntMatrix.from_columns(columns, target.structure.rank)
    return CohomologyMap(source, target, matrix)


def restriction_map(source: CohomologyGroup, H: Subgroup) -> CohomologyMap:
    """
    Restriction from G to a subgroup H.

    Args:
        source (CohomologyGroup): Plain or hyper cohomology over G.
        H (Subgroup): Subgroup of G.

    Returns:
        CohomologyMap: Target is the same kind of cohomology over `H.as_group`.
    """
    if H.parent != source.group:
        raise SchemaError("subgroup does not belong to the group of the cohomology")
    sub = H.as_group
    if source.is_hyper:
        target = hypercohomology_h1(sub, restrict_complex(source.coefficients, H))
    else:
        target = cohomology_group(sub, restrict_module(source.coefficients, H), source.degree)
    return induced_map(source, target, lambda c: c.restrict(H))


def inflation_map(projection: QuotientMap, source: CohomologyGroup) -> CohomologyMap:
    """
    Inflation along a surjection parent -> G.

    Args:
        projection (QuotientMap): Surjection onto the group of `source`.
        source (CohomologyGroup): Cohomology over G.

    Returns:
        CohomologyMap: Target is the cohomology of the inflated coefficients over the parent group.
    """
    if projection.group != source.group:
        raise SchemaError("projection does not land in the group of the cohomology")
    parent = projection.parent
    if source.is_hyper:
        target = hypercohomology_h1(parent, inflate_complex(source.coefficients, projection))
    else:
        target = cohomology_group(parent, inflate_module(source.coefficients, projection), source.degree)
    return induced_map(source, target, lambda c: c.inflate(projection))


@dataclass(frozen=True, eq=False)
class FiveTermSequence:
    """H^1(A) -> H^1(B) -> H^1(A -> B) -> H^2(A) -> H^2(B)."""

    h1_a: CohomologyGroup
    h1_b: CohomologyGroup
    h1_complex: CohomologyGroup
    h2_a: CohomologyGroup
    h2_b: CohomologyGroup
    maps: Tuple[CohomologyMap, CohomologyMap, CohomologyMap, CohomologyMap]

    @property
    def groups(self) -> Tuple[CohomologyGroup, ...]:
        return self.h1_a, self.h1_b, self.h1_complex, self.h2_a, self.h2_b

    def exactness(self) -> Dict[str, bool]:
        """Exactness at the three interior positions: kernel of the outgoing map equals image of the incoming one."""
        names = ("H1(B)", "H1(C)", "H2(A)")
        out = {}
        for name, incoming, outgoing in zip(names, self.maps, self.maps[1:]):
            out[name] = same_subgroup(
                outgoing.kernel.generators, incoming.image_vectors(), outgoing.source.structure
            )
        return out

    def is_exact(self) -> bool:
        return all(self.exactness().values())


def five_term_sequence(G: FinGroup, C: TwoTermComplex) -> FiveTermSequence:
    """
    The low-degree exact sequence of the complex [A -> B].

    Maps: α -> f∘α, β -> (0, β), (α, β) -> α, α -> f∘α.
    """
    if C.group != G:
        raise SchemaError(f"complex is not defined over {G.name}")
    h1_a = cohomology_group(G, C.A, 1)
    h1_b = cohomology_group(G, C.B, 1)
    h1_c = hypercohomology_h1(G, C)
    h2_a = cohomology_group(G, C.A, 2)
    h2_b = cohomology_group(G, C.B, 2)
    N = G.order
    zero_a2 = Cochain.zero(N, (2,), (C.A.ambient_rank,))
    maps = (
        induced_map(h1_a, h1_b, lambda c: c.apply_matrix(C.f)),
        induced_map(h1_b, h1_c, lambda c: zero_a2.join(c)),
        induced_map(h1_c, h2_a, lambda c: c.block(0)),
        induced_map(h2_a, h2_b, lambda c: c.apply_matrix(C.f)),
    )
    sequence = FiveTermSequence(h1_a, h1_b, h1_c, h2_a, h2_b, maps)
    logger.debug("five-term sequence: %s", " -> ".join(str(g.structure) for g in sequence.groups))
    return sequence
