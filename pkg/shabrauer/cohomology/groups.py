# shabrauer/cohomology/groups.py

import logging
import time
from dataclasses import dataclass, field
from typing import Optional, Sequence, Tuple

from shabrauer.algebra.fingroup import FinGroup
from shabrauer.algebra.gmodule import GModule, TwoTermComplex
from shabrauer.algebra.linalg import (
    AbelianGroupStructure,
    LatticeBasis,
    Subquotient,
    Vector,
    sparse_kernel,
)
from shabrauer.cohomology.cochains import Coefficients, Cochain, CochainComplexSlice, TotalComplex
from shabrauer.errors import DegreeUnsupported, MembershipFailure, SchemaError

logger = logging.getLogger(__name__)

SUPPORTED_DEGREES = (0, 1, 2)


@dataclass(frozen=True, eq=False)
class CohomologyGroup:
    """
    H^n of a module, or H^1 of a two-term complex, with explicit representatives.

    `generators[i]` is a cocycle for the i-th cyclic coordinate of `structure`
    (torsion coordinates first). `coordinates` is the membership oracle.
    """

    group: FinGroup
    degree: int
    coefficients: Coefficients
    structure: AbelianGroupStructure
    generators: Tuple[Cochain, ...]
    complex: TotalComplex = field(repr=False)
    quotient: Subquotient = field(repr=False)

    @property
    def is_hyper(self) -> bool:
        return isinstance(self.coefficients, TwoTermComplex)

    def coordinates(self, cochain: Cochain) -> Optional[Vector]:
        """
        Expresses a cocycle in terms of the generators.

        Args:
            cochain (Cochain): A cochain of matching degree.

        Returns:
            Optional[Vector]: Coordinates of its class (torsion ones reduced into [0, d)),
            or None when the cochain is not a cocycle.
        """
        return self.quotient.coordinates(self.complex.flatten(cochain, self.degree))

    def is_cocycle(self, cochain: Cochain) -> bool:
        return self.coordinates(cochain) is not None

    def is_coboundary(self, cochain: Cochain) -> bool:
        coords = self.coordinates(cochain)
        return coords is not None and not any(coords)

    def class_of(self, cochain: Cochain) -> Vector:
        coords = self.coordinates(cochain)
        if coords is None:
            raise MembershipFailure(f"cochain is not a cocycle in degree {self.degree}")
        return coords

    def combination(self, coefficients: Sequence[int]) -> Cochain:
        """The cocycle sum(c_i · generator_i)."""
        if len(coefficients) != self.structure.rank:
            raise SchemaError(f"{len(coefficients)} coefficients for {self.structure.rank} generators")
        return self.complex.unflatten(self.quotient.combine(coefficients), self.degree)

    def __repr__(self) -> str:
        kind = "H^1 of complex" if self.is_hyper else f"H^{self.degree}"
        return f"CohomologyGroup({kind} over {self.group.name}: {self.structure})"


def _compute(coefficients: Coefficients, degree: int) -> CohomologyGroup:
    started = time.perf_counter()
    total = TotalComplex(coefficients)
    cochains: CochainComplexSlice = total.slice(degree)
    dim, dim_next = cochains.dimensions[1], cochains.dimensions[2]

    # cocycles: x with d x in the lifted relations, i.e. kernel of [d | -R]
    defects = [{i: -d} for i, d in enumerate(cochains.moduli[2]) if d]
    kernel = sparse_kernel(list(cochains.outgoing) + defects, dim_next)
    cocycles = LatticeBasis([{i: v for i, v in vec.items() if i < dim} for vec in kernel], dim)

    boundaries = list(cochains.incoming) + [{i: d} for i, d in enumerate(cochains.moduli[1]) if d]
    quotient = Subquotient(cocycles, boundaries)
    generators = tuple(total.unflatten(g, degree) for g in quotient.generators)
    logger.debug(
        "degree %d over %s: %d cochains, cocycle rank %d, %.3fs",
        degree, total.group.name, dim, cocycles.rank, time.perf_counter() - started,
    )
    return CohomologyGroup(total.group, degree, coefficients, quotient.structure, generators, total, quotient)


def cohomology_group(G: FinGroup, M: GModule, n: int) -> CohomologyGroup:
    """
    Bar-resolution cohomology H^n(G, M) for n in {0, 1, 2}.

    Args:
        G (FinGroup): Acting group.
        M (GModule): Coefficients over G.
        n (int): Degree.

    Returns:
        CohomologyGroup: Structure, cocycle representatives and membership oracle.
    """
    if n not in SUPPORTED_DEGREES:
        raise DegreeUnsupported(f"degree {n} is not supported (only 0, 1, 2)", witness=(n,))
    if M.group != G:
        raise SchemaError(f"module {M.name!r} is not defined over {G.name}")
    result = _compute(M, n)
    logger.info(f"H^{n}({G.name}, {M.name or 'M'}) = {result.structure}")
    return result


def hypercohomology_h1(G: FinGroup, C: TwoTermComplex) -> CohomologyGroup:
    """
    H^1(G, [A -> B]) with A in degree -1, via the cone T^n = C^(n+1)(A) + C^n(B).

    Args:
        G (FinGroup): Acting group.
        C (TwoTermComplex): The complex.

    Returns:
        CohomologyGroup: Degree-1 hypercohomology; cochains have two summands (arity 2 on A, 1 on B).
    """
    if C.group != G:
        raise SchemaError(f"complex is not defined over {G.name}")
    result = _compute(C, 1)
    logger.info(f"H^1({G.name}, [{C.A.name or 'A'} -> {C.B.name or 'B'}]) = {result.structure}")
    return result


def cochain_complex_slice(coefficients: Coefficients, n: int) -> CochainComplexSlice:
    """Degrees n-1, n, n+1 of the complex computing the cohomology of `coefficients`."""
    return TotalComplex(coefficients).slice(n)
