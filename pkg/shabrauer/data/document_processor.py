# shabrauer/data/document_processor.py

import dataclasses
import logging
from dataclasses import dataclass
from math import factorial
from typing import Dict, Optional

from shabrauer.algebra.fingroup import (
    FinGroup,
    alternating_group,
    cyclic_group,
    dihedral_group,
    group_from_permutations,
    group_from_table,
    klein_four_group,
    parse_permutation,
    quaternion_group,
    symmetric_group,
)
from shabrauer.algebra.gmodule import (
    GModule,
    ModuleDiagnostics,
    TwoTermComplex,
    norm_quotient,
    regular_module,
    validate_complex,
    validate_module,
)
from shabrauer.algebra.linalg import IntMatrix
from shabrauer.config import DEFAULT_CONFIG, Config
from shabrauer.errors import DimensionMismatch, OrderBoundExceeded, SchemaError
from shabrauer.models import GroupSpec, ModulePreset, ModuleSpec, ProblemDocument
from shabrauer.sha import Hypotheses

logger = logging.getLogger(__name__)

_NAMED_BUILDERS = {
    "C": cyclic_group,
    "D": dihedral_group,
    "S": symmetric_group,
    "A": alternating_group,
}


@dataclass(frozen=True, eq=False)
class Problem:
    group: FinGroup
    modules: Dict[str, GModule]
    complex: Optional[TwoTermComplex] = None
    hypotheses: Optional[Hypotheses] = None


class DocumentProcessor:
    """Turns a validated ProblemDocument into groups, modules and complexes."""

    def __init__(self, config: Optional[Config] = None):
        self.config = config or DEFAULT_CONFIG

    def build_group(self, spec: GroupSpec) -> FinGroup:
        bound = self.config.max_group_order
        if spec.named is not None:
            if spec.named == "V4":
                group = klein_four_group()
            elif spec.named == "Q8":
                group = quaternion_group()
            else:
                family, n = spec.named[0], int(spec.named[1:])
                if n < 1:
                    raise SchemaError(f"{spec.named} is not a group", location="group.named")
                expected = {"C": n, "D": 2 * n, "S": factorial(n), "A": max(factorial(n) // 2, 1)}[family]
                if expected > bound:
                    raise OrderBoundExceeded(f"{spec.named} has order {expected}, above --max-order {bound}",
                                             witness=(expected,))
                group = _NAMED_BUILDERS[family](n)
        elif spec.table is not None:
            group = group_from_table(spec.table, spec.generators, spec.name)
        else:
            points = [p for cycles in spec.permutations for cycle in cycles for p in cycle]
            degree = spec.degree if spec.degree is not None else max(points, default=1)
            generators = [parse_permutation(cycles, degree) for cycles in spec.permutations]
            group = group_from_permutations(generators, bound, spec.name)
        if group.order > bound:
            raise OrderBoundExceeded(f"group of order {group.order} exceeds --max-order {bound}",
                                     witness=(group.order,))
        logger.debug(f"Built group {group.name or '(unnamed)'} of order {group.order}")
        return group

    def build_module(self, G: FinGroup, name: str, spec: ModuleSpec) -> GModule:
        if spec.preset is ModulePreset.NORM_QUOTIENT:
            return dataclasses.replace(norm_quotient(G), name=name)
        if spec.preset is ModulePreset.REGULAR:
            return dataclasses.replace(regular_module(G), name=name)
        if spec.preset is ModulePreset.ZERO:
            return dataclasses.replace(GModule.zero(G), name=name)
        m = spec.ambient_rank
        action = []
        for pos, rows in enumerate(spec.action):
            try:
                action.append(IntMatrix.from_rows(rows, m))
            except DimensionMismatch as e:
                raise SchemaError(f"action matrix of generator #{pos}: {e.message}",
                                  location=f"modules.{name}.action.{pos}") from e
        return GModule(G, m, spec.relation_matrix(), tuple(action), name)

    def build_modules(self, G: FinGroup, document: ProblemDocument) -> Dict[str, GModule]:
        return {name: self.build_module(G, name, document.modules[name]) for name in sorted(document.modules)}

    def build_complex(self, modules: Dict[str, GModule], document: ProblemDocument) -> TwoTermComplex:
        if document.complex is None:
            raise SchemaError("the document has no complex section", location="complex")
        spec = document.complex
        A, B = modules[spec.a], modules[spec.b]
        try:
            f = IntMatrix.from_rows(spec.map, A.ambient_rank)
        except DimensionMismatch as e:
            raise SchemaError(e.message, location="complex.map") from e
        return TwoTermComplex(A, B, f, f"[{spec.a} -> {spec.b}]")

    @staticmethod
    def build_hypotheses(document: ProblemDocument) -> Hypotheses:
        if document.hypotheses is None:
            raise SchemaError("the document has no hypotheses section", location="hypotheses")
        return Hypotheses(**document.hypotheses.model_dump(mode="json"))

    def process(self, document: ProblemDocument, validate: bool = True) -> Problem:
        """
        Builds every object the document describes.

        Args:
            document (ProblemDocument): A schema-valid document.
            validate (bool): Raise on the first module or complex failing validation.

        Returns:
            Problem: Group, modules by name, and the complex and hypotheses when present.
        """
        group = self.build_group(document.group)
        modules = self.build_modules(group, document)
        complex_ = self.build_complex(modules, document) if document.complex is not None else None
        hypotheses = self.build_hypotheses(document) if document.hypotheses is not None else None
        if validate:
            for diagnostics in self.diagnostics(modules, complex_).values():
                diagnostics.raise_if_invalid()
        return Problem(group, modules, complex_, hypotheses)

    @staticmethod
    def diagnostics(modules: Dict[str, GModule],
                    complex_: Optional[TwoTermComplex]) -> Dict[str, ModuleDiagnostics]:
        out = {name: validate_module(M) for name, M in modules.items()}
        if complex_ is not None:
            out["complex"] = validate_complex(complex_)
        return out
