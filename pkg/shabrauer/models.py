"""
Schemas for problem documents (input) and result documents (output).

Integers are accepted as JSON numbers or decimal strings and are always
written back as decimal strings.
"""

import re
from enum import Enum
from typing import Annotated, Any, Dict, List, Optional

from pydantic import BaseModel, BeforeValidator, ConfigDict, Field, PlainSerializer, field_validator, model_validator

from shabrauer.algebra.linalg import AbelianGroupStructure, IntMatrix
from shabrauer.sha import FieldType


def _parse_int(value: Any) -> int:
    if isinstance(value, bool):
        raise ValueError("booleans are not integers")
    if isinstance(value, int):
        return value
    if isinstance(value, str) and re.fullmatch(r"\s*[+-]?\d+\s*", value):
        return int(value)
    raise ValueError(f"expected an integer or a decimal string, got {value!r}")


DecimalInt = Annotated[int, BeforeValidator(_parse_int), PlainSerializer(str, return_type=str)]
Matrix = List[List[DecimalInt]]

_NAMED_GROUP = re.compile(r"^(C|D|S|A)(\d+)$|^(V4|Q8)$")


class ModulePreset(str, Enum):
    NORM_QUOTIENT = "norm_quotient"
    REGULAR = "regular"
    ZERO = "zero"


# Problem documents

class GroupSpec(BaseModel):
    """Exactly one of `table`, `permutations` or `named`."""

    model_config = ConfigDict(extra="forbid")

    table: Optional[Matrix] = None
    generators: Optional[List[DecimalInt]] = Field(None, description="Generator indices for a table")
    permutations: Optional[List[List[List[DecimalInt]]]] = Field(
        None, description="One list of cycles per generator, points numbered from 1"
    )
    degree: Optional[DecimalInt] = None
    named: Optional[str] = Field(None, description="C<n>, D<n>, S<n>, A<n>, V4 or Q8")
    name: str = ""

    @field_validator("named")
    @classmethod
    def validate_named(cls, v):
        if v is not None and not _NAMED_GROUP.match(v):
            raise ValueError(f"unknown group name {v!r}; use C<n>, D<n>, S<n>, A<n>, V4 or Q8")
        return v

    @model_validator(mode="after")
    def exactly_one_source(self):
        given = [k for k in ("table", "permutations", "named") if getattr(self, k) is not None]
        if len(given) != 1:
            raise ValueError(f"group needs exactly one of table, permutations, named; got {given or 'none'}")
        if self.generators is not None and self.table is None:
            raise ValueError("generators are only meaningful with a table")
        return self


class ModuleSpec(BaseModel):
    """Z^ambient_rank / im(relations), one action matrix per group generator, or a preset."""

    model_config = ConfigDict(extra="forbid")

    ambient_rank: Optional[DecimalInt] = None
    relations: Matrix = Field(default_factory=list, description="ambient_rank rows, one column per relation")
    action: List[Matrix] = Field(default_factory=list)
    preset: Optional[ModulePreset] = None

    @model_validator(mode="after")
    def check_shapes(self):
        if self.preset is not None:
            if self.ambient_rank is not None or self.relations or self.action:
                raise ValueError("a preset module takes no ambient_rank, relations or action")
            return self
        if self.ambient_rank is None:
            raise ValueError("ambient_rank is required unless a preset is given")
        m = self.ambient_rank
        if m < 0:
            raise ValueError(f"ambient_rank must be non-negative, got {m}")
        if self.relations and len(self.relations) != m:
            raise ValueError(f"relations have {len(self.relations)} rows, expected {m}")
        widths = {len(row) for row in self.relations}
        if len(widths) > 1:
            raise ValueError("relation rows have different lengths")
        return self

    def relation_matrix(self) -> IntMatrix:
        m = self.ambient_rank
        if not self.relations:
            return IntMatrix.zeros(m, 0)
        return IntMatrix.from_rows(self.relations, len(self.relations[0]))


class ComplexSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    a: str
    b: str
    map: Matrix


class HypothesesSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    field: FieldType
    has_point: bool = False
    pic_gbar_zero: bool = False
    stabilizer_connected: bool = False
    ssumult: bool = False
    h3_gm_zero: bool = False


class ProblemDocument(BaseModel):
    model_config = ConfigDict(extra="forbid")

    group: GroupSpec
    modules: Dict[str, ModuleSpec] = Field(default_factory=dict)
    complex: Optional[ComplexSpec] = None
    hypotheses: Optional[HypothesesSpec] = None

    @model_validator(mode="after")
    def names_resolve(self):
        if self.complex is not None:
            for role in ("a", "b"):
                name = getattr(self.complex, role)
                if name not in self.modules:
                    raise ValueError(f"complex.{role} refers to unknown module {name!r}")
        return self


# Result documents

class StructureModel(BaseModel):
    free_rank: DecimalInt
    invariant_factors: List[DecimalInt]

    @classmethod
    def from_structure(cls, structure: AbelianGroupStructure) -> "StructureModel":
        return cls(free_rank=structure.free_rank, invariant_factors=list(structure.invariant_factors))

    def to_structure(self) -> AbelianGroupStructure:
        return AbelianGroupStructure(self.free_rank, tuple(self.invariant_factors))


class CochainModel(BaseModel):
    """Value tables of a cochain, one per summand, indexed by encoded element tuples."""

    arities: List[DecimalInt]
    tables: List[List[List[DecimalInt]]]


class RestrictionRow(BaseModel):
    subgroup: List[DecimalInt]
    order: DecimalInt
    target: StructureModel
    matrix: Matrix
    kernel: StructureModel


class OracleModel(BaseModel):
    oracle: str
    structure: StructureModel
    agrees: bool


class DiagnosticModel(BaseModel):
    name: str
    valid: bool
    failures: List[str] = Field(default_factory=list)


class ErrorModel(BaseModel):
    type: str
    message: str
    exit_code: DecimalInt


class ResultDocument(BaseModel):
    command: str
    input_digest: Optional[str] = None
    degree: Optional[DecimalInt] = None
    structures: Dict[str, StructureModel] = Field(default_factory=dict)
    generators: List[CochainModel] = Field(default_factory=list)
    restrictions: List[RestrictionRow] = Field(default_factory=list)
    sha: Optional[StructureModel] = None
    interpretation: Optional[str] = None
    theorem: Optional[str] = None
    statement: Optional[str] = None
    caveats: List[str] = Field(default_factory=list)
    hypotheses: Optional[Dict[str, Any]] = None
    identification: Optional[Dict[str, Any]] = None
    exponents: Optional[Matrix] = None
    oracle: Optional[OracleModel] = None
    diagnostics: List[DiagnosticModel] = Field(default_factory=list)
    error: Optional[ErrorModel] = None
    exit_status: DecimalInt = 0
