# shabrauer/sha.py

"""
Ш¹_ω,alg of a two-term complex, the Brauer group report built on it, and
abelianization of finite presentations.

Ш¹_ω,alg(Γ, [A -> B]) is the subgroup of H¹(Γ, [A -> B]) of classes whose
restriction to every cyclic subgroup of Γ vanishes. Restricting to one
maximal cyclic subgroup per conjugacy class gives the same kernel as using
every cyclic subgroup.
"""

import logging
import re
import time
from dataclasses import asdict, dataclass
from enum import Enum
from multiprocessing.dummy import Pool
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple

from shabrauer.algebra.fingroup import FinGroup, Subgroup, cyclic_subgroups, cyclic_subgroups_up_to_conjugacy
from shabrauer.algebra.gmodule import GModule, TwoTermComplex, validate_complex, validate_module
from shabrauer.algebra.linalg import (
    AbelianGroupStructure,
    IntMatrix,
    Vector,
    cokernel_structure,
    dense,
    hom_kernel,
)
from shabrauer.cohomology.cochains import Cochain
from shabrauer.cohomology.groups import CohomologyGroup, cohomology_group, hypercohomology_h1
from shabrauer.cohomology.maps import CohomologyMap, restriction_map
from shabrauer.config import DEFAULT_CONFIG, Config
from shabrauer.errors import (
    InconsistentHypotheses,
    MembershipFailure,
    NotALattice,
    SchemaError,
    UnknownGenerator,
)

logger = logging.getLogger(__name__)


class FieldType(str, Enum):
    CHAR0 = "char0"
    GLOBAL = "global"
    FINITE = "finite"


class Interpretation(str, Enum):
    CHAR0_WITH_POINT_ISOMORPHISM = "Char0_WithPoint_Isomorphism"
    CHAR0_INJECTION_ONLY = "Char0_Injection_Only"
    GLOBAL_FIELD_ISOMORPHISM = "GlobalField_Isomorphism"
    FINITE_FIELD_ZERO = "FiniteField_Zero"


@dataclass(frozen=True)
class Hypotheses:
    """
    Scheme-level facts asserted by the user. None of them can be checked here;
    they are echoed in every report.

    Attributes:
        field: Type of the base field.
        has_point: X(k) is non-empty.
        pic_gbar_zero: Pic of the ambient group over the algebraic closure vanishes.
        stabilizer_connected: The geometric stabilizer is connected.
        ssumult: The geometric stabilizer is an extension of a smooth group of
            multiplicative type by a smooth connected group without characters.
        h3_gm_zero: H³(k, G_m) = 0 (an alternative to a rational point in characteristic 0).
    """

    field: FieldType
    has_point: bool = False
    pic_gbar_zero: bool = False
    stabilizer_connected: bool = False
    ssumult: bool = False
    h3_gm_zero: bool = False

    def __post_init__(self):
        object.__setattr__(self, "field", FieldType(self.field))

    def to_dict(self) -> Dict[str, object]:
        out = asdict(self)
        out["field"] = self.field.value
        return out


@dataclass(frozen=True, eq=False)
class SubgroupReport:
    """Restriction of H¹ to one cyclic subgroup and the part of H¹ it kills."""

    subgroup: Subgroup
    restriction: CohomologyMap
    kernel_structure: AbelianGroupStructure

    @property
    def target_structure(self) -> AbelianGroupStructure:
        return self.restriction.target.structure

    @property
    def matrix(self) -> IntMatrix:
        return self.restriction.matrix


@dataclass(frozen=True, eq=False)
class ShaResult:
    """
    The subgroup of H^n(Γ, C) vanishing on the listed cyclic subgroups.

    `coordinates[i]` expresses `generators[i]` in the generators of `cohomology`;
    the generators follow the coordinate order of `structure`.
    """

    structure: AbelianGroupStructure
    generators: Tuple[Cochain, ...]
    coordinates: Tuple[Vector, ...]
    cohomology: CohomologyGroup
    per_subgroup_report: Tuple[SubgroupReport, ...]
    exhaustive: bool = False

    @property
    def degree(self) -> int:
        return self.cohomology.degree

    def verify(self) -> bool:
        """
        Re-restricts every generator to every listed subgroup and asks the
        subgroup's membership oracle whether the restriction is a coboundary.
        """
        for i, cocycle in enumerate(self.generators):
            for report in self.per_subgroup_report:
                target = report.restriction.target
                coords = target.coordinates(cocycle.restrict(report.subgroup))
                if coords is None:
                    raise MembershipFailure(
                        f"restriction of generator {i} to {list(report.subgroup.element_indices)} is not a cocycle"
                    )
                if any(coords):
                    logger.warning(
                        f"generator {i} restricts to {coords} on subgroup {list(report.subgroup.element_indices)}"
                    )
                    return False
        return True


def _subgroup_list(G: FinGroup, subgroups: Optional[Sequence[Subgroup]], exhaustive: bool) -> List[Subgroup]:
    if subgroups is not None:
        for H in subgroups:
            if H.parent != G:
                raise SchemaError("subgroup does not belong to the acting group")
        return list(subgroups)
    return cyclic_subgroups(G) if exhaustive else cyclic_subgroups_up_to_conjugacy(G)


def sha_kernel(cohomology: CohomologyGroup, restrictions: Sequence[CohomologyMap]):
    """
    Joint kernel of several maps out of the same cohomology group.

    Returns:
        Subquotient: Kernel as a subgroup of the source, in source coordinates.
    """
    rank = cohomology.structure.rank
    if restrictions:
        stacked = IntMatrix.vstack(*(r.matrix for r in restrictions))
    else:
        stacked = IntMatrix.zeros(0, rank)
    moduli = tuple(d for r in restrictions for d in r.target.structure.moduli)
    return hom_kernel(stacked, cohomology.structure, moduli)


def _sha_from_cohomology(cohomology: CohomologyGroup, subgroups: List[Subgroup],
                         exhaustive: bool, config: Config) -> ShaResult:
    started = time.perf_counter()
    if config.workers > 1 and len(subgroups) > 1:
        with Pool(min(config.workers, len(subgroups))) as pool:
            restrictions = pool.map(lambda H: restriction_map(cohomology, H), subgroups)
    else:
        restrictions = [restriction_map(cohomology, H) for H in subgroups]

    source = cohomology.structure
    reports = tuple(
        SubgroupReport(H, r, hom_kernel(r.matrix, source, r.target.structure.moduli).structure)
        for H, r in zip(subgroups, restrictions)
    )
    kernel = sha_kernel(cohomology, restrictions)
    coordinates = tuple(source.reduce(dense(g, source.rank)) for g in kernel.generators)
    generators = tuple(cohomology.combination(c) for c in coordinates)
    logger.debug(
        "restricted to %d subgroups in %.3fs", len(subgroups), time.perf_counter() - started
    )
    return ShaResult(kernel.structure, generators, coordinates, cohomology, reports, exhaustive)


def sha1_omega_alg(G: FinGroup, C: TwoTermComplex, subgroups: Optional[Sequence[Subgroup]] = None, *,
                   exhaustive: bool = False, config: Optional[Config] = None) -> ShaResult:
    """
    Ш¹_ω,alg(Γ, [A -> B]).

    Args:
        G (FinGroup): Acting group Γ.
        C (TwoTermComplex): The complex, valid over G.
        subgroups (Optional[Sequence[Subgroup]]): Cyclic subgroups to restrict to.
            Defaults to maximal cyclic subgroups up to conjugacy.
        exhaustive (bool): Restrict to every cyclic subgroup instead.
        config (Optional[Config]): Thread pool size for the restrictions.

    Returns:
        ShaResult: Structure, cocycle generators and the per-subgroup restriction data.
    """
    config = config or DEFAULT_CONFIG
    if C.group != G:
        raise SchemaError(f"complex is not defined over {G.name}")
    validate_complex(C).raise_if_invalid()
    h1 = hypercohomology_h1(G, C)
    result = _sha_from_cohomology(h1, _subgroup_list(G, subgroups, exhaustive), exhaustive, config)
    logger.info(f"Sha^1_omega,alg({G.name}, [{C.A.name or 'A'} -> {C.B.name or 'B'}]) = {result.structure}")
    return result


def sha_omega_alg_module(G: FinGroup, M: GModule, n: int, subgroups: Optional[Sequence[Subgroup]] = None, *,
                         exhaustive: bool = False, config: Optional[Config] = None) -> ShaResult:
    """Ш^n_ω,alg(Γ, M) for a module, n in {1, 2}."""
    config = config or DEFAULT_CONFIG
    if n not in (1, 2):
        raise SchemaError(f"Sha of a module is computed in degrees 1 and 2, not {n}")
    if M.group != G:
        raise SchemaError(f"module {M.name!r} is not defined over {G.name}")
    validate_module(M).raise_if_invalid()
    cohomology = cohomology_group(G, M, n)
    result = _sha_from_cohomology(cohomology, _subgroup_list(G, subgroups, exhaustive), exhaustive, config)
    logger.info(f"Sha^{n}_omega,alg({G.name}, {M.name or 'M'}) = {result.structure}")
    return result


# Brauer group report

@dataclass(frozen=True)
class IdentificationCheck:
    """
    Whether the group computed over Γ equals the one over the base field.

    It does when Ш²_ω,alg(Γ, T̂) = 0 or when Ŝ is torsion-free (S a torus).
    """

    sha2_t_hat: AbelianGroupStructure
    s_hat_torsion_free: bool

    @property
    def holds(self) -> bool:
        return self.sha2_t_hat.is_zero or self.s_hat_torsion_free


_THEOREMS = {
    Interpretation.CHAR0_WITH_POINT_ISOMORPHISM: (
        "characteristic-zero Brauer formula",
        "Br1 X^c / Br k is isomorphic to Sha^1_omega,alg([T^ -> S^])",
    ),
    Interpretation.CHAR0_INJECTION_ONLY: (
        "characteristic-zero Brauer formula",
        "Br1 X^c / Br k injects into Sha^1_omega,alg([T^ -> S^])",
    ),
    Interpretation.GLOBAL_FIELD_ISOMORPHISM: (
        "global-field Brauer formula",
        "Br1 X^c / Br K is isomorphic to Sha^1_omega(K, [T^ -> S^]) = Sha^1_omega,alg",
    ),
    Interpretation.FINITE_FIELD_ZERO: (
        "finite-field vanishing theorem",
        "Br1 X^c = 0",
    ),
}


@dataclass(frozen=True, eq=False)
class BrauerReport:
    sha: ShaResult
    interpretation: Interpretation
    hypotheses: Hypotheses
    identification: IdentificationCheck
    upgrades_to_full_brauer: bool

    @property
    def theorem(self) -> str:
        return _THEOREMS[self.interpretation][0]

    @property
    def statement(self) -> str:
        text = _THEOREMS[self.interpretation][1]
        if self.upgrades_to_full_brauer:
            if self.interpretation is Interpretation.FINITE_FIELD_ZERO:
                text += "; Br X^c has no prime-to-p part when the stabilizer is also reductive"
            elif self.interpretation is Interpretation.GLOBAL_FIELD_ISOMORPHISM:
                text += "; connected stabilizer (connected-stabilizer corollary): the same holds for " \
                        "the prime-to-p part of Br X^c / Br K, and for all of it in characteristic 0"
            else:
                text += "; connected stabilizer (connected-stabilizer corollary): Br1 may be replaced by Br"
        return text

    @property
    def caveats(self) -> Tuple[str, ...]:
        out = ["hypotheses on X, G and H are asserted by the user and were not checked"]
        if not self.identification.holds:
            out.append(
                "Sha^2_omega,alg(T^) is nonzero and S is not a torus: the group computed over the "
                "splitting group may differ from the one over the base field"
            )
        return tuple(out)


def _interpret(G: FinGroup, hypotheses: Hypotheses) -> Interpretation:
    h = hypotheses
    if h.field is FieldType.FINITE:
        if not G.is_cyclic:
            raise InconsistentHypotheses(
                f"finite-field Galois groups are procyclic but {G.name or 'the group'} is not cyclic"
            )
        if not (h.stabilizer_connected or (h.ssumult and h.pic_gbar_zero)):
            raise InconsistentHypotheses(
                "finite-field vanishing needs a connected stabilizer, or ssumult together with Pic Gbar = 0"
            )
        return Interpretation.FINITE_FIELD_ZERO
    missing = [name for name in ("pic_gbar_zero", "ssumult") if not getattr(h, name)]
    if missing:
        raise InconsistentHypotheses(f"the {h.field.value} Brauer formula requires {', '.join(missing)}")
    if h.field is FieldType.GLOBAL:
        return Interpretation.GLOBAL_FIELD_ISOMORPHISM
    if h.has_point or h.h3_gm_zero:
        return Interpretation.CHAR0_WITH_POINT_ISOMORPHISM
    return Interpretation.CHAR0_INJECTION_ONLY


def brauer_group(G: FinGroup, T_hat: GModule, S_hat: GModule, f: IntMatrix, hypotheses: Hypotheses,
                 subgroups: Optional[Sequence[Subgroup]] = None, *,
                 config: Optional[Config] = None) -> BrauerReport:
    """
    The algebraic Brauer group of a smooth compactification of G/H, via Ш¹_ω,alg([T̂ -> Ŝ]).

    Args:
        G (FinGroup): Galois group of a finite extension splitting T and S.
        T_hat (GModule): Characters of the maximal toric quotient of G; must be a lattice.
        S_hat (GModule): Characters of the multiplicative-type quotient of the stabilizer.
        f (IntMatrix): Restriction of characters T̂ -> Ŝ.
        hypotheses (Hypotheses): What the user asserts about the field and the groups.

    Returns:
        BrauerReport: The Sha computation, the applicable theorem and its caveats.
    """
    config = config or DEFAULT_CONFIG
    if not T_hat.is_torsion_free:
        raise NotALattice(f"T^ has torsion {T_hat.structure}; characters of a torus form a lattice")
    interpretation = _interpret(G, hypotheses)
    sha = sha1_omega_alg(G, TwoTermComplex(T_hat, S_hat, f, "[T^ -> S^]"), subgroups, config=config)
    if interpretation is Interpretation.FINITE_FIELD_ZERO and not sha.structure.is_zero:
        raise MembershipFailure(f"Sha over a cyclic group came out as {sha.structure}")

    if S_hat.is_torsion_free or interpretation is Interpretation.FINITE_FIELD_ZERO:
        # cyclic splitting groups have no Sha^2_omega,alg either
        sha2 = AbelianGroupStructure.zero()
    else:
        sha2 = sha_omega_alg_module(G, T_hat, 2, subgroups, config=config).structure
    identification = IdentificationCheck(sha2, S_hat.is_torsion_free)

    report = BrauerReport(sha, interpretation, hypotheses, identification, hypotheses.stabilizer_connected)
    logger.info(f"{report.theorem}: {report.statement} ({sha.structure})")
    return report


# Abelianization of finite presentations

class Presentation(NamedTuple):
    generators: Tuple[str, ...]
    relators: Tuple[str, ...]


class Abelianization(NamedTuple):
    structure: AbelianGroupStructure
    exponents: IntMatrix


_TOKEN = re.compile(r"\s*(?:(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<power>\^\s*-?\s*\d+)|(?P<punct>[\[\]\(\),*]))")


class _WordParser:
    """
    Exponent sums of words in the generators.

    Grammar: word := factor ('*'? factor)*, factor := atom ('^' int)?,
    atom := name | '(' word ')' | '[' word ',' word ']'.
    A commutator has zero exponent sum.
    """

    def __init__(self, text: str, generators: Sequence[str]):
        self.text = text
        self.index = {g: i for i, g in enumerate(generators)}
        self.tokens: List[Tuple[str, str]] = []
        pos = 0
        stripped = text.rstrip()
        while pos < len(stripped):
            match = _TOKEN.match(stripped, pos)
            if not match:
                raise SchemaError(f"cannot parse relator {text!r} at position {pos}")
            kind = match.lastgroup
            self.tokens.append((kind, match.group(kind)))
            pos = match.end()
        self.pos = 0

    def _peek(self) -> Optional[Tuple[str, str]]:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def _expect(self, punct: str) -> None:
        token = self._peek()
        if token != ("punct", punct):
            raise SchemaError(f"expected {punct!r} in relator {self.text!r}")
        self.pos += 1

    def _letters(self, name: str) -> List[int]:
        if name in self.index:
            return [self.index[name]]
        # juxtaposed one-letter generators, e.g. "xy"
        if all(ch in self.index for ch in name):
            return [self.index[ch] for ch in name]
        raise UnknownGenerator(f"unknown generator {name!r} in relator {self.text!r}", witness=(name,))

    def parse(self) -> List[int]:
        exponents = self._word()
        if self._peek() is not None:
            raise SchemaError(f"unexpected {self._peek()[1]!r} in relator {self.text!r}")
        return exponents

    def _word(self) -> List[int]:
        total = [0] * len(self.index)
        while True:
            token = self._peek()
            if token is None or token in (("punct", ")"), ("punct", "]"), ("punct", ",")):
                return total
            if token == ("punct", "*"):
                self.pos += 1
                continue
            for i, v in enumerate(self._factor()):
                total[i] += v

    def _factor(self) -> List[int]:
        kind, value = self._peek()
        self.pos += 1
        if kind == "name":
            letters = self._letters(value)
            exponents = [0] * len(self.index)
            for i in letters[:-1]:
                exponents[i] += 1
            power = self._power()
            exponents[letters[-1]] += power
            return exponents
        if value == "(":
            inner = self._word()
            self._expect(")")
            power = self._power()
            return [power * v for v in inner]
        if value == "[":
            self._word()
            self._expect(",")
            self._word()
            self._expect("]")
            self._power()
            return [0] * len(self.index)
        raise SchemaError(f"unexpected {value!r} in relator {self.text!r}")

    def _power(self) -> int:
        token = self._peek()
        if token is not None and token[0] == "power":
            self.pos += 1
            return int(token[1].lstrip("^").replace(" ", ""))
        return 1


def parse_word(word: str, generators: Sequence[str]) -> List[int]:
    """Exponent sum of each generator in `word`."""
    return _WordParser(word, generators).parse()


def abelianize_presentation(generators: Sequence[str], relators: Sequence[str]) -> Abelianization:
    """
    Abelianization of ⟨generators | relators⟩.

    Args:
        generators (Sequence[str]): Generator names, distinct.
        relators (Sequence[str]): Words such as "x^4", "[x,y]z^-2" or "x*y^-1".

    Returns:
        Abelianization: Structure and the exponent matrix (one column per relator).
    """
    generators = tuple(generators)
    if len(set(generators)) != len(generators):
        raise SchemaError(f"repeated generator names in {list(generators)}")
    columns = [parse_word(r, generators) for r in relators]
    exponents = IntMatrix.from_columns(columns, len(generators))
    structure = cokernel_structure(exponents)
    logger.info(f"abelianization of <{', '.join(generators)} | {len(columns)} relators> = {structure}")
    return Abelianization(structure, exponents)


def presentation_e(p: int) -> Presentation:
    """⟨x, y, z | x^(p²), y^(p²), z^(p²), [x, y] z^(-p)⟩."""
    if p < 2:
        raise SchemaError(f"prime {p} must be at least 2")
    q = p * p
    return Presentation(("x", "y", "z"), (f"x^{q}", f"y^{q}", f"z^{q}", f"[x,y]z^-{p}"))


def presentation_h0() -> Presentation:
    """⟨x, y, z | x², y⁴, z⁴, [x, y] z^(-2)⟩."""
    return Presentation(("x", "y", "z"), ("x^2", "y^4", "z^4", "[x,y]z^-2"))


PRESETS = {
    "e": presentation_e,
    "h0": lambda p=None: presentation_h0(),
}
