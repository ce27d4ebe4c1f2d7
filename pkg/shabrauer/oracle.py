# shabrauer/oracle.py

"""
Independent checks of the cohomology engine.

Finite coefficients are handled by enumerating normalized cocycles and
coboundaries outright. Lattices are handled by dimension shifting through
the coinduced module Maps(G, M), which is acyclic. Both paths read the raw
presentation of a module (ambient rank, relation columns, generator matrices):
elements are enumerated with numpy, lattices are reduced by a small Euclidean
echelon kept in this module, and invariant factors come from sympy. Nothing
here goes through the bar complexes, the Smith eliminator or the canonical
coordinates of `shabrauer.algebra`.
"""

import itertools
import logging
from collections import defaultdict, deque
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from sympy import ZZ, Matrix, factorint

try:
    from sympy.core.intfunc import igcdex
except ImportError:  # sympy < 1.13
    from sympy.core.numbers import igcdex
from sympy.matrices.normalforms import smith_normal_form

from shabrauer.algebra.fingroup import FinGroup
from shabrauer.algebra.gmodule import GModule, TwoTermComplex
from shabrauer.algebra.linalg import AbelianGroupStructure
from shabrauer.config import Config
from shabrauer.errors import BudgetExceeded, DegreeUnsupported, MembershipFailure, NotALattice, NotFinite, SchemaError

logger = logging.getLogger(__name__)

_Vector = Dict[int, int]


@dataclass(frozen=True)
class OracleBudget:
    """Caps on the work an oracle may do: search nodes plus enumerated cochains, and the group order."""

    max_enumeration: int = 10 ** 7
    max_group_order: int = 12

    def __post_init__(self):
        if self.max_enumeration < 1 or self.max_group_order < 1:
            raise ValueError(f"oracle budget caps must be positive: {self}")

    @classmethod
    def from_config(cls, config: Config) -> "OracleBudget":
        return cls(config.oracle_max_enumeration, config.oracle_max_group_order)

    def check_group(self, G: FinGroup) -> None:
        if G.order > self.max_group_order:
            raise BudgetExceeded(
                f"group of order {G.order} exceeds the oracle bound {self.max_group_order}",
                witness=(G.order,),
            )


class _Meter:
    def __init__(self, budget: OracleBudget):
        self.limit = budget.max_enumeration
        self.used = 0

    def charge(self, amount: int = 1) -> None:
        self.used += amount
        if self.used > self.limit:
            raise BudgetExceeded(f"oracle enumeration exceeded {self.limit} steps", witness=(self.limit,))


# Structures

def _structure(free_rank: int, cyclic_orders: Sequence[int]) -> AbelianGroupStructure:
    """Invariant factors of Z^free_rank + sum of Z/n, assembled from prime powers."""
    powers: Dict[int, List[int]] = defaultdict(list)
    for n in cyclic_orders:
        for p, e in factorint(abs(int(n))).items():
            powers[p].append(p ** e)
    length = max((len(v) for v in powers.values()), default=0)
    factors = [1] * length
    for p, values in powers.items():
        for k, q in enumerate(sorted(values, reverse=True)):
            factors[k] *= q
    return AbelianGroupStructure(free_rank, tuple(sorted(factors)))


def _cokernel(n: int, columns: Sequence[_Vector]) -> AbelianGroupStructure:
    """Z^n modulo the span of `columns`, read off sympy's Smith form."""
    columns = [column for column in columns if any(column.values())]
    if n == 0 or not columns:
        return AbelianGroupStructure(n)
    size = max(n, len(columns))
    dense = [[0] * size for _ in range(size)]
    for j, column in enumerate(columns):
        for i, x in column.items():
            dense[i][j] = x
    D = smith_normal_form(Matrix(dense), domain=ZZ)
    diagonal = [abs(int(D[i, i])) for i in range(size)]
    nonzero = [d for d in diagonal if d]
    return _structure(n - len(nonzero), [d for d in nonzero if d > 1])


def presentation_structure(M: GModule) -> AbelianGroupStructure:
    """Z^m / im(relations) straight from the relation matrix."""
    return _cokernel(M.ambient_rank, M.relations.to_sparse_columns())


# Lattices

def _combine(a: int, u: _Vector, b: int, v: _Vector) -> _Vector:
    out = {k: a * x for k, x in u.items()}
    for k, x in v.items():
        out[k] = out.get(k, 0) + b * x
    return {k: x for k, x in out.items() if x}


class _Echelon:
    """
    A sublattice of Z^n held as echelon vectors.

    The pivot of a vector is its smallest index; pivots are distinct and their
    entries positive. Inserting a vector only applies unimodular steps.
    """

    def __init__(self, vectors: Sequence[_Vector] = ()):
        self.pivots: Dict[int, _Vector] = {}
        for vector in vectors:
            self.add(vector)

    def add(self, vector: _Vector) -> None:
        v = {k: x for k, x in vector.items() if x}
        while v:
            i = min(v)
            p = self.pivots.get(i)
            if p is None:
                self.pivots[i] = v if v[i] > 0 else {k: -x for k, x in v.items()}
                return
            a, b = p[i], v[i]
            if b % a == 0:
                v = _combine(1, v, -(b // a), p)
                continue
            x, y, g = igcdex(a, b)
            x, y, g = int(x), int(y), abs(int(g))
            self.pivots[i] = _combine(x, p, y, v)
            v = _combine(b // g, p, -(a // g), v)

    @property
    def keys(self) -> List[int]:
        return sorted(self.pivots)

    @property
    def basis(self) -> List[_Vector]:
        return [self.pivots[k] for k in self.keys]

    def coordinates(self, vector: _Vector) -> Optional[List[int]]:
        """Coefficients on `basis`, or None outside the lattice."""
        position = {k: s for s, k in enumerate(self.keys)}
        out = [0] * len(position)
        v = {k: x for k, x in vector.items() if x}
        while v:
            i = min(v)
            p = self.pivots.get(i)
            if p is None or v[i] % p[i]:
                return None
            c = v[i] // p[i]
            out[position[i]] = c
            v = _combine(1, v, -c, p)
        return out


def _kernel(columns: Sequence[_Vector], nrows: int) -> List[_Vector]:
    """Z-basis of {x : sum_j x_j columns[j] = 0}, from the echelon of [A; I]."""
    lattice = _Echelon()
    for j, column in enumerate(columns):
        vector = dict(column)
        vector[nrows + j] = 1
        lattice.add(vector)
    return [
        {k - nrows: x for k, x in lattice.pivots[i].items()} for i in lattice.keys if i >= nrows
    ]


def _quotient(lattice: _Echelon, generators: Sequence[_Vector]) -> AbelianGroupStructure:
    """lattice / span(generators); every generator must lie in the lattice."""
    columns = []
    for w in generators:
        coords = lattice.coordinates(w)
        if coords is None:
            raise MembershipFailure("a generator of the subgroup lies outside the lattice")
        columns.append({s: c for s, c in enumerate(coords) if c})
    return _cokernel(len(lattice.pivots), columns)


def _element_matrices(G: FinGroup, generators: Sequence[np.ndarray], dim: int) -> List[np.ndarray]:
    """ρ(x) for every element, composed along the Cayley graph: ρ(x·g) = ρ(x)ρ(g)."""
    mats: Dict[int, np.ndarray] = {G.identity: np.eye(dim, dtype=np.int64)}
    queue = deque([G.identity])
    while queue:
        x = queue.popleft()
        for pos, g in enumerate(G.generator_indices):
            y = G.table[x][g]
            if y not in mats:
                mats[y] = mats[x] @ generators[pos]
                queue.append(y)
    return [mats[a] for a in G.elements]


def _raw_actions(M: GModule) -> List[np.ndarray]:
    m = M.ambient_rank
    return [np.array(rho.to_rows(), dtype=np.int64).reshape(m, m) for rho in M.action]


# Brute force for finite modules

class _ElementTables:
    """
    A finite module as integers 0..|M|-1 with addition, negation and action tables.

    Elements are the presentation vectors reduced against a triangular basis of
    the relation lattice: 0 <= v_j < pivot_j.
    """

    def __init__(self, M: GModule, order: int, meter: _Meter):
        m = M.ambient_rank
        relations = _Echelon(M.relations.to_sparse_columns())
        if relations.keys != list(range(m)):
            raise MembershipFailure(f"relations of {M.name or 'module'} do not have full rank")
        self.moduli = tuple(relations.pivots[j][j] for j in range(m))
        self.size = int(np.prod(self.moduli, dtype=object))
        if self.size != order:
            raise MembershipFailure(f"{self.size} reduced vectors for a module of order {order}")
        meter.charge(self.size * self.size)
        self._basis = np.zeros((m, m), dtype=np.int64)
        for j in range(m):
            for i, x in relations.pivots[j].items():
                self._basis[i, j] = x
        self.elements = np.array(list(np.ndindex(*self.moduli)), dtype=np.int64).reshape(self.size, m)
        self.add = self._index(self.elements[:, None, :] + self.elements[None, :, :])
        self.neg = self._index(-self.elements)
        rho = _element_matrices(M.group, _raw_actions(M), m)
        self.act = [self._index(self.elements @ matrix.T) for matrix in rho]

    def _index(self, values: np.ndarray) -> np.ndarray:
        reduced = np.array(values, dtype=np.int64)
        for j, d in enumerate(self.moduli):
            # column j of the basis is zero above row j
            q = np.floor_divide(reduced[..., j], d)
            reduced = reduced - q[..., None] * self._basis[:, j]
        return np.ravel_multi_index(tuple(np.moveaxis(reduced, -1, 0)), self.moduli)

    def multiple(self, k: int) -> np.ndarray:
        return self._index(k * self.elements)


# One term of a linear identity: sign, acting element (None for the identity), cell (None for zero)
_Term = Tuple[int, Optional[int], Optional[int]]


def _solve_identities(cell_count: int, identities: Sequence[Sequence[_Term]], tables: _ElementTables,
                      inverses: Sequence[int], meter: _Meter) -> List[Tuple[int, ...]]:
    """All assignments of module elements to cells satisfying every identity, by backtracking."""
    add, neg, act = tables.add, tables.neg, tables.act
    identities = [[t for t in identity if t[2] is not None] for identity in identities]
    touching: List[List[int]] = [[] for _ in range(cell_count)]
    for k, identity in enumerate(identities):
        for _, _, cell in identity:
            if k not in touching[cell]:
                touching[cell].append(k)
    assignment = [-1] * cell_count
    solutions: List[Tuple[int, ...]] = []

    def propagate(cell: int, trail: List[int]) -> bool:
        queue = deque([cell])
        while queue:
            current = queue.popleft()
            for k in touching[current]:
                total, unknown, pending = 0, None, 0
                for term in identities[k]:
                    sign, g, c = term
                    x = assignment[c]
                    if x < 0:
                        pending += 1
                        unknown = term
                        continue
                    if g is not None:
                        x = act[g][x]
                    total = add[total][x if sign > 0 else neg[x]]
                if pending > 1:
                    continue
                if pending == 0:
                    if total:
                        return False
                    continue
                sign, g, c = unknown
                # sign * (g . x) + total = 0
                x = neg[total] if sign > 0 else total
                if g is not None:
                    x = act[inverses[g]][x]
                assignment[c] = int(x)
                trail.append(c)
                queue.append(c)
        return True

    def search(position: int) -> None:
        meter.charge()
        while position < cell_count and assignment[position] >= 0:
            position += 1
        if position == cell_count:
            solutions.append(tuple(assignment))
            return
        for value in range(tables.size):
            trail = [position]
            assignment[position] = value
            if propagate(position, trail):
                search(position + 1)
            for c in trail:
                assignment[c] = -1

    search(0)
    return solutions


def _quotient_structure(cocycles: np.ndarray, coboundaries: set, tables: _ElementTables) -> AbelianGroupStructure:
    """Structure of Z/B from the sizes of its p^k-torsion subgroups."""
    order, remainder = divmod(len(cocycles), len(coboundaries))
    if remainder:
        raise MembershipFailure(f"{len(coboundaries)} coboundaries do not divide {len(cocycles)} cocycles")
    cyclic_orders: List[int] = []
    for p in sorted(factorint(order)):
        # at_least[k - 1]: number of cyclic p-factors of order >= p^k
        at_least: List[int] = []
        previous = 1
        while True:
            multiplied = tables.multiple(p ** (len(at_least) + 1))[cocycles].astype(np.int64)
            torsion = sum(row.tobytes() in coboundaries for row in multiplied) // len(coboundaries)
            if torsion == previous:
                break
            ratio, rank = torsion // previous, 0
            while ratio > 1:
                ratio //= p
                rank += 1
            at_least.append(rank)
            previous = torsion
        for k, rank in enumerate(at_least, start=1):
            following = at_least[k] if k < len(at_least) else 0
            cyclic_orders.extend([p ** k] * (rank - following))
    return _structure(0, cyclic_orders)


def brute_force_cohomology(G: FinGroup, M: GModule, n: int,
                           budget: Optional[OracleBudget] = None) -> AbelianGroupStructure:
    """
    H^n(G, M) for finite M, n in {1, 2}, by enumerating normalized cochains.

    Args:
        G (FinGroup): Acting group, at most `budget.max_group_order` elements.
        M (GModule): A finite module over G.
        n (int): Degree.
        budget (Optional[OracleBudget]): Work caps.

    Returns:
        AbelianGroupStructure: Structure of Z^n / B^n.
    """
    budget = budget or OracleBudget()
    if n not in (1, 2):
        raise DegreeUnsupported(f"brute force covers degrees 1 and 2, not {n}", witness=(n,))
    if M.group != G:
        raise SchemaError(f"module {M.name!r} is not defined over {G.name}")
    module_structure = presentation_structure(M)
    if not module_structure.is_finite:
        raise NotFinite(f"{M.name or 'module'} has free rank {module_structure.free_rank}")
    budget.check_group(G)
    if module_structure.is_zero or G.order == 1:
        return AbelianGroupStructure.zero()

    meter = _Meter(budget)
    tables = _ElementTables(M, module_structure.order, meter)
    table, e = G.table, G.identity
    others = [g for g in G.elements if g != e]

    if n == 1:
        cell = {g: k for k, g in enumerate(others)}
        identities = [
            [(1, None, cell.get(table[g][h])), (-1, None, cell[g]), (-1, g, cell[h])]
            for g in others for h in others
        ]
        cocycles = _solve_identities(len(others), identities, tables, G.inverses, meter)
        coboundaries = []
        for m in range(tables.size):
            meter.charge()
            coboundaries.append([tables.add[tables.act[g][m]][tables.neg[m]] for g in others])
    else:
        cell = {(g, h): k for k, (g, h) in enumerate(itertools.product(others, repeat=2))}
        identities = [
            [
                (1, g, cell[(h, k)]),
                (-1, None, cell.get((table[g][h], k))),
                (1, None, cell.get((g, table[h][k]))),
                (-1, None, cell[(g, h)]),
            ]
            for g in others for h in others for k in others
        ]
        cocycles = _solve_identities(len(cell), identities, tables, G.inverses, meter)
        meter.charge(tables.size ** len(others))
        coboundaries = []
        f = [0] * G.order
        for values in itertools.product(range(tables.size), repeat=len(others)):
            for g, v in zip(others, values):
                f[g] = v
            coboundaries.append([
                tables.add[tables.add[tables.act[g][f[h]]][tables.neg[f[table[g][h]]]]][f[g]]
                for g, h in cell
            ])

    Z = np.array(cocycles, dtype=np.int64).reshape(len(cocycles), -1)
    B = {np.array(row, dtype=np.int64).tobytes() for row in coboundaries}
    if not B <= {z.tobytes() for z in Z}:
        raise MembershipFailure(f"a coboundary of degree {n} fails the cocycle identities")
    structure = _quotient_structure(Z, B, tables)
    logger.debug(
        "brute force H^%d over %s: %d cocycles, %d coboundaries, %d steps",
        n, G.name, len(Z), len(B), meter.used,
    )
    return structure


# Dimension shifting for lattices

def _lattice_actions(M: GModule, rank: int) -> List[np.ndarray]:
    """
    Generator matrices of a torsion-free M on Z^rank.

    The coordinates of v are (y_k · v) for a Z-basis y_k of Hom(M, Z), the
    integer left kernel of the relations.
    """
    m = M.ambient_rank
    rows = [{c: x for c, x in enumerate(row) if x} for row in M.relations.to_rows()]
    dual = _Echelon(_kernel(rows, M.relations.cols))
    basis = dual.basis
    if len(basis) != rank:
        raise MembershipFailure(f"dual of {M.name or 'module'} has rank {len(basis)}, expected {rank}")
    out = []
    for pos, rho in enumerate(_raw_actions(M)):
        A = np.zeros((rank, rank), dtype=np.int64)
        for i, y in enumerate(basis):
            image: _Vector = {}
            for j, x in y.items():
                for c in np.flatnonzero(rho[j]):
                    image[int(c)] = image.get(int(c), 0) + x * int(rho[j, c])
            coords = dual.coordinates(image)
            if coords is None:
                raise MembershipFailure(f"generator #{pos} of {M.name or 'module'} does not preserve the relations")
            A[i, :] = coords
        out.append(A)
    return out


def _shifted_action(G: FinGroup, rho: Sequence[np.ndarray], r: int) -> List[np.ndarray]:
    """
    Generator matrices of Q = Maps(G, L) / L, with L embedded as m -> (y -> y·m).

    Q is free on coordinates (x, i), x != e; a class is represented by the map
    vanishing at the identity. The generator g sends e_(z, i) to
    e_(z g^-1, i) (dropped when z g^-1 = e) minus, when z = g, the vector
    (y -> y·e_i) restricted to y != e.
    """
    others = [g for g in G.elements if g != G.identity]
    block = {x: k for k, x in enumerate(others)}
    dim = len(others) * r
    action = []
    for g in G.generator_indices:
        g_inv = G.inverse(g)
        A = np.zeros((dim, dim), dtype=np.int64)
        for z in others:
            moved = G.table[z][g_inv]
            for i in range(r):
                col = block[z] * r + i
                if moved != G.identity:
                    A[block[moved] * r + i, col] += 1
                if z == g:
                    for y in others:
                        A[block[y] * r:(block[y] + 1) * r, col] -= rho[y][:, i]
        action.append(A)
    return action


def _first_cohomology_by_shift(G: FinGroup, generators: Sequence[np.ndarray],
                               r: int) -> Tuple[AbelianGroupStructure, List[np.ndarray], int]:
    """H^1(G, L) = Q^G / image of Maps(G, L)^G, together with the action on Q and its rank."""
    rho = _element_matrices(G, generators, r)
    Q = _shifted_action(G, rho, r)
    dim = (G.order - 1) * r
    columns: List[_Vector] = [{} for _ in range(dim)]
    for pos, A in enumerate(Q):
        D = A - np.eye(dim, dtype=np.int64)
        for i, j in zip(*np.nonzero(D)):
            columns[int(j)][pos * dim + int(i)] = int(D[i, j])
    invariants = _Echelon(_kernel(columns, len(Q) * dim))

    others = [g for g in G.elements if g != G.identity]
    image = []
    for i in range(r):
        vector: _Vector = {}
        for k, y in enumerate(others):
            for j in range(r):
                w = (1 if j == i else 0) - int(rho[y][j, i])
                if w:
                    vector[k * r + j] = w
        image.append(vector)
    return _quotient(invariants, image), Q, dim


def dimension_shift_cohomology(G: FinGroup, M: GModule, n: int,
                               budget: Optional[OracleBudget] = None) -> AbelianGroupStructure:
    """
    H^n(G, M) for a lattice M, n in {1, 2}, via 0 -> M -> Maps(G, M) -> Q -> 0.

    H^1 is read off the invariants sequence; H^2(G, M) = H^1(G, Q).
    """
    budget = budget or OracleBudget()
    if n not in (1, 2):
        raise DegreeUnsupported(f"dimension shifting covers degrees 1 and 2, not {n}", witness=(n,))
    if M.group != G:
        raise SchemaError(f"module {M.name!r} is not defined over {G.name}")
    module_structure = presentation_structure(M)
    if module_structure.invariant_factors:
        raise NotALattice(f"{M.name or 'module'} has torsion {module_structure}")
    budget.check_group(G)
    r = module_structure.free_rank
    structure, Q, dim = _first_cohomology_by_shift(G, _lattice_actions(M, r), r)
    if n == 2:
        structure, _, _ = _first_cohomology_by_shift(G, Q, dim)
    logger.debug("dimension shift H^%d over %s: %s", n, G.name, structure)
    return structure


@dataclass(frozen=True)
class OracleReport:
    oracle: str
    structure: AbelianGroupStructure
    agrees: bool


def oracle_cohomology(G: FinGroup, M: GModule, n: int,
                      budget: Optional[OracleBudget] = None) -> Tuple[str, AbelianGroupStructure]:
    """Runs whichever oracle applies: brute force for finite M, dimension shift for lattices."""
    structure = presentation_structure(M)
    if structure.is_finite:
        return "brute_force", brute_force_cohomology(G, M, n, budget)
    if not structure.invariant_factors:
        return "dimension_shift", dimension_shift_cohomology(G, M, n, budget)
    raise NotALattice(f"{M.name or 'module'} is neither finite nor torsion-free: {structure}")


def cross_check_cohomology(G: FinGroup, M: GModule, n: int, expected: AbelianGroupStructure,
                           budget: Optional[OracleBudget] = None) -> OracleReport:
    """Compares a computed H^n(G, M) with the applicable oracle."""
    oracle, structure = oracle_cohomology(G, M, n, budget)
    agrees = structure == expected
    if not agrees:
        logger.warning(f"oracle {oracle} gives {structure} for H^{n}, engine gave {expected}")
    return OracleReport(oracle, structure, agrees)


def cross_check_hypercohomology(G: FinGroup, C: TwoTermComplex, expected: AbelianGroupStructure,
                                budget: Optional[OracleBudget] = None) -> Optional[OracleReport]:
    """
    H^1 of [A -> B] when it reduces to modules: H^1(B) if A = 0, H^2(A) if B = 0,
    and H^1(B) + H^2(A) if f = 0.

    Returns None for complexes with both terms nonzero and a nonzero map.
    """
    if presentation_structure(C.A).is_zero:
        oracle, structure = oracle_cohomology(G, C.B, 1, budget)
    elif presentation_structure(C.B).is_zero:
        oracle, structure = oracle_cohomology(G, C.A, 2, budget)
    elif C.f.is_zero():
        oracle_b, h1_b = oracle_cohomology(G, C.B, 1, budget)
        oracle_a, h2_a = oracle_cohomology(G, C.A, 2, budget)
        oracle = f"{oracle_b}+{oracle_a}"
        structure = _structure(h1_b.free_rank + h2_a.free_rank, h1_b.invariant_factors + h2_a.invariant_factors)
    else:
        logger.warning("no oracle for a complex with a nonzero map between nonzero terms")
        return None
    agrees = structure == expected
    if not agrees:
        logger.warning(f"oracle {oracle} gives {structure} for H^1 of the complex, engine gave {expected}")
    return OracleReport(oracle, structure, agrees)
