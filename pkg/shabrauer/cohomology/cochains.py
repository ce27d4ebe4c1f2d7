# shabrauer/cohomology/cochains.py

"""
Inhomogeneous cochains and the total complexes built from them.

A cochain of arity n on a group of order N is a table indexed by n-tuples of
element indices, encoded base N with the first element most significant. The
values are vectors in the module's presentation coordinates. Internally every
degree of a total complex is flattened to one index space in canonical (Smith)
coordinates, where coordinate i of each value is read modulo `moduli[i]`.
"""

import logging
from dataclasses import dataclass
from typing import Callable, Dict, List, Sequence, Tuple, Union

from shabrauer.algebra.fingroup import FinGroup, QuotientMap, Subgroup
from shabrauer.algebra.gmodule import GModule, TwoTermComplex
from shabrauer.algebra.linalg import IntMatrix, SparseVector, Vector, dense
from shabrauer.errors import ComplexConsistencyError, SchemaError

logger = logging.getLogger(__name__)

Coefficients = Union[GModule, TwoTermComplex]


def encode(elements: Sequence[int], order: int) -> int:
    t = 0
    for g in elements:
        t = t * order + g
    return t


def decode(t: int, arity: int, order: int) -> Tuple[int, ...]:
    digits = [0] * arity
    for k in range(arity - 1, -1, -1):
        t, digits[k] = divmod(t, order)
    return tuple(digits)


@dataclass(frozen=True)
class Cochain:
    """
    A cochain of a total complex: one value table per summand.

    `tables[b][t]` is the value of summand b at the tuple encoded by t.
    """

    group_order: int
    arities: Tuple[int, ...]
    tables: Tuple[Tuple[Vector, ...], ...]

    def __post_init__(self):
        for arity, table in zip(self.arities, self.tables):
            if len(table) != self.group_order ** arity:
                raise SchemaError(
                    f"cochain table of arity {arity} has {len(table)} values, expected {self.group_order ** arity}"
                )

    @classmethod
    def from_function(cls, group: FinGroup, arity: int, function: Callable[..., Sequence[int]]) -> "Cochain":
        """Single-summand cochain from a Python function of `arity` element indices."""
        N = group.order
        table = tuple(tuple(function(*decode(t, arity, N))) for t in range(N ** arity))
        return cls(N, (arity,), (table,))

    @classmethod
    def zero(cls, group_order: int, arities: Sequence[int], ranks: Sequence[int]) -> "Cochain":
        return cls(group_order, tuple(arities), tuple(
            tuple((0,) * rank for _ in range(group_order ** arity)) for arity, rank in zip(arities, ranks)
        ))

    def value(self, *elements: int, block: int = 0) -> Vector:
        return self.tables[block][encode(elements, self.group_order)]

    def block(self, b: int) -> "Cochain":
        return Cochain(self.group_order, (self.arities[b],), (self.tables[b],))

    def join(self, other: "Cochain") -> "Cochain":
        if self.group_order != other.group_order:
            raise SchemaError("cannot join cochains over groups of different orders")
        return Cochain(self.group_order, self.arities + other.arities, self.tables + other.tables)

    def apply_matrix(self, matrix: IntMatrix, block: int = 0) -> "Cochain":
        """Post-compose one summand with a coefficient map."""
        tables = list(self.tables)
        tables[block] = tuple(matrix.apply(v) for v in self.tables[block])
        return Cochain(self.group_order, self.arities, tuple(tables))

    def restrict(self, subgroup: Subgroup) -> "Cochain":
        """Restriction to a subgroup, indexed by the subgroup's own element labels."""
        N, n = self.group_order, subgroup.order
        embedding = subgroup.embedding
        tables = tuple(
            tuple(table[encode([embedding[h] for h in decode(t, arity, n)], N)] for t in range(n ** arity))
            for arity, table in zip(self.arities, self.tables)
        )
        return Cochain(n, self.arities, tables)

    def inflate(self, projection: QuotientMap) -> "Cochain":
        """Composition with the projection parent -> group on every argument."""
        N, n = self.group_order, projection.parent.order
        tables = tuple(
            tuple(table[encode([projection(g) for g in decode(t, arity, n)], N)] for t in range(n ** arity))
            for arity, table in zip(self.arities, self.tables)
        )
        return Cochain(n, self.arities, tables)


@dataclass(frozen=True)
class CochainComplexSlice:
    """
    Degrees n-1, n, n+1 of a total complex with the two differentials between them.

    Differentials are lists of sparse columns in canonical coordinates; the
    cochain groups are Z^dimension modulo the per-index moduli.
    """

    degree: int
    dimensions: Tuple[int, int, int]
    moduli: Tuple[Tuple[int, ...], Tuple[int, ...], Tuple[int, ...]]
    incoming: Tuple[SparseVector, ...]
    outgoing: Tuple[SparseVector, ...]

    def composite_vanishes(self) -> bool:
        """d^n ∘ d^(n-1) ≡ 0 modulo the lifted relations of degree n+1."""
        moduli = self.moduli[2]
        for column in self.incoming:
            image: Dict[int, int] = {}
            for j, c in column.items():
                for i, v in self.outgoing[j].items():
                    image[i] = image.get(i, 0) + c * v
            for i, v in image.items():
                if (v % moduli[i] if moduli[i] else v):
                    return False
        return True

    def matrices(self) -> Tuple[IntMatrix, IntMatrix]:
        """Dense d^(n-1) and d^n, for inspection of small slices."""
        return (
            IntMatrix.from_sparse_columns(list(self.incoming), self.dimensions[1]),
            IntMatrix.from_sparse_columns(list(self.outgoing), self.dimensions[2]),
        )


def _bar_columns(group: FinGroup, actions, rank: int, arity: int) -> List[SparseVector]:
    """
    Columns of the bar differential C^arity -> C^(arity+1) for one module.

    Basis cochain (t, j) has index t*rank + j; `actions[g]` is the canonical
    matrix of g as nested rows.
    """
    N = group.order
    table, inverse = group.table, group.inverses
    shift = N ** arity
    columns: List[SparseVector] = []
    last_sign = -1 if arity % 2 == 0 else 1
    for t in range(N ** arity):
        digits = decode(t, arity, N)
        for j in range(rank):
            col: Dict[int, int] = {}
            # g1 · c(g2, ..., g_{n+1})
            for g in range(N):
                base = (g * shift + t) * rank
                act = actions[g]
                for i in range(rank):
                    a = act[i][j]
                    if a:
                        col[base + i] = col.get(base + i, 0) + a
            # (-1)^i c(..., g_i g_{i+1}, ...)
            for i in range(1, arity + 1):
                sign = -1 if i % 2 else 1
                h = digits[i - 1]
                head, tail = digits[:i - 1], digits[i:]
                for a in range(N):
                    idx = encode(head + (a, table[inverse[a]][h]) + tail, N) * rank + j
                    col[idx] = col.get(idx, 0) + sign
            # (-1)^{n+1} c(g1, ..., g_n)
            for g in range(N):
                idx = (t * N + g) * rank + j
                col[idx] = col.get(idx, 0) + last_sign
            columns.append({k: v for k, v in col.items() if v})
    return columns


def _shift(columns: List[SparseVector], offset: int, sign: int = 1) -> List[SparseVector]:
    return [{i + offset: sign * v for i, v in col.items()} for col in columns]


class TotalComplex:
    """
    The cochain complex whose cohomology is computed.

    For a module M it is the bar complex of M. For a complex [A -> B] it is the
    cone with T^n = C^(n+1)(A) + C^n(B) and D(α, β) = (dα, f∘α - dβ).
    """

    def __init__(self, coefficients: Coefficients):
        self.coefficients = coefficients
        if isinstance(coefficients, TwoTermComplex):
            self.group = coefficients.group
            self.summands: Tuple[Tuple[GModule, int], ...] = ((coefficients.A, 1), (coefficients.B, 0))
            self._map = coefficients.canonical_map()
        else:
            self.group = coefficients.group
            self.summands = ((coefficients, 0),)
            self._map = None
        self._bar_cache: Dict[Tuple[int, int], List[SparseVector]] = {}

    @property
    def is_cone(self) -> bool:
        return self._map is not None

    def arities(self, n: int) -> Tuple[int, ...]:
        return tuple(n + shift for _, shift in self.summands)

    def _block_sizes(self, n: int) -> List[int]:
        N = self.group.order
        return [
            M.canonical.rank * N ** (n + shift) if n + shift >= 0 else 0 for M, shift in self.summands
        ]

    def offsets(self, n: int) -> List[int]:
        out, total = [], 0
        for size in self._block_sizes(n):
            out.append(total)
            total += size
        return out

    def dimension(self, n: int) -> int:
        return sum(self._block_sizes(n))

    def moduli(self, n: int) -> Tuple[int, ...]:
        N = self.group.order
        out: List[int] = []
        for M, shift in self.summands:
            if n + shift >= 0:
                out.extend(M.canonical.moduli * N ** (n + shift))
        return tuple(out)

    def _bar(self, block: int, arity: int) -> List[SparseVector]:
        key = (block, arity)
        if key not in self._bar_cache:
            M = self.summands[block][0]
            self._bar_cache[key] = _bar_columns(self.group, M.canonical.actions, M.canonical.rank, arity)
        return self._bar_cache[key]

    def differential(self, n: int) -> List[SparseVector]:
        """Columns of T^n -> T^(n+1)."""
        if n < 0:
            return []
        if not self.is_cone:
            return self._bar(0, n)
        A, B = self.summands[0][0], self.summands[1][0]
        rank_a, rank_b = A.canonical.rank, B.canonical.rank
        offset_b = self.offsets(n + 1)[1]
        columns = []
        # α in C^(n+1)(A): (dα, f∘α)
        for t_col, col in enumerate(self._bar(0, n + 1)):
            t, j = divmod(t_col, rank_a)
            out = dict(col)
            base = offset_b + t * rank_b
            for i in range(rank_b):
                v = self._map[i][j]
                if v:
                    out[base + i] = v
            columns.append(out)
        # β in C^n(B): (0, -dβ)
        columns.extend(_shift(self._bar(1, n), offset_b, -1))
        return columns

    def slice(self, n: int) -> CochainComplexSlice:
        incoming = self.differential(n - 1) if n > 0 else []
        result = CochainComplexSlice(
            degree=n,
            dimensions=(self.dimension(n - 1) if n > 0 else 0, self.dimension(n), self.dimension(n + 1)),
            moduli=(self.moduli(n - 1) if n > 0 else (), self.moduli(n), self.moduli(n + 1)),
            incoming=tuple(incoming),
            outgoing=tuple(self.differential(n)),
        )
        if not result.composite_vanishes():
            raise ComplexConsistencyError(f"differential does not square to zero in degree {n}")
        logger.debug("slice in degree %d: dimensions %s", n, result.dimensions)
        return result

    # Conversions between cochains and flat canonical vectors

    def flatten(self, cochain: Cochain, n: int) -> SparseVector:
        N = self.group.order
        if cochain.group_order != N or cochain.arities != self.arities(n):
            raise SchemaError(
                f"cochain of arities {cochain.arities} over a group of order {cochain.group_order} "
                f"does not belong to degree {n} (arities {self.arities(n)}, order {N})"
            )
        out: SparseVector = {}
        for (M, _), offset, table in zip(self.summands, self.offsets(n), cochain.tables):
            canonical = M.canonical
            rank, moduli = canonical.rank, canonical.moduli
            if rank == 0:
                continue
            P = canonical.to_canonical
            for t, value in enumerate(table):
                if len(value) != M.ambient_rank:
                    raise SchemaError(f"cochain value {value} does not have {M.ambient_rank} coordinates")
                if not any(value):
                    continue
                w = P.apply(value)
                for i, (x, d) in enumerate(zip(w, moduli)):
                    x = x % d if d else x
                    if x:
                        out[offset + t * rank + i] = x
        return out

    def unflatten(self, vector: SparseVector, n: int) -> Cochain:
        N = self.group.order
        dim = self.dimension(n)
        flat = dense(vector, dim)
        tables = []
        for (M, shift), offset in zip(self.summands, self.offsets(n)):
            arity = n + shift
            canonical = M.canonical
            rank, Q = canonical.rank, canonical.from_canonical
            table = []
            for t in range(N ** arity):
                w = flat[offset + t * rank: offset + (t + 1) * rank]
                table.append(Q.apply(w) if any(w) else (0,) * M.ambient_rank)
            tables.append(tuple(table))
        return Cochain(N, self.arities(n), tuple(tables))
