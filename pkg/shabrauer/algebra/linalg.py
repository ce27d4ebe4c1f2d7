# shabrauer/algebra/linalg.py

"""
Exact integer linear algebra.

Dense matrices are `IntMatrix` values backed by Python integers. The heavy lifting
(Smith normal form, kernels, lattice membership) runs on sparse column or row
dictionaries, since bar-resolution differentials are overwhelmingly zero.
"""

import logging
import operator
from collections import defaultdict
from dataclasses import dataclass
from typing import Dict, Iterable, List, NamedTuple, Optional, Sequence, Set, Tuple, Union

from shabrauer.errors import DimensionMismatch, MembershipFailure

logger = logging.getLogger(__name__)

Vector = Tuple[int, ...]
SparseVector = Dict[int, int]


@dataclass(frozen=True)
class IntMatrix:
    """Arbitrary-precision integer matrix stored row-major."""

    rows: int
    cols: int
    entries: Tuple[int, ...]

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise DimensionMismatch(f"negative shape {self.rows}x{self.cols}")
        entries = tuple(operator.index(x) for x in self.entries)
        if len(entries) != self.rows * self.cols:
            raise DimensionMismatch(
                f"{len(entries)} entries do not fill a {self.rows}x{self.cols} matrix"
            )
        object.__setattr__(self, "entries", entries)

    # Constructors

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: Optional[int] = None) -> "IntMatrix":
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        for i, r in enumerate(rows):
            if len(r) != cols:
                raise DimensionMismatch(f"row {i} has {len(r)} entries, expected {cols}")
        return cls(len(rows), cols, tuple(x for r in rows for x in r))

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], rows: Optional[int] = None) -> "IntMatrix":
        return cls.from_rows(columns, rows).transpose()

    @classmethod
    def from_sparse_columns(cls, columns: Sequence[SparseVector], rows: int) -> "IntMatrix":
        data = [[0] * len(columns) for _ in range(rows)]
        for j, column in enumerate(columns):
            for i, v in column.items():
                data[i][j] = v
        return cls.from_rows(data, len(columns))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls(rows, cols, (0,) * (rows * cols))

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls.diagonal([1] * n)

    @classmethod
    def diagonal(cls, values: Sequence[int], rows: Optional[int] = None, cols: Optional[int] = None) -> "IntMatrix":
        rows = len(values) if rows is None else rows
        cols = len(values) if cols is None else cols
        data = [[0] * cols for _ in range(rows)]
        for k, v in enumerate(values):
            data[k][k] = v
        return cls.from_rows(data, cols)

    # Access

    @property
    def shape(self) -> Tuple[int, int]:
        return self.rows, self.cols

    def __getitem__(self, key: Tuple[int, int]) -> int:
        i, j = key
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(f"index {key} out of range for {self.rows}x{self.cols} matrix")
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> Vector:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def column(self, j: int) -> Vector:
        return self.entries[j::self.cols] if self.cols else ()

    def to_rows(self) -> List[List[int]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def to_sparse_columns(self) -> List[SparseVector]:
        columns: List[SparseVector] = [{} for _ in range(self.cols)]
        for idx, v in enumerate(self.entries):
            if v:
                i, j = divmod(idx, self.cols)
                columns[j][i] = v
        return columns

    def submatrix(self, row_indices: Sequence[int], col_indices: Sequence[int]) -> "IntMatrix":
        return IntMatrix.from_rows(
            [[self[i, j] for j in col_indices] for i in row_indices], len(col_indices)
        )

    # Arithmetic

    def transpose(self) -> "IntMatrix":
        return IntMatrix(self.cols, self.rows, tuple(
            self.entries[i * self.cols + j] for j in range(self.cols) for i in range(self.rows)
        ))

    @property
    def T(self) -> "IntMatrix":
        return self.transpose()

    def apply(self, vector: Sequence[int]) -> Vector:
        if len(vector) != self.cols:
            raise DimensionMismatch(f"vector of length {len(vector)} against {self.cols} columns")
        return tuple(
            sum(a * b for a, b in zip(self.row(i), vector) if a) for i in range(self.rows)
        )

    def __matmul__(self, other: Union["IntMatrix", Sequence[int]]):
        if not isinstance(other, IntMatrix):
            return self.apply(other)
        if self.cols != other.rows:
            raise DimensionMismatch(f"cannot multiply {self.shape} by {other.shape}")
        other_columns = [other.column(j) for j in range(other.cols)]
        out = []
        for i in range(self.rows):
            row = self.row(i)
            out.extend(sum(a * b for a, b in zip(row, col) if a) for col in other_columns)
        return IntMatrix(self.rows, other.cols, tuple(out))

    def _check_same_shape(self, other: "IntMatrix"):
        if self.shape != other.shape:
            raise DimensionMismatch(f"shape mismatch {self.shape} vs {other.shape}")

    def __add__(self, other: "IntMatrix") -> "IntMatrix":
        self._check_same_shape(other)
        return IntMatrix(self.rows, self.cols, tuple(a + b for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other: "IntMatrix") -> "IntMatrix":
        self._check_same_shape(other)
        return IntMatrix(self.rows, self.cols, tuple(a - b for a, b in zip(self.entries, other.entries)))

    def __neg__(self) -> "IntMatrix":
        return IntMatrix(self.rows, self.cols, tuple(-a for a in self.entries))

    def scale(self, k: int) -> "IntMatrix":
        return IntMatrix(self.rows, self.cols, tuple(k * a for a in self.entries))

    @staticmethod
    def hstack(*blocks: "IntMatrix") -> "IntMatrix":
        rows = blocks[0].rows
        if any(b.rows != rows for b in blocks):
            raise DimensionMismatch("hstack needs equal row counts")
        return IntMatrix.from_rows(
            [[x for b in blocks for x in b.row(i)] for i in range(rows)], sum(b.cols for b in blocks)
        )

    @staticmethod
    def vstack(*blocks: "IntMatrix") -> "IntMatrix":
        cols = blocks[0].cols
        if any(b.cols != cols for b in blocks):
            raise DimensionMismatch("vstack needs equal column counts")
        return IntMatrix(sum(b.rows for b in blocks), cols, tuple(x for b in blocks for x in b.entries))

    @staticmethod
    def block_diagonal(*blocks: "IntMatrix") -> "IntMatrix":
        rows = sum(b.rows for b in blocks)
        cols = sum(b.cols for b in blocks)
        data = [[0] * cols for _ in range(rows)]
        r0 = c0 = 0
        for b in blocks:
            for i in range(b.rows):
                data[r0 + i][c0:c0 + b.cols] = b.row(i)
            r0 += b.rows
            c0 += b.cols
        return IntMatrix.from_rows(data, cols)

    # Predicates

    def is_zero(self) -> bool:
        return not any(self.entries)

    def determinant(self) -> int:
        """Fraction-free (Bareiss) determinant."""
        if self.rows != self.cols:
            raise DimensionMismatch(f"determinant of non-square {self.shape} matrix")
        n = self.rows
        a = self.to_rows()
        sign, previous = 1, 1
        for k in range(n - 1):
            if a[k][k] == 0:
                swap = next((i for i in range(k + 1, n) if a[i][k]), None)
                if swap is None:
                    return 0
                a[k], a[swap] = a[swap], a[k]
                sign = -sign
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // previous
            previous = a[k][k]
        return sign * a[n - 1][n - 1] if n else 1

    def is_unimodular(self) -> bool:
        return self.rows == self.cols and abs(self.determinant()) == 1

    def __str__(self) -> str:
        return "[" + ", ".join(str(list(self.row(i))) for i in range(self.rows)) + "]"


@dataclass(frozen=True)
class AbelianGroupStructure:
    """
    Canonical form Z^free_rank + Z/d1 + ... + Z/dk with d1 | d2 | ... | dk, each di >= 2.

    Coordinates follow the same order: torsion coordinates first, then free ones.
    """

    free_rank: int = 0
    invariant_factors: Tuple[int, ...] = ()

    def __post_init__(self):
        factors = tuple(operator.index(d) for d in self.invariant_factors)
        if self.free_rank < 0:
            raise ValueError(f"negative free rank {self.free_rank}")
        for d in factors:
            if d < 2:
                raise ValueError(f"invariant factor {d} is not >= 2")
        for a, b in zip(factors, factors[1:]):
            if b % a:
                raise ValueError(f"invariant factors {factors} do not form a divisibility chain")
        object.__setattr__(self, "invariant_factors", factors)

    @classmethod
    def zero(cls) -> "AbelianGroupStructure":
        return cls()

    @classmethod
    def from_cyclic_orders(cls, orders: Iterable[int]) -> "AbelianGroupStructure":
        """Canonical form of a direct sum of cyclic groups Z/n (n = 0 meaning Z)."""
        orders = list(orders)
        return cokernel_structure(IntMatrix.diagonal(orders))

    @property
    def rank(self) -> int:
        """Number of coordinates (cyclic summands)."""
        return self.free_rank + len(self.invariant_factors)

    @property
    def is_finite(self) -> bool:
        return self.free_rank == 0

    @property
    def is_zero(self) -> bool:
        return self.rank == 0

    @property
    def order(self) -> Optional[int]:
        if self.free_rank:
            return None
        out = 1
        for d in self.invariant_factors:
            out *= d
        return out

    @property
    def moduli(self) -> Tuple[int, ...]:
        """Per-coordinate moduli, 0 for free coordinates."""
        return self.invariant_factors + (0,) * self.free_rank

    def relation_matrix(self) -> IntMatrix:
        """Columns d_i e_i presenting the group as a cokernel."""
        return IntMatrix.diagonal(self.invariant_factors, self.rank, len(self.invariant_factors))

    def relation_vectors(self) -> List[SparseVector]:
        return [{i: d} for i, d in enumerate(self.invariant_factors)]

    def reduce(self, coordinates: Sequence[int]) -> Vector:
        return tuple(c % d if d else c for c, d in zip(coordinates, self.moduli))

    def direct_sum(self, other: "AbelianGroupStructure") -> "AbelianGroupStructure":
        return AbelianGroupStructure.from_cyclic_orders(self.moduli + other.moduli)

    def to_dict(self) -> Dict[str, object]:
        return {
            "free_rank": str(self.free_rank),
            "invariant_factors": [str(d) for d in self.invariant_factors],
        }

    @classmethod
    def from_dict(cls, data: Dict[str, object]) -> "AbelianGroupStructure":
        return cls(int(data["free_rank"]), tuple(int(d) for d in data["invariant_factors"]))

    def __str__(self) -> str:
        parts = [f"Z/{d}" for d in self.invariant_factors]
        if self.free_rank:
            parts.insert(0, "Z" if self.free_rank == 1 else f"Z^{self.free_rank}")
        return " x ".join(parts) if parts else "0"


class SmithDecomposition(NamedTuple):
    U: IntMatrix
    D: IntMatrix
    V: IntMatrix


def _axpy(target: SparseVector, source: SparseVector, c: int) -> None:
    """target += c * source, keeping the dictionary free of zeros."""
    for k, v in source.items():
        w = target.get(k, 0) + c * v
        if w:
            target[k] = w
        else:
            target.pop(k, None)


def _extended_gcd(a: int, b: int) -> Tuple[int, int, int]:
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        return -old_r, -old_s, -old_t
    return old_r, old_s, old_t


class _SmithEliminator:
    """
    Sparse Smith normal form with optional tracking of U, U^-1, V, V^-1.

    U is kept as rows, U^-1 as columns, V as columns and V^-1 as rows, all keyed
    by the original row/column index. Pivots are the smallest entries available,
    ties broken by Markowitz cost.
    """

    def __init__(self, nrows: int, ncols: int, columns: Sequence[SparseVector], *,
                 left: bool = False, left_inverse: bool = False,
                 right: bool = False, right_inverse: bool = False):
        self.nrows, self.ncols = nrows, ncols
        self.rows: List[SparseVector] = [{} for _ in range(nrows)]
        self.col_support: List[Set[int]] = [set() for _ in range(ncols)]
        for j, column in enumerate(columns):
            for i, v in column.items():
                if v:
                    self.rows[i][j] = v
                    self.col_support[j].add(i)
        self.left = [{i: 1} for i in range(nrows)] if left else None
        self.left_inverse = [{i: 1} for i in range(nrows)] if left_inverse else None
        self.right = [{j: 1} for j in range(ncols)] if right else None
        self.right_inverse = [{j: 1} for j in range(ncols)] if right_inverse else None
        self.pivot_rows: List[int] = []
        self.pivot_cols: List[int] = []
        self.diagonal: List[int] = []

    # Elementary operations

    def _add_row(self, target: int, source: int, c: int) -> None:
        row_t = self.rows[target]
        for j, v in self.rows[source].items():
            w = row_t.get(j, 0) + c * v
            if w:
                if j not in row_t:
                    self.col_support[j].add(target)
                row_t[j] = w
            elif j in row_t:
                del row_t[j]
                self.col_support[j].discard(target)
        self._track_row_add(target, source, c)

    def _add_col(self, target: int, source: int, c: int) -> None:
        for i in list(self.col_support[source]):
            row = self.rows[i]
            w = row.get(target, 0) + c * row[source]
            if w:
                if target not in row:
                    self.col_support[target].add(i)
                row[target] = w
            elif target in row:
                del row[target]
                self.col_support[target].discard(i)
        self._track_col_add(target, source, c)

    def _track_row_add(self, target: int, source: int, c: int) -> None:
        if self.left is not None:
            _axpy(self.left[target], self.left[source], c)
        if self.left_inverse is not None:
            _axpy(self.left_inverse[source], self.left_inverse[target], -c)

    def _track_col_add(self, target: int, source: int, c: int) -> None:
        if self.right is not None:
            _axpy(self.right[target], self.right[source], c)
        if self.right_inverse is not None:
            _axpy(self.right_inverse[source], self.right_inverse[target], -c)

    def _track_row_negation(self, r: int) -> None:
        for tracked in (self.left, self.left_inverse):
            if tracked is not None:
                tracked[r] = {k: -v for k, v in tracked[r].items()}

    def _track_row_combination(self, i: int, j: int, p: int, q: int, r: int, s: int) -> None:
        # rows (i, j) <- [[p, q], [r, s]] (rows i, j), determinant 1
        if self.left is not None:
            li, lj = self.left[i], self.left[j]
            new_i, new_j = {}, {}
            _axpy(new_i, li, p)
            _axpy(new_i, lj, q)
            _axpy(new_j, li, r)
            _axpy(new_j, lj, s)
            self.left[i], self.left[j] = new_i, new_j
        if self.left_inverse is not None:
            ci, cj = self.left_inverse[i], self.left_inverse[j]
            new_i, new_j = {}, {}
            _axpy(new_i, ci, s)
            _axpy(new_i, cj, -r)
            _axpy(new_j, ci, -q)
            _axpy(new_j, cj, p)
            self.left_inverse[i], self.left_inverse[j] = new_i, new_j

    # Elimination

    def _select_pivot(self, active_rows: Set[int]) -> Optional[Tuple[int, int]]:
        best_key = None
        for i in active_rows:
            row = self.rows[i]
            if not row:
                continue
            row_cost = len(row) - 1
            for j, v in row.items():
                key = (abs(v), row_cost * (len(self.col_support[j]) - 1), i, j)
                if best_key is None or key < best_key:
                    best_key = key
        return None if best_key is None else (best_key[2], best_key[3])

    def _clear_cross(self, r: int, c: int) -> Tuple[int, int]:
        while True:
            p = self.rows[r][c]
            for i in sorted(self.col_support[c]):
                if i != r:
                    q = self.rows[i][c] // p
                    if q:
                        self._add_row(i, r, -q)
            for j in sorted(self.rows[r]):
                if j != c:
                    q = self.rows[r][j] // p
                    if q:
                        self._add_col(j, c, -q)
            leftovers = [(abs(self.rows[i][c]), i, c) for i in self.col_support[c] if i != r]
            leftovers += [(abs(v), r, j) for j, v in self.rows[r].items() if j != c]
            if not leftovers:
                return r, c
            _, r, c = min(leftovers)

    def _gcd_lcm(self, a: int, b: int) -> None:
        x, y = self.diagonal[a], self.diagonal[b]
        g, s, t = _extended_gcd(x, y)
        ra, rb = self.pivot_rows[a], self.pivot_rows[b]
        ca, cb = self.pivot_cols[a], self.pivot_cols[b]
        self._track_col_add(ca, cb, 1)
        self._track_row_combination(ra, rb, s, t, -(y // g), x // g)
        self._track_col_add(cb, ca, -(t * y // g))
        self.diagonal[a], self.diagonal[b] = g, x // g * y

    def run(self) -> "_SmithEliminator":
        active = set(range(self.nrows))
        while True:
            pivot = self._select_pivot(active)
            if pivot is None:
                break
            r, c = self._clear_cross(*pivot)
            active.discard(r)
            self.pivot_rows.append(r)
            self.pivot_cols.append(c)
            self.diagonal.append(self.rows[r][c])
        for k, d in enumerate(self.diagonal):
            if d < 0:
                self.diagonal[k] = -d
                self.rows[self.pivot_rows[k]][self.pivot_cols[k]] = -d
                self._track_row_negation(self.pivot_rows[k])
        for a in range(len(self.diagonal)):
            for b in range(a + 1, len(self.diagonal)):
                if self.diagonal[b] % self.diagonal[a]:
                    self._gcd_lcm(a, b)
        return self

    # Results in diagonal order

    def row_order(self) -> List[int]:
        pivots = set(self.pivot_rows)
        return self.pivot_rows + [i for i in range(self.nrows) if i not in pivots]

    def col_order(self) -> List[int]:
        pivots = set(self.pivot_cols)
        return self.pivot_cols + [j for j in range(self.ncols) if j not in pivots]


def smith_normal_form(M: IntMatrix) -> SmithDecomposition:
    """
    Computes the Smith normal form D = U·M·V.

    Args:
        M (IntMatrix): Any integer matrix.

    Returns:
        SmithDecomposition: Unimodular U and V with D diagonal, d_i | d_(i+1), d_i >= 0.
    """
    elim = _SmithEliminator(M.rows, M.cols, M.to_sparse_columns(), left=True, right=True).run()
    rows_in_order = elim.row_order()
    cols_in_order = elim.col_order()
    U = IntMatrix.from_rows(
        [[elim.left[r].get(k, 0) for k in range(M.rows)] for r in rows_in_order], M.rows
    )
    V = IntMatrix.from_sparse_columns([elim.right[c] for c in cols_in_order], M.cols)
    D = IntMatrix.diagonal(elim.diagonal, M.rows, M.cols)
    return SmithDecomposition(U, D, V)


def elementary_divisors(M: IntMatrix) -> List[int]:
    """Nonzero diagonal of the Smith normal form, without transforms."""
    return list(_SmithEliminator(M.rows, M.cols, M.to_sparse_columns()).run().diagonal)


def cokernel_structure(R: IntMatrix) -> AbelianGroupStructure:
    """Canonical structure of Z^m / im(R), m = R.rows."""
    diagonal = elementary_divisors(R)
    return AbelianGroupStructure(R.rows - len(diagonal), tuple(d for d in diagonal if d != 1))


def canonical_coordinates(R: IntMatrix) -> Tuple[AbelianGroupStructure, IntMatrix, IntMatrix]:
    """
    Change of coordinates from Z^m / im(R) to its canonical form.

    Returns (structure, P, Q) with P of shape rank x m and Q of shape m x rank such that
    P·Q = I and Q·P is the identity modulo im(R). P sends a presentation vector to
    canonical coordinates (torsion first, then free); Q lifts them back.
    """
    m = R.rows
    elim = _SmithEliminator(m, R.cols, R.to_sparse_columns(), left=True, left_inverse=True).run()
    order = elim.row_order()
    rank = len(elim.diagonal)
    kept = [order[t] for t, d in enumerate(elim.diagonal) if d != 1] + order[rank:]
    structure = AbelianGroupStructure(m - rank, tuple(d for d in elim.diagonal if d != 1))
    P = IntMatrix.from_rows([[elim.left[r].get(k, 0) for k in range(m)] for r in kept], m)
    Q = IntMatrix.from_sparse_columns([elim.left_inverse[r] for r in kept], m)
    return structure, P, Q


def solve_integer(A: IntMatrix, b: Sequence[int]) -> Optional[Vector]:
    """
    Finds an integral x with A·x = b.

    Args:
        A (IntMatrix): Coefficient matrix.
        b (Sequence[int]): Right-hand side of length A.rows.

    Returns:
        Optional[Vector]: A solution, or None when no integral solution exists.
    """
    if len(b) != A.rows:
        raise DimensionMismatch(f"right-hand side of length {len(b)} for a matrix with {A.rows} rows")
    elim = _SmithEliminator(A.rows, A.cols, A.to_sparse_columns(), left=True, right=True).run()
    rows_in_order = elim.row_order()
    cols_in_order = elim.col_order()
    rank = len(elim.diagonal)
    transformed = [sum(c * b[k] for k, c in elim.left[r].items()) for r in rows_in_order]
    if any(transformed[rank:]):
        return None
    x = [0] * A.cols
    for t, d in enumerate(elim.diagonal):
        if transformed[t] % d:
            return None
        y = transformed[t] // d
        if y:
            for k, c in elim.right[cols_in_order[t]].items():
                x[k] += c * y
    return tuple(x)


def _column_echelon(columns: Sequence[SparseVector], nrows: int, track: bool = False):
    """
    Lower column echelon form by unimodular column operations, processed row by row.

    Returns the reduced columns, the (row, column) pivot list in increasing row order,
    the transform columns (when tracked) and the indices of the zero columns.
    """
    cols: List[SparseVector] = [{i: v for i, v in c.items() if v} for c in columns]
    transform = [{j: 1} for j in range(len(cols))] if track else None
    support: Dict[int, Set[int]] = defaultdict(set)
    for j, col in enumerate(cols):
        for i in col:
            if not 0 <= i < nrows:
                raise DimensionMismatch(f"column {j} has an entry in row {i}, outside 0..{nrows - 1}")
            support[i].add(j)

    def add_column(target: int, source: int, c: int) -> None:
        col_t = cols[target]
        for i, v in cols[source].items():
            w = col_t.get(i, 0) + c * v
            if w:
                if i not in col_t:
                    support[i].add(target)
                col_t[i] = w
            elif i in col_t:
                del col_t[i]
                support[i].discard(target)
        if transform is not None:
            _axpy(transform[target], transform[source], c)

    pivots: List[Tuple[int, int]] = []
    for r in range(nrows):
        live = support.get(r)
        if not live:
            continue
        while len(live) > 1:
            p = min(live, key=lambda j: (abs(cols[j][r]), len(cols[j]), j))
            pv = cols[p][r]
            for j in sorted(live):
                if j != p:
                    add_column(j, p, -(cols[j][r] // pv))
        if live:
            (p,) = live
            pivots.append((r, p))
            for i in cols[p]:
                support[i].discard(p)
    pivot_columns = {p for _, p in pivots}
    free = [j for j in range(len(cols)) if j not in pivot_columns]
    return cols, pivots, transform, free


def sparse_kernel(columns: Sequence[SparseVector], nrows: int) -> List[SparseVector]:
    """Z-basis of {x : sum_j x_j columns[j] = 0}, as sparse vectors over the column indices."""
    _, _, transform, free = _column_echelon(columns, nrows, track=True)
    return [transform[j] for j in free]


def kernel_basis(A: IntMatrix) -> IntMatrix:
    """Matrix whose columns form a Z-basis of {x : A·x = 0}."""
    return IntMatrix.from_sparse_columns(sparse_kernel(A.to_sparse_columns(), A.rows), A.cols)


class LatticeBasis:
    """
    A sublattice of Z^dimension in column echelon form, with exact membership.

    Generators may be linearly dependent; the echelon basis drops the redundancy.
    """

    def __init__(self, generators: Sequence[SparseVector], dimension: int):
        cols, pivots, _, _ = _column_echelon(generators, dimension)
        self.dimension = dimension
        self._pivot_rows = [r for r, _ in pivots]
        self.basis: List[SparseVector] = [cols[p] for _, p in pivots]

    @property
    def rank(self) -> int:
        return len(self.basis)

    def coordinates(self, vector: SparseVector) -> Optional[List[int]]:
        """Coefficients on `basis`, or None when the vector is outside the lattice."""
        residual = {i: v for i, v in vector.items() if v}
        coefficients = []
        for r, b in zip(self._pivot_rows, self.basis):
            v = residual.get(r, 0)
            q = 0
            if v:
                if v % b[r]:
                    return None
                q = v // b[r]
                _axpy(residual, b, -q)
            coefficients.append(q)
        return None if residual else coefficients

    def contains(self, vector: SparseVector) -> bool:
        return self.coordinates(vector) is not None

    def combine(self, coefficients: Union[Sequence[int], SparseVector]) -> SparseVector:
        items = coefficients.items() if isinstance(coefficients, dict) else enumerate(coefficients)
        out: SparseVector = {}
        for k, c in items:
            if c:
                _axpy(out, self.basis[k], c)
        return out


class Subquotient:
    """
    A lattice L modulo a sublattice R contained in it.

    Gives the canonical structure of L/R, one generator per cyclic coordinate
    (torsion first, then free) and coordinates of arbitrary elements of L.
    """

    def __init__(self, lattice: LatticeBasis, relations: Sequence[SparseVector]):
        self.lattice = lattice
        coordinate_columns = []
        for index, relation in enumerate(relations):
            coords = lattice.coordinates(relation)
            if coords is None:
                raise MembershipFailure(f"relation {index} does not lie in the lattice")
            coordinate_columns.append({i: c for i, c in enumerate(coords) if c})
        elim = _SmithEliminator(
            lattice.rank, len(coordinate_columns), coordinate_columns, left=True, left_inverse=True
        ).run()
        order = elim.row_order()
        rank = len(elim.diagonal)
        torsion = [(order[t], d) for t, d in enumerate(elim.diagonal) if d != 1]
        free = [(r, 0) for r in order[rank:]]
        self._components: List[Tuple[int, int]] = torsion + free
        self._left = elim.left
        self.structure = AbelianGroupStructure(len(free), tuple(d for _, d in torsion))
        self.generators: List[SparseVector] = [
            lattice.combine(elim.left_inverse[r]) for r, _ in self._components
        ]
        logger.debug(
            "subquotient of rank-%d lattice by %d relations: %s",
            lattice.rank, len(coordinate_columns), self.structure,
        )

    def coordinates(self, vector: SparseVector) -> Optional[Vector]:
        """Coordinates of the class of `vector`, reduced into [0, d); None if outside the lattice."""
        y = self.lattice.coordinates(vector)
        if y is None:
            return None
        out = []
        for r, d in self._components:
            z = sum(c * y[i] for i, c in self._left[r].items())
            out.append(z % d if d else z)
        return tuple(out)

    def combine(self, coefficients: Sequence[int]) -> SparseVector:
        out: SparseVector = {}
        for c, g in zip(coefficients, self.generators):
            if c:
                _axpy(out, g, c)
        return out


def hom_kernel(matrix: IntMatrix, source: AbelianGroupStructure,
               target_moduli: Sequence[int]) -> Subquotient:
    """
    Kernel of a homomorphism from a group in canonical coordinates to a product of cyclic groups.

    Args:
        matrix (IntMatrix): Images of the source coordinates, one column each.
        source (AbelianGroupStructure): Domain.
        target_moduli (Sequence[int]): Modulus of each target coordinate, 0 for Z.
            Need not be canonical, e.g. the moduli of several stacked targets.

    Returns:
        Subquotient: The kernel, as a subquotient of Z^source.rank; generators are source coordinates.
    """
    if matrix.rows != len(target_moduli) or matrix.cols != source.rank:
        raise DimensionMismatch(
            f"map matrix {matrix.shape} does not match {source.rank} -> {len(target_moduli)} coordinates"
        )
    k = source.rank
    columns = matrix.to_sparse_columns() + [{i: -d} for i, d in enumerate(target_moduli) if d]
    preimage = [{i: v for i, v in vec.items() if i < k} for vec in sparse_kernel(columns, matrix.rows)]
    return Subquotient(LatticeBasis(preimage, k), source.relation_vectors())


def same_subgroup(first: Sequence[SparseVector], second: Sequence[SparseVector],
                  ambient: AbelianGroupStructure) -> bool:
    """Whether two generating sets span the same subgroup of `ambient`."""
    relations = ambient.relation_vectors()
    span_first = LatticeBasis(list(first) + relations, ambient.rank)
    span_second = LatticeBasis(list(second) + relations, ambient.rank)
    return all(span_first.contains(v) for v in second) and all(span_second.contains(v) for v in first)


def dense(vector: SparseVector, length: int) -> Vector:
    out = [0] * length
    for i, v in vector.items():
        out[i] = v
    return tuple(out)


def sparse(vector: Sequence[int]) -> SparseVector:
    return {i: v for i, v in enumerate(vector) if v}
