# shabrauer/algebra/fingroup.py

"""
Finite groups given by multiplication tables.

Elements are indices 0..n-1 and ``table[i][j]`` is the index of g_i·g_j.
Permutation input goes through sympy's combinatorics package; products of
permutations compose as functions, (g·h)(x) = g(h(x)).
"""

import logging
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from itertools import product
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from sympy.combinatorics import Permutation

from shabrauer.config import DEFAULT_CONFIG
from shabrauer.errors import (
    NoIdentity,
    NoInverse,
    NotAHomomorphism,
    NotAssociative,
    NotClosed,
    NotNormal,
    OrderBoundExceeded,
    SchemaError,
)

logger = logging.getLogger(__name__)


class FinGroup:
    """
    A finite group with a fixed list of generators.

    The generator list fixes the order in which module actions are given. Use
    `group_from_table` or `group_from_permutations` to build validated instances.
    """

    def __init__(self, table: Sequence[Sequence[int]], identity: int,
                 generator_indices: Optional[Sequence[int]] = None,
                 labels: Optional[Sequence[str]] = None, name: str = ""):
        self.table: Tuple[Tuple[int, ...], ...] = tuple(tuple(row) for row in table)
        self.identity = identity
        self.labels = tuple(labels) if labels is not None else None
        self.name = name or f"group of order {len(self.table)}"
        if generator_indices is None:
            generator_indices = _greedy_generators(self)
        self.generator_indices: Tuple[int, ...] = tuple(generator_indices)

    @property
    def order(self) -> int:
        return len(self.table)

    def __len__(self) -> int:
        return self.order

    @property
    def elements(self) -> range:
        return range(self.order)

    def multiply(self, a: int, b: int) -> int:
        return self.table[a][b]

    @cached_property
    def inverses(self) -> Tuple[int, ...]:
        out = [0] * self.order
        for a in self.elements:
            out[a] = self.table[a].index(self.identity)
        return tuple(out)

    def inverse(self, a: int) -> int:
        return self.inverses[a]

    def power(self, a: int, k: int) -> int:
        if k < 0:
            a, k = self.inverse(a), -k
        out = self.identity
        for _ in range(k):
            out = self.table[out][a]
        return out

    def element_order(self, a: int) -> int:
        k, x = 1, a
        while x != self.identity:
            x = self.table[x][a]
            k += 1
        return k

    def conjugate(self, g: int, x: int) -> int:
        """g·x·g^-1."""
        return self.table[self.table[g][x]][self.inverse(g)]

    @cached_property
    def is_abelian(self) -> bool:
        return all(self.table[a][b] == self.table[b][a] for a in self.elements for b in self.elements)

    @cached_property
    def is_cyclic(self) -> bool:
        return any(self.element_order(a) == self.order for a in self.elements)

    def closure(self, elements: Iterable[int]) -> Tuple[int, ...]:
        """Sorted elements of the subgroup generated by `elements`."""
        gens = [g for g in set(elements) if g != self.identity]
        seen = {self.identity}
        queue = deque([self.identity])
        while queue:
            x = queue.popleft()
            for g in gens:
                y = self.table[x][g]
                if y not in seen:
                    seen.add(y)
                    queue.append(y)
        return tuple(sorted(seen))

    def subgroup(self, elements: Iterable[int]) -> "Subgroup":
        """The subgroup generated by `elements`."""
        return Subgroup(self, self.closure(elements))

    def whole(self) -> "Subgroup":
        return Subgroup(self, tuple(self.elements))

    def trivial_subgroup(self) -> "Subgroup":
        return Subgroup(self, (self.identity,))

    @cached_property
    def words(self) -> Tuple[Tuple[int, ...], ...]:
        """Shortest word (positions in `generator_indices`) for each element."""
        words: Dict[int, Tuple[int, ...]] = {self.identity: ()}
        queue = deque([self.identity])
        while queue:
            x = queue.popleft()
            for pos, g in enumerate(self.generator_indices):
                y = self.table[x][g]
                if y not in words:
                    words[y] = words[x] + (pos,)
                    queue.append(y)
        if len(words) != self.order:
            raise SchemaError(f"generators {self.generator_indices} do not generate {self.name}")
        return tuple(words[a] for a in self.elements)

    def label(self, a: int) -> str:
        return self.labels[a] if self.labels else str(a)

    def __eq__(self, other) -> bool:
        # structural: same table, identity and generator list
        if self is other:
            return True
        if not isinstance(other, FinGroup):
            return NotImplemented
        return (self.identity, self.generator_indices, self.table) == (other.identity, other.generator_indices, other.table)

    def __hash__(self) -> int:
        return hash((self.order, self.identity, self.generator_indices))

    def __repr__(self) -> str:
        return f"FinGroup(order={self.order}, generators={list(self.generator_indices)}, name={self.name!r})"


def _greedy_generators(group: FinGroup) -> Tuple[int, ...]:
    generators: List[int] = []
    span = {group.identity}
    for a in group.elements:
        if a not in span:
            generators.append(a)
            span = set(group.closure(generators))
    return tuple(generators)


@dataclass(frozen=True)
class Subgroup:
    parent: FinGroup
    element_indices: Tuple[int, ...]

    def __post_init__(self):
        elements = tuple(sorted(set(self.element_indices)))
        object.__setattr__(self, "element_indices", elements)
        members = set(elements)
        if self.parent.identity not in members:
            raise NotClosed("subgroup does not contain the identity", witness=(self.parent.identity,))
        for a, b in product(elements, repeat=2):
            if self.parent.table[a][b] not in members:
                raise NotClosed(f"subgroup not closed: {a}*{b} leaves it", witness=(a, b))

    @property
    def order(self) -> int:
        return len(self.element_indices)

    def __contains__(self, a: int) -> bool:
        return a in self._members

    @cached_property
    def _members(self) -> frozenset:
        return frozenset(self.element_indices)

    def is_subgroup_of(self, other: "Subgroup") -> bool:
        return self._members <= other._members

    def conjugate(self, g: int) -> "Subgroup":
        return Subgroup(self.parent, tuple(self.parent.conjugate(g, x) for x in self.element_indices))

    def is_normal(self) -> bool:
        return all(self.conjugate(g)._members == self._members for g in self.parent.generator_indices)

    @property
    def embedding(self) -> Tuple[int, ...]:
        """Parent index of each element of `as_group`."""
        return self.element_indices

    @cached_property
    def as_group(self) -> FinGroup:
        """The subgroup relabelled as a FinGroup; element k is parent element embedding[k]."""
        local = {a: k for k, a in enumerate(self.element_indices)}
        table = [[local[self.parent.table[a][b]] for b in self.element_indices] for a in self.element_indices]
        labels = [self.parent.label(a) for a in self.element_indices]
        return FinGroup(table, local[self.parent.identity], labels=labels,
                        name=f"subgroup {list(self.element_indices)} of {self.parent.name}")

    def __repr__(self) -> str:
        return f"Subgroup({list(self.element_indices)})"


def group_from_table(table: Sequence[Sequence[int]], generator_indices: Optional[Sequence[int]] = None,
                     name: str = "") -> FinGroup:
    """
    Validates a multiplication table and builds the group.

    Args:
        table (Sequence[Sequence[int]]): Square array, table[i][j] = index of g_i·g_j.
        generator_indices (Optional[Sequence[int]]): Generators fixing the action order; chosen greedily if omitted.
        name (str): Display name.

    Returns:
        FinGroup: The validated group.
    """
    n = len(table)
    if n == 0:
        raise NotClosed("empty multiplication table")
    for i, row in enumerate(table):
        if len(row) != n:
            raise NotClosed(f"row {i} has {len(row)} entries, table is not square", witness=(i,))
        for j, x in enumerate(row):
            if isinstance(x, bool) or not isinstance(x, int) or not 0 <= x < n:
                raise NotClosed(f"product {i}*{j} = {x} is not an element", witness=(i, j))

    identity = next(
        (e for e in range(n) if all(table[e][a] == a and table[a][e] == a for a in range(n))), None
    )
    if identity is None:
        raise NoIdentity("no two-sided identity element")

    for a in range(n):
        if not any(table[a][b] == identity and table[b][a] == identity for b in range(n)):
            raise NoInverse(f"element {a} has no inverse", witness=(a,))

    for a, b, c in product(range(n), repeat=3):
        if table[table[a][b]][c] != table[a][table[b][c]]:
            raise NotAssociative(f"({a}*{b})*{c} != {a}*({b}*{c})", witness=(a, b, c))

    if generator_indices is not None:
        for g in generator_indices:
            if not 0 <= g < n:
                raise SchemaError(f"generator index {g} is not an element")
    group = FinGroup(table, identity, generator_indices, name=name)
    if generator_indices is not None and len(group.closure(group.generator_indices)) != n:
        raise SchemaError(f"generators {list(generator_indices)} do not generate the group")
    return group


def parse_permutation(cycles: Sequence[Sequence[int]], degree: Optional[int] = None,
                      one_based: bool = True) -> Permutation:
    """Builds a sympy Permutation from cycle notation, e.g. [[1, 2, 3], [4, 5]]."""
    shift = 1 if one_based else 0
    cycles = [[int(x) - shift for x in cycle] for cycle in cycles]
    for cycle in cycles:
        if any(x < 0 for x in cycle):
            raise SchemaError(f"cycle {cycle} has a point below {shift}")
    size = max([x + 1 for cycle in cycles for x in cycle] + [degree or 0, 1])
    return Permutation(cycles, size=size)


def group_from_permutations(generators: Sequence[Permutation], max_order: Optional[int] = None,
                            name: str = "") -> FinGroup:
    """
    Closes a set of permutations under composition.

    Args:
        generators (Sequence[Permutation]): Permutations of a common finite set.
        max_order (Optional[int]): Closure bound, defaults to the configured maximum group order.
        name (str): Display name.

    Returns:
        FinGroup: The generated group; element 0 is the identity, generators keep their order.
    """
    max_order = max_order or DEFAULT_CONFIG.max_group_order
    generators = list(generators)
    degree = max([g.size for g in generators] + [1])
    generators = [Permutation(g.array_form + list(range(g.size, degree))) for g in generators]

    identity = Permutation(list(range(degree)))
    elements: List[Permutation] = [identity]
    index: Dict[Permutation, int] = {identity: 0}
    queue = deque([identity])
    while queue:
        x = queue.popleft()
        for g in generators:
            # sympy multiplies left to right: (x*g)(i) = g(x(i)), so g*x is x followed by g
            y = x * g
            if y not in index:
                if len(elements) >= max_order:
                    raise OrderBoundExceeded(
                        f"permutation group exceeds the order bound {max_order}", witness=(max_order,)
                    )
                index[y] = len(elements)
                elements.append(y)
                queue.append(y)

    # table[i][j] = g_i ∘ g_j, which sympy writes g_j * g_i
    table = [[index[b * a] for b in elements] for a in elements]
    # one position per listed permutation, repeats and the identity included
    generator_indices = [index[g] for g in generators]
    labels = [str(tuple(p.cyclic_form)) if p.cyclic_form else "()" for p in elements]
    group = FinGroup(table, 0, generator_indices, labels=labels, name=name)
    logger.debug("permutation closure: %d generators, order %d", len(generators), group.order)
    return group


# Named groups

def cyclic_group(n: int) -> FinGroup:
    table = [[(i + j) % n for j in range(n)] for i in range(n)]
    return FinGroup(table, 0, (1,) if n > 1 else (), name=f"Z/{n}")


def direct_product(G: FinGroup, H: FinGroup) -> FinGroup:
    """Element (g, h) has index g * |H| + h."""
    m = H.order
    table = [
        [G.table[a // m][b // m] * m + H.table[a % m][b % m] for b in range(G.order * m)]
        for a in range(G.order * m)
    ]
    generators = [g * m + H.identity for g in G.generator_indices]
    generators += [G.identity * m + h for h in H.generator_indices]
    return FinGroup(table, G.identity * m + H.identity, generators, name=f"{G.name} x {H.name}")


def klein_four_group() -> FinGroup:
    group = direct_product(cyclic_group(2), cyclic_group(2))
    group.name = "V4"
    return group


def dihedral_group(n: int) -> FinGroup:
    """Symmetries of the n-gon, order 2n."""
    if n < 3:
        # the permutation action on n points is not faithful here
        group = cyclic_group(2) if n == 1 else klein_four_group()
        group.name = f"D{n}"
        return group
    rotation = Permutation([(i + 1) % n for i in range(n)])
    reflection = Permutation([(-i) % n for i in range(n)])
    return group_from_permutations([rotation, reflection], name=f"D{n}")


def symmetric_group(n: int) -> FinGroup:
    if n < 2:
        return cyclic_group(1)
    gens = [Permutation([1, 0] + list(range(2, n)))]
    if n > 2:
        gens.insert(0, Permutation(list(range(1, n)) + [0]))
    return group_from_permutations(gens, max_order=max(DEFAULT_CONFIG.max_group_order, 720), name=f"S{n}")


def alternating_group(n: int) -> FinGroup:
    if n < 3:
        return cyclic_group(1)
    gens = [Permutation([[0, 1, k]], size=n) for k in range(2, n)]
    return group_from_permutations(gens, max_order=max(DEFAULT_CONFIG.max_group_order, 360), name=f"A{n}")


def quaternion_group() -> FinGroup:
    """Q8 as its left regular representation on (1, -1, i, -i, j, -j, k, -k)."""
    i = Permutation([2, 3, 1, 0, 6, 7, 5, 4])
    j = Permutation([4, 5, 7, 6, 1, 0, 2, 3])
    return group_from_permutations([i, j], name="Q8")


# Subgroups

def cyclic_subgroups(G: FinGroup) -> List[Subgroup]:
    """Every cyclic subgroup, sorted by order and then by elements."""
    seen = {G.closure([a]) for a in G.elements}
    return [Subgroup(G, elements) for elements in sorted(seen, key=lambda e: (len(e), e))]


def cyclic_subgroups_up_to_conjugacy(G: FinGroup) -> List[Subgroup]:
    """One representative per conjugacy class of maximal cyclic subgroups."""
    cyclic = cyclic_subgroups(G)
    maximal = [
        C for C in cyclic
        if not any(C.order < D.order and C.is_subgroup_of(D) for D in cyclic)
    ]
    representatives: List[Subgroup] = []
    for C in sorted(maximal, key=lambda S: S.element_indices):
        classes = {C.conjugate(g).element_indices for g in G.elements}
        if not any(R.element_indices in classes for R in representatives):
            representatives.append(C)
    return representatives


def all_subgroups(G: FinGroup) -> List[Subgroup]:
    """Subgroup lattice by repeated joins of cyclic subgroups."""
    found = {S.element_indices for S in cyclic_subgroups(G)}
    frontier = set(found)
    cyclic = list(found)
    while frontier:
        new = set()
        for S in frontier:
            for C in cyclic:
                joined = G.closure(S + C)
                if joined not in found:
                    new.add(joined)
        found |= new
        frontier = new
    return [Subgroup(G, elements) for elements in sorted(found, key=lambda e: (len(e), e))]


# Quotients

@dataclass(frozen=True)
class QuotientMap:
    """A surjective homomorphism parent -> group, given elementwise."""

    parent: FinGroup
    group: FinGroup
    projection: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "projection", tuple(self.projection))
        if len(self.projection) != self.parent.order:
            raise NotAHomomorphism("projection must map every element of the parent group")
        for a, b in product(self.parent.elements, repeat=2):
            if self.projection[self.parent.table[a][b]] != self.group.table[self.projection[a]][self.projection[b]]:
                raise NotAHomomorphism(f"projection is not multiplicative at ({a}, {b})", witness=(a, b))
        if set(self.projection) != set(self.group.elements):
            raise NotAHomomorphism("projection is not surjective")

    def __call__(self, a: int) -> int:
        return self.projection[a]

    @classmethod
    def identity(cls, G: FinGroup) -> "QuotientMap":
        return cls(G, G, tuple(G.elements))

    @cached_property
    def kernel(self) -> Subgroup:
        return Subgroup(self.parent, tuple(a for a in self.parent.elements if self.projection[a] == self.group.identity))


def quotient_map(G: FinGroup, N: Subgroup) -> QuotientMap:
    """
    Forms G/N.

    Args:
        G (FinGroup): The group to divide.
        N (Subgroup): A normal subgroup of G.

    Returns:
        QuotientMap: Quotient group with cosets ordered by their smallest element.
    """
    if N.parent != G:
        raise NotNormal("subgroup belongs to a different group")
    for g in G.elements:
        conj = N.conjugate(g)
        if conj.element_indices != N.element_indices:
            moved = next(x for x in N.element_indices if G.conjugate(g, x) not in N)
            raise NotNormal(f"conjugating {moved} by {g} leaves the subgroup", witness=(g, moved))

    coset_of: Dict[int, int] = {}
    representatives: List[int] = []
    for a in G.elements:
        if a in coset_of:
            continue
        k = len(representatives)
        representatives.append(a)
        for x in N.element_indices:
            coset_of[G.table[a][x]] = k
    table = [[coset_of[G.table[a][b]] for b in representatives] for a in representatives]
    generators = []
    for g in G.generator_indices:
        k = coset_of[g]
        if k != coset_of[G.identity] and k not in generators:
            generators.append(k)
    quotient = FinGroup(table, coset_of[G.identity], generators, name=f"{G.name}/N")
    return QuotientMap(G, quotient, tuple(coset_of[a] for a in G.elements))
