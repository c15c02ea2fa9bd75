"""Finite groups by Cayley table, normal subgroups, and symbolic cyclic p-groups."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations
from typing import Sequence

from .errors import ContractError, SizeCapError, ValidationError
from .primes import is_prime
from .relations import enumerate_closed_sets, iter_bits

GROUP_CAP = 64

Table = tuple[tuple[int, ...], ...]


def as_table(table: Sequence[Sequence[int]]) -> Table:
    """Check a table is square with entries in range; return it as nested tuples."""
    rows = tuple(tuple(int(x) for x in row) for row in table)
    n = len(rows)
    if n == 0:
        raise ValidationError("empty table")
    for i, row in enumerate(rows):
        if len(row) != n:
            raise ValidationError(f"row {i} has length {len(row)}, expected {n}", witness=(i,))
        for j, x in enumerate(row):
            if not 0 <= x < n:
                raise ValidationError(f"entry ({i},{j}) = {x} out of range", witness=(i, j))
    return rows


def associativity_witness(table: Table):
    """First triple (x, y, z) with (xy)z != x(yz), or None."""
    n = len(table)
    for x in range(n):
        tx = table[x]
        for y in range(n):
            txy = table[tx[y]]
            ty = table[y]
            for z in range(n):
                if txy[z] != tx[ty[z]]:
                    return (x, y, z)
    return None


@dataclass(frozen=True)
class FiniteGroup:
    order: int
    table: Table
    identity: int
    inverse: tuple[int, ...]

    def mul(self, g: int, h: int) -> int:
        return self.table[g][h]

    def inv(self, g: int) -> int:
        return self.inverse[g]

    def conj(self, g: int, n: int) -> int:
        """n^-1 g n."""
        return self.table[self.table[self.inverse[n]][g]][n]


@dataclass(frozen=True)
class NormalSubgroup:
    elements: frozenset[int]

    def __contains__(self, g) -> bool:
        return g in self.elements

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(sorted(self.elements))

    def __repr__(self) -> str:
        return f"NormalSubgroup({sorted(self.elements)})"


def group_from_table(table: Sequence[Sequence[int]]) -> FiniteGroup:
    rows = as_table(table)
    n = len(rows)
    w = associativity_witness(rows)
    if w is not None:
        raise ValidationError(f"not associative at {w}", witness=w)
    identity = next(
        (e for e in range(n) if all(rows[e][x] == x and rows[x][e] == x for x in range(n))),
        None,
    )
    if identity is None:
        raise ValidationError("no identity element")
    inverse = []
    for g in range(n):
        h = next((h for h in range(n) if rows[g][h] == identity and rows[h][g] == identity), None)
        if h is None:
            raise ValidationError(f"element {g} has no inverse", witness=(g,))
        inverse.append(h)
    return FiniteGroup(n, rows, identity, tuple(inverse))


def generated_subgroup(G: FiniteGroup, gens) -> frozenset[int]:
    elems = {G.identity}
    frontier = list(set(gens) - elems)
    elems.update(frontier)
    gens = list(elems)
    while frontier:
        new = []
        for x in frontier:
            for g in gens:
                for y in (G.table[x][g], G.table[g][x]):
                    if y not in elems:
                        elems.add(y)
                        new.append(y)
        gens = list(elems)
        frontier = new
    return frozenset(elems)


def conjugacy_classes(G: FiniteGroup) -> list[frozenset[int]]:
    seen: set[int] = set()
    classes = []
    for g in range(G.order):
        if g not in seen:
            cls = frozenset(G.conj(g, n) for n in range(G.order))
            seen |= cls
            classes.append(cls)
    return classes


def is_normal_subgroup(G: FiniteGroup, elements) -> bool:
    s = set(elements)
    if G.identity not in s:
        return False
    if any(G.table[x][y] not in s for x in s for y in s):
        return False
    if any(G.inverse[x] not in s for x in s):
        return False
    return all(G.conj(x, n) in s for x in s for n in range(G.order))


def normal_subgroups(G: FiniteGroup, cap: int = GROUP_CAP) -> list[NormalSubgroup]:
    """All normal subgroups, largest first: G leads and the trivial subgroup closes."""
    if G.order > cap:
        raise SizeCapError(f"group order {G.order} exceeds cap {cap}")
    classes = conjugacy_classes(G)

    # A subgroup generated by a union of conjugacy classes is normal, so
    # closing over classes enumerates normal subgroups directly.
    def closure(mask: int) -> int:
        gens = set()
        for c in iter_bits(mask):
            gens |= classes[c]
        sub = generated_subgroup(G, gens)
        out = 0
        for c, cls in enumerate(classes):
            if cls <= sub:
                out |= 1 << c
        return out

    found = []
    for mask in enumerate_closed_sets(len(classes), closure):
        elems = frozenset().union(*(classes[c] for c in iter_bits(mask))) | {G.identity}
        found.append(NormalSubgroup(elems))
    found.sort(key=lambda N: (-len(N), sorted(N.elements)))
    return found


# -- symbolic Z_{p^k} -----------------------------------------------------------


@dataclass(frozen=True)
class SymbolicCyclicGroup:
    """Z_{p^k} described by (p, k); elements are never listed."""

    p: int
    k: int

    def __post_init__(self):
        if self.k < 0:
            raise ContractError(f"exponent k must be nonnegative, got {self.k}")
        if not is_prime(self.p):
            raise ContractError(f"{self.p} is not prime")


def cyclic_normal_chain(G: SymbolicCyclicGroup) -> range:
    """Exponents m = 0..k, m standing for the subgroup p^m Z_{p^k} (G first)."""
    return range(G.k + 1)


# -- stored corpus -------------------------------------------------------------


def cyclic_table(n: int) -> Table:
    return tuple(tuple((i + j) % n for j in range(n)) for i in range(n))


def _perm_group_table(perms: list[tuple[int, ...]]) -> Table:
    index = {p: i for i, p in enumerate(perms)}
    # (p * q)(x) = q(p(x)): apply p first.
    return tuple(tuple(index[tuple(q[p[x]] for x in range(len(p)))] for q in perms) for p in perms)


def _quaternion_table() -> Table:
    # Elements 0..7 are 1, -1, i, -i, j, -j, k, -k.
    basic = {
        ("1", "1"): ("1", 1), ("1", "i"): ("i", 1), ("1", "j"): ("j", 1), ("1", "k"): ("k", 1),
        ("i", "1"): ("i", 1), ("i", "i"): ("1", -1), ("i", "j"): ("k", 1), ("i", "k"): ("j", -1),
        ("j", "1"): ("j", 1), ("j", "i"): ("k", -1), ("j", "j"): ("1", -1), ("j", "k"): ("i", 1),
        ("k", "1"): ("k", 1), ("k", "i"): ("j", 1), ("k", "j"): ("i", -1), ("k", "k"): ("1", -1),
    }
    elems = [(u, s) for u in "1ijk" for s in (1, -1)]
    index = {e: n for n, e in enumerate(elems)}
    rows = []
    for u, s in elems:
        row = []
        for v, t in elems:
            w, sign = basic[(u, v)]
            row.append(index[(w, s * t * sign)])
        rows.append(tuple(row))
    return tuple(rows)


def _klein_table() -> Table:
    return tuple(tuple(i ^ j for j in range(4)) for i in range(4))


def _corpus_tables() -> dict[str, Table]:
    s3 = sorted(permutations(range(3)))
    square = [(0, 1, 2, 3), (1, 2, 3, 0), (2, 3, 0, 1), (3, 0, 1, 2),
              (0, 3, 2, 1), (2, 1, 0, 3), (1, 0, 3, 2), (3, 2, 1, 0)]
    return {
        "trivial": cyclic_table(1),
        "Z2": cyclic_table(2),
        "Z3": cyclic_table(3),
        "Z4": cyclic_table(4),
        "V4": _klein_table(),
        "Z5": cyclic_table(5),
        "S3": _perm_group_table(s3),
        "Z6": cyclic_table(6),
        "Z7": cyclic_table(7),
        "Z8": cyclic_table(8),
        "D4": _perm_group_table(square),
        "Q8": _quaternion_table(),
    }


GROUP_CORPUS: dict[str, Table] = _corpus_tables()


def corpus_group(name: str) -> FiniteGroup:
    return group_from_table(GROUP_CORPUS[name])


def cyclic_group(n: int) -> FiniteGroup:
    return group_from_table(cyclic_table(n))
