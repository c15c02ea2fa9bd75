"""Finite semigroups, brute-force congruence and diagonal-subsemigroup enumeration.

Both enumerations run Next-Closure over the universe of all n*n pairs, with
pair ``(x, y)`` at index ``x * n + y`` (the same layout as
:class:`~dsc.relations.BinaryRelation` bits).  Diagonal pairs belong to every
closed set, so the closed sets are exactly the diagonal subsemigroups (or
congruences).  The direct square S x S is never built as a semigroup; a
precomputed pair-product index table stands in for it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Iterator, Optional, Sequence

import numpy as np

from .errors import ContractError, SizeCapError, ValidationError
from .groups import Table, as_table, associativity_witness
from .relations import (
    BinaryRelation,
    bool_array_from_mask,
    diagonal_bits,
    enumerate_closed_sets,
    enumerate_partitions,
    is_equivalence,
    mask_from_bool_array,
)

BRUTE_FORCE_CAP = 10
PARTITION_ORACLE_CAP = 7


@dataclass(frozen=True)
class FiniteSemigroup:
    order: int
    table: Table = field(repr=False)

    @cached_property
    def array(self) -> np.ndarray:
        return np.array(self.table, dtype=np.int64)

    @cached_property
    def pair_products(self) -> np.ndarray:
        """``P[u, v]`` is the index of the product of pairs ``u`` and ``v`` in S x S."""
        n = self.order
        t = self.array
        xs, ys = np.divmod(np.arange(n * n), n)
        return t[xs[:, None], xs[None, :]] * n + t[ys[:, None], ys[None, :]]

    def mul(self, x: int, y: int) -> int:
        return self.table[x][y]


@dataclass(frozen=True)
class DscReport:
    congruence_count: int
    diagonal_count: int
    chi: Fraction

    def __post_init__(self):
        if not 1 <= self.congruence_count <= self.diagonal_count:
            raise ContractError(
                f"inconsistent counts: {self.congruence_count} congruences, "
                f"{self.diagonal_count} diagonal subsemigroups"
            )
        if self.chi != Fraction(self.congruence_count, self.diagonal_count):
            raise ContractError("chi does not match the counts")

    @classmethod
    def from_counts(cls, congruences: int, diagonals: int) -> "DscReport":
        return cls(congruences, diagonals, Fraction(congruences, diagonals))


def semigroup_from_table(table: Sequence[Sequence[int]]) -> FiniteSemigroup:
    rows = as_table(table)
    w = associativity_witness(rows)
    if w is not None:
        x, y, z = w
        raise ValidationError(
            f"not associative: ({x}*{y})*{z} = {rows[rows[x][y]][z]} but "
            f"{x}*({y}*{z}) = {rows[x][rows[y][z]]}",
            witness=w,
        )
    return FiniteSemigroup(len(rows), rows)


def is_group(S: FiniteSemigroup) -> bool:
    n = S.order
    t = S.table
    e = next((e for e in range(n) if all(t[e][x] == x == t[x][e] for x in range(n))), None)
    if e is None:
        return False
    return all(any(t[x][y] == e for y in range(n)) for x in range(n))


# -- predicates ---------------------------------------------------------------


def _check_size(S: FiniteSemigroup, rel: BinaryRelation):
    if rel.size != S.order:
        raise ContractError(f"relation on {rel.size} points, semigroup of order {S.order}")


def _is_compatible(S: FiniteSemigroup, member: np.ndarray) -> bool:
    idx = np.flatnonzero(member)
    return bool(member[S.pair_products[np.ix_(idx, idx)]].all())


def is_diagonal_subsemigroup(S: FiniteSemigroup, rel: BinaryRelation) -> bool:
    _check_size(S, rel)
    d = diagonal_bits(S.order)
    if rel.bits & d != d:
        return False
    return _is_compatible(S, bool_array_from_mask(rel.bits, S.order ** 2))


def is_congruence(S: FiniteSemigroup, rel: BinaryRelation) -> bool:
    _check_size(S, rel)
    return is_equivalence(rel) and _is_compatible(S, bool_array_from_mask(rel.bits, S.order ** 2))


# -- closures -------------------------------------------------------------------


def _compatible_close(S: FiniteSemigroup, member: np.ndarray, bound: Optional[int]) -> bool:
    """Close ``member`` in place under pair products; False if an index < bound appears."""
    P = S.pair_products
    every = np.flatnonzero(member)
    new = every
    while new.size:
        cand = np.concatenate((P[np.ix_(new, every)].ravel(), P[np.ix_(every, new)].ravel()))
        fresh = np.unique(cand[~member[cand]])
        if fresh.size == 0:
            break
        if bound is not None and fresh[0] < bound:
            return False
        member[fresh] = True
        every = np.concatenate((every, fresh))
        new = fresh
    return True


def _equivalence_close(n: int, member: np.ndarray, bound: Optional[int]) -> bool:
    m = member.reshape(n, n)
    m |= np.eye(n, dtype=bool)
    closed = m | m.T
    while True:
        nxt = (closed.astype(np.int64) @ closed.astype(np.int64)) > 0
        if (nxt == closed).all():
            break
        closed = nxt
    if bound is not None:
        added = np.flatnonzero((closed & ~m).reshape(-1))
        if added.size and added[0] < bound:
            return False
    m |= closed
    return True


def _diag_close_mask(S: FiniteSemigroup, mask: int, bound: Optional[int] = None) -> Optional[int]:
    n2 = S.order ** 2
    member = bool_array_from_mask(mask | diagonal_bits(S.order), n2)
    if not _compatible_close(S, member, bound):
        return None
    return mask_from_bool_array(member)


def _cong_close_mask(S: FiniteSemigroup, mask: int, bound: Optional[int] = None) -> Optional[int]:
    n = S.order
    member = bool_array_from_mask(mask | diagonal_bits(n), n * n)
    while True:
        before = member.copy()
        if not _equivalence_close(n, member, bound):
            return None
        if not _compatible_close(S, member, bound):
            return None
        if (member == before).all():
            return mask_from_bool_array(member)


def _seed_mask(S: FiniteSemigroup, seed) -> int:
    if isinstance(seed, BinaryRelation):
        _check_size(S, seed)
        return seed.bits
    return BinaryRelation.from_pairs(S.order, seed).bits


def diagonal_closure(S: FiniteSemigroup, seed: Iterable[tuple[int, int]] | BinaryRelation = ()) -> BinaryRelation:
    """Least diagonal subsemigroup containing ``seed``."""
    return BinaryRelation(S.order, _diag_close_mask(S, _seed_mask(S, seed)))


def congruence_closure(S: FiniteSemigroup, seed: Iterable[tuple[int, int]] | BinaryRelation = ()) -> BinaryRelation:
    """Least congruence containing ``seed``."""
    return BinaryRelation(S.order, _cong_close_mask(S, _seed_mask(S, seed)))


# -- enumeration ----------------------------------------------------------------


def _check_cap(S: FiniteSemigroup, cap: int):
    if S.order > cap:
        raise SizeCapError(
            f"semigroup order {S.order} exceeds the brute-force cap {cap}; raise --cap, or use "
            "the structural Rees/Clifford paths (`dsc rees`, `dsc clifford`)"
        )


def enumerate_diagonal_subsemigroups(S: FiniteSemigroup, cap: int = BRUTE_FORCE_CAP) -> Iterator[BinaryRelation]:
    _check_cap(S, cap)
    n = S.order
    for mask in enumerate_closed_sets(
        n * n,
        lambda m: _diag_close_mask(S, m),
        lambda m, i: _diag_close_mask(S, m, i),
    ):
        yield BinaryRelation(n, mask)


def enumerate_congruences(S: FiniteSemigroup, cap: int = BRUTE_FORCE_CAP) -> Iterator[BinaryRelation]:
    _check_cap(S, cap)
    n = S.order
    for mask in enumerate_closed_sets(
        n * n,
        lambda m: _cong_close_mask(S, m),
        lambda m, i: _cong_close_mask(S, m, i),
    ):
        yield BinaryRelation(n, mask)


def congruences_by_partition_filter(S: FiniteSemigroup, cap: int = PARTITION_ORACLE_CAP) -> list[BinaryRelation]:
    """Independent congruence oracle: test every partition for compatibility."""
    if S.order > cap:
        raise SizeCapError(f"partition oracle limited to order {cap}")
    out = []
    for part in enumerate_partitions(S.order):
        rel = part.to_relation()
        if _is_compatible(S, bool_array_from_mask(rel.bits, S.order ** 2)):
            out.append(rel)
    return out


def dsc_coefficient(S: FiniteSemigroup, cap: int = BRUTE_FORCE_CAP) -> DscReport:
    congruences = sum(1 for _ in enumerate_congruences(S, cap))
    diagonals = sum(1 for _ in enumerate_diagonal_subsemigroups(S, cap))
    return DscReport.from_counts(congruences, diagonals)


# -- small constructions ------------------------------------------------------


def rectangular_band(a: int, b: int) -> FiniteSemigroup:
    """I x Lambda with (i, l)(j, m) = (i, m); element (i, l) has index i*b + l."""
    return semigroup_from_table(
        [[(x // b) * b + (y % b) for y in range(a * b)] for x in range(a * b)]
    )


def chain_semilattice(n: int) -> FiniteSemigroup:
    """{0..n-1} under min."""
    return semigroup_from_table([[min(x, y) for y in range(n)] for x in range(n)])
