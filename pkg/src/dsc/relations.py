"""Binary relations on {0..n-1}, set partitions, Bell numbers and Next-Closure.

Relations are bitsets: pair ``(i, j)`` of a relation on ``n`` points lives at
bit ``i * n + j`` of a Python int.  Closed-set enumeration works on the same
kind of int bitmask, with element ``e`` at bit ``e``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, Optional

import numpy as np

from .errors import ContractError, SizeCapError

BELL_CAP = 64


@dataclass(frozen=True)
class BinaryRelation:
    size: int
    bits: int = 0

    def __post_init__(self):
        if self.size < 1:
            raise ContractError(f"relation size must be positive, got {self.size}")
        if self.bits < 0 or self.bits >> (self.size * self.size):
            raise ContractError("relation bits out of range for its size")

    # -- constructors -------------------------------------------------

    @classmethod
    def from_pairs(cls, size: int, pairs: Iterable[tuple[int, int]]) -> "BinaryRelation":
        bits = 0
        for i, j in pairs:
            if not (0 <= i < size and 0 <= j < size):
                raise ContractError(f"pair {(i, j)} out of range for size {size}")
            bits |= 1 << (i * size + j)
        return cls(size, bits)

    @classmethod
    def from_matrix(cls, matrix) -> "BinaryRelation":
        m = np.asarray(matrix, dtype=bool)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] == 0:
            raise ContractError("membership matrix must be square and non-empty")
        n = m.shape[0]
        return cls(n, mask_from_bool_array(m.reshape(-1)))

    @classmethod
    def diagonal(cls, size: int) -> "BinaryRelation":
        return cls(size, diagonal_bits(size))

    @classmethod
    def full(cls, size: int) -> "BinaryRelation":
        return cls(size, (1 << (size * size)) - 1)

    @classmethod
    def empty(cls, size: int) -> "BinaryRelation":
        return cls(size, 0)

    # -- views ----------------------------------------------------------

    def __contains__(self, pair) -> bool:
        i, j = pair
        return bool(self.bits >> (i * self.size + j) & 1)

    def __len__(self) -> int:
        return bin(self.bits).count("1")

    def __iter__(self) -> Iterator[tuple[int, int]]:
        return iter(self.pairs())

    def pairs(self) -> list[tuple[int, int]]:
        n = self.size
        return [divmod(e, n) for e in iter_bits(self.bits)]

    @property
    def membership(self) -> np.ndarray:
        """The n x n boolean membership matrix."""
        return bool_array_from_mask(self.bits, self.size * self.size).reshape(self.size, self.size)

    def inverse(self) -> "BinaryRelation":
        return BinaryRelation.from_matrix(self.membership.T)

    def _check(self, other: "BinaryRelation"):
        if other.size != self.size:
            raise ContractError(f"relation sizes differ: {self.size} vs {other.size}")

    def __or__(self, other: "BinaryRelation") -> "BinaryRelation":
        self._check(other)
        return BinaryRelation(self.size, self.bits | other.bits)

    def __and__(self, other: "BinaryRelation") -> "BinaryRelation":
        self._check(other)
        return BinaryRelation(self.size, self.bits & other.bits)

    def __le__(self, other: "BinaryRelation") -> bool:
        self._check(other)
        return self.bits & ~other.bits == 0

    def __repr__(self) -> str:
        return f"BinaryRelation({self.size}, {self.pairs()})"


@dataclass(frozen=True)
class Partition:
    """Set partition of {0..n-1}; blocks are sorted tuples ordered by least element."""

    ground_size: int
    blocks: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        canon = tuple(sorted((tuple(sorted(b)) for b in self.blocks), key=lambda b: b[0] if b else -1))
        seen = [x for b in canon for x in b]
        if any(len(b) == 0 for b in canon) or sorted(seen) != list(range(self.ground_size)):
            raise ContractError(f"blocks {self.blocks} do not partition {{0..{self.ground_size - 1}}}")
        object.__setattr__(self, "blocks", canon)

    @classmethod
    def from_relation(cls, rel: BinaryRelation) -> "Partition":
        if not is_equivalence(rel):
            raise ContractError("only an equivalence relation determines a partition")
        n = rel.size
        m = rel.membership
        blocks, placed = [], set()
        for i in range(n):
            if i not in placed:
                block = tuple(int(j) for j in np.nonzero(m[i])[0])
                placed.update(block)
                blocks.append(block)
        return cls(n, tuple(blocks))

    @classmethod
    def discrete(cls, n: int) -> "Partition":
        return cls(n, tuple((i,) for i in range(n)))

    @classmethod
    def single_block(cls, n: int) -> "Partition":
        return cls(n, (tuple(range(n)),))

    @property
    def block_sizes(self) -> tuple[int, ...]:
        return tuple(len(b) for b in self.blocks)

    def to_relation(self) -> BinaryRelation:
        n = self.ground_size
        return BinaryRelation.from_pairs(n, ((i, j) for b in self.blocks for i in b for j in b))


# -- bit helpers ----------------------------------------------------------


def iter_bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def diagonal_bits(n: int) -> int:
    bits = 0
    for i in range(n):
        bits |= 1 << (i * n + i)
    return bits


def bool_array_from_mask(mask: int, length: int) -> np.ndarray:
    nbytes = (length + 7) // 8
    raw = np.frombuffer(mask.to_bytes(nbytes, "little"), dtype=np.uint8)
    return np.unpackbits(raw, bitorder="little")[:length].astype(bool)


def mask_from_bool_array(arr: np.ndarray) -> int:
    return int.from_bytes(np.packbits(np.asarray(arr, dtype=bool), bitorder="little").tobytes(), "little")


# -- predicates and closure -------------------------------------------------


def is_reflexive(rel: BinaryRelation) -> bool:
    d = diagonal_bits(rel.size)
    return rel.bits & d == d


def is_symmetric(rel: BinaryRelation) -> bool:
    m = rel.membership
    return bool((m == m.T).all())


def is_transitive(rel: BinaryRelation) -> bool:
    m = rel.membership.astype(np.int64)
    return bool(((m @ m > 0) <= (m > 0)).all())


def is_equivalence(rel: BinaryRelation) -> bool:
    return is_reflexive(rel) and is_symmetric(rel) and is_transitive(rel)


def _find(parent: list[int], x: int) -> int:
    while parent[x] != x:
        parent[x] = parent[parent[x]]
        x = parent[x]
    return x


def equivalence_closure(rel: BinaryRelation) -> BinaryRelation:
    """Smallest equivalence containing ``rel`` (union-find over the symmetrized graph)."""
    n = rel.size
    parent = list(range(n))
    for i, j in rel.pairs():
        ri, rj = _find(parent, i), _find(parent, j)
        if ri != rj:
            parent[max(ri, rj)] = min(ri, rj)
    blocks: dict[int, list[int]] = {}
    for x in range(n):
        blocks.setdefault(_find(parent, x), []).append(x)
    return Partition(n, tuple(tuple(b) for b in blocks.values())).to_relation()


# -- counting -------------------------------------------------------------------


def bell(n: int, cap: int = BELL_CAP) -> int:
    """Number of set partitions of an n-set, via the Bell triangle."""
    if n < 0:
        raise ContractError("bell number of a negative size")
    if n > cap:
        raise SizeCapError(f"bell({n}) exceeds cap {cap}")
    row = [1]
    for _ in range(n):
        nxt = [row[-1]]
        for x in row:
            nxt.append(nxt[-1] + x)
        row = nxt
    return row[0]


def reflexive_count(n: int) -> int:
    if n < 0:
        raise ContractError("reflexive_count of a negative size")
    return 1 << (n * n - n)


def enumerate_partitions(n: int, cap: int = BELL_CAP) -> Iterator[Partition]:
    """Every partition of {0..n-1} once, via restricted growth strings."""
    if n > cap:
        raise SizeCapError(f"partitions of {n} points exceed cap {cap}")
    if n == 0:
        return
    labels = [0] * n

    def rec(pos: int, top: int):
        if pos == n:
            blocks: list[list[int]] = [[] for _ in range(top + 1)]
            for x, lab in enumerate(labels):
                blocks[lab].append(x)
            yield Partition(n, tuple(tuple(b) for b in blocks))
            return
        for lab in range(top + 2):
            labels[pos] = lab
            yield from rec(pos + 1, max(top, lab))

    labels[0] = 0
    yield from rec(1, 0)


# -- Next-Closure -------------------------------------------------------------


def enumerate_closed_sets(
    universe_size: int,
    closure: Callable[[int], int],
    early_exit: Optional[Callable[[int, int], Optional[int]]] = None,
) -> Iterator[int]:
    """Yield every closed subset of {0..universe_size-1} in lectic order.

    Index sets are int bitmasks.  ``closure`` must be extensive, monotone and
    idempotent.  ``early_exit(seed, i)``, when given, must return
    ``closure(seed)`` or ``None`` if that closure contains an element below
    ``i`` missing from ``seed``; it lets the closure abandon failing
    candidates as soon as they are doomed.
    """
    full = (1 << universe_size) - 1
    current = closure(0)
    yield current
    while current != full:
        a = current
        for i in range(universe_size - 1, -1, -1):
            bit = 1 << i
            if a & bit:
                a ^= bit
                continue
            below = bit - 1
            if early_exit is not None:
                b = early_exit(a | bit, i)
                if b is None:
                    continue
            else:
                b = closure(a | bit)
            if b & below == a:
                current = b
                break
        else:  # pragma: no cover - unreachable for a genuine closure operator
            raise ContractError("closure operator is not extensive")
        yield current
