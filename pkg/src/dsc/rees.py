"""Rees matrix semigroups M[G; I, Lambda; P]: extracts, linked triples and census counts.

P is stored row-major by Lambda: ``P[l][i]`` is the entry p_{l i}.  Elements of
a materialized semigroup are triples (i, g, l) numbered lexicographically,
``(i * |G| + g) * b + l``.

Two flavours of spec exist.  :class:`ReesSpec` holds a concrete group table.
:class:`SymbolicCyclicReesSpec` works over Z_{p^k} written additively, with
entries kept as plain integers; membership of an extract in p^m Z_{p^k} is
decided by its p-adic valuation capped at k, so p^k is never formed.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from fractions import Fraction
from itertools import combinations, product
from typing import Iterator, Optional, Sequence, Union

import gmpy2

from .errors import ContractError, SizeCapError
from .groups import (
    FiniteGroup,
    NormalSubgroup,
    SymbolicCyclicGroup,
    cyclic_group,
    normal_subgroups,
)
from .relations import (
    BinaryRelation,
    Partition,
    bell,
    enumerate_partitions,
    is_equivalence,
    is_reflexive,
    reflexive_count,
)
from .semigroup import (
    DscReport,
    FiniteSemigroup,
    is_diagonal_subsemigroup,
    semigroup_from_table,
)

MATERIALIZE_CAP = 200

Matrix = tuple[tuple[int, ...], ...]


def _as_matrix(P: Sequence[Sequence[int]], a: int, b: int) -> Matrix:
    rows = tuple(tuple(int(x) for x in row) for row in P)
    if len(rows) != b or any(len(r) != a for r in rows):
        raise ContractError(f"sandwich matrix must be {b} x {a} (rows indexed by Lambda)")
    return rows


@dataclass(frozen=True)
class ReesSpec:
    group: FiniteGroup
    a: int
    b: int
    P: Matrix

    def __post_init__(self):
        if self.a < 1 or self.b < 1:
            raise ContractError("index sets must be nonempty")
        object.__setattr__(self, "P", _as_matrix(self.P, self.a, self.b))
        for row in self.P:
            for x in row:
                if not 0 <= x < self.group.order:
                    raise ContractError(f"matrix entry {x} is not an element of the group")

    @property
    def order(self) -> int:
        return self.a * self.group.order * self.b

    def element(self, i: int, g: int, lam: int) -> int:
        return (i * self.group.order + g) * self.b + lam

    def triple(self, x: int) -> tuple[int, int, int]:
        rest, lam = divmod(x, self.b)
        i, g = divmod(rest, self.group.order)
        return i, g, lam


@dataclass(frozen=True)
class SymbolicCyclicReesSpec:
    group: SymbolicCyclicGroup
    a: int
    b: int
    P: Matrix

    def __post_init__(self):
        if self.a < 1 or self.b < 1:
            raise ContractError("index sets must be nonempty")
        object.__setattr__(self, "P", _as_matrix(self.P, self.a, self.b))
        if any(x < 0 for row in self.P for x in row):
            raise ContractError("residues must be nonnegative integers")

    @cached_property
    def mpz_P(self):
        return tuple(tuple(gmpy2.mpz(x) for x in row) for row in self.P)


AnySpec = Union[ReesSpec, SymbolicCyclicReesSpec]
# A normal subgroup of a concrete group, or the exponent m of p^m Z_{p^k}.
Subgroup = Union[NormalSubgroup, int]


@dataclass(frozen=True)
class LinkedTriple:
    N: Subgroup
    S_rel: BinaryRelation
    T_rel: BinaryRelation
    kind: str

    def __post_init__(self):
        if self.kind not in ("equivalence", "reflexive"):
            raise ContractError(f"unknown triple kind {self.kind!r}")
        if not (is_reflexive(self.S_rel) and is_reflexive(self.T_rel)):
            raise ContractError("triple relations must be reflexive")
        if self.kind == "equivalence" and not (is_equivalence(self.S_rel) and is_equivalence(self.T_rel)):
            raise ContractError("an equivalence triple needs equivalence relations")

    @classmethod
    def of(cls, N: Subgroup, S_rel: BinaryRelation, T_rel: BinaryRelation) -> "LinkedTriple":
        both = is_equivalence(S_rel) and is_equivalence(T_rel)
        return cls(N, S_rel, T_rel, "equivalence" if both else "reflexive")


@dataclass(frozen=True)
class CensusRow:
    """Census for one normal subgroup, or for a run of chain exponents sharing sigma/tau."""

    subgroup: Union[NormalSubgroup, range]
    multiplicity: int
    sigma: Partition
    tau: Partition
    e_I: int
    e_L: int
    r_I: int
    r_L: int


@dataclass(frozen=True)
class TripleCensus:
    rows: tuple[CensusRow, ...]

    @property
    def equivalence_total(self) -> int:
        return sum(r.multiplicity * r.e_I * r.e_L for r in self.rows)

    @property
    def reflexive_total(self) -> int:
        return sum(r.multiplicity * r.r_I * r.r_L for r in self.rows)


# -- extracts -------------------------------------------------------------------


def _check_indices(spec: AnySpec, lam: int, mu: int, i: int, j: int):
    if not (0 <= lam < spec.b and 0 <= mu < spec.b and 0 <= i < spec.a and 0 <= j < spec.a):
        raise ContractError(f"extract indices ({lam},{mu},{i},{j}) out of range")


def extract(spec: AnySpec, lam: int, mu: int, i: int, j: int) -> int:
    """q_{lam mu i j} = p_{lam i} p_{mu i}^-1 p_{mu j} p_{lam j}^-1.

    Symbolic specs return the integer p_{lam i} - p_{mu i} + p_{mu j} - p_{lam j},
    a representative of the residue class mod p^k.
    """
    _check_indices(spec, lam, mu, i, j)
    P = spec.P
    if isinstance(spec, SymbolicCyclicReesSpec):
        return P[lam][i] - P[mu][i] + P[mu][j] - P[lam][j]
    G = spec.group
    t, inv = G.table, G.inverse
    return t[t[t[P[lam][i]][inv[P[mu][i]]]][P[mu][j]]][inv[P[lam][j]]]


def _valuation(x, p: int, powers: Optional[dict] = None) -> int:
    """v_p(x) for x != 0; ``powers`` caches p^m across calls."""
    x = abs(gmpy2.mpz(x))
    if x.bit_length() > 4096:
        # Large inputs are usually p^v times a small cofactor: try the largest
        # power that fits first, since mpz remove is slow on huge counts.
        guess = int(gmpy2.floor(gmpy2.log(x) / gmpy2.log(p))) - 1
        if guess > 0:
            if powers is None:
                powers = {}
            if guess not in powers:
                powers[guess] = gmpy2.mpz(p) ** guess
            pg = powers[guess]
            if gmpy2.is_divisible(x, pg):
                return guess + int(gmpy2.remove(gmpy2.divexact(x, pg), p)[1])
    return int(gmpy2.remove(x, p)[1])


def capped_valuation(q: int, p: int, k: int) -> int:
    """min(v_p(q), k); q = 0 counts as k.  Decides q in p^m Z_{p^k} as value >= m."""
    if q == 0:
        return k
    return min(_valuation(q, p), k)


def _capped_valuations(extracts: dict, p: int, k: int) -> dict:
    powers: dict = {}
    return {key: k if q == 0 else min(_valuation(q, p, powers), k) for key, q in extracts.items()}


def _all_extracts(spec: AnySpec):
    if isinstance(spec, SymbolicCyclicReesSpec):
        P = spec.mpz_P
        return {
            (lam, mu, i, j): P[lam][i] - P[mu][i] + P[mu][j] - P[lam][j]
            for lam in range(spec.b) for mu in range(spec.b)
            for i in range(spec.a) for j in range(spec.a)
        }
    return {
        (lam, mu, i, j): extract(spec, lam, mu, i, j)
        for lam in range(spec.b) for mu in range(spec.b)
        for i in range(spec.a) for j in range(spec.a)
    }


def _membership_values(spec: AnySpec) -> dict:
    """Per (l, m, i, j): the extract itself, or its capped valuation when symbolic."""
    q = _all_extracts(spec)
    if isinstance(spec, SymbolicCyclicReesSpec):
        return _capped_valuations(q, spec.group.p, spec.group.k)
    return q


def _member(spec: AnySpec, value: int, N: Subgroup) -> bool:
    if isinstance(spec, SymbolicCyclicReesSpec):
        return value >= N
    return value in N


def is_linked(spec: AnySpec, N: Subgroup, S_rel: BinaryRelation, T_rel: BinaryRelation) -> bool:
    if S_rel.size != spec.a or T_rel.size != spec.b:
        raise ContractError("relation sizes must match |I| and |Lambda|")
    vals = _membership_values(spec)
    a, b = spec.a, spec.b
    for i, j in S_rel.pairs():
        if not all(_member(spec, vals[lam, mu, i, j], N) for lam in range(b) for mu in range(b)):
            return False
    for lam, mu in T_rel.pairs():
        if not all(_member(spec, vals[lam, mu, i, j], N) for i in range(a) for j in range(a)):
            return False
    return True


# -- maximal linked relations and the census ------------------------------------


def _partition_from_pairs(n: int, pairs) -> Partition:
    rel = BinaryRelation.from_pairs(n, pairs)
    if not is_equivalence(rel):
        raise RuntimeError("maximal linked relation is not an equivalence; extract arithmetic is broken")
    return Partition.from_relation(rel)


def sigma_tau(spec: AnySpec, N: Subgroup, _values: Optional[dict] = None) -> tuple[Partition, Partition]:
    """Largest relations on I and on Lambda whose related indices force extracts into N."""
    vals = _membership_values(spec) if _values is None else _values
    a, b = spec.a, spec.b
    sigma = [
        (i, j) for i in range(a) for j in range(a)
        if all(_member(spec, vals[lam, mu, i, j], N) for lam in range(b) for mu in range(b))
    ]
    tau = [
        (lam, mu) for lam in range(b) for mu in range(b)
        if all(_member(spec, vals[lam, mu, i, j], N) for i in range(a) for j in range(a))
    ]
    return _partition_from_pairs(a, sigma), _partition_from_pairs(b, tau)


def _row(subgroup, multiplicity: int, sigma: Partition, tau: Partition) -> CensusRow:
    e_I = r_I = e_L = r_L = 1
    for s in sigma.block_sizes:
        e_I *= bell(s)
        r_I *= reflexive_count(s)
    for s in tau.block_sizes:
        e_L *= bell(s)
        r_L *= reflexive_count(s)
    return CensusRow(subgroup, multiplicity, sigma, tau, e_I, e_L, r_I, r_L)


def triple_census(spec: AnySpec) -> TripleCensus:
    if isinstance(spec, SymbolicCyclicReesSpec):
        return _symbolic_census(spec)
    vals = _membership_values(spec)
    rows = []
    for N in normal_subgroups(spec.group):
        sigma, tau = sigma_tau(spec, N, vals)
        rows.append(_row(N, 1, sigma, tau))
    return TripleCensus(tuple(rows))


def _symbolic_census(spec: SymbolicCyclicReesSpec) -> TripleCensus:
    # sigma/tau for p^m Z_{p^k} only change when m passes an extract valuation,
    # so the chain 0..k splits into a handful of runs, however large k is.
    k = spec.group.k
    vals = _membership_values(spec)
    starts = sorted({0} | {v + 1 for v in vals.values() if v < k})
    rows = []
    for idx, lo in enumerate(starts):
        hi = starts[idx + 1] - 1 if idx + 1 < len(starts) else k
        sigma, tau = sigma_tau(spec, lo, vals)
        rows.append(_row(range(lo, hi + 1), hi - lo + 1, sigma, tau))
    return TripleCensus(tuple(rows))


def chi_rees(spec: AnySpec) -> DscReport:
    census = triple_census(spec)
    return DscReport.from_counts(census.equivalence_total, census.reflexive_total)


def rectangular_band_bound(a: int, b: int) -> Fraction:
    """B(a)B(b) / (2^(a^2-a) 2^(b^2-b)): the chi of the a x b rectangular band."""
    return Fraction(bell(a) * bell(b), reflexive_count(a) * reflexive_count(b))


# -- materialization and the two maps --------------------------------------------


def to_concrete(spec: SymbolicCyclicReesSpec, cap: int = MATERIALIZE_CAP) -> ReesSpec:
    """Replace Z_{p^k} by its Cayley table; only for a * p^k * b within ``cap``."""
    p, k = spec.group.p, spec.group.k
    if k.bit_length() > 16 or spec.a * spec.b * p ** k > cap:
        raise SizeCapError(f"Z_{p}^{k} rees semigroup exceeds materialization cap {cap}")
    m = p ** k
    G = cyclic_group(m)
    return ReesSpec(G, spec.a, spec.b, tuple(tuple(x % m for x in row) for row in spec.P))


def materialize(spec: AnySpec, cap: int = MATERIALIZE_CAP) -> FiniteSemigroup:
    if isinstance(spec, SymbolicCyclicReesSpec):
        spec = to_concrete(spec, cap)
    if spec.order > cap:
        raise SizeCapError(f"rees semigroup of order {spec.order} exceeds materialization cap {cap}")
    t = spec.group.table
    P = spec.P
    n = spec.order
    table = []
    for x in range(n):
        i, g, lam = spec.triple(x)
        row = []
        for y in range(n):
            j, h, mu = spec.triple(y)
            row.append(spec.element(i, t[t[g][P[lam][j]]][h], mu))
        table.append(row)
    return semigroup_from_table(table)


def _require_concrete(spec: AnySpec) -> ReesSpec:
    if isinstance(spec, SymbolicCyclicReesSpec):
        return to_concrete(spec)
    return spec


def triple_to_relation(spec: AnySpec, triple: LinkedTriple, cap: int = MATERIALIZE_CAP) -> BinaryRelation:
    """rho_{N,S,T}: (i,g,l) ~ (j,h,m) iff (i,j) in S, (l,m) in T and
    p_{n i} g p_{l k} p_{m k}^-1 h^-1 p_{n j}^-1 in N for all k, n."""
    spec = _require_concrete(spec)
    N = triple.N
    if not is_linked(spec, N, triple.S_rel, triple.T_rel):
        raise ContractError("triple is not linked")
    if spec.order > cap:
        raise SizeCapError(f"rees semigroup of order {spec.order} exceeds materialization cap {cap}")
    G = spec.group
    t, inv = G.table, G.inverse
    P = spec.P
    a, b = spec.a, spec.b
    pairs = []
    for (i, j) in triple.S_rel.pairs():
        for (lam, mu) in triple.T_rel.pairs():
            for g in range(G.order):
                for h in range(G.order):
                    hi = inv[h]
                    ok = True
                    for nu in range(b):
                        left = t[P[nu][i]][g]
                        right = inv[P[nu][j]]
                        for k in range(a):
                            w = t[t[t[t[left][P[lam][k]]][inv[P[mu][k]]]][hi]][right]
                            if w not in N:
                                ok = False
                                break
                        if not ok:
                            break
                    if ok:
                        pairs.append((spec.element(i, g, lam), spec.element(j, h, mu)))
    return BinaryRelation.from_pairs(spec.order, pairs)


def relation_to_triple(spec: AnySpec, rel: BinaryRelation, cap: int = MATERIALIZE_CAP) -> LinkedTriple:
    """(N_rho, rho_I, rho_Lambda) of a diagonal subsemigroup rho."""
    spec = _require_concrete(spec)
    S = materialize(spec, cap)
    if rel.size != S.order or not is_diagonal_subsemigroup(S, rel):
        raise ContractError("relation is not a diagonal subsemigroup of the rees semigroup")
    G = spec.group
    inv, e = G.inverse, G.identity
    P = spec.P
    a, b = spec.a, spec.b
    el = spec.element
    N = frozenset(
        g for g in range(G.order)
        if all((el(i, g, lam), el(i, e, lam)) in rel for i in range(a) for lam in range(b))
    )
    rho_I = BinaryRelation.from_pairs(a, (
        (i, j) for i in range(a) for j in range(a)
        if all((el(i, inv[P[lam][i]], lam), el(j, inv[P[lam][j]], lam)) in rel for lam in range(b))
    ))
    rho_L = BinaryRelation.from_pairs(b, (
        (lam, mu) for lam in range(b) for mu in range(b)
        if all((el(i, inv[P[lam][i]], lam), el(i, inv[P[mu][i]], mu)) in rel for i in range(a))
    ))
    return LinkedTriple.of(NormalSubgroup(N), rho_I, rho_L)


def _subrelations(part: Partition, equivalences: bool) -> Iterator[BinaryRelation]:
    n = part.ground_size
    if equivalences:
        # Equivalences inside sigma are joins of partitions of each block.
        per_block = []
        for block in part.blocks:
            per_block.append([
                [(block[x], block[y]) for blk in sub.blocks for x in blk for y in blk]
                for sub in enumerate_partitions(len(block))
            ])
        for choice in product(*per_block):
            yield BinaryRelation.from_pairs(n, [pr for chunk in choice for pr in chunk])
        return
    off = [(x, y) for block in part.blocks for x in block for y in block if x != y]
    diag = [(x, x) for x in range(n)]
    for r in range(len(off) + 1):
        for chosen in combinations(off, r):
            yield BinaryRelation.from_pairs(n, diag + list(chosen))


def enumerate_linked_triples(spec: AnySpec, kind: str = "reflexive") -> Iterator[LinkedTriple]:
    """Every linked triple of the given kind, generated from the census partitions."""
    if kind not in ("equivalence", "reflexive"):
        raise ContractError(f"unknown triple kind {kind!r}")
    census = triple_census(spec)
    for row in census.rows:
        subgroups = row.subgroup if isinstance(row.subgroup, range) else (row.subgroup,)
        for N in subgroups:
            for S_rel in _subrelations(row.sigma, kind == "equivalence"):
                for T_rel in _subrelations(row.tau, kind == "equivalence"):
                    yield LinkedTriple.of(N, S_rel, T_rel)
