"""Clifford semigroups S[Y; G_a; phi_{a,b}]: kernels, pairs and the chi(S) <= chi(Y) bound.

The semilattice Y is an explicit meet table; a >= b means meet(a, b) = b.
Structure maps are index lists ``homs[(a, b)]`` for a > b; phi_{a,a} is the
identity and is filled in automatically.  Materialized elements are ordered by
node, then by index inside the node's group.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Iterator, Mapping, Sequence

from .errors import ContractError, SizeCapError, ValidationError
from .groups import FiniteGroup, NormalSubgroup, Table, as_table, cyclic_group, generated_subgroup, normal_subgroups
from .relations import BinaryRelation
from .semigroup import (
    BRUTE_FORCE_CAP,
    DscReport,
    FiniteSemigroup,
    dsc_coefficient,
    enumerate_congruences,
    enumerate_diagonal_subsemigroups,
    is_congruence,
    is_diagonal_subsemigroup,
    semigroup_from_table,
)

CLIFFORD_CAP = 200


@dataclass(frozen=True, eq=False)
class CliffordSystem:
    meet: Table
    groups: tuple[FiniteGroup, ...]
    homs: Mapping[tuple[int, int], tuple[int, ...]] = field(repr=False)

    @property
    def size(self) -> int:
        return len(self.meet)

    def geq(self, alpha: int, beta: int) -> bool:
        return self.meet[alpha][beta] == beta

    def comparable_pairs(self) -> list[tuple[int, int]]:
        """All (a, b) with a >= b, including a == b."""
        n = self.size
        return [(x, y) for x in range(n) for y in range(n) if self.geq(x, y)]

    def phi(self, alpha: int, beta: int, g: int) -> int:
        return self.homs[(alpha, beta)][g]

    @property
    def offsets(self) -> tuple[int, ...]:
        out, acc = [], 0
        for G in self.groups:
            out.append(acc)
            acc += G.order
        return tuple(out)

    @property
    def order(self) -> int:
        return sum(G.order for G in self.groups)

    def element(self, alpha: int, g: int) -> int:
        return self.offsets[alpha] + g

    def locate(self, x: int) -> tuple[int, int]:
        for alpha, off in reversed(list(enumerate(self.offsets))):
            if x >= off:
                return alpha, x - off
        raise ContractError(f"element {x} out of range")

    @property
    def semilattice(self) -> FiniteSemigroup:
        return semigroup_from_table(self.meet)


@dataclass(frozen=True)
class KernelFamily:
    subgroups: tuple[NormalSubgroup, ...]

    def __getitem__(self, alpha: int) -> NormalSubgroup:
        return self.subgroups[alpha]


@dataclass(frozen=True)
class CliffordPair:
    kernel: KernelFamily
    trace: BinaryRelation
    kind: str  # "congruence-pair" or "diagonal-pair"


@dataclass(frozen=True)
class CliffordBoundReport:
    chi_S: DscReport
    chi_Y: DscReport
    kernels: int
    pair_lower_bound: int
    pair_lower_bound_holds: bool
    congruence_upper_bound: int

    @property
    def bound_holds(self) -> bool:
        return 0 < self.chi_S.chi <= self.chi_Y.chi

    @property
    def status(self) -> str:
        if not self.bound_holds:
            return "violated"
        return "tight" if self.chi_S.chi == self.chi_Y.chi else "strict"


# -- validation ------------------------------------------------------------------


def _check_semilattice(meet: Table):
    n = len(meet)
    for x in range(n):
        if meet[x][x] != x:
            raise ValidationError(f"meet table not idempotent at {x}", witness=(x,))
        for y in range(n):
            if meet[x][y] != meet[y][x]:
                raise ValidationError(f"meet table not commutative at ({x},{y})", witness=(x, y))
    try:
        semigroup_from_table(meet)
    except ValidationError as exc:
        raise ValidationError(f"meet table {exc}", witness=exc.witness) from None


def validate_system(
    meet: Sequence[Sequence[int]],
    groups: Sequence[FiniteGroup],
    homs: Mapping[tuple[int, int], Sequence[int]],
) -> CliffordSystem:
    meet_t = as_table(meet)
    _check_semilattice(meet_t)
    n = len(meet_t)
    if len(groups) != n:
        raise ValidationError(f"{len(groups)} groups for a semilattice of size {n}")
    full: dict[tuple[int, int], tuple[int, ...]] = {}
    for (alpha, beta), mapping in homs.items():
        if not (0 <= alpha < n and 0 <= beta < n) or meet_t[alpha][beta] != beta:
            raise ValidationError(f"hom {alpha}->{beta} given for a pair with {alpha} not >= {beta}",
                                  witness=(alpha, beta))
        full[(alpha, beta)] = tuple(int(v) for v in mapping)
    for alpha in range(n):
        ident = tuple(range(groups[alpha].order))
        if full.setdefault((alpha, alpha), ident) != ident:
            raise ValidationError(f"phi_{alpha},{alpha} is not the identity map", witness=(alpha, alpha))
    for alpha in range(n):
        for beta in range(n):
            if meet_t[alpha][beta] != beta:
                continue
            if (alpha, beta) not in full:
                raise ValidationError(f"missing hom {alpha}->{beta}", witness=(alpha, beta))
            Ga, Gb = groups[alpha], groups[beta]
            f = full[(alpha, beta)]
            if len(f) != Ga.order or any(not 0 <= v < Gb.order for v in f):
                raise ValidationError(f"hom {alpha}->{beta} is not a map G_{alpha} -> G_{beta}",
                                      witness=(alpha, beta))
            for x in range(Ga.order):
                for y in range(Ga.order):
                    if f[Ga.mul(x, y)] != Gb.mul(f[x], f[y]):
                        raise ValidationError(
                            f"hom {alpha}->{beta} is not a homomorphism at ({x},{y})",
                            witness=(alpha, beta, x, y),
                        )
    for alpha in range(n):
        for beta in range(n):
            for gamma in range(n):
                if meet_t[alpha][beta] == beta and meet_t[beta][gamma] == gamma:
                    f, g, h = full[(alpha, beta)], full[(beta, gamma)], full[(alpha, gamma)]
                    for x in range(groups[alpha].order):
                        if g[f[x]] != h[x]:
                            raise ValidationError(
                                f"phi_{alpha},{beta} then phi_{beta},{gamma} differs from "
                                f"phi_{alpha},{gamma} at {x}",
                                witness=(alpha, beta, gamma, x),
                            )
    return CliffordSystem(meet_t, tuple(groups), full)


# -- materialization --------------------------------------------------------------


def _product_parts(sys: CliffordSystem, alpha: int, g: int, beta: int, h: int) -> tuple[int, int]:
    gamma = sys.meet[alpha][beta]
    return gamma, sys.groups[gamma].mul(sys.phi(alpha, gamma, g), sys.phi(beta, gamma, h))


def materialize_clifford(sys: CliffordSystem, cap: int = CLIFFORD_CAP) -> FiniteSemigroup:
    if sys.order > cap:
        raise SizeCapError(f"clifford semigroup of order {sys.order} exceeds cap {cap}")
    elems = [sys.locate(x) for x in range(sys.order)]
    table = [
        [sys.element(*_product_parts(sys, a, g, b, h)) for (b, h) in elems]
        for (a, g) in elems
    ]
    return semigroup_from_table(table)


def idempotent_table(sys: CliffordSystem) -> Table:
    """Products of the identities 1_a inside S, as indices of Y."""
    S = materialize_clifford(sys)
    ones = [sys.element(a, sys.groups[a].identity) for a in range(sys.size)]
    back = {x: a for a, x in enumerate(ones)}
    return tuple(tuple(back[S.mul(x, y)] for y in ones) for x in ones)


# -- kernels and pairs ----------------------------------------------------------------


def enumerate_kernels(sys: CliffordSystem) -> list[KernelFamily]:
    options = [normal_subgroups(G) for G in sys.groups]
    strict = [(a, b) for (a, b) in sys.comparable_pairs() if a != b]
    out = []
    for choice in product(*options):
        if all(sys.phi(a, b, x) in choice[b] for (a, b) in strict for x in choice[a]):
            out.append(KernelFamily(tuple(choice)))
    return out


def _kernel_contains(sys: CliffordSystem, kernel: KernelFamily, alpha: int, g: int) -> bool:
    return g in kernel[alpha]


def _check_pair_shape(sys: CliffordSystem, pair: CliffordPair):
    if pair.trace.size != sys.size or len(pair.kernel.subgroups) != sys.size:
        raise ContractError("pair shape does not match the semilattice")


def is_congruence_pair(sys: CliffordSystem, pair: CliffordPair) -> bool:
    _check_pair_shape(sys, pair)
    if not is_congruence(sys.semilattice, pair.trace):
        return False
    for alpha, beta in sys.comparable_pairs():
        if (alpha, beta) not in pair.trace:
            continue
        for x in range(sys.groups[alpha].order):
            if sys.phi(alpha, beta, x) in pair.kernel[beta] and x not in pair.kernel[alpha]:
                return False
    return True


def _is_kernel(sys: CliffordSystem, kernel: KernelFamily) -> bool:
    return all(
        sys.phi(a, b, x) in kernel[b]
        for (a, b) in sys.comparable_pairs()
        for x in kernel[a]
    )


def rho_from_pair(sys: CliffordSystem, pair: CliffordPair) -> BinaryRelation:
    """{(x, y) : (x x^-1, y y^-1) in trace, x y^-1 in N}."""
    _check_pair_shape(sys, pair)
    if not is_diagonal_subsemigroup(sys.semilattice, pair.trace) or not _is_kernel(sys, pair.kernel):
        raise ContractError("not a diagonal pair: trace must be a diagonal subsemigroup of Y and "
                            "the kernel closed under the structure maps")
    elems = [sys.locate(x) for x in range(sys.order)]
    pairs = []
    for x, (alpha, g) in enumerate(elems):
        for y, (beta, h) in enumerate(elems):
            if (alpha, beta) not in pair.trace:
                continue
            gamma, w = _product_parts(sys, alpha, g, beta, sys.groups[beta].inv(h))
            if w in pair.kernel[gamma]:
                pairs.append((x, y))
    return BinaryRelation.from_pairs(sys.order, pairs)


def enumerate_diagonal_pairs(sys: CliffordSystem, cap: int = BRUTE_FORCE_CAP) -> Iterator[CliffordPair]:
    traces = list(enumerate_diagonal_subsemigroups(sys.semilattice, cap))
    for kernel in enumerate_kernels(sys):
        for trace in traces:
            yield CliffordPair(kernel, trace, "diagonal-pair")


def enumerate_congruence_pairs(sys: CliffordSystem, cap: int = BRUTE_FORCE_CAP) -> Iterator[CliffordPair]:
    traces = list(enumerate_congruences(sys.semilattice, cap))
    for kernel in enumerate_kernels(sys):
        for trace in traces:
            pair = CliffordPair(kernel, trace, "congruence-pair")
            if is_congruence_pair(sys, pair):
                yield pair


def chi_bound_report(sys: CliffordSystem, cap: int = BRUTE_FORCE_CAP) -> CliffordBoundReport:
    S = materialize_clifford(sys)
    chi_S = dsc_coefficient(S, cap)
    chi_Y = dsc_coefficient(sys.semilattice, cap)
    K = len(enumerate_kernels(sys))
    lower = K * chi_Y.diagonal_count
    return CliffordBoundReport(
        chi_S=chi_S,
        chi_Y=chi_Y,
        kernels=K,
        pair_lower_bound=lower,
        pair_lower_bound_holds=lower <= chi_S.diagonal_count,
        congruence_upper_bound=K * chi_Y.congruence_count,
    )


# -- the adjoined-identity example -----------------------------------------------------


def adjoined_identity_system(G: FiniteGroup) -> CliffordSystem:
    """G^1 as a 2-chain: node 0 holds the new identity above node 1 holding G."""
    return validate_system([[0, 1], [1, 1]], [cyclic_group(1), G], {(0, 1): [G.identity]})


def adjoined_identity_counterexample(G: FiniteGroup, H) -> BinaryRelation:
    """{(1,1)} u G x G u {1} x H on G^1, a diagonal subsemigroup outside the pair family."""
    H = frozenset(H)
    if not H or any(not 0 <= h < G.order for h in H) or generated_subgroup(G, H) != H:
        raise ContractError("H must be a subgroup of G")
    if len(H) == G.order:
        raise ContractError("H must be a proper subgroup of G")
    sys = adjoined_identity_system(G)
    one = sys.element(0, 0)
    g_elems = [sys.element(1, g) for g in range(G.order)]
    pairs = [(one, one)] + [(x, y) for x in g_elems for y in g_elems] + [(one, sys.element(1, h)) for h in sorted(H)]
    rel = BinaryRelation.from_pairs(sys.order, pairs)
    S = materialize_clifford(sys)
    if not is_diagonal_subsemigroup(S, rel):  # pragma: no cover - guaranteed by construction
        raise RuntimeError("adjoined-identity relation is not a diagonal subsemigroup")
    if any(rho_from_pair(sys, pair) == rel for pair in enumerate_diagonal_pairs(sys)):  # pragma: no cover
        raise RuntimeError("adjoined-identity relation arises from a diagonal pair")
    return rel


def semilattice_chi(meet: Sequence[Sequence[int]], cap: int = BRUTE_FORCE_CAP) -> Fraction:
    Y = semigroup_from_table(meet)
    _check_semilattice(Y.table)
    return dsc_coefficient(Y, cap).chi
