from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from dsc.corpus import rees_corpus
from dsc.errors import ContractError, SizeCapError
from dsc.groups import GROUP_CORPUS, NormalSubgroup, SymbolicCyclicGroup, corpus_group, cyclic_group, normal_subgroups
from dsc.rees import (
    LinkedTriple,
    ReesSpec,
    SymbolicCyclicReesSpec,
    capped_valuation,
    chi_rees,
    enumerate_linked_triples,
    extract,
    is_linked,
    materialize,
    rectangular_band_bound,
    relation_to_triple,
    sigma_tau,
    to_concrete,
    triple_census,
    triple_to_relation,
)
from dsc.relations import BinaryRelation, Partition, bell, equivalence_closure
from dsc.semigroup import dsc_coefficient, enumerate_diagonal_subsemigroups, is_diagonal_subsemigroup, rectangular_band

Z2 = cyclic_group(2)
Z2_FLAT = ReesSpec(Z2, 2, 2, [[0, 0], [0, 0]])
SYM = SymbolicCyclicReesSpec(SymbolicCyclicGroup(37, 8), 2, 2, [[1, 2], [4, 8]])
TRIVIAL_N = NormalSubgroup(frozenset({0}))
FULL_Z2 = NormalSubgroup(frozenset({0, 1}))


@st.composite
def concrete_specs(draw, max_dim=3):
    name = draw(st.sampled_from(["trivial", "Z2", "Z3", "Z4", "V4", "S3", "Q8"]))
    G = corpus_group(name)
    a = draw(st.integers(1, max_dim))
    b = draw(st.integers(1, max_dim))
    P = [[draw(st.integers(0, G.order - 1)) for _ in range(a)] for _ in range(b)]
    return ReesSpec(G, a, b, P)


def test_spec_validation():
    with pytest.raises(ContractError):
        ReesSpec(Z2, 2, 2, [[0, 0]])
    with pytest.raises(ContractError):
        ReesSpec(Z2, 1, 1, [[2]])
    with pytest.raises(ContractError):
        SymbolicCyclicReesSpec(SymbolicCyclicGroup(37, 2), 1, 1, [[-1]])


# -- extracts -------------------------------------------------------------------


def test_symbolic_extract_example():
    spec = SymbolicCyclicReesSpec(SymbolicCyclicGroup(37, 1), 2, 2, [[1, 2], [4, 8]])
    assert extract(spec, 0, 1, 0, 1) == 3
    assert extract(spec, 0, 1, 0, 1) % 37 == 3


def test_extract_index_check():
    with pytest.raises(ContractError):
        extract(Z2_FLAT, 0, 2, 0, 0)


@settings(max_examples=60, deadline=None)
@given(concrete_specs())
def test_extract_facts(spec):
    G = spec.group
    a, b = spec.a, spec.b
    q = {(l, m, i, j): extract(spec, l, m, i, j)
         for l in range(b) for m in range(b) for i in range(a) for j in range(a)}
    for (l, m, i, j), v in q.items():
        if i == j or l == m:
            assert v == G.identity
        assert G.inv(v) == q[l, m, j, i]
    for N in normal_subgroups(G):
        for (l, m, i, j), v in q.items():
            if v in N:
                assert {q[m, l, i, j], q[m, l, j, i], q[l, m, j, i]} <= N.elements
        # chain composition in both index positions
        for l, m, i, j, k in product(range(b), range(b), range(a), range(a), range(a)):
            if q[l, m, i, j] in N and q[l, m, j, k] in N:
                assert q[l, m, i, k] in N
        for i, j, l, m, n in product(range(a), range(a), range(b), range(b), range(b)):
            if q[l, m, i, j] in N and q[m, n, i, j] in N:
                assert q[l, n, i, j] in N


def test_all_identity_extracts():
    for l, m, i, j in product(range(2), repeat=4):
        assert extract(Z2_FLAT, l, m, i, j) == 0


# -- linked triples ---------------------------------------------------------------


def test_linked_examples():
    full2 = BinaryRelation.full(2)
    diag2 = BinaryRelation.diagonal(2)
    spec = ReesSpec(cyclic_group(3), 2, 2, [[0, 0], [0, 1]])
    G = NormalSubgroup(frozenset(range(3)))
    assert is_linked(spec, G, full2, full2)
    assert is_linked(spec, NormalSubgroup(frozenset({0})), diag2, diag2)
    assert not is_linked(spec, NormalSubgroup(frozenset({0})), full2, diag2)
    sym = SymbolicCyclicReesSpec(SymbolicCyclicGroup(37, 1), 2, 2, [[1, 2], [4, 8]])
    assert not is_linked(sym, 1, full2, diag2)  # trivial subgroup is p^1 Z_37
    assert is_linked(sym, 0, full2, full2)


def test_linked_shape_check():
    with pytest.raises(ContractError):
        is_linked(Z2_FLAT, TRIVIAL_N, BinaryRelation.diagonal(3), BinaryRelation.diagonal(2))


def test_triple_kind():
    eq = LinkedTriple.of(TRIVIAL_N, BinaryRelation.diagonal(2), BinaryRelation.full(2))
    assert eq.kind == "equivalence"
    refl = LinkedTriple.of(TRIVIAL_N, BinaryRelation.from_pairs(2, [(0, 0), (1, 1), (0, 1)]), BinaryRelation.diagonal(2))
    assert refl.kind == "reflexive"
    with pytest.raises(ContractError):
        LinkedTriple(TRIVIAL_N, refl.S_rel, refl.T_rel, "equivalence")
    with pytest.raises(ContractError):
        LinkedTriple.of(TRIVIAL_N, BinaryRelation.empty(2), BinaryRelation.diagonal(2))


@settings(max_examples=50, deadline=None)
@given(concrete_specs(), st.data())
def test_generated_equivalence_stays_linked(spec, data):
    a = spec.a
    N = data.draw(st.sampled_from(normal_subgroups(spec.group)))
    diag_L = BinaryRelation.diagonal(spec.b)
    linked = []
    for _ in range(data.draw(st.integers(1, 4))):
        bits = data.draw(st.integers(0, (1 << a * a) - 1))
        rel = BinaryRelation(a, bits) | BinaryRelation.diagonal(a)
        if is_linked(spec, N, rel, diag_L):
            linked.append(rel)
    union = BinaryRelation.diagonal(a)
    for r in linked:
        union = union | r
    assert is_linked(spec, N, equivalence_closure(union), diag_L)


# -- sigma/tau and the census ------------------------------------------------------


def test_sigma_tau_examples():
    assert sigma_tau(Z2_FLAT, FULL_Z2) == (Partition.single_block(2), Partition.single_block(2))
    assert sigma_tau(Z2_FLAT, TRIVIAL_N) == (Partition.single_block(2), Partition.single_block(2))
    assert sigma_tau(SYM, 1) == (Partition.discrete(2), Partition.discrete(2))
    assert sigma_tau(SYM, 0) == (Partition.single_block(2), Partition.single_block(2))


def test_census_band():
    spec = ReesSpec(cyclic_group(1), 2, 2, [[0, 0], [0, 0]])
    (row,) = triple_census(spec).rows
    assert (row.e_I, row.e_L, row.r_I, row.r_L) == (2, 2, 4, 4)
    assert chi_rees(spec).chi == Fraction(1, 4)


def test_census_flat_z2():
    census = triple_census(Z2_FLAT)
    assert len(census.rows) == 2
    assert all((r.e_I * r.e_L, r.r_I * r.r_L) == (4, 16) for r in census.rows)
    assert (census.equivalence_total, census.reflexive_total) == (8, 32)


def test_symbolic_census():
    census = triple_census(SYM)
    assert [(r.subgroup, r.multiplicity) for r in census.rows] == [(range(0, 1), 1), (range(1, 9), 8)]
    assert census.equivalence_total == 1 * 4 + 8
    assert census.reflexive_total == 1 * 16 + 8
    assert chi_rees(SYM).chi == Fraction(1, 2)


def test_symbolic_census_huge_exponent():
    k = 10 ** 40
    spec = SymbolicCyclicReesSpec(SymbolicCyclicGroup(37, k), 2, 2, [[37, 74], [148, 296]])
    census = triple_census(spec)
    assert [r.multiplicity for r in census.rows] == [2, k - 1]
    assert chi_rees(spec).chi == Fraction(2 * 4 + k - 1, 2 * 16 + k - 1)


@settings(max_examples=40, deadline=None)
@given(concrete_specs())
def test_census_counts_are_consistent(spec):
    for row in triple_census(spec).rows:
        assert row.e_I <= row.r_I and row.e_L <= row.r_L
        e = r = 1
        for s in row.sigma.block_sizes:
            e, r = e * bell(s), r * 2 ** (s * s - s)
        assert (e, r) == (row.e_I, row.r_I)


@pytest.mark.parametrize("G", ["trivial", "Z2", "Z3", "S3"])
@pytest.mark.parametrize("b", [1, 2, 3])
def test_single_column_formula(G, b):
    group = corpus_group(G)
    spec = ReesSpec(group, 1, b, [[min(lam, group.order - 1)] for lam in range(b)])
    assert chi_rees(spec).chi == Fraction(bell(b), 2 ** (b * b - b))


def test_census_matches_enumerated_triples():
    for spec in rees_corpus():
        census = triple_census(spec)
        assert sum(1 for _ in enumerate_linked_triples(spec, "equivalence")) == census.equivalence_total
        triples = list(enumerate_linked_triples(spec, "reflexive"))
        assert len(triples) == census.reflexive_total == len(set(triples))
        assert all(is_linked(spec, t.N, t.S_rel, t.T_rel) for t in triples)


def test_valuations():
    assert capped_valuation(0, 37, 5) == 5
    assert capped_valuation(37 ** 3 * 2, 37, 5) == 3
    assert capped_valuation(37 ** 9, 37, 5) == 5
    assert capped_valuation(-(37 ** 2), 37, 5) == 2
    big = 131 ** 5000 * 7
    assert capped_valuation(big, 131, 10 ** 6) == 5000
    assert capped_valuation(big * 131, 131, 10 ** 6) == 5001


# -- materialization and the two maps ---------------------------------------------


def test_materialize_examples():
    assert materialize(ReesSpec(cyclic_group(1), 1, 1, [[0]])).table == ((0,),)
    assert materialize(ReesSpec(cyclic_group(1), 2, 2, [[0, 0], [0, 0]])).table == rectangular_band(2, 2).table
    assert dsc_coefficient(materialize(Z2_FLAT)).chi == Fraction(1, 4)


def test_materialize_cap():
    with pytest.raises(SizeCapError):
        materialize(ReesSpec(cyclic_group(8), 3, 3, [[0] * 3] * 3), cap=50)
    with pytest.raises(SizeCapError):
        to_concrete(SYM)


def test_to_concrete_small():
    spec = SymbolicCyclicReesSpec(SymbolicCyclicGroup(2, 1), 2, 2, [[0, 0], [0, 1]])
    concrete = to_concrete(spec)
    assert concrete.group.order == 2
    assert chi_rees(spec) == chi_rees(concrete)


def test_map_examples():
    S = materialize(Z2_FLAT)
    diag2, full2 = BinaryRelation.diagonal(2), BinaryRelation.full(2)
    assert triple_to_relation(Z2_FLAT, LinkedTriple.of(TRIVIAL_N, diag2, diag2)) == BinaryRelation.diagonal(8)
    assert triple_to_relation(Z2_FLAT, LinkedTriple.of(FULL_Z2, full2, full2)) == BinaryRelation.full(8)
    rel = triple_to_relation(Z2_FLAT, LinkedTriple.of(FULL_Z2, diag2, diag2))
    el = Z2_FLAT.element
    want = {(el(i, g, lam), el(i, h, lam)) for i in range(2) for lam in range(2) for g in range(2) for h in range(2)}
    assert set(rel.pairs()) == want and len(want) == 16
    assert is_diagonal_subsemigroup(S, rel)
    assert relation_to_triple(Z2_FLAT, rel) == LinkedTriple.of(FULL_Z2, diag2, diag2)
    assert relation_to_triple(Z2_FLAT, BinaryRelation.diagonal(8)) == LinkedTriple.of(TRIVIAL_N, diag2, diag2)
    assert relation_to_triple(Z2_FLAT, BinaryRelation.full(8)) == LinkedTriple.of(FULL_Z2, full2, full2)


def test_map_contracts():
    with pytest.raises(ContractError):
        relation_to_triple(Z2_FLAT, BinaryRelation.empty(8))
    spec = ReesSpec(cyclic_group(3), 2, 2, [[0, 0], [0, 1]])
    with pytest.raises(ContractError):
        triple_to_relation(spec, LinkedTriple.of(NormalSubgroup(frozenset({0})), BinaryRelation.full(2),
                                                 BinaryRelation.diagonal(2)))


@pytest.mark.parametrize("spec", rees_corpus(), ids=lambda s: f"Z{s.group.order}-{s.a}x{s.b}-{s.P}")
def test_round_trip_and_oracle(spec):
    S = materialize(spec)
    diags = list(enumerate_diagonal_subsemigroups(S, cap=12))
    for rel in diags:
        assert triple_to_relation(spec, relation_to_triple(spec, rel)) == rel
    for t in enumerate_linked_triples(spec, "reflexive"):
        assert relation_to_triple(spec, triple_to_relation(spec, t)) == t
    brute = dsc_coefficient(S, cap=12)
    assert chi_rees(spec) == brute
    assert len(diags) == brute.diagonal_count
    if spec.a > 1 and spec.b > 1:
        assert rectangular_band_bound(spec.a, spec.b) <= brute.chi < 1


@pytest.mark.parametrize("spec", rees_corpus()[:9], ids=str)
def test_inverse_pairs_in_diagonal_subsemigroups(spec):
    # (i,g,l) rho (i,h,l) implies (i,g^-1,l) rho (i,h^-1,l)
    G, el = spec.group, spec.element
    for rel in enumerate_diagonal_subsemigroups(materialize(spec), cap=12):
        for i, lam, g, h in product(range(spec.a), range(spec.b), range(G.order), range(G.order)):
            if (el(i, g, lam), el(i, h, lam)) in rel:
                assert (el(i, G.inv(g), lam), el(i, G.inv(h), lam)) in rel


@pytest.mark.parametrize("a, b, bound", [(1, 2, Fraction(1, 2)), (2, 2, Fraction(1, 4)), (2, 3, Fraction(5, 128))])
def test_band_bound_values(a, b, bound):
    assert rectangular_band_bound(a, b) == bound
