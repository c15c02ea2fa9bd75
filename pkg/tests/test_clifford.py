from fractions import Fraction

import pytest

from dsc.clifford import (
    CliffordPair,
    KernelFamily,
    adjoined_identity_counterexample,
    adjoined_identity_system,
    chi_bound_report,
    enumerate_congruence_pairs,
    enumerate_diagonal_pairs,
    enumerate_kernels,
    idempotent_table,
    is_congruence_pair,
    materialize_clifford,
    rho_from_pair,
    validate_system,
)
from dsc.corpus import clifford_corpus
from dsc.errors import ContractError, SizeCapError, ValidationError
from dsc.groups import NormalSubgroup, corpus_group, cyclic_group
from dsc.relations import BinaryRelation
from dsc.semigroup import (
    chain_semilattice,
    dsc_coefficient,
    enumerate_congruences,
    is_congruence,
    is_diagonal_subsemigroup,
    semigroup_from_table,
)

CHAIN2 = [[0, 1], [1, 1]]  # node 0 above node 1
Z1, Z2, Z4 = cyclic_group(1), cyclic_group(2), cyclic_group(4)
CORPUS = clifford_corpus()


def N(*elems):
    return NormalSubgroup(frozenset(elems))


def z2_over_trivial():
    return validate_system(CHAIN2, [Z2, Z1], {(0, 1): [0, 0]})


def test_single_node_is_the_group():
    sys = validate_system([[0]], [Z2], {})
    assert materialize_clifford(sys).table == Z2.table


def test_trivial_chain_is_semilattice():
    sys = validate_system(CHAIN2, [Z1, Z1], {(0, 1): [0]})
    S = materialize_clifford(sys)
    # node 0 is the top: 0*1 = 1
    assert S.table == ((0, 1), (1, 1))
    Y = chain_semilattice(2)
    assert dsc_coefficient(S) == dsc_coefficient(Y)


def test_non_homomorphism_rejected():
    with pytest.raises(ValidationError, match="homomorphism") as info:
        validate_system(CHAIN2, [Z2, Z2], {(0, 1): [1, 1]})
    assert info.value.witness[:2] == (0, 1)


@pytest.mark.parametrize("meet, msg", [
    ([[0, 0], [1, 1]], "commutative"),
    ([[1, 1], [1, 1]], "idempotent"),
])
def test_bad_meet_tables(meet, msg):
    with pytest.raises(ValidationError, match=msg):
        validate_system(meet, [Z1, Z1], {})


def test_hom_bookkeeping_errors():
    with pytest.raises(ValidationError, match="missing hom"):
        validate_system(CHAIN2, [Z1, Z1], {})
    with pytest.raises(ValidationError, match="not >="):
        validate_system(CHAIN2, [Z1, Z1], {(0, 1): [0], (1, 0): [0]})
    with pytest.raises(ValidationError, match="identity"):
        validate_system([[0]], [Z2], {(0, 0): [1, 0]})
    with pytest.raises(ValidationError, match="not a map"):
        validate_system(CHAIN2, [Z2, Z1], {(0, 1): [0]})


def test_functoriality_checked():
    chain3 = [[0, 1, 2], [1, 1, 2], [2, 2, 2]]
    Z2xZ2 = corpus_group("V4")
    # V4 -> V4 -> V4 by two projections whose composite differs from the direct map
    homs = {(0, 1): [0, 1, 0, 1], (1, 2): [0, 1, 0, 1], (0, 2): [0, 0, 2, 2]}
    with pytest.raises(ValidationError, match="differs"):
        validate_system(chain3, [Z2xZ2] * 3, homs)


def test_z2_with_zero():
    S = materialize_clifford(z2_over_trivial())
    assert S.order == 3
    zero = 2
    assert all(S.mul(x, zero) == zero == S.mul(zero, x) for x in range(3))
    assert dsc_coefficient(S).chi == Fraction(3, 8)


def test_materialize_cap():
    with pytest.raises(SizeCapError):
        materialize_clifford(CORPUS["V4-over-Z2"], cap=5)


def test_kernel_counts():
    assert len(enumerate_kernels(validate_system([[0]], [Z2], {}))) == 2
    assert len(enumerate_kernels(validate_system(CHAIN2, [Z1, Z1], {(0, 1): [0]}))) == 1
    sys = validate_system(CHAIN2, [Z2, Z2], {(0, 1): [0, 1]})
    kernels = {tuple(len(n) for n in k.subgroups) for k in enumerate_kernels(sys)}
    assert kernels == {(1, 1), (1, 2), (2, 2)}


def test_congruence_pair_examples():
    sys = z2_over_trivial()
    full = BinaryRelation.full(2)
    diag = BinaryRelation.diagonal(2)
    all_full = KernelFamily((N(0, 1), N(0)))
    all_trivial = KernelFamily((N(0), N(0)))
    assert is_congruence_pair(sys, CliffordPair(all_full, full, "congruence-pair"))
    assert is_congruence_pair(sys, CliffordPair(all_trivial, diag, "congruence-pair"))
    assert not is_congruence_pair(sys, CliffordPair(all_trivial, full, "congruence-pair"))


def test_pair_shape_mismatch():
    sys = z2_over_trivial()
    with pytest.raises(ContractError):
        is_congruence_pair(sys, CliffordPair(KernelFamily((N(0),)), BinaryRelation.diagonal(2), "congruence-pair"))
    with pytest.raises(ContractError):
        rho_from_pair(sys, CliffordPair(KernelFamily((N(0), N(0))), BinaryRelation.diagonal(3), "diagonal-pair"))


def test_rho_examples():
    sys = z2_over_trivial()
    S = materialize_clifford(sys)
    trivial = KernelFamily((N(0), N(0)))
    full_k = KernelFamily((N(0, 1), N(0)))
    assert rho_from_pair(sys, CliffordPair(trivial, BinaryRelation.diagonal(2), "diagonal-pair")) == BinaryRelation.diagonal(3)
    assert rho_from_pair(sys, CliffordPair(full_k, BinaryRelation.full(2), "diagonal-pair")) == BinaryRelation.full(3)
    # trace relates top identity to bottom identity; elements are 1_top=0, x=1, 0_bot=2
    trace = BinaryRelation.from_pairs(2, [(0, 0), (1, 1), (0, 1)])
    rho = rho_from_pair(sys, CliffordPair(trivial, trace, "diagonal-pair"))
    assert set(rho.pairs()) == {(0, 0), (1, 1), (2, 2), (0, 2), (1, 2)}
    assert is_diagonal_subsemigroup(S, rho) and not is_congruence(S, rho)


def test_rho_contract():
    sys = z2_over_trivial()
    with pytest.raises(ContractError):
        rho_from_pair(sys, CliffordPair(KernelFamily((N(0), N(0))), BinaryRelation.empty(2), "diagonal-pair"))
    # kernel not closed under phi: N_top = Z2 but the identity map would need N_bot = Z2
    sys2 = validate_system(CHAIN2, [Z2, Z2], {(0, 1): [0, 1]})
    with pytest.raises(ContractError):
        rho_from_pair(sys2, CliffordPair(KernelFamily((N(0, 1), N(0))), BinaryRelation.diagonal(2), "diagonal-pair"))


@pytest.mark.parametrize("name", sorted(CORPUS))
def test_pair_family_properties(name):
    sys = CORPUS[name]
    S = materialize_clifford(sys)
    rhos = [rho_from_pair(sys, p) for p in enumerate_diagonal_pairs(sys)]
    assert len(rhos) == len(set(rhos))  # injective
    assert all(is_diagonal_subsemigroup(S, r) for r in rhos)
    cong_pairs = list(enumerate_congruence_pairs(sys))
    assert all(is_congruence(S, rho_from_pair(sys, p)) for p in cong_pairs)
    K = len(enumerate_kernels(sys))
    assert len(cong_pairs) <= K * sum(1 for _ in enumerate_congruences(sys.semilattice))
    # congruence pairs describe every congruence of a Clifford semigroup
    assert {rho_from_pair(sys, p) for p in cong_pairs} == set(enumerate_congruences(S))


@pytest.mark.parametrize("name", sorted(CORPUS))
def test_bound(name):
    rep = chi_bound_report(CORPUS[name])
    assert 0 < rep.chi_S.chi <= rep.chi_Y.chi
    assert rep.pair_lower_bound_holds
    assert rep.chi_S.congruence_count <= rep.congruence_upper_bound


@pytest.mark.parametrize("name", sorted(CORPUS))
def test_idempotents_form_y(name):
    sys = CORPUS[name]
    assert idempotent_table(sys) == sys.meet


def test_bound_report_examples():
    rep = chi_bound_report(validate_system([[0]], [Z2], {}))
    assert rep.chi_S.chi == rep.chi_Y.chi == 1 and rep.status == "tight"
    rep = chi_bound_report(validate_system(CHAIN2, [Z1, Z1], {(0, 1): [0]}))
    assert rep.chi_S.chi == rep.chi_Y.chi == Fraction(1, 2)
    assert (rep.chi_Y.congruence_count, rep.chi_Y.diagonal_count) == (2, 4)
    rep = chi_bound_report(adjoined_identity_system(Z2))
    assert rep.chi_S.chi < rep.chi_Y.chi and rep.status == "strict"


@pytest.mark.parametrize("G, H, size", [(Z2, {0}, 6), (Z4, {0, 2}, 19), (corpus_group("S3"), {0}, 38)])
def test_adjoined_identity_counterexample(G, H, size):
    rel = adjoined_identity_counterexample(G, H)
    sys = adjoined_identity_system(G)
    assert len(rel) == size
    assert is_diagonal_subsemigroup(materialize_clifford(sys), rel)
    assert all(rho_from_pair(sys, p) != rel for p in enumerate_diagonal_pairs(sys))


def test_counterexample_contracts():
    with pytest.raises(ContractError, match="proper"):
        adjoined_identity_counterexample(Z2, {0, 1})
    with pytest.raises(ContractError, match="subgroup"):
        adjoined_identity_counterexample(Z4, {0, 1})


def test_adjoined_identity_is_monoid():
    S = materialize_clifford(adjoined_identity_system(Z4))
    assert all(S.mul(0, x) == x == S.mul(x, 0) for x in range(S.order))
    assert semigroup_from_table(S.table).order == 5
