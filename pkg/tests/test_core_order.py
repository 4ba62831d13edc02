from fractions import Fraction

import pytest

from app.services.catalog import (
    counting_chain,
    family_handle,
    naturals_inclusion,
    prime_collapse,
    ramp_chain,
    sqrt2_chain,
)
from app.services.core_order import (
    Chain,
    ChainWitness,
    EvidenceReport,
    Status,
    SupStatus,
    Trivalent,
    Verdict,
    check_c_membership,
    check_monotone,
    check_order_axioms,
    check_precu_membership,
    classify,
    is_compact,
    is_hereditary,
    is_order_embedding,
    is_precu_morphism,
    resolve_budget,
    sup_chain,
    way_below,
)
from app.services.errors import MixedFamily, NotAMap, NotEmbedding, NotMonotone, Undecided
from app.services.finite_lab import saturating, table_map, two_element
from app.utils.settings import settings

Q = family_handle("Q+")
N = family_handle("N")
N_INF = family_handle("N_inf")


# 1. budgets and verdict plumbing
def test_resolve_budget_defaults_to_settings():
    assert resolve_budget(None) == settings.budget
    assert resolve_budget(7) == 7
    with pytest.raises(ValueError):
        resolve_budget(0)


def test_unknown_verdict_refuses_boolean_use():
    v = Trivalent.unknown(3, reason="budget exhausted")
    assert v.is_unknown and v.verdict == Verdict.UNKNOWN
    with pytest.raises(Undecided):
        v.as_bool()
    assert Trivalent.of(True).as_bool() is True
    assert Trivalent.of(None).is_unknown


def test_summary_words():
    report = EvidenceReport(subject="s")
    report.add("a", Status.PASS)
    assert report.summary_word() == "evidence-pass"
    report.exhaustive = True
    assert report.summary_word() == "pass"
    report.add("b", Status.UNKNOWN)
    assert report.summary_word() == "unknown"
    report.add("c", Status.FAIL, witness=[1, 2])
    assert report.summary_word() == "disproof"
    assert report.to_dict()["checks"][2] == {"property": "c", "status": "fail", "witness": [1, 2]}


# 2. chains
def test_finite_chain_is_eventually_constant():
    chain = Chain.finite([N.element(1), N.element(2)])
    assert chain.term(5) == N.element(2)
    assert chain.eventual == N.element(2)
    assert chain.explore_length(64) == 2
    with pytest.raises(ValueError):
        Chain.finite([])


def test_decreasing_chain_is_rejected():
    chain = Chain.finite([N.element(2), N.element(1)])
    with pytest.raises(NotMonotone):
        check_monotone(N, chain, 8)


# 3. way-below
def test_way_below_in_rationals():
    one, half = Q.element(1), Q.element(Fraction(1, 2))
    verdict = way_below(Q, one, one, 16)
    assert verdict.is_false
    assert isinstance(verdict.witness, ChainWitness)
    assert verdict.witness.chain.limit == 1
    assert way_below(Q, half, one).is_true
    assert way_below(Q, Q.zero, Q.zero).is_true


def test_compact_elements_of_extended_naturals():
    assert is_compact(N_INF, N_INF.element(5)).is_true
    assert is_compact(N_INF, N_INF.element("inf")).is_false


def test_way_below_rejects_mixed_families():
    with pytest.raises(MixedFamily):
        way_below(Q, Q.element(1), N.element(1))


def test_way_below_is_order_on_finite_tables():
    Z = two_element()
    zero, a = Z.elements()
    assert way_below(Z, a, a).is_true
    assert way_below(Z, zero, a).is_true
    assert way_below(Z, a, zero).is_false


# 4. suprema
def test_sup_of_ramp_in_rationals_is_one():
    verdict = sup_chain(Q, ramp_chain(Q))
    assert verdict.found
    assert verdict.value == Q.element(1)


def test_sqrt2_truncations_have_no_rational_sup():
    verdict = sup_chain(Q, sqrt2_chain(Q), 32)
    assert verdict.status == SupStatus.NO_SUP


def test_unbounded_chains():
    assert sup_chain(N, counting_chain(N)).status == SupStatus.NO_SUP
    top = sup_chain(N_INF, counting_chain(N_INF))
    assert top.found and N_INF.format(top.value) == "∞"


def test_stationary_chain_sup_is_its_value():
    verdict = sup_chain(Q, Chain.stationary(Q.element(3), from_index=2, prefix=[Q.zero, Q.element(1)]))
    assert verdict.found and verdict.value == Q.element(3)


# 5. membership evidence
def test_order_axioms_hold_on_samples():
    report = check_order_axioms(N, N.sample(6))
    assert report.passed and not report.exhaustive
    assert [c.property for c in report.checks][:3] == ["reflexive", "antisymmetric", "transitive"]
    Z = two_element()
    assert check_order_axioms(Z, Z.elements()).summary_word() == "pass"


def test_precu_membership_of_rationals():
    report = check_precu_membership(Q, Q.sample(8), 32)
    assert report.summary_word() == "evidence-pass"


def test_c_membership_fails_on_rationals():
    report = check_c_membership(Q, Q.probe_chains(), 32)
    assert report.status == Status.FAIL
    assert report.failures[0].witness["chain"] == "sqrt2 truncations"


def test_classify_rationals():
    result = classify(Q, 32)
    assert result.precu.summary_word() == "evidence-pass"
    assert result.c.summary_word() == "disproof"
    assert result.cu.summary_word() == "disproof"
    assert "C: disproof (witness chain sqrt2 truncations)" in result.summary()


def test_classify_finite_chain_monoid_is_exhaustive():
    result = classify(family_handle("T_3"))
    assert result.summary() == "PreCu: pass; C: pass; Cu: pass"


def test_classify_extended_naturals():
    result = classify(N_INF, 32)
    assert result.cu.passed
    assert [c.property for c in result.cu.checks] == ["bounded sups", "unbounded sup"]


def test_classify_naturals_stops_at_c():
    result = classify(N, 32)
    assert result.c.passed
    assert result.cu.status == Status.FAIL


# 6. maps
def test_inclusion_of_naturals_is_a_morphism():
    f = naturals_inclusion()
    report = is_precu_morphism(f, N, N_INF, budget=32)
    assert report.passed
    assert is_order_embedding(f, N, N_INF, budget=32).passed


def test_non_additive_table_map_is_reported():
    M = saturating(3)
    f = table_map("halve", M, M, [0, 1, 1, 1])
    report = is_precu_morphism(f, M, M)
    failure = report.failures[0]
    assert failure.property == "additive"
    assert failure.detail == NotAMap.code
    assert report.summary_word() == "disproof"


def test_prime_collapse_is_not_an_embedding():
    T2, S = family_handle("T2"), family_handle("S")
    gamma = prime_collapse("T2")
    report = is_order_embedding(gamma, T2, S, budget=16)
    assert report.failures[0].property == "order reflecting"
    with pytest.raises(NotEmbedding):
        is_hereditary(gamma, T2, S, S.sample(4), 16)
