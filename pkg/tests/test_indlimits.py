from fractions import Fraction

import pytest

from app.services.catalog import family_handle
from app.services.core_order import sup_chain, way_below
from app.services.errors import SystemMismatch, UnboundedChain
from app.services.indlimits import (
    AlgColimit,
    catalog_system,
    check_limit_completion_commutes,
    counterexample_suite,
    doubled_chains,
    dyadic_phi,
    explored_classes,
    limit_in_C,
    limit_in_Cu,
    limit_report,
    rapid_representative,
    seq_precsim,
    system_from_lists,
)

BUDGET = 64


# 1. systems
def test_catalog_systems():
    assert catalog_system("T_n").stage(3).family_id == "T_3"
    assert catalog_system("dyadic").f(2).name == "f_2"
    assert catalog_system("N-id") is catalog_system("N-id")
    with pytest.raises(SystemMismatch):
        catalog_system("Q-id")


def test_systems_from_lists():
    system = system_from_lists("Nconst", ["N"], ["id_N"])
    assert system.stage(5).family_id == "N"
    with pytest.raises(SystemMismatch):
        system_from_lists("bad", ["N"], ["iota_N"])
    with pytest.raises(SystemMismatch):
        system_from_lists("empty", [], [])


def test_algebraic_limit_identifies_stage_images():
    system = catalog_system("dyadic")
    alg = AlgColimit(system)
    one_at_0 = alg.at(0, system.stage(0).element(1))
    one_at_2 = alg.at(2, system.stage(2).element(1))
    half = alg.at(1, system.stage(1).element(Fraction(1, 2)))
    assert alg.leq(one_at_0, one_at_2) and alg.leq(one_at_2, one_at_0)
    assert alg.leq(half, one_at_0)
    assert not alg.leq(one_at_0, half)
    assert alg.add(half, half) == alg.at(1, system.stage(1).element(1))


# 2. classes of the limits
def test_stage_images_agree_in_the_limit():
    lim = limit_in_C(catalog_system("N-id"), BUDGET)
    N = family_handle("N")
    assert lim.eq(lim.phi(0, N.element(3)), lim.phi(2, N.element(3)))
    assert lim.leq(lim.phi(0, N.element(2)), lim.phi(1, N.element(3)))
    assert not lim.leq(lim.phi(1, N.element(3)), lim.phi(0, N.element(2)))


def test_sequence_comparison():
    lim = limit_in_C(catalog_system("N-id"), BUDGET)
    N = family_handle("N")
    two, three = lim.phi(0, N.element(2)).payload, lim.phi(1, N.element(3)).payload
    assert seq_precsim(two, three, BUDGET).is_true
    assert seq_precsim(three, two, BUDGET).is_false
    assert seq_precsim(two, three, 8, closed_form=False).is_true
    assert seq_precsim(three, two, 8, closed_form=False).is_unknown


def test_compact_sequences_are_their_own_rapid_representatives():
    lim = limit_in_C(catalog_system("N-id"), BUDGET)
    s = lim.phi(0, family_handle("N").element(3)).payload
    rep = rapid_representative(s, BUDGET)
    assert rep.rapid
    assert rep.label == s.label
    assert seq_precsim(rep, s, BUDGET).is_true and seq_precsim(s, rep, BUDGET).is_true


def test_bounded_limit_rejects_unbounded_families():
    system = catalog_system("N-id")
    with pytest.raises(UnboundedChain):
        limit_in_C(system, BUDGET).from_family(system.unbounded)
    assert limit_in_Cu(system, BUDGET).from_family(system.unbounded) is not None


def test_dyadic_one_is_compact_in_the_bounded_limit():
    lim = limit_in_C(catalog_system("dyadic"), BUDGET)
    one = dyadic_phi(lim, 1)
    assert way_below(lim, one, one, BUDGET).is_true
    t_prime = lim.from_family(lim.system.probe)
    assert lim.leq(t_prime, one)
    assert not lim.leq(one, t_prime)


def test_unbounded_family_in_the_bounded_limit_has_no_sup():
    lim = limit_in_C(catalog_system("T_n"), BUDGET)
    verdict = sup_chain(lim, lim.unbounded_chain(), BUDGET)
    assert not verdict.found


# 3. limit reports
@pytest.mark.parametrize("name", ["T_n", "N-id", "dyadic"])
def test_limit_report(name):
    report = limit_report(catalog_system(name), BUDGET)
    assert report.passed, report.to_dict()
    names = [c.property for c in report.checks]
    assert "C: no class above the unbounded family" in names
    assert "Cu: unbounded class dominates" in names
    assert "Cu: unbounded class not compact" in names


def test_naturals_limit_fragment_is_a_chain_with_a_top():
    lim = limit_in_Cu(catalog_system("N-id"), BUDGET)
    classes = explored_classes(lim)
    for x, y in zip(classes, classes[1:]):
        assert lim.leq(x, y)
    top = classes[-1]
    assert all(lim.leq(x, top) for x in classes)
    assert not way_below(lim, top, top, BUDGET).is_true


def test_naturals_bounded_fragment_has_only_compact_classes():
    lim = limit_in_C(catalog_system("N-id"), BUDGET)
    for x in explored_classes(lim):
        assert way_below(lim, x, x, BUDGET).is_true


# 4. limits commute with completion
@pytest.mark.parametrize("name", ["T_n", "N-id", "dyadic"])
def test_completion_commutes_with_limits(name):
    report = check_limit_completion_commutes(catalog_system(name), BUDGET, 3)
    assert report.passed, report.to_dict()
    assert [c.property for c in report.checks] == ["gamma order-embedding", "fragments agree", "image sup-dense"]


# 5. the counterexample
def test_counterexample_suite():
    report = counterexample_suite(BUDGET)
    assert report.passed, report.to_dict()
    assert [c.property for c in report.checks] == [
        "(a) doubled-monoid suprema",
        "(b) prime collapse is a PreCu morphism",
        "(b) stationary suprema preserved",
        "(c) phi(1 - 2^-k) <= t' for k <= N",
        "(c) t' < phi(1)",
        "(d) phi(1) compact",
        "(d) stage images compact",
    ]


def test_doubled_chains_are_deterministic():
    chains = doubled_chains(50)
    assert len(chains) == 50
    assert chains == doubled_chains(50)
    assert chains[0] == (Fraction(1), 1, False)
