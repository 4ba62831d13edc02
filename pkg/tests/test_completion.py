from fractions import Fraction

import pytest

from app.services.catalog import (
    counting_chain,
    family_handle,
    naturals_inclusion,
    ramp_chain,
    sqrt2_chain,
)
from app.services.completion import (
    IntervalDesc,
    class_key,
    completion_of,
    completion_way_below,
    extend_universal,
    interval_add,
    interval_precsim,
    interval_sup,
    iota_map,
    iota_preimage,
    lift_morphism,
    rapidify,
)
from app.services.core_order import Status, check_c_membership, is_hereditary
from app.services.errors import NotIncreasing

Q = family_handle("Q+")
N = family_handle("N")


def principal(handle, value):
    return IntervalDesc.principal(handle, handle.element(value))


# 1. the preorder on intervals
def test_ramp_interval_is_equivalent_to_its_limit():
    ramp = IntervalDesc.chain_generated(Q, ramp_chain(Q))
    one = principal(Q, 1)
    assert interval_precsim(ramp, one).is_true
    assert interval_precsim(one, ramp).is_true
    assert class_key(ramp) == class_key(one) == "1)"


def test_sqrt2_interval_sits_strictly_below_three_halves():
    root = IntervalDesc.chain_generated(Q, sqrt2_chain(Q), bound=Q.element(2))
    upper = principal(Q, Fraction(3, 2))
    assert interval_precsim(root, upper).is_true
    assert interval_precsim(upper, root).is_false


def test_principal_intervals_follow_the_order_of_a_discrete_family():
    assert interval_precsim(principal(N, 2), principal(N, 3)).is_true
    assert interval_precsim(principal(N, 3), principal(N, 2)).is_false


def test_finite_generated_needs_directed_generators():
    N2 = family_handle("N^2")
    with pytest.raises(ValueError):
        IntervalDesc.finite_generated(N2, [N2.element((1, 0)), N2.element((0, 1))])
    I = IntervalDesc.finite_generated(N2, [N2.element((1, 0)), N2.element((1, 1))])
    assert I.top == N2.element((1, 1))


# 2. addition and suprema
def test_principal_sum():
    total = interval_add(principal(Q, Fraction(1, 2)), principal(Q, Fraction(1, 3)))
    assert total.top == Q.element(Fraction(5, 6))


def test_chain_sum_is_equivalent_to_sum_of_limits():
    ramp = IntervalDesc.chain_generated(Q, ramp_chain(Q))
    total = interval_add(ramp, principal(Q, 1))
    two = principal(Q, 2)
    assert interval_precsim(total, two).is_true
    assert interval_precsim(two, total).is_true


def test_sup_of_finite_sequence_is_its_last_term():
    result = interval_sup([principal(Q, Fraction(1, 2)), principal(Q, 1)])
    assert result.top == Q.element(1)


def test_sup_rejects_decreasing_sequences():
    with pytest.raises(NotIncreasing):
        interval_sup([principal(Q, 1), principal(Q, Fraction(1, 2))])


def test_rapidify_keeps_the_class():
    one = principal(Q, 1)
    rapid = rapidify(one)
    assert rapid.chain.rapid
    assert interval_precsim(rapid, one).is_true
    assert interval_precsim(one, rapid).is_true


# 3. the completion monoid
def test_iota_of_one_is_not_compact_in_rationals():
    bar = completion_of(Q)
    one = bar.iota(Q.element(1))
    assert completion_way_below(bar, one, one).is_false
    assert completion_way_below(bar, bar.iota(Q.element(Fraction(1, 2))), one).is_true


def test_naturals_stay_compact_in_their_completion():
    bar = completion_of(N)
    three = bar.iota(N.element(3))
    assert completion_way_below(bar, three, three).is_true


def test_unbounded_class_in_completion_of_naturals():
    bar = completion_of(N)
    top = bar.element(IntervalDesc.chain_generated(N, counting_chain(N)))
    assert bar.leq(bar.iota(N.element(100)), top)
    assert not bar.leq(top, bar.iota(N.element(100)))


def test_iota_preimage_refutes_the_sqrt2_class():
    bar = completion_of(Q)
    root = bar.element(IntervalDesc.chain_generated(Q, sqrt2_chain(Q)))
    assert iota_preimage(bar, root, 32).refuted
    ramp = bar.element(IntervalDesc.chain_generated(Q, ramp_chain(Q)))
    assert iota_preimage(bar, ramp, 32).element == Q.element(1)


# 4. hereditary iff bounded suprema
def test_iota_hereditary_matches_c_membership_on_rationals():
    bar = completion_of(Q)
    iota = iota_map(Q)
    sample = Q.sample(6)
    hereditary = is_hereditary(iota, Q, bar, bar.sample(6), 16, sample)
    membership = check_c_membership(Q, Q.probe_chains(), 16)
    assert hereditary.status == Status.FAIL
    assert membership.status == Status.FAIL


def test_iota_hereditary_on_finite_chain_monoid():
    T = family_handle("T_3")
    bar = completion_of(T)
    report = is_hereditary(iota_map(T), T, bar, bar.elements(), 16)
    assert report.passed


# 5. universal extension and functoriality
def test_extension_of_naturals_inclusion():
    N_inf = family_handle("N_inf")
    alpha = naturals_inclusion()
    bar = completion_of(N)
    assert extend_universal(alpha, N_inf, bar.iota(N.element(4))) == N_inf.element(4)
    top = bar.element(IntervalDesc.chain_generated(N, counting_chain(N)))
    assert N_inf.format(extend_universal(alpha, N_inf, top, 32)) == "∞"


def test_lift_of_naturals_inclusion_preserves_principal_classes():
    lifted = lift_morphism(naturals_inclusion())
    bar_n, bar_inf = completion_of(N), completion_of(family_handle("N_inf"))
    image = lifted(bar_n.iota(N.element(2)))
    assert bar_inf.eq(image, bar_inf.iota(family_handle("N_inf").element(2)))
