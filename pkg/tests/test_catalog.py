from fractions import Fraction

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from app.services.catalog import (
    catalog_handles,
    catalog_map,
    chain_inclusion,
    doubled_sup_rule,
    dyadic_composite,
    family_handle,
    family_rules,
    parse_value,
    ramp_chain,
    sqrt2_chain,
)
from app.services.core_order import SupStatus, sup_chain, way_below
from app.services.errors import UnknownFamily

# dyadic rationals n / 2^k
dyadics = st.builds(lambda n, k: Fraction(n, 2 ** k), st.integers(0, 64), st.integers(0, 5))
positive_dyadics = dyadics.filter(lambda v: v > 0)
rationals = st.fractions(min_value=0, max_value=20, max_denominator=12)


def doubled_elements(variant):
    T = family_handle(variant)
    plain = dyadics.map(lambda v: T.from_value(v))
    primed = positive_dyadics.map(lambda v: T.from_value(v, True))
    return st.one_of(plain, primed)


# 1. order and addition laws
@given(rationals, rationals, rationals)
def test_rationals_order_is_add_compatible(x, y, z):
    Q = family_handle("Q+")
    a, b, c = Q.element(x), Q.element(y), Q.element(z)
    assume(Q.leq(a, b))
    assert Q.leq(Q.add(a, c), Q.add(b, c))


@given(rationals, rationals)
def test_rationals_way_below_rule(x, y):
    Q = family_handle("Q+")
    verdict = way_below(Q, Q.element(x), Q.element(y))
    assert verdict.is_true == (x < y or x == 0)


@pytest.mark.parametrize("variant", ["T1", "T2"])
@given(data=st.data())
def test_doubled_monoids_are_positively_ordered(variant, data):
    T = family_handle(variant)
    x = data.draw(doubled_elements(variant))
    y = data.draw(doubled_elements(variant))
    assert T.leq(T.zero, x)
    assert T.leq(x, T.add(x, y))
    assert T.add(x, y) == T.add(y, x)


@given(positive_dyadics, positive_dyadics)
def test_primes_absorb_under_addition(a, b):
    T = family_handle("T1")
    total = T.add(T.from_value(a, True), T.from_value(b))
    assert total == T.from_value(a + b, True)


@given(positive_dyadics)
def test_prime_sits_below_its_base_only_in_t1(a):
    T1, T2 = family_handle("T1"), family_handle("T2")
    assert T1.leq(T1.from_value(a, True), T1.from_value(a))
    assert not T1.leq(T1.from_value(a), T1.from_value(a, True))
    assert not T2.leq(T2.from_value(a, True), T2.from_value(a))
    assert not T2.leq(T2.from_value(a), T2.from_value(a, True))


@given(positive_dyadics)
def test_t1_primed_elements_are_not_compact(a):
    T = family_handle("T1")
    assert way_below(T, T.from_value(a, True), T.from_value(a, True)).is_false
    assert way_below(T, T.from_value(a), T.from_value(a)).is_true


# 2. suprema in the doubled monoids
def test_ramp_sup_in_t1_is_primed_one():
    T = family_handle("T1")
    verdict = sup_chain(T, ramp_chain(T))
    assert verdict.found
    assert verdict.value == T.from_value(1, True)


def test_ramp_has_no_sup_in_t2():
    T = family_handle("T2")
    verdict = sup_chain(T, ramp_chain(T))
    assert verdict.status == SupStatus.NO_SUP
    assert verdict.witness["upper_bounds"] == ["1", "1'"]


def test_irrational_limit_has_no_sup_in_t1():
    T = family_handle("T1")
    assert doubled_sup_rule("T1", sqrt2_chain(T), 32).status == SupStatus.NO_SUP


@given(positive_dyadics)
def test_scaled_ramp_sup_in_t1(r):
    T = family_handle("T1")
    verdict = sup_chain(T, ramp_chain(T, r=r))
    assert verdict.value == T.from_value(r, True)


# 3. element parsing
def test_canonical_forms():
    T = family_handle("T1")
    assert T.element("3/2'") == T.from_value(Fraction(3, 2), True)
    assert T.format(T.element("3/2'")) == "3/2'"
    with pytest.raises(ValueError):
        T.element("0'")
    with pytest.raises(ValueError):
        family_handle("S").element(Fraction(1, 3))
    chain = family_handle("T_3")
    assert parse_value(chain, "a2") == chain.element(2)
    assert chain.format(chain.element(3)) == "a3"
    with pytest.raises(ValueError):
        chain.element(4)
    assert parse_value(family_handle("N^2"), "(1,2)").payload == (1, 2)
    assert parse_value(family_handle("N_inf"), "inf") == family_handle("N_inf").element("inf")


# 4. registry
def test_family_registry():
    ids = [h.family_id for h in catalog_handles()]
    assert ids == ["N", "N_inf", "S_2", "S", "Q+", "T1", "T2", "T_3", "T_omega", "T_omega_inf", "N^2"]
    assert family_handle("Q+") is family_handle("Q+")
    with pytest.raises(UnknownFamily):
        family_handle("Z")


def test_family_rules_listing():
    rules = family_rules("Q+").to_dict()
    assert set(rules) == {"family", "claimed_class", "all_compact", "finite", "order", "way_below", "sup"}
    assert rules["claimed_class"] == "PreCu"
    assert family_rules("T_3").to_dict()["finite"] is True


# 5. maps
def test_dyadic_composite_doubles_numerators():
    f = dyadic_composite(3, 1)
    S1, S3 = family_handle("S_1"), family_handle("S_3")
    x = S1.element(Fraction(3, 2))
    assert f(x) == S3.element(Fraction(3, 2))
    assert S3.numerator(f(x)) == 12


def test_catalog_map_names():
    assert catalog_map("iota_N").name == "iota_N"
    assert catalog_map("gamma_T1->S").cod.family_id == "S"
    assert catalog_map("id_Q+").dom.family_id == "Q+"
    with pytest.raises(UnknownFamily):
        catalog_map("psi")
    with pytest.raises(ValueError):
        chain_inclusion(4, 2)
