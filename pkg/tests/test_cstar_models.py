from fractions import Fraction

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from app.services.catalog import family_handle
from app.services.core_order import Chain, Status
from app.services import cstar_models
from app.services.cstar_models import (
    SimplexModel,
    almost_divisible,
    compactness_report,
    comparison_predicates,
    cu_sup,
    divisor,
    model_corpus,
    model_report,
    r_comparison,
    radius_estimate,
    rr0_model,
    rr0_report,
    sup_oracle_report,
    verify_model_completion,
    w_add,
    w_leq,
    w_way_below,
    way_below_grid_report,
)
from app.services.cuts import INF
from app.services.errors import GridExhausted, ModelMismatch, NotAllCompact, SupFailed, ValidationError
from app.services.finite_lab import chain_table

MODELS = model_corpus()
U2 = SimplexModel.linear("U2", 2, family_handle("N"), [[1, 1]]).checked()

positive = st.fractions(min_value=Fraction(1, 8), max_value=6, max_denominator=8)
w_elements = st.one_of(
    st.just(U2.w.zero),
    st.integers(1, 6).map(U2.w.P),
    st.tuples(positive, positive).map(lambda t: U2.w.F(*t)),
)


@pytest.fixture
def u2():
    return SimplexModel.linear("U2", 2, family_handle("N"), [[1, 1]]).checked()


# 1. construction
def test_model_corpus():
    assert [m.name for m in MODELS] == ["U1", "U2", "U3", "Q1", "D2", "E2", "D3", "M3", "Z1", "Z2", "Z3"]
    assert {m.k for m in MODELS} == {1, 2, 3}


def test_state_matrix_shape_is_checked():
    with pytest.raises(ValidationError):
        SimplexModel.linear("bad", 2, family_handle("N"), [[1, 1, 1]])
    with pytest.raises(ValidationError):
        SimplexModel.linear("bad", 2, family_handle("N^2"), [[1, 1]])


def test_state_map_must_be_strictly_positive():
    with pytest.raises(ValidationError):
        SimplexModel.linear("flat", 2, family_handle("N"), [[1, 0]]).checked()


def test_family_ids(u2):
    assert u2.w.family_id == "U2-W"
    assert u2.cu.family_id == "U2-Cu"
    assert u2.w is u2.w


# 2. order rules
def test_projection_and_function_order(u2):
    w = u2.w
    assert w_leq(w, w.P(1), w.F(2, 2))
    assert not w_leq(w, w.P(1), w.F(1, 1))
    assert w_leq(w, w.F(1, 1), w.P(1))
    assert w_add(w, w.P(1), w.F(1, 1)) == w.F(2, 2)
    assert w_add(w, w.P(1), w.P(2)) == w.P(3)
    assert w.values(w.P(2)) == (Fraction(2), Fraction(2))


def test_compact_classes(u2):
    w = u2.w
    assert w_way_below(w, w.P(1), w.P(1))
    assert not w_way_below(w, w.F(1, 1), w.F(1, 1))
    assert w_way_below(w, w.F(1, 1), w.F(2, 2))
    assert not w_way_below(w, w.F(1, 2), w.F(2, 2))


def test_infinite_values_only_in_cu(u2):
    with pytest.raises(ValueError):
        u2.w.F(INF, 1)
    top = u2.cu.F(INF, INF)
    assert u2.cu.leq(u2.cu.P(5), top)
    assert not w_way_below(u2.cu, top, top)


def test_models_do_not_mix(u2):
    with pytest.raises(ModelMismatch):
        w_leq(u2.w, u2.w.P(1), u2.cu.P(1))


def test_cu_sup_is_pointwise(u2):
    cu = u2.cu
    chain = Chain.lazy(lambda n: cu.F(1 - Fraction(1, 2 ** (n + 1)), 2 - Fraction(1, 2 ** n)),
                       limit=(Fraction(1), Fraction(2)))
    assert cu_sup(cu, chain) == cu.F(1, 2)
    unbounded = cu.unbounded_chain()
    assert cu_sup(cu, unbounded) == cu.F(INF, INF)


def test_cu_sup_of_unbounded_projections(u2):
    cu = u2.cu
    chain = Chain.lazy(lambda n: cu.P(n + 1), limit=(INF, INF))
    assert cu_sup(cu, chain) == cu.F(INF, INF)
    with pytest.raises(SupFailed):
        cu_sup(u2.w, Chain.lazy(lambda n: u2.w.P(n + 1), limit=(INF, INF)))


def test_cu_sup_of_stationary_projections(u2):
    cu = u2.cu
    chain = Chain.lazy(lambda n: cu.P(min(n + 1, 3)), limit=(Fraction(3), Fraction(3)))
    assert cu_sup(cu, chain) == cu.P(3)


# 3. comparison properties
def test_divisor(u2):
    w = u2.w
    assert divisor(w, w.P(1), 2) == w.F(Fraction(1, 2), Fraction(1, 2))
    assert divisor(w, w.zero, 3) == w.zero
    with pytest.raises(ValueError):
        divisor(w, w.P(1), 0)


def test_r_comparison(u2):
    w = u2.w
    result = r_comparison(w, w.F(1, 1), w.F(3, 3), 1)
    assert result.premise and result.order and result.holds
    assert not r_comparison(w, w.F(1, 1), w.F(3, 3), 2).premise


def test_radius_of_simplex_models_is_zero(u2):
    assert radius_estimate(u2.w, u2.w.sample(6)) == 0


def test_comparison_predicates_pass(u2):
    report = comparison_predicates(u2.w, u2.w.sample(6))
    assert report.status == Status.PASS


def test_exhausted_divisor_search_is_unknown(u2, monkeypatch):
    def exhausted(handle, x, n):
        raise GridExhausted(f"no divisor of {handle.format(x)} by {n}")

    monkeypatch.setattr(cstar_models, "divisor", exhausted)
    report = almost_divisible(u2.w, [u2.w.P(1)], ns=(2,))
    assert report.status == Status.UNKNOWN
    assert report.checks[0].status == Status.UNKNOWN
    assert report.summary_word() == "unknown"


# 4. the model suite over the whole corpus
@pytest.mark.parametrize("model", MODELS, ids=lambda m: m.name)
def test_compactness_is_exact(model):
    assert compactness_report(model.w, model.w.sample(10)).passed
    assert compactness_report(model.cu, model.cu.sample(10)).passed


@pytest.mark.parametrize("model", MODELS, ids=lambda m: m.name)
def test_way_below_on_a_rational_grid(model):
    report = way_below_grid_report(model.w)
    assert report.summary_word() == "pass"


@pytest.mark.parametrize("model", MODELS, ids=lambda m: m.name)
def test_model_completion(model):
    assert verify_model_completion(model).passed


@pytest.mark.parametrize("model", MODELS, ids=lambda m: m.name)
def test_sup_against_grid_search(model):
    report = sup_oracle_report(model.cu, count=100)
    assert report.passed, report.to_dict()


def test_model_report(u2):
    report = model_report(u2)
    assert report.summary_word() == "evidence-pass"
    assert report.checks[0].property == "state map valid"


def test_model_report_is_deterministic(u2):
    assert model_report(u2, seed=3).to_dict() == model_report(u2, seed=3).to_dict()


# 5. real rank zero
def test_interval_model_needs_all_compact_monoid():
    with pytest.raises(NotAllCompact):
        rr0_model(family_handle("Q+"))


def test_interval_model_of_naturals():
    report = rr0_report(family_handle("N"), 32)
    assert report.passed
    assert [c.property for c in report.checks][-1] == "unbounded class not compact"


def test_interval_model_of_a_finite_table():
    report = rr0_report(chain_table(3))
    assert report.summary_word() == "pass"


# 6. laws of the W model
@given(w_elements, w_elements)
def test_addition_commutes(x, y):
    assert w_add(U2.w, x, y) == w_add(U2.w, y, x)


@given(w_elements, w_elements)
def test_order_extends_the_algebraic_order(x, y):
    assert w_leq(U2.w, x, w_add(U2.w, x, y))


@given(w_elements, w_elements, w_elements)
def test_order_is_compatible_with_addition(x, y, z):
    assume(w_leq(U2.w, x, y))
    assert w_leq(U2.w, w_add(U2.w, x, z), w_add(U2.w, y, z))


@given(w_elements, w_elements)
def test_way_below_implies_below(x, y):
    if w_way_below(U2.w, x, y):
        assert w_leq(U2.w, x, y)
