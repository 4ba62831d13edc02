from itertools import product

import pytest

from app.services.completion import interval_precsim
from app.services.errors import CarrierTooLarge, SearchSpaceTooLarge, ValidationError
from app.services.finite_lab import (
    FiniteMonoid,
    brute_force_universal,
    build_completion_bruteforce,
    chain_table,
    corpus,
    enumerate_ideals,
    ideal_interval,
    map_pool,
    random_table,
    saturating,
    table_map,
    two_element,
    universal_triples,
    verify_completion_def,
    verify_cu_object,
)

CORPUS = corpus()


def broken_table():
    return FiniteMonoid.from_pairs(
        3, [[0, 1, 2], [1, 2, 2], [2, 2, 1]], [(0, 1), (0, 2)], names=["a0", "a1", "a2"], name="B"
    )


# 1. tables and validation
def test_corpus_shape():
    assert len(CORPUS) == 37
    assert [M.family_id for M in CORPUS[:6]] == ["T0", "T1", "T2", "T3", "T4", "T5"]
    assert all(M.size <= 9 for M in CORPUS)


@pytest.mark.parametrize("M", CORPUS, ids=lambda M: M.family_id)
def test_corpus_tables_are_valid(M):
    assert M.validate() == []


def test_broken_table_is_reported():
    M = broken_table()
    assert M.validate()[0] == "not associative at (a1, a1, a2)"
    with pytest.raises(ValidationError) as exc:
        M.checked()
    assert exc.value.obj == "B"


def test_random_tables_are_seeded():
    assert random_table(7).add_table == random_table(7).add_table
    assert random_table(7).family_id == "R7"


def test_element_names():
    M = chain_table(2)
    assert M.element("a1") == M.element(1)
    with pytest.raises(ValueError):
        M.element("b1")


# 2. ideals
def test_ideals_of_a_chain_are_its_downsets():
    ideals = enumerate_ideals(chain_table(2))
    assert ideals == [frozenset({0}), frozenset({0, 1}), frozenset({0, 1, 2})]


def test_ideal_cap():
    with pytest.raises(CarrierTooLarge):
        enumerate_ideals(saturating(7), cap=4)


# 3. the completion of every corpus monoid
@pytest.mark.parametrize("M", CORPUS, ids=lambda M: M.family_id)
def test_corpus_completion(M):
    done = build_completion_bruteforce(M)
    assert done.isomorphism.passed, done.isomorphism.to_dict()
    assert verify_cu_object(done.monoid).passed
    definition = verify_completion_def(M, done)
    assert definition.summary_word() == "pass", definition.to_dict()


@pytest.mark.parametrize("M", CORPUS, ids=lambda M: M.family_id)
def test_corpus_monoids_are_cu_objects(M):
    assert verify_cu_object(M).summary_word() == "pass"


def test_isomorphism_checks():
    done = build_completion_bruteforce(saturating(3))
    names = [c.property for c in done.isomorphism.checks]
    assert names == ["order agrees with inclusion", "addition agrees with ideal sum", "iota onto"]


# 4. all-compact monoids: the preorder on intervals is inclusion of ideals
@pytest.mark.parametrize("M", CORPUS[:17], ids=lambda M: M.family_id)
def test_precsim_is_inclusion(M):
    ideals = enumerate_ideals(M)
    for a, b in product(ideals, repeat=2):
        verdict = interval_precsim(ideal_interval(M, a), ideal_interval(M, b))
        assert verdict.is_true == (a <= b)


# 5. the universal property
def test_map_pool_size():
    assert len(map_pool()) == 26
    assert len(universal_triples()) >= 25


@pytest.mark.parametrize("triple", universal_triples(), ids=lambda t: t[2].name)
def test_universal_extension_is_unique(triple):
    M, P, alpha = triple
    report = brute_force_universal(M, P, alpha)
    assert report.passed, report.to_dict()
    assert report.checks[0].property == "unique extension"
    assert report.checks[1].property == "matches extend_universal"


def test_embedding_is_inherited_by_the_extension():
    T2, T3 = chain_table(2), chain_table(3)
    report = brute_force_universal(T2, T3, table_map("incl", T2, T3, [0, 1, 2]))
    assert "embedding inherited" in [c.property for c in report.checks]


def test_search_space_cap():
    Z = two_element()
    with pytest.raises(SearchSpaceTooLarge):
        brute_force_universal(chain_table(3), Z, table_map("supp", chain_table(3), Z, [0, 1, 1, 1]), cap=8)
