from fractions import Fraction as F

import jsonschema
import pytest

from n2char import embeddings
from n2char.embeddings import (
    DECOMPOSITION_SCHEMA,
    EmbeddingCase,
    central_charge,
    decompose,
    enumerate_diagonal_embeddings,
    product_character,
    verify_table,
)
from n2char.errors import CentralChargeMismatch, DecompositionFailure
from n2char.nsmodules import allowed_integer_modules, character_C, conformal_weight, vacuum_character
from n2char.shapovalov import quotient_graded_dim


def test_central_charge():
    assert central_charge(2) == 0
    assert central_charge(12) == F(5, 2) == central_charge(3) + central_charge(4)
    assert central_charge(30) == F(14, 5) == central_charge(3) + central_charge(5)
    with pytest.raises(ValueError):
        central_charge(1)


def brute_force_embeddings(d_max):
    found = []
    for d1 in range(3, d_max + 1):
        for d2 in range(3, d_max + 1):
            for d3 in range(d2, d_max + 1):
                if central_charge(d1) == central_charge(d2) + central_charge(d3):
                    found.append((d1, d2, d3))
    return sorted(found)


def as_tuples(cases):
    return [(c.d1, c.d2, c.d3) for c in cases]


def test_enumeration_small():
    assert as_tuples(enumerate_diagonal_embeddings(30)) == [(6, 3, 3), (12, 3, 4), (30, 3, 5)]
    assert enumerate_diagonal_embeddings(5) == []
    assert as_tuples(enumerate_diagonal_embeddings(29)) == [(6, 3, 3), (12, 3, 4)]


def test_enumeration_matches_brute_force():
    assert as_tuples(enumerate_diagonal_embeddings(45)) == brute_force_embeddings(45)


def test_enumeration_large():
    assert as_tuples(enumerate_diagonal_embeddings(10000)) == [(6, 3, 3), (12, 3, 4), (30, 3, 5)]


def test_embedding_case_validation():
    EmbeddingCase(12, 3, 4)
    with pytest.raises(CentralChargeMismatch):
        EmbeddingCase(11, 3, 4)
    with pytest.raises(ValueError):
        EmbeddingCase(12, 4, 3)


def test_product_character():
    chi = product_character([3, 4], 2)
    assert (chi.coeff(0), chi.coeff(1)) == (1, 2)
    big = product_character([3, 5], 8)
    assert [big.coeff(w) for w in (0, 1, 3, 7)] == [1, 2, 18, 496]
    assert product_character([3], 5) == vacuum_character(3, 5)


@pytest.mark.parametrize(
    "target, factors, expected",
    [(12, (3, 4), {1: 1, 7: 1}), (30, (3, 5), {1: 1, 11: 1, 19: 1, 29: 1}), (6, (3, 3), {1: 1, 5: 1})],
)
def test_decompositions(target, factors, expected):
    dec = decompose(target, factors, 8)
    assert {label.r: m for label, m in dec.multiplicities.items()} == expected
    assert dec.verified
    # reconstruct independently of the greedy loop
    total = sum((character_C(target, r, 8) * m for r, m in expected.items()),
                start=character_C(target, 1, 8) * 0)
    assert total == product_character(factors, 8)


@pytest.mark.parametrize("target, factors", [(12, (3, 4)), (30, (3, 5)), (6, (3, 3))])
def test_decomposition_stable_under_order_extension(target, factors):
    assert decompose(target, factors, 8).multiplicities == decompose(target, factors, 10).multiplicities


def test_case_i_cross_checked_by_gram_radicals():
    # sum of chi(C_1) + chi(C_5) at levels <= 3 against the product of Shapovalov dims of M_3 (x) M_3
    lhs = character_C(6, 1, F(7, 2)) + character_C(6, 5, F(7, 2))
    dims3 = [quotient_graded_dim(3, F(k, 2)) for k in range(7)]
    for n in range(7):
        conv = sum(dims3[i] * dims3[n - i] for i in range(n + 1))
        assert lhs.coeff(F(n, 2)) == conv


def test_candidate_weights_distinct():
    for d in (6, 12, 30):
        weights = [conformal_weight(m) for m in allowed_integer_modules(d)]
        assert len(set(weights)) == len(weights)


def test_central_charge_mismatch():
    with pytest.raises(CentralChargeMismatch):
        decompose(11, (3, 4), 8)


def test_decomposition_failure_on_bad_split(monkeypatch):
    # with C_7 hidden from the candidate pool the weight-1 remainder cannot be absorbed
    original = embeddings.allowed_integer_modules
    monkeypatch.setattr(embeddings, "allowed_integer_modules", lambda d: original(d)[:1])
    with pytest.raises(DecompositionFailure):
        decompose(12, (3, 4), 3)


def test_low_order_skips_unreachable_candidates():
    dec = decompose(30, (3, 5), 2)
    assert {label.r: m for label, m in dec.multiplicities.items()} == {1: 1, 11: 1}


def test_json_schema():
    data = decompose(12, (3, 4), 8).to_json()
    jsonschema.validate(data, DECOMPOSITION_SCHEMA)
    assert data == {
        "target_d": 12,
        "factors": [3, 4],
        "order": "8/1",
        "multiplicities": [{"r": 1, "m": 1}, {"r": 7, "m": 1}],
        "verified": True,
    }


def test_verify_table_passes():
    e6, e8 = verify_table()
    assert e6.passed and e8.passed
    assert e8.computed[19] == (0, 0, 1, 69)
    assert e8.computed[1] == (1, 1, 6, 107)
    assert sum(e8.computed[r][2] for r in (1, 11, 19, 29)) == 18


def test_verify_table_reports_tampering(monkeypatch):
    tampered = {k: {**v, "rows": dict(v["rows"])} for k, v in embeddings.REFERENCE_TABLES.items()}
    tampered["e8"]["rows"][11] = (0, 1, 11, 320)
    monkeypatch.setattr(embeddings, "REFERENCE_TABLES", tampered)
    (e8,) = verify_table(["e8"])
    assert not e8.passed
    assert e8.mismatches == [(11, 7, 320, 319)]
