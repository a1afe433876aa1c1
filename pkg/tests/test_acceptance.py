"""Exit criteria.  Every comparison is exact; each test prints one PASS/FAIL line."""
import io
import json
import random
import time
from contextlib import contextmanager
from fractions import Fraction as F

import pytest

from n2char import embeddings
from n2char.cli import run
from n2char.embeddings import (
    EmbeddingCase,
    decompose,
    enumerate_diagonal_embeddings,
    product_character,
)
from n2char.errors import CentralChargeMismatch
from n2char.nsmodules import (
    ModuleLabel,
    allowed_integer_modules,
    character_C,
    conformal_weight,
    vacuum_character,
)
from n2char.qseries import QSeries, euler_inverse, theta3, theta_sum
from n2char.shapovalov import (
    ModeWord,
    dagger,
    gram_block,
    isometry_check,
    mode,
    monomial_charge,
    pbw_monomials,
    quotient_graded_dim,
)

E8_TABLE = {
    "M3(x)M5": [1, 2, 18, 496],
    "C_1": [1, 1, 6, 107],
    "C_11": [0, 1, 11, 319],
    "C_19": [0, 0, 1, 69],
    "C_29": [0, 0, 0, 1],
}


@contextmanager
def criterion(capsys, number, title, budget=None):
    start = time.perf_counter()
    ok = False
    try:
        yield
        elapsed = time.perf_counter() - start
        if budget is not None:
            assert elapsed < budget, f"took {elapsed:.2f}s, budget {budget}s"
        ok = True
    finally:
        elapsed = time.perf_counter() - start
        with capsys.disabled():
            print(f"\nACCEPTANCE {number}: {'PASS' if ok else 'FAIL'}  {title}  ({elapsed:.2f}s)")


def cli(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), stdout=out, stderr=err)
    return code, out.getvalue()


def test_1_table_reproduction(capsys):
    with criterion(capsys, 1, "verify --case e8 --order 7 reproduces the E8 table", budget=5):
        code, out = cli("verify", "--case", "e8", "--order", "7", "--format", "table")
        assert code == 0 and out.rstrip().endswith("VERIFIED")
        code, out = cli("verify", "--case", "e8", "--order", "7", "--format", "json")
        (table,) = json.loads(out)["tables"]
        assert table["weights"] == ["0/1", "1/1", "3/1", "7/1"]
        assert {row["module"]: row["computed"] for row in table["rows"]} == E8_TABLE


def test_2_e6_degree_one(capsys):
    with criterion(capsys, 2, "E6: weight-0 dim 1, weight-1 dim 2 = C_1 + C_7", budget=1):
        prod = product_character([3, 4], 2)
        c1, c7 = character_C(12, 1, 2), character_C(12, 7, 2)
        assert (prod.coeff(0), prod.coeff(1)) == (1, 2)
        assert (c1.coeff(0), c1.coeff(1)) == (1, 1)
        assert (c7.coeff(0), c7.coeff(1)) == (0, 1)


def test_3_full_decompositions(capsys):
    with criterion(capsys, 3, "character identities for E6 and E8 through order 8, stable at order 10"):
        for order in (8, 10):
            e6 = product_character([3, 4], order)
            assert e6 == character_C(12, 1, order) + character_C(12, 7, order)
            e8 = product_character([3, 5], order)
            rhs = character_C(30, 1, order)
            for r in (11, 19, 29):
                rhs = rhs + character_C(30, r, order)
            assert e8 == rhs
        for target, factors, expected in [(12, (3, 4), {1: 1, 7: 1}), (30, (3, 5), {1: 1, 11: 1, 19: 1, 29: 1})]:
            for order in (8, 10):
                dec = decompose(target, factors, order)
                assert dec.verified
                assert {label.r: m for label, m in dec.multiplicities.items()} == expected


def test_4_embedding_enumeration(capsys):
    with criterion(capsys, 4, "diagonal embeddings up to d=10000 are exactly (6,3,3), (12,3,4), (30,3,5)", budget=1):
        cases = enumerate_diagonal_embeddings(10000)
        assert [(c.d1, c.d2, c.d3) for c in cases] == [(6, 3, 3), (12, 3, 4), (30, 3, 5)]


def test_5_weight_spot_checks(capsys):
    with criterion(capsys, 5, "conformal weights and integer-weight screening for d=12, 30"):
        assert [conformal_weight(ModuleLabel(12, 0, r)) for r in (1, 7)] == [0, 1]
        assert [conformal_weight(ModuleLabel(30, 0, r)) for r in (1, 11, 19, 29)] == [0, 1, 3, 7]
        assert [m.r for m in allowed_integer_modules(12)] == [1, 7]
        assert [m.r for m in allowed_integer_modules(30)] == [1, 11, 19, 29]


def test_6_shapovalov_character_cross_oracle(capsys):
    with criterion(capsys, 6, "Gram-radical dims equal vacuum character coefficients, d in {3,4,5,12,30}, n <= 3",
                   budget=30):
        for d in (3, 4, 5, 12, 30):
            chi = vacuum_character(d, F(7, 2))
            for k in range(7):
                level = F(k, 2)
                assert quotient_graded_dim(d, level) == chi.coeff(level), (d, level)


def test_7_isometry(capsys):
    with criterion(capsys, 7, "diagonal embedding is isometric up to level 5/2 for (12,3,4) and (30,3,5)", budget=60):
        for case in [(12, 3, 4), (30, 3, 5)]:
            report = isometry_check(EmbeddingCase(*case), F(5, 2))
            assert report.passed, report.counterexample


def test_8_identity_suites(capsys):
    with criterion(capsys, 8, "triple product to order 12, PBW counts to level 4, Gram symmetry and dagger checks"):
        for k in range(1, 25):
            assert theta3(F(k, 2)) == theta_sum(F(k, 2))

        order = F(9, 2)
        gen = euler_inverse(order) * euler_inverse(order) * QSeries.from_exponents({0: 1, 1: -1}, order)
        r = F(3, 2)
        while r < order:
            f = QSeries.from_exponents({0: 1, r: 1}, order)
            gen = gen * f * f
            r += 1
        for k in range(9):
            assert len(pbw_monomials(F(k, 2))) == gen.coeff(F(k, 2))

        rng = random.Random(12345)
        for _ in range(100):
            level = F(rng.randint(0, 7), 2)
            charge = rng.choice(sorted({monomial_charge(t) for t in pbw_monomials(level)}) or [0])
            c = F(rng.randint(-30, 30), rng.randint(1, 30))
            assert gram_block(level, charge, c).is_symmetric()

        families = ["L", "J", "G+", "G-"]
        for _ in range(100):
            modes = []
            for _ in range(rng.randint(0, 6)):
                fam = rng.choice(families)
                k = rng.randint(-5, 5)
                modes.append(mode(fam, k if fam in ("L", "J") else F(2 * k + 1, 2)))
            w = ModeWord(tuple(modes), F(rng.randint(-9, 9), rng.randint(1, 9)))
            assert dagger(dagger(w)) == w


def _tampered_copies():
    for case, ref in embeddings.REFERENCE_TABLES.items():
        for key, row in ref["rows"].items():
            for i in range(len(row)):
                tables = {k: {**v, "rows": dict(v["rows"])} for k, v in embeddings.REFERENCE_TABLES.items()}
                bad = list(row)
                bad[i] += 1
                tables[case]["rows"][key] = tuple(bad)
                yield case, tables


def test_9_negative_controls(capsys, monkeypatch):
    with criterion(capsys, 9, "central-charge mismatch raises; every single tampered table entry fails verify"):
        with pytest.raises(CentralChargeMismatch):
            decompose(11, (3, 4), 8)
        count = 0
        for case, tables in _tampered_copies():
            monkeypatch.setattr(embeddings, "REFERENCE_TABLES", tables)
            code, out = cli("verify", "--case", case)
            assert code == 1 and out.rstrip().endswith("MISMATCH"), case
            count += 1
        monkeypatch.undo()
        assert count == 6 + 20
        assert cli("verify", "--case", "all")[0] == 0
