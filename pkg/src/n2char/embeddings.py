"""Diagonal conformal embeddings of N=2 minimal models and character decomposition.

The diagonal map ``X -> X (x) 1 + 1 (x) X`` embeds ``V_{d1}`` into
``V_{d2} (x) V_{d3}`` exactly when the central charges ``c_d = 3 - 6/d`` add
up.  Given such a case, the tensor-product vacuum character is split into
characters ``C_r`` of the smaller algebra by greedy leading-term
subtraction.
"""
from __future__ import annotations

import copy
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import CentralChargeMismatch, DecompositionFailure
from .nsmodules import (
    ModuleLabel,
    allowed_integer_modules,
    character_C,
    conformal_weight,
    vacuum_character,
)
from .qseries import QSeries, RationalLike, as_fraction, format_fraction


def central_charge(d: int) -> Fraction:
    if d < 2:
        raise ValueError(f"d must be at least 2, got {d}")
    return 3 - Fraction(6, d)


@dataclass(frozen=True, order=True)
class EmbeddingCase:
    d1: int
    d2: int
    d3: int

    def __post_init__(self):
        if min(self.d1, self.d2, self.d3) < 2:
            raise ValueError("all quotient indices must be at least 2")
        if self.d2 > self.d3:
            raise ValueError("factors must be ordered d2 <= d3")
        if central_charge(self.d1) != central_charge(self.d2) + central_charge(self.d3):
            raise CentralChargeMismatch(
                f"c_{self.d1} = {central_charge(self.d1)} differs from "
                f"c_{self.d2} + c_{self.d3} = {central_charge(self.d2) + central_charge(self.d3)}"
            )

    @property
    def factors(self) -> tuple[int, int]:
        return (self.d2, self.d3)


def enumerate_diagonal_embeddings(d_max: int) -> list[EmbeddingCase]:
    """All ``(d1, d2, d3)`` with ``c_{d1} = c_{d2} + c_{d3}`` and every index in ``[3, d_max]``.

    The condition reads ``1/d2 + 1/d3 = 1/2 + 1/d1``.  With ``d2 <= d3`` the
    left side is at most ``2/d2``, which must exceed ``1/2``, so only
    ``d2 < 4`` can contribute; for each ``d2`` the admissible ``d3`` are
    bounded the same way.  Index 2 is excluded: ``c_2 = 0`` and every
    ``(d, 2, d)`` would solve the equation trivially.
    """
    if d_max < 2:
        raise ValueError(f"d_max must be at least 2, got {d_max}")
    half = Fraction(1, 2)
    cases = []
    d2 = 3
    while d2 <= d_max and Fraction(2, d2) > half:
        d3 = d2
        while d3 <= d_max:
            excess = Fraction(1, d2) + Fraction(1, d3) - half
            if excess <= 0:
                break
            if excess.numerator == 1 and 3 <= excess.denominator <= d_max:
                cases.append(EmbeddingCase(excess.denominator, d2, d3))
            d3 += 1
        d2 += 1
    return sorted(cases)


def product_character(factor_ds: Sequence[int], order: RationalLike) -> QSeries:
    """Vacuum character of ``M_{d_1} (x) ... (x) M_{d_k}``: the product of the factors' characters."""
    if not factor_ds:
        raise ValueError("need at least one factor")
    result = None
    for d in factor_ds:
        chi = vacuum_character(d, order)
        result = chi if result is None else result * chi
    return result


@dataclass
class Decomposition:
    target_d: int
    factors: list[int]
    multiplicities: dict[ModuleLabel, int]
    verified_order: Fraction
    remainder: QSeries | None = field(default=None, repr=False, compare=False)

    @property
    def verified(self) -> bool:
        return self.remainder is not None and self.remainder.is_zero()

    def summands(self) -> list[ModuleLabel]:
        return [label for label, m in sorted(self.multiplicities.items()) for _ in range(m)]

    def to_json(self) -> dict:
        return {
            "target_d": self.target_d,
            "factors": list(self.factors),
            "order": format_fraction(self.verified_order),
            "multiplicities": [
                {"r": label.r, "m": m} for label, m in sorted(self.multiplicities.items())
            ],
            "verified": self.verified,
        }

    def __str__(self) -> str:
        parts = [f"{m}*C_{label.r}" if m != 1 else f"C_{label.r}"
                 for label, m in sorted(self.multiplicities.items()) if m]
        return " + ".join(parts) or "0"


DECOMPOSITION_SCHEMA = {
    "type": "object",
    "required": ["target_d", "factors", "order", "multiplicities", "verified"],
    "additionalProperties": False,
    "properties": {
        "target_d": {"type": "integer", "minimum": 2},
        "factors": {"type": "array", "items": {"type": "integer", "minimum": 2}, "minItems": 1},
        "order": {"type": "string", "pattern": r"^-?\d+/\d+$"},
        "multiplicities": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["r", "m"],
                "additionalProperties": False,
                "properties": {
                    "r": {"type": "integer", "minimum": 1},
                    "m": {"type": "integer", "minimum": 0},
                },
            },
        },
        "verified": {"type": "boolean"},
    },
}


def decompose(target_d: int, factor_ds: Sequence[int], order: RationalLike) -> Decomposition:
    """Split the product vacuum character into ``sum m_r chi(C_r)`` for ``M_{target_d}``.

    Candidates are :func:`allowed_integer_modules` with lowest weight below
    ``order``, taken in increasing weight.  Before each candidate the
    remainder must vanish below its lowest weight; its coefficient there is
    the multiplicity and must be a nonnegative integer.  After the last
    candidate the remainder must be zero.
    """
    order = as_fraction(order)
    factor_ds = list(factor_ds)
    c_target = central_charge(target_d)
    c_factors = sum((central_charge(d) for d in factor_ds), Fraction(0))
    if c_target != c_factors:
        raise CentralChargeMismatch(
            f"c_{target_d} = {c_target} but the factors {factor_ds} give {c_factors}"
        )

    candidates = sorted(allowed_integer_modules(target_d), key=conformal_weight)
    weights = [conformal_weight(label) for label in candidates]
    if len(set(weights)) != len(weights):
        raise DecompositionFailure(f"candidate lowest weights for d={target_d} are not distinct")

    remainder = product_character(factor_ds, order)
    multiplicities: dict[ModuleLabel, int] = {}
    for label, weight in zip(candidates, weights):
        if weight >= order:
            break
        lead = remainder.leading_exponent()
        if lead is not None and lead < weight:
            raise DecompositionFailure(
                f"remainder has q^{lead} term below the next candidate {label} (weight {weight})"
            )
        m = remainder.coeff(weight)
        if m < 0 or m.denominator != 1:
            raise DecompositionFailure(f"multiplicity {m} of {label} is not a nonnegative integer")
        m = int(m)
        multiplicities[label] = m
        if m:
            remainder = remainder - character_C(target_d, label.r, order) * m
    if not remainder.is_zero():
        lead = remainder.leading_exponent()
        raise DecompositionFailure(
            f"nonzero remainder starting at q^{lead}: {remainder.coeff(lead)} left over"
        )
    return Decomposition(target_d, factor_ds, multiplicities, order, remainder)


# Published graded dimensions; rows keyed by r (0 = the
# tensor product itself).  `verify_table` reads this at call time.
REFERENCE_TABLES: dict[str, dict] = {
    "e6": {
        "target_d": 12,
        "factors": (3, 4),
        "weights": (0, 1),
        "rows": {0: (1, 2), 1: (1, 1), 7: (0, 1)},
    },
    "e8": {
        "target_d": 30,
        "factors": (3, 5),
        "weights": (0, 1, 3, 7),
        "rows": {0: (1, 2, 18, 496), 1: (1, 1, 6, 107), 11: (0, 1, 11, 319), 19: (0, 0, 1, 69), 29: (0, 0, 0, 1)},
    },
}


# Every diagonal embedding between minimal quotients (index >= 3).
REFERENCE_EMBEDDINGS = ((6, 3, 3), (12, 3, 4), (30, 3, 5))


@dataclass
class TableCheck:
    case: str
    target_d: int
    factors: tuple[int, ...]
    weights: tuple[Fraction, ...]
    computed: dict[int, tuple[int, ...]]
    expected: dict[int, tuple[int, ...]]

    @property
    def mismatches(self) -> list[tuple[int, Fraction, int, int]]:
        out = []
        for key, row in self.expected.items():
            got = self.computed.get(key)
            for i, w in enumerate(self.weights):
                have = None if got is None else got[i]
                if have != row[i]:
                    out.append((key, w, row[i], have))
        return out

    @property
    def columns_add_up(self) -> bool:
        modules = [row for key, row in self.computed.items() if key != 0]
        return all(
            sum(row[i] for row in modules) == self.computed[0][i] for i in range(len(self.weights))
        )

    @property
    def passed(self) -> bool:
        return not self.mismatches and self.columns_add_up

    def row_name(self, key: int) -> str:
        if key == 0:
            return "M" + "(x)M".join(str(d) for d in self.factors)
        return f"C_{key}"

    def to_json(self) -> dict:
        return {
            "case": self.case,
            "target_d": self.target_d,
            "factors": list(self.factors),
            "weights": [format_fraction(w) for w in self.weights],
            "rows": [
                {"module": self.row_name(k), "computed": list(self.computed[k]), "expected": list(self.expected[k])}
                for k in self.expected
            ],
            "passed": self.passed,
        }


def _exact_int(value: Fraction) -> int:
    if value.denominator != 1:
        raise DecompositionFailure(f"graded dimension {value} is not an integer")
    return int(value)


def verify_table(cases: Sequence[str] = ("e6", "e8")) -> list[TableCheck]:
    """Recompute graded dimensions for the tabulated cases and compare against the stored table.

    E6 is expanded through degree 1 and E8 through degree 7, the degrees the
    table covers.  A mismatch is reported in the returned checks, never raised.
    """
    tables = copy.deepcopy(REFERENCE_TABLES)
    checks = []
    for case in cases:
        ref = tables[case]
        weights = tuple(Fraction(w) for w in ref["weights"])
        order = max(weights) + 1
        target = ref["target_d"]
        computed: dict[int, tuple[int, ...]] = {}
        for key in ref["rows"]:
            chi = product_character(ref["factors"], order) if key == 0 else character_C(target, key, order)
            computed[key] = tuple(_exact_int(chi.coeff(w)) for w in weights)
        checks.append(
            TableCheck(case, target, tuple(ref["factors"]), weights, computed,
                       {k: tuple(v) for k, v in ref["rows"].items()})
        )
    return checks
