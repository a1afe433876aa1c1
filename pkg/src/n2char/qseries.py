"""Truncated formal series in ``q`` with rational exponents and exact coefficients.

A :class:`QSeries` stores its exponents as integer numerators over a common
positive denominator ``denom``; ``order`` is an exclusive bound above which
nothing is known.  Binary operations rebase both operands onto the lcm of the
two denominators and keep the smaller order.
"""
from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Iterable, Iterator, Mapping, Union

RationalLike = Union[int, str, Fraction]

ONE = Fraction(1)
HALF = Fraction(1, 2)


def as_fraction(value: RationalLike) -> Fraction:
    """Coerce ``int``, ``Fraction`` or a ``"p/q"`` string to a Fraction."""
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


def format_fraction(value: Fraction) -> str:
    """Lowest-terms ``"num/den"`` rendering; integers come out as ``"n/1"``."""
    value = Fraction(value)
    return f"{value.numerator}/{value.denominator}"


def pretty_fraction(value: Fraction) -> str:
    value = Fraction(value)
    return str(value.numerator) if value.denominator == 1 else f"{value.numerator}/{value.denominator}"


class QSeries:
    """Immutable truncated series ``sum_k c_k q^(k/denom)`` valid below ``order``."""

    __slots__ = ("_denom", "_order", "_terms")

    def __init__(self, terms: Mapping[int, RationalLike], denom: int, order: RationalLike):
        if not isinstance(denom, int) or denom <= 0:
            raise ValueError(f"denominator must be a positive integer, got {denom!r}")
        order = as_fraction(order)
        # order must sit on the exponent lattice; refine the lattice if it does not
        fine = lcm(denom, order.denominator)
        factor = fine // denom
        self._denom = fine
        self._order = order
        bound = order * fine
        clean: dict[int, Fraction] = {}
        for k, c in terms.items():
            c = as_fraction(c)
            k = int(k) * factor
            if c and k < bound:
                clean[k] = c
        self._terms = clean

    @classmethod
    def _raw(cls, terms: dict[int, Fraction], denom: int, order: Fraction) -> "QSeries":
        # trusted constructor: terms already pruned and below order
        obj = cls.__new__(cls)
        obj._denom = denom
        obj._order = order
        obj._terms = terms
        return obj

    @classmethod
    def from_exponents(cls, terms: Mapping[RationalLike, RationalLike], order: RationalLike) -> "QSeries":
        """Build from a mapping ``exponent -> coefficient`` with rational exponents."""
        exps = {as_fraction(e): as_fraction(c) for e, c in terms.items()}
        order = as_fraction(order)
        denom = lcm(order.denominator, *(e.denominator for e in exps)) if exps else order.denominator
        return cls({int(e * denom): c for e, c in exps.items()}, denom, order)

    @classmethod
    def zero(cls, order: RationalLike, denom: int = 1) -> "QSeries":
        return cls({}, denom, order)

    @classmethod
    def one(cls, order: RationalLike, denom: int = 1) -> "QSeries":
        return cls({0: ONE}, denom, order)

    @classmethod
    def monomial(cls, exponent: RationalLike, order: RationalLike, coeff: RationalLike = 1) -> "QSeries":
        return cls.from_exponents({exponent: coeff}, order)

    @property
    def denom(self) -> int:
        return self._denom

    @property
    def order(self) -> Fraction:
        return self._order

    @property
    def terms(self) -> dict[int, Fraction]:
        return dict(self._terms)

    def items(self) -> Iterator[tuple[Fraction, Fraction]]:
        """``(exponent, coefficient)`` pairs in increasing exponent order."""
        for k in sorted(self._terms):
            yield Fraction(k, self._denom), self._terms[k]

    def exponents(self) -> list[Fraction]:
        return [e for e, _ in self.items()]

    def is_zero(self) -> bool:
        return not self._terms

    def leading_exponent(self) -> Fraction | None:
        if not self._terms:
            return None
        return Fraction(min(self._terms), self._denom)

    def rebase(self, denom: int) -> "QSeries":
        """Same series on the finer lattice ``1/denom``; ``denom`` must be a multiple."""
        if denom % self._denom:
            raise ValueError(f"{denom} is not a multiple of {self._denom}")
        f = denom // self._denom
        return QSeries._raw({k * f: c for k, c in self._terms.items()}, denom, self._order)

    def truncate(self, order: RationalLike) -> "QSeries":
        order = min(as_fraction(order), self._order)
        return QSeries(self._terms, self._denom, order)

    def coeff(self, exponent: RationalLike) -> Fraction:
        exponent = as_fraction(exponent)
        if exponent >= self._order:
            raise ValueError(
                f"coefficient of q^{exponent} is unknown: series truncated at order {self._order}"
            )
        k = exponent * self._denom
        if k.denominator != 1:
            return Fraction(0)
        return self._terms.get(int(k), Fraction(0))

    def shift(self, exponent: RationalLike) -> "QSeries":
        """Multiply by ``q^exponent``; the order moves with the terms."""
        exponent = as_fraction(exponent)
        denom = lcm(self._denom, exponent.denominator)
        f = denom // self._denom
        s = int(exponent * denom)
        return QSeries._raw(
            {k * f + s: c for k, c in self._terms.items()}, denom, self._order + exponent
        )

    def scale(self, factor: RationalLike) -> "QSeries":
        factor = as_fraction(factor)
        if not factor:
            return QSeries._raw({}, self._denom, self._order)
        return QSeries._raw({k: c * factor for k, c in self._terms.items()}, self._denom, self._order)

    def _unify(self, other: "QSeries") -> tuple[dict[int, Fraction], dict[int, Fraction], int, Fraction]:
        denom = lcm(self._denom, other._denom)
        a = self.rebase(denom)._terms
        b = other.rebase(denom)._terms
        return a, b, denom, min(self._order, other._order)

    def __add__(self, other: "QSeries") -> "QSeries":
        if not isinstance(other, QSeries):
            return NotImplemented
        a, b, denom, order = self._unify(other)
        bound = order * denom
        out: dict[int, Fraction] = {}
        for terms in (a, b):
            for k, c in terms.items():
                if k < bound:
                    out[k] = out.get(k, 0) + c
        return QSeries._raw({k: c for k, c in out.items() if c}, denom, order)

    def __neg__(self) -> "QSeries":
        return self.scale(-1)

    def __sub__(self, other: "QSeries") -> "QSeries":
        if not isinstance(other, QSeries):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other: Union["QSeries", int, Fraction]) -> "QSeries":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, QSeries):
            return NotImplemented
        for s in (self, other):
            lead = s.leading_exponent()
            if lead is not None and lead < 0:
                raise ValueError(f"multiplication needs nonnegative exponents, got leading q^{lead}")
        a, b, denom, order = self._unify(other)
        bound = order * denom
        out: dict[int, Fraction] = {}
        bk = sorted(b.items())
        for ka, ca in a.items():
            for kb, cb in bk:
                k = ka + kb
                if k >= bound:
                    break
                out[k] = out.get(k, 0) + ca * cb
        return QSeries._raw({k: c for k, c in out.items() if c}, denom, order)

    def __rmul__(self, other: Union[int, Fraction]) -> "QSeries":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, QSeries):
            return NotImplemented
        if self._order != other._order:
            return False
        return dict(self.items()) == dict(other.items())

    def __hash__(self) -> int:
        return hash((self._order, tuple(self.items())))

    def __repr__(self) -> str:
        return f"QSeries({self}, order={pretty_fraction(self._order)})"

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for e, c in self.items():
            if e == 0:
                parts.append(pretty_fraction(c))
                continue
            mono = "q" if e == 1 else f"q^{pretty_fraction(e)}"
            if c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append(f"-{mono}")
            else:
                parts.append(f"{pretty_fraction(c)}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    def to_json(self) -> dict:
        return {
            "denom": self._denom,
            "order": format_fraction(self._order),
            "terms": [[k, format_fraction(self._terms[k])] for k in sorted(self._terms)],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "QSeries":
        return cls({int(k): Fraction(c) for k, c in data["terms"]}, int(data["denom"]), Fraction(data["order"]))


QSERIES_SCHEMA = {
    "type": "object",
    "required": ["denom", "order", "terms"],
    "additionalProperties": False,
    "properties": {
        "denom": {"type": "integer", "minimum": 1},
        "order": {"type": "string", "pattern": r"^-?\d+/\d+$"},
        "terms": {
            "type": "array",
            "items": {
                "type": "array",
                "prefixItems": [{"type": "integer"}, {"type": "string", "pattern": r"^-?\d+/\d+$"}],
                "minItems": 2,
                "maxItems": 2,
            },
        },
    },
}


def geom_inv(exponent: RationalLike, sign: int, order: RationalLike) -> QSeries:
    """Expand ``1 / (1 + sign * q^exponent)`` below ``order``.

    ``sign=+1`` gives alternating coefficients, ``sign=-1`` gives all ones.
    Negative exponents are the caller's business (rewrite
    ``1/(1+q^-a) = q^a/(1+q^a)`` first).
    """
    a = as_fraction(exponent)
    if a <= 0:
        raise ValueError(f"geometric expansion needs a positive exponent, got {a}")
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    order = as_fraction(order)
    denom = lcm(a.denominator, order.denominator)
    step = int(a * denom)
    bound = order * denom
    terms: dict[int, Fraction] = {}
    k = 0
    coeff = ONE
    while k < bound:
        terms[k] = coeff
        k += step
        coeff = -coeff * sign
    return QSeries._raw(terms, denom, order)


def _binomial(exponent: Fraction, sign: int, order: Fraction) -> QSeries:
    # 1 + sign*q^exponent
    return QSeries.from_exponents({0: 1, exponent: sign}, order)


def euler_inverse(order: RationalLike) -> QSeries:
    """``prod_{i>=1} (1 - q^i)^-1``, the partition generating function."""
    order = as_fraction(order)
    result = QSeries.one(order)
    i = 1
    while i < order:
        result = result * geom_inv(i, -1, order)
        i += 1
    return result


def eta_inv_cubed(order: RationalLike) -> QSeries:
    """``q^(1/8) / eta(q)^3 = prod_{i>=1} (1 - q^i)^-3`` below ``order``."""
    order = as_fraction(order)
    result = QSeries.one(order)
    i = 1
    while i < order:
        factor = geom_inv(i, -1, order)
        result = result * factor * factor * factor
        i += 1
    return result


def theta3(order: RationalLike) -> QSeries:
    """``prod_{i>=1} (1 + q^(i-1/2))^2 (1 - q^i)`` below ``order``."""
    order = as_fraction(order)
    result = QSeries.one(order)
    i = 1
    while i - HALF < order:
        odd = _binomial(i - HALF, 1, order)
        result = result * odd * odd
        if i < order:
            result = result * _binomial(Fraction(i), -1, order)
        i += 1
    return result


def theta_sum(order: RationalLike) -> QSeries:
    """``sum_{n in Z} q^(n^2/2)`` below ``order``; the series side of the triple product."""
    order = as_fraction(order)
    terms: dict[Fraction, int] = {}
    n = 0
    while Fraction(n * n, 2) < order:
        terms[Fraction(n * n, 2)] = 1 if n == 0 else 2
        n += 1
    return QSeries.from_exponents(terms, order) if terms else QSeries.zero(order, 2)


def series_sum(parts: Iterable[QSeries], order: RationalLike) -> QSeries:
    total = QSeries.zero(order)
    for part in parts:
        total = total + part
    return total
