"""Irreducible modules of the N=2 minimal quotients M_d and their NS characters.

Labels follow the ``C_{p;r}`` convention with ``1 <= r <= d-1`` and
``-r <= p <= r-1``; a label is Neveu-Schwarz when ``p + r`` is odd.  Only the
``p = 0`` characters ``C_r`` are implemented.

Note on the vacuum module: it is ``C_1`` (``r = 1``).  Some texts write the
vacuum as ``C_0``, which is not a valid label under this convention.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

from .errors import StabilizationError
from .qseries import QSeries, RationalLike, as_fraction, eta_inv_cubed, geom_inv, theta3

MAX_WINDOW_DOUBLINGS = 6


@dataclass(frozen=True, order=True)
class ModuleLabel:
    d: int
    p: int
    r: int

    def __post_init__(self):
        if self.d < 2:
            raise ValueError(f"d must be at least 2, got {self.d}")
        if not 1 <= self.r <= self.d - 1:
            raise ValueError(f"r must satisfy 1 <= r <= d-1 = {self.d - 1}, got {self.r}")
        if not -self.r <= self.p <= self.r - 1:
            raise ValueError(f"p must satisfy -r <= p <= r-1 for r={self.r}, got {self.p}")

    @property
    def sector(self) -> str:
        return "NS" if (self.p + self.r) % 2 else "R"

    @property
    def is_ns(self) -> bool:
        return self.sector == "NS"

    def __str__(self) -> str:
        return f"C[d={self.d},p={self.p},r={self.r}]"


def conformal_weight(label: ModuleLabel) -> Fraction:
    """Lowest L_0 eigenvalue ``(r^2 - p^2 - 1)/(4d) + (1 + (-1)^(r+p))/16``."""
    d, p, r = label.d, label.p, label.r
    sign = 1 if (r + p) % 2 == 0 else -1
    return Fraction(r * r - p * p - 1, 4 * d) + Fraction(1 + sign, 16)


def j_weight(label: ModuleLabel) -> Fraction:
    """J_0 eigenvalue on the highest-weight vector, ``p/d + (1 + (-1)^(p+r))/4``."""
    sign = 1 if (label.p + label.r) % 2 == 0 else -1
    return Fraction(label.p, label.d) + Fraction(1 + sign, 4)


def _check_ns_p0(d: int, r: int) -> ModuleLabel:
    label = ModuleLabel(d, 0, r)
    if not label.is_ns:
        raise ValueError(f"C_r needs r odd (NS sector with p=0), got r={r}")
    return label


def _j_term(d: int, r: int, j: int, order: Fraction) -> QSeries:
    # (1/(1+q^a) - 1/(1+q^-a)) q^{j(dj+r)} with a = (2dj+r)/2; equals
    # sign(a) (1 - q^|a|)/(1 + q^|a|) q^{j(dj+r)}, all exponents nonnegative
    a = Fraction(2 * d * j + r, 2)
    shift = j * (d * j + r)
    rel = order - shift
    if rel <= 0:
        return QSeries.zero(order, 2)
    b = abs(a)
    ratio = QSeries.from_exponents({0: 1, b: -1}, rel) * geom_inv(b, 1, rel)
    if a < 0:
        ratio = -ratio
    return ratio.shift(shift)


def _j_window_sum(d: int, r: int, order: Fraction, window: int) -> QSeries:
    total = QSeries.zero(order, 2)
    for j in range(-window, window + 1):
        total = total + _j_term(d, r, j, order)
    return total


def _initial_window(d: int, r: int, order: Fraction) -> int:
    bound = max(order, 0) / d
    root = isqrt(bound.numerator // bound.denominator)
    if root * root < bound:
        root += 1
    return root + -(-r // d) + 2


def character_C(d: int, r: int, order: RationalLike) -> QSeries:
    """Character ``tr_{C_r} q^{L_0}`` of the NS module ``C_{0;r}`` of M_d below ``order``.

    Computed as ``q^Delta * prod(1-q^i)^-3 * theta3 * S`` where ``S`` is the
    sum over ``j`` of the signed geometric ratios.  The ``j`` window starts
    at ``ceil(sqrt(order/d)) + ceil(r/d) + 2`` and doubles until two
    successive windows agree below the order.
    """
    label = _check_ns_p0(d, r)
    order = as_fraction(order)
    delta = conformal_weight(label)
    rel = order - delta
    if rel <= 0:
        return QSeries.zero(order, 4 * d)
    window = _initial_window(d, r, order)
    inner = _j_window_sum(d, r, rel, window)
    for _ in range(MAX_WINDOW_DOUBLINGS):
        window *= 2
        wider = _j_window_sum(d, r, rel, window)
        if wider == inner:
            break
        inner = wider
    else:
        raise StabilizationError(f"j-sum for d={d}, r={r} did not stabilize below order {order}")
    body = eta_inv_cubed(rel) * theta3(rel) * inner
    return body.shift(delta)


def vacuum_character(d: int, order: RationalLike) -> QSeries:
    """Character of M_d as a module over itself (``C_1``)."""
    return character_C(d, 1, order)


def allowed_integer_modules(d: int) -> list[ModuleLabel]:
    """NS labels ``(d, 0, r)`` with integral conformal weight, i.e. ``4d | r^2 - 1``."""
    if d < 2:
        raise ValueError(f"d must be at least 2, got {d}")
    return [ModuleLabel(d, 0, r) for r in range(1, d, 2) if (r * r - 1) % (4 * d) == 0]
