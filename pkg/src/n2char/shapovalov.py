"""Mode algebra of the universal N=2 vertex superalgebra (NS sector) acting on its vacuum.

Words in the modes ``L_n``, ``J_n``, ``G+_r``, ``G-_r`` are straightened into
PBW monomials of creation modes applied to the vacuum ``Omega``.  The
Shapovalov pairing ``<x, y> = pi(x^dagger y)`` is the vacuum coefficient of
the straightened ``x^dagger y``; the radical of its Gram matrices at
central charge ``c_d`` cuts the universal vacuum module down to the
minimal quotient ``M_d``.

Canonical PBW order: families ``L, J, G+, G-`` in that order, and within a
family the most negative index first.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, NamedTuple, Sequence

from .errors import LevelCapExceeded
from .linalg import bareiss_rank
from .qseries import RationalLike, as_fraction, format_fraction, pretty_fraction

FAMILIES = ("L", "J", "G+", "G-")
_FAMILY_RANK = {f: i for i, f in enumerate(FAMILIES)}

DEFAULT_LEVEL_CAP = Fraction(6)

HALF = Fraction(1, 2)


class Mode(NamedTuple):
    family: str
    index: Fraction

    @property
    def is_odd(self) -> bool:
        return self.family in ("G+", "G-")

    @property
    def charge(self) -> int:
        return {"G+": 1, "G-": -1}.get(self.family, 0)

    @property
    def kills_vacuum(self) -> bool:
        # L_n (n >= -1), J_n (n >= 0), G_r (r >= -1/2)
        if self.family == "L":
            return self.index >= -1
        if self.family == "J":
            return self.index >= 0
        return self.index >= -HALF

    @property
    def sort_key(self) -> tuple[int, Fraction]:
        return (_FAMILY_RANK[self.family], self.index)

    def dagger(self) -> "Mode":
        family = {"G+": "G-", "G-": "G+"}.get(self.family, self.family)
        return Mode(family, -self.index)

    def __str__(self) -> str:
        return f"{self.family}{pretty_fraction(self.index)}"


def mode(family: str, index: RationalLike) -> Mode:
    """Validated constructor: integral index for ``L``/``J``, half-odd for ``G+``/``G-``."""
    if family not in _FAMILY_RANK:
        raise ValueError(f"unknown mode family {family!r}; expected one of {FAMILIES}")
    index = as_fraction(index)
    if family in ("L", "J"):
        if index.denominator != 1:
            raise ValueError(f"{family} modes need an integer index, got {index}")
    elif index.denominator != 2:
        raise ValueError(f"{family} modes need a half-odd index in the NS sector, got {index}")
    return Mode(family, index)


def L(n: RationalLike) -> Mode:
    return mode("L", n)


def J(n: RationalLike) -> Mode:
    return mode("J", n)


def Gp(r: RationalLike) -> Mode:
    return mode("G+", r)


def Gm(r: RationalLike) -> Mode:
    return mode("G-", r)


def parse_mode(text: str) -> Mode:
    for family in ("G+", "G-", "L", "J"):
        if text.startswith(family):
            return mode(family, text[len(family):])
    raise ValueError(f"cannot parse mode {text!r}")


def format_monomial(modes: Sequence[Mode]) -> str:
    """Dot-separated rendering, e.g. ``"J-1.G+-3/2"``; the vacuum renders as ``""``."""
    return ".".join(str(m) for m in modes)


def parse_monomial(text: str) -> tuple[Mode, ...]:
    if not text:
        return ()
    return tuple(parse_mode(part) for part in text.split("."))


# One term of a bracket: coefficient times a mode, or times the identity when mode is None.
Term = tuple[Fraction, "Mode | None"]


def super_bracket(a: Mode, b: Mode, c: Fraction) -> list[Term]:
    """``[a, b} = ab - (-1)^{|a||b|} ba`` in the NS N=2 superconformal algebra at central charge ``c``.

    Defining relations (standard NS-sector N=2 algebra)::

        [L_m, L_n]     = (m-n) L_{m+n} + c/12 (m^3 - m) delta_{m+n,0}
        [L_m, J_n]     = -n J_{m+n}
        [L_m, G±_r]    = (m/2 - r) G±_{m+r}
        [J_m, J_n]     = c/3 m delta_{m+n,0}
        [J_m, G±_r]    = ±G±_{m+r}
        {G+_r, G-_s}   = 2 L_{r+s} + (r-s) J_{r+s} + c/3 (r^2 - 1/4) delta_{r+s,0}
        {G±_r, G±_s}   = 0

    Pairs not listed are obtained by super-antisymmetry.
    """
    fa, fb = a.family, b.family
    m, n = a.index, b.index
    total = m + n
    central = total == 0
    if fa == "L" and fb == "L":
        out = [((m - n), Mode("L", total))]
        if central:
            out.append((c / 12 * (m ** 3 - m), None))
        return _prune(out)
    if fa == "L" and fb == "J":
        return _prune([(-n, Mode("J", total))])
    if fa == "L" and b.is_odd:
        return _prune([(m / 2 - n, Mode(fb, total))])
    if fa == "J" and fb == "J":
        return _prune([(c / 3 * m, None)] if central else [])
    if fa == "J" and b.is_odd:
        return [(Fraction(b.charge), Mode(fb, total))]
    if fa == "G+" and fb == "G-":
        out = [(Fraction(2), Mode("L", total)), (m - n, Mode("J", total))]
        if central:
            out.append((c / 3 * (m * m - Fraction(1, 4)), None))
        return _prune(out)
    if a.is_odd and b.is_odd:
        if fa == fb:
            return []
        return super_bracket(b, a, c)
    # remaining pairs: (J, L), (G, L), (G, J); bosonic on at least one side
    return [(-coef, z) for coef, z in super_bracket(b, a, c)]


def _prune(terms: list[Term]) -> list[Term]:
    return [(Fraction(coef), z) for coef, z in terms if coef]


def _exchange_sign(a: Mode, b: Mode) -> int:
    return -1 if a.is_odd and b.is_odd else 1


Monomial = tuple[Mode, ...]
StateVector = dict[Monomial, Fraction]


def monomial_level(monomial: Iterable[Mode]) -> Fraction:
    return -sum((m.index for m in monomial), Fraction(0))


def monomial_charge(monomial: Iterable[Mode]) -> int:
    return sum(m.charge for m in monomial)


@dataclass(frozen=True)
class ModeWord:
    """A formal product ``coeff * m_1 m_2 ... m_k`` of modes (leftmost acts last)."""

    modes: tuple[Mode, ...] = ()
    coeff: Fraction = Fraction(1)

    def __mul__(self, other: "ModeWord") -> "ModeWord":
        return ModeWord(self.modes + other.modes, self.coeff * other.coeff)

    def dagger(self) -> "ModeWord":
        return ModeWord(tuple(m.dagger() for m in reversed(self.modes)), self.coeff)

    @property
    def level(self) -> Fraction:
        return monomial_level(self.modes)

    @property
    def charge(self) -> int:
        return monomial_charge(self.modes)

    def __str__(self) -> str:
        body = format_monomial(self.modes) or "1"
        return body if self.coeff == 1 else f"{pretty_fraction(self.coeff)}*{body}"


def word(*modes: Mode, coeff: RationalLike = 1) -> ModeWord:
    return ModeWord(tuple(modes), as_fraction(coeff))


def dagger(w: ModeWord) -> ModeWord:
    """Anti-involution: reverse, negate every index, swap ``G+`` and ``G-``."""
    return w.dagger()


def _add_into(target: StateVector, source: StateVector, scale: Fraction) -> None:
    if not scale:
        return
    for mono, coef in source.items():
        value = target.get(mono, 0) + coef * scale
        if value:
            target[mono] = value
        else:
            target.pop(mono, None)


class VacuumModule:
    """Universal NS vacuum module at a fixed central charge, with memoised mode actions."""

    def __init__(self, c: RationalLike):
        self.c = as_fraction(c)
        self._cache: dict[tuple[Mode, Monomial], StateVector] = {}

    def apply(self, x: Mode, monomial: Monomial) -> StateVector:
        """``x`` applied to the PBW state ``monomial * Omega``, straightened."""
        key = (x, monomial)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        result = self._apply(x, monomial)
        self._cache[key] = result
        return result

    def _apply(self, x: Mode, monomial: Monomial) -> StateVector:
        if not monomial:
            return {} if x.kills_vacuum else {(x,): Fraction(1)}
        head, rest = monomial[0], monomial[1:]
        if not x.kills_vacuum:
            if x.sort_key < head.sort_key or (x == head and not x.is_odd):
                return {(x,) + monomial: Fraction(1)}
            if x == head:
                return {}
        # x head rest = [x, head} rest + sign * head (x rest)
        out: StateVector = {}
        for coef, z in super_bracket(x, head, self.c):
            if z is None:
                _add_into(out, {rest: Fraction(1)}, coef)
            else:
                _add_into(out, self.apply(z, rest), coef)
        moved = self.apply(x, rest)
        sign = _exchange_sign(x, head)
        for mono, coef in moved.items():
            _add_into(out, self.apply(head, mono), coef * sign)
        return out

    def apply_vector(self, x: Mode, vector: StateVector) -> StateVector:
        out: StateVector = {}
        for mono, coef in vector.items():
            _add_into(out, self.apply(x, mono), coef)
        return out

    def act(self, w: ModeWord) -> StateVector:
        """``w * Omega`` in the PBW basis."""
        vector: StateVector = {(): Fraction(1)}
        for x in reversed(w.modes):
            vector = self.apply_vector(x, vector)
            if not vector:
                return {}
        return {mono: coef * w.coeff for mono, coef in vector.items() if coef * w.coeff}

    def vacuum_expectation(self, w: ModeWord) -> Fraction:
        """``pi(w)``: the coefficient of ``Omega`` in ``w * Omega``."""
        if w.level != 0 or w.charge != 0:
            return Fraction(0)
        return self.act(w).get((), Fraction(0))

    def pair(self, x: ModeWord, y: ModeWord) -> Fraction:
        return self.vacuum_expectation(x.dagger() * y)


def act_on_vacuum(w: ModeWord, c: RationalLike) -> StateVector:
    return VacuumModule(c).act(w)


def shapovalov_pair(x: ModeWord, y: ModeWord, c: RationalLike) -> Fraction:
    """``<x Omega, y Omega> = pi(x^dagger y)`` at central charge ``c``."""
    return VacuumModule(c).pair(x, y)


def _is_ordered_pair(a: Mode, b: Mode) -> bool:
    if a.kills_vacuum:
        return b.kills_vacuum
    if b.kills_vacuum:
        return True
    return a.sort_key < b.sort_key or (a == b and not a.is_odd)


def straighten_randomly(w: ModeWord, c: RationalLike, rng: random.Random) -> StateVector:
    """Straighten ``w * Omega`` by rewriting a randomly chosen out-of-order adjacent pair each step.

    Shares only :func:`super_bracket` with :class:`VacuumModule`; used to
    check that the normal form does not depend on the rewrite order.
    """
    c = as_fraction(c)
    pending: dict[Monomial, Fraction] = {w.modes: w.coeff}
    done: StateVector = {}
    while pending:
        current = rng.choice(sorted(pending, key=lambda t: (len(t), format_monomial(t))))
        coef = pending.pop(current)
        if not coef:
            continue
        if current and current[-1].kills_vacuum:
            continue
        spots = [i for i in range(len(current) - 1) if not _is_ordered_pair(current[i], current[i + 1])]
        if not spots:
            value = done.get(current, 0) + coef
            if value:
                done[current] = value
            else:
                done.pop(current, None)
            continue
        i = rng.choice(spots)
        a, b = current[i], current[i + 1]
        if a == b and a.is_odd:
            continue  # G_r G_r = 0
        new_terms = [(coef * _exchange_sign(a, b), current[:i] + (b, a) + current[i + 2:])]
        for bc, z in super_bracket(a, b, c):
            middle = () if z is None else (z,)
            new_terms.append((coef * bc, current[:i] + middle + current[i + 2:]))
        for k, t in new_terms:
            pending[t] = pending.get(t, 0) + k
    return done


def creation_modes(max_level: Fraction) -> list[Mode]:
    """Creation modes of level at most ``max_level`` in canonical order."""
    max_level = as_fraction(max_level)
    modes = []
    top = int(max_level)
    modes += [Mode("L", Fraction(-n)) for n in range(top, 1, -1)]
    modes += [Mode("J", Fraction(-n)) for n in range(top, 0, -1)]
    halves = [Fraction(2 * k + 1, 2) for k in range(1, top + 1) if Fraction(2 * k + 1, 2) <= max_level]
    for family in ("G+", "G-"):
        modes += [Mode(family, -r) for r in reversed(halves)]
    return sorted(modes, key=lambda m: m.sort_key)


def _check_level(level: Fraction, allow_large: bool) -> Fraction:
    level = as_fraction(level)
    if level < 0 or (2 * level).denominator != 1:
        raise ValueError(f"level must be a nonnegative multiple of 1/2, got {level}")
    if level > DEFAULT_LEVEL_CAP and not allow_large:
        raise LevelCapExceeded(f"level {level} exceeds the cap {DEFAULT_LEVEL_CAP}; pass allow_large=True")
    return level


def pbw_monomials(level: RationalLike) -> list[Monomial]:
    """Every canonical creation monomial of exactly this level, any charge."""
    level = as_fraction(level)
    if level < 0 or (2 * level).denominator != 1:
        raise ValueError(f"level must be a nonnegative multiple of 1/2, got {level}")
    modes = creation_modes(level)
    out: list[Monomial] = []

    def extend(start: int, remaining: Fraction, prefix: list[Mode]) -> None:
        if remaining == 0:
            out.append(tuple(prefix))
            return
        for i in range(start, len(modes)):
            m = modes[i]
            weight = -m.index
            if weight > remaining:
                continue
            prefix.append(m)
            # fermions at most once, bosons may repeat
            extend(i + 1 if m.is_odd else i, remaining - weight, prefix)
            prefix.pop()

    extend(0, level, [])
    return sorted(out, key=lambda t: (monomial_charge(t), len(t), [m.sort_key for m in t]))


def pbw_basis(level: RationalLike, charge: int) -> list[Monomial]:
    return [t for t in pbw_monomials(level) if monomial_charge(t) == charge]


@dataclass
class GramBlock:
    level: Fraction
    charge: int
    central_charge: Fraction
    basis: list[Monomial]
    matrix: list[list[Fraction]]

    @property
    def size(self) -> int:
        return len(self.basis)

    def rank(self) -> int:
        return bareiss_rank(self.matrix) if self.basis else 0

    def radical_dim(self) -> int:
        return self.size - self.rank()

    def is_symmetric(self) -> bool:
        n = self.size
        return all(self.matrix[i][j] == self.matrix[j][i] for i in range(n) for j in range(i))

    def to_json(self) -> dict:
        return {
            "level": format_fraction(self.level),
            "charge": self.charge,
            "c": format_fraction(self.central_charge),
            "basis": [format_monomial(b) for b in self.basis],
            "matrix": [[format_fraction(x) for x in row] for row in self.matrix],
        }


GRAM_BLOCK_SCHEMA = {
    "type": "object",
    "required": ["level", "charge", "c", "basis", "matrix"],
    "additionalProperties": False,
    "properties": {
        "level": {"type": "string", "pattern": r"^\d+/\d+$"},
        "charge": {"type": "integer"},
        "c": {"type": "string", "pattern": r"^-?\d+/\d+$"},
        "basis": {"type": "array", "items": {"type": "string", "pattern": r"^$|^(L|J|G\+|G-)-?\d+(/\d+)?(\.(L|J|G\+|G-)-?\d+(/\d+)?)*$"}},
        "matrix": {
            "type": "array",
            "items": {"type": "array", "items": {"type": "string", "pattern": r"^-?\d+/\d+$"}},
        },
    },
}


def gram_block(
    level: RationalLike,
    charge: int,
    c: RationalLike,
    *,
    allow_large: bool = False,
    module: VacuumModule | None = None,
) -> GramBlock:
    """Shapovalov Gram matrix on the PBW basis of the given level and charge."""
    level = _check_level(level, allow_large)
    c = as_fraction(c)
    vm = module if module is not None else VacuumModule(c)
    if vm.c != c:
        raise ValueError("module central charge does not match c")
    basis = pbw_basis(level, charge)
    words = [ModeWord(b) for b in basis]
    n = len(words)
    matrix = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            matrix[i][j] = vm.pair(words[i], words[j])
            if i != j:
                matrix[j][i] = vm.pair(words[j], words[i])
    return GramBlock(level, charge, c, basis, matrix)


def universal_graded_dim(level: RationalLike) -> int:
    return len(pbw_monomials(level))


def quotient_graded_dim(d: int, level: RationalLike, *, allow_large: bool = False) -> int:
    """Dimension of the level-``level`` subspace of ``M_d``: PBW count minus radical dimension."""
    if d < 2:
        raise ValueError(f"d must be at least 2, got {d}")
    level = _check_level(level, allow_large)
    c = 3 - Fraction(6, d)
    vm = VacuumModule(c)
    charges = sorted({monomial_charge(t) for t in pbw_monomials(level)})
    return sum(gram_block(level, q, c, allow_large=allow_large, module=vm).rank() for q in charges)


def pbw_words_up_to(max_level: RationalLike) -> list[Monomial]:
    max_level = as_fraction(max_level)
    out: list[Monomial] = []
    level = Fraction(0)
    while level <= max_level:
        out += pbw_monomials(level)
        level += HALF
    return out


def diagonal_split(modes: Sequence[Mode]) -> list[tuple[int, Monomial, Monomial]]:
    """Expand ``prod_k (X_k (x) 1 + 1 (x) X_k)`` into signed pairs of subwords.

    Moving ``X (x) 1`` past odd modes already placed in the second factor
    costs a Koszul sign.
    """
    out = []
    for choice in itertools.product((0, 1), repeat=len(modes)):
        sign = 1
        odd_right = 0
        left: list[Mode] = []
        right: list[Mode] = []
        for x, side in zip(modes, choice):
            if side == 0:
                if x.is_odd and odd_right % 2:
                    sign = -sign
                left.append(x)
            else:
                right.append(x)
                odd_right += x.is_odd
        out.append((sign, tuple(left), tuple(right)))
    return out


def tensor_pair(x: ModeWord, y: ModeWord, left: VacuumModule, right: VacuumModule) -> Fraction:
    """``<Delta(x) Omega, Delta(y) Omega>`` on the tensor product, using ``<a(x)b, a'(x)b'> = <a,a'><b,b'>``."""
    total = Fraction(0)
    xs = diagonal_split(x.modes)
    ys = diagonal_split(y.modes)
    for sx, xl, xr in xs:
        for sy, yl, yr in ys:
            if monomial_level(xl) != monomial_level(yl) or monomial_charge(xl) != monomial_charge(yl):
                continue
            a = left.pair(ModeWord(xl), ModeWord(yl))
            if not a:
                continue
            b = right.pair(ModeWord(xr), ModeWord(yr))
            total += sx * sy * a * b
    return total * x.coeff * y.coeff


@dataclass
class IsometryReport:
    central_charges: tuple[Fraction, Fraction, Fraction]
    max_level: Fraction
    pairs_checked: int
    counterexample: tuple[str, str, Fraction, Fraction] | None

    @property
    def passed(self) -> bool:
        return self.counterexample is None


def check_isometry(
    c1: RationalLike, c2: RationalLike, c3: RationalLike, max_level: RationalLike, *, allow_large: bool = False
) -> IsometryReport:
    """Compare ``<x, y>`` at ``c1`` with the diagonal image pairing at ``(c2, c3)`` for all PBW words."""
    max_level = _check_level(max_level, allow_large)
    big, left, right = VacuumModule(c1), VacuumModule(c2), VacuumModule(c3)
    words = [ModeWord(t) for t in pbw_words_up_to(max_level)]
    checked = 0
    for x in words:
        for y in words:
            checked += 1
            expected = big.pair(x, y)
            got = tensor_pair(x, y, left, right)
            if expected != got:
                return IsometryReport(
                    (big.c, left.c, right.c), max_level, checked,
                    (format_monomial(x.modes), format_monomial(y.modes), expected, got),
                )
    return IsometryReport((big.c, left.c, right.c), max_level, checked, None)


def isometry_check(case, max_level: RationalLike, *, allow_large: bool = False) -> IsometryReport:
    """Check that the diagonal embedding for ``case`` (an ``EmbeddingCase``) preserves the pairing."""
    c = [3 - Fraction(6, d) for d in (case.d1, case.d2, case.d3)]
    return check_isometry(*c, max_level, allow_large=allow_large)
