"""Hilbert symbols and 2-torsion Brauer classes of Q.

A class is identified with its finite set of ramified places; the group law
is symmetric difference.  Only places dividing 2ab (and infinity) are ever
inspected, the symbol being +1 elsewhere by unramifiedness.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import FrozenSet, Iterable, Sequence, Union

from .arith import ArithmeticError_, RatLike, factorize, legendre, squarefree_class

INFINITY = "infinity"
Place = Union[int, str]


def _place_key(v: Place) -> tuple[int, int]:
    return (1, 0) if v == INFINITY else (0, int(v))


def sort_places(places: Iterable[Place]) -> list[Place]:
    return sorted(places, key=_place_key)


@dataclass(frozen=True)
class BrauerClass2:
    """2-torsion Brauer class over Q as its set of ramified places."""

    ramified: FrozenSet[Place]

    def __post_init__(self) -> None:
        if len(self.ramified) % 2:
            raise ArithmeticError_("ramification set must have even size (product formula)")

    @classmethod
    def of(cls, places: Iterable[Place]) -> "BrauerClass2":
        return cls(frozenset(places))

    @classmethod
    def trivial(cls) -> "BrauerClass2":
        return cls(frozenset())

    @property
    def is_trivial(self) -> bool:
        return not self.ramified

    def __mul__(self, other: "BrauerClass2") -> "BrauerClass2":
        return BrauerClass2(self.ramified ^ other.ramified)

    def places(self) -> list[Place]:
        return sort_places(self.ramified)

    def to_json(self) -> list:
        return self.places()

    def __repr__(self) -> str:
        return f"Br2{self.places()}" if self.ramified else "Br2[trivial]"


def _eps_unit(u: int) -> int:
    # (u-1)/2 mod 2 for odd u
    return (u - 1) // 2 % 2


def _omega_unit(u: int) -> int:
    # (u^2-1)/8 mod 2 for odd u
    return (u * u - 1) // 8 % 2


def _split_valuation(x: Fraction, p: int) -> tuple[int, int]:
    """x = p^alpha * u with u a p-unit; returns (alpha, u mod p^3) as ints."""
    num, den = x.numerator, x.denominator
    alpha = 0
    while num % p == 0:
        num //= p
        alpha += 1
    while den % p == 0:
        den //= p
        alpha -= 1
    mod = p**3
    u = num * pow(den, -1, mod) % mod
    return alpha, u


def hilbert_symbol(a: RatLike, b: RatLike, v: Place) -> int:
    """Local Hilbert symbol (a, b)_v in {+1, -1} via the closed formulas."""
    a, b = Fraction(a), Fraction(b)
    if a == 0 or b == 0:
        raise ArithmeticError_("Hilbert symbol needs nonzero arguments")
    if v == INFINITY:
        return -1 if a < 0 and b < 0 else 1
    p = int(v)
    if p == 2:
        alpha, u = _split_valuation(a, 2)
        beta, w = _split_valuation(b, 2)
        e = _eps_unit(u) * _eps_unit(w) + alpha * _omega_unit(w) + beta * _omega_unit(u)
        return -1 if e % 2 else 1
    if not p > 2:
        raise ArithmeticError_(f"bad place {v}")
    alpha, u = _split_valuation(a, p)
    beta, w = _split_valuation(b, p)
    sign = 1
    if alpha % 2 and beta % 2 and (p - 1) // 2 % 2:
        sign = -sign
    if alpha % 2:
        sign *= legendre(w, p)
    if beta % 2:
        sign *= legendre(u, p)
    return sign


def _relevant_places(a: Fraction, b: Fraction) -> list[Place]:
    primes = {2}
    for x in (a, b):
        primes |= set(factorize(x.numerator).keys())
        primes |= set(factorize(x.denominator).keys())
    return sort_places(primes | {INFINITY})


def quaternion_class(a: RatLike, b: RatLike) -> BrauerClass2:
    """Ramification set of the quaternion algebra (a, b) over Q."""
    a, b = Fraction(a), Fraction(b)
    if a == 0 or b == 0:
        raise ArithmeticError_("quaternion pair needs nonzero entries")
    ramified = [v for v in _relevant_places(a, b) if hilbert_symbol(a, b, v) == -1]
    return BrauerClass2.of(ramified)


def character_obstruction_class(chi) -> BrauerClass2:
    """Obstruction class [c_chi] of a finite-order character: the square-root obstruction.

    Local component at a finite p dividing the modulus is chi_p(-1); at
    infinity it is chi(-1).  chi must take +-1 at -1 componentwise (always
    true: (-1)^2 = 1).
    """
    ramified: list[Place] = []
    for p in sorted(factorize(chi.modulus).keys()) if chi.modulus > 1 else []:
        if chi.p_component_at_minus1(p) == -1:
            ramified.append(p)
    if chi.value_at_minus1() == -1:
        ramified.append(INFINITY)
    return BrauerClass2.of(ramified)


def _local_square_vector(d: int, v: Place) -> tuple[int, ...]:
    """Coordinates of squarefree d in Q_v*/Q_v*^2 as an F2 vector."""
    if v == INFINITY:
        return (1 if d < 0 else 0,)
    p = int(v)
    if p == 2:
        alpha, u = _split_valuation(Fraction(d), 2)
        return (alpha % 2, _eps_unit(u), _omega_unit(u))
    alpha, u = _split_valuation(Fraction(d), p)
    return (alpha % 2, 1 if legendre(u, p) == -1 else 0)


def local_square_class_degree(d_list: Sequence[int], v: Place) -> int:
    """Local degree at v of the multiquadratic field Q(sqrt d_1, ..., sqrt d_n).

    Equals the order of the subgroup the d's generate in Q_v*/Q_v*^2.
    """
    vectors = []
    for d in d_list:
        d = squarefree_class(d)
        if d != 1:
            vectors.append(list(_local_square_vector(d, v)))
    rank = 0
    width = len(vectors[0]) if vectors else 0
    pivots: list[int] = []
    rows: list[list[int]] = []
    for vec in vectors:
        cur = list(vec)
        for piv, row in zip(pivots, rows):
            if cur[piv]:
                cur = [(x + y) % 2 for x, y in zip(cur, row)]
        lead = next((i for i in range(width) if cur[i]), None)
        if lead is not None:
            pivots.append(lead)
            rows.append(cur)
            rank += 1
    return 1 << rank


def splits_over_multiquadratic(cls: BrauerClass2, d_list: Sequence[int]) -> bool:
    """True iff cls restricts to zero over Q(sqrt d_1, ..., sqrt d_n).

    A 2-torsion class dies locally exactly where the field has even local
    degree, so the test is local degree >= 2 at every ramified place.
    """
    return all(local_square_class_degree(d_list, v) >= 2 for v in cls.ramified)
