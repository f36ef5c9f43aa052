"""Dirichlet characters with exact values in Q(i).

Values are stored as Gaussian rationals (QuadElem over sqrt -1) on the full
unit group of the modulus; the moduli used in this toolkit are tiny.  The two
characters the surface family needs are provided as builders: the quadratic
character of conductor 8 with eps(3) = eps(5) = -1, and the order-4 character
of conductor 16 with psi(3) = -i, psi(5) = i.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict

from .arith import ArithmeticError_, QuadElem, kronecker, squarefree_class

Gauss = QuadElem  # values live in Q(i) = QuadElem with base -1


def gauss(a, b=0) -> Gauss:
    return QuadElem.make(-1, Fraction(a), Fraction(b))


ONE = gauss(1)
MINUS_ONE = gauss(-1)
I = gauss(0, 1)
MINUS_I = gauss(0, -1)


@dataclass(frozen=True)
class DirichletCharacter:
    """Character of (Z/N)* given by its full value table on the units mod N."""

    modulus: int
    table: tuple[Gauss, ...]  # indexed by residue 0..N-1; zero off the units

    @classmethod
    def from_values(cls, modulus: int, values: Dict[int, Gauss]) -> "DirichletCharacter":
        tab = [gauss(0)] * modulus
        for n in range(modulus):
            if math.gcd(n, modulus) == 1:
                if n % modulus not in values:
                    raise ArithmeticError_(f"missing value at {n} mod {modulus}")
                tab[n] = values[n % modulus]
        chi = cls(modulus, tuple(tab))
        chi._check_multiplicative()
        return chi

    @classmethod
    def trivial(cls, modulus: int = 1) -> "DirichletCharacter":
        return cls.from_values(modulus, {n: ONE for n in range(modulus) if math.gcd(n, modulus) == 1})

    @classmethod
    def quadratic(cls, d: int) -> "DirichletCharacter":
        """The quadratic character attached to Q(sqrt d), via the Kronecker symbol."""
        d = squarefree_class(d)
        if d == 1:
            return cls.trivial()
        disc = d if d % 4 == 1 else 4 * d
        n = abs(disc)
        return cls.from_values(n, {k: gauss(kronecker(disc, k))
                                   for k in range(n) if math.gcd(k, n) == 1})

    def _check_multiplicative(self) -> None:
        n = self.modulus
        units = [k for k in range(n) if math.gcd(k, n) == 1]
        assert self.table[1 % n] == ONE if n > 1 else True
        for a in units:
            for b in units:
                assert self.table[a] * self.table[b] == self.table[a * b % n], \
                    f"table not multiplicative at ({a},{b}) mod {n}"

    def __call__(self, n: int) -> Gauss:
        if self.modulus == 1:
            return ONE
        if math.gcd(n, self.modulus) != 1:
            return gauss(0)
        return self.table[n % self.modulus]

    def value_at_minus1(self) -> int:
        v = self(-1)
        assert v in (ONE, MINUS_ONE)
        return 1 if v == ONE else -1

    def p_component_at_minus1(self, p: int) -> int:
        """chi_p(-1) for the p-part of chi in the CRT factorization of (Z/N)*."""
        n = self.modulus
        pk = 1
        while n % p == 0:
            n //= p
            pk *= p
        if pk == 1:
            return 1
        # residue that is -1 mod p^k and 1 mod the rest
        m = pk * n
        # CRT
        inv = pow(pk, -1, n) if n > 1 else 0
        x = (-1) % pk
        val = x + pk * ((1 - x) * inv % n) if n > 1 else x
        v = self(val % m)
        assert v in (ONE, MINUS_ONE)
        return 1 if v == ONE else -1

    def __mul__(self, other: "DirichletCharacter") -> "DirichletCharacter":
        n = math.lcm(self.modulus, other.modulus)
        return DirichletCharacter.from_values(
            n, {k: self(k) * other(k) for k in range(n) if math.gcd(k, n) == 1})

    def order(self) -> int:
        n = 1
        cur = self
        while not cur.is_trivial():
            cur = cur * self
            n += 1
            assert n <= 4 * self.modulus, "order computation ran away"
        return n

    def is_trivial(self) -> bool:
        return all(self.table[k] == ONE for k in range(self.modulus)
                   if math.gcd(k, self.modulus) == 1)


def epsilon8() -> DirichletCharacter:
    """Quadratic character of conductor 8 with eps(3) = eps(5) = -1 (i.e. (2|.))."""
    return DirichletCharacter.from_values(
        8, {1: ONE, 3: MINUS_ONE, 5: MINUS_ONE, 7: ONE})


def psi16() -> DirichletCharacter:
    """Order-4 character of conductor 16 with psi(3) = -i and psi(5) = i."""
    # (Z/16)* = <3> x <15>; psi(3) = -i, psi(15) = 1 determine the table
    vals: Dict[int, Gauss] = {}
    powers = {1: ONE, 3: MINUS_I, 9: MINUS_ONE, 11: I}  # 3^k mod 16
    for a, va in powers.items():
        vals[a] = va
        vals[a * 15 % 16] = va
    return DirichletCharacter.from_values(16, vals)
