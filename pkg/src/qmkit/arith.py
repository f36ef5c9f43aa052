"""Exact arithmetic substrate.

Rationals are `fractions.Fraction` throughout (aliased as `Rat`); this module
adds the number-theoretic layer on top: squarefree classes, Legendre/Jacobi
symbols, deterministic primality, and elements of quadratic and biquadratic
fields with exact coordinates.  Everything here is immutable value data and
safe to share across threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

Rat = Fraction
RatLike = Union[int, Fraction]

TRIAL_DIVISION_BOUND = 10**6

# Deterministic Miller-Rabin witness set, valid for all n < 3.3 * 10^24.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


class ArithmeticError_(ValueError):
    """Bad input to an exact-arithmetic operation (zero where nonzero needed, etc.)."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_rho(n: int) -> int:
    # Brent's cycle variant; n must be odd composite, not a prime power issue here.
    if n % 2 == 0:
        return 2
    seed = 1
    while True:
        seed += 1
        y, c, m = seed, seed + 1, 128
        g = r = q = 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g


def factorize(n: int) -> dict[int, int]:
    """Prime factorization of |n| as {prime: exponent}; sign is dropped."""
    n = abs(n)
    if n == 0:
        raise ArithmeticError_("cannot factor zero")
    out: dict[int, int] = {}
    for p in (2, 3, 5):
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    # wheel mod 30
    incs = (4, 2, 4, 2, 4, 6, 2, 6)
    p, i = 7, 0
    while p * p <= n and p < TRIAL_DIVISION_BOUND:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += incs[i]
        i = (i + 1) % 8
    if n == 1:
        return out
    stack = [n]
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if is_prime(m):
            out[m] = out.get(m, 0) + 1
            continue
        root = math.isqrt(m)
        if root * root == m:
            stack.extend((root, root))
            continue
        d = _pollard_rho(m)
        stack.extend((d, m // d))
    return out


def squarefree_class(x: RatLike) -> int:
    """Squarefree integer s (sign kept) with x/s a rational square."""
    x = Fraction(x)
    if x == 0:
        raise ArithmeticError_("zero has no square class")
    # numerator and denominator are coprime, so the squarefree part of the
    # quotient is the squarefree part of their product
    n = abs(x.numerator) * x.denominator
    s = 1
    for p, e in factorize(n).items():
        if e % 2:
            s *= p
    return s if x > 0 else -s


def is_rational_square(x: RatLike) -> bool:
    x = Fraction(x)
    if x < 0:
        return False
    if x == 0:
        return True
    rn = math.isqrt(x.numerator)
    rd = math.isqrt(x.denominator)
    return rn * rn == x.numerator and rd * rd == x.denominator


def rational_sqrt(x: RatLike) -> Fraction:
    """Exact nonnegative square root; raises if x is not a rational square."""
    x = Fraction(x)
    if not is_rational_square(x):
        raise ArithmeticError_(f"{x} is not a rational square")
    return Fraction(math.isqrt(x.numerator), math.isqrt(x.denominator))


def legendre(a: int, p: int) -> int:
    """Quadratic residue symbol (a|p) in {-1, 0, +1} for an odd prime p."""
    if p <= 2 or not is_prime(p):
        raise ArithmeticError_(f"{p} is not an odd prime")
    a %= p
    if a == 0:
        return 0
    r = pow(a, (p - 1) // 2, p)
    return 1 if r == 1 else -1


def jacobi(a: int, n: int) -> int:
    """Jacobi symbol (a|n) for odd positive n."""
    if n <= 0 or n % 2 == 0:
        raise ArithmeticError_("jacobi symbol needs odd positive n")
    a %= n
    t = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                t = -t
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            t = -t
        a %= n
    return t if n == 1 else 0


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a|n), extending Jacobi to all integers n."""
    if n == 0:
        return 1 if a in (1, -1) else 0
    t = 1
    if n < 0:
        n = -n
        if a < 0:
            t = -t
    e = 0
    while n % 2 == 0:
        n //= 2
        e += 1
    if e:
        if a % 2 == 0:
            return 0
        if e % 2 and a % 8 in (3, 5):
            t = -t
    return t * jacobi(a, n)


def rat_to_str(x: RatLike) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}" if x.denominator != 1 else str(x.numerator)


def rat_from_str(s: str) -> Fraction:
    return Fraction(s.strip())


# ---------------------------------------------------------------------------
# square classes


@dataclass(frozen=True, order=True)
class SquareClass:
    """An element of Q*/Q*^2, stored as its squarefree representative (sign kept)."""

    r: int

    def __post_init__(self) -> None:
        if self.r == 0:
            raise ArithmeticError_("zero is not a square class")
        if squarefree_class(self.r) != self.r:
            raise ArithmeticError_(f"{self.r} is not squarefree")

    @classmethod
    def of(cls, x: RatLike) -> "SquareClass":
        return cls(squarefree_class(x))

    @property
    def is_trivial(self) -> bool:
        return self.r == 1

    def unsigned(self) -> int:
        """Representative of the image in Q*/{±1}Q*^2."""
        return abs(self.r)

    def __mul__(self, other: "SquareClass") -> "SquareClass":
        return SquareClass(squarefree_class(self.r * other.r))

    def __repr__(self) -> str:
        return f"SquareClass({self.r})"


# ---------------------------------------------------------------------------
# F2 linear algebra on square classes (used for multiquadratic spans)


class SquareClassSpan:
    """F2-span of squarefree integers inside Q*/Q*^2, kept in echelon form.

    The echelon structure is over the ordered "prime" basis (-1, 2, 3, 5, ...)
    of exponent vectors; this gives every span a unique canonical basis, which
    is how equality of multiquadratic fields is decided.
    """

    def __init__(self, gens: Sequence[int] = ()) -> None:
        self._rows: list[int] = []  # squarefree ints, echelon by leading prime
        for g in gens:
            self.add(g)

    @staticmethod
    def _leading(v: int) -> Optional[int]:
        # position of the first nonzero coordinate: -1 sorts before the primes
        if v == 1:
            return None
        if v < 0:
            return -1
        return min(factorize(v))

    def add(self, x: RatLike) -> bool:
        """Reduce x into the span; returns True if it enlarged the span."""
        v = self.reduce(x)
        if v == 1:
            return False
        rows = self._rows + [v]
        rows.sort(key=lambda r: (self._leading(r) is None, self._leading(r)))
        self._rows = rows
        return True

    def reduce(self, x: RatLike) -> int:
        """Canonical representative of x modulo the span (1 iff contained)."""
        v = squarefree_class(x)
        for row in self._rows:
            lead = self._leading(row)
            if lead == -1 and v < 0:
                v = squarefree_class(v * row)
            elif lead is not None and lead != -1 and v % lead == 0:
                v = squarefree_class(v * row)
        return v

    def contains(self, x: RatLike) -> bool:
        return self.reduce(x) == 1

    def coordinates(self, x: RatLike, gens: Sequence[int]) -> Optional[tuple[int, ...]]:
        """Exponent vector e over F2 with x ~ prod gens[i]^e[i] mod squares."""
        target = squarefree_class(x)
        n = len(gens)
        for mask in range(1 << n):
            acc = 1
            for i in range(n):
                if mask >> i & 1:
                    acc *= gens[i]
            if squarefree_class(acc) == target:
                return tuple(mask >> i & 1 for i in range(n))
        return None

    def basis(self) -> tuple[int, ...]:
        return tuple(self._rows)

    def dim(self) -> int:
        return len(self._rows)

    def elements(self) -> frozenset[int]:
        """All subset products of the basis, as squarefree representatives."""
        out = {1}
        for row in self._rows:
            out |= {squarefree_class(row * x) for x in out}
        return frozenset(out)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, SquareClassSpan) and self.elements() == other.elements()

    def canonical_basis(self) -> tuple[int, ...]:
        """Deterministic basis: greedy over span elements sorted by (|d|, sign)."""
        basis: list[int] = []
        probe = SquareClassSpan()
        for x in sorted(self.elements() - {1}, key=lambda r: (abs(r), r < 0)):
            if probe.add(x):
                basis.append(x)
        return tuple(basis)

    def __repr__(self) -> str:
        return f"SquareClassSpan{self.basis()}"


def independent_mod_squares(gens: Sequence[int]) -> bool:
    """True iff no nonempty subproduct of gens is a rational square."""
    span = SquareClassSpan()
    return all(span.add(g) for g in gens)


# ---------------------------------------------------------------------------
# quadratic field elements


@dataclass(frozen=True)
class QuadElem:
    """a + b*sqrt(m) with m squarefree (the field Q(sqrt m))."""

    m: int
    a: Fraction
    b: Fraction

    def __post_init__(self) -> None:
        if self.m == 1 or squarefree_class(self.m) != self.m:
            raise ArithmeticError_(f"base {self.m} must be squarefree and != 1")
        object.__setattr__(self, "a", Fraction(self.a))
        object.__setattr__(self, "b", Fraction(self.b))

    @classmethod
    def make(cls, m: int, a: RatLike = 0, b: RatLike = 0) -> "QuadElem":
        return cls(m, Fraction(a), Fraction(b))

    @property
    def is_rational(self) -> bool:
        return self.b == 0

    def _align(self, other: "QuadElem | RatLike") -> tuple["QuadElem", "QuadElem"]:
        if not isinstance(other, QuadElem):
            return self, QuadElem(self.m, Fraction(other), Fraction(0))
        if self.m == other.m:
            return self, other
        if other.is_rational:
            return self, QuadElem(self.m, other.a, Fraction(0))
        if self.is_rational:
            return QuadElem(other.m, self.a, Fraction(0)), other
        raise ArithmeticError_(f"mixed bases {self.m} and {other.m}")

    def __add__(self, other: "QuadElem | RatLike") -> "QuadElem":
        x, y = self._align(other)
        return QuadElem(x.m, x.a + y.a, x.b + y.b)

    def __sub__(self, other: "QuadElem | RatLike") -> "QuadElem":
        x, y = self._align(other)
        return QuadElem(x.m, x.a - y.a, x.b - y.b)

    def __neg__(self) -> "QuadElem":
        return QuadElem(self.m, -self.a, -self.b)

    def __mul__(self, other: "QuadElem | RatLike") -> "QuadElem":
        x, y = self._align(other)
        return QuadElem(x.m, x.a * y.a + x.m * x.b * y.b, x.a * y.b + x.b * y.a)

    __rmul__ = __mul__

    def inverse(self) -> "QuadElem":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("zero or degenerate quadratic element")
        return QuadElem(self.m, self.a / n, -self.b / n)

    def __truediv__(self, other: "QuadElem | RatLike") -> "QuadElem":
        x, y = self._align(other)
        return x * y.inverse()

    def conjugate(self) -> "QuadElem":
        return QuadElem(self.m, self.a, -self.b)

    def norm(self) -> Fraction:
        return self.a * self.a - self.m * self.b * self.b

    def trace(self) -> Fraction:
        return 2 * self.a

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            return self.b == 0 and self.a == other
        if not isinstance(other, QuadElem):
            return NotImplemented
        if self.b == 0 and other.b == 0:
            return self.a == other.a
        return self.m == other.m and self.a == other.a and self.b == other.b

    def __hash__(self) -> int:
        if self.b == 0:
            return hash(self.a)
        return hash((self.m, self.a, self.b))

    def sqrt(self) -> Optional["QuadElem"]:
        """A square root inside the same field Q(sqrt m), if one exists."""
        if self.is_zero():
            return QuadElem(self.m, Fraction(0), Fraction(0))
        if self.b == 0:
            if is_rational_square(self.a):
                return QuadElem(self.m, rational_sqrt(self.a), Fraction(0))
            if is_rational_square(self.a / self.m):
                return QuadElem(self.m, Fraction(0), rational_sqrt(self.a / self.m))
            return None
        # (u + v sqrt m)^2 = a + b sqrt m  =>  u^2 = (a ± sqrt(a^2 - m b^2))/2, v = b/(2u)
        n = self.norm()
        if not is_rational_square(n):
            return None
        w = rational_sqrt(n)
        for cand in ((self.a + w) / 2, (self.a - w) / 2):
            if cand != 0 and is_rational_square(cand):
                u = rational_sqrt(cand)
                return QuadElem(self.m, u, self.b / (2 * u))
        return None

    def to_json(self) -> dict:
        return {"m": self.m, "a": rat_to_str(self.a), "b": rat_to_str(self.b)}

    @classmethod
    def from_json(cls, d: dict) -> "QuadElem":
        return cls(int(d["m"]), rat_from_str(d["a"]), rat_from_str(d["b"]))

    def __repr__(self) -> str:
        if self.b == 0:
            return rat_to_str(self.a)
        return f"{rat_to_str(self.a)}+{rat_to_str(self.b)}*sqrt({self.m})"


# ---------------------------------------------------------------------------
# biquadratic (quartic) field elements


def _canonical_gen_order(d1: int, d2: int) -> bool:
    """True if (d1, d2) is already in canonical order: by |d|, positive first on ties."""
    return (abs(d1), d1 < 0) < (abs(d2), d2 < 0)


@dataclass(frozen=True)
class QuarticElem:
    """Element of Q(sqrt d1, sqrt d2) on the basis {1, sqrt d1, sqrt d2, sqrt d1*sqrt d2}.

    Generators are canonically ordered (|d| increasing, positive before
    negative on ties); serialization always uses this basis order.
    """

    gens: tuple[int, int]
    c: tuple[Fraction, Fraction, Fraction, Fraction]

    def __post_init__(self) -> None:
        d1, d2 = self.gens
        if not independent_mod_squares([d1, d2]):
            raise ArithmeticError_(f"generators {self.gens} not independent mod squares")
        if not _canonical_gen_order(d1, d2):
            raise ArithmeticError_(f"generators {self.gens} not in canonical order")
        object.__setattr__(self, "c", tuple(Fraction(x) for x in self.c))

    @classmethod
    def build(cls, gens: Sequence[int], coords: Sequence[RatLike]) -> "QuarticElem":
        d1, d2 = squarefree_class(gens[0]), squarefree_class(gens[1])
        c = [Fraction(x) for x in coords]
        if not _canonical_gen_order(d1, d2):
            d1, d2 = d2, d1
            c = [c[0], c[2], c[1], c[3]]
        return cls((d1, d2), tuple(c))

    @classmethod
    def from_rational(cls, gens: tuple[int, int], x: RatLike) -> "QuarticElem":
        return cls.build(gens, [Fraction(x), 0, 0, 0])

    @classmethod
    def from_quad(cls, gens: tuple[int, int], x: QuadElem) -> "QuarticElem":
        """Embed a + b*sqrt(m); m must lie in the span of the generators.

        The embedding sends sqrt(m) to the canonical product of basis radicals
        scaled by the exact rational square root left over.
        """
        if x.is_rational:
            return cls.from_rational(gens, x.a)
        span = SquareClassSpan(gens)
        coords = span.coordinates(x.m, gens)
        if coords is None or not span.contains(x.m):
            raise ArithmeticError_(f"sqrt({x.m}) does not lie in Q(sqrt{gens[0]}, sqrt{gens[1]})")
        e1, e2 = coords
        prod = (gens[0] ** e1) * (gens[1] ** e2)
        # sqrt(m) := sqrt(d1)^e1 * sqrt(d2)^e2 * w  with  w = sqrt(m/prod) exact
        w = rational_sqrt(Fraction(x.m, prod))
        idx = e1 + 2 * e2
        c = [Fraction(0)] * 4
        c[0] = x.a
        c[idx] = x.b * w
        return cls.build(gens, c)

    def _mul_basis(self, e: int, f: int) -> tuple[Fraction, int]:
        # basis index is the bitmask e over (sqrt d1, sqrt d2)
        scale = Fraction(1)
        if e & f & 1:
            scale *= self.gens[0]
        if e & f & 2:
            scale *= self.gens[1]
        return scale, e ^ f

    def __add__(self, other: "QuarticElem") -> "QuarticElem":
        assert self.gens == other.gens
        return QuarticElem(self.gens, tuple(x + y for x, y in zip(self.c, other.c)))

    def __sub__(self, other: "QuarticElem") -> "QuarticElem":
        assert self.gens == other.gens
        return QuarticElem(self.gens, tuple(x - y for x, y in zip(self.c, other.c)))

    def __neg__(self) -> "QuarticElem":
        return QuarticElem(self.gens, tuple(-x for x in self.c))

    def __mul__(self, other: "QuarticElem | RatLike") -> "QuarticElem":
        if isinstance(other, (int, Fraction)):
            return QuarticElem(self.gens, tuple(x * other for x in self.c))
        assert self.gens == other.gens
        out = [Fraction(0)] * 4
        for e in range(4):
            if self.c[e] == 0:
                continue
            for f in range(4):
                if other.c[f] == 0:
                    continue
                scale, idx = self._mul_basis(e, f)
                out[idx] += scale * self.c[e] * other.c[f]
        return QuarticElem(self.gens, tuple(out))

    __rmul__ = __mul__

    def conjugate(self, flip: int) -> "QuarticElem":
        """Apply the automorphism flipping sqrt(d_i) for the bits set in `flip`."""
        out = list(self.c)
        for e in range(4):
            if bin(e & flip).count("1") % 2:
                out[e] = -out[e]
        return QuarticElem(self.gens, tuple(out))

    def conjugates(self) -> tuple["QuarticElem", ...]:
        """Orbit under the four automorphisms, in order (id, flip d1, flip d2, both)."""
        return tuple(self.conjugate(flip) for flip in range(4))

    def norm(self) -> Fraction:
        prod = self
        for flip in (1, 2, 3):
            prod = prod * self.conjugate(flip)
        assert prod.c[1] == prod.c[2] == prod.c[3] == 0, "norm must be rational"
        return prod.c[0]

    def is_zero(self) -> bool:
        return all(x == 0 for x in self.c)

    def rational_part(self) -> Fraction:
        return self.c[0]

    def is_rational(self) -> bool:
        return self.c[1] == self.c[2] == self.c[3] == 0

    def inverse(self) -> "QuarticElem":
        adj = QuarticElem.from_rational(self.gens, 1)
        for flip in (1, 2, 3):
            adj = adj * self.conjugate(flip)
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("non-invertible quartic element")
        return adj * (Fraction(1) / n)

    def to_json(self) -> dict:
        return {"gens": list(self.gens), "coords": [rat_to_str(x) for x in self.c]}

    def __repr__(self) -> str:
        names = ["1", f"sqrt({self.gens[0]})", f"sqrt({self.gens[1]})",
                 f"sqrt({self.gens[0]})*sqrt({self.gens[1]})"]
        parts = [f"{rat_to_str(x)}*{n}" for x, n in zip(self.c, names) if x != 0]
        return " + ".join(parts) if parts else "0"


def quartic_conjugates(x: QuarticElem) -> tuple[QuarticElem, ...]:
    return x.conjugates()
