"""Finite fields F_{p^f} for f <= 4, plus reduction maps from quadratic fields.

Two element representations coexist: exact single elements are coefficient
tuples of Python ints (used for square roots, reduction maps, L-factor
bookkeeping), and bulk numpy blocks of shape (n, f) int64 (used by the
point-counting loop).  A relative quadratic extension type wraps any field to
provide the F_{q^2} enumeration needed for second point counts without ever
building a degree-8 absolute field.

p < 2^31 is enforced so products of residues fit comfortably in int64.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Optional, Sequence

import numpy as np

from .arith import ArithmeticError_, QuadElem, is_prime, legendre

EXHAUSTIVE_SQRT_BOUND = 10**4
_BULK_CHUNK = 1 << 18


class BadDenominator(ArithmeticError_):
    """A rational with denominator divisible by p cannot be reduced."""


Element = tuple[int, ...]


def _poly_trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mulmod(a: list[int], b: list[int], mod: list[int], p: int) -> list[int]:
    # mod is monic, given by its full coefficient list (low to high)
    res = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                res[i + j] = (res[i + j] + x * y) % p
    d = len(mod) - 1
    for k in range(len(res) - 1, d - 1, -1):
        c = res[k]
        if c:
            res[k] = 0
            for j in range(d):
                res[k - d + j] = (res[k - d + j] - c * mod[j]) % p
    return _poly_trim(res)


def _poly_powmod(a: list[int], e: int, mod: list[int], p: int) -> list[int]:
    result = [1]
    base = list(a)
    while e:
        if e & 1:
            result = _poly_mulmod(result, base, mod, p)
        base = _poly_mulmod(base, base, mod, p)
        e >>= 1
    return result


def _poly_gcd(a: list[int], b: list[int], p: int) -> list[int]:
    a, b = _poly_trim(list(a)), _poly_trim(list(b))
    while b:
        inv = pow(b[-1], -1, p)
        r = list(a)
        while len(r) >= len(b):
            c = r[-1] * inv % p
            shift = len(r) - len(b)
            for j, y in enumerate(b):
                r[shift + j] = (r[shift + j] - c * y) % p
            r.pop()  # leading coefficient cancelled exactly
            r = _poly_trim(r)
        a, b = b, r
    return a


def _is_irreducible(mod: list[int], p: int) -> bool:
    """Rabin test for the monic polynomial mod (full coefficient list)."""
    d = len(mod) - 1
    x = [0, 1]
    for r in {2, 3} & {r for r in (2, 3) if d % r == 0}:
        xp = _poly_powmod(x, p ** (d // r), mod, p)
        diff = _poly_trim([(a - b) % p for a, b in itertools.zip_longest(xp, x, fillvalue=0)])
        g = _poly_gcd(mod, diff, p) if diff else mod
        if len(_poly_trim(list(g))) - 1 != 0:
            return False
    xq = _poly_powmod(x, p**d, mod, p)
    diff = _poly_trim([(a - b) % p for a, b in itertools.zip_longest(xq, x, fillvalue=0)])
    return not diff


class FiniteField:
    """Absolute field F_{p^f} with a deterministic modulus.

    The modulus is the lexicographically least monic irreducible of degree f,
    coefficients compared from the top degree down.  Elements are length-f
    tuples (constant coefficient first).
    """

    def __init__(self, p: int, f: int) -> None:
        if not is_prime(p):
            raise ArithmeticError_(f"{p} is not prime")
        if p >= 2**31:
            raise ArithmeticError_("p must be < 2^31")
        if not 1 <= f <= 4:
            raise ArithmeticError_(f"extension degree {f} out of range 1..4")
        self.p = p
        self.f = f
        self.q = p**f
        self.modulus = self._least_irreducible(p, f)
        self._np_ready = False

    @staticmethod
    def _least_irreducible(p: int, f: int) -> tuple[int, ...]:
        if f == 1:
            return (0,)
        for v in range(p**f):
            low = tuple((v // p**k) % p for k in range(f))
            mod = list(low) + [1]
            if _is_irreducible(mod, p):
                return low
        raise AssertionError("no irreducible polynomial found")  # unreachable

    # -- exact element ops --------------------------------------------------

    @property
    def zero(self) -> Element:
        return (0,) * self.f

    @property
    def one(self) -> Element:
        return (1,) + (0,) * (self.f - 1)

    def from_int(self, n: int) -> Element:
        return (n % self.p,) + (0,) * (self.f - 1)

    def from_fraction(self, x: Fraction) -> Element:
        if x.denominator % self.p == 0:
            raise BadDenominator(f"denominator of {x} divisible by {self.p}")
        return self.from_int(x.numerator * pow(x.denominator, -1, self.p))

    def add(self, a: Element, b: Element) -> Element:
        return tuple((x + y) % self.p for x, y in zip(a, b))

    def sub(self, a: Element, b: Element) -> Element:
        return tuple((x - y) % self.p for x, y in zip(a, b))

    def neg(self, a: Element) -> Element:
        return tuple(-x % self.p for x in a)

    def mul(self, a: Element, b: Element) -> Element:
        if self.f == 1:
            return (a[0] * b[0] % self.p,)
        full = [0] * (2 * self.f - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    full[i + j] += x * y
        mod = list(self.modulus) + [1]
        for k in range(2 * self.f - 2, self.f - 1, -1):
            c = full[k] % self.p
            full[k] = 0
            if c:
                for j in range(self.f):
                    full[k - self.f + j] -= c * mod[j]
        return tuple(c % self.p for c in full[: self.f])

    def scalar_mul(self, c: int, a: Element) -> Element:
        return tuple(c * x % self.p for x in a)

    def pow(self, a: Element, e: int) -> Element:
        if e < 0:
            return self.pow(self.inverse(a), -e)
        result, base = self.one, a
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    def inverse(self, a: Element) -> Element:
        if a == self.zero:
            raise ZeroDivisionError("inverse of zero")
        return self.pow(a, self.q - 2)

    def frobenius(self, a: Element) -> Element:
        return self.pow(a, self.p)

    def norm(self, a: Element) -> int:
        acc, x = a, a
        for _ in range(self.f - 1):
            x = self.frobenius(x)
            acc = self.mul(acc, x)
        assert all(c == 0 for c in acc[1:]), "norm must land in the prime field"
        return acc[0]

    def chi(self, a: Element) -> int:
        """Quadratic character of F_q (0 at 0); requires odd characteristic."""
        if self.p == 2:
            raise ArithmeticError_("no quadratic character in characteristic 2")
        if a == self.zero:
            return 0
        return legendre(self.norm(a), self.p)

    def elements(self) -> Iterator[Element]:
        for v in range(self.q):
            yield tuple((v // self.p**k) % self.p for k in range(self.f))

    def element_index(self, a: Element) -> int:
        return sum(c * self.p**k for k, c in enumerate(a))

    def sqrt(self, a: Element) -> Optional[Element]:
        """Canonical square root (lexicographically least coefficient tuple), or None."""
        if a == self.zero:
            return self.zero
        if self.p == 2:
            return self.pow(a, self.q // 2)  # squaring is bijective
        if self.q <= EXHAUSTIVE_SQRT_BOUND:
            roots = [x for x in self.elements() if self.mul(x, x) == a]
            return min(roots) if roots else None
        return self._tonelli_shanks(a)

    def _tonelli_shanks(self, a: Element) -> Optional[Element]:
        if self.chi(a) != 1:
            return None
        q1, s = self.q - 1, 0
        while q1 % 2 == 0:
            q1 //= 2
            s += 1
        for z in self.elements():
            if z != self.zero and self.chi(z) == -1:
                break
        c = self.pow(z, q1)
        x = self.pow(a, (q1 + 1) // 2)
        t = self.pow(a, q1)
        m = s
        while t != self.one:
            t2, i = self.mul(t, t), 1
            while t2 != self.one:
                t2 = self.mul(t2, t2)
                i += 1
            b = self.pow(c, 1 << (m - i - 1))
            x = self.mul(x, b)
            c = self.mul(b, b)
            t = self.mul(t, c)
            m = i
        assert self.mul(x, x) == a
        return min(x, self.neg(x))

    # -- bulk numpy ops ------------------------------------------------------

    def _ensure_np(self) -> None:
        if self._np_ready:
            return
        p, f = self.p, self.f
        if f > 1:
            rows = []
            cur = [0] * f + [1]  # z^f
            for _ in range(f - 1):
                cur = _poly_trim(cur)
                red = _poly_mulmod(cur, [1], list(self.modulus) + [1], p)
                red = red + [0] * (f - len(red))
                rows.append(red)
                cur = [0] + cur  # multiply by z
            self._red = np.array(rows, dtype=np.int64)
        else:
            self._red = np.zeros((0, 1), dtype=np.int64)
        frobs = []
        mat = np.eye(f, dtype=np.int64)
        basis_frob = []
        for i in range(f):
            zi = [0] * i + [1]
            img = _poly_powmod(zi, p, list(self.modulus) + [1], p)
            img = img + [0] * (f - len(img))
            basis_frob.append(img)
        fr = np.array(basis_frob, dtype=np.int64)  # row i = frob(z^i)
        for _ in range(f - 1):
            mat = mat @ fr % p
            frobs.append(mat.copy())
        self._frob_powers = frobs
        if self.p != 2:
            table = np.full(p, -1, dtype=np.int8)
            sq = (np.arange(p, dtype=np.int64) ** 2) % p
            table[sq] = 1
            table[0] = 0
            self._leg = table
        self._np_ready = True

    @property
    def coord_count(self) -> int:
        return self.f

    def block_from_indices(self, idx: np.ndarray) -> np.ndarray:
        """Map element indices to an (n, f) coefficient block."""
        p, f = self.p, self.f
        out = np.empty((idx.shape[0], f), dtype=np.int64)
        v = idx.copy()
        for k in range(f):
            out[:, k] = v % p
            v //= p
        return out

    def bulk_mul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Product of element blocks; b may be a single element row for broadcasting."""
        self._ensure_np()
        p, f = self.p, self.f
        if f == 1:
            return a * b % p
        n = a.shape[0] if a.ndim == 2 else b.shape[0]
        full = np.zeros((n, 2 * f - 1), dtype=np.int64)
        av = a if a.ndim == 2 else a[None, :]
        bv = b if b.ndim == 2 else b[None, :]
        lazy = p <= 1 << 18  # raw accumulation stays far below int64 overflow
        for i in range(f):
            ai = av[:, i] if av.shape[0] > 1 else av[0, i]
            for j in range(f):
                bj = bv[:, j] if bv.shape[0] > 1 else bv[0, j]
                full[:, i + j] += ai * bj if lazy else ai * bj % p
        out = full[:, :f]
        if lazy:
            out = out + full[:, f:] @ self._red
            return out % p
        for j in range(f - 1):
            out = (out + (full[:, f + j] % p)[:, None] * self._red[j]) % p
        return out % p

    def bulk_norm(self, a: np.ndarray) -> np.ndarray:
        self._ensure_np()
        if self.f == 1:
            return a[:, 0]
        acc = a
        for mat in self._frob_powers:
            acc = self.bulk_mul(acc, a @ mat % self.p)
        return acc[:, 0]

    def bulk_chi(self, a: np.ndarray) -> np.ndarray:
        self._ensure_np()
        return self._leg[self.bulk_norm(a)]

    def np_element(self, a: Element) -> np.ndarray:
        return np.array(a, dtype=np.int64)

    def __repr__(self) -> str:
        return f"F_{self.p}^{self.f}"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, FiniteField) and (self.p, self.f) == (other.p, other.f)

    def __hash__(self) -> int:
        return hash((self.p, self.f))


@lru_cache(maxsize=None)
def build_field(p: int, f: int) -> FiniteField:
    """Deterministic F_{p^f}; cached so repeated reductions share tables."""
    return FiniteField(p, f)


class QuadraticExtension:
    """Relative extension F_{q^2} = base(sqrt ns) for a canonical nonsquare ns.

    Elements are pairs (u, v) of base elements.  Only the operations the
    point-counting loop needs are provided; the quadratic character comes from
    the relative norm, chi(u + v w) = chi_base(u^2 - ns v^2).
    """

    def __init__(self, base: FiniteField) -> None:
        if base.p == 2:
            raise ArithmeticError_("quadratic extension in characteristic 2 unsupported")
        self.base = base
        self.q = base.q**2
        self.p = base.p
        for z in base.elements():
            if z != base.zero and base.chi(z) == -1:
                self.ns = z
                break

    @property
    def zero(self) -> tuple[Element, Element]:
        return (self.base.zero, self.base.zero)

    def embed(self, a: Element) -> tuple[Element, Element]:
        return (a, self.base.zero)

    def add(self, a, b):
        return (self.base.add(a[0], b[0]), self.base.add(a[1], b[1]))

    def mul(self, a, b):
        base = self.base
        w = base.add(base.mul(a[0], b[0]), base.mul(self.ns, base.mul(a[1], b[1])))
        z = base.add(base.mul(a[0], b[1]), base.mul(a[1], b[0]))
        return (w, z)

    def chi(self, a) -> int:
        base = self.base
        w = base.sub(base.mul(a[0], a[0]), base.mul(self.ns, base.mul(a[1], a[1])))
        return base.chi(w)

    def elements(self):
        for u in self.base.elements():
            for v in self.base.elements():
                yield (u, v)

    @property
    def coord_count(self) -> int:
        return 2 * self.base.f

    def block_from_indices(self, idx: np.ndarray) -> np.ndarray:
        f = self.base.f
        out = np.empty((idx.shape[0], 2 * f), dtype=np.int64)
        v = idx.copy()
        for k in range(2 * f):
            out[:, k] = v % self.p
            v //= self.p
        return out

    def bulk_mul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        # Karatsuba: 3 base multiplications instead of 4
        f = self.base.f
        base = self.base
        a0, a1 = a[..., :f], a[..., f:]
        b0, b1 = b[..., :f], b[..., f:]
        ns = base.np_element(self.ns)
        t0 = base.bulk_mul(a0, b0)
        t1 = base.bulk_mul(a1, b1)
        mixed = base.bulk_mul((a0 + a1) % self.p, (b0 + b1) % self.p)
        w = (t0 + base.bulk_mul(t1, ns)) % self.p
        z = (mixed - t0 - t1) % self.p
        return np.concatenate([w, z], axis=-1)

    def bulk_chi(self, a: np.ndarray) -> np.ndarray:
        f = self.base.f
        base = self.base
        a0, a1 = a[..., :f], a[..., f:]
        ns = base.np_element(self.ns)
        w = (base.bulk_mul(a0, a0) - base.bulk_mul(base.bulk_mul(a1, a1), ns)) % self.p
        return base.bulk_chi(w)

    def np_element(self, a) -> np.ndarray:
        return np.array(tuple(a[0]) + tuple(a[1]), dtype=np.int64)

    def __repr__(self) -> str:
        return f"{self.base!r}(sqrt {self.ns})"


def char_poly_sum(field, coeffs: Sequence, threads: int = 1) -> int:
    """Sum of chi(F(x)) over all x in the field, F given by ascending coefficients.

    The x-loop is a chunked data-parallel reduction; integer partial sums make
    the result independent of the thread count.
    """
    np_coeffs = [field.np_element(c) for c in coeffs]

    def run(lo: int, hi: int) -> int:
        idx = np.arange(lo, hi, dtype=np.int64)
        x = field.block_from_indices(idx)
        acc = np.broadcast_to(np_coeffs[-1], x.shape).copy()
        for c in reversed(np_coeffs[:-1]):
            acc = field.bulk_mul(acc, x)
            acc = (acc + c) % field.p
        return int(field.bulk_chi(acc).sum())

    ranges = [(lo, min(lo + _BULK_CHUNK, field.q)) for lo in range(0, field.q, _BULK_CHUNK)]
    if threads <= 1 or len(ranges) == 1:
        return sum(run(lo, hi) for lo, hi in ranges)
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return sum(pool.map(lambda r: run(*r), ranges))


# ---------------------------------------------------------------------------
# reduction maps from quadratic fields


@dataclass(frozen=True)
class ReductionMap:
    """Ring map Q(sqrt m) -> F_q given by a chosen image of sqrt m."""

    source_m: int
    field: FiniteField
    image_of_sqrt_m: Element

    def __post_init__(self) -> None:
        img_sq = self.field.mul(self.image_of_sqrt_m, self.image_of_sqrt_m)
        if img_sq != self.field.from_int(self.source_m):
            raise ArithmeticError_("image of sqrt(m) does not square to m")

    def reduce_fraction(self, x: Fraction) -> Element:
        return self.field.from_fraction(Fraction(x))

    def reduce_quad(self, x: QuadElem) -> Element:
        if not x.is_rational and x.m != self.source_m:
            raise ArithmeticError_(f"element of Q(sqrt {x.m}) given to a Q(sqrt {self.source_m}) map")
        out = self.reduce_fraction(x.a)
        if x.b:
            out = self.field.add(out, self.field.mul(self.reduce_fraction(x.b), self.image_of_sqrt_m))
        return out


def reduction_maps(m: int, p: int, f: Optional[int] = None) -> list[ReductionMap]:
    """All reductions of Q(sqrt m) into F_{p^f}, ordered by the image of sqrt m.

    With f omitted, the residue degree is inferred (1 if m is a square mod p,
    else 2).  p must be odd and not divide m.
    """
    if p == 2 or m % p == 0:
        raise ArithmeticError_(f"prime {p} is ramified or even for m={m}")
    if f is None:
        f = 1 if legendre(m, p) == 1 else 2
    field = build_field(p, f)
    r = field.sqrt(field.from_int(m))
    if r is None:
        raise ArithmeticError_(f"sqrt({m}) does not exist in F_{p}^{f}")
    images = sorted({r, field.neg(r)})
    return [ReductionMap(m, field, img) for img in images]
