"""Point counting on genus-2 models and local L-factors over multiquadratic fields.

The per-prime factor comes from two point counts, #C(F_q) and #C(F_{q^2}),
through the Newton identities and the functional equation; the factor over p
is the product over primes of K above p with T raised to the residue degree.
Quadratic twists reuse the untwisted character sums: chi is multiplicative,
so twisting by gamma scales the affine sum by chi(gamma-bar) at level q and
not at all at level q^2 (base-field elements are squares in the extension).
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

from .arith import (
    ArithmeticError_,
    QuadElem,
    QuarticElem,
    RatLike,
    SquareClassSpan,
    factorize,
    legendre,
    rational_sqrt,
    squarefree_class,
)
from .finitefield import (
    Element,
    FiniteField,
    QuadraticExtension,
    build_field,
    char_poly_sum,
)


class BadReduction(ArithmeticError_):
    pass


class WeilViolation(AssertionError):
    """Counts inconsistent with the Weil bounds: a bug or a bad-reduction leak."""


def counting_threads() -> int:
    """Thread budget for the x-loop, capped by QMKIT_THREADS (default 1)."""
    try:
        return max(1, int(os.environ.get("QMKIT_THREADS", "1")))
    except ValueError:
        return 1


# ---------------------------------------------------------------------------
# models


Coord = tuple[Fraction, Fraction, Fraction, Fraction]


@dataclass(frozen=True)
class HyperellipticModel:
    """y^2 = F(x) with deg F in {5, 6}, coefficients in Q, Q(sqrt m) or a biquadratic field.

    Coefficients are stored uniformly as coordinate 4-vectors on the basis
    {1, sqrt(g1), sqrt(g2), sqrt(g1)sqrt(g2)} of the coefficient field; unused
    coordinates are zero for smaller fields.
    """

    gens: tuple[int, ...]
    coeffs: tuple[Coord, ...]  # ascending, length 7 (top entry zero for quintics)

    def __post_init__(self) -> None:
        assert len(self.coeffs) == 7
        assert len(self.gens) <= 2
        if self.degree is None:
            raise ArithmeticError_("model degree must be 5 or 6")

    @property
    def degree(self) -> Optional[int]:
        if any(c != 0 for c in self.coeffs[6]):
            return 6
        if any(c != 0 for c in self.coeffs[5]):
            return 5
        return None

    @classmethod
    def from_rational(cls, coeffs: Sequence[RatLike]) -> "HyperellipticModel":
        rows = [_coord(Fraction(c), 0, 0, 0) for c in _pad7(coeffs)]
        return cls((), tuple(rows))

    @classmethod
    def from_quad(cls, m: int, coeffs: Sequence[QuadElem | RatLike]) -> "HyperellipticModel":
        m = squarefree_class(m)
        rows = []
        for c in _pad7(coeffs):
            if isinstance(c, QuadElem):
                if not c.is_rational and c.m != m:
                    raise ArithmeticError_(f"coefficient in Q(sqrt {c.m}), model over Q(sqrt {m})")
                rows.append(_coord(c.a, c.b if not c.is_rational else 0, 0, 0))
            else:
                rows.append(_coord(Fraction(c), 0, 0, 0))
        return cls((m,), tuple(rows))

    @classmethod
    def from_quartic(cls, gens: tuple[int, int], coeffs: Sequence[QuarticElem]) -> "HyperellipticModel":
        rows = [tuple(c.c) for c in _pad7(coeffs, zero=QuarticElem.from_rational(gens, 0))]
        return cls(gens, tuple(rows))

    def coefficient_values(self) -> list:
        """Coefficients as Fractions / QuadElems / QuarticElems matching the field."""
        if not self.gens:
            return [c[0] for c in self.coeffs]
        if len(self.gens) == 1:
            return [QuadElem.make(self.gens[0], c[0], c[1]) for c in self.coeffs]
        return [QuarticElem(self.gens, c) for c in self.coeffs]

    def to_json(self) -> dict:
        from .arith import rat_to_str
        return {"field_generators": list(self.gens),
                "coefficients": [[rat_to_str(x) for x in row] for row in self.coeffs]}


def _coord(a, b, c, d) -> Coord:
    return (Fraction(a), Fraction(b), Fraction(c), Fraction(d))


def _pad7(coeffs, zero=Fraction(0)):
    out = list(coeffs)
    if len(out) > 7:
        raise ArithmeticError_("more than 7 coefficients")
    return out + [zero] * (7 - len(out))


def twist_model(model: HyperellipticModel, gamma: Union[QuadElem, RatLike]) -> HyperellipticModel:
    """The quadratic twist gamma y^2 = F(x), normalized to y^2 = gamma F(x)."""
    if isinstance(gamma, (int, Fraction)):
        gamma = Fraction(gamma)
        if gamma == 0:
            raise ArithmeticError_("twist by zero")
        rows = tuple(tuple(x * gamma for x in row) for row in model.coeffs)
        return HyperellipticModel(model.gens, rows)
    if gamma.is_zero():
        raise ArithmeticError_("twist by zero")
    if gamma.is_rational:
        return twist_model(model, gamma.a)
    span = SquareClassSpan(model.gens)
    span.add(gamma.m)
    basis = span.canonical_basis()
    if len(basis) > 2:
        raise ArithmeticError_("twisted coefficient field exceeds a biquadratic field")
    if len(basis) == 1:
        m = basis[0]
        coeffs = [_embed_quad(c, model.gens, m) for c in model.coefficient_values()]
        g = _as_quad(gamma, m)
        return HyperellipticModel.from_quad(m, [g * c for c in coeffs])
    pair = (basis[0], basis[1])
    coeffs = [_embed_quartic(c, pair) for c in model.coefficient_values()]
    g = _embed_quartic(gamma, pair)
    return HyperellipticModel.from_quartic(pair, [g * c for c in coeffs])


def _as_quad(x, m: int) -> QuadElem:
    if isinstance(x, QuadElem):
        if x.is_rational:
            return QuadElem.make(m, x.a, 0)
        assert x.m == m
        return x
    return QuadElem.make(m, Fraction(x), 0)


def _embed_quad(x, old_gens: tuple[int, ...], m: int) -> QuadElem:
    if isinstance(x, (int, Fraction)):
        return QuadElem.make(m, Fraction(x), 0)
    assert isinstance(x, QuadElem)
    if x.is_rational:
        return QuadElem.make(m, x.a, 0)
    if x.m == m:
        return x
    # x.m differs from m only by a square factor within a 1-dimensional span
    w = rational_sqrt(Fraction(x.m, m))
    return QuadElem.make(m, x.a, x.b * w)


def _embed_quartic(x, pair: tuple[int, int]) -> QuarticElem:
    if isinstance(x, (int, Fraction)):
        return QuarticElem.from_rational(pair, Fraction(x))
    if isinstance(x, QuadElem):
        return QuarticElem.from_quad(pair, x)
    assert isinstance(x, QuarticElem)
    if x.gens == pair:
        return x
    out = QuarticElem.from_rational(pair, x.c[0])
    radicals = [(x.gens[0], x.c[1]), (x.gens[1], x.c[2]), (squarefree_class(x.gens[0] * x.gens[1]), x.c[3])]
    for m, coeff in radicals:
        if coeff:
            out = out + QuarticElem.from_quad(pair, QuadElem.make(m, 0, coeff))
    return out


# ---------------------------------------------------------------------------
# primes of a multiquadratic field above p


@dataclass(frozen=True)
class PrimeAboveP:
    """A prime of K = Q(sqrt d_1, ..., sqrt d_n) over p, as a residue embedding.

    The embedding is pinned by the images of the sqrt(d_i) in F_{p^f}.
    """

    p: int
    f: int
    k_gens: tuple[int, ...]
    images: tuple[Element, ...]

    @property
    def field(self) -> FiniteField:
        return build_field(self.p, self.f)

    def image_of_sqrt(self, t: int) -> Element:
        """Image of sqrt(t) for squarefree t in the span of the K generators.

        sqrt(t) is pinned to the canonical product of generator radicals
        scaled by the exact rational square root left over, matching the
        embedding convention of QuarticElem.from_quad.
        """
        assert squarefree_class(t) == t
        span = SquareClassSpan(self.k_gens)
        if not span.contains(t):
            raise ArithmeticError_(f"sqrt({t}) is not in the field")
        coords = span.coordinates(t, self.k_gens)
        field = self.field
        prod = 1
        img = field.one
        for g, e, r in zip(self.k_gens, coords, self.images):
            if e:
                prod *= g
                img = field.mul(img, r)
        w = rational_sqrt(Fraction(t, prod))
        if w != 1:
            img = field.mul(img, field.from_fraction(w))
        return img

    def reduce_value(self, x) -> Element:
        """Reduce a Fraction / QuadElem / QuarticElem through this embedding."""
        field = self.field
        if isinstance(x, (int, Fraction)):
            return field.from_fraction(Fraction(x))
        if isinstance(x, QuadElem):
            out = field.from_fraction(x.a)
            if x.b:
                out = field.add(out, field.mul(field.from_fraction(x.b), self.image_of_sqrt(x.m)))
            return out
        assert isinstance(x, QuarticElem)
        r1 = self.image_of_sqrt(x.gens[0])
        r2 = self.image_of_sqrt(x.gens[1])
        basis = [field.one, r1, r2, field.mul(r1, r2)]
        out = field.zero
        for coeff, b in zip(x.c, basis):
            if coeff:
                out = field.add(out, field.mul(field.from_fraction(coeff), b))
        return out


def primes_above(k_gens: Sequence[int], p: int) -> list[PrimeAboveP]:
    """The primes of the multiquadratic field over an odd unramified p.

    Residue embeddings are grouped into Frobenius orbits (one per prime) and
    represented by the orbit's least sign vector against the canonical square
    roots; the list is sorted by that vector.
    """
    gens = tuple(squarefree_class(d) for d in k_gens)
    if p == 2 or any(d % p == 0 for d in gens):
        raise BadReduction(f"prime {p} is ramified in the field")
    legs = [legendre(d, p) for d in gens]
    f = 1 if all(v == 1 for v in legs) else 2
    field = build_field(p, f)
    roots = []
    for d in gens:
        r = field.sqrt(field.from_int(d))
        assert r is not None
        roots.append(r)
    flip_mask = sum(1 << i for i, v in enumerate(legs) if v == -1)
    n = len(gens)
    reps = sorted({min(eps, eps ^ flip_mask) for eps in range(1 << n)})
    out = []
    for eps in reps:
        images = tuple(field.neg(roots[i]) if eps >> i & 1 else roots[i] for i in range(n))
        out.append(PrimeAboveP(p, f, gens, images))
    return out


# ---------------------------------------------------------------------------
# reduced models and point counts


@dataclass(frozen=True)
class ReducedModel:
    """A good model over a finite field: separable F of degree 5 or 6."""

    field: FiniteField
    coeffs: tuple[Element, ...]  # ascending, trimmed to degree + 1 entries

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self) -> Element:
        return self.coeffs[-1]


def _poly_derivative(field: FiniteField, coeffs: Sequence[Element]) -> list[Element]:
    return [field.scalar_mul(i, c) for i, c in enumerate(coeffs)][1:]


def _poly_gcd_field(field: FiniteField, a: Sequence[Element], b: Sequence[Element]) -> list[Element]:
    def trim(v):
        v = list(v)
        while v and v[-1] == field.zero:
            v.pop()
        return v

    a, b = trim(a), trim(b)
    while b:
        inv = field.inverse(b[-1])
        r = list(a)
        while len(r) >= len(b):
            c = field.mul(r[-1], inv)
            shift = len(r) - len(b)
            for j, y in enumerate(b):
                r[shift + j] = field.sub(r[shift + j], field.mul(c, y))
            r.pop()
            r = trim(r)
        a, b = b, r
    return a


def _coord_valuation(c: Coord, p: int) -> Optional[int]:
    """min p-valuation over the nonzero coordinates; None for the zero coefficient.

    This is a lower bound for the true valuation at a prime above p (exact
    unless the coordinates cancel p-adically); it is only used to choose a
    rescaling, and residual cancellation is caught by the degeneration and
    separability checks afterwards.
    """
    vals = []
    for x in c:
        if x == 0:
            continue
        v = 0
        num, den = x.numerator, x.denominator
        while num % p == 0:
            num //= p
            v += 1
        while den % p == 0:
            den //= p
            v -= 1
        vals.append(v)
    return min(vals) if vals else None


def reduce_model(model: HyperellipticModel, prime: PrimeAboveP) -> ReducedModel:
    """Reduction mod the prime, normalizing the model first when needed.

    The substitutions x -> p^a x, y -> p^(3a+c) y rescale coefficient i by
    p^(a(i-6)-2c); the scan picks the first rescaling whose reduction has a
    separable sextic (or, when only the leading coefficient dies, the
    equivalent degree-5 model).  No good rescaling means bad reduction.
    """
    p = prime.p
    w = [_coord_valuation(c, p) for c in model.coeffs]
    if all(v is None for v in w):
        raise BadReduction("zero model")
    for a in (0, 1, -1, 2, -2, 3, -3):
        scaled = [v + a * (i - 6) for i, v in enumerate(w) if v is not None]
        lo = min(scaled)
        strip = lo - (lo % 2)  # largest even lower bound: legal y-rescaling
        reduced = _try_reduce_scaled(model, prime, a, strip)
        if reduced is not None:
            return reduced
    raise BadReduction(f"bad reduction at prime above {p}")


def _try_reduce_scaled(model: HyperellipticModel, prime: PrimeAboveP,
                       a: int, strip: int) -> Optional[ReducedModel]:
    field = prime.field
    p = prime.p
    red = []
    for i, c in enumerate(model.coefficient_values()):
        factor = Fraction(p) ** (a * (i - 6) - strip)
        val = c * factor if not isinstance(c, (int, Fraction)) else Fraction(c) * factor
        try:
            red.append(prime.reduce_value(val))
        except ArithmeticError_:
            return None
    if red[6] != field.zero:
        coeffs = tuple(red)
    elif red[5] != field.zero:
        coeffs = tuple(red[:6])
    else:
        return None
    g = _poly_gcd_field(field, coeffs, _poly_derivative(field, coeffs))
    if len(g) > 1:
        return None
    return ReducedModel(field, coeffs)


def count_points(model: ReducedModel, twist: Optional[Element] = None,
                 threads: Optional[int] = None) -> int:
    """#C(F_q) for the smooth model of (twist) y^2 = F(x).

    Infinity contributes 1 + chi(lc) points for sextics and 1 for quintics;
    the affine part is q plus the character sum of F, scaled by chi(twist).
    """
    field = model.field
    if field.p in (2,):
        raise ArithmeticError_("point counting needs odd characteristic")
    threads = counting_threads() if threads is None else threads
    s = _char_sum_cached(field, model.coeffs, threads)
    tw = 1
    lc = model.leading
    if twist is not None:
        if twist == field.zero:
            raise BadReduction("twist reduces to zero")
        tw = field.chi(twist)
        lc = field.mul(lc, twist)
    n_inf = (1 + field.chi(lc)) if model.degree == 6 else 1
    return field.q + tw * s + n_inf


def count_points_ext(model: ReducedModel, twist: Optional[Element] = None,
                     threads: Optional[int] = None) -> int:
    """#C(F_{q^2}) via the relative quadratic extension of the residue field.

    Base-field elements are squares in F_{q^2}, so a twist changes nothing
    except that it must stay nonzero.
    """
    field = model.field
    threads = counting_threads() if threads is None else threads
    if twist is not None and twist == field.zero:
        raise BadReduction("twist reduces to zero")
    s = _ext_char_sum_cached(field, model.coeffs, threads)
    n_inf = 2 if model.degree == 6 else 1  # chi_ext(lc) = +1 for lc in the base field
    return field.q**2 + s + n_inf


_char_sums: dict = {}


def _char_sum_cached(field: FiniteField, coeffs: tuple, threads: int) -> int:
    key = ("base", field.p, field.f, coeffs)
    if key not in _char_sums:
        _char_sums[key] = char_poly_sum(field, list(coeffs), threads)
    return _char_sums[key]


def _ext_char_sum_cached(field: FiniteField, coeffs: tuple, threads: int) -> int:
    key = ("ext", field.p, field.f, coeffs)
    if key not in _char_sums:
        ext = QuadraticExtension(field)
        _char_sums[key] = char_poly_sum(ext, [ext.embed(c) for c in coeffs], threads)
    return _char_sums[key]


def count_points_naive(model: ReducedModel, twist: Optional[Element] = None) -> int:
    """Independent O(q^2) oracle: enumerate all (x, y) pairs plus infinity."""
    field = model.field
    sq: dict[Element, int] = {}
    for y in field.elements():
        sq[field.mul(y, y)] = sq.get(field.mul(y, y), 0) + 1
    total = 0
    for x in field.elements():
        acc = field.zero
        for c in reversed(model.coeffs):
            acc = field.add(field.mul(acc, x), c)
        if twist is not None:
            acc = field.mul(acc, twist)
        total += sq.get(acc, 0)
    if model.degree == 6:
        lc = model.leading if twist is None else field.mul(model.leading, twist)
        total += sq.get(lc, 0)
    else:
        total += 1
    return total


# ---------------------------------------------------------------------------
# quartic L-factors


def quartic_from_counts(q: int, n1: int, n2: int) -> tuple[int, int, int, int, int]:
    """Degree-4 Weil numerator from #C(F_q), #C(F_{q^2}); asserts the Weil bounds."""
    s1 = q + 1 - n1
    s2 = q * q + 1 - n2
    if (s1 * s1 - s2) % 2:
        raise WeilViolation(f"non-integral middle coefficient from counts {(n1, n2)}")
    c1 = -s1
    c2 = (s1 * s1 - s2) // 2
    if c1 * c1 > 16 * q or abs(c2) > 6 * q:
        raise WeilViolation(f"Weil bounds violated: c1={c1}, c2={c2}, q={q}")
    return (1, c1, c2, q * c1, q * q)


def quartic_lfactor(model: ReducedModel, twist: Optional[Element] = None,
                    threads: Optional[int] = None) -> tuple[int, int, int, int, int]:
    n1 = count_points(model, twist, threads)
    n2 = count_points_ext(model, twist, threads)
    return quartic_from_counts(model.field.q, n1, n2)


def poly_mul(a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return tuple(out)


def poly_subst_power(coeffs: Sequence[int], f: int) -> tuple[int, ...]:
    out = [0] * ((len(coeffs) - 1) * f + 1)
    for i, c in enumerate(coeffs):
        out[i * f] = c
    return tuple(out)


def _sqrt_of_square_quartic(q: Sequence[int]) -> Optional[tuple[int, int, int]]:
    """(1, a, b) with (1 + aT + bT^2)^2 equal to the quartic, if it exists."""
    one, c1, c2, c3, c4 = q
    assert one == 1
    if c1 % 2:
        return None
    a = c1 // 2
    b = (c2 - a * a) // 2 if (c2 - a * a) % 2 == 0 else None
    if b is None:
        return None
    cand = (1, a, b)
    return cand if poly_mul(cand, cand) == tuple(q) else None


def _int_sqrt(n: int) -> Optional[int]:
    if n < 0:
        return None
    r = math.isqrt(n)
    return r if r * r == n else None


def display_factors(quartic: Sequence[int], f: int, p: int) -> list[tuple[tuple[int, ...], int]]:
    """Factor a per-prime quartic (in U = T^f) the way the published tables do.

    Perfect-square quartics are shown as the square of their quadratic part;
    a quadratic 1 + aU + p^2 U^2 at residue degree 2 splits further into
    (1 - bT + pT^2)(1 + bT + pT^2) exactly when b^2 = 2p - a is a square.
    """
    sq = _sqrt_of_square_quartic(quartic)
    if sq is None:
        return [(poly_subst_power(quartic, f), 1)]
    one, a, b = sq
    if f == 2 and b == p * p:
        root = _int_sqrt(2 * p - a)
        if root is not None and root != 0:
            return [((1, -root, p), 2), ((1, root, p), 2)]
        if root == 0:
            return [((1, 0, p), 4)]
    return [(poly_subst_power(sq, f), 2)]


def render_poly(coeffs: Sequence[int], var: str = "T") -> str:
    parts = []
    for i, c in enumerate(coeffs):
        if c == 0:
            continue
        if i == 0:
            parts.append(str(c))
            continue
        mag = abs(c)
        term = f"{var}" if i == 1 else f"{var}^{i}"
        if mag != 1:
            term = f"{mag}{term}"
        parts.append(("+ " if c > 0 else "- ") + term)
    return " ".join(parts) if parts else "0"


@dataclass(frozen=True)
class LocalFactor:
    """L_p as a product of integer polynomials in T with multiplicities."""

    p: int
    factors: tuple[tuple[tuple[int, ...], int], ...]

    @classmethod
    def from_parts(cls, p: int, parts: Sequence[tuple[Sequence[int], int]]) -> "LocalFactor":
        counts: dict[tuple[int, ...], int] = {}
        for poly, mult in parts:
            key = tuple(poly)
            counts[key] = counts.get(key, 0) + mult
        factors = tuple(sorted(counts.items()))
        return cls(p, factors)

    def expanded(self) -> tuple[int, ...]:
        out: tuple[int, ...] = (1,)
        for poly, mult in self.factors:
            for _ in range(mult):
                out = poly_mul(out, poly)
        return out

    @property
    def degree(self) -> int:
        return len(self.expanded()) - 1

    def describe(self) -> str:
        pieces = []
        for poly, mult in self.factors:
            body = f"({render_poly(poly)})"
            pieces.append(body + (f"^{mult}" if mult > 1 else ""))
        return "".join(pieces)

    def to_json(self) -> dict:
        return {"p": self.p,
                "factors": [{"coeffs": list(poly), "multiplicity": mult}
                            for poly, mult in self.factors],
                "pretty": self.describe()}


def _strip_square_part(twist: Union[QuadElem, Fraction]) -> Union[QuadElem, Fraction]:
    """Divide a twist by the square part of its rational content (same twist class)."""
    if isinstance(twist, Fraction):
        if twist == 0:
            raise ArithmeticError_("twist by zero")
        return Fraction(squarefree_class(twist))
    lcd = twist.a.denominator * twist.b.denominator
    x = twist * (lcd * lcd)
    g = math.gcd(x.a.numerator, x.b.numerator)
    s = 1
    if g > 1:
        for q, e in factorize(g).items():
            s *= q ** (e // 2)
    return x * Fraction(1, s * s)


def lfactor_over_K(model: HyperellipticModel, k_gens: Sequence[int], p: int,
                   twist: Optional[Union[QuadElem, RatLike]] = None,
                   threads: Optional[int] = None) -> LocalFactor:
    """L_p(B/K, T) = product over primes of K above p of L_prime(T^f).

    p must be odd, coprime to 6, unramified in K, and of good reduction for
    the (possibly twisted) model.
    """
    if p in (2, 3):
        raise BadReduction("p = 2, 3 are excluded")
    span = SquareClassSpan(k_gens)
    for g in model.gens:
        if not span.contains(g):
            raise ArithmeticError_("model coefficient field is not inside K")
    if twist is not None and not isinstance(twist, QuarticElem):
        twist = _strip_square_part(twist if isinstance(twist, QuadElem) else Fraction(twist))
    parts = []
    for prime in primes_above(k_gens, p):
        reduced = reduce_model(model, prime)
        tw = None
        if twist is not None:
            tw = prime.reduce_value(twist)
        quartic = quartic_lfactor(reduced, tw, threads)
        parts.extend(display_factors(quartic, prime.f, p))
    out = LocalFactor.from_parts(p, parts)
    assert out.degree == 4 * (1 << len(tuple(k_gens))), "degree bookkeeping failed"
    return out


# ---------------------------------------------------------------------------
# table comparison


@dataclass(frozen=True)
class TableDiff:
    rows: tuple[dict, ...]
    passed: bool

    def to_json(self) -> dict:
        return {"passed": self.passed, "rows": list(self.rows)}


def expected_from_fixture(entries: Sequence[dict], p: int) -> tuple[int, ...]:
    out: tuple[int, ...] = (1,)
    for e in entries:
        if int(e["p"]) != p:
            continue
        for _ in range(int(e.get("multiplicity", 1))):
            out = poly_mul(out, [int(c) for c in e["coeffs"]])
    return out


def compare_tables(computed: dict[int, LocalFactor], fixture: Sequence[dict]) -> TableDiff:
    """Exact per-prime comparison of computed factors against a fixture table."""
    primes = sorted({int(e["p"]) for e in fixture})
    rows = []
    ok = True
    for p in primes:
        expected = expected_from_fixture(fixture, p)
        got = computed.get(p)
        if got is None:
            rows.append({"p": p, "match": False, "reason": "missing computed factor"})
            ok = False
            continue
        match = got.expanded() == expected
        row = {"p": p, "match": match, "computed": got.describe()}
        if not match:
            row["expected_coeffs"] = list(expected)
            row["computed_coeffs"] = list(got.expanded())
            ok = False
        rows.append(row)
    return TableDiff(tuple(rows), ok)
