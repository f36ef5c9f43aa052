"""The one-parameter family of QM abelian surfaces: models, classes, analysis.

Everything specific to the parameter j lives here: the genus-2 model over
Q(sqrt(-6j)), the moduli fields, the absolute sign/degree class, the strong
modularity analysis over a user-supplied multiquadratic field, and the
splitting-character order bounds with their prime searches.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .arith import (
    ArithmeticError_,
    QuadElem,
    RatLike,
    SquareClassSpan,
    is_prime,
    is_rational_square,
    rational_sqrt,
    squarefree_class,
)
from .algebra import (
    EtaleFactor,
    FactorReport,
    build_algebra,
    decompose_commutative,
    isogeny_pattern,
    restriction_endomorphism_description,
)
from .brauer import hilbert_symbol, quaternion_class
from .cohomology import (
    DegreeMap,
    MultiquadGroup,
    SignDegreeClass,
    Verdict,
    basis_combination,
    candidates_over_K,
    sign_basis_labels,
    strongly_modular_verdict,
)
from .lfactor import HyperellipticModel

QUATERNION_PAIR = (2, 3)  # the endomorphism algebra of the family, discriminant 6


class KTooSmall(ArithmeticError_):
    pass


@dataclass(frozen=True)
class JContext:
    """A rational parameter j with the standing assumption End = B_6.

    The full-QM assumption holds for all but 26 rational j; those exceptions
    are not enumerable from the sources, so the flag is user-asserted and
    defaults to true.
    """

    j: Fraction
    assert_full_QM: bool = True

    def __post_init__(self) -> None:
        object.__setattr__(self, "j", Fraction(self.j))
        if self.j == 0:
            raise ArithmeticError_("j = 0 is excluded")
        if self.n16 == 0:
            raise ArithmeticError_("27j + 16 = 0 is excluded")
        if is_rational_square(-6 * self.j):
            raise ArithmeticError_("-6j is a square: the quadratic layer degenerates")

    @property
    def n16(self) -> Fraction:
        return 27 * self.j + 16

    @property
    def m(self) -> int:
        """Square class of -6j, the base of the coefficient field."""
        return squarefree_class(-6 * self.j)


def curve_model(ctx: JContext) -> HyperellipticModel:
    """The genus-2 model with quaternionic multiplication attached to j.

    Coefficients live in Q(sqrt(-6j)).  Two readings are pinned down by the
    published local-factor tables together with the sigma-conjugation
    isomorphism x -> -2(27j+16)/x of the family: the ambiguous exponents of
    27j+16 are the 2nd, 2nd and 3rd powers, and the x^3 coefficient carries
    a minus sign.
    """
    m = ctx.m
    s = QuadElem.make(m, 0, rational_sqrt(-6 * ctx.j / m))  # sqrt(-6j)
    n = ctx.n16
    coeffs = [
        8 * n**3 * (s * 3 + 4),            # x^0
        QuadElem.make(m, -48 * n**3, 0),   # x^1
        12 * n**2 * (s * -9 + 28),         # x^2
        QuadElem.make(m, -16 * n**2, 0),   # x^3
        -6 * n * (s * 9 + 28),             # x^4
        QuadElem.make(m, -12 * n, 0),      # x^5
        s * 3 - 4,                         # x^6
    ]
    return HyperellipticModel.from_quad(m, coeffs)


@dataclass(frozen=True)
class ModuliFields:
    """Square-class generator sets of the moduli fields of (B_j, rings)."""

    k_Z: tuple[int, ...]
    k_R2: tuple[int, ...]
    k_R3: tuple[int, ...]
    k_R6: tuple[int, ...]
    k_O: tuple[int, ...]

    def to_json(self) -> dict:
        return {"k_Z": list(self.k_Z), "k_R2": list(self.k_R2), "k_R3": list(self.k_R3),
                "k_R6": list(self.k_R6), "k_O": list(self.k_O)}


def _gens_of(x: RatLike) -> tuple[int, ...]:
    s = squarefree_class(x)
    return () if s == 1 else (s,)


def moduli_fields(ctx: JContext) -> ModuliFields:
    j, n = ctx.j, ctx.n16
    k_r2 = _gens_of(-n)
    k_r6 = _gens_of(j)
    k_r3 = _gens_of(-j * n)
    k_o = SquareClassSpan(k_r2 + k_r6).canonical_basis()
    assert SquareClassSpan(k_r2 + k_r3 + k_r6) == SquareClassSpan(k_o)
    return ModuliFields((), k_r2, k_r3, k_r6, k_o)


def absolute_class(ctx: JContext) -> SignDegreeClass:
    """The absolute sign/degree class of B_j from the closed formulas."""
    if not ctx.assert_full_QM:
        raise ArithmeticError_("absolute class needs the full QM assumption")
    j, n = ctx.j, ctx.n16
    degree = DegreeMap.of([(-n, 3), (-j * n, 2)])
    sign = quaternion_class(-n, 3) * quaternion_class(-j * n, 2) * quaternion_class(2, 3)
    # K_P sits inside k_O: both degree characters are supported on moduli generators
    k_o_span = SquareClassSpan(moduli_fields(ctx).k_O)
    assert all(k_o_span.contains(t) for t in degree.fixed_field_generators())
    return SignDegreeClass(degree=degree, sign_brauer=sign)


@dataclass(frozen=True)
class CandidateReport:
    coords: tuple[int, ...]
    symmetric: bool
    factors: Optional[tuple[EtaleFactor, ...]]
    endo_reports: Optional[tuple[FactorReport, ...]]
    pattern: Optional[str]

    def to_json(self) -> dict:
        out: dict = {"coords": list(self.coords), "symmetric": self.symmetric}
        if self.factors is not None:
            out["decomposition"] = [r.to_json() for r in self.endo_reports]
            out["fields"] = [f.describe() for f in self.factors]
            out["isogeny_pattern"] = self.pattern
        return out


@dataclass(frozen=True)
class AnalyzeReport:
    ctx: JContext
    group: MultiquadGroup
    moduli: ModuliFields
    absolute: SignDegreeClass
    candidates: tuple[tuple[int, ...], ...]
    verdict: Verdict
    details: tuple[CandidateReport, ...]

    def to_json(self) -> dict:
        from .arith import rat_to_str
        return {
            "j": rat_to_str(self.ctx.j),
            "field": list(self.group.gens),
            "sign_basis": sign_basis_labels(self.group),
            "moduli_fields": self.moduli.to_json(),
            "K_P": list(self.absolute.degree.fixed_field_generators()),
            "absolute_class": self.absolute.to_json(),
            "candidates": [list(c) for c in self.candidates],
            "verdict": self.verdict.to_json(),
            "details": [d.to_json() for d in self.details],
        }


def analyze(ctx: JContext, group: MultiquadGroup) -> AnalyzeReport:
    """Strong-modularity analysis of B_j over K (given as a MultiquadGroup).

    K must contain the moduli field k_O and the coefficient field Q(sqrt -6j);
    the field is otherwise taken on trust as a field of complete definition.
    """
    span = SquareClassSpan(group.gens)
    moduli = moduli_fields(ctx)
    missing = [d for d in moduli.k_O if not span.contains(d)]
    if not span.contains(ctx.m):
        missing.append(ctx.m)
    if missing:
        raise KTooSmall(f"K too small: needs sqrt of {sorted(set(missing))}")

    absolute = absolute_class(ctx)
    cands = candidates_over_K(absolute.sign_brauer, group)
    verdict = strongly_modular_verdict(cands, group)

    details = []
    degree_cocycle = absolute.degree.cocycle_on(group)
    for coords in cands:
        table = degree_cocycle * basis_combination(group, coords)
        if table.is_symmetric():
            factors = decompose_commutative(build_algebra(table))
            reports = restriction_endomorphism_description(QUATERNION_PAIR, factors)
            details.append(CandidateReport(coords, True, tuple(factors), tuple(reports),
                                           "A ~ " + isogeny_pattern(reports)))
        else:
            details.append(CandidateReport(coords, False, None, None, None))
    return AnalyzeReport(ctx, group, moduli, absolute, tuple(cands), verdict, tuple(details))


# ---------------------------------------------------------------------------
# splitting character bounds


def _ord2(n: int) -> int:
    k = 0
    while n % 2 == 0:
        n //= 2
        k += 1
    return k


@dataclass(frozen=True)
class SplittingBound:
    p: int
    order_bound: int
    symbols: tuple[int, int, int]

    def to_json(self) -> dict:
        return {"p": self.p, "order_bound": self.order_bound,
                "local_symbols_at_p": list(self.symbols)}


def splitting_order_bound(p: int, r: int) -> SplittingBound:
    """Lower bound 2^ord2(p-1) for the order of any splitting character of B_{1/p}.

    Requires p = 1 mod 2^r and p = -1 mod 3; verifies the three local symbols
    whose product gives the sign class a -1 component at p.
    """
    if r < 2:
        raise ArithmeticError_("r must be at least 2")
    if not is_prime(p):
        raise ArithmeticError_(f"{p} is not prime")
    if p % (1 << r) != 1:
        raise ArithmeticError_(f"p != 1 mod 2^{r}")
    if p % 3 != 2:
        raise ArithmeticError_("p != -1 mod 3")
    a = Fraction(-(27 + 16 * p), p)  # -(27j+16) at j = 1/p
    symbols = (hilbert_symbol(a, 3, p),
               hilbert_symbol(-(27 + 16 * p), 2, p),
               hilbert_symbol(2, 3, p))
    assert symbols == (-1, 1, 1), f"local symbol triple {symbols} off the expected (-1, 1, 1)"
    return SplittingBound(p, 1 << _ord2(p - 1), symbols)


@dataclass(frozen=True)
class PrimeForOrder:
    r: int
    p: int
    splitting_field_degree: int
    gl2_dimension: int

    def to_json(self) -> dict:
        return {"r": self.r, "p": self.p,
                "splitting_field_degree_at_least": self.splitting_field_degree,
                "gl2_factor_dimension_at_least": self.gl2_dimension}


def find_prime_for_order(r: int) -> PrimeForOrder:
    """Least prime p = 1 mod 2^r and p = -1 mod 3, with the derived bounds.

    B_{1/p} then has splitting fields of degree >= 2^r, and any GL2-type
    variety with it as a simple factor has dimension >= 2^(r-1).
    """
    if r < 2:
        raise ArithmeticError_("r must be at least 2")
    step = 3 << r
    # CRT class: x = 1 mod 2^r, x = 2 mod 3
    x = next(x for x in range(1, step + 1) if x % (1 << r) == 1 and x % 3 == 2)
    p = x
    while not is_prime(p):
        p += step
    bound = splitting_order_bound(p, r)
    assert bound.order_bound >= 1 << r
    return PrimeForOrder(r, p, 1 << r, 1 << (r - 1))
