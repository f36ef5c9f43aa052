"""Twisted group algebras Q^c[G] and their commutative decompositions.

G is always elementary abelian here, so a commutative Q^c[G] is a product of
copies of a single multiquadratic field: the one generated by the square
classes of the diagonal values at the group generators.  Fields are carried
as square-class spans, never as minimal polynomials, which makes equalities
like Q(sqrt -6, i) = Q(sqrt 6, sqrt -6) automatic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .arith import (
    ArithmeticError_,
    QuadElem,
    QuarticElem,
    SquareClassSpan,
    rational_sqrt,
    squarefree_class,
)
from .brauer import quaternion_class, splits_over_multiquadratic
from .cohomology import CocycleTable, MultiquadGroup


class AlgebraError(ArithmeticError_):
    pass


class InternalConsistencyError(AssertionError):
    """The theory guarantees something the computation contradicted."""


Vector = tuple[Fraction, ...]  # coordinates on the lambda basis, indexed by group bitmask


@dataclass(frozen=True)
class TwistedAlgebra:
    """Q^c[G] with basis symbols lambda_s and lambda_s lambda_t = c(s,t) lambda_st."""

    group: MultiquadGroup
    cocycle: CocycleTable

    def __post_init__(self) -> None:
        # associativity on all basis triples is exactly the cocycle identity,
        # which CocycleTable already enforces; assert once on the lambda side
        g = self.group.order
        for s in range(g):
            for t in range(g):
                for u in range(g):
                    lhs = self.cocycle(s, t) * self.cocycle(s ^ t, u)
                    rhs = self.cocycle(t, u) * self.cocycle(s, t ^ u)
                    if lhs != rhs:
                        raise AlgebraError(f"associativity fails at {(s, t, u)}")

    @property
    def dim(self) -> int:
        return self.group.order

    def zero(self) -> Vector:
        return (Fraction(0),) * self.dim

    def basis_vector(self, s: int) -> Vector:
        return tuple(Fraction(1 if t == s else 0) for t in range(self.dim))

    def one(self) -> Vector:
        return self.basis_vector(0)

    def add(self, x: Vector, y: Vector) -> Vector:
        return tuple(a + b for a, b in zip(x, y))

    def mul(self, x: Vector, y: Vector) -> Vector:
        out = [Fraction(0)] * self.dim
        for s in range(self.dim):
            if x[s] == 0:
                continue
            for t in range(self.dim):
                if y[t] == 0:
                    continue
                out[s ^ t] += x[s] * y[t] * self.cocycle(s, t)
        return tuple(out)

    def lambda_square(self, s: int) -> Fraction:
        return self.cocycle(s, s)

    def is_commutative(self) -> bool:
        return self.cocycle.is_symmetric()


def build_algebra(c: CocycleTable) -> TwistedAlgebra:
    return TwistedAlgebra(c.group, c)


def is_commutative(alg: TwistedAlgebra) -> bool:
    return alg.is_commutative()


@dataclass(frozen=True)
class EtaleFactor:
    """A multiquadratic field factor, as canonical span generators, with multiplicity."""

    generators: tuple[int, ...]
    multiplicity: int

    @property
    def field_degree(self) -> int:
        return 1 << len(self.generators)

    def describe(self) -> str:
        if not self.generators:
            return "Q"
        return "Q(" + ", ".join(f"sqrt({d})" for d in self.generators) + ")"

    def to_json(self) -> dict:
        return {"generators": list(self.generators), "multiplicity": self.multiplicity,
                "field_degree": self.field_degree}


def decompose_commutative(alg: TwistedAlgebra) -> list[EtaleFactor]:
    """Product-of-fields shape of a commutative Q^c[G].

    Q^c[G] = tensor of Q[x_i]/(x_i^2 - q_i) over the group generators with
    q_i = c(s_i, s_i); the simple factors are all the multiquadratic field of
    span{q_i}, with multiplicity 2^(n - dim span).
    """
    if not alg.is_commutative():
        raise AlgebraError("algebra is not commutative")
    n = alg.group.n
    qs = [squarefree_class(alg.lambda_square(1 << i)) for i in range(n)]
    span = SquareClassSpan([q for q in qs if q != 1])
    gens = span.canonical_basis()
    mult = 1 << (n - span.dim())
    factors = [EtaleFactor(gens, mult)]
    assert sum(f.multiplicity * f.field_degree for f in factors) == alg.dim
    return factors


def algebra_embeddings(alg: TwistedAlgebra):
    """The 2^n characters of a commutative Q^c[G] into its field factor.

    Each embedding sends lambda_{s_i} to a sign choice of sqrt(c(s_i, s_i))
    inside the multiquadratic span field; only spans of dimension <= 2 are
    representable with exact quartic elements.
    """
    if not alg.is_commutative():
        raise AlgebraError("characters need a commutative algebra")
    n = alg.group.n
    qs = [alg.lambda_square(1 << i) for i in range(n)]
    span = SquareClassSpan([squarefree_class(q) for q in qs if squarefree_class(q) != 1])
    gens = span.canonical_basis()
    if len(gens) > 2:
        raise AlgebraError("embeddings implemented for span dimension <= 2")

    def sqrt_in_field(q: Fraction):
        qsf = squarefree_class(q)
        scale = rational_sqrt(q / qsf)
        if qsf == 1:
            return _field_const(gens, scale)
        if len(gens) == 1:
            assert qsf == gens[0]
            return QuadElem.make(gens[0], 0, scale)
        return QuarticElem.from_quad(tuple(gens), QuadElem.make(qsf, 0, scale))

    base_roots = [sqrt_in_field(q) for q in qs]

    embeddings = []
    for signs in range(1 << n):
        gen_imgs = [base_roots[i] if not signs >> i & 1 else -base_roots[i] for i in range(n)]
        img = {0: _field_const(gens, Fraction(1))}
        for s in range(1, alg.dim):
            i = (s & -s).bit_length() - 1
            rest = s ^ (1 << i)
            img[s] = gen_imgs[i] * img[rest] * (Fraction(1) / alg.cocycle(1 << i, rest))

        def phi(x: Vector, img=img):
            out = _field_const(gens, Fraction(0))
            for s, coeff in enumerate(x):
                if coeff != 0:
                    out = out + img[s] * coeff
            return out

        embeddings.append(phi)
    return embeddings


def _field_const(gens: Sequence[int], x: Fraction):
    if not gens:
        return Fraction(x)
    if len(gens) == 1:
        return QuadElem.make(gens[0], x, 0)
    return QuarticElem.from_rational(tuple(gens), x)


@dataclass(frozen=True)
class FactorReport:
    factor: EtaleFactor
    splits: bool
    matrix_size: int

    def to_json(self) -> dict:
        out = self.factor.to_json()
        out.update({"splits": self.splits, "matrix_size": self.matrix_size})
        return out


def restriction_endomorphism_description(D: tuple, factors: Sequence[EtaleFactor],
                                         symmetric: bool = True) -> list[FactorReport]:
    """Per-factor shape of D tensor E_i for the restriction of scalars.

    D is a quaternion pair (a, b).  When the source cocycle is symmetric the
    theory forces every factor to split D (matrix algebra over E_i); a
    non-splitting factor then signals an internal inconsistency, not a result.
    """
    cls = quaternion_class(*D)
    size = 1 if cls.is_trivial else 2
    out = []
    for f in factors:
        splits = splits_over_multiquadratic(cls, f.generators)
        if symmetric and not splits:
            raise InternalConsistencyError(
                f"symmetric class but {f.describe()} does not split ({D[0]},{D[1]})_Q")
        out.append(FactorReport(f, splits, size if not cls.is_trivial else 1))
    return out


def isogeny_pattern(reports: Sequence[FactorReport]) -> str:
    """Human-readable shape of Res_{K/Q}(B) up to Q-isogeny, e.g. 'A_1^2 x A_2^2'."""
    parts = []
    idx = 1
    for rep in reports:
        for _ in range(rep.factor.multiplicity):
            t = rep.matrix_size
            parts.append(f"A_{idx}^{t}" if t > 1 else f"A_{idx}")
            idx += 1
    return " x ".join(parts)
