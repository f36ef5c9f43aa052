"""Explicit 2-cocycles on Galois groups of multiquadratic fields.

Everything is table-driven: groups are elementary abelian 2-groups given by
independent square classes, cocycles are full |G| x |G| tables of nonzero
rationals, and cohomological questions are settled by finite checks (the
coboundary search runs over all 2^|G| sign functions).  Classes of 2-torsion
split into a sign part, expressed in the fixed basis of eps- and cup-cocycles,
and a degree part, a homomorphism into Q*/{+-1}Q*^2 written as (t, d) pairs.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Sequence

from .arith import (
    ArithmeticError_,
    QuadElem,
    RatLike,
    SquareClassSpan,
    independent_mod_squares,
    is_rational_square,
    rational_sqrt,
    squarefree_class,
)
from .brauer import BrauerClass2, quaternion_class


class CohomologyError(ArithmeticError_):
    pass


class NotGalois(CohomologyError):
    """K(sqrt gamma)/Q fails to be Galois: some conjugate of gamma is not a square multiple."""


@dataclass(frozen=True)
class MultiquadGroup:
    """Gal(K/Q) for K = Q(sqrt d_1, ..., sqrt d_n), elements as flip bitmasks.

    Generator order is preserved as given (after squarefree reduction); bit i
    of an element means it sends sqrt(d_i) to -sqrt(d_i).
    """

    gens: tuple[int, ...]

    def __post_init__(self) -> None:
        reduced = tuple(squarefree_class(d) for d in self.gens)
        if any(d == 1 for d in reduced):
            raise CohomologyError("generator 1 is not allowed")
        if not independent_mod_squares(reduced):
            raise CohomologyError(f"generators {reduced} dependent mod squares")
        object.__setattr__(self, "gens", reduced)

    @property
    def n(self) -> int:
        return len(self.gens)

    @property
    def order(self) -> int:
        return 1 << self.n

    def elements(self) -> range:
        return range(self.order)

    def span(self) -> SquareClassSpan:
        return SquareClassSpan(self.gens)

    def emask(self, t: RatLike) -> int:
        """Bitmask e with t ~ prod gens[i]^e_i mod squares; error if t is outside."""
        target = squarefree_class(t)
        for mask in range(self.order):
            acc = 1
            for i in range(self.n):
                if mask >> i & 1:
                    acc *= self.gens[i]
            if squarefree_class(acc) == target:
                return mask
        raise CohomologyError(f"sqrt({target}) not in Q(sqrt{self.gens})")

    def flips(self, s: int, t: RatLike) -> bool:
        """Does the element s send sqrt(t) to -sqrt(t)?"""
        return bin(s & self.emask(t)).count("1") % 2 == 1

    def contains_sqrt(self, t: RatLike) -> bool:
        try:
            self.emask(t)
            return True
        except CohomologyError:
            return False

    def describe(self) -> str:
        return "Q(" + ", ".join(f"sqrt({d})" for d in self.gens) + ")"


@dataclass(frozen=True)
class CocycleTable:
    """Normalized 2-cocycle G x G -> Q* with trivial action, as a value table."""

    group: MultiquadGroup
    values: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self) -> None:
        g = self.group.order
        vals = tuple(tuple(Fraction(v) for v in row) for row in self.values)
        object.__setattr__(self, "values", vals)
        assert len(vals) == g and all(len(row) == g for row in vals)
        if any(v == 0 for row in vals for v in row):
            raise CohomologyError("cocycle values must be nonzero")
        for s in range(g):
            if vals[0][s] != 1 or vals[s][0] != 1:
                raise CohomologyError("cocycle not normalized")
        for s in range(g):
            for t in range(g):
                for u in range(g):
                    if vals[s][t] * vals[s ^ t][u] != vals[t][u] * vals[s][t ^ u]:
                        raise CohomologyError(f"cocycle identity fails at {(s, t, u)}")

    @classmethod
    def from_function(cls, group: MultiquadGroup, fn: Callable[[int, int], RatLike]) -> "CocycleTable":
        return cls(group, tuple(tuple(Fraction(fn(s, t)) for t in group.elements())
                                for s in group.elements()))

    def __call__(self, s: int, t: int) -> Fraction:
        return self.values[s][t]

    def __mul__(self, other: "CocycleTable") -> "CocycleTable":
        assert self.group == other.group
        return CocycleTable(self.group, tuple(
            tuple(a * b for a, b in zip(ra, rb)) for ra, rb in zip(self.values, other.values)))

    def __truediv__(self, other: "CocycleTable") -> "CocycleTable":
        assert self.group == other.group
        return CocycleTable(self.group, tuple(
            tuple(a / b for a, b in zip(ra, rb)) for ra, rb in zip(self.values, other.values)))

    def is_symmetric(self) -> bool:
        g = self.group.order
        return all(self.values[s][t] == self.values[t][s] for s in range(g) for t in range(g))

    def to_json(self) -> dict:
        from .arith import rat_to_str
        return {"generators": list(self.group.gens),
                "values": [[rat_to_str(v) for v in row] for row in self.values]}

    @classmethod
    def from_json(cls, data: dict) -> "CocycleTable":
        from .arith import rat_from_str
        group = MultiquadGroup(tuple(data["generators"]))
        return cls(group, tuple(tuple(rat_from_str(v) for v in row) for row in data["values"]))


def cup_cocycle(group: MultiquadGroup, a: RatLike, b: RatLike) -> CocycleTable:
    """c_{a,b}(s,t) = -1 iff s flips sqrt(a) and t flips sqrt(b)."""
    ea, eb = group.emask(a), group.emask(b)

    def fn(s: int, t: int) -> int:
        return -1 if (bin(s & ea).count("1") % 2 and bin(t & eb).count("1") % 2) else 1

    return CocycleTable.from_function(group, fn)


def char_sqrt_cocycle(group: MultiquadGroup, d: RatLike) -> CocycleTable:
    """c_{eps_d}(s,t) = -1 iff both s and t flip sqrt(d); always symmetric."""
    ed = group.emask(d)

    def fn(s: int, t: int) -> int:
        return -1 if (bin(s & ed).count("1") % 2 and bin(t & ed).count("1") % 2) else 1

    return CocycleTable.from_function(group, fn)


def degree_term_cocycle(group: MultiquadGroup, t: RatLike, d: RatLike) -> CocycleTable:
    """Canonical positive-valued cocycle with degree component (t, d)_P and trivial sign."""
    et = group.emask(t)
    dval = Fraction(abs(squarefree_class(d)))

    def fn(s: int, u: int) -> Fraction:
        return dval if (bin(s & et).count("1") % 2 and bin(u & et).count("1") % 2) else Fraction(1)

    return CocycleTable.from_function(group, fn)


def coboundary(group: MultiquadGroup, alpha: Sequence[RatLike]) -> CocycleTable:
    """d(alpha)(s,t) = alpha(s) alpha(t) / alpha(st); alpha must be 1 at the identity."""
    a = [Fraction(x) for x in alpha]
    if a[0] != 1:
        raise CohomologyError("alpha must be normalized at the identity")
    return CocycleTable.from_function(group, lambda s, t: a[s] * a[t] / a[s ^ t])


def trivial_cocycle(group: MultiquadGroup) -> CocycleTable:
    return CocycleTable.from_function(group, lambda s, t: 1)


# ---------------------------------------------------------------------------
# sign basis


def sign_basis_labels(group: MultiquadGroup) -> list[str]:
    labels = [f"c_eps({d})" for d in group.gens]
    labels += [f"c_cup({a},{b})" for a, b in itertools.combinations(group.gens, 2)]
    return labels


def sign_basis(group: MultiquadGroup) -> list[CocycleTable]:
    """Fixed basis of H^2(K/Q, {+-1}): eps of each generator, then cups of pairs."""
    tables = [char_sqrt_cocycle(group, d) for d in group.gens]
    tables += [cup_cocycle(group, a, b) for a, b in itertools.combinations(group.gens, 2)]
    return tables


def basis_combination(group: MultiquadGroup, coords: Sequence[int]) -> CocycleTable:
    tables = sign_basis(group)
    assert len(coords) == len(tables)
    out = trivial_cocycle(group)
    for bit, tab in zip(coords, tables):
        if bit:
            out = out * tab
    return out


def is_pm_coboundary(c: CocycleTable) -> bool:
    """Brute force over all 2^|G| sign functions alpha with alpha(1) = 1."""
    g = c.group.order
    if any(v not in (1, -1) for row in c.values for v in row):
        return False
    for mask in range(1 << (g - 1)):
        alpha = [1] + [(-1 if mask >> (s - 1) & 1 else 1) for s in range(1, g)]
        if all(c(s, t) == alpha[s] * alpha[t] * alpha[s ^ t]
               for s in range(g) for t in range(g)):
            return True
    return False


def sign_class_coordinates(c: CocycleTable) -> tuple[int, ...]:
    """Coordinates of a {+-1}-valued cocycle class in the fixed basis.

    The eps coordinates are read off the diagonal at the generators and the
    cup coordinates off the commutator pairing; the result is then verified
    by an explicit coboundary search.
    """
    group = c.group
    if any(v not in (1, -1) for row in c.values for v in row):
        raise CohomologyError("sign coordinates need a {+-1}-valued cocycle")
    gens_idx = [1 << i for i in range(group.n)]
    eps_coords = [1 if c(s, s) == -1 else 0 for s in gens_idx]
    cup_coords = [1 if c(si, sj) * c(sj, si) == -1 else 0
                  for si, sj in itertools.combinations(gens_idx, 2)]
    coords = tuple(eps_coords + cup_coords)
    residual = c / basis_combination(group, coords)
    if not is_pm_coboundary(residual):
        raise CohomologyError("cocycle not in the span of the sign basis")
    return coords


# ---------------------------------------------------------------------------
# degree maps


def _f2_solve(rows: list[int], rhs: list[int], width: int) -> Optional[list[int]]:
    """Solve x . row_j = rhs_j over F2 by exhaustion; widths here are tiny."""
    eqs = list(zip(rows, rhs))
    for cand in range(1 << width):
        if all(bin(cand & r).count("1") % 2 == b for r, b in eqs):
            return [cand >> i & 1 for i in range(width)]
    return None


@dataclass(frozen=True)
class DegreeMap:
    """Homomorphism G_Q -> Q*/{+-1}Q*^2 as canonical (t, d) pairs.

    (t, d)_P sends sigma to d when sigma flips sqrt(t) and to 1 otherwise;
    the stored form is evaluated on a kernel-adapted canonical basis so that
    equal morphisms have equal term lists.
    """

    terms: tuple[tuple[int, int], ...]

    @classmethod
    def of(cls, raw_terms: Sequence[tuple[RatLike, RatLike]]) -> "DegreeMap":
        pairs = []
        for t, d in raw_terms:
            t_ = squarefree_class(t)
            d_ = abs(squarefree_class(d))
            if t_ != 1 and d_ != 1:
                pairs.append((t_, d_))
        if not pairs:
            return cls(())
        span = SquareClassSpan([t for t, _ in pairs])
        basis = span.canonical_basis()
        r = len(basis)
        # value of the morphism on the dual basis of `basis`
        coords = [span.coordinates(t, basis) for t, _ in pairs]
        vals = []
        for i in range(r):
            v = 1
            for (t, d), e in zip(pairs, coords):
                if e[i]:
                    v *= d
            vals.append(abs(squarefree_class(v)))
        # kernel of the morphism in dual coordinates
        kernel = [x for x in range(1 << r)
                  if abs(squarefree_class(_masked_prod(vals, x))) == 1]
        # fixed field of the kernel: exponent vectors orthogonal to the kernel
        perp = [e for e in range(1 << r)
                if all(bin(e & w).count("1") % 2 == 0 for w in kernel)]
        kp_span = SquareClassSpan([_masked_prod(basis, e) for e in perp])
        kp_basis = kp_span.canonical_basis()
        # adapted basis of the full span: K_P directions first
        adapted = list(kp_basis)
        probe = SquareClassSpan(adapted)
        for b in basis:
            if probe.add(b):
                adapted.append(b)
        rows = [span.coordinates(a, basis) for a in adapted]
        row_masks = [sum(bit << i for i, bit in enumerate(rowe)) for rowe in rows]
        terms = []
        for j, c in enumerate(kp_basis):
            rhs = [1 if k == j else 0 for k in range(len(adapted))]
            x = _f2_solve(row_masks, rhs, r)
            assert x is not None, "adapted basis must be invertible"
            xmask = sum(bit << i for i, bit in enumerate(x))
            v = abs(squarefree_class(_masked_prod(vals, xmask)))
            assert v != 1, "kernel-adapted direction with trivial value"
            terms.append((c, v))
        terms.sort(key=lambda td: (abs(td[0]), td[0] < 0))
        return cls(tuple(terms))

    @property
    def is_trivial(self) -> bool:
        return not self.terms

    def __mul__(self, other: "DegreeMap") -> "DegreeMap":
        return DegreeMap.of(list(self.terms) + list(other.terms))

    def fixed_field_generators(self) -> tuple[int, ...]:
        """Generators of K_P, the field fixed by the kernel of the morphism."""
        return tuple(t for t, _ in self.terms)

    def evaluate(self, group: MultiquadGroup, s: int) -> int:
        """Unsigned squarefree value of the morphism at the group element s."""
        v = 1
        for t, d in self.terms:
            if group.flips(s, t):
                v *= d
        return abs(squarefree_class(v)) if v != 1 else 1

    def cocycle_on(self, group: MultiquadGroup) -> CocycleTable:
        out = trivial_cocycle(group)
        for t, d in self.terms:
            out = out * degree_term_cocycle(group, t, d)
        return out

    def to_json(self) -> list:
        return [[t, d] for t, d in self.terms]

    def __repr__(self) -> str:
        if not self.terms:
            return "DegreeMap[trivial]"
        return "*".join(f"({t},{d})_P" for t, d in self.terms)


def _masked_prod(values: Sequence[int], mask: int) -> int:
    out = 1
    for i, v in enumerate(values):
        if mask >> i & 1:
            out *= v
    return out


def degree_fixed_field(d: DegreeMap) -> tuple[int, ...]:
    return d.fixed_field_generators()


# ---------------------------------------------------------------------------
# sign/degree decomposition


@dataclass(frozen=True)
class SignDegreeClass:
    """2-torsion class split into sign and degree components.

    The sign may be known absolutely (a Brauer class), over a field K (basis
    coordinates), or both; when both are present they are consistent by
    construction (the Brauer part is the inflation of the coordinates).
    """

    degree: DegreeMap
    sign_brauer: Optional[BrauerClass2] = None
    sign_coords: Optional[tuple[int, ...]] = None
    group: Optional[MultiquadGroup] = None

    def to_json(self) -> dict:
        out: dict = {"degree": self.degree.to_json()}
        if self.sign_brauer is not None:
            out["sign_ramified"] = self.sign_brauer.to_json()
        if self.sign_coords is not None:
            out["sign_coords"] = list(self.sign_coords)
            out["sign_basis"] = sign_basis_labels(self.group)
        return out


def inflate_sign_to_brauer(group: MultiquadGroup, coords: Sequence[int]) -> BrauerClass2:
    """Inflation to G_Q: eps_d -> (d,-1)_Q and c_{a,b} -> (a,b)_Q, multiplied out."""
    labels = [(d, -1) for d in group.gens]
    labels += list(itertools.combinations(group.gens, 2))
    assert len(coords) == len(labels)
    out = BrauerClass2.trivial()
    for bit, (a, b) in zip(coords, labels):
        if bit:
            out = out * quaternion_class(a, b)
    return out


def class_decompose(c: CocycleTable) -> SignDegreeClass:
    """Split a 2-torsion class into (sign coordinates, degree map).

    The degree map is read off the diagonal; failure of the diagonal to be a
    homomorphism mod {+-1} squares means the class is not 2-torsion.  The
    sign part is the pointwise sign of the cocycle, matched against the basis.
    """
    group = c.group
    g = group.order
    phi = [abs(squarefree_class(c(s, s))) for s in range(g)]
    for s in range(g):
        for t in range(g):
            if abs(squarefree_class(phi[s] * phi[t] * phi[s ^ t])) != 1:
                raise CohomologyError("not 2-torsion: diagonal is not a homomorphism mod squares")
    degree = DegreeMap.of([(group.gens[i], phi[1 << i]) for i in range(group.n)])

    sign_table = CocycleTable.from_function(group, lambda s, t: 1 if c(s, t) > 0 else -1)
    coords = sign_class_coordinates(sign_table)

    # the positive residual must be a 2-torsion-trivial part: check its diagonal
    residual = c / (sign_table * degree.cocycle_on(group))
    for s in range(g):
        if not is_rational_square(abs(residual(s, s))):
            raise CohomologyError("not 2-torsion: residual diagonal is not square")

    return SignDegreeClass(degree=degree, sign_coords=coords, group=group,
                           sign_brauer=inflate_sign_to_brauer(group, coords))


def candidates_over_K(absolute_sign: BrauerClass2, group: MultiquadGroup) -> list[tuple[int, ...]]:
    """All sign coordinates over K whose inflation is the given absolute class.

    Empty result means K cannot carry the class (not a compatible field of
    complete definition).
    """
    nb = group.n + group.n * (group.n - 1) // 2
    out = []
    for combo in itertools.product((0, 1), repeat=nb):
        if inflate_sign_to_brauer(group, combo) == absolute_sign:
            out.append(combo)
    return sorted(out)


@dataclass(frozen=True)
class Verdict:
    verdict: str  # "yes", "no", or "conditional"
    symmetric: tuple[tuple[int, ...], ...]
    diagnostic: str = ""

    def to_json(self) -> dict:
        return {"verdict": self.verdict,
                "symmetric_candidates": [list(c) for c in self.symmetric],
                "diagnostic": self.diagnostic}


def strongly_modular_verdict(candidates: Sequence[tuple[int, ...]],
                             group: MultiquadGroup,
                             which: Optional[tuple[int, ...]] = None) -> Verdict:
    """Strong modularity from symmetry of the candidate sign classes.

    "yes" when every candidate is symmetric, "no" when none is (or there are
    no candidates at all), "conditional" when the candidates disagree and
    only L-factor evidence can pick the realized one.  Passing `which`
    restricts the verdict to that candidate.
    """
    if which is not None:
        candidates = [tuple(which)]
    if not candidates:
        return Verdict("no", (), "no class over K inflates to the absolute sign class")
    symmetric = tuple(c for c in candidates
                      if basis_combination(group, c).is_symmetric())
    if len(symmetric) == len(candidates):
        return Verdict("yes", symmetric)
    if not symmetric:
        return Verdict("no", (), "no candidate is symmetric")
    return Verdict("conditional", symmetric,
                   "some candidates are symmetric; point counts must decide")


# ---------------------------------------------------------------------------
# quadratic twist extension classes


def _find_square_decomposition(group: MultiquadGroup, x: QuadElem) -> Optional[tuple[int, QuadElem]]:
    """Write x = (prod_{i in e} d_i) * rho^2 with rho in Q(sqrt m), scanning evecs."""
    for e in range(group.order):
        denom = _masked_prod(group.gens, e)
        cand = x * Fraction(1, denom)
        rho = cand.sqrt()
        if rho is not None and not rho.is_zero():
            return e, rho
    return None


def twist_extension_class(group: MultiquadGroup, gamma: QuadElem | RatLike) -> tuple[int, ...]:
    """Extension class in H^2(K/Q, {+-1}) of the sequence for K(sqrt gamma)/Q.

    Checks that K(sqrt gamma)/Q is Galois (every conjugate of gamma differs
    from gamma by a square of K), builds delta_s with s(gamma) = gamma
    delta_s^2, and reduces c(s,t) = s(delta_t) delta_s / delta_st to basis
    coordinates.  This is the class by which quadratic twisting shifts the
    sign component; degree components are untouched.
    """
    nb = group.n + group.n * (group.n - 1) // 2
    if isinstance(gamma, (int, Fraction)):
        gamma = Fraction(gamma)
        if gamma == 0:
            raise CohomologyError("gamma must be nonzero")
        for e in range(group.order):
            if is_rational_square(gamma / _masked_prod(group.gens, e)):
                raise CohomologyError("gamma is a square in K")
        return (0,) * nb

    m = gamma.m
    if gamma.is_zero():
        raise CohomologyError("gamma must be nonzero")
    if not group.contains_sqrt(m):
        raise CohomologyError(f"gamma lives in Q(sqrt {m}), which is not inside K = {group.describe()}")
    if _find_square_decomposition(group, gamma) is not None:
        raise CohomologyError("gamma is a square in K")
    em = group.emask(m)

    def conj(x: QuadElem, s: int) -> QuadElem:
        return x.conjugate() if bin(s & em).count("1") % 2 else x

    evec: dict[int, int] = {}
    rho: dict[int, QuadElem] = {}
    for s in group.elements():
        xs = conj(gamma, s) / gamma
        dec = _find_square_decomposition(group, xs)
        if dec is None:
            raise NotGalois(f"{group.describe()}(sqrt gamma)/Q is not Galois: "
                            f"conjugate ratio at s={s} is not a square in K")
        evec[s], rho[s] = dec

    def rad_mul(e1: int, e2: int) -> tuple[int, Fraction]:
        # rad(e1) rad(e2) = rad(e1 xor e2) * prod_{i in e1 & e2} d_i
        return e1 ^ e2, Fraction(_masked_prod(group.gens, e1 & e2))

    def value(s: int, t: int) -> Fraction:
        # s(delta_t) * delta_s / delta_st with delta = rad(e) * rho
        sign = -1 if bin(s & evec[t]).count("1") % 2 else 1
        e1, c1 = rad_mul(evec[t], evec[s])
        e2, c2 = rad_mul(e1, evec[s ^ t])  # multiply by rad(e_st) then divide by its square
        coef = Fraction(sign) * c1 * c2 / _masked_prod(group.gens, evec[s ^ t])
        quad = conj(rho[t], s) * rho[s] / rho[s ^ t]
        if e2 == 0:
            total = quad * coef
        else:
            # leftover radical must collapse into Q(sqrt m)
            prod = _masked_prod(group.gens, e2)
            if squarefree_class(prod) != m:
                raise CohomologyError("radical bookkeeping escaped Q(sqrt m)")
            w = rational_sqrt(Fraction(prod, m))
            total = quad * QuadElem.make(m, 0, w) * coef
        assert total.is_rational, "cocycle value must be rational"
        v = total.a
        assert v * v == 1, f"twist cocycle value {v} is not a sign"
        return v

    table = CocycleTable.from_function(group, value)
    return sign_class_coordinates(table)
