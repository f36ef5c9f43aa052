"""Newform coefficient data and exact Euler factors.

Coefficients are ingested from fixtures (never computed from modular
symbols); twisting by a Dirichlet character is exact, with values kept in the
smallest of Q, Q(sqrt 6) or Q(sqrt 6, i).  The Euler factor at p is the
product over the conjugates of a_p of 1 - a_p T + chi(p) p T^2, which always
has integer coefficients.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from typing import Mapping, Union

from .arith import ArithmeticError_, QuadElem, QuarticElem, rat_from_str
from .characters import DirichletCharacter, epsilon8, psi16

Coefficient = Union[Fraction, QuadElem, QuarticElem]


@dataclass(frozen=True)
class NewformData:
    label: str
    level: str
    level_value: int
    nebentypus: DirichletCharacter
    field_gens: tuple[int, ...]  # () rational, (m,) quadratic, (d1, d2) biquadratic
    ap: Mapping[int, Coefficient]
    provenance: Mapping[int, str]

    def conjugates(self, p: int) -> list[Coefficient]:
        a = self.ap_at(p)
        if isinstance(a, Fraction):
            return [a] * (1 << len(self.field_gens))
        if isinstance(a, QuadElem):
            return [a, a.conjugate()]
        return list(a.conjugates())

    def ap_at(self, p: int) -> Coefficient:
        if p not in self.ap:
            raise ArithmeticError_(f"a_{p} not in the fixture for {self.label}")
        return self.ap[p]

    def nebentypus_at(self, p: int) -> int:
        v = self.nebentypus(p)
        if v.is_zero():
            raise ArithmeticError_(f"p = {p} divides the level of {self.label}")
        assert v.b == 0 and v.a in (1, -1), "only quadratic nebentypus values are supported"
        return int(v.a)


def load_newform_g() -> NewformData:
    """The level 2^4 * 3^5 newform with coefficients in Q(sqrt 6)."""
    raw = json.loads(resources.files("qmkit.fixtures").joinpath("newform_g.json").read_text())
    m = int(raw["field"])
    ap = {int(p): QuadElem.make(m, rat_from_str(v["a"]), rat_from_str(v["b"]))
          for p, v in raw["ap"].items()}
    prov = {int(p): s for p, s in raw["provenance"].items()}
    return NewformData(raw["label"], raw["level"], int(raw["level_value"]),
                       DirichletCharacter.trivial(), (m,), ap, prov)


def twist_newform(nf: NewformData, chi: DirichletCharacter, label: str,
                  level: str, level_value: int) -> NewformData:
    """The twist f = nf x chi: a_p -> chi(p) a_p, nebentypus multiplied by chi^2."""
    if nf.field_gens != (6,):
        raise ArithmeticError_("twisting implemented for Q(sqrt 6) coefficients")
    new_ap: dict[int, Coefficient] = {}
    quartic_needed = any(chi(p).b != 0 for p in nf.ap)
    for p, a in nf.ap.items():
        v = chi(p)
        if v.is_zero():
            continue
        if not quartic_needed:
            new_ap[p] = a * v.a
        else:
            av = QuarticElem.from_quad((-1, 6), a)
            vv = QuarticElem.from_quad((-1, 6), v) if not v.is_rational \
                else QuarticElem.from_rational((-1, 6), v.a)
            new_ap[p] = av * vv
    neben = nf.nebentypus * (chi * chi)
    gens = (6,) if not quartic_needed else (-1, 6)
    prov = {p: f"{nf.provenance.get(p, 'fixture')}; twisted into {label}" for p in new_ap}
    return NewformData(label, level, level_value, neben, gens, new_ap, prov)


def newform_h() -> NewformData:
    """h = g x eps, eps the quadratic character of conductor 8."""
    return twist_newform(load_newform_g(), epsilon8(), "h", "2^6*3^5", 15552)


def newform_f() -> NewformData:
    """f = g x psi, psi of order 4 and conductor 16; coefficients in Q(sqrt 6, i)."""
    return twist_newform(load_newform_g(), psi16(), "f", "2^8*3^5", 62208)


def euler_factor(nf: NewformData, p: int) -> tuple[int, ...]:
    """Integer Euler factor of A_nf at p: product over conjugates of 1 - aT + chi(p) p T^2."""
    if nf.level_value % p == 0:
        raise ArithmeticError_(f"p = {p} divides the level")
    ramanujan_check(nf, p)
    chi_p = nf.nebentypus_at(p)
    conjs = nf.conjugates(p)
    deg = len(conjs)
    # polynomial product with coefficients in the coefficient field
    poly: list = [_one_like(conjs[0])]
    for a in conjs:
        factor = [_one_like(a), -a, _scalar_like(a, chi_p * p)]
        poly = _poly_mul_field(poly, factor)
    out = []
    for c in poly:
        r = _rational_part(c)
        assert r.denominator == 1, "Euler factor must have integer coefficients"
        out.append(int(r))
    assert len(out) == 2 * deg + 1
    return tuple(out)


def _one_like(a: Coefficient):
    if isinstance(a, Fraction):
        return Fraction(1)
    if isinstance(a, QuadElem):
        return QuadElem.make(a.m, 1, 0)
    return QuarticElem.from_rational(a.gens, 1)


def _scalar_like(a: Coefficient, c: int):
    if isinstance(a, Fraction):
        return Fraction(c)
    if isinstance(a, QuadElem):
        return QuadElem.make(a.m, c, 0)
    return QuarticElem.from_rational(a.gens, c)


def _poly_mul_field(a: list, b: list) -> list:
    out = [None] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            term = x * y
            out[i + j] = term if out[i + j] is None else out[i + j] + term
    return out


def _rational_part(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, QuadElem):
        assert x.b == 0, "nonrational coefficient in an Euler factor"
        return x.a
    assert x.is_rational(), "nonrational coefficient in an Euler factor"
    return x.rational_part()


def ramanujan_check(nf: NewformData, p: int) -> None:
    """Exact verification that every conjugate of a_p has absolute value <= 2 sqrt p."""
    a = nf.ap_at(p)
    if isinstance(a, Fraction):
        assert a * a <= 4 * p, f"Ramanujan bound fails at {p}"
        return
    if isinstance(a, QuadElem):
        x, y, m = a.a, a.b, a.m
        if m > 0:
            # (|x| + |y| sqrt m)^2 <= 4p, checked without radicals
            t = 4 * p - x * x - m * y * y
            assert t >= 0 and t * t >= 4 * m * x * x * y * y, f"Ramanujan bound fails at {p}"
        else:
            assert x * x + (-m) * y * y <= 4 * p, f"Ramanujan bound fails at {p}"
        return
    # quartic case with gens (-1, 6): |u + vi|^2 = u^2 + v^2 with u, v in Q(sqrt 6)
    assert a.gens == (-1, 6), "Ramanujan check shaped for Q(sqrt 6, i)"
    u = QuadElem.make(6, a.c[0], a.c[2])
    v = QuadElem.make(6, a.c[1], a.c[3])
    r = u * u + v * v  # totally positive requirement: 4p - r >= 0 at both embeddings
    s, t = 4 * p - r.a, -r.b
    assert s >= 0 and s * s >= 6 * t * t, f"Ramanujan bound fails at {p}"
