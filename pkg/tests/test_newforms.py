import pytest

from qmkit.arith import ArithmeticError_, QuadElem
from qmkit.lfactor import poly_mul
from qmkit.newforms import (
    NewformData,
    euler_factor,
    load_newform_g,
    newform_f,
    newform_h,
    ramanujan_check,
    twist_newform,
)

G = load_newform_g()
H = newform_h()
F = newform_f()

ALL_PRIMES = (5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)

# the paper's third table: per-newform Euler factors at each listed prime
AG_TABLE = {
    5: (1, 0, 4, 0, 25), 7: poly_mul((1, 2, 7), (1, 2, 7)), 11: (1, 0, 16, 0, 121),
    13: poly_mul((1, 1, 13), (1, 1, 13)), 17: (1, 0, -20, 0, 289),
    19: poly_mul((1, -1, 19), (1, -1, 19)), 23: (1, 0, 40, 0, 529),
    29: (1, 0, 34, 0, 841), 31: poly_mul((1, -1, 31), (1, -1, 31)),
    37: poly_mul((1, -8, 37), (1, -8, 37)), 41: (1, 0, 58, 0, 1681),
}
AH_TABLE = {
    5: (1, 0, 4, 0, 25), 7: poly_mul((1, 2, 7), (1, 2, 7)), 11: (1, 0, 16, 0, 121),
    13: poly_mul((1, -1, 13), (1, -1, 13)), 17: (1, 0, -20, 0, 289),
    19: poly_mul((1, 1, 19), (1, 1, 19)), 23: (1, 0, 40, 0, 529),
    29: (1, 0, 34, 0, 841), 31: poly_mul((1, -1, 31), (1, -1, 31)),
    37: poly_mul((1, 8, 37), (1, 8, 37)), 41: (1, 0, 58, 0, 1681),
}


def test_fixture_shape():
    assert G.field_gens == (6,)
    assert set(G.ap) == set(ALL_PRIMES)
    assert all(p in G.provenance for p in ALL_PRIMES)
    assert G.nebentypus.is_trivial()


def test_g_euler_factors_match_table():
    for p in ALL_PRIMES:
        assert euler_factor(G, p) == AG_TABLE[p], p


def test_h_euler_factors_match_table():
    assert H.field_gens == (6,)
    assert H.nebentypus.is_trivial()
    for p in ALL_PRIMES:
        assert euler_factor(H, p) == AH_TABLE[p], p


def test_f_is_quartic_with_eps_nebentypus():
    assert F.field_gens == (-1, 6)
    from qmkit.characters import epsilon8
    eps = epsilon8()
    for p in ALL_PRIMES:
        assert F.nebentypus(p) == eps(p)
    # degree 8 factors
    for p in ALL_PRIMES:
        assert len(euler_factor(F, p)) == 9


def test_f_euler_factor_examples():
    assert euler_factor(F, 5) == poly_mul((1, 0, -4, 0, 25), (1, 0, -4, 0, 25))
    assert euler_factor(F, 7) == _pow((1, -2, 7), 4)
    assert euler_factor(F, 13) == poly_mul((1, 0, -25, 0, 169), (1, 0, -25, 0, 169))


def _pow(c, k):
    out = (1,)
    for _ in range(k):
        out = poly_mul(out, c)
    return out


def test_ramanujan_bounds():
    for nf in (G, H, F):
        for p in ALL_PRIMES:
            ramanujan_check(nf, p)
    bad = NewformData("bad", "5", 5, G.nebentypus, (6,),
                      {7: QuadElem.make(6, 0, 3)}, {})  # |3 sqrt6| > 2 sqrt7
    with pytest.raises(AssertionError):
        ramanujan_check(bad, 7)


def test_euler_factor_rejects_level_primes():
    with pytest.raises(ArithmeticError_):
        euler_factor(G, 2)
    with pytest.raises(ArithmeticError_):
        euler_factor(G, 3)
    with pytest.raises(ArithmeticError_):
        euler_factor(G, 43)  # not in the fixture


def test_twist_by_trivial_is_identity():
    from qmkit.characters import DirichletCharacter
    tw = twist_newform(G, DirichletCharacter.trivial(8), "g8", G.level, G.level_value)
    for p in (5, 7, 11):
        assert euler_factor(tw, p) == euler_factor(G, p)
