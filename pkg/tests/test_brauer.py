import random
from fractions import Fraction

import pytest

from qmkit.arith import ArithmeticError_
from qmkit.brauer import (
    INFINITY,
    BrauerClass2,
    character_obstruction_class,
    hilbert_symbol,
    local_square_class_degree,
    quaternion_class,
    splits_over_multiquadratic,
)
from qmkit.characters import DirichletCharacter, epsilon8, psi16


def norm_search_oracle(a: int, b: int, p: int, bound: int = 60) -> int:
    """Crude local-symbol oracle: search z^2 = a x^2 + b y^2 mod p^3 with a unit coordinate."""
    mod = p**3
    for x in range(bound):
        for y in range(bound):
            for z in range(bound):
                if (x % p or y % p or z % p) and (a * x * x + b * y * y - z * z) % mod == 0:
                    return 1
    return -1


def test_hilbert_examples():
    for b in (2, 3, -5, Fraction(7, 3)):
        for v in (2, 3, 5, INFINITY):
            assert hilbert_symbol(1, b, v) == 1
    assert hilbert_symbol(2, 3, 3) == -1
    # paper's lemma instance at p=17: (-(27+16*17)/17, 3)_17 = -1
    assert hilbert_symbol(Fraction(-299, 17), 3, 17) == -1
    with pytest.raises(ArithmeticError_):
        hilbert_symbol(0, 1, 2)


def test_hilbert_against_norm_search():
    rng = random.Random(61)
    for _ in range(30):
        p = rng.choice([3, 5, 7, 11, 13])
        a = rng.choice([-1, 2, 3, 5, -2, -3, 6, -6, p, -p, 2 * p])
        b = rng.choice([-1, 2, 3, 5, -2, -3, 6, -6, p, 3 * p])
        got = hilbert_symbol(a, b, p)
        want = norm_search_oracle(a, b, p)
        assert got == want, (a, b, p)


def test_product_formula_randomized():
    rng = random.Random(67)
    for _ in range(250):
        a = Fraction(rng.randint(1, 400) * rng.choice([1, -1]), rng.randint(1, 60))
        b = Fraction(rng.randint(1, 400) * rng.choice([1, -1]), rng.randint(1, 60))
        cls = quaternion_class(a, b)
        assert len(cls.ramified) % 2 == 0
        # product over all relevant places is +1 exactly when the -1 count is even


def test_quaternion_class_examples():
    assert quaternion_class(2, 3).places() == [2, 3]  # the discriminant-6 algebra
    assert quaternion_class(-6, -3).places() == [2, INFINITY]
    assert quaternion_class(-6, -1).places() == [3, INFINITY]
    assert quaternion_class(-3, -1).places() == [3, INFINITY]
    assert (quaternion_class(-6, -1) * quaternion_class(-3, -1)).is_trivial


def test_quaternion_bilinearity_and_norm_relations():
    rng = random.Random(71)
    for _ in range(250):
        a = Fraction(rng.randint(1, 100) * rng.choice([1, -1]), rng.randint(1, 10))
        b1 = Fraction(rng.randint(1, 100) * rng.choice([1, -1]), rng.randint(1, 10))
        b2 = Fraction(rng.randint(1, 100) * rng.choice([1, -1]), rng.randint(1, 10))
        assert quaternion_class(a, b1 * b2) == quaternion_class(a, b1) * quaternion_class(a, b2)
        assert quaternion_class(a, -a).is_trivial
        if a != 1:
            assert quaternion_class(a, 1 - a).is_trivial


def test_character_obstruction_examples():
    assert character_obstruction_class(DirichletCharacter.trivial()).is_trivial
    chi3 = DirichletCharacter.quadratic(-3)
    assert character_obstruction_class(chi3).places() == [3, INFINITY]
    assert character_obstruction_class(chi3) == quaternion_class(-3, -1)
    # psi has conductor 16 and psi(-1) = 1, so the class is empty
    assert character_obstruction_class(psi16()).is_trivial


def test_character_obstruction_matches_quaternion():
    for d in (-6, -3, -1, 2, 3):
        chi = DirichletCharacter.quadratic(d)
        assert character_obstruction_class(chi) == quaternion_class(d, -1), d


def test_local_square_class_degree():
    assert local_square_class_degree([1], 5) == 1
    assert local_square_class_degree([1], INFINITY) == 1
    assert local_square_class_degree([6, -6], 2) == 4
    assert local_square_class_degree([-6, -3], 7) == 1  # -6=1, -3=4 mod 7
    assert local_square_class_degree([-6, -3], INFINITY) == 2
    assert local_square_class_degree([2], 7) == 1
    assert local_square_class_degree([2], 5) == 2


def test_splits_over_multiquadratic():
    assert splits_over_multiquadratic(BrauerClass2.trivial(), [])
    assert splits_over_multiquadratic(quaternion_class(2, 3), [6, -6])
    assert not splits_over_multiquadratic(quaternion_class(2, 3), [])
    # Q(sqrt 6) kills (2,3) too: 6 is a nonsquare in both Q_2 and Q_3
    assert splits_over_multiquadratic(quaternion_class(2, 3), [6])
    assert not splits_over_multiquadratic(quaternion_class(-6, -3), [7])


def test_epsilon8_psi16_tables():
    eps = epsilon8()
    assert eps.value_at_minus1() == 1
    assert eps(3) * eps(5) == eps(15)
    assert eps.order() == 2
    psi = psi16()
    assert psi.order() == 4
    assert psi.value_at_minus1() == 1
    # psi^2 agrees with eps at every odd residue
    sq = psi * psi
    for n in (1, 3, 5, 7, 9, 11, 13, 15):
        assert sq(n) == eps(n)


def test_psi16_values():
    from qmkit.characters import I, MINUS_I, MINUS_ONE, ONE
    psi = psi16()
    assert psi(3) == MINUS_I and psi(5) == I
    assert psi(7) == MINUS_ONE and psi(9) == MINUS_ONE
    assert psi(11) == I and psi(13) == MINUS_I
    assert psi(15) == ONE
